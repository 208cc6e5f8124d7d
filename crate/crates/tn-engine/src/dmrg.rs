use crate::contract::{advance_left, advance_right};
use crate::linalg::{conj2, matmul, reshaped, svd_econ};
use crate::mpo::Mpo;
use crate::mps::Mps;
use crate::TnError;
use clock_algebra::C64;
use ed_engine::{eigh, lanczos_best_effort_from, HamOp, LanczosParams};
use ndarray::{Array2, Array3, Array4, ArrayView2};

/// One sweep's worth of truncation policy.
#[derive(Debug, Clone, Copy)]
pub struct SweepStage {
    pub max_bond: usize,
    /// Density-matrix perturbation weight; 0 switches to plain SVD splits.
    pub noise: f64,
    /// Relative residual tolerance for the local eigensolver.
    pub solver_tol: f64,
}

#[derive(Debug, Clone)]
pub struct DmrgParams {
    /// One entry per sweep; the last entry repeats until convergence and must
    /// have zero noise.
    pub schedule: Vec<SweepStage>,
    /// Relative energy change between successive final-stage sweeps.
    pub energy_tol: f64,
    pub max_sweeps: usize,
}

impl DmrgParams {
    /// Bond-ramped default: noisy warmup sweeps, then plain SVD sweeps at
    /// full bond until the energy settles.
    pub fn staged(max_bond: usize, energy_tol: f64) -> DmrgParams {
        assert!(max_bond >= 1 && energy_tol > 0.0);
        let ramp: [(usize, f64); 4] = [
            (max_bond.min(8).max(2), 1e-3),
            (max_bond.min(24), 1e-4),
            (max_bond.min(64), 1e-6),
            (max_bond, 0.0),
        ];
        let mut schedule: Vec<SweepStage> = Vec::new();
        for &(m, noise) in &ramp {
            let solver_tol = if noise > 0.0 {
                1e-6
            } else {
                (energy_tol * 0.1).clamp(1e-12, 1e-8)
            };
            if let Some(last) = schedule.last() {
                if last.max_bond == m && last.noise == noise {
                    continue;
                }
            }
            schedule.push(SweepStage { max_bond: m, noise, solver_tol });
        }
        DmrgParams { schedule, energy_tol, max_sweeps: 64 }
    }

    fn validate(&self) {
        assert!(!self.schedule.is_empty(), "empty sweep schedule");
        for s in &self.schedule {
            assert!(s.max_bond >= 1, "stage bond must be at least 1");
            assert!(s.solver_tol > 0.0, "solver tolerance must be positive");
            assert!(s.noise >= 0.0, "noise must be non-negative");
        }
        assert!(
            self.schedule.last().unwrap().noise == 0.0,
            "final stage must be noiseless"
        );
        assert!(self.energy_tol > 0.0, "energy tolerance must be positive");
        assert!(self.max_sweeps >= 1);
    }
}

#[derive(Debug, Clone)]
pub struct DmrgResult {
    pub mps: Mps,
    pub energy: f64,
    /// Sweep energies, one per completed sweep.
    pub energy_history: Vec<f64>,
    /// Largest discarded bond weight per sweep.
    pub trunc_history: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Two-site effective Hamiltonian: left env, two MPO tensors, right env.
struct EffectiveHam {
    l: usize,
    p: usize,
    r: usize,
    lmat: Array2<C64>,  // (l' * w1, l)
    w1p: Array2<C64>,   // (w1 * p_in, wm * p_out)
    w2p: Array2<C64>,   // (wm * p_in, wr * p_out)
    rmat: Array2<C64>,  // (wr * r, r')
    w1: usize,
    wm: usize,
    wr: usize,
}

impl EffectiveHam {
    fn new(left: &Array3<C64>, wa: &Array4<C64>, wb: &Array4<C64>, right: &Array3<C64>) -> EffectiveHam {
        let (lb, w1, lk) = left.dim();
        assert_eq!(lb, lk);
        let (w1a, wm, p, _) = wa.dim();
        assert_eq!(w1, w1a);
        let (wmb, wr, _, _) = wb.dim();
        assert_eq!(wm, wmb);
        let (rb, wrr, rk) = right.dim();
        assert_eq!(rb, rk);
        assert_eq!(wr, wrr);
        EffectiveHam {
            l: lk,
            p,
            r: rk,
            lmat: reshaped(left.view(), (lb * w1, lk)),
            w1p: reshaped(wa.view().permuted_axes([0, 3, 1, 2]), (w1 * p, wm * p)),
            w2p: reshaped(wb.view().permuted_axes([0, 3, 1, 2]), (wm * p, wr * p)),
            rmat: reshaped(right.view().permuted_axes([1, 2, 0]), (wr * rk, rb)),
            w1,
            wm,
            wr,
        }
    }

    /// Left half of the product: L W1 applied to theta, rows (l', p1'),
    /// columns (wm, p2, r). Doubles as the density-matrix noise vector.
    fn left_half(&self, x: &[C64]) -> Array2<C64> {
        let (l, p, r) = (self.l, self.p, self.r);
        let x1 = ArrayView2::from_shape((l, p * p * r), x).unwrap();
        let t1 = matmul(self.lmat.view(), x1);
        let t1 = t1.into_shape((l, self.w1, p, p, r)).unwrap();
        let t1 = reshaped(t1.view().permuted_axes([0, 3, 4, 1, 2]), (l * p * r, self.w1 * p));
        let t2 = matmul(t1.view(), self.w1p.view());
        let t2 = t2.into_shape((l, p, r, self.wm, p)).unwrap();
        // (l', p2, r, wm, p1') -> rows (l', p1'), cols (wm, p2, r)
        reshaped(t2.view().permuted_axes([0, 4, 3, 1, 2]), (l * p, self.wm * p * r))
    }

    /// Right half: W2 R applied to theta, rows (p2', r'), cols (wm, l, p1).
    fn right_half(&self, x: &[C64]) -> Array2<C64> {
        let (l, p, r) = (self.l, self.p, self.r);
        let x1 = ArrayView2::from_shape((l * p * p, r), x).unwrap();
        // rmat rows are (wr, r_ket); regroup to (r_ket, wr * r_bra).
        let rp = reshaped(self.rmat.view(), (self.wr, r, r));
        let rp = reshaped(rp.view().permuted_axes([1, 0, 2]), (r, self.wr * r));
        let t1 = matmul(x1, rp.view());
        let t1 = t1.into_shape((l, p, p, self.wr, r)).unwrap();
        let t1 = reshaped(t1.view().permuted_axes([0, 1, 4, 3, 2]), (l * p * r, self.wr * p));
        let w2q = reshaped(
            self.w2p
                .view()
                .into_shape((self.wm, p, self.wr, p))
                .unwrap()
                .permuted_axes([2, 1, 0, 3]),
            (self.wr * p, self.wm * p),
        );
        let t2 = matmul(t1.view(), w2q.view());
        let t2 = t2.into_shape((l, p, r, self.wm, p)).unwrap();
        // (l, p1, r', wm, p2') -> rows (p2', r'), cols (wm, l, p1)
        reshaped(t2.view().permuted_axes([4, 2, 3, 0, 1]), (p * r, self.wm * l * p))
    }
}

impl HamOp for EffectiveHam {
    fn dim(&self) -> usize {
        self.l * self.p * self.p * self.r
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let (l, p, r) = (self.l, self.p, self.r);
        let t2 = self.left_half(x);
        // rows (l', p1'), cols (wm, p2, r) -> rows (l', p1', r), cols (wm, p2)
        let t2 = t2.into_shape((l, p, self.wm, p, r)).unwrap();
        let t2 = reshaped(t2.view().permuted_axes([0, 1, 4, 2, 3]), (l * p * r, self.wm * p));
        let t3 = matmul(t2.view(), self.w2p.view());
        let t3 = t3.into_shape((l, p, r, self.wr, p)).unwrap();
        let t3 = reshaped(t3.view().permuted_axes([0, 1, 4, 3, 2]), (l * p * p, self.wr * r));
        let t4 = matmul(t3.view(), self.rmat.view());
        let flat = t4.as_slice().unwrap();
        y.copy_from_slice(flat);
    }
}

enum Dir {
    Right,
    Left,
}

struct Sweeper<'a> {
    mpo: &'a Mpo,
    mps: Mps,
    lefts: Vec<Option<Array3<C64>>>,
    rights: Vec<Option<Array3<C64>>>,
    seed: u64,
}

impl<'a> Sweeper<'a> {
    fn new(mpo: &'a Mpo, m0: usize, seed: u64) -> Sweeper<'a> {
        let sites = mpo.sites();
        let mps = Mps::random(mpo.n, sites, m0, seed);
        let mut lefts: Vec<Option<Array3<C64>>> = vec![None; sites + 1];
        let mut rights: Vec<Option<Array3<C64>>> = vec![None; sites + 1];
        lefts[0] = Some(Array3::ones((1, 1, 1)));
        rights[sites] = Some(Array3::ones((1, 1, 1)));
        let mut sw = Sweeper { mpo, mps, lefts, rights, seed };
        for i in (1..sites).rev() {
            sw.rights[i] = Some(advance_right(
                sw.rights[i + 1].as_ref().unwrap(),
                &sw.mps.tensors[i],
                &sw.mpo.tensors[i],
            ));
        }
        sw
    }

    /// Solve the two-site problem on bond (i, i+1), truncate in `dir`, and
    /// refresh the environment that the next bond needs. Returns the Ritz
    /// energy and the discarded weight.
    fn optimize_bond(&mut self, i: usize, dir: Dir, stage: &SweepStage, tag: u64) -> (f64, f64) {
        let (l, p, _) = self.mps.tensors[i].dim();
        let (_, _, r) = self.mps.tensors[i + 1].dim();
        let bond = self.mps.tensors[i].dim().2;
        let theta0 = matmul(
            reshaped(self.mps.tensors[i].view(), (l * p, bond)).view(),
            reshaped(self.mps.tensors[i + 1].view(), (bond, p * r)).view(),
        );
        let eff = EffectiveHam::new(
            self.lefts[i].as_ref().expect("left env missing"),
            &self.mpo.tensors[i],
            &self.mpo.tensors[i + 1],
            self.rights[i + 2].as_ref().expect("right env missing"),
        );
        let params = LanczosParams {
            k: 1,
            tol: stage.solver_tol,
            max_iters: 120,
            window: 18,
            seed: self.seed ^ tag,
        };
        let res = lanczos_best_effort_from(&eff, &params, Some(theta0.as_slice().unwrap()))
            .expect("local eigensolve failed");
        let energy = res.eigenvalues[0];
        let theta = &res.vectors[0];
        let disc = self.split(i, theta, &eff, dir, stage);
        (energy, disc)
    }

    fn split(&mut self, i: usize, theta: &[C64], eff: &EffectiveHam, dir: Dir, stage: &SweepStage) -> f64 {
        let (l, p, r) = (eff.l, eff.p, eff.r);
        let tmat = ArrayView2::from_shape((l * p, p * r), theta).unwrap();
        let disc;
        match dir {
            Dir::Right => {
                let (new_a, carry, d) = if stage.noise > 0.0 {
                    let phi = eff.left_half(theta);
                    split_density(tmat, Some(phi.view()), stage)
                } else {
                    split_svd_left(tmat, stage)
                };
                disc = d;
                let k = new_a.dim().1;
                self.mps.tensors[i] = new_a.into_shape((l, p, k)).unwrap();
                let mut c = carry;
                normalize_mat(&mut c);
                self.mps.tensors[i + 1] = c.into_shape((k, p, r)).unwrap();
                self.mps.center = i + 1;
                self.lefts[i + 1] = Some(advance_left(
                    self.lefts[i].as_ref().unwrap(),
                    &self.mps.tensors[i],
                    &self.mpo.tensors[i],
                ));
            }
            Dir::Left => {
                let (new_b, carry, d) = if stage.noise > 0.0 {
                    let phi = eff.right_half(theta);
                    split_density_right(tmat, Some(phi.view()), stage)
                } else {
                    split_svd_right(tmat, stage)
                };
                disc = d;
                let k = new_b.dim().0;
                self.mps.tensors[i + 1] = new_b.into_shape((k, p, r)).unwrap();
                let mut c = carry;
                normalize_mat(&mut c);
                self.mps.tensors[i] = c.into_shape((l, p, k)).unwrap();
                self.mps.center = i;
                self.rights[i + 1] = Some(advance_right(
                    self.rights[i + 2].as_ref().unwrap(),
                    &self.mps.tensors[i + 1],
                    &self.mpo.tensors[i + 1],
                ));
            }
        }
        disc
    }
}

fn normalize_mat(m: &mut Array2<C64>) {
    let nrm: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        m.mapv_inplace(|z| z / nrm);
    }
}

/// Plain SVD split keeping the left factor isometric. Returns (A, S V^dag,
/// discarded weight).
fn split_svd_left(tmat: ArrayView2<C64>, stage: &SweepStage) -> (Array2<C64>, Array2<C64>, f64) {
    let (u, s, vt) = svd_econ(tmat).expect("SVD failed in bond split");
    let (keep, disc) = kept_count(&s, stage.max_bond);
    let a = u.slice(ndarray::s![.., ..keep]).to_owned();
    let mut carry = vt.slice(ndarray::s![..keep, ..]).to_owned();
    for (j, &sv) in s[..keep].iter().enumerate() {
        carry.row_mut(j).mapv_inplace(|z| z * sv);
    }
    (a, carry, disc)
}

/// Plain SVD split keeping the right factor isometric. Returns (B, U S,
/// discarded weight).
fn split_svd_right(tmat: ArrayView2<C64>, stage: &SweepStage) -> (Array2<C64>, Array2<C64>, f64) {
    let (u, s, vt) = svd_econ(tmat).expect("SVD failed in bond split");
    let (keep, disc) = kept_count(&s, stage.max_bond);
    let b = vt.slice(ndarray::s![..keep, ..]).to_owned();
    let mut carry = u.slice(ndarray::s![.., ..keep]).to_owned();
    for (j, &sv) in s[..keep].iter().enumerate() {
        carry.column_mut(j).mapv_inplace(|z| z * sv);
    }
    (b, carry, disc)
}

fn kept_count(s: &[f64], max_bond: usize) -> (usize, f64) {
    let total: f64 = s.iter().map(|x| x * x).sum();
    let floor = s.first().copied().unwrap_or(0.0) * 1e-14;
    let significant = s.iter().take_while(|&&x| x > floor).count().max(1);
    let keep = significant.min(max_bond);
    let disc: f64 = s[keep..].iter().map(|x| x * x).sum();
    (keep, if total > 0.0 { disc / total } else { 0.0 })
}

/// Density-matrix split with White-style noise, left factor isometric.
fn split_density(
    tmat: ArrayView2<C64>,
    phi: Option<ndarray::ArrayView2<C64>>,
    stage: &SweepStage,
) -> (Array2<C64>, Array2<C64>, f64) {
    let rho = density_with_noise(tmat, phi, stage.noise, false);
    let (vals, vecs) = eigh(&rho).expect("density matrix diagonalization failed");
    let (cols, disc) = top_columns(&vals, vecs.dim().0, stage.max_bond);
    let mut a = Array2::zeros((rho.dim().0, cols.len()));
    for (j, &c) in cols.iter().enumerate() {
        a.column_mut(j).assign(&vecs.column(c));
    }
    let carry = matmul(conj2(a.view()).t(), tmat);
    (a, carry, disc)
}

/// Density-matrix split with noise fed from the right half, right factor
/// isometric.
fn split_density_right(
    tmat: ArrayView2<C64>,
    phi: Option<ndarray::ArrayView2<C64>>,
    stage: &SweepStage,
) -> (Array2<C64>, Array2<C64>, f64) {
    let rho = density_with_noise(tmat, phi, stage.noise, true);
    let (vals, vecs) = eigh(&rho).expect("density matrix diagonalization failed");
    let (cols, disc) = top_columns(&vals, vecs.dim().0, stage.max_bond);
    let mut u = Array2::zeros((rho.dim().0, cols.len()));
    for (j, &c) in cols.iter().enumerate() {
        u.column_mut(j).assign(&vecs.column(c));
    }
    let b = conj2(u.view()).t().to_owned();
    let carry = matmul(tmat, u.view());
    (b, carry, disc)
}

/// rho = theta theta^dag (+ scaled phi phi^dag), over rows if `right` is
/// false, over columns otherwise. The noise block is rescaled so its trace is
/// `noise` relative to the state's.
fn density_with_noise(
    tmat: ArrayView2<C64>,
    phi: Option<ndarray::ArrayView2<C64>>,
    noise: f64,
    right: bool,
) -> Array2<C64> {
    let mut rho = if right {
        matmul(conj2(tmat).t(), tmat)
    } else {
        matmul(tmat, conj2(tmat).t())
    };
    if let Some(phi) = phi {
        let tr_theta: f64 = tmat.iter().map(|z| z.norm_sqr()).sum();
        let tr_phi: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
        if tr_phi > 0.0 && noise > 0.0 {
            let scale = noise * tr_theta / tr_phi;
            let noise_rho = matmul(phi, conj2(phi).t());
            rho = rho + noise_rho.mapv(|z| z * scale);
        }
    }
    // Symmetrize against roundoff before the Hermitian solver.
    let rho_h = conj2(rho.view()).t().to_owned();
    (rho + rho_h).mapv(|z| z * 0.5)
}

fn top_columns(vals: &[f64], dim: usize, max_bond: usize) -> (Vec<usize>, f64) {
    let total: f64 = vals.iter().map(|&v| v.max(0.0)).sum();
    let keep = dim.min(max_bond).max(1);
    let cols: Vec<usize> = (0..dim).rev().take(keep).collect();
    let kept: f64 = cols.iter().map(|&c| vals[c].max(0.0)).sum();
    let disc = if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 };
    (cols, disc)
}

fn run(mpo: &Mpo, params: &DmrgParams, seed: u64) -> Result<DmrgResult, TnError> {
    params.validate();
    let sites = mpo.sites();
    assert!(sites >= 2, "two-site sweeps need at least two sites");
    let m0 = params.schedule[0].max_bond;
    let mut sw = Sweeper::new(mpo, m0, seed);
    let mut energy_history = Vec::new();
    let mut trunc_history = Vec::new();
    let mut final_energies: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    for sweep in 0..params.max_sweeps {
        let stage = params.schedule[sweep.min(params.schedule.len() - 1)];
        let mut sweep_trunc = 0.0f64;
        let mut last_e = f64::NAN;
        for i in 0..sites - 1 {
            let tag = (sweep as u64) << 32 | (i as u64) << 1;
            let (e, d) = sw.optimize_bond(i, Dir::Right, &stage, tag);
            sweep_trunc = sweep_trunc.max(d);
            last_e = e;
        }
        for i in (0..sites - 1).rev() {
            let tag = (sweep as u64) << 32 | (i as u64) << 1 | 1;
            let (e, d) = sw.optimize_bond(i, Dir::Left, &stage, tag);
            sweep_trunc = sweep_trunc.max(d);
            last_e = e;
        }
        energy_history.push(last_e);
        trunc_history.push(sweep_trunc);
        sweeps = sweep + 1;
        if sweep + 1 >= params.schedule.len() {
            final_energies.push(last_e);
            if final_energies.len() >= 2 {
                let prev = final_energies[final_energies.len() - 2];
                if (last_e - prev).abs() <= params.energy_tol * last_e.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
        }
    }
    let energy = *energy_history.last().unwrap();
    let mut mps = sw.mps;
    mps.normalize();
    Ok(DmrgResult { mps, energy, energy_history, trunc_history, sweeps, converged })
}

/// Ground-state search; non-convergence is an error carrying the partial
/// result (history included) for inspection.
pub fn dmrg_ground(mpo: &Mpo, params: &DmrgParams, seed: u64) -> Result<DmrgResult, TnError> {
    let res = run(mpo, params, seed)?;
    if res.converged {
        Ok(res)
    } else {
        Err(TnError::NonConverged(Box::new(res)))
    }
}

/// Same sweep loop, but a result that ran out of sweeps is returned with
/// `converged = false` instead of erroring.
pub fn dmrg_best_effort(mpo: &Mpo, params: &DmrgParams, seed: u64) -> Result<DmrgResult, TnError> {
    run(mpo, params, seed)
}
