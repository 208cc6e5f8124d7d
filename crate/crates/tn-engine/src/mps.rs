use crate::contract::advance_left;
use crate::linalg::{conj2, matmul, reshaped, svd_econ};
use crate::mpo::Mpo;
use crate::TnError;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use clock_algebra::C64;
use model_builder::TermList;
use ndarray::{Array2, Array3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

/// Matrix product state in mixed canonical form.
///
/// `tensors[i]` has axes [left bond, physical, right bond]; sites left of
/// `center` are left isometries, sites right of it right isometries. All
/// methods preserve that bookkeeping.
#[derive(Debug, Clone)]
pub struct Mps {
    pub n: usize,
    pub tensors: Vec<Array3<C64>>,
    pub center: usize,
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"MPSCHK01";
const CHECKPOINT_VERSION: u32 = 1;

fn bond_cap(n: usize, b: usize, sites: usize, m: usize) -> usize {
    let mut left = 1usize;
    for _ in 0..b.min(sites - b) {
        left = left.saturating_mul(n);
        if left >= m {
            return m;
        }
    }
    left.min(m)
}

impl Mps {
    /// Random state with bonds capped at `m`, right-canonicalized and
    /// normalized (center 0).
    pub fn random(n: usize, sites: usize, m: usize, seed: u64) -> Mps {
        assert!(n >= 2 && sites >= 1 && m >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tensors = Vec::with_capacity(sites);
        for i in 0..sites {
            let (dl, dr) = (bond_cap(n, i, sites, m), bond_cap(n, i + 1, sites, m));
            let data: Vec<C64> = (0..dl * n * dr)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            tensors.push(Array3::from_shape_vec((dl, n, dr), data).unwrap());
        }
        let mut psi = Mps { n, tensors, center: sites - 1 };
        psi.canonicalize_right();
        psi
    }

    /// Product basis state |digits[0], digits[1], ...>.
    pub fn basis_state(n: usize, digits: &[usize]) -> Mps {
        assert!(!digits.is_empty());
        let tensors = digits
            .iter()
            .map(|&d| {
                assert!(d < n);
                let mut t = Array3::zeros((1, n, 1));
                t[(0, d, 0)] = C64::new(1.0, 0.0);
                t
            })
            .collect();
        Mps { n, tensors, center: 0 }
    }

    /// Product state from per-site amplitude vectors (normalized per site).
    pub fn product_state(n: usize, amps: &[Vec<C64>]) -> Mps {
        assert!(!amps.is_empty());
        let tensors = amps
            .iter()
            .map(|v| {
                assert_eq!(v.len(), n);
                let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(norm > 0.0, "zero site amplitude vector");
                let mut t = Array3::zeros((1, n, 1));
                for (d, z) in v.iter().enumerate() {
                    t[(0, d, 0)] = z / norm;
                }
                t
            })
            .collect();
        Mps { n, tensors, center: 0 }
    }

    pub fn sites(&self) -> usize {
        self.tensors.len()
    }

    /// Bond dimensions, length sites + 1 (boundaries included).
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.sites() + 1);
        dims.push(self.tensors[0].dim().0);
        for t in &self.tensors {
            dims.push(t.dim().2);
        }
        dims
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap()
    }

    /// Norm of the state, read off the center tensor.
    pub fn norm(&self) -> f64 {
        self.tensors[self.center]
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) {
        let nrm = self.norm();
        assert!(nrm > 0.0, "cannot normalize the zero state");
        self.tensors[self.center].mapv_inplace(|z| z / nrm);
    }

    /// Right-canonicalize everything and move the center to site 0. The state
    /// is normalized.
    pub fn canonicalize_right(&mut self) {
        for i in (1..self.sites()).rev() {
            let (l, p, r) = self.tensors[i].dim();
            let (u, s, vt) = svd_econ(reshaped(self.tensors[i].view(), (l, p * r)).view())
                .expect("SVD failed during canonicalization");
            let k = s.len();
            self.tensors[i] = vt.into_shape((k, p, r)).unwrap();
            let mut carry = u;
            for (j, &sv) in s.iter().enumerate() {
                carry.column_mut(j).mapv_inplace(|z| z * sv);
            }
            let (l0, p0, _) = self.tensors[i - 1].dim();
            let merged = matmul(reshaped(self.tensors[i - 1].view(), (l0 * p0, l)).view(), carry.view());
            self.tensors[i - 1] = merged.into_shape((l0, p0, k)).unwrap();
        }
        self.center = 0;
        self.normalize();
    }

    /// Move the center one site to the right without truncation.
    pub fn move_center_right(&mut self) {
        let c = self.center;
        assert!(c + 1 < self.sites(), "center already at the right edge");
        let (l, p, r) = self.tensors[c].dim();
        let (u, s, vt) = svd_econ(reshaped(self.tensors[c].view(), (l * p, r)).view())
            .expect("SVD failed during center move");
        let k = s.len();
        self.tensors[c] = u.into_shape((l, p, k)).unwrap();
        let mut carry = vt;
        for (j, &sv) in s.iter().enumerate() {
            carry.row_mut(j).mapv_inplace(|z| z * sv);
        }
        let (_, p1, r1) = self.tensors[c + 1].dim();
        let merged = matmul(carry.view(), reshaped(self.tensors[c + 1].view(), (r, p1 * r1)).view());
        self.tensors[c + 1] = merged.into_shape((k, p1, r1)).unwrap();
        self.center = c + 1;
    }

    /// Move the center one site to the left without truncation.
    pub fn move_center_left(&mut self) {
        let c = self.center;
        assert!(c > 0, "center already at the left edge");
        let (l, p, r) = self.tensors[c].dim();
        let (u, s, vt) = svd_econ(reshaped(self.tensors[c].view(), (l, p * r)).view())
            .expect("SVD failed during center move");
        let k = s.len();
        self.tensors[c] = vt.into_shape((k, p, r)).unwrap();
        let mut carry = u;
        for (j, &sv) in s.iter().enumerate() {
            carry.column_mut(j).mapv_inplace(|z| z * sv);
        }
        let (l0, p0, _) = self.tensors[c - 1].dim();
        let merged = matmul(reshaped(self.tensors[c - 1].view(), (l0 * p0, l)).view(), carry.view());
        self.tensors[c - 1] = merged.into_shape((l0, p0, k)).unwrap();
        self.center = c - 1;
    }

    pub fn move_center_to(&mut self, site: usize) {
        assert!(site < self.sites());
        while self.center < site {
            self.move_center_right();
        }
        while self.center > site {
            self.move_center_left();
        }
    }

    /// Largest deviation from the isometry conditions implied by `center`.
    pub fn canonical_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, t) in self.tensors.iter().enumerate() {
            let (l, p, r) = t.dim();
            let g = if i < self.center {
                let a = reshaped(t.view(), (l * p, r));
                matmul(conj2(a.view()).t(), a.view())
            } else if i > self.center {
                let a = reshaped(t.view(), (l, p * r));
                matmul(a.view(), conj2(a.view()).t())
            } else {
                continue;
            };
            let d = g.dim().0;
            for a in 0..d {
                for b in 0..d {
                    let want = if a == b { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                    worst = worst.max((g[(a, b)] - want).norm());
                }
            }
        }
        worst
    }

    /// Dense coefficient vector, site 0 least significant.
    pub fn to_dense_vector(&self, max_dim: usize) -> Result<Vec<C64>, TnError> {
        let n = self.n;
        let mut dim = 1usize;
        for _ in 0..self.sites() {
            dim = dim.saturating_mul(n);
            if dim > max_dim {
                return Err(TnError::Shape(format!(
                    "dense state dimension exceeds limit {max_dim}"
                )));
            }
        }
        let mut t: Array2<C64> = Array2::ones((1, 1));
        let mut d = 1usize;
        for a in &self.tensors {
            let (l, p, r) = a.dim();
            let m = matmul(t.view(), reshaped(a.view(), (l, p * r)).view());
            let m = m.into_shape((d, p, r)).unwrap();
            d *= p;
            t = reshaped(m.view().permuted_axes([1, 0, 2]), (d, r));
        }
        Ok(t.into_raw_vec())
    }

    /// Von Neumann entropy across the bond left of site `cut`.
    pub fn entanglement_entropy(&mut self, cut: usize) -> f64 {
        if cut == 0 || cut >= self.sites() {
            return 0.0;
        }
        self.move_center_to(cut);
        let (l, p, r) = self.tensors[cut].dim();
        let (_, s, _) = svd_econ(reshaped(self.tensors[cut].view(), (l, p * r)).view())
            .expect("SVD failed in entropy");
        let total: f64 = s.iter().map(|x| x * x).sum();
        let mut ent = 0.0;
        for &sv in &s {
            let w = sv * sv / total;
            if w > 1e-300 {
                ent -= w * w.ln();
            }
        }
        ent
    }

    /// Expectation of an MPO, normalized by <psi|psi>.
    pub fn expectation_mpo(&self, mpo: &Mpo) -> C64 {
        assert_eq!(self.n, mpo.n);
        assert_eq!(self.sites(), mpo.sites());
        let mut env = Array3::<C64>::ones((1, 1, 1));
        for (a, w) in self.tensors.iter().zip(&mpo.tensors) {
            env = advance_left(&env, a, w);
        }
        let raw = env[(0, 0, 0)];
        let nrm2 = transfer(self, self).re;
        raw / nrm2
    }

    /// Energy variance <H^2> - <H>^2 via the squared MPO. Intended for short
    /// chains; the squared bond dimension is quadratic in the original.
    pub fn variance_mpo(&self, mpo: &Mpo) -> f64 {
        let h = self.expectation_mpo(mpo);
        let h2 = self.expectation_mpo(&mpo.squared());
        h2.re - h.re * h.re
    }

    /// Expectation of a term list, normalized. Moves the center as needed;
    /// each term costs a transfer over its support window only.
    pub fn expectation_terms(&mut self, terms: &TermList) -> C64 {
        assert_eq!(self.n, terms.n);
        assert_eq!(self.sites(), terms.sites);
        let n = self.n;
        let mut order: Vec<usize> = (0..terms.terms.len()).collect();
        order.sort_by_key(|&t| {
            terms.terms[t]
                .factors
                .first()
                .map(|f| f.site)
                .unwrap_or(0)
        });
        let mut total = C64::new(0.0, 0.0);
        for &ti in &order {
            let term = &terms.terms[ti];
            if term.factors.is_empty() {
                total += term.coeff;
                continue;
            }
            let lo = term.factors[0].site;
            let hi = term.factors[term.factors.len() - 1].site;
            self.move_center_to(lo);
            let nrm2 = self.norm().powi(2);
            let l0 = self.tensors[lo].dim().0;
            let mut env = Array2::<C64>::eye(l0);
            let mut fi = 0usize;
            for i in lo..=hi {
                let a = &self.tensors[i];
                let (l, p, r) = a.dim();
                let mut t = matmul(env.view(), reshaped(a.view(), (l, p * r)).view());
                if fi < term.factors.len() && term.factors[fi].site == i {
                    let m = term.factors[fi].op.matrix(n);
                    fi += 1;
                    let tv = t.into_shape((l, p, r)).unwrap();
                    let tp = reshaped(tv.view().permuted_axes([1, 0, 2]), (p, l * r));
                    let tm = matmul(m.view(), tp.view());
                    let tm = tm.into_shape((p, l, r)).unwrap();
                    t = reshaped(tm.view().permuted_axes([1, 0, 2]), (l * p, r));
                } else {
                    t = t.into_shape((l * p, r)).unwrap();
                }
                let adj = conj2(reshaped(a.view(), (l * p, r)).view());
                env = matmul(adj.t(), t.view());
            }
            let mut tr = C64::new(0.0, 0.0);
            for j in 0..env.dim().0 {
                tr += env[(j, j)];
            }
            total += term.coeff * tr / nrm2;
        }
        total
    }

    /// Persist to a versioned binary checkpoint. `layout_hash` is an opaque
    /// caller token checked on load.
    pub fn save_checkpoint(&self, path: &Path, layout_hash: u64) -> Result<(), TnError> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CHECKPOINT_MAGIC)?;
        w.write_u32::<LittleEndian>(CHECKPOINT_VERSION)?;
        w.write_u64::<LittleEndian>(self.n as u64)?;
        w.write_u64::<LittleEndian>(self.sites() as u64)?;
        w.write_u64::<LittleEndian>(self.center as u64)?;
        w.write_u64::<LittleEndian>(layout_hash)?;
        for t in &self.tensors {
            let (l, p, r) = t.dim();
            w.write_u64::<LittleEndian>(l as u64)?;
            w.write_u64::<LittleEndian>(p as u64)?;
            w.write_u64::<LittleEndian>(r as u64)?;
            for z in t.as_standard_layout().iter() {
                w.write_f64::<LittleEndian>(z.re)?;
                w.write_f64::<LittleEndian>(z.im)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Load a checkpoint, returning the state and the stored layout token.
    pub fn load_checkpoint(path: &Path) -> Result<(Mps, u64), TnError> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(TnError::Checkpoint("bad magic bytes".into()));
        }
        let version = r.read_u32::<LittleEndian>()?;
        if version != CHECKPOINT_VERSION {
            return Err(TnError::Checkpoint(format!("unsupported version {version}")));
        }
        let n = r.read_u64::<LittleEndian>()? as usize;
        let sites = r.read_u64::<LittleEndian>()? as usize;
        let center = r.read_u64::<LittleEndian>()? as usize;
        let layout_hash = r.read_u64::<LittleEndian>()?;
        if n < 2 || sites == 0 || center >= sites {
            return Err(TnError::Checkpoint("inconsistent header".into()));
        }
        let mut tensors = Vec::with_capacity(sites);
        let mut prev_r = 1usize;
        for i in 0..sites {
            let l = r.read_u64::<LittleEndian>()? as usize;
            let p = r.read_u64::<LittleEndian>()? as usize;
            let dr = r.read_u64::<LittleEndian>()? as usize;
            if p != n || l != prev_r {
                return Err(TnError::Checkpoint(format!("bond mismatch at site {i}")));
            }
            let mut data = Vec::with_capacity(l * p * dr);
            for _ in 0..l * p * dr {
                let re = r.read_f64::<LittleEndian>()?;
                let im = r.read_f64::<LittleEndian>()?;
                data.push(C64::new(re, im));
            }
            tensors.push(Array3::from_shape_vec((l, p, dr), data).unwrap());
            prev_r = dr;
        }
        if prev_r != 1 {
            return Err(TnError::Checkpoint("right boundary bond is not 1".into()));
        }
        Ok((Mps { n, tensors, center }, layout_hash))
    }
}

/// Raw (unnormalized) overlap <a|b>.
pub(crate) fn transfer(a: &Mps, b: &Mps) -> C64 {
    let mut env = Array2::<C64>::ones((1, 1));
    for (ta, tb) in a.tensors.iter().zip(&b.tensors) {
        let (la, p, ra) = ta.dim();
        let (lb, _, rb) = tb.dim();
        let t = matmul(env.view(), reshaped(tb.view(), (lb, p * rb)).view());
        let t = t.into_shape((la, p, rb)).unwrap();
        let t = reshaped(t.view(), (la * p, rb));
        let adj = conj2(reshaped(ta.view(), (la * p, ra)).view());
        env = matmul(adj.t(), t.view());
    }
    env[(0, 0)]
}

/// Normalized overlap <a|b> / (|a| |b|).
pub fn overlap(a: &Mps, b: &Mps) -> Result<C64, TnError> {
    if a.n != b.n || a.sites() != b.sites() {
        return Err(TnError::Shape(format!(
            "overlap between incompatible states: n {} vs {}, sites {} vs {}",
            a.n,
            b.n,
            a.sites(),
            b.sites()
        )));
    }
    let raw = transfer(a, b);
    let na = transfer(a, a).re.sqrt();
    let nb = transfer(b, b).re.sqrt();
    Ok(raw / (na * nb))
}
