use crate::linalg::matmul;
use crate::TnError;
use clock_algebra::{C64, CMat};
use model_builder::{LocalOp, TermList};
use ndarray::{Array2, Array4};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Matrix product operator. `tensors[i]` has axes [left bond, right bond,
/// row (out), col (in)]; boundary bonds have dimension 1.
#[derive(Debug, Clone)]
pub struct Mpo {
    pub n: usize,
    pub tensors: Vec<Array4<C64>>,
}

#[derive(Debug, Clone, Copy)]
struct Trans {
    src: u32,
    dst: u32,
    op: Option<LocalOp>,
    w: C64,
}

/// Key used to group transitions: operator kind and canonical power.
fn op_key(op: Option<LocalOp>) -> (u8, i32) {
    match op {
        None => (0, 0),
        Some(LocalOp::Sigma(p)) => (1, p),
        Some(LocalOp::Tau(p)) => (2, p),
        Some(LocalOp::Zeta(p)) => (3, p),
        Some(LocalOp::Eta(p)) => (4, p),
        Some(LocalOp::Electric) => (5, 0),
    }
}

fn op_matrix(n: usize, op: Option<LocalOp>) -> CMat {
    match op {
        None => Array2::eye(n),
        Some(o) => o.matrix(n),
    }
}

struct Automaton {
    sites: usize,
    /// Transitions at site i connect states at cut i to states at cut i+1.
    trans: Vec<Vec<Trans>>,
    /// States per cut, sorted. Ready/final states are pinned and never merged.
    cut_states: Vec<Vec<u32>>,
    ready: Vec<Option<u32>>,
    fin: Vec<Option<u32>>,
}

impl Automaton {
    fn build(terms: &TermList) -> Self {
        let sites = terms.sites;
        let mut next_id: u32 = 0;
        let mut alloc = || {
            let id = next_id;
            next_id += 1;
            id
        };
        let mut cut_states: Vec<Vec<u32>> = vec![Vec::new(); sites + 1];
        let mut ready: Vec<Option<u32>> = vec![None; sites + 1];
        let mut fin: Vec<Option<u32>> = vec![None; sites + 1];
        for b in 0..sites {
            let id = alloc();
            ready[b] = Some(id);
            cut_states[b].push(id);
        }
        for b in 1..=sites {
            let id = alloc();
            fin[b] = Some(id);
            cut_states[b].push(id);
        }
        let mut trans: Vec<Vec<Trans>> = vec![Vec::new(); sites];
        let one = C64::new(1.0, 0.0);
        for i in 0..sites.saturating_sub(1) {
            trans[i].push(Trans { src: ready[i].unwrap(), dst: ready[i + 1].unwrap(), op: None, w: one });
        }
        for i in 1..sites {
            trans[i].push(Trans { src: fin[i].unwrap(), dst: fin[i + 1].unwrap(), op: None, w: one });
        }
        for term in &terms.terms {
            let c = term.coeff;
            if term.factors.is_empty() {
                trans[0].push(Trans { src: ready[0].unwrap(), dst: fin[1].unwrap(), op: None, w: c });
                continue;
            }
            let first = term.factors[0].site;
            let last = term.factors[term.factors.len() - 1].site;
            let mut by_site: Vec<Option<LocalOp>> = vec![None; sites];
            for f in &term.factors {
                by_site[f.site] = Some(f.op);
            }
            let mut src = ready[first].unwrap();
            for i in first..=last {
                let dst = if i == last {
                    fin[i + 1].unwrap()
                } else {
                    let id = alloc();
                    cut_states[i + 1].push(id);
                    id
                };
                let w = if i == first { c } else { one };
                trans[i].push(Trans { src, dst, op: by_site[i], w });
                src = dst;
            }
        }
        for states in &mut cut_states {
            states.sort_unstable();
        }
        Automaton { sites, trans, cut_states, ready, fin }
    }

    /// Sum duplicate (src, dst, op) transitions at one site, dropping exact zeros.
    fn dedup_site(&mut self, i: usize) {
        let mut acc: BTreeMap<(u32, u32, (u8, i32)), C64> = BTreeMap::new();
        for t in &self.trans[i] {
            *acc.entry((t.src, t.dst, op_key(t.op))).or_insert(C64::new(0.0, 0.0)) += t.w;
        }
        let mut out = Vec::with_capacity(acc.len());
        for t in &self.trans[i] {
            let key = (t.src, t.dst, op_key(t.op));
            if let Some(w) = acc.remove(&key) {
                if w != C64::new(0.0, 0.0) {
                    out.push(Trans { w, ..*t });
                }
            }
        }
        self.trans[i] = out;
    }

    fn is_pinned(&self, b: usize, q: u32) -> bool {
        self.ready[b] == Some(q) || self.fin[b] == Some(q)
    }

    /// Merge states at cut `b` whose incoming (dir = left-to-right) or
    /// outgoing (dir = right-to-left) transition bundles are proportional.
    /// The relative scalar is pushed to the opposite side, so the weighted
    /// path sums are preserved exactly.
    fn merge_cut(&mut self, b: usize, incoming: bool) -> bool {
        if b == 0 || b == self.sites {
            return false;
        }
        let site = if incoming { b - 1 } else { b };
        type Sig = Vec<((u8, i32), u32)>;
        let mut bundles: BTreeMap<u32, (Sig, Vec<C64>)> = BTreeMap::new();
        for &q in &self.cut_states[b] {
            if self.is_pinned(b, q) {
                continue;
            }
            let mut items: Vec<((u8, i32), u32, C64)> = self.trans[site]
                .iter()
                .filter(|t| if incoming { t.dst == q } else { t.src == q })
                .map(|t| (op_key(t.op), if incoming { t.src } else { t.dst }, t.w))
                .collect();
            items.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            if items.is_empty() {
                continue;
            }
            let sig: Sig = items.iter().map(|&(k, o, _)| (k, o)).collect();
            let ws: Vec<C64> = items.iter().map(|&(_, _, w)| w).collect();
            bundles.insert(q, (sig, ws));
        }
        let mut groups: BTreeMap<Sig, Vec<u32>> = BTreeMap::new();
        for (&q, (sig, _)) in &bundles {
            groups.entry(sig.clone()).or_default().push(q);
        }
        let mut replace: Vec<(u32, u32, C64)> = Vec::new(); // (absorbed, kept, ratio)
        for members in groups.values() {
            let mut reps: Vec<u32> = Vec::new();
            'outer: for &q in members {
                let wq = &bundles[&q].1;
                for &r in &reps {
                    let wr = &bundles[&r].1;
                    let rho = wq[0] / wr[0];
                    let ok = wq.iter().zip(wr).all(|(a, b)| {
                        let expect = rho * b;
                        (a - expect).norm() <= 1e-12 * (a.norm() + expect.norm()).max(1e-300)
                    });
                    if ok {
                        replace.push((q, r, rho));
                        continue 'outer;
                    }
                }
                reps.push(q);
            }
        }
        if replace.is_empty() {
            return false;
        }
        for &(q, r, rho) in &replace {
            if incoming {
                // Drop q's incoming (redundant with r's); rescale and re-source
                // q's outgoing.
                self.trans[b - 1].retain(|t| t.dst != q);
                for t in self.trans[b].iter_mut() {
                    if t.src == q {
                        t.src = r;
                        t.w *= rho;
                    }
                }
            } else {
                self.trans[b].retain(|t| t.src != q);
                for t in self.trans[b - 1].iter_mut() {
                    if t.dst == q {
                        t.dst = r;
                        t.w *= rho;
                    }
                }
            }
            self.cut_states[b].retain(|&s| s != q);
        }
        if b > 0 {
            self.dedup_site(b - 1);
        }
        if b < self.sites {
            self.dedup_site(b);
        }
        true
    }

    /// Drop interior states with no incoming or no outgoing transitions.
    fn prune_dead(&mut self) {
        loop {
            let mut removed = false;
            for b in 1..self.sites {
                let keep: Vec<u32> = self.cut_states[b]
                    .iter()
                    .copied()
                    .filter(|&q| {
                        if self.is_pinned(b, q) {
                            return true;
                        }
                        let has_in = self.trans[b - 1].iter().any(|t| t.dst == q);
                        let has_out = self.trans[b].iter().any(|t| t.src == q);
                        has_in && has_out
                    })
                    .collect();
                if keep.len() != self.cut_states[b].len() {
                    let dead: Vec<u32> = self.cut_states[b]
                        .iter()
                        .copied()
                        .filter(|q| !keep.contains(q))
                        .collect();
                    self.trans[b - 1].retain(|t| !dead.contains(&t.dst));
                    self.trans[b].retain(|t| !dead.contains(&t.src));
                    self.cut_states[b] = keep;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
    }
}

/// Compile a term list into an MPO.
///
/// Each term becomes a path in a weighted automaton between the ready and
/// final chains; states at a cut with proportional transition bundles are
/// merged (scalar pushed across), which collapses families of strings that
/// differ only in overall coefficient to one bond channel per cut. The result
/// is deterministic for a given term list.
pub fn compile_mpo(terms: &TermList) -> Mpo {
    assert!(terms.sites >= 1, "MPO needs at least one site");
    let mut fsm = Automaton::build(terms);
    for i in 0..fsm.sites {
        fsm.dedup_site(i);
    }
    loop {
        let mut changed = false;
        for b in (1..fsm.sites).rev() {
            changed |= fsm.merge_cut(b, false);
        }
        for b in 1..fsm.sites {
            changed |= fsm.merge_cut(b, true);
        }
        if !changed {
            break;
        }
    }
    fsm.prune_dead();
    let n = terms.n;
    let mut index: Vec<BTreeMap<u32, usize>> = Vec::with_capacity(fsm.sites + 1);
    for b in 0..=fsm.sites {
        let mut order: Vec<u32> = Vec::new();
        if let Some(r) = fsm.ready[b] {
            order.push(r);
        }
        for &q in &fsm.cut_states[b] {
            if !fsm.is_pinned(b, q) {
                order.push(q);
            }
        }
        if let Some(f) = fsm.fin[b] {
            order.push(f);
        }
        index.push(order.iter().enumerate().map(|(i, &q)| (q, i)).collect());
    }
    let mut tensors = Vec::with_capacity(fsm.sites);
    for i in 0..fsm.sites {
        let (dl, dr) = (index[i].len(), index[i + 1].len());
        let mut w = Array4::<C64>::zeros((dl, dr, n, n));
        for t in &fsm.trans[i] {
            let (si, di) = (index[i][&t.src], index[i + 1][&t.dst]);
            let m = op_matrix(n, t.op);
            for r in 0..n {
                for c in 0..n {
                    w[(si, di, r, c)] += t.w * m[(r, c)];
                }
            }
        }
        tensors.push(w);
    }
    Mpo { n, tensors }
}

impl Mpo {
    pub fn sites(&self) -> usize {
        self.tensors.len()
    }

    /// Bond dimensions, length sites + 1 (boundaries included).
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.tensors.len() + 1);
        dims.push(self.tensors[0].dim().0);
        for t in &self.tensors {
            dims.push(t.dim().1);
        }
        dims
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap()
    }

    /// Dense matrix over the full product basis (site 0 least significant).
    /// Guarded by `max_dim`; intended for small cross-checks.
    pub fn to_dense(&self, max_dim: usize) -> Result<CMat, TnError> {
        let sites = self.sites();
        let n = self.n;
        let mut dim = 1usize;
        for _ in 0..sites {
            dim = dim.saturating_mul(n);
        }
        if dim > max_dim {
            return Err(TnError::Shape(format!(
                "dense MPO dimension {dim} exceeds limit {max_dim}"
            )));
        }
        // t: [d_out, d_in, bond], d = little-endian digits of sites 0..i.
        let mut t: Array2<C64> = Array2::ones((1, 1));
        let mut d = 1usize;
        for w in &self.tensors {
            let (wl, wr, _, _) = w.dim();
            // rows (d_out * d_in), cols wl -> multiply W viewed (wl, n*n*wr).
            let wmat = w
                .view()
                .permuted_axes([0, 2, 3, 1])
                .as_standard_layout()
                .to_owned()
                .into_shape((wl, n * n * wr))
                .unwrap();
            let m = matmul(t.view(), wmat.view());
            // m rows (d_out, d_in), cols (p_out, p_in, wr); new digit is most
            // significant within the grown block.
            let m5 = m.into_shape((d, d, n, n, wr)).unwrap();
            let m5 = m5.permuted_axes([2, 0, 3, 1, 4]);
            let flat = m5.as_standard_layout().to_owned();
            d *= n;
            t = flat.into_shape((d * d, wr)).unwrap();
        }
        let t = t.into_shape((d, d)).unwrap();
        Ok(t)
    }

    /// Maximum deviation between MPO and term-list matrix elements over
    /// random product states, relative to the largest element seen.
    pub fn stochastic_check(&self, terms: &TermList, samples: usize, seed: u64) -> f64 {
        assert_eq!(self.n, terms.n);
        assert_eq!(self.sites(), terms.sites);
        let n = self.n;
        let sites = self.sites();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_product = |rng: &mut ChaCha8Rng| -> Vec<Vec<C64>> {
            (0..sites)
                .map(|_| {
                    let mut v: Vec<C64> = (0..n)
                        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                        .collect();
                    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    v.iter_mut().for_each(|z| *z /= norm);
                    v
                })
                .collect()
        };
        let mut worst = 0.0f64;
        let mut scale = 1.0f64;
        for _ in 0..samples {
            let bra = random_product(&mut rng);
            let ket = random_product(&mut rng);
            // MPO side: transfer vector over bond states.
            let mut v = vec![C64::new(1.0, 0.0)];
            for (i, w) in self.tensors.iter().enumerate() {
                let (wl, wr, _, _) = w.dim();
                let mut elem = Array2::<C64>::zeros((wl, wr));
                for a in 0..wl {
                    for b in 0..wr {
                        let mut acc = C64::new(0.0, 0.0);
                        for r in 0..n {
                            for c in 0..n {
                                acc += bra[i][r].conj() * w[(a, b, r, c)] * ket[i][c];
                            }
                        }
                        elem[(a, b)] = acc;
                    }
                }
                let mut next = vec![C64::new(0.0, 0.0); wr];
                for a in 0..wl {
                    for b in 0..wr {
                        next[b] += v[a] * elem[(a, b)];
                    }
                }
                v = next;
            }
            let mpo_val = v[0];
            // Term-list side: product of single-site matrix elements, with
            // plain overlaps on sites a term does not touch.
            let overlaps: Vec<C64> = (0..sites)
                .map(|i| (0..n).map(|p| bra[i][p].conj() * ket[i][p]).sum())
                .collect();
            let mut term_val = C64::new(0.0, 0.0);
            for term in &terms.terms {
                let mut elem: Vec<C64> = overlaps.clone();
                for f in &term.factors {
                    let m = f.op.matrix(n);
                    let mut acc = C64::new(0.0, 0.0);
                    for r in 0..n {
                        for c in 0..n {
                            acc += bra[f.site][r].conj() * m[(r, c)] * ket[f.site][c];
                        }
                    }
                    elem[f.site] = acc;
                }
                term_val += term.coeff * elem.iter().product::<C64>();
            }
            worst = worst.max((mpo_val - term_val).norm());
            scale = scale.max(term_val.norm());
        }
        worst / scale
    }

    /// Square the operator: bond dimensions multiply. Used for variance
    /// estimates on short chains.
    pub fn squared(&self) -> Mpo {
        let n = self.n;
        let tensors = self
            .tensors
            .iter()
            .map(|w| {
                let (al, ar, _, _) = w.dim();
                let mut out = Array4::<C64>::zeros((al * al, ar * ar, n, n));
                for a1 in 0..al {
                    for b1 in 0..ar {
                        for a2 in 0..al {
                            for b2 in 0..ar {
                                for r in 0..n {
                                    for c in 0..n {
                                        let mut acc = C64::new(0.0, 0.0);
                                        for q in 0..n {
                                            acc += w[(a1, b1, r, q)] * w[(a2, b2, q, c)];
                                        }
                                        out[(a1 * al + a2, b1 * ar + b2, r, c)] += acc;
                                    }
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        Mpo { n, tensors }
    }
}
