use crate::C64;
use clock_algebra::{electric_branch, omega_pow};
use model_builder::{SiteDigits, TermList};

/// Linear operator on the field basis, applied matrix-free.
pub trait HamOp: Sync {
    fn dim(&self) -> usize;
    /// y = H x. Implementations must overwrite y entirely.
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

/// Purely off-diagonal term whose amplitude is a constant: inverse digit
/// shifts plus one coefficient.
struct PermTerm {
    coeff: C64,
    shifts: Vec<(usize, u32)>,
}

/// Off-diagonal term whose amplitude depends on the source digits.
struct MixedTerm {
    coeff: C64,
    shifts: Vec<(usize, u32)>,
    phases: Vec<(usize, u32)>,
    electric: Vec<usize>,
}

/// A term list compiled for repeated application. Diagonal terms (no digit
/// shifts) are merged into one precomputed vector; shift-only terms become
/// permutations with constant amplitude; the rest evaluate their phase on
/// the source digits. Written in gather form: every output entry is owned
/// by exactly one loop iteration, so the parallel split over output chunks
/// is deterministic and bitwise identical to the sequential path.
pub struct TermListOp {
    dim: usize,
    n: usize,
    digits: SiteDigits,
    diag: Option<Vec<C64>>,
    perms: Vec<PermTerm>,
    mixed: Vec<MixedTerm>,
    omega_table: Vec<C64>,
    branch_table: Vec<f64>,
}

impl TermListOp {
    pub fn new(terms: &TermList) -> TermListOp {
        let dim = terms
            .dim_checked()
            .expect("Hilbert dimension overflows usize");
        let n = terms.n;
        let digits = SiteDigits::new(n, terms.sites);
        let omega_table: Vec<C64> = (0..n).map(|k| omega_pow(n, k as i64)).collect();
        let branch_table: Vec<f64> = (0..n).map(|m| electric_branch(m, n) as f64).collect();

        let mut diag_terms = Vec::new();
        let mut perms = Vec::new();
        let mut mixed = Vec::new();
        for ct in terms.compiled() {
            if ct.shifts.is_empty() {
                diag_terms.push(ct);
            } else if ct.phases.is_empty() && ct.electric.is_empty() {
                perms.push(PermTerm { coeff: ct.coeff, shifts: ct.shifts });
            } else {
                mixed.push(MixedTerm {
                    coeff: ct.coeff,
                    shifts: ct.shifts,
                    phases: ct.phases,
                    electric: ct.electric,
                });
            }
        }
        let diag = if diag_terms.is_empty() {
            None
        } else {
            let mut d = vec![C64::new(0.0, 0.0); dim];
            for ct in &diag_terms {
                for (i, di) in d.iter_mut().enumerate() {
                    let (tgt, amp) = ct.apply_index(i, &digits);
                    debug_assert_eq!(tgt, i);
                    *di += amp;
                }
            }
            Some(d)
        };
        TermListOp { dim, n, digits, diag, perms, mixed, omega_table, branch_table }
    }

    /// Source index whose image under the term's digit shifts is `out`.
    #[inline]
    fn source_of(&self, out: usize, shifts: &[(usize, u32)]) -> usize {
        let n = self.n;
        let mut src = out;
        for &(site, a) in shifts {
            let stride = self.digits.strides[site];
            let m = (out / stride) % n;
            let m_src = (m + a as usize) % n;
            src = src - m * stride + m_src * stride;
        }
        src
    }

    #[inline]
    fn eval_out(&self, out: usize, x: &[C64]) -> C64 {
        let mut acc = match &self.diag {
            Some(d) => d[out] * x[out],
            None => C64::new(0.0, 0.0),
        };
        for p in &self.perms {
            let src = self.source_of(out, &p.shifts);
            acc += p.coeff * x[src];
        }
        for t in &self.mixed {
            let src = self.source_of(out, &t.shifts);
            let mut phase_exp = 0usize;
            for &(site, b) in &t.phases {
                phase_exp += self.digits.digit(src, site) * b as usize;
            }
            let mut amp = t.coeff * self.omega_table[phase_exp % self.n];
            for &site in &t.electric {
                amp *= self.branch_table[self.digits.digit(src, site)];
            }
            acc += amp * x[src];
        }
        acc
    }

    pub fn apply_sequential(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (out, yo) in y.iter_mut().enumerate() {
            *yo = self.eval_out(out, x);
        }
    }

    #[cfg(feature = "parallel")]
    pub fn apply_parallel(&self, x: &[C64], y: &mut [C64]) {
        use rayon::prelude::*;
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        const CHUNK: usize = 4096;
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
            let base = ci * CHUNK;
            for (i, yo) in chunk.iter_mut().enumerate() {
                *yo = self.eval_out(base + i, x);
            }
        });
    }
}

impl HamOp for TermListOp {
    fn dim(&self) -> usize {
        self.dim
    }

    #[cfg(feature = "parallel")]
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.apply_parallel(x, y);
    }

    #[cfg(not(feature = "parallel"))]
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.apply_sequential(x, y);
    }
}
