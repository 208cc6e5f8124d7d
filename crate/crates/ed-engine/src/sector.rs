use crate::{C64, EdError, HamOp, DENSE_DIM_LIMIT};
use model_builder::{gauge_invariance_violation, CompiledTerm, GaussSector, SiteDigits, TermList};
use ndarray::Array2;

/// Full-space basis scans stop here; the scan is linear in the full
/// dimension, not the sector dimension.
pub const SECTOR_ENUM_LIMIT: usize = 1 << 26;

/// A term list restricted to the joint eigenspace of the Gauss generators
/// with prescribed eigenvalue exponents. Stores the sector basis as sorted
/// full-space indices and applies terms matrix-free inside the sector.
#[derive(Debug)]
pub struct SectorHamiltonian {
    pub n: usize,
    pub sites: usize,
    /// Ascending full-space indices of the sector basis states.
    pub basis: Vec<usize>,
    pub label: String,
    digits: SiteDigits,
    diag: Vec<C64>,
    offdiag: Vec<CompiledTerm>,
}

/// Restricts `terms` to the Gauss sector. Validates structurally first
/// that every term commutes with every generator; a violation would let
/// amplitudes leak between sectors and the projection would be silently
/// wrong.
pub fn project_gauss(terms: &TermList, sector: &GaussSector) -> Result<SectorHamiltonian, EdError> {
    if let Some(msg) = gauge_invariance_violation(terms, sector) {
        return Err(EdError::SectorViolation(msg));
    }
    let dim = terms.dim_checked().unwrap_or(usize::MAX);
    if dim > SECTOR_ENUM_LIMIT {
        return Err(EdError::SectorTooLarge { dim, max: SECTOR_ENUM_LIMIT });
    }
    let n = terms.n;
    let digits = SiteDigits::new(n, terms.sites);

    // Generator v is diagonal with eigenvalue exponent sum_i b_i m_i mod N.
    let gens: Vec<Vec<(usize, usize)>> = sector
        .generators
        .iter()
        .map(|g| {
            g.compiled()
                .first()
                .map(|ct| ct.phases.iter().map(|&(s, b)| (s, b as usize)).collect())
                .unwrap_or_default()
        })
        .collect();
    let want: Vec<usize> = sector
        .charges
        .iter()
        .map(|&q| q.rem_euclid(n as i64) as usize)
        .collect();

    let mut basis = Vec::new();
    'states: for i in 0..dim {
        for (phases, &q) in gens.iter().zip(&want) {
            let e: usize = phases.iter().map(|&(s, b)| digits.digit(i, s) * b).sum();
            if e % n != q {
                continue 'states;
            }
        }
        basis.push(i);
    }
    let label = format!(
        "exponents {:?} on {} vertices: dim {} of {}",
        want,
        sector.vertices.len(),
        basis.len(),
        dim
    );
    if basis.is_empty() {
        return Err(EdError::EmptySector(label));
    }

    let mut diag = vec![C64::new(0.0, 0.0); basis.len()];
    let mut offdiag = Vec::new();
    for ct in terms.compiled() {
        if ct.shifts.is_empty() {
            for (p, &full) in basis.iter().enumerate() {
                let (_, amp) = ct.apply_index(full, &digits);
                diag[p] += amp;
            }
        } else {
            offdiag.push(ct);
        }
    }
    Ok(SectorHamiltonian { n, sites: terms.sites, basis, label, digits, diag, offdiag })
}

impl SectorHamiltonian {
    /// Position of a full-space basis index inside the sector.
    pub fn position(&self, full_index: usize) -> Option<usize> {
        self.basis.binary_search(&full_index).ok()
    }

    /// Lifts a sector vector to the full Hilbert space.
    pub fn embed(&self, x: &[C64], full_dim: usize) -> Vec<C64> {
        assert_eq!(x.len(), self.basis.len());
        let mut out = vec![C64::new(0.0, 0.0); full_dim];
        for (p, &full) in self.basis.iter().enumerate() {
            out[full] = x[p];
        }
        out
    }

    /// Restriction of a full-space vector to the sector basis.
    pub fn restrict(&self, full: &[C64]) -> Vec<C64> {
        self.basis.iter().map(|&i| full[i]).collect()
    }

    /// Dense sector matrix, for small sectors.
    pub fn dense(&self) -> Result<Array2<C64>, EdError> {
        let d = self.basis.len();
        if d > DENSE_DIM_LIMIT {
            return Err(EdError::SectorTooLarge { dim: d, max: DENSE_DIM_LIMIT });
        }
        let mut h = Array2::zeros((d, d));
        for (q, &src) in self.basis.iter().enumerate() {
            h[(q, q)] += self.diag[q];
            for ct in &self.offdiag {
                let (tgt, amp) = ct.apply_index(src, &self.digits);
                let p = self
                    .position(tgt)
                    .expect("validated term left the sector");
                h[(p, q)] += amp;
            }
        }
        Ok(h)
    }
}

impl HamOp for SectorHamiltonian {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.basis.len());
        assert_eq!(y.len(), self.basis.len());
        let n = self.n;
        for (p, yo) in y.iter_mut().enumerate() {
            let out = self.basis[p];
            let mut acc = self.diag[p] * x[p];
            for ct in &self.offdiag {
                // Source state whose image under the term is `out`: digit
                // shifts run m -> m - a, so invert by adding a.
                let mut src = out;
                for &(site, a) in &ct.shifts {
                    let stride = self.digits.strides[site];
                    let m = (out / stride) % n;
                    src = src - m * stride + ((m + a as usize) % n) * stride;
                }
                let q = self
                    .position(src)
                    .expect("validated term left the sector");
                let (tgt, amp) = ct.apply_index(src, &self.digits);
                debug_assert_eq!(tgt, out);
                acc += amp * x[q];
            }
            *yo = acc;
        }
    }
}
