use crate::ModelError;
use clock_algebra::{electric_branch, omega_pow, C64, CMat};
use std::collections::HashMap;
use std::fmt::Write as _;

/// One single-site operator, as an integer power of a generator. Sigma and
/// Zeta shift the field-basis quantum number m -> m - p mod N; Tau and Eta
/// are diagonal phases omega^{p m}; Electric is diagonal with the symmetric
/// integer branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalOp {
    Sigma(i32),
    Tau(i32),
    Zeta(i32),
    Eta(i32),
    Electric,
}

impl LocalOp {
    pub fn adjoint(self) -> LocalOp {
        match self {
            LocalOp::Sigma(p) => LocalOp::Sigma(-p),
            LocalOp::Tau(p) => LocalOp::Tau(-p),
            LocalOp::Zeta(p) => LocalOp::Zeta(-p),
            LocalOp::Eta(p) => LocalOp::Eta(-p),
            LocalOp::Electric => LocalOp::Electric,
        }
    }

    /// Canonical power representative in (-N/2, N/2]; None if the operator
    /// is the identity (power 0 mod N).
    fn normalized(self, n: usize) -> Option<LocalOp> {
        let norm = |p: i32| -> Option<i32> {
            let m = (p as i64).rem_euclid(n as i64);
            if m == 0 {
                None
            } else if 2 * m > n as i64 {
                Some((m - n as i64) as i32)
            } else {
                Some(m as i32)
            }
        };
        match self {
            LocalOp::Sigma(p) => norm(p).map(LocalOp::Sigma),
            LocalOp::Tau(p) => norm(p).map(LocalOp::Tau),
            LocalOp::Zeta(p) => norm(p).map(LocalOp::Zeta),
            LocalOp::Eta(p) => norm(p).map(LocalOp::Eta),
            LocalOp::Electric => Some(LocalOp::Electric),
        }
    }

    /// Field-basis matrix of this operator for clock order N.
    pub fn matrix(self, n: usize) -> CMat {
        let mut a = CMat::zeros((n, n));
        match self {
            LocalOp::Sigma(p) | LocalOp::Zeta(p) => {
                for m in 0..n {
                    let tgt = (m as i64 - p as i64).rem_euclid(n as i64) as usize;
                    a[(tgt, m)] = C64::new(1.0, 0.0);
                }
            }
            LocalOp::Tau(p) | LocalOp::Eta(p) => {
                for m in 0..n {
                    a[(m, m)] = omega_pow(n, p as i64 * m as i64);
                }
            }
            LocalOp::Electric => {
                for m in 0..n {
                    a[(m, m)] = C64::new(electric_branch(m, n) as f64, 0.0);
                }
            }
        }
        a
    }

    fn name(&self) -> (&'static str, i32) {
        match self {
            LocalOp::Sigma(p) => ("sigma", *p),
            LocalOp::Tau(p) => ("tau", *p),
            LocalOp::Zeta(p) => ("zeta", *p),
            LocalOp::Eta(p) => ("eta", *p),
            LocalOp::Electric => ("E", 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub site: usize,
    pub op: LocalOp,
}

/// coeff times a product of single-site operators on strictly increasing
/// chain positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn adjoint(&self) -> Term {
        Term {
            coeff: self.coeff.conj(),
            factors: self
                .factors
                .iter()
                .map(|f| Factor { site: f.site, op: f.op.adjoint() })
                .collect(),
        }
    }
}

/// Sum of terms acting on a chain of `sites` N-state sites.
#[derive(Debug, Clone)]
pub struct TermList {
    pub n: usize,
    pub sites: usize,
    pub terms: Vec<Term>,
}

impl TermList {
    pub fn new(n: usize, sites: usize) -> TermList {
        TermList { n, sites, terms: Vec::new() }
    }

    /// Adds coeff * prod factors, normalizing powers mod N, sorting factors
    /// by site and dropping identity factors. Same-site factors of the same
    /// generator merge; mixed generators on one site are a builder bug.
    pub fn push(&mut self, coeff: C64, factors: Vec<(usize, LocalOp)>) {
        if coeff.norm() == 0.0 {
            return;
        }
        let mut by_site: Vec<(usize, LocalOp)> = Vec::with_capacity(factors.len());
        for (site, op) in factors {
            assert!(site < self.sites, "factor site {site} out of range");
            match by_site.iter_mut().find(|(s, _)| *s == site) {
                None => by_site.push((site, op)),
                Some((_, existing)) => {
                    *existing = merge_same_site(*existing, op);
                }
            }
        }
        by_site.sort_by_key(|(s, _)| *s);
        let mut fs = Vec::with_capacity(by_site.len());
        for (site, op) in by_site {
            if let Some(op) = op.normalized(self.n) {
                fs.push(Factor { site, op });
            }
        }
        self.terms.push(Term { coeff, factors: fs });
    }

    /// Adds a term together with its Hermitian conjugate.
    pub fn push_with_adjoint(&mut self, coeff: C64, factors: Vec<(usize, LocalOp)>) {
        self.push(coeff, factors.clone());
        let conj: Vec<_> = factors.into_iter().map(|(s, op)| (s, op.adjoint())).collect();
        self.push(coeff.conj(), conj);
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.sites as u32)
    }

    /// Checked power, for guards against overflowing Hilbert dimensions.
    pub fn dim_checked(&self) -> Option<usize> {
        let mut d: usize = 1;
        for _ in 0..self.sites {
            d = d.checked_mul(self.n)?;
        }
        Some(d)
    }

    /// Every term must have a conjugate partner so the sum is Hermitian.
    /// Structural check: terms are grouped by factor signature and the
    /// summed coefficients compared against the adjoint group.
    pub fn is_hermitian_closed(&self, tol: f64) -> bool {
        let mut sums: HashMap<String, C64> = HashMap::new();
        for t in &self.terms {
            *sums.entry(signature(&t.factors)).or_insert(C64::new(0.0, 0.0)) += t.coeff;
        }
        let scale: f64 = self
            .terms
            .iter()
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        for t in &self.terms {
            let adj = t.adjoint();
            let mine = sums[&signature(&t.factors)];
            let theirs = sums
                .get(&signature(&adj.factors))
                .copied()
                .unwrap_or(C64::new(0.0, 0.0));
            if (theirs - mine.conj()).norm() > tol * scale {
                return false;
            }
        }
        true
    }

    /// Precomputed shift/phase form of each term for matrix-free use.
    pub fn compiled(&self) -> Vec<CompiledTerm> {
        self.terms.iter().map(|t| CompiledTerm::new(t, self.n)).collect()
    }

    /// Dense field-basis matrix. Guarded: refuses dimensions above `max_dim`
    /// (memory grows as dim^2).
    pub fn to_dense(&self, max_dim: usize) -> Result<CMat, ModelError> {
        let dim = self
            .dim_checked()
            .filter(|d| *d <= max_dim)
            .ok_or(ModelError::DimensionTooLarge {
                dim: self.dim_checked().unwrap_or(usize::MAX),
                max: max_dim,
            })?;
        let mut h = CMat::zeros((dim, dim));
        let compiled = self.compiled();
        let digits = SiteDigits::new(self.n, self.sites);
        for ct in &compiled {
            for src in 0..dim {
                let (tgt, amp) = ct.apply_index(src, &digits);
                h[(tgt, src)] += amp;
            }
        }
        Ok(h)
    }

    /// One line per term: coeff_re coeff_im site:name[^power] ...
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "termlist v1 n={} sites={} terms={}", self.n, self.sites, self.terms.len());
        for t in &self.terms {
            let _ = write!(out, "{} {}", t.coeff.re, t.coeff.im);
            for f in &t.factors {
                let (name, p) = f.op.name();
                if name == "E" {
                    let _ = write!(out, " {}:E", f.site);
                } else if p == 1 {
                    let _ = write!(out, " {}:{}", f.site, name);
                } else {
                    let _ = write!(out, " {}:{}^{}", f.site, name, p);
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<TermList, ModelError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| ModelError::Parse("empty input".into()))?;
        let mut n = None;
        let mut sites = None;
        let mut count = None;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("termlist") || fields.next() != Some("v1") {
            return Err(ModelError::Parse("bad header".into()));
        }
        for kv in fields {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| ModelError::Parse(format!("bad header field {kv}")))?;
            let v: usize = v.parse().map_err(|_| ModelError::Parse(format!("bad value {v}")))?;
            match k {
                "n" => n = Some(v),
                "sites" => sites = Some(v),
                "terms" => count = Some(v),
                _ => return Err(ModelError::Parse(format!("unknown header key {k}"))),
            }
        }
        let (n, sites) = match (n, sites) {
            (Some(n), Some(s)) => (n, s),
            _ => return Err(ModelError::Parse("header missing n or sites".into())),
        };
        let mut tl = TermList::new(n, sites);
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let re: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ModelError::Parse(format!("bad coeff in {line:?}")))?;
            let im: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ModelError::Parse(format!("bad coeff in {line:?}")))?;
            let mut factors = Vec::new();
            for tok in parts {
                let (site, op) = tok
                    .split_once(':')
                    .ok_or_else(|| ModelError::Parse(format!("bad factor {tok}")))?;
                let site: usize = site
                    .parse()
                    .map_err(|_| ModelError::Parse(format!("bad site in {tok}")))?;
                if site >= sites {
                    return Err(ModelError::Parse(format!("site {site} out of range")));
                }
                factors.push((site, parse_op(op)?));
            }
            tl.push(C64::new(re, im), factors);
        }
        if let Some(c) = count {
            if c != tl.terms.len() {
                return Err(ModelError::Parse(format!(
                    "header says {c} terms, found {}",
                    tl.terms.len()
                )));
            }
        }
        Ok(tl)
    }
}

fn parse_op(tok: &str) -> Result<LocalOp, ModelError> {
    let (name, power) = match tok.split_once('^') {
        Some((name, p)) => {
            let p: i32 = p
                .parse()
                .map_err(|_| ModelError::Parse(format!("bad power in {tok}")))?;
            (name, p)
        }
        None => (tok, 1),
    };
    match name {
        "sigma" => Ok(LocalOp::Sigma(power)),
        "tau" => Ok(LocalOp::Tau(power)),
        "zeta" => Ok(LocalOp::Zeta(power)),
        "eta" => Ok(LocalOp::Eta(power)),
        "E" if power == 1 => Ok(LocalOp::Electric),
        _ => Err(ModelError::Parse(format!("unknown operator {tok}"))),
    }
}

fn merge_same_site(a: LocalOp, b: LocalOp) -> LocalOp {
    match (a, b) {
        (LocalOp::Sigma(p), LocalOp::Sigma(q)) => LocalOp::Sigma(p + q),
        (LocalOp::Tau(p), LocalOp::Tau(q)) => LocalOp::Tau(p + q),
        (LocalOp::Zeta(p), LocalOp::Zeta(q)) => LocalOp::Zeta(p + q),
        (LocalOp::Eta(p), LocalOp::Eta(q)) => LocalOp::Eta(p + q),
        _ => panic!("mixed operators on one site: {a:?} * {b:?}"),
    }
}

fn signature(factors: &[Factor]) -> String {
    let mut s = String::new();
    for f in factors {
        let (name, p) = f.op.name();
        let _ = write!(s, "{}:{}^{};", f.site, name, p);
    }
    s
}

/// Mixed-radix digit helpers for basis index <-> site quantum numbers.
/// Site 0 is the least significant digit.
#[derive(Debug, Clone)]
pub struct SiteDigits {
    pub n: usize,
    pub strides: Vec<usize>,
}

impl SiteDigits {
    pub fn new(n: usize, sites: usize) -> SiteDigits {
        let mut strides = Vec::with_capacity(sites);
        let mut s = 1usize;
        for _ in 0..sites {
            strides.push(s);
            s *= n;
        }
        SiteDigits { n, strides }
    }

    #[inline]
    pub fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.strides[site]) % self.n
    }
}

/// Shift/phase form of one term in the field basis: the term maps a basis
/// state with digits m to (coeff * omega^{sum b_i m_i} * prod branch(m_j))
/// times the state with digits m_i -> m_i - a_i.
#[derive(Debug, Clone)]
pub struct CompiledTerm {
    pub coeff: C64,
    /// (site, a) with a in 1..N: digit shift m -> m - a mod N.
    pub shifts: Vec<(usize, u32)>,
    /// (site, b): phase exponent contribution b * m mod N.
    pub phases: Vec<(usize, u32)>,
    /// Sites whose electric branch value multiplies the amplitude.
    pub electric: Vec<usize>,
}

impl CompiledTerm {
    pub fn new(term: &Term, n: usize) -> CompiledTerm {
        let mut shifts = Vec::new();
        let mut phases = Vec::new();
        let mut electric = Vec::new();
        for f in &term.factors {
            match f.op {
                LocalOp::Sigma(p) | LocalOp::Zeta(p) => {
                    let a = (p as i64).rem_euclid(n as i64) as u32;
                    if a != 0 {
                        shifts.push((f.site, a));
                    }
                }
                LocalOp::Tau(p) | LocalOp::Eta(p) => {
                    let b = (p as i64).rem_euclid(n as i64) as u32;
                    if b != 0 {
                        phases.push((f.site, b));
                    }
                }
                LocalOp::Electric => electric.push(f.site),
            }
        }
        CompiledTerm { coeff: term.coeff, shifts, phases, electric }
    }

    /// Applies the term to basis index `src`, returning (target index,
    /// amplitude). The phase is evaluated on the source digits.
    #[inline]
    pub fn apply_index(&self, src: usize, digits: &SiteDigits) -> (usize, C64) {
        let n = digits.n;
        let mut phase_exp = 0usize;
        for &(site, b) in &self.phases {
            phase_exp += digits.digit(src, site) * b as usize;
        }
        let mut amp = self.coeff * omega_pow(n, phase_exp as i64);
        for &site in &self.electric {
            amp *= electric_branch(digits.digit(src, site), n) as f64;
        }
        let mut tgt = src;
        for &(site, a) in &self.shifts {
            let m = digits.digit(src, site);
            let shifted = (m + n - a as usize) % n;
            tgt = tgt - m * digits.strides[site] + shifted * digits.strides[site];
        }
        (tgt, amp)
    }
}
