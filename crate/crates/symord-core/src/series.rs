//! Exact truncated multivariate formal power series in the dual generators
//! `d1..dn`, series matrices, Bernoulli numbers and the symmetric-ordering
//! realization matrix.
//!
//! A series carries a hard total-degree cutoff: products silently drop every
//! term above the cutoff, and consumers state the degree window to which a
//! computed identity is trustworthy (one degree is lost per differentiation).

use crate::algebra::LieAlgebra;
use crate::rat::{binomial, factorial, fmt_term, rat, Rat};
use num::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial; ordered by total degree, then
/// lexicographically (graded-lex), which fixes all rendering orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    /// The exponent vector of a single variable (1-based index).
    pub fn unit(n: usize, var: usize) -> Self {
        assert!((1..=n).contains(&var), "variable index {var} out of 1..={n}");
        let mut e = vec![0; n];
        e[var - 1] = 1;
        Multidegree(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Multidegree(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Exponent of a 1-based variable.
    pub fn get(&self, var: usize) -> u32 {
        self.0[var - 1]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        debug_assert_eq!(self.len(), other.len());
        Multidegree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference; `None` if any exponent would go negative.
    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Multidegree)
    }

    /// Raises or lowers one slot; lowering below zero returns `None`.
    pub fn bump(&self, var: usize, delta: i32) -> Option<Multidegree> {
        let mut e = self.0.clone();
        let cur = e[var - 1] as i64 + delta as i64;
        if cur < 0 {
            return None;
        }
        e[var - 1] = cur as u32;
        Some(Multidegree(e))
    }

    /// Variables with a positive exponent, as `(var, exponent)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i + 1, e))
    }

    fn fmt_with(&self, letter: &str) -> String {
        let parts: Vec<String> = self
            .support()
            .map(|(v, e)| {
                if e == 1 {
                    format!("{letter}{v}")
                } else {
                    format!("{letter}{v}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }

    /// Renders as a `d`-monomial, e.g. `d1^2*d3`; empty string for degree 0.
    pub fn fmt_d(&self) -> String {
        self.fmt_with("d")
    }

    /// Renders as an `x`-monomial.
    pub fn fmt_x(&self) -> String {
        self.fmt_with("x")
    }

    /// Renders with an arbitrary variable letter.
    pub fn fmt_letter(&self, letter: &str) -> String {
        self.fmt_with(letter)
    }
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded, then lexicographic with earlier variables weighted first
        // (x1^2 sorts before x1*x2 sorts before x2^2)
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A formal power series in `d1..dn` over exact rationals, truncated at a
/// total degree. Equality compares ambient dimension and terms; the cutoff is
/// bookkeeping, not part of the value.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    n: usize,
    cutoff: u32,
    terms: BTreeMap<Multidegree, Rat>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl TruncatedSeries {
    pub fn zero(n: usize, cutoff: u32) -> Self {
        TruncatedSeries {
            n,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, cutoff: u32, c: Rat) -> Self {
        let mut s = Self::zero(n, cutoff);
        s.add_term(Multidegree::zero(n), c);
        s
    }

    pub fn one(n: usize, cutoff: u32) -> Self {
        Self::constant(n, cutoff, Rat::one())
    }

    /// The single variable `d{var}` (1-based).
    pub fn var(n: usize, var: usize, cutoff: u32) -> Self {
        let mut s = Self::zero(n, cutoff);
        s.add_term(Multidegree::unit(n, var), Rat::one());
        s
    }

    pub fn monomial(n: usize, md: Multidegree, c: Rat, cutoff: u32) -> Self {
        assert_eq!(md.len(), n);
        let mut s = Self::zero(n, cutoff);
        s.add_term(md, c);
        s
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, md: &Multidegree) -> Rat {
        self.terms.get(md).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Multidegree::zero(self.n))
    }

    /// Adds `c * d^md`, respecting the cutoff and pruning zeros.
    pub fn add_term(&mut self, md: Multidegree, c: Rat) {
        debug_assert_eq!(md.len(), self.n);
        if c.is_zero() || md.total() > self.cutoff {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(md) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_binary(&self, other: &Self, op: &str) {
        assert_eq!(self.n, other.n, "{op}: ambient dimension mismatch");
        assert_eq!(self.cutoff, other.cutoff, "{op}: cutoff mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_binary(other, "series add");
        let mut out = self.clone();
        for (md, c) in &other.terms {
            out.add_term(md.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for (md, c) in &self.terms {
            out.add_term(md.clone(), -c.clone());
        }
        out
    }

    pub fn scalar_mul(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for (md, v) in &self.terms {
            out.add_term(md.clone(), v * c);
        }
        out
    }

    /// Truncated product: every term of total degree above the cutoff is
    /// dropped.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_binary(other, "series mul");
        let mut out = Self::zero(self.n, self.cutoff);
        for (ma, ca) in &self.terms {
            if ma.total() > self.cutoff {
                continue;
            }
            for (mb, cb) in &other.terms {
                if ma.total() + mb.total() > self.cutoff {
                    continue;
                }
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }

    /// Algebraic partial derivative with respect to `d{rho}`.
    pub fn partial_derivative(&self, rho: usize) -> Self {
        assert!((1..=self.n).contains(&rho), "derivative slot out of range");
        let mut out = Self::zero(self.n, self.cutoff);
        for (md, c) in &self.terms {
            let e = md.get(rho);
            if e == 0 {
                continue;
            }
            let lowered = md.bump(rho, -1).expect("exponent is positive");
            out.add_term(lowered, c * rat(e as i64, 1));
        }
        out
    }

    /// Drops all terms of total degree above `d` and tightens the cutoff.
    pub fn truncate_to(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, d.min(self.cutoff));
        for (md, c) in &self.terms {
            out.add_term(md.clone(), c.clone());
        }
        out
    }

    /// Maximum total degree of a stored term.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    /// Re-tags the series with a new cutoff. Panics if a stored term exceeds
    /// it; use [`truncate_to`](Self::truncate_to) to drop terms.
    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        assert!(self.degree() <= cutoff, "stored terms exceed new cutoff");
        let mut out = self.clone();
        out.cutoff = cutoff;
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (md, c) in &self.terms {
            write!(f, "{}", fmt_term(c, &md.fmt_d(), first))?;
            first = false;
        }
        Ok(())
    }
}

/// An `n x n` matrix of truncated series with a shared cutoff. The superscript
/// is the row index, so `(AB)^i_j = sum_k A^i_k B^k_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    cutoff: u32,
    entries: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    pub fn zero(n: usize, cutoff: u32) -> Self {
        SeriesMatrix {
            n,
            cutoff,
            entries: vec![TruncatedSeries::zero(n, cutoff); n * n],
        }
    }

    pub fn identity(n: usize, cutoff: u32) -> Self {
        let mut m = Self::zero(n, cutoff);
        for i in 1..=n {
            *m.entry_mut(i, i) = TruncatedSeries::one(n, cutoff);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Entry `M^i_j` (row `i`, column `j`, both 1-based).
    pub fn entry(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut TruncatedSeries {
        &mut self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix add: dimension mismatch");
        let mut out = Self::zero(self.n, self.cutoff);
        for i in 1..=self.n {
            for j in 1..=self.n {
                *out.entry_mut(i, j) = self.entry(i, j).add(other.entry(i, j));
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for i in 1..=self.n {
            for j in 1..=self.n {
                *out.entry_mut(i, j) = self.entry(i, j).scalar_mul(c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix mul: dimension mismatch");
        let mut out = Self::zero(self.n, self.cutoff);
        for i in 1..=self.n {
            for j in 1..=self.n {
                let mut acc = TruncatedSeries::zero(self.n, self.cutoff);
                for k in 1..=self.n {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j)));
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n, self.cutoff);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|s| s.is_zero())
    }
}

/// The matrix with entries `C^i_j = C^i_{jk} d^k`, linear in the duals.
pub fn c_matrix(l: &LieAlgebra, cutoff: u32) -> SeriesMatrix {
    let n = l.dim();
    let mut m = SeriesMatrix::zero(n, cutoff);
    for i in 1..=n {
        for j in 1..=n {
            let mut s = TruncatedSeries::zero(n, cutoff);
            for k in 1..=n {
                s.add_term(Multidegree::unit(n, k), l.c(j, k, i));
            }
            *m.entry_mut(i, j) = s;
        }
    }
    m
}

/// Exact Bernoulli number `B_N` with the `B_1 = -1/2` convention, from the
/// defining recurrence `sum_{k<=N} binom(N+1,k) B_k = 0`.
pub fn bernoulli(n: u32) -> Rat {
    let mut b: Vec<Rat> = Vec::with_capacity(n as usize + 1);
    b.push(Rat::one());
    for m in 1..=n {
        // binom(m+1, m) B_m = -sum_{k<m} binom(m+1, k) B_k
        let mut acc = Rat::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += binomial(m + 1, k as u32) * bk;
        }
        b.push(-acc / binomial(m + 1, m));
    }
    b.pop().expect("nonempty by construction")
}

/// The symmetric-ordering realization matrix
/// `phi = sum_{N=0..D} (-1)^N (B_N / N!) C^N`.
///
/// The constant term is the identity; the `N = 1` term is `+C/2`.
pub fn phi_symmetric(l: &LieAlgebra, cutoff: u32) -> SeriesMatrix {
    let n = l.dim();
    let c = c_matrix(l, cutoff);
    let mut acc = SeriesMatrix::identity(n, cutoff);
    let mut c_pow = SeriesMatrix::identity(n, cutoff);
    for big_n in 1..=cutoff {
        c_pow = c_pow.mul(&c);
        if c_pow.is_zero() {
            break;
        }
        let bn = bernoulli(big_n);
        if bn.is_zero() {
            continue;
        }
        let sign = if big_n % 2 == 0 { Rat::one() } else { -Rat::one() };
        let coeff = sign * bn / factorial(big_n);
        acc = acc.add(&c_pow.scalar_mul(&coeff));
    }
    acc
}

/// Per-triple outcome of the realization equation check.
#[derive(Debug, Clone)]
pub struct PhiEquationReport {
    /// Degree up to which the equation was checked (cutoff minus one).
    pub window: u32,
    /// Failing triples `(i, j, k)` with the residual series.
    pub failures: Vec<(usize, usize, usize, TruncatedSeries)>,
}

impl PhiEquationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the defining equation of a realization,
/// `phi^l_j d_l(phi^k_i) - phi^l_i d_l(phi^k_j) = C^s_{ij} phi^k_s`,
/// up to degree `cutoff - 1` (one derivative is consumed).
pub fn verify_phi_equation(l: &LieAlgebra, phi: &SeriesMatrix) -> PhiEquationReport {
    let n = l.dim();
    assert_eq!(n, phi.dim(), "phi dimension must match the algebra");
    let cutoff = phi.cutoff();
    assert!(cutoff >= 1, "phi equation needs cutoff >= 1");
    let window = cutoff - 1;
    let mut failures = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let mut lhs = TruncatedSeries::zero(n, cutoff);
                for slot in 1..=n {
                    lhs = lhs.add(
                        &phi.entry(slot, j)
                            .mul(&phi.entry(k, i).partial_derivative(slot)),
                    );
                    lhs = lhs.sub(
                        &phi.entry(slot, i)
                            .mul(&phi.entry(k, j).partial_derivative(slot)),
                    );
                }
                let mut rhs = TruncatedSeries::zero(n, cutoff);
                for s in 1..=n {
                    rhs = rhs.add(&phi.entry(k, s).scalar_mul(&l.c(i, j, s)));
                }
                let residual = lhs.truncate_to(window).sub(&rhs.truncate_to(window));
                if !residual.is_zero() {
                    failures.push((i, j, k, residual));
                }
            }
        }
    }
    PhiEquationReport { window, failures }
}

/// Both sides of the Bernoulli convolution identity
/// `sum_{s=1..l} B_{2s}/(2s)! * B_{2l-2s}/(2l-2s)! = -B_{2l}/(2l-1)! + 1/4 delta_{l,1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliIdentityReport {
    pub l: u32,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl BernoulliIdentityReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn bernoulli_identity_check(l: u32) -> BernoulliIdentityReport {
    assert!(l >= 1);
    let mut lhs = Rat::zero();
    for s in 1..=l {
        lhs += bernoulli(2 * s) / factorial(2 * s) * bernoulli(2 * l - 2 * s)
            / factorial(2 * l - 2 * s);
    }
    let mut rhs = -bernoulli(2 * l) / factorial(2 * l - 1);
    if l == 1 {
        rhs += rat(1, 4);
    }
    BernoulliIdentityReport { l, lhs, rhs }
}
