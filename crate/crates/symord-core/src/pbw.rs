//! The enveloping algebra in PBW normal form: product by straightening, the
//! coexponential map and its inverse through the Weyl realization, deformed
//! derivatives, and the star product transported along the PBW isomorphism.

use crate::algebra::LieAlgebra;
use crate::rat::{factorial, fmt_term, Rat};
use crate::series::{Multidegree, SeriesMatrix, TruncatedSeries};
use crate::weyl::{realize_generator, Polynomial};
use num::{One, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbwError {
    #[error("series cutoff {cutoff} too small for degree {needed}")]
    CutoffTooSmall { cutoff: u32, needed: u32 },
}

/// An element of the enveloping algebra in PBW normal form: the multidegree
/// `(e1..en)` stands for the ordered monomial `X1^e1 ... Xn^en`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwElement {
    n: usize,
    terms: BTreeMap<Multidegree, Rat>,
}

impl PbwElement {
    pub fn zero(n: usize) -> Self {
        PbwElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rat::one())
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Multidegree::zero(n), c);
        p
    }

    /// The generator `X{var}` (1-based).
    pub fn generator(n: usize, var: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Multidegree::unit(n, var), Rat::one());
        p
    }

    pub fn monomial(n: usize, md: Multidegree, c: Rat) -> Self {
        assert_eq!(md.len(), n);
        let mut p = Self::zero(n);
        p.add_term(md, c);
        p
    }

    pub fn ambient(&self) -> usize {
        self.n
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

    /// Filtration degree: the maximal total degree of a monomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, md: Multidegree, c: Rat) {
        debug_assert_eq!(md.len(), self.n);
        if c.is_zero() {
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

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "pbw add: ambient mismatch");
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
        let mut out = Self::zero(self.n);
        for (md, c) in &self.terms {
            out.add_term(md.clone(), -c.clone());
        }
        out
    }

    pub fn scalar_mul(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n);
        for (md, v) in &self.terms {
            out.add_term(md.clone(), v * c);
        }
        out
    }
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (md, c) in &self.terms {
            write!(f, "{}", fmt_term(c, &md.fmt_letter("X"), first))?;
            first = false;
        }
        Ok(())
    }
}

/// Expands an exponent vector into the ascending letter word
/// `[1,..,1,2,..,2,..]`.
fn word_of(md: &Multidegree) -> Vec<usize> {
    let mut w = Vec::with_capacity(md.total() as usize);
    for (var, e) in md.support() {
        for _ in 0..e {
            w.push(var);
        }
    }
    w
}

fn exponents_of(word: &[usize], n: usize) -> Multidegree {
    let mut e = vec![0u32; n];
    for &letter in word {
        e[letter - 1] += 1;
    }
    Multidegree::from_exponents(e)
}

/// Rewrites a word in the generators into PBW normal form by repeatedly
/// replacing the leftmost out-of-order adjacent pair
/// `X_j X_i -> X_i X_j + C^k_{ji} X_k` (for `j > i`). Terminates because each
/// step either lowers the word length or the inversion count.
fn straighten(l: &LieAlgebra, word: &mut [usize], coeff: Rat, out: &mut PbwElement) {
    let n = l.dim();
    loop {
        let pos = word.windows(2).position(|w| w[0] > w[1]);
        match pos {
            None => {
                out.add_term(exponents_of(word, n), coeff);
                return;
            }
            Some(p) => {
                let (j, i) = (word[p], word[p + 1]);
                // bracket correction [X_j, X_i] = C^k_{ji} X_k
                for k in 1..=n {
                    let c = l.c(j, i, k);
                    if c.is_zero() {
                        continue;
                    }
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..p]);
                    shorter.push(k);
                    shorter.extend_from_slice(&word[p + 2..]);
                    straighten(l, &mut shorter, &coeff * c, out);
                }
                word.swap(p, p + 1);
            }
        }
    }
}

/// The associative product of the enveloping algebra in PBW normal form.
pub fn pbw_mul(l: &LieAlgebra, a: &PbwElement, b: &PbwElement) -> PbwElement {
    assert_eq!(a.ambient(), l.dim(), "pbw mul: ambient mismatch");
    assert_eq!(b.ambient(), l.dim(), "pbw mul: ambient mismatch");
    let mut out = PbwElement::zero(l.dim());
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let mut word = word_of(ea);
            word.extend(word_of(eb));
            straighten(l, &mut word, ca * cb, &mut out);
        }
    }
    out
}

pub fn pbw_pow(l: &LieAlgebra, a: &PbwElement, e: u32) -> PbwElement {
    let mut acc = PbwElement::one(l.dim());
    for _ in 0..e {
        acc = pbw_mul(l, &acc, a);
    }
    acc
}

/// The coexponential map: symmetrization monomial by monomial,
/// `x_{a1}...x_{ak} -> (1/k!) sum over permutations`, then PBW-normalized.
pub fn coexp_xi(l: &LieAlgebra, f: &Polynomial) -> PbwElement {
    let n = l.dim();
    assert_eq!(f.ambient(), n, "xi: ambient mismatch");
    let mut out = PbwElement::zero(n);
    for (e, c) in f.terms() {
        let letters = word_of(e);
        let k = letters.len() as u32;
        // each distinct word appears (prod e_i!) times among the k! permutations
        let mut rep = Rat::one();
        for (_, ev) in e.support() {
            rep *= factorial(ev);
        }
        let weight = c * rep / factorial(k);
        let mut word = letters.clone();
        word.sort_unstable();
        loop {
            let mut copy = word.clone();
            straighten(l, &mut copy, weight.clone(), &mut out);
            if !next_permutation(&mut word) {
                break;
            }
        }
    }
    out
}

/// Advances to the next distinct multiset permutation; standard algorithm.
fn next_permutation(word: &mut [usize]) -> bool {
    if word.len() < 2 {
        return false;
    }
    let mut i = word.len() - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = word.len() - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

/// The inverse of the coexponential map, computed as a vacuum map:
/// realize each PBW monomial through `phi` and act on the constant `1`.
pub fn xi_inverse(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    u: &PbwElement,
) -> Result<Polynomial, PbwError> {
    let n = l.dim();
    assert_eq!(u.ambient(), n, "xi_inverse: ambient mismatch");
    let needed = u.degree();
    if phi.cutoff() < needed {
        return Err(PbwError::CutoffTooSmall {
            cutoff: phi.cutoff(),
            needed,
        });
    }
    let gens: Vec<_> = (1..=n).map(|i| realize_generator(phi, i)).collect();
    let mut out = Polynomial::zero(n);
    for (e, c) in u.terms() {
        // apply X1^e1 ... Xn^en to 1, rightmost factor first
        let mut p = Polynomial::one(n);
        for var in (1..=n).rev() {
            for _ in 0..e.get(var) {
                p = gens[var - 1].apply(&p);
            }
        }
        out = out.add(&p.scalar_mul(c));
    }
    Ok(out)
}

/// Deformed-derivative calculus for a fixed algebra and realization matrix.
///
/// Results for monomials are cached, since the inductive rule re-derives the
/// same submonomials many times during sweeps.
pub struct DeformedCalculus<'a> {
    l: &'a LieAlgebra,
    phi: &'a SeriesMatrix,
    cache: RefCell<HashMap<(usize, Multidegree), PbwElement>>,
}

impl<'a> DeformedCalculus<'a> {
    pub fn new(l: &'a LieAlgebra, phi: &'a SeriesMatrix) -> Self {
        assert_eq!(l.dim(), phi.dim(), "phi dimension must match the algebra");
        DeformedCalculus {
            l,
            phi,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.l
    }

    pub fn phi(&self) -> &SeriesMatrix {
        self.phi
    }

    /// The deformed derivative `d^mu` applied to `u`, by the inductive rule
    /// `d^mu(X_v f) = phi^mu_v(d-hat)(f) + X_v d^mu(f)` with `d^mu(1) = 0`.
    pub fn partial(&self, mu: usize, u: &PbwElement) -> PbwElement {
        let n = self.l.dim();
        assert!(
            self.phi.cutoff() + 1 >= u.degree(),
            "phi cutoff {} too small for degree {}",
            self.phi.cutoff(),
            u.degree()
        );
        let mut out = PbwElement::zero(n);
        for (e, c) in u.terms() {
            out = out.add(&self.partial_monomial(mu, e).scalar_mul(c));
        }
        out
    }

    fn partial_monomial(&self, mu: usize, e: &Multidegree) -> PbwElement {
        let n = self.l.dim();
        if e.is_zero() {
            return PbwElement::zero(n);
        }
        if let Some(hit) = self.cache.borrow().get(&(mu, e.clone())) {
            return hit.clone();
        }
        // peel off the smallest-index generator: e = X_v * rest
        let v = e.support().next().expect("nonzero multidegree").0;
        let rest = e.bump(v, -1).expect("exponent positive");
        let rest_el = PbwElement::monomial(n, rest.clone(), Rat::one());
        let mut result = self.eval_series(self.phi.entry(mu, v), &rest_el);
        result = result.add(&pbw_mul(
            self.l,
            &PbwElement::generator(n, v),
            &self.partial_monomial(mu, &rest),
        ));
        self.cache
            .borrow_mut()
            .insert((mu, e.clone()), result.clone());
        result
    }

    /// Substitutes the commuting deformed derivatives into a series and
    /// applies it; the sum terminates at the filtration degree of `u`.
    pub fn eval_series(&self, s: &TruncatedSeries, u: &PbwElement) -> PbwElement {
        let n = self.l.dim();
        let deg = u.degree();
        let mut out = PbwElement::zero(n);
        for (m, c) in s.terms() {
            if m.total() > deg {
                continue;
            }
            let mut acc = u.clone();
            'outer: for (var, e) in m.support() {
                for _ in 0..e {
                    acc = self.partial(var, &acc);
                    if acc.is_zero() {
                        break 'outer;
                    }
                }
            }
            out = out.add(&acc.scalar_mul(c));
        }
        out
    }
}

/// One-shot deformed derivative; see [`DeformedCalculus::partial`].
pub fn deformed_partial(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    mu: usize,
    u: &PbwElement,
) -> PbwElement {
    DeformedCalculus::new(l, phi).partial(mu, u)
}

/// One-shot series substitution; see [`DeformedCalculus::eval_series`].
pub fn evaluate_series_at_deformed(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    s: &TruncatedSeries,
    u: &PbwElement,
) -> PbwElement {
    DeformedCalculus::new(l, phi).eval_series(s, u)
}

/// The star product transported along the PBW coalgebra isomorphism:
/// `f * g = xi^{-1}(xi(f) xi(g))`.
pub fn star_pbw(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial, PbwError> {
    let needed = f.degree() + g.degree();
    if phi.cutoff() < needed {
        return Err(PbwError::CutoffTooSmall {
            cutoff: phi.cutoff(),
            needed,
        });
    }
    let prod = pbw_mul(l, &coexp_xi(l, f), &coexp_xi(l, g));
    xi_inverse(l, phi, &prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::series::phi_symmetric;

    fn su2() -> LieAlgebra {
        LieAlgebra::su2()
    }

    fn builtins() -> Vec<LieAlgebra> {
        vec![
            LieAlgebra::abelian(3),
            LieAlgebra::heisenberg(),
            LieAlgebra::su2(),
            LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap(),
        ]
    }

    /// All monomials of total degree <= d in n variables.
    fn monomials(n: usize, d: u32) -> Vec<Multidegree> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for pre in out {
                let used: u32 = pre.iter().sum();
                for e in 0..=(d - used) {
                    let mut p = pre.clone();
                    p.push(e);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(Multidegree::from_exponents).collect()
    }

    #[test]
    fn abelian_product_is_commutative_polynomial_product() {
        let l = LieAlgebra::abelian(2);
        let a = PbwElement::generator(2, 1);
        let b = PbwElement::generator(2, 2);
        let ab = pbw_mul(&l, &a, &b);
        let ba = pbw_mul(&l, &b, &a);
        assert_eq!(ab, ba);
        assert_eq!(
            ab,
            PbwElement::monomial(2, Multidegree::from_exponents(vec![1, 1]), rat_int(1))
        );
    }

    #[test]
    fn su2_single_straightening_step() {
        // X2 X1 = X1 X2 + C^k_{21} X_k = X1 X2 - X3
        let l = su2();
        let got = pbw_mul(&l, &PbwElement::generator(3, 2), &PbwElement::generator(3, 1));
        let mut expect = PbwElement::monomial(
            3,
            Multidegree::from_exponents(vec![1, 1, 0]),
            rat_int(1),
        );
        expect.add_term(Multidegree::unit(3, 3), rat_int(-1));
        assert_eq!(got, expect);
    }

    #[test]
    fn pbw_mul_is_associative() {
        for l in builtins() {
            let n = l.dim();
            let gens: Vec<_> = (1..=n).map(|i| PbwElement::generator(n, i)).collect();
            let a = gens[0].add(&gens[2].scalar_mul(&rat(1, 2)));
            let b = pbw_mul(&l, &gens[1], &gens[2]).add(&PbwElement::one(n));
            let c = gens[1].sub(&gens[0].scalar_mul(&rat_int(3)));
            let lhs = pbw_mul(&l, &pbw_mul(&l, &a, &b), &c);
            let rhs = pbw_mul(&l, &a, &pbw_mul(&l, &b, &c));
            assert_eq!(lhs, rhs, "associativity failed for {}", l.name());
        }
    }

    #[test]
    fn xi_on_generators_and_products() {
        let l = su2();
        assert_eq!(
            coexp_xi(&l, &Polynomial::var(3, 1)),
            PbwElement::generator(3, 1)
        );
        // xi(x1 x2) = X1 X2 - (1/2) X3
        let f = Polynomial::var(3, 1).mul(&Polynomial::var(3, 2));
        let mut expect = PbwElement::monomial(
            3,
            Multidegree::from_exponents(vec![1, 1, 0]),
            rat_int(1),
        );
        expect.add_term(Multidegree::unit(3, 3), rat(-1, 2));
        assert_eq!(coexp_xi(&l, &f), expect);
    }

    #[test]
    fn xi_is_identity_on_abelian() {
        let l = LieAlgebra::abelian(3);
        for md in monomials(3, 4) {
            let f = Polynomial::monomial(3, md.clone(), rat_int(1));
            let u = coexp_xi(&l, &f);
            assert_eq!(u, PbwElement::monomial(3, md, rat_int(1)));
        }
    }

    #[test]
    fn xi_inverse_examples() {
        let l = su2();
        let phi = phi_symmetric(&l, 4);
        assert_eq!(
            xi_inverse(&l, &phi, &PbwElement::generator(3, 1)).unwrap(),
            Polynomial::var(3, 1)
        );
        // xi^{-1}(X1 X2) = x1 x2 + (1/2) x3
        let u = PbwElement::monomial(3, Multidegree::from_exponents(vec![1, 1, 0]), rat_int(1));
        let mut expect = Polynomial::var(3, 1).mul(&Polynomial::var(3, 2));
        expect.add_term(Multidegree::unit(3, 3), rat(1, 2));
        assert_eq!(xi_inverse(&l, &phi, &u).unwrap(), expect);
    }

    #[test]
    fn theta_xi_round_trip() {
        for l in builtins() {
            let phi = phi_symmetric(&l, 5);
            for md in monomials(3, 4) {
                let f = Polynomial::monomial(3, md, rat_int(1));
                let back = xi_inverse(&l, &phi, &coexp_xi(&l, &f)).unwrap();
                assert_eq!(back, f, "round trip failed for {}", l.name());
            }
        }
    }

    #[test]
    fn cutoff_guard() {
        let l = su2();
        let phi = phi_symmetric(&l, 2);
        let u = PbwElement::monomial(3, Multidegree::from_exponents(vec![2, 1, 0]), rat_int(1));
        assert!(matches!(
            xi_inverse(&l, &phi, &u),
            Err(PbwError::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn deformed_partial_on_generators() {
        for l in builtins() {
            let phi = phi_symmetric(&l, 4);
            let calc = DeformedCalculus::new(&l, &phi);
            for mu in 1..=3 {
                for v in 1..=3 {
                    let got = calc.partial(mu, &PbwElement::generator(3, v));
                    let expect = if mu == v {
                        PbwElement::one(3)
                    } else {
                        PbwElement::zero(3)
                    };
                    assert_eq!(got, expect);
                }
            }
        }
    }

    #[test]
    fn deformed_partial_su2_example() {
        // d3(X1 X2) = 1/2 on su2
        let l = su2();
        let phi = phi_symmetric(&l, 4);
        let u = PbwElement::monomial(3, Multidegree::from_exponents(vec![1, 1, 0]), rat_int(1));
        let got = deformed_partial(&l, &phi, 3, &u);
        assert_eq!(got, PbwElement::constant(3, rat(1, 2)));
    }

    #[test]
    fn deformed_partial_is_classical_on_abelian() {
        let l = LieAlgebra::abelian(3);
        let phi = phi_symmetric(&l, 5);
        let calc = DeformedCalculus::new(&l, &phi);
        for md in monomials(3, 4) {
            for mu in 1..=3 {
                let u = PbwElement::monomial(3, md.clone(), rat_int(1));
                let got = calc.partial(mu, &u);
                let expect = match md.bump(mu, -1) {
                    Some(lowered) => {
                        PbwElement::monomial(3, lowered, rat_int(md.get(mu) as i64))
                    }
                    None => PbwElement::zero(3),
                };
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn deformed_partials_commute() {
        for l in builtins() {
            let phi = phi_symmetric(&l, 5);
            let calc = DeformedCalculus::new(&l, &phi);
            for md in monomials(3, 4) {
                let u = PbwElement::monomial(3, md, rat_int(1));
                for mu in 1..=3 {
                    for nu in (mu + 1)..=3 {
                        let a = calc.partial(mu, &calc.partial(nu, &u));
                        let b = calc.partial(nu, &calc.partial(mu, &u));
                        assert_eq!(a, b, "partials do not commute for {}", l.name());
                    }
                }
            }
        }
    }

    #[test]
    fn transport_identity() {
        // xi^{-1}(d-hat^mu(u)) = d^mu(xi^{-1}(u)) for monomials of degree <= 5
        for l in builtins() {
            let phi = phi_symmetric(&l, 6);
            let calc = DeformedCalculus::new(&l, &phi);
            for md in monomials(3, 5) {
                let u = PbwElement::monomial(3, md, rat_int(1));
                for mu in 1..=3 {
                    let lhs = xi_inverse(&l, &phi, &calc.partial(mu, &u)).unwrap();
                    let rhs = crate::weyl::WeylOperator::d_var(3, mu, 6)
                        .apply(&xi_inverse(&l, &phi, &u).unwrap());
                    assert_eq!(lhs, rhs, "transport failed for {}", l.name());
                }
            }
        }
    }

    #[test]
    fn series_substitution_examples() {
        let l = LieAlgebra::abelian(3);
        let phi = phi_symmetric(&l, 4);
        let u = PbwElement::monomial(3, Multidegree::from_exponents(vec![1, 1, 0]), rat_int(1));
        // constant series: unchanged
        let one = TruncatedSeries::one(3, 4);
        assert_eq!(evaluate_series_at_deformed(&l, &phi, &one, &u), u);
        // d1 d2 applied to X1 X2 on abelian = 1
        let s = TruncatedSeries::var(3, 1, 4).mul(&TruncatedSeries::var(3, 2, 4));
        assert_eq!(
            evaluate_series_at_deformed(&l, &phi, &s, &u),
            PbwElement::one(3)
        );
    }

    #[test]
    fn star_pbw_examples() {
        // abelian: star = plain product
        let la = LieAlgebra::abelian(3);
        let phia = phi_symmetric(&la, 4);
        let f = Polynomial::var(3, 1).pow(2);
        let g = Polynomial::var(3, 2);
        assert_eq!(star_pbw(&la, &phia, &f, &g).unwrap(), f.mul(&g));

        // su2: x1 * x2 = x1 x2 + 1/2 x3
        let l = su2();
        let phi = phi_symmetric(&l, 4);
        let got = star_pbw(&l, &phi, &Polynomial::var(3, 1), &Polynomial::var(3, 2)).unwrap();
        let mut expect = Polynomial::var(3, 1).mul(&Polynomial::var(3, 2));
        expect.add_term(Multidegree::unit(3, 3), rat(1, 2));
        assert_eq!(got, expect);
    }

    #[test]
    fn star_pbw_associative_on_heisenberg() {
        let l = LieAlgebra::heisenberg();
        let phi = phi_symmetric(&l, 6);
        let x1 = Polynomial::var(3, 1);
        let x2 = Polynomial::var(3, 2);
        let lhs = star_pbw(&l, &phi, &star_pbw(&l, &phi, &x1, &x2).unwrap(), &x1).unwrap();
        let rhs = star_pbw(&l, &phi, &x1, &star_pbw(&l, &phi, &x2, &x1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
