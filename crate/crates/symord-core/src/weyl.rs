//! Normal-ordered elements of the semicompleted Weyl algebra: polynomials in
//! `x1..xn` times truncated series in `d1..dn`, with `[d^i, x_j] = delta^i_j`.
//!
//! The canonical form keeps every `x` to the left of every `d`; equality is
//! map equality of the normal-ordered data. The `x`-degree is never truncated
//! (polynomials are finite); only the `d`-degree carries a cutoff.

use crate::rat::{binomial, factorial, fmt_term, Rat};
use crate::series::{Multidegree, SeriesMatrix, TruncatedSeries};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial in `x1..xn` over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Multidegree, Rat>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
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

    /// The variable `x{var}` (1-based).
    pub fn var(n: usize, var: usize) -> Self {
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
        assert_eq!(self.n, other.n, "polynomial add: ambient mismatch");
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

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "polynomial mul: ambient mismatch");
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies the constant-coefficient operator `d^md` (falling factorials).
    pub fn derivative_md(&self, md: &Multidegree) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if let Some(lowered) = e.checked_sub(md) {
                let mut factor = Rat::one();
                for (var, k) in md.support() {
                    let ev = e.get(var);
                    for step in 0..k {
                        factor *= Rat::from_integer((ev - step).into());
                    }
                }
                out.add_term(lowered, c * factor);
            }
        }
        out
    }

    /// The part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (md, c) in &self.terms {
            if md.total() == d {
                out.add_term(md.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (md, c) in &self.terms {
            write!(f, "{}", fmt_term(c, &md.fmt_x(), first))?;
            first = false;
        }
        Ok(())
    }
}

/// A normal-ordered Weyl algebra element: map from `x`-monomial to its
/// `d`-series, all series sharing one cutoff.
#[derive(Debug, Clone)]
pub struct WeylOperator {
    n: usize,
    cutoff: u32,
    terms: BTreeMap<Multidegree, TruncatedSeries>,
}

impl PartialEq for WeylOperator {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl Eq for WeylOperator {}

impl WeylOperator {
    pub fn zero(n: usize, cutoff: u32) -> Self {
        WeylOperator {
            n,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, cutoff: u32) -> Self {
        Self::from_series(TruncatedSeries::one(n, cutoff))
    }

    /// Multiplication by `x{var}`.
    pub fn x_var(n: usize, var: usize, cutoff: u32) -> Self {
        let mut w = Self::zero(n, cutoff);
        w.add_part(Multidegree::unit(n, var), TruncatedSeries::one(n, cutoff));
        w
    }

    /// The derivative `d{var}`.
    pub fn d_var(n: usize, var: usize, cutoff: u32) -> Self {
        Self::from_series(TruncatedSeries::var(n, var, cutoff))
    }

    /// A pure differential operator with constant coefficients.
    pub fn from_series(s: TruncatedSeries) -> Self {
        let mut w = Self::zero(s.ambient(), s.cutoff());
        w.add_part(Multidegree::zero(s.ambient()), s);
        w
    }

    /// A pure multiplication operator.
    pub fn from_x_poly(p: &Polynomial, cutoff: u32) -> Self {
        let mut w = Self::zero(p.ambient(), cutoff);
        for (md, c) in p.terms() {
            w.add_part(
                md.clone(),
                TruncatedSeries::constant(p.ambient(), cutoff, c.clone()),
            );
        }
        w
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

    pub fn parts(&self) -> impl Iterator<Item = (&Multidegree, &TruncatedSeries)> {
        self.terms.iter()
    }

    pub fn add_part(&mut self, x_md: Multidegree, series: TruncatedSeries) {
        debug_assert_eq!(x_md.len(), self.n);
        assert_eq!(series.ambient(), self.n, "weyl part: ambient mismatch");
        assert_eq!(series.cutoff(), self.cutoff, "weyl part: cutoff mismatch");
        if series.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(x_md) {
            Entry::Vacant(v) => {
                v.insert(series);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&series);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "weyl add: ambient mismatch");
        assert_eq!(self.cutoff, other.cutoff, "weyl add: cutoff mismatch");
        let mut out = self.clone();
        for (md, s) in &other.terms {
            out.add_part(md.clone(), s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for (md, s) in &self.terms {
            out.add_part(md.clone(), s.neg());
        }
        out
    }

    pub fn scalar_mul(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for (md, s) in &self.terms {
            out.add_part(md.clone(), s.scalar_mul(c));
        }
        out
    }

    /// Normal-ordered product. Exact in `x`-degree, truncated at the shared
    /// cutoff in `d`-degree, via
    /// `d^m x^b = sum_k binom(m,k) binom(b,k) k! x^(b-k) d^(m-k)`.
    pub fn weyl_mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "weyl mul: ambient mismatch");
        assert_eq!(self.cutoff, other.cutoff, "weyl mul: cutoff mismatch");
        let n = self.n;
        let mut out = Self::zero(n, self.cutoff);
        for (xa, pa) in &self.terms {
            for (xb, pb) in &other.terms {
                for (m, cm) in pa.terms() {
                    // commute d^m past x^xb
                    for k in lower_multidegrees(m, xb) {
                        let mut coeff = cm.clone();
                        for (var, kv) in k.support() {
                            coeff *= binomial(m.get(var), kv)
                                * binomial(xb.get(var), kv)
                                * factorial(kv);
                        }
                        let x_out = xa.add(&xb.checked_sub(&k).expect("k <= xb"));
                        let m_rest = m.checked_sub(&k).expect("k <= m");
                        let series =
                            TruncatedSeries::monomial(n, m_rest, coeff, self.cutoff).mul(pb);
                        out.add_part(x_out.clone(), series);
                    }
                }
            }
        }
        out
    }

    /// The commutator `[self, other]` under [`weyl_mul`](Self::weyl_mul).
    pub fn commutator(&self, other: &Self) -> Self {
        self.weyl_mul(other).sub(&other.weyl_mul(self))
    }

    /// The standard Fock action on polynomials; exact.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(self.n, f.ambient(), "weyl apply: ambient mismatch");
        let mut out = Polynomial::zero(self.n);
        for (x_md, series) in &self.terms {
            let mut part = Polynomial::zero(self.n);
            for (m, cm) in series.terms() {
                part = part.add(&f.derivative_md(m).scalar_mul(cm));
            }
            for (e, c) in part.terms() {
                out.add_term(x_md.add(e), c.clone());
            }
        }
        out
    }

    /// Action on the constant polynomial `1`: keeps the constant part of each
    /// `x`-monomial's series.
    pub fn vacuum(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (x_md, series) in &self.terms {
            out.add_term(x_md.clone(), series.constant_term());
        }
        out
    }

    /// Drops every series term of degree above `d`.
    pub fn truncate_to(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, d.min(self.cutoff));
        for (md, s) in &self.terms {
            out.add_part(md.clone(), s.truncate_to(d.min(self.cutoff)));
        }
        out
    }
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (x_md, series) in &self.terms {
            for (d_md, c) in series.terms() {
                let x_part = x_md.fmt_x();
                let d_part = d_md.fmt_d();
                let monomial = match (x_part.is_empty(), d_part.is_empty()) {
                    (true, true) => String::new(),
                    (false, true) => x_part,
                    (true, false) => d_part,
                    (false, false) => format!("{x_part}*{d_part}"),
                };
                write!(f, "{}", fmt_term(c, &monomial, first))?;
                first = false;
            }
        }
        Ok(())
    }
}

/// All multidegrees `k` with `k <= min(m, b)` componentwise, in deterministic
/// order.
fn lower_multidegrees(m: &Multidegree, b: &Multidegree) -> Vec<Multidegree> {
    let caps: Vec<u32> = m
        .exponents()
        .iter()
        .zip(b.exponents())
        .map(|(a, c)| *a.min(c))
        .collect();
    let mut out = vec![Vec::new()];
    for cap in caps {
        let mut next = Vec::new();
        for prefix in out {
            for v in 0..=cap {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(Multidegree::from_exponents).collect()
}

/// The realized generator `x_b phi^b_i` (sum over `b`) for a realization
/// matrix `phi`.
pub fn realize_generator(phi: &SeriesMatrix, i: usize) -> WeylOperator {
    let n = phi.dim();
    let mut w = WeylOperator::zero(n, phi.cutoff());
    for b in 1..=n {
        w.add_part(Multidegree::unit(n, b), phi.entry(b, i).clone());
    }
    w
}

fn add_tensor_term(
    map: &mut BTreeMap<(Multidegree, Multidegree), Rat>,
    key: (Multidegree, Multidegree),
    c: Rat,
) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
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

/// The standard (unreduced) coproduct of a polynomial on monomials,
/// `x^e -> sum_k binom(e,k) x^k (x) x^(e-k)`, as a map on exponent pairs.
pub fn poly_coproduct(f: &Polynomial) -> BTreeMap<(Multidegree, Multidegree), Rat> {
    let mut out: BTreeMap<(Multidegree, Multidegree), Rat> = BTreeMap::new();
    for (e, c) in f.terms() {
        for k in lower_multidegrees(e, e) {
            let mut coeff = c.clone();
            for (var, kv) in k.support() {
                coeff *= binomial(e.get(var), kv);
            }
            let rest = e.checked_sub(&k).expect("k <= e");
            add_tensor_term(&mut out, (k, rest), coeff);
        }
    }
    out
}

/// Applies `A (x) id + id (x) A` to a polynomial tensor.
pub fn coderivation_action(
    a: &WeylOperator,
    tensor: &BTreeMap<(Multidegree, Multidegree), Rat>,
) -> BTreeMap<(Multidegree, Multidegree), Rat> {
    let n = a.ambient();
    let mut out: BTreeMap<(Multidegree, Multidegree), Rat> = BTreeMap::new();
    for ((l, r), c) in tensor {
        let on_left = a.apply(&Polynomial::monomial(n, l.clone(), c.clone()));
        for (e, v) in on_left.terms() {
            add_tensor_term(&mut out, (e.clone(), r.clone()), v.clone());
        }
        let on_right = a.apply(&Polynomial::monomial(n, r.clone(), c.clone()));
        for (e, v) in on_right.terms() {
            add_tensor_term(&mut out, (l.clone(), e.clone()), v.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::rat::{rat, rat_int};
    use crate::series::phi_symmetric;

    #[test]
    fn defining_relation() {
        // d1 * x1 = x1 d1 + 1
        let n = 2;
        let d1 = WeylOperator::d_var(n, 1, 4);
        let x1 = WeylOperator::x_var(n, 1, 4);
        let prod = d1.weyl_mul(&x1);
        let mut expect = WeylOperator::one(n, 4);
        expect.add_part(Multidegree::unit(n, 1), TruncatedSeries::var(n, 1, 4));
        assert_eq!(prod, expect);
        // x1 * d1 stays normal-ordered
        let prod2 = x1.weyl_mul(&d1);
        let mut expect2 = WeylOperator::zero(n, 4);
        expect2.add_part(Multidegree::unit(n, 1), TruncatedSeries::var(n, 1, 4));
        assert_eq!(prod2, expect2);
    }

    #[test]
    fn commutation_relations_exact() {
        let n = 3;
        for i in 1..=n {
            for j in 1..=n {
                let di = WeylOperator::d_var(n, i, 3);
                let xj = WeylOperator::x_var(n, j, 3);
                let comm = di.commutator(&xj);
                let expect = if i == j {
                    WeylOperator::one(n, 3)
                } else {
                    WeylOperator::zero(n, 3)
                };
                assert_eq!(comm, expect);
            }
        }
    }

    #[test]
    fn double_commutation() {
        // d1 d1 * x1 x1 = x1^2 d1^2 + 4 x1 d1 + 2
        let n = 1;
        let d1 = WeylOperator::d_var(n, 1, 4);
        let x1 = WeylOperator::x_var(n, 1, 4);
        let lhs = d1.weyl_mul(&d1).weyl_mul(&x1.weyl_mul(&x1));
        let mut expect = WeylOperator::zero(n, 4);
        expect.add_part(
            Multidegree::from_exponents(vec![2]),
            TruncatedSeries::monomial(n, Multidegree::from_exponents(vec![2]), rat_int(1), 4),
        );
        expect.add_part(
            Multidegree::from_exponents(vec![1]),
            TruncatedSeries::var(n, 1, 4).scalar_mul(&rat_int(4)),
        );
        expect.add_part(
            Multidegree::zero(n),
            TruncatedSeries::constant(n, 4, rat_int(2)),
        );
        assert_eq!(lhs, expect);
    }

    #[test]
    fn apply_basics() {
        let n = 2;
        // d1 (x1^2) = 2 x1
        let d1 = WeylOperator::d_var(n, 1, 3);
        let x1sq = Polynomial::var(n, 1).pow(2);
        assert_eq!(d1.apply(&x1sq), Polynomial::var(n, 1).scalar_mul(&rat_int(2)));
        // (x2 d1)(x1) = x2
        let mut op = WeylOperator::zero(n, 3);
        op.add_part(Multidegree::unit(n, 2), TruncatedSeries::var(n, 1, 3));
        assert_eq!(op.apply(&Polynomial::var(n, 1)), Polynomial::var(n, 2));
    }

    #[test]
    fn vacuum_examples() {
        let n = 2;
        // vacuum(x1 d2 + x1) = x1
        let mut op = WeylOperator::zero(n, 3);
        op.add_part(
            Multidegree::unit(n, 1),
            TruncatedSeries::var(n, 2, 3).add(&TruncatedSeries::one(n, 3)),
        );
        assert_eq!(op.vacuum(), Polynomial::var(n, 1));
        assert_eq!(WeylOperator::d_var(n, 1, 3).vacuum(), Polynomial::zero(n));
    }

    #[test]
    fn realized_generator_vacuum_is_the_variable() {
        // the realization has unit constant term, so its vacuum is x_i
        let l = LieAlgebra::su2();
        let phi = phi_symmetric(&l, 4);
        for i in 1..=3 {
            assert_eq!(
                realize_generator(&phi, i).vacuum(),
                Polynomial::var(3, i)
            );
        }
    }

    #[test]
    fn apply_is_module_action() {
        // apply(A*B, f) = apply(A, apply(B, f)) on a spread of small cases
        let n = 2;
        let cutoff = 6;
        let cases = [
            (
                WeylOperator::d_var(n, 1, cutoff),
                WeylOperator::x_var(n, 1, cutoff),
            ),
            (
                WeylOperator::x_var(n, 2, cutoff).weyl_mul(&WeylOperator::d_var(n, 1, cutoff)),
                WeylOperator::d_var(n, 2, cutoff).weyl_mul(&WeylOperator::d_var(n, 1, cutoff)),
            ),
            (
                WeylOperator::d_var(n, 2, cutoff),
                WeylOperator::x_var(n, 2, cutoff).weyl_mul(&WeylOperator::x_var(n, 2, cutoff)),
            ),
        ];
        let f = Polynomial::var(n, 1)
            .add(&Polynomial::var(n, 2))
            .pow(3);
        for (a, b) in cases {
            assert_eq!(a.weyl_mul(&b).apply(&f), a.apply(&b.apply(&f)));
        }
    }

    #[test]
    fn realized_generators_on_abelian() {
        let l = LieAlgebra::abelian(2);
        let phi = phi_symmetric(&l, 3);
        let x1 = realize_generator(&phi, 1);
        assert_eq!(x1, WeylOperator::x_var(2, 1, 3));
    }

    #[test]
    fn realized_generators_satisfy_brackets() {
        let cutoff = 6;
        for l in [
            LieAlgebra::su2(),
            LieAlgebra::heisenberg(),
            LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap(),
        ] {
            let n = l.dim();
            let phi = phi_symmetric(&l, cutoff);
            let gens: Vec<WeylOperator> =
                (1..=n).map(|i| realize_generator(&phi, i)).collect();
            for i in 1..=n {
                for j in 1..=n {
                    let lhs = gens[i - 1].commutator(&gens[j - 1]);
                    let mut rhs = WeylOperator::zero(n, cutoff);
                    for k in 1..=n {
                        rhs = rhs.add(&gens[k - 1].scalar_mul(&l.c(i, j, k)));
                    }
                    assert_eq!(
                        lhs.truncate_to(cutoff - 1),
                        rhs.truncate_to(cutoff - 1),
                        "bracket mismatch at ({i},{j}) for {}",
                        l.name()
                    );
                }
            }
        }
    }

    #[test]
    fn su2_realization_low_order() {
        // x^phi_1 = x1 + (1/2) x_b C^b_1 + (1/12) x_b (C^2)^b_1 at cutoff 2
        let l = LieAlgebra::su2();
        let phi = phi_symmetric(&l, 2);
        let got = realize_generator(&phi, 1);
        let c = crate::series::c_matrix(&l, 2);
        let c2 = c.pow(2);
        let mut expect = WeylOperator::x_var(3, 1, 2);
        for b in 1..=3 {
            expect.add_part(
                Multidegree::unit(3, b),
                c.entry(b, 1)
                    .scalar_mul(&rat(1, 2))
                    .add(&c2.entry(b, 1).scalar_mul(&rat(1, 12))),
            );
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn coderivation_property() {
        // A = x_s * chi with chi a pure d-series is a coderivation of the
        // standard polynomial coproduct.
        let n = 2;
        let cutoff = 6;
        let chi = TruncatedSeries::var(n, 1, cutoff)
            .mul(&TruncatedSeries::var(n, 2, cutoff))
            .add(&TruncatedSeries::var(n, 1, cutoff).scalar_mul(&rat(1, 3)))
            .add(&TruncatedSeries::one(n, cutoff));
        let mut a = WeylOperator::zero(n, cutoff);
        a.add_part(Multidegree::unit(n, 2), chi);

        let monomials = [
            Multidegree::from_exponents(vec![2, 1]),
            Multidegree::from_exponents(vec![0, 3]),
            Multidegree::from_exponents(vec![2, 3]),
            Multidegree::from_exponents(vec![1, 0]),
        ];
        for md in monomials {
            let f = Polynomial::monomial(n, md, rat_int(1));
            let lhs = coderivation_action(&a, &poly_coproduct(&f));
            let rhs = poly_coproduct(&a.apply(&f));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn display_canonical_order() {
        let n = 3;
        let mut op = WeylOperator::zero(n, 3);
        op.add_part(
            Multidegree::from_exponents(vec![2, 0, 0]),
            TruncatedSeries::var(n, 2, 3),
        );
        op.add_part(
            Multidegree::unit(n, 3),
            TruncatedSeries::constant(n, 3, rat_int(3)),
        );
        assert_eq!(op.to_string(), "3*x3 + x1^2*d2");
    }
}
