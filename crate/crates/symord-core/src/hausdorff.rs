//! Hausdorff series data for a concrete Lie algebra: the coordinate recursion
//! for the graded pieces `D_N(k, q)`, the bidegree recursions, closed-form
//! linear parts, an independent free-associative-algebra oracle, symmetry
//! checks, and the piecewise comparison against the deformed coproduct.
//!
//! Everything lives in coordinates: with `X = k.x` and `Y = q.x` (real
//! coefficient convention), the series is `H(X, Y) = D^a(k, q) x_a` and every
//! graded piece `D_N` is a polynomial in `k1..kn, q1..qn`.

use crate::algebra::LieAlgebra;
use crate::feynman::{BiTensor, CoproductTable};
use crate::rat::{factorial, fmt_term, Rat};
use crate::series::{bernoulli, Multidegree};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial in the commuting coefficient variables `k1..kn, q1..qn`,
/// keyed by the pair (k-exponents, q-exponents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KqPoly {
    n: usize,
    terms: BTreeMap<(Multidegree, Multidegree), Rat>,
}

impl KqPoly {
    pub fn zero(n: usize) -> Self {
        KqPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The variable `k{var}`.
    pub fn k_var(n: usize, var: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Multidegree::unit(n, var), Multidegree::zero(n), Rat::one());
        p
    }

    /// The variable `q{var}`.
    pub fn q_var(n: usize, var: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Multidegree::zero(n), Multidegree::unit(n, var), Rat::one());
        p
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Multidegree, Multidegree), &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, k: Multidegree, q: Multidegree, c: Rat) {
        debug_assert_eq!(k.len(), self.n);
        debug_assert_eq!(q.len(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((k, q)) {
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
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for ((k, q), c) in &other.terms {
            out.add_term(k.clone(), q.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, q), c) in &self.terms {
            out.add_term(k.clone(), q.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, q), v) in &self.terms {
            out.add_term(k.clone(), q.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for ((ka, qa), ca) in &self.terms {
            for ((kb, qb), cb) in &other.terms {
                out.add_term(ka.add(kb), qa.add(qb), ca * cb);
            }
        }
        out
    }

    /// The bihomogeneous part of k-degree `w` and q-degree `b`.
    pub fn bidegree_part(&self, w: u32, b: u32) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, q), c) in &self.terms {
            if k.total() == w && q.total() == b {
                out.add_term(k.clone(), q.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `(k, q) -> (-q, -k)`.
    pub fn swap_negate(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, q), c) in &self.terms {
            let sign = if (k.total() + q.total()) % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            out.add_term(q.clone(), k.clone(), c * sign);
        }
        out
    }

    /// Substitutes `q -> k` (the group-square diagonal).
    pub fn diagonal(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, q), c) in &self.terms {
            out.add_term(k.add(q), Multidegree::zero(self.n), c.clone());
        }
        out
    }

    /// Evaluates at rational vectors `k`, `q`.
    pub fn eval(&self, k: &[Rat], q: &[Rat]) -> Rat {
        assert_eq!(k.len(), self.n);
        assert_eq!(q.len(), self.n);
        let mut acc = Rat::zero();
        for ((ke, qe), c) in &self.terms {
            let mut term = c.clone();
            for (var, e) in ke.support() {
                for _ in 0..e {
                    term *= k[var - 1].clone();
                }
            }
            for (var, e) in qe.support() {
                for _ in 0..e {
                    term *= q[var - 1].clone();
                }
            }
            acc += term;
        }
        acc
    }
}

impl KqPoly {
    /// Terms sorted as monomials in the concatenated variables
    /// `k1..kn, q1..qn` (graded-lex); the canonical rendering order.
    pub fn sorted_terms(&self) -> Vec<(&(Multidegree, Multidegree), &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|((k, q), _)| {
            let mut joint = k.exponents().to_vec();
            joint.extend_from_slice(q.exponents());
            Multidegree::from_exponents(joint)
        });
        v
    }
}

impl fmt::Display for KqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((k, q), c) in self.sorted_terms() {
            let ks = k.fmt_letter("k");
            let qs = q.fmt_letter("q");
            let monomial = match (ks.is_empty(), qs.is_empty()) {
                (true, true) => String::new(),
                (false, true) => ks,
                (true, false) => qs,
                (false, false) => format!("{ks}*{qs}"),
            };
            write!(f, "{}", fmt_term(c, &monomial, first))?;
            first = false;
        }
        Ok(())
    }
}

/// A vector of coefficient polynomials indexed by the upper basis index; the
/// coordinate form of a Lie element `V^mu x_mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorPolynomial {
    n: usize,
    comps: Vec<KqPoly>,
}

impl VectorPolynomial {
    pub fn zero(n: usize) -> Self {
        VectorPolynomial {
            n,
            comps: vec![KqPoly::zero(n); n],
        }
    }

    /// The element `X = k.x`: component `mu` is `k_mu`.
    pub fn x_element(n: usize) -> Self {
        VectorPolynomial {
            n,
            comps: (1..=n).map(|v| KqPoly::k_var(n, v)).collect(),
        }
    }

    /// The element `Y = q.x`: component `mu` is `q_mu`.
    pub fn y_element(n: usize) -> Self {
        VectorPolynomial {
            n,
            comps: (1..=n).map(|v| KqPoly::q_var(n, v)).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn comp(&self, mu: usize) -> &KqPoly {
        &self.comps[mu - 1]
    }

    pub fn comp_mut(&mut self, mu: usize) -> &mut KqPoly {
        &mut self.comps[mu - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        VectorPolynomial {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        VectorPolynomial {
            n: self.n,
            comps: self.comps.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        VectorPolynomial {
            n: self.n,
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn bidegree_part(&self, w: u32, b: u32) -> Self {
        VectorPolynomial {
            n: self.n,
            comps: self.comps.iter().map(|p| p.bidegree_part(w, b)).collect(),
        }
    }

    fn map_comps(&self, f: impl Fn(&KqPoly) -> KqPoly) -> Self {
        VectorPolynomial {
            n: self.n,
            comps: self.comps.iter().map(f).collect(),
        }
    }
}

/// The Lie bracket in coordinates: `[A, B]^mu = C^mu_{ab} A^a B^b`.
pub fn bracket(l: &LieAlgebra, a: &VectorPolynomial, b: &VectorPolynomial) -> VectorPolynomial {
    let n = l.dim();
    let mut out = VectorPolynomial::zero(n);
    for i in 1..=n {
        if a.comp(i).is_zero() {
            continue;
        }
        for j in 1..=n {
            if b.comp(j).is_zero() {
                continue;
            }
            let prod = a.comp(i).mul(b.comp(j));
            for mu in 1..=n {
                let c = l.c(i, j, mu);
                if c.is_zero() {
                    continue;
                }
                *out.comp_mut(mu) = out.comp(mu).add(&prod.scale(&c));
            }
        }
    }
    out
}

/// Ordered tuples of positive integers of length `parts` summing to `total`.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn rat_u32(v: u32) -> Rat {
    Rat::from_integer(i64::from(v).into())
}

/// The graded pieces `D_1 .. D_nmax` of the Hausdorff series by the standard
/// recursion: `D_1 = k + q` and
/// `(N+1) D_{N+1} = (1/2)[X - Y, D_N]
///   + sum_{r>=1} B_{2r}/(2r)! sum_{s_1+..+s_{2r}=N} [D_{s1}, [.., [D_{s2r}, X+Y]..]]`.
pub fn dynkin_series(l: &LieAlgebra, nmax: u32) -> Vec<VectorPolynomial> {
    assert!(nmax >= 1);
    let n = l.dim();
    let x = VectorPolynomial::x_element(n);
    let y = VectorPolynomial::y_element(n);
    let xy = x.add(&y);
    let xmy = x.sub(&y);
    let half = Rat::one() / rat_u32(2);
    let mut d: Vec<VectorPolynomial> = vec![xy.clone()];
    for big_n in 1..nmax {
        let mut next = bracket(l, &xmy, &d[(big_n - 1) as usize]).scale(&half);
        let mut r = 1;
        while 2 * r <= big_n {
            let coeff = bernoulli(2 * r) / factorial(2 * r);
            if !coeff.is_zero() {
                let mut acc = VectorPolynomial::zero(n);
                for s in compositions(big_n, 2 * r) {
                    let mut inner = xy.clone();
                    for &si in s.iter().rev() {
                        inner = bracket(l, &d[(si - 1) as usize], &inner);
                    }
                    acc = acc.add(&inner);
                }
                next = next.add(&acc.scale(&coeff));
            }
            r += 1;
        }
        d.push(next.scale(&(Rat::one() / rat_u32(big_n + 1))));
    }
    d
}

/// The single piece `D_N`.
pub fn dynkin_d(l: &LieAlgebra, n_piece: u32) -> VectorPolynomial {
    dynkin_series(l, n_piece)
        .pop()
        .expect("nmax >= 1 yields at least one piece")
}

/// Which bidegree recursion to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BidegreeRoute {
    /// Peels one `X`: `(w+1) H_{w+1,b} = (1/2)[X, H_{w,b}] + ..` over tuples
    /// with `sum w_i = w`, `sum b_i = b`.
    WRecursion,
    /// Peels one `Y`: `b H_{w+1,b} = -(1/2)[Y, H_{w+1,b-1}] + ..` over tuples
    /// with `sum w_i = w+1`, `sum b_i = b-1`.
    BRecursion,
}

/// Ordered tuples of bidegrees `(w_i, b_i) != (0,0)` with prescribed sums.
fn bidegree_tuples(w_sum: u32, b_sum: u32, parts: u32) -> Vec<Vec<(u32, u32)>> {
    if parts == 0 {
        return if w_sum == 0 && b_sum == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for wi in 0..=w_sum {
        for bi in 0..=b_sum {
            if wi + bi == 0 {
                continue;
            }
            for mut rest in bidegree_tuples(w_sum - wi, b_sum - bi, parts - 1) {
                let mut v = vec![(wi, bi)];
                v.append(&mut rest);
                out.push(v);
            }
        }
    }
    out
}

/// The full table of bihomogeneous pieces `H_{w,b}` for `w + b <= pmax`,
/// computed by the requested route. Both routes are seeded with `H_{1,0} = X`
/// on the `b = 0` line and `H_{0,1} = Y` on the `w = 0` column (all other
/// boundary cells vanish since `log(exp(X)) = X`).
pub fn bigraded_table(
    l: &LieAlgebra,
    pmax: u32,
    route: BidegreeRoute,
) -> BTreeMap<(u32, u32), VectorPolynomial> {
    let n = l.dim();
    let x = VectorPolynomial::x_element(n);
    let y = VectorPolynomial::y_element(n);
    let half = Rat::one() / rat_u32(2);
    let mut h: BTreeMap<(u32, u32), VectorPolynomial> = BTreeMap::new();
    for b in 1..=pmax {
        h.insert(
            (0, b),
            if b == 1 {
                y.clone()
            } else {
                VectorPolynomial::zero(n)
            },
        );
    }
    for w in 1..=pmax {
        h.insert(
            (w, 0),
            if w == 1 {
                x.clone()
            } else {
                VectorPolynomial::zero(n)
            },
        );
    }
    match route {
        BidegreeRoute::WRecursion => {
            for wp in 1..=pmax {
                let w = wp - 1;
                for b in 1..=(pmax - wp) {
                    let mut val = bracket(l, &x, &h[&(w, b)]).scale(&half);
                    let mut r = 1;
                    while 2 * r <= w + b {
                        let coeff = bernoulli(2 * r) / factorial(2 * r);
                        if !coeff.is_zero() {
                            let mut acc = VectorPolynomial::zero(n);
                            for tuple in bidegree_tuples(w, b, 2 * r) {
                                let mut inner = x.clone();
                                for &(wi, bi) in tuple.iter().rev() {
                                    inner = bracket(l, &h[&(wi, bi)], &inner);
                                }
                                acc = acc.add(&inner);
                            }
                            val = val.add(&acc.scale(&coeff));
                        }
                        r += 1;
                    }
                    h.insert((wp, b), val.scale(&(Rat::one() / rat_u32(wp))));
                }
            }
        }
        BidegreeRoute::BRecursion => {
            for b in 1..=pmax {
                for wp in 1..=(pmax - b) {
                    let mut val = bracket(l, &y, &h[&(wp, b - 1)]).scale(&half).neg();
                    let mut r = 1;
                    while 2 * r < wp + b {
                        let coeff = bernoulli(2 * r) / factorial(2 * r);
                        if !coeff.is_zero() {
                            let mut acc = VectorPolynomial::zero(n);
                            for tuple in bidegree_tuples(wp, b - 1, 2 * r) {
                                let mut inner = y.clone();
                                for &(wi, bi) in tuple.iter().rev() {
                                    inner = bracket(l, &h[&(wi, bi)], &inner);
                                }
                                acc = acc.add(&inner);
                            }
                            val = val.add(&acc.scale(&coeff));
                        }
                        r += 1;
                    }
                    h.insert((wp, b), val.scale(&(Rat::one() / rat_u32(b))));
                }
            }
        }
    }
    h
}

/// One bihomogeneous piece `H_{w,b}` by the requested route.
pub fn bigraded_h(l: &LieAlgebra, w: u32, b: u32, route: BidegreeRoute) -> VectorPolynomial {
    bigraded_table(l, w + b, route)
        .remove(&(w, b))
        .expect("cell within table")
}

/// Truncated series in the free associative algebra on two letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSeries {
    max_len: usize,
    terms: BTreeMap<Vec<u8>, Rat>,
}

impl FreeSeries {
    pub fn zero(max_len: usize) -> Self {
        FreeSeries {
            max_len,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(max_len: usize) -> Self {
        let mut s = Self::zero(max_len);
        s.add_term(Vec::new(), Rat::one());
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, word: Vec<u8>, c: Rat) {
        if c.is_zero() || word.len() > self.max_len {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
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
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.max_len);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.max_len);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if wa.len() + wb.len() > self.max_len {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    /// `exp` of a single letter, truncated by word length.
    pub fn exp_letter(letter: u8, max_len: usize) -> Self {
        let mut s = Self::zero(max_len);
        for j in 0..=max_len {
            s.add_term(vec![letter; j], Rat::one() / factorial(j as u32));
        }
        s
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Self {
        let mut z = self.clone();
        z.add_term(Vec::new(), -Rat::one());
        let mut acc = FreeSeries::zero(self.max_len);
        let mut z_pow = FreeSeries::one(self.max_len);
        for m in 1..=self.max_len {
            z_pow = z_pow.mul(&z);
            if z_pow.terms.is_empty() {
                break;
            }
            let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
            acc = acc.add(&z_pow.scale(&(sign / rat_u32(m as u32))));
        }
        acc
    }
}

/// Independent oracle for the Hausdorff pieces: expand `log(exp(X) exp(Y))`
/// in the free associative algebra, then send each word of length `m` to its
/// left-nested bracketing divided by `m`, evaluated in the concrete algebra
/// with `X = k.x`, `Y = q.x`.
pub fn bch_oracle(l: &LieAlgebra, pmax: u32) -> Vec<VectorPolynomial> {
    let n = l.dim();
    let max_len = pmax as usize;
    let ex = FreeSeries::exp_letter(0, max_len);
    let ey = FreeSeries::exp_letter(1, max_len);
    let log = ex.mul(&ey).log();
    let x = VectorPolynomial::x_element(n);
    let y = VectorPolynomial::y_element(n);
    let letter = |b: u8| if b == 0 { x.clone() } else { y.clone() };
    let mut pieces = vec![VectorPolynomial::zero(n); max_len];
    for (word, c) in log.terms() {
        if word.is_empty() {
            continue;
        }
        let mut val = letter(word[0]);
        for &b in &word[1..] {
            val = bracket(l, &val, &letter(b));
        }
        let weight = c / rat_u32(word.len() as u32);
        pieces[word.len() - 1] = pieces[word.len() - 1].add(&val.scale(&weight));
    }
    pieces
}

/// Closed form for the pieces linear in `X`: `H_{1,b} = (B_b / b!) ad_Y^b(X)`.
pub fn linear_in_x_closed_form(l: &LieAlgebra, b: u32) -> VectorPolynomial {
    let n = l.dim();
    let y = VectorPolynomial::y_element(n);
    let mut val = VectorPolynomial::x_element(n);
    for _ in 0..b {
        val = bracket(l, &y, &val);
    }
    val.scale(&(bernoulli(b) / factorial(b)))
}

/// Closed form for the pieces linear in `Y`:
/// `H_{w,1} = (-1)^w (B_w / w!) ad_X^w(Y)`.
pub fn linear_in_y_closed_form(l: &LieAlgebra, w: u32) -> VectorPolynomial {
    let n = l.dim();
    let x = VectorPolynomial::x_element(n);
    let mut val = VectorPolynomial::y_element(n);
    for _ in 0..w {
        val = bracket(l, &x, &val);
    }
    let sign = if w.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
    val.scale(&(sign * bernoulli(w) / factorial(w)))
}

/// Comparison of the closed-form linear parts against the bidegree table.
#[derive(Debug, Clone)]
pub struct LinearPartsReport {
    pub nmax: u32,
    pub failures: Vec<(u32, u32)>,
}

impl LinearPartsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn linear_parts_check(l: &LieAlgebra, nmax: u32) -> LinearPartsReport {
    let table = bigraded_table(l, nmax, BidegreeRoute::WRecursion);
    let mut failures = Vec::new();
    for b in 0..nmax {
        if table[&(1, b)] != linear_in_x_closed_form(l, b) {
            failures.push((1, b));
        }
    }
    for w in 0..nmax {
        if table[&(w, 1)] != linear_in_y_closed_form(l, w) {
            failures.push((w, 1));
        }
    }
    LinearPartsReport { nmax, failures }
}

/// Outcome of the mirror symmetry `D_P(k, q) = -D_P(-q, -k)` and the
/// diagonal degeneration `D_P(k, k) = 0` for `P >= 2`.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub pmax: u32,
    pub mirror_failures: Vec<u32>,
    pub diagonal_failures: Vec<u32>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.mirror_failures.is_empty() && self.diagonal_failures.is_empty()
    }
}

pub fn hausdorff_symmetry_check(l: &LieAlgebra, pmax: u32) -> SymmetryReport {
    let d = dynkin_series(l, pmax);
    let mut mirror_failures = Vec::new();
    let mut diagonal_failures = Vec::new();
    for p in 1..=pmax {
        let piece = &d[(p - 1) as usize];
        let mirrored = piece.map_comps(|c| c.swap_negate());
        if !piece.add(&mirrored).is_zero() {
            mirror_failures.push(p);
        }
        if p >= 2 && !piece.map_comps(|c| c.diagonal()).is_zero() {
            diagonal_failures.push(p);
        }
    }
    SymmetryReport {
        pmax,
        mirror_failures,
        diagonal_failures,
    }
}

/// Substitutes a coproduct tensor into coefficient variables:
/// `d^L (x) d^R -> k^L q^R`.
pub fn coproduct_to_kq(n: usize, tensor: &BiTensor) -> KqPoly {
    let mut out = KqPoly::zero(n);
    for ((lft, rgt), c) in tensor.terms() {
        out.add_term(lft.clone(), rgt.clone(), c.clone());
    }
    out
}

/// Piecewise comparison of the deformed coproduct against the Hausdorff data.
#[derive(Debug, Clone)]
pub struct CoproductComparison {
    pub pmax: u32,
    /// `(P, mu)` cells where the coproduct does not match `D_P`.
    pub dynkin_failures: Vec<(u32, usize)>,
    /// `(w, b, mu)` cells where the coproduct does not match `H_{w,b}`.
    pub bidegree_failures: Vec<(u32, u32, usize)>,
}

impl CoproductComparison {
    pub fn passed(&self) -> bool {
        self.dynkin_failures.is_empty() && self.bidegree_failures.is_empty()
    }
}

/// Checks that the coproduct summands of total degree `P` map onto `D_P`
/// under `d^a (x) 1 -> k^a`, `1 (x) d^a -> q^a`, and bidegree by bidegree
/// onto the `H_{w,b}` table.
pub fn compare_coproduct(
    l: &LieAlgebra,
    table: &CoproductTable,
    pmax: u32,
) -> CoproductComparison {
    assert!(table.cutoff() >= pmax, "coproduct table too shallow");
    let n = l.dim();
    let d = dynkin_series(l, pmax);
    let h = bigraded_table(l, pmax, BidegreeRoute::WRecursion);
    let mut dynkin_failures = Vec::new();
    let mut bidegree_failures = Vec::new();
    for mu in 1..=n {
        let full = coproduct_to_kq(n, table.delta(mu));
        for p in 1..=pmax {
            let mut piece = KqPoly::zero(n);
            for w in 0..=p {
                piece = piece.add(&full.bidegree_part(w, p - w));
            }
            if piece != *d[(p - 1) as usize].comp(mu) {
                dynkin_failures.push((p, mu));
            }
            for w in 0..=p {
                let b = p - w;
                if full.bidegree_part(w, b) != *h[&(w, b)].comp(mu) {
                    bidegree_failures.push((w, b, mu));
                }
            }
        }
    }
    CoproductComparison {
        pmax,
        dynkin_failures,
        bidegree_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feynman::coproduct_trees_all;
    use crate::rat::{rat, rat_int};

    fn builtins() -> Vec<LieAlgebra> {
        vec![
            LieAlgebra::abelian(3),
            LieAlgebra::heisenberg(),
            LieAlgebra::su2(),
            LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap(),
        ]
    }

    #[test]
    fn first_piece_is_sum() {
        let l = LieAlgebra::su2();
        let d = dynkin_series(&l, 1);
        let expect = VectorPolynomial::x_element(3).add(&VectorPolynomial::y_element(3));
        assert_eq!(d[0], expect);
    }

    #[test]
    fn second_piece_is_half_bracket() {
        for l in builtins() {
            let d = dynkin_series(&l, 2);
            let half_bracket = bracket(
                &l,
                &VectorPolynomial::x_element(3),
                &VectorPolynomial::y_element(3),
            )
            .scale(&rat(1, 2));
            assert_eq!(d[1], half_bracket, "failed for {}", l.name());
        }
    }

    #[test]
    fn heisenberg_terminates_at_degree_two() {
        let l = LieAlgebra::heisenberg();
        let d = dynkin_series(&l, 6);
        for p in 3..=6usize {
            assert!(d[p - 1].is_zero(), "D_{p} should vanish");
        }
    }

    #[test]
    fn oracle_matches_recursion() {
        for l in builtins() {
            let pmax = 5;
            let d = dynkin_series(&l, pmax);
            let oracle = bch_oracle(&l, pmax);
            for p in 1..=pmax as usize {
                assert_eq!(
                    d[p - 1],
                    oracle[p - 1],
                    "oracle mismatch for {} at P={p}",
                    l.name()
                );
            }
        }
    }

    #[test]
    fn known_su2_fourth_order() {
        // H_4 = -(1/24)[Y,[X,[X,Y]]]
        let l = LieAlgebra::su2();
        let x = VectorPolynomial::x_element(3);
        let y = VectorPolynomial::y_element(3);
        let inner = bracket(&l, &x, &bracket(&l, &x, &y));
        let expect = bracket(&l, &y, &inner).scale(&rat(-1, 24));
        assert_eq!(dynkin_d(&l, 4), expect);
    }

    #[test]
    fn bidegree_routes_agree_and_split_dynkin() {
        for l in builtins() {
            let pmax = 5;
            let via_w = bigraded_table(&l, pmax, BidegreeRoute::WRecursion);
            let via_b = bigraded_table(&l, pmax, BidegreeRoute::BRecursion);
            let d = dynkin_series(&l, pmax);
            for p in 1..=pmax {
                let mut sum = VectorPolynomial::zero(3);
                for w in 0..=p {
                    let cell = (w, p - w);
                    assert_eq!(
                        via_w[&cell], via_b[&cell],
                        "route mismatch for {} at {cell:?}",
                        l.name()
                    );
                    sum = sum.add(&via_w[&cell]);
                }
                assert_eq!(
                    sum,
                    d[(p - 1) as usize],
                    "bidegree split mismatch for {} at P={p}",
                    l.name()
                );
            }
        }
    }

    #[test]
    fn h11_is_half_bracket() {
        let l = LieAlgebra::su2();
        let cell = bigraded_h(&l, 1, 1, BidegreeRoute::WRecursion);
        let expect = bracket(
            &l,
            &VectorPolynomial::x_element(3),
            &VectorPolynomial::y_element(3),
        )
        .scale(&rat(1, 2));
        assert_eq!(cell, expect);
    }

    #[test]
    fn linear_parts_match() {
        for l in builtins() {
            let report = linear_parts_check(&l, 5);
            assert!(
                report.passed(),
                "linear parts failed for {} at {:?}",
                l.name(),
                report.failures
            );
        }
    }

    #[test]
    fn symmetry_checks() {
        for l in builtins() {
            let report = hausdorff_symmetry_check(&l, 6);
            assert!(report.passed(), "symmetry failed for {}", l.name());
        }
    }

    #[test]
    fn coproduct_matches_hausdorff() {
        for l in builtins() {
            let pmax = 4;
            let table = coproduct_trees_all(&l, pmax);
            let report = compare_coproduct(&l, &table, pmax);
            assert!(
                report.passed(),
                "coproduct comparison failed for {}: {:?} {:?}",
                l.name(),
                report.dynkin_failures,
                report.bidegree_failures
            );
        }
    }

    #[test]
    fn abelian_table_is_flat() {
        let l = LieAlgebra::abelian(3);
        for (w, b) in [(1u32, 1u32), (2, 1), (1, 2)] {
            assert!(bigraded_h(&l, w, b, BidegreeRoute::WRecursion).is_zero());
        }
    }

    #[test]
    fn kq_rendering() {
        let l = LieAlgebra::su2();
        let d2 = dynkin_d(&l, 2);
        // D_2^3 = (1/2)(k1 q2 - k2 q1)
        assert_eq!(d2.comp(3).to_string(), "1/2*k1*q2 - 1/2*k2*q1");
    }
}
