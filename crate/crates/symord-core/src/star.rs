//! Star products by independent routes: the coproduct formula (a normal
//! ordered exponential of coproduct corrections), the PBW transport route,
//! and the exponential/Hausdorff route; plus the rotation-type operators
//! `M_t = C^l_{tm} x_l d^m` and their interaction with the star product.

use crate::algebra::LieAlgebra;
use crate::feynman::{coproduct_trees_all, BiTensor, CoproductTable};
use crate::hausdorff::dynkin_series;
use crate::pbw::{star_pbw, PbwError};
use crate::rat::{factorial, Rat};
use crate::series::{bernoulli, c_matrix, Multidegree, SeriesMatrix, TruncatedSeries};
use crate::weyl::{realize_generator, Polynomial, WeylOperator};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("coproduct table cutoff {cutoff} too small for total degree {needed}")]
    TableTooShallow { cutoff: u32, needed: u32 },
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

/// Applies a coproduct tensor to a pair of polynomials and multiplies:
/// `m(T(f (x) g)) = sum c (d^L f)(d^R g)`.
fn apply_bitensor(t: &BiTensor, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let n = f.ambient();
    let mut out = Polynomial::zero(n);
    for ((lft, rgt), c) in t.terms() {
        let df = f.derivative_md(lft);
        if df.is_zero() {
            continue;
        }
        let dg = g.derivative_md(rgt);
        if dg.is_zero() {
            continue;
        }
        out = out.add(&df.mul(&dg).scalar_mul(c));
    }
    out
}

/// The star product from the deformed coproduct, as the multinomial expansion
/// of the normal ordered exponential of the corrections
/// `R_l = Delta(d^l) - Delta_0(d^l)`:
/// `f * g = sum_i x^i / i! * m((prod_l R_l^{i_l})(f (x) g))`.
///
/// Each correction term has total degree at least 2, so the sum over the
/// exponent vector `i` is finite once the degrees of `f` and `g` are fixed.
pub fn star_coproduct_with_table(
    l: &LieAlgebra,
    table: &CoproductTable,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial, StarError> {
    let n = l.dim();
    let total = f.degree() + g.degree();
    if table.cutoff() < total {
        return Err(StarError::TableTooShallow {
            cutoff: table.cutoff(),
            needed: total,
        });
    }
    let corrections: Vec<BiTensor> = (1..=n)
        .map(|mu| {
            let delta = table.delta(mu).truncate_to(total);
            let mut d0 = BiTensor::zero(n, total);
            d0.add_term(Multidegree::unit(n, mu), Multidegree::zero(n), Rat::one());
            d0.add_term(Multidegree::zero(n), Multidegree::unit(n, mu), Rat::one());
            delta.sub(&d0)
        })
        .collect();
    let max_power = (total / 2) as usize;
    let powers: Vec<Vec<BiTensor>> = corrections
        .iter()
        .map(|r| {
            let mut pows = vec![BiTensor::unit(n, total)];
            for e in 1..=max_power {
                pows.push(pows[e - 1].mul(r));
            }
            pows
        })
        .collect();

    let mut out = Polynomial::zero(n);
    for exps in exponent_vectors(n, max_power as u32) {
        let mut tensor = BiTensor::unit(n, total);
        let mut weight = Rat::one();
        let mut x_md = vec![0u32; n];
        for (var, e) in exps.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            tensor = tensor.mul(&powers[var][*e as usize]);
            weight /= factorial(*e);
            x_md[var] = *e;
        }
        if tensor.is_zero() {
            continue;
        }
        let applied = apply_bitensor(&tensor, f, g);
        if applied.is_zero() {
            continue;
        }
        let x_poly = Polynomial::monomial(n, Multidegree::from_exponents(x_md), weight);
        out = out.add(&x_poly.mul(&applied));
    }
    Ok(out)
}

/// All exponent vectors with total at most `cap`.
fn exponent_vectors(n: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            let used: u32 = prefix.iter().sum();
            for e in 0..=cap.saturating_sub(used) {
                let mut p = prefix.clone();
                p.push(e);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Star product by the coproduct route with a tree-expansion table built on
/// demand at exactly the needed total degree.
pub fn star_coproduct(
    l: &LieAlgebra,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial, StarError> {
    let table = coproduct_trees_all(l, f.degree() + g.degree());
    star_coproduct_with_table(l, &table, f, g)
}

/// Route-by-route star product results with exact equality verdicts.
#[derive(Debug, Clone)]
pub struct StarReport {
    pub f: Polynomial,
    pub g: Polynomial,
    pub pbw: Polynomial,
    pub coproduct: Polynomial,
}

impl StarReport {
    pub fn routes_agree(&self) -> bool {
        self.pbw == self.coproduct
    }
}

/// Computes the star product by both the PBW route and the coproduct route.
pub fn star_both_routes(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    table: &CoproductTable,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<StarReport, StarError> {
    Ok(StarReport {
        f: f.clone(),
        g: g.clone(),
        pbw: star_pbw(l, phi, f, g)?,
        coproduct: star_coproduct_with_table(l, table, f, g)?,
    })
}

/// Associativity verdicts for one triple, on both routes.
#[derive(Debug, Clone)]
pub struct StarAssocReport {
    pub pbw_associative: bool,
    pub coproduct_associative: bool,
}

impl StarAssocReport {
    pub fn passed(&self) -> bool {
        self.pbw_associative && self.coproduct_associative
    }
}

pub fn star_associativity_check(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
) -> Result<StarAssocReport, StarError> {
    let total = f.degree() + g.degree() + h.degree();
    let table = coproduct_trees_all(l, total);
    let p_left = star_pbw(l, phi, &star_pbw(l, phi, f, g)?, h)?;
    let p_right = star_pbw(l, phi, f, &star_pbw(l, phi, g, h)?)?;
    let c_left =
        star_coproduct_with_table(l, &table, &star_coproduct_with_table(l, &table, f, g)?, h)?;
    let c_right =
        star_coproduct_with_table(l, &table, f, &star_coproduct_with_table(l, &table, g, h)?)?;
    Ok(StarAssocReport {
        pbw_associative: p_left == p_right,
        coproduct_associative: c_left == c_right,
    })
}

/// A polynomial-valued series in an auxiliary grading variable, used for
/// exact order-by-order exponential identities.
#[derive(Debug, Clone, PartialEq, Eq)]
struct GradedPoly {
    n: usize,
    /// coefficient of the grading variable to the power `p` at index `p`
    parts: Vec<Polynomial>,
}

impl GradedPoly {
    fn zero(n: usize, pmax: u32) -> Self {
        GradedPoly {
            n,
            parts: vec![Polynomial::zero(n); pmax as usize + 1],
        }
    }

    fn one(n: usize, pmax: u32) -> Self {
        let mut g = Self::zero(n, pmax);
        g.parts[0] = Polynomial::one(n);
        g
    }

    fn mul(&self, other: &Self) -> Self {
        let pmax = self.parts.len() - 1;
        let mut out = Self::zero(self.n, pmax as u32);
        for (i, a) in self.parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.parts.iter().enumerate() {
                if i + j > pmax || b.is_zero() {
                    continue;
                }
                out.parts[i + j] = out.parts[i + j].add(&a.mul(b));
            }
        }
        out
    }

    /// `exp` of a series with zero constant part in the grading variable.
    fn exp(&self) -> Self {
        let pmax = self.parts.len() - 1;
        assert!(self.parts[0].is_zero(), "exp needs positive grading");
        let mut acc = Self::one(self.n, pmax as u32);
        let mut pow = Self::one(self.n, pmax as u32);
        for m in 1..=pmax {
            pow = pow.mul(self);
            if pow.parts.iter().all(|p| p.is_zero()) {
                break;
            }
            let inv = Rat::one() / factorial(m as u32);
            for (slot, val) in pow.parts.iter().enumerate() {
                acc.parts[slot] = acc.parts[slot].add(&val.scalar_mul(&inv));
            }
        }
        acc
    }
}

/// Order-by-order comparison of `exp(k.x) * exp(q.x)` against
/// `exp(D(k,q).x)`; the grading counts the total number of `k` and `q`
/// factors, which both sides respect exactly.
#[derive(Debug, Clone)]
pub struct StarExpReport {
    pub pmax: u32,
    /// Per order `p = 0..=pmax`: (star side, Hausdorff side).
    pub orders: Vec<(Polynomial, Polynomial)>,
}

impl StarExpReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(|(a, b)| a == b)
    }

    pub fn first_failure(&self) -> Option<u32> {
        self.orders
            .iter()
            .position(|(a, b)| a != b)
            .map(|p| p as u32)
    }
}

/// Checks the exponential law of the star product in symmetric ordering:
/// the order-`p` part of `exp(k.x) * exp(q.x)` (a finite sum of star
/// products of truncated-exponential pieces) equals the order-`p` part of
/// `exp(D(k,q).x)` built from the Hausdorff pieces, for all `p <= pmax`.
pub fn star_exponential(
    l: &LieAlgebra,
    k: &[Rat],
    q: &[Rat],
    pmax: u32,
) -> Result<StarExpReport, StarError> {
    let n = l.dim();
    assert_eq!(k.len(), n);
    assert_eq!(q.len(), n);
    let table = coproduct_trees_all(l, pmax);

    let dot = |coeffs: &[Rat]| {
        let mut p = Polynomial::zero(n);
        for (var, c) in coeffs.iter().enumerate() {
            p.add_term(Multidegree::unit(n, var + 1), c.clone());
        }
        p
    };
    let kx = dot(k);
    let qx = dot(q);

    // left side: sum_{j+l=p} (k.x)^j/j! * (q.x)^l/l!
    let mut star_orders = Vec::new();
    for p in 0..=pmax {
        let mut acc = Polynomial::zero(n);
        for j in 0..=p {
            let fj = kx.pow(j).scalar_mul(&(Rat::one() / factorial(j)));
            let gl = qx.pow(p - j).scalar_mul(&(Rat::one() / factorial(p - j)));
            acc = acc.add(&star_coproduct_with_table(l, &table, &fj, &gl)?);
        }
        star_orders.push(acc);
    }

    // right side: exp(sum_Q t^Q D_Q(k,q).x) expanded in the grading variable
    let d = dynkin_series(l, pmax.max(1));
    let mut arg = GradedPoly::zero(n, pmax);
    for (idx, piece) in d.iter().enumerate() {
        if idx + 1 > pmax as usize {
            break;
        }
        let mut poly = Polynomial::zero(n);
        for mu in 1..=n {
            let coeff = piece.comp(mu).eval(k, q);
            poly.add_term(Multidegree::unit(n, mu), coeff);
        }
        arg.parts[idx + 1] = poly;
    }
    let rhs = arg.exp();

    let orders = star_orders.into_iter().zip(rhs.parts).collect();
    Ok(StarExpReport { pmax, orders })
}

/// The operator `M_t = C^l_{tm} x_l d^m`; its pairwise brackets realize the
/// adjoint representation.
pub fn m_operator(l: &LieAlgebra, tau: usize, cutoff: u32) -> WeylOperator {
    let n = l.dim();
    let mut w = WeylOperator::zero(n, cutoff);
    for lam in 1..=n {
        let mut series = TruncatedSeries::zero(n, cutoff);
        for mu in 1..=n {
            series.add_term(Multidegree::unit(n, mu), l.c(tau, mu, lam));
        }
        w.add_part(Multidegree::unit(n, lam), series);
    }
    w
}

/// The correction series, one per upper index `t`:
/// `chi^t_{mu nu} = sum_{N>=1} (-1)^N B_N/N!
///   [C^t_{mu a} (C^(N-1))^a_nu - d_a((C^(N-1))^t_nu) (C d)^a_mu]`.
/// The `N`-th summand is homogeneous of degree `N - 1`.
pub fn chi_series(l: &LieAlgebra, mu: usize, nu: usize, cutoff: u32) -> Vec<TruncatedSeries> {
    let n = l.dim();
    let c = c_matrix(l, cutoff);
    let mut out = vec![TruncatedSeries::zero(n, cutoff); n];
    let mut c_pow = SeriesMatrix::identity(n, cutoff);
    for big_n in 1..=(cutoff + 1) {
        let bn = bernoulli(big_n);
        if !bn.is_zero() {
            let sign = if big_n % 2 == 0 { Rat::one() } else { -Rat::one() };
            let weight = sign * bn / factorial(big_n);
            for tau in 1..=n {
                let mut first = TruncatedSeries::zero(n, cutoff);
                for a in 1..=n {
                    first = first.add(&c_pow.entry(a, nu).scalar_mul(&l.c(mu, a, tau)));
                }
                let mut second = TruncatedSeries::zero(n, cutoff);
                for a in 1..=n {
                    second = second.add(
                        &c_pow
                            .entry(tau, nu)
                            .partial_derivative(a)
                            .mul(c.entry(a, mu)),
                    );
                }
                out[tau - 1] = out[tau - 1].add(&first.sub(&second).scalar_mul(&weight));
            }
        }
        c_pow = c_pow.mul(&c);
        if c_pow.is_zero() {
            break;
        }
    }
    out
}

/// Both sides of the rotation identity
/// `M_mu(x_nu * f) - x_nu * (M_mu f) = M_mu(x_nu) f + M_t (chi^t_{mu nu} f)`
/// on test polynomials, where `x_nu * f` acts through the realized generator.
#[derive(Debug, Clone)]
pub struct ChiReport {
    pub mu: usize,
    pub nu: usize,
    /// Per test polynomial: (left side, right side).
    pub sides: Vec<(Polynomial, Polynomial)>,
}

impl ChiReport {
    pub fn passed(&self) -> bool {
        self.sides.iter().all(|(a, b)| a == b)
    }
}

pub fn chi_check(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    mu: usize,
    nu: usize,
    test_polys: &[Polynomial],
) -> ChiReport {
    let n = l.dim();
    let cutoff = phi.cutoff();
    let x_nu_star = realize_generator(phi, nu);
    let m_mu = m_operator(l, mu, cutoff);
    let chi = chi_series(l, mu, nu, cutoff);
    let m_ops: Vec<WeylOperator> = (1..=n).map(|tau| m_operator(l, tau, cutoff)).collect();
    let mut sides = Vec::new();
    for f in test_polys {
        let lhs = m_mu
            .apply(&x_nu_star.apply(f))
            .sub(&x_nu_star.apply(&m_mu.apply(f)));
        // M_mu(x_nu) = C^lambda_{mu nu} x_lambda
        let mut rhs = Polynomial::zero(n);
        for lam in 1..=n {
            rhs = rhs.add(&Polynomial::var(n, lam).scalar_mul(&l.c(mu, nu, lam)));
        }
        rhs = rhs.mul(f);
        for tau in 1..=n {
            let chi_f = WeylOperator::from_series(chi[tau - 1].clone()).apply(f);
            if chi_f.is_zero() {
                continue;
            }
            rhs = rhs.add(&m_ops[tau - 1].apply(&chi_f));
        }
        sides.push((lhs, rhs));
    }
    ChiReport { mu, nu, sides }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::series::phi_symmetric;

    fn builtins() -> Vec<LieAlgebra> {
        vec![
            LieAlgebra::abelian(3),
            LieAlgebra::heisenberg(),
            LieAlgebra::su2(),
            LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap(),
        ]
    }

    fn monomials(n: usize, d: u32) -> Vec<Polynomial> {
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
        out.into_iter()
            .map(|e| Polynomial::monomial(n, Multidegree::from_exponents(e), rat_int(1)))
            .collect()
    }

    #[test]
    fn abelian_star_is_plain_product() {
        let l = LieAlgebra::abelian(3);
        let f = Polynomial::var(3, 1).pow(2);
        let g = Polynomial::var(3, 2).add(&Polynomial::var(3, 3));
        assert_eq!(star_coproduct(&l, &f, &g).unwrap(), f.mul(&g));
    }

    #[test]
    fn su2_star_basic() {
        let l = LieAlgebra::su2();
        let got = star_coproduct(&l, &Polynomial::var(3, 1), &Polynomial::var(3, 2)).unwrap();
        let mut expect = Polynomial::var(3, 1).mul(&Polynomial::var(3, 2));
        expect.add_term(Multidegree::unit(3, 3), rat(1, 2));
        assert_eq!(got, expect);
    }

    #[test]
    fn coproduct_route_matches_pbw_route() {
        for l in builtins() {
            let phi = phi_symmetric(&l, 4);
            let table = coproduct_trees_all(&l, 4);
            for f in monomials(3, 2) {
                for g in monomials(3, 2) {
                    let report = star_both_routes(&l, &phi, &table, &f, &g).unwrap();
                    assert!(
                        report.routes_agree(),
                        "route mismatch for {} at f={f}, g={g}: pbw={}, coproduct={}",
                        l.name(),
                        report.pbw,
                        report.coproduct
                    );
                }
            }
        }
    }

    #[test]
    fn associativity_trivial_on_abelian() {
        let l = LieAlgebra::abelian(3);
        let phi = phi_symmetric(&l, 6);
        let f = Polynomial::var(3, 1).pow(2);
        let g = Polynomial::var(3, 2).add(&Polynomial::one(3));
        let h = Polynomial::var(3, 3);
        let report = star_associativity_check(&l, &phi, &f, &g, &h).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn associativity_both_routes() {
        let l = LieAlgebra::su2();
        let phi = phi_symmetric(&l, 6);
        let f = Polynomial::var(3, 1).add(&Polynomial::var(3, 2));
        let report = star_associativity_check(&l, &phi, &f, &f, &f).unwrap();
        assert!(report.passed());

        let kappa = LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        let phi = phi_symmetric(&kappa, 6);
        let g = Polynomial::var(3, 2).mul(&Polynomial::var(3, 3));
        let h = Polynomial::var(3, 1);
        let report = star_associativity_check(&kappa, &phi, &g, &h, &g).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn exponential_law_zero_vectors() {
        let l = LieAlgebra::su2();
        let z = vec![rat_int(0), rat_int(0), rat_int(0)];
        let report = star_exponential(&l, &z, &z, 3).unwrap();
        assert!(report.passed());
        assert_eq!(report.orders[0].0, Polynomial::one(3));
    }

    #[test]
    fn exponential_law_heisenberg() {
        let l = LieAlgebra::heisenberg();
        let k = vec![rat_int(1), rat_int(0), rat_int(0)];
        let q = vec![rat_int(0), rat_int(1), rat_int(0)];
        let report = star_exponential(&l, &k, &q, 4).unwrap();
        assert!(
            report.passed(),
            "first failure at {:?}",
            report.first_failure()
        );
    }

    #[test]
    fn exponential_law_su2() {
        let l = LieAlgebra::su2();
        let k = vec![rat_int(1), rat_int(0), rat_int(0)];
        let q = vec![rat_int(0), rat_int(1), rat_int(0)];
        let report = star_exponential(&l, &k, &q, 4).unwrap();
        assert!(
            report.passed(),
            "first failure at {:?}",
            report.first_failure()
        );
    }

    #[test]
    fn m_operators_close_under_bracket() {
        for l in builtins() {
            let cutoff = 3;
            let ops: Vec<WeylOperator> = (1..=3).map(|t| m_operator(&l, t, cutoff)).collect();
            for s in 1..=3usize {
                for t in 1..=3usize {
                    let lhs = ops[s - 1].commutator(&ops[t - 1]);
                    let mut rhs = WeylOperator::zero(3, cutoff);
                    for k in 1..=3usize {
                        rhs = rhs.add(&ops[k - 1].scalar_mul(&l.c(s, t, k)));
                    }
                    assert_eq!(lhs, rhs, "bracket mismatch for {}", l.name());
                }
            }
        }
    }

    #[test]
    fn m_operator_acts_coadjointly_on_derivatives() {
        // [M_t, d^r] = -C^r_{tm} d^m
        let l = LieAlgebra::su2();
        let cutoff = 3;
        for tau in 1..=3 {
            let m = m_operator(&l, tau, cutoff);
            for rho in 1..=3 {
                let d = WeylOperator::d_var(3, rho, cutoff);
                let lhs = m.commutator(&d);
                let mut rhs = WeylOperator::zero(3, cutoff);
                for mu in 1..=3 {
                    rhs = rhs
                        .add(&WeylOperator::d_var(3, mu, cutoff).scalar_mul(&-l.c(tau, mu, rho)));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn chi_series_low_order() {
        // the N=1 summand contributes (1/2) C^tau_{mu nu} to the constant term
        let l = LieAlgebra::su2();
        let chi = chi_series(&l, 1, 2, 4);
        for tau in 1..=3 {
            assert_eq!(chi[tau - 1].constant_term(), l.c(1, 2, tau) * rat(1, 2));
        }
    }

    #[test]
    fn chi_identity_abelian_trivial() {
        let l = LieAlgebra::abelian(3);
        let phi = phi_symmetric(&l, 4);
        let report = chi_check(&l, &phi, 1, 2, &monomials(3, 2));
        assert!(report.passed());
        for (lhs, _) in &report.sides {
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn chi_identity_su2_example() {
        let l = LieAlgebra::su2();
        let phi = phi_symmetric(&l, 4);
        let report = chi_check(&l, &phi, 1, 2, &[Polynomial::var(3, 3)]);
        assert!(report.passed());
    }

    #[test]
    fn chi_identity_sweep() {
        let kappa = LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        for l in [LieAlgebra::su2(), kappa] {
            let phi = phi_symmetric(&l, 5);
            let polys = monomials(3, 2);
            for mu in 1..=3 {
                for nu in 1..=3 {
                    let report = chi_check(&l, &phi, mu, nu, &polys);
                    assert!(
                        report.passed(),
                        "chi identity failed for {} at ({mu},{nu})",
                        l.name()
                    );
                }
            }
        }
    }
}
