//! The acceptance suite: every verification the project promises, as
//! callable checks with exact pass/fail outcomes. The same functions back the
//! `acceptance` integration test target and the CLI `check-all` command.
//!
//! All bounds are fixed here: dimension 3 test algebras, series cutoff 6,
//! coproduct degree 5 (4 where stated), and fixed seeds for the randomized
//! property sweeps. Every comparison is exact rational equality.

use crate::algebra::{verify_jacobi, LieAlgebra};
use crate::feynman::{
    coproduct_adjoint_all, coproduct_trees_all, fev_planar, s1p_symmetry_check, BiTensor,
};
use crate::hausdorff::{
    bch_oracle, bigraded_table, compare_coproduct, dynkin_series, hausdorff_symmetry_check,
    BidegreeRoute,
};
use crate::pbw::{coexp_xi, pbw_mul, pbw_pow, xi_inverse, DeformedCalculus, PbwElement};
use crate::rat::{binomial, factorial, rat, rat_int, Rat};
use crate::series::{
    bernoulli_identity_check, phi_symmetric, verify_phi_equation, Multidegree, TruncatedSeries,
};
use crate::star::{chi_check, star_both_routes, star_exponential};
use crate::trees::{
    contributing_filter, count_ordered, double_factorial_count, enumerate_ordered,
    enumerate_trees,
};
use crate::weyl::{coderivation_action, poly_coproduct, Polynomial, WeylOperator};
use crate::feynman::CommutatorCache;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Series cutoff used by the deepest checks.
pub const CUTOFF: u32 = 6;
/// Coproduct / Hausdorff degree used by the deepest checks.
pub const DEGREE: u32 = 5;

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

impl CheckResult {
    fn record(name: &str, start: Instant, passed: bool, details: String) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            details,
            millis: start.elapsed().as_millis(),
        }
    }
}

/// The standard test algebras: abelian, Heisenberg, su2-type and kappa-type,
/// all of dimension 3.
pub fn standard_algebras() -> Vec<LieAlgebra> {
    vec![
        LieAlgebra::abelian(3),
        LieAlgebra::heisenberg(),
        LieAlgebra::su2(),
        kappa3(),
    ]
}

fn kappa3() -> LieAlgebra {
    LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).expect("kappa(3) is valid")
}

/// The non-abelian subset used where the abelian case is vacuous.
fn nonabelian_algebras() -> Vec<LieAlgebra> {
    vec![LieAlgebra::heisenberg(), LieAlgebra::su2(), kappa3()]
}

/// All monomials of total degree at most `d` in `n` variables (graded order).
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Multidegree> {
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
    let mut mds: Vec<Multidegree> = out.into_iter().map(Multidegree::from_exponents).collect();
    mds.sort();
    mds
}

/// The symmetric realization matrix solves its defining
/// equation through degree `CUTOFF - 1` on the non-abelian builtins.
pub fn check_phi_equation() -> CheckResult {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    for l in nonabelian_algebras() {
        let phi = phi_symmetric(&l, CUTOFF);
        let report = verify_phi_equation(&l, &phi);
        if !report.passed() {
            passed = false;
        }
        lines.push(format!(
            "{}: window={} {}",
            l.name(),
            report.window,
            if report.passed() { "ok" } else { "FAIL" }
        ));
    }
    CheckResult::record("phi-equation", start, passed, lines.join("; "))
}

/// The vacuum map inverts symmetrization on all monomials of
/// degree at most 5, for every builtin.
pub fn check_theta_xi_roundtrip() -> CheckResult {
    let start = Instant::now();
    let mut passed = true;
    let mut count = 0usize;
    for l in standard_algebras() {
        let phi = phi_symmetric(&l, CUTOFF);
        for md in monomials_up_to(3, 5) {
            let f = Polynomial::monomial(3, md, Rat::one());
            let back = xi_inverse(&l, &phi, &coexp_xi(&l, &f)).expect("cutoff adequate");
            if back != f {
                passed = false;
            }
            count += 1;
        }
    }
    CheckResult::record(
        "theta-xi-roundtrip",
        start,
        passed,
        format!("{count} monomials over {} algebras", standard_algebras().len()),
    )
}

/// The explicit low-order coproduct built directly from structure constants:
/// `1 (x) d + d (x) 1 + (1/2) C d (x) d
///  + (1/12) C C (d (x) dd + dd (x) d) - (1/24) C C C dd (x) dd`.
fn explicit_display_table(l: &LieAlgebra, p: u32) -> Vec<BiTensor> {
    let n = l.dim();
    let mut per_mu = Vec::new();
    for mu in 1..=n {
        let mut t = BiTensor::zero(n, p);
        t.add_term(Multidegree::zero(n), Multidegree::unit(n, mu), Rat::one());
        t.add_term(Multidegree::unit(n, mu), Multidegree::zero(n), Rat::one());
        for a in 1..=n {
            for b in 1..=n {
                let c1 = l.c(a, b, mu);
                if !c1.is_zero() {
                    t.add_term(
                        Multidegree::unit(n, a),
                        Multidegree::unit(n, b),
                        c1 * rat(1, 2),
                    );
                }
                for g in 1..=n {
                    let mut c2 = Rat::zero();
                    for k in 1..=n {
                        c2 += l.c(a, b, k) * l.c(k, g, mu);
                    }
                    if !c2.is_zero() {
                        let single = Multidegree::unit(n, a);
                        let double = Multidegree::unit(n, b).add(&Multidegree::unit(n, g));
                        t.add_term(single.clone(), double.clone(), &c2 * rat(1, 12));
                        t.add_term(double, single, &c2 * rat(1, 12));
                    }
                    for d in 1..=n {
                        let mut c3 = Rat::zero();
                        for k in 1..=n {
                            for s in 1..=n {
                                c3 += l.c(a, b, k) * l.c(k, g, s) * l.c(s, d, mu);
                            }
                        }
                        if !c3.is_zero() {
                            t.add_term(
                                Multidegree::unit(n, a).add(&Multidegree::unit(n, g)),
                                Multidegree::unit(n, b).add(&Multidegree::unit(n, d)),
                                c3 * rat(-1, 24),
                            );
                        }
                    }
                }
            }
        }
        per_mu.push(t);
    }
    per_mu
}

/// Both coproduct routes reproduce the explicit fourth-order
/// expansion, coefficient by coefficient, on the su2-type algebra.
pub fn check_explicit_coproduct() -> CheckResult {
    let start = Instant::now();
    let l = LieAlgebra::su2();
    let p = 4;
    let expected = explicit_display_table(&l, p);
    let trees = coproduct_trees_all(&l, p);
    let phi = phi_symmetric(&l, p);
    let adjoint = coproduct_adjoint_all(&l, &phi, p).expect("cutoff adequate");
    let mut passed = true;
    for mu in 1..=3 {
        if *trees.delta(mu) != expected[mu - 1] || *adjoint.delta(mu) != expected[mu - 1] {
            passed = false;
        }
    }
    CheckResult::record(
        "explicit-coproduct",
        start,
        passed,
        "coefficients 1/2, 1/12, -1/24 at degree 4 on su2, both routes".to_string(),
    )
}

/// The numerated-tree census agrees between the recursion, the
/// closed form and brute enumeration; the contributing cell (4,1) has 8
/// shapes.
pub fn check_tree_census() -> CheckResult {
    let start = Instant::now();
    let expect = [1u128, 1, 3, 15, 105];
    let mut passed = true;
    for (idx, &val) in expect.iter().enumerate() {
        let w = idx + 1;
        let by_recursion = count_ordered(w, 0);
        let by_closed_form = double_factorial_count(w);
        let by_enumeration = enumerate_ordered(w, 0).expect("in range").len() as u128;
        if by_recursion != val || by_closed_form != val || by_enumeration != val {
            passed = false;
        }
    }
    let contributing = enumerate_trees(4, 1)
        .expect("in range")
        .into_iter()
        .filter(contributing_filter)
        .count();
    if contributing != 8 {
        passed = false;
    }
    CheckResult::record(
        "tree-census",
        start,
        passed,
        format!(
            "counts 1,1,3,15,105 by recursion/closed form/enumeration; contributing (4,1) cell = {contributing}"
        ),
    )
}

/// The reference single-diagram evaluation (white root with a
/// black child and a white leaf) equals `(1/12) sum_k (Cd)^k_{a1} C^mu_{k a2}`.
pub fn check_feynman_diagram() -> CheckResult {
    let start = Instant::now();
    let l = LieAlgebra::su2();
    let t = crate::trees::OrderedTree {
        tree: crate::trees::PlanarTree::White(vec![
            crate::trees::PlanarTree::Black,
            crate::trees::PlanarTree::white_leaf(),
        ]),
        labels: vec![1, 2],
    };
    let tensor = crate::feynman::ev(&l, &t);
    let c = crate::series::c_matrix(&l, 1);
    let mut passed = true;
    for mu in 1..=3 {
        for a1 in 1..=3 {
            for a2 in 1..=3 {
                let mut expect = TruncatedSeries::zero(3, 1);
                for k in 1..=3 {
                    expect = expect.add(&c.entry(k, a1).scalar_mul(&l.c(k, a2, mu)));
                }
                expect = expect.scalar_mul(&rat(1, 12));
                if *tensor.get(mu, &[a1, a2]) != expect {
                    passed = false;
                }
            }
        }
    }
    CheckResult::record(
        "feynman-diagram",
        start,
        passed,
        "weight (1/12), all index combinations on su2".to_string(),
    )
}

/// The flip symmetry between the (1,p) tree and the (p,1) cell
/// for p = 1..4, plus the Bernoulli convolution identity for l = 1..8.
pub fn check_s1p_and_bernoulli() -> CheckResult {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    for l in [LieAlgebra::su2(), kappa3()] {
        for p in 1..=4 {
            let report = s1p_symmetry_check(&l, p);
            if !report.passed() {
                passed = false;
                lines.push(format!("{} p={p} FAIL", l.name()));
            }
        }
    }
    for lv in 1..=8 {
        let report = bernoulli_identity_check(lv);
        if !report.passed() {
            passed = false;
            lines.push(format!("bernoulli l={lv} FAIL"));
        }
    }
    let details = if lines.is_empty() {
        "flip symmetry p=1..4 on su2 and kappa; Bernoulli identity l=1..8".to_string()
    } else {
        lines.join("; ")
    };
    CheckResult::record("s1p-symmetry-bernoulli", start, passed, details)
}

/// Hausdorff cross-validation: the recursion equals the free
/// algebra oracle through degree 5, both bidegree routes agree and split the
/// graded pieces, and the mirror/diagonal symmetries hold through degree 6.
pub fn check_hausdorff_cross_validation() -> CheckResult {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    for l in standard_algebras() {
        let d = dynkin_series(&l, DEGREE);
        let oracle = bch_oracle(&l, DEGREE);
        for p in 1..=DEGREE as usize {
            if d[p - 1] != oracle[p - 1] {
                passed = false;
                lines.push(format!("{} oracle P={p} FAIL", l.name()));
            }
        }
        let via_w = bigraded_table(&l, DEGREE, BidegreeRoute::WRecursion);
        let via_b = bigraded_table(&l, DEGREE, BidegreeRoute::BRecursion);
        for p in 1..=DEGREE {
            let mut sum = crate::hausdorff::VectorPolynomial::zero(3);
            for w in 0..=p {
                let cell = (w, p - w);
                if via_w[&cell] != via_b[&cell] {
                    passed = false;
                    lines.push(format!("{} routes {cell:?} FAIL", l.name()));
                }
                sum = sum.add(&via_w[&cell]);
            }
            if sum != d[(p - 1) as usize] {
                passed = false;
                lines.push(format!("{} split P={p} FAIL", l.name()));
            }
        }
        let sym = hausdorff_symmetry_check(&l, CUTOFF);
        if !sym.passed() {
            passed = false;
            lines.push(format!("{} symmetry FAIL", l.name()));
        }
    }
    let details = if lines.is_empty() {
        format!(
            "oracle = recursion (P<={DEGREE}), route equality and split (P<={DEGREE}), symmetry (P<={CUTOFF}), all builtins"
        )
    } else {
        lines.join("; ")
    };
    CheckResult::record("hausdorff-cross-validation", start, passed, details)
}

/// The coproduct corresponds to the Hausdorff pieces through
/// degree 5, and the two star-product routes agree on every monomial pair of
/// total degree at most 4, on the non-abelian builtins.
pub fn check_star_correspondence() -> CheckResult {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    for l in nonabelian_algebras() {
        let table = coproduct_trees_all(&l, DEGREE);
        let cmp = compare_coproduct(&l, &table, DEGREE);
        if !cmp.passed() {
            passed = false;
            lines.push(format!("{} coproduct-vs-hausdorff FAIL", l.name()));
        }
        // direct route equality at the full working degree
        let phi_deep = phi_symmetric(&l, CUTOFF);
        let adjoint = coproduct_adjoint_all(&l, &phi_deep, DEGREE).expect("cutoff adequate");
        for mu in 1..=3 {
            if table.delta(mu) != adjoint.delta(mu) {
                passed = false;
                lines.push(format!("{} route equality mu={mu} FAIL", l.name()));
            }
        }
        let phi = phi_symmetric(&l, 4);
        let mut pairs = 0usize;
        for fa in monomials_up_to(3, 4) {
            for fb in monomials_up_to(3, 4) {
                if fa.total() + fb.total() > 4 {
                    continue;
                }
                let f = Polynomial::monomial(3, fa.clone(), Rat::one());
                let g = Polynomial::monomial(3, fb.clone(), Rat::one());
                let report =
                    star_both_routes(&l, &phi, &table, &f, &g).expect("cutoffs adequate");
                if !report.routes_agree() {
                    passed = false;
                    lines.push(format!("{} star f={f} g={g} FAIL", l.name()));
                }
                pairs += 1;
            }
        }
        lines.push(format!("{}: {} star pairs", l.name(), pairs));
    }
    CheckResult::record("star-correspondence", start, passed, lines.join("; "))
}

/// The exponential law on a 3x3 grid of rational coefficient
/// vectors at order 4, for every builtin.
pub fn check_star_exponential_grid() -> CheckResult {
    let start = Instant::now();
    let ks = [
        vec![rat_int(1), rat_int(0), rat_int(0)],
        vec![rat_int(0), rat(1, 2), rat_int(-1)],
        vec![rat(1, 3), rat_int(1), rat_int(0)],
    ];
    let qs = [
        vec![rat_int(0), rat_int(1), rat_int(0)],
        vec![rat(1, 2), rat_int(0), rat_int(1)],
        vec![rat_int(-1), rat(1, 4), rat_int(1)],
    ];
    let mut passed = true;
    let mut runs = 0usize;
    for l in standard_algebras() {
        for k in &ks {
            for q in &qs {
                let report = star_exponential(&l, k, q, 4).expect("bounds adequate");
                if !report.passed() {
                    passed = false;
                }
                runs += 1;
            }
        }
    }
    CheckResult::record(
        "star-exponential-grid",
        start,
        passed,
        format!("{runs} grid points at order 4"),
    )
}

/// The rotation-correction identity for every index pair on
/// monomials of degree at most 2, at cutoff 5.
pub fn check_chi_identity() -> CheckResult {
    let start = Instant::now();
    let mut passed = true;
    let polys: Vec<Polynomial> = monomials_up_to(3, 2)
        .into_iter()
        .map(|md| Polynomial::monomial(3, md, Rat::one()))
        .collect();
    for l in [LieAlgebra::su2(), kappa3()] {
        let phi = phi_symmetric(&l, 5);
        for mu in 1..=3 {
            for nu in 1..=3 {
                if !chi_check(&l, &phi, mu, nu, &polys).passed() {
                    passed = false;
                }
            }
        }
    }
    CheckResult::record(
        "chi-identity",
        start,
        passed,
        "all index pairs, monomials of degree <= 2, su2 and kappa at cutoff 5".to_string(),
    )
}

fn random_pbw(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize) -> PbwElement {
    let mut el = PbwElement::zero(n);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        el.add_term(
            Multidegree::from_exponents(e),
            rat_int(rng.gen_range(-3..=3)),
        );
    }
    el
}

fn random_weyl(rng: &mut ChaCha8Rng, n: usize, cutoff: u32) -> WeylOperator {
    let mut op = WeylOperator::zero(n, cutoff);
    for _ in 0..2 {
        let mut x = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=2u32) {
            x[rng.gen_range(0..n)] += 1;
        }
        let mut s = TruncatedSeries::zero(n, cutoff);
        for _ in 0..2 {
            let mut d = vec![0u32; n];
            for _ in 0..rng.gen_range(0..=2u32) {
                d[rng.gen_range(0..n)] += 1;
            }
            s.add_term(
                Multidegree::from_exponents(d),
                rat_int(rng.gen_range(-2..=2)),
            );
        }
        op.add_part(Multidegree::from_exponents(x), s);
    }
    op
}

/// Property sweep: associativity of the enveloping product on random
/// degree-bounded triples, every builtin.
pub fn check_pbw_associativity() -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
    let mut passed = true;
    for l in standard_algebras() {
        for _ in 0..6 {
            let a = random_pbw(&mut rng, 3, 3, 2);
            let b = random_pbw(&mut rng, 3, 3, 2);
            let c = random_pbw(&mut rng, 3, 3, 2);
            let lhs = pbw_mul(&l, &pbw_mul(&l, &a, &b), &c);
            let rhs = pbw_mul(&l, &a, &pbw_mul(&l, &b, &c));
            if lhs != rhs {
                passed = false;
            }
        }
    }
    CheckResult::record(
        "pbw-associativity",
        start,
        passed,
        "6 random degree<=3 triples per builtin, fixed seed".to_string(),
    )
}

/// Property sweep: associativity of the normal-ordered product on
/// random operators.
pub fn check_weyl_associativity() -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0002);
    let mut passed = true;
    for _ in 0..8 {
        let a = random_weyl(&mut rng, 3, 6);
        let b = random_weyl(&mut rng, 3, 6);
        let c = random_weyl(&mut rng, 3, 6);
        if a.weyl_mul(&b).weyl_mul(&c) != a.weyl_mul(&b.weyl_mul(&c)) {
            passed = false;
        }
    }
    CheckResult::record(
        "weyl-associativity",
        start,
        passed,
        "8 random triples at cutoff 6, fixed seed".to_string(),
    )
}

/// Property sweep: operators `x_s * series` are coderivations of the
/// standard polynomial coproduct, on random series and monomials.
pub fn check_coderivation() -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
    let mut passed = true;
    for _ in 0..6 {
        let n = 3;
        let cutoff = 6;
        let sigma = rng.gen_range(1..=n);
        let mut chi = TruncatedSeries::zero(n, cutoff);
        for _ in 0..3 {
            let mut d = vec![0u32; n];
            for _ in 0..rng.gen_range(0..=3u32) {
                d[rng.gen_range(0..n)] += 1;
            }
            chi.add_term(
                Multidegree::from_exponents(d),
                rat_int(rng.gen_range(-2..=2)),
            );
        }
        let mut a = WeylOperator::zero(n, cutoff);
        a.add_part(Multidegree::unit(n, sigma), chi);
        let mut e = vec![0u32; n];
        for _ in 0..5 {
            e[rng.gen_range(0..n)] += 1;
        }
        let f = Polynomial::monomial(n, Multidegree::from_exponents(e), Rat::one());
        let lhs = coderivation_action(&a, &poly_coproduct(&f));
        let rhs = poly_coproduct(&a.apply(&f));
        if lhs != rhs {
            passed = false;
        }
    }
    CheckResult::record(
        "coderivation",
        start,
        passed,
        "6 random x*series operators on degree-5 monomials, fixed seed".to_string(),
    )
}

/// Property sweep: deformed partials commute pairwise on random
/// monomials of degree at most 4, every builtin.
pub fn check_commuting_partials() -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0004);
    let mut passed = true;
    for l in standard_algebras() {
        let phi = phi_symmetric(&l, CUTOFF);
        let calc = DeformedCalculus::new(&l, &phi);
        for _ in 0..8 {
            let u = random_pbw(&mut rng, 3, 4, 2);
            for mu in 1..=3 {
                for nu in (mu + 1)..=3 {
                    let ab = calc.partial(mu, &calc.partial(nu, &u));
                    let ba = calc.partial(nu, &calc.partial(mu, &u));
                    if ab != ba {
                        passed = false;
                    }
                }
            }
        }
    }
    CheckResult::record(
        "commuting-partials",
        start,
        passed,
        "8 random degree<=4 elements per builtin, all index pairs, fixed seed".to_string(),
    )
}

/// Property sweep: the binomial expansion of a deformed derivative over
/// a power of a linear element,
/// `d^mu(a^p f) = sum_k binom(p,k) a^{t1}..a^{tk} a^{p-k} [..[d^mu,x_{t1}],..](f)`.
pub fn check_linear_power_expansion() -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0005);
    let mut passed = true;
    for l in [LieAlgebra::su2(), kappa3()] {
        let phi = phi_symmetric(&l, CUTOFF);
        let calc = DeformedCalculus::new(&l, &phi);
        let ncs = CommutatorCache::new(&phi);
        for _ in 0..2 {
            let coeffs: Vec<Rat> = (0..3).map(|_| rat_int(rng.gen_range(-2..=2))).collect();
            let mut a_hat = PbwElement::zero(3);
            for (var, c) in coeffs.iter().enumerate() {
                a_hat.add_term(Multidegree::unit(3, var + 1), c.clone());
            }
            for f_md in [
                Multidegree::zero(3),
                Multidegree::unit(3, 2),
                Multidegree::from_exponents(vec![1, 0, 1]),
            ] {
                let f = PbwElement::monomial(3, f_md, Rat::one());
                for p in 1..=4u32 {
                    let a_pow = pbw_pow(&l, &a_hat, p);
                    for mu in 1..=3 {
                        let lhs = calc.partial(mu, &pbw_mul(&l, &a_pow, &f));
                        // k = 0 term
                        let mut rhs = pbw_mul(&l, &a_pow, &calc.partial(mu, &f));
                        for k in 1..=p {
                            let weight = binomial(p, k);
                            let a_rest = pbw_pow(&l, &a_hat, p - k);
                            for tuple in crate::feynman::index_tuples(3, k as usize) {
                                let mut coeff = weight.clone();
                                for &t in &tuple {
                                    coeff *= coeffs[t - 1].clone();
                                }
                                if coeff.is_zero() {
                                    continue;
                                }
                                let series = ncs.get(&tuple);
                                let df = calc.eval_series(&series[mu - 1], &f);
                                if df.is_zero() {
                                    continue;
                                }
                                rhs = rhs.add(&pbw_mul(&l, &a_rest, &df).scalar_mul(&coeff));
                            }
                        }
                        if lhs != rhs {
                            passed = false;
                        }
                    }
                }
            }
        }
    }
    CheckResult::record(
        "linear-power-expansion",
        start,
        passed,
        "p <= 4, factors of degree <= 2, su2 and kappa, fixed seed".to_string(),
    )
}

/// Property sweep: iterated deformed derivatives of powers of linear
/// elements keep the undeformed shape,
/// `(1/s!) d^{t1}..d^{ts}(a^p) = binom(p,s) a^{t1}..a^{ts} a^{p-s}`.
pub fn check_classical_shape() -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0006);
    let mut passed = true;
    let l = LieAlgebra::su2();
    let phi = phi_symmetric(&l, CUTOFF);
    let calc = DeformedCalculus::new(&l, &phi);
    for _ in 0..3 {
        let coeffs: Vec<Rat> = (0..3).map(|_| rat_int(rng.gen_range(-2..=2))).collect();
        let mut a_hat = PbwElement::zero(3);
        for (var, c) in coeffs.iter().enumerate() {
            a_hat.add_term(Multidegree::unit(3, var + 1), c.clone());
        }
        for p in 1..=4u32 {
            let a_pow = pbw_pow(&l, &a_hat, p);
            for s in 1..=p {
                for tuple in crate::feynman::index_tuples(3, s as usize) {
                    let mut lhs = a_pow.clone();
                    for &t in &tuple {
                        lhs = calc.partial(t, &lhs);
                    }
                    lhs = lhs.scalar_mul(&(Rat::one() / factorial(s)));
                    let mut coeff = binomial(p, s);
                    for &t in &tuple {
                        coeff *= coeffs[t - 1].clone();
                    }
                    let rhs = pbw_pow(&l, &a_hat, p - s).scalar_mul(&coeff);
                    if lhs != rhs {
                        passed = false;
                    }
                }
            }
        }
    }
    CheckResult::record(
        "classical-shape",
        start,
        passed,
        "p <= 4, s <= p, all index tuples, su2, fixed seed".to_string(),
    )
}

/// Property sweep: summing full evaluations over the trees excluded by
/// the selection rule gives exactly zero, cell by cell through 5 nodes.
pub fn check_selection_rule_completeness() -> CheckResult {
    let start = Instant::now();
    let l = LieAlgebra::su2();
    let mut passed = true;
    let mut cells = 0usize;
    for total in 2..=5usize {
        for w in 2..=total {
            let b = total - w;
            let mut acc_is_zero = true;
            for mu in 1..=3 {
                let mut acc = BiTensor::zero(3, total as u32);
                for t in enumerate_trees(w, b).expect("in range") {
                    if contributing_filter(&t) {
                        continue;
                    }
                    acc = acc.add(&fev_planar(&l, &t, mu).tensor);
                }
                if !acc.is_zero() {
                    acc_is_zero = false;
                }
            }
            if !acc_is_zero {
                passed = false;
            }
            cells += 1;
        }
    }
    CheckResult::record(
        "selection-rule-completeness",
        start,
        passed,
        format!("{cells} bidegree cells through 5 nodes on su2"),
    )
}

/// Jacobi re-verification on every builtin (backs the `verify` command).
pub fn check_jacobi() -> CheckResult {
    let start = Instant::now();
    let passed = standard_algebras()
        .iter()
        .all(|l| verify_jacobi(l).passed());
    CheckResult::record("jacobi", start, passed, "all builtins".to_string())
}

/// Runs every acceptance check in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_phi_equation(),
        check_theta_xi_roundtrip(),
        check_explicit_coproduct(),
        check_tree_census(),
        check_feynman_diagram(),
        check_s1p_and_bernoulli(),
        check_hausdorff_cross_validation(),
        check_star_correspondence(),
        check_star_exponential_grid(),
        check_chi_identity(),
        check_pbw_associativity(),
        check_weyl_associativity(),
        check_coderivation(),
        check_commuting_partials(),
        check_linear_power_expansion(),
        check_classical_shape(),
        check_selection_rule_completeness(),
    ]
}

/// Runs a single named check; the names match [`run_all`]'s output order.
pub fn run_named(name: &str) -> Option<CheckResult> {
    let result = match name {
        "phi-equation" => check_phi_equation(),
        "theta-xi-roundtrip" => check_theta_xi_roundtrip(),
        "explicit-coproduct" => check_explicit_coproduct(),
        "tree-census" => check_tree_census(),
        "feynman-diagram" => check_feynman_diagram(),
        "s1p-symmetry-bernoulli" => check_s1p_and_bernoulli(),
        "hausdorff-cross-validation" => check_hausdorff_cross_validation(),
        "star-correspondence" => check_star_correspondence(),
        "star-exponential-grid" => check_star_exponential_grid(),
        "chi-identity" => check_chi_identity(),
        "pbw-associativity" => check_pbw_associativity(),
        "weyl-associativity" => check_weyl_associativity(),
        "coderivation" => check_coderivation(),
        "commuting-partials" => check_commuting_partials(),
        "linear-power-expansion" => check_linear_power_expansion(),
        "classical-shape" => check_classical_shape(),
        "selection-rule-completeness" => check_selection_rule_completeness(),
        "jacobi" => check_jacobi(),
        _ => return None,
    };
    Some(result)
}
