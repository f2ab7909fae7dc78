//! Feynman-rule evaluation of numerated trees, full evaluations, and the
//! deformed coproduct of the derivatives assembled two independent ways:
//! summing tree evaluations, and expanding iterated commutators
//! `[..[[d^mu, x_a1], x_a2], .., x_aw]` through the realization matrix.

use crate::algebra::LieAlgebra;
use crate::pbw::{pbw_mul, DeformedCalculus, PbwElement};
use crate::rat::{factorial, fmt_term, Rat};
use crate::series::{bernoulli, phi_symmetric, Multidegree, SeriesMatrix, TruncatedSeries};
use crate::trees::{contributing_filter, enumerate_ordered, numerations, OrderedTree, PlanarTree};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeynmanError {
    #[error("series cutoff {cutoff} insufficient, need at least {needed}")]
    InsufficientCutoff { cutoff: u32, needed: u32 },
}

/// An element of the (truncated) tensor square of the dual symmetric algebra:
/// a sum of `c * d^L (x) d^R` with `|L| + |R|` bounded by the cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiTensor {
    n: usize,
    cutoff: u32,
    terms: BTreeMap<(Multidegree, Multidegree), Rat>,
}

impl BiTensor {
    pub fn zero(n: usize, cutoff: u32) -> Self {
        BiTensor {
            n,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1 (x) 1`.
    pub fn unit(n: usize, cutoff: u32) -> Self {
        let mut t = Self::zero(n, cutoff);
        t.add_term(Multidegree::zero(n), Multidegree::zero(n), Rat::one());
        t
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Multidegree, Multidegree), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, l: &Multidegree, r: &Multidegree) -> Rat {
        self.terms
            .get(&(l.clone(), r.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, l: Multidegree, r: Multidegree, c: Rat) {
        debug_assert_eq!(l.len(), self.n);
        debug_assert_eq!(r.len(), self.n);
        if c.is_zero() || l.total() + r.total() > self.cutoff {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((l, r)) {
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
        assert_eq!(self.n, other.n, "bitensor add: ambient mismatch");
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for ((l, r), v) in &self.terms {
            out.add_term(l.clone(), r.clone(), v * c);
        }
        out
    }

    /// Componentwise commutative product, truncated at the smaller cutoff.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "bitensor mul: ambient mismatch");
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = Self::zero(self.n, cutoff);
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                out.add_term(la.add(lb), ra.add(rb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::unit(self.n, self.cutoff);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The flip exchanging the tensor factors.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), c.clone());
        }
        out
    }

    /// The part with `|L| = w` and `|R| = b`.
    pub fn bidegree_part(&self, w: u32, b: u32) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for ((l, r), c) in &self.terms {
            if l.total() == w && r.total() == b {
                out.add_term(l.clone(), r.clone(), c.clone());
            }
        }
        out
    }

    /// Bidegrees `(|L|, |R|)` present, sorted and deduplicated.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut set: Vec<(u32, u32)> = self
            .terms
            .keys()
            .map(|(l, r)| (l.total(), r.total()))
            .collect();
        set.sort_unstable();
        set.dedup();
        set
    }

    pub fn truncate_to(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, d.min(self.cutoff));
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    /// Terms sorted by total degree, then left factor, then right factor;
    /// the canonical rendering order.
    pub fn sorted_terms(&self) -> Vec<(&(Multidegree, Multidegree), &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|((la, ra), _), ((lb, rb), _)| {
            (la.total() + ra.total(), la, ra).cmp(&(lb.total() + rb.total(), lb, rb))
        });
        v
    }
}

fn fmt_tensor_monomial(l: &Multidegree, r: &Multidegree) -> String {
    let ls = l.fmt_d();
    let rs = r.fmt_d();
    format!(
        "{} ⊗ {}",
        if ls.is_empty() { "1" } else { &ls },
        if rs.is_empty() { "1" } else { &rs }
    )
}

impl fmt::Display for BiTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, r), c) in self.sorted_terms() {
            write!(f, "{}", fmt_term(c, &fmt_tensor_monomial(l, r), first))?;
            first = false;
        }
        Ok(())
    }
}

/// The deformed coproduct of one derivative `d^mu`, graded by the bidegree
/// (left degree, right degree) and truncated at a total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedCoproduct {
    pub mu: usize,
    pub tensor: BiTensor,
}

impl BigradedCoproduct {
    /// One `c * dL ⊗ dR` line per term, graded by total degree, then
    /// lexicographic on `(L, R)`.
    pub fn render_lines(&self) -> Vec<String> {
        self.tensor
            .sorted_terms()
            .into_iter()
            .map(|((l, r), c)| format!("{} * {}", c, fmt_tensor_monomial(l, r)))
            .collect()
    }
}

impl fmt::Display for BigradedCoproduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tensor)
    }
}

/// The coproducts of all generators at one cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductTable {
    n: usize,
    cutoff: u32,
    per_mu: Vec<BiTensor>,
}

impl CoproductTable {
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// The coproduct of `d^mu` (1-based).
    pub fn delta(&self, mu: usize) -> &BiTensor {
        &self.per_mu[mu - 1]
    }

    pub fn coproduct(&self, mu: usize) -> BigradedCoproduct {
        BigradedCoproduct {
            mu,
            tensor: self.per_mu[mu - 1].clone(),
        }
    }

    /// The coproduct of a monomial `d^md` by multiplicativity.
    pub fn delta_monomial(&self, md: &Multidegree) -> BiTensor {
        let mut acc = BiTensor::unit(self.n, self.cutoff);
        for (var, e) in md.support() {
            acc = acc.mul(&self.delta(var).pow(e));
        }
        acc
    }

    /// The undeformed coproduct of a monomial (binomial expansion).
    pub fn delta0_monomial(&self, md: &Multidegree) -> BiTensor {
        let mut acc = BiTensor::unit(self.n, self.cutoff);
        for (var, e) in md.support() {
            let mut d0 = BiTensor::zero(self.n, self.cutoff);
            d0.add_term(
                Multidegree::unit(self.n, var),
                Multidegree::zero(self.n),
                Rat::one(),
            );
            d0.add_term(
                Multidegree::zero(self.n),
                Multidegree::unit(self.n, var),
                Rat::one(),
            );
            acc = acc.mul(&d0.pow(e));
        }
        acc
    }
}

/// Evaluation tree: a planar tree with numeration labels resolved per node.
enum EvNode {
    Black,
    White { label: usize, children: Vec<EvNode> },
}

fn build_ev_node(t: &PlanarTree, labels: &[usize], pos: &mut usize) -> EvNode {
    match t {
        PlanarTree::Black => EvNode::Black,
        PlanarTree::White(children) => {
            let label = labels[*pos];
            *pos += 1;
            EvNode::White {
                label,
                children: children
                    .iter()
                    .map(|c| build_ev_node(c, labels, pos))
                    .collect(),
            }
        }
    }
}

/// The tensor `ev(t)^mu_{a1..aw}` with series components: one upper index and
/// one lower index per white node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSeries {
    n: usize,
    w: usize,
    comps: Vec<TruncatedSeries>,
}

impl TensorSeries {
    fn flat_index(&self, mu: usize, alphas: &[usize]) -> usize {
        debug_assert_eq!(alphas.len(), self.w);
        let tuples = self.n.pow(self.w as u32);
        let mut t_idx = 0;
        for &a in alphas {
            t_idx = t_idx * self.n + (a - 1);
        }
        (mu - 1) * tuples + t_idx
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn lower_arity(&self) -> usize {
        self.w
    }

    /// Component for the upper index and lower index tuple (all 1-based).
    pub fn get(&self, mu: usize, alphas: &[usize]) -> &TruncatedSeries {
        &self.comps[self.flat_index(mu, alphas)]
    }
}

/// All tuples over `1..=n` of the given length, in lexicographic order.
pub fn index_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n);
        for prefix in &out {
            for v in 1..=n {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Per-subtree evaluation: the value as a vector over the incoming line
/// label. A white node with `s` children contracts a chain of `s` structure
/// constants (weight `(-1)^s B_s / s!`) against the child values; a black
/// leaf emits a derivative; a white leaf emits a Kronecker delta.
fn eval_subtree(
    l: &LieAlgebra,
    node: &EvNode,
    alphas: &[usize],
    cutoff: u32,
) -> Vec<TruncatedSeries> {
    let n = l.dim();
    match node {
        EvNode::Black => (1..=n)
            .map(|rho| TruncatedSeries::var(n, rho, cutoff))
            .collect(),
        EvNode::White { label, children } => {
            let alpha = alphas[*label - 1];
            let delta_at_alpha = |k: usize| {
                if k == alpha {
                    TruncatedSeries::one(n, cutoff)
                } else {
                    TruncatedSeries::zero(n, cutoff)
                }
            };
            if children.is_empty() {
                return (1..=n).map(delta_at_alpha).collect();
            }
            let s = children.len();
            let mut chain: Vec<TruncatedSeries> = (1..=n).map(delta_at_alpha).collect();
            for child in children {
                let child_val = eval_subtree(l, child, alphas, cutoff);
                let mut next = vec![TruncatedSeries::zero(n, cutoff); n];
                for prev in 1..=n {
                    if chain[prev - 1].is_zero() {
                        continue;
                    }
                    for rho in 1..=n {
                        if child_val[rho - 1].is_zero() {
                            continue;
                        }
                        let factor = chain[prev - 1].mul(&child_val[rho - 1]);
                        for k in 1..=n {
                            let c = l.c(prev, rho, k);
                            if c.is_zero() {
                                continue;
                            }
                            next[k - 1] = next[k - 1].add(&factor.scalar_mul(&c));
                        }
                    }
                }
                chain = next;
            }
            let sign = if s % 2 == 0 { Rat::one() } else { -Rat::one() };
            let weight = sign * bernoulli(s as u32) / factorial(s as u32);
            chain.into_iter().map(|x| x.scalar_mul(&weight)).collect()
        }
    }
}

/// Feynman-rule evaluation of a numerated tree. Every component is a series
/// homogeneous of degree `b` (one derivative per black leaf).
pub fn ev(l: &LieAlgebra, t: &OrderedTree) -> TensorSeries {
    let n = l.dim();
    let w = t.white_count();
    let b = t.black_count() as u32;
    let mut pos = 0;
    let root = build_ev_node(&t.tree, &t.labels, &mut pos);
    let tuples = index_tuples(n, w);
    let mut comps = vec![TruncatedSeries::zero(n, b); n * tuples.len()];
    for (t_idx, alphas) in tuples.iter().enumerate() {
        let vals = eval_subtree(l, &root, alphas, b);
        for mu in 1..=n {
            comps[(mu - 1) * tuples.len() + t_idx] = vals[mu - 1].clone();
        }
    }
    TensorSeries { n, w, comps }
}

fn tuple_multidegree(n: usize, alphas: &[usize]) -> Multidegree {
    let mut e = vec![0u32; n];
    for &a in alphas {
        e[a - 1] += 1;
    }
    Multidegree::from_exponents(e)
}

/// Full evaluation of one numerated tree for one upper index:
/// `(1/w!) d^{a1}..d^{aw} (x) ev(t)^mu_{a1..aw}` summed over the lower tuple.
pub fn fev(l: &LieAlgebra, t: &OrderedTree, mu: usize) -> BigradedCoproduct {
    let n = l.dim();
    let w = t.white_count();
    let b = t.black_count() as u32;
    let tensor = ev(l, t);
    let mut out = BiTensor::zero(n, w as u32 + b);
    let weight = Rat::one() / factorial(w as u32);
    for alphas in index_tuples(n, w) {
        let left = tuple_multidegree(n, &alphas);
        for (m, c) in tensor.get(mu, &alphas).terms() {
            out.add_term(left.clone(), m.clone(), c * &weight);
        }
    }
    BigradedCoproduct { mu, tensor: out }
}

/// Full evaluation of an unnumerated planar tree: the sum over all of its
/// descending numerations.
pub fn fev_planar(l: &LieAlgebra, t: &PlanarTree, mu: usize) -> BigradedCoproduct {
    let n = l.dim();
    let w = t.white_count();
    let b = t.black_count() as u32;
    let mut acc = BiTensor::zero(n, w as u32 + b);
    for labels in numerations(t) {
        let ordered = OrderedTree {
            tree: t.clone(),
            labels,
        };
        acc = acc.add(&fev(l, &ordered, mu).tensor);
    }
    BigradedCoproduct { mu, tensor: acc }
}

/// One commutator step: differentiate the running series and contract a
/// fresh column, `S'^mu = sum_rho d_rho(S^mu) phi^rho_a`.
fn commutator_step(phi: &SeriesMatrix, current: &[TruncatedSeries], a: usize) -> Vec<TruncatedSeries> {
    let n = phi.dim();
    let cutoff = phi.cutoff();
    (1..=n)
        .map(|mu| {
            let mut acc = TruncatedSeries::zero(n, cutoff);
            for rho in 1..=n {
                acc = acc.add(
                    &current[mu - 1]
                        .partial_derivative(rho)
                        .mul(phi.entry(rho, a)),
                );
            }
            acc
        })
        .collect()
}

/// The iterated commutator `[..[[d^mu, x_{a1}], x_{a2}], .., x_{ak}]` as a
/// series for every upper index, computed through the realization matrix.
pub fn nested_commutator(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    alphas: &[usize],
) -> Result<Vec<TruncatedSeries>, FeynmanError> {
    let n = l.dim();
    assert_eq!(n, phi.dim(), "phi dimension must match the algebra");
    assert!(!alphas.is_empty(), "nested commutator needs at least one index");
    let k = alphas.len() as u32;
    if phi.cutoff() < k {
        return Err(FeynmanError::InsufficientCutoff {
            cutoff: phi.cutoff(),
            needed: k,
        });
    }
    let mut current: Vec<TruncatedSeries> = (1..=n)
        .map(|mu| phi.entry(mu, alphas[0]).clone())
        .collect();
    for &a in &alphas[1..] {
        current = commutator_step(phi, &current, a);
    }
    Ok(current)
}

/// A prefix-sharing cache of iterated-commutator series for one realization:
/// the series for `(a1..ak)` is one step on the cached series for
/// `(a1..a(k-1))`, so sweeps over all index tuples cost one step per tuple.
pub struct CommutatorCache<'a> {
    phi: &'a SeriesMatrix,
    cache: std::cell::RefCell<std::collections::HashMap<Vec<usize>, std::rc::Rc<Vec<TruncatedSeries>>>>,
}

impl<'a> CommutatorCache<'a> {
    pub fn new(phi: &'a SeriesMatrix) -> Self {
        CommutatorCache {
            phi,
            cache: std::cell::RefCell::new(std::collections::HashMap::new()),
        }
    }

    /// Series per upper index for the tuple; panics if the cutoff cannot
    /// support the tuple length.
    pub fn get(&self, alphas: &[usize]) -> std::rc::Rc<Vec<TruncatedSeries>> {
        assert!(!alphas.is_empty());
        assert!(
            self.phi.cutoff() >= alphas.len() as u32,
            "phi cutoff {} too small for a {}-fold commutator",
            self.phi.cutoff(),
            alphas.len()
        );
        if let Some(hit) = self.cache.borrow().get(alphas) {
            return hit.clone();
        }
        let n = self.phi.dim();
        let value = if alphas.len() == 1 {
            (1..=n)
                .map(|mu| self.phi.entry(mu, alphas[0]).clone())
                .collect()
        } else {
            let prefix = self.get(&alphas[..alphas.len() - 1]);
            commutator_step(self.phi, &prefix, alphas[alphas.len() - 1])
        };
        let rc = std::rc::Rc::new(value);
        self.cache
            .borrow_mut()
            .insert(alphas.to_vec(), rc.clone());
        rc
    }
}

/// The deformed coproducts of all generators by the tree expansion, truncated
/// at total degree `p`. Trees killed by the selection rule are skipped.
pub fn coproduct_trees_all(l: &LieAlgebra, p: u32) -> CoproductTable {
    let n = l.dim();
    let mut per_mu = vec![BiTensor::zero(n, p); n];
    for total in 1..=p as usize {
        for w in 0..=total {
            let b = total - w;
            for t in enumerate_ordered(w, b).expect("bidegree within range") {
                if !contributing_filter(&t.tree) {
                    continue;
                }
                let tensor = ev(l, &t);
                let weight = Rat::one() / factorial(w as u32);
                for alphas in index_tuples(n, w) {
                    let left = tuple_multidegree(n, &alphas);
                    for mu in 1..=n {
                        for (m, c) in tensor.get(mu, &alphas).terms() {
                            per_mu[mu - 1].add_term(left.clone(), m.clone(), c * &weight);
                        }
                    }
                }
            }
        }
    }
    CoproductTable { n, cutoff: p, per_mu }
}

/// Tree-expansion coproduct of a single generator.
pub fn coproduct_trees(l: &LieAlgebra, mu: usize, p: u32) -> BigradedCoproduct {
    coproduct_trees_all(l, p).coproduct(mu)
}

/// The deformed coproducts of all generators by the commutator expansion
/// `1 (x) d^mu + sum_{w>=1} (1/w!) d^{a1}..d^{aw} (x) [..[d^mu, x_{a1}], ..]`.
pub fn coproduct_adjoint_all(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    p: u32,
) -> Result<CoproductTable, FeynmanError> {
    let n = l.dim();
    if phi.cutoff() < p {
        return Err(FeynmanError::InsufficientCutoff {
            cutoff: phi.cutoff(),
            needed: p,
        });
    }
    let mut per_mu = vec![BiTensor::zero(n, p); n];
    for mu in 1..=n {
        per_mu[mu - 1].add_term(Multidegree::zero(n), Multidegree::unit(n, mu), Rat::one());
    }
    let cache = CommutatorCache::new(phi);
    for w in 1..=p as usize {
        let weight = Rat::one() / factorial(w as u32);
        for alphas in index_tuples(n, w) {
            let series = cache.get(&alphas);
            let left = tuple_multidegree(n, &alphas);
            for mu in 1..=n {
                for (m, c) in series[mu - 1].terms() {
                    if m.total() + w as u32 > p {
                        continue;
                    }
                    per_mu[mu - 1].add_term(left.clone(), m.clone(), c * &weight);
                }
            }
        }
    }
    Ok(CoproductTable { n, cutoff: p, per_mu })
}

/// Commutator-expansion coproduct of a single generator.
pub fn coproduct_adjoint(
    l: &LieAlgebra,
    phi: &SeriesMatrix,
    mu: usize,
    p: u32,
) -> Result<BigradedCoproduct, FeynmanError> {
    Ok(coproduct_adjoint_all(l, phi, p)?.coproduct(mu))
}

/// Result of the flip symmetry check between the single tree of bidegree
/// `(1, p)` and the whole cell `(p, 1)`.
#[derive(Debug, Clone)]
pub struct S1pReport {
    pub p: usize,
    /// Per upper index: (flipped single-tree value, signed cell sum).
    pub sides: Vec<(BiTensor, BiTensor)>,
}

impl S1pReport {
    pub fn passed(&self) -> bool {
        self.sides.iter().all(|(a, b)| a == b)
    }
}

/// Checks `tau(fev(s_{1,p})) = (-1)^{p+1} sum over the (p,1) cell`, for every
/// upper index. The sum runs over all numerated trees of the cell; excluded
/// trees contribute zero.
pub fn s1p_symmetry_check(l: &LieAlgebra, p: usize) -> S1pReport {
    let n = l.dim();
    let s1p = OrderedTree {
        tree: PlanarTree::White(vec![PlanarTree::Black; p]),
        labels: vec![1],
    };
    let sign = if (p + 1).is_multiple_of(2) {
        -Rat::one()
    } else {
        Rat::one()
    };
    let cell = enumerate_ordered(p, 1).expect("bidegree within range");
    let mut sides = Vec::new();
    for mu in 1..=n {
        let lhs = fev(l, &s1p, mu).tensor.flip();
        let mut rhs = BiTensor::zero(n, (p + 1) as u32);
        for t in &cell {
            rhs = rhs.add(&fev(l, t, mu).tensor);
        }
        sides.push((lhs, rhs.scale(&sign)));
    }
    S1pReport { p, sides }
}

fn permutations(len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(len - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, len - 1);
            out.push(v);
        }
    }
    out
}

/// Result of the vacuum symmetrization lemma check: symmetrized iterated
/// commutators evaluate to zero on the unit for `w >= 2`.
#[derive(Debug, Clone)]
pub struct VacuumReport {
    pub w: usize,
    pub failures: Vec<(usize, Vec<usize>, Rat)>,
}

impl VacuumReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn vacuum_symmetrization_check(l: &LieAlgebra, w: usize) -> VacuumReport {
    assert!(w >= 2, "the lemma concerns w >= 2");
    let n = l.dim();
    let phi = phi_symmetric(l, w as u32 + 1);
    let cache = CommutatorCache::new(&phi);
    let perms = permutations(w);
    let mut failures = Vec::new();
    for alphas in index_tuples(n, w) {
        let mut sums = vec![Rat::zero(); n];
        for perm in &perms {
            let shuffled: Vec<usize> = perm.iter().map(|&i| alphas[i]).collect();
            let series = cache.get(&shuffled);
            for mu in 1..=n {
                sums[mu - 1] += series[mu - 1].constant_term();
            }
        }
        for mu in 1..=n {
            if !sums[mu - 1].is_zero() {
                failures.push((mu, alphas.clone(), sums[mu - 1].clone()));
            }
        }
    }
    VacuumReport { w, failures }
}

/// Checks coassociativity of the coproduct table through its cutoff:
/// `(Delta (x) id) Delta = (id (x) Delta) Delta` on each generator, where the
/// outer coproduct acts on monomials by multiplicativity.
pub fn coassociativity_check(l: &LieAlgebra, p: u32) -> bool {
    let table = coproduct_trees_all(l, p);
    let n = l.dim();
    for mu in 1..=n {
        let delta = table.delta(mu);
        let mut lhs: BTreeMap<(Multidegree, Multidegree, Multidegree), Rat> = BTreeMap::new();
        let mut rhs = lhs.clone();
        for ((lft, rgt), c) in delta.terms() {
            for ((a, b), c2) in table.delta_monomial(lft).terms() {
                if a.total() + b.total() + rgt.total() > p {
                    continue;
                }
                add3(&mut lhs, (a.clone(), b.clone(), rgt.clone()), c * c2);
            }
            for ((a, b), c2) in table.delta_monomial(rgt).terms() {
                if lft.total() + a.total() + b.total() > p {
                    continue;
                }
                add3(&mut rhs, (lft.clone(), a.clone(), b.clone()), c * c2);
            }
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

fn add3(
    map: &mut BTreeMap<(Multidegree, Multidegree, Multidegree), Rat>,
    key: (Multidegree, Multidegree, Multidegree),
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

/// The twisted Leibniz rule evaluated on enveloping-algebra elements:
/// `sum_w (1/w!) d^{a1}..d^{aw}(u) * [..[d^mu, x_{a1}], .., x_{aw}](v)`,
/// to be compared with the deformed derivative of the product.
pub fn twisted_leibniz_rhs(
    calc: &DeformedCalculus<'_>,
    ncs: &CommutatorCache<'_>,
    mu: usize,
    u: &PbwElement,
    v: &PbwElement,
) -> PbwElement {
    let l = calc.algebra();
    let n = l.dim();
    let mut out = pbw_mul(l, u, &calc.partial(mu, v));
    for w in 1..=u.degree() as usize {
        let weight = Rat::one() / factorial(w as u32);
        for alphas in index_tuples(n, w) {
            let mut du = u.clone();
            for &a in &alphas {
                du = calc.partial(a, &du);
                if du.is_zero() {
                    break;
                }
            }
            if du.is_zero() {
                continue;
            }
            let series = ncs.get(&alphas);
            let dv = calc.eval_series(&series[mu - 1], v);
            if dv.is_zero() {
                continue;
            }
            out = out.add(&pbw_mul(l, &du, &dv).scalar_mul(&weight));
        }
    }
    out
}

/// Left side of the coproduct rule for the series `phi^mu_nu`: the series
/// applied to a product through the deformed derivatives.
pub fn phi_coproduct_lhs(
    calc: &DeformedCalculus<'_>,
    mu: usize,
    nu: usize,
    u: &PbwElement,
    v: &PbwElement,
) -> PbwElement {
    let prod = pbw_mul(calc.algebra(), u, v);
    calc.eval_series(calc.phi().entry(mu, nu), &prod)
}

/// Right side of the coproduct rule for `phi^mu_nu`:
/// `sum_{N>=1} (1/N!) sum_{i1..iN} sum_k d^{i1..<skip k>..iN} phi^{ik}_nu (u)`
/// times the `N`-fold commutator applied to `v`.
pub fn phi_coproduct_rhs(
    calc: &DeformedCalculus<'_>,
    ncs: &CommutatorCache<'_>,
    mu: usize,
    nu: usize,
    u: &PbwElement,
    v: &PbwElement,
) -> PbwElement {
    let l = calc.algebra();
    let phi = calc.phi();
    let n = l.dim();
    let mut out = PbwElement::zero(n);
    let max_n = u.degree() as usize + 1;
    for big_n in 1..=max_n {
        let weight = Rat::one() / factorial(big_n as u32);
        for tuple in index_tuples(n, big_n) {
            let series = ncs.get(&tuple);
            let dv = calc.eval_series(&series[mu - 1], v);
            if dv.is_zero() {
                continue;
            }
            let mut left_total = PbwElement::zero(n);
            for k in 0..big_n {
                // derivatives at every slot except k, then phi^{i_k}_nu
                let mut du = calc.eval_series(phi.entry(tuple[k], nu), u);
                for (pos, &idx) in tuple.iter().enumerate() {
                    if pos == k {
                        continue;
                    }
                    du = calc.partial(idx, &du);
                    if du.is_zero() {
                        break;
                    }
                }
                left_total = left_total.add(&du);
            }
            if left_total.is_zero() {
                continue;
            }
            out = out.add(&pbw_mul(l, &left_total, &dv).scalar_mul(&weight));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::series::c_matrix;
    use crate::trees::enumerate_trees;

    fn builtins() -> Vec<LieAlgebra> {
        vec![
            LieAlgebra::abelian(3),
            LieAlgebra::heisenberg(),
            LieAlgebra::su2(),
            LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap(),
        ]
    }

    fn single_black() -> OrderedTree {
        OrderedTree {
            tree: PlanarTree::Black,
            labels: vec![],
        }
    }

    fn single_white() -> OrderedTree {
        OrderedTree {
            tree: PlanarTree::white_leaf(),
            labels: vec![1],
        }
    }

    #[test]
    fn ev_degenerate_trees() {
        let l = LieAlgebra::su2();
        let tb = ev(&l, &single_black());
        for mu in 1..=3 {
            assert_eq!(*tb.get(mu, &[]), TruncatedSeries::var(3, mu, 1));
        }
        let tw = ev(&l, &single_white());
        for mu in 1..=3 {
            for a in 1..=3 {
                let expect = if mu == a {
                    TruncatedSeries::one(3, 0)
                } else {
                    TruncatedSeries::zero(3, 0)
                };
                assert_eq!(*tw.get(mu, &[a]), expect);
            }
        }
    }

    #[test]
    fn ev_is_homogeneous_of_black_degree() {
        let l = LieAlgebra::su2();
        for (w, b) in [(1usize, 1usize), (2, 1), (1, 2), (2, 2), (3, 1)] {
            for t in enumerate_ordered(w, b).unwrap() {
                let tensor = ev(&l, &t);
                for mu in 1..=3 {
                    for alphas in index_tuples(3, w) {
                        for (m, _) in tensor.get(mu, &alphas).terms() {
                            assert_eq!(m.total(), b as u32, "tree {t}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn feynman_rule_example_diagram() {
        // white root (a1) with a black left child and a white leaf (a2):
        // ev^mu_{a1 a2} = (1/12) sum_k (C d)^k_{a1} C^mu_{k a2}
        let l = LieAlgebra::su2();
        let t = OrderedTree {
            tree: PlanarTree::White(vec![PlanarTree::Black, PlanarTree::white_leaf()]),
            labels: vec![1, 2],
        };
        let tensor = ev(&l, &t);
        let c = c_matrix(&l, 1);
        for mu in 1..=3 {
            for a1 in 1..=3 {
                for a2 in 1..=3 {
                    let mut expect = TruncatedSeries::zero(3, 1);
                    for k in 1..=3 {
                        expect = expect.add(&c.entry(k, a1).scalar_mul(&l.c(k, a2, mu)));
                    }
                    expect = expect.scalar_mul(&rat(1, 12));
                    assert_eq!(*tensor.get(mu, &[a1, a2]), expect);
                }
            }
        }
    }

    #[test]
    fn fev_degenerate_trees() {
        let l = LieAlgebra::su2();
        for mu in 1..=3 {
            let fw = fev(&l, &single_white(), mu);
            let mut expect = BiTensor::zero(3, 1);
            expect.add_term(Multidegree::unit(3, mu), Multidegree::zero(3), rat_int(1));
            assert_eq!(fw.tensor, expect);

            let fb = fev(&l, &single_black(), mu);
            let mut expect = BiTensor::zero(3, 1);
            expect.add_term(Multidegree::zero(3), Multidegree::unit(3, mu), rat_int(1));
            assert_eq!(fb.tensor, expect);
        }
    }

    #[test]
    fn excluded_trees_evaluate_to_zero() {
        let l = LieAlgebra::su2();
        let t = PlanarTree::White(vec![PlanarTree::white_leaf(), PlanarTree::Black]);
        for mu in 1..=3 {
            assert!(fev_planar(&l, &t, mu).tensor.is_zero());
        }
    }

    #[test]
    fn selection_rule_completeness_small() {
        // summing fev over all excluded trees of small bidegrees gives zero
        let l = LieAlgebra::su2();
        for (w, b) in [(2usize, 0usize), (2, 1), (3, 0), (3, 1), (2, 2)] {
            for mu in 1..=3 {
                let mut acc = BiTensor::zero(3, (w + b) as u32);
                for t in enumerate_trees(w, b).unwrap() {
                    if contributing_filter(&t) {
                        continue;
                    }
                    acc = acc.add(&fev_planar(&l, &t, mu).tensor);
                }
                assert!(acc.is_zero(), "excluded sum nonzero at ({w},{b})");
            }
        }
    }

    #[test]
    fn nested_commutator_base_case() {
        for l in builtins() {
            let phi = phi_symmetric(&l, 4);
            for a in 1..=3 {
                let series = nested_commutator(&l, &phi, &[a]).unwrap();
                for mu in 1..=3 {
                    assert_eq!(series[mu - 1], *phi.entry(mu, a));
                    let expect = if mu == a { rat_int(1) } else { rat_int(0) };
                    assert_eq!(series[mu - 1].constant_term(), expect);
                }
            }
        }
    }

    #[test]
    fn nested_commutator_vacuum_is_half_bracket() {
        // [[d^mu, x_a], x_b](1) = (1/2) C^mu_{ab} in symmetric ordering
        for l in builtins() {
            let phi = phi_symmetric(&l, 4);
            for a in 1..=3 {
                for b in 1..=3 {
                    let series = nested_commutator(&l, &phi, &[a, b]).unwrap();
                    for mu in 1..=3 {
                        assert_eq!(
                            series[mu - 1].constant_term(),
                            l.c(a, b, mu) * rat(1, 2),
                            "algebra {}",
                            l.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nested_commutator_cutoff_guard() {
        let l = LieAlgebra::su2();
        let phi = phi_symmetric(&l, 2);
        assert!(matches!(
            nested_commutator(&l, &phi, &[1, 2, 3]),
            Err(FeynmanError::InsufficientCutoff { .. })
        ));
    }

    #[test]
    fn expansion_into_single_derivative_summands() {
        // Leibniz expansion of the 4-fold commutator: each derivative applies
        // to exactly one phi factor, giving (k-1)! = 6 summands whose total
        // matches the direct route.
        let l = LieAlgebra::su2();
        let cutoff = 5;
        let phi = phi_symmetric(&l, cutoff);
        let n = 3;
        let alphas = [1usize, 2, 3, 1];
        let k = alphas.len();
        // derivative s (s = 1..k-1) applies to factor p(s) with p(s) <= s
        let mut patterns = vec![Vec::new()];
        for s in 1..k {
            let mut next = Vec::new();
            for pat in &patterns {
                for target in 1..=s {
                    let mut p = pat.clone();
                    p.push(target);
                    next.push(p);
                }
            }
            patterns = next;
        }
        assert_eq!(patterns.len(), 6);

        let direct = nested_commutator(&l, &phi, &alphas).unwrap();
        for mu in 1..=n {
            let mut total = TruncatedSeries::zero(n, cutoff);
            for pat in &patterns {
                // rho_0 = mu; factor j in 1..=k is phi^{rho_{j-1}}_{alpha_j}
                // with derivative subscripts { rho_s : pat[s-1] = j }
                let mut acc = TruncatedSeries::zero(n, cutoff);
                for rhos in index_tuples(n, k - 1) {
                    let mut term = TruncatedSeries::one(n, cutoff);
                    let uppers: Vec<usize> =
                        std::iter::once(mu).chain(rhos.iter().copied()).collect();
                    for j in 1..=k {
                        let mut factor = phi.entry(uppers[j - 1], alphas[j - 1]).clone();
                        for (s, &target) in pat.iter().enumerate() {
                            if target == j {
                                factor = factor.partial_derivative(rhos[s]);
                            }
                        }
                        term = term.mul(&factor);
                    }
                    acc = acc.add(&term);
                }
                total = total.add(&acc);
            }
            let window = cutoff - (k as u32 - 1);
            assert_eq!(
                total.truncate_to(window),
                direct[mu - 1].truncate_to(window)
            );
        }
    }

    #[test]
    fn coproduct_first_orders() {
        let l = LieAlgebra::su2();
        let table = coproduct_trees_all(&l, 2);
        for mu in 1..=3 {
            let delta = table.delta(mu);
            // degree 1: 1 (x) d^mu + d^mu (x) 1
            assert_eq!(
                delta.coeff(&Multidegree::zero(3), &Multidegree::unit(3, mu)),
                rat_int(1)
            );
            assert_eq!(
                delta.coeff(&Multidegree::unit(3, mu), &Multidegree::zero(3)),
                rat_int(1)
            );
            // degree 2: (1/2) C^mu_{ab} d^a (x) d^b
            for a in 1..=3 {
                for b in 1..=3 {
                    assert_eq!(
                        delta.coeff(&Multidegree::unit(3, a), &Multidegree::unit(3, b)),
                        l.c(a, b, mu) * rat(1, 2)
                    );
                }
            }
        }
    }

    #[test]
    fn adjoint_route_equals_tree_route() {
        for l in builtins() {
            let p = 4;
            let phi = phi_symmetric(&l, p);
            let trees = coproduct_trees_all(&l, p);
            let adjoint = coproduct_adjoint_all(&l, &phi, p).unwrap();
            for mu in 1..=3 {
                assert_eq!(
                    trees.delta(mu),
                    adjoint.delta(mu),
                    "route mismatch for {} at mu={mu}",
                    l.name()
                );
            }
        }
    }

    #[test]
    fn abelian_coproduct_is_primitive() {
        let l = LieAlgebra::abelian(3);
        let table = coproduct_trees_all(&l, 4);
        for mu in 1..=3 {
            let mut expect = BiTensor::zero(3, 4);
            expect.add_term(Multidegree::zero(3), Multidegree::unit(3, mu), rat_int(1));
            expect.add_term(Multidegree::unit(3, mu), Multidegree::zero(3), rat_int(1));
            assert_eq!(*table.delta(mu), expect);
        }
    }

    #[test]
    fn heisenberg_coproduct_stops_at_degree_two() {
        let l = LieAlgebra::heisenberg();
        let table = coproduct_trees_all(&l, 4);
        for mu in 1..=3 {
            for ((lft, rgt), _) in table.delta(mu).terms() {
                assert!(lft.total() + rgt.total() <= 2);
            }
        }
    }

    #[test]
    fn counit_compatibility() {
        // left factor degree 0 only in 1 (x) d^mu; right factor degree 0 only
        // in d^mu (x) 1
        for l in builtins() {
            let table = coproduct_trees_all(&l, 4);
            for mu in 1..=3 {
                for ((lft, rgt), c) in table.delta(mu).terms() {
                    if lft.total() == 0 {
                        assert_eq!(*rgt, Multidegree::unit(3, mu));
                        assert_eq!(*c, rat_int(1));
                    }
                    if rgt.total() == 0 {
                        assert_eq!(*lft, Multidegree::unit(3, mu));
                        assert_eq!(*c, rat_int(1));
                    }
                }
            }
        }
    }

    #[test]
    fn s1p_symmetry_small() {
        let kappa = LieAlgebra::kappa(3, &[rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        for l in [LieAlgebra::su2(), kappa] {
            for p in 1..=3 {
                let report = s1p_symmetry_check(&l, p);
                assert!(report.passed(), "s1p failed for {} at p={p}", l.name());
            }
        }
    }

    #[test]
    fn vacuum_symmetrization_small() {
        for l in builtins() {
            for w in 2..=3 {
                let report = vacuum_symmetrization_check(&l, w);
                assert!(report.passed(), "vacuum lemma failed for {}", l.name());
            }
        }
        assert!(vacuum_symmetrization_check(&LieAlgebra::su2(), 4).passed());
    }

    #[test]
    fn coassociativity_through_degree_four() {
        assert!(coassociativity_check(&LieAlgebra::su2(), 4));
        assert!(coassociativity_check(&LieAlgebra::heisenberg(), 4));
    }

    #[test]
    fn bigraded_pieces_are_bihomogeneous() {
        let l = LieAlgebra::su2();
        for (w, b) in [(1usize, 1usize), (2, 1), (1, 2), (2, 2)] {
            for t in enumerate_ordered(w, b).unwrap() {
                for mu in 1..=3 {
                    let f = fev(&l, &t, mu);
                    for ((lft, rgt), _) in f.tensor.terms() {
                        assert_eq!(lft.total(), w as u32);
                        assert_eq!(rgt.total(), b as u32);
                    }
                }
            }
        }
    }
}
