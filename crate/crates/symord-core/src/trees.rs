//! Planar rooted trees with white and black nodes (black only at leaves),
//! descending numerations of the white nodes, counting by bidegree, and the
//! selection-rule filter for contributing trees.

use std::fmt;
use thiserror::Error;

/// Largest supported total node count for enumeration.
pub const MAX_NODES: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("bidegree ({w},{b}) out of range: need w+b in 1..={MAX_NODES}")]
    OutOfRange { w: usize, b: usize },
}

/// A planar rooted tree with two node colors; black nodes are leaves.
/// Child order matters (the tree is planar).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanarTree {
    Black,
    White(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn white_leaf() -> Self {
        PlanarTree::White(Vec::new())
    }

    pub fn white_count(&self) -> usize {
        match self {
            PlanarTree::Black => 0,
            PlanarTree::White(children) => {
                1 + children.iter().map(|c| c.white_count()).sum::<usize>()
            }
        }
    }

    pub fn black_count(&self) -> usize {
        match self {
            PlanarTree::Black => 1,
            PlanarTree::White(children) => children.iter().map(|c| c.black_count()).sum(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.white_count() + self.black_count()
    }

    pub fn is_white_leaf(&self) -> bool {
        matches!(self, PlanarTree::White(c) if c.is_empty())
    }

    /// Canonical nested color string, e.g. `w(b,w())`.
    pub fn canonical(&self) -> String {
        match self {
            PlanarTree::Black => "b".to_string(),
            PlanarTree::White(children) => {
                let inner: Vec<String> = children.iter().map(|c| c.canonical()).collect();
                format!("w({})", inner.join(","))
            }
        }
    }

    /// Indented ASCII rendering, root first.
    pub fn ascii_art(&self) -> String {
        fn rec(t: &PlanarTree, prefix: &str, last: bool, top: bool, out: &mut String) {
            let label = match t {
                PlanarTree::Black => "●",
                PlanarTree::White(_) => "○",
            };
            if top {
                out.push_str(label);
            } else {
                out.push_str(prefix);
                out.push_str(if last { "└─ " } else { "├─ " });
                out.push_str(label);
            }
            out.push('\n');
            if let PlanarTree::White(children) = t {
                let child_prefix = if top {
                    String::new()
                } else {
                    format!("{prefix}{}", if last { "   " } else { "│  " })
                };
                for (i, c) in children.iter().enumerate() {
                    rec(c, &child_prefix, i + 1 == children.len(), false, out);
                }
            }
        }
        let mut s = String::new();
        rec(self, "", true, true, &mut s);
        s
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// A planar tree together with a descending numeration of its white nodes:
/// labels are `1..=w` in preorder storage, and every white child carries a
/// larger label than its white parent (so the root is labelled 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedTree {
    pub tree: PlanarTree,
    /// Label of each white node, in preorder.
    pub labels: Vec<usize>,
}

impl OrderedTree {
    pub fn white_count(&self) -> usize {
        self.labels.len()
    }

    pub fn black_count(&self) -> usize {
        self.tree.black_count()
    }

    /// Canonical string with labels attached to white nodes, e.g. `w1(b,w2())`.
    pub fn canonical(&self) -> String {
        fn rec(t: &PlanarTree, labels: &[usize], pos: &mut usize) -> String {
            match t {
                PlanarTree::Black => "b".to_string(),
                PlanarTree::White(children) => {
                    let label = labels[*pos];
                    *pos += 1;
                    let inner: Vec<String> =
                        children.iter().map(|c| rec(c, labels, pos)).collect();
                    format!("w{label}({})", inner.join(","))
                }
            }
        }
        let mut pos = 0;
        rec(&self.tree, &self.labels, &mut pos)
    }
}

impl fmt::Display for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// Ordered compositions of the bidegree `(w, b)` into `parts >= 1` branches,
/// each branch nonempty.
fn branch_compositions(w: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(w: usize, b: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if w == 0 && b == 0 {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for wi in 0..=w {
            for bi in 0..=b {
                if wi + bi == 0 {
                    continue;
                }
                acc.push((wi, bi));
                rec(w - wi, b - bi, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    rec(w, b, &mut acc, &mut out);
    out
}

/// All planar trees with exactly `w` white and `b` black nodes, in a
/// deterministic order. Generation is injective, so no deduplication is
/// needed.
pub fn enumerate_trees(w: usize, b: usize) -> Result<Vec<PlanarTree>, TreeError> {
    if w + b == 0 || w + b > MAX_NODES {
        return Err(TreeError::OutOfRange { w, b });
    }
    Ok(enumerate_trees_unchecked(w, b))
}

fn enumerate_trees_unchecked(w: usize, b: usize) -> Vec<PlanarTree> {
    if w == 0 {
        return if b == 1 {
            vec![PlanarTree::Black]
        } else {
            Vec::new()
        };
    }
    // white root with ordered nonempty branches of total bidegree (w-1, b)
    let mut out = Vec::new();
    if w == 1 && b == 0 {
        out.push(PlanarTree::white_leaf());
        return out;
    }
    for comp in branch_compositions(w - 1, b) {
        let branch_lists: Vec<Vec<PlanarTree>> = comp
            .iter()
            .map(|&(wi, bi)| enumerate_trees_unchecked(wi, bi))
            .collect();
        if branch_lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        let mut combos: Vec<Vec<PlanarTree>> = vec![Vec::new()];
        for list in &branch_lists {
            let mut next = Vec::with_capacity(combos.len() * list.len());
            for prefix in &combos {
                for t in list {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    next.push(v);
                }
            }
            combos = next;
        }
        out.extend(combos.into_iter().map(PlanarTree::White));
    }
    out
}

/// All descending numerations of one tree, as preorder label vectors.
pub fn numerations(tree: &PlanarTree) -> Vec<Vec<usize>> {
    let w = tree.white_count();
    if w == 0 {
        return vec![Vec::new()];
    }
    let all: Vec<usize> = (1..=w).collect();
    assign(tree, &all)
}

/// Assigns a sorted label set to a white-rooted subtree: the root takes the
/// minimum, the rest is split among branches in order.
fn assign(tree: &PlanarTree, labels: &[usize]) -> Vec<Vec<usize>> {
    match tree {
        PlanarTree::Black => {
            debug_assert!(labels.is_empty());
            vec![Vec::new()]
        }
        PlanarTree::White(children) => {
            let root = labels[0];
            let rest = &labels[1..];
            let sizes: Vec<usize> = children.iter().map(|c| c.white_count()).collect();
            let mut out = Vec::new();
            for split in ordered_set_splits(rest, &sizes) {
                // combine recursive numerations of each branch
                let mut partials: Vec<Vec<Vec<usize>>> = Vec::new();
                for (child, subset) in children.iter().zip(&split) {
                    partials.push(assign(child, subset));
                }
                let mut combos = vec![vec![root]];
                for p in partials {
                    let mut next = Vec::new();
                    for c in combos {
                        for tail in &p {
                            let mut v = c.clone();
                            v.extend(tail);
                            next.push(v);
                        }
                    }
                    combos = next;
                }
                out.extend(combos);
            }
            out
        }
    }
}

/// Splits a sorted label slice into an ordered tuple of sorted subsets with
/// prescribed sizes, in all possible ways.
fn ordered_set_splits(labels: &[usize], sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if sizes.is_empty() {
        return if labels.is_empty() {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let k = sizes[0];
    let mut out = Vec::new();
    for subset in combinations(labels, k) {
        let remaining: Vec<usize> = labels
            .iter()
            .copied()
            .filter(|x| !subset.contains(x))
            .collect();
        for mut rest in ordered_set_splits(&remaining, &sizes[1..]) {
            let mut v = vec![subset.clone()];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        if items.len() - i < k {
            break;
        }
        for mut rest in combinations(&items[i + 1..], k - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// All numerated trees of the bidegree, every valid numeration of every tree.
pub fn enumerate_ordered(w: usize, b: usize) -> Result<Vec<OrderedTree>, TreeError> {
    let trees = enumerate_trees(w, b)?;
    let mut out = Vec::new();
    for tree in trees {
        for labels in numerations(&tree) {
            out.push(OrderedTree {
                tree: tree.clone(),
                labels,
            });
        }
    }
    Ok(out)
}

/// The number of numerated trees of bidegree `(w, b)` by the branch recursion
/// with multinomial label-distribution factors. Must equal the length of
/// [`enumerate_ordered`].
pub fn count_ordered(w: usize, b: usize) -> u128 {
    assert!(w + b >= 1, "bidegree must be positive");
    // memo over the (w, b) grid
    fn rec(w: usize, b: usize, memo: &mut Vec<Vec<Option<u128>>>) -> u128 {
        if let Some(v) = memo[w][b] {
            return v;
        }
        let v = if w == 0 {
            u128::from(b == 1)
        } else {
            // white root; branches carry (w-1, b), labels 2..=w distributed
            // by a multinomial over branch white-counts
            let mut total = 0u128;
            if w == 1 && b == 0 {
                total = 1;
            } else {
                for comp in branch_compositions(w - 1, b) {
                    let mut term = multinomial(w - 1, comp.iter().map(|&(wi, _)| wi));
                    for &(wi, bi) in &comp {
                        if term == 0 {
                            break;
                        }
                        term *= rec(wi, bi, memo);
                    }
                    total += term;
                }
            }
            total
        };
        memo[w][b] = Some(v);
        v
    }
    let mut memo = vec![vec![None; b + 1]; w + 1];
    rec(w, b, &mut memo)
}

fn multinomial(total: usize, parts: impl Iterator<Item = usize>) -> u128 {
    let mut num = 1u128;
    for k in 2..=total {
        num *= k as u128;
    }
    let mut den = 1u128;
    for p in parts {
        for k in 2..=p {
            den *= k as u128;
        }
    }
    num / den
}

/// The closed form `(2w-3)!!` for all-white numerated trees, with
/// `(-1)!! = 1`.
pub fn double_factorial_count(w: usize) -> u128 {
    assert!(w >= 1);
    let mut acc = 1u128;
    let mut k = 1i64;
    while k <= 2 * w as i64 - 3 {
        acc *= k as u128;
        k += 2;
    }
    acc
}

/// True iff no white node has a white leaf as its leftmost child; trees
/// failing this have vanishing full evaluation.
pub fn contributing_filter(t: &PlanarTree) -> bool {
    match t {
        PlanarTree::Black => true,
        PlanarTree::White(children) => {
            if let Some(first) = children.first() {
                if first.is_white_leaf() {
                    return false;
                }
            }
            children.iter().all(contributing_filter)
        }
    }
}
