//! Lie algebras given by exact structure constants.
//!
//! A [`LieAlgebra`] stores `C^k_{ij}` sparsely for `i < j` only, so
//! antisymmetry holds by construction; the Jacobi identity is verified at
//! construction time. Dimensions are capped at 8 because downstream tensor
//! contractions cost `n^(internal lines)`.

use crate::rat::{fmt_rat, parse_rat, Rat};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    DimOutOfRange(usize),
    #[error("bracket index ({i},{j},{k}) out of range 1..={dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("bracket entry ({i},{j}) must have i < j; store the antisymmetric partner instead")]
    NotStrictlyOrdered { i: usize, j: usize },
    #[error("duplicate bracket entry ({0},{1},{2})")]
    DuplicateEntry(usize, usize, usize),
    #[error("invalid rational `{text}`: {source}")]
    BadRational {
        text: String,
        source: crate::rat::RatParseError,
    },
    #[error("Jacobi identity fails at (i,j,k,m)=({i},{j},{k},{m}) with residual {residual}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        m: usize,
        residual: String,
    },
    #[error("algebra file parse error: {0}")]
    Parse(String),
    #[error("kappa family needs the a-vector length to equal the dimension")]
    KappaLength,
}

/// A finite-dimensional Lie algebra over the rationals, defined by structure
/// constants `[x_i, x_j] = C^k_{ij} x_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    // (i, j, k) -> C^k_{ij}, stored for i < j only, nonzero values only.
    brackets: BTreeMap<(usize, usize, usize), Rat>,
}

impl LieAlgebra {
    /// Builds and validates an algebra from `i < j` bracket entries.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rat)>,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(AlgebraError::DimOutOfRange(dim));
        }
        let mut brackets = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, k, c) in entries {
            if i < 1 || j < 1 || k < 1 || i > dim || j > dim || k > dim {
                return Err(AlgebraError::IndexOutOfRange { i, j, k, dim });
            }
            if i >= j {
                return Err(AlgebraError::NotStrictlyOrdered { i, j });
            }
            if !seen.insert((i, j, k)) {
                return Err(AlgebraError::DuplicateEntry(i, j, k));
            }
            if !c.is_zero() {
                brackets.insert((i, j, k), c);
            }
        }
        let alg = LieAlgebra {
            name: name.into(),
            dim,
            brackets,
        };
        if let Some((i, j, k, m, residual)) = alg.first_jacobi_violation() {
            return Err(AlgebraError::JacobiViolation {
                i,
                j,
                k,
                m,
                residual: fmt_rat(&residual),
            });
        }
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structure constant `C^k_{ij}` for arbitrary index order (1-based).
    /// Antisymmetry is resolved by the lookup: `c(j,i,k) = -c(i,j,k)` and
    /// `c(i,i,k) = 0`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> Rat {
        debug_assert!(
            (1..=self.dim).contains(&i) && (1..=self.dim).contains(&j) && (1..=self.dim).contains(&k)
        );
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.brackets.get(&(i, j, k)).cloned().unwrap_or_else(Rat::zero),
            Greater => -self.c(j, i, k),
            Equal => Rat::zero(),
        }
    }

    /// Stored `i < j` entries in deterministic order.
    pub fn bracket_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rat)> {
        self.brackets.iter().map(|(&(i, j, k), c)| (i, j, k, c))
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    fn first_jacobi_violation(&self) -> Option<(usize, usize, usize, usize, Rat)> {
        self.jacobi_violations().into_iter().next()
    }

    /// All quadruples `(i,j,k,m)` where the Jacobi sum
    /// `sum_s C^s_{ij} C^m_{sk} + C^s_{jk} C^m_{si} + C^s_{ki} C^m_{sj}`
    /// fails to vanish, with the residual value.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize, usize, Rat)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for m in 1..=n {
                        let mut sum = Rat::zero();
                        for s in 1..=n {
                            sum += self.c(i, j, s) * self.c(s, k, m)
                                + self.c(j, k, s) * self.c(s, i, m)
                                + self.c(k, i, s) * self.c(s, j, m);
                        }
                        if !sum.is_zero() {
                            out.push((i, j, k, m, sum));
                        }
                    }
                }
            }
        }
        out
    }

    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra::new(format!("abelian{dim}"), dim, []).expect("abelian is always valid")
    }

    /// The 3-dimensional Heisenberg algebra, `[x1, x2] = x3`.
    pub fn heisenberg() -> LieAlgebra {
        LieAlgebra::new("heisenberg", 3, [(1, 2, 3, Rat::from_integer(1.into()))])
            .expect("heisenberg is a Lie algebra")
    }

    /// The su(2)-type algebra with cyclic brackets
    /// `[x1,x2]=x3, [x2,x3]=x1, [x3,x1]=x2`.
    pub fn su2() -> LieAlgebra {
        let one = Rat::from_integer(1.into());
        LieAlgebra::new(
            "su2",
            3,
            [
                (1, 2, 3, one.clone()),
                (2, 3, 1, one.clone()),
                // [x3,x1] = x2 stored as [x1,x3] = -x2
                (1, 3, 2, -one),
            ],
        )
        .expect("su2 is a Lie algebra")
    }

    /// The kappa-type algebra `[x_i, x_j] = a_i x_j - a_j x_i` for a rational
    /// vector `a` (real-coefficient convention). A zero vector degenerates to
    /// the abelian algebra.
    pub fn kappa(dim: usize, a: &[Rat]) -> Result<LieAlgebra, AlgebraError> {
        if a.len() != dim {
            return Err(AlgebraError::KappaLength);
        }
        let mut entries = Vec::new();
        for i in 1..=dim {
            for j in (i + 1)..=dim {
                for k in 1..=dim {
                    // C^k_{ij} = a_i d^k_j - a_j d^k_i
                    let mut c = Rat::zero();
                    if k == j {
                        c += a[i - 1].clone();
                    }
                    if k == i {
                        c -= a[j - 1].clone();
                    }
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        let label = format!(
            "kappa{dim}({})",
            a.iter().map(fmt_rat).collect::<Vec<_>>().join(",")
        );
        LieAlgebra::new(label, dim, entries)
    }

    /// Renders the algebra in the text file format accepted by [`load_algebra`].
    pub fn serialize(&self) -> String {
        let file = AlgebraFile {
            name: self.name.clone(),
            dim: self.dim,
            bracket: self
                .bracket_entries()
                .map(|(i, j, k, c)| BracketEntry {
                    i,
                    j,
                    k,
                    c: fmt_rat(c),
                })
                .collect(),
        };
        toml::to_string(&file).expect("algebra serialization cannot fail")
    }
}

/// Outcome of an explicit Jacobi re-check, with every violating quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub violations: Vec<(usize, usize, usize, usize, Rat)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-verifies the Jacobi identity over all index quadruples.
pub fn verify_jacobi(l: &LieAlgebra) -> JacobiReport {
    JacobiReport {
        violations: l.jacobi_violations(),
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    dim: usize,
    #[serde(default)]
    bracket: Vec<BracketEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct BracketEntry {
    i: usize,
    j: usize,
    k: usize,
    c: String,
}

/// Loads an algebra from its text document form.
///
/// The document is TOML with fields `name` (string), `dim` (integer) and
/// repeated `[[bracket]]` records `{ i, j, k, c }` where `c` is a rational
/// string `"p"` or `"p/q"`. Only `i < j` entries are permitted and unknown
/// keys are rejected. The Jacobi identity is verified on load.
pub fn load_algebra(text: &str) -> Result<LieAlgebra, AlgebraError> {
    let file: AlgebraFile = toml::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
    let entries = file
        .bracket
        .into_iter()
        .map(|b| {
            let c = parse_rat(&b.c).map_err(|source| AlgebraError::BadRational {
                text: b.c.clone(),
                source,
            })?;
            Ok((b.i, b.j, b.k, c))
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    LieAlgebra::new(file.name, file.dim, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn abelian_has_zero_brackets() {
        let l = LieAlgebra::abelian(3);
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    assert!(l.c(i, j, k).is_zero());
                }
            }
        }
        assert!(verify_jacobi(&l).passed());
    }

    #[test]
    fn su2_brackets_and_jacobi() {
        let l = LieAlgebra::su2();
        assert_eq!(l.c(1, 2, 3), rat_int(1));
        assert_eq!(l.c(2, 1, 3), rat_int(-1));
        assert_eq!(l.c(2, 3, 1), rat_int(1));
        assert_eq!(l.c(3, 1, 2), rat_int(1));
        assert_eq!(l.c(1, 1, 1), rat_int(0));
        assert!(verify_jacobi(&l).passed());
    }

    #[test]
    fn heisenberg_brackets() {
        let l = LieAlgebra::heisenberg();
        assert_eq!(l.c(1, 2, 3), rat_int(1));
        assert_eq!(l.c(1, 3, 2), rat_int(0));
        assert!(verify_jacobi(&l).passed());
    }

    #[test]
    fn kappa_structure_constants() {
        let a = [rat_int(1), rat_int(0), rat_int(0)];
        let l = LieAlgebra::kappa(3, &a).unwrap();
        assert_eq!(l.c(1, 2, 2), rat_int(1));
        assert_eq!(l.c(1, 3, 3), rat_int(1));
        assert_eq!(l.c(2, 3, 1), rat_int(0));
        assert_eq!(l.c(2, 3, 2), rat_int(0));
        assert!(verify_jacobi(&l).passed());

        // zero vector degenerates to abelian
        let z = [rat_int(0), rat_int(0)];
        let l0 = LieAlgebra::kappa(2, &z).unwrap();
        assert!(l0.is_abelian());
    }

    #[test]
    fn antisymmetry_by_exhaustive_scan() {
        for l in [
            LieAlgebra::su2(),
            LieAlgebra::heisenberg(),
            LieAlgebra::kappa(4, &[rat(1, 2), rat_int(0), rat_int(-1), rat_int(0)]).unwrap(),
        ] {
            let n = l.dim();
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        assert_eq!(l.c(i, j, k), -l.c(j, i, k));
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_violation_is_detected_and_located() {
        // [x1,x2]=x1 with [x1,x3]=x2 is inconsistent:
        // [[x1,x2],x3] + cyclic = [x1,x3] = x2 != 0.
        let err = LieAlgebra::new(
            "bad",
            3,
            [(1, 2, 1, rat_int(1)), (1, 3, 2, rat_int(1))],
        )
        .unwrap_err();
        match err {
            AlgebraError::JacobiViolation { i, j, k, m, .. } => {
                assert_eq!((i, j, k, m), (1, 2, 3, 2));
            }
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_bad_documents() {
        // unknown key
        assert!(load_algebra("name='x'\ndim=2\nfoo=1").is_err());
        // out of range index
        let doc = "name='x'\ndim=2\n[[bracket]]\ni=1\nj=3\nk=1\nc='1'";
        assert!(matches!(
            load_algebra(doc),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
        // not strictly ordered
        let doc = "name='x'\ndim=3\n[[bracket]]\ni=2\nj=1\nk=3\nc='1'";
        assert!(matches!(
            load_algebra(doc),
            Err(AlgebraError::NotStrictlyOrdered { .. })
        ));
        // duplicate entry
        let doc = "name='x'\ndim=3\n\
                   [[bracket]]\ni=1\nj=2\nk=3\nc='1'\n\
                   [[bracket]]\ni=1\nj=2\nk=3\nc='2'";
        assert!(matches!(
            load_algebra(doc),
            Err(AlgebraError::DuplicateEntry(1, 2, 3))
        ));
        // malformed rational
        let doc = "name='x'\ndim=3\n[[bracket]]\ni=1\nj=2\nk=3\nc='1/x'";
        assert!(matches!(
            load_algebra(doc),
            Err(AlgebraError::BadRational { .. })
        ));
    }

    #[test]
    fn load_empty_bracket_list_is_abelian() {
        let l = load_algebra("name = 'a3'\ndim = 3\n").unwrap();
        assert!(l.is_abelian());
        assert_eq!(l.dim(), 3);
    }

    #[test]
    fn serialize_round_trip() {
        for l in [
            LieAlgebra::su2(),
            LieAlgebra::heisenberg(),
            LieAlgebra::abelian(4),
            LieAlgebra::kappa(3, &[rat(1, 2), rat_int(1), rat_int(0)]).unwrap(),
        ] {
            let text = l.serialize();
            let back = load_algebra(&text).unwrap();
            assert_eq!(back, l);
        }
    }
}
