//! Exact integer linear algebra and (co)homology of finite chain complexes.

mod class;
mod matrix;
mod snf;

pub use class::{HomologyClass, Subquotient, TorsionCoordinate, Variance};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfDecomposition};

use num_bigint::BigInt;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("degree {degree} is outside the complex (top degree {top})")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("chain is not a cycle in degree {degree}: boundary {}", fmt_vec(.boundary))]
    NotACycle { degree: usize, boundary: Vec<BigInt> },
    #[error("cochain is not a cocycle in degree {degree}: coboundary {}", fmt_vec(.coboundary))]
    NotACocycle { degree: usize, coboundary: Vec<BigInt> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("boundary maps do not compose to zero at degree {degree}")]
    NotAChainComplex { degree: usize },
    #[error("classes live in different bases ({left:?} vs {right:?})")]
    BasisMismatch { left: Option<String>, right: Option<String> },
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Rank and torsion of a finitely generated abelian group, torsion listed as
/// invariant factors greater than one in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    #[serde(with = "crate::bigint_serde::vec")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A finite chain complex `C_top → … → C_1 → C_0` of free abelian groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k : C_k → C_{k-1}`.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Validates shapes and `∂ ∘ ∂ = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, HomologyError> {
        if ranks.is_empty() || boundaries.len() + 1 != ranks.len() {
            return Err(HomologyError::DimensionMismatch {
                expected: ranks.len().saturating_sub(1),
                found: boundaries.len(),
            });
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[k] || b.cols() != ranks[k + 1] {
                return Err(HomologyError::DimensionMismatch {
                    expected: ranks[k] * ranks[k + 1],
                    found: b.rows() * b.cols(),
                });
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k]).is_zero() {
                return Err(HomologyError::NotAChainComplex { degree: k });
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, k: usize) -> Result<usize, HomologyError> {
        self.ranks
            .get(k)
            .copied()
            .ok_or(HomologyError::DegreeOutOfRange { degree: k, top: self.top_degree() })
    }

    /// `∂_k` for `1 <= k <= top`.
    pub fn boundary(&self, k: usize) -> Result<&IntMatrix, HomologyError> {
        if k == 0 || k > self.top_degree() {
            return Err(HomologyError::DegreeOutOfRange { degree: k, top: self.top_degree() });
        }
        Ok(&self.boundaries[k - 1])
    }

    /// `∂_k`, with the zero maps `C_0 → 0` and `0 → C_top` at the ends.
    fn boundary_or_zero(&self, k: usize) -> IntMatrix {
        if k == 0 {
            IntMatrix::zeros(0, self.ranks[0])
        } else if k > self.top_degree() {
            IntMatrix::zeros(self.ranks[self.top_degree()], 0)
        } else {
            self.boundaries[k - 1].clone()
        }
    }

    pub fn homology(&self, k: usize) -> Result<Subquotient, HomologyError> {
        self.rank(k)?;
        Subquotient::new(k, Variance::Homology, self.boundary_or_zero(k + 1), self.boundary_or_zero(k))
    }

    pub fn cohomology(&self, k: usize) -> Result<Subquotient, HomologyError> {
        self.rank(k)?;
        Subquotient::new(
            k,
            Variance::Cohomology,
            self.boundary_or_zero(k).transpose(),
            self.boundary_or_zero(k + 1).transpose(),
        )
    }

    /// Applies `∂_k` to a chain (`∂_0` is zero).
    pub fn apply_boundary(&self, k: usize, chain: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        let d = self.boundary_or_zero(k);
        if chain.len() != d.cols() {
            return Err(HomologyError::DimensionMismatch { expected: d.cols(), found: chain.len() });
        }
        Ok(d.mul_vec(chain))
    }

    /// Applies `δ^k = ∂_{k+1}ᵀ` to a cochain.
    pub fn apply_coboundary(&self, k: usize, cochain: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        let d = self.boundary_or_zero(k + 1).transpose();
        if cochain.len() != d.cols() {
            return Err(HomologyError::DimensionMismatch { expected: d.cols(), found: cochain.len() });
        }
        Ok(d.mul_vec(cochain))
    }
}

pub fn homology_groups(complex: &ChainComplex, k: usize) -> Result<HomologyGroup, HomologyError> {
    Ok(complex.homology(k)?.group())
}

pub fn cycle_class(
    complex: &ChainComplex,
    chain: &[BigInt],
    k: usize,
) -> Result<HomologyClass, HomologyError> {
    complex.homology(k)?.class_of(chain)
}

/// `Some(x)` with `∂_{k+1} x = chain` when the cycle bounds.
pub fn is_boundary(
    complex: &ChainComplex,
    chain: &[BigInt],
    k: usize,
) -> Result<Option<Vec<BigInt>>, HomologyError> {
    complex.homology(k)?.solve(chain)
}

pub fn cocycle_class(
    complex: &ChainComplex,
    cochain: &[BigInt],
    k: usize,
) -> Result<HomologyClass, HomologyError> {
    complex.cohomology(k)?.class_of(cochain)
}

/// `Some(ψ)` with `δψ = cochain` when the cocycle is a coboundary.
pub fn is_coboundary(
    complex: &ChainComplex,
    cochain: &[BigInt],
    k: usize,
) -> Result<Option<Vec<BigInt>>, HomologyError> {
    complex.cohomology(k)?.solve(cochain)
}

/// Converts a small-integer vector.
pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
