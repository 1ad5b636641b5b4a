use super::{smith_normal_form, HomologyError, HomologyGroup, IntMatrix, SnfDecomposition};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Whether a subquotient is built from boundary maps or their transposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Homology,
    Cohomology,
}

/// `ker(outgoing) / im(incoming)` for a composable pair `X --incoming--> Y
/// --outgoing--> Z` with `outgoing ∘ incoming = 0`, together with the SNF
/// data needed to put an element of `ker(outgoing)` into coordinates.
///
/// Coordinates: with `U · incoming · V = diag(d)`, an element `z` maps to
/// `y = U z`. For `i < rank(incoming)` the residue `y_i mod d_i` is a torsion
/// coordinate (kept when `d_i > 1`). The tail `y[rank..]` lies in the kernel
/// of `outgoing · U⁻¹` restricted to those columns; a second SNF of that block
/// gives a unimodular basis of the kernel, and `free` is the tail of
/// `V₂⁻¹ · y[rank..]` in that basis.
#[derive(Clone, Debug)]
pub struct Subquotient {
    degree: usize,
    variance: Variance,
    incoming: IntMatrix,
    outgoing: IntMatrix,
    snf_in: SnfDecomposition,
    snf_free: SnfDecomposition,
    fingerprint: String,
}

impl Subquotient {
    pub fn new(
        degree: usize,
        variance: Variance,
        incoming: IntMatrix,
        outgoing: IntMatrix,
    ) -> Result<Self, HomologyError> {
        if incoming.rows() != outgoing.cols() {
            return Err(HomologyError::DimensionMismatch {
                expected: outgoing.cols(),
                found: incoming.rows(),
            });
        }
        if !outgoing.mul(&incoming).is_zero() {
            return Err(HomologyError::NotAChainComplex { degree });
        }
        let snf_in = smith_normal_form(&incoming);
        let r = snf_in.rank();
        let restricted = outgoing.mul(&snf_in.u_inv).column_block(r, incoming.rows());
        let snf_free = smith_normal_form(&restricted);
        let fingerprint = fingerprint(degree, variance, &incoming, &outgoing);
        Ok(Subquotient { degree, variance, incoming, outgoing, snf_in, snf_free, fingerprint })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    /// Rank of the ambient free module (the middle group).
    pub fn dimension(&self) -> usize {
        self.incoming.rows()
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn free_rank(&self) -> usize {
        let tail = self.dimension() - self.snf_in.rank();
        tail - self.snf_free.rank()
    }

    fn torsion_positions(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        (0..self.snf_in.rank())
            .map(|i| (i, self.snf_in.s.get(i, i)))
            .filter(|(_, d)| !d.is_one())
    }

    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            rank: self.free_rank(),
            torsion: self.torsion_positions().map(|(_, d)| d.clone()).collect(),
        }
    }

    fn check_dimension(&self, element: &[BigInt]) -> Result<(), HomologyError> {
        if element.len() != self.dimension() {
            return Err(HomologyError::DimensionMismatch {
                expected: self.dimension(),
                found: element.len(),
            });
        }
        Ok(())
    }

    fn check_closed(&self, element: &[BigInt]) -> Result<(), HomologyError> {
        self.check_dimension(element)?;
        let image = self.outgoing.mul_vec(element);
        if image.iter().all(Zero::is_zero) {
            return Ok(());
        }
        Err(match self.variance {
            Variance::Homology => HomologyError::NotACycle { degree: self.degree, boundary: image },
            Variance::Cohomology => {
                HomologyError::NotACocycle { degree: self.degree, coboundary: image }
            }
        })
    }

    /// Coordinates of the class of `element` (which must be closed).
    pub fn class_of(&self, element: &[BigInt]) -> Result<HomologyClass, HomologyError> {
        self.check_closed(element)?;
        let y = self.snf_in.u.mul_vec(element);
        let r = self.snf_in.rank();
        let torsion = self
            .torsion_positions()
            .map(|(i, d)| TorsionCoordinate { modulus: d.clone(), residue: y[i].mod_floor(d) })
            .collect();
        let in_kernel_basis = self.snf_free.v_inv.mul_vec(&y[r..]);
        let rb = self.snf_free.rank();
        debug_assert!(in_kernel_basis[..rb].iter().all(Zero::is_zero));
        Ok(HomologyClass {
            degree: self.degree,
            free: in_kernel_basis[rb..].to_vec(),
            torsion,
            basis: Some(self.fingerprint.clone()),
        })
    }

    pub fn zero_class(&self) -> HomologyClass {
        HomologyClass {
            degree: self.degree,
            free: vec![BigInt::zero(); self.free_rank()],
            torsion: self
                .torsion_positions()
                .map(|(_, d)| TorsionCoordinate { modulus: d.clone(), residue: BigInt::zero() })
                .collect(),
            basis: Some(self.fingerprint.clone()),
        }
    }

    /// Solves `incoming · x = element` over the integers. `Ok(None)` means the
    /// element is closed but not exact.
    pub fn solve(&self, element: &[BigInt]) -> Result<Option<Vec<BigInt>>, HomologyError> {
        self.check_closed(element)?;
        let y = self.snf_in.u.mul_vec(element);
        let r = self.snf_in.rank();
        let mut x = vec![BigInt::zero(); self.incoming.cols()];
        for i in 0..y.len() {
            if i < r {
                let (q, rem) = y[i].div_rem(self.snf_in.s.get(i, i));
                if !rem.is_zero() {
                    return Ok(None);
                }
                x[i] = q;
            } else if !y[i].is_zero() {
                return Ok(None);
            }
        }
        let witness = self.snf_in.v.mul_vec(&x);
        debug_assert_eq!(self.incoming.mul_vec(&witness), element);
        Ok(Some(witness))
    }
}

fn fingerprint(degree: usize, variance: Variance, a: &IntMatrix, b: &IntMatrix) -> String {
    let mut h = Sha256::new();
    h.update(match variance {
        Variance::Homology => b"H".as_slice(),
        Variance::Cohomology => b"C".as_slice(),
    });
    h.update((degree as u64).to_le_bytes());
    for m in [a, b] {
        h.update((m.rows() as u64).to_le_bytes());
        h.update((m.cols() as u64).to_le_bytes());
        for x in m.entries() {
            let bytes = x.to_signed_bytes_le();
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
    }
    let digest = h.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// A residue modulo one invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCoordinate {
    #[serde(with = "crate::bigint_serde")]
    pub modulus: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub residue: BigInt,
}

/// A (co)homology class in SNF coordinates. Coordinates are only meaningful
/// relative to the basis they were computed in; `basis` carries its
/// fingerprint and mixing classes from different bases is an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClass {
    pub degree: usize,
    #[serde(with = "crate::bigint_serde::vec")]
    pub free: Vec<BigInt>,
    pub torsion: Vec<TorsionCoordinate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

impl HomologyClass {
    /// A class with free part only and no recorded basis.
    pub fn free_only(degree: usize, free: Vec<BigInt>) -> Self {
        HomologyClass { degree, free, torsion: Vec::new(), basis: None }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|t| t.residue.is_zero())
    }

    /// Reduces every torsion residue into `[0, modulus)`.
    pub fn normalized(mut self) -> Self {
        for t in &mut self.torsion {
            t.residue = t.residue.mod_floor(&t.modulus);
        }
        self
    }

    fn compatible(&self, other: &HomologyClass) -> Result<(), HomologyError> {
        let same_shape = self.degree == other.degree
            && self.free.len() == other.free.len()
            && self.torsion.len() == other.torsion.len()
            && self.torsion.iter().zip(&other.torsion).all(|(a, b)| a.modulus == b.modulus);
        if !same_shape || self.basis != other.basis {
            return Err(HomologyError::BasisMismatch {
                left: self.basis.clone(),
                right: other.basis.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HomologyClass) -> Result<HomologyClass, HomologyError> {
        self.compatible(other)?;
        Ok(HomologyClass {
            degree: self.degree,
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .map(|(a, b)| TorsionCoordinate {
                    modulus: a.modulus.clone(),
                    residue: (&a.residue + &b.residue).mod_floor(&a.modulus),
                })
                .collect(),
            basis: self.basis.clone(),
        })
    }

    pub fn scale(&self, factor: &BigInt) -> HomologyClass {
        HomologyClass {
            degree: self.degree,
            free: self.free.iter().map(|a| a * factor).collect(),
            torsion: self
                .torsion
                .iter()
                .map(|t| TorsionCoordinate {
                    modulus: t.modulus.clone(),
                    residue: (&t.residue * factor).mod_floor(&t.modulus),
                })
                .collect(),
            basis: self.basis.clone(),
        }
    }

    pub fn neg(&self) -> HomologyClass {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &HomologyClass) -> Result<HomologyClass, HomologyError> {
        self.add(&other.neg())
    }
}
