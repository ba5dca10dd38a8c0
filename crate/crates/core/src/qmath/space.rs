//! Labeled tensor-product spaces.
//!
//! A [`HilbertSpace`] is an ordered list of named factors, each with a
//! dimension ≥ 2. Labels let higher layers address subsystems ("spin",
//! "photon3") without tracking raw index offsets, and make dimension
//! mismatches loud errors instead of silent transpositions.
//!
//! Index convention: the composite index is row-major over the factor list,
//! i.e. the *first* factor is the most significant digit. This matches
//! [`ComplexMatrix::kron`](super::matrix::ComplexMatrix::kron), where the
//! first operand addresses the coarse block structure.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An ordered tensor product of named finite-dimensional factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    factors: Vec<(String, usize)>,
}

impl HilbertSpace {
    /// The empty product: no factors, total dimension 1.
    pub fn empty() -> Self {
        HilbertSpace {
            factors: Vec::new(),
        }
    }

    /// A single named factor. The dimension must be at least 2.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        HilbertSpace::from_factors(&[(label, dim)])
    }

    /// Builds a space from `(label, dim)` pairs, checking that labels are
    /// unique and every dimension is at least 2.
    pub fn from_factors(factors: &[(&str, usize)]) -> Result<Self> {
        let mut out: Vec<(String, usize)> = Vec::with_capacity(factors.len());
        for &(label, dim) in factors {
            if dim < 2 {
                return Err(Error::InvalidParameter {
                    name: "dim",
                    message: alloc::format!("factor '{label}' has dimension {dim}, need ≥ 2"),
                });
            }
            if out.iter().any(|(l, _)| l == label) {
                return Err(Error::DuplicateLabel {
                    label: label.to_string(),
                });
            }
            out.push((label.to_string(), dim));
        }
        Ok(HilbertSpace { factors: out })
    }

    /// Number of factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// True when there are no factors (total dimension 1).
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total dimension: the product of all factor dimensions.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|&(_, d)| d).product()
    }

    /// The `(label, dim)` pairs in order.
    pub fn factors(&self) -> impl Iterator<Item = (&str, usize)> {
        self.factors.iter().map(|(l, d)| (l.as_str(), *d))
    }

    /// Labels in factor order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|(l, _)| l.as_str())
    }

    /// Position of a label in the factor list.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel {
                label: label.to_string(),
            })
    }

    /// Dimension of the named factor.
    pub fn dim_of(&self, label: &str) -> Result<usize> {
        let p = self.position(label)?;
        Ok(self.factors[p].1)
    }

    /// True when the space contains a factor with this label.
    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|(l, _)| l == label)
    }

    /// Stride of the factor at `index`: the product of all dimensions to its
    /// right, i.e. how far the composite index moves when this factor's
    /// digit increments by one.
    pub fn stride(&self, index: usize) -> usize {
        self.factors[index + 1..].iter().map(|&(_, d)| d).product()
    }

    /// Tensor product with another space; labels must stay unique.
    pub fn tensor(&self, other: &HilbertSpace) -> Result<HilbertSpace> {
        let mut factors = self.factors.clone();
        for (label, dim) in &other.factors {
            if factors.iter().any(|(l, _)| l == label) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
            factors.push((label.clone(), *dim));
        }
        Ok(HilbertSpace { factors })
    }

    /// The space with one factor removed, plus that factor's old position.
    pub fn without(&self, label: &str) -> Result<(HilbertSpace, usize)> {
        let p = self.position(label)?;
        let mut factors = self.factors.clone();
        factors.remove(p);
        Ok((HilbertSpace { factors }, p))
    }

    /// Splits a composite index into one digit per factor.
    pub fn unravel(&self, mut index: usize) -> Vec<usize> {
        let mut digits = alloc::vec![0usize; self.factors.len()];
        for (k, &(_, d)) in self.factors.iter().enumerate().rev() {
            digits[k] = index % d;
            index /= d;
        }
        digits
    }

    /// Combines one digit per factor into a composite index.
    pub fn ravel(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.factors.len());
        let mut index = 0usize;
        for (k, &(_, d)) in self.factors.iter().enumerate() {
            debug_assert!(digits[k] < d);
            index = index * d + digits[k];
        }
        index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_strides() {
        let s = HilbertSpace::from_factors(&[("spin", 4), ("photon1", 2), ("photon2", 2)])
            .unwrap();
        assert_eq!(s.dim(), 16);
        assert_eq!(s.len(), 3);
        assert_eq!(s.stride(0), 4);
        assert_eq!(s.stride(1), 2);
        assert_eq!(s.stride(2), 1);
        assert_eq!(s.position("photon1").unwrap(), 1);
        assert_eq!(s.dim_of("spin").unwrap(), 4);
        assert!(s.contains("photon2"));
        assert!(!s.contains("photon3"));
    }

    #[test]
    fn empty_space_has_dimension_one() {
        let s = HilbertSpace::empty();
        assert_eq!(s.dim(), 1);
        assert!(s.is_empty());
        assert_eq!(s.ravel(&[]), 0);
        assert!(s.unravel(0).is_empty());
    }

    #[test]
    fn rejects_duplicates_and_trivial_factors() {
        assert!(HilbertSpace::from_factors(&[("a", 2), ("a", 2)]).is_err());
        assert!(HilbertSpace::from_factors(&[("a", 1)]).is_err());
        let s = HilbertSpace::single("a", 2).unwrap();
        assert!(s.tensor(&HilbertSpace::single("a", 3).unwrap()).is_err());
    }

    #[test]
    fn ravel_round_trips() {
        let s = HilbertSpace::from_factors(&[("a", 3), ("b", 2), ("c", 4)]).unwrap();
        for i in 0..s.dim() {
            assert_eq!(s.ravel(&s.unravel(i)), i);
        }
        // First factor is most significant.
        assert_eq!(s.ravel(&[1, 0, 0]), 8);
        assert_eq!(s.ravel(&[0, 1, 0]), 4);
        assert_eq!(s.ravel(&[0, 0, 1]), 1);
    }

    #[test]
    fn tensor_and_without() {
        let a = HilbertSpace::single("spin", 4).unwrap();
        let b = HilbertSpace::single("photon1", 2).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.dim(), 8);
        let (rest, pos) = ab.without("spin").unwrap();
        assert_eq!(pos, 0);
        assert_eq!(rest.dim(), 2);
        assert!(ab.without("nope").is_err());
    }
}
