use std::fmt;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// A set of qubit indices, all `< n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Region {
    mask: BitVec,
}

impl Region {
    /// Rejects out-of-range and repeated indices.
    pub fn new(n: usize, qubits: impl IntoIterator<Item = usize>) -> Result<Region> {
        let mut mask = BitVec::zeros(n);
        for q in qubits {
            if q >= n {
                return Err(Error::InvalidParameter(format!("qubit {q} out of range for n = {n}")));
            }
            if mask.get(q) {
                return Err(Error::InvalidParameter(format!("qubit {q} listed twice")));
            }
            mask.set(q, true);
        }
        Ok(Region { mask })
    }

    pub fn from_mask(mask: BitVec) -> Region {
        Region { mask }
    }

    pub fn empty(n: usize) -> Region {
        Region {
            mask: BitVec::zeros(n),
        }
    }

    pub fn full(n: usize) -> Region {
        Region {
            mask: BitVec::from_indices(n, 0..n),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &BitVec {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_zero()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.mask.get(q)
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.mask.iter_ones().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter_ones()
    }

    pub fn complement(&self) -> Region {
        let n = self.num_qubits();
        let mut mask = BitVec::from_indices(n, 0..n);
        mask.xor_assign(&self.mask);
        Region { mask }
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut mask = self.mask.clone();
        mask.or_assign(&other.mask);
        Region { mask }
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut mask = self.mask.clone();
        mask.and_assign(&other.mask);
        Region { mask }
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.mask.overlap(&other.mask) == self.len()
    }

    pub fn intersects(&self, other: &Region) -> bool {
        self.mask.overlap(&other.mask) > 0
    }

    /// Columns of a `(x | z)` vector that belong to this region.
    pub(crate) fn symplectic_columns(&self) -> Vec<usize> {
        let n = self.num_qubits();
        let q = self.qubits();
        q.iter().copied().chain(q.iter().map(|i| i + n)).collect()
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region{:?}", self.qubits())
    }
}
