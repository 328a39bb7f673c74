//! Hyper-cubic lattice geometry attached to a code.
//!
//! Qubits sit on integer sites in `[0, L)^D`; several qubits may share a site.
//! Distances use the Chebyshev metric, wrapping on periodic axes, so a ball is
//! a coordinate box.

use crate::error::{Error, Result};
use crate::region::Region;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGeometry {
    dim: usize,
    size: usize,
    coords: Vec<Vec<usize>>,
    periodic: Vec<bool>,
    xi: usize,
    generator_supports: Vec<Vec<usize>>,
    site_qubits: Vec<Vec<usize>>,
}

impl LatticeGeometry {
    pub fn new(dim: usize, size: usize, coords: Vec<Vec<usize>>, periodic: Vec<bool>, xi: usize) -> Result<Self> {
        if dim == 0 || size == 0 {
            return Err(Error::InvalidParameter("lattice needs D >= 1 and L >= 1".into()));
        }
        if periodic.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "periodic flags: expected {dim}, got {}",
                periodic.len()
            )));
        }
        let sites = size.checked_pow(dim as u32).ok_or_else(|| Error::TooLarge("lattice volume".into()))?;
        let mut site_qubits = vec![Vec::new(); sites];
        for (q, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::InvalidParameter(format!("qubit {q}: coordinate has {} axes", c.len())));
            }
            if let Some(bad) = c.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidParameter(format!("qubit {q}: coordinate {bad} outside [0, {size})")));
            }
            site_qubits[site_index(size, c)].push(q);
        }
        Ok(LatticeGeometry {
            dim,
            size,
            coords,
            periodic,
            xi,
            generator_supports: Vec::new(),
            site_qubits,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn xi(&self) -> usize {
        self.xi
    }

    pub fn num_qubits(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, q: usize) -> &[usize] {
        &self.coords[q]
    }

    pub fn all_coords(&self) -> &[Vec<usize>] {
        &self.coords
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn generator_supports(&self) -> &[Vec<usize>] {
        &self.generator_supports
    }

    pub(crate) fn set_generator_supports(&mut self, supports: Vec<Vec<usize>>) -> Result<()> {
        for (i, s) in supports.iter().enumerate() {
            let d = self.diameter(s);
            if d > self.xi {
                return Err(Error::Invariant(format!(
                    "generator {i} has diameter {d} > declared xi = {}",
                    self.xi
                )));
            }
        }
        self.generator_supports = supports;
        Ok(())
    }

    pub fn num_sites(&self) -> usize {
        self.site_qubits.len()
    }

    pub fn site_of(&self, q: usize) -> usize {
        site_index(self.size, &self.coords[q])
    }

    pub fn qubits_at_site(&self, site: usize) -> &[usize] {
        &self.site_qubits[site]
    }

    pub fn site_coords(&self, site: usize) -> Vec<usize> {
        let mut c = Vec::with_capacity(self.dim);
        let mut rest = site;
        for _ in 0..self.dim {
            c.push(rest % self.size);
            rest /= self.size;
        }
        c
    }

    pub fn site_at(&self, c: &[usize]) -> usize {
        site_index(self.size, c)
    }

    /// Per-axis separation, wrapping on periodic axes.
    pub fn axis_distance(&self, axis: usize, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        if self.periodic[axis] {
            d.min(self.size - d)
        } else {
            d
        }
    }

    pub fn site_distance(&self, a: &[usize], b: &[usize]) -> usize {
        (0..self.dim).map(|i| self.axis_distance(i, a[i], b[i])).max().unwrap_or(0)
    }

    /// Chebyshev distance between the sites of two qubits.
    pub fn distance(&self, q1: usize, q2: usize) -> usize {
        self.site_distance(&self.coords[q1], &self.coords[q2])
    }

    pub fn diameter(&self, qubits: &[usize]) -> usize {
        let mut best = 0;
        for (i, &a) in qubits.iter().enumerate() {
            for &b in &qubits[i + 1..] {
                best = best.max(self.distance(a, b));
            }
        }
        best
    }

    pub fn max_generator_diameter(&self) -> usize {
        self.generator_supports.iter().map(|s| self.diameter(s)).max().unwrap_or(0)
    }

    /// All qubits whose site lies in the box `lo[i] <= c[i] < hi[i]`.
    pub fn box_region(&self, lo: &[usize], hi: &[usize]) -> Result<Region> {
        if lo.len() != self.dim || hi.len() != self.dim {
            return Err(Error::InvalidParameter(format!("box needs {} ranges", self.dim)));
        }
        let qubits = (0..self.num_qubits()).filter(|&q| {
            self.coords[q]
                .iter()
                .enumerate()
                .all(|(i, &c)| c >= lo[i] && c < hi[i])
        });
        Region::new(self.num_qubits(), qubits)
    }

    /// Region made of every qubit on the given sites.
    pub fn region_of_sites(&self, sites: impl IntoIterator<Item = usize>) -> Region {
        let mut mask = crate::bits::BitVec::zeros(self.num_qubits());
        for s in sites {
            for &q in &self.site_qubits[s] {
                mask.set(q, true);
            }
        }
        Region::from_mask(mask)
    }
}

pub(crate) fn site_index(size: usize, c: &[usize]) -> usize {
    c.iter().rev().fold(0, |acc, &v| acc * size + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_chebyshev() {
        let coords = vec![vec![0, 0], vec![3, 1], vec![2, 2]];
        let g = LatticeGeometry::new(2, 4, coords, vec![true, false], 1).unwrap();
        assert_eq!(g.distance(0, 1), 1);
        assert_eq!(g.distance(0, 2), 2);
        assert_eq!(g.site_coords(g.site_of(1)), vec![3, 1]);
    }

    #[test]
    fn coordinates_must_fit() {
        assert!(LatticeGeometry::new(1, 3, vec![vec![3]], vec![true], 1).is_err());
    }
}
