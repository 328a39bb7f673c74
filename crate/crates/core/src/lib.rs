//! Symplectic toolkit for stabilizer and subsystem codes: cleanability and
//! distance queries, Clifford-hierarchy levels of diagonal gates, lattice
//! partitions, and erasure Monte Carlo.

pub mod bits;
pub mod cleaning;
pub mod code;
pub mod dense;
pub mod error;
pub mod geometry;
pub mod hierarchy;
pub mod io;
pub mod lattice;
pub mod loss;
pub mod pauli;
pub mod region;
pub mod search;
pub mod syntax;

pub use code::{build_bacon_shor, build_haah_cubic, build_reed_muller, build_steane, build_toric, SubsystemCode};
pub use error::{Error, Result};
pub use lattice::LatticeGeometry;
pub use pauli::{Letter, PauliOperator, SymplecticBasis};
pub use region::Region;
