//! Integer Khovanov homology of oriented link diagrams, computed from
//! enhanced states, together with explicit order-two torsion chains built
//! from blue ladders and certified through even submodules.
//!
//! The crate is organised bottom-up:
//!
//! * [`diagram`]: PD codes and the pretzel / rational / 3-braid families.
//! * [`smoothing`]: Kauffman states, smoothed diagrams, enhanced states, chains.
//! * [`complex`]: incidence numbers, the differential and boundary matrices.
//! * [`homology`]: Smith normal form, homology tables and the exactness oracle.
//! * [`ladders`]: ladder detection, periphery numbers and hypothesis checks.
//! * [`torsion`]: torsion chains, even modules, certificates, grids and bounds.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod complex;
pub mod diagram;
pub mod homology;
pub mod ladders;
pub mod smoothing;
pub mod torsion;

pub use complex::ChainComplex;
pub use diagram::{Diagram, DiagramError, Sign};
pub use homology::{HomologyOracle, KhovanovTable, SmithForm};
pub use ladders::{HypothesisReport, Ladder, Route};
pub use smoothing::{Chain, EnhancedState, KauffmanState, SmoothedDiagram};
pub use torsion::{Certifier, Grid, TorsionCertificate, TorsionError};
