//! Fock–Goncharov A-coordinates on ideally triangulated punctured surfaces.
//!
//! The crate computes with doubly-decorated convex projective structures
//! through their A-coordinates: one positive parameter per triangle and one
//! per oriented edge. On top of that chart it provides:
//!
//! * outitude evaluation and the edge-flip coordinate transform ([`coords`]),
//! * the flip algorithm that reaches the canonical cell decomposition,
//!   cell membership, sampling, and deformation ([`canonical`]),
//! * projection to X-coordinates and holonomy matrices along monodromy-graph
//!   paths, with parabolicity tests ([`holonomy`]),
//! * the projective duality involution ([`dualize`]),
//! * developing-map lifts to concrete flag triples in R³ and SVG rendering
//!   ([`develop`]),
//! * the decorated-hyperbolic subvariety: λ-lengths, the Penner embedding,
//!   and cell centers ([`hyperbolic`]).
//!
//! All kernels are generic over a [`scalar::Scalar`] backend: exact
//! big-rational arithmetic (the default; every flip/duality/holonomy map is
//! rational) or `f64` with a fixed comparison tolerance for the operations
//! that genuinely need radicals (normalization, the hyperbolic embedding,
//! cell centers).

pub mod canonical;
pub mod coords;
pub mod develop;
pub mod error;
pub mod dualize;
pub mod fixtures;
pub mod holonomy;
pub mod hyperbolic;
pub mod json;
pub mod scalar;
pub mod surface;

pub use coords::{ACoords, XCoords};
pub use error::Error;
pub use scalar::{Backend, Rational, Scalar, Sign};
pub use surface::{EdgeId, Side, Triangulation};
