//! Error type shared by every module, with stable machine-readable codes.

use std::fmt;

/// Everything that can go wrong while building or transforming structures.
///
/// [`Error::code`] returns the stable SCREAMING_CASE identifier used by the
/// command-line tool; the `Display` impl prepends it to a human explanation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Triangle or edge count does not match the surface signature.
    CountMismatch {
        expected_triangles: usize,
        expected_edges: usize,
        triangles: usize,
        edges: usize,
    },
    /// A (triangle, slot) pair is not covered by any gluing.
    UngluedSlot { tri: String, slot: u8 },
    /// A (triangle, slot) pair appears in more than one gluing side.
    DuplicateSlot { tri: String, slot: u8 },
    /// The triangle adjacency graph is not connected.
    Disconnected,
    /// Corner-orbit count differs from the declared number of punctures.
    PunctureMismatch { declared: usize, found: usize },
    /// An edge id that is not part of the chart.
    UnknownEdge { edge: String },
    /// A triangle id that is not part of the chart.
    UnknownTriangle { tri: String },
    /// A puncture index outside `0..punctures`.
    UnknownPuncture { puncture: usize },
    /// Both sides of the edge lie on one triangle; the flip square would have
    /// the edge itself on its boundary, so no flip exists.
    UnflippableEdge { edge: String },
    /// The kept-edge subset does not cut the surface into discs, or the
    /// polygon diagonals cannot be arranged as required.
    NotACellDecomposition { reason: String },
    /// The flip algorithm hit its budget; lists edges still negative.
    FlipBudgetExceeded {
        budget: usize,
        remaining_negative: Vec<String>,
    },
    /// An operation requiring all outitudes ≥ 0 saw a negative one.
    NotCanonical { edge: String },
    /// Coordinates and cell decomposition live on different charts.
    ChartMismatch,
    /// Coordinates are not interior to the given cell.
    NotInCell { detail: String },
    /// A rescaling factor must be strictly positive.
    NonpositiveScale,
    /// The exact rational backend cannot perform this operation (it needs a
    /// radical); use the float backend.
    ExactBackendUnsupported { op: &'static str },
    /// A parameter that must be strictly positive is not.
    NonpositiveParameter { context: String },
    /// A monodromy-graph path description is unusable.
    MalformedPath { detail: String },
    /// A matrix that must be invertible is singular.
    SingularMatrix,
    /// The next-vertex linear system is singular (corrupted development).
    SingularSystem,
    /// A developed vertex does not project into the affine chart.
    ProjectionFailure,
    /// Malformed input (JSON shape, value syntax, CLI arguments).
    BadInput { detail: String },
}

impl Error {
    /// Stable machine-readable code for this error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CountMismatch { .. } => "COUNT_MISMATCH",
            Error::UngluedSlot { .. } => "UNGLUED_SLOT",
            Error::DuplicateSlot { .. } => "DUPLICATE_SLOT",
            Error::Disconnected => "DISCONNECTED",
            Error::PunctureMismatch { .. } => "PUNCTURE_MISMATCH",
            Error::UnknownEdge { .. } => "UNKNOWN_EDGE",
            Error::UnknownTriangle { .. } => "UNKNOWN_TRIANGLE",
            Error::UnknownPuncture { .. } => "UNKNOWN_PUNCTURE",
            Error::UnflippableEdge { .. } => "UNFLIPPABLE_EDGE",
            Error::NotACellDecomposition { .. } => "NOT_A_CELL_DECOMPOSITION",
            Error::FlipBudgetExceeded { .. } => "FLIP_BUDGET_EXCEEDED",
            Error::NotCanonical { .. } => "NOT_CANONICAL",
            Error::ChartMismatch => "CHART_MISMATCH",
            Error::NotInCell { .. } => "NOT_IN_CELL",
            Error::NonpositiveScale => "NONPOSITIVE_SCALE",
            Error::ExactBackendUnsupported { .. } => "EXACT_BACKEND_UNSUPPORTED",
            Error::NonpositiveParameter { .. } => "NONPOSITIVE_PARAMETER",
            Error::MalformedPath { .. } => "MALFORMED_PATH",
            Error::SingularMatrix => "SINGULAR_MATRIX",
            Error::SingularSystem => "SINGULAR_SYSTEM",
            Error::ProjectionFailure => "PROJECTION_FAILURE",
            Error::BadInput { .. } => "BAD_INPUT",
        }
    }

    /// True for errors caused by invalid *input* (as opposed to a failed
    /// computation on valid input); drives the CLI exit code.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::CountMismatch { .. }
                | Error::UngluedSlot { .. }
                | Error::DuplicateSlot { .. }
                | Error::Disconnected
                | Error::PunctureMismatch { .. }
                | Error::UnknownEdge { .. }
                | Error::UnknownTriangle { .. }
                | Error::UnknownPuncture { .. }
                | Error::ChartMismatch
                | Error::NonpositiveScale
                | Error::NonpositiveParameter { .. }
                | Error::MalformedPath { .. }
                | Error::BadInput { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.code())?;
        match self {
            Error::CountMismatch {
                expected_triangles,
                expected_edges,
                triangles,
                edges,
            } => write!(
                f,
                "signature requires {expected_triangles} triangles and {expected_edges} edges, \
                 got {triangles} and {edges}"
            ),
            Error::UngluedSlot { tri, slot } => {
                write!(f, "slot {slot} of triangle {tri} is not glued to any edge")
            }
            Error::DuplicateSlot { tri, slot } => {
                write!(f, "slot {slot} of triangle {tri} is used by more than one gluing")
            }
            Error::Disconnected => write!(f, "the triangle gluing graph is not connected"),
            Error::PunctureMismatch { declared, found } => write!(
                f,
                "corner orbits give {found} punctures but the signature declares {declared}"
            ),
            Error::UnknownEdge { edge } => write!(f, "no edge named {edge}"),
            Error::UnknownTriangle { tri } => write!(f, "no triangle named {tri}"),
            Error::UnknownPuncture { puncture } => write!(f, "no puncture with index {puncture}"),
            Error::UnflippableEdge { edge } => write!(
                f,
                "edge {edge} has both sides on one triangle and cannot be flipped"
            ),
            Error::NotACellDecomposition { reason } => write!(f, "{reason}"),
            Error::FlipBudgetExceeded {
                budget,
                remaining_negative,
            } => write!(
                f,
                "no canonical chart within {budget} flips; still negative: {}",
                remaining_negative.join(", ")
            ),
            Error::NotCanonical { edge } => {
                write!(f, "outitude of edge {edge} is negative; chart is not canonical")
            }
            Error::ChartMismatch => {
                write!(f, "coordinates are expressed on a different chart than the cell")
            }
            Error::NotInCell { detail } => write!(f, "{detail}"),
            Error::NonpositiveScale => write!(f, "scale factor must be strictly positive"),
            Error::ExactBackendUnsupported { op } => write!(
                f,
                "{op} needs a radical; it is only available on the float backend"
            ),
            Error::NonpositiveParameter { context } => {
                write!(f, "parameter must be strictly positive: {context}")
            }
            Error::MalformedPath { detail } => write!(f, "{detail}"),
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::SingularSystem => {
                write!(f, "next-vertex system is singular; development state is corrupt")
            }
            Error::ProjectionFailure => write!(
                f,
                "a developed vertex has non-positive pairing with the projection plane"
            ),
            Error::BadInput { detail } => write!(f, "{detail}"),
        }
    }
}

impl std::error::Error for Error {}
