//! Monodromy matrices along paths in the monodromy graph.
//!
//! Joining each triangle's corners to its barycenter cuts the triangle into
//! three thirds; the monodromy graph is the dual spine of that refinement.
//! It has one node per triangle side — the third leaning on that edge — and
//! two kinds of connections: *turns* between consecutive thirds of one
//! triangle (three per triangle, forming a cycle around the barycenter) and
//! *crossings* between the two thirds flanking a surface edge (one per
//! edge). Walking a path in this graph multiplies one 3×3 matrix per step;
//! the product represents the holonomy of the corresponding loop up to a
//! scalar, so everything here lives in the projective class.
//!
//! Conventions are pinned by tests rather than convention: the turn
//! direction that carries `T(t)` (rather than its inverse) and the side on
//! which a crossing reads each quadruple ratio are exactly the choices under
//! which every flanked barycenter cycle is projectively trivial and
//! peripheral holonomy is parabolic identically in exact arithmetic. Every
//! other assignment fails both, so the tests below would catch a drifted
//! convention immediately.

use crate::coords::{ACoords, XCoords};
use crate::error::Error;
use crate::scalar::{Scalar, Sign};
use crate::surface::{PunctureId, Side, Triangulation, TriId};

/// Nodes of the monodromy graph are identified with triangle sides: the node
/// for side `(t, s)` sits in the third of `t` adjacent to its slot-`s` edge.
pub type Node = Side;

/// One directed step in the monodromy graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Step {
    /// Walk one third of the way around the barycenter of `tri`, starting at
    /// the node in slot `from`. Positive turns follow the triangle's
    /// orientation — in our slot numbering they *decrease* the slot — and
    /// contribute `T(t)`; negative turns increase the slot and contribute
    /// the exact inverse matrix.
    Turn { tri: TriId, from: u8, positive: bool },
    /// Cross the surface edge beneath `from`, landing on the side glued to
    /// it. A forward crossing contributes `E(q⁺, q⁻)` with `q⁺` read at the
    /// landing side and `q⁻` at the departing side. The two directions of a
    /// crossing are *not* mutually inverse, so walking the arc backwards is
    /// its own step: a reversed crossing runs from `opposite(from)` back to
    /// `from` and contributes the exact inverse of the forward matrix.
    Cross { from: Side, reversed: bool },
}

impl Step {
    /// Node the step departs from.
    pub fn source(&self, chart: &Triangulation) -> Node {
        match *self {
            Step::Turn { tri, from, .. } => Side::new(tri, from),
            Step::Cross { from, reversed: false } => from,
            Step::Cross { from, reversed: true } => chart.opposite(from),
        }
    }

    /// Node the step lands on.
    pub fn target(&self, chart: &Triangulation) -> Node {
        match *self {
            Step::Turn { tri, from, positive } => {
                let to = if positive { (from + 2) % 3 } else { (from + 1) % 3 };
                Side::new(tri, to)
            }
            Step::Cross { from, reversed: false } => chart.opposite(from),
            Step::Cross { from, reversed: true } => from,
        }
    }
}

/// The reverse walk: same arcs in opposite order and direction. Because each
/// reversed step contributes the exact inverse matrix, a path followed by
/// its reversal multiplies to the identity on the nose.
pub fn reversed_path(path: &[Step]) -> Vec<Step> {
    path.iter()
        .rev()
        .map(|step| match *step {
            Step::Turn { tri, from, positive } => {
                let to = if positive { (from + 2) % 3 } else { (from + 1) % 3 };
                Step::Turn { tri, from: to, positive: !positive }
            }
            Step::Cross { from, reversed } => Step::Cross { from, reversed: !reversed },
        })
        .collect()
}

/// A 3×3 matrix considered up to a nonzero scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveMatrix<S: Scalar> {
    pub rows: [[S; 3]; 3],
}

impl<S: Scalar> ProjectiveMatrix<S> {
    pub fn new(rows: [[S; 3]; 3]) -> Self {
        ProjectiveMatrix { rows }
    }

    pub fn identity() -> Self {
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { S::one() } else { S::zero() })
        });
        ProjectiveMatrix { rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = S::zero();
                for k in 0..3 {
                    acc = acc + self.rows[i][k].clone() * other.rows[k][j].clone();
                }
                acc
            })
        });
        ProjectiveMatrix { rows }
    }

    pub fn det(&self) -> S {
        let m = &self.rows;
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone()
                * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone()
                * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    pub fn trace(&self) -> S {
        self.rows[0][0].clone() + self.rows[1][1].clone() + self.rows[2][2].clone()
    }

    /// Sum of the principal 2×2 minors — the degree-two coefficient of the
    /// characteristic polynomial (up to sign).
    pub fn second_invariant(&self) -> S {
        let m = &self.rows;
        let mut acc = S::zero();
        for i in 0..3 {
            let j = (i + 1) % 3;
            acc = acc + m[i][i].clone() * m[j][j].clone() - m[i][j].clone() * m[j][i].clone();
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        let det = self.det();
        if det.sign() == Sign::Zero {
            return Err(Error::SingularMatrix);
        }
        let m = &self.rows;
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let cof = m[(j + 1) % 3][(i + 1) % 3].clone() * m[(j + 2) % 3][(i + 2) % 3].clone()
                    - m[(j + 1) % 3][(i + 2) % 3].clone() * m[(j + 2) % 3][(i + 1) % 3].clone();
                cof / det.clone()
            })
        });
        Ok(ProjectiveMatrix { rows })
    }

    /// Is this a scalar multiple of the identity?
    pub fn is_scalar(&self) -> bool {
        let m = &self.rows;
        for i in 0..3 {
            for j in 0..3 {
                if i != j && m[i][j].sign() != Sign::Zero {
                    return false;
                }
            }
        }
        (m[0][0].clone() - m[1][1].clone()).sign() == Sign::Zero
            && (m[0][0].clone() - m[2][2].clone()).sign() == Sign::Zero
    }

    /// Equality up to a nonzero scalar: all 2×2 cross products of entries
    /// agree.
    pub fn projectively_eq(&self, other: &Self) -> bool {
        let a: Vec<&S> = self.rows.iter().flatten().collect();
        let b: Vec<&S> = other.rows.iter().flatten().collect();
        for p in 0..9 {
            for q in (p + 1)..9 {
                let cross = a[p].clone() * b[q].clone() - a[q].clone() * b[p].clone();
                if cross.sign() != Sign::Zero {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_float(&self) -> ProjectiveMatrix<f64> {
        let rows = std::array::from_fn(|i| std::array::from_fn(|j| self.rows[i][j].to_f64()));
        ProjectiveMatrix { rows }
    }
}

/// Matrix of one positive turn in a triangle with triple ratio `t`:
/// `[[0, 0, 1], [0, −1, −1], [t, t+1, 1]]`. Its cube is `t` times the
/// identity, which is what makes barycenter cycles projectively trivial.
pub fn triangle_matrix<S: Scalar>(t: &S) -> Result<ProjectiveMatrix<S>, Error> {
    if t.sign() != Sign::Positive {
        return Err(Error::NonpositiveParameter { context: format!("triple ratio {}", t.render()) });
    }
    let neg_one = S::zero() - S::one();
    Ok(ProjectiveMatrix::new([
        [S::zero(), S::zero(), S::one()],
        [S::zero(), neg_one.clone(), neg_one],
        [t.clone(), t.clone() + S::one(), S::one()],
    ]))
}

/// Matrix of one forward edge crossing with quadruple ratios `q⁺` (landing
/// side) and `q⁻` (departing side):
/// `[[0, 0, q⁻], [0, −1, 0], [1/q⁺, 0, 1]]`.
pub fn edge_matrix<S: Scalar>(q_plus: &S, q_minus: &S) -> Result<ProjectiveMatrix<S>, Error> {
    for q in [q_plus, q_minus] {
        if q.sign() != Sign::Positive {
            return Err(Error::NonpositiveParameter {
                context: format!("quadruple ratio {}", q.render()),
            });
        }
    }
    Ok(ProjectiveMatrix::new([
        [S::zero(), S::zero(), q_minus.clone()],
        [S::zero(), S::zero() - S::one(), S::zero()],
        [S::one() / q_plus.clone(), S::zero(), S::one()],
    ]))
}

/// True iff the characteristic polynomial has a triple root and the matrix
/// is not scalar: `τ² = 3σ` and `τ³ = 27δ` for trace `τ`, second invariant
/// `σ`, determinant `δ`. Both conditions are invariant under rescaling the
/// matrix, so the test is well defined on the projective class.
pub fn is_parabolic<S: Scalar>(m: &ProjectiveMatrix<S>) -> Result<bool, Error> {
    let det = m.det();
    if det.sign() == Sign::Zero {
        return Err(Error::SingularMatrix);
    }
    let tau = m.trace();
    let sigma = m.second_invariant();
    let triple_root = (tau.clone() * tau.clone() - S::from_int(3) * sigma).sign() == Sign::Zero
        && (tau.clone() * tau.clone() * tau - S::from_int(27) * det).sign() == Sign::Zero;
    Ok(triple_root && !m.is_scalar())
}

/// The dual spine described in the module docs. The graph is determined by
/// the triangulation; this type packages the chart with node and connection
/// enumeration and the peripheral walks.
#[derive(Clone, Debug)]
pub struct MonodromyGraph {
    pub chart: Triangulation,
}

impl MonodromyGraph {
    pub fn new(chart: Triangulation) -> Self {
        MonodromyGraph { chart }
    }

    /// Three nodes per triangle.
    pub fn nodes(&self) -> Vec<Node> {
        (0..self.chart.tri_count())
            .flat_map(|t| (0..3u8).map(move |s| Side::new(t, s)))
            .collect()
    }

    /// The turn connections in their positive direction: three per triangle,
    /// cycling around the barycenter.
    pub fn turn_connections(&self) -> Vec<(Node, Node)> {
        (0..self.chart.tri_count())
            .flat_map(|t| (0..3u8).map(move |s| (Side::new(t, s), Side::new(t, (s + 2) % 3))))
            .collect()
    }

    /// The crossing connections: one per surface edge, joining its two
    /// flanking nodes.
    pub fn cross_connections(&self) -> Vec<(Node, Node)> {
        (0..self.chart.edge_count())
            .map(|e| {
                let pair = self.chart.sides(e);
                (pair[0], pair[1])
            })
            .collect()
    }

    /// Closed walk once around a puncture, following its corner orbit. Each
    /// corner `(t, v)` contributes a negative turn from the node at slot
    /// `v + 2` to the node at slot `v`, then a forward crossing of the
    /// slot-`v` edge; the landing node is the next corner's starting node,
    /// so the walk closes after one orbit, two steps per corner.
    pub fn peripheral_path(&self, puncture: PunctureId) -> Result<Vec<Step>, Error> {
        let orbits = self.chart.corner_orbits();
        let orbit = orbits
            .get(puncture)
            .ok_or(Error::UnknownPuncture { puncture })?;
        let mut path = Vec::with_capacity(2 * orbit.len());
        for &(t, v) in orbit {
            path.push(Step::Turn { tri: t, from: (v + 2) % 3, positive: false });
            path.push(Step::Cross { from: Side::new(t, v), reversed: false });
        }
        Ok(path)
    }
}

fn check_node<S: Scalar>(x: &XCoords<S>, node: Side) -> Result<(), Error> {
    if node.tri >= x.chart.tri_count() || node.slot >= 3 {
        return Err(Error::MalformedPath {
            detail: format!("no monodromy node at triangle {} slot {}", node.tri, node.slot),
        });
    }
    Ok(())
}

/// Matrix of a single step under the X-coordinates `x`.
pub fn step_matrix<S: Scalar>(x: &XCoords<S>, step: &Step) -> Result<ProjectiveMatrix<S>, Error> {
    match *step {
        Step::Turn { tri, from, positive } => {
            check_node(x, Side::new(tri, from))?;
            let m = triangle_matrix(&x.triple[tri])?;
            if positive {
                Ok(m)
            } else {
                m.inverse()
            }
        }
        Step::Cross { from, reversed } => {
            check_node(x, from)?;
            let target = x.chart.opposite(from);
            let m = edge_matrix(x.q(target), x.q(from))?;
            if reversed {
                m.inverse()
            } else {
                Ok(m)
            }
        }
    }
}

/// Ordered product of step matrices along a path. Consecutive steps must
/// chain — each one departs from the node the previous one landed on.
pub fn path_matrix<S: Scalar>(x: &XCoords<S>, path: &[Step]) -> Result<ProjectiveMatrix<S>, Error> {
    let mut acc = ProjectiveMatrix::identity();
    let mut cursor: Option<Node> = None;
    for step in path {
        let m = step_matrix(x, step)?;
        let source = step.source(&x.chart);
        if let Some(prev) = cursor {
            if source != prev {
                return Err(Error::MalformedPath {
                    detail: format!(
                        "step at triangle {} slot {} does not continue from triangle {} slot {}",
                        source.tri, source.slot, prev.tri, prev.slot
                    ),
                });
            }
        }
        acc = acc.mul(&m);
        cursor = Some(step.target(&x.chart));
    }
    Ok(acc)
}

/// Holonomy around a puncture: the peripheral path evaluated on the
/// X-coordinates underlying `coords`. For coordinates with positive
/// parameters this is parabolic — the finite-area relations hold
/// identically in the image of the projection.
pub fn peripheral_holonomy<S: Scalar>(
    coords: &ACoords<S>,
    puncture: PunctureId,
) -> Result<ProjectiveMatrix<S>, Error> {
    let graph = MonodromyGraph::new(coords.chart.clone());
    let path = graph.peripheral_path(puncture)?;
    path_matrix(&coords.to_x_coords(), &path)
}
