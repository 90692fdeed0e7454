//! Developing maps: place lifts of the chart's triangles in `R^3` as
//! concrete flag triples and draw the projected picture as an SVG.
//!
//! A decorated triangle is realized by three flags `(r_i, C_i)` — a covector
//! and a vector with `r_i · C_i = 0` — whose pairings `r_i · C_j` recover the
//! six oriented edge parameters and whose vector determinant recovers the
//! triangle parameter. Crossing an edge extends the picture by exactly one
//! new flag, so a breadth-first walk over the chart's triangle adjacencies
//! develops a tree of placed triangles rooted at any base triangle.

use std::collections::HashMap;

use crate::coords::ACoords;
use crate::error::Error;
use crate::scalar::{Scalar, Sign};
use crate::surface::{EdgeId, Side, TriId, Triangulation};

/// A concrete flag: a point (the vector) on a line (the kernel of the
/// covector), with both sides of the incidence kept explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteFlag<S: Scalar> {
    pub covector: [S; 3],
    pub vector: [S; 3],
}

/// Three flags in corner order. For a valid decorated triangle the vector
/// determinant is positive and every cross pairing `r_i · C_j` (`i != j`)
/// is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteDecoratedTriangle<S: Scalar> {
    pub flags: [ConcreteFlag<S>; 3],
}

impl<S: Scalar> ConcreteDecoratedTriangle<S> {
    /// Determinant of the three vectors as columns, in corner order.
    pub fn vector_det(&self) -> S {
        det3(
            &self.flags[0].vector,
            &self.flags[1].vector,
            &self.flags[2].vector,
        )
    }

    /// The pairing `r_i · C_j`.
    pub fn pairing(&self, i: usize, j: usize) -> S {
        dot(&self.flags[i].covector, &self.flags[j].vector)
    }
}

/// How a lift hangs off its parent in the development tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    /// Index of the parent lift in [`Development::lifts`].
    pub parent: usize,
    /// Slot of the parent's triangle that was crossed to get here.
    pub parent_slot: u8,
    /// Slot of this lift's triangle glued back onto the parent.
    pub own_slot: u8,
}

/// One placed copy of a chart triangle.
#[derive(Debug, Clone)]
pub struct LiftedTriangle<S: Scalar> {
    /// The slots crossed to reach this lift from the base; empty for the
    /// base itself. Distinct lifts always carry distinct words.
    pub word: Vec<u8>,
    /// The chart triangle this lift covers.
    pub tri: TriId,
    pub attachment: Option<Attachment>,
    pub concrete: ConcreteDecoratedTriangle<S>,
}

impl<S: Scalar> LiftedTriangle<S> {
    /// Tree distance from the base.
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    /// Human-readable lift id: the base triangle's name followed by the
    /// slot word, e.g. `t0` or `t0.201`.
    pub fn name(&self, chart: &Triangulation, base: TriId) -> String {
        let mut s = chart.tri_name(base).to_string();
        if !self.word.is_empty() {
            s.push('.');
            for &w in &self.word {
                s.push(char::from(b'0' + w));
            }
        }
        s
    }
}

/// A finite piece of the developing map: lifts in breadth-first order,
/// `lifts[0]` being the base.
#[derive(Debug, Clone)]
pub struct Development<S: Scalar> {
    pub chart: Triangulation,
    pub base: TriId,
    pub depth: usize,
    pub lifts: Vec<LiftedTriangle<S>>,
}

impl<S: Scalar> Development<S> {
    pub fn lift_name(&self, index: usize) -> String {
        self.lifts[index].name(&self.chart, self.base)
    }

    /// Index of the lift with the given slot word, if it was developed.
    pub fn find(&self, word: &[u8]) -> Option<usize> {
        self.lifts.iter().position(|l| l.word == word)
    }
}

fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Determinant of the matrix with columns `c0, c1, c2`. Applied to flag
/// vectors of a development this measures the oriented volume spanned by
/// three lifted vertices.
pub fn det_columns<S: Scalar>(c0: &[S; 3], c1: &[S; 3], c2: &[S; 3]) -> S {
    dot(&cross(c0, c1), c2)
}

fn det3<S: Scalar>(c0: &[S; 3], c1: &[S; 3], c2: &[S; 3]) -> S {
    det_columns(c0, c1, c2)
}

/// Solve the 3x3 system `rows · x = rhs` by Cramer's rule.
fn solve3<S: Scalar>(rows: &[[S; 3]; 3], rhs: &[S; 3]) -> Result<[S; 3], Error> {
    // The determinant of the matrix whose rows are given equals the
    // determinant of its transpose, i.e. of the columns read off the rows.
    let col = |j: usize| -> [S; 3] {
        [
            rows[0][j].clone(),
            rows[1][j].clone(),
            rows[2][j].clone(),
        ]
    };
    let d = det3(&col(0), &col(1), &col(2));
    if d.sign() == Sign::Zero {
        return Err(Error::SingularSystem);
    }
    let mut out = [S::zero(), S::zero(), S::zero()];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut cols = [col(0), col(1), col(2)];
        cols[j] = (*rhs).clone();
        let dj = det3(&cols[0], &cols[1], &cols[2]);
        *slot = dj / d.clone();
    }
    Ok(out)
}

/// Place triangle `t` in the normal form: vectors are the columns of
/// `diag(A_t, 1, 1)` and covectors are read off the pairing matrix, whose
/// off-diagonal entries are the six oriented edge parameters of `t`
/// (entry `(i, j)` is the parameter of the oriented edge from corner `i`
/// to corner `j`).
pub fn base_triangle<S: Scalar>(
    coords: &ACoords<S>,
    t: TriId,
) -> Result<ConcreteDecoratedTriangle<S>, Error> {
    if t >= coords.chart.tri_count() {
        return Err(Error::UnknownTriangle {
            tri: format!("#{t}"),
        });
    }
    let a = coords.tri[t].clone();
    let zero = S::zero;
    let one = S::one;
    let vectors = [
        [a.clone(), zero(), zero()],
        [zero(), one(), zero()],
        [zero(), zero(), one()],
    ];
    // pairing[i][j] = r_i · C_j; slot v joins corners v and v+1.
    let mut pairing: [[S; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    for v in 0..3usize {
        let side = Side::new(t, v as u8);
        pairing[v][(v + 1) % 3] = coords.ep(side).clone();
        pairing[(v + 1) % 3][v] = coords.ep_rev(side).clone();
    }
    // R = pairing · C^{-1} with C = diag(A, 1, 1).
    let covector = |i: usize| -> [S; 3] {
        [
            pairing[i][0].clone() / a.clone(),
            pairing[i][1].clone(),
            pairing[i][2].clone(),
        ]
    };
    Ok(ConcreteDecoratedTriangle {
        flags: [
            ConcreteFlag {
                covector: covector(0),
                vector: vectors[0].clone(),
            },
            ConcreteFlag {
                covector: covector(1),
                vector: vectors[1].clone(),
            },
            ConcreteFlag {
                covector: covector(2),
                vector: vectors[2].clone(),
            },
        ],
    })
}

/// Attach one new flag across the edge spanned by two known flags.
///
/// `flag0` and `flag2` span the shared edge; the new flag `(r3, C3)` is cut
/// out by the pairings `e03 = r0 · C3`, `e23 = r2 · C3`, the determinant
/// `a023 = det(C0 | C2 | C3)`, and the covector pairings `r3 · C0`,
/// `r3 · C2`. Both solves are exact; a singular system signals corrupted
/// input (it cannot occur for flags coming from a positive structure).
pub fn extend_across_edge<S: Scalar>(
    flag0: &ConcreteFlag<S>,
    flag2: &ConcreteFlag<S>,
    e03: &S,
    e23: &S,
    a023: &S,
    r3_dot_c0: &S,
    r3_dot_c2: &S,
) -> Result<ConcreteFlag<S>, Error> {
    let r0 = &flag0.covector;
    let c0 = &flag0.vector;
    let r2 = &flag2.covector;
    let c2 = &flag2.vector;
    let p02 = dot(r0, c2);
    let p20 = dot(r2, c0);
    if p02.sign() == Sign::Zero || p20.sign() == Sign::Zero {
        return Err(Error::SingularSystem);
    }
    // The system  (r0; r2; C0 x C2) · C3 = (e03, e23, a023)  inverts in
    // closed form: the inverse has columns C2/p02, C0/p20 and
    // (r2 x r0)/(p02 p20), which the incidences r_i · C_i = 0 make exact.
    let rxr = cross(r2, r0);
    let s0 = e03.clone() / p02.clone();
    let s1 = e23.clone() / p20.clone();
    let s2 = a023.clone() / (p02 * p20);
    let vector: [S; 3] = std::array::from_fn(|i| {
        c2[i].clone() * s0.clone() + c0[i].clone() * s1.clone() + rxr[i].clone() * s2.clone()
    });
    let covector = solve3(
        &[vector.clone(), c0.clone(), c2.clone()],
        &[S::zero(), r3_dot_c0.clone(), r3_dot_c2.clone()],
    )?;
    Ok(ConcreteFlag { covector, vector })
}

/// Develop the structure from `base` out to the given tree depth.
///
/// Every lift is adjacent to its parent across one edge and shares the two
/// flags spanning it exactly; the base explores all three of its slots and
/// every other lift the two slots away from its parent, so depth `d` places
/// `1 + 3(2^d - 1)` triangles.
pub fn develop<S: Scalar>(
    coords: &ACoords<S>,
    base: TriId,
    depth: usize,
) -> Result<Development<S>, Error> {
    let chart = &coords.chart;
    if base >= chart.tri_count() {
        return Err(Error::UnknownTriangle {
            tri: format!("#{base}"),
        });
    }
    let mut lifts = vec![LiftedTriangle {
        word: Vec::new(),
        tri: base,
        attachment: None,
        concrete: base_triangle(coords, base)?,
    }];
    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &li in &frontier {
            let entered = lifts[li].attachment.map(|a| a.own_slot);
            for s in 0..3u8 {
                if entered == Some(s) {
                    continue;
                }
                let t = lifts[li].tri;
                let far = chart.opposite(Side::new(t, s));
                let (t2, s2) = (far.tri, far.slot);
                let flag0 = lifts[li].concrete.flags[usize::from((s + 1) % 3)].clone();
                let flag2 = lifts[li].concrete.flags[usize::from(s)].clone();
                let new_flag = extend_across_edge(
                    &flag0,
                    &flag2,
                    coords.ep_rev(Side::new(t2, (s2 + 2) % 3)),
                    coords.ep(Side::new(t2, (s2 + 1) % 3)),
                    &coords.tri[t2],
                    coords.ep(Side::new(t2, (s2 + 2) % 3)),
                    coords.ep_rev(Side::new(t2, (s2 + 1) % 3)),
                )?;
                let flags = match s2 {
                    0 => [flag0, flag2, new_flag],
                    1 => [new_flag, flag0, flag2],
                    _ => [flag2, new_flag, flag0],
                };
                let mut word = lifts[li].word.clone();
                word.push(s);
                lifts.push(LiftedTriangle {
                    word,
                    tri: t2,
                    attachment: Some(Attachment {
                        parent: li,
                        parent_slot: s,
                        own_slot: s2,
                    }),
                    concrete: ConcreteDecoratedTriangle { flags },
                });
                next.push(lifts.len() - 1);
            }
        }
        frontier = next;
    }
    Ok(Development {
        chart: chart.clone(),
        base,
        depth,
        lifts,
    })
}

/// Outcome of [`verify_development`]: an empty violation list means the
/// placed picture is a genuine positive development.
#[derive(Debug, Clone, Default)]
pub struct DevelopmentReport {
    pub violations: Vec<String>,
}

impl DevelopmentReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check a development for (a) positive vector determinants, (b) positive
/// pairing of every covector with every vector of a different developed
/// vertex, and (c) exact agreement of the flags shared across each interior
/// edge. Violations carry the lift names involved.
pub fn verify_development<S: Scalar>(dev: &Development<S>) -> DevelopmentReport {
    let mut violations = Vec::new();
    let n = dev.lifts.len();

    for (i, lift) in dev.lifts.iter().enumerate() {
        if lift.concrete.vector_det().sign() != Sign::Positive {
            violations.push(format!(
                "lift {}: vector determinant is not positive",
                dev.lift_name(i)
            ));
        }
    }

    // Union the corners that the tree identifies, so each developed vertex
    // is one class.
    let mut parent: Vec<usize> = (0..3 * n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, lift) in dev.lifts.iter().enumerate() {
        if let Some(att) = lift.attachment {
            let s = usize::from(att.parent_slot);
            let s2 = usize::from(att.own_slot);
            for (own_c, parent_c) in [(s2, (s + 1) % 3), ((s2 + 1) % 3, s)] {
                let a = root(&mut parent, 3 * i + own_c);
                let b = root(&mut parent, 3 * att.parent + parent_c);
                parent[a] = b;
            }
        }
    }
    let mut class_members: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for i in 0..n {
        for c in 0..3 {
            let r = root(&mut parent, 3 * i + c);
            class_members.entry(r).or_default().push((i, c));
        }
    }
    let mut classes: Vec<&Vec<(usize, usize)>> = class_members.values().collect();
    classes.sort_by_key(|m| m[0]);

    for members in &classes {
        let (i0, c0) = members[0];
        let rep = &dev.lifts[i0].concrete.flags[c0];
        for &(i, c) in &members[1..] {
            if dev.lifts[i].concrete.flags[c] != *rep {
                violations.push(format!(
                    "lift {} corner {} disagrees with lift {} corner {} on their shared flag",
                    dev.lift_name(i),
                    c,
                    dev.lift_name(i0),
                    c0
                ));
            }
        }
    }

    for a in &classes {
        let (ia, ca) = a[0];
        for b in &classes {
            let (ib, cb) = b[0];
            if (ia, ca) == (ib, cb) {
                continue;
            }
            let pairing = dot(
                &dev.lifts[ia].concrete.flags[ca].covector,
                &dev.lifts[ib].concrete.flags[cb].vector,
            );
            if pairing.sign() != Sign::Positive {
                violations.push(format!(
                    "covector at lift {} corner {} pairs nonpositively with vector at lift {} corner {}",
                    dev.lift_name(ia),
                    ca,
                    dev.lift_name(ib),
                    cb
                ));
            }
        }
    }

    DevelopmentReport { violations }
}

/// Project a development to the affine chart `l · x = 1`, where `l` is the
/// sum of the base triangle's covectors, and write the picture as a
/// standalone SVG of the given pixel width. Edges of the chart listed in
/// `highlight` are overdrawn in accent color. Fails with a projection error
/// if any placed vertex has `l · C <= 0` (the finite picture left the
/// visible affine patch).
pub fn render_svg<S: Scalar>(
    dev: &Development<S>,
    width_px: u32,
    highlight: &[EdgeId],
) -> Result<String, Error> {
    if width_px == 0 {
        return Err(Error::BadInput {
            detail: "svg width must be positive".to_string(),
        });
    }
    let base = &dev.lifts[0].concrete;
    let ell: [S; 3] = std::array::from_fn(|j| {
        base.flags[0].covector[j].clone()
            + base.flags[1].covector[j].clone()
            + base.flags[2].covector[j].clone()
    });

    // Affine points of every corner, still in R^3.
    let mut points: Vec<[[f64; 3]; 3]> = Vec::with_capacity(dev.lifts.len());
    for lift in &dev.lifts {
        let mut tri = [[0.0f64; 3]; 3];
        for (c, flag) in lift.concrete.flags.iter().enumerate() {
            let w = dot(&ell, &flag.vector);
            if w.sign() != Sign::Positive {
                return Err(Error::ProjectionFailure);
            }
            let wf = w.to_f64();
            for j in 0..3 {
                tri[c][j] = flag.vector[j].to_f64() / wf;
            }
        }
        points.push(tri);
    }

    // Planar frame: origin at the base's corner 0, axes along its other two
    // corners. Difference vectors all lie in ker(l); l completes a basis.
    let p0 = points[0][0];
    let u: [f64; 3] = std::array::from_fn(|j| points[0][1][j] - p0[j]);
    let v: [f64; 3] = std::array::from_fn(|j| points[0][2][j] - p0[j]);
    let lf: [f64; 3] = std::array::from_fn(|j| ell[j].to_f64());
    let det = |a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]| -> f64 {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
            + c[0] * (a[1] * b[2] - a[2] * b[1])
    };
    let frame_det = det(&u, &v, &lf);
    if frame_det.abs() < 1e-300 {
        return Err(Error::SingularSystem);
    }
    let flat: Vec<[[f64; 2]; 3]> = points
        .iter()
        .map(|tri| {
            std::array::from_fn(|c| {
                let d: [f64; 3] = std::array::from_fn(|j| tri[c][j] - p0[j]);
                let x = det(&d, &v, &lf) / frame_det;
                let y = det(&u, &d, &lf) / frame_det;
                [x, y]
            })
        })
        .collect();

    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for tri in &flat {
        for p in tri {
            min_x = min_x.min(p[0]);
            max_x = max_x.max(p[0]);
            min_y = min_y.min(p[1]);
            max_y = max_y.max(p[1]);
        }
    }
    let pad_x = 0.05 * (max_x - min_x).max(1e-9);
    let pad_y = 0.05 * (max_y - min_y).max(1e-9);
    min_x -= pad_x;
    max_x += pad_x;
    min_y -= pad_y;
    max_y += pad_y;
    let scale = f64::from(width_px) / (max_x - min_x);
    let height = ((max_y - min_y) * scale).ceil().max(1.0);
    let px = |p: [f64; 2]| -> (f64, f64) { ((p[0] - min_x) * scale, (max_y - p[1]) * scale) };
    let stroke = 0.005 * f64::from(width_px);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width_px}\" height=\"{height}\" viewBox=\"0 0 {width_px} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{width_px}\" height=\"{height}\" fill=\"#ffffff\"/>\n"
    ));
    for (i, lift) in dev.lifts.iter().enumerate() {
        let d = lift.depth();
        let shade = 245usize.saturating_sub(12 * d).max(170);
        let mut pts = String::new();
        for (c, &p) in flat[i].iter().enumerate() {
            let (x, y) = px(p);
            if c > 0 {
                pts.push(' ');
            }
            pts.push_str(&format!("{x:.2},{y:.2}"));
        }
        svg.push_str(&format!(
            "  <polygon points=\"{pts}\" fill=\"#{shade:02x}{shade:02x}{shade:02x}\" stroke=\"#2f2f2f\" stroke-width=\"{stroke:.2}\" stroke-linejoin=\"round\"><title>{}</title></polygon>\n",
            dev.lift_name(i)
        ));
    }
    if !highlight.is_empty() {
        for (i, lift) in dev.lifts.iter().enumerate() {
            for s in 0..3u8 {
                // Each interior edge belongs to the lift that crossed it, so
                // skip the slot that leads back to the parent.
                if lift.attachment.map(|a| a.own_slot) == Some(s) {
                    continue;
                }
                let (e, _) = dev.chart.edge_at(Side::new(lift.tri, s));
                if !highlight.contains(&e) {
                    continue;
                }
                let (x1, y1) = px(flat[i][usize::from(s)]);
                let (x2, y2) = px(flat[i][usize::from((s + 1) % 3)]);
                svg.push_str(&format!(
                    "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#c0392b\" stroke-width=\"{:.2}\" stroke-linecap=\"round\"/>\n",
                    2.0 * stroke
                ));
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::holonomy::ProjectiveMatrix;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn rat(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn rvec(values: [i64; 3]) -> [Rational; 3] {
        std::array::from_fn(|i| rat(values[i]))
    }

    fn ones_torus() -> ACoords<Rational> {
        ACoords::all_ones(fixtures::torus_chart())
    }

    #[test]
    fn the_all_ones_base_triangle_is_the_reference_frame() {
        let frame = base_triangle(&ones_torus(), 0).unwrap();
        let expected_rows = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];
        for i in 0..3 {
            let mut unit = rvec([0, 0, 0]);
            unit[i] = rat(1);
            assert_eq!(frame.flags[i].vector, unit);
            assert_eq!(frame.flags[i].covector, rvec(expected_rows[i]));
        }
    }

    #[test]
    fn the_base_triangle_reproduces_its_chart_parameters() {
        // A scaled triangle parameter moves only the first vector; the six
        // pairings still read back the edge parameters exactly.
        let chart = fixtures::torus_chart();
        let coords = ACoords::new(
            chart,
            vec![rat(8), rat(8)],
            vec![[rat(1), rat(1)]; 3],
        )
        .unwrap();
        let frame = base_triangle(&coords, 0).unwrap();
        assert_eq!(frame.vector_det(), rat(8));
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { rat(0) } else { rat(1) };
                assert_eq!(frame.pairing(i, j), expect);
            }
        }

        let coords = fixtures::torus_alpha2::<Rational>();
        for t in 0..2 {
            let frame = base_triangle(&coords, t).unwrap();
            assert_eq!(frame.vector_det(), coords.tri[t]);
            for v in 0..3u8 {
                let side = Side::new(t, v);
                let i = usize::from(v);
                assert_eq!(&frame.pairing(i, (i + 1) % 3), coords.ep(side));
                assert_eq!(&frame.pairing((i + 1) % 3, i), coords.ep_rev(side));
            }
        }

        let missing = base_triangle(&coords, 7).unwrap_err();
        assert_eq!(missing.code(), "UNKNOWN_TRIANGLE");
    }

    #[test]
    fn extending_over_the_reference_frame_matches_the_worked_flag() {
        let flag0 = ConcreteFlag {
            covector: rvec([0, 1, 1]),
            vector: rvec([1, 0, 0]),
        };
        let flag2 = ConcreteFlag {
            covector: rvec([1, 1, 0]),
            vector: rvec([0, 0, 1]),
        };
        let one = rat(1);
        let new = extend_across_edge(&flag0, &flag2, &one, &one, &one, &one, &one).unwrap();
        assert_eq!(new.vector, rvec([2, -1, 2]));
        assert_eq!(new.covector, rvec([1, 4, 1]));
    }

    #[test]
    fn the_closed_form_extension_agrees_with_a_direct_solve() {
        let values = fixtures::seeded_rationals(41, 5 * 100);
        let mut it = values.into_iter();
        for _ in 0..100 {
            let seed: [Rational; 5] = std::array::from_fn(|_| it.next().unwrap());
            let coords = fixtures::seeded_coords(fixtures::torus_chart(), 97);
            let frame = base_triangle(&coords, 0).unwrap();
            let flag0 = &frame.flags[1];
            let flag2 = &frame.flags[0];
            let new = extend_across_edge(
                flag0, flag2, &seed[0], &seed[1], &seed[2], &seed[3], &seed[4],
            )
            .unwrap();
            // Route two: Cramer on the defining system for the vector.
            let m = [
                flag0.covector.clone(),
                flag2.covector.clone(),
                cross(&flag0.vector, &flag2.vector),
            ];
            let direct = solve3(&m, &[seed[0].clone(), seed[1].clone(), seed[2].clone()])
                .unwrap();
            assert_eq!(new.vector, direct);
            assert_eq!(dot(&new.covector, &new.vector), rat(0));
            assert_eq!(dot(&new.covector, &flag0.vector), seed[3]);
            assert_eq!(dot(&new.covector, &flag2.vector), seed[4]);
        }
    }

    #[test]
    fn degenerate_flag_pairs_are_rejected_as_singular() {
        let flag = ConcreteFlag {
            covector: rvec([0, 1, 1]),
            vector: rvec([1, 0, 0]),
        };
        let one = rat(1);
        // A flag never pairs positively with itself, so extending over a
        // doubled flag has no solution.
        let err = extend_across_edge(&flag, &flag, &one, &one, &one, &one, &one).unwrap_err();
        assert_eq!(err.code(), "SINGULAR_SYSTEM");
    }

    #[test]
    fn developments_grow_as_trees_and_share_flags_exactly() {
        let coords = ones_torus();
        assert_eq!(develop(&coords, 0, 0).unwrap().lifts.len(), 1);
        assert_eq!(develop(&coords, 0, 1).unwrap().lifts.len(), 4);
        assert_eq!(develop(&coords, 0, 4).unwrap().lifts.len(), 46);

        let dev = develop(&coords, 0, 3).unwrap();
        let mut words: Vec<&[u8]> = dev.lifts.iter().map(|l| l.word.as_slice()).collect();
        words.sort();
        words.dedup();
        assert_eq!(words.len(), dev.lifts.len());
        assert_eq!(dev.lift_name(0), "t0");
        assert_eq!(dev.lifts[1].depth(), 1);

        for lift in &dev.lifts[1..] {
            let att = lift.attachment.unwrap();
            let parent = &dev.lifts[att.parent];
            let s = usize::from(att.parent_slot);
            let s2 = usize::from(att.own_slot);
            assert_eq!(lift.concrete.flags[s2], parent.concrete.flags[(s + 1) % 3]);
            assert_eq!(
                lift.concrete.flags[(s2 + 1) % 3],
                parent.concrete.flags[s]
            );
            assert_eq!(lift.word.len(), parent.word.len() + 1);
        }

        let missing = develop(&coords, 9, 1).unwrap_err();
        assert_eq!(missing.code(), "UNKNOWN_TRIANGLE");
    }

    fn assert_roundtrip(coords: &ACoords<Rational>, dev: &Development<Rational>) {
        for lift in &dev.lifts {
            assert_eq!(lift.concrete.vector_det(), coords.tri[lift.tri]);
            for v in 0..3u8 {
                let side = Side::new(lift.tri, v);
                let i = usize::from(v);
                assert_eq!(&lift.concrete.pairing(i, (i + 1) % 3), coords.ep(side));
                assert_eq!(&lift.concrete.pairing((i + 1) % 3, i), coords.ep_rev(side));
                assert_eq!(lift.concrete.pairing(i, i), rat(0));
            }
        }
    }

    fn assert_tetrahedron_identity(coords: &ACoords<Rational>, dev: &Development<Rational>) {
        for lift in &dev.lifts[1..] {
            let att = lift.attachment.unwrap();
            let parent = &dev.lifts[att.parent];
            let s = att.parent_slot;
            let s2 = usize::from(att.own_slot);
            let side = Side::new(parent.tri, s);
            let (e, _) = dev.chart.edge_at(side);
            let c0 = &parent.concrete.flags[usize::from((s + 1) % 3)].vector;
            let c1 = &parent.concrete.flags[usize::from((s + 2) % 3)].vector;
            let c2 = &parent.concrete.flags[usize::from(s)].vector;
            let c3 = &lift.concrete.flags[(s2 + 2) % 3].vector;
            let hull_gap = det3(c1, c2, c3) + det3(c0, c1, c3)
                - det3(c0, c1, c2)
                - det3(c0, c2, c3);
            let scale = coords.ep(side).clone() * coords.ep_rev(side).clone();
            assert_eq!(scale * hull_gap, coords.outitude(e).unwrap());
        }
    }

    #[test]
    fn every_lift_reproduces_the_chart_parameters() {
        let torus = fixtures::torus_alpha2::<Rational>();
        assert_roundtrip(&torus, &develop(&torus, 0, 3).unwrap());

        let folded = fixtures::seeded_coords(fixtures::sphere3_folded_chart(), 5);
        assert_roundtrip(&folded, &develop(&folded, 1, 3).unwrap());

        let genus2 = fixtures::genus2_coords::<Rational>();
        assert_roundtrip(&genus2, &develop(&genus2, 2, 2).unwrap());
    }

    #[test]
    fn interior_edges_satisfy_the_tetrahedron_determinant_identity() {
        for seed in [3, 17, 29] {
            let coords = fixtures::seeded_coords(fixtures::torus_chart(), seed);
            let dev = develop(&coords, 0, 3).unwrap();
            assert_tetrahedron_identity(&coords, &dev);
        }
        let folded = fixtures::seeded_coords(fixtures::sphere3_folded_chart(), 11);
        assert_tetrahedron_identity(&folded, &develop(&folded, 0, 3).unwrap());
        let genus2 = fixtures::genus2_coords::<Rational>();
        assert_tetrahedron_identity(&genus2, &develop(&genus2, 0, 2).unwrap());
    }

    #[test]
    fn crossing_an_edge_and_back_restores_the_flags() {
        let coords = fixtures::torus_alpha2::<Rational>();
        let dev = develop(&coords, 0, 1).unwrap();
        for lift in &dev.lifts[1..] {
            let att = lift.attachment.unwrap();
            let parent = &dev.lifts[att.parent];
            let s = att.parent_slot;
            let s2 = att.own_slot;
            // Cross back over the child's own slot; the freshly solved flag
            // must be the parent's apex, bit for bit.
            let flag0 = &lift.concrete.flags[usize::from((s2 + 1) % 3)];
            let flag2 = &lift.concrete.flags[usize::from(s2)];
            let t = parent.tri;
            let back = extend_across_edge(
                flag0,
                flag2,
                coords.ep_rev(Side::new(t, (s + 2) % 3)),
                coords.ep(Side::new(t, (s + 1) % 3)),
                &coords.tri[t],
                coords.ep(Side::new(t, (s + 2) % 3)),
                coords.ep_rev(Side::new(t, (s + 1) % 3)),
            )
            .unwrap();
            assert_eq!(back, parent.concrete.flags[usize::from((s + 2) % 3)]);
        }
    }

    #[test]
    fn verification_accepts_positive_developments() {
        let dev = develop(&ones_torus(), 0, 4).unwrap();
        let report = verify_development(&dev);
        assert!(report.is_valid(), "{:?}", report.violations);

        let genus2 = fixtures::genus2_coords::<Rational>();
        let report = verify_development(&develop(&genus2, 0, 2).unwrap());
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn verification_reports_corrupted_developments_with_locations() {
        let mut dev = develop(&ones_torus(), 0, 2).unwrap();
        // Negate the freshly placed vector of a leaf: its determinant flips
        // sign and its pairings against the rest of the picture go negative.
        let att = dev.lifts[5].attachment.unwrap();
        let corner = usize::from((att.own_slot + 2) % 3);
        let name = dev.lift_name(5);
        for x in &mut dev.lifts[5].concrete.flags[corner].vector {
            *x = -x.clone();
        }
        let report = verify_development(&dev);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("determinant") && v.contains(&name)));
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("pairs nonpositively")));

        // Tampering with a shared corner breaks the exact-agreement check.
        let mut dev = develop(&ones_torus(), 0, 1).unwrap();
        let att = dev.lifts[2].attachment.unwrap();
        let corner = usize::from(att.own_slot);
        dev.lifts[2].concrete.flags[corner].vector[0] = rat(7);
        let report = verify_development(&dev);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("disagrees") && v.contains("shared flag")));
    }

    /// Exact planar coordinates of every lift corner in the chart
    /// `l · x = 1`, in the frame of the base triangle.
    fn project_exact(dev: &Development<Rational>) -> Vec<[[Rational; 2]; 3]> {
        let base = &dev.lifts[0].concrete;
        let ell: [Rational; 3] = std::array::from_fn(|j| {
            base.flags[0].covector[j].clone()
                + base.flags[1].covector[j].clone()
                + base.flags[2].covector[j].clone()
        });
        let affine = |v: &[Rational; 3]| -> [Rational; 3] {
            let w = dot(&ell, v);
            assert_eq!(w.sign(), Sign::Positive);
            std::array::from_fn(|j| v[j].clone() / w.clone())
        };
        let p0 = affine(&base.flags[0].vector);
        let p1 = affine(&base.flags[1].vector);
        let p2 = affine(&base.flags[2].vector);
        let u: [Rational; 3] = std::array::from_fn(|j| p1[j].clone() - p0[j].clone());
        let v: [Rational; 3] = std::array::from_fn(|j| p2[j].clone() - p0[j].clone());
        let rows: [[Rational; 3]; 3] =
            std::array::from_fn(|i| [u[i].clone(), v[i].clone(), ell[i].clone()]);
        dev.lifts
            .iter()
            .map(|lift| {
                std::array::from_fn(|c| {
                    let p = affine(&lift.concrete.flags[c].vector);
                    let d: [Rational; 3] =
                        std::array::from_fn(|j| p[j].clone() - p0[j].clone());
                    let sol = solve3(&rows, &d).unwrap();
                    assert_eq!(sol[2], rat(0));
                    [sol[0].clone(), sol[1].clone()]
                })
            })
            .collect()
    }

    /// Frame matrix sending the standard projective basis to four points.
    fn frame_matrix(pts: [&[Rational; 3]; 4]) -> ProjectiveMatrix<Rational> {
        let rows: [[Rational; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| pts[j][i].clone()));
        let lambda = solve3(&rows, pts[3]).unwrap();
        ProjectiveMatrix::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| lambda[j].clone() * pts[j][i].clone())
        }))
    }

    #[test]
    fn pictures_developed_from_two_bases_differ_by_a_projective_map() {
        // The two renderings use different projection planes (each base
        // supplies its own), so the change of picture is projective — pinned
        // here exactly by transporting a four-point frame.
        let coords = fixtures::seeded_coords(fixtures::torus_chart(), 13);
        let dev_a = develop(&coords, 0, 3).unwrap();
        let dev_b = develop(&coords, 1, 4).unwrap();
        let flat_a = project_exact(&dev_a);
        let flat_b = project_exact(&dev_b);

        // Identify the two pictures: crossing slot 0 of the second base
        // lands on triangle 0, so word w in the first tree matches word
        // 0·w in the second.
        let mut pairs: Vec<([Rational; 3], [Rational; 3])> = Vec::new();
        let mut matched = 0usize;
        for (i, lift) in dev_a.lifts.iter().enumerate() {
            let mut word = vec![0u8];
            word.extend_from_slice(&lift.word);
            let Some(j) = dev_b.find(&word) else { continue };
            matched += 1;
            for c in 0..3 {
                let lift3 = |p: &[Rational; 2]| -> [Rational; 3] {
                    [p[0].clone(), p[1].clone(), rat(1)]
                };
                pairs.push((lift3(&flat_a[i][c]), lift3(&flat_b[j][c])));
            }
        }
        assert!(matched >= 10, "only {matched} lifts matched");

        // Pick four source points in general position.
        let indep = |sel: &[usize], cand: usize| -> bool {
            match sel.len() {
                0 => true,
                1 => cross(&pairs[sel[0]].0, &pairs[cand].0)
                    .iter()
                    .any(|x| x.sign() != Sign::Zero),
                _ => sel.len() < 2
                    || (0..sel.len())
                        .flat_map(|x| (x + 1..sel.len()).map(move |y| (x, y)))
                        .all(|(x, y)| {
                            det3(&pairs[sel[x]].0, &pairs[sel[y]].0, &pairs[cand].0).sign()
                                != Sign::Zero
                        }),
            }
        };
        let mut sel: Vec<usize> = Vec::new();
        for cand in 0..pairs.len() {
            if sel.len() == 4 {
                break;
            }
            if indep(&sel, cand) {
                sel.push(cand);
            }
        }
        assert_eq!(sel.len(), 4, "no projective frame among matched corners");

        let fa = frame_matrix(std::array::from_fn(|k| &pairs[sel[k]].0));
        let fb = frame_matrix(std::array::from_fn(|k| &pairs[sel[k]].1));
        let g = fb.mul(&fa.inverse().unwrap());
        for (pa, pb) in &pairs {
            let image: [Rational; 3] = std::array::from_fn(|i| dot(&g.rows[i], pa));
            assert_eq!(cross(&image, pb), [rat(0), rat(0), rat(0)]);
        }
    }

    #[test]
    fn svg_rendering_is_deterministic_and_shapes_match_the_tree() {
        let coords = ones_torus();
        let single = render_svg(&develop(&coords, 0, 0).unwrap(), 640, &[]).unwrap();
        assert_eq!(single.matches("<polygon").count(), 1);
        assert!(single.starts_with("<svg xmlns"));
        assert!(single.ends_with("</svg>\n"));
        assert!(!single.contains("<line"));

        let dev = develop(&coords, 0, 2).unwrap();
        let plain = render_svg(&dev, 640, &[]).unwrap();
        assert_eq!(plain.matches("<polygon").count(), 10);
        assert_eq!(plain, render_svg(&dev, 640, &[]).unwrap());
        assert!(plain.contains("<title>t0.2"));

        let marked = render_svg(&dev, 640, &[0, 1, 2]).unwrap();
        // Ten triangles with nine interior gluings leave 21 distinct
        // segments, each drawn once.
        assert_eq!(marked.matches("<line").count(), 21);

        let err = render_svg(&dev, 0, &[]).unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");
    }

    #[test]
    fn leaving_the_affine_patch_is_a_projection_failure() {
        let mut dev = develop(&ones_torus(), 0, 2).unwrap();
        let last = dev.lifts.len() - 1;
        let att = dev.lifts[last].attachment.unwrap();
        let corner = usize::from((att.own_slot + 2) % 3);
        for x in &mut dev.lifts[last].concrete.flags[corner].vector {
            *x = -x.clone();
        }
        let err = render_svg(&dev, 640, &[]).unwrap_err();
        assert_eq!(err.code(), "PROJECTION_FAILURE");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_torus_structures_develop_consistently(coords in torus_coords()) {
            let dev = develop(&coords, 0, 3).unwrap();
            assert_roundtrip(&coords, &dev);
            assert_tetrahedron_identity(&coords, &dev);
            prop_assert!(verify_development(&dev).is_valid());
        }
    }

    fn positive_rational() -> impl Strategy<Value = Rational> {
        (1i64..40, 1i64..40).prop_map(|(p, q)| Rational::from_ratio(p, q))
    }

    fn torus_coords() -> impl Strategy<Value = ACoords<Rational>> {
        (
            proptest::collection::vec(positive_rational(), 2),
            proptest::collection::vec((positive_rational(), positive_rational()), 3),
        )
            .prop_map(|(tri, edges)| {
                let edge = edges.into_iter().map(|(x, y)| [x, y]).collect();
                ACoords::new(fixtures::torus_chart(), tri, edge).unwrap()
            })
    }
}
