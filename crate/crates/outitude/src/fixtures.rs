//! Built-in charts and coordinate sets used by tests, benchmarks, and the
//! command-line examples.

use crate::coords::ACoords;
use crate::scalar::{Rational, Scalar};
use crate::surface::{Side, Triangulation};

fn chart(
    genus: usize,
    punctures: usize,
    tris: &[&str],
    gluings: &[(&str, (usize, u8), (usize, u8))],
) -> Triangulation {
    Triangulation::build(
        genus,
        punctures,
        tris.iter().map(|s| s.to_string()).collect(),
        gluings
            .iter()
            .map(|(name, a, b)| {
                (
                    name.to_string(),
                    Side::new(a.0, a.1),
                    Side::new(b.0, b.1),
                )
            })
            .collect(),
    )
    .expect("fixture charts are valid")
}

/// Once-punctured torus: two triangles glued along all three edges.
pub fn torus_chart() -> Triangulation {
    chart(
        1,
        1,
        &["t0", "t1"],
        &[
            ("a", (0, 1), (1, 0)),
            ("b", (0, 2), (1, 1)),
            ("c", (0, 0), (1, 2)),
        ],
    )
}

/// Thrice-punctured sphere, both triangles embedded.
pub fn sphere3_chart() -> Triangulation {
    chart(
        0,
        3,
        &["t0", "t1"],
        &[
            ("e0", (0, 0), (1, 2)),
            ("e1", (0, 1), (1, 1)),
            ("e2", (0, 2), (1, 0)),
        ],
    )
}

/// Thrice-punctured sphere with two self-glued (unflippable) edges.
pub fn sphere3_folded_chart() -> Triangulation {
    chart(
        0,
        3,
        &["t0", "t1"],
        &[
            ("e", (0, 0), (0, 1)),
            ("y", (1, 0), (1, 1)),
            ("x", (0, 2), (1, 2)),
        ],
    )
}

/// Genus-2 surface from an octagon with boundary word `x y z w z̄ w̄ x̄ ȳ`,
/// triangulated zigzag-fashion; edges b0–b3 are the identified boundary
/// sides, b4–b8 the diagonals.
pub fn genus2_chart() -> Triangulation {
    chart(
        2,
        1,
        &["A0", "A1", "A2", "A3", "A4", "A5"],
        &[
            ("b0", (2, 0), (0, 1)),
            ("b1", (4, 0), (0, 2)),
            ("b2", (5, 0), (3, 1)),
            ("b3", (5, 1), (1, 1)),
            ("b4", (0, 0), (1, 2)),
            ("b5", (1, 0), (2, 2)),
            ("b6", (2, 1), (3, 2)),
            ("b7", (3, 0), (4, 2)),
            ("b8", (4, 1), (5, 2)),
        ],
    )
}

/// Twice-punctured torus containing a pentagon: a fan of three triangles
/// (diagonals d1, d2 from the fan corner) closed up by one outer triangle
/// and one self-identification of adjacent pentagon sides.
pub fn pentagon_chart() -> Triangulation {
    chart(
        1,
        2,
        &["F0", "F1", "F2", "G"],
        &[
            ("d1", (1, 0), (0, 2)),
            ("d2", (2, 0), (1, 2)),
            ("k0", (0, 0), (3, 0)),
            ("k1", (0, 1), (3, 1)),
            ("k2", (1, 1), (3, 2)),
            ("k3", (2, 1), (2, 2)),
        ],
    )
}

/// The pentagon cell of [`pentagon_chart`]: boundary edges kept, fan
/// diagonals removed.
pub fn pentagon_kept() -> Vec<usize> {
    let t = pentagon_chart();
    ["k0", "k1", "k2", "k3"]
        .iter()
        .map(|n| t.edge_id(n).unwrap())
        .collect()
}

/// Twice-punctured torus from a hexagon with opposite sides identified,
/// fanned from one corner (diagonals m1–m3, identified sides n0–n2).
pub fn hexagon_chart() -> Triangulation {
    chart(
        1,
        2,
        &["H0", "H1", "H2", "H3"],
        &[
            ("m1", (1, 0), (0, 2)),
            ("m2", (2, 0), (1, 2)),
            ("m3", (3, 0), (2, 2)),
            ("n0", (0, 0), (2, 1)),
            ("n1", (0, 1), (3, 1)),
            ("n2", (1, 1), (3, 2)),
        ],
    )
}

/// The hexagon cell of [`hexagon_chart`].
pub fn hexagon_kept() -> Vec<usize> {
    let t = hexagon_chart();
    ["n0", "n1", "n2"]
        .iter()
        .map(|n| t.edge_id(n).unwrap())
        .collect()
}

/// The octagon cell of [`genus2_chart`].
pub fn genus2_octagon_kept() -> Vec<usize> {
    let t = genus2_chart();
    ["b0", "b1", "b2", "b3"]
        .iter()
        .map(|n| t.edge_id(n).unwrap())
        .collect()
}

fn coords<S: Scalar>(
    chart: Triangulation,
    tri: &[(i64, i64)],
    edge: &[[(i64, i64); 2]],
) -> ACoords<S> {
    let tri = tri.iter().map(|&(n, d)| S::from_ratio(n, d)).collect();
    let edge = edge
        .iter()
        .map(|p| [S::from_ratio(p[0].0, p[0].1), S::from_ratio(p[1].0, p[1].1)])
        .collect();
    ACoords::new(chart, tri, edge).expect("fixture coordinates are valid")
}

/// Torus coordinates whose canonicalization takes exactly two flips (c then
/// b); outitudes ≈ (265.629, 548.357, −3234.55).
pub fn torus_alpha0<S: Scalar>() -> ACoords<S> {
    coords(
        torus_chart(),
        &[(107, 12), (95, 18)],
        &[
            [(1, 1), (1, 1)],
            [(25, 12), (17, 6)],
            [(1289, 72), (1145, 72)],
        ],
    )
}

/// Where the flip algorithm sends [`torus_alpha0`]: its chart is
/// `torus_chart` flipped along c then b, and all outitudes are positive
/// (2, 5/4, 9/4 on edges a, b, c).
pub fn torus_alpha2<S: Scalar>() -> ACoords<S> {
    let chart = torus_chart();
    let c = chart.edge_id("c").unwrap();
    let b = chart.edge_id("b").unwrap();
    let chart = chart.flip_edge(c).unwrap().0.flip_edge(b).unwrap().0;
    coords(
        chart,
        &[(1, 1), (1, 1)],
        &[[(1, 1), (1, 1)], [(3, 2), (1, 1)], [(1, 2), (1, 1)]],
    )
}

/// Genus-2 coordinates on [`genus2_chart`] with all outitudes positive
/// (4, 3, 3, 3, 3, 3, 8, 4, 3 on b0..b8) whose projective dual has a
/// negative outitude (minimum −20, attained on b6).
pub fn genus2_coords<S: Scalar>() -> ACoords<S> {
    coords(
        genus2_chart(),
        &[(1, 1); 6],
        &[
            [(1, 1), (2, 1)],
            [(1, 1), (1, 1)],
            [(2, 1), (1, 1)],
            [(1, 1), (1, 1)],
            [(1, 1), (1, 1)],
            [(1, 1), (2, 1)],
            [(3, 1), (2, 1)],
            [(2, 1), (1, 1)],
            [(1, 1), (1, 1)],
        ],
    )
}

/// A few torus coordinate sets with every outitude strictly positive
/// (outitudes (35/8, 1, 45/8), (17, 27, 19), (11/30, 47/450, 19/100)).
pub fn torus_interior_samples<S: Scalar>() -> Vec<ACoords<S>> {
    vec![
        coords(
            torus_chart(),
            &[(1, 1), (1, 1)],
            &[[(1, 4), (7, 4)], [(4, 1), (1, 1)], [(5, 4), (5, 4)]],
        ),
        coords(
            torus_chart(),
            &[(1, 1), (2, 1)],
            &[[(4, 1), (3, 1)], [(2, 1), (1, 1)], [(4, 1), (3, 1)]],
        ),
        coords(
            torus_chart(),
            &[(1, 3), (1, 2)],
            &[[(2, 3), (1, 1)], [(2, 1), (2, 5)], [(1, 10), (1, 5)]],
        ),
    ]
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic positive rationals derived from a seed: numerators and
/// denominators in 1..=24.
pub fn seeded_rationals(seed: u64, count: usize) -> Vec<Rational> {
    let mut state = seed.wrapping_mul(2).wrapping_add(1);
    (0..count)
        .map(|_| {
            let n = 1 + (splitmix(&mut state) % 24) as i64;
            let d = 1 + (splitmix(&mut state) % 24) as i64;
            Rational::from_ratio(n, d)
        })
        .collect()
}

/// Deterministic pseudo-random coordinates on a chart; the same seed always
/// produces the same point.
pub fn seeded_coords(chart: Triangulation, seed: u64) -> ACoords<Rational> {
    let values = seeded_rationals(seed, chart.tri_count() + 2 * chart.edge_count());
    let (tri, rest) = values.split_at(chart.tri_count());
    let edge = rest.chunks(2).map(|c| [c[0].clone(), c[1].clone()]).collect();
    ACoords::new(chart, tri.to_vec(), edge).expect("seeded parameters are positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Sign;

    #[test]
    fn all_charts_build() {
        for (t, g, n) in [
            (torus_chart(), 1, 1),
            (sphere3_chart(), 0, 3),
            (sphere3_folded_chart(), 0, 3),
            (genus2_chart(), 2, 1),
            (pentagon_chart(), 1, 2),
            (hexagon_chart(), 1, 2),
        ] {
            assert_eq!((t.genus(), t.punctures()), (g, n));
        }
    }

    #[test]
    fn alpha2_is_interior_and_alpha0_is_not() {
        assert!(torus_alpha2::<Rational>().all_outitudes_positive());
        assert!(!torus_alpha0::<Rational>().all_outitudes_positive());
    }

    #[test]
    fn genus2_outitudes_match_the_published_tuple() {
        let outs = genus2_coords::<Rational>().outitudes();
        let expected = [4, 3, 3, 3, 3, 3, 8, 4, 3];
        for (v, want) in outs.iter().zip(expected) {
            assert_eq!(*v, Rational::from_int(want));
        }
    }

    #[test]
    fn interior_samples_are_interior() {
        for sample in torus_interior_samples::<Rational>() {
            assert!(sample.all_outitudes_positive());
        }
    }

    #[test]
    fn seeded_coords_are_deterministic_and_positive() {
        let a = seeded_coords(torus_chart(), 42);
        let b = seeded_coords(torus_chart(), 42);
        assert_eq!(a, b);
        assert_ne!(a, seeded_coords(torus_chart(), 43));
        assert!(a.tri.iter().all(|v| v.sign() == Sign::Positive));
    }
}
