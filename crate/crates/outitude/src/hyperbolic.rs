//! The decorated-hyperbolic locus inside the coordinate space: λ-lengths,
//! their embedding as A-coordinates, the simplified outitude criterion, and
//! the regular-polygon cell centers with their diagonal recurrences.
//!
//! A hyperbolic structure decorates every unoriented edge with one positive
//! length λ. The embedding puts λ² on both orientations of the edge and
//! `√(2abc)` on every triangle, which lands exactly on the subvariety cut
//! out by `a⁺ = a⁻` and `A² = 2abc`. Because square roots leave the
//! rationals, the embedding (and everything downstream of it) lives on the
//! float backend; the outitude criterion itself is polynomial in λ and is
//! kept generic.

use crate::canonical::CellDecomposition;
use crate::coords::ACoords;
use crate::error::Error;
use crate::scalar::{Scalar, Sign};
use crate::surface::{EdgeId, Side, Triangulation};

/// One positive length per unoriented edge of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaLengths<S: Scalar> {
    pub chart: Triangulation,
    pub lambda: Vec<S>,
}

impl<S: Scalar> LambdaLengths<S> {
    pub fn new(chart: Triangulation, lambda: Vec<S>) -> Result<Self, Error> {
        if lambda.len() != chart.edge_count() {
            return Err(Error::CountMismatch {
                expected_triangles: chart.tri_count(),
                expected_edges: chart.edge_count(),
                triangles: chart.tri_count(),
                edges: lambda.len(),
            });
        }
        for (e, value) in lambda.iter().enumerate() {
            if value.sign() != Sign::Positive {
                return Err(Error::NonpositiveParameter {
                    context: format!("lambda length at edge {}", chart.edge_name(e)),
                });
            }
        }
        Ok(LambdaLengths { chart, lambda })
    }

    pub fn all_ones(chart: Triangulation) -> Self {
        let lambda = vec![S::one(); chart.edge_count()];
        LambdaLengths { chart, lambda }
    }

    fn at(&self, side: Side) -> &S {
        let (e, _) = self.chart.edge_at(side);
        &self.lambda[e]
    }
}

/// Realize λ-lengths as A-coordinates: both orientations of edge `e` carry
/// `λ_e²` and each triangle carries `√(2abc)` over its three edge
/// parameters. Fails on the exact backend (the square root leaves it).
pub fn embed_penner<S: Scalar>(lengths: &LambdaLengths<S>) -> Result<ACoords<S>, Error> {
    let chart = &lengths.chart;
    let edge: Vec<[S; 2]> = lengths
        .lambda
        .iter()
        .map(|l| [l.clone() * l.clone(), l.clone() * l.clone()])
        .collect();
    let mut tri = Vec::with_capacity(chart.tri_count());
    for t in 0..chart.tri_count() {
        let mut product = S::from_int(2);
        for s in 0..3u8 {
            let (e, _) = chart.edge_at(Side::new(t, s));
            product = product * edge[e][0].clone();
        }
        tri.push(product.sqrt()?);
    }
    ACoords::new(chart.clone(), tri, edge)
}

/// The simplified outitude value `√(ab)(c + d − e) + √(cd)(a + b − e)` at
/// an edge, written polynomially in the λ-lengths (so it stays exact on the
/// rational backend). Its sign matches the sign of the full outitude on
/// the embedded coordinates.
pub fn hyperbolic_outitude<S: Scalar>(
    lengths: &LambdaLengths<S>,
    e: EdgeId,
) -> Result<S, Error> {
    let chart = &lengths.chart;
    if e >= chart.edge_count() {
        return Err(Error::UnknownEdge {
            edge: format!("#{e}"),
        });
    }
    let [p, q] = chart.sides(e);
    let la = lengths.at(Side::new(p.tri, (p.slot + 1) % 3)).clone();
    let lb = lengths.at(Side::new(p.tri, (p.slot + 2) % 3)).clone();
    let lc = lengths.at(Side::new(q.tri, (q.slot + 1) % 3)).clone();
    let ld = lengths.at(Side::new(q.tri, (q.slot + 2) % 3)).clone();
    let le = lengths.lambda[e].clone();
    let sq = |x: &S| x.clone() * x.clone();
    let first = sq(&lc) + sq(&ld) - sq(&le);
    let second = sq(&la) + sq(&lb) - sq(&le);
    Ok(la * lb * first + lc * ld * second)
}

/// Whether the edge survives in the canonical cell decomposition of the
/// hyperbolic structure.
pub fn hyperbolic_outitude_positive<S: Scalar>(
    lengths: &LambdaLengths<S>,
    e: EdgeId,
) -> Result<bool, Error> {
    Ok(hyperbolic_outitude(lengths, e)?.sign() == Sign::Positive)
}

/// λ-lengths of the fan diagonals of a regular `n`-gon with unit sides,
/// shortest first: entry `k` is the diagonal cutting off `k + 2` sides.
///
/// Evaluated through the three-term (Chebyshev-style) recurrence
/// `d_k = d_1 d_{k-1} − d_{k-2}`, `d_1 = 2cos(π/n)`, which needs no
/// division; the rational recurrence `d_k = (d_{k-1}² − 1)/d_{k-2}` is the
/// same sequence and is cross-checked in tests.
pub fn diagonal_lambdas(n: usize) -> Result<Vec<f64>, Error> {
    if n < 4 {
        return Err(Error::BadInput {
            detail: format!("a polygon with {n} sides has no diagonals to measure"),
        });
    }
    let d1 = 2.0 * (std::f64::consts::PI / n as f64).cos();
    let mut values = Vec::with_capacity(n - 2);
    values.push(1.0);
    values.push(d1);
    for k in 2..=(n - 3) {
        values.push(d1 * values[k - 1] - values[k - 2]);
    }
    Ok(values[1..].to_vec())
}

/// Penner's center of a cell: λ = 1 on the cell's edges and λ = d_k on the
/// k-th fan diagonal of each polygon, embedded as A-coordinates. On the
/// resulting structure every diagonal outitude vanishes (up to float
/// tolerance) and every kept edge stays positive, so the coordinates sit in
/// the interior of their cell.
pub fn cell_center(cell: &CellDecomposition) -> Result<ACoords<f64>, Error> {
    let mut lambda = vec![1.0f64; cell.chart.edge_count()];
    for polygon in &cell.polygons {
        if polygon.diagonals.is_empty() {
            continue;
        }
        let diagonals = diagonal_lambdas(polygon.size())?;
        for (k, &(e, _)) in polygon.diagonals.iter().enumerate() {
            lambda[e] = diagonals[k];
        }
    }
    embed_penner(&LambdaLengths::new(cell.chart.clone(), lambda)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{cell_membership, standard_subdivision, Membership};
    use crate::dualize::dual_coords;
    use crate::fixtures;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn assert_on_subvariety(coords: &ACoords<f64>) {
        for e in 0..coords.chart.edge_count() {
            assert!(
                (coords.edge[e][0] - coords.edge[e][1]).abs() < TOL,
                "edge {e} has asymmetric parameters"
            );
        }
        for t in 0..coords.chart.tri_count() {
            let mut product = 2.0;
            for s in 0..3u8 {
                let (e, _) = coords.chart.edge_at(Side::new(t, s));
                product *= coords.edge[e][0];
            }
            assert!(
                (coords.tri[t] * coords.tri[t] - product).abs() < TOL,
                "triangle {t} violates the squared-parameter relation"
            );
        }
    }

    #[test]
    fn unit_lengths_embed_to_unit_edges_and_sqrt2_triangles() {
        let lengths = LambdaLengths::<f64>::all_ones(fixtures::torus_chart());
        let coords = embed_penner(&lengths).unwrap();
        for e in 0..3 {
            assert_eq!(coords.edge[e], [1.0, 1.0]);
        }
        for t in 0..2 {
            assert!((coords.tri[t] - 2.0f64.sqrt()).abs() < 1e-15);
        }
        assert_on_subvariety(&coords);
    }

    #[test]
    fn the_root_two_diagonal_gives_integer_parameters() {
        // Torus edges are (a, b, c); every triangle touches all three, so
        // λ = (1, 1, √2) realizes the worked triangle: edge parameters
        // (1, 1, 2) and triangle parameter √(2·1·1·2) = 2.
        let lengths = LambdaLengths::new(
            fixtures::torus_chart(),
            vec![1.0, 1.0, 2.0f64.sqrt()],
        )
        .unwrap();
        let coords = embed_penner(&lengths).unwrap();
        assert!((coords.edge[2][0] - 2.0).abs() < 1e-15);
        assert!((coords.tri[0] - 2.0).abs() < 1e-15);
        assert!((coords.tri[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn the_exact_backend_refuses_the_embedding() {
        let lengths = LambdaLengths::<Rational>::all_ones(fixtures::torus_chart());
        let err = embed_penner(&lengths).unwrap_err();
        assert_eq!(err.code(), "EXACT_BACKEND_UNSUPPORTED");
    }

    #[test]
    fn malformed_lengths_are_rejected() {
        let short = LambdaLengths::new(fixtures::torus_chart(), vec![1.0, 1.0]);
        assert_eq!(short.unwrap_err().code(), "COUNT_MISMATCH");
        let negative = LambdaLengths::new(fixtures::torus_chart(), vec![1.0, -1.0, 1.0]);
        assert_eq!(negative.unwrap_err().code(), "NONPOSITIVE_PARAMETER");
    }

    #[test]
    fn the_simplified_criterion_matches_the_worked_values() {
        let ones = LambdaLengths::<f64>::all_ones(fixtures::torus_chart());
        for e in 0..3 {
            assert!((hyperbolic_outitude(&ones, e).unwrap() - 2.0).abs() < 1e-15);
            assert!(hyperbolic_outitude_positive(&ones, e).unwrap());
        }

        // The square center: unit sides, √2 diagonal. The diagonal's
        // criterion value collapses to zero.
        let center = LambdaLengths::new(
            fixtures::torus_chart(),
            vec![1.0, 1.0, 2.0f64.sqrt()],
        )
        .unwrap();
        let value = hyperbolic_outitude(&center, 2).unwrap();
        assert_eq!(value.sign(), Sign::Zero);
        assert!(!hyperbolic_outitude_positive(&center, 2).unwrap());

        let missing = hyperbolic_outitude(&ones, 9).unwrap_err();
        assert_eq!(missing.code(), "UNKNOWN_EDGE");
    }

    #[test]
    fn the_criterion_is_exact_on_rational_lengths() {
        // λ² values (1, 1, 2) put the squared diagonal on the wall exactly.
        let lengths = LambdaLengths::new(
            fixtures::torus_chart(),
            vec![Rational::from_int(1), Rational::from_int(1), Rational::from_int(2)],
        )
        .unwrap();
        // With λ_c = 2 the diagonal parameter is 4: strictly negative side.
        let value = hyperbolic_outitude(&lengths, 2).unwrap();
        assert_eq!(value, Rational::from_int(-4));
        assert!(!hyperbolic_outitude_positive(&lengths, 2).unwrap());
    }

    #[test]
    fn diagonal_lengths_follow_the_regular_polygon() {
        assert_eq!(diagonal_lambdas(3).unwrap_err().code(), "BAD_INPUT");

        let square = diagonal_lambdas(4).unwrap();
        assert_eq!(square.len(), 1);
        assert!((square[0] - 2.0f64.sqrt()).abs() < 1e-15);

        let hexagon = diagonal_lambdas(6).unwrap();
        assert_eq!(hexagon.len(), 3);
        assert!((hexagon[0] - 3.0f64.sqrt()).abs() < 1e-12);
        assert!((hexagon[1] - 2.0).abs() < 1e-12);
        assert!((hexagon[2] - 3.0f64.sqrt()).abs() < 1e-12);

        for n in 4..=48usize {
            let values = diagonal_lambdas(n).unwrap();
            assert_eq!(values.len(), n - 3);
            let sin = (std::f64::consts::PI / n as f64).sin();
            for (k, d) in values.iter().enumerate() {
                // Chord-length oracle for the diagonal cutting off k+2 sides.
                let oracle = ((k + 2) as f64 * std::f64::consts::PI / n as f64).sin() / sin;
                assert!((d - oracle).abs() < TOL, "n={n} k={k}: {d} vs {oracle}");
            }
            // The division form of the recurrence is the same sequence.
            let d1 = values[0];
            let mut division = vec![1.0, d1];
            for k in 2..=(n - 3) {
                division.push((division[k - 1] * division[k - 1] - 1.0) / division[k - 2]);
            }
            for (a, b) in values.iter().zip(&division[1..]) {
                assert!((a - b).abs() < TOL);
            }
        }
    }

    #[test]
    fn the_full_triangulation_center_is_the_unit_structure() {
        let chart = fixtures::torus_chart();
        let (cell, _) = standard_subdivision(&chart, &[0, 1, 2]).unwrap();
        let center = cell_center(&cell).unwrap();
        for e in 0..3 {
            assert_eq!(center.edge[e], [1.0, 1.0]);
        }
        for t in 0..2 {
            assert!((center.tri[t] - 2.0f64.sqrt()).abs() < 1e-15);
        }
        let report = cell_membership(&center, &cell).unwrap();
        assert_eq!(report.membership, Membership::Interior);
    }

    #[test]
    fn the_square_center_has_the_worked_parameters() {
        let chart = fixtures::torus_chart();
        let (cell, _) = standard_subdivision(&chart, &[0, 1]).unwrap();
        let center = cell_center(&cell).unwrap();
        // Diagonal parameter 2, flanking triangles 2, square sides 1.
        assert!((center.edge[2][0] - 2.0).abs() < 1e-12);
        assert!((center.tri[0] - 2.0).abs() < 1e-12);
        assert!((center.tri[1] - 2.0).abs() < 1e-12);
        assert!(center.outitude(2).unwrap().abs() < TOL);
        assert!(center.outitude(0).unwrap() > 0.0);
        assert!(center.outitude(1).unwrap() > 0.0);
        let report = cell_membership(&center, &cell).unwrap();
        assert_eq!(report.membership, Membership::Interior);
    }

    #[test]
    fn polygon_centers_sit_inside_their_cells() {
        let cases: Vec<(Triangulation, Vec<EdgeId>)> = vec![
            (fixtures::pentagon_chart(), fixtures::pentagon_kept()),
            (fixtures::hexagon_chart(), fixtures::hexagon_kept()),
            (fixtures::genus2_chart(), fixtures::genus2_octagon_kept()),
        ];
        for (chart, kept) in cases {
            let (cell, _) = standard_subdivision(&chart, &kept).unwrap();
            let center = cell_center(&cell).unwrap();
            for &e in &cell.diagonal_edges() {
                assert!(
                    center.outitude(e).unwrap().abs() < TOL,
                    "diagonal {e} outitude did not vanish"
                );
            }
            for &e in &cell.kept_edges() {
                assert!(center.outitude(e).unwrap() > 0.0);
            }
            let report = cell_membership(&center, &cell).unwrap();
            assert_eq!(report.membership, Membership::Interior);
        }
    }

    #[test]
    fn the_hexagon_center_diagonal_parameters_are_three_four_three() {
        let chart = fixtures::hexagon_chart();
        let (cell, _) = standard_subdivision(&chart, &fixtures::hexagon_kept()).unwrap();
        let center = cell_center(&cell).unwrap();
        let polygon = cell
            .polygons
            .iter()
            .find(|p| !p.diagonals.is_empty())
            .unwrap();
        let params: Vec<f64> = polygon
            .diagonals
            .iter()
            .map(|&(e, _)| center.edge[e][0])
            .collect();
        assert_eq!(params.len(), 3);
        assert!((params[0] - 3.0).abs() < 1e-12);
        assert!((params[1] - 4.0).abs() < 1e-12);
        assert!((params[2] - 3.0).abs() < 1e-12);
    }

    fn assert_agrees_with_embedded_outitude(lengths: &LambdaLengths<f64>) {
        let coords = embed_penner(lengths).unwrap();
        for e in 0..lengths.chart.edge_count() {
            let simplified = hyperbolic_outitude(lengths, e).unwrap();
            let full = coords.outitude(e).unwrap();
            // Both sides are floats; compare sign classes, allowing the
            // tolerance band to differ only when both sit near zero.
            let agree = match (simplified.sign(), full.sign()) {
                (Sign::Positive, Sign::Positive) | (Sign::Negative, Sign::Negative) => true,
                _ => simplified.abs() < 1e-6 && full.abs() < 1e-6,
            };
            assert!(
                agree,
                "edge {e}: simplified {simplified} vs embedded {full}"
            );
            assert_eq!(
                hyperbolic_outitude_positive(lengths, e).unwrap(),
                simplified.sign() == Sign::Positive
            );
        }
    }

    fn lambda_value() -> impl Strategy<Value = f64> {
        (6u32..30).prop_map(|n| f64::from(n) / 10.0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn the_criterion_sign_matches_the_embedded_outitude(
            values in proptest::collection::vec(lambda_value(), 3),
        ) {
            let lengths = LambdaLengths::new(fixtures::torus_chart(), values.clone()).unwrap();
            assert_agrees_with_embedded_outitude(&lengths);
            let folded = LambdaLengths::new(fixtures::sphere3_folded_chart(), values).unwrap();
            assert_agrees_with_embedded_outitude(&folded);
        }

        #[test]
        fn flips_preserve_the_hyperbolic_subvariety(
            values in proptest::collection::vec(lambda_value(), 3),
        ) {
            let lengths = LambdaLengths::new(fixtures::torus_chart(), values).unwrap();
            let coords = embed_penner(&lengths).unwrap();
            for e in 0..3 {
                let (flipped, _) = coords.flip_transform(e).unwrap();
                assert_on_subvariety(&flipped);
            }
        }

        #[test]
        fn duality_fixes_the_hyperbolic_subvariety(
            values in proptest::collection::vec(lambda_value(), 3),
        ) {
            let lengths = LambdaLengths::new(fixtures::torus_chart(), values).unwrap();
            let coords = embed_penner(&lengths).unwrap();
            let dual = dual_coords(&coords);
            assert_on_subvariety(&dual);
            // On this locus duality is the identity on triangle parameters.
            for t in 0..2 {
                prop_assert!((dual.tri[t] - coords.tri[t]).abs() < TOL);
            }
        }
    }
}
