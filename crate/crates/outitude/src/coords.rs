//! The A-coordinate chart: one parameter per triangle, two per edge (one per
//! orientation), all strictly positive.
//!
//! Edge parameters are stored per (edge id, side index); the parameter at
//! side `k` belongs to the oriented edge whose tail is the corner
//! `sides(e)[k].tail()`. Everything here is generic over the scalar backend;
//! all transforms in this module are rational, so the exact backend never
//! leaves the rationals.

use crate::error::Error;
use crate::scalar::{Scalar, Sign};
use crate::surface::{EdgeId, FlipRemap, PunctureId, Side, Triangulation};

/// A-coordinates on a fixed chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ACoords<S: Scalar> {
    pub chart: Triangulation,
    /// Per triangle id.
    pub tri: Vec<S>,
    /// Per edge id, indexed like `Triangulation::sides`.
    pub edge: Vec<[S; 2]>,
}

/// The twelve parameters around one edge, in the frame anchored at the
/// edge's first stored side: the flanking triangles `a_tri` (anchor side)
/// and `b_tri`, the edge's own two orientations, and the eight parameters
/// on the four boundary edges of the surrounding square.
#[derive(Clone, Debug)]
pub struct EdgeNeighborhood<S> {
    pub a_tri: S,
    pub b_tri: S,
    pub e_plus: S,
    pub e_minus: S,
    pub a_plus: S,
    pub a_minus: S,
    pub b_plus: S,
    pub b_minus: S,
    pub c_plus: S,
    pub c_minus: S,
    pub d_plus: S,
    pub d_minus: S,
}

impl<S: Scalar> ACoords<S> {
    /// Validate counts and positivity.
    pub fn new(chart: Triangulation, tri: Vec<S>, edge: Vec<[S; 2]>) -> Result<Self, Error> {
        if tri.len() != chart.tri_count() || edge.len() != chart.edge_count() {
            return Err(Error::ChartMismatch);
        }
        for (t, v) in tri.iter().enumerate() {
            if !v.is_positive() {
                return Err(Error::NonpositiveParameter {
                    context: format!("triangle {}", chart.tri_name(t)),
                });
            }
        }
        for (e, pair) in edge.iter().enumerate() {
            for (k, v) in pair.iter().enumerate() {
                if !v.is_positive() {
                    return Err(Error::NonpositiveParameter {
                        context: format!("edge {} side {}", chart.edge_name(e), k),
                    });
                }
            }
        }
        Ok(ACoords { chart, tri, edge })
    }

    /// The point with every parameter equal to one.
    pub fn all_ones(chart: Triangulation) -> Self {
        let tri = vec![S::one(); chart.tri_count()];
        let edge = vec![[S::one(), S::one()]; chart.edge_count()];
        ACoords { chart, tri, edge }
    }

    /// Parameter of the oriented edge whose tail is `side.tail()`.
    pub fn ep(&self, side: Side) -> &S {
        let (e, k) = self.chart.edge_at(side);
        &self.edge[e][k as usize]
    }

    /// Parameter of the opposite orientation of the edge at `side`.
    pub fn ep_rev(&self, side: Side) -> &S {
        let (e, k) = self.chart.edge_at(side);
        &self.edge[e][1 - k as usize]
    }

    /// Collect the square of parameters around edge `e`, reading through
    /// self-gluings per slot (parameters may repeat when boundary edges of
    /// the square coincide in the surface).
    pub fn edge_neighborhood(&self, e: EdgeId) -> Result<EdgeNeighborhood<S>, Error> {
        if e >= self.chart.edge_count() {
            return Err(Error::UnknownEdge {
                edge: format!("#{e}"),
            });
        }
        let [p, q] = self.chart.sides(e);
        let la = Side::new(p.tri, (p.slot + 1) % 3);
        let lb = Side::new(p.tri, (p.slot + 2) % 3);
        let lc = Side::new(q.tri, (q.slot + 1) % 3);
        let ld = Side::new(q.tri, (q.slot + 2) % 3);
        Ok(EdgeNeighborhood {
            a_tri: self.tri[p.tri].clone(),
            b_tri: self.tri[q.tri].clone(),
            e_minus: self.ep(p).clone(),
            e_plus: self.ep(q).clone(),
            a_minus: self.ep(la).clone(),
            a_plus: self.ep_rev(la).clone(),
            b_minus: self.ep(lb).clone(),
            b_plus: self.ep_rev(lb).clone(),
            c_plus: self.ep(lc).clone(),
            c_minus: self.ep_rev(lc).clone(),
            d_plus: self.ep(ld).clone(),
            d_minus: self.ep_rev(ld).clone(),
        })
    }

    /// The outitude along edge `e`:
    /// `A(e⁺c⁺ + e⁻d⁻ − e⁺e⁻) + B(e⁺b⁺ + e⁻a⁻ − e⁺e⁻)`.
    ///
    /// Positive means the convex hull over the square keeps this edge;
    /// negative means flipping it improves the hull; zero is the degenerate
    /// (coplanar) wall.
    pub fn outitude(&self, e: EdgeId) -> Result<S, Error> {
        let n = self.edge_neighborhood(e)?;
        let ee = n.e_plus.clone() * n.e_minus.clone();
        let half_a = n.e_plus.clone() * n.c_plus + n.e_minus.clone() * n.d_minus - ee.clone();
        let half_b = n.e_plus * n.b_plus + n.e_minus * n.a_minus - ee;
        Ok(n.a_tri * half_a + n.b_tri * half_b)
    }

    /// All outitudes, indexed by edge id.
    pub fn outitudes(&self) -> Vec<S> {
        (0..self.chart.edge_count())
            .map(|e| self.outitude(e).expect("edge id in range"))
            .collect()
    }

    /// Express the same structure on the chart with edge `e` flipped.
    ///
    /// Only the two flanking triangle parameters and the flipped edge's two
    /// parameters change; every other parameter keeps its (edge, side index)
    /// key while its (triangle, slot) location moves per the returned remap.
    pub fn flip_transform(&self, e: EdgeId) -> Result<(ACoords<S>, FlipRemap), Error> {
        let n = self.edge_neighborhood(e)?;
        let (chart, remap) = self.chart.flip_edge(e)?;
        let c_new = (n.a_tri.clone() * n.c_plus + n.b_tri.clone() * n.b_plus) / n.e_minus;
        let d_new = (n.a_tri.clone() * n.d_minus + n.b_tri.clone() * n.a_minus) / n.e_plus;
        let f_plus = (c_new.clone() * n.a_plus + d_new.clone() * n.b_minus) / n.a_tri;
        let f_minus = (c_new.clone() * n.d_plus + d_new.clone() * n.c_minus) / n.b_tri;
        let mut tri = self.tri.clone();
        tri[remap.top] = c_new;
        tri[remap.bottom] = d_new;
        let mut edge = self.edge.clone();
        edge[e][1 - remap.i_star as usize] = f_minus;
        edge[e][remap.i_star as usize] = f_plus;
        Ok((ACoords { chart, tri, edge }, remap))
    }

    /// Compose flips along a word of edge ids.
    pub fn chart_transition(&self, flips: &[EdgeId]) -> Result<ACoords<S>, Error> {
        let mut cur = self.clone();
        for &e in flips {
            cur = cur.flip_transform(e)?.0;
        }
        Ok(cur)
    }

    /// Rescale the decoration vector at one puncture: parameters of oriented
    /// edges pointing into the puncture are multiplied by `lambda`, and each
    /// triangle parameter by `lambda^m` where `m` counts the triangle's
    /// corners at the puncture.
    pub fn rescale_vector(&self, puncture: PunctureId, lambda: &S) -> Result<Self, Error> {
        self.rescale(puncture, lambda, true)
    }

    /// Rescale the decoration covector at one puncture: parameters of
    /// oriented edges pointing out of the puncture are multiplied by
    /// `lambda`; triangle parameters are unchanged.
    pub fn rescale_covector(&self, puncture: PunctureId, lambda: &S) -> Result<Self, Error> {
        self.rescale(puncture, lambda, false)
    }

    fn rescale(&self, puncture: PunctureId, lambda: &S, vector: bool) -> Result<Self, Error> {
        if !lambda.is_positive() {
            return Err(Error::NonpositiveScale);
        }
        if puncture >= self.chart.punctures() {
            return Err(Error::UnknownPuncture { puncture });
        }
        let mut out = self.clone();
        for e in 0..self.chart.edge_count() {
            for k in 0..2usize {
                let side = self.chart.side(e, k as u8);
                let corner = if vector {
                    (side.slot + 1) % 3 // head of the oriented edge
                } else {
                    side.slot // tail
                };
                if self.chart.puncture_of_corner(side.tri, corner) == puncture {
                    out.edge[e][k] = out.edge[e][k].clone() * lambda.clone();
                }
            }
        }
        if vector {
            for t in 0..self.chart.tri_count() {
                for c in 0..3u8 {
                    if self.chart.puncture_of_corner(t, c) == puncture {
                        out.tri[t] = out.tri[t].clone() * lambda.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Project to X-coordinates (triple and quadruple ratios). The result is
    /// invariant under both kinds of decoration rescaling.
    pub fn to_x_coords(&self) -> XCoords<S> {
        let chart = self.chart.clone();
        let triple = (0..chart.tri_count())
            .map(|t| {
                let mut num = S::one();
                let mut den = S::one();
                for s in 0..3u8 {
                    num = num * self.ep(Side::new(t, s)).clone();
                    den = den * self.ep_rev(Side::new(t, s)).clone();
                }
                num / den
            })
            .collect();
        let quad = (0..chart.edge_count())
            .map(|e| {
                let pair = chart.sides(e);
                let q_at = |k: usize| {
                    let q = pair[k];
                    let p = pair[1 - k];
                    let d_minus = self.ep_rev(Side::new(q.tri, (q.slot + 2) % 3)).clone();
                    let a_minus = self.ep(Side::new(p.tri, (p.slot + 1) % 3)).clone();
                    self.tri[p.tri].clone() * d_minus / (self.tri[q.tri].clone() * a_minus)
                };
                [q_at(0), q_at(1)]
            })
            .collect();
        XCoords { chart, triple, quad }
    }

    /// Rescale decorations so all triangle parameters sum to one and, at
    /// every puncture, the outgoing edge parameters sum to one. Needs a cube
    /// root, so only the float backend supports it.
    pub fn normalize_decorations(&self) -> Result<Self, Error> {
        let mut tri_sum = S::zero();
        for v in &self.tri {
            tri_sum = tri_sum + v.clone();
        }
        let lambda = S::one() / tri_sum.cbrt()?;
        // Simultaneous vector rescaling at every puncture by one common
        // factor: every oriented edge gains λ (its head is at some
        // puncture), every triangle gains λ³.
        let mut out = self.clone();
        for pair in &mut out.edge {
            for v in pair.iter_mut() {
                *v = v.clone() * lambda.clone();
            }
        }
        let lam3 = lambda.clone() * lambda.clone() * lambda;
        for v in &mut out.tri {
            *v = v.clone() * lam3.clone();
        }
        // Per-puncture covector rescaling to unit outgoing sums.
        for p in 0..out.chart.punctures() {
            let mut sum = S::zero();
            for e in 0..out.chart.edge_count() {
                for k in 0..2usize {
                    let side = out.chart.side(e, k as u8);
                    if out.chart.puncture_of_corner(side.tri, side.slot) == p {
                        sum = sum + out.edge[e][k].clone();
                    }
                }
            }
            let mu = S::one() / sum;
            out = out.rescale_covector(p, &mu)?;
        }
        Ok(out)
    }

    /// Backend-aware equality on every parameter (and equal charts).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.chart == other.chart
            && self
                .tri
                .iter()
                .zip(&other.tri)
                .all(|(a, b)| a.approx_eq(b))
            && self
                .edge
                .iter()
                .zip(&other.edge)
                .all(|(a, b)| a[0].approx_eq(&b[0]) && a[1].approx_eq(&b[1]))
    }

    /// Convert parameter-wise to the float backend.
    pub fn to_float(&self) -> ACoords<f64> {
        ACoords {
            chart: self.chart.clone(),
            tri: self.tri.iter().map(|v| v.to_f64()).collect(),
            edge: self
                .edge
                .iter()
                .map(|p| [p[0].to_f64(), p[1].to_f64()])
                .collect(),
        }
    }

    /// Relabeling-invariant byte encoding of chart plus coordinates.
    pub fn canonical_encoding(&self) -> Vec<u8> {
        self.chart
            .canonical_encoding(Some((&self.tri[..], &self.edge[..])))
    }

    /// True when every outitude is strictly positive.
    pub fn all_outitudes_positive(&self) -> bool {
        self.outitudes().iter().all(|v| v.sign() == Sign::Positive)
    }
}

/// X-coordinates: one triple ratio per triangle, one quadruple ratio per
/// oriented edge (indexed like edge parameters: entry `k` of edge `e` is the
/// ratio attached to the orientation whose tail is `sides(e)[k].tail()`).
#[derive(Clone, Debug, PartialEq)]
pub struct XCoords<S: Scalar> {
    pub chart: Triangulation,
    pub triple: Vec<S>,
    pub quad: Vec<[S; 2]>,
}

impl<S: Scalar> XCoords<S> {
    /// Quadruple ratio of the oriented edge keyed by `side`.
    pub fn q(&self, side: Side) -> &S {
        let (e, k) = self.chart.edge_at(side);
        &self.quad[e][k as usize]
    }

    /// Per puncture, the two finite-area products: over the corner orbit,
    /// the product of outgoing quadruple ratios, and the product of incoming
    /// quadruple ratios times the corner's triple ratio. The structure has
    /// finite area iff every product is one; images of A-coordinates satisfy
    /// this identically.
    pub fn finite_area_residuals(&self) -> Vec<[S; 2]> {
        self.chart
            .corner_orbits()
            .iter()
            .map(|orbit| {
                let mut outgoing = S::one();
                let mut incoming = S::one();
                for &(t, v) in orbit {
                    outgoing = outgoing * self.q(Side::new(t, v)).clone();
                    incoming = incoming
                        * self.q(Side::new(t, (v + 2) % 3)).clone()
                        * self.triple[t].clone();
                }
                [outgoing, incoming]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn alpha0() -> ACoords<Rational> {
        fixtures::torus_alpha0()
    }

    fn rat(text: &str) -> Rational {
        Rational::parse(text).unwrap()
    }

    #[test]
    fn all_ones_outitude_is_two() {
        for chart in [
            fixtures::torus_chart(),
            fixtures::sphere3_chart(),
            fixtures::sphere3_folded_chart(),
        ] {
            let ones = ACoords::<Rational>::all_ones(chart);
            for v in ones.outitudes() {
                assert_eq!(v, Rational::from_int(2));
            }
        }
    }

    #[test]
    fn worked_torus_outitudes_are_exact() {
        let a = alpha0();
        let id = |n: &str| a.chart.edge_id(n).unwrap();
        assert_eq!(a.outitude(id("a")).unwrap(), rat("688511/2592"));
        assert_eq!(a.outitude(id("b")).unwrap(), rat("4264025/7776"));
        assert_eq!(a.outitude(id("c")).unwrap(), rat("-603645145/186624"));
        // The decimal views the exact values round to.
        assert!((a.outitude(id("a")).unwrap().to_f64() - 265.629).abs() < 1e-3);
        assert!((a.outitude(id("b")).unwrap().to_f64() - 548.357).abs() < 1e-3);
        assert!((a.outitude(id("c")).unwrap().to_f64() + 3234.55).abs() < 1e-2);
    }

    #[test]
    fn worked_torus_flip_sequence() {
        let a0 = alpha0();
        let c = a0.chart.edge_id("c").unwrap();
        let (a1, _) = a0.flip_transform(c).unwrap();
        assert_eq!(a1.tri, vec![rat("4/3"), rat("3/2")]);
        assert_eq!(a1.edge[c], [rat("1/2"), rat("1")]);
        // Boundary edge parameters never move.
        let aid = a0.chart.edge_id("a").unwrap();
        let bid = a0.chart.edge_id("b").unwrap();
        assert_eq!(a1.edge[aid], a0.edge[aid]);
        assert_eq!(a1.edge[bid], a0.edge[bid]);

        let (a2, _) = a1.flip_transform(bid).unwrap();
        assert_eq!(a2.tri, vec![rat("1"), rat("1")]);
        let outs = a2.outitudes();
        assert_eq!(outs[aid], rat("2"));
        assert_eq!(outs[bid], rat("5/4"));
        assert_eq!(outs[c], rat("9/4"));
    }

    #[test]
    fn double_flip_is_the_identity_on_coordinates() {
        let a0 = alpha0();
        for e in 0..3 {
            let (once, _) = a0.flip_transform(e).unwrap();
            let (twice, _) = once.flip_transform(e).unwrap();
            assert_eq!(twice, a0, "edge {}", a0.chart.edge_name(e));
        }
    }

    #[test]
    fn x_projection_of_ones_is_ones() {
        let x = ACoords::<Rational>::all_ones(fixtures::torus_chart()).to_x_coords();
        assert!(x.triple.iter().all(|v| *v == Rational::from_int(1)));
        assert!(x
            .quad
            .iter()
            .all(|p| p[0] == Rational::from_int(1) && p[1] == Rational::from_int(1)));
    }

    #[test]
    fn finite_area_residuals_are_one() {
        for coords in [alpha0(), fixtures::torus_alpha2(), {
            let chart = fixtures::sphere3_folded_chart();
            fixtures::seeded_coords(chart, 7)
        }] {
            for pair in coords.to_x_coords().finite_area_residuals() {
                assert_eq!(pair[0], Rational::from_int(1));
                assert_eq!(pair[1], Rational::from_int(1));
            }
        }
    }

    #[test]
    fn torus_vector_rescale_doubles_everything_incident() {
        let a = alpha0();
        let two = Rational::from_int(2);
        let scaled = a.rescale_vector(0, &two).unwrap();
        for e in 0..3 {
            for k in 0..2 {
                assert_eq!(
                    scaled.edge[e][k],
                    a.edge[e][k].clone() * Rational::from_int(2)
                );
            }
        }
        for t in 0..2 {
            assert_eq!(scaled.tri[t], a.tri[t].clone() * Rational::from_int(8));
        }
    }

    #[test]
    fn rescaling_preserves_x_coordinates() {
        let a = alpha0();
        let lam = rat("7/3");
        let same_x = [
            a.rescale_vector(0, &lam).unwrap(),
            a.rescale_covector(0, &lam).unwrap(),
        ];
        for other in same_x {
            assert_eq!(other.to_x_coords(), a.to_x_coords());
        }
    }

    #[test]
    fn rescale_rejects_bad_inputs() {
        let a = alpha0();
        assert!(matches!(
            a.rescale_vector(0, &Rational::from_int(0)),
            Err(Error::NonpositiveScale)
        ));
        assert!(matches!(
            a.rescale_covector(5, &Rational::from_int(2)),
            Err(Error::UnknownPuncture { puncture: 5 })
        ));
    }

    #[test]
    fn normalization_lands_in_the_slice() {
        let a = fixtures::torus_alpha2::<Rational>().to_float();
        let n = a.normalize_decorations().unwrap();
        assert!((n.tri[0] - 0.5).abs() < 1e-9);
        assert!((n.tri[1] - 0.5).abs() < 1e-9);
        let mut outgoing = 0.0;
        for e in 0..3 {
            for k in 0..2usize {
                outgoing += n.edge[e][k];
            }
        }
        // Single puncture: all six oriented edges leave it.
        assert!((outgoing - 1.0).abs() < 1e-9);
        // X-coordinates are unchanged by redecoration.
        let before = a.to_x_coords();
        let after = n.to_x_coords();
        for t in 0..2 {
            assert!((before.triple[t] - after.triple[t]).abs() < 1e-9);
        }
        for e in 0..3 {
            for k in 0..2usize {
                assert!((before.quad[e][k] - after.quad[e][k]).abs() < 1e-9);
            }
        }
        // The exact backend cannot take the cube root.
        assert!(matches!(
            fixtures::torus_alpha2::<Rational>().normalize_decorations(),
            Err(Error::ExactBackendUnsupported { .. })
        ));
    }

    #[test]
    fn nonpositive_parameters_are_rejected() {
        let chart = fixtures::torus_chart();
        let tri = vec![Rational::from_int(1), Rational::from_int(-1)];
        let edge = vec![[Rational::from_int(1), Rational::from_int(1)]; 3];
        assert!(matches!(
            ACoords::new(chart, tri, edge),
            Err(Error::NonpositiveParameter { .. })
        ));
    }

    proptest! {
        #[test]
        fn flips_are_involutions_on_random_coords(seed in 0u64..512, e in 0usize..3) {
            let coords = fixtures::seeded_coords(fixtures::torus_chart(), seed);
            let (once, _) = coords.flip_transform(e).unwrap();
            prop_assert!(once.tri.iter().all(|v| v.is_positive()));
            let (twice, _) = once.flip_transform(e).unwrap();
            prop_assert_eq!(twice, coords);
        }

        #[test]
        fn covector_rescale_keeps_outitude_signs(seed in 0u64..256, num in 1i64..20, den in 1i64..20) {
            let coords = fixtures::seeded_coords(fixtures::sphere3_chart(), seed);
            let lam = Rational::from_ratio(num, den);
            let scaled = coords.rescale_covector(seed as usize % 3, &lam).unwrap();
            let before = coords.outitudes();
            let after = scaled.outitudes();
            for (x, y) in before.iter().zip(&after) {
                prop_assert_eq!(x.sign(), y.sign());
            }
        }

        #[test]
        fn x_residuals_vanish_on_random_coords(seed in 0u64..256) {
            let coords = fixtures::seeded_coords(fixtures::pentagon_chart(), seed);
            for pair in coords.to_x_coords().finite_area_residuals() {
                prop_assert_eq!(&pair[0], &Rational::from_int(1));
                prop_assert_eq!(&pair[1], &Rational::from_int(1));
            }
        }
    }
}
