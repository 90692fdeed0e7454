//! The projective duality involution on A-coordinates.
//!
//! Duality keeps the chart and swaps the two orientations of every edge;
//! each triangle parameter A is replaced by (P₁ + P₂)/A, where P₁ and P₂ are
//! the products of the triangle's three adjacent oriented-edge parameters in
//! its two cyclic orientations. Applying the map twice restores the input
//! exactly, which makes it an involution on any exact backend.
//!
//! The decoration convention for the dual (covectors scaled so the formula
//! above holds) is adopted as stated; it is a convention, not something the
//! coordinates force.

use crate::coords::ACoords;
use crate::scalar::Scalar;
use crate::surface::Side;

/// Dual coordinates on the same chart: per edge the two oriented parameters
/// swap, and per triangle A ↦ (P₁ + P₂)/A with P₁, P₂ the two cyclic
/// products of adjacent oriented-edge parameters.
pub fn dual_coords<S: Scalar>(coords: &ACoords<S>) -> ACoords<S> {
    let chart = &coords.chart;
    let mut tri = Vec::with_capacity(chart.tri_count());
    for t in 0..chart.tri_count() {
        let mut forward = S::one();
        let mut backward = S::one();
        for slot in 0..3u8 {
            forward = forward * coords.ep(Side::new(t, slot)).clone();
            backward = backward * coords.ep_rev(Side::new(t, slot)).clone();
        }
        tri.push((forward + backward) / coords.tri[t].clone());
    }
    let edge: Vec<[S; 2]> = coords
        .edge
        .iter()
        .map(|pair| [pair[1].clone(), pair[0].clone()])
        .collect();
    ACoords {
        chart: chart.clone(),
        tri,
        edge,
    }
}
