//! The flip algorithm reaching the canonical cell decomposition, plus cell
//! membership, interior-point sampling, and deformations toward the all-ones
//! structure.
//!
//! A cell decomposition is stored as a chart together with the subset of
//! `kept` edges; the removed edges are fan diagonals of the complementary
//! polygons. [`standard_subdivision`] re-triangulates every polygon into a
//! fan from a single designated corner and returns the diagonals of each
//! polygon in fan order, which is the labeling the sampling and deformation
//! formulas are written in.

use std::collections::HashMap;

use crate::coords::ACoords;
use crate::error::Error;
use crate::scalar::{Backend, Scalar, Sign};
use crate::surface::{EdgeId, Side, TriId, Triangulation};

/// One complementary polygon of a cell decomposition, in fan labeling: the
/// apex corner sees every diagonal, `triangles` walks the fan from the side
/// whose apex-tail edge is kept, and `diagonals[m]` is the m-th fan diagonal
/// together with the side index of its parameter oriented away from the
/// apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub triangles: Vec<TriId>,
    pub diagonals: Vec<(EdgeId, u8)>,
    pub apex: (TriId, u8),
}

impl Polygon {
    /// Number of polygon sides (= ideal vertices).
    pub fn size(&self) -> usize {
        self.triangles.len() + 2
    }
}

/// A cell decomposition presented on a standard-subdivision chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecomposition {
    pub chart: Triangulation,
    /// Indexed by edge id: true for cell edges, false for fan diagonals.
    pub kept: Vec<bool>,
    pub polygons: Vec<Polygon>,
}

/// Where coordinates sit relative to a cell: strictly inside, on the closure
/// boundary, or outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    ClosureBoundary,
    Outside,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Membership::Interior => "INTERIOR",
            Membership::ClosureBoundary => "CLOSURE_BOUNDARY",
            Membership::Outside => "OUTSIDE",
        })
    }
}

/// Membership classification; `borderline` is set on the float backend when
/// a kept edge's outitude is within tolerance of zero, warning that the
/// classification sits on a sign wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub membership: Membership,
    pub borderline: bool,
}

/// Group triangles into complementary regions of the kept edges and check
/// each region is a disc (its triangles form a tree under removed-edge
/// adjacency).
fn regions(chart: &Triangulation, kept: &[bool]) -> Result<Vec<Vec<TriId>>, Error> {
    let t_count = chart.tri_count();
    let mut region_of = vec![usize::MAX; t_count];
    let mut regions: Vec<Vec<TriId>> = Vec::new();
    for t0 in 0..t_count {
        if region_of[t0] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut members = vec![t0];
        region_of[t0] = id;
        let mut qi = 0;
        while qi < members.len() {
            let t = members[qi];
            qi += 1;
            for slot in 0..3u8 {
                let (e, _) = chart.edge_at(Side::new(t, slot));
                if kept[e] {
                    continue;
                }
                let far = chart.opposite(Side::new(t, slot)).tri;
                if region_of[far] == usize::MAX {
                    region_of[far] = id;
                    members.push(far);
                }
            }
        }
        regions.push(members);
    }
    // Disc check: a region of n triangles must contain exactly n−1 removed
    // edges; together with connectivity this forces a tree.
    let mut removed_in = vec![0usize; regions.len()];
    for e in 0..chart.edge_count() {
        if kept[e] {
            continue;
        }
        let [p, q] = chart.sides(e);
        if region_of[p.tri] != region_of[q.tri] {
            return Err(Error::NotACellDecomposition {
                reason: format!(
                    "removed edge {} joins two different complementary regions",
                    chart.edge_name(e)
                ),
            });
        }
        removed_in[region_of[p.tri]] += 1;
    }
    for (id, members) in regions.iter().enumerate() {
        if removed_in[id] + 1 != members.len() {
            return Err(Error::NotACellDecomposition {
                reason: format!(
                    "a complementary region with {} triangles and {} removed edges is not a disc",
                    members.len(),
                    removed_in[id]
                ),
            });
        }
    }
    Ok(regions)
}

/// The within-polygon corner class of `seed`: all (triangle, corner) pairs
/// reached from it by rotating across removed edges only, listed against the
/// fan order (the first entry's incoming edge and the last entry's outgoing
/// edge are kept).
fn corner_class(chart: &Triangulation, kept: &[bool], seed: (TriId, u8)) -> Vec<(TriId, u8)> {
    let (mut t, mut c) = seed;
    loop {
        let back = Side::new(t, (c + 2) % 3);
        let (e, _) = chart.edge_at(back);
        if kept[e] {
            break;
        }
        let far = chart.opposite(back);
        t = far.tri;
        c = far.slot;
    }
    let mut class = vec![(t, c)];
    loop {
        let (e, _) = chart.edge_at(Side::new(t, c));
        if kept[e] {
            break;
        }
        let (nt, nc) = chart.next_corner(t, c);
        t = nt;
        c = nc;
        class.push((t, c));
    }
    class
}

/// Re-triangulate every complementary polygon as a fan from one corner. The
/// apex is the within-polygon corner class containing the least (triangle,
/// corner) pair; diagonals not incident to it are flipped (each flip makes
/// one more diagonal incident) until the fan is reached. Returns the cell
/// decomposition on the fan chart and the flips applied to get there.
pub fn standard_subdivision(
    chart: &Triangulation,
    kept_edges: &[EdgeId],
) -> Result<(CellDecomposition, Vec<EdgeId>), Error> {
    let mut kept = vec![false; chart.edge_count()];
    for &e in kept_edges {
        if e >= chart.edge_count() {
            return Err(Error::UnknownEdge {
                edge: format!("#{e}"),
            });
        }
        kept[e] = true;
    }
    let regs = regions(chart, &kept)?;

    let mut work = chart.clone();
    let mut flips: Vec<EdgeId> = Vec::new();
    let mut polygons = Vec::with_capacity(regs.len());
    for members in &regs {
        if members.len() == 1 {
            polygons.push(Polygon {
                triangles: members.clone(),
                diagonals: Vec::new(),
                apex: (members[0], 0),
            });
            continue;
        }
        // Apex class: the one containing the least corner of the region.
        let mut best_least: Option<(TriId, u8)> = None;
        let mut class = Vec::new();
        for &t in members {
            for c in 0..3u8 {
                let candidate = corner_class(&work, &kept, (t, c));
                let least = *candidate.iter().min().expect("class never empty");
                if best_least.map_or(true, |b| least < b) {
                    best_least = Some(least);
                    class = candidate;
                }
            }
        }
        // Anchor the apex through flips by a kept-edge side whose tail sits
        // at it: kept edges keep their (id, side index) across flips.
        let last = *class.last().expect("class never empty");
        let (anchor_edge, anchor_k) = work.edge_at(Side::new(last.0, last.1));
        let seed = |work: &Triangulation| {
            let s = work.side(anchor_edge, anchor_k);
            (s.tri, s.slot)
        };

        loop {
            let class = corner_class(&work, &kept, seed(&work));
            if class.len() == members.len() {
                break;
            }
            let target = class
                .iter()
                .map(|&(t, c)| Side::new(t, (c + 1) % 3))
                .find(|&opp| !kept[work.edge_at(opp).0])
                .expect("a non-fan polygon has a diagonal opposite its apex");
            let (d, _) = work.edge_at(target);
            let (next, _) = work.flip_edge(d)?;
            work = next;
            flips.push(d);
        }

        // Fan labeling: the class walk runs against fan order, so reverse.
        let mut class = corner_class(&work, &kept, seed(&work));
        class.reverse();
        let triangles: Vec<TriId> = class.iter().map(|&(t, _)| t).collect();
        let mut diagonals = Vec::with_capacity(class.len() - 1);
        for window in class.windows(2) {
            let (t, c) = window[0];
            let (e, _) = work.edge_at(Side::new(t, (c + 2) % 3));
            let (_, far_k) = work.edge_at(Side::new(window[1].0, window[1].1));
            diagonals.push((e, far_k));
        }
        polygons.push(Polygon {
            triangles,
            diagonals,
            apex: class[0],
        });
    }

    Ok((
        CellDecomposition {
            chart: work,
            kept,
            polygons,
        },
        flips,
    ))
}

impl CellDecomposition {
    pub fn kept_edges(&self) -> Vec<EdgeId> {
        (0..self.chart.edge_count()).filter(|&e| self.kept[e]).collect()
    }

    pub fn diagonal_edges(&self) -> Vec<EdgeId> {
        (0..self.chart.edge_count()).filter(|&e| !self.kept[e]).collect()
    }

    /// The kept-edge sides around one polygon, in the cyclic order induced
    /// by the surface orientation.
    pub fn polygon_boundary(&self, p: usize) -> Vec<Side> {
        let start = self.first_boundary_side(p);
        let mut cycle = vec![start];
        loop {
            let next = self.next_boundary_side(*cycle.last().unwrap());
            if next == start {
                return cycle;
            }
            cycle.push(next);
        }
    }

    fn first_boundary_side(&self, p: usize) -> Side {
        let t = self.polygons[p].triangles[0];
        for slot in 0..3u8 {
            let side = Side::new(t, slot);
            if self.kept[self.chart.edge_at(side).0] {
                return side;
            }
        }
        unreachable!("a polygon triangle always touches the polygon boundary")
    }

    /// From one boundary side, rotate around its head corner across removed
    /// edges until the next boundary side.
    fn next_boundary_side(&self, side: Side) -> Side {
        let (mut t, mut c) = (side.tri, (side.slot + 1) % 3);
        loop {
            let probe = Side::new(t, c);
            if self.kept[self.chart.edge_at(probe).0] {
                return probe;
            }
            let (nt, nc) = self.chart.next_corner(t, c);
            t = nt;
            c = nc;
        }
    }

    /// Relabeling-invariant encoding of the polygon complex: polygons with
    /// their cyclic boundary sides and the kept-edge gluings between them.
    /// The fan subdivision is deliberately not encoded — it depends on the
    /// apex choice, which is labeling data, not structure.
    pub fn canonical_encoding(&self) -> Vec<u8> {
        let cycles: Vec<Vec<Side>> =
            (0..self.polygons.len()).map(|p| self.polygon_boundary(p)).collect();
        let mut loc: HashMap<Side, (usize, usize)> = HashMap::new();
        for (p, cycle) in cycles.iter().enumerate() {
            for (j, &side) in cycle.iter().enumerate() {
                loc.insert(side, (p, j));
            }
        }
        let mut best: Option<Vec<u8>> = None;
        for p0 in 0..cycles.len() {
            for j0 in 0..cycles[p0].len() {
                let bytes = self.encode_cells_from(&cycles, &loc, (p0, j0));
                if best.as_ref().map_or(true, |b| bytes < *b) {
                    best = Some(bytes);
                }
            }
        }
        best.unwrap_or_default()
    }

    fn encode_cells_from(
        &self,
        cycles: &[Vec<Side>],
        loc: &HashMap<Side, (usize, usize)>,
        start: (usize, usize),
    ) -> Vec<u8> {
        let kept_count = self.kept.iter().filter(|&&k| k).count();
        let mut out = format!(
            "cells g{} n{} p{} k{};",
            self.chart.genus(),
            self.chart.punctures(),
            cycles.len(),
            kept_count
        )
        .into_bytes();
        let mut new_id = vec![usize::MAX; cycles.len()];
        let mut entry = vec![0usize; cycles.len()];
        let mut order = vec![start.0];
        new_id[start.0] = 0;
        entry[start.0] = start.1;
        let mut qi = 0;
        while qi < order.len() {
            let p = order[qi];
            let size = cycles[p].len();
            out.extend(format!("p{}[{}]:", qi, size).bytes());
            qi += 1;
            for jj in 0..size {
                let side = cycles[p][(entry[p] + jj) % size];
                let (e, k) = self.chart.edge_at(side);
                let partner = self.chart.side(e, 1 - k);
                let (p2, j2) = loc[&partner];
                if new_id[p2] == usize::MAX {
                    new_id[p2] = order.len();
                    entry[p2] = j2;
                    order.push(p2);
                }
                let rel = (j2 + cycles[p2].len() - entry[p2]) % cycles[p2].len();
                out.extend(format!(" {}.{}", new_id[p2], rel).bytes());
            }
            out.push(b';');
        }
        out
    }
}

/// Flip negative-outitude edges (most negative first, ties by edge id) until
/// all outitudes are nonnegative. Returns the final coordinates and the flip
/// log; exceeding `max_flips` reports the still-negative edges.
pub fn canonicalize<S: Scalar>(
    coords: &ACoords<S>,
    max_flips: usize,
) -> Result<(ACoords<S>, Vec<EdgeId>), Error> {
    let mut cur = coords.clone();
    let mut log: Vec<EdgeId> = Vec::new();
    loop {
        let outs = cur.outitudes();
        let mut negatives: Vec<EdgeId> = (0..outs.len())
            .filter(|&e| outs[e].sign() == Sign::Negative)
            .collect();
        if negatives.is_empty() {
            return Ok((cur, log));
        }
        if log.len() >= max_flips {
            return Err(Error::FlipBudgetExceeded {
                budget: max_flips,
                remaining_negative: negatives
                    .iter()
                    .map(|&e| cur.chart.edge_name(e).to_string())
                    .collect(),
            });
        }
        negatives.sort_by(|&a, &b| {
            outs[a]
                .partial_cmp(&outs[b])
                .expect("outitudes are finite")
                .then(a.cmp(&b))
        });
        let mut flipped = None;
        for &e in &negatives {
            match cur.flip_transform(e) {
                Ok((next, _)) => {
                    flipped = Some((e, next));
                    break;
                }
                Err(Error::UnflippableEdge { .. }) => continue,
                Err(other) => return Err(other),
            }
        }
        match flipped {
            Some((e, next)) => {
                log.push(e);
                cur = next;
            }
            None => {
                return Err(Error::UnflippableEdge {
                    edge: cur.chart.edge_name(negatives[0]).to_string(),
                })
            }
        }
    }
}

/// Read the canonical cell decomposition off coordinates whose outitudes are
/// all nonnegative: kept edges are the strictly positive ones, and the
/// zero-outitude polygons are re-fanned into standard form, transporting the
/// coordinates along the re-fanning flips.
pub fn extract_cell_decomposition<S: Scalar>(
    coords: &ACoords<S>,
) -> Result<(CellDecomposition, ACoords<S>), Error> {
    let outs = coords.outitudes();
    let mut kept = Vec::with_capacity(outs.len());
    for (e, out) in outs.iter().enumerate() {
        match out.sign() {
            Sign::Negative => {
                return Err(Error::NotCanonical {
                    edge: coords.chart.edge_name(e).to_string(),
                })
            }
            Sign::Positive => kept.push(e),
            Sign::Zero => {}
        }
    }
    let (cell, flips) = standard_subdivision(&coords.chart, &kept)?;
    let moved = coords.chart_transition(&flips)?;
    debug_assert_eq!(moved.chart, cell.chart);
    Ok((cell, moved))
}

/// Classify coordinates against a cell: interior needs every kept edge
/// strictly positive and every diagonal outitude zero; the closure relaxes
/// kept edges to nonnegative. Any diagonal with nonzero outitude or kept
/// edge with negative outitude is outside.
pub fn cell_membership<S: Scalar>(
    coords: &ACoords<S>,
    cell: &CellDecomposition,
) -> Result<MembershipReport, Error> {
    if coords.chart != cell.chart {
        return Err(Error::ChartMismatch);
    }
    let outs = coords.outitudes();
    let mut all_kept_positive = true;
    let mut borderline = false;
    let mut outside = false;
    for (e, out) in outs.iter().enumerate() {
        let sign = out.sign();
        if cell.kept[e] {
            match sign {
                Sign::Positive => {}
                Sign::Zero => {
                    all_kept_positive = false;
                    if S::BACKEND == Backend::Float {
                        borderline = true;
                    }
                }
                Sign::Negative => outside = true,
            }
        } else if sign != Sign::Zero {
            outside = true;
        }
    }
    let membership = if outside {
        Membership::Outside
    } else if all_kept_positive {
        Membership::Interior
    } else {
        Membership::ClosureBoundary
    };
    Ok(MembershipReport {
        membership,
        borderline,
    })
}

/// Solve the one outitude-zero condition that is linear in a single edge
/// parameter: with every other value fixed, Out(e) = α + β·x for the
/// parameter x at (e, side k), so x = α/(α − (α + β)).
fn solve_zero_outitude<S: Scalar>(coords: &mut ACoords<S>, e: EdgeId, k: usize) -> Result<S, Error> {
    let saved = coords.edge[e][k].clone();
    coords.edge[e][k] = S::zero();
    let at_zero = coords.outitude(e)?;
    coords.edge[e][k] = S::one();
    let at_one = coords.outitude(e)?;
    coords.edge[e][k] = saved;
    let denom = at_zero.clone() - at_one;
    if denom.sign() != Sign::Positive {
        return Err(Error::BadInput {
            detail: format!(
                "the outitude-zero condition on edge {} has no positive solution",
                coords.chart.edge_name(e)
            ),
        });
    }
    Ok(at_zero / denom)
}

/// An explicit interior point of a cell: kept-edge parameters 1, fan
/// diagonals given the geometric sequence a⁺_m = 1 + Σ_{x≤m} ε^x with
/// ε = min/(min+max) over the polygon's triangle parameters, and the
/// toward-apex parameters solved so every diagonal outitude vanishes.
pub fn sample_cell<S: Scalar>(
    cell: &CellDecomposition,
    triangle_params: &[S],
) -> Result<ACoords<S>, Error> {
    let chart = &cell.chart;
    if triangle_params.len() != chart.tri_count() {
        return Err(Error::BadInput {
            detail: format!(
                "expected {} triangle parameters, got {}",
                chart.tri_count(),
                triangle_params.len()
            ),
        });
    }
    for (t, a) in triangle_params.iter().enumerate() {
        if !a.is_positive() {
            return Err(Error::NonpositiveParameter {
                context: format!("triangle parameter {}", chart.tri_name(t)),
            });
        }
    }
    let one = S::one;
    let mut coords = ACoords {
        chart: chart.clone(),
        tri: triangle_params.to_vec(),
        edge: vec![[one(), one()]; chart.edge_count()],
    };
    for poly in &cell.polygons {
        if poly.diagonals.is_empty() {
            continue;
        }
        let params: Vec<&S> = poly.triangles.iter().map(|&t| &triangle_params[t]).collect();
        let mut max = params[0].clone();
        let mut min = params[0].clone();
        for a in &params[1..] {
            if **a > max {
                max = (*a).clone();
            }
            if **a < min {
                min = (*a).clone();
            }
        }
        let eps = min.clone() / (min + max);
        // a⁺_m = 1 + Σ_{x=0}^m ε^x, built incrementally.
        let mut power = one();
        let mut a_plus = one();
        for &(e, k) in &poly.diagonals {
            a_plus = a_plus + power.clone();
            power = power * eps.clone();
            coords.edge[e][k as usize] = a_plus.clone();
        }
    }
    for poly in &cell.polygons {
        for &(e, k) in &poly.diagonals {
            let solved = solve_zero_outitude(&mut coords, e, 1 - k as usize)?;
            coords.edge[e][1 - k as usize] = solved;
        }
    }
    ACoords::new(coords.chart, coords.tri, coords.edge)
}

/// Move an interior point toward the all-ones structure: kept-edge and
/// away-from-apex diagonal parameters are shifted by x ↦ t·x + (1−t), the
/// triangle parameters stay fixed, and the toward-apex diagonal parameters
/// are re-solved so diagonal outitudes stay exactly zero. The result remains
/// interior for every t in (0, 1].
pub fn deform_toward_one<S: Scalar>(
    coords: &ACoords<S>,
    cell: &CellDecomposition,
    t: &S,
) -> Result<ACoords<S>, Error> {
    if !t.is_positive() || *t > S::one() {
        return Err(Error::BadInput {
            detail: "deformation parameter must lie in (0, 1]".into(),
        });
    }
    let report = cell_membership(coords, cell)?;
    if report.membership != Membership::Interior {
        return Err(Error::NotInCell {
            detail: format!("membership is {}", report.membership),
        });
    }
    let phi = |x: &S| t.clone() * x.clone() + (S::one() - t.clone());
    let mut moved = coords.clone();
    for e in 0..cell.chart.edge_count() {
        if cell.kept[e] {
            moved.edge[e] = [phi(&coords.edge[e][0]), phi(&coords.edge[e][1])];
        }
    }
    for poly in &cell.polygons {
        for &(e, k) in &poly.diagonals {
            moved.edge[e][k as usize] = phi(&coords.edge[e][k as usize]);
        }
    }
    for poly in &cell.polygons {
        for &(e, k) in &poly.diagonals {
            let solved = solve_zero_outitude(&mut moved, e, 1 - k as usize)?;
            moved.edge[e][1 - k as usize] = solved;
        }
    }
    Ok(moved)
}
