//! Ideal triangulations of punctured oriented surfaces.
//!
//! A triangulation is a set of triangles with cyclically ordered corners
//! (following the surface orientation) whose sides are glued in pairs.
//! Slot `s` of a triangle is the side running from corner `s` to corner
//! `s + 1 (mod 3)`; an oriented edge is named by the (triangle, slot) pair
//! whose tail is corner `s`. Gluings are orientation-reversing: if an edge
//! has sides `(t, s)` and `(t', s')`, then corner `s` of `t` is identified
//! with corner `s' + 1` of `t'` and corner `s + 1` of `t` with corner `s'`.

use crate::error::Error;
use crate::scalar::Scalar;

pub type TriId = usize;
pub type EdgeId = usize;
pub type PunctureId = usize;

/// One side of an edge: a (triangle, slot) pair, slot in `0..3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Side {
    pub tri: TriId,
    pub slot: u8,
}

impl Side {
    pub fn new(tri: TriId, slot: u8) -> Self {
        Side { tri, slot }
    }

    /// The corner at the tail of this oriented side.
    pub fn tail(&self) -> (TriId, u8) {
        (self.tri, self.slot)
    }

    /// The corner at the head of this oriented side.
    pub fn head(&self) -> (TriId, u8) {
        (self.tri, (self.slot + 1) % 3)
    }
}

/// Bookkeeping returned by [`Triangulation::flip_edge`]: where the square's
/// pieces went. Triangle and edge ids are stable across flips; only slots
/// move, and `moved` records the four boundary sides of the flip square as
/// (old location, new location) pairs in frame order (a, b, c, d).
#[derive(Clone, Debug)]
pub struct FlipRemap {
    pub edge: EdgeId,
    /// First stored side of the edge before the flip (frame anchor).
    pub p: Side,
    /// Second stored side before the flip.
    pub q: Side,
    /// Triangle id reused for the square's upper new triangle (the smaller id).
    pub top: TriId,
    /// Triangle id reused for the lower new triangle (the larger id).
    pub bottom: TriId,
    /// Index (0 or 1) of the smaller triangle id in the edge's old sides array.
    pub i_star: u8,
    pub moved: [(Side, Side); 4],
}

/// An ideal triangulation of the surface of genus `g` with `n > 0` punctures,
/// `2 - 2g - n < 0`. Triangle and edge ids are dense indices; names are
/// carried for I/O but ignored by all algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    genus: usize,
    punctures: usize,
    tri_names: Vec<String>,
    edge_names: Vec<String>,
    /// Per edge: its two sides. The order is meaningful bookkeeping (edge
    /// parameters are keyed by it) but carries no structural information.
    sides: Vec<[Side; 2]>,
    /// Per triangle and slot: which edge lies there, and which of its two
    /// sides (index into `sides[e]`) this slot is.
    slot_edge: Vec<[(EdgeId, u8); 3]>,
    /// Per puncture: the corners around it, in the cyclic order produced by
    /// walking corner -> opposite side of the edge at that corner -> its head.
    corner_orbits: Vec<Vec<(TriId, u8)>>,
    /// Per triangle corner: the puncture it limits to.
    corner_puncture: Vec<[PunctureId; 3]>,
}

impl Triangulation {
    /// Validate and index a gluing. Each gluing entry is an edge (name plus
    /// its two sides); every (triangle, slot) must occur exactly once.
    pub fn build(
        genus: usize,
        punctures: usize,
        tri_names: Vec<String>,
        gluings: Vec<(String, Side, Side)>,
    ) -> Result<Triangulation, Error> {
        let t_count = tri_names.len();
        let e_count = gluings.len();
        let expect_t = 4 * genus as i64 - 4 + 2 * punctures as i64;
        let expect_e = 6 * genus as i64 - 6 + 3 * punctures as i64;
        if expect_t <= 0 || t_count as i64 != expect_t || e_count as i64 != expect_e {
            return Err(Error::CountMismatch {
                expected_triangles: expect_t.max(0) as usize,
                expected_edges: expect_e.max(0) as usize,
                triangles: t_count,
                edges: e_count,
            });
        }
        for (i, name) in tri_names.iter().enumerate() {
            if tri_names[..i].contains(name) {
                return Err(Error::BadInput {
                    detail: format!("duplicate triangle name {name:?}"),
                });
            }
        }
        for (i, (name, _, _)) in gluings.iter().enumerate() {
            if gluings[..i].iter().any(|(m, _, _)| m == name) {
                return Err(Error::BadInput {
                    detail: format!("duplicate edge name {name:?}"),
                });
            }
        }

        let mut sides = Vec::with_capacity(e_count);
        let mut edge_names = Vec::with_capacity(e_count);
        let mut slot_edge = vec![[(usize::MAX, 0u8); 3]; t_count];
        for (e, (name, a, b)) in gluings.into_iter().enumerate() {
            for side in [a, b] {
                if side.tri >= t_count {
                    return Err(Error::UnknownTriangle {
                        tri: format!("#{}", side.tri),
                    });
                }
                if side.slot >= 3 {
                    return Err(Error::BadInput {
                        detail: format!(
                            "slot {} of triangle {} out of range",
                            side.slot, tri_names[side.tri]
                        ),
                    });
                }
            }
            for (k, side) in [a, b].into_iter().enumerate() {
                let cell = &mut slot_edge[side.tri][side.slot as usize];
                if cell.0 != usize::MAX {
                    return Err(Error::DuplicateSlot {
                        tri: tri_names[side.tri].clone(),
                        slot: side.slot,
                    });
                }
                *cell = (e, k as u8);
            }
            sides.push([a, b]);
            edge_names.push(name);
        }
        for (t, row) in slot_edge.iter().enumerate() {
            for (s, cell) in row.iter().enumerate() {
                if cell.0 == usize::MAX {
                    return Err(Error::UngluedSlot {
                        tri: tri_names[t].clone(),
                        slot: s as u8,
                    });
                }
            }
        }

        let mut tri = Triangulation {
            genus,
            punctures,
            tri_names,
            edge_names,
            sides,
            slot_edge,
            corner_orbits: Vec::new(),
            corner_puncture: Vec::new(),
        };

        // Connectivity over triangles through shared edges.
        let mut seen = vec![false; t_count];
        let mut queue = vec![0usize];
        seen[0] = true;
        while let Some(t) = queue.pop() {
            for s in 0..3u8 {
                let n = tri.opposite(Side::new(t, s)).tri;
                if !seen[n] {
                    seen[n] = true;
                    queue.push(n);
                }
            }
        }
        if seen.iter().any(|v: &bool| !v) {
            return Err(Error::Disconnected);
        }

        tri.recompute_orbits();
        if tri.corner_orbits.len() != punctures {
            return Err(Error::PunctureMismatch {
                declared: punctures,
                found: tri.corner_orbits.len(),
            });
        }
        Ok(tri)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn tri_count(&self) -> usize {
        self.tri_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn tri_name(&self, t: TriId) -> &str {
        &self.tri_names[t]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e]
    }

    pub fn tri_id(&self, name: &str) -> Option<TriId> {
        self.tri_names.iter().position(|n| n == name)
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_names.iter().position(|n| n == name)
    }

    /// The two sides of an edge, in stored order.
    pub fn sides(&self, e: EdgeId) -> [Side; 2] {
        self.sides[e]
    }

    pub fn side(&self, e: EdgeId, k: u8) -> Side {
        self.sides[e][k as usize]
    }

    /// Which edge occupies a slot, and which of its two sides this is.
    pub fn edge_at(&self, side: Side) -> (EdgeId, u8) {
        self.slot_edge[side.tri][side.slot as usize]
    }

    /// The other side of the edge occupying `side`.
    pub fn opposite(&self, side: Side) -> Side {
        let (e, k) = self.edge_at(side);
        self.sides[e][1 - k as usize]
    }

    /// True when both sides of the edge lie on one triangle.
    pub fn is_self_glued(&self, e: EdgeId) -> bool {
        self.sides[e][0].tri == self.sides[e][1].tri
    }

    pub fn corner_orbits(&self) -> &[Vec<(TriId, u8)>] {
        &self.corner_orbits
    }

    pub fn puncture_of_corner(&self, t: TriId, corner: u8) -> PunctureId {
        self.corner_puncture[t][corner as usize]
    }

    /// Walking step around a puncture: from a corner, cross the edge whose
    /// tail sits at the corner and land on the head corner of its far side.
    pub fn next_corner(&self, t: TriId, corner: u8) -> (TriId, u8) {
        let far = self.opposite(Side::new(t, corner));
        far.head()
    }

    fn recompute_orbits(&mut self) {
        let t_count = self.tri_count();
        self.corner_puncture = vec![[usize::MAX; 3]; t_count];
        self.corner_orbits.clear();
        for t0 in 0..t_count {
            for c0 in 0..3u8 {
                if self.corner_puncture[t0][c0 as usize] != usize::MAX {
                    continue;
                }
                let id = self.corner_orbits.len();
                let mut orbit = Vec::new();
                let (mut t, mut c) = (t0, c0);
                loop {
                    self.corner_puncture[t][c as usize] = id;
                    orbit.push((t, c));
                    let (nt, nc) = self.next_corner(t, c);
                    if (nt, nc) == (t0, c0) {
                        break;
                    }
                    t = nt;
                    c = nc;
                }
                self.corner_orbits.push(orbit);
            }
        }
    }

    /// Replace edge `e` (the diagonal of the square formed by its two
    /// flanking triangles) with the opposite diagonal.
    ///
    /// Triangle and edge ids are stable. Each flanking triangle keeps the
    /// flipped edge in its own old slot; the four boundary sides of the
    /// square rotate one step. The triangle with the smaller id always takes
    /// the square's upper half (the one bounded by the sides following the
    /// anchor side `p`); this id-ordered routing is what makes flipping the
    /// same edge twice restore the triangulation — and coordinates carried
    /// with it — literally.
    ///
    /// Edges with both sides on one triangle bound no square and cannot be
    /// flipped.
    pub fn flip_edge(&self, e: EdgeId) -> Result<(Triangulation, FlipRemap), Error> {
        if e >= self.edge_count() {
            return Err(Error::UnknownEdge {
                edge: format!("#{e}"),
            });
        }
        let [p, q] = self.sides[e];
        if p.tri == q.tri {
            return Err(Error::UnflippableEdge {
                edge: self.edge_names[e].clone(),
            });
        }
        let i_star: u8 = if p.tri < q.tri { 0 } else { 1 };

        // Square boundary in frame order: a, b after the anchor triangle's
        // diagonal slot; c, d after the far triangle's.
        let la = Side::new(p.tri, (p.slot + 1) % 3);
        let lb = Side::new(p.tri, (p.slot + 2) % 3);
        let lc = Side::new(q.tri, (q.slot + 1) % 3);
        let ld = Side::new(q.tri, (q.slot + 2) % 3);
        let ea = self.edge_at(la);
        let eb = self.edge_at(lb);
        let ec = self.edge_at(lc);
        let ed = self.edge_at(ld);

        let (top, top_slot, bottom, bottom_slot) = if i_star == 0 {
            (p.tri, p.slot, q.tri, q.slot)
        } else {
            (q.tri, q.slot, p.tri, p.slot)
        };

        let mut next = self.clone();
        next.slot_edge[top][top_slot as usize] = (e, 1 - i_star);
        next.slot_edge[top][((top_slot + 1) % 3) as usize] = eb;
        next.slot_edge[top][((top_slot + 2) % 3) as usize] = ec;
        next.slot_edge[bottom][bottom_slot as usize] = (e, i_star);
        next.slot_edge[bottom][((bottom_slot + 1) % 3) as usize] = ed;
        next.slot_edge[bottom][((bottom_slot + 2) % 3) as usize] = ea;

        let na = Side::new(bottom, (bottom_slot + 2) % 3);
        let nb = Side::new(top, (top_slot + 1) % 3);
        let nc = Side::new(top, (top_slot + 2) % 3);
        let nd = Side::new(bottom, (bottom_slot + 1) % 3);
        next.sides[ea.0][ea.1 as usize] = na;
        next.sides[eb.0][eb.1 as usize] = nb;
        next.sides[ec.0][ec.1 as usize] = nc;
        next.sides[ed.0][ed.1 as usize] = nd;
        next.sides[e][(1 - i_star) as usize] = Side::new(top, top_slot);
        next.sides[e][i_star as usize] = Side::new(bottom, bottom_slot);

        next.recompute_orbits();
        let remap = FlipRemap {
            edge: e,
            p,
            q,
            top,
            bottom,
            i_star,
            moved: [(la, na), (lb, nb), (lc, nc), (ld, nd)],
        };
        Ok((next, remap))
    }

    /// Re-run the structural invariants; used by tests after surgery.
    pub fn validate(&self) -> Result<(), Error> {
        let rebuilt = Triangulation::build(
            self.genus,
            self.punctures,
            self.tri_names.clone(),
            self.edge_names
                .iter()
                .cloned()
                .zip(self.sides.iter())
                .map(|(n, s)| (n, s[0], s[1]))
                .collect(),
        )?;
        if rebuilt.slot_edge != self.slot_edge || rebuilt.corner_orbits != self.corner_orbits {
            return Err(Error::BadInput {
                detail: "inconsistent internal tables".into(),
            });
        }
        Ok(())
    }

    /// Apply a relabeling: permute triangle ids, edge ids, rotate each
    /// triangle's corners by `rot[t]` (corner `c` becomes `c + rot[t]`),
    /// and swap the stored side order of edges where `swap[e]` holds.
    pub fn relabel(
        &self,
        tri_perm: &[TriId],
        edge_perm: &[EdgeId],
        rot: &[u8],
        swap: &[bool],
    ) -> Triangulation {
        let t_count = self.tri_count();
        let e_count = self.edge_count();
        let map_side = |s: Side| Side::new(tri_perm[s.tri], (s.slot + rot[s.tri]) % 3);
        let mut tri_names = vec![String::new(); t_count];
        for t in 0..t_count {
            tri_names[tri_perm[t]] = self.tri_names[t].clone();
        }
        let mut edge_names = vec![String::new(); e_count];
        let mut sides = vec![[Side::new(0, 0); 2]; e_count];
        for e in 0..e_count {
            edge_names[edge_perm[e]] = self.edge_names[e].clone();
            let [a, b] = self.sides[e];
            let pair = if swap[e] {
                [map_side(b), map_side(a)]
            } else {
                [map_side(a), map_side(b)]
            };
            sides[edge_perm[e]] = pair;
        }
        let mut slot_edge = vec![[(0usize, 0u8); 3]; t_count];
        for (e, pair) in sides.iter().enumerate() {
            for (k, s) in pair.iter().enumerate() {
                slot_edge[s.tri][s.slot as usize] = (e, k as u8);
            }
        }
        let mut out = Triangulation {
            genus: self.genus,
            punctures: self.punctures,
            tri_names,
            edge_names,
            sides,
            slot_edge,
            corner_orbits: Vec::new(),
            corner_puncture: Vec::new(),
        };
        out.recompute_orbits();
        out
    }

    /// Relabeling-invariant encoding of the triangulation, optionally
    /// carrying coordinate values (`coords = (triangle params, edge params
    /// keyed by side index)`). A breadth-first relabeling is started from
    /// every oriented edge and the lexicographically least serialization is
    /// returned, so any two inputs differing only by id permutations, corner
    /// rotations, or stored side order encode identically.
    pub fn canonical_encoding<S: Scalar>(
        &self,
        coords: Option<(&[S], &[[S; 2]])>,
    ) -> Vec<u8> {
        let mut best: Option<Vec<u8>> = None;
        for t0 in 0..self.tri_count() {
            for s0 in 0..3u8 {
                let bytes = self.encode_from(Side::new(t0, s0), coords);
                if best.as_ref().map_or(true, |b| bytes < *b) {
                    best = Some(bytes);
                }
            }
        }
        best.unwrap_or_default()
    }

    fn encode_from<S: Scalar>(
        &self,
        start: Side,
        coords: Option<(&[S], &[[S; 2]])>,
    ) -> Vec<u8> {
        let t_count = self.tri_count();
        // For each triangle: assigned new id and the old slot playing new slot 0.
        let mut new_id = vec![usize::MAX; t_count];
        let mut base_slot = vec![0u8; t_count];
        let mut order = Vec::with_capacity(t_count);
        new_id[start.tri] = 0;
        base_slot[start.tri] = start.slot;
        order.push(start.tri);
        let mut head = 0;
        while head < order.len() {
            let t = order[head];
            head += 1;
            for k in 0..3u8 {
                let old = Side::new(t, (base_slot[t] + k) % 3);
                let far = self.opposite(old);
                if new_id[far.tri] == usize::MAX {
                    new_id[far.tri] = order.len();
                    base_slot[far.tri] = far.slot;
                    order.push(far.tri);
                }
            }
        }

        let mut out = String::new();
        out.push_str(&format!(
            "g{} n{} t{} e{};",
            self.genus,
            self.punctures,
            t_count,
            self.edge_count()
        ));
        let mut edge_seen: Vec<Option<(usize, u8)>> = vec![None; self.edge_count()];
        let mut edge_first = Vec::new();
        for (i, &t) in order.iter().enumerate() {
            out.push_str(&format!("t{i}:"));
            for k in 0..3u8 {
                let old = Side::new(t, (base_slot[t] + k) % 3);
                let (eid, idx) = self.edge_at(old);
                if edge_seen[eid].is_none() {
                    edge_seen[eid] = Some((eid, idx));
                    edge_first.push((eid, idx));
                }
                let far = self.opposite(old);
                let far_new_slot = (3 + far.slot - base_slot[far.tri]) % 3;
                out.push_str(&format!(" {}.{}", new_id[far.tri], far_new_slot));
            }
            out.push(';');
        }
        if let Some((tri_params, edge_params)) = coords {
            out.push('|');
            for &t in &order {
                out.push_str(&tri_params[t].render());
                out.push(',');
            }
            out.push('|');
            for &(eid, idx) in &edge_first {
                out.push_str(&edge_params[eid][idx as usize].render());
                out.push(',');
                out.push_str(&edge_params[eid][1 - idx as usize].render());
                out.push(';');
            }
        }
        out.into_bytes()
    }
}
