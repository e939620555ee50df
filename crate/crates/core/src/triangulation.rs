//! Labeled ideal triangulations as combinatorial maps.
//!
//! A triangulation is a list of triangles, each an ordered triple of sides.
//! The order of a triple is the counter-clockwise order of the triangle's
//! edges under the surface orientation. A side is either an arc (labels
//! `1..=n`, each used by exactly two sides) or a boundary segment (labels
//! `1..=m`, each used once). Gluing two sides carrying the same arc label is
//! always orientation reversing, so the list of triples determines the
//! oriented surface.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::LabelPermutation;

/// Identifier of an arc, in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcLabel(pub u32);

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One side of an ideal triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Arc(ArcLabel),
    Boundary(u32),
}

impl Side {
    pub fn arc(self) -> Option<ArcLabel> {
        match self {
            Side::Arc(a) => Some(a),
            Side::Boundary(_) => None,
        }
    }

    /// Signed encoding used by the file format: arcs positive, boundary
    /// segments negative.
    pub fn to_signed(self) -> i64 {
        match self {
            Side::Arc(a) => i64::from(a.0),
            Side::Boundary(b) => -i64::from(b),
        }
    }
}

/// Position of a side: triangle index and slot `0..3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub triangle: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("unknown arc {0}")]
    UnknownArc(u32),
    #[error("arc {0} has both sides on one triangle and cannot be flipped")]
    FlipOnSelfFoldedArc(u32),
    #[error("permutation moves label {0}, outside the arc range")]
    PermutationOutOfRange(u32),
    #[error("triangle {triangle}: label {label} is out of range")]
    LabelOutOfRange { triangle: usize, label: i64 },
    #[error("triangle {triangle}: arc {label} occurs more than twice")]
    ArcOverused { triangle: usize, label: u32 },
    #[error("triangle {triangle}: boundary segment {label} occurs more than once")]
    BoundaryOverused { triangle: usize, label: u32 },
    #[error("arc {label} occurs {count} time(s), expected 2")]
    ArcUnderused { label: u32, count: usize },
    #[error("boundary segment {0} is never used")]
    BoundaryUnused(u32),
    #[error("triangle {triangle} is not connected to triangle 0")]
    Disconnected { triangle: usize },
    #[error("empty triangulation")]
    Empty,
    #[error("surface of genus {genus} with {punctures} punctures has no ideal triangulation")]
    NoIdealTriangulation { genus: u32, punctures: u32 },
    #[error("invalid triangulation document: {0}")]
    Format(String),
}

/// Topological type read off a triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: u32,
    /// Interior vertices.
    pub punctures: u32,
    pub boundary_components: u32,
    /// Vertices lying on the boundary.
    pub marked_points: u32,
}

/// A labeled ideal triangulation. Immutable; every operation returns a new
/// value.
#[derive(Debug, Clone)]
pub struct Triangulation {
    arcs: u32,
    boundary: u32,
    triangles: Vec<[Side; 3]>,
    /// `slots[a - 1]` holds the two sides carrying arc `a`.
    slots: Vec<[Slot; 2]>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.labeled_equal(other)
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    /// Builds and validates a triangulation. Errors name the first offending
    /// triangle where one exists.
    pub fn new(arcs: u32, boundary: u32, triangles: Vec<[Side; 3]>) -> Result<Self, TriangulationError> {
        if triangles.is_empty() {
            return Err(TriangulationError::Empty);
        }
        let mut slots: Vec<Vec<Slot>> = vec![Vec::new(); arcs as usize];
        let mut boundary_seen = vec![false; boundary as usize];
        for (t, tri) in triangles.iter().enumerate() {
            for (i, side) in tri.iter().enumerate() {
                match *side {
                    Side::Arc(ArcLabel(a)) => {
                        if a == 0 || a > arcs {
                            return Err(TriangulationError::LabelOutOfRange { triangle: t, label: i64::from(a) });
                        }
                        let entry = &mut slots[a as usize - 1];
                        if entry.len() == 2 {
                            return Err(TriangulationError::ArcOverused { triangle: t, label: a });
                        }
                        entry.push(Slot { triangle: t, index: i });
                    }
                    Side::Boundary(b) => {
                        if b == 0 || b > boundary {
                            return Err(TriangulationError::LabelOutOfRange { triangle: t, label: -i64::from(b) });
                        }
                        let seen = &mut boundary_seen[b as usize - 1];
                        if *seen {
                            return Err(TriangulationError::BoundaryOverused { triangle: t, label: b });
                        }
                        *seen = true;
                    }
                }
            }
        }
        for (i, s) in slots.iter().enumerate() {
            if s.len() != 2 {
                return Err(TriangulationError::ArcUnderused { label: i as u32 + 1, count: s.len() });
            }
        }
        if let Some(b) = boundary_seen.iter().position(|s| !s) {
            return Err(TriangulationError::BoundaryUnused(b as u32 + 1));
        }
        let slots: Vec<[Slot; 2]> = slots.into_iter().map(|s| [s[0], s[1]]).collect();

        // dual graph connectivity
        let mut reached = vec![false; triangles.len()];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(t) = stack.pop() {
            for side in &triangles[t] {
                if let Side::Arc(a) = side {
                    for s in &slots[a.0 as usize - 1] {
                        if !reached[s.triangle] {
                            reached[s.triangle] = true;
                            stack.push(s.triangle);
                        }
                    }
                }
            }
        }
        if let Some(t) = reached.iter().position(|r| !r) {
            return Err(TriangulationError::Disconnected { triangle: t });
        }
        Ok(Self { arcs, boundary, triangles, slots })
    }

    /// Builds from the signed encoding of the file format (arcs positive,
    /// boundary segments negative).
    pub fn from_signed(arcs: u32, boundary: u32, triangles: &[[i64; 3]]) -> Result<Self, TriangulationError> {
        let mut out = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut sides = [Side::Boundary(0); 3];
            for (i, &v) in tri.iter().enumerate() {
                sides[i] = if v > 0 && v <= i64::from(u32::MAX) {
                    Side::Arc(ArcLabel(v as u32))
                } else if v < 0 && -v <= i64::from(u32::MAX) {
                    Side::Boundary((-v) as u32)
                } else {
                    return Err(TriangulationError::LabelOutOfRange { triangle: t, label: v });
                };
            }
            out.push(sides);
        }
        Self::new(arcs, boundary, out)
    }

    /// Some ideal triangulation of the closed genus-`genus` surface with
    /// `punctures` punctures: a fan-triangulated `4g`-gon with the standard
    /// side pairing (or two triangles glued along three arcs when `g = 0`),
    /// refined by starring extra punctures into triangle 0.
    pub fn build_standard(genus: u32, punctures: u32) -> Result<Self, TriangulationError> {
        let n = 6 * i64::from(genus) - 6 + 3 * i64::from(punctures);
        if n <= 0 || punctures == 0 {
            return Err(TriangulationError::NoIdealTriangulation { genus, punctures });
        }
        let arc = |a: u32| Side::Arc(ArcLabel(a));
        let (mut triangles, mut next, first_extra) = if genus == 0 {
            (vec![[arc(1), arc(2), arc(3)], [arc(1), arc(3), arc(2)]], 4, 3)
        } else {
            let sides = 4 * genus;
            // polygon side i joins v_i -> v_{i+1}; in each block of four,
            // side 4j pairs with 4j+2 and 4j+1 with 4j+3
            let side_label = |i: u32| {
                let block = i / 4;
                let r = i % 4;
                2 * block + (r % 2) + 1
            };
            let mut next = 2 * genus + 1;
            let mut diag = Vec::new();
            for _ in 0..sides - 3 {
                diag.push(next);
                next += 1;
            }
            // fan from v_0: triangle (v_0, v_i, v_{i+1}) for i in 1..sides-1
            let mut tris = Vec::new();
            for i in 1..sides - 1 {
                let first = if i == 1 { side_label(0) } else { diag[i as usize - 2] };
                let last = if i + 1 == sides - 1 { side_label(sides - 1) } else { diag[i as usize - 1] };
                tris.push([arc(first), arc(side_label(i)), arc(last)]);
            }
            (tris, next, 1)
        };
        for _ in first_extra..punctures {
            let [x, y, z] = triangles[0];
            let (p, q, r) = (arc(next), arc(next + 1), arc(next + 2));
            next += 3;
            triangles[0] = [x, q, p];
            triangles.push([y, r, q]);
            triangles.push([z, p, r]);
        }
        Self::new(next - 1, 0, triangles)
    }

    pub fn arc_count(&self) -> u32 {
        self.arcs
    }

    pub fn boundary_count(&self) -> u32 {
        self.boundary
    }

    pub fn triangles(&self) -> &[[Side; 3]] {
        &self.triangles
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcLabel> {
        (1..=self.arcs).map(ArcLabel)
    }

    pub fn contains_arc(&self, a: ArcLabel) -> bool {
        a.0 >= 1 && a.0 <= self.arcs
    }

    fn check_arc(&self, a: ArcLabel) -> Result<(), TriangulationError> {
        if self.contains_arc(a) {
            Ok(())
        } else {
            Err(TriangulationError::UnknownArc(a.0))
        }
    }

    pub fn slots_of(&self, a: ArcLabel) -> Result<[Slot; 2], TriangulationError> {
        self.check_arc(a)?;
        Ok(self.slots[a.0 as usize - 1])
    }

    /// Both sides of the arc lie on one triangle.
    pub fn is_self_folded(&self, a: ArcLabel) -> Result<bool, TriangulationError> {
        let [s, t] = self.slots_of(a)?;
        Ok(s.triangle == t.triangle)
    }

    pub fn is_flippable(&self, a: ArcLabel) -> bool {
        matches!(self.is_self_folded(a), Ok(false))
    }

    /// Triangles carrying the arc (one entry when self-folded).
    pub fn triangles_of(&self, a: ArcLabel) -> Result<BTreeSet<usize>, TriangulationError> {
        let [s, t] = self.slots_of(a)?;
        Ok([s.triangle, t.triangle].into_iter().collect())
    }

    /// Replaces the arc by the other diagonal of its quadrilateral. The new
    /// diagonal keeps the label and the two triangles keep their indices.
    pub fn flip(&self, a: ArcLabel) -> Result<Self, TriangulationError> {
        let [s, t] = self.slots_of(a)?;
        if s.triangle == t.triangle {
            return Err(TriangulationError::FlipOnSelfFoldedArc(a.0));
        }
        let rot = |slot: Slot| {
            let tri = self.triangles[slot.triangle];
            (tri[(slot.index + 1) % 3], tri[(slot.index + 2) % 3])
        };
        // (a, b, c) and (a, d, e) become (a, e, b) and (a, c, d)
        let (b, c) = rot(s);
        let (d, e) = rot(t);
        let side = Side::Arc(a);
        let mut triangles = self.triangles.clone();
        triangles[s.triangle] = [side, e, b];
        triangles[t.triangle] = [side, c, d];
        let mut slots = self.slots.clone();
        slots[a.0 as usize - 1] = [Slot { triangle: s.triangle, index: 0 }, Slot { triangle: t.triangle, index: 0 }];
        for side in [b, c, d, e] {
            if let Side::Arc(x) = side {
                let entry = &mut slots[x.0 as usize - 1];
                let kept: Vec<Slot> = entry
                    .iter()
                    .copied()
                    .filter(|sl| sl.triangle != s.triangle && sl.triangle != t.triangle)
                    .collect();
                let mut fresh = Vec::with_capacity(2);
                for ti in [s.triangle, t.triangle] {
                    for i in 0..3 {
                        if triangles[ti][i] == side {
                            fresh.push(Slot { triangle: ti, index: i });
                        }
                    }
                }
                let all: Vec<Slot> = kept.into_iter().chain(fresh).collect();
                *entry = [all[0], all[1]];
            }
        }
        let out = Self { arcs: self.arcs, boundary: self.boundary, triangles, slots };
        debug_assert!(out.slots_consistent());
        Ok(out)
    }

    fn slots_consistent(&self) -> bool {
        self.slots.iter().enumerate().all(|(i, pair)| {
            pair[0] != pair[1]
                && pair
                    .iter()
                    .all(|s| self.triangles[s.triangle][s.index] == Side::Arc(ArcLabel(i as u32 + 1)))
        })
    }

    /// Relabels every arc `x` as `p(x)`.
    pub fn apply_permutation(&self, p: &LabelPermutation) -> Result<Self, TriangulationError> {
        if p.max_label() > self.arcs {
            return Err(TriangulationError::PermutationOutOfRange(p.max_label()));
        }
        let relabel = |s: Side| match s {
            Side::Arc(ArcLabel(x)) => Side::Arc(ArcLabel(p.apply(x))),
            b => b,
        };
        let triangles: Vec<[Side; 3]> = self.triangles.iter().map(|t| t.map(relabel)).collect();
        let mut slots = self.slots.clone();
        for x in 1..=self.arcs {
            slots[p.apply(x) as usize - 1] = self.slots[x as usize - 1];
        }
        Ok(Self { arcs: self.arcs, boundary: self.boundary, triangles, slots })
    }

    /// Triangles up to reordering and cyclic rotation: each triple rotated to
    /// start at its least side, then sorted.
    pub fn canonical_form(&self) -> Vec<[Side; 3]> {
        let mut out: Vec<[Side; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let m = (0..3).min_by_key(|&i| t[i]).unwrap_or(0);
                [t[m], t[(m + 1) % 3], t[(m + 2) % 3]]
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Slot-for-slot equality up to reordering triangles and rotating within
    /// a triangle.
    pub fn labeled_equal(&self, other: &Self) -> bool {
        self.arcs == other.arcs
            && self.boundary == other.boundary
            && self.triangles.len() == other.triangles.len()
            && self.canonical_form() == other.canonical_form()
    }

    /// The antisymmetric adjacency form: sum over triangles of `+1` when `b`
    /// immediately follows `a` counter-clockwise and `-1` when it precedes.
    pub fn epsilon(&self) -> Epsilon {
        let n = self.arcs as usize;
        let mut data = vec![0i32; n * n];
        for tri in &self.triangles {
            for i in 0..3 {
                if let (Side::Arc(a), Side::Arc(b)) = (tri[i], tri[(i + 1) % 3]) {
                    let (a, b) = (a.0 as usize - 1, b.0 as usize - 1);
                    data[a * n + b] += 1;
                    data[b * n + a] -= 1;
                }
            }
        }
        Epsilon { n, data }
    }

    /// The two arcs lie on exactly one common triangle and, together with
    /// their other triangles, span three distinct triangles.
    pub fn pentagon_applicable(&self, a: ArcLabel, b: ArcLabel) -> bool {
        if a == b || !self.is_flippable(a) || !self.is_flippable(b) {
            return false;
        }
        let (Ok(ta), Ok(tb)) = (self.triangles_of(a), self.triangles_of(b)) else {
            return false;
        };
        ta.intersection(&tb).count() == 1 && ta.union(&tb).count() == 3
    }

    /// Orientation of a pentagon pair read off their common triangle: `+1`
    /// when `b` immediately follows `a` counter-clockwise, `-1` otherwise.
    /// `None` when the pair is not a pentagon pair.
    pub fn pentagon_orientation(&self, a: ArcLabel, b: ArcLabel) -> Option<i32> {
        if !self.pentagon_applicable(a, b) {
            return None;
        }
        let ta = self.triangles_of(a).ok()?;
        let tb = self.triangles_of(b).ok()?;
        let common = *ta.intersection(&tb).next()?;
        let tri = self.triangles[common];
        let ia = tri.iter().position(|s| *s == Side::Arc(a))?;
        Some(if tri[(ia + 1) % 3] == Side::Arc(b) { 1 } else { -1 })
    }

    /// The flip quadrilaterals of `a` and `b` share no triangle.
    pub fn commuting_flips(&self, a: ArcLabel, b: ArcLabel) -> bool {
        if a == b || !self.is_flippable(a) || !self.is_flippable(b) {
            return false;
        }
        match (self.triangles_of(a), self.triangles_of(b)) {
            (Ok(ta), Ok(tb)) => ta.is_disjoint(&tb),
            _ => false,
        }
    }

    /// Arcs sharing a triangle with `a`, other than `a` itself.
    pub fn neighbours(&self, a: ArcLabel) -> Result<BTreeSet<ArcLabel>, TriangulationError> {
        let mut out = BTreeSet::new();
        for t in self.triangles_of(a)? {
            for side in &self.triangles[t] {
                if let Side::Arc(x) = side {
                    if *x != a {
                        out.insert(*x);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Vertex classes of corners. Corner `(t, k)` is the vertex where side `k`
    /// of triangle `t` ends and side `k + 1` starts.
    pub fn vertex_classes(&self) -> Vec<usize> {
        let f = self.triangles.len();
        let mut parent: Vec<usize> = (0..3 * f).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let corner = |s: Slot, shift: usize| 3 * s.triangle + (s.index + shift) % 3;
        for pair in &self.slots {
            let [s, t] = *pair;
            // the end of side s is the start of side t, i.e. corner (t, k-1)
            for (u, v) in [(corner(s, 0), corner(t, 2)), (corner(t, 0), corner(s, 2))] {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                }
            }
        }
        let mut ids = std::collections::BTreeMap::new();
        (0..3 * f)
            .map(|c| {
                let r = find(&mut parent, c);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect()
    }

    /// Genus, punctures, boundary components and marked points.
    pub fn surface_type(&self) -> SurfaceType {
        let classes = self.vertex_classes();
        let vertices = classes.iter().copied().max().map_or(0, |m| m + 1);
        let mut on_boundary = vec![false; vertices];
        // boundary segment (t, k) runs from corner (t, k-1) to corner (t, k)
        let mut next_of_start = std::collections::BTreeMap::new();
        let mut segments = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (k, side) in tri.iter().enumerate() {
                if let Side::Boundary(b) = side {
                    let start = classes[3 * t + (k + 2) % 3];
                    let end = classes[3 * t + k];
                    on_boundary[start] = true;
                    on_boundary[end] = true;
                    next_of_start.insert(start, *b);
                    segments.push((*b, end));
                }
            }
        }
        // each marked point has one outgoing segment; follow end -> next
        let succ: std::collections::BTreeMap<u32, u32> =
            segments.iter().filter_map(|&(b, end)| next_of_start.get(&end).map(|&n| (b, n))).collect();
        let mut seen = BTreeSet::new();
        let mut components = 0u32;
        for &(b, _) in &segments {
            if seen.contains(&b) {
                continue;
            }
            components += 1;
            let mut x = b;
            while seen.insert(x) {
                match succ.get(&x) {
                    Some(&n) => x = n,
                    None => break,
                }
            }
        }
        let marked = on_boundary.iter().filter(|b| **b).count() as u32;
        let punctures = vertices as u32 - marked;
        let euler = vertices as i64 - i64::from(self.arcs + self.boundary) + self.triangles.len() as i64;
        let genus = ((2 - i64::from(components) - euler) / 2).max(0) as u32;
        SurfaceType { genus, punctures, boundary_components: components, marked_points: marked }
    }

    pub fn to_file(&self) -> TriangulationFile {
        TriangulationFile {
            arcs: self.arcs,
            boundary: self.boundary,
            triangles: self.triangles.iter().map(|t| t.map(Side::to_signed)).collect(),
        }
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.triangles.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let [a, b, c] = t.map(Side::to_signed);
            write!(f, "[{a} {b} {c}]")?;
        }
        Ok(())
    }
}

/// Dense antisymmetric integer matrix indexed by arc labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epsilon {
    n: usize,
    data: Vec<i32>,
}

impl Epsilon {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: ArcLabel, b: ArcLabel) -> i32 {
        self.data[(a.0 as usize - 1) * self.n + b.0 as usize - 1]
    }

    /// Zero-based access.
    pub fn at(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.n + j]
    }
}

/// On-disk form: `{"arcs": n, "boundary": m, "triangles": [[a, b, c], ...]}`
/// with boundary segments written as negative labels. `boundary` may be
/// omitted for closed punctured surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub arcs: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub boundary: u32,
    pub triangles: Vec<[i64; 3]>,
}

fn is_zero(x: &u32) -> bool {
    *x == 0
}

impl TriangulationFile {
    pub fn build(&self) -> Result<Triangulation, TriangulationError> {
        Triangulation::from_signed(self.arcs, self.boundary, &self.triangles)
    }

    pub fn from_json(s: &str) -> Result<Triangulation, TriangulationError> {
        let file: Self = serde_json::from_str(s).map_err(|e| TriangulationError::Format(e.to_string()))?;
        file.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: u32) -> ArcLabel {
        ArcLabel(a)
    }

    /// Triangulated hexagon (disc with six marked points), three diagonals
    /// 1, 2, 3 from one vertex, boundary segments -1..-6.
    pub(crate) fn hexagon() -> Triangulation {
        Triangulation::from_signed(3, 6, &[[-1, -2, 1], [1, -3, 2], [2, -4, 3], [3, -5, -6]]).unwrap()
    }

    #[test]
    fn standard_counts() {
        for (g, s, n, f) in [(1, 1, 3, 2), (0, 4, 6, 4), (2, 4, 18, 12), (0, 3, 3, 2), (1, 2, 6, 4), (3, 1, 15, 10)] {
            let t = Triangulation::build_standard(g, s).unwrap();
            assert_eq!(t.arc_count(), n, "(g, s) = ({g}, {s})");
            assert_eq!(t.triangles().len(), f);
            assert_eq!(3 * t.triangles().len(), 2 * t.arc_count() as usize);
            let ty = t.surface_type();
            assert_eq!((ty.genus, ty.punctures, ty.boundary_components), (g, s, 0), "(g, s) = ({g}, {s})");
        }
        assert!(matches!(
            Triangulation::build_standard(0, 2),
            Err(TriangulationError::NoIdealTriangulation { .. })
        ));
        assert!(Triangulation::build_standard(1, 0).is_err());
    }

    #[test]
    fn flip_is_an_involution_on_the_torus() {
        let t = Triangulation::build_standard(1, 1).unwrap();
        for a in t.arcs() {
            let f = t.flip(a).unwrap();
            assert!(!f.labeled_equal(&t));
            assert!(f.flip(a).unwrap().labeled_equal(&t));
            assert_eq!(f.surface_type(), t.surface_type());
        }
    }

    #[test]
    fn self_folded_arc_is_rejected() {
        let t = Triangulation::new(
            3,
            0,
            vec![
                [Side::Arc(arc(1)), Side::Arc(arc(2)), Side::Arc(arc(2))],
                [Side::Arc(arc(1)), Side::Arc(arc(3)), Side::Arc(arc(3))],
            ],
        )
        .unwrap();
        assert_eq!(t.flip(arc(2)), Err(TriangulationError::FlipOnSelfFoldedArc(2)));
        assert_eq!(t.flip(arc(9)), Err(TriangulationError::UnknownArc(9)));
        assert!(t.flip(arc(1)).is_ok());
    }

    #[test]
    fn torus_epsilon_is_all_twos() {
        let t = Triangulation::build_standard(1, 1).unwrap();
        let e = t.epsilon();
        for a in t.arcs() {
            for b in t.arcs() {
                assert_eq!(e.get(a, b), -e.get(b, a));
                if a != b {
                    assert_eq!(e.get(a, b).abs(), 2);
                }
            }
        }
    }

    #[test]
    fn hexagon_predicates() {
        let t = hexagon();
        assert_eq!(t.surface_type(), SurfaceType { genus: 0, punctures: 0, boundary_components: 1, marked_points: 6 });
        assert!(t.pentagon_applicable(arc(1), arc(2)));
        assert!(!t.pentagon_applicable(arc(1), arc(1)));
        assert!(!t.pentagon_applicable(arc(1), arc(3)));
        assert!(!t.commuting_flips(arc(1), arc(2)));
        assert!(t.commuting_flips(arc(1), arc(3)));
        let e = t.epsilon();
        assert_eq!(e.get(arc(1), arc(3)), 0);
        // the pentagon word closes up with the two labels exchanged
        let mut s = t.clone();
        for a in [1, 2, 1, 2, 1] {
            s = s.flip(arc(a)).unwrap();
        }
        let swapped = t.apply_permutation(&LabelPermutation::transposition(1, 2)).unwrap();
        assert!(s.labeled_equal(&swapped));
    }

    #[test]
    fn permutation_relabels() {
        let t = Triangulation::build_standard(0, 4).unwrap();
        let p = LabelPermutation::transposition(1, 2);
        let q = t.apply_permutation(&p).unwrap();
        assert!(q.apply_permutation(&p.inverse()).unwrap().labeled_equal(&t));
        assert!(t.apply_permutation(&LabelPermutation::identity()).unwrap().labeled_equal(&t));
        assert_eq!(
            t.apply_permutation(&LabelPermutation::transposition(1, 40)),
            Err(TriangulationError::PermutationOutOfRange(40))
        );
    }

    #[test]
    fn loader_reports_first_violation() {
        let err = TriangulationFile::from_json(r#"{"arcs": 3, "triangles": [[1,2,3],[1,3,3]]}"#).unwrap_err();
        assert_eq!(err, TriangulationError::ArcOverused { triangle: 1, label: 3 });
        let err = TriangulationFile::from_json(r#"{"arcs": 3, "triangles": [[1,2,3],[1,3,7]]}"#).unwrap_err();
        assert_eq!(err, TriangulationError::LabelOutOfRange { triangle: 1, label: 7 });
        let ok = TriangulationFile::from_json(r#"{"arcs": 3, "triangles": [[1,2,3],[1,3,2]]}"#).unwrap();
        assert_eq!(TriangulationFile::from_json(&serde_json::to_string(&ok.to_file()).unwrap()).unwrap(), ok);
    }
}
