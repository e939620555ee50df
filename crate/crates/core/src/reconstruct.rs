//! Recovering labeled triangulations from the words that act on them.
//!
//! Given flip words without a source, the search looks for labeled
//! triangulations on which every word is applicable and closes up. Unlabeled
//! shapes of the surface are enumerated by a breadth-first walk of the flip
//! graph modulo relabeling. On each shape, labels are assigned lazily while
//! the words are simulated: a flip on a label that has no edge yet branches
//! over the flippable free edges, and closing a word fixes an isomorphism of
//! the surface that forces further labels.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::permutation::LabelPermutation;
use crate::triangulation::{ArcLabel, Side, Triangulation, TriangulationError};
use crate::word::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("word uses label {label}, surface has {arcs} arcs")]
    LabelOutOfRange { label: u32, arcs: u32 },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// The surface to search on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Closed genus `genus` surface with `punctures` punctures.
    Punctured { genus: u32, punctures: u32 },
    /// Genus `genus` surface with `holes` boundary circles, one marked point
    /// on each.
    Bordered { genus: u32, holes: u32 },
}

impl Topology {
    pub fn base(self) -> Result<Triangulation, TriangulationError> {
        match self {
            Topology::Punctured { genus, punctures } => Triangulation::build_standard(genus, punctures),
            Topology::Bordered { genus, holes } => build_bordered(genus, holes),
        }
    }
}

/// Some triangulation of the genus `genus` surface with `holes` boundary
/// circles carrying one marked point each. Starts from the punctured surface
/// and, at every puncture, doubles one incident arc into a digon holding a
/// triangle whose third side is the new boundary loop.
pub fn build_bordered(genus: u32, holes: u32) -> Result<Triangulation, TriangulationError> {
    let mut t = Triangulation::build_standard(genus, holes)?;
    for _ in 0..holes {
        t = open_one_puncture(&t).ok_or(TriangulationError::NoIdealTriangulation { genus, punctures: holes })?;
    }
    Ok(t)
}

fn open_one_puncture(t: &Triangulation) -> Option<Triangulation> {
    let before = t.surface_type();
    let n = t.arc_count();
    let b = t.boundary_count() + 1;
    for a in t.arcs() {
        let [_, s2] = t.slots_of(a).ok()?;
        for rotated in [false, true] {
            let mut tris = t.triangles().to_vec();
            let fresh = Side::Arc(ArcLabel(n + 1));
            tris[s2.triangle][s2.index] = fresh;
            tris.push(if rotated {
                [Side::Boundary(b), fresh, Side::Arc(a)]
            } else {
                [Side::Boundary(b), Side::Arc(a), fresh]
            });
            let Ok(out) = Triangulation::new(n + 1, b, tris) else {
                continue;
            };
            let after = out.surface_type();
            if after.genus == before.genus
                && after.punctures + 1 == before.punctures
                && after.boundary_components == before.boundary_components + 1
                && after.marked_points == before.marked_points + 1
            {
                return Some(out);
            }
        }
    }
    None
}

/// Canonical code of the unlabeled oriented map: minimum over root darts of
/// the breadth-first encoding. Boundary segments are anonymous.
pub fn shape_code(t: &Triangulation) -> Vec<u32> {
    let f = t.triangles().len();
    (0..f)
        .flat_map(|tri| (0..3).map(move |k| (tri, k)))
        .map(|(tri, k)| rooted_code(t, tri, k))
        .min()
        .unwrap_or_default()
}

fn rooted_code(t: &Triangulation, root: usize, rot: usize) -> Vec<u32> {
    let tris = t.triangles();
    let f = tris.len();
    let mut order = vec![usize::MAX; f];
    let mut rotation = vec![0usize; f];
    let mut queue = VecDeque::from([root]);
    order[root] = 0;
    rotation[root] = rot;
    let mut found = 1;
    let mut code = Vec::with_capacity(6 * f);
    while let Some(tri) = queue.pop_front() {
        for i in 0..3 {
            let k = (rotation[tri] + i) % 3;
            match tris[tri][k] {
                Side::Boundary(_) => code.extend([u32::MAX, 0]),
                Side::Arc(a) => {
                    let slots = t.slots_of(a).expect("valid arc");
                    let other = if slots[0].triangle == tri && slots[0].index == k { slots[1] } else { slots[0] };
                    if order[other.triangle] == usize::MAX {
                        order[other.triangle] = found;
                        rotation[other.triangle] = other.index;
                        found += 1;
                        queue.push_back(other.triangle);
                    }
                    let rel = (other.index + 3 - rotation[other.triangle]) % 3;
                    code.extend([order[other.triangle] as u32, rel as u32]);
                }
            }
        }
    }
    code
}

/// All triangulations of the surface of `base` up to orientation-preserving
/// relabeling, found by walking the flip graph. Stops after `limit` shapes.
pub fn enumerate_shapes(base: &Triangulation, limit: usize) -> Vec<Triangulation> {
    let mut seen = HashSet::from([shape_code(base)]);
    let mut out = vec![base.clone()];
    let mut queue = VecDeque::from([base.clone()]);
    while let Some(t) = queue.pop_front() {
        for a in t.arcs() {
            let Ok(next) = t.flip(a) else { continue };
            if seen.insert(shape_code(&next)) {
                if out.len() >= limit {
                    return out;
                }
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Orientation-preserving isomorphisms `a -> b` that fix every boundary
/// segment, as maps on arc labels (`map[x - 1]` is the image of arc `x`).
pub fn isomorphisms(a: &Triangulation, b: &Triangulation) -> Vec<Vec<u32>> {
    if a.arc_count() != b.arc_count() || a.triangles().len() != b.triangles().len() {
        return Vec::new();
    }
    // a boundary segment pins the root; otherwise try every dart of `b`
    let pinned = a.triangles().iter().enumerate().find_map(|(t, tri)| {
        tri.iter().position(|s| matches!(s, Side::Boundary(_))).map(|k| (t, k, tri[k]))
    });
    let targets: Vec<(usize, usize)> = match pinned {
        Some((_, _, side)) => b
            .triangles()
            .iter()
            .enumerate()
            .filter_map(|(t, tri)| tri.iter().position(|s| *s == side).map(|k| (t, k)))
            .collect(),
        None => (0..b.triangles().len()).flat_map(|t| (0..3).map(move |k| (t, k))).collect(),
    };
    let (rt, rk) = pinned.map_or((0, 0), |(t, k, _)| (t, k));
    targets.into_iter().filter_map(|(t, k)| extend_isomorphism(a, b, rt, rk, t, k)).collect()
}

fn extend_isomorphism(a: &Triangulation, b: &Triangulation, at: usize, ak: usize, bt: usize, bk: usize) -> Option<Vec<u32>> {
    let f = a.triangles().len();
    let mut tmap = vec![usize::MAX; f];
    let mut shift = vec![0usize; f];
    let mut used = vec![false; f];
    let mut emap = vec![0u32; a.arc_count() as usize];
    let mut eused = vec![false; a.arc_count() as usize];
    tmap[at] = bt;
    shift[at] = (bk + 3 - ak) % 3;
    used[bt] = true;
    let mut queue = VecDeque::from([at]);
    while let Some(t) = queue.pop_front() {
        let (u, s) = (tmap[t], shift[t]);
        for i in 0..3 {
            let j = (i + s) % 3;
            match (a.triangles()[t][i], b.triangles()[u][j]) {
                (Side::Boundary(x), Side::Boundary(y)) if x == y => {}
                (Side::Arc(x), Side::Arc(y)) => {
                    let slot = x.0 as usize - 1;
                    if emap[slot] == 0 {
                        if eused[y.0 as usize - 1] {
                            return None;
                        }
                        emap[slot] = y.0;
                        eused[y.0 as usize - 1] = true;
                    } else if emap[slot] != y.0 {
                        return None;
                    }
                    let sa = a.slots_of(x).ok()?;
                    let sb = b.slots_of(y).ok()?;
                    let oa = if sa[0].triangle == t && sa[0].index == i { sa[1] } else { sa[0] };
                    let ob = if sb[0].triangle == u && sb[0].index == j { sb[1] } else { sb[0] };
                    let want = (ob.index + 3 - oa.index) % 3;
                    if tmap[oa.triangle] == usize::MAX {
                        if used[ob.triangle] {
                            return None;
                        }
                        tmap[oa.triangle] = ob.triangle;
                        shift[oa.triangle] = want;
                        used[ob.triangle] = true;
                        queue.push_back(oa.triangle);
                    } else if tmap[oa.triangle] != ob.triangle || shift[oa.triangle] != want {
                        return None;
                    }
                }
                _ => return None,
            }
        }
    }
    if tmap.contains(&usize::MAX) {
        return None;
    }
    Some(emap)
}

/// A closed word: label `y` sits on edge `λ(y)` before and on `λ(P⁻¹ y)`
/// after, and the edge map `iso` must carry one to the other.
#[derive(Clone)]
struct Closure {
    perm: LabelPermutation,
    iso: Vec<u32>,
}

#[derive(Clone)]
struct Labeling {
    /// `edge[x - 1]`: edge of the shape carrying label `x`, 0 when free.
    edge: Vec<u32>,
    /// `label[e - 1]`: label carried by edge `e`, 0 when free.
    label: Vec<u32>,
}

impl Labeling {
    fn new(n: usize) -> Self {
        Self { edge: vec![0; n], label: vec![0; n] }
    }

    fn assign(&mut self, x: u32, e: u32) -> bool {
        let (xi, ei) = (x as usize - 1, e as usize - 1);
        match (self.edge[xi], self.label[ei]) {
            (0, 0) => {
                self.edge[xi] = e;
                self.label[ei] = x;
                true
            }
            (f, _) if f == e => true,
            _ => false,
        }
    }

    /// Closes the labeling under all closure constraints.
    fn propagate(&mut self, closures: &[Closure]) -> bool {
        loop {
            let mut changed = false;
            for c in closures {
                for y in 1..=self.edge.len() as u32 {
                    let before = self.edge[y as usize - 1];
                    let pre = c.perm.inverse().apply(y);
                    let after = self.edge[pre as usize - 1];
                    if before != 0 {
                        let img = c.iso[before as usize - 1];
                        if after == 0 {
                            if !self.assign(pre, img) {
                                return false;
                            }
                            changed = true;
                        } else if after != img {
                            return false;
                        }
                    } else if after != 0 {
                        let src = c.iso.iter().position(|&e| e == after).expect("bijection") as u32 + 1;
                        if !self.assign(y, src) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

struct Search<'a> {
    shape: &'a Triangulation,
    words: &'a [Vec<Generator>],
    budget: u64,
    nodes: u64,
    found: Vec<Vec<u32>>,
    max_candidates: usize,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), ReconstructError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(ReconstructError::BudgetExhausted(self.budget))
        } else {
            Ok(())
        }
    }

    fn word(&mut self, w: usize, lab: Labeling, closures: Vec<Closure>) -> Result<(), ReconstructError> {
        if self.found.len() >= self.max_candidates {
            return Ok(());
        }
        if w == self.words.len() {
            return self.complete(lab, &closures);
        }
        self.step(w, 0, self.shape.clone(), LabelPermutation::identity(), lab, closures)
    }

    fn step(
        &mut self,
        w: usize,
        i: usize,
        state: Triangulation,
        acc: LabelPermutation,
        lab: Labeling,
        closures: Vec<Closure>,
    ) -> Result<(), ReconstructError> {
        self.tick()?;
        let word = &self.words[w];
        if i == word.len() {
            for iso in isomorphisms(self.shape, &state) {
                let mut next = closures.clone();
                next.push(Closure { perm: acc.clone(), iso });
                let mut l = lab.clone();
                if l.propagate(&next) {
                    self.word(w + 1, l, next)?;
                }
            }
            return Ok(());
        }
        match &word[i] {
            Generator::Perm(p) => {
                let acc = acc.then(p);
                self.step(w, i + 1, state, acc, lab, closures)
            }
            Generator::Flip(y) => {
                // the label now called y started out as acc⁻¹(y)
                let x = acc.inverse().apply(y.0);
                let e = lab.edge[x as usize - 1];
                if e != 0 {
                    return match state.flip(ArcLabel(e)) {
                        Ok(next) => self.step(w, i + 1, next, acc, lab, closures),
                        Err(_) => Ok(()),
                    };
                }
                let free: Vec<u32> = (1..=state.arc_count())
                    .filter(|&e| lab.label[e as usize - 1] == 0 && state.is_flippable(ArcLabel(e)))
                    .collect();
                for e in free {
                    let mut l = lab.clone();
                    l.assign(x, e);
                    if !l.propagate(&closures) {
                        continue;
                    }
                    let next = state.flip(ArcLabel(e)).expect("flippable");
                    self.step(w, i + 1, next, acc.clone(), l, closures.clone())?;
                }
                Ok(())
            }
        }
    }

    /// Assigns the labels no word touched, in every consistent way.
    fn complete(&mut self, lab: Labeling, closures: &[Closure]) -> Result<(), ReconstructError> {
        self.tick()?;
        if self.found.len() >= self.max_candidates {
            return Ok(());
        }
        let Some(x) = lab.edge.iter().position(|&e| e == 0) else {
            self.found.push(lab.label.clone());
            return Ok(());
        };
        for e in 1..=lab.label.len() as u32 {
            if lab.label[e as usize - 1] != 0 {
                continue;
            }
            let mut l = lab.clone();
            l.assign(x as u32 + 1, e);
            if l.propagate(closures) {
                self.complete(l, closures)?;
            }
        }
        Ok(())
    }
}

/// Options for [`reconstruct_triangulation`].
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// Node budget per shape.
    pub budget: u64,
    pub max_shapes: usize,
    pub max_candidates: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { budget: 5_000_000, max_shapes: 100_000, max_candidates: 64 }
    }
}

/// Labeled triangulations of `topology` on which every word applies and
/// closes up, deduplicated and sorted by their triangle lists.
pub fn reconstruct_triangulation(
    words: &[Vec<Generator>],
    topology: Topology,
    limits: SearchLimits,
) -> Result<Vec<Triangulation>, ReconstructError> {
    let base = topology.base()?;
    let n = base.arc_count();
    for g in words.iter().flatten() {
        let labels: Vec<u32> = match g {
            Generator::Flip(a) => vec![a.0],
            Generator::Perm(p) => p.support().collect(),
        };
        if let Some(&label) = labels.iter().find(|&&l| l > n) {
            return Err(ReconstructError::LabelOutOfRange { label, arcs: n });
        }
    }
    // short words close first and constrain the long ones
    let mut ordered: Vec<Vec<Generator>> = words.to_vec();
    ordered.sort_by_key(|w| w.iter().filter_map(Generator::as_flip).collect::<BTreeSet<_>>().len());

    let shapes = enumerate_shapes(&base, limits.max_shapes);
    let results: Vec<Result<Vec<Triangulation>, ReconstructError>> = shapes
        .par_iter()
        .map(|shape| {
            let mut s = Search {
                shape,
                words: &ordered,
                budget: limits.budget,
                nodes: 0,
                found: Vec::new(),
                max_candidates: limits.max_candidates,
            };
            s.word(0, Labeling::new(n as usize), Vec::new())?;
            s.found
                .into_iter()
                .map(|labels| {
                    let relabel = LabelPermutation::from_two_row(&(1..=n).collect::<Vec<_>>(), &labels)
                        .expect("complete labeling is a bijection");
                    Ok(shape.apply_permutation(&relabel)?)
                })
                .collect()
        })
        .collect();
    let mut out: Vec<Triangulation> = Vec::new();
    for r in results {
        for t in r? {
            if !out.iter().any(|u| u.labeled_equal(&t)) {
                out.push(t);
            }
        }
    }
    out.sort_by_key(Triangulation::canonical_form);
    out.truncate(limits.max_candidates);
    Ok(out)
}
