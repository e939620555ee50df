#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use ptolemy_core::twist::{DatasetFile, FixtureDataset};
use ptolemy_core::Triangulation;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn dataset_file(name: &str) -> DatasetFile {
    DatasetFile::read(fixture_path(name)).unwrap()
}

pub fn torus() -> FixtureDataset {
    FixtureDataset::read(fixture_path("two_holed_torus.json")).unwrap()
}

pub fn sphere() -> FixtureDataset {
    FixtureDataset::read(fixture_path("four_holed_sphere.json")).unwrap()
}

pub const FIXTURES: [&str; 2] = ["two_holed_torus.json", "four_holed_sphere.json"];

/// A triangulated pentagon: arcs 1 and 2 fan out from one corner.
pub fn pentagon() -> Arc<Triangulation> {
    Arc::new(Triangulation::from_signed(2, 5, &[[-1, -2, 1], [1, -3, 2], [2, -4, -5]]).unwrap())
}

/// A triangulated hexagon: arcs 1, 2, 3 fan out from one corner.
pub fn hexagon() -> Arc<Triangulation> {
    Arc::new(Triangulation::from_signed(3, 6, &[[-1, -2, 1], [1, -3, 2], [2, -4, 3], [3, -5, -6]]).unwrap())
}

/// Single-label mutants of a dataset: one flip label, one permutation label
/// or one triangle slot changed.
pub fn label_mutants(file: &DatasetFile) -> Vec<(String, DatasetFile)> {
    let n = file.triangulation.arcs;
    let next = |x: u32| x % n + 1;
    let mut out = Vec::new();
    for (ti, t) in file.twists.iter().enumerate() {
        if let Some(gi) = t.gens.iter().position(|g| g.starts_with('F')) {
            let x: u32 = t.gens[gi][1..].parse().unwrap();
            let mut m = file.clone();
            m.twists[ti].gens[gi] = format!("F{}", next(x));
            out.push((format!("{}: flip {} -> {}", t.name, x, next(x)), m));
        }
        if let Some(gi) = t.gens.iter().position(|g| g.starts_with('P')) {
            // relabel the first entry of the first cycle to a label absent from it
            let g = &t.gens[gi];
            let close = g.find(')').unwrap();
            let labels: Vec<u32> = g[2..close].split_whitespace().map(|s| s.parse().unwrap()).collect();
            let fresh = (1..=n).map(|k| next(labels[0] + k - 1)).find(|y| !labels.contains(y)).unwrap();
            let mut cycle = labels.clone();
            cycle[0] = fresh;
            let body: Vec<String> = cycle.iter().map(u32::to_string).collect();
            let mut m = file.clone();
            m.twists[ti].gens[gi] = format!("P({}{}", body.join(" "), &g[close..]);
            out.push((format!("{}: permutation label {} -> {}", t.name, labels[0], fresh), m));
        }
    }
    let tris = &file.triangulation.triangles;
    for i in 0..tris.len().min(4) {
        let j = (i + 1) % tris.len();
        let (a, b) = (tris[i][1], tris[j][2]);
        if a != b {
            let mut m = file.clone();
            m.triangulation.triangles[i][1] = b;
            m.triangulation.triangles[j][2] = a;
            out.push((format!("triangles {i}/{j}: labels {a} and {b} transposed"), m));
        }
    }
    out
}
