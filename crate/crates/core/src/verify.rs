//! The invariant suite behind the `verify` command.
//!
//! Each check recomputes a structural fact from scratch and reports it as a
//! named pass/fail line. Brute-force parts are skipped above fixed size limits.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::embedding::{dual_graph, SurfaceGraph};
use crate::flipgraph::{
    build_flip_graph, component_reports, restrict, sink_set, source_set, strong_edge_connectivity,
    verify_l_coloring, verify_u_coloring, FlipGraph,
};
use crate::homology::{
    face_vectors, homologous, homology_classes, signature, tree_cotree_basis, ChainVector,
};
use crate::orientations::{
    ccw_faces, check_strongly_connected_alpha, enumerate_alpha, flip, Orientation, OutDegreeSpec,
};
use crate::potential::flip_distance;

/// Largest edge count for the exhaustive enumeration cross-check.
pub const BRUTE_FORCE_EDGES: usize = 20;
/// Largest orientation count for all-pairs checks.
pub const PAIRWISE_LIMIT: usize = 400;
/// Up to this many faces every subset is tried as the forbidden set.
pub const ALL_SUBSETS_FACES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, failure: Option<String>, ok_detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure.unwrap_or_else(|| ok_detail.into()),
        }
    }
}

/// Forbidden sets the flip-graph checks iterate over, empty set first.
pub fn tested_forbidden_sets(face_count: usize) -> Vec<BTreeSet<usize>> {
    if face_count <= ALL_SUBSETS_FACES {
        (0u32..1 << face_count)
            .map(|mask| (0..face_count).filter(|&f| mask >> f & 1 == 1).collect())
            .collect()
    } else {
        let mut sets = vec![BTreeSet::new()];
        sets.extend((0..face_count).map(|f| BTreeSet::from([f])));
        for a in 0..face_count {
            for b in a + 1..face_count {
                sets.push(BTreeSet::from([a, b]));
            }
        }
        sets
    }
}

fn brute_force(g: &SurfaceGraph, spec: &OutDegreeSpec) -> Vec<Orientation> {
    let m = g.edge_count();
    (0u64..1 << m)
        .map(|mask| Orientation::from_bits((0..m).map(|e| mask >> (m - 1 - e) & 1 == 1).collect()))
        .filter(|d| d.is_alpha(g, spec))
        .collect()
}

fn first_failure<I: IntoIterator<Item = Option<String>>>(items: I) -> Option<String> {
    items.into_iter().flatten().next()
}

pub fn run_checks(g: &SurfaceGraph, spec: &OutDegreeSpec) -> Vec<Check> {
    let mut checks = Vec::new();
    let orients = enumerate_alpha(g, spec);
    let faces = g.face_count();
    let d0 = Orientation::as_listed(g.edge_count());

    let dual = dual_graph(g);
    let two_sided = (0..g.edge_count()).find(|&e| {
        let (a, b) = g.edge_faces(e);
        a == b
    });
    checks.push(Check::new(
        "embedding: two distinct faces per edge, connected dual",
        two_sided
            .map(|e| format!("edge {e} has one face on both sides"))
            .or_else(|| (!dual.is_connected()).then(|| "dual graph is disconnected".to_string())),
        format!("{} faces, genus {}", faces, g.genus()),
    ));

    checks.push(match check_strongly_connected_alpha(g, spec) {
        Ok(true) => Check::new("alpha is strongly connected", None, "yes"),
        Ok(false) => Check::new(
            "alpha is strongly connected",
            Some("an alpha-orientation is not strongly connected".into()),
            "",
        ),
        Err(e) => Check::new("alpha is strongly connected", Some(e.to_string()), ""),
    });

    if g.edge_count() <= BRUTE_FORCE_EDGES {
        let expected = brute_force(g, spec);
        checks.push(Check::new(
            "enumeration matches exhaustive filter",
            (expected != orients).then(|| {
                format!(
                    "{} enumerated, {} by exhaustive filter",
                    orients.len(),
                    expected.len()
                )
            }),
            format!("{} orientations", orients.len()),
        ));
    }

    let total = face_vectors(g, &d0)
        .iter()
        .fold(ChainVector::zero(g.edge_count()), |acc, f| &acc + f);
    checks.push(Check::new(
        "face vectors sum to zero",
        (!total.is_zero()).then(|| format!("sum is {:?}", total.0)),
        "ok",
    ));

    checks.push(Check::new(
        "flips preserve out-degrees",
        first_failure(orients.iter().flat_map(|d| {
            ccw_faces(g, d).into_iter().map(move |f| {
                let after = flip(d, g.face(f)).expect("ccw face");
                (after.out_degrees(g) != d.out_degrees(g))
                    .then(|| format!("flipping face {f} of {d}"))
            })
        })),
        "ok",
    ));

    if orients.is_empty() {
        return checks;
    }
    let classes = homology_classes(g, &orients).expect("enumerated orientations share alpha");

    if orients.len() <= PAIRWISE_LIMIT {
        let basis = tree_cotree_basis(g, &d0);
        let sigs: Vec<_> = orients
            .iter()
            .map(|d| signature(d, &orients[0], &basis).map(|s| s.mu))
            .collect();
        let failure = first_failure((0..orients.len()).flat_map(|i| {
            let sigs = &sigs;
            let orients = &orients;
            (0..orients.len()).map(move |j| {
                let (a, b) = match (&sigs[i], &sigs[j]) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => return Some(format!("signature of {i} or {j} failed")),
                };
                let labeled = homologous(g, &orients[i], &orients[j]).expect("same alpha");
                (labeled != (a == b)).then(|| format!("pair ({i}, {j}): labeling says {labeled}"))
            })
        }));
        checks.push(Check::new(
            "dual labeling agrees with linear-algebra signature",
            failure,
            format!("{} classes", classes.len()),
        ));
    }

    let full = build_flip_graph(g, &orients, &BTreeSet::new());
    let sets = tested_forbidden_sets(faces);
    let coloring = first_failure(sets.iter().map(|c| {
        let fg = restrict(&full, c);
        if let Err(v) = verify_u_coloring(&fg) {
            return Some(format!("U-coloring under {c:?}: {v:?}"));
        }
        verify_l_coloring(&fg)
            .err()
            .map(|v| format!("L-coloring under {c:?}: {v:?}"))
    }));
    checks.push(Check::new(
        "U- and L-colorings on every restriction",
        coloring,
        format!("{} forbidden sets", sets.len()),
    ));

    checks.push(Check::new(
        "restriction equals arc deletion",
        first_failure(sets.iter().map(|c| {
            (build_flip_graph(g, &orients, c).arc_set() != restrict(&full, c).arc_set())
                .then(|| format!("arc sets differ under {c:?}"))
        })),
        "ok",
    ));

    checks.push(Check::new(
        "classes strongly connected without forbidden faces",
        first_failure(classes.iter().map(|class| {
            let view = full.induced(class);
            (!view.is_strongly_connected())
                .then(|| format!("class {class:?} is not strongly connected"))
        })),
        "ok",
    ));

    checks.push(Check::new(
        "edge-connectivity one on nontrivial classes",
        first_failure(classes.iter().filter(|c| c.len() > 1).map(|class| {
            match strong_edge_connectivity(&full.induced(class)) {
                Ok(1) => None,
                Ok(k) => Some(format!("class {class:?} has edge-connectivity {k}")),
                Err(e) => Some(format!("class {class:?}: {e}")),
            }
        })),
        "ok",
    ));

    checks.push(Check::new(
        "forbidden faces: components are distributive lattices",
        first_failure(
            sets.iter()
                .filter(|c| !c.is_empty())
                .map(|c| lattice_structure_failure(g, &orients, &restrict(&full, c), &classes)),
        ),
        "ok",
    ));

    if orients.len() <= PAIRWISE_LIMIT {
        checks.push(Check::new(
            "distance formula matches BFS",
            first_failure(
                sets.iter()
                    .map(|c| distance_failure(g, &orients, &restrict(&full, c))),
            ),
            "ok",
        ));
    }
    checks
}

fn lattice_structure_failure(
    g: &SurfaceGraph,
    orients: &[Orientation],
    fg: &FlipGraph,
    classes: &[Vec<usize>],
) -> Option<String> {
    let c = fg.forbidden();
    for class in classes {
        let sinks = sink_set(g, orients, class, c);
        let sources = source_set(g, orients, class, c);
        if sinks.len() != sources.len() {
            return Some(format!(
                "class {class:?} under {c:?}: {} sinks vs {} sources",
                sinks.len(),
                sources.len()
            ));
        }
        let reports = component_reports(g, orients, fg, std::slice::from_ref(class));
        if reports.len() != sinks.len() {
            return Some(format!(
                "class {class:?} under {c:?}: {} components, {} orientations without free ccw faces",
                reports.len(),
                sinks.len()
            ));
        }
        for r in &reports {
            if !(r.acyclic && r.sink_in_o && r.source_in_ostar && r.lattice_certified) {
                return Some(format!("under {c:?}: {r:?}"));
            }
        }
    }
    None
}

fn distance_failure(g: &SurfaceGraph, orients: &[Orientation], fg: &FlipGraph) -> Option<String> {
    for (i, from) in orients.iter().enumerate() {
        let bfs = fg.bfs_distances(i);
        for (j, to) in orients.iter().enumerate() {
            let formula = flip_distance(g, from, to, fg.forbidden()).expect("valid faces");
            let expected = bfs[j].map(|d| d as u64);
            if formula.as_ref().ok().copied() != expected {
                return Some(format!(
                    "{i} -> {j} under {:?}: formula {formula:?}, BFS {expected:?}",
                    fg.forbidden()
                ));
            }
        }
    }
    None
}
