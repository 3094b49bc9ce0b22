//! Replays the checked-in fuzz seeds through the same assertions the fuzz
//! targets make, so the corpus is exercised on stable.

use std::fs;
use std::path::PathBuf;

use surface_flips::cli::resolve_orientation;
use surface_flips::embedding::dual_graph;
use surface_flips::fixtures;
use surface_flips::orientations::{enumerate_alpha, parse_usize_list};
use surface_flips::{load_embedding, Orientation, OutDegreeSpec};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fuzz",
        "corpus",
        target,
    ]
    .iter()
    .collect();
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn embedding_seeds() {
    let mut accepted = Vec::new();
    for (name, text) in seeds("parse_embedding") {
        let Ok(g) = load_embedding(&text) else {
            continue;
        };
        let json = serde_json::to_string(&g.to_file()).unwrap();
        assert_eq!(load_embedding(&json).unwrap(), g, "{name}");
        assert!(dual_graph(&g).is_connected(), "{name}");
        assert!(g
            .faces()
            .iter()
            .all(|f| f.boundary.iter().all(|&d| g.face_of(d) == f.id)));
        accepted.push(name);
    }
    assert_eq!(
        accepted,
        ["cube.json", "digon.json", "loop.json", "torus_2x2.json"]
    );
}

#[test]
fn orientation_seeds() {
    let g = fixtures::torus_2x2();
    let spec = OutDegreeSpec::parse(&g, "2,2,2,2").unwrap();
    let orients = enumerate_alpha(&g, &spec);
    let mut resolved = Vec::new();
    for (name, text) in seeds("parse_orientation") {
        if let Ok(d) = text.parse::<Orientation>() {
            assert_eq!(d.to_string().parse::<Orientation>().unwrap(), d);
        }
        if let Ok(d) = resolve_orientation(&g, &spec, &orients, &text) {
            assert!(d.is_alpha(&g, &spec));
            resolved.push(name);
        }
    }
    assert_eq!(resolved, ["d13", "id13"]);
}

#[test]
fn out_degree_seeds() {
    let g = fixtures::torus_2x2();
    let mut accepted = Vec::new();
    for (name, text) in seeds("parse_out_degrees") {
        let _ = parse_usize_list(&text);
        if let Ok(spec) = OutDegreeSpec::parse(&g, &text) {
            assert_eq!(spec.values().iter().sum::<usize>(), g.edge_count());
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["infeasible", "spaces", "torus"]);
}
