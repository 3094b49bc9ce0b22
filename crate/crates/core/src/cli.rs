//! Command-line front end.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::embedding::{dual_graph, load_embedding, EmbeddingError, SurfaceGraph};
use crate::flipgraph::{build_flip_graph, component_reports, to_dot};
use crate::homology::{homology_classes, HomologyError};
use crate::orientations::{
    check_strongly_connected_alpha, enumerate_alpha, rigid_edges, Orientation, OrientationError,
    OutDegreeSpec,
};
use crate::potential::{distance_report, PotentialError, Unreachable};
use crate::verify::run_checks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Faces,
    Genus,
    Enumerate,
    Classes,
    Rigid,
    Distance,
    Flipgraph,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

/// Alpha-orientations on surface-embedded graphs.
#[derive(Debug, Clone, Parser)]
#[command(name = "surface-flips", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Embedding file (JSON rotation system).
    #[arg(long = "embedding", value_name = "PATH")]
    pub embedding_path: PathBuf,
    /// Out-degree per vertex, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub alpha: Option<Vec<usize>>,
    /// Face ids that may not be flipped, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub forbidden: Vec<usize>,
    /// Start orientation: a bitstring or `#id` into the enumeration.
    #[arg(long)]
    pub from: Option<String>,
    /// Target orientation: a bitstring or `#id` into the enumeration.
    #[arg(long)]
    pub to: Option<String>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also print a shortest flip sequence (distance only).
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2 for malformed configuration, 1 for inputs that fail validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Write(_) => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Run one command, writing to `cfg.output` if set and to `out` otherwise.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = String::new();
    let outcome = execute(cfg, &mut text);
    // verify still prints its table when checks fail
    if outcome.is_ok() || matches!(outcome, Err(CliError::ChecksFailed { .. })) {
        match &cfg.output {
            Some(path) => std::fs::write(path, &text)?,
            None => out.write_all(text.as_bytes())?,
        }
    }
    outcome
}

struct Session {
    graph: SurfaceGraph,
    format: Format,
}

fn require_alpha(cfg: &RunConfig, g: &SurfaceGraph) -> Result<OutDegreeSpec, CliError> {
    let alpha = cfg
        .alpha
        .clone()
        .ok_or_else(|| usage(format!("{:?} needs --alpha", cfg.command).to_lowercase()))?;
    Ok(OutDegreeSpec::new(g, alpha)?)
}

fn forbidden_set(cfg: &RunConfig, g: &SurfaceGraph) -> Result<BTreeSet<usize>, CliError> {
    match cfg.forbidden.iter().find(|&&f| f >= g.face_count()) {
        Some(f) => Err(usage(format!(
            "face {f} does not exist ({} faces)",
            g.face_count()
        ))),
        None => Ok(cfg.forbidden.iter().copied().collect()),
    }
}

/// Resolve `#id` or a bitstring to an alpha-orientation.
pub fn resolve_orientation(
    g: &SurfaceGraph,
    spec: &OutDegreeSpec,
    orients: &[Orientation],
    text: &str,
) -> Result<Orientation, CliError> {
    if let Some(id) = text.strip_prefix('#') {
        let id: usize = id
            .parse()
            .map_err(|_| usage(format!("bad orientation id {text:?}")))?;
        return orients.get(id).cloned().ok_or_else(|| {
            usage(format!(
                "orientation id {id} out of range ({} orientations)",
                orients.len()
            ))
        });
    }
    let d = Orientation::parse_for(g, text).map_err(|e| usage(e.to_string()))?;
    if !d.is_alpha(g, spec) {
        return Err(OrientationError::BadSpec(format!(
            "{text} does not have the requested out-degrees"
        ))
        .into());
    }
    Ok(d)
}

fn push_json<T: Serialize>(text: &mut String, value: &T) {
    text.push_str(&serde_json::to_string_pretty(value).expect("serializable"));
    text.push('\n');
}

fn execute(cfg: &RunConfig, text: &mut String) -> Result<(), CliError> {
    let raw = std::fs::read_to_string(&cfg.embedding_path).map_err(|source| CliError::Read {
        path: cfg.embedding_path.clone(),
        source,
    })?;
    let default = if cfg.command == Command::Flipgraph {
        Format::Dot
    } else {
        Format::Text
    };
    let format = cfg.format.unwrap_or(default);
    if format == Format::Dot && cfg.command != Command::Flipgraph {
        return Err(usage("dot output is only available for flipgraph"));
    }
    if cfg.witness && cfg.command != Command::Distance {
        return Err(usage("--witness only applies to distance"));
    }
    let graph = load_embedding(&raw)?;
    let forbidden = forbidden_set(cfg, &graph)?;
    let s = Session { graph, format };

    match cfg.command {
        Command::Validate => validate(&s, text),
        Command::Faces => faces(&s, text),
        Command::Genus => {
            match s.format {
                Format::Json => push_json(text, &json!({ "genus": s.graph.genus() })),
                _ => writeln!(text, "{}", s.graph.genus()).unwrap(),
            }
            Ok(())
        }
        Command::Enumerate => {
            let spec = require_alpha(cfg, &s.graph)?;
            let orients = enumerate_alpha(&s.graph, &spec);
            match s.format {
                Format::Json => {
                    let rows: Vec<_> = orients
                        .iter()
                        .enumerate()
                        .map(|(id, d)| json!({ "id": id, "orientation": d.to_string() }))
                        .collect();
                    push_json(text, &rows);
                }
                _ => {
                    for (id, d) in orients.iter().enumerate() {
                        writeln!(text, "{id} {d}").unwrap();
                    }
                }
            }
            Ok(())
        }
        Command::Classes => {
            let spec = require_alpha(cfg, &s.graph)?;
            let orients = enumerate_alpha(&s.graph, &spec);
            let classes = homology_classes(&s.graph, &orients)?;
            match s.format {
                Format::Json => push_json(text, &classes),
                _ => {
                    for class in &classes {
                        writeln!(text, "{}", join(class)).unwrap();
                    }
                }
            }
            Ok(())
        }
        Command::Rigid => {
            let spec = require_alpha(cfg, &s.graph)?;
            let orients = enumerate_alpha(&s.graph, &spec);
            let rigid = rigid_edges(&orients)?;
            match s.format {
                Format::Json => push_json(text, &rigid),
                _ => writeln!(text, "{}", join(&rigid)).unwrap(),
            }
            Ok(())
        }
        Command::Distance => distance(cfg, &s, &forbidden, text),
        Command::Flipgraph => flipgraph(cfg, &s, &forbidden, text),
        Command::Verify => {
            let spec = require_alpha(cfg, &s.graph)?;
            let checks = run_checks(&s.graph, &spec);
            match s.format {
                Format::Json => push_json(text, &checks),
                _ => {
                    for c in &checks {
                        let tag = if c.passed { "PASS" } else { "FAIL" };
                        writeln!(text, "{tag} {}: {}", c.name, c.detail).unwrap();
                    }
                }
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn join<'a, I: IntoIterator<Item = &'a usize>>(items: I) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn validate(s: &Session, text: &mut String) -> Result<(), CliError> {
    let g = &s.graph;
    let dual = dual_graph(g);
    let two_faces = (0..g.edge_count()).all(|e| {
        let (a, b) = g.edge_faces(e);
        a != b
    });
    match s.format {
        Format::Json => push_json(
            text,
            &json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "faces": g.face_count(),
                "genus": g.genus(),
                "dual_connected": dual.is_connected(),
                "two_faces_per_edge": two_faces,
            }),
        ),
        _ => {
            writeln!(text, "vertices {}", g.vertex_count()).unwrap();
            writeln!(text, "edges {}", g.edge_count()).unwrap();
            writeln!(text, "faces {}", g.face_count()).unwrap();
            writeln!(text, "genus {}", g.genus()).unwrap();
            writeln!(text, "dual connected {}", dual.is_connected()).unwrap();
            writeln!(text, "two faces per edge {two_faces}").unwrap();
        }
    }
    Ok(())
}

fn faces(s: &Session, text: &mut String) -> Result<(), CliError> {
    let g = &s.graph;
    match s.format {
        Format::Json => {
            let rows: Vec<_> = g
                .faces()
                .iter()
                .map(|f| {
                    json!({
                        "id": f.id,
                        "darts": f.boundary.iter().map(|d| d.0).collect::<Vec<_>>(),
                        "edges": f.edges().collect::<Vec<_>>(),
                    })
                })
                .collect();
            push_json(text, &rows);
        }
        _ => {
            for f in g.faces() {
                let darts: Vec<usize> = f.boundary.iter().map(|d| d.0).collect();
                writeln!(text, "{}: {}", f.id, join(&darts)).unwrap();
            }
        }
    }
    Ok(())
}

fn distance(
    cfg: &RunConfig,
    s: &Session,
    forbidden: &BTreeSet<usize>,
    text: &mut String,
) -> Result<(), CliError> {
    let g = &s.graph;
    let spec = require_alpha(cfg, g)?;
    let (from, to) = match (&cfg.from, &cfg.to) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(usage("distance needs --from and --to")),
    };
    let orients = enumerate_alpha(g, &spec);
    let from = resolve_orientation(g, &spec, &orients, from)?;
    let to = resolve_orientation(g, &spec, &orients, to)?;
    let report = distance_report(g, &from, &to, forbidden, cfg.witness)?;
    let strong = check_strongly_connected_alpha(g, &spec)?;
    if !strong {
        eprintln!("warning: alpha-orientations are not strongly connected");
    }

    if s.format == Format::Json {
        push_json(
            text,
            &json!({
                "from": from.to_string(),
                "to": to.to_string(),
                "alpha_strongly_connected": strong,
                "report": report,
            }),
        );
        return Ok(());
    }
    match &report.potential {
        Some(p) => {
            writeln!(text, "face z z-z_min").unwrap();
            for (f, z) in p.z.iter().enumerate() {
                let mark = if forbidden.contains(&f) {
                    " forbidden"
                } else {
                    ""
                };
                writeln!(text, "{f} {z} {}{mark}", z - p.z_min).unwrap();
            }
            writeln!(text, "z_min {}", p.z_min).unwrap();
            writeln!(text, "argmin {}", join(&p.argmin)).unwrap();
        }
        None => writeln!(text, "not homologous").unwrap(),
    }
    if !report.violations.is_empty() {
        writeln!(text, "violations {}", join(&report.violations)).unwrap();
    }
    match (&report.distance, &report.unreachable) {
        (Some(d), _) => writeln!(text, "distance {d}").unwrap(),
        (None, Some(Unreachable::NotHomologous)) => {
            writeln!(text, "distance unreachable (not homologous)").unwrap()
        }
        (None, _) => writeln!(text, "distance unreachable (forbidden face above minimum)").unwrap(),
    }
    if let Some(w) = &report.witness {
        writeln!(text, "witness {}", join(w)).unwrap();
    }
    Ok(())
}

fn flipgraph(
    cfg: &RunConfig,
    s: &Session,
    forbidden: &BTreeSet<usize>,
    text: &mut String,
) -> Result<(), CliError> {
    let g = &s.graph;
    let spec = require_alpha(cfg, g)?;
    let orients = enumerate_alpha(g, &spec);
    let classes = homology_classes(g, &orients)?;
    let fg = build_flip_graph(g, &orients, forbidden);
    match s.format {
        Format::Dot => text.push_str(&to_dot(&fg, &classes)),
        Format::Text => {
            for a in fg.arcs() {
                writeln!(text, "{} {} {}", a.from, a.to, a.color).unwrap();
            }
        }
        Format::Json => {
            let nodes: Vec<_> = orients
                .iter()
                .enumerate()
                .map(|(id, d)| json!({ "id": id, "orientation": d.to_string() }))
                .collect();
            let arcs: Vec<_> = fg
                .arcs()
                .iter()
                .map(|a| json!({ "from": a.from, "to": a.to, "color": a.color }))
                .collect();
            push_json(
                text,
                &json!({
                    "forbidden": forbidden,
                    "nodes": nodes,
                    "arcs": arcs,
                    "classes": classes,
                    "components": component_reports(g, &orients, &fg, &classes),
                }),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn config(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("surface-flips").chain(args.iter().copied()))
            .unwrap()
    }

    fn torus_path() -> String {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/torus_2x2.json").to_string()
    }

    fn output(args: &[&str]) -> (Result<(), CliError>, String) {
        let cfg = config(args);
        let mut buf = Vec::new();
        let r = run(&cfg, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn enumerate_lists_ids() {
        let p = torus_path();
        let (r, out) = output(&["enumerate", "--embedding", &p, "--alpha", "2,2,2,2"]);
        r.unwrap();
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 18);
        assert_eq!(lines[0], "0 00000000");
    }

    #[test]
    fn distance_by_id_and_bitstring_agree() {
        let p = torus_path();
        let (_, by_id) = output(&[
            "distance",
            "--embedding",
            &p,
            "--alpha",
            "2,2,2,2",
            "--from",
            "#13",
            "--to",
            "#4",
        ]);
        let (_, by_bits) = output(&[
            "distance",
            "--embedding",
            &p,
            "--alpha",
            "2,2,2,2",
            "--from",
            "11000011",
            "--to",
            "00111100",
        ]);
        assert_eq!(by_id, by_bits);
        assert!(by_id.contains("distance 2\n"));
    }

    #[test]
    fn exit_codes() {
        let p = torus_path();
        let (r, _) = output(&[
            "distance",
            "--embedding",
            &p,
            "--alpha",
            "2,2,2,2",
            "--from",
            "#0",
        ]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, _) = output(&["enumerate", "--embedding", &p, "--alpha", "2,2,2,1"]);
        assert_eq!(r.unwrap_err().exit_code(), 1);
        let (r, _) = output(&["faces", "--embedding", &p, "--forbidden", "4"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, _) = output(&[
            "distance",
            "--embedding",
            &p,
            "--alpha",
            "2,2,2,2",
            "--from",
            "11110000",
            "--to",
            "#0",
        ]);
        assert_eq!(r.unwrap_err().exit_code(), 1);
    }

    #[test]
    fn resolve_rejects_wrong_length() {
        let g = fixtures::torus_2x2();
        let spec = OutDegreeSpec::parse(&g, "2,2,2,2").unwrap();
        let orients = enumerate_alpha(&g, &spec);
        assert!(matches!(
            resolve_orientation(&g, &spec, &orients, "0101"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            resolve_orientation(&g, &spec, &orients, "#18"),
            Err(CliError::Usage(_))
        ));
        assert_eq!(
            resolve_orientation(&g, &spec, &orients, "#13").unwrap(),
            fixtures::torus_named(13)
        );
    }
}
