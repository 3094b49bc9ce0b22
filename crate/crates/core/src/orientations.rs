//! Edge orientations with prescribed out-degrees, face states and flips.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::embedding::{Dart, Face, SurfaceGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("invalid orientation literal: {0}")]
    BadLiteral(String),
    #[error("invalid out-degree spec: {0}")]
    BadSpec(String),
    #[error("orientations belong to different graphs ({0} vs {1} edges)")]
    MismatchedGraph(usize, usize),
    #[error("face {0} is not counterclockwise")]
    NotCounterclockwise(usize),
    #[error("no alpha-orientation exists")]
    NoAlphaOrientation,
    #[error("empty enumeration")]
    EmptyEnumeration,
}

/// Prescribed out-degree per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutDegreeSpec {
    alpha: Vec<usize>,
}

impl OutDegreeSpec {
    pub fn new(g: &SurfaceGraph, alpha: Vec<usize>) -> Result<Self, OrientationError> {
        if alpha.len() != g.vertex_count() {
            return Err(OrientationError::BadSpec(format!(
                "{} values for {} vertices",
                alpha.len(),
                g.vertex_count()
            )));
        }
        let total: usize = alpha.iter().sum();
        if total != g.edge_count() {
            return Err(OrientationError::BadSpec(format!(
                "out-degrees sum to {total}, graph has {} edges",
                g.edge_count()
            )));
        }
        if let Some(v) = (0..alpha.len()).find(|&v| alpha[v] > g.degree(v)) {
            return Err(OrientationError::BadSpec(format!(
                "alpha({v}) = {} exceeds degree {}",
                alpha[v],
                g.degree(v)
            )));
        }
        Ok(OutDegreeSpec { alpha })
    }

    /// Parse a comma-separated list such as `2,2,2,2`.
    pub fn parse(g: &SurfaceGraph, text: &str) -> Result<Self, OrientationError> {
        Self::new(
            g,
            parse_usize_list(text).map_err(OrientationError::BadSpec)?,
        )
    }

    /// The out-degrees realised by `d`.
    pub fn of(g: &SurfaceGraph, d: &Orientation) -> Self {
        OutDegreeSpec {
            alpha: d.out_degrees(g),
        }
    }

    pub fn values(&self) -> &[usize] {
        &self.alpha
    }
}

/// Comma-separated nonnegative integers. Empty input is the empty list.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| format!("{:?}: {e}", s.trim()))
        })
        .collect()
}

/// One direction per edge; `true` means tail to head as listed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    forward: Vec<bool>,
}

impl Orientation {
    pub fn from_bits(forward: Vec<bool>) -> Self {
        Orientation { forward }
    }

    /// Every edge directed as listed in the embedding.
    pub fn as_listed(m: usize) -> Self {
        Orientation {
            forward: vec![true; m],
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.forward
    }

    pub fn is_forward(&self, e: usize) -> bool {
        self.forward[e]
    }

    /// True when `d` points the same way as its edge does in this orientation.
    pub fn agrees(&self, d: Dart) -> bool {
        self.forward[d.edge()] == d.is_forward()
    }

    /// The dart of `e` pointing along this orientation.
    pub fn dart(&self, e: usize) -> Dart {
        if self.forward[e] {
            Dart::tail_of(e)
        } else {
            Dart::head_of(e)
        }
    }

    pub fn reversed(&self) -> Self {
        Orientation {
            forward: self.forward.iter().map(|b| !b).collect(),
        }
    }

    pub fn tail(&self, g: &SurfaceGraph, e: usize) -> usize {
        g.origin(self.dart(e))
    }

    pub fn out_degrees(&self, g: &SurfaceGraph) -> Vec<usize> {
        let mut out = vec![0; g.vertex_count()];
        for e in 0..self.len() {
            out[self.tail(g, e)] += 1;
        }
        out
    }

    pub fn is_alpha(&self, g: &SurfaceGraph, spec: &OutDegreeSpec) -> bool {
        self.len() == g.edge_count() && self.out_degrees(g) == spec.alpha
    }

    /// Checks the literal length against `g`.
    pub fn parse_for(g: &SurfaceGraph, text: &str) -> Result<Self, OrientationError> {
        let d: Orientation = text.parse()?;
        if d.len() != g.edge_count() {
            return Err(OrientationError::MismatchedGraph(d.len(), g.edge_count()));
        }
        Ok(d)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.forward {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Orientation {
    type Err = OrientationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let forward = s
            .trim()
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(OrientationError::BadLiteral(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Orientation { forward })
    }
}

/// An oriented subgraph: `Some(forward)` for present edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedSubgraph {
    pub edges: Vec<Option<bool>>,
}

impl OrientedSubgraph {
    pub fn support(&self) -> BTreeSet<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, d)| d.map(|_| e))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.iter().all(Option::is_none)
    }

    /// Out-degree minus in-degree at every vertex.
    pub fn imbalance(&self, g: &SurfaceGraph) -> Vec<i64> {
        let mut bal = vec![0i64; g.vertex_count()];
        for (e, dir) in self.edges.iter().enumerate() {
            if let Some(fwd) = *dir {
                let (t, h) = g.edge(e);
                let (from, to) = if fwd { (t, h) } else { (h, t) };
                bal[from] += 1;
                bal[to] -= 1;
            }
        }
        bal
    }

    pub fn is_even(&self, g: &SurfaceGraph) -> bool {
        self.imbalance(g).iter().all(|&b| b == 0)
    }
}

impl From<&Orientation> for OrientedSubgraph {
    fn from(d: &Orientation) -> Self {
        OrientedSubgraph {
            edges: d.forward.iter().map(|&b| Some(b)).collect(),
        }
    }
}

/// Boundary of a face traversed along its darts, i.e. counterclockwise.
pub fn face_circuit(g: &SurfaceGraph, f: &Face) -> OrientedSubgraph {
    let mut edges = vec![None; g.edge_count()];
    for d in &f.boundary {
        edges[d.edge()] = Some(d.is_forward());
    }
    OrientedSubgraph { edges }
}

/// Edges where `d1` and `d2` differ, directed as in `d1`.
pub fn difference(
    d1: &Orientation,
    d2: &Orientation,
) -> Result<OrientedSubgraph, OrientationError> {
    same_graph(d1, d2)?;
    Ok(OrientedSubgraph {
        edges: d1
            .forward
            .iter()
            .zip(&d2.forward)
            .map(|(&a, &b)| (a != b).then_some(a))
            .collect(),
    })
}

pub(crate) fn same_graph(d1: &Orientation, d2: &Orientation) -> Result<(), OrientationError> {
    if d1.len() == d2.len() {
        Ok(())
    } else {
        Err(OrientationError::MismatchedGraph(d1.len(), d2.len()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceState {
    Ccw,
    Cw,
    NotDirected,
}

impl fmt::Display for FaceState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceState::Ccw => "ccw",
            FaceState::Cw => "cw",
            FaceState::NotDirected => "-",
        })
    }
}

pub fn face_state(d: &Orientation, f: &Face) -> FaceState {
    if f.boundary.iter().all(|&x| d.agrees(x)) {
        FaceState::Ccw
    } else if f.boundary.iter().all(|&x| !d.agrees(x)) {
        FaceState::Cw
    } else {
        FaceState::NotDirected
    }
}

pub fn ccw_faces(g: &SurfaceGraph, d: &Orientation) -> Vec<usize> {
    faces_in_state(g, d, FaceState::Ccw)
}

pub fn cw_faces(g: &SurfaceGraph, d: &Orientation) -> Vec<usize> {
    faces_in_state(g, d, FaceState::Cw)
}

fn faces_in_state(g: &SurfaceGraph, d: &Orientation, state: FaceState) -> Vec<usize> {
    g.faces()
        .iter()
        .filter(|f| face_state(d, f) == state)
        .map(|f| f.id)
        .collect()
}

/// Reverse a counterclockwise face, making it clockwise.
pub fn flip(d: &Orientation, f: &Face) -> Result<Orientation, OrientationError> {
    if face_state(d, f) != FaceState::Ccw {
        return Err(OrientationError::NotCounterclockwise(f.id));
    }
    let mut out = d.clone();
    for x in &f.boundary {
        out.forward[x.edge()] = !out.forward[x.edge()];
    }
    Ok(out)
}

struct Search<'a> {
    g: &'a SurfaceGraph,
    alpha: &'a [usize],
    out: Vec<usize>,
    // undecided edges touching each vertex; a loop counts once
    open: Vec<usize>,
    bits: Vec<bool>,
    limit: Option<usize>,
    found: Vec<Orientation>,
}

impl Search<'_> {
    fn feasible(&self, v: usize) -> bool {
        self.out[v] <= self.alpha[v] && self.out[v] + self.open[v] >= self.alpha[v]
    }

    fn run(&mut self, e: usize) {
        if self.limit.is_some_and(|l| self.found.len() >= l) {
            return;
        }
        if e == self.g.edge_count() {
            self.found.push(Orientation::from_bits(self.bits.clone()));
            return;
        }
        let (t, h) = self.g.edge(e);
        self.open[t] -= 1;
        if h != t {
            self.open[h] -= 1;
        }
        // '0' sorts before '1'
        for fwd in [false, true] {
            let src = if fwd { t } else { h };
            self.out[src] += 1;
            self.bits[e] = fwd;
            if self.feasible(t) && self.feasible(h) {
                self.run(e + 1);
            }
            self.out[src] -= 1;
        }
        self.open[t] += 1;
        if h != t {
            self.open[h] += 1;
        }
    }
}

fn search(g: &SurfaceGraph, spec: &OutDegreeSpec, limit: Option<usize>) -> Vec<Orientation> {
    let mut open = vec![0; g.vertex_count()];
    for &(t, h) in g.edges() {
        open[t] += 1;
        if h != t {
            open[h] += 1;
        }
    }
    let mut s = Search {
        g,
        alpha: &spec.alpha,
        out: vec![0; g.vertex_count()],
        open,
        bits: vec![false; g.edge_count()],
        limit,
        found: Vec::new(),
    };
    if (0..g.vertex_count()).all(|v| s.feasible(v)) {
        s.run(0);
    }
    s.found
}

/// All alpha-orientations in lexicographic order of their bitstrings.
pub fn enumerate_alpha(g: &SurfaceGraph, spec: &OutDegreeSpec) -> Vec<Orientation> {
    search(g, spec, None)
}

pub fn first_alpha(g: &SurfaceGraph, spec: &OutDegreeSpec) -> Option<Orientation> {
    search(g, spec, Some(1)).pop()
}

pub fn is_strongly_connected(g: &SurfaceGraph, d: &Orientation) -> bool {
    let mut dg = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..g.vertex_count()).map(|_| dg.add_node(())).collect();
    for e in 0..g.edge_count() {
        let dart = d.dart(e);
        let (from, to) = (g.origin(dart), g.origin(dart.twin()));
        dg.add_edge(nodes[from], nodes[to], ());
    }
    tarjan_scc(&dg).len() == 1
}

/// Strong connectivity of one alpha-orientation implies it for all of them.
pub fn check_strongly_connected_alpha(
    g: &SurfaceGraph,
    spec: &OutDegreeSpec,
) -> Result<bool, OrientationError> {
    let d = first_alpha(g, spec).ok_or(OrientationError::NoAlphaOrientation)?;
    Ok(is_strongly_connected(g, &d))
}

/// Edges directed the same way in every listed orientation.
pub fn rigid_edges(orients: &[Orientation]) -> Result<BTreeSet<usize>, OrientationError> {
    let (first, rest) = orients
        .split_first()
        .ok_or(OrientationError::EmptyEnumeration)?;
    for d in rest {
        same_graph(first, d)?;
    }
    Ok((0..first.len())
        .filter(|&e| rest.iter().all(|d| d.forward[e] == first.forward[e]))
        .collect())
}
