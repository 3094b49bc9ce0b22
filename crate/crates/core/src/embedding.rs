//! Rotation-system embeddings of graphs on orientable surfaces.
//!
//! A [`SurfaceGraph`] is built from a vertex count, a list of edges and, for
//! each vertex, the counterclockwise cyclic order of the darts (half-edges)
//! leaving it. Dart `2i` is edge `i` seen from its tail, dart `2i + 1` the same
//! edge seen from its head.
//!
//! Faces are traced with the face on the left of every dart, so each boundary
//! is a counterclockwise facial circuit. Only embeddings in which every edge
//! separates two distinct faces are accepted.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A half-edge. Even ids run along the listed edge direction, odd ids against it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dart(pub usize);

impl Dart {
    pub fn tail_of(edge: usize) -> Self {
        Dart(2 * edge)
    }

    pub fn head_of(edge: usize) -> Self {
        Dart(2 * edge + 1)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    /// True when the dart runs tail to head of its edge.
    pub fn is_forward(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn twin(self) -> Self {
        Dart(self.0 ^ 1)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: usize,
    /// Darts in traversal order, face on the left of each.
    pub boundary: Vec<Dart>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary.iter().map(|d| d.edge())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: usize,
    /// `links[e]` joins the faces on the two sides of primal edge `e`:
    /// first the face left of the tail dart, then the face left of the head dart.
    pub links: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn is_connected(&self) -> bool {
        if self.nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.links {
            adj[a].push(b);
            adj[b].push(a);
        }
        count_reached(&adj, 0) == self.nodes
    }

    pub fn degree(&self, node: usize) -> usize {
        self.links
            .iter()
            .map(|&(a, b)| usize::from(a == node) + usize::from(b == node))
            .sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("malformed embedding: {0}")]
    MalformedInput(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("inconsistent rotation system: {0}")]
    RotationInconsistent(String),
    #[error("edge {edge} has the same face on both sides")]
    EdgeOnOneFace { edge: usize },
    #[error("not an orientable 2-cell embedding: {0}")]
    NonOrientableOrBadEmbedding(String),
}

/// The on-disk embedding format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub rotations: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    rotations: Vec<Vec<Dart>>,
    faces: Vec<Face>,
    genus: usize,
    // (vertex, index in that vertex's rotation) per dart
    position: Vec<(usize, usize)>,
    face_of: Vec<usize>,
}

/// Parse and validate an embedding file.
pub fn load_embedding(text: &str) -> Result<SurfaceGraph, EmbeddingError> {
    let file: EmbeddingFile =
        serde_json::from_str(text).map_err(|e| EmbeddingError::MalformedInput(e.to_string()))?;
    SurfaceGraph::from_file(&file)
}

impl SurfaceGraph {
    pub fn from_file(file: &EmbeddingFile) -> Result<Self, EmbeddingError> {
        let edges = file.edges.iter().map(|&[t, h]| (t, h)).collect();
        let rotations = file
            .rotations
            .iter()
            .map(|r| r.iter().copied().map(Dart).collect())
            .collect();
        Self::new(file.vertices, edges, rotations)
    }

    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        rotations: Vec<Vec<Dart>>,
    ) -> Result<Self, EmbeddingError> {
        if n == 0 {
            return Err(EmbeddingError::MalformedInput("no vertices".into()));
        }
        if let Some((i, _)) = edges
            .iter()
            .enumerate()
            .find(|(_, &(t, h))| t >= n || h >= n)
        {
            return Err(EmbeddingError::MalformedInput(format!(
                "edge {i} has an endpoint outside 0..{n}"
            )));
        }
        if rotations.len() != n {
            return Err(EmbeddingError::MalformedInput(format!(
                "expected {n} rotations, found {}",
                rotations.len()
            )));
        }
        let darts = 2 * edges.len();
        let mut position = vec![None; darts];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d.0 >= darts {
                    return Err(EmbeddingError::RotationInconsistent(format!(
                        "dart {d} at vertex {v} does not exist"
                    )));
                }
                if position[d.0].is_some() {
                    return Err(EmbeddingError::RotationInconsistent(format!(
                        "dart {d} listed more than once"
                    )));
                }
                let (t, h) = edges[d.edge()];
                let origin = if d.is_forward() { t } else { h };
                if origin != v {
                    return Err(EmbeddingError::RotationInconsistent(format!(
                        "dart {d} listed at vertex {v} but starts at vertex {origin}"
                    )));
                }
                position[d.0] = Some((v, i));
            }
        }
        let position: Vec<(usize, usize)> = position
            .into_iter()
            .enumerate()
            .map(|(d, p)| {
                p.ok_or_else(|| {
                    EmbeddingError::RotationInconsistent(format!("dart {d} missing from rotations"))
                })
            })
            .collect::<Result<_, _>>()?;

        let mut adj = vec![Vec::new(); n];
        for &(t, h) in &edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        if count_reached(&adj, 0) != n {
            return Err(EmbeddingError::NotConnected);
        }

        let mut g = SurfaceGraph {
            n,
            edges,
            rotations,
            faces: Vec::new(),
            genus: 0,
            position,
            face_of: Vec::new(),
        };
        g.faces = trace_faces(&g);
        g.face_of = vec![0; darts];
        for f in &g.faces {
            for d in &f.boundary {
                g.face_of[d.0] = f.id;
            }
        }
        if let Some(e) = (0..g.edges.len())
            .find(|&e| g.face_of[Dart::tail_of(e).0] == g.face_of[Dart::head_of(e).0])
        {
            return Err(EmbeddingError::EdgeOnOneFace { edge: e });
        }
        g.genus = genus(&g)?;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn origin(&self, d: Dart) -> usize {
        let (t, h) = self.edges[d.edge()];
        if d.is_forward() {
            t
        } else {
            h
        }
    }

    /// Id of the face lying to the left of `d`.
    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d.0]
    }

    /// Face left of the edge traversed tail to head, then the face on its right.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        (
            self.face_of(Dart::tail_of(e)),
            self.face_of(Dart::head_of(e)),
        )
    }

    /// Next dart counterclockwise around the origin of `d`.
    pub fn rotation_next(&self, d: Dart) -> Dart {
        let (v, i) = self.position[d.0];
        let rot = &self.rotations[v];
        rot[(i + 1) % rot.len()]
    }

    /// Next dart clockwise around the origin of `d`.
    pub fn rotation_prev(&self, d: Dart) -> Dart {
        let (v, i) = self.position[d.0];
        let rot = &self.rotations[v];
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Successor of `d` along the boundary of the face on its left.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rotation_prev(d.twin())
    }

    pub fn to_file(&self) -> EmbeddingFile {
        EmbeddingFile {
            vertices: self.n,
            edges: self.edges.iter().map(|&(t, h)| [t, h]).collect(),
            rotations: self
                .rotations
                .iter()
                .map(|r| r.iter().map(|d| d.0).collect())
                .collect(),
        }
    }
}

/// Partition the darts into face boundaries.
///
/// Walking `d -> face_next(d)` keeps the face on the left; new faces start at the
/// lowest-numbered dart not yet traced, which fixes the face ids.
pub fn trace_faces(g: &SurfaceGraph) -> Vec<Face> {
    let darts = 2 * g.edge_count();
    let mut seen = vec![false; darts];
    let mut faces = Vec::new();
    for start in 0..darts {
        if seen[start] {
            continue;
        }
        let mut boundary = Vec::new();
        let mut d = Dart(start);
        while !seen[d.0] {
            seen[d.0] = true;
            boundary.push(d);
            d = g.face_next(d);
        }
        faces.push(Face {
            id: faces.len(),
            boundary,
        });
    }
    faces
}

/// Genus from the Euler relation `n - m + f = 2 - 2g`.
pub fn genus(g: &SurfaceGraph) -> Result<usize, EmbeddingError> {
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + g.face_count() as i64;
    let twice = 2 - chi;
    if twice < 0 || twice % 2 != 0 {
        return Err(EmbeddingError::NonOrientableOrBadEmbedding(format!(
            "Euler characteristic {chi} gives no nonnegative integer genus"
        )));
    }
    Ok((twice / 2) as usize)
}

pub fn dual_graph(g: &SurfaceGraph) -> DualGraph {
    DualGraph {
        nodes: g.face_count(),
        links: (0..g.edge_count()).map(|e| g.edge_faces(e)).collect(),
    }
}

fn count_reached(adj: &[Vec<usize>], start: usize) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count
}
