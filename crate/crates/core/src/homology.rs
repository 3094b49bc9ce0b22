//! Chain vectors over the edge space, tree-cotree homology bases and the
//! partition of alpha-orientations into homology classes.

use std::collections::{BTreeSet, VecDeque};
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::embedding::SurfaceGraph;
use crate::linalg;
use crate::orientations::{
    face_circuit, same_graph, Orientation, OrientationError, OrientedSubgraph,
};
use crate::potential::{z_potential, ZOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("orientations have different out-degree vectors")]
    DifferentOutDegrees,
    #[error("no unique integer decomposition over the cycle basis")]
    SolveFailed,
}

/// Integer vector indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ChainVector(pub Vec<i64>);

impl ChainVector {
    pub fn zero(m: usize) -> Self {
        ChainVector(vec![0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&e| self.0[e] != 0).collect()
    }

    /// Net outflow at each vertex, reading `+1` as the direction of `d0`.
    pub fn boundary(&self, g: &SurfaceGraph, d0: &Orientation) -> Vec<i64> {
        let mut bal = vec![0; g.vertex_count()];
        for (e, &c) in self.0.iter().enumerate() {
            let dart = d0.dart(e);
            bal[g.origin(dart)] += c;
            bal[g.origin(dart.twin())] -= c;
        }
        bal
    }

    pub fn is_balanced(&self, g: &SurfaceGraph, d0: &Orientation) -> bool {
        self.boundary(g, d0).iter().all(|&b| b == 0)
    }
}

impl Add for &ChainVector {
    type Output = ChainVector;
    fn add(self, rhs: &ChainVector) -> ChainVector {
        ChainVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ChainVector {
    type Output = ChainVector;
    fn sub(self, rhs: &ChainVector) -> ChainVector {
        ChainVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ChainVector {
    type Output = ChainVector;
    fn neg(self) -> ChainVector {
        ChainVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&ChainVector> for i64 {
    type Output = ChainVector;
    fn mul(self, rhs: &ChainVector) -> ChainVector {
        ChainVector(rhs.0.iter().map(|a| self * a).collect())
    }
}

/// `sum_i coeffs[i] * vectors[i]`.
pub fn combination(m: usize, coeffs: &[i64], vectors: &[ChainVector]) -> ChainVector {
    coeffs
        .iter()
        .zip(vectors)
        .fold(ChainVector::zero(m), |acc, (&c, v)| &acc + &(c * v))
}

/// `+1` where the subgraph agrees with `d0`, `-1` where it opposes it, `0` off it.
pub fn chain_vector(
    d: &OrientedSubgraph,
    d0: &Orientation,
) -> Result<ChainVector, OrientationError> {
    if d.edges.len() != d0.len() {
        return Err(OrientationError::MismatchedGraph(d.edges.len(), d0.len()));
    }
    Ok(ChainVector(
        d.edges
            .iter()
            .enumerate()
            .map(|(e, dir)| match dir {
                None => 0,
                Some(fwd) if *fwd == d0.is_forward(e) => 1,
                Some(_) => -1,
            })
            .collect(),
    ))
}

pub fn orientation_vector(
    d: &Orientation,
    d0: &Orientation,
) -> Result<ChainVector, OrientationError> {
    chain_vector(&OrientedSubgraph::from(d), d0)
}

/// One vector per face, each boundary taken counterclockwise.
pub fn face_vectors(g: &SurfaceGraph, d0: &Orientation) -> Vec<ChainVector> {
    g.faces()
        .iter()
        .map(|f| chain_vector(&face_circuit(g, f), d0).expect("face circuit spans the graph"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyBasis {
    /// Reference orientation the vectors are expressed against.
    #[serde(skip)]
    pub reference: Orientation,
    pub faces: Vec<ChainVector>,
    pub cycles: Vec<ChainVector>,
    /// Edges of the primal spanning tree.
    pub tree: BTreeSet<usize>,
    /// Primal edges whose duals form the spanning tree of the dual graph.
    pub cotree: BTreeSet<usize>,
    /// The non-tree, non-cotree edge defining each cycle.
    pub generators: Vec<usize>,
}

impl HomologyBasis {
    /// Index of the face left out of the cycle-space basis.
    pub const OMITTED_FACE: usize = 0;
}

/// A spanning tree `T` by BFS from vertex 0, a dual spanning tree avoiding the
/// duals of `T` by BFS from face 0, and one circuit per leftover edge.
pub fn tree_cotree_basis(g: &SurfaceGraph, d0: &Orientation) -> HomologyBasis {
    let m = g.edge_count();
    let mut incident = vec![Vec::new(); g.vertex_count()];
    for (e, &(t, h)) in g.edges().iter().enumerate() {
        incident[t].push(e);
        if h != t {
            incident[h].push(e);
        }
    }

    // parent[v] = (parent vertex, edge)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
    let mut depth = vec![0usize; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = BTreeSet::new();
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &e in &incident[u] {
            let (t, h) = g.edge(e);
            let w = if t == u { h } else { t };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((u, e));
                depth[w] = depth[u] + 1;
                tree.insert(e);
                queue.push_back(w);
            }
        }
    }

    let mut face_edges = vec![Vec::new(); g.face_count()];
    for e in 0..m {
        let (a, b) = g.edge_faces(e);
        face_edges[a].push(e);
        face_edges[b].push(e);
    }
    let mut cotree = BTreeSet::new();
    let mut seen = vec![false; g.face_count()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for &e in &face_edges[f] {
            if tree.contains(&e) {
                continue;
            }
            let (a, b) = g.edge_faces(e);
            let other = if a == f { b } else { a };
            if !seen[other] {
                seen[other] = true;
                cotree.insert(e);
                queue.push_back(other);
            }
        }
    }

    let generators: Vec<usize> = (0..m)
        .filter(|e| !tree.contains(e) && !cotree.contains(e))
        .collect();
    let cycles = generators
        .iter()
        .map(|&e| {
            let mut v = ChainVector::zero(m);
            let (t, h) = g.edge(e);
            v.0[e] = if d0.is_forward(e) { 1 } else { -1 };
            // walk head -> tail through the tree to close the circuit
            let (mut a, mut b) = (h, t);
            let mut tail_side = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, pe) = parent[a].expect("non-root has a parent");
                    v.0[pe] += step_sign(g, d0, pe, a);
                    a = p;
                } else {
                    let (p, pe) = parent[b].expect("non-root has a parent");
                    tail_side.push((pe, p));
                    b = p;
                }
            }
            // from the meeting point down to the tail
            for (pe, from) in tail_side {
                v.0[pe] += step_sign(g, d0, pe, from);
            }
            v
        })
        .collect();

    HomologyBasis {
        reference: d0.clone(),
        faces: face_vectors(g, d0),
        cycles,
        tree,
        cotree,
        generators,
    }
}

/// Sign of traversing edge `e` starting from vertex `from` relative to `d0`.
fn step_sign(g: &SurfaceGraph, d0: &Orientation, e: usize, from: usize) -> i64 {
    if d0.tail(g, e) == from {
        1
    } else {
        -1
    }
}

/// Coefficients of the homology part of the difference of two orientations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HomologySignature {
    pub mu: Vec<i64>,
}

/// Full integer decomposition of an even chain over the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Coefficient of every face; the omitted face gets 0.
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
}

/// Decompose `chain` as `sum lambda_F phi(F) + sum mu_H phi(H)` over faces other
/// than the omitted one and the homology cycles.
pub fn decompose(
    basis: &HomologyBasis,
    chain: &ChainVector,
) -> Result<Decomposition, HomologyError> {
    let skip = HomologyBasis::OMITTED_FACE;
    let columns: Vec<Vec<i64>> = basis
        .faces
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, f)| f.0.clone())
        .chain(basis.cycles.iter().map(|c| c.0.clone()))
        .collect();
    let x = linalg::solve_unique(&columns, &chain.0).ok_or(HomologyError::SolveFailed)?;
    let x = linalg::to_integers(&x).ok_or(HomologyError::SolveFailed)?;
    let face_count = basis.faces.len();
    let mut lambda = vec![0; face_count];
    let mut it = x.into_iter();
    for (i, l) in lambda.iter_mut().enumerate() {
        if i != skip {
            *l = it.next().expect("one unknown per face");
        }
    }
    Ok(Decomposition {
        lambda,
        mu: it.collect(),
    })
}

/// Homology coefficients of `d - reference`.
pub fn signature(
    d: &Orientation,
    reference: &Orientation,
    basis: &HomologyBasis,
) -> Result<HomologySignature, HomologyError> {
    let diff = crate::orientations::difference(d, reference)?;
    let chain = chain_vector(&diff, &basis.reference)?;
    Ok(HomologySignature {
        mu: decompose(basis, &chain)?.mu,
    })
}

/// Whether `d1 - d2` is null-homologous, decided by dual labeling.
pub fn homologous(
    g: &SurfaceGraph,
    d1: &Orientation,
    d2: &Orientation,
) -> Result<bool, HomologyError> {
    same_graph(d1, d2)?;
    if d1.out_degrees(g) != d2.out_degrees(g) {
        return Err(HomologyError::DifferentOutDegrees);
    }
    match z_potential(g, d1, d2) {
        Ok(ZOutcome::Potential(_)) => Ok(true),
        Ok(ZOutcome::NotHomologous { .. }) => Ok(false),
        Err(_) => unreachable!("graph agreement checked above"),
    }
}

/// Classes ordered by smallest member; members ascending.
pub fn homology_classes(
    g: &SurfaceGraph,
    orients: &[Orientation],
) -> Result<Vec<Vec<usize>>, HomologyError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (i, d) in orients.iter().enumerate() {
        for class in classes.iter_mut() {
            if homologous(g, &orients[class[0]], d)? {
                class.push(i);
                continue 'next;
            }
        }
        classes.push(vec![i]);
    }
    Ok(classes)
}
