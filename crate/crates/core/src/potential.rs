//! Face potentials of orientation differences and the forbidden-face flip
//! distance derived from them.
//!
//! For orientations `from` and `to` of one graph, the potential assigns an
//! integer to every face. Crossing an edge on which the two orientations agree
//! keeps the value; crossing an edge of `from - to` into the face on its left
//! (traversed along `from`) raises it by one. The labeling closes up around
//! every dual cycle exactly when the two orientations are homologous, and then
//! `z(F) - min z` counts the flips every shortest sequence performs on `F`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::embedding::SurfaceGraph;
use crate::homology::{combination, face_vectors, orientation_vector, ChainVector};
use crate::orientations::{
    difference, face_state, flip, same_graph, FaceState, Orientation, OrientationError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotentialError {
    #[error(transparent)]
    MismatchedGraph(#[from] OrientationError),
    #[error("face {0} does not exist")]
    UnknownFace(usize),
    #[error("edge visiting order is not a permutation of the edges")]
    InvalidOrder,
    #[error("no counterclockwise face with positive residual after {0} flips")]
    WitnessStalled(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PotentialVector {
    /// One value per face id, with `z[base] == 0`.
    pub z: Vec<i64>,
    pub base: usize,
    pub z_min: i64,
    pub argmin: BTreeSet<usize>,
}

impl PotentialVector {
    fn from_raw(z: Vec<i64>, base: usize) -> Self {
        let z_min = z.iter().copied().min().unwrap_or(0);
        let argmin = (0..z.len()).filter(|&f| z[f] == z_min).collect();
        PotentialVector {
            z,
            base,
            z_min,
            argmin,
        }
    }

    /// `z - z_min`, the per-face flip counts of the closed form.
    pub fn normalized(&self) -> FlipCountVector {
        FlipCountVector {
            t: self.z.iter().map(|&z| (z - self.z_min) as u64).collect(),
        }
    }

    /// Rebase so that `face` carries value 0.
    pub fn anchored_at(&self, face: usize) -> Vec<i64> {
        self.z.iter().map(|&z| z - self.z[face]).collect()
    }

    /// `sum_F z(F) phi(F)` against the as-listed reference.
    pub fn decomposition(&self, g: &SurfaceGraph) -> ChainVector {
        let d0 = Orientation::as_listed(g.edge_count());
        combination(g.edge_count(), &self.z, &face_vectors(g, &d0))
    }
}

/// Flip count per face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipCountVector {
    pub t: Vec<u64>,
}

impl FlipCountVector {
    pub fn total(&self) -> u64 {
        self.t.iter().sum()
    }

    /// Counts how often each face occurs in `sequence`.
    pub fn of_sequence(face_count: usize, sequence: &[usize]) -> Self {
        let mut t = vec![0; face_count];
        for &f in sequence {
            t[f] += 1;
        }
        FlipCountVector { t }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ZOutcome {
    Potential(PotentialVector),
    /// The labeling contradicts itself across `conflict_edge`.
    NotHomologous {
        conflict_edge: usize,
    },
}

impl ZOutcome {
    pub fn potential(&self) -> Option<&PotentialVector> {
        match self {
            ZOutcome::Potential(p) => Some(p),
            ZOutcome::NotHomologous { .. } => None,
        }
    }
}

/// Why a flip sequence cannot exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Unreachable {
    NotHomologous,
    /// Forbidden faces whose potential is above the minimum.
    ForbiddenNotAtMin(Vec<usize>),
}

pub type Outcome<T> = Result<T, Unreachable>;

/// Required `z(left) - z(right)` across edge `e`, where left/right are taken
/// against the tail dart: 0 off the difference, otherwise +1 when `from` runs
/// tail to head and -1 when it runs head to tail.
fn jump(from: &Orientation, to: &Orientation, e: usize) -> i64 {
    if from.is_forward(e) == to.is_forward(e) {
        0
    } else if from.is_forward(e) {
        1
    } else {
        -1
    }
}

/// Potential of `from - to`, labeled by BFS over the dual graph from face 0.
pub fn z_potential(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
) -> Result<ZOutcome, PotentialError> {
    same_graph(from, to)?;
    if from.len() != g.edge_count() {
        return Err(OrientationError::MismatchedGraph(from.len(), g.edge_count()).into());
    }
    Ok(label_from(
        g,
        from,
        to,
        0,
        &(0..g.edge_count()).collect::<Vec<_>>(),
    ))
}

/// Label by BFS from `base`, scanning each face's edges in the order given by
/// `order`. Values are rebased so that face 0 carries 0.
fn label_from(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    base: usize,
    order: &[usize],
) -> ZOutcome {
    let faces = g.face_count();
    let mut rank = vec![0; g.edge_count()];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); faces];
    for e in 0..g.edge_count() {
        let (l, r) = g.edge_faces(e);
        incident[l].push(e);
        incident[r].push(e);
    }
    for list in incident.iter_mut() {
        list.sort_by_key(|&e| rank[e]);
    }

    let mut z: Vec<Option<i64>> = vec![None; faces];
    z[base] = Some(0);
    let mut queue = VecDeque::from([base]);
    while let Some(f) = queue.pop_front() {
        let zf = z[f].expect("queued faces are labeled");
        for &e in &incident[f] {
            let (l, r) = g.edge_faces(e);
            let j = jump(from, to, e);
            let (other, value) = if f == l { (r, zf - j) } else { (l, zf + j) };
            match z[other] {
                None => {
                    z[other] = Some(value);
                    queue.push_back(other);
                }
                Some(v) if v != value => return ZOutcome::NotHomologous { conflict_edge: e },
                Some(_) => {}
            }
        }
    }
    let raw: Vec<i64> = z
        .into_iter()
        .map(|v| v.expect("dual graph is connected"))
        .collect();
    let shift = raw[0];
    ZOutcome::Potential(PotentialVector::from_raw(
        raw.iter().map(|v| v - shift).collect(),
        0,
    ))
}

/// Same as [`z_potential`] but starting the dual search at another face and
/// visiting edges in a caller-chosen order. Exposed for invariance checks.
pub fn z_potential_with_order(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    start: usize,
    order: &[usize],
) -> Result<ZOutcome, PotentialError> {
    same_graph(from, to)?;
    if start >= g.face_count() {
        return Err(PotentialError::UnknownFace(start));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if from.len() != g.edge_count() || sorted != (0..g.edge_count()).collect::<Vec<_>>() {
        return Err(PotentialError::InvalidOrder);
    }
    Ok(label_from(g, from, to, start, order))
}

fn check_faces(g: &SurfaceGraph, forbidden: &BTreeSet<usize>) -> Result<(), PotentialError> {
    match forbidden.iter().find(|&&f| f >= g.face_count()) {
        Some(&f) => Err(PotentialError::UnknownFace(f)),
        None => Ok(()),
    }
}

fn admissible(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    forbidden: &BTreeSet<usize>,
) -> Result<Outcome<PotentialVector>, PotentialError> {
    check_faces(g, forbidden)?;
    let p = match z_potential(g, from, to)? {
        ZOutcome::Potential(p) => p,
        ZOutcome::NotHomologous { .. } => return Ok(Err(Unreachable::NotHomologous)),
    };
    let bad: Vec<usize> = forbidden
        .iter()
        .copied()
        .filter(|&f| p.z[f] != p.z_min)
        .collect();
    if bad.is_empty() {
        Ok(Ok(p))
    } else {
        Ok(Err(Unreachable::ForbiddenNotAtMin(bad)))
    }
}

/// Minimum number of flips avoiding `forbidden` that turn `from` into `to`.
pub fn flip_distance(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    forbidden: &BTreeSet<usize>,
) -> Result<Outcome<u64>, PotentialError> {
    Ok(admissible(g, from, to, forbidden)?.map(|p| p.normalized().total()))
}

pub fn reachable(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    forbidden: &BTreeSet<usize>,
) -> Result<bool, PotentialError> {
    Ok(flip_distance(g, from, to, forbidden)?.is_ok())
}

/// A shortest flip sequence, as face ids in order.
///
/// Repeatedly flips the lowest-numbered counterclockwise face that still has a
/// positive residual count.
pub fn min_flip_sequence(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    forbidden: &BTreeSet<usize>,
) -> Result<Outcome<Vec<usize>>, PotentialError> {
    let p = match admissible(g, from, to, forbidden)? {
        Ok(p) => p,
        Err(why) => return Ok(Err(why)),
    };
    let mut residual = p.normalized().t;
    let mut remaining: u64 = residual.iter().sum();
    let mut current = from.clone();
    let mut sequence = Vec::with_capacity(remaining as usize);
    while remaining > 0 {
        let next = g
            .faces()
            .iter()
            .find(|f| residual[f.id] > 0 && face_state(&current, f) == FaceState::Ccw)
            .ok_or(PotentialError::WitnessStalled(sequence.len()))?;
        current = flip(&current, next).expect("face checked counterclockwise");
        residual[next.id] -= 1;
        remaining -= 1;
        sequence.push(next.id);
    }
    debug_assert_eq!(&current, to);
    Ok(Ok(sequence))
}

/// Everything the `distance` command reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub potential: Option<PotentialVector>,
    pub forbidden: BTreeSet<usize>,
    pub violations: Vec<usize>,
    pub distance: Option<u64>,
    pub unreachable: Option<Unreachable>,
    pub witness: Option<Vec<usize>>,
}

pub fn distance_report(
    g: &SurfaceGraph,
    from: &Orientation,
    to: &Orientation,
    forbidden: &BTreeSet<usize>,
    with_witness: bool,
) -> Result<DistanceReport, PotentialError> {
    check_faces(g, forbidden)?;
    let potential = z_potential(g, from, to)?.potential().cloned();
    let distance = flip_distance(g, from, to, forbidden)?;
    let witness = if with_witness {
        min_flip_sequence(g, from, to, forbidden)?.ok()
    } else {
        None
    };
    let violations = match &distance {
        Err(Unreachable::ForbiddenNotAtMin(v)) => v.clone(),
        _ => Vec::new(),
    };
    Ok(DistanceReport {
        potential,
        forbidden: forbidden.clone(),
        violations,
        distance: distance.as_ref().ok().copied(),
        unreachable: distance.err(),
        witness,
    })
}

/// `phi(from - to)` against the as-listed reference.
pub fn difference_vector(
    from: &Orientation,
    to: &Orientation,
) -> Result<ChainVector, OrientationError> {
    let diff = difference(from, to)?;
    crate::homology::chain_vector(&diff, &Orientation::as_listed(from.len()))
}

/// `phi` of a whole orientation against the as-listed reference.
pub fn as_listed_vector(d: &Orientation) -> ChainVector {
    orientation_vector(d, &Orientation::as_listed(d.len())).expect("same length")
}
