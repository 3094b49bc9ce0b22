//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::rational::Ratio;
use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use surface_flips::fixtures;
use surface_flips::{Dart, Orientation, SurfaceGraph};

pub const MAX_VERTICES: usize = 6;
pub const MAX_EDGES: usize = 12;

/// A cycle of length `k` drawn on the sphere.
pub fn sphere_cycle(k: usize) -> SurfaceGraph {
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    let rotations = (0..k)
        .map(|i| vec![Dart::tail_of(i), Dart::head_of((i + k - 1) % k)])
        .collect();
    SurfaceGraph::new(k, edges, rotations).expect("cycle embeds")
}

/// Split edge `e` with a new vertex.
pub fn subdivide(g: &SurfaceGraph, e: usize) -> SurfaceGraph {
    let w = g.vertex_count();
    let fresh = g.edge_count();
    let (u, v) = g.edge(e);
    let mut edges = g.edges().to_vec();
    edges[e] = (u, w);
    edges.push((w, v));
    let mut rotations = g.rotations().to_vec();
    for d in rotations[v].iter_mut() {
        if *d == Dart::head_of(e) {
            *d = Dart::head_of(fresh);
        }
    }
    rotations.push(vec![Dart::head_of(e), Dart::tail_of(fresh)]);
    SurfaceGraph::new(w + 1, edges, rotations).expect("subdivision embeds")
}

/// Add an edge across face `f` between the corners that start with darts
/// `a` and `b` of its boundary.
pub fn add_chord(g: &SurfaceGraph, a: Dart, b: Dart) -> SurfaceGraph {
    let fresh = g.edge_count();
    let (u, v) = (g.origin(a), g.origin(b));
    let mut edges = g.edges().to_vec();
    edges.push((u, v));
    let mut rotations = g.rotations().to_vec();
    for (x, new) in [(a, Dart::tail_of(fresh)), (b, Dart::head_of(fresh))] {
        let rot = &mut rotations[g.origin(x)];
        let at = rot.iter().position(|&d| d == x).expect("dart in rotation");
        rot.insert(at + 1, new);
    }
    SurfaceGraph::new(g.vertex_count(), edges, rotations).expect("chord embeds")
}

/// A random sphere or torus embedding within the size limits.
pub fn random_embedding<R: Rng>(rng: &mut R) -> SurfaceGraph {
    let mut g = if rng.gen_bool(0.5) {
        sphere_cycle(rng.gen_range(2..=4))
    } else {
        fixtures::torus_2x2()
    };
    for _ in 0..rng.gen_range(0..=6) {
        let can_grow_v = g.vertex_count() < MAX_VERTICES;
        if g.edge_count() >= MAX_EDGES {
            break;
        }
        if can_grow_v && rng.gen_bool(0.4) {
            let e = rng.gen_range(0..g.edge_count());
            g = subdivide(&g, e);
        } else {
            let f = g.face(rng.gen_range(0..g.face_count()));
            if f.len() < 2 {
                continue;
            }
            let picks: Vec<&Dart> = f.boundary.choose_multiple(rng, 2).collect();
            g = add_chord(&g, *picks[0], *picks[1]);
        }
    }
    g
}

pub fn random_orientation<R: Rng>(rng: &mut R, m: usize) -> Orientation {
    Orientation::from_bits((0..m).map(|_| rng.gen_bool(0.5)).collect())
}

/// Every orientation with out-degrees `alpha`, in bit order.
pub fn brute_force_alpha(g: &SurfaceGraph, alpha: &[usize]) -> Vec<Orientation> {
    let m = g.edge_count();
    (0u32..1 << m)
        .map(|mask| Orientation::from_bits((0..m).map(|e| mask >> (m - 1 - e) & 1 == 1).collect()))
        .filter(|d| out_degrees(g, d) == alpha)
        .collect()
}

pub fn out_degrees(g: &SurfaceGraph, d: &Orientation) -> Vec<usize> {
    let mut out = vec![0; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        out[if d.bits()[e] { u } else { v }] += 1;
    }
    out
}

/// A face is counterclockwise when every boundary dart points along `d`.
pub fn is_ccw(g: &SurfaceGraph, d: &Orientation, f: usize) -> bool {
    g.face(f)
        .boundary
        .iter()
        .all(|dart| d.bits()[dart.edge()] == dart.is_forward())
}

pub fn flip_face(g: &SurfaceGraph, d: &Orientation, f: usize) -> Orientation {
    let mut bits = d.bits().to_vec();
    for dart in &g.face(f).boundary {
        bits[dart.edge()] = !bits[dart.edge()];
    }
    Orientation::from_bits(bits)
}

/// Shortest flip counts from `start` over all orientations reachable by
/// flipping counterclockwise faces outside `forbidden`.
pub fn bfs_flips(
    g: &SurfaceGraph,
    start: &Orientation,
    forbidden: &BTreeSet<usize>,
) -> BTreeMap<Orientation, u64> {
    let mut dist = BTreeMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(d) = queue.pop_front() {
        let here = dist[&d];
        for f in (0..g.face_count()).filter(|f| !forbidden.contains(f)) {
            if is_ccw(g, &d, f) {
                let next = flip_face(g, &d, f);
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), here + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    dist
}

/// `phi(d1 - d2)` with entries +1 where `d1` points as listed.
pub fn phi_difference(d1: &Orientation, d2: &Orientation) -> Vec<i64> {
    d1.bits()
        .iter()
        .zip(d2.bits())
        .map(|(&a, &b)| {
            if a == b {
                0
            } else if a {
                1
            } else {
                -1
            }
        })
        .collect()
}

pub fn phi_face(g: &SurfaceGraph, f: usize) -> Vec<i64> {
    let mut v = vec![0; g.edge_count()];
    for dart in &g.face(f).boundary {
        v[dart.edge()] += if dart.is_forward() { 1 } else { -1 };
    }
    v
}

type Q = Ratio<i128>;

/// Whether `target` is an integer combination of the face vectors.
///
/// The faces other than face 0 are linearly independent, so the rational
/// solution is unique when it exists and integrality decides membership.
pub fn in_face_lattice(g: &SurfaceGraph, target: &[i64]) -> bool {
    let cols: Vec<Vec<i64>> = (1..g.face_count()).map(|f| phi_face(g, f)).collect();
    let rows = target.len();
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            cols.iter()
                .map(|c| Q::from_integer(c[r] as i128))
                .chain([Q::from_integer(target[r] as i128)])
                .collect()
        })
        .collect();
    let n = cols.len();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot = m[row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    assert_eq!(pivots.len(), n, "faces other than face 0 are independent");
    m[row..].iter().all(|r| r[n].is_zero()) && (0..n).all(|i| m[i][n].is_integer())
}

pub fn homologous_oracle(g: &SurfaceGraph, d1: &Orientation, d2: &Orientation) -> bool {
    in_face_lattice(g, &phi_difference(d1, d2))
}

/// Reachability closure by DFS over an arc list.
pub fn strongly_connected(nodes: &[usize], arcs: &[(usize, usize)]) -> bool {
    let Some(&root) = nodes.first() else {
        return true;
    };
    let reach = |forward: bool| {
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(a, b) in arcs {
                let (x, y) = if forward { (a, b) } else { (b, a) };
                if x == v && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() == nodes.len()
    };
    reach(true) && reach(false)
}

/// Fewest arcs whose deletion destroys strong connectivity, by trying all
/// subsets of increasing size.
pub fn edge_connectivity_by_deletion(nodes: &[usize], arcs: &[(usize, usize)]) -> usize {
    assert!(strongly_connected(nodes, arcs));
    for s in 1..=arcs.len() {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let kept: Vec<(usize, usize)> = arcs
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, &a)| a)
                .collect();
            if !strongly_connected(nodes, &kept) {
                return s;
            }
            // next combination
            let mut i = s;
            while i > 0 && idx[i - 1] == arcs.len() - s + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..s {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    arcs.len()
}

/// Flip-count vectors from the unique source along BFS paths, checked to be
/// a componentwise-ordered family closed under min and max whose order is
/// reachability and whose covers are exactly the arcs.
pub fn lattice_by_counts(
    nodes: &[usize],
    arcs: &[(usize, usize, usize)],
    colors: usize,
) -> Result<(), String> {
    let has_in: BTreeSet<usize> = arcs.iter().map(|a| a.1).collect();
    let sources: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|v| !has_in.contains(v))
        .collect();
    if sources.len() != 1 {
        return Err(format!("{} sources", sources.len()));
    }
    let mut count: BTreeMap<usize, Vec<i64>> = BTreeMap::from([(sources[0], vec![0; colors])]);
    let mut queue = VecDeque::from([sources[0]]);
    while let Some(v) = queue.pop_front() {
        for &(a, b, c) in arcs {
            if a == v && !count.contains_key(&b) {
                let mut next = count[&v].clone();
                next[c] += 1;
                count.insert(b, next);
                queue.push_back(b);
            }
        }
    }
    if count.len() != nodes.len() {
        return Err("source does not reach every node".into());
    }
    for &(a, b, c) in arcs {
        let mut expect = count[&a].clone();
        expect[c] += 1;
        if count[&b] != expect {
            return Err(format!("counts along {a}->{b} are path dependent"));
        }
    }
    let index: BTreeMap<&Vec<i64>, usize> = count.iter().map(|(&v, c)| (c, v)).collect();
    if index.len() != nodes.len() {
        return Err("two nodes share a count vector".into());
    }
    let reach = |s: usize| {
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(a, b, _) in arcs {
                if a == v && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        seen
    };
    for &x in nodes {
        let up = reach(x);
        for &y in nodes {
            let le = count[&x].iter().zip(&count[&y]).all(|(p, q)| p <= q);
            if le != up.contains(&y) {
                return Err(format!("order of {x} and {y} disagrees with counts"));
            }
            let lo: Vec<i64> = count[&x]
                .iter()
                .zip(&count[&y])
                .map(|(p, q)| *p.min(q))
                .collect();
            let hi: Vec<i64> = count[&x]
                .iter()
                .zip(&count[&y])
                .map(|(p, q)| *p.max(q))
                .collect();
            if !index.contains_key(&lo) || !index.contains_key(&hi) {
                return Err(format!("{x} and {y} lack a meet or join"));
            }
        }
    }
    // arcs are covers: counts differ by single unit vectors, so no element
    // can sit strictly between; the converse needs every unit step present
    for &x in nodes {
        for &y in nodes {
            let diff: Vec<i64> = count[&y]
                .iter()
                .zip(&count[&x])
                .map(|(p, q)| p - q)
                .collect();
            let unit = diff.iter().all(|&t| t == 0 || t == 1) && diff.iter().sum::<i64>() == 1;
            if unit && !arcs.iter().any(|&(a, b, _)| a == x && b == y) {
                return Err(format!("cover {x} < {y} has no arc"));
            }
        }
    }
    Ok(())
}
