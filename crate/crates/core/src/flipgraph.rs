//! Flip graphs on alpha-orientations with some faces forbidden.
//!
//! Nodes are indices into an enumeration of all alpha-orientations. There is an
//! arc `a -> b` colored `F` when `b` arises from `a` by flipping the
//! counterclockwise face `F` and `F` is not forbidden. Views restricted to a
//! homology class keep the global node ids.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;
use thiserror::Error;

use crate::embedding::SurfaceGraph;
use crate::orientations::{ccw_faces, cw_faces, flip, Orientation};
use crate::potential::{z_potential, ZOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlipGraphError {
    #[error("flip graph is not strongly connected")]
    NotStronglyConnected,
    #[error("strong edge-connectivity needs at least two nodes")]
    TooFewNodes,
    #[error("component contains a directed cycle")]
    NotAcyclic,
    #[error("node {0} is not part of the graph")]
    UnknownNode(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FlipArc {
    pub from: usize,
    pub to: usize,
    /// Face whose flip the arc performs.
    pub color: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipGraph {
    universe: usize,
    nodes: Vec<usize>,
    arcs: Vec<FlipArc>,
    forbidden: BTreeSet<usize>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
    #[serde(skip)]
    inc: Vec<Vec<usize>>,
}

impl FlipGraph {
    /// Hand-assemble a graph. `universe` bounds the node ids.
    pub fn from_arcs(
        universe: usize,
        nodes: Vec<usize>,
        mut arcs: Vec<FlipArc>,
        forbidden: BTreeSet<usize>,
    ) -> Result<Self, FlipGraphError> {
        let mut present = vec![false; universe];
        for &v in &nodes {
            *present.get_mut(v).ok_or(FlipGraphError::UnknownNode(v))? = true;
        }
        for a in &arcs {
            for v in [a.from, a.to] {
                if !present.get(v).copied().unwrap_or(false) {
                    return Err(FlipGraphError::UnknownNode(v));
                }
            }
        }
        let mut nodes = nodes;
        nodes.sort_unstable();
        nodes.dedup();
        arcs.sort_unstable();
        let mut out = vec![Vec::new(); universe];
        let mut inc = vec![Vec::new(); universe];
        for (i, a) in arcs.iter().enumerate() {
            out[a.from].push(i);
            inc[a.to].push(i);
        }
        Ok(FlipGraph {
            universe,
            nodes,
            arcs,
            forbidden,
            out,
            inc,
        })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[FlipArc] {
        &self.arcs
    }

    pub fn forbidden(&self) -> &BTreeSet<usize> {
        &self.forbidden
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = &FlipArc> + '_ {
        self.out[v].iter().map(|&i| &self.arcs[i])
    }

    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = &FlipArc> + '_ {
        self.inc[v].iter().map(|&i| &self.arcs[i])
    }

    pub fn arc_set(&self) -> BTreeSet<FlipArc> {
        self.arcs.iter().copied().collect()
    }

    /// Every arc turned around; colors kept.
    pub fn reversed(&self) -> FlipGraph {
        let arcs = self
            .arcs
            .iter()
            .map(|a| FlipArc {
                from: a.to,
                to: a.from,
                color: a.color,
            })
            .collect();
        Self::from_arcs(
            self.universe,
            self.nodes.clone(),
            arcs,
            self.forbidden.clone(),
        )
        .expect("same node set")
    }

    /// The subgraph induced by `keep`.
    pub fn induced(&self, keep: &[usize]) -> FlipGraph {
        let mut inside = vec![false; self.universe];
        for &v in keep {
            if v < self.universe {
                inside[v] = true;
            }
        }
        let nodes = self.nodes.iter().copied().filter(|&v| inside[v]).collect();
        let arcs = self
            .arcs
            .iter()
            .copied()
            .filter(|a| inside[a.from] && inside[a.to])
            .collect();
        Self::from_arcs(self.universe, nodes, arcs, self.forbidden.clone())
            .expect("subset of nodes")
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .copied()
            .filter(|&v| self.out[v].is_empty())
            .collect()
    }

    pub fn sources(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .copied()
            .filter(|&v| self.inc[v].is_empty())
            .collect()
    }

    /// Shortest arc counts from `start`, indexed by global node id.
    pub fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.universe];
        if start >= self.universe || self.nodes.binary_search(&start).is_err() {
            return dist;
        }
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued nodes have a distance");
            for a in self.out_arcs(u) {
                if dist[a.to].is_none() {
                    dist[a.to] = Some(du + 1);
                    queue.push_back(a.to);
                }
            }
        }
        dist
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.universe];
        let mut comps = Vec::new();
        for &s in &self.nodes {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for a in self.out_arcs(u).chain(self.in_arcs(u)) {
                    for w in [a.from, a.to] {
                        if label[w] == usize::MAX {
                            label[w] = id;
                            comp.push(w);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn petgraph(&self) -> (DiGraph<usize, ()>, Vec<Option<NodeIndex>>) {
        let mut dg = DiGraph::new();
        let mut index = vec![None; self.universe];
        for &v in &self.nodes {
            index[v] = Some(dg.add_node(v));
        }
        for a in &self.arcs {
            dg.add_edge(index[a.from].unwrap(), index[a.to].unwrap(), ());
        }
        (dg, index)
    }

    pub fn is_strongly_connected(&self) -> bool {
        scc_decomposition(self).len() <= 1
    }

    pub fn is_acyclic(&self) -> bool {
        self.arcs.iter().all(|a| a.from != a.to)
            && scc_decomposition(self).iter().all(|c| c.len() == 1)
    }
}

/// Flip graph over all `orients` with arcs colored by the flipped face.
pub fn build_flip_graph(
    g: &SurfaceGraph,
    orients: &[Orientation],
    forbidden: &BTreeSet<usize>,
) -> FlipGraph {
    let index: HashMap<&Orientation, usize> =
        orients.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut arcs = Vec::new();
    for (i, d) in orients.iter().enumerate() {
        for f in ccw_faces(g, d) {
            if forbidden.contains(&f) {
                continue;
            }
            let next = flip(d, g.face(f)).expect("face is counterclockwise");
            if let Some(&j) = index.get(&next) {
                arcs.push(FlipArc {
                    from: i,
                    to: j,
                    color: f,
                });
            }
        }
    }
    FlipGraph::from_arcs(
        orients.len(),
        (0..orients.len()).collect(),
        arcs,
        forbidden.clone(),
    )
    .expect("arcs between enumerated orientations")
}

/// Drop every arc colored by a face in `extra` and forbid those faces.
pub fn restrict(fg: &FlipGraph, extra: &BTreeSet<usize>) -> FlipGraph {
    let arcs = fg
        .arcs
        .iter()
        .copied()
        .filter(|a| !extra.contains(&a.color))
        .collect();
    let forbidden = fg.forbidden.union(extra).copied().collect();
    FlipGraph::from_arcs(fg.universe, fg.nodes.clone(), arcs, forbidden).expect("same nodes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColoringRule {
    /// Two out-arcs to different nodes share a color.
    SameColor,
    /// No node closes the square.
    MissingSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringViolation {
    pub rule: ColoringRule,
    pub node: usize,
    pub first: FlipArc,
    pub second: FlipArc,
}

/// U-coloring check: out-arcs of a node to distinct targets have distinct
/// colors, and every such pair `v -i-> u`, `v -j-> w` closes with
/// `u -j-> x`, `w -i-> x` for some `x`.
pub fn verify_u_coloring(fg: &FlipGraph) -> Result<(), ColoringViolation> {
    for &v in &fg.nodes {
        let out: Vec<&FlipArc> = fg.out_arcs(v).collect();
        for (k, a) in out.iter().enumerate() {
            for b in &out[k + 1..] {
                if a.to == b.to {
                    continue;
                }
                if a.color == b.color {
                    return Err(ColoringViolation {
                        rule: ColoringRule::SameColor,
                        node: v,
                        first: **a,
                        second: **b,
                    });
                }
                let from_u: BTreeSet<usize> = fg
                    .out_arcs(a.to)
                    .filter(|x| x.color == b.color)
                    .map(|x| x.to)
                    .collect();
                let closes = fg
                    .out_arcs(b.to)
                    .any(|x| x.color == a.color && from_u.contains(&x.to));
                if !closes {
                    return Err(ColoringViolation {
                        rule: ColoringRule::MissingSquare,
                        node: v,
                        first: **a,
                        second: **b,
                    });
                }
            }
        }
    }
    Ok(())
}

/// L-coloring: the U-coloring conditions with all arcs reversed.
pub fn verify_l_coloring(fg: &FlipGraph) -> Result<(), ColoringViolation> {
    verify_u_coloring(&fg.reversed())
}

/// Strongly connected components, each sorted, ordered by smallest member.
pub fn scc_decomposition(fg: &FlipGraph) -> Vec<Vec<usize>> {
    let (dg, _) = fg.petgraph();
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&dg)
        .into_iter()
        .map(|c| {
            let mut ids: Vec<usize> = c.into_iter().map(|n| dg[n]).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    comps.sort_unstable();
    comps
}

fn unit_max_flow(fg: &FlipGraph, s: usize, t: usize) -> usize {
    // residual capacity per arc, forward and backward
    let m = fg.arcs.len();
    let mut used = vec![false; m];
    let mut flow = 0;
    loop {
        let mut prev: Vec<Option<(usize, bool)>> = vec![None; fg.universe];
        let mut seen = vec![false; fg.universe];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &i in &fg.out[u] {
                let w = fg.arcs[i].to;
                if !used[i] && !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((i, true));
                    queue.push_back(w);
                }
            }
            for &i in &fg.inc[u] {
                let w = fg.arcs[i].from;
                if used[i] && !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((i, false));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return flow;
        }
        let mut v = t;
        while v != s {
            let (i, fwd) = prev[v].expect("path recorded");
            used[i] = fwd;
            v = if fwd { fg.arcs[i].from } else { fg.arcs[i].to };
        }
        flow += 1;
    }
}

/// Minimum number of arcs whose removal destroys strong connectivity.
pub fn strong_edge_connectivity(fg: &FlipGraph) -> Result<usize, FlipGraphError> {
    if fg.nodes.len() < 2 {
        return Err(FlipGraphError::TooFewNodes);
    }
    if !fg.is_strongly_connected() {
        return Err(FlipGraphError::NotStronglyConnected);
    }
    let root = fg.nodes[0];
    Ok(fg.nodes[1..]
        .iter()
        .map(|&v| unit_max_flow(fg, root, v).min(unit_max_flow(fg, v, root)))
        .min()
        .expect("at least one other node"))
}

/// Members of `class` with no counterclockwise face outside `forbidden`.
pub fn sink_set(
    g: &SurfaceGraph,
    orients: &[Orientation],
    class: &[usize],
    forbidden: &BTreeSet<usize>,
) -> Vec<usize> {
    class
        .iter()
        .copied()
        .filter(|&i| {
            ccw_faces(g, &orients[i])
                .iter()
                .all(|f| forbidden.contains(f))
        })
        .collect()
}

/// Members of `class` with no clockwise face outside `forbidden`.
pub fn source_set(
    g: &SurfaceGraph,
    orients: &[Orientation],
    class: &[usize],
    forbidden: &BTreeSet<usize>,
) -> Vec<usize> {
    class
        .iter()
        .copied()
        .filter(|&i| {
            cw_faces(g, &orients[i])
                .iter()
                .all(|f| forbidden.contains(f))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub component: Vec<usize>,
    pub acyclic: bool,
    pub sink: Option<usize>,
    pub source: Option<usize>,
    pub lattice_certified: bool,
    #[serde(rename = "sink_in_O")]
    pub sink_in_o: bool,
    #[serde(rename = "source_in_Ostar")]
    pub source_in_ostar: bool,
}

/// One report per weakly connected component inside each class.
pub fn component_reports(
    g: &SurfaceGraph,
    orients: &[Orientation],
    fg: &FlipGraph,
    classes: &[Vec<usize>],
) -> Vec<ComponentReport> {
    let mut reports = Vec::new();
    for class in classes {
        let view = fg.induced(class);
        for comp in view.weak_components() {
            let sub = view.induced(&comp);
            let acyclic = sub.is_acyclic();
            let unique = |v: Vec<usize>| if v.len() == 1 { Some(v[0]) } else { None };
            let sink = unique(sub.sinks());
            let source = unique(sub.sources());
            let sinks_ok = sink_set(g, orients, &comp, &fg.forbidden);
            let sources_ok = source_set(g, orients, &comp, &fg.forbidden);
            let lattice_certified =
                acyclic && matches!(certify_distributive_lattice(g, orients, &sub), Ok(Ok(())));
            reports.push(ComponentReport {
                sink_in_o: sink.is_some_and(|s| sinks_ok.contains(&s)),
                source_in_ostar: source.is_some_and(|s| sources_ok.contains(&s)),
                component: comp,
                acyclic,
                sink,
                source,
                lattice_certified,
            });
        }
    }
    reports
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LatticeViolation {
    /// The arc skips over an intermediate element.
    NotACover {
        from: usize,
        to: usize,
    },
    /// `lower < upper` is a cover relation with no arc.
    MissingArc {
        lower: usize,
        upper: usize,
    },
    NoJoin {
        a: usize,
        b: usize,
    },
    NoMeet {
        a: usize,
        b: usize,
    },
    NotDistributive {
        a: usize,
        b: usize,
        c: usize,
    },
    /// Potential of the node towards the top is not anchored on the forbidden faces.
    PotentialOffAnchor {
        node: usize,
    },
    /// Two nodes share a potential vector.
    PotentialCollision {
        a: usize,
        b: usize,
    },
    /// Reachability disagrees with componentwise order of potentials.
    OrderMismatch {
        a: usize,
        b: usize,
    },
    /// Entrywise min/max of two potentials is not the meet/join.
    NotClosed {
        a: usize,
        b: usize,
    },
}

struct Poset {
    ids: Vec<usize>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    fn of(fg: &FlipGraph) -> Poset {
        let ids = fg.nodes.clone();
        let leq = ids
            .iter()
            .map(|&s| {
                let d = fg.bfs_distances(s);
                ids.iter().map(|&v| d[v].is_some()).collect()
            })
            .collect();
        Poset { ids, leq }
    }

    fn len(&self) -> usize {
        self.ids.len()
    }

    /// Least element of `set` under the order, if there is exactly one.
    fn least(&self, set: &[usize]) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&x| set.iter().all(|&y| self.leq[x][y]))
    }

    fn greatest(&self, set: &[usize]) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&x| set.iter().all(|&y| self.leq[y][x]))
    }

    fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq[a][x] && self.leq[b][x])
            .collect();
        self.least(&upper)
    }

    fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq[x][a] && self.leq[x][b])
            .collect();
        self.greatest(&lower)
    }
}

/// Check that an acyclic component is the cover graph of a distributive
/// lattice, ordering `a <= b` when `b` is reachable from `a`.
///
/// Besides the order-theoretic checks, every node is mapped to the negated
/// flip counts of its potential towards the top element; meet and join must
/// be the entrywise minimum and maximum of those vectors.
pub fn certify_distributive_lattice(
    g: &SurfaceGraph,
    orients: &[Orientation],
    component: &FlipGraph,
) -> Result<Result<(), LatticeViolation>, FlipGraphError> {
    if !component.is_acyclic() {
        return Err(FlipGraphError::NotAcyclic);
    }
    let p = Poset::of(component);
    let k = p.len();
    let id = |i: usize| p.ids[i];
    let local: HashMap<usize, usize> = p.ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // covers
    let mut arc_pairs = BTreeSet::new();
    for a in &component.arcs {
        let (x, y) = (local[&a.from], local[&a.to]);
        if (0..k).any(|z| z != x && z != y && p.leq[x][z] && p.leq[z][y]) {
            return Ok(Err(LatticeViolation::NotACover {
                from: a.from,
                to: a.to,
            }));
        }
        arc_pairs.insert((x, y));
    }
    for x in 0..k {
        for y in 0..k {
            if x != y && p.leq[x][y] && !arc_pairs.contains(&(x, y)) {
                let between = (0..k).any(|z| z != x && z != y && p.leq[x][z] && p.leq[z][y]);
                if !between {
                    return Ok(Err(LatticeViolation::MissingArc {
                        lower: id(x),
                        upper: id(y),
                    }));
                }
            }
        }
    }

    let mut join = vec![vec![0; k]; k];
    let mut meet = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            join[a][b] = match p.join(a, b) {
                Some(j) => j,
                None => return Ok(Err(LatticeViolation::NoJoin { a: id(a), b: id(b) })),
            };
            meet[a][b] = match p.meet(a, b) {
                Some(m) => m,
                None => return Ok(Err(LatticeViolation::NoMeet { a: id(a), b: id(b) })),
            };
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                    return Ok(Err(LatticeViolation::NotDistributive {
                        a: id(a),
                        b: id(b),
                        c: id(c),
                    }));
                }
            }
        }
    }

    // potential cross-check
    let top = p
        .greatest(&(0..k).collect::<Vec<_>>())
        .expect("lattices have a top");
    let anchor = component.forbidden.iter().next().copied();
    let mut level: Vec<Vec<i64>> = Vec::with_capacity(k);
    for x in 0..k {
        let z = match z_potential(g, &orients[id(x)], &orients[id(top)]) {
            Ok(ZOutcome::Potential(z)) => z,
            _ => return Ok(Err(LatticeViolation::PotentialOffAnchor { node: id(x) })),
        };
        let counts: Vec<i64> = z.normalized().t.iter().map(|&t| t as i64).collect();
        if let Some(c) = anchor {
            if z.anchored_at(c) != counts {
                return Ok(Err(LatticeViolation::PotentialOffAnchor { node: id(x) }));
            }
        }
        level.push(counts.iter().map(|t| -t).collect());
    }
    let by_level: HashMap<&Vec<i64>, usize> =
        level.iter().enumerate().map(|(i, l)| (l, i)).collect();
    if by_level.len() != k {
        let (a, b) = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .find(|&(a, b)| level[a] == level[b])
            .expect("some collision");
        return Ok(Err(LatticeViolation::PotentialCollision {
            a: id(a),
            b: id(b),
        }));
    }
    for a in 0..k {
        for b in 0..k {
            let below = level[a].iter().zip(&level[b]).all(|(x, y)| x <= y);
            if below != p.leq[a][b] {
                return Ok(Err(LatticeViolation::OrderMismatch { a: id(a), b: id(b) }));
            }
            let lo: Vec<i64> = level[a]
                .iter()
                .zip(&level[b])
                .map(|(x, y)| *x.min(y))
                .collect();
            let hi: Vec<i64> = level[a]
                .iter()
                .zip(&level[b])
                .map(|(x, y)| *x.max(y))
                .collect();
            if by_level.get(&lo) != Some(&meet[a][b]) || by_level.get(&hi) != Some(&join[a][b]) {
                return Ok(Err(LatticeViolation::NotClosed { a: id(a), b: id(b) }));
            }
        }
    }
    Ok(Ok(()))
}

/// One `digraph` per class; sinks get a double outline, sources a bold one.
pub fn to_dot(fg: &FlipGraph, classes: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for (k, class) in classes.iter().enumerate() {
        let view = fg.induced(class);
        let sinks: BTreeSet<usize> = view.sinks().into_iter().collect();
        let sources: BTreeSet<usize> = view.sources().into_iter().collect();
        writeln!(out, "digraph class_{k} {{").unwrap();
        for &v in view.nodes() {
            let mut attrs = Vec::new();
            if sinks.contains(&v) {
                attrs.push("peripheries=2");
            }
            if sources.contains(&v) {
                attrs.push("style=bold");
            }
            if attrs.is_empty() {
                writeln!(out, "  {v};").unwrap();
            } else {
                writeln!(out, "  {v} [{}];", attrs.join(", ")).unwrap();
            }
        }
        for a in view.arcs() {
            writeln!(out, "  {} -> {} [label={}];", a.from, a.to, a.color).unwrap();
        }
        out.push_str("}\n");
    }
    out
}
