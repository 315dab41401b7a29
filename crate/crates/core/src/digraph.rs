//! m-Cayley digraphs built from connection sets `S_{i,j} ⊆ G`.
//!
//! Vertex `x_i` (element `x`, part `i`, both 0-based here) has flat index
//! `i·|G| + x`. The arcs are `(x_i, (s·x)_j)` for `s ∈ S_{i,j}`, so `R(G)`
//! acts by automorphisms.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupSpec};
use crate::limits::Limits;
use crate::perms::{OrbitPartition, Permutation};
use crate::util::{ElemSet, MAX_SET_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Digraph,
    Graph,
    PcayleyDigraph,
    PcayleyGraph,
}

impl Mode {
    pub fn is_graph(self) -> bool {
        matches!(self, Mode::Graph | Mode::PcayleyGraph)
    }

    pub fn is_pcayley(self) -> bool {
        matches!(self, Mode::PcayleyDigraph | Mode::PcayleyGraph)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Digraph => "digraph",
            Mode::Graph => "graph",
            Mode::PcayleyDigraph => "pcayley-digraph",
            Mode::PcayleyGraph => "pcayley-graph",
        }
    }

    /// The mode with the same symmetry requirement but no PCayley restriction.
    pub fn general(self) -> Mode {
        if self.is_graph() {
            Mode::Graph
        } else {
            Mode::Digraph
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        Ok(match s {
            "digraph" | "cayley-digraph" => Mode::Digraph,
            "graph" | "cayley-graph" | "cayley-graph-general" => Mode::Graph,
            "pcayley-digraph" => Mode::PcayleyDigraph,
            "pcayley-graph" => Mode::PcayleyGraph,
            _ => return Err(Error::InvalidConnectionSets(format!("unknown mode `{s}`"))),
        })
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The family `{S_{i,j}}` for a group `G` and `m` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSets {
    group: Arc<FiniteGroup>,
    m: usize,
    sets: Vec<ElemSet>,
}

impl std::hash::Hash for ConnectionSets {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.m.hash(state);
        self.sets.hash(state);
    }
}

impl ConnectionSets {
    pub fn empty(group: Arc<FiniteGroup>, m: usize) -> Result<Self> {
        if group.order() > MAX_SET_ORDER {
            return Err(Error::GroupOrderBound {
                order: group.order(),
                bound: MAX_SET_ORDER,
            });
        }
        if m == 0 {
            return Err(Error::InvalidConnectionSets("m must be positive".into()));
        }
        Ok(ConnectionSets {
            group,
            m,
            sets: vec![ElemSet::EMPTY; m * m],
        })
    }

    /// From nested lists: `sets[i][j]` lists the elements of `S_{i,j}`.
    pub fn from_lists(group: Arc<FiniteGroup>, sets: &[Vec<Vec<usize>>]) -> Result<Self> {
        let m = sets.len();
        let mut c = ConnectionSets::empty(group, m)?;
        for (i, row) in sets.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidConnectionSets(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (j, s) in row.iter().enumerate() {
                for &x in s {
                    if x >= c.group.order() {
                        return Err(Error::InvalidConnectionSets(format!(
                            "element {x} in S[{i}][{j}] outside the group"
                        )));
                    }
                }
                c.set(i, j, ElemSet::from_elems(s.iter().copied()));
            }
        }
        Ok(c)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.m * self.group.order()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ElemSet {
        self.sets[i * self.m + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: ElemSet) {
        self.sets[i * self.m + j] = s;
    }

    pub fn raw(&self) -> &[ElemSet] {
        &self.sets
    }

    pub fn to_lists(&self) -> Vec<Vec<Vec<usize>>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.get(i, j).to_vec()).collect())
            .collect()
    }

    pub fn inverse_set(&self, s: ElemSet) -> ElemSet {
        ElemSet::from_elems(s.iter().map(|x| self.group.inv(x)))
    }

    /// Check the constraints of `mode`; reports the first offending `(i, j)`.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        for i in 0..self.m {
            if self.get(i, i).contains(0) {
                return Err(Error::ModeViolation {
                    i,
                    j: i,
                    reason: "identity in a diagonal set".into(),
                });
            }
            if mode.is_pcayley() && !self.get(i, i).is_empty() {
                return Err(Error::ModeViolation {
                    i,
                    j: i,
                    reason: "PCayley diagonal set is not empty".into(),
                });
            }
        }
        if mode.is_graph() {
            for i in 0..self.m {
                for j in i..self.m {
                    if self.get(j, i) != self.inverse_set(self.get(i, j)) {
                        return Err(Error::ModeViolation {
                            i,
                            j,
                            reason: format!("S[{j}][{i}] is not the inverse of S[{i}][{j}]"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The most specific mode these sets satisfy.
    pub fn natural_mode(&self) -> Mode {
        let graph = self.validate(Mode::Graph).is_ok();
        let pc = (0..self.m).all(|i| self.get(i, i).is_empty());
        match (graph, pc) {
            (true, true) => Mode::PcayleyGraph,
            (true, false) => Mode::Graph,
            (false, true) => Mode::PcayleyDigraph,
            (false, false) => Mode::Digraph,
        }
    }

    /// Number of arcs `Σ|S_{i,j}|·|G|`.
    pub fn arc_count(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum::<usize>() * self.group.order()
    }
}

/// JSON form of a connection-set file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectionSetsFile {
    pub group: GroupSpec,
    pub m: usize,
    pub mode: Mode,
    pub sets: Vec<Vec<Vec<usize>>>,
}

impl ConnectionSetsFile {
    pub fn of(g: &MCayleyDigraph) -> Self {
        ConnectionSetsFile {
            group: GroupSpec::of(g.group()),
            m: g.m(),
            mode: g.mode(),
            sets: g.conn().to_lists(),
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<MCayleyDigraph> {
        let group = Arc::new(self.group.resolve(limits)?);
        if self.sets.len() != self.m {
            return Err(Error::InvalidConnectionSets(format!(
                "expected {} rows, found {}",
                self.m,
                self.sets.len()
            )));
        }
        let conn = ConnectionSets::from_lists(group, &self.sets)?;
        MCayleyDigraph::build(conn, self.mode)
    }
}

/// Kind of the undirected bipartite block between two parts of a 6-element group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeType {
    #[serde(rename = "empty")]
    Empty,
    #[serde(rename = "K33")]
    K33,
    #[serde(rename = "K22")]
    K22,
    #[serde(rename = "other")]
    Other,
}

/// Plain digraph on a vertex subset, with local indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubDigraph {
    pub vertices: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct MCayleyDigraph {
    conn: ConnectionSets,
    mode: Mode,
    words: usize,
    adj: Vec<u64>,
    arcs: Vec<(usize, usize)>,
}

impl PartialEq for MCayleyDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.conn == other.conn
    }
}

impl MCayleyDigraph {
    pub fn build(conn: ConnectionSets, mode: Mode) -> Result<Self> {
        conn.validate(mode)?;
        let g = conn.group();
        let k = g.order();
        let n = conn.n();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        let mut arcs = Vec::with_capacity(conn.arc_count());
        for i in 0..conn.m() {
            for j in 0..conn.m() {
                for s in conn.get(i, j).iter() {
                    for x in 0..k {
                        let u = i * k + x;
                        let v = j * k + g.mul(s, x);
                        adj[u * words + v / 64] |= 1u64 << (v % 64);
                        arcs.push((u, v));
                    }
                }
            }
        }
        arcs.sort_unstable();
        Ok(MCayleyDigraph {
            conn,
            mode,
            words,
            adj,
            arcs,
        })
    }

    pub fn conn(&self) -> &ConnectionSets {
        &self.conn
    }

    pub fn group(&self) -> &FiniteGroup {
        self.conn.group()
    }

    pub fn m(&self) -> usize {
        self.conn.m()
    }

    pub fn n(&self) -> usize {
        self.conn.n()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        (self.adj[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Adjacency row of `u` as bit words.
    pub fn out_row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn part_of(&self, v: usize) -> usize {
        v / self.group().order()
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.n()
            && self
                .arcs
                .iter()
                .all(|&(u, v)| self.has_arc(p.apply(u), p.apply(v)))
    }

    /// Complement without loops: diagonal sets are complemented in `G∖{1}`,
    /// off-diagonal sets in `G`.
    pub fn complement(&self) -> MCayleyDigraph {
        let k = self.group().order();
        let mut c = self.conn.clone();
        for i in 0..self.m() {
            for j in 0..self.m() {
                let mut s = self.conn.get(i, j).complement(k);
                if i == j {
                    s.remove(0);
                }
                c.set(i, j, s);
            }
        }
        MCayleyDigraph::build(c, self.mode.general()).expect("complement preserves validity")
    }

    /// Multipartite complement of a PCayley digraph: `T_{i,i} = ∅`, `T_{i,j} = G∖S_{i,j}`.
    pub fn multipartite_complement(&self) -> Result<MCayleyDigraph> {
        if !self.mode.is_pcayley() {
            return Err(Error::NotPCayley);
        }
        let k = self.group().order();
        let mut c = self.conn.clone();
        for i in 0..self.m() {
            for j in 0..self.m() {
                c.set(
                    i,
                    j,
                    if i == j {
                        ElemSet::EMPTY
                    } else {
                        self.conn.get(i, j).complement(k)
                    },
                );
            }
        }
        MCayleyDigraph::build(c, self.mode)
    }

    /// Induced subdigraph on `vertices` (local indices follow the given order).
    pub fn induced(&self, vertices: &[usize]) -> SubDigraph {
        self.induced_between(vertices, vertices)
    }

    /// Arcs from `from` into `to`, on the union of both vertex lists.
    pub fn induced_between(&self, from: &[usize], to: &[usize]) -> SubDigraph {
        let mut vertices: Vec<usize> = from.iter().chain(to).copied().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let pos = |v: usize| vertices.binary_search(&v).unwrap();
        let mut arcs = Vec::new();
        for &u in from {
            for &v in to {
                if self.has_arc(u, v) {
                    arcs.push((pos(u), pos(v)));
                }
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        SubDigraph { vertices, arcs }
    }

    /// Weakly connected components.
    pub fn weak_components(&self) -> OrbitPartition {
        components(self.n(), self.arcs.iter().copied())
    }

    /// Components of the quotient on parts: `i ~ j` when `S_{i,j} ∪ S_{j,i} ≠ ∅`.
    pub fn block_components(&self) -> Vec<Vec<usize>> {
        let m = self.m();
        let links = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && !self.conn.get(i, j).is_empty());
        components(m, links).blocks
    }

    /// Edge type of the block `[G_i ∪ G_j]` in a graph on a group of order 6.
    /// `h` is the index-2 cyclic subgroup; `K33` additionally requires
    /// `S_{i,j}` to be a coset of `h`.
    pub fn classify_edge_type(&self, i: usize, j: usize, h: &[usize]) -> Result<EdgeType> {
        if !self.mode.is_graph() {
            return Err(Error::Unsupported(
                "edge types are defined for graphs".into(),
            ));
        }
        if i == j || i >= self.m() || j >= self.m() {
            return Err(Error::Incompatible(format!("invalid part pair ({i},{j})")));
        }
        let k = self.group().order();
        let verts: Vec<usize> = (i * k..(i + 1) * k).chain(j * k..(j + 1) * k).collect();
        let sub = self.induced(&verts);
        if sub.arcs.is_empty() {
            return Ok(EdgeType::Empty);
        }
        // local indices: part i is 0..k or k..2k depending on order
        let side = |local: usize| sub.vertices[local] / k;
        let comps = components(sub.vertices.len(), sub.arcs.iter().copied());
        let complete_bipartite = |a: usize| {
            comps.blocks.iter().all(|b| {
                let left: Vec<usize> = b.iter().copied().filter(|&v| side(v) == i).collect();
                let right: Vec<usize> = b.iter().copied().filter(|&v| side(v) == j).collect();
                left.len() == a
                    && right.len() == a
                    && left.iter().all(|&u| {
                        right.iter().all(|&v| {
                            sub.arcs.binary_search(&(u, v)).is_ok()
                                && sub.arcs.binary_search(&(v, u)).is_ok()
                        })
                    })
                    && sub.arcs.iter().all(|&(u, v)| side(u) != side(v))
            })
        };
        let s = self.conn.get(i, j);
        let hs = ElemSet::from_elems(h.iter().copied());
        let is_coset = s.iter().next().is_some_and(|x| {
            ElemSet::from_elems(hs.iter().map(|y| self.group().mul(x, y))) == s
                || ElemSet::from_elems(hs.iter().map(|y| self.group().mul(y, x))) == s
        });
        if k == 6 && comps.len() == 2 && complete_bipartite(3) && is_coset {
            return Ok(EdgeType::K33);
        }
        if k == 6 && comps.len() == 3 && complete_bipartite(2) {
            return Ok(EdgeType::K22);
        }
        Ok(EdgeType::Other)
    }

    /// Remove every `K33` block (both directions), keeping all other sets.
    pub fn delete_k33_edges(&self, h: &[usize]) -> Result<MCayleyDigraph> {
        let mut c = self.conn.clone();
        for i in 0..self.m() {
            for j in i + 1..self.m() {
                if self.classify_edge_type(i, j, h)? == EdgeType::K33 {
                    c.set(i, j, ElemSet::EMPTY);
                    c.set(j, i, ElemSet::EMPTY);
                }
            }
        }
        MCayleyDigraph::build(c, self.mode)
    }

    /// Arc-level image under a vertex permutation.
    pub fn relabel_arcs(&self, p: &Permutation) -> Vec<(usize, usize)> {
        let mut arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|&(u, v)| (p.apply(u), p.apply(v)))
            .collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn export_dimacs(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "c m-Cayley digraph of {} with m = {} ({})",
            self.group().name(),
            self.m(),
            self.mode
        )
        .unwrap();
        writeln!(s, "c flat vertex index i*|G| + x, 0-based").unwrap();
        writeln!(s, "p arc {} {}", self.n(), self.arcs.len()).unwrap();
        for &(u, v) in &self.arcs {
            writeln!(s, "a {u} {v}").unwrap();
        }
        s
    }

    pub fn export_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group().name(),
            "group_order": self.group().order(),
            "m": self.m(),
            "mode": self.mode,
            "vertices": self.n(),
            "arcs": self.arcs,
        })
    }
}

/// Recover connection sets from an arc list invariant under `R(G)`:
/// `S_{i,j} = {y : (1_i, y_j) is an arc}`.
pub fn connection_sets_from_arcs(
    group: Arc<FiniteGroup>,
    m: usize,
    arcs: &[(usize, usize)],
    mode: Mode,
) -> Result<MCayleyDigraph> {
    let k = group.order();
    let mut c = ConnectionSets::empty(group, m)?;
    for &(u, v) in arcs {
        if u >= m * k || v >= m * k {
            return Err(Error::InvalidConnectionSets(format!(
                "arc ({u},{v}) out of range"
            )));
        }
        if u % k == 0 {
            let mut s = c.get(u / k, v / k);
            s.insert(v % k);
            c.set(u / k, v / k, s);
        }
    }
    let g = MCayleyDigraph::build(c, mode)?;
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted != g.arcs {
        return Err(Error::InvalidConnectionSets(
            "arc set is not invariant under R(G)".into(),
        ));
    }
    Ok(g)
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> OrbitPartition {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks = vec![Vec::new(); n];
    for x in 0..n {
        let r = find(&mut parent, x);
        blocks[r].push(x);
    }
    OrbitPartition::from_blocks(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_named_group;

    fn grp(t: &str) -> Arc<FiniteGroup> {
        Arc::new(make_named_group(t).unwrap())
    }

    fn f2() -> MCayleyDigraph {
        let c = ConnectionSets::from_lists(
            grp("Z3"),
            &[vec![vec![1], vec![0, 1, 2]], vec![vec![], vec![1]]],
        )
        .unwrap();
        MCayleyDigraph::build(c, Mode::Digraph).unwrap()
    }

    #[test]
    fn arc_counts() {
        let g = f2();
        assert_eq!(g.n(), 6);
        assert_eq!(g.arcs().len(), 15);
        assert_eq!(g.conn().arc_count(), 15);
        let e = MCayleyDigraph::build(
            ConnectionSets::empty(grp("Z2"), 2).unwrap(),
            Mode::PcayleyGraph,
        )
        .unwrap();
        assert_eq!((e.n(), e.arcs().len()), (4, 0));
    }

    #[test]
    fn directed_cycle() {
        let z2 = grp("Z2");
        let mut c = ConnectionSets::empty(z2, 4).unwrap();
        for i in 0..3 {
            c.set(i, i + 1, ElemSet::singleton(0));
        }
        c.set(3, 0, ElemSet::singleton(1));
        let g = MCayleyDigraph::build(c, Mode::PcayleyDigraph).unwrap();
        assert_eq!(g.arcs().len(), 8);
        assert_eq!(g.weak_components().len(), 1);
        // every vertex has out-degree and in-degree one
        for v in 0..8 {
            assert_eq!(g.arcs().iter().filter(|a| a.0 == v).count(), 1);
            assert_eq!(g.arcs().iter().filter(|a| a.1 == v).count(), 1);
        }
    }

    #[test]
    fn validation_errors() {
        let z3 = grp("Z3");
        let asym =
            ConnectionSets::from_lists(z3.clone(), &[vec![vec![], vec![1]], vec![vec![1], vec![]]])
                .unwrap();
        match MCayleyDigraph::build(asym.clone(), Mode::Graph) {
            Err(Error::ModeViolation { i: 0, j: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(MCayleyDigraph::build(asym, Mode::Digraph).is_ok());
        let loop_ = ConnectionSets::from_lists(z3.clone(), &[vec![vec![0]]]).unwrap();
        assert!(MCayleyDigraph::build(loop_, Mode::Digraph).is_err());
        let diag = ConnectionSets::from_lists(z3, &[vec![vec![1, 2]]]).unwrap();
        assert!(MCayleyDigraph::build(diag.clone(), Mode::Graph).is_ok());
        assert!(MCayleyDigraph::build(diag, Mode::PcayleyGraph).is_err());
    }

    #[test]
    fn complements_are_involutions() {
        let g = f2();
        assert_eq!(g.complement().complement().conn(), g.conn());
        let pc = MCayleyDigraph::build(
            ConnectionSets::from_lists(
                grp("Z4"),
                &[vec![vec![], vec![0, 1]], vec![vec![0, 3], vec![]]],
            )
            .unwrap(),
            Mode::PcayleyGraph,
        )
        .unwrap();
        let mc = pc.multipartite_complement().unwrap();
        assert_eq!(mc.conn().get(0, 1).to_vec(), vec![2, 3]);
        assert_eq!(mc.multipartite_complement().unwrap().conn(), pc.conn());
        assert!(g.multipartite_complement().is_err());
        // complement has no loops
        let c = g.complement();
        assert!(c.arcs().iter().all(|&(u, v)| u != v));
        assert_eq!(c.arcs().len() + g.arcs().len(), 6 * 5);
    }

    #[test]
    fn components_and_blocks() {
        let z3 = grp("Z3");
        let c = ConnectionSets::from_lists(
            z3,
            &[
                vec![vec![], vec![0], vec![]],
                vec![vec![0], vec![], vec![]],
                vec![vec![], vec![], vec![]],
            ],
        )
        .unwrap();
        let g = MCayleyDigraph::build(c, Mode::PcayleyGraph).unwrap();
        assert_eq!(g.block_components(), vec![vec![0, 1], vec![2]]);
        assert_eq!(g.weak_components().len(), 3 + 3);
        let sub = g.induced(&[0, 3, 1]);
        assert_eq!(sub.vertices, vec![0, 1, 3]);
        assert_eq!(sub.arcs, vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn edge_types() {
        let d6 = grp("D6");
        let h = [0, 1, 2];
        let build = |s: Vec<usize>| {
            let inv: Vec<usize> = s.iter().map(|&x| d6.inv(x)).collect();
            MCayleyDigraph::build(
                ConnectionSets::from_lists(d6.clone(), &[vec![vec![], s], vec![inv, vec![]]])
                    .unwrap(),
                Mode::PcayleyGraph,
            )
            .unwrap()
        };
        assert_eq!(
            build(vec![]).classify_edge_type(0, 1, &h).unwrap(),
            EdgeType::Empty
        );
        assert_eq!(
            build(vec![0, 1, 2]).classify_edge_type(0, 1, &h).unwrap(),
            EdgeType::K33
        );
        assert_eq!(
            build(vec![3, 4, 5]).classify_edge_type(0, 1, &h).unwrap(),
            EdgeType::K33
        );
        // {1, b}: components are 4-cycles
        assert_eq!(
            build(vec![0, 3]).classify_edge_type(0, 1, &h).unwrap(),
            EdgeType::K22
        );
        assert_eq!(
            build(vec![0]).classify_edge_type(0, 1, &h).unwrap(),
            EdgeType::Other
        );
        let g = build(vec![0, 1, 2]);
        let d = g.delete_k33_edges(&h).unwrap();
        assert!(d.arcs().is_empty());
    }

    #[test]
    fn arcs_roundtrip() {
        let g = f2();
        let back =
            connection_sets_from_arcs(g.conn().group_arc().clone(), 2, g.arcs(), Mode::Digraph)
                .unwrap();
        assert_eq!(back.conn(), g.conn());
        assert!(connection_sets_from_arcs(
            g.conn().group_arc().clone(),
            2,
            &[(0, 1)],
            Mode::Digraph
        )
        .is_err());
    }

    #[test]
    fn json_file() {
        let txt = r#"{"group":"Z3","m":2,"mode":"digraph","sets":[[[1],[0,1,2]],[[],[1]]]}"#;
        let f: ConnectionSetsFile = serde_json::from_str(txt).unwrap();
        let g = f.build(&Limits::default()).unwrap();
        assert_eq!(g, f2());
        assert_eq!(
            serde_json::to_string(&ConnectionSetsFile::of(&g)).unwrap(),
            txt
        );
        assert!(g.export_dimacs().contains("p arc 6 15"));
    }
}
