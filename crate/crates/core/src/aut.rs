//! Automorphism groups and isomorphisms of small vertex-colored digraphs.
//!
//! Equitable partition refinement with individualization. The first path of
//! the search tree fixes a base; for each level the orbit of the base point
//! under the pointwise stabilizer of the earlier points is completed by
//! searching for one automorphism per new image, skipping images already in a
//! known orbit. The result is a base with strong generating set, from which
//! the order and every element follow.

use std::collections::HashMap;

use crate::digraph::MCayleyDigraph;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perms::{orbit_of_point, PermGroup, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDigraph {
    n: usize,
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
    colors: Vec<u32>,
    arcs: Vec<(usize, usize)>,
}

/// How the part structure of an m-Cayley digraph enters the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartMode {
    /// No constraint: the full group `Aut(Γ)`.
    Free,
    /// Each part is its own color: `Aut(Γ)_(𝒢)`.
    Fixed,
    /// Parts may be permuted among themselves: the stabilizer of the partition.
    Preserved,
}

impl ColoredDigraph {
    pub fn new(n: usize, arcs: &[(usize, usize)], colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n {
            return Err(Error::Incompatible(format!(
                "{} colors for {n} vertices",
                colors.len()
            )));
        }
        let words = n.div_ceil(64).max(1);
        let mut out = vec![0u64; n * words];
        let mut inn = vec![0u64; n * words];
        let mut list = Vec::with_capacity(arcs.len());
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::Incompatible(format!("arc ({u},{v}) out of range")));
            }
            if out[u * words + v / 64] >> (v % 64) & 1 == 0 {
                out[u * words + v / 64] |= 1 << (v % 64);
                inn[v * words + u / 64] |= 1 << (u % 64);
                list.push((u, v));
            }
        }
        list.sort_unstable();
        Ok(ColoredDigraph {
            n,
            words,
            out,
            inn,
            colors,
            arcs: list,
        })
    }

    pub fn uncolored(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        ColoredDigraph::new(n, arcs, vec![0; n])
    }

    /// The m-Cayley digraph with part information per `mode`. With
    /// `Preserved`, one extra vertex per part (color 1) points to its part.
    pub fn from_mcayley(g: &MCayleyDigraph, mode: PartMode) -> Self {
        let n = g.n();
        let k = g.group().order();
        match mode {
            PartMode::Free => ColoredDigraph::uncolored(n, g.arcs()).unwrap(),
            PartMode::Fixed => {
                ColoredDigraph::new(n, g.arcs(), (0..n).map(|v| (v / k) as u32).collect()).unwrap()
            }
            PartMode::Preserved => {
                let mut arcs = g.arcs().to_vec();
                for v in 0..n {
                    arcs.push((n + v / k, v));
                }
                let colors = (0..n + g.m()).map(|v| u32::from(v >= n)).collect();
                ColoredDigraph::new(n + g.m(), &arcs, colors).unwrap()
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Color- and arc-preserving bijection onto `other`.
    pub fn is_isomorphism_to(&self, other: &ColoredDigraph, p: &Permutation) -> bool {
        p.degree() == self.n
            && other.n == self.n
            && self.arcs.len() == other.arcs.len()
            && (0..self.n).all(|v| self.colors[v] == other.colors[p.apply(v)])
            && self
                .arcs
                .iter()
                .all(|&(u, v)| other.has_arc(p.apply(u), p.apply(v)))
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        self.is_isomorphism_to(self, p)
    }
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2))
    .wrapping_mul(0x100_0000_01B3)
}

/// Ordered partition of the vertex set.
#[derive(Clone, Debug)]
struct Partition {
    cells: Vec<Vec<usize>>,
    trace: u64,
}

impl Partition {
    fn root(g: &ColoredDigraph) -> Partition {
        let mut by_color: Vec<(u32, usize)> =
            g.colors.iter().enumerate().map(|(v, &c)| (c, v)).collect();
        by_color.sort_unstable();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut trace = 0u64;
        let mut last = None;
        for (c, v) in by_color {
            if last != Some(c) {
                cells.push(Vec::new());
                trace = mix(trace, c as u64);
                last = Some(c);
            }
            cells.last_mut().unwrap().push(v);
        }
        for c in &cells {
            trace = mix(trace, c.len() as u64);
        }
        let mut p = Partition { cells, trace };
        p.refine(g);
        p
    }

    /// First cell of maximal size, if any cell is non-singleton.
    fn target(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, c) in self.cells.iter().enumerate() {
            if c.len() > 1 && best.is_none_or(|b| c.len() > self.cells[b].len()) {
                best = Some(i);
            }
        }
        best
    }

    fn shape_eq(&self, other: &Partition) -> bool {
        self.trace == other.trace
            && self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.len() == b.len())
    }

    fn individualize(&self, g: &ColoredDigraph, cell: usize, v: usize) -> Partition {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..cell]);
        cells.push(vec![v]);
        cells.push(
            self.cells[cell]
                .iter()
                .copied()
                .filter(|&x| x != v)
                .collect(),
        );
        cells.extend_from_slice(&self.cells[cell + 1..]);
        let mut p = Partition {
            cells,
            trace: mix(self.trace, 0xABCD ^ cell as u64),
        };
        p.refine(g);
        p
    }

    /// Split cells by (out, in) neighbour counts into every cell until stable.
    fn refine(&mut self, g: &ColoredDigraph) {
        let w = g.words;
        let mut masks: Vec<u64> = Vec::new();
        let mut sig: Vec<u32> = Vec::new();
        let mut order: Vec<usize> = Vec::new();
        loop {
            let k = self.cells.len();
            if k == g.n {
                return;
            }
            masks.clear();
            masks.resize(k * w, 0);
            for (c, cell) in self.cells.iter().enumerate() {
                for &v in cell {
                    masks[c * w + v / 64] |= 1 << (v % 64);
                }
            }
            let width = 2 * k;
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(k);
            for cell in &self.cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                sig.clear();
                for &v in cell {
                    let ov = &g.out[v * w..(v + 1) * w];
                    let iv = &g.inn[v * w..(v + 1) * w];
                    for c in 0..k {
                        let m = &masks[c * w..(c + 1) * w];
                        let mut o = 0;
                        let mut i = 0;
                        for t in 0..w {
                            o += (ov[t] & m[t]).count_ones();
                            i += (iv[t] & m[t]).count_ones();
                        }
                        sig.push(o);
                        sig.push(i);
                    }
                }
                let row = |a: usize| &sig[a * width..(a + 1) * width];
                order.clear();
                order.extend(0..cell.len());
                order.sort_unstable_by(|&a, &b| row(a).cmp(row(b)).then(cell[a].cmp(&cell[b])));
                let mut start = 0;
                for idx in 1..=order.len() {
                    if idx == order.len() || row(order[idx]) != row(order[start]) {
                        let sub: Vec<usize> = order[start..idx].iter().map(|&a| cell[a]).collect();
                        let mut h = mix(self.trace, sub.len() as u64);
                        for &x in row(order[start]) {
                            h = mix(h, x as u64);
                        }
                        self.trace = h;
                        next.push(sub);
                        start = idx;
                    }
                }
            }
            let changed = next.len() != k;
            self.cells = next;
            if !changed {
                return;
            }
        }
    }

    fn leaf(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }
}

struct FirstPath {
    nodes: Vec<Partition>,
    targets: Vec<usize>,
    base: Vec<usize>,
    leaf: Vec<usize>,
}

fn first_path(g: &ColoredDigraph) -> FirstPath {
    let mut nodes = vec![Partition::root(g)];
    let mut targets = Vec::new();
    let mut base = Vec::new();
    while let Some(t) = nodes.last().unwrap().target() {
        let cur = nodes.last().unwrap();
        let b = cur.cells[t][0];
        let child = cur.individualize(g, t, b);
        targets.push(t);
        base.push(b);
        nodes.push(child);
    }
    let leaf = nodes.last().unwrap().leaf();
    FirstPath {
        nodes,
        targets,
        base,
        leaf,
    }
}

/// Depth-first search below `node` (at `depth`, shape-equal to the reference
/// path) for a leaf that yields a valid map from `reference` graph to `h`.
fn search_leaf(
    g: &ColoredDigraph,
    h: &ColoredDigraph,
    path: &FirstPath,
    node: &Partition,
    depth: usize,
) -> Option<Permutation> {
    if depth == path.targets.len() {
        let leaf = node.leaf();
        let mut map = vec![0; g.n];
        for (p, &v) in path.leaf.iter().enumerate() {
            map[v] = leaf[p];
        }
        let perm = Permutation::from_vec_unchecked(map);
        return g.is_isomorphism_to(h, &perm).then_some(perm);
    }
    let t = path.targets[depth];
    for &v in &node.cells[t] {
        let child = node.individualize(h, t, v);
        if child.shape_eq(&path.nodes[depth + 1]) {
            if let Some(p) = search_leaf(g, h, path, &child, depth + 1) {
                return Some(p);
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    orbit: Vec<usize>,
    reps: HashMap<usize, Permutation>,
}

/// Automorphism group as a base with strong generating set.
#[derive(Clone, Debug)]
pub struct AutGroup {
    degree: usize,
    base: Vec<usize>,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl AutGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let mut cur = p.clone();
        for l in &self.levels {
            let x = cur.apply(l.point);
            match l.reps.get(&x) {
                Some(r) => cur = cur.then(&r.inverse()),
                None => return false,
            }
        }
        cur.is_identity()
    }

    /// Visit every element once; the callback returns `false` to stop early.
    /// Returns `false` if stopped.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation) -> bool) -> bool {
        let reps: Vec<Vec<&Permutation>> = self
            .levels
            .iter()
            .map(|l| l.orbit.iter().map(|x| &l.reps[x]).collect())
            .collect();
        fn rec(
            reps: &[Vec<&Permutation>],
            level: usize,
            acc: &Permutation,
            f: &mut dyn FnMut(&Permutation) -> bool,
        ) -> bool {
            if level == 0 {
                return f(acc);
            }
            for r in &reps[level - 1] {
                if !rec(reps, level - 1, &acc.then(r), f) {
                    return false;
                }
            }
            true
        }
        rec(
            &reps,
            reps.len(),
            &Permutation::identity(self.degree),
            &mut f,
        )
    }

    /// All elements, sorted. Errors if the order exceeds the element bound.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Permutation>> {
        if self.order() > limits.elements as u128 {
            return Err(Error::ElementBound {
                bound: limits.elements,
            });
        }
        let mut out = Vec::with_capacity(self.order() as usize);
        self.for_each_element(|p| {
            out.push(p.clone());
            true
        });
        out.sort();
        Ok(out)
    }

    /// As a `PermGroup`; the element list is filled when within the bound.
    pub fn to_perm_group(&self, limits: &Limits) -> PermGroup {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            elements: self.elements(limits).ok(),
        }
    }

    /// Restrict to the first `n` points, which must form an invariant set
    /// on which the group acts faithfully and which contains the base.
    pub fn restricted(&self, n: usize) -> Result<AutGroup> {
        if self.base.iter().any(|&b| b >= n) {
            return Err(Error::Incompatible(
                "base point outside the restriction".into(),
            ));
        }
        let cut = |p: &Permutation| p.restrict(n);
        Ok(AutGroup {
            degree: n,
            base: self.base.clone(),
            generators: self.generators.iter().map(cut).collect::<Result<_>>()?,
            levels: self
                .levels
                .iter()
                .map(|l| {
                    Ok(Level {
                        point: l.point,
                        orbit: l.orbit.clone(),
                        reps: l
                            .reps
                            .iter()
                            .map(|(&x, r)| Ok((x, cut(r)?)))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

fn check_bound(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.aut_vertices {
        return Err(Error::VertexBound {
            n,
            bound: limits.aut_vertices,
        });
    }
    Ok(())
}

/// The full automorphism group of a colored digraph.
pub fn automorphism_group(g: &ColoredDigraph, limits: &Limits) -> Result<AutGroup> {
    check_bound(g.n, limits)?;
    let path = first_path(g);
    let depth = path.base.len();
    // generators with the level at which they were found (they fix base[..level])
    let mut gens: Vec<(usize, Permutation)> = Vec::new();
    for level in (0..depth).rev() {
        let b = path.base[level];
        let node = &path.nodes[level];
        let t = path.targets[level];
        let level_gens = |gens: &[(usize, Permutation)]| -> Vec<Permutation> {
            gens.iter()
                .filter(|(l, _)| *l >= level)
                .map(|(_, p)| p.clone())
                .collect()
        };
        let mut orbit = orbit_of_point(b, &level_gens(&gens));
        for &w in &node.cells[t] {
            if orbit.contains(&w) {
                continue;
            }
            let child = node.individualize(g, t, w);
            if !child.shape_eq(&path.nodes[level + 1]) {
                continue;
            }
            if let Some(p) = search_leaf(g, g, &path, &child, level + 1) {
                debug_assert!(g.is_automorphism(&p));
                gens.push((level, p));
                orbit = orbit_of_point(b, &level_gens(&gens));
            }
        }
    }
    gens.sort_by_key(|(l, _)| *l);
    let generators: Vec<Permutation> = gens.iter().map(|(_, p)| p.clone()).collect();
    let mut levels = Vec::with_capacity(depth);
    for (level, &b) in path.base.iter().enumerate() {
        let lg: Vec<&Permutation> = gens
            .iter()
            .filter(|(l, _)| *l >= level)
            .map(|(_, p)| p)
            .collect();
        let mut reps = HashMap::from([(b, Permutation::identity(g.n))]);
        let mut orbit = vec![b];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for s in &lg {
                let y = s.apply(x);
                if !reps.contains_key(&y) {
                    let r = reps[&x].then(s);
                    reps.insert(y, r);
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        levels.push(Level {
            point: b,
            orbit,
            reps,
        });
    }
    for p in &generators {
        assert!(g.is_automorphism(p), "search produced a non-automorphism");
    }
    Ok(AutGroup {
        degree: g.n,
        base: path.base,
        generators,
        levels,
    })
}

/// Isomorphism invariant from the equitable refinement of the color partition.
pub fn invariant(g: &ColoredDigraph) -> u64 {
    let p = Partition::root(g);
    p.cells.iter().fold(p.trace, |h, c| mix(h, c.len() as u64))
}

/// A color- and arc-preserving bijection `g → h`, if one exists.
pub fn isomorphism(
    g: &ColoredDigraph,
    h: &ColoredDigraph,
    limits: &Limits,
) -> Result<Option<Permutation>> {
    check_bound(g.n.max(h.n), limits)?;
    if g.n != h.n || g.arcs.len() != h.arcs.len() {
        return Ok(None);
    }
    let path = first_path(g);
    let root = Partition::root(h);
    if !root.shape_eq(&path.nodes[0]) {
        return Ok(None);
    }
    let found = search_leaf(g, h, &path, &root, 0);
    if let Some(p) = &found {
        assert!(
            g.is_isomorphism_to(h, p),
            "search produced a non-isomorphism"
        );
    }
    Ok(found)
}

/// Automorphism group of an m-Cayley digraph with the given part handling,
/// acting on the original vertex set.
pub fn mcayley_automorphisms(
    g: &MCayleyDigraph,
    mode: PartMode,
    limits: &Limits,
) -> Result<AutGroup> {
    check_bound(g.n(), limits)?;
    let cg = ColoredDigraph::from_mcayley(g, mode);
    let relaxed = Limits {
        aut_vertices: limits.aut_vertices + g.m(),
        ..limits.clone()
    };
    let a = automorphism_group(&cg, &relaxed)?;
    if mode == PartMode::Preserved {
        a.restricted(g.n())
    } else {
        Ok(a)
    }
}

/// Isomorphism `Γ → Σ` mapping every part onto a part.
pub fn p_isomorphism(
    g: &MCayleyDigraph,
    h: &MCayleyDigraph,
    limits: &Limits,
) -> Result<Option<Permutation>> {
    if g.group().order() != h.group().order() || g.m() != h.m() {
        return Err(Error::Incompatible(
            "p-isomorphism needs equal |G| and m".into(),
        ));
    }
    check_bound(g.n(), limits)?;
    let a = ColoredDigraph::from_mcayley(g, PartMode::Preserved);
    let b = ColoredDigraph::from_mcayley(h, PartMode::Preserved);
    let relaxed = Limits {
        aut_vertices: limits.aut_vertices + g.m(),
        ..limits.clone()
    };
    Ok(isomorphism(&a, &b, &relaxed)?.map(|p| p.restrict(g.n()).expect("parts map to parts")))
}

/// Plain isomorphism of two m-Cayley digraphs (parts ignored).
pub fn mcayley_isomorphism(
    g: &MCayleyDigraph,
    h: &MCayleyDigraph,
    limits: &Limits,
) -> Result<Option<Permutation>> {
    isomorphism(
        &ColoredDigraph::from_mcayley(g, PartMode::Free),
        &ColoredDigraph::from_mcayley(h, PartMode::Free),
        limits,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::lex_permutations;

    fn brute(g: &ColoredDigraph) -> Vec<Permutation> {
        let mut v: Vec<Permutation> = lex_permutations(g.n())
            .into_iter()
            .map(Permutation::from_vec_unchecked)
            .filter(|p| g.is_automorphism(p))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn empty_and_cycles() {
        let e = ColoredDigraph::uncolored(4, &[]).unwrap();
        assert_eq!(
            automorphism_group(&e, &Limits::default()).unwrap().order(),
            24
        );
        let c5 =
            ColoredDigraph::uncolored(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>())
                .unwrap();
        let a = automorphism_group(&c5, &Limits::default()).unwrap();
        assert_eq!(a.order(), 5);
        assert_eq!(a.elements(&Limits::default()).unwrap(), brute(&c5));
    }

    #[test]
    fn matches_brute_force_on_small_digraphs() {
        let mut rng = crate::util::HashStream::new(7);
        for _ in 0..60 {
            let n = 2 + rng.below(6);
            let arcs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v)
                .filter(|_| rng.below(3) == 0)
                .collect();
            let colors = (0..n).map(|_| rng.below(2) as u32).collect();
            let g = ColoredDigraph::new(n, &arcs, colors).unwrap();
            let a = automorphism_group(&g, &Limits::default()).unwrap();
            let els = a.elements(&Limits::default()).unwrap();
            assert_eq!(els, brute(&g));
            for p in &els {
                assert!(a.contains(p));
            }
        }
    }

    #[test]
    fn isomorphism_cases() {
        let lim = Limits::default();
        let path = ColoredDigraph::uncolored(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        let tri = ColoredDigraph::uncolored(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])
            .unwrap();
        assert!(isomorphism(&path, &tri, &lim).unwrap().is_none());
        let path2 = ColoredDigraph::uncolored(3, &[(0, 2), (2, 0), (1, 2), (2, 1)]).unwrap();
        let p = isomorphism(&path, &path2, &lim).unwrap().unwrap();
        assert!(path.is_isomorphism_to(&path2, &p));
        assert!(isomorphism(&path, &path, &lim).unwrap().is_some());
        let big = ColoredDigraph::uncolored(70, &[]).unwrap();
        assert!(matches!(
            automorphism_group(&big, &lim),
            Err(Error::VertexBound { .. })
        ));
    }
}
