//! Permutations and permutation groups under the right-action convention:
//! `x^(pq) = (x^p)^q`, so `p.then(q)` applies `p` first.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{map:?} is not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation(map))
    }

    /// Caller guarantees `map` is a bijection of `0..map.len()`.
    pub fn from_vec_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(map.clone()).is_ok());
        Permutation(map)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Build from disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidPermutation(format!("point {x} out of range")));
                }
                map[x] = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(map)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// Product `self·other`: apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    /// `c⁻¹·self·c`.
    pub fn conjugate_by(&self, c: &Permutation) -> Permutation {
        let mut out = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[c.0[x]] = c.0[y];
        }
        Permutation(out)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Permutation::identity(self.degree()), |acc, _| {
            acc.then(self)
        })
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i != x)
    }

    /// Cycles (including fixed points), each starting at its minimum, ordered by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    /// If every cycle has the same length `d`, returns `Some(d)`.
    pub fn uniform_cycle_length(&self) -> Option<usize> {
        let n = self.0.len();
        if n == 0 {
            return Some(1);
        }
        let mut seen = vec![false; n];
        let mut len = None;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut l = 1;
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                l += 1;
                x = self.0[x];
            }
            match len {
                None => len = Some(l),
                Some(d) if d != l => return None,
                _ => {}
            }
        }
        len
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }

    /// Restriction to the first `n` points (which must be an invariant set).
    pub fn restrict(&self, n: usize) -> Result<Permutation> {
        Permutation::new(self.0[..n].to_vec())
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / crate::util::gcd(a, b) * b
}

/// Partition of the points into orbits; blocks sorted, ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        OrbitPartition { blocks }
    }

    /// The parts `G_1, …, G_m` of an m-Cayley digraph on `m·order` points.
    pub fn parts(order: usize, m: usize) -> Self {
        OrbitPartition {
            blocks: (0..m)
                .map(|i| (i * order..(i + 1) * order).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Orbits of the group generated by `gens` on `0..degree`.
pub fn orbits_of(degree: usize, gens: &[Permutation]) -> OrbitPartition {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for g in gens {
        for x in 0..degree {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); degree];
    for x in 0..degree {
        let r = find(&mut parent, x);
        blocks[r].push(x);
    }
    OrbitPartition::from_blocks(blocks)
}

/// Orbit of one point, in BFS order.
pub fn orbit_of_point(point: usize, gens: &[Permutation]) -> Vec<usize> {
    let mut orbit = vec![point];
    let mut seen = HashSet::from([point]);
    let mut head = 0;
    while head < orbit.len() {
        let x = orbit[head];
        head += 1;
        for g in gens {
            let y = g.apply(x);
            if seen.insert(y) {
                orbit.push(y);
            }
        }
    }
    orbit
}

/// A permutation group. Serializes as `{"degree", "generators"}`; the element
/// list, when present, is sorted lexicographically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    #[serde(skip)]
    pub elements: Option<Vec<Permutation>>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements.is_some() && self.elements == other.elements
    }
}

impl PermGroup {
    /// Generated group, with its element list. Errors if it exceeds `bound` elements.
    pub fn closure(degree: usize, gens: &[Permutation], bound: usize) -> Result<PermGroup> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
        }
        let elements = closure_elements(degree, gens, bound)?;
        Ok(PermGroup {
            degree,
            generators: gens.to_vec(),
            elements: Some(elements),
        })
    }

    /// Wrap a full element list (must be closed); generators chosen greedily.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> PermGroup {
        elements.sort();
        elements.dedup();
        let generators = greedy_generators(degree, &elements);
        PermGroup {
            degree,
            generators,
            elements: Some(elements),
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len())
    }

    pub fn elements(&self) -> Result<&[Permutation]> {
        self.elements
            .as_deref()
            .ok_or_else(|| Error::Unsupported("permutation group has no element list".into()))
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    pub fn orbits(&self) -> OrbitPartition {
        orbits_of(self.degree, &self.generators)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.then(b) == b.then(a)))
    }

    /// Conjugate `c⁻¹ H c` with sorted element list.
    pub fn conjugate_by(&self, c: &Permutation) -> Result<PermGroup> {
        let mut elements: Vec<Permutation> =
            self.elements()?.iter().map(|h| h.conjugate_by(c)).collect();
        elements.sort();
        Ok(PermGroup {
            degree: self.degree,
            generators: self.generators.iter().map(|h| h.conjugate_by(c)).collect(),
            elements: Some(elements),
        })
    }
}

fn closure_elements(degree: usize, gens: &[Permutation], bound: usize) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut list = vec![id];
    let mut head = 0;
    while head < list.len() {
        let x = list[head].clone();
        head += 1;
        for g in gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if list.len() >= bound {
                    return Err(Error::ElementBound { bound });
                }
                seen.insert(y.clone());
                list.push(y);
            }
        }
    }
    list.sort();
    Ok(list)
}

/// Scan a sorted element list and keep each element not yet generated.
pub fn greedy_generators(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut sub: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for e in elements {
        if sub.len() == elements.len() {
            break;
        }
        if !sub.contains(e) {
            gens.push(e.clone());
            sub = closure_elements(degree, &gens, usize::MAX)
                .unwrap()
                .into_iter()
                .collect();
        }
    }
    gens
}

/// `R(x)` on `m` copies of `G`: `y_i ↦ (y·x)_i`, with flat index `i·|G| + y`.
pub fn right_regular_element(g: &FiniteGroup, m: usize, x: usize) -> Permutation {
    let n = g.order();
    Permutation((0..m * n).map(|v| (v / n) * n + g.mul(v % n, x)).collect())
}

/// The right regular action `R(G)` on `m` copies of `G`.
pub fn right_regular(g: &FiniteGroup, m: usize) -> PermGroup {
    let mut elements: Vec<Permutation> = (0..g.order())
        .map(|x| right_regular_element(g, m, x))
        .collect();
    elements.sort();
    PermGroup {
        degree: g.order() * m,
        generators: g
            .generators()
            .iter()
            .map(|&x| right_regular_element(g, m, x))
            .collect(),
        elements: Some(elements),
    }
}

/// Every non-identity element is fixed-point-free.
pub fn is_semiregular(h: &PermGroup) -> Result<bool> {
    Ok(h.elements()?
        .iter()
        .all(|p| p.is_identity() || p.is_fixed_point_free()))
}

/// First `c` of `a` (in element order) with `h1^c = h2`.
pub fn conjugate_subgroup_search(
    a: &PermGroup,
    h1: &PermGroup,
    h2: &PermGroup,
) -> Result<Option<Permutation>> {
    for h in h1.elements()?.iter().chain(h2.elements()?) {
        if !a.contains(h)? {
            return Err(Error::Membership(
                "subgroup element outside the ambient group".into(),
            ));
        }
    }
    Ok(conjugator_in(a.elements()?.iter(), h1, h2))
}

/// First element of `candidates` conjugating `h1` onto `h2`.
pub fn conjugator_in<'a>(
    candidates: impl IntoIterator<Item = &'a Permutation>,
    h1: &PermGroup,
    h2: &PermGroup,
) -> Option<Permutation> {
    let target: HashSet<&Permutation> = h2.elements.as_ref()?.iter().collect();
    if h1.elements.as_ref()?.len() != target.len() {
        return None;
    }
    candidates
        .into_iter()
        .find(|c| {
            h1.generators
                .iter()
                .all(|g| target.contains(&g.conjugate_by(c)))
        })
        .cloned()
}

fn all_perms(n: usize) -> impl Iterator<Item = Permutation> {
    crate::util::lex_permutations(n)
        .into_iter()
        .map(Permutation)
}

const BRUTE_MAX_DEGREE: usize = 8;

fn brute_filter(
    n: usize,
    h: &PermGroup,
    keep: impl Fn(&Permutation, &HashSet<&Permutation>) -> bool,
) -> Result<PermGroup> {
    if n > BRUTE_MAX_DEGREE {
        return Err(Error::VertexBound {
            n,
            bound: BRUTE_MAX_DEGREE,
        });
    }
    if h.degree != n {
        return Err(Error::DegreeMismatch(h.degree, n));
    }
    let set: HashSet<&Permutation> = h.elements()?.iter().collect();
    let elements: Vec<Permutation> = all_perms(n).filter(|s| keep(s, &set)).collect();
    Ok(PermGroup::from_elements(n, elements))
}

/// Normalizer of `h` in `S_n` by exhaustive scan (`n ≤ 8`).
pub fn brute_normalizer(n: usize, h: &PermGroup) -> Result<PermGroup> {
    brute_filter(n, h, |s, set| {
        h.generators
            .iter()
            .all(|g| set.contains(&g.conjugate_by(s)))
    })
}

/// Centralizer of `h` in `S_n` by exhaustive scan (`n ≤ 8`).
pub fn brute_centralizer(n: usize, h: &PermGroup) -> Result<PermGroup> {
    brute_filter(n, h, |s, _| {
        h.generators.iter().all(|g| g.then(s) == s.then(g))
    })
}

/// For semiregular `h1, h2` with the same number of orbits and an isomorphism
/// `iso` (given as the images of `h1`'s sorted elements), the permutation
/// `α_i^g ↦ β_i^{g^iso}`, where `α_i, β_i` are the orbit minima. It conjugates
/// `h1` onto `h2`.
pub fn semiregular_conjugator(
    h1: &PermGroup,
    h2: &PermGroup,
    iso: &[Permutation],
) -> Result<Permutation> {
    let e1 = h1.elements()?;
    let e2 = h2.elements()?;
    if h1.degree != h2.degree {
        return Err(Error::DegreeMismatch(h1.degree, h2.degree));
    }
    if !is_semiregular(h1)? || !is_semiregular(h2)? {
        return Err(Error::NotSemiregular("conjugator inputs".into()));
    }
    if iso.len() != e1.len() || e1.len() != e2.len() {
        return Err(Error::NotIsomorphism("size mismatch".into()));
    }
    let pos: std::collections::HashMap<&Permutation, usize> =
        e1.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let set2: HashSet<&Permutation> = e2.iter().collect();
    if iso.iter().collect::<HashSet<_>>().len() != iso.len()
        || !iso.iter().all(|p| set2.contains(p))
    {
        return Err(Error::NotIsomorphism(
            "images are not a bijection onto h2".into(),
        ));
    }
    for (i, a) in e1.iter().enumerate() {
        for (j, b) in e1.iter().enumerate() {
            if iso[pos[&a.then(b)]] != iso[i].then(&iso[j]) {
                return Err(Error::NotIsomorphism("not a homomorphism".into()));
            }
        }
    }
    let o1 = h1.orbits();
    let o2 = h2.orbits();
    if o1.len() != o2.len() {
        return Err(Error::OrbitCount {
            expected: o1.len(),
            found: o2.len(),
        });
    }
    let mut map = vec![usize::MAX; h1.degree];
    for (b1, b2) in o1.blocks.iter().zip(&o2.blocks) {
        let (alpha, beta) = (b1[0], b2[0]);
        for (k, g) in e1.iter().enumerate() {
            map[g.apply(alpha)] = iso[k].apply(beta);
        }
    }
    let c = Permutation::new(map)?;
    debug_assert!(e1.iter().all(|g| set2.contains(&g.conjugate_by(&c))));
    Ok(c)
}
