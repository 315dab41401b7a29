//! Finite groups given by Cayley tables, with automorphisms and isomorphisms.
//!
//! Elements are indices `0..order`; index 0 is always the identity. Products
//! follow the table convention `table[a][b] = a·b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::util::lex_permutations;

/// A group automorphism stored as its image array: `x ↦ images[x]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupAutomorphism {
    pub images: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn identity(order: usize) -> Self {
        GroupAutomorphism {
            images: (0..order).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupAutomorphism {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        GroupAutomorphism { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    order: usize,
    table: Vec<Vec<usize>>,
}

/// A finite group given by its multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    table: Vec<usize>,
    order: usize,
    inverse: Vec<usize>,
    auts: OnceLock<Arc<Vec<GroupAutomorphism>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            name: Some(self.name.clone()),
            order: self.order,
            table: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GroupJson::deserialize(d)?;
        if j.table.len() != j.order {
            return Err(serde::de::Error::custom(
                "table row count differs from order",
            ));
        }
        FiniteGroup::from_table(j.name.unwrap_or_else(|| "G".into()), j.table)
            .map_err(serde::de::Error::custom)
    }
}

impl FiniteGroup {
    /// Build a group from a full table. The identity must be index 0.
    /// Associativity is checked for orders up to 64.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {a} has length {}",
                    row.len()
                )));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(Error::InvalidTable(format!("row {a} is not a permutation")));
                }
                seen[x] = true;
            }
            table.extend_from_slice(row);
        }
        for x in 0..n {
            if table[x] != x || table[x * n] != x {
                return Err(Error::InvalidTable("index 0 is not the identity".into()));
            }
        }
        for b in 0..n {
            let mut seen = vec![false; n];
            for a in 0..n {
                let x = table[a * n + b];
                if seen[x] {
                    return Err(Error::InvalidTable(format!(
                        "column {b} is not a permutation"
                    )));
                }
                seen[x] = true;
            }
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b];
                    for c in 0..n {
                        if table[ab * n + c] != table[a * n + table[b * n + c]] {
                            return Err(Error::InvalidTable(format!(
                                "not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).unwrap();
        }
        Ok(FiniteGroup {
            name: name.into(),
            table,
            order: n,
            inverse,
            auts: OnceLock::new(),
        })
    }

    fn from_mul(name: String, n: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let rows = (0..n)
            .map(|a| (0..n).map(|b| mul(a, b)).collect())
            .collect();
        FiniteGroup::from_table(name, rows).expect("constructed table is a group")
    }

    pub fn cyclic(k: usize) -> Self {
        FiniteGroup::from_mul(format!("Z{k}"), k, |a, b| (a + b) % k)
    }

    /// Dihedral group of order `n = 2k`: indices `0..k` are `a^i`, `k..2k` are `b·a^i`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddDihedral(n));
        }
        let k = n / 2;
        Ok(FiniteGroup::from_mul(format!("D{n}"), n, |x, y| {
            let (xr, xi) = (x >= k, x % k);
            let (yr, yi) = (y >= k, y % k);
            // a^i b = b a^{-i}
            let i = if yr { (k - xi) % k } else { xi };
            let e = (i + yi) % k;
            if xr != yr {
                k + e
            } else {
                e
            }
        }))
    }

    /// Symmetric group on `n` points; elements are the permutations in
    /// lexicographic order and `p·q` applies `p` first.
    pub fn symmetric(n: usize) -> Self {
        let perms = lex_permutations(n);
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        FiniteGroup::from_mul(format!("S{n}"), perms.len(), |a, b| {
            let p = &perms[a];
            let q = &perms[b];
            index[&p.iter().map(|&i| q[i]).collect::<Vec<_>>()]
        })
    }

    /// Direct product; the pair `(x, y)` has index `x + |A|·y`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let na = a.order;
        FiniteGroup::from_mul(format!("{}x{}", a.name, b.name), na * b.order, |x, y| {
            a.mul(x % na, y % na) + na * b.mul(x / na, y / na)
        })
    }

    /// Regular representation of a permutation group given by its full element list.
    pub fn from_permutations(name: impl Into<String>, elements: &[Vec<usize>]) -> Result<Self> {
        let mut elems = elements.to_vec();
        elems.sort();
        elems.dedup();
        let index: HashMap<&[usize], usize> = elems
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let n = elems.len();
        let mut rows = Vec::with_capacity(n);
        for p in &elems {
            let mut row = Vec::with_capacity(n);
            for q in &elems {
                let pq: Vec<usize> = p.iter().map(|&i| q[i]).collect();
                match index.get(pq.as_slice()) {
                    Some(&k) => row.push(k),
                    None => return Err(Error::InvalidTable("element list not closed".into())),
                }
            }
            rows.push(row);
        }
        FiniteGroup::from_table(name, rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Greedy generating set: scan elements in index order and keep each one
    /// not already in the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![0];
        for x in 1..self.order {
            if sub.binary_search(&x).is_err() {
                gens.push(x);
                sub = self.subgroup_generated(&gens);
                if sub.len() == self.order {
                    break;
                }
            }
        }
        gens
    }

    /// Inner automorphism `x ↦ g⁻¹ x g`.
    pub fn inner(&self, g: usize) -> GroupAutomorphism {
        let gi = self.inv(g);
        GroupAutomorphism {
            images: (0..self.order)
                .map(|x| self.mul(self.mul(gi, x), g))
                .collect(),
        }
    }

    pub fn is_automorphism(&self, a: &GroupAutomorphism) -> bool {
        let n = self.order;
        if a.images.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in &a.images {
            if y >= n || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        (0..n)
            .all(|x| (0..n).all(|y| a.images[self.mul(x, y)] == self.mul(a.images[x], a.images[y])))
    }

    /// All automorphisms sorted lexicographically by image array (identity first).
    pub fn automorphisms(&self) -> Arc<Vec<GroupAutomorphism>> {
        self.auts
            .get_or_init(|| {
                let gens = self.generators();
                let mut out = Vec::new();
                homomorphisms_from(self, &gens, self, true, &mut |imgs| {
                    out.push(GroupAutomorphism {
                        images: imgs.to_vec(),
                    });
                    true
                });
                out.sort();
                Arc::new(out)
            })
            .clone()
    }

    /// Number of elements of each order, indexed by order.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut prof = vec![0; self.order + 1];
        for a in 0..self.order {
            prof[self.element_order(a)] += 1;
        }
        prof
    }

    /// Abelian invariants as a sorted list of prime powers, or `None` if non-abelian.
    pub fn abelian_invariants(&self) -> Option<Vec<usize>> {
        if !self.is_abelian() {
            return None;
        }
        let mut out = Vec::new();
        for p in prime_factors(self.order) {
            // omega[i] = #{x : x^(p^i) = 1}
            let mut omega = vec![1usize];
            let mut pi = 1;
            loop {
                pi *= p;
                let c = (0..self.order).filter(|&x| self.pow(x, pi) == 0).count();
                if c == *omega.last().unwrap() {
                    break;
                }
                omega.push(c);
            }
            // number of cyclic factors of order >= p^i is log_p(omega[i]/omega[i-1])
            let logs: Vec<usize> = (1..omega.len())
                .map(|i| ilog(omega[i] / omega[i - 1], p))
                .collect();
            for (i, &cnt) in logs.iter().enumerate() {
                let next = logs.get(i + 1).copied().unwrap_or(0);
                for _ in 0..cnt - next {
                    out.push(p.pow(i as u32 + 1));
                }
            }
        }
        out.sort();
        Some(out)
    }

    /// Elements of the Sylow `p`-subgroup if it is normal (i.e. unique).
    pub fn normal_sylow(&self, p: usize) -> Option<Vec<usize>> {
        let mut pp = 1;
        while self.order % (pp * p) == 0 {
            pp *= p;
        }
        let elems: Vec<usize> = (0..self.order)
            .filter(|&x| {
                let o = self.element_order(x);
                pp % o == 0
            })
            .collect();
        (elems.len() == pp).then_some(elems)
    }

    /// Subgroup on a sorted element list, re-indexed by position.
    pub fn subgroup(&self, elems: &[usize]) -> Result<FiniteGroup> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        if elems.first() != Some(&0) {
            return Err(Error::InvalidTable(
                "subgroup must list the identity first".into(),
            ));
        }
        let mut rows = Vec::new();
        for &a in elems {
            let mut row = Vec::new();
            for &b in elems {
                match pos.get(&self.mul(a, b)) {
                    Some(&k) => row.push(k),
                    None => return Err(Error::InvalidTable("subset not closed".into())),
                }
            }
            rows.push(row);
        }
        FiniteGroup::from_table(format!("sub({})", self.name), rows)
    }

    /// Quotient by a normal subgroup given by its element list.
    pub fn quotient(&self, normal: &[usize]) -> Result<FiniteGroup> {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] == usize::MAX {
                let c = reps.len();
                reps.push(x);
                for &h in normal {
                    coset_of[self.mul(h, x)] = c;
                }
            }
        }
        let rows = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect())
            .collect();
        FiniteGroup::from_table(format!("{}/N", self.name), rows)
    }

    /// Short structural description: abelian groups as products of cyclic
    /// primary factors (`Z3xZ3`), otherwise `(P):(Q)` for a normal Sylow
    /// subgroup `P` with quotient `Q`, or `G<n>` when neither applies.
    pub fn shape_tag(&self) -> String {
        if let Some(inv) = self.abelian_invariants() {
            if inv.is_empty() {
                return "Z1".into();
            }
            return inv
                .iter()
                .map(|q| format!("Z{q}"))
                .collect::<Vec<_>>()
                .join("x");
        }
        for p in prime_factors(self.order) {
            if let Some(syl) = self.normal_sylow(p) {
                if syl.len() == self.order {
                    continue;
                }
                let sub = self.subgroup(&syl).expect("Sylow subgroup").shape_tag();
                let q = self.quotient(&syl).expect("normal subgroup").shape_tag();
                return format!("({sub}):({q})");
            }
        }
        format!("G{}", self.order)
    }
}

fn ilog(mut x: usize, p: usize) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Enumerate homomorphisms `src → dst` determined by images of `gens`
/// (tried in ascending index order). With `bijective`, only isomorphisms are
/// reported. The callback returns `false` to stop.
fn homomorphisms_from(
    src: &FiniteGroup,
    gens: &[usize],
    dst: &FiniteGroup,
    bijective: bool,
    f: &mut dyn FnMut(&[usize]) -> bool,
) {
    let orders: Vec<usize> = gens.iter().map(|&g| src.element_order(g)).collect();
    let cands: Vec<Vec<usize>> = orders
        .iter()
        .map(|&o| {
            (0..dst.order)
                .filter(|&y| {
                    let oy = dst.element_order(y);
                    if bijective {
                        oy == o
                    } else {
                        o % oy == 0
                    }
                })
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    fn rec(
        depth: usize,
        src: &FiniteGroup,
        gens: &[usize],
        dst: &FiniteGroup,
        cands: &[Vec<usize>],
        choice: &mut Vec<usize>,
        bijective: bool,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == gens.len() {
            if let Some(imgs) = extend_hom(src, gens, dst, choice) {
                if bijective {
                    let mut seen = vec![false; dst.order];
                    for &y in &imgs {
                        if seen[y] {
                            return true;
                        }
                        seen[y] = true;
                    }
                }
                return f(&imgs);
            }
            return true;
        }
        for &y in &cands[depth] {
            choice[depth] = y;
            if !rec(depth + 1, src, gens, dst, cands, choice, bijective, f) {
                return false;
            }
        }
        true
    }
    if src.order != dst.order && bijective {
        return;
    }
    rec(0, src, gens, dst, &cands, &mut choice, bijective, f);
}

/// Extend generator images to a homomorphism on all of `src`, if consistent.
fn extend_hom(
    src: &FiniteGroup,
    gens: &[usize],
    dst: &FiniteGroup,
    imgs: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; src.order];
    map[0] = 0;
    let mut queue = vec![0];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (j, &g) in gens.iter().enumerate() {
            let y = src.mul(x, g);
            let v = dst.mul(map[x], imgs[j]);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    (queue.len() == src.order).then_some(map)
}

/// First isomorphism `a → b` in the search order, as an image array.
pub fn groups_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order != b.order || a.order_profile() != b.order_profile() {
        return None;
    }
    let gens = a.generators();
    let mut found = None;
    homomorphisms_from(a, &gens, b, true, &mut |imgs| {
        found = Some(imgs.to_vec());
        false
    });
    found
}

/// Parse a named group token: `Zk`, `Dn` (n even, order n), `Sn` (n ≤ 4),
/// products joined by `x` such as `Z2xZ2`, and powers such as `Z2^3`.
pub fn make_named_group(token: &str) -> Result<FiniteGroup> {
    make_named_group_with(token, &Limits::default())
}

pub fn make_named_group_with(token: &str, limits: &Limits) -> Result<FiniteGroup> {
    let token = token.trim();
    let unknown = || Error::UnknownGroup(token.to_string());
    let mut factors = Vec::new();
    for part in token.split('x') {
        let (base, power) = match part.split_once('^') {
            Some((b, p)) => (b, p.parse::<usize>().map_err(|_| unknown())?),
            None => (part, 1),
        };
        if power == 0 {
            return Err(unknown());
        }
        let mut chars = base.chars();
        let kind = chars.next().ok_or_else(unknown)?;
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        let order_est = match kind {
            'Z' | 'D' => n,
            'S' if n <= 4 => (1..=n).product(),
            _ => return Err(unknown()),
        };
        if order_est > limits.group_order {
            return Err(Error::GroupOrderBound {
                order: order_est,
                bound: limits.group_order,
            });
        }
        let g = match kind {
            'Z' => FiniteGroup::cyclic(n),
            'D' => FiniteGroup::dihedral(n)?,
            _ => FiniteGroup::symmetric(n),
        };
        for _ in 0..power {
            factors.push(g.clone());
        }
    }
    let total: usize = factors.iter().map(|g| g.order()).product();
    if total > limits.group_order {
        return Err(Error::GroupOrderBound {
            order: total,
            bound: limits.group_order,
        });
    }
    let mut it = factors.into_iter();
    let mut g = it.next().ok_or_else(unknown)?;
    for h in it {
        g = FiniteGroup::direct_product(&g, &h);
    }
    g.name = token.to_string();
    Ok(g)
}

/// Either a named token or an inline table, as accepted in JSON inputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Inline(FiniteGroup),
}

impl GroupSpec {
    pub fn resolve(&self, limits: &Limits) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Named(t) => make_named_group_with(t, limits),
            GroupSpec::Inline(g) => {
                if g.order() > limits.group_order {
                    return Err(Error::GroupOrderBound {
                        order: g.order(),
                        bound: limits.group_order,
                    });
                }
                Ok(g.clone())
            }
        }
    }

    pub fn of(g: &FiniteGroup) -> GroupSpec {
        match make_named_group(g.name()) {
            Ok(h) if &h == g => GroupSpec::Named(g.name().to_string()),
            _ => GroupSpec::Inline(g.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_table() {
        let g = make_named_group("Z3").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(1, 1), 2);
        assert_eq!(g.mul(1, 2), 0);
    }

    #[test]
    fn d6_relation() {
        let g = make_named_group("D6").unwrap();
        let (a, b) = (1, 3);
        assert_eq!(g.mul(g.mul(b, a), b), 2);
        assert_eq!(g.element_order(a), 3);
        assert_eq!(g.element_order(b), 2);
        assert!(!g.is_abelian());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            make_named_group("Q8"),
            Err(Error::UnknownGroup(_))
        ));
        assert!(matches!(make_named_group("D5"), Err(Error::OddDihedral(5))));
        assert!(matches!(
            make_named_group("Z30"),
            Err(Error::GroupOrderBound { .. })
        ));
    }

    #[test]
    fn automorphism_counts() {
        let count = |t: &str| make_named_group(t).unwrap().automorphisms().len();
        assert_eq!(count("Z3"), 2);
        assert_eq!(count("D6"), 6);
        assert_eq!(count("Z2xZ2"), 6);
        assert_eq!(count("Z2^2"), 6);
        assert_eq!(count("Z4"), 2);
        assert_eq!(count("Z3xZ3"), 48);
        assert_eq!(count("S3"), 6);
        assert_eq!(count("Z1"), 1);
        let z6 = make_named_group("Z6").unwrap();
        assert!(z6.automorphisms()[0].is_identity());
    }

    #[test]
    fn isomorphism_search() {
        let z6 = make_named_group("Z6").unwrap();
        let d6 = make_named_group("D6").unwrap();
        let s3 = make_named_group("S3").unwrap();
        assert!(groups_isomorphic(&z6, &d6).is_none());
        let phi = groups_isomorphic(&d6, &s3).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(phi[d6.mul(x, y)], s3.mul(phi[x], phi[y]));
            }
        }
        let z2z3 = make_named_group("Z2xZ3").unwrap();
        assert!(groups_isomorphic(&z6, &z2z3).is_some());
    }

    #[test]
    fn subgroups() {
        let z6 = make_named_group("Z6").unwrap();
        assert_eq!(z6.subgroup_generated(&[2]), vec![0, 2, 4]);
        assert_eq!(z6.generators(), vec![1]);
        let v = make_named_group("Z2xZ2").unwrap();
        assert_eq!(v.generators(), vec![1, 2]);
    }

    #[test]
    fn shapes() {
        assert_eq!(make_named_group("Z3xZ3").unwrap().shape_tag(), "Z3xZ3");
        assert_eq!(make_named_group("Z6").unwrap().shape_tag(), "Z2xZ3");
        assert_eq!(make_named_group("Z2^4").unwrap().shape_tag(), "Z2xZ2xZ2xZ2");
        assert_eq!(make_named_group("Z4xZ2").unwrap().shape_tag(), "Z2xZ4");
        assert_eq!(make_named_group("D6").unwrap().shape_tag(), "(Z3):(Z2)");
        assert_eq!(make_named_group("S4").unwrap().shape_tag(), "G24");
    }

    #[test]
    fn json_roundtrip() {
        let g = make_named_group("D6").unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let h: FiniteGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
        let bad = r#"{"order":2,"table":[[0,1],[1,1]]}"#;
        assert!(serde_json::from_str::<FiniteGroup>(bad).is_err());
        let spec: GroupSpec = serde_json::from_str("\"Z4\"").unwrap();
        assert_eq!(spec.resolve(&Limits::default()).unwrap().order(), 4);
    }

    #[test]
    fn inner_is_automorphism() {
        let g = make_named_group("D6").unwrap();
        for x in 0..6 {
            let a = g.inner(x);
            assert!(g.is_automorphism(&a));
            assert!(g.automorphisms().contains(&a));
        }
    }
}
