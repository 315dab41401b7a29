//! Degree-6 permutation groups containing a regular dihedral group of
//! order 6, checked by exhaustive search inside `S6`.
//!
//! Points are `0..6`. The fixed regular `D6` is `R(G)` for `G = D6` acting
//! on itself: `R(a) = (0 1 2)(3 4 5)` and `R(b) = (0 3)(1 5)(2 4)`. Its
//! blocks of imprimitivity are `{0,1,2}, {3,4,5}` (cosets of `⟨a⟩`) and the
//! three pairs `{i, b·i}`. The imprimitive groups are built on the first
//! block system.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::groups::FiniteGroup;
use crate::util::lex_permutations;

const DEG: usize = 6;
const ORDER: usize = 720;
const WORDS: usize = ORDER.div_ceil(64);

type Elem = u16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Set([u64; WORDS]);

impl Set {
    fn empty() -> Set {
        Set([0; WORDS])
    }

    fn insert(&mut self, x: Elem) -> bool {
        let (w, b) = (x as usize / 64, x as usize % 64);
        let fresh = self.0[w] >> b & 1 == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    fn contains(&self, x: Elem) -> bool {
        self.0[x as usize / 64] >> (x as usize % 64) & 1 == 1
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..ORDER as Elem).filter(|&x| self.contains(x))
    }
}

/// `S6` with a full multiplication table; `mul(a, b)` applies `a` first.
struct Sym6 {
    perms: Vec<Vec<usize>>,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
}

impl Sym6 {
    fn new() -> Sym6 {
        let perms = lex_permutations(DEG);
        let index: HashMap<Vec<usize>, Elem> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as Elem))
            .collect();
        let mut mul = vec![0; ORDER * ORDER];
        let mut inv = vec![0; ORDER];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let c: Vec<usize> = (0..DEG).map(|x| pb[pa[x]]).collect();
                let c = index[&c];
                mul[a * ORDER + b] = c;
                if c == 0 {
                    inv[a] = b as Elem;
                }
            }
        }
        Sym6 { perms, mul, inv }
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * ORDER + b as usize]
    }

    fn conj(&self, h: Elem, c: Elem) -> Elem {
        self.mul(self.mul(self.inv[c as usize], h), c)
    }

    fn apply(&self, a: Elem, x: usize) -> usize {
        self.perms[a as usize][x]
    }

    fn from_cycles(&self, cycles: &[&[usize]]) -> Elem {
        let mut p: Vec<usize> = (0..DEG).collect();
        for c in cycles {
            for (t, &x) in c.iter().enumerate() {
                p[x] = c[(t + 1) % c.len()];
            }
        }
        self.perms
            .iter()
            .position(|q| *q == p)
            .expect("valid permutation") as Elem
    }

    fn order_of(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn fixed_point_free(&self, a: Elem) -> bool {
        (0..DEG).all(|x| self.apply(a, x) != x)
    }

    fn closure(&self, gens: &[Elem]) -> Set {
        let mut set = Set::empty();
        set.insert(0);
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    fn conj_set(&self, s: &Set, c: Elem) -> Set {
        let mut out = Set::empty();
        for h in s.iter() {
            out.insert(self.conj(h, c));
        }
        out
    }

    fn transitive(&self, gens: &[Elem]) -> bool {
        let mut seen = [false; DEG];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.apply(g, x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Smallest block containing `0` and `x`.
    fn minimal_block(&self, gens: &[Elem], x: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..DEG).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                a = p[a];
            }
            a
        }
        let mut queue = VecDeque::from([(0, x)]);
        parent[x] = 0;
        while let Some((a, b)) = queue.pop_front() {
            for &g in gens {
                let (ga, gb) = (self.apply(g, a), self.apply(g, b));
                let (ra, rb) = (find(&mut parent, ga), find(&mut parent, gb));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                    queue.push_back((ga, gb));
                }
            }
        }
        let r = find(&mut parent, 0);
        (0..DEG).filter(|&v| find(&mut parent, v) == r).collect()
    }

    fn primitive(&self, gens: &[Elem]) -> bool {
        self.transitive(gens) && (1..DEG).all(|x| self.minimal_block(gens, x).len() == DEG)
    }

    /// Regular dihedral subgroups of order 6 inside `m`.
    fn regular_d6(&self, m: &Set) -> Vec<Set> {
        let elems: Vec<Elem> = m.iter().collect();
        let threes: Vec<Elem> = elems
            .iter()
            .copied()
            .filter(|&u| self.order_of(u) == 3 && self.fixed_point_free(u))
            .collect();
        let twos: Vec<Elem> = elems
            .iter()
            .copied()
            .filter(|&v| self.order_of(v) == 2 && self.fixed_point_free(v))
            .collect();
        let mut found = HashSet::new();
        for &u in &threes {
            let u2 = self.mul(u, u);
            for &v in &twos {
                if self.conj(u, v) == u2 {
                    found.insert(self.closure(&[u, v]));
                }
            }
        }
        let mut out: Vec<Set> = found.into_iter().collect();
        out.sort();
        out
    }

    fn to_group(&self, name: &str, s: &Set) -> FiniteGroup {
        let elements: Vec<Vec<usize>> = s.iter().map(|x| self.perms[x as usize].clone()).collect();
        FiniteGroup::from_permutations(name, &elements).expect("closed set of permutations")
    }
}

/// Flags of one overgroup `M` of the fixed regular `D6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFlags {
    pub order: usize,
    pub shape: String,
    pub primitive: bool,
    /// All regular `D6` subgroups of `M` are conjugate in `M`.
    pub conjugate: bool,
    /// Some regular `D6` subgroup is normal in `M`.
    pub normal: bool,
    /// `M` has exactly one regular `D6` subgroup.
    pub unique: bool,
    pub regular_d6: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub name: String,
    pub generators: Vec<Vec<usize>>,
    pub flags: GroupFlags,
    /// Expected (primitive, conjugate, normal, unique).
    pub expected: [bool; 4],
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
    /// Number of subgroups of `S6` containing the fixed `D6`.
    pub overgroups: usize,
    /// Overgroups with `9 ∣ |M|`, grouped by order, with their flags.
    pub sylow9: BTreeMap<usize, Vec<GroupFlags>>,
    /// Overgroups with Sylow 3-subgroup of order 3.
    pub sylow3_order3: usize,
    /// Every such overgroup has all its regular `D6` subgroups conjugate.
    pub sylow3_order3_conjugate: bool,
    /// Each overgroup with `9 ∣ |M|` has the flags of the table row of
    /// its order.
    pub sylow9_rows_match: bool,
    pub pass: bool,
}

fn flags(s6: &Sym6, gens: &[Elem], m: &Set, d6: &Set) -> GroupFlags {
    let subgroups = s6.regular_d6(m);
    let mut class = HashSet::from([*d6]);
    let mut queue = vec![*d6];
    while let Some(h) = queue.pop() {
        for &g in gens {
            let c = s6.conj_set(&h, g);
            if class.insert(c) {
                queue.push(c);
            }
        }
    }
    GroupFlags {
        order: m.len(),
        shape: s6.to_group("M", m).shape_tag(),
        primitive: s6.primitive(gens),
        conjugate: subgroups.iter().all(|h| class.contains(h)),
        normal: subgroups
            .iter()
            .any(|h| gens.iter().all(|&g| s6.conj_set(h, g) == *h)),
        unique: subgroups.len() == 1,
        regular_d6: subgroups.len(),
    }
}

fn generators_of(s6: &Sym6, m: &Set) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut span = s6.closure(&[]);
    for x in m.iter() {
        if !span.contains(x) {
            gens.push(x);
            span = s6.closure(&gens);
        }
    }
    gens
}

/// All subgroups of `S6` containing `base`.
fn overgroups(s6: &Sym6, base: &Set) -> Vec<Set> {
    let mut seen = HashSet::from([*base]);
    let mut queue = vec![*base];
    while let Some(h) = queue.pop() {
        let gens = generators_of(s6, &h);
        let mut covered = h;
        for x in 0..ORDER as Elem {
            if covered.contains(x) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(x);
            let k = s6.closure(&g2);
            for l in h.iter() {
                for r in h.iter() {
                    covered.insert(s6.mul(s6.mul(l, x), r));
                }
            }
            if seen.insert(k) {
                queue.push(k);
            }
        }
    }
    let mut out: Vec<Set> = seen.into_iter().collect();
    out.sort_by_key(|s| (s.len(), *s));
    out
}

pub fn verify_table1() -> Table1Report {
    let s6 = Sym6::new();
    let a = s6.from_cycles(&[&[0, 1, 2], &[3, 4, 5]]);
    let b = s6.from_cycles(&[&[0, 3], &[1, 5], &[2, 4]]);
    let d6 = s6.closure(&[a, b]);
    assert_eq!(d6.len(), 6);
    assert!(s6.transitive(&[a, b]));

    let c = |cycles: &[&[usize]]| s6.from_cycles(cycles);
    let specs: Vec<(&str, Vec<Elem>, usize, [bool; 4])> = vec![
        (
            "S6",
            vec![c(&[&[0, 1, 2, 3, 4, 5]]), c(&[&[0, 1]])],
            720,
            [true, true, false, false],
        ),
        (
            "(S3xS3):Z2",
            vec![
                c(&[&[0, 1, 2]]),
                c(&[&[0, 1]]),
                c(&[&[0, 3], &[1, 4], &[2, 5]]),
            ],
            72,
            [false, true, false, false],
        ),
        (
            "(Z3xZ3):Z2",
            vec![c(&[&[0, 1, 2]]), c(&[&[3, 4, 5]]), b],
            18,
            [false, true, true, true],
        ),
        (
            "(Z3xZ3):(Z2xZ2)",
            vec![
                c(&[&[0, 1, 2]]),
                c(&[&[3, 4, 5]]),
                b,
                c(&[&[1, 2], &[4, 5]]),
            ],
            36,
            [false, false, true, false],
        ),
    ];
    let mut rows = Vec::new();
    for (name, mut gens, order, expected) in specs {
        gens.extend([a, b]);
        let m = s6.closure(&gens);
        assert_eq!(m.len(), order, "{name}");
        assert!(
            d6.iter().all(|x| m.contains(x)),
            "{name} must contain the fixed D6"
        );
        let f = flags(&s6, &gens, &m, &d6);
        let pass = [f.primitive, f.conjugate, f.normal, f.unique] == expected;
        rows.push(Table1Row {
            name: name.to_string(),
            generators: gens.iter().map(|&g| s6.perms[g as usize].clone()).collect(),
            flags: f,
            expected,
            pass,
        });
    }

    let all = overgroups(&s6, &d6);
    let mut sylow9: BTreeMap<usize, Vec<GroupFlags>> = BTreeMap::new();
    let mut sylow3_order3 = 0;
    let mut sylow3_order3_conjugate = true;
    for m in &all {
        let gens = generators_of(&s6, m);
        assert!(s6.transitive(&gens));
        let f = flags(&s6, &gens, m, &d6);
        if m.len() % 9 == 0 {
            sylow9.entry(m.len()).or_default().push(f);
        } else {
            sylow3_order3 += 1;
            sylow3_order3_conjugate &= f.conjugate;
        }
    }
    let sylow9_rows_match = sylow9.keys().copied().eq(rows
        .iter()
        .map(|r| r.flags.order)
        .collect::<std::collections::BTreeSet<_>>())
        && sylow9.iter().all(|(order, fs)| {
            let row = rows
                .iter()
                .find(|r| r.flags.order == *order)
                .expect("order present");
            fs.iter()
                .all(|f| [f.primitive, f.conjugate, f.normal, f.unique] == row.expected)
        });
    let pass = rows.iter().all(|r| r.pass) && sylow3_order3_conjugate && sylow9_rows_match;
    Table1Report {
        rows,
        overgroups: all.len(),
        sylow9,
        sylow3_order3,
        sylow3_order3_conjugate,
        sylow9_rows_match,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_blocks_of_dihedral() {
        let s6 = Sym6::new();
        let a = s6.from_cycles(&[&[0, 1, 2], &[3, 4, 5]]);
        let b = s6.from_cycles(&[&[0, 3], &[1, 5], &[2, 4]]);
        assert_eq!(s6.minimal_block(&[a, b], 1), vec![0, 1, 2]);
        assert_eq!(s6.minimal_block(&[a, b], 3), vec![0, 3]);
        assert!(!s6.primitive(&[a, b]));
        assert_eq!(s6.regular_d6(&s6.closure(&[a, b])).len(), 1);
    }

    #[test]
    fn table1_rows() {
        let r = verify_table1();
        for row in &r.rows {
            assert!(row.pass, "{row:?}");
        }
        assert!(r.sylow3_order3_conjugate);
        assert!(r.pass, "{:?}", r.sylow9);
    }
}
