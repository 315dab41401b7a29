use serde::{Deserialize, Serialize};

/// A subset of group elements stored as a bitmask (group order at most 128).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(pub u128);

pub const MAX_SET_ORDER: usize = 128;

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn full(order: usize) -> ElemSet {
        if order >= 128 {
            ElemSet(u128::MAX)
        } else {
            ElemSet((1u128 << order) - 1)
        }
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(it: I) -> ElemSet {
        let mut s = ElemSet::EMPTY;
        for x in it {
            s.insert(x);
        }
        s
    }

    pub fn singleton(x: usize) -> ElemSet {
        ElemSet(1u128 << x)
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x < 128 && (self.0 >> x) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u128 << x;
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u128 << x);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement inside `{0, .., order-1}`.
    pub fn complement(self, order: usize) -> ElemSet {
        ElemSet(!self.0 & ElemSet::full(order).0)
    }

    pub fn iter(self) -> ElemIter {
        ElemIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct ElemIter(u128);

impl Iterator for ElemIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(t)
    }
}

impl Serialize for ElemSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&x) = v.iter().find(|&&x| x >= MAX_SET_ORDER) {
            return Err(serde::de::Error::custom(format!(
                "element index {x} too large"
            )));
        }
        Ok(ElemSet::from_elems(v))
    }
}

/// Counter-based hash used for reproducible pseudo-random instances.
pub fn splitmix64(counter: u64) -> u64 {
    let mut z = counter.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic stream of pseudo-random values derived from `seed`.
#[derive(Clone, Debug)]
pub struct HashStream {
    seed: u64,
    counter: u64,
}

impl HashStream {
    pub fn new(seed: u64) -> Self {
        HashStream {
            seed: splitmix64(seed),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        splitmix64(self.seed ^ self.counter.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }

    /// Value in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// All permutations of `0..m` in lexicographic order.
pub fn lex_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn euler_phi(k: usize) -> usize {
    (1..=k).filter(|&i| gcd(i, k) == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order() {
        let p = lex_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[1], vec![0, 2, 1]);
        assert_eq!(p[5], vec![2, 1, 0]);
        assert_eq!(lex_permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn elemset_ops() {
        let s = ElemSet::from_elems([0, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 3, 5]);
        assert_eq!(s.complement(6).to_vec(), vec![1, 2, 4]);
        assert!(ElemSet::full(128).contains(127));
    }

    #[test]
    fn phi() {
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(12), 4);
    }
}
