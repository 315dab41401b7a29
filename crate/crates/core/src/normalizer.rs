//! The normalizer `N` of `R(G)` in `Sym(V)` in closed form.
//!
//! An element `n = L_1(g_1)⋯L_m(g_m)·α·σ` acts by
//! `x_i ↦ ((g_i⁻¹·x)^α)_{i^σ}`. Products compose left to right.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::digraph::{ConnectionSets, MCayleyDigraph};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupAutomorphism};
use crate::limits::Limits;
use crate::perms::Permutation;
use crate::util::{factorial, lex_permutations, ElemSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalizerElement {
    pub left: Vec<usize>,
    pub alpha: GroupAutomorphism,
    pub sigma: Vec<usize>,
}

/// `N` for a fixed group and part count.
#[derive(Clone, Debug)]
pub struct NormalizerGroup {
    group: Arc<FiniteGroup>,
    m: usize,
    auts: Arc<Vec<GroupAutomorphism>>,
    sigmas: Vec<Vec<usize>>,
}

impl NormalizerGroup {
    pub fn new(group: Arc<FiniteGroup>, m: usize) -> Self {
        let auts = group.automorphisms();
        NormalizerGroup {
            group,
            m,
            auts,
            sigmas: lex_permutations(m),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn automorphisms(&self) -> &[GroupAutomorphism] {
        &self.auts
    }

    pub fn sigmas(&self) -> &[Vec<usize>] {
        &self.sigmas
    }

    /// `|G|^m · m! · |Aut G|`.
    pub fn order(&self) -> u128 {
        (self.group.order() as u128).pow(self.m as u32)
            * factorial(self.m)
            * self.auts.len() as u128
    }

    pub fn identity(&self) -> NormalizerElement {
        NormalizerElement {
            left: vec![0; self.m],
            alpha: GroupAutomorphism::identity(self.group.order()),
            sigma: (0..self.m).collect(),
        }
    }

    /// `L_i(g)`: `x_i ↦ (g⁻¹x)_i`, other parts fixed.
    pub fn l_element(&self, i: usize, g: usize) -> NormalizerElement {
        let mut e = self.identity();
        e.left[i] = g;
        e
    }

    pub fn alpha_element(&self, alpha: GroupAutomorphism) -> NormalizerElement {
        NormalizerElement {
            alpha,
            ..self.identity()
        }
    }

    pub fn sigma_element(&self, sigma: Vec<usize>) -> NormalizerElement {
        NormalizerElement {
            sigma,
            ..self.identity()
        }
    }

    /// `R(g)` in the form `(g⁻¹, …, g⁻¹; Inn(g); id)`.
    pub fn r_element(&self, g: usize) -> NormalizerElement {
        NormalizerElement {
            left: vec![self.group.inv(g); self.m],
            alpha: self.group.inner(g),
            sigma: (0..self.m).collect(),
        }
    }

    pub fn check(&self, e: &NormalizerElement) -> Result<()> {
        let k = self.group.order();
        let ok = e.left.len() == self.m
            && e.left.iter().all(|&g| g < k)
            && self.auts.binary_search(&e.alpha).is_ok()
            && Permutation::new(e.sigma.clone()).is_ok()
            && e.sigma.len() == self.m;
        if ok {
            Ok(())
        } else {
            Err(Error::Incompatible(
                "normalizer element fields do not match (G, m)".into(),
            ))
        }
    }

    pub fn to_permutation(&self, e: &NormalizerElement) -> Permutation {
        let g = &*self.group;
        let k = g.order();
        let mut map = Vec::with_capacity(k * self.m);
        for i in 0..self.m {
            let gi = g.inv(e.left[i]);
            let base = e.sigma[i] * k;
            for x in 0..k {
                map.push(base + e.alpha.apply(g.mul(gi, x)));
            }
        }
        Permutation::from_vec_unchecked(map)
    }

    /// `e1·e2`: `left_i = g_i·(g'_{i^σ})^{α⁻¹}`, `α·α'`, `σ·σ'`.
    pub fn compose(&self, e1: &NormalizerElement, e2: &NormalizerElement) -> NormalizerElement {
        let g = &*self.group;
        let ainv = e1.alpha.inverse();
        NormalizerElement {
            left: (0..self.m)
                .map(|i| g.mul(e1.left[i], ainv.apply(e2.left[e1.sigma[i]])))
                .collect(),
            alpha: e1.alpha.then(&e2.alpha),
            sigma: e1.sigma.iter().map(|&j| e2.sigma[j]).collect(),
        }
    }

    pub fn inverse(&self, e: &NormalizerElement) -> NormalizerElement {
        // (g, α, σ)⁻¹ = (h, α⁻¹, σ⁻¹) with h_{i^σ} = (g_i⁻¹)^α
        let g = &*self.group;
        let mut left = vec![0; self.m];
        let mut sinv = vec![0; self.m];
        for i in 0..self.m {
            left[e.sigma[i]] = e.alpha.apply(g.inv(e.left[i]));
            sinv[e.sigma[i]] = i;
        }
        NormalizerElement {
            left,
            alpha: e.alpha.inverse(),
            sigma: sinv,
        }
    }

    /// Recover the fields from a vertex permutation; `None` if it is not in `N`.
    pub fn decompose(&self, p: &Permutation) -> Option<NormalizerElement> {
        let g = &*self.group;
        let k = g.order();
        if p.degree() != k * self.m {
            return None;
        }
        let sigma: Vec<usize> = (0..self.m).map(|i| p.apply(i * k) / k).collect();
        if (0..self.m * k).any(|v| p.apply(v) / k != sigma[v / k]) {
            return None;
        }
        let f0 = |x: usize| p.apply(x) % k;
        let c0inv = g.inv(f0(0));
        let alpha = GroupAutomorphism {
            images: (0..k).map(|x| g.mul(c0inv, f0(x))).collect(),
        };
        if self.auts.binary_search(&alpha).is_err() {
            return None;
        }
        let ainv = alpha.inverse();
        let left = (0..self.m)
            .map(|i| g.inv(ainv.apply(p.apply(i * k) % k)))
            .collect();
        let e = NormalizerElement { left, alpha, sigma };
        (self.to_permutation(&e) == *p).then_some(e)
    }

    /// The element at position `idx` of the stream order (left lex, then α, then σ).
    pub fn element_at(&self, mut idx: u128) -> NormalizerElement {
        let k = self.group.order() as u128;
        let ns = self.sigmas.len() as u128;
        let na = self.auts.len() as u128;
        let s = (idx % ns) as usize;
        idx /= ns;
        let a = (idx % na) as usize;
        idx /= na;
        let mut left = vec![0; self.m];
        for i in (0..self.m).rev() {
            left[i] = (idx % k) as usize;
            idx /= k;
        }
        NormalizerElement {
            left,
            alpha: self.auts[a].clone(),
            sigma: self.sigmas[s].clone(),
        }
    }

    /// Lazy stream of all of `N` in the documented order.
    pub fn enumerate_n(
        &self,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = NormalizerElement> + '_> {
        if self.order() > limits.elements as u128 {
            return Err(Error::ElementBound {
                bound: limits.elements,
            });
        }
        Ok((0..self.order()).map(move |i| self.element_at(i)))
    }

    /// Centralizer `C`: α = id.
    pub fn enumerate_c(
        &self,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = NormalizerElement> + '_> {
        Ok(self.enumerate_n(limits)?.filter(|e| e.alpha.is_identity()))
    }

    /// Kernel `K` of the action on parts: σ = id.
    pub fn enumerate_k(
        &self,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = NormalizerElement> + '_> {
        Ok(self.enumerate_n(limits)?.filter(|e| is_id(&e.sigma)))
    }

    /// Stabilizer of `1_r`: `g_r = 1` and σ fixes `r`.
    pub fn stabilizer_n1r(
        &self,
        r: usize,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = NormalizerElement> + '_> {
        Ok(self
            .enumerate_n(limits)?
            .filter(move |e| e.left[r] == 0 && e.sigma[r] == r))
    }

    /// Setwise stabilizer of `G_r`: σ fixes `r`.
    pub fn blockstab_ngr(
        &self,
        r: usize,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = NormalizerElement> + '_> {
        Ok(self.enumerate_n(limits)?.filter(move |e| e.sigma[r] == r))
    }

    /// `K_{1_r}`: `g_r = 1` and σ = id.
    pub fn stabilizer_k1r(
        &self,
        r: usize,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = NormalizerElement> + '_> {
        Ok(self
            .enumerate_n(limits)?
            .filter(move |e| e.left[r] == 0 && is_id(&e.sigma)))
    }

    /// A generating set of `N`: `L_1` of the group generators, generators of
    /// `Aut(G)`, a transposition and an m-cycle.
    pub fn generators(&self) -> Vec<NormalizerElement> {
        let mut out: Vec<NormalizerElement> = self
            .group
            .generators()
            .into_iter()
            .map(|g| self.l_element(0, g))
            .collect();
        let mut sub = vec![GroupAutomorphism::identity(self.group.order())];
        for a in self.auts.iter() {
            if !sub.contains(a) {
                out.push(self.alpha_element(a.clone()));
                let gens: Vec<&GroupAutomorphism> = out
                    .iter()
                    .map(|e| &e.alpha)
                    .filter(|a| !a.is_identity())
                    .collect();
                sub = aut_closure(self.group.order(), &gens);
            }
        }
        if self.m >= 2 {
            let mut t: Vec<usize> = (0..self.m).collect();
            t.swap(0, 1);
            out.push(self.sigma_element(t));
        }
        if self.m >= 3 {
            out.push(self.sigma_element((0..self.m).map(|i| (i + 1) % self.m).collect()));
        }
        out
    }

    /// `T_{i^σ,j^σ} = (g_j⁻¹·S_{i,j}·g_i)^α`.
    pub fn apply_to_conn(&self, e: &NormalizerElement, conn: &ConnectionSets) -> ConnectionSets {
        let mut out = conn.clone();
        for i in 0..self.m {
            for j in 0..self.m {
                out.set(
                    e.sigma[i],
                    e.sigma[j],
                    transform_set(&self.group, conn.get(i, j), e.left[i], e.left[j], &e.alpha),
                );
            }
        }
        out
    }

    pub fn apply_to_digraph(&self, e: &NormalizerElement, g: &MCayleyDigraph) -> MCayleyDigraph {
        MCayleyDigraph::build(self.apply_to_conn(e, g.conn()), g.mode())
            .expect("N preserves every mode")
    }

    /// The alternative parameterization `T_{i^σ,j^σ} = h_j·S^α_{i,j}·h_i⁻¹`.
    pub fn apply_alt(
        &self,
        h: &[usize],
        alpha: &GroupAutomorphism,
        sigma: &[usize],
        conn: &ConnectionSets,
    ) -> ConnectionSets {
        let g = &*self.group;
        let mut out = conn.clone();
        for i in 0..self.m {
            for j in 0..self.m {
                let hi = g.inv(h[i]);
                let t = ElemSet::from_elems(
                    conn.get(i, j)
                        .iter()
                        .map(|s| g.mul(g.mul(h[j], alpha.apply(s)), hi)),
                );
                out.set(sigma[i], sigma[j], t);
            }
        }
        out
    }

    /// `Γⁿ = Γ`, checked on connection sets.
    pub fn preserves(&self, e: &NormalizerElement, conn: &ConnectionSets) -> bool {
        self.maps_to(e, conn, conn)
    }

    /// `Γⁿ = Σ`, checked on connection sets with early exit.
    pub fn maps_to(
        &self,
        e: &NormalizerElement,
        from: &ConnectionSets,
        to: &ConnectionSets,
    ) -> bool {
        (0..self.m).all(|i| {
            (0..self.m).all(|j| {
                transform_set(&self.group, from.get(i, j), e.left[i], e.left[j], &e.alpha)
                    == to.get(e.sigma[i], e.sigma[j])
            })
        })
    }

    /// First `n` with `g_1 = 1` and `Γⁿ = Σ`; σ and α outermost (lex and
    /// automorphism order), then `g_2, …, g_m` by backtracking. Also returns
    /// the number of elements of `N` covered so far: each candidate with
    /// `g_1 = 1` stands for its `|G|` right translates, which act identically
    /// on connection sets, and a pruned prefix covers all its completions.
    pub fn find_transform(
        &self,
        from: &ConnectionSets,
        to: &ConnectionSets,
    ) -> (Option<NormalizerElement>, u64) {
        let mut scanned = 0u64;
        let k = self.group.order();
        for sigma in &self.sigmas {
            for alpha in self.auts.iter() {
                let mut left = vec![0usize; self.m];
                if self.search_left(from, to, sigma, alpha, &mut left, 1, k, &mut scanned) {
                    return (
                        Some(NormalizerElement {
                            left,
                            alpha: alpha.clone(),
                            sigma: sigma.clone(),
                        }),
                        scanned,
                    );
                }
            }
        }
        (None, scanned)
    }

    #[allow(clippy::too_many_arguments)]
    fn search_left(
        &self,
        from: &ConnectionSets,
        to: &ConnectionSets,
        sigma: &[usize],
        alpha: &GroupAutomorphism,
        left: &mut [usize],
        depth: usize,
        k: usize,
        scanned: &mut u64,
    ) -> bool {
        let ok_pair = |left: &[usize], i: usize, j: usize| {
            transform_set(&self.group, from.get(i, j), left[i], left[j], alpha)
                == to.get(sigma[i], sigma[j])
        };
        if depth == 1 && !ok_pair(left, 0, 0) {
            *scanned += (k as u64).pow(self.m as u32);
            return false;
        }
        if depth == self.m {
            *scanned += k as u64;
            return true;
        }
        for g in 0..k {
            left[depth] = g;
            let ok = (0..=depth).all(|i| ok_pair(left, i, depth) && ok_pair(left, depth, i));
            if ok {
                if self.search_left(from, to, sigma, alpha, left, depth + 1, k, scanned) {
                    return true;
                }
            } else {
                *scanned += (k as u64).pow((self.m - depth) as u32);
            }
        }
        left[depth] = 0;
        false
    }

    /// `|Ñ|` without enumerating `N`: the number of `n` with `g_1 = 1` and
    /// `Γⁿ = Γ`, times `|G|` (right translation adjusts `g_1` uniquely).
    pub fn stabilizer_order(&self, conn: &ConnectionSets) -> u128 {
        self.count_preserving(conn, false)
    }

    /// `|K̃|`, counted as for `stabilizer_order` with `σ = 1`.
    pub fn kernel_order(&self, conn: &ConnectionSets) -> u128 {
        self.count_preserving(conn, true)
    }

    fn count_preserving(&self, conn: &ConnectionSets, kernel_only: bool) -> u128 {
        let k = self.group.order();
        let mut count = 0u128;
        for sigma in self.sigmas.iter().filter(|s| !kernel_only || is_id(s)) {
            for alpha in self.auts.iter() {
                let mut left = vec![0usize; self.m];
                count += self.count_left(conn, sigma, alpha, &mut left, 1, k);
            }
        }
        count * k as u128
    }

    fn count_left(
        &self,
        conn: &ConnectionSets,
        sigma: &[usize],
        alpha: &GroupAutomorphism,
        left: &mut [usize],
        depth: usize,
        k: usize,
    ) -> u128 {
        let ok_pair = |left: &[usize], i: usize, j: usize| {
            transform_set(&self.group, conn.get(i, j), left[i], left[j], alpha)
                == conn.get(sigma[i], sigma[j])
        };
        if depth == 1 && !ok_pair(left, 0, 0) {
            return 0;
        }
        if depth == self.m {
            return 1;
        }
        let mut total = 0;
        for g in 0..k {
            left[depth] = g;
            if (0..=depth).all(|i| ok_pair(left, i, depth) && ok_pair(left, depth, i)) {
                total += self.count_left(conn, sigma, alpha, left, depth + 1, k);
            }
        }
        left[depth] = 0;
        total
    }

    /// Elements of `N` among the given permutations, via decomposition.
    pub fn intersect<'a>(
        &self,
        perms: impl IntoIterator<Item = &'a Permutation>,
    ) -> Vec<NormalizerElement> {
        let mut out: Vec<NormalizerElement> = perms
            .into_iter()
            .filter_map(|p| self.decompose(p))
            .collect();
        out.sort();
        out
    }
}

fn is_id(s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &x)| i == x)
}

fn aut_closure(k: usize, gens: &[&GroupAutomorphism]) -> Vec<GroupAutomorphism> {
    let mut list = vec![GroupAutomorphism::identity(k)];
    let mut head = 0;
    while head < list.len() {
        let x = list[head].clone();
        head += 1;
        for g in gens {
            let y = x.then(g);
            if !list.contains(&y) {
                list.push(y);
            }
        }
    }
    list
}

/// `(g_j⁻¹·S·g_i)^α`.
#[inline]
pub fn transform_set(
    g: &FiniteGroup,
    s: ElemSet,
    gi: usize,
    gj: usize,
    alpha: &GroupAutomorphism,
) -> ElemSet {
    let gj_inv = g.inv(gj);
    let mut out = ElemSet::EMPTY;
    for x in s.iter() {
        out.insert(alpha.apply(g.mul(g.mul(gj_inv, x), gi)));
    }
    out
}

/// The filtered subgroups of `N` inside `Aut(Γ)`.
#[derive(Clone, Debug, Serialize)]
pub struct FilteredSubgroups {
    pub r: usize,
    pub n_tilde: Vec<NormalizerElement>,
    pub c_tilde: Vec<NormalizerElement>,
    pub k_tilde: Vec<NormalizerElement>,
    pub n_tilde_1r: Vec<NormalizerElement>,
    pub n_tilde_gr: Vec<NormalizerElement>,
    pub k_tilde_1r: Vec<NormalizerElement>,
    pub sbar_m: Vec<Vec<usize>>,
    pub autbar_g: Vec<GroupAutomorphism>,
}

/// Filter `N` on `S_{i^σ,j^σ} = (g_j⁻¹ S_{i,j} g_i)^α`.
pub fn filtered_subgroups(
    g: &MCayleyDigraph,
    r: usize,
    limits: &Limits,
) -> Result<FilteredSubgroups> {
    if r >= g.m() {
        return Err(Error::Incompatible(format!("part {r} out of range")));
    }
    let ng = NormalizerGroup::new(g.conn().group_arc().clone(), g.m());
    let n_tilde: Vec<NormalizerElement> = ng
        .enumerate_n(limits)?
        .filter(|e| ng.preserves(e, g.conn()))
        .collect();
    Ok(split_filtered(n_tilde, r))
}

/// Build the derived sets from a known `Ñ`.
pub fn split_filtered(n_tilde: Vec<NormalizerElement>, r: usize) -> FilteredSubgroups {
    let pick = |f: &dyn Fn(&NormalizerElement) -> bool| {
        n_tilde.iter().filter(|e| f(e)).cloned().collect::<Vec<_>>()
    };
    let c_tilde = pick(&|e| e.alpha.is_identity());
    let k_tilde = pick(&|e| is_id(&e.sigma));
    let n_tilde_1r = pick(&|e| e.left[r] == 0 && e.sigma[r] == r);
    let n_tilde_gr = pick(&|e| e.sigma[r] == r);
    let k_tilde_1r = pick(&|e| e.left[r] == 0 && is_id(&e.sigma));
    let mut sbar_m: Vec<Vec<usize>> = n_tilde.iter().map(|e| e.sigma.clone()).collect();
    sbar_m.sort();
    sbar_m.dedup();
    let mut autbar_g: Vec<GroupAutomorphism> = n_tilde.iter().map(|e| e.alpha.clone()).collect();
    autbar_g.sort();
    autbar_g.dedup();
    FilteredSubgroups {
        r,
        n_tilde,
        c_tilde,
        k_tilde,
        n_tilde_1r,
        n_tilde_gr,
        k_tilde_1r,
        sbar_m,
        autbar_g,
    }
}
