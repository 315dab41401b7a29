//! Decision procedures for the m-CI and m-PCI properties of a single
//! m-Cayley digraph: the conjugacy criterion on semiregular subgroups of
//! `Aut(Γ)`, the direct search for `n ∈ N` with `Γⁿ = Σ`, and their
//! cross-validation over whole families.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

use crate::aut::{mcayley_automorphisms, mcayley_isomorphism, p_isomorphism, AutGroup, PartMode};
use crate::digraph::MCayleyDigraph;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::limits::Limits;
use crate::normalizer::{NormalizerElement, NormalizerGroup};
use crate::perms::{orbits_of, right_regular, OrbitPartition, PermGroup, Permutation};

/// Conjugators are listed in reports only up to this many witnesses.
const MAX_LISTED_CONJUGATORS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PropertyKind {
    #[serde(rename = "mCI")]
    Mci,
    #[serde(rename = "mPCI")]
    Mpci,
    #[serde(rename = "mDCI-instance")]
    MdciInstance,
    #[serde(rename = "direct-mCI")]
    DirectMci,
    #[serde(rename = "direct-mPCI")]
    DirectMpci,
}

impl PropertyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Mci => "mCI",
            PropertyKind::Mpci => "mPCI",
            PropertyKind::MdciInstance => "mDCI-instance",
            PropertyKind::DirectMci => "direct-mCI",
            PropertyKind::DirectMpci => "direct-mPCI",
        }
    }
}

/// A semiregular subgroup isomorphic to `G`, with the isomorphism given by
/// the image of every element of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiregularWitness {
    /// Sorted element list.
    pub elements: Vec<Permutation>,
    /// `images[x]` is the image of `x ∈ G`.
    pub images: Vec<Permutation>,
    pub orbits: OrbitPartition,
}

impl SemiregularWitness {
    pub fn to_perm_group(&self) -> PermGroup {
        PermGroup::from_elements(self.elements[0].degree(), self.elements.clone())
    }

    /// Re-check semiregularity, the homomorphism law and injectivity.
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let k = g.order();
        self.images.len() == k
            && self.elements.len() == k
            && (0..k).all(|x| {
                (0..k).all(|y| self.images[x].then(&self.images[y]) == self.images[g.mul(x, y)])
            })
            && self.images.iter().skip(1).all(|p| p.is_fixed_point_free())
            && {
                let mut s = self.images.clone();
                s.sort();
                s == self.elements
            }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CiWitness {
    /// `conjugators[t]` maps the t-th enumerated subgroup onto `R(G)`.
    Conjugators { conjugators: Vec<Permutation> },
    /// A subgroup with no conjugator onto `reference = R(G)`.
    NonConjugate {
        subgroup: SemiregularWitness,
        reference: Vec<Permutation>,
    },
    /// An element with `Γⁿ = Σ`.
    Normalizer { element: NormalizerElement },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiStats {
    pub aut_order: u128,
    /// Order of the group whose conjugation is tested.
    pub acting_order: u128,
    /// `|N_A(R(G))| = |Ñ|`.
    pub normalizer_order: u128,
    pub subgroups: usize,
    pub class_size: usize,
    pub elements_scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_hit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiReport {
    pub property: PropertyKind,
    pub verdict: bool,
    #[serde(default)]
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CiWitness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub stats: CiStats,
}

impl CiReport {
    fn new(property: PropertyKind, verdict: bool) -> Self {
        CiReport {
            property,
            verdict,
            vacuous: false,
            witness: None,
            notes: Vec::new(),
            stats: CiStats::default(),
        }
    }
}

/// Partial homomorphism on `⟨gens[..imgs.len()]⟩` determined by the images
/// of the first generators, or `None` if inconsistent or not semiregular.
fn extend_hom(
    g: &FiniteGroup,
    gens: &[usize],
    imgs: &[&Permutation],
    degree: usize,
) -> Option<Vec<Option<Permutation>>> {
    let mut phi: Vec<Option<Permutation>> = vec![None; g.order()];
    phi[0] = Some(Permutation::identity(degree));
    let mut queue = vec![0usize];
    let mut head = 0;
    let mut seen = HashSet::new();
    seen.insert(Permutation::identity(degree));
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (t, img) in imgs.iter().enumerate() {
            let y = g.mul(x, gens[t]);
            let p = phi[x].as_ref().unwrap().then(img);
            match &phi[y] {
                Some(q) => {
                    if *q != p {
                        return None;
                    }
                }
                None => {
                    if p.uniform_cycle_length() != Some(g.element_order(y))
                        || !seen.insert(p.clone())
                    {
                        return None;
                    }
                    phi[y] = Some(p);
                    queue.push(y);
                }
            }
        }
    }
    Some(phi)
}

/// All semiregular subgroups isomorphic to `g` among a stream of group
/// elements, optionally with a prescribed orbit partition. Sorted by element
/// list, without duplicates.
fn semiregular_from_stream(
    degree: usize,
    g: &FiniteGroup,
    m: usize,
    fixed_orbits: Option<&OrbitPartition>,
    stream: impl FnOnce(&mut dyn FnMut(&Permutation) -> bool),
) -> Vec<SemiregularWitness> {
    let gens = g.generators();
    let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
    let mut cands: Vec<Vec<Permutation>> = vec![Vec::new(); gens.len()];
    stream(&mut |p: &Permutation| {
        if let Some(l) = p.uniform_cycle_length() {
            for (j, &o) in orders.iter().enumerate() {
                if o == l {
                    cands[j].push(p.clone());
                }
            }
        }
        true
    });
    for c in &mut cands {
        c.sort();
    }
    let mut found: BTreeMap<Vec<Permutation>, SemiregularWitness> = BTreeMap::new();
    let mut chosen: Vec<&Permutation> = Vec::new();
    fn dfs<'a>(
        g: &FiniteGroup,
        gens: &[usize],
        cands: &'a [Vec<Permutation>],
        chosen: &mut Vec<&'a Permutation>,
        degree: usize,
        m: usize,
        fixed: Option<&OrbitPartition>,
        found: &mut BTreeMap<Vec<Permutation>, SemiregularWitness>,
    ) {
        let j = chosen.len();
        if j == gens.len() {
            let Some(phi) = extend_hom(g, gens, chosen, degree) else {
                return;
            };
            if phi.iter().any(|p| p.is_none()) {
                return;
            }
            let images: Vec<Permutation> = phi.into_iter().map(Option::unwrap).collect();
            let mut elements = images.clone();
            elements.sort();
            if found.contains_key(&elements) {
                return;
            }
            let orbits = orbits_of(degree, &elements);
            if orbits.len() != m || fixed.is_some_and(|f| *f != orbits) {
                return;
            }
            found.insert(
                elements.clone(),
                SemiregularWitness {
                    elements,
                    images,
                    orbits,
                },
            );
            return;
        }
        for c in &cands[j] {
            chosen.push(c);
            if extend_hom(g, gens, chosen, degree).is_some() {
                dfs(g, gens, cands, chosen, degree, m, fixed, found);
            }
            chosen.pop();
        }
    }
    dfs(
        g,
        &gens,
        &cands,
        &mut chosen,
        degree,
        m,
        fixed_orbits,
        &mut found,
    );
    found.into_values().collect()
}

/// All subgroups of `autg` that are semiregular, isomorphic to `g`, and (if
/// given) have exactly the orbit partition `fixed_orbits`.
pub fn enumerate_semiregular(
    autg: &PermGroup,
    g: &FiniteGroup,
    m: usize,
    fixed_orbits: Option<&OrbitPartition>,
) -> Result<Vec<SemiregularWitness>> {
    let els = autg.elements()?;
    Ok(semiregular_from_stream(
        autg.degree,
        g,
        m,
        fixed_orbits,
        |f| {
            for p in els {
                if !f(p) {
                    break;
                }
            }
        },
    ))
}

/// As `enumerate_semiregular`, streaming the elements of an automorphism group.
pub fn enumerate_semiregular_in(
    a: &AutGroup,
    g: &FiniteGroup,
    m: usize,
    fixed_orbits: Option<&OrbitPartition>,
    limits: &Limits,
) -> Result<Vec<SemiregularWitness>> {
    if a.order() > limits.elements as u128 {
        return Err(Error::ElementBound {
            bound: limits.elements,
        });
    }
    Ok(semiregular_from_stream(
        a.degree(),
        g,
        m,
        fixed_orbits,
        |f| {
            a.for_each_element(f);
        },
    ))
}

fn conjugate_set(h: &[Permutation], c: &Permutation) -> Vec<Permutation> {
    let mut v: Vec<Permutation> = h.iter().map(|x| x.conjugate_by(c)).collect();
    v.sort();
    v
}

/// Conjugacy class of `h` under the group generated by `gens`, each member
/// with a conjugator `c` such that `h^c` is that member.
fn conjugacy_class(
    h: &[Permutation],
    gens: &[Permutation],
    bound: usize,
) -> Result<HashMap<Vec<Permutation>, Permutation>> {
    let degree = h[0].degree();
    let mut class = HashMap::new();
    class.insert(h.to_vec(), Permutation::identity(degree));
    let mut queue = vec![h.to_vec()];
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        let c = class[&cur].clone();
        for s in gens {
            let next = conjugate_set(&cur, s);
            if !class.contains_key(&next) {
                if class.len() >= bound {
                    return Err(Error::ElementBound { bound });
                }
                class.insert(next.clone(), c.then(s));
                queue.push(next);
            }
        }
    }
    Ok(class)
}

/// Group the witnesses into conjugacy classes under `⟨gens⟩`, by index.
pub fn witness_classes(
    witnesses: &[SemiregularWitness],
    gens: &[Permutation],
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    let mut class_of: Vec<Option<usize>> = vec![None; witnesses.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..witnesses.len() {
        if class_of[i].is_some() {
            continue;
        }
        let class = conjugacy_class(&witnesses[i].elements, gens, limits.elements)?;
        let members: Vec<usize> = (i..witnesses.len())
            .filter(|&j| class.contains_key(&witnesses[j].elements))
            .collect();
        for &j in &members {
            class_of[j] = Some(classes.len());
        }
        classes.push(members);
    }
    Ok(classes)
}

struct BabaiInput<'a> {
    gamma: &'a MCayleyDigraph,
    property: PropertyKind,
    /// Group searched for witnesses.
    search: AutGroup,
    /// Group whose conjugation is tested.
    acting: AutGroup,
    full: Option<AutGroup>,
    fixed: Option<OrbitPartition>,
}

fn babai(input: BabaiInput<'_>, limits: &Limits) -> Result<CiReport> {
    let gamma = input.gamma;
    let g = gamma.group();
    let m = gamma.m();
    let k = g.order();
    let rg = right_regular(g, m);
    let reference = rg.elements()?.to_vec();
    let mut report = CiReport::new(input.property, true);
    let full = input.full.as_ref().unwrap_or(&input.acting);
    report.stats.aut_order = full.order();
    report.stats.acting_order = input.acting.order();

    let witnesses = if input.search.order() == k as u128 {
        report
            .notes
            .push("witness search group has order |G|; R(G) is the only candidate".into());
        semiregular_from_stream(gamma.n(), g, m, input.fixed.as_ref(), |f| {
            for p in &reference {
                f(p);
            }
        })
    } else {
        enumerate_semiregular_in(&input.search, g, m, input.fixed.as_ref(), limits)?
    };
    report.stats.subgroups = witnesses.len();
    for w in &witnesses {
        assert!(w.verify(g), "enumerated subgroup failed verification");
    }
    if !witnesses.iter().any(|w| w.elements == reference) {
        return Err(Error::Membership(
            "R(G) is not among the enumerated subgroups".into(),
        ));
    }

    let ng = NormalizerGroup::new(gamma.conn().group_arc().clone(), m);
    report.stats.normalizer_order = ng.stabilizer_order(gamma.conn());
    let class = conjugacy_class(&reference, input.acting.generators(), limits.elements)?;
    report.stats.class_size = class.len();
    assert_eq!(
        class.len() as u128 * report.stats.normalizer_order,
        input.acting.order(),
        "class size times |Ñ| must equal the acting group order"
    );

    match witnesses.iter().find(|w| !class.contains_key(&w.elements)) {
        None => {
            let mut conjugators = Vec::with_capacity(witnesses.len());
            for w in &witnesses {
                let c = class[&w.elements].inverse();
                assert_eq!(
                    conjugate_set(&w.elements, &c),
                    reference,
                    "conjugator check failed"
                );
                conjugators.push(c);
            }
            if conjugators.len() <= MAX_LISTED_CONJUGATORS {
                report.witness = Some(CiWitness::Conjugators { conjugators });
            } else {
                report.notes.push(format!(
                    "{} conjugators verified, not listed",
                    conjugators.len()
                ));
            }
        }
        Some(w) => {
            report.verdict = false;
            let scan_group = if full.order() <= limits.elements as u128 {
                full
            } else {
                &input.acting
            };
            let target = &w.elements;
            let mut scanned = 0u64;
            let complete = scan_group.for_each_element(|a| {
                scanned += 1;
                conjugate_set(&reference, a) != *target
            });
            assert!(
                complete,
                "non-conjugate witness is conjugate under a scanned element"
            );
            report.stats.elements_scanned = scanned;
            report.witness = Some(CiWitness::NonConjugate {
                subgroup: w.clone(),
                reference: reference.clone(),
            });
        }
    }
    Ok(report)
}

/// Conjugacy criterion for the m-CI property: every semiregular subgroup of
/// `Aut(Γ)` isomorphic to `G` is conjugate to `R(G)` in `Aut(Γ)`.
pub fn check_mci_babai(gamma: &MCayleyDigraph, limits: &Limits) -> Result<CiReport> {
    let a = mcayley_automorphisms(gamma, PartMode::Free, limits)?;
    let property = if gamma.mode().is_graph() {
        PropertyKind::Mci
    } else {
        PropertyKind::MdciInstance
    };
    babai(
        BabaiInput {
            gamma,
            property,
            search: a.clone(),
            acting: a,
            full: None,
            fixed: None,
        },
        limits,
    )
}

/// Conjugacy criterion for the m-PCI property, restricted to subgroups with
/// orbit set `𝒢`. Such subgroups fix every part, and any conjugator between
/// two of them permutes the parts, so the search runs in `Aut(Γ)_(𝒢)` and
/// conjugation in the part-preserving subgroup.
pub fn check_mpci_babai(gamma: &MCayleyDigraph, limits: &Limits) -> Result<CiReport> {
    if !gamma.mode().is_pcayley() {
        return Err(Error::NotPCayley);
    }
    let fixed = mcayley_automorphisms(gamma, PartMode::Fixed, limits)?;
    let preserved = mcayley_automorphisms(gamma, PartMode::Preserved, limits)?;
    let full = mcayley_automorphisms(gamma, PartMode::Free, limits)?;
    let parts = OrbitPartition::parts(gamma.group().order(), gamma.m());
    babai(
        BabaiInput {
            gamma,
            property: PropertyKind::Mpci,
            search: fixed,
            acting: preserved,
            full: Some(full),
            fixed: Some(parts),
        },
        limits,
    )
}

fn diagonal_sizes(g: &MCayleyDigraph) -> Vec<usize> {
    let mut v: Vec<usize> = (0..g.m()).map(|i| g.conn().get(i, i).len()).collect();
    v.sort_unstable();
    v
}

fn check_compatible(gamma: &MCayleyDigraph, sigma: &MCayleyDigraph) -> Result<()> {
    if gamma.group() != sigma.group() || gamma.m() != sigma.m() {
        return Err(Error::Incompatible("Γ and Σ must share G and m".into()));
    }
    Ok(())
}

fn direct(gamma: &MCayleyDigraph, sigma: &MCayleyDigraph, property: PropertyKind) -> CiReport {
    let ng = NormalizerGroup::new(gamma.conn().group_arc().clone(), gamma.m());
    let (found, scanned) = ng.find_transform(gamma.conn(), sigma.conn());
    let mut report = CiReport::new(property, found.is_some());
    report.stats.elements_scanned = scanned;
    match found {
        Some(e) => {
            assert!(
                ng.maps_to(&e, gamma.conn(), sigma.conn()),
                "transform check failed"
            );
            report.witness = Some(CiWitness::Normalizer { element: e });
        }
        None => {
            let (a, b) = (diagonal_sizes(gamma), diagonal_sizes(sigma));
            if a != b {
                report.notes.push(format!(
                    "diagonal set sizes {a:?} and {b:?} differ; every n ∈ N permutes the diagonal sets up to size-preserving maps"
                ));
            }
        }
    }
    report
}

/// Direct check for one `Σ`: is there `n ∈ N` with `Γⁿ = Σ`? Vacuously
/// true when `Σ ≇ Γ`.
pub fn check_mci_direct(
    gamma: &MCayleyDigraph,
    sigma: &MCayleyDigraph,
    limits: &Limits,
) -> Result<CiReport> {
    check_compatible(gamma, sigma)?;
    if mcayley_isomorphism(gamma, sigma, limits)?.is_none() {
        let mut r = CiReport::new(PropertyKind::DirectMci, true);
        r.vacuous = true;
        r.notes.push("Σ is not isomorphic to Γ".into());
        return Ok(r);
    }
    Ok(direct(gamma, sigma, PropertyKind::DirectMci))
}

/// Direct check for one PCayley `Σ`; vacuously true without a p-isomorphism.
pub fn check_mpci_direct(
    gamma: &MCayleyDigraph,
    sigma: &MCayleyDigraph,
    limits: &Limits,
) -> Result<CiReport> {
    check_compatible(gamma, sigma)?;
    if !gamma.mode().is_pcayley() || !sigma.mode().is_pcayley() {
        return Err(Error::NotPCayley);
    }
    if p_isomorphism(gamma, sigma, limits)?.is_none() {
        let mut r = CiReport::new(PropertyKind::DirectMpci, true);
        r.vacuous = true;
        r.notes.push("Σ is not p-isomorphic to Γ".into());
        return Ok(r);
    }
    Ok(direct(gamma, sigma, PropertyKind::DirectMpci))
}

/// Direct check against every member of a family; false at the first `Σ`
/// (p-)isomorphic to `Γ` that no `n ∈ N` reaches.
pub fn check_direct_family(
    gamma: &MCayleyDigraph,
    family: &[MCayleyDigraph],
    pcayley: bool,
    limits: &Limits,
) -> Result<CiReport> {
    let property = if pcayley {
        PropertyKind::DirectMpci
    } else {
        PropertyKind::DirectMci
    };
    let mut total = CiReport::new(property, true);
    for (idx, sigma) in family.iter().enumerate() {
        let r = if pcayley {
            check_mpci_direct(gamma, sigma, limits)?
        } else {
            check_mci_direct(gamma, sigma, limits)?
        };
        total.stats.elements_scanned += r.stats.elements_scanned;
        if !r.verdict {
            total.verdict = false;
            total
                .notes
                .push(format!("no n ∈ N maps Γ to family member {idx}"));
            total.notes.extend(r.notes);
            return Ok(total);
        }
    }
    Ok(total)
}

/// Outcome of comparing the two procedures over a family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub instances: usize,
    pub babai_true: usize,
    pub direct_true: usize,
    pub disagreements: Vec<usize>,
}

/// For every `Γ` in `family`, compare the conjugacy criterion with the
/// direct check against all of `family`.
pub fn cross_validate(
    family: &[MCayleyDigraph],
    pcayley: bool,
    limits: &Limits,
) -> Result<CrossValidation> {
    let mut cv = CrossValidation {
        instances: family.len(),
        ..Default::default()
    };
    for (idx, gamma) in family.iter().enumerate() {
        let b = if pcayley {
            check_mpci_babai(gamma, limits)?
        } else {
            check_mci_babai(gamma, limits)?
        };
        let d = check_direct_family(gamma, family, pcayley, limits)?;
        cv.babai_true += usize::from(b.verdict);
        cv.direct_true += usize::from(d.verdict);
        if b.verdict != d.verdict {
            cv.disagreements.push(idx);
        }
    }
    Ok(cv)
}

/// Partition `family` into classes of (p-)isomorphic members, by index.
pub fn isomorphism_classes(
    family: &[MCayleyDigraph],
    pcayley: bool,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'outer: for (idx, g) in family.iter().enumerate() {
        for c in &mut classes {
            let rep = &family[c[0]];
            let iso = if pcayley {
                p_isomorphism(rep, g, limits)?
            } else {
                mcayley_isomorphism(rep, g, limits)?
            };
            if iso.is_some() {
                c.push(idx);
                continue 'outer;
            }
        }
        classes.push(vec![idx]);
    }
    Ok(classes)
}
