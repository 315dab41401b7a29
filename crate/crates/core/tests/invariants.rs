use std::sync::Arc;

use proptest::prelude::*;

use mcayley::aut::{
    automorphism_group, isomorphism, mcayley_automorphisms, ColoredDigraph, PartMode,
};
use mcayley::ci::{check_mci_babai, check_mpci_babai};
use mcayley::digraph::Mode;
use mcayley::groups::make_named_group;
use mcayley::normalizer::NormalizerGroup;
use mcayley::perms::{right_regular, Permutation};
use mcayley::repro::census::{census, CensusConfig, Encoding};
use mcayley::Limits;

const FAMILIES: [(&str, usize, Mode); 8] = [
    ("Z2", 3, Mode::PcayleyDigraph),
    ("Z3", 3, Mode::PcayleyGraph),
    ("D6", 2, Mode::PcayleyGraph),
    ("Z4", 2, Mode::PcayleyDigraph),
    ("Z3", 2, Mode::Graph),
    ("Z2xZ2", 2, Mode::Digraph),
    ("Z2", 3, Mode::Graph),
    ("Z5", 2, Mode::Digraph),
];

fn encoding(f: usize) -> Encoding {
    let (t, m, mode) = FAMILIES[f];
    Encoding::new(Arc::new(make_named_group(t).unwrap()), m, mode).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_is_a_bijection(f in 0..FAMILIES.len(), raw in any::<u64>()) {
        let enc = encoding(f);
        let i = raw % enc.total();
        let c = enc.decode(i);
        prop_assert!(c.validate(enc.mode()).is_ok());
        prop_assert_eq!(enc.encode(&c), Some(i));
    }

    #[test]
    fn automorphisms_contain_rg(f in 0..FAMILIES.len(), raw in any::<u64>()) {
        let enc = encoding(f);
        let g = enc.digraph(raw % enc.total());
        let l = Limits::default();
        let full = mcayley_automorphisms(&g, PartMode::Free, &l).unwrap();
        let fixed = mcayley_automorphisms(&g, PartMode::Fixed, &l).unwrap();
        let kept = mcayley_automorphisms(&g, PartMode::Preserved, &l).unwrap();
        for r in &right_regular(g.group(), g.m()).generators {
            prop_assert!(fixed.contains(r));
        }
        prop_assert_eq!(full.order() % kept.order(), 0);
        prop_assert_eq!(kept.order() % fixed.order(), 0);
        prop_assert_eq!(fixed.order() % g.group().order() as u128, 0);
    }

    #[test]
    fn relabelled_copies_are_isomorphic(f in 0..FAMILIES.len(), raw in any::<u64>(), seed in any::<u64>()) {
        let enc = encoding(f);
        let g = enc.digraph(raw % enc.total());
        let n = g.n();
        let mut map: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            map.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = Permutation::new(map).unwrap();
        let a = ColoredDigraph::uncolored(n, g.arcs()).unwrap();
        let b = ColoredDigraph::uncolored(n, &g.relabel_arcs(&p)).unwrap();
        let l = Limits::default();
        let iso = isomorphism(&a, &b, &l).unwrap();
        prop_assert!(iso.is_some_and(|q| a.is_isomorphism_to(&b, &q)));
        prop_assert_eq!(automorphism_group(&a, &l).unwrap().order(), automorphism_group(&b, &l).unwrap().order());
    }

    #[test]
    fn verdicts_are_invariant_under_n(f in 0..4usize, raw in any::<u64>(), pick in any::<u64>()) {
        let enc = encoding(f);
        let g = enc.digraph(raw % enc.total());
        let ng = NormalizerGroup::new(enc.group().clone(), enc.m());
        let n = ng.element_at((pick as u128) % ng.order());
        let h = ng.apply_to_digraph(&n, &g);
        let l = Limits::default();
        let (a, b) = (check_mpci_babai(&g, &l).unwrap(), check_mpci_babai(&h, &l).unwrap());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.stats.aut_order, b.stats.aut_order);
        prop_assert_eq!(a.stats.normalizer_order, b.stats.normalizer_order);
        let mc = check_mpci_babai(&g.multipartite_complement().unwrap(), &l).unwrap();
        prop_assert_eq!(a.verdict, mc.verdict);
        prop_assert_eq!(check_mci_babai(&g, &l).unwrap().verdict, check_mci_babai(&h, &l).unwrap().verdict);
    }

    #[test]
    fn composition_is_a_homomorphism(f in 0..FAMILIES.len(), x in any::<u64>(), y in any::<u64>()) {
        let enc = encoding(f);
        let ng = NormalizerGroup::new(enc.group().clone(), enc.m());
        let a = ng.element_at(x as u128 % ng.order());
        let b = ng.element_at(y as u128 % ng.order());
        prop_assert_eq!(ng.to_permutation(&ng.compose(&a, &b)), ng.to_permutation(&a).then(&ng.to_permutation(&b)));
        prop_assert!(ng.to_permutation(&ng.compose(&a, &ng.inverse(&a))).is_identity());
    }
}

#[test]
fn census_reduction_is_monotone() {
    let z2 = Arc::new(make_named_group("Z2").unwrap());
    for mode in [Mode::PcayleyDigraph, Mode::PcayleyGraph] {
        let hi = census(&CensusConfig::new(z2.clone(), 3, mode)).unwrap();
        let lo = census(&CensusConfig::new(z2.clone(), 2, mode)).unwrap();
        if hi.aggregate == Some(true) {
            assert_eq!(lo.aggregate, Some(true), "{mode}");
        }
    }
}
