//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness. Pass criterion numbers to run a subset
//! (`cargo test --test acceptance -- 4 9`), and `--long` (or `MCAYLEY_LONG=1`)
//! to add the Z3, m = 4 census.
//!
//! Time limits are stated for 4 workers; on a machine with fewer cores the
//! limit of a parallel criterion is scaled by `4 / workers`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mcayley::aut::{
    automorphism_group, mcayley_automorphisms, mcayley_isomorphism, ColoredDigraph, PartMode,
};
use mcayley::ci::{
    check_mci_babai, check_mci_direct, check_mpci_babai, cross_validate, enumerate_semiregular_in,
    CiWitness,
};
use mcayley::digraph::{MCayleyDigraph, Mode};
use mcayley::groups::{make_named_group, FiniteGroup};
use mcayley::normalizer::NormalizerGroup;
use mcayley::perms::{
    brute_centralizer, brute_normalizer, right_regular, right_regular_element, OrbitPartition,
    Permutation,
};
use mcayley::repro::census::{census, CensusConfig, Encoding, Engine};
use mcayley::repro::{fixture, run_fixture, verify_table1, FixtureReport};
use mcayley::util::{euler_phi, HashStream};
use mcayley::Limits;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(t: &str) -> Arc<FiniteGroup> {
    Arc::new(make_named_group(t).expect("catalog group"))
}

fn limits() -> Limits {
    Limits::default()
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn sorted(mut v: Vec<Permutation>) -> Vec<Permutation> {
    v.sort();
    v
}

const CATALOG: [(&str, usize); 6] = [
    ("Z2", 2),
    ("Z2", 3),
    ("Z3", 2),
    ("Z4", 2),
    ("Z2xZ2", 2),
    ("Z2", 4),
];

fn c1_normalizer() -> Outcome {
    for (t, m) in CATALOG {
        let g = group(t);
        let ng = NormalizerGroup::new(g.clone(), m);
        let closed = sorted(
            ng.enumerate_n(&limits())
                .unwrap()
                .map(|e| ng.to_permutation(&e))
                .collect(),
        );
        let brute = brute_normalizer(g.order() * m, &right_regular(&g, m)).unwrap();
        ensure(closed == brute.elements().unwrap(), || {
            format!("{t}, m={m}: N differs from brute force")
        })?;
        let expected = (g.order() as u128).pow(m as u32)
            * (1..=m as u128).product::<u128>()
            * g.automorphisms().len() as u128;
        ensure(
            closed.len() as u128 == expected && ng.order() == expected,
            || format!("{t}, m={m}: |N| = {}", closed.len()),
        )?;
    }
    Ok("6 catalog pairs match brute force".into())
}

fn c2_centralizer() -> Outcome {
    for (t, m) in CATALOG {
        let g = group(t);
        let ng = NormalizerGroup::new(g.clone(), m);
        let closed = sorted(
            ng.enumerate_c(&limits())
                .unwrap()
                .map(|e| ng.to_permutation(&e))
                .collect(),
        );
        let brute = brute_centralizer(g.order() * m, &right_regular(&g, m)).unwrap();
        ensure(closed == brute.elements().unwrap(), || {
            format!("{t}, m={m}: C differs from brute force")
        })?;
        let expected = (g.order() as u128).pow(m as u32) * (1..=m as u128).product::<u128>();
        ensure(closed.len() as u128 == expected, || {
            format!("{t}, m={m}: |C| = {}", closed.len())
        })?;
    }
    Ok("6 catalog pairs match brute force".into())
}

fn c3_composition() -> Outcome {
    let mut stream = HashStream::new(3);
    for (t, m) in CATALOG {
        let ng = NormalizerGroup::new(group(t), m);
        for _ in 0..1000 {
            let a = ng.element_at(stream.below(ng.order() as usize) as u128);
            let b = ng.element_at(stream.below(ng.order() as usize) as u128);
            let lhs = ng.to_permutation(&ng.compose(&a, &b));
            let rhs = ng.to_permutation(&a).then(&ng.to_permutation(&b));
            ensure(lhs == rhs, || {
                format!("{t}, m={m}: composition law fails for {a:?}, {b:?}")
            })?;
        }
    }
    let mut checked = 0;
    for (t, m) in [("Z3", 3), ("D6", 2)] {
        let g = group(t);
        let ng = NormalizerGroup::new(g.clone(), m);
        for x in 0..g.order() {
            for i in 0..m {
                let l = ng.to_permutation(&ng.l_element(i, x));
                for sigma in ng.sigmas() {
                    let s = ng.to_permutation(&ng.sigma_element(sigma.clone()));
                    let rhs = ng.to_permutation(&ng.l_element(sigma[i], x));
                    ensure(l.conjugate_by(&s) == rhs, || {
                        format!("{t}: σ⁻¹L_i(g)σ ≠ L_(i^σ)(g)")
                    })?;
                    checked += 1;
                }
                for alpha in ng.automorphisms() {
                    let a = ng.to_permutation(&ng.alpha_element(alpha.clone()));
                    let rhs = ng.to_permutation(&ng.l_element(i, alpha.apply(x)));
                    ensure(l.conjugate_by(&a) == rhs, || {
                        format!("{t}: α⁻¹L_i(g)α ≠ L_i(g^α)")
                    })?;
                    let r = right_regular_element(&g, m, x).conjugate_by(&a);
                    ensure(r == right_regular_element(&g, m, alpha.apply(x)), || {
                        format!("{t}: R(g)^α ≠ R(g^α)")
                    })?;
                    checked += 2;
                }
            }
        }
    }
    Ok(format!(
        "6000 random pairs; {checked} commutation identities"
    ))
}

fn fixture_ok(id: &str) -> Result<FixtureReport, String> {
    let r = run_fixture(id, &limits()).map_err(|e| format!("{id}: {e}"))?;
    ensure(r.pass, || {
        format!(
            "{id}: {:?}",
            r.results.iter().filter(|x| !x.pass).collect::<Vec<_>>()
        )
    })?;
    Ok(r)
}

fn actual(r: &FixtureReport, check: &str) -> Option<serde_json::Value> {
    r.results
        .iter()
        .find(|x| x.check == check)
        .map(|x| x.actual.clone())
}

/// Brute-force automorphisms over all of `S_n`.
fn brute_aut(g: &MCayleyDigraph) -> Vec<Permutation> {
    let n = g.n();
    mcayley::util::lex_permutations(n)
        .into_iter()
        .map(Permutation::from_vec_unchecked)
        .filter(|p| g.is_automorphism(p))
        .collect()
}

fn c4_f2() -> Outcome {
    let fx = fixture("F2").unwrap();
    let g = &fx.gamma;
    let brute = brute_aut(g);
    ensure(brute.len() == 9, || {
        format!("brute-force |Aut| = {}", brute.len())
    })?;
    let a = mcayley_automorphisms(g, PartMode::Free, &limits()).unwrap();
    ensure(
        a.elements(&limits()).unwrap() == sorted(brute.clone()),
        || "Aut differs from brute force".into(),
    )?;
    // ⟨ab⟩ and ⟨ab⁻¹⟩ with a, b the 3-cycles on the two parts
    let ab = Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4, 5]]).unwrap();
    let ab_inv = Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 5, 4]]).unwrap();
    let span = |p: &Permutation| sorted(vec![Permutation::identity(6), p.clone(), p.then(p)]);
    let expected: BTreeSet<Vec<Permutation>> = [span(&ab), span(&ab_inv)].into();
    let ws = enumerate_semiregular_in(&a, g.group(), 2, None, &limits()).unwrap();
    let found: BTreeSet<Vec<Permutation>> = ws.iter().map(|w| w.elements.clone()).collect();
    ensure(found == expected, || format!("witnesses {found:?}"))?;
    let r = check_mci_babai(g, &limits()).unwrap();
    ensure(
        !r.verdict && r.stats.aut_order == 9 && r.stats.subgroups == 2,
        || format!("{r:?}"),
    )?;
    ensure(
        matches!(r.witness, Some(CiWitness::NonConjugate { .. })),
        || "no non-conjugate witness".into(),
    )?;
    fixture_ok("F2")?;
    Ok("|Aut| = 9, witnesses ⟨ab⟩, ⟨ab⁻¹⟩, mCI false".into())
}

fn c5_f1() -> Outcome {
    let fx = fixture("F1").unwrap();
    let (g, s) = (&fx.gamma, fx.sigma.as_ref().unwrap());
    ensure(
        mcayley_isomorphism(g, s, &limits()).unwrap().is_some(),
        || "Γ ≇ Σ".into(),
    )?;
    let ng = NormalizerGroup::new(g.conn().group_arc().clone(), 3);
    let mut scanned = 0;
    for e in ng.enumerate_n(&limits()).unwrap() {
        scanned += 1;
        ensure(!ng.maps_to(&e, g.conn(), s.conn()), || {
            format!("{e:?} maps Γ to Σ")
        })?;
    }
    ensure(scanned == 324, || format!("scanned {scanned}"))?;
    let d = check_mci_direct(g, s, &limits()).unwrap();
    ensure(
        !d.verdict && !d.vacuous && d.stats.elements_scanned == 324,
        || format!("{d:?}"),
    )?;
    fixture_ok("F1")?;
    Ok("Γ ≅ Σ, none of 324 elements of N maps Γ to Σ".into())
}

fn c6_gadget() -> Outcome {
    let mut detail = Vec::new();
    for k in [5usize, 7] {
        let id = format!("cyclic-gadget({k})");
        let r = fixture_ok(&id)?;
        let aut = actual(&r, "aut-order").and_then(|v| v.as_u64());
        ensure(aut == Some(8 * (k * k) as u64), || {
            format!("k={k}: |Aut| = {aut:?}")
        })?;
        let ws = actual(&r, "min-part-witnesses")
            .and_then(|v| v.as_u64())
            .unwrap_or(0);
        ensure(ws >= euler_phi(k) as u64, || {
            format!("k={k}: {ws} witnesses")
        })?;
        let classes = actual(&r, "min-part-witness-classes")
            .and_then(|v| v.as_u64())
            .unwrap_or(0);
        ensure(classes >= 2, || format!("k={k}: {classes} classes"))?;
        let fx = fixture(&id).unwrap();
        let v = check_mpci_babai(&fx.gamma, &limits()).unwrap();
        ensure(!v.verdict, || format!("k={k}: mPCI holds"))?;
        detail.push(format!(
            "k={k}: |Aut|={}, {ws} witnesses in {classes} classes",
            8 * k * k
        ));
    }
    Ok(detail.join("; "))
}

fn c7_lemma57() -> Outcome {
    for id in ["F4", "F5", "F6", "F7", "F8"] {
        let r = fixture_ok(id)?;
        ensure(actual(&r, "mpci-verdict") == Some(false.into()), || {
            format!("{id}: verdict")
        })?;
    }
    let f4 = fixture_ok("F4")?;
    ensure(actual(&f4, "fixed-parts-order") == Some(16.into()), || {
        "F4 fixed order".into()
    })?;
    ensure(actual(&f4, "part-action-index") == Some(4.into()), || {
        "F4 index".into()
    })?;
    let f8 = fixture_ok("F8")?;
    ensure(actual(&f8, "aut-order") == Some(18.into()), || {
        "F8 |Aut|".into()
    })?;
    Ok("F4-F8 not mPCI; F4 |Aut_(G)| = 16, index 4; F8 |Aut| = 18".into())
}

fn c8_pdci() -> Outcome {
    for id in ["F9", "F10"] {
        let r = fixture_ok(id)?;
        ensure(actual(&r, "mpci-verdict") == Some(false.into()), || {
            format!("{id}: verdict")
        })?;
    }
    let g = fixture("F9").unwrap().gamma;
    let a = mcayley_automorphisms(&g, PartMode::Free, &limits()).unwrap();
    ensure(a.order() == 9, || format!("F9 |Aut| = {}", a.order()))?;
    let parts = OrbitPartition::parts(3, 4);
    let ws = enumerate_semiregular_in(&a, g.group(), 4, Some(&parts), &limits()).unwrap();
    let rg = sorted(right_regular(g.group(), 4).elements().unwrap().to_vec());
    ensure(ws.len() == 2 && ws.iter().any(|w| w.elements != rg), || {
        format!("{} orbit-G witnesses", ws.len())
    })?;
    Ok("F9, F10 not 4PDCI; F9 |Aut| = 9 with a second semiregular subgroup".into())
}

fn run_census(
    t: &str,
    m: usize,
    mode: Mode,
    engine: Engine,
) -> Result<(u64, u64, Option<bool>), String> {
    let mut cfg = CensusConfig::new(group(t), m, mode);
    cfg.workers = workers();
    cfg.engine = engine;
    let r = census(&cfg).map_err(|e| e.to_string())?;
    Ok((r.total_instances, r.passed, r.aggregate))
}

fn c9_census() -> Outcome {
    let cases = [
        ("Z3", 2, Mode::PcayleyGraph, 8u64),
        ("Z3", 3, Mode::PcayleyGraph, 512),
        ("D6", 2, Mode::PcayleyGraph, 64),
        ("Z2", 2, Mode::PcayleyDigraph, 16),
        ("Z2", 3, Mode::PcayleyDigraph, 4096),
        ("Z2", 4, Mode::PcayleyDigraph, 1 << 24),
    ];
    let mut detail = Vec::new();
    for (t, m, mode, total) in cases {
        let (n, passed, agg) = run_census(t, m, mode, Engine::Babai)?;
        ensure(n == total && passed == total && agg == Some(true), || {
            format!("{t} m={m} {mode}: {passed}/{n}")
        })?;
        let (_, o_passed, _) = run_census(t, m, mode, Engine::Orbits)?;
        ensure(o_passed == passed, || {
            format!("{t} m={m}: orbit engine disagrees")
        })?;
        detail.push(format!("{t} m={m}: {passed}/{n}"));
    }
    Ok(detail.join(", "))
}

fn c9_long() -> Outcome {
    let (n, passed, agg) = run_census("Z3", 4, Mode::PcayleyGraph, Engine::Babai)?;
    ensure(n == 1 << 18 && passed == n && agg == Some(true), || {
        format!("{passed}/{n}")
    })?;
    Ok(format!("Z3 m=4: {passed}/{n}"))
}

fn family(t: &str, m: usize, mode: Mode) -> Vec<MCayleyDigraph> {
    let enc = Encoding::new(group(t), m, mode).unwrap();
    (0..enc.total()).map(|i| enc.digraph(i)).collect()
}

fn c10_cross() -> Outcome {
    let mut detail = Vec::new();
    for (t, mode, pcayley) in [
        ("Z2", Mode::Digraph, false),
        ("Z3", Mode::PcayleyGraph, true),
        ("Z4", Mode::PcayleyGraph, true),
    ] {
        let fam = family(t, 2, mode);
        let cv = cross_validate(&fam, pcayley, &limits()).map_err(|e| e.to_string())?;
        ensure(cv.disagreements.is_empty(), || {
            format!("{t} {mode}: disagreements at {:?}", cv.disagreements)
        })?;
        detail.push(format!(
            "{t} {mode}: {} instances, {} hold",
            cv.instances, cv.babai_true
        ));
    }
    Ok(detail.join("; "))
}

fn c11_table1() -> Outcome {
    let r = verify_table1();
    ensure(r.pass, || format!("{r:?}"))?;
    Ok(format!(
        "4 rows; {} overgroups, {} with Sylow 3-subgroup of order 3 all conjugate",
        r.overgroups, r.sylow3_order3
    ))
}

fn same_group(a: &ColoredDigraph, b: &ColoredDigraph) -> bool {
    let (ga, gb) = (
        automorphism_group(a, &limits()).unwrap(),
        automorphism_group(b, &limits()).unwrap(),
    );
    ga.order() == gb.order() && ga.generators().iter().all(|p| b.is_automorphism(p))
}

fn c12_structure() -> Outcome {
    let catalog = [
        ("Z3", 2, Mode::Graph),
        ("Z4", 2, Mode::Digraph),
        ("Z2xZ2", 2, Mode::Graph),
        ("D6", 2, Mode::Digraph),
        ("Z2", 3, Mode::Digraph),
        ("Z3", 3, Mode::PcayleyGraph),
        ("Z4", 2, Mode::PcayleyDigraph),
        ("D6", 2, Mode::PcayleyGraph),
        ("Z5", 2, Mode::PcayleyGraph),
        ("Z2", 4, Mode::PcayleyDigraph),
    ];
    let mut stream = HashStream::new(12);
    let mut checks = 0;
    for (t, m, mode) in catalog {
        let enc = Encoding::new(group(t), m, mode).unwrap();
        let ng = NormalizerGroup::new(group(t), m);
        let rg = right_regular(enc.group(), m);
        for _ in 0..200 {
            let g = enc.digraph(stream.next_u64() % enc.total());
            let c = g.complement();
            ensure(c.complement() == g, || {
                format!("{t} {mode}: complement is not an involution")
            })?;
            let (cg, cc) = (
                ColoredDigraph::from_mcayley(&g, PartMode::Free),
                ColoredDigraph::from_mcayley(&c, PartMode::Free),
            );
            ensure(same_group(&cg, &cc), || {
                format!("{t} {mode}: Aut(Γ) ≠ Aut(Γᶜ)")
            })?;
            ensure(rg.generators.iter().all(|p| g.is_automorphism(p)), || {
                format!("{t} {mode}: R(G) ⊄ Aut(Γ)")
            })?;
            checks += 3;
            if mode.is_pcayley() {
                let mc = g.multipartite_complement().unwrap();
                ensure(mc.multipartite_complement().unwrap() == g, || {
                    format!("{t} {mode}: mc is not an involution")
                })?;
                let n = ng.element_at(stream.below(ng.order() as usize) as u128);
                let sigma = if stream.below(2) == 0 {
                    ng.apply_to_digraph(
                        &ng.element_at(stream.below(ng.order() as usize) as u128),
                        &g,
                    )
                } else {
                    enc.digraph(stream.next_u64() % enc.total())
                };
                let lhs = ng.apply_to_digraph(&n, &g) == sigma;
                let rhs = ng.apply_to_digraph(&n, &mc) == sigma.multipartite_complement().unwrap();
                ensure(lhs == rhs, || {
                    format!("{t} {mode}: Γⁿ = Σ and (Γ^mc)ⁿ = Σ^mc disagree")
                })?;
                checks += 2;
            }
        }
        if m >= 2 {
            // restriction of the stabilizer of the last part to the other parts
            let k = enc.group().order();
            let restricted: BTreeSet<Permutation> = ng
                .enumerate_n(&limits())
                .unwrap()
                .filter(|e| e.sigma[m - 1] == m - 1)
                .map(|e| ng.to_permutation(&e).restrict((m - 1) * k).unwrap())
                .collect();
            let smaller = NormalizerGroup::new(group(t), m - 1);
            let direct: BTreeSet<Permutation> = smaller
                .enumerate_n(&limits())
                .unwrap()
                .map(|e| smaller.to_permutation(&e))
                .collect();
            ensure(restricted == direct, || {
                format!("{t}, m={m}: restriction differs")
            })?;
            checks += 1;
        }
    }
    Ok(format!(
        "10 catalog families × 200 instances, {checks} checks"
    ))
}

struct Criterion {
    id: &'static str,
    limit: Duration,
    parallel: bool,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let long =
        args.iter().any(|a| a == "--long") || std::env::var("MCAYLEY_LONG").is_ok_and(|v| v == "1");
    let selected: Vec<&str> = args
        .iter()
        .filter(|a| !a.starts_with('-'))
        .map(String::as_str)
        .collect();
    let s = Duration::from_secs;
    let mut criteria = vec![
        Criterion {
            id: "1",
            limit: s(60),
            parallel: false,
            run: c1_normalizer,
        },
        Criterion {
            id: "2",
            limit: s(60),
            parallel: false,
            run: c2_centralizer,
        },
        Criterion {
            id: "3",
            limit: s(60),
            parallel: false,
            run: c3_composition,
        },
        Criterion {
            id: "4",
            limit: s(5),
            parallel: false,
            run: c4_f2,
        },
        Criterion {
            id: "5",
            limit: s(5),
            parallel: false,
            run: c5_f1,
        },
        Criterion {
            id: "6",
            limit: s(30),
            parallel: false,
            run: c6_gadget,
        },
        Criterion {
            id: "7",
            limit: s(60),
            parallel: false,
            run: c7_lemma57,
        },
        Criterion {
            id: "8",
            limit: s(10),
            parallel: false,
            run: c8_pdci,
        },
        Criterion {
            id: "9",
            limit: s(600),
            parallel: true,
            run: c9_census,
        },
        Criterion {
            id: "10",
            limit: s(1800),
            parallel: false,
            run: c10_cross,
        },
        Criterion {
            id: "11",
            limit: s(600),
            parallel: false,
            run: c11_table1,
        },
        Criterion {
            id: "12",
            limit: s(300),
            parallel: false,
            run: c12_structure,
        },
    ];
    if long {
        criteria.push(Criterion {
            id: "9-long",
            limit: s(12 * 3600),
            parallel: true,
            run: c9_long,
        });
    }
    let scale = (4.0 / workers() as f64).max(1.0);
    let mut failed = 0;
    for c in criteria
        .iter()
        .filter(|c| selected.is_empty() || selected.contains(&c.id))
    {
        let clock = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = clock.elapsed();
        let limit = if c.parallel {
            c.limit.mul_f64(scale)
        } else {
            c.limit
        };
        let outcome = outcome.and_then(|d| {
            if elapsed <= limit {
                Ok(d)
            } else {
                Err(format!("{d}; took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(d) => println!("criterion {}: PASS ({d}; {elapsed:.2?})", c.id),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL ({e}; {elapsed:.2?})", c.id);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
