//! Desk-scale checks of the small classification statements: trivial and
//! order-2 groups under exhaustive censuses, the negative fixtures, and
//! subgroup consistency for `Z3 ≤ D6`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::census::{census, CensusConfig, Engine};
use super::fixtures::{run_fixture, FIXTURE_IDS};
use crate::digraph::Mode;
use crate::error::Result;
use crate::groups::make_named_group;
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub checks: Vec<TheoremCheck>,
    pub pass: bool,
}

fn census_check(
    group: &str,
    m: usize,
    mode: Mode,
    expect: bool,
    engine: Engine,
    workers: usize,
    limits: &Limits,
) -> Result<TheoremCheck> {
    let mut cfg = CensusConfig::new(Arc::new(make_named_group(group)?), m, mode);
    cfg.engine = engine;
    cfg.workers = workers;
    cfg.limits = limits.clone();
    let r = census(&cfg)?;
    Ok(TheoremCheck {
        name: format!("census {group} m={m} {mode}"),
        pass: r.aggregate == Some(expect),
        detail: r.summary(),
    })
}

/// Run every bundle. D6 at m = 3 uses the orbit engine, since its
/// part-fixing automorphism groups reach `6!³` elements.
pub fn verify_small_theorems(workers: usize, limits: &Limits) -> Result<TheoremReport> {
    let mut checks = Vec::new();
    for m in [2, 3] {
        for mode in [
            Mode::PcayleyGraph,
            Mode::PcayleyDigraph,
            Mode::Graph,
            Mode::Digraph,
        ] {
            checks.push(census_check(
                "Z1",
                m,
                mode,
                true,
                Engine::Babai,
                workers,
                limits,
            )?);
        }
    }
    let cases: [(&str, usize, Mode, bool, Engine); 8] = [
        ("Z2", 2, Mode::PcayleyDigraph, true, Engine::Babai),
        ("Z2", 3, Mode::PcayleyDigraph, true, Engine::Babai),
        ("Z2", 2, Mode::PcayleyGraph, true, Engine::Babai),
        ("Z2", 2, Mode::Graph, false, Engine::Babai),
        ("Z3", 2, Mode::Graph, true, Engine::Babai),
        ("Z2", 2, Mode::Digraph, false, Engine::Babai),
        ("Z3", 3, Mode::PcayleyGraph, true, Engine::Babai),
        ("D6", 3, Mode::PcayleyGraph, true, Engine::Orbits),
    ];
    for (g, m, mode, expect, engine) in cases {
        checks.push(census_check(g, m, mode, expect, engine, workers, limits)?);
    }
    for id in &FIXTURE_IDS[..10] {
        let r = run_fixture(id, limits)?;
        let failed: Vec<&str> = r
            .results
            .iter()
            .filter(|x| !x.pass)
            .map(|x| x.check.as_str())
            .collect();
        checks.push(TheoremCheck {
            name: format!("fixture {id}"),
            pass: r.pass,
            detail: if failed.is_empty() {
                format!("{} expectations reproduced", r.results.len())
            } else {
                format!("mismatched: {}", failed.join(", "))
            },
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(TheoremReport { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_theorems_hold() {
        let r = verify_small_theorems(1, &Limits::default()).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }
}
