//! Named fixtures, the exhaustive census engine, the degree-6 permutation
//! group table and the bundled small-group checks.

pub mod census;
pub mod fixtures;
pub mod table1;
pub mod theorems;

pub use census::{census, merge, CensusConfig, CensusRecord, CensusResult, Encoding, Engine};
pub use fixtures::{fixture, run_fixture, Expectation, Fixture, FixtureReport, FIXTURE_IDS};
pub use table1::{verify_table1, Table1Report};
pub use theorems::{verify_small_theorems, TheoremCheck, TheoremReport};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    #[test]
    fn fixtures_pass() {
        for id in FIXTURE_IDS {
            let t = std::time::Instant::now();
            let r = run_fixture(id, &Limits::default()).unwrap();
            eprintln!(
                "{id}: {:?} {}",
                t.elapsed(),
                serde_json::to_string(&r.results).unwrap()
            );
            assert!(r.pass, "{id}");
        }
    }
}
