//! The Hare and the Tortoise, shipped as a worked corpus: the actant table,
//! the narrative-program table and the trajectory plan that wires them.

use crate::diagram::{build_trajectory, Trajectory, TrajectoryPlan};
use crate::instance::CsvSource;
use crate::narrative::{load_actants, parse_np_table, Actant, NpCorpus};

pub const ACTANTS_CSV: &str = include_str!("../fixtures/aesop/actants.csv");
pub const NP_CSV: &str = include_str!("../fixtures/aesop/np.csv");
pub const PLAN: &str = include_str!("../fixtures/aesop/fable.plan");

pub fn actants() -> Vec<Actant> {
    load_actants(&CsvSource::new("actants.csv", ACTANTS_CSV)).expect("shipped actant table loads")
}

pub fn corpus() -> NpCorpus {
    parse_np_table(&CsvSource::new("np.csv", NP_CSV), &actants()).expect("shipped NP table parses")
}

pub fn plan() -> TrajectoryPlan {
    TrajectoryPlan::from_json(PLAN).expect("shipped plan parses")
}

/// The factorized trajectory with the NP4 and NP5 definitions registered.
pub fn trajectory() -> Trajectory {
    build_trajectory(&corpus(), &plan()).expect("shipped plan builds")
}
