//! Generators for the nubot constructions: each returns a rule set, an
//! initial configuration and a target predicate, ready to hand to the
//! scheduler.

pub mod counter;
pub mod doubling;
pub mod growth;
pub mod matmul;
pub mod parallel;
pub mod sort;
pub mod synchronization;

use crate::kinetics::config::{BondType, Configuration};
use crate::kinetics::engine::{
    estimate_expected_time, run_trajectory, ExpectedTime, Trajectory,
};
use crate::kinetics::rules::RuleSet;
use crate::ruledsl;
use crate::state::StateId;
use std::sync::Arc;

pub use doubling::gen_line_doubling;

/// What a finished run must look like.
#[derive(Clone)]
pub enum Target {
    /// Terminal configuration equals this one up to translation.
    Congruent(Configuration),
    /// Arbitrary named predicate.
    Predicate(
        &'static str,
        Arc<dyn Fn(&Configuration) -> bool + Send + Sync>,
    ),
}

impl std::fmt::Debug for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Congruent(c) => write!(f, "Congruent({} monomers)", c.len()),
            Target::Predicate(name, _) => write!(f, "Predicate({name})"),
        }
    }
}

/// Bundle of rule set, initial configuration, target predicate and declared
/// complexity metrics produced by each generator.
#[derive(Debug)]
pub struct Construction {
    pub name: String,
    pub rules: RuleSet,
    pub initial: Configuration,
    pub target: Target,
    /// Declared exponent p of the expected-time bound O(log^p n).
    pub time_exponent: f64,
    /// Declared bounding-rectangle cap (width, height) including constants.
    pub space_bound: (u32, u32),
    /// Generous per-run event budget.
    pub max_events: u64,
}

impl Construction {
    pub fn target_holds(&self, c: &Configuration) -> bool {
        match &self.target {
            Target::Congruent(t) => c.congruent(t),
            Target::Predicate(_, f) => f(c),
        }
    }

    pub fn target_name(&self) -> String {
        match &self.target {
            Target::Congruent(c) => format!("congruent-{}", c.digest()),
            Target::Predicate(name, _) => (*name).to_string(),
        }
    }

    pub fn run_once(&self, seed: u64, record: bool) -> Trajectory {
        run_trajectory(
            &self.rules,
            &self.initial,
            seed,
            self.max_events,
            record,
            |_| false,
        )
    }

    pub fn estimate(&self, trials: u64, seed: u64) -> ExpectedTime {
        let target = |c: &Configuration| self.target_holds(c);
        estimate_expected_time(
            &self.rules,
            &self.initial,
            &target,
            trials,
            seed,
            self.max_events,
        )
    }

    /// Number of distinct monomer states mentioned by the rule set.
    pub fn distinct_states(&self) -> usize {
        self.rules.states.distinct_states()
    }
}

/// Incremental rule-set builder used by the generators. Rules are written
/// in the `.nbr` surface syntax so generated sets serialize byte-for-byte.
pub struct Build {
    pub rules: RuleSet,
}

impl Default for Build {
    fn default() -> Self {
        Self::new()
    }
}

impl Build {
    pub fn new() -> Self {
        Build {
            rules: RuleSet::new(crate::state::StateTable::new()),
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        self.rules.states.intern(name)
    }

    /// Parse rule lines (without the format header) into the shared table.
    /// Panics on parse errors: generator text is a compile-time artifact.
    pub fn text(&mut self, src: &str) {
        ruledsl::parse_rules_append(src, &mut self.rules)
            .unwrap_or_else(|e| panic!("generator rule text invalid: {e}\n{src}"));
    }

    pub fn finish(self) -> RuleSet {
        self.rules
    }
}

/// Lay a horizontal line of monomers at y = 0 starting from x = 0, with the
/// given bond between consecutive monomers.
pub fn horizontal_line(
    config: &mut Configuration,
    states: &[StateId],
    bond: BondType,
) {
    use crate::grid::GridPoint;
    for (i, s) in states.iter().enumerate() {
        config
            .add_monomer(GridPoint::new(i as i32, 0), *s)
            .expect("line cells vacant");
    }
    if bond != BondType::Null {
        for i in 1..states.len() {
            config
                .set_bond(
                    GridPoint::new(i as i32 - 1, 0),
                    GridPoint::new(i as i32, 0),
                    bond,
                )
                .expect("adjacent");
        }
    }
}
