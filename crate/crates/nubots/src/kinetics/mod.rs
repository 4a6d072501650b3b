//! Rule semantics, event enumeration, and the continuous-time Markov
//! scheduler.

pub mod config;
pub mod engine;
pub mod events;
pub mod exhaustive;
pub mod movable;
pub mod rules;

pub use config::{BondType, ConfigError, Configuration};
pub use engine::{
    derive_seed, estimate_expected_time, ExpectedTime, RunOutcome, Sim, StopReason, TraceStep,
    Trajectory,
};
pub use events::{apply_event, enumerate_events, ArmChoice, Event, EventError};
pub use exhaustive::{exhaustive_trajectories, ExhaustiveError, TrajectoryDag};
pub use movable::{movable_set, MovableError};
pub use rules::{validate_rule, Rule, RuleError, RuleId, RuleSet, RuleSide};
