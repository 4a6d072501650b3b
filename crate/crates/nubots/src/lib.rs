//! A simulator for the nubot model of active molecular self-assembly, with
//! generators for the classic constructions: line doubling, shift/lift
//! synchronization, constant-state line growth, padded counters, parallel
//! sorting, Boolean matrix multiplication, space-bounded Turing machine
//! simulation by iterated matrix squaring, and layered Boolean circuit
//! evaluation — all runnable at desk scale and cross-checked against
//! independent oracles.

pub mod constructions;
pub mod grid;
pub mod kinetics;
pub mod render;
pub mod ruledsl;
pub mod state;
pub mod verify;

pub use grid::{BoundingRect, Direction, GridPoint};
pub use kinetics::{BondType, Configuration, Rule, RuleSet};
pub use state::{StateId, StateTable};
