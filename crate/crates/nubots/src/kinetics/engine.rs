//! The continuous-time Markov scheduler.
//!
//! Rate convention: every applicable (rule, located pair) instance is one
//! rate-1 event. When a movement instance fires and both arm/base choices
//! are unblocked, the choice is resolved uniformly at random inside the
//! event; a blocked choice is never taken and an instance with both choices
//! blocked is not applicable. (Counting each arm choice as a separate
//! rate-1 event would make a 13-rule sequential chain complete in mean
//! time below 13 whenever it contains a movement step, contradicting the
//! model's published constant; the per-pair convention reproduces it.)
//!
//! Matches are maintained incrementally: applying an event re-scans only
//! the cells it touched. `Sim::check_index` compares against a full
//! recomputation and is exercised by differential tests.

use crate::grid::GridPoint;
use crate::kinetics::config::Configuration;
use crate::kinetics::events::{apply_event, lhs_matches, ArmChoice, Event};
use crate::kinetics::movable::movable_set;
use crate::kinetics::rules::{RuleId, RuleSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// SplitMix64 step, used to derive independent per-trial seeds from a base
/// seed and a trial counter so any single trial is replayable in isolation.
pub fn derive_seed(base: u64, counter: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(counter.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// One recorded scheduler step.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TraceStep {
    pub index: u64,
    pub time: f64,
    pub rule: u32,
    pub anchor: (i32, i32),
    pub orientation: String,
    pub choice: Option<String>,
    pub movable_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    /// No rule is applicable.
    Halted,
    /// The caller's stop predicate returned true.
    TargetReached,
    /// The event budget ran out first.
    BudgetExhausted,
}

/// A finished run: seed, recorded steps, terminal configuration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub seed: u64,
    pub steps: Vec<TraceStep>,
    pub stop: StopReason,
    pub final_time: f64,
    pub events: u64,
    pub terminal: Configuration,
    /// Largest bounding rectangle seen along the way.
    pub max_rect: crate::grid::BoundingRect,
}

#[derive(Debug, Clone, Copy)]
pub enum RunOutcome {
    Step { dt: f64 },
    Halted,
}

#[derive(Default, Clone)]
struct MovementCache {
    /// movable sets per choice; empty = blocked
    s1: Vec<GridPoint>,
    s2: Vec<GridPoint>,
}

/// Simulation state: a configuration plus the incrementally-maintained
/// match index for one rule set.
pub struct Sim<'r> {
    pub rules: &'r RuleSet,
    pub config: Configuration,
    pub time: f64,
    pub events_applied: u64,
    /// (anchor, rule) -> locally matched
    matches: BTreeSet<(GridPoint, u32)>,
    /// second-cell -> anchors of matches whose s2 slot sits there
    by_second: BTreeMap<(GridPoint, u32), GridPoint>,
    /// cached movable sets for movement matches
    move_cache: HashMap<(GridPoint, u32), MovementCache>,
    /// cell -> movement matches whose cached set read that cell
    readers: HashMap<GridPoint, Vec<(GridPoint, u32)>>,
    rng: ChaCha8Rng,
}

impl<'r> Sim<'r> {
    pub fn new(rules: &'r RuleSet, config: Configuration, seed: u64) -> Self {
        let mut sim = Sim {
            rules,
            config,
            time: 0.0,
            events_applied: 0,
            matches: BTreeSet::new(),
            by_second: BTreeMap::new(),
            move_cache: HashMap::new(),
            readers: HashMap::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        sim.rebuild_index();
        sim
    }

    fn rebuild_index(&mut self) {
        self.matches.clear();
        self.by_second.clear();
        self.move_cache.clear();
        self.readers.clear();
        let cells: Vec<GridPoint> = self.config.positions().collect();
        let mut with_neighbors: BTreeSet<GridPoint> = BTreeSet::new();
        for c in cells {
            with_neighbors.insert(c);
            for n in c.neighbors() {
                with_neighbors.insert(n);
            }
        }
        for c in with_neighbors {
            self.rescan_cell(c);
        }
    }

    /// Re-derive all matches whose lhs footprint touches `cell`.
    fn rescan_cell(&mut self, cell: GridPoint) {
        // Drop existing matches anchored here.
        let anchored: Vec<u32> = self
            .matches
            .range((cell, 0)..=(cell, u32::MAX))
            .map(|(_, r)| *r)
            .collect();
        for r in anchored {
            self.remove_match(cell, r);
        }
        // Drop matches whose second cell is here.
        let seconds: Vec<(u32, GridPoint)> = self
            .by_second
            .range((cell, 0)..=(cell, u32::MAX))
            .map(|((_, r), a)| (*r, *a))
            .collect();
        for (r, anchor) in seconds {
            self.remove_match(anchor, r);
        }
        // Rescan candidates touching the cell.
        match self.config.state_at(cell) {
            Some(s) => {
                for id in self.rules.rules_by_s1(s).to_vec() {
                    self.try_add(cell, id);
                }
                for id in self.rules.rules_by_s2(s).to_vec() {
                    let anchor = cell - self.rules.get(id).lhs.dir;
                    self.try_add(anchor, id);
                }
            }
            None => {
                // Empty cell: only rules with an empty slot can anchor a
                // footprint here.
                for id in self.rules.ids() {
                    let lhs = self.rules.get(id).lhs;
                    if lhs.s1.is_empty() {
                        self.try_add(cell, id);
                    }
                    if lhs.s2.is_empty() {
                        self.try_add(cell - lhs.dir, id);
                    }
                }
            }
        }
    }

    fn try_add(&mut self, anchor: GridPoint, id: RuleId) {
        let rule = self.rules.get(id);
        if lhs_matches(&self.config, rule, anchor) {
            if self.matches.insert((anchor, id.0)) {
                self.by_second.insert((anchor + rule.lhs.dir, id.0), anchor);
            }
        }
    }

    fn remove_match(&mut self, anchor: GridPoint, rule: u32) {
        if self.matches.remove(&(anchor, rule)) {
            let dir = self.rules.get(RuleId(rule)).lhs.dir;
            self.by_second.remove(&(anchor + dir, rule));
            self.move_cache.remove(&(anchor, rule));
        }
    }

    fn invalidate_readers(&mut self, cell: GridPoint) {
        if let Some(list) = self.readers.remove(&cell) {
            for key in list {
                self.move_cache.remove(&key);
            }
        }
    }

    /// Movable sets for a movement match, cached until a read cell changes.
    fn movement_sets(&mut self, anchor: GridPoint, id: RuleId) -> MovementCache {
        let key = (anchor, id.0);
        if let Some(c) = self.move_cache.get(&key) {
            return c.clone();
        }
        let rule = self.rules.get(id);
        let second = anchor + rule.lhs.dir;
        let t = rule.arm_translation().expect("movement rule");
        let s1 = movable_set(&self.config, anchor, second, -t).expect("matched");
        let s2 = movable_set(&self.config, second, anchor, t).expect("matched");
        let cache = MovementCache { s1, s2 };
        // Read set: members, swept cells and bond partners for both
        // closures, plus the pair itself. Over-approximate with the
        // neighbourhoods of every member.
        let mut reads: BTreeSet<GridPoint> = BTreeSet::new();
        for p in [anchor, second] {
            reads.insert(p);
            for n in p.neighbors() {
                reads.insert(n);
            }
        }
        for m in cache.s1.iter().chain(cache.s2.iter()) {
            reads.insert(*m);
            for n in m.neighbors() {
                reads.insert(n);
            }
        }
        // A blocked closure read every cell it visited before hitting the
        // base; recompute it pessimistically by walking both directions'
        // potential members: covered by the neighbourhoods above only for
        // the returned sets, so for blocked results also include the
        // blocked-side exploration. Simplest sound choice: when a side is
        // blocked, fall back to invalidating on any event (empty read set
        // is wrong), so walk the closure again recording visits.
        if cache.s1.is_empty() {
            record_blocked_reads(&self.config, anchor, second, -t, &mut reads);
        }
        if cache.s2.is_empty() {
            record_blocked_reads(&self.config, second, anchor, t, &mut reads);
        }
        for c in reads {
            self.readers.entry(c).or_default().push(key);
        }
        self.move_cache.insert(key, cache.clone());
        cache
    }

    /// The applicable events, grouped per (rule, located pair) instance in
    /// canonical order. Each inner vector is non-empty.
    pub fn instances(&mut self) -> Vec<Vec<Event>> {
        let keys: Vec<(GridPoint, u32)> = self.matches.iter().copied().collect();
        let mut out = Vec::with_capacity(keys.len());
        for (anchor, rid) in keys {
            let id = RuleId(rid);
            let rule = self.rules.get(id);
            if !rule.is_movement() {
                out.push(vec![Event {
                    rule: id,
                    anchor,
                    choice: None,
                    translation: None,
                    movable: Vec::new(),
                }]);
                continue;
            }
            let sets = self.movement_sets(anchor, id);
            let t = rule.arm_translation().expect("movement rule");
            let mut group = Vec::new();
            if !sets.s1.is_empty() {
                group.push(Event {
                    rule: id,
                    anchor,
                    choice: Some(ArmChoice::S1Arm),
                    translation: Some(-t),
                    movable: sets.s1,
                });
            }
            if !sets.s2.is_empty() {
                group.push(Event {
                    rule: id,
                    anchor,
                    choice: Some(ArmChoice::S2Arm),
                    translation: Some(t),
                    movable: sets.s2,
                });
            }
            if !group.is_empty() {
                out.push(group);
            }
        }
        out
    }

    /// Flat per-choice event list in canonical order (the spec'd
    /// enumeration; blocked choices omitted).
    pub fn events(&mut self) -> Vec<Event> {
        self.instances().into_iter().flatten().collect()
    }

    /// Number of applicable (rule, located pair) instances.
    pub fn rate(&mut self) -> usize {
        self.instances().len()
    }

    /// One Gillespie step: waiting time Exp(k), uniform instance, uniform
    /// unblocked arm choice.
    pub fn step(&mut self) -> RunOutcome {
        let groups = self.instances();
        let k = groups.len();
        if k == 0 {
            return RunOutcome::Halted;
        }
        let u: f64 = self.rng.gen::<f64>();
        let dt = -(1.0 - u).ln() / k as f64;
        let pick = self.rng.gen_range(0..k);
        let group = &groups[pick];
        let event = if group.len() == 1 {
            group[0].clone()
        } else {
            group[self.rng.gen_range(0..group.len())].clone()
        };
        self.apply(&event);
        self.time += dt;
        RunOutcome::Step { dt }
    }

    /// Apply an event and update the incremental index.
    pub fn apply(&mut self, event: &Event) {
        let dirty = apply_event(&mut self.config, self.rules, event)
            .expect("scheduler applied a stale event");
        for c in &dirty {
            self.invalidate_readers(*c);
        }
        for c in dirty {
            self.rescan_cell(c);
        }
        self.events_applied += 1;
    }

    /// Compare the incremental index against a from-scratch enumeration.
    pub fn check_index(&mut self) -> bool {
        let incremental = self.events();
        let full = crate::kinetics::events::enumerate_events(&self.config, self.rules);
        incremental == full
    }

    /// Run until halt, stop predicate, or the event budget is exhausted.
    pub fn run(
        &mut self,
        max_events: u64,
        record: bool,
        mut stop: impl FnMut(&Configuration) -> bool,
    ) -> Trajectory {
        let mut steps = Vec::new();
        let mut max_rect = self.config.bounding_rect();
        let reason = loop {
            if stop(&self.config) {
                break StopReason::TargetReached;
            }
            if self.events_applied >= max_events {
                break StopReason::BudgetExhausted;
            }
            let groups = self.instances();
            let k = groups.len();
            if k == 0 {
                break StopReason::Halted;
            }
            let u: f64 = self.rng.gen::<f64>();
            let dt = -(1.0 - u).ln() / k as f64;
            let pick = self.rng.gen_range(0..k);
            let group = &groups[pick];
            let event = if group.len() == 1 {
                group[0].clone()
            } else {
                group[self.rng.gen_range(0..group.len())].clone()
            };
            self.time += dt;
            let index = self.events_applied;
            self.apply(&event);
            let rect = self.config.bounding_rect();
            if rect.area() > max_rect.area() {
                max_rect = rect;
            }
            if record {
                let rule = self.rules.get(event.rule);
                steps.push(TraceStep {
                    index,
                    time: self.time,
                    rule: event.rule.0,
                    anchor: (event.anchor.x, event.anchor.y),
                    orientation: rule.lhs.dir.name().to_string(),
                    choice: event.choice.map(|c| c.name().to_string()),
                    movable_len: event.movable.len(),
                    digest: Some(self.config.digest()),
                });
            }
        };
        Trajectory {
            seed: 0,
            steps,
            stop: reason,
            final_time: self.time,
            events: self.events_applied,
            terminal: self.config.clone(),
            max_rect,
        }
    }
}

fn record_blocked_reads(
    config: &Configuration,
    arm: GridPoint,
    base: GridPoint,
    v: crate::grid::Direction,
    reads: &mut BTreeSet<GridPoint>,
) {
    // Replay the closure, recording every consulted cell, ignoring the
    // block so the full dependency set is captured.
    use crate::kinetics::config::BondType;
    let mut members: BTreeSet<GridPoint> = BTreeSet::new();
    members.insert(arm);
    let mut frontier = vec![arm];
    while let Some(m) = frontier.pop() {
        reads.insert(m);
        for n in m.neighbors() {
            reads.insert(n);
        }
        let ahead = m + v;
        if config.occupied(ahead) && !members.contains(&ahead) && ahead != base {
            members.insert(ahead);
            frontier.push(ahead);
        }
        for (n, bond) in config.bonds_at(m) {
            if (m == arm && n == base) || (m == base && n == arm) || members.contains(&n) || n == base
            {
                continue;
            }
            let must = match bond {
                BondType::Rigid => true,
                BondType::Flexible => crate::grid::tri_distance(m + v, n) != 1,
                BondType::Null => unreachable!(),
            };
            if must {
                members.insert(n);
                frontier.push(n);
            }
        }
    }
    reads.insert(base);
    for n in base.neighbors() {
        reads.insert(n);
    }
}

/// Run a fresh simulation from `config` with a given seed.
pub fn run_trajectory(
    rules: &RuleSet,
    config: &Configuration,
    seed: u64,
    max_events: u64,
    record: bool,
    stop: impl FnMut(&Configuration) -> bool,
) -> Trajectory {
    let mut sim = Sim::new(rules, config.clone(), seed);
    let mut t = sim.run(max_events, record, stop);
    t.seed = seed;
    t
}

/// Aggregate timing over independent seeded trials.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectedTime {
    pub trials: u64,
    pub successes: u64,
    pub mean: f64,
    pub std_error: f64,
    pub success_rate: f64,
    pub max_rect: crate::grid::BoundingRect,
    pub mean_events: f64,
}

/// Estimate the expected completion time of a construction by independent
/// trials with derived per-trial seeds. Success means the target predicate
/// holds at halt; the mean is over successful trials' final clock times.
pub fn estimate_expected_time(
    rules: &RuleSet,
    initial: &Configuration,
    target: &(dyn Fn(&Configuration) -> bool + Sync),
    trials: u64,
    seed: u64,
    max_events: u64,
) -> ExpectedTime {
    use rayon::prelude::*;
    let results: Vec<(bool, f64, crate::grid::BoundingRect, u64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t = run_trajectory(
                rules,
                initial,
                derive_seed(seed, i),
                max_events,
                false,
                |_| false,
            );
            let ok = matches!(t.stop, StopReason::Halted) && target(&t.terminal);
            (ok, t.final_time, t.max_rect, t.events)
        })
        .collect();
    let successes: Vec<f64> = results
        .iter()
        .filter(|(ok, ..)| *ok)
        .map(|(_, t, ..)| *t)
        .collect();
    let n = successes.len() as f64;
    let mean = if n > 0.0 { successes.iter().sum::<f64>() / n } else { f64::NAN };
    let var = if n > 1.0 {
        successes.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let max_rect = results
        .iter()
        .map(|(_, _, r, _)| *r)
        .max_by_key(|r| r.area())
        .unwrap_or(crate::grid::BoundingRect::EMPTY);
    let mean_events =
        results.iter().map(|(_, _, _, e)| *e as f64).sum::<f64>() / trials.max(1) as f64;
    ExpectedTime {
        trials,
        successes: successes.len() as u64,
        mean,
        std_error: if n > 0.0 { (var / n).sqrt() } else { f64::NAN },
        success_rate: successes.len() as f64 / trials as f64,
        max_rect,
        mean_events,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PlusX;
    use crate::kinetics::config::BondType;
    use crate::kinetics::rules::{Rule, RuleSide};
    use crate::state::{StateId, StateTable};

    /// A sequential chain of `n` state-change steps on a single pair.
    fn chain_rules(n: usize) -> (RuleSet, Configuration) {
        let mut t = StateTable::new();
        let ids: Vec<StateId> = (0..=n).map(|i| t.intern(&format!("c{i}"))).collect();
        let partner = t.intern("p");
        let mut rules = RuleSet::new(t);
        for i in 0..n {
            rules
                .push(Rule {
                    lhs: RuleSide {
                        s1: ids[i],
                        s2: partner,
                        bond: BondType::Rigid,
                        dir: PlusX,
                    },
                    rhs: RuleSide {
                        s1: ids[i + 1],
                        s2: partner,
                        bond: BondType::Rigid,
                        dir: PlusX,
                    },
                })
                .unwrap();
        }
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::new(0, 0), ids[0]).unwrap();
        cfg.add_monomer(GridPoint::new(1, 0), partner).unwrap();
        cfg.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Rigid)
            .unwrap();
        (rules, cfg)
    }

    #[test]
    fn halted_when_no_rules() {
        let (rules, cfg) = chain_rules(0);
        let mut sim = Sim::new(&rules, cfg, 7);
        assert!(matches!(sim.step(), RunOutcome::Halted));
        let t = run_trajectory(&rules, &sim.config, 7, 1000, true, |_| false);
        assert_eq!(t.steps.len(), 0);
        assert_eq!(t.stop, StopReason::Halted);
    }

    #[test]
    fn deterministic_under_seed() {
        let (rules, cfg) = chain_rules(5);
        let t1 = run_trajectory(&rules, &cfg, 42, 1000, true, |_| false);
        let t2 = run_trajectory(&rules, &cfg, 42, 1000, true, |_| false);
        assert_eq!(t1.steps, t2.steps);
        let t3 = run_trajectory(&rules, &cfg, 43, 1000, true, |_| false);
        assert!(t1.steps.iter().map(|s| s.time).ne(t3.steps.iter().map(|s| s.time)));
    }

    #[test]
    fn chain_of_13_has_mean_13() {
        let (rules, cfg) = chain_rules(13);
        let est = estimate_expected_time(&rules, &cfg, &|c| {
            // terminal state reached
            c.monomers().all(|(_, s)| s.0 != 1)
        }, 10_000, 99, 10_000);
        assert_eq!(est.success_rate, 1.0);
        // mean 13, sd per-trial sqrt(13); 10^4 trials give se ~ 0.036
        assert!(
            (est.mean - 13.0).abs() < 13.0 * 0.03,
            "mean {} out of band",
            est.mean
        );
    }

    #[test]
    fn budget_exhaustion_reported() {
        let (rules, cfg) = chain_rules(13);
        let t = run_trajectory(&rules, &cfg, 1, 3, false, |_| false);
        assert_eq!(t.stop, StopReason::BudgetExhausted);
    }

    #[test]
    fn incremental_index_matches_full_enumeration() {
        let (rules, cfg) = chain_rules(8);
        let mut sim = Sim::new(&rules, cfg, 5);
        for _ in 0..8 {
            assert!(sim.check_index());
            match sim.step() {
                RunOutcome::Step { .. } => {}
                RunOutcome::Halted => break,
            }
        }
        assert!(sim.check_index());
    }

    #[test]
    fn mean_waiting_time_scales_with_k() {
        // k = 3 independent pairs: mean waiting time for the first event
        // over many draws is 1/3.
        let (rules, _) = chain_rules(1);
        let mut cfg = Configuration::new();
        let c0 = rules.states.lookup("c0").unwrap();
        let p = rules.states.lookup("p").unwrap();
        for i in 0..3 {
            cfg.add_monomer(GridPoint::new(4 * i, 0), c0).unwrap();
            cfg.add_monomer(GridPoint::new(4 * i + 1, 0), p).unwrap();
            cfg.set_bond(
                GridPoint::new(4 * i, 0),
                GridPoint::new(4 * i + 1, 0),
                BondType::Rigid,
            )
            .unwrap();
        }
        let mut total = 0.0;
        let n = 100_000;
        let mut sim = Sim::new(&rules, cfg.clone(), 11);
        for _ in 0..n {
            sim.config = cfg.clone();
            sim.rebuild_index();
            let before = sim.time;
            match sim.step() {
                RunOutcome::Step { dt } => total += dt,
                RunOutcome::Halted => panic!("should have events"),
            }
            let _ = before;
        }
        let mean = total / n as f64;
        assert!(
            (mean - 1.0 / 3.0).abs() < 1.0 / 3.0 * 0.02,
            "mean dt {mean} should be 1/3"
        );
    }
}
