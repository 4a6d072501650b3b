//! Concrete applicable rule instances and their application.

use crate::grid::{Direction, GridPoint};
use crate::kinetics::config::{BondType, Configuration};
use crate::kinetics::movable::movable_set;
use crate::kinetics::rules::{Rule, RuleId, RuleSet};
use thiserror::Error;

/// Which monomer of a matched movement pair moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArmChoice {
    S1Arm,
    S2Arm,
}

impl ArmChoice {
    pub fn name(self) -> &'static str {
        match self {
            ArmChoice::S1Arm => "s1",
            ArmChoice::S2Arm => "s2",
        }
    }
}

/// An applicable rule instance. For movement rules there is one event per
/// unblocked arm/base choice, carrying the translation and the computed
/// movable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub rule: RuleId,
    /// Position of the lhs `s1` slot (a monomer, or the empty cell for
    /// appearance rules anchored on `s2`).
    pub anchor: GridPoint,
    pub choice: Option<ArmChoice>,
    pub translation: Option<Direction>,
    pub movable: Vec<GridPoint>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EventError {
    #[error("event is no longer applicable (scheduler bug): rule {0:?} at {1}")]
    StaleEvent(RuleId, GridPoint),
}

/// Does the rule's lhs match at `anchor` (the `s1` slot position)?
pub fn lhs_matches(config: &Configuration, rule: &Rule, anchor: GridPoint) -> bool {
    let lhs = &rule.lhs;
    let second = anchor + lhs.dir;
    let ok1 = if lhs.s1.is_empty() {
        !config.occupied(anchor)
    } else {
        config.state_at(anchor) == Some(lhs.s1)
    };
    if !ok1 {
        return false;
    }
    let ok2 = if lhs.s2.is_empty() {
        !config.occupied(second)
    } else {
        config.state_at(second) == Some(lhs.s2)
    };
    if !ok2 {
        return false;
    }
    if !lhs.s1.is_empty() && !lhs.s2.is_empty() {
        config.bond(anchor, second) == lhs.bond
    } else {
        true
    }
}

/// Expand a locally-matched rule instance into per-choice events. Blocked
/// movement choices are omitted; a non-movement match yields one event.
pub fn expand_match(config: &Configuration, rules: &RuleSet, id: RuleId, anchor: GridPoint) -> Vec<Event> {
    let rule = rules.get(id);
    if !rule.is_movement() {
        return vec![Event {
            rule: id,
            anchor,
            choice: None,
            translation: None,
            movable: Vec::new(),
        }];
    }
    let second = anchor + rule.lhs.dir;
    let t = rule.arm_translation().expect("validated movement rule");
    let mut out = Vec::new();
    // Canonical order: S1Arm before S2Arm.
    let m1 = movable_set(config, anchor, second, -t).expect("matched pair");
    if !m1.is_empty() {
        out.push(Event {
            rule: id,
            anchor,
            choice: Some(ArmChoice::S1Arm),
            translation: Some(-t),
            movable: m1,
        });
    }
    let m2 = movable_set(config, second, anchor, t).expect("matched pair");
    if !m2.is_empty() {
        out.push(Event {
            rule: id,
            anchor,
            choice: Some(ArmChoice::S2Arm),
            translation: Some(t),
            movable: m2,
        });
    }
    out
}

/// Every applicable event in the configuration, in canonical order
/// (rule id, then anchor, then arm choice).
pub fn enumerate_events(config: &Configuration, rules: &RuleSet) -> Vec<Event> {
    let mut out = Vec::new();
    for id in rules.ids() {
        let rule = rules.get(id);
        let lhs = &rule.lhs;
        let mut anchors: Vec<GridPoint> = Vec::new();
        if !lhs.s1.is_empty() {
            for (p, s) in config.monomers() {
                if s == lhs.s1 {
                    anchors.push(p);
                }
            }
        } else {
            // Appearance anchored on the s2 monomer; the s1 slot is empty.
            for (p, s) in config.monomers() {
                if s == lhs.s2 {
                    anchors.push(p - lhs.dir);
                }
            }
        }
        for anchor in anchors {
            if lhs_matches(config, rule, anchor) {
                out.extend(expand_match(config, rules, id, anchor));
            }
        }
    }
    out
}

/// Apply an event, mutating the configuration. Returns the cells whose
/// contents changed (for incremental bookkeeping).
pub fn apply_event(
    config: &mut Configuration,
    rules: &RuleSet,
    event: &Event,
) -> Result<Vec<GridPoint>, EventError> {
    let rule = rules.get(event.rule);
    if !lhs_matches(config, rule, event.anchor) {
        return Err(EventError::StaleEvent(event.rule, event.anchor));
    }
    let lhs = &rule.lhs;
    let rhs = &rule.rhs;
    let p1 = event.anchor;
    let p2 = event.anchor + lhs.dir;
    let mut dirty = Vec::new();

    if !rule.is_movement() {
        // State changes, appearance, disappearance, bond change.
        for (p, s_old, s_new) in [(p1, lhs.s1, rhs.s1), (p2, lhs.s2, rhs.s2)] {
            match (s_old.is_empty(), s_new.is_empty()) {
                (true, false) => {
                    config.add_monomer(p, s_new).expect("appearance into vacancy");
                    dirty.push(p);
                }
                (false, true) => {
                    config.remove_monomer(p);
                    dirty.push(p);
                    // bonds died with it; partners' matches unaffected except
                    // via the bond, whose endpoints include p (marked) and
                    // the partner cell.
                    for q in p.neighbors() {
                        dirty.push(q);
                    }
                }
                (false, false) => {
                    if s_old != s_new {
                        config.set_state(p, s_new);
                        dirty.push(p);
                    }
                }
                (true, true) => {}
            }
        }
        if !rhs.s1.is_empty() && !rhs.s2.is_empty() {
            if config.bond(p1, p2) != rhs.bond {
                config.set_bond(p1, p2, rhs.bond).expect("bond between pair");
                dirty.push(p1);
                dirty.push(p2);
            }
        }
        return Ok(dirty);
    }

    // Movement.
    let choice = event.choice.expect("movement event carries a choice");
    let v = event.translation.expect("movement event carries a translation");
    let (arm, base) = match choice {
        ArmChoice::S1Arm => (p1, p2),
        ArmChoice::S2Arm => (p2, p1),
    };
    let movable = movable_set(config, arm, base, v).expect("matched pair");
    if movable.is_empty() || movable != event.movable {
        return Err(EventError::StaleEvent(event.rule, event.anchor));
    }
    // The pair bond travels with the arm and is rewritten below.
    config.set_bond(p1, p2, BondType::Null).expect("pair bond");
    config.translate_set(&movable, v);
    let (n1, n2) = match choice {
        ArmChoice::S1Arm => (p1 + v, p2),
        ArmChoice::S2Arm => (p1, p2 + v),
    };
    debug_assert_eq!(n1 + rhs.dir, n2, "movement geometry");
    config.set_state(n1, rhs.s1);
    config.set_state(n2, rhs.s2);
    if rhs.bond != BondType::Null {
        config.set_bond(n1, n2, rhs.bond).expect("pair adjacent after move");
    }
    for p in &movable {
        dirty.push(*p);
        dirty.push(*p + v);
    }
    dirty.push(p1);
    dirty.push(p2);
    dirty.push(n1);
    dirty.push(n2);
    dirty.sort_unstable();
    dirty.dedup();
    Ok(dirty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{MinusY, PlusX, PlusY};
    use crate::kinetics::rules::RuleSide;
    use crate::state::{StateId, StateTable};

    struct Fix {
        rules: RuleSet,
        a: StateId,
        b: StateId,
        c: StateId,
    }

    fn fixture() -> Fix {
        let mut t = StateTable::new();
        let a = t.intern("a");
        let b = t.intern("b");
        let c = t.intern("c");
        let rules = RuleSet::new(t);
        Fix { rules, a, b, c }
    }

    #[test]
    fn empty_rule_set_no_events() {
        let f = fixture();
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::ORIGIN, f.a).unwrap();
        assert!(enumerate_events(&cfg, &f.rules).is_empty());
    }

    #[test]
    fn single_appearance_event() {
        let mut f = fixture();
        f.rules
            .push(Rule {
                lhs: RuleSide {
                    s1: f.a,
                    s2: StateId::EMPTY,
                    bond: BondType::Null,
                    dir: PlusX,
                },
                rhs: RuleSide {
                    s1: f.a,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: PlusX,
                },
            })
            .unwrap();
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::ORIGIN, f.a).unwrap();
        let events = enumerate_events(&cfg, &f.rules);
        assert_eq!(events.len(), 1);
        let dirty = apply_event(&mut cfg, &f.rules, &events[0]).unwrap();
        assert_eq!(cfg.len(), 2);
        assert_eq!(cfg.state_at(GridPoint::new(1, 0)), Some(f.b));
        assert_eq!(
            cfg.bond(GridPoint::ORIGIN, GridPoint::new(1, 0)),
            BondType::Rigid
        );
        assert!(dirty.contains(&GridPoint::new(1, 0)));
        // Cell now occupied: the appearance no longer applies.
        assert!(enumerate_events(&cfg, &f.rules).is_empty());
    }

    #[test]
    fn state_change_only_touches_pair() {
        let mut f = fixture();
        f.rules
            .push(Rule {
                lhs: RuleSide {
                    s1: f.a,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: PlusX,
                },
                rhs: RuleSide {
                    s1: f.a,
                    s2: f.c,
                    bond: BondType::Rigid,
                    dir: PlusX,
                },
            })
            .unwrap();
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::new(0, 0), f.a).unwrap();
        cfg.add_monomer(GridPoint::new(1, 0), f.b).unwrap();
        cfg.add_monomer(GridPoint::new(2, 0), f.b).unwrap();
        cfg.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Rigid)
            .unwrap();
        let events = enumerate_events(&cfg, &f.rules);
        assert_eq!(events.len(), 1);
        apply_event(&mut cfg, &f.rules, &events[0]).unwrap();
        assert_eq!(cfg.state_at(GridPoint::new(1, 0)), Some(f.c));
        assert_eq!(cfg.state_at(GridPoint::new(2, 0)), Some(f.b));
    }

    #[test]
    fn movement_both_choices_when_unblocked() {
        // Fig. 3(b)-style: a bare bonded pair with a movement rule admits
        // both the push and the pull interpretation.
        let mut f = fixture();
        f.rules
            .push(Rule {
                lhs: RuleSide {
                    s1: f.a,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: PlusX,
                },
                rhs: RuleSide {
                    s1: f.a,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: PlusY,
                },
            })
            .unwrap();
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::new(0, 0), f.a).unwrap();
        cfg.add_monomer(GridPoint::new(1, 0), f.b).unwrap();
        cfg.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Rigid)
            .unwrap();
        let events = enumerate_events(&cfg, &f.rules);
        assert_eq!(events.len(), 2);
        // Applying the s2-arm choice moves b from (1,0) to (0,1).
        let e2 = events.iter().find(|e| e.choice == Some(ArmChoice::S2Arm)).unwrap();
        let mut cfg2 = cfg.clone();
        apply_event(&mut cfg2, &f.rules, e2).unwrap();
        assert_eq!(cfg2.state_at(GridPoint::new(0, 1)), Some(f.b));
        assert_eq!(cfg2.state_at(GridPoint::new(0, 0)), Some(f.a));
        assert_eq!(
            cfg2.bond(GridPoint::new(0, 0), GridPoint::new(0, 1)),
            BondType::Rigid
        );
        // The s1-arm choice moves a instead; the results are translations
        // of each other.
        let e1 = events.iter().find(|e| e.choice == Some(ArmChoice::S1Arm)).unwrap();
        let mut cfg1 = cfg.clone();
        apply_event(&mut cfg1, &f.rules, e1).unwrap();
        assert!(cfg1.congruent(&cfg2));
    }

    #[test]
    fn stale_event_detected() {
        let mut f = fixture();
        f.rules
            .push(Rule {
                lhs: RuleSide {
                    s1: f.a,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: PlusX,
                },
                rhs: RuleSide {
                    s1: f.c,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: PlusX,
                },
            })
            .unwrap();
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::new(0, 0), f.a).unwrap();
        cfg.add_monomer(GridPoint::new(1, 0), f.b).unwrap();
        cfg.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Rigid)
            .unwrap();
        let events = enumerate_events(&cfg, &f.rules);
        apply_event(&mut cfg, &f.rules, &events[0]).unwrap();
        assert_eq!(
            apply_event(&mut cfg, &f.rules, &events[0]),
            Err(EventError::StaleEvent(events[0].rule, events[0].anchor))
        );
    }

    #[test]
    fn disappearance_removes_both() {
        let mut f = fixture();
        f.rules
            .push(Rule {
                lhs: RuleSide {
                    s1: f.a,
                    s2: f.b,
                    bond: BondType::Rigid,
                    dir: MinusY,
                },
                rhs: RuleSide {
                    s1: StateId::EMPTY,
                    s2: StateId::EMPTY,
                    bond: BondType::Null,
                    dir: MinusY,
                },
            })
            .unwrap();
        let mut cfg = Configuration::new();
        cfg.add_monomer(GridPoint::new(0, 1), f.a).unwrap();
        cfg.add_monomer(GridPoint::new(0, 0), f.b).unwrap();
        cfg.set_bond(GridPoint::new(0, 1), GridPoint::new(0, 0), BondType::Rigid)
            .unwrap();
        let events = enumerate_events(&cfg, &f.rules);
        assert_eq!(events.len(), 1);
        apply_event(&mut cfg, &f.rules, &events[0]).unwrap();
        assert!(cfg.is_empty());
    }
}
