//! Interaction rules and their validation.

use crate::kinetics::config::BondType;
use crate::grid::{tri_distance, Direction, GridPoint};
use crate::state::{StateId, StateTable};
use thiserror::Error;

/// One side of a rule: two monomer slots, the bond between them, and the
/// orientation of the second slot relative to the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSide {
    pub s1: StateId,
    pub s2: StateId,
    pub bond: BondType,
    pub dir: Direction,
}

/// A rewrite `(s1, s2, b, u) -> (s1', s2', b', u')` acting on one or two
/// monomers. `u != u'` makes it a movement rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub lhs: RuleSide,
    pub rhs: RuleSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleId(pub u32);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("both rule slots are empty")]
    EmptyPairBothSides,
    #[error("non-null bond next to an empty slot")]
    BondToEmpty,
    #[error("movement orientations {0} -> {1} are not at distance 1")]
    MovementDistanceNotOne(Direction, Direction),
    #[error("movement rule with an empty slot")]
    MovementWithEmpty,
}

impl Rule {
    pub fn is_movement(&self) -> bool {
        self.lhs.dir != self.rhs.dir
    }

    /// Unit translation applied to the arm when the `s2` monomer is the arm.
    /// The `s1`-arm translation is its negation.
    pub fn arm_translation(&self) -> Option<Direction> {
        if !self.is_movement() {
            return None;
        }
        let (ux, uy) = self.lhs.dir.delta();
        let (vx, vy) = self.rhs.dir.delta();
        Direction::from_delta(vx - ux, vy - uy)
    }

    /// Rotate the rule counter-clockwise by `steps` sixths of a turn.
    pub fn rotated(&self, steps: u8) -> Rule {
        Rule {
            lhs: RuleSide {
                dir: self.lhs.dir.rotate(steps),
                ..self.lhs
            },
            rhs: RuleSide {
                dir: self.rhs.dir.rotate(steps),
                ..self.rhs
            },
        }
    }
}

/// Accepts exactly the rules satisfying the model's validity restrictions.
///
/// A fully empty right-hand side is allowed: it is the disappearance of
/// both monomers of the pair ("one or both monomer states go from
/// non-empty to empty").
pub fn validate_rule(r: &Rule) -> Result<(), RuleError> {
    if r.lhs.s1.is_empty() && r.lhs.s2.is_empty() {
        return Err(RuleError::EmptyPairBothSides);
    }
    for side in [&r.lhs, &r.rhs] {
        if (side.s1.is_empty() || side.s2.is_empty()) && side.bond != BondType::Null {
            return Err(RuleError::BondToEmpty);
        }
    }
    if r.is_movement() {
        let d = tri_distance(
            GridPoint::ORIGIN + r.lhs.dir,
            GridPoint::ORIGIN + r.rhs.dir,
        );
        if d != 1 {
            return Err(RuleError::MovementDistanceNotOne(r.lhs.dir, r.rhs.dir));
        }
        if r.lhs.s1.is_empty()
            || r.lhs.s2.is_empty()
            || r.rhs.s1.is_empty()
            || r.rhs.s2.is_empty()
        {
            return Err(RuleError::MovementWithEmpty);
        }
    }
    Ok(())
}

/// A validated rule list together with the state table its ids refer to,
/// plus a lookup from states to the rules that can match them.
#[derive(Debug, Clone)]
pub struct RuleSet {
    pub states: StateTable,
    rules: Vec<Rule>,
    comments: Vec<Option<String>>,
    /// rules indexed by lhs.s1 / lhs.s2 (skipping EMPTY slots)
    by_s1: Vec<Vec<RuleId>>,
    by_s2: Vec<Vec<RuleId>>,
}

impl RuleSet {
    pub fn new(states: StateTable) -> Self {
        RuleSet {
            states,
            rules: Vec::new(),
            comments: Vec::new(),
            by_s1: Vec::new(),
            by_s2: Vec::new(),
        }
    }

    pub fn push(&mut self, rule: Rule) -> Result<RuleId, RuleError> {
        self.push_with_comment(rule, None)
    }

    pub fn push_with_comment(
        &mut self,
        rule: Rule,
        comment: Option<String>,
    ) -> Result<RuleId, RuleError> {
        validate_rule(&rule)?;
        let id = RuleId(self.rules.len() as u32);
        let ensure = |v: &mut Vec<Vec<RuleId>>, s: StateId| {
            let i = s.0 as usize;
            if v.len() <= i {
                v.resize(i + 1, Vec::new());
            }
            v[i].push(id);
        };
        if !rule.lhs.s1.is_empty() {
            ensure(&mut self.by_s1, rule.lhs.s1);
        }
        if !rule.lhs.s2.is_empty() {
            ensure(&mut self.by_s2, rule.lhs.s2);
        }
        self.rules.push(rule);
        self.comments.push(comment);
        Ok(id)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, id: RuleId) -> &Rule {
        &self.rules[id.0 as usize]
    }

    pub fn comment(&self, id: RuleId) -> Option<&str> {
        self.comments[id.0 as usize].as_deref()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rules whose lhs `s1` slot is `s`.
    pub fn rules_by_s1(&self, s: StateId) -> &[RuleId] {
        self.by_s1.get(s.0 as usize).map_or(&[], |v| v.as_slice())
    }

    /// Rules whose lhs `s2` slot is `s`.
    pub fn rules_by_s2(&self, s: StateId) -> &[RuleId] {
        self.by_s2.get(s.0 as usize).map_or(&[], |v| v.as_slice())
    }

    /// Rules with an empty lhs slot, which can fire next to any single
    /// monomer of the matching non-empty state.
    pub fn ids(&self) -> impl Iterator<Item = RuleId> {
        (0..self.rules.len() as u32).map(RuleId)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{MinusX, PlusX};

    fn tbl() -> (StateTable, StateId, StateId, StateId) {
        let mut t = StateTable::new();
        let a = t.intern("a");
        let b = t.intern("b");
        let c = t.intern("c");
        (t, a, b, c)
    }

    fn rule(
        s1: StateId,
        s2: StateId,
        bond: BondType,
        dir: Direction,
        t1: StateId,
        t2: StateId,
        bond2: BondType,
        dir2: Direction,
    ) -> Rule {
        Rule {
            lhs: RuleSide { s1, s2, bond, dir },
            rhs: RuleSide {
                s1: t1,
                s2: t2,
                bond: bond2,
                dir: dir2,
            },
        }
    }

    #[test]
    fn state_change_ok() {
        let (_, a, b, c) = tbl();
        let r = rule(a, b, BondType::Rigid, PlusX, a, c, BondType::Rigid, PlusX);
        assert_eq!(validate_rule(&r), Ok(()));
    }

    #[test]
    fn appearance_ok() {
        let (_, a, b, _) = tbl();
        let r = rule(
            a,
            StateId::EMPTY,
            BondType::Null,
            PlusX,
            a,
            b,
            BondType::Rigid,
            PlusX,
        );
        assert_eq!(validate_rule(&r), Ok(()));
    }

    #[test]
    fn movement_distance_checked() {
        let (_, a, b, _) = tbl();
        // +x -> -x is distance 2 on the triangular grid.
        let r = rule(a, b, BondType::Rigid, PlusX, a, b, BondType::Rigid, MinusX);
        assert_eq!(
            validate_rule(&r),
            Err(RuleError::MovementDistanceNotOne(PlusX, MinusX))
        );
    }

    #[test]
    fn movement_with_empty_rejected() {
        let (_, a, b, _) = tbl();
        let r = rule(
            a,
            StateId::EMPTY,
            BondType::Null,
            PlusX,
            a,
            b,
            BondType::Null,
            crate::grid::PlusY,
        );
        assert_eq!(validate_rule(&r), Err(RuleError::MovementWithEmpty));
    }

    #[test]
    fn both_empty_rejected() {
        let r = rule(
            StateId::EMPTY,
            StateId::EMPTY,
            BondType::Null,
            PlusX,
            StateId::EMPTY,
            StateId::EMPTY,
            BondType::Null,
            PlusX,
        );
        assert_eq!(validate_rule(&r), Err(RuleError::EmptyPairBothSides));
    }

    #[test]
    fn bond_to_empty_rejected() {
        let (_, a, b, _) = tbl();
        let r = rule(
            a,
            StateId::EMPTY,
            BondType::Rigid,
            PlusX,
            a,
            b,
            BondType::Rigid,
            PlusX,
        );
        assert_eq!(validate_rule(&r), Err(RuleError::BondToEmpty));
    }

    #[test]
    fn arm_translation_is_unit() {
        let (_, a, b, _) = tbl();
        for u in Direction::ALL {
            for u2 in u.movement_targets() {
                let r = rule(a, b, BondType::Rigid, u, a, b, BondType::Rigid, u2);
                let v = r.arm_translation().expect("movement rule");
                let (ux, uy) = u.delta();
                let (vx, vy) = u2.delta();
                assert_eq!(v.delta(), (vx - ux, vy - uy));
            }
        }
    }

    #[test]
    fn rotation_preserves_validity() {
        let (_, a, b, _) = tbl();
        let r = rule(
            a,
            b,
            BondType::Rigid,
            PlusX,
            a,
            b,
            BondType::Rigid,
            crate::grid::PlusY,
        );
        for s in 0..6 {
            assert_eq!(validate_rule(&r.rotated(s)), Ok(()));
        }
    }
}
