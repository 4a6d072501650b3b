//! The movable set: which monomers translate when a movement rule fires.

use crate::kinetics::config::{BondType, Configuration};
use crate::grid::{tri_distance, Direction, GridPoint};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MovableError {
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(GridPoint, GridPoint),
    #[error("{0} is not occupied")]
    NotOccupied(GridPoint),
}

/// Compute the movable set `M(C, arm, base, v)`.
///
/// The set is the least fixed point of the forcing closure on `C'` (the
/// configuration with the arm-base bond nulled), starting from `{arm}`:
///
/// * a rigid bond forces both endpoints to move together;
/// * a monomer sitting in a mover's way (at `p + v`) is pushed along;
/// * a flexible bond whose endpoints would no longer be neighbours forces
///   the stationary endpoint to move.
///
/// Returns the empty vector when the closure reaches `base`, i.e. the move
/// is blocked and the rule inapplicable for this arm choice.
pub fn movable_set(
    config: &Configuration,
    arm: GridPoint,
    base: GridPoint,
    v: Direction,
) -> Result<Vec<GridPoint>, MovableError> {
    for p in [arm, base] {
        if !config.occupied(p) {
            return Err(MovableError::NotOccupied(p));
        }
    }
    if tri_distance(arm, base) != 1 {
        return Err(MovableError::NotAdjacent(arm, base));
    }

    let ignores_bond =
        |a: GridPoint, b: GridPoint| (a == arm && b == base) || (a == base && b == arm);

    let mut members: BTreeSet<GridPoint> = BTreeSet::new();
    members.insert(arm);
    let mut frontier = vec![arm];
    while let Some(m) = frontier.pop() {
        let mut force = |n: GridPoint, members: &mut BTreeSet<GridPoint>, frontier: &mut Vec<GridPoint>| {
            if n == base {
                return false;
            }
            if members.insert(n) {
                frontier.push(n);
            }
            true
        };

        // Push: a monomer directly in front joins the set.
        let ahead = m + v;
        if config.occupied(ahead) && !members.contains(&ahead) {
            if !force(ahead, &mut members, &mut frontier) {
                return Ok(Vec::new());
            }
        }
        // Bonds out of the set.
        for (n, bond) in config.bonds_at(m) {
            if ignores_bond(m, n) || members.contains(&n) {
                continue;
            }
            let must_join = match bond {
                BondType::Rigid => true,
                BondType::Flexible => tri_distance(m + v, n) != 1,
                BondType::Null => unreachable!(),
            };
            if must_join && !force(n, &mut members, &mut frontier) {
                return Ok(Vec::new());
            }
        }
    }
    debug_assert!(!members.contains(&base));
    Ok(members.into_iter().collect())
}
