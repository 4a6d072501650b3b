//! Configurations: finite monomer maps plus bonds.

use crate::grid::{BoundingRect, Direction, GridPoint};
use crate::state::StateId;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use thiserror::Error;

/// Bond between two neighbouring monomers. Absence of an entry means `Null`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondType {
    Rigid,
    Flexible,
    Null,
}

impl BondType {
    pub fn name(self) -> &'static str {
        match self {
            BondType::Rigid => "rigid",
            BondType::Flexible => "flexible",
            BondType::Null => "null",
        }
    }

    pub fn parse(s: &str) -> Option<BondType> {
        match s {
            "rigid" => Some(BondType::Rigid),
            "flexible" => Some(BondType::Flexible),
            "null" => Some(BondType::Null),
            _ => None,
        }
    }
}

/// Key for the bond map: the unordered pair stored with the smaller point
/// first.
pub(crate) fn bond_key(a: GridPoint, b: GridPoint) -> (GridPoint, GridPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("duplicate monomer at {0}")]
    DuplicateMonomer(GridPoint),
    #[error("bond endpoints {0} and {1} are not neighbours")]
    BondNotAdjacent(GridPoint, GridPoint),
    #[error("bond endpoint {0} is vacant")]
    BondToVacancy(GridPoint),
}

/// A finite set of monomers along with the bonds between them.
///
/// This is the sole mutable simulation state. Maps are ordered so iteration
/// is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Configuration {
    monomers: BTreeMap<GridPoint, StateId>,
    bonds: BTreeMap<(GridPoint, GridPoint), BondType>,
}

impl Configuration {
    pub fn new() -> Self {
        Configuration::default()
    }

    pub fn len(&self) -> usize {
        self.monomers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomers.is_empty()
    }

    pub fn state_at(&self, p: GridPoint) -> Option<StateId> {
        self.monomers.get(&p).copied()
    }

    pub fn occupied(&self, p: GridPoint) -> bool {
        self.monomers.contains_key(&p)
    }

    pub fn monomers(&self) -> impl Iterator<Item = (GridPoint, StateId)> + '_ {
        self.monomers.iter().map(|(p, s)| (*p, *s))
    }

    pub fn positions(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.monomers.keys().copied()
    }

    pub fn bonds(&self) -> impl Iterator<Item = (GridPoint, GridPoint, BondType)> + '_ {
        self.bonds.iter().map(|((a, b), t)| (*a, *b, *t))
    }

    /// Bond between two points; `Null` when absent or not neighbours.
    pub fn bond(&self, a: GridPoint, b: GridPoint) -> BondType {
        self.bonds
            .get(&bond_key(a, b))
            .copied()
            .unwrap_or(BondType::Null)
    }

    /// Place a monomer. Fails if the point is already occupied.
    pub fn add_monomer(&mut self, p: GridPoint, s: StateId) -> Result<(), ConfigError> {
        assert!(!s.is_empty(), "EMPTY cannot be placed in a configuration");
        if self.monomers.insert(p, s).is_some() {
            return Err(ConfigError::DuplicateMonomer(p));
        }
        Ok(())
    }

    pub fn set_state(&mut self, p: GridPoint, s: StateId) {
        assert!(!s.is_empty());
        *self.monomers.get_mut(&p).expect("set_state on vacancy") = s;
    }

    /// Remove a monomer and every bond attached to it.
    pub fn remove_monomer(&mut self, p: GridPoint) -> Option<StateId> {
        let s = self.monomers.remove(&p)?;
        for q in p.neighbors() {
            self.bonds.remove(&bond_key(p, q));
        }
        Some(s)
    }

    /// Set the bond between two occupied, neighbouring points.
    pub fn set_bond(&mut self, a: GridPoint, b: GridPoint, t: BondType) -> Result<(), ConfigError> {
        if crate::grid::tri_distance(a, b) != 1 {
            return Err(ConfigError::BondNotAdjacent(a, b));
        }
        for p in [a, b] {
            if !self.occupied(p) {
                return Err(ConfigError::BondToVacancy(p));
            }
        }
        match t {
            BondType::Null => {
                self.bonds.remove(&bond_key(a, b));
            }
            _ => {
                self.bonds.insert(bond_key(a, b), t);
            }
        }
        Ok(())
    }

    /// Non-null bonds incident to `p`.
    pub fn bonds_at(&self, p: GridPoint) -> impl Iterator<Item = (GridPoint, BondType)> + '_ {
        p.neighbors().into_iter().filter_map(move |q| {
            let t = self.bond(p, q);
            (t != BondType::Null).then_some((q, t))
        })
    }

    /// Check the structural invariants: bonds only between occupied
    /// neighbouring points. (One monomer per point is enforced by the map.)
    pub fn check_invariants(&self) -> Result<(), ConfigError> {
        for ((a, b), _) in &self.bonds {
            if crate::grid::tri_distance(*a, *b) != 1 {
                return Err(ConfigError::BondNotAdjacent(*a, *b));
            }
            for p in [a, b] {
                if !self.occupied(*p) {
                    return Err(ConfigError::BondToVacancy(*p));
                }
            }
        }
        Ok(())
    }

    pub fn bounding_rect(&self) -> BoundingRect {
        BoundingRect::of_points(self.monomers.keys())
    }

    /// Translate the whole configuration so that its lexicographically
    /// minimal occupied point sits at the origin.
    pub fn normalized(&self) -> Configuration {
        let Some(min) = self.monomers.keys().next().copied() else {
            return self.clone();
        };
        self.translated(-min.x, -min.y)
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Configuration {
        let mut out = Configuration::new();
        for (p, s) in &self.monomers {
            out.monomers
                .insert(GridPoint::new(p.x + dx, p.y + dy), *s);
        }
        for ((a, b), t) in &self.bonds {
            out.bonds.insert(
                bond_key(
                    GridPoint::new(a.x + dx, a.y + dy),
                    GridPoint::new(b.x + dx, b.y + dy),
                ),
                *t,
            );
        }
        out
    }

    /// Equality up to translation.
    pub fn congruent(&self, other: &Configuration) -> bool {
        self.normalized() == other.normalized()
    }

    /// Stable digest of the translation-normalized configuration.
    pub fn digest(&self) -> String {
        let norm = self.normalized();
        let mut hasher = Sha256::new();
        for (p, s) in &norm.monomers {
            hasher.update(p.x.to_le_bytes());
            hasher.update(p.y.to_le_bytes());
            hasher.update(s.0.to_le_bytes());
        }
        hasher.update([0xff]);
        for ((a, b), t) in &norm.bonds {
            hasher.update(a.x.to_le_bytes());
            hasher.update(a.y.to_le_bytes());
            hasher.update(b.x.to_le_bytes());
            hasher.update(b.y.to_le_bytes());
            hasher.update([*t as u8]);
        }
        let out = hasher.finalize();
        out[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Translate a subset of monomers by one unit step. The caller
    /// guarantees the move is collision-free (targets outside the set are
    /// vacant); bonds among moved monomers and to stationary monomers are
    /// preserved.
    pub(crate) fn translate_set(&mut self, set: &[GridPoint], v: Direction) {
        let in_set: std::collections::BTreeSet<GridPoint> = set.iter().copied().collect();
        let mut moved_monomers = Vec::with_capacity(set.len());
        for p in set {
            let s = self.monomers.remove(p).expect("translate_set on vacancy");
            moved_monomers.push((*p + v, s));
        }
        let mut moved_bonds = Vec::new();
        self.bonds.retain(|(a, b), t| {
            let a_in = in_set.contains(a);
            let b_in = in_set.contains(b);
            if a_in || b_in {
                let na = if a_in { *a + v } else { *a };
                let nb = if b_in { *b + v } else { *b };
                moved_bonds.push((bond_key(na, nb), *t));
                false
            } else {
                true
            }
        });
        for (p, s) in moved_monomers {
            let prev = self.monomers.insert(p, s);
            debug_assert!(prev.is_none(), "translate_set collision at {p}");
        }
        for (k, t) in moved_bonds {
            self.bonds.insert(k, t);
        }
    }
}
