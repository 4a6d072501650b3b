//! Interned monomer states.
//!
//! Rule matching compares states heavily, so states are interned to `u32`
//! ids. A [`StateTable`] is shared by the rule set and every configuration
//! produced from it.

use std::collections::HashMap;
use std::fmt;

/// An interned monomer state. `EMPTY` is reserved for rule slots and never
/// appears inside a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    /// The reserved `empty` slot used in rules.
    pub const EMPTY: StateId = StateId(0);

    pub fn is_empty(self) -> bool {
        self == StateId::EMPTY
    }
}

/// Bidirectional name <-> id map for monomer states.
#[derive(Debug, Clone, Default)]
pub struct StateTable {
    names: Vec<String>,
    ids: HashMap<String, StateId>,
}

impl StateTable {
    pub fn new() -> Self {
        let mut t = StateTable {
            names: Vec::new(),
            ids: HashMap::new(),
        };
        t.intern("empty");
        t
    }

    pub fn intern(&mut self, name: &str) -> StateId {
        if let Some(id) = self.ids.get(name) {
            return *id;
        }
        let id = StateId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of distinct non-`empty` states.
    pub fn distinct_states(&self) -> usize {
        self.names.len() - 1
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_id_zero() {
        let t = StateTable::new();
        assert_eq!(t.lookup("empty"), Some(StateId::EMPTY));
        assert!(StateId::EMPTY.is_empty());
        assert_eq!(t.distinct_states(), 0);
    }

    #[test]
    fn interning_is_idempotent() {
        let mut t = StateTable::new();
        let a = t.intern("a");
        let b = t.intern("b");
        assert_ne!(a, b);
        assert_eq!(t.intern("a"), a);
        assert_eq!(t.name(a), "a");
        assert_eq!(t.distinct_states(), 2);
    }
}
