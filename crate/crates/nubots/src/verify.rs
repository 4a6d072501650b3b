//! Independent oracles used to cross-check the simulator and the
//! constructions. Each oracle is a direct, brute-force computation kept
//! deliberately separate from the implementation path it checks.

use crate::grid::{tri_distance, Direction, GridPoint};
use crate::kinetics::config::{BondType, Configuration};
use crate::kinetics::movable::movable_set;
use crate::state::StateTable;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Exhaustive minimal-subset oracle for the movable set.
///
/// Enumerates every subset containing the arm but not the base and checks
/// the three movement clauses directly on the translated set. Returns the
/// unique minimum-cardinality valid subset, or empty when no subset is
/// valid.
pub fn movable_set_oracle(
    config: &Configuration,
    arm: GridPoint,
    base: GridPoint,
    v: Direction,
) -> Vec<GridPoint> {
    let monomers: Vec<GridPoint> = config.positions().collect();
    let others: Vec<GridPoint> = monomers
        .iter()
        .copied()
        .filter(|p| *p != arm && *p != base)
        .collect();
    assert!(
        others.len() <= 20,
        "oracle is exponential; keep clusters small"
    );
    let ignores = |a: GridPoint, b: GridPoint| (a == arm && b == base) || (a == base && b == arm);

    let mut best: Option<Vec<GridPoint>> = None;
    let mut best_count = 0usize;
    for mask in 0..(1u32 << others.len()) {
        let mut set: BTreeSet<GridPoint> = BTreeSet::new();
        set.insert(arm);
        for (i, p) in others.iter().enumerate() {
            if mask & (1 << i) != 0 {
                set.insert(*p);
            }
        }
        if is_valid_movable(config, &set, v, &ignores) {
            let as_vec: Vec<GridPoint> = set.into_iter().collect();
            match &best {
                Some(b) if b.len() < as_vec.len() => {}
                Some(b) if b.len() == as_vec.len() => {
                    best_count += 1;
                    let _ = b;
                }
                _ => {
                    best = Some(as_vec);
                    best_count = 1;
                }
            }
        }
    }
    match best {
        Some(b) => {
            assert_eq!(best_count, 1, "minimal movable set must be unique");
            b
        }
        None => Vec::new(),
    }
}

/// Check clauses (a) rigid bonds keep relative position, (b) flexible bonds
/// stay between neighbours, and (c) the v-boundary of the set is free of
/// monomers, on the configuration with the arm-base bond nulled.
fn is_valid_movable(
    config: &Configuration,
    set: &BTreeSet<GridPoint>,
    v: Direction,
    ignores: &impl Fn(GridPoint, GridPoint) -> bool,
) -> bool {
    // (c): every cell in front of a member is a member or vacant.
    for p in set {
        let ahead = *p + v;
        if config.occupied(ahead) && !set.contains(&ahead) {
            return false;
        }
    }
    // (a), (b) over all bonds except the nulled pair bond.
    for (a, b, bond) in config.bonds() {
        if ignores(a, b) {
            continue;
        }
        let a_in = set.contains(&a);
        let b_in = set.contains(&b);
        if a_in == b_in {
            continue; // translated together or both stationary
        }
        match bond {
            BondType::Rigid => return false,
            BondType::Flexible => {
                let (moved, still) = if a_in { (a, b) } else { (b, a) };
                if tri_distance(moved + v, still) != 1 {
                    return false;
                }
            }
            BondType::Null => unreachable!(),
        }
    }
    true
}

/// A randomly grown bonded cluster for differential testing, with a chosen
/// adjacent (arm, base) pair.
pub struct RandomCluster {
    pub config: Configuration,
    pub arm: GridPoint,
    pub base: GridPoint,
    pub v: Direction,
}

/// Grow a random cluster of 2..=max monomers with random bonds.
pub fn random_cluster(seed: u64, max_monomers: usize) -> RandomCluster {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = StateTable::new();
    let s = table.intern("x");
    let mut config = Configuration::new();
    config.add_monomer(GridPoint::ORIGIN, s).unwrap();
    let n = rng.gen_range(2..=max_monomers.max(2));
    let mut placed = vec![GridPoint::ORIGIN];
    while placed.len() < n {
        let host = placed[rng.gen_range(0..placed.len())];
        let d = Direction::ALL[rng.gen_range(0..6)];
        let p = host + d;
        if !config.occupied(p) {
            config.add_monomer(p, s).unwrap();
            placed.push(p);
        }
    }
    // Random bonds between adjacent pairs.
    for i in 0..placed.len() {
        for j in (i + 1)..placed.len() {
            if tri_distance(placed[i], placed[j]) == 1 {
                let t = match rng.gen_range(0..3) {
                    0 => BondType::Rigid,
                    1 => BondType::Flexible,
                    _ => BondType::Null,
                };
                if t != BondType::Null {
                    config.set_bond(placed[i], placed[j], t).unwrap();
                }
            }
        }
    }
    // Pick an adjacent arm/base pair and a direction.
    let (arm, base) = loop {
        let a = placed[rng.gen_range(0..placed.len())];
        let b = placed[rng.gen_range(0..placed.len())];
        if tri_distance(a, b) == 1 {
            break (a, b);
        }
    };
    let v = Direction::ALL[rng.gen_range(0..6)];
    RandomCluster {
        config,
        arm,
        base,
        v,
    }
}

/// Differential check of the closure implementation against the oracle on
/// `cases` random clusters. Returns the number of agreeing cases.
pub fn check_movable_random(cases: u64, max_monomers: usize, seed: u64) -> Result<u64, String> {
    let mut agree = 0;
    for i in 0..cases {
        let c = random_cluster(crate::kinetics::engine::derive_seed(seed, i), max_monomers);
        let fast = movable_set(&c.config, c.arm, c.base, c.v).expect("valid cluster");
        let slow = movable_set_oracle(&c.config, c.arm, c.base, c.v);
        if fast != slow {
            return Err(format!(
                "case {i}: closure {:?} != oracle {:?} (arm {}, base {}, v {})",
                fast, slow, c.arm, c.base, c.v
            ));
        }
        agree += 1;
    }
    Ok(agree)
}

/// Boolean transitive closure by Floyd-Warshall, the oracle for
/// path-complete matrices.
pub fn transitive_closure_oracle(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let k = adj.len();
    let mut m = adj.to_vec();
    for mid in 0..k {
        for i in 0..k {
            if m[i][mid] {
                for j in 0..k {
                    if m[mid][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    m
}

/// Direct Boolean matrix product, the oracle for the monomer-level
/// multiplication pipeline.
pub fn bool_matmul_oracle(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut c = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            c[i][j] = (0..n).any(|k| a[i][k] && b[k][j]);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PlusW;

    #[test]
    fn oracle_matches_handcrafted_push_pull_blocked() {
        let mut table = StateTable::new();
        let s = table.intern("x");

        // Bare pair: arm moves alone.
        let mut c = Configuration::new();
        c.add_monomer(GridPoint::new(0, 0), s).unwrap();
        c.add_monomer(GridPoint::new(1, 0), s).unwrap();
        c.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Rigid)
            .unwrap();
        let m = movable_set_oracle(&c, GridPoint::new(1, 0), GridPoint::new(0, 0), PlusW);
        assert_eq!(m, vec![GridPoint::new(1, 0)]);

        // Push: unbonded bystander in the way gets dragged.
        c.add_monomer(GridPoint::new(0, 1), s).unwrap();
        let m = movable_set_oracle(&c, GridPoint::new(1, 0), GridPoint::new(0, 0), PlusW);
        assert_eq!(m, vec![GridPoint::new(0, 1), GridPoint::new(1, 0)]);

        // Blocked: bystander rigidly tied to the base.
        c.set_bond(GridPoint::new(0, 0), GridPoint::new(0, 1), BondType::Rigid)
            .unwrap();
        let m = movable_set_oracle(&c, GridPoint::new(1, 0), GridPoint::new(0, 0), PlusW);
        assert!(m.is_empty());
    }

    #[test]
    fn closure_agrees_with_oracle_on_random_clusters() {
        // The full 10^3-case sweep runs in the acceptance suite; keep a
        // smaller smoke version here.
        check_movable_random(200, 6, 0xfeed).unwrap();
    }

    #[test]
    fn warshall_on_chain() {
        let adj = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![false, false, false],
        ];
        let m = transitive_closure_oracle(&adj);
        assert!(m[0][2]);
        assert!(!m[2][0]);
    }
}
