//! Full reachability exploration for tiny systems.

use crate::kinetics::config::Configuration;
use crate::kinetics::events::{apply_event, enumerate_events};
use crate::kinetics::rules::RuleSet;
use std::collections::{BTreeMap, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExhaustiveError {
    #[error("state space exceeded the configured cap of {0} configurations")]
    StateSpaceCapExceeded(usize),
}

/// Reachability DAG over translation-normalized configurations.
#[derive(Debug)]
pub struct TrajectoryDag {
    /// digest -> node index
    pub index: HashMap<String, usize>,
    /// per node: outgoing edges as node indices (deduplicated, sorted)
    pub edges: Vec<Vec<usize>>,
    /// node indices with no outgoing edges
    pub terminals: Vec<usize>,
    /// representative configuration per node
    pub configs: Vec<Configuration>,
    pub depth_bound_hit: bool,
}

impl TrajectoryDag {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Do all maximal paths end in the same terminal configuration up to
    /// translation? (Terminal configs are already normalized per node.)
    pub fn confluent(&self) -> bool {
        !self.depth_bound_hit && self.terminals.len() == 1
    }
}

/// Breadth-first exploration of every reachable configuration up to the
/// given depth, with a hard cap on distinct configurations.
pub fn exhaustive_trajectories(
    config: &Configuration,
    rules: &RuleSet,
    depth_bound: usize,
    cap: usize,
) -> Result<TrajectoryDag, ExhaustiveError> {
    let start = config.normalized();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut configs: Vec<Configuration> = Vec::new();
    let mut edges: Vec<BTreeMap<usize, ()>> = Vec::new();
    let mut depth_hit = false;

    let d0 = start.digest();
    index.insert(d0, 0);
    configs.push(start.clone());
    edges.push(BTreeMap::new());
    let mut queue = VecDeque::from([(0usize, 0usize)]);

    while let Some((node, depth)) = queue.pop_front() {
        if depth >= depth_bound {
            if !enumerate_events(&configs[node], rules).is_empty() {
                depth_hit = true;
            }
            continue;
        }
        let here = configs[node].clone();
        for event in enumerate_events(&here, rules) {
            let mut next = here.clone();
            apply_event(&mut next, rules, &event).expect("enumerated event applies");
            let next = next.normalized();
            let digest = next.digest();
            let to = match index.get(&digest) {
                Some(i) => *i,
                None => {
                    let i = configs.len();
                    if i >= cap {
                        return Err(ExhaustiveError::StateSpaceCapExceeded(cap));
                    }
                    index.insert(digest, i);
                    configs.push(next);
                    edges.push(BTreeMap::new());
                    queue.push_back((i, depth + 1));
                    i
                }
            };
            edges[node].insert(to, ());
        }
    }

    let edges: Vec<Vec<usize>> = edges
        .into_iter()
        .map(|m| m.into_keys().collect())
        .collect();
    let terminals = edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_empty())
        .map(|(i, _)| i)
        .collect();
    Ok(TrajectoryDag {
        index,
        edges,
        terminals,
        configs,
        depth_bound_hit: depth_hit,
    })
}
