//! Textual formats: `.nbr` rule sets, `.nbc` configurations, `.nbt` traces.
//!
//! All three are line-oriented and carry the header `nubot-format 1`.
//! Rules are written one per line as `s1, s2, bond, dir -> s1, s2, bond,
//! dir` with the reserved word `empty` for vacant slots and `#` comments.

use crate::grid::{Direction, GridPoint};
use crate::kinetics::config::{BondType, ConfigError, Configuration};
use crate::kinetics::engine::{StopReason, TraceStep, Trajectory};
use crate::kinetics::rules::{Rule, RuleError, RuleSet, RuleSide};
use crate::state::{StateId, StateTable};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_HEADER: &str = "nubot-format 1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing or bad header (expected `{FORMAT_HEADER}`)")]
    BadHeader { line: usize },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    InvalidRule {
        line: usize,
        #[source]
        source: RuleError,
    },
    #[error("line {line}: {source}")]
    InvalidConfig {
        line: usize,
        #[source]
        source: ConfigError,
    },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_state_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strip a trailing `#` comment, tracking nothing fancy: the formats have
/// no string literals.
fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn check_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<(), ParseError> {
    for (no, raw) in lines {
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if body == FORMAT_HEADER {
            return Ok(());
        }
        return Err(ParseError::BadHeader { line: no + 1 });
    }
    Err(ParseError::BadHeader { line: 1 })
}

fn parse_side(
    text: &str,
    line: usize,
    col0: usize,
    states: &mut StateTable,
) -> Result<RuleSide, ParseError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(syntax(
            line,
            col0,
            format!("expected `state, state, bond, dir`, got `{}`", text.trim()),
        ));
    }
    let state = |tok: &str, states: &mut StateTable| -> Result<StateId, ParseError> {
        if tok == "empty" {
            return Ok(StateId::EMPTY);
        }
        if !is_state_token(tok) {
            return Err(syntax(line, col0, format!("bad state token `{tok}`")));
        }
        Ok(states.intern(tok))
    };
    let s1 = state(parts[0], states)?;
    let s2 = state(parts[1], states)?;
    let bond = BondType::parse(parts[2])
        .ok_or_else(|| syntax(line, col0, format!("bad bond `{}`", parts[2])))?;
    let dir = Direction::parse(parts[3])
        .ok_or_else(|| syntax(line, col0, format!("bad direction `{}`", parts[3])))?;
    Ok(RuleSide { s1, s2, bond, dir })
}

/// Parse a `.nbr` rule set document.
pub fn parse_ruleset(text: &str) -> Result<RuleSet, ParseError> {
    let mut lines = text.lines().enumerate();
    check_header(&mut lines)?;
    let mut rules = RuleSet::new(StateTable::new());
    for (no, raw) in lines {
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let line = no + 1;
        let arrow = body
            .find("->")
            .ok_or_else(|| syntax(line, 1, "missing `->`"))?;
        let lhs = parse_side(&body[..arrow], line, 1, &mut rules.states)?;
        let rhs = parse_side(&body[arrow + 2..], line, arrow + 3, &mut rules.states)?;
        let comment = raw.find('#').map(|i| raw[i + 1..].trim().to_string());
        rules
            .push_with_comment(Rule { lhs, rhs }, comment)
            .map_err(|source| ParseError::InvalidRule { line, source })?;
    }
    Ok(rules)
}

/// Parse rule lines (no header) into an existing rule set, sharing its
/// state table. Used by the construction generators.
pub fn parse_rules_append(text: &str, rules: &mut RuleSet) -> Result<(), ParseError> {
    for (no, raw) in text.lines().enumerate() {
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let line = no + 1;
        let arrow = body
            .find("->")
            .ok_or_else(|| syntax(line, 1, "missing `->`"))?;
        let lhs = parse_side(&body[..arrow], line, 1, &mut rules.states)?;
        let rhs = parse_side(&body[arrow + 2..], line, arrow + 3, &mut rules.states)?;
        let comment = raw.find('#').map(|i| raw[i + 1..].trim().to_string());
        rules
            .push_with_comment(Rule { lhs, rhs }, comment)
            .map_err(|source| ParseError::InvalidRule { line, source })?;
    }
    Ok(())
}

/// Serialize a rule set back to `.nbr` text.
pub fn write_ruleset(rules: &RuleSet) -> String {
    let mut out = String::from(FORMAT_HEADER);
    out.push('\n');
    let name = |s: StateId| {
        if s.is_empty() {
            "empty".to_string()
        } else {
            rules.states.name(s).to_string()
        }
    };
    for id in rules.ids() {
        let r = rules.get(id);
        let side = |s: &RuleSide| {
            format!(
                "{}, {}, {}, {}",
                name(s.s1),
                name(s.s2),
                s.bond.name(),
                s.dir.name()
            )
        };
        out.push_str(&side(&r.lhs));
        out.push_str(" -> ");
        out.push_str(&side(&r.rhs));
        if let Some(c) = rules.comment(id) {
            out.push_str("  # ");
            out.push_str(c);
        }
        out.push('\n');
    }
    out
}

fn parse_point(tok: &str, line: usize) -> Result<GridPoint, ParseError> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| syntax(line, 1, format!("bad point `{tok}`")))?;
    let mut it = inner.split(',');
    let x = it
        .next()
        .and_then(|s| s.trim().parse::<i32>().ok())
        .ok_or_else(|| syntax(line, 1, format!("bad point `{tok}`")))?;
    let y = it
        .next()
        .and_then(|s| s.trim().parse::<i32>().ok())
        .ok_or_else(|| syntax(line, 1, format!("bad point `{tok}`")))?;
    if it.next().is_some() {
        return Err(syntax(line, 1, format!("bad point `{tok}`")));
    }
    Ok(GridPoint::new(x, y))
}

/// Parse a `.nbc` configuration document against a state table (states are
/// interned on the fly).
pub fn parse_config(text: &str, states: &mut StateTable) -> Result<Configuration, ParseError> {
    let mut lines = text.lines().enumerate();
    check_header(&mut lines)?;
    let mut config = Configuration::new();
    for (no, raw) in lines {
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let line = no + 1;
        let mut tok = body.split_whitespace();
        match tok.next() {
            Some("monomer") => {
                let p = parse_point(
                    tok.next().ok_or_else(|| syntax(line, 1, "missing point"))?,
                    line,
                )?;
                let st = tok.next().ok_or_else(|| syntax(line, 1, "missing state"))?;
                if !is_state_token(st) {
                    return Err(syntax(line, 1, format!("bad state token `{st}`")));
                }
                if st == "empty" {
                    return Err(syntax(line, 1, "`empty` cannot be placed"));
                }
                let id = states.intern(st);
                config
                    .add_monomer(p, id)
                    .map_err(|source| ParseError::InvalidConfig { line, source })?;
            }
            Some("bond") => {
                let a = parse_point(
                    tok.next().ok_or_else(|| syntax(line, 1, "missing point"))?,
                    line,
                )?;
                let b = parse_point(
                    tok.next().ok_or_else(|| syntax(line, 1, "missing point"))?,
                    line,
                )?;
                let t = tok
                    .next()
                    .and_then(BondType::parse)
                    .filter(|t| *t != BondType::Null)
                    .ok_or_else(|| syntax(line, 1, "bond type must be rigid or flexible"))?;
                config
                    .set_bond(a, b, t)
                    .map_err(|source| ParseError::InvalidConfig { line, source })?;
            }
            Some(other) => {
                return Err(syntax(line, 1, format!("unknown directive `{other}`")));
            }
            None => {}
        }
        if tok.next().is_some() {
            return Err(syntax(line, 1, "trailing tokens"));
        }
    }
    Ok(config)
}

/// Serialize a configuration to `.nbc` text.
pub fn write_config(config: &Configuration, states: &StateTable) -> String {
    let mut out = String::from(FORMAT_HEADER);
    out.push('\n');
    for (p, s) in config.monomers() {
        out.push_str(&format!("monomer ({},{}) {}\n", p.x, p.y, states.name(s)));
    }
    for (a, b, t) in config.bonds() {
        out.push_str(&format!(
            "bond ({},{}) ({},{}) {}\n",
            a.x,
            a.y,
            b.x,
            b.y,
            t.name()
        ));
    }
    out
}

/// Header record of a `.nbt` trace (JSON Lines).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TraceHeader {
    pub format: String,
    pub seed: u64,
    pub stop: StopReason,
    pub final_time: f64,
    pub events: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

/// Serialize a trajectory as JSON Lines: one header record, then one record
/// per event.
pub fn write_trace(t: &Trajectory, manifest: Option<serde_json::Value>) -> String {
    let header = TraceHeader {
        format: FORMAT_HEADER.to_string(),
        seed: t.seed,
        stop: t.stop,
        final_time: t.final_time,
        events: t.events,
        manifest,
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for s in &t.steps {
        out.push_str(&serde_json::to_string(s).expect("step serializes"));
        out.push('\n');
    }
    out
}

/// Parse a `.nbt` trace back into header and steps.
pub fn read_trace(text: &str) -> Result<(TraceHeader, Vec<TraceStep>), ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (no, first) = lines.next().ok_or(ParseError::BadHeader { line: 1 })?;
    let header: TraceHeader = serde_json::from_str(first)
        .map_err(|e| syntax(no + 1, 1, format!("bad header record: {e}")))?;
    if header.format != FORMAT_HEADER {
        return Err(ParseError::BadHeader { line: no + 1 });
    }
    let mut steps = Vec::new();
    for (no, line) in lines {
        let step: TraceStep = serde_json::from_str(line)
            .map_err(|e| syntax(no + 1, 1, format!("bad trace record: {e}")))?;
        if let Some(prev) = steps.last() {
            let prev: &TraceStep = prev;
            if step.index <= prev.index || step.time < prev.time {
                return Err(syntax(no + 1, 1, "trace records out of order"));
            }
        }
        steps.push(step);
    }
    Ok((header, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PlusX;

    #[test]
    fn parse_state_change_rule() {
        let text = "nubot-format 1\na, b, rigid, +x -> a, c, rigid, +x\n";
        let rules = parse_ruleset(text).unwrap();
        assert_eq!(rules.len(), 1);
        let r = rules.get(crate::kinetics::rules::RuleId(0));
        assert_eq!(r.lhs.dir, PlusX);
        assert!(!r.is_movement());
    }

    #[test]
    fn parse_appearance_rule() {
        let text = "nubot-format 1\na, empty, null, +x -> a, b, rigid, +x\n";
        let rules = parse_ruleset(text).unwrap();
        assert!(rules.get(crate::kinetics::rules::RuleId(0)).lhs.s2.is_empty());
    }

    #[test]
    fn movement_distance_error_carries_line() {
        let text = "nubot-format 1\n# fine so far\na, b, rigid, +x -> a, b, rigid, -x\n";
        match parse_ruleset(text) {
            Err(ParseError::InvalidRule { line: 3, source }) => {
                assert!(matches!(source, RuleError::MovementDistanceNotOne(_, _)));
            }
            other => panic!("expected located rule error, got {other:?}"),
        }
    }

    #[test]
    fn ruleset_round_trip() {
        let text = "nubot-format 1\na, b, rigid, +x -> a, c, rigid, +x # change\nc, empty, null, +y -> c, d, flexible, +y\n";
        let rules = parse_ruleset(text).unwrap();
        let written = write_ruleset(&rules);
        let reparsed = parse_ruleset(&written).unwrap();
        assert_eq!(rules.len(), reparsed.len());
        for id in rules.ids() {
            let a = rules.get(id);
            let b = reparsed.get(id);
            // States may intern to different ids only if ordering differs;
            // names must agree.
            assert_eq!(
                rules.states.name(a.lhs.s1),
                reparsed.states.name(b.lhs.s1)
            );
            assert_eq!(a.lhs.bond, b.lhs.bond);
            assert_eq!(a.rhs.dir, b.rhs.dir);
        }
    }

    #[test]
    fn parse_config_and_errors() {
        let mut states = StateTable::new();
        let good = "nubot-format 1\nmonomer (0,0) a\nmonomer (1,0) b\nbond (0,0) (1,0) rigid\n";
        let c = parse_config(good, &mut states).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(
            c.bond(GridPoint::new(0, 0), GridPoint::new(1, 0)),
            BondType::Rigid
        );

        let dup = "nubot-format 1\nmonomer (0,0) a\nmonomer (0,0) b\n";
        assert!(matches!(
            parse_config(dup, &mut states),
            Err(ParseError::InvalidConfig {
                line: 3,
                source: ConfigError::DuplicateMonomer(_)
            })
        ));

        let far = "nubot-format 1\nmonomer (0,0) a\nmonomer (2,0) b\nbond (0,0) (2,0) rigid\n";
        assert!(matches!(
            parse_config(far, &mut states),
            Err(ParseError::InvalidConfig {
                line: 4,
                source: ConfigError::BondNotAdjacent(_, _)
            })
        ));

        let vacant = "nubot-format 1\nmonomer (0,0) a\nbond (0,0) (1,0) rigid\n";
        assert!(matches!(
            parse_config(vacant, &mut states),
            Err(ParseError::InvalidConfig {
                line: 3,
                source: ConfigError::BondToVacancy(_)
            })
        ));
    }

    #[test]
    fn config_round_trip() {
        let mut states = StateTable::new();
        let text = "nubot-format 1\nmonomer (0,0) a\nmonomer (1,0) b\nmonomer (1,1) c\nbond (0,0) (1,0) rigid\nbond (1,0) (1,1) flexible\n";
        let c = parse_config(text, &mut states).unwrap();
        let written = write_config(&c, &states);
        let mut states2 = StateTable::new();
        let c2 = parse_config(&written, &mut states2).unwrap();
        assert_eq!(c.len(), c2.len());
        for (p, s) in c.monomers() {
            assert_eq!(
                states.name(s),
                states2.name(c2.state_at(p).expect("same occupancy"))
            );
        }
    }

    #[test]
    fn missing_header_rejected() {
        assert!(matches!(
            parse_ruleset("a, b, rigid, +x -> a, b, rigid, +x\n"),
            Err(ParseError::BadHeader { line: 1 })
        ));
    }

    #[test]
    fn trace_round_trip_empty() {
        let t = Trajectory {
            seed: 9,
            steps: Vec::new(),
            stop: StopReason::Halted,
            final_time: 0.0,
            events: 0,
            terminal: Configuration::new(),
            max_rect: crate::grid::BoundingRect::EMPTY,
        };
        let text = write_trace(&t, None);
        let (h, steps) = read_trace(&text).unwrap();
        assert_eq!(h.seed, 9);
        assert!(steps.is_empty());
    }
}
