//! Move scripts: one move per line, replayable against the diagram they
//! were recorded on. Site parameters refer to ids in the diagram state at
//! that step of the script; a move whose site no longer matches fails with
//! a stale-site error.
//!
//! Lines: `R1 <crossing>`, `R2- <c1> <c2>`, `R2+ <dart1> <dart2>`,
//! `GT <lens-id>`, `GB a=<spec> b=<spec> [host=<dart>]` with
//! `<spec> = free:<k> | d:<d1>,<d2>,...`.

use std::fmt;

use super::{
    apply_generalized_bending, apply_generalized_tightening, apply_r1, apply_r2_add,
    apply_r2_remove, find_bigons, find_generalized_biangles, find_monogons, BundleSpec,
    MoveError,
};
use crate::diagram::{CrossingId, DartId, Diagram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptMove {
    R1 { crossing: CrossingId },
    R2Remove { crossings: [CrossingId; 2] },
    R2Add { darts: [DartId; 2] },
    Tighten { lens: usize },
    Bend { a: BundleSpec, b: BundleSpec, host: Option<DartId> },
}

fn bundle_to_string(b: &BundleSpec) -> String {
    match b {
        BundleSpec::FreeCircles(k) => format!("free:{k}"),
        BundleSpec::Arcs(darts) => {
            let list: Vec<String> = darts.iter().map(|d| d.to_string()).collect();
            format!("d:{}", list.join(","))
        }
    }
}

impl fmt::Display for ScriptMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptMove::R1 { crossing } => write!(f, "R1 {crossing}"),
            ScriptMove::R2Remove { crossings } => {
                write!(f, "R2- {} {}", crossings[0], crossings[1])
            }
            ScriptMove::R2Add { darts } => write!(f, "R2+ {} {}", darts[0], darts[1]),
            ScriptMove::Tighten { lens } => write!(f, "GT {lens}"),
            ScriptMove::Bend { a, b, host } => {
                write!(f, "GB a={} b={}", bundle_to_string(a), bundle_to_string(b))?;
                if let Some(h) = host {
                    write!(f, " host={h}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn render_script(moves: &[ScriptMove]) -> String {
    let mut out = String::new();
    for m in moves {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

fn parse_bundle(text: &str) -> Result<BundleSpec, MoveError> {
    if let Some(k) = text.strip_prefix("free:") {
        let k = k
            .parse()
            .map_err(|_| MoveError::NotApplicable(format!("bad bundle spec {text:?}")))?;
        return Ok(BundleSpec::FreeCircles(k));
    }
    if let Some(list) = text.strip_prefix("d:") {
        let darts = list
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| MoveError::NotApplicable(format!("bad bundle spec {text:?}")))?;
        return Ok(BundleSpec::Arcs(darts));
    }
    Err(MoveError::NotApplicable(format!("bad bundle spec {text:?}")))
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptMove>, MoveError> {
    let bad = |line: &str| MoveError::NotApplicable(format!("bad script line {line:?}"));
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let op = parts.next().ok_or_else(|| bad(line))?;
        let num = |parts: &mut dyn Iterator<Item = &str>| -> Result<usize, MoveError> {
            parts
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| bad(line))
        };
        let mv = match op {
            "R1" => ScriptMove::R1 { crossing: num(&mut parts)? },
            "R2-" => ScriptMove::R2Remove { crossings: [num(&mut parts)?, num(&mut parts)?] },
            "R2+" => ScriptMove::R2Add { darts: [num(&mut parts)?, num(&mut parts)?] },
            "GT" => ScriptMove::Tighten { lens: num(&mut parts)? },
            "GB" => {
                let mut a = None;
                let mut b = None;
                let mut host = None;
                for item in parts.by_ref() {
                    if let Some(spec) = item.strip_prefix("a=") {
                        a = Some(parse_bundle(spec)?);
                    } else if let Some(spec) = item.strip_prefix("b=") {
                        b = Some(parse_bundle(spec)?);
                    } else if let Some(h) = item.strip_prefix("host=") {
                        host = Some(h.parse().map_err(|_| bad(line))?);
                    } else {
                        return Err(bad(line));
                    }
                }
                ScriptMove::Bend {
                    a: a.ok_or_else(|| bad(line))?,
                    b: b.ok_or_else(|| bad(line))?,
                    host,
                }
            }
            _ => return Err(bad(line)),
        };
        if parts.next().is_some() {
            return Err(bad(line));
        }
        out.push(mv);
    }
    Ok(out)
}

/// Apply a script move to the current diagram.
pub fn apply_script_move(d: &Diagram, mv: &ScriptMove) -> Result<Diagram, MoveError> {
    match mv {
        ScriptMove::R1 { crossing } => {
            let site = find_monogons(d)
                .into_iter()
                .find(|m| m.crossing == *crossing)
                .ok_or_else(|| {
                    MoveError::StaleSite(format!("no monogon at crossing {crossing}"))
                })?;
            apply_r1(d, &site)
        }
        ScriptMove::R2Remove { crossings } => {
            let mut want = *crossings;
            want.sort_unstable();
            let site = find_bigons(d)
                .into_iter()
                .find(|b| {
                    let mut have = b.crossings;
                    have.sort_unstable();
                    have == want
                })
                .ok_or_else(|| {
                    MoveError::StaleSite(format!("no bigon at crossings {crossings:?}"))
                })?;
            apply_r2_remove(d, &site)
        }
        ScriptMove::R2Add { darts } => apply_r2_add(d, darts[0], darts[1]).map(|(next, _)| next),
        ScriptMove::Tighten { lens } => {
            let lenses = find_generalized_biangles(d);
            let g = lenses.get(*lens).ok_or_else(|| {
                MoveError::StaleSite(format!("no generalized biangle with index {lens}"))
            })?;
            apply_generalized_tightening(d, g)
        }
        ScriptMove::Bend { a, b, host } => apply_generalized_bending(d, a, b, *host),
    }
}

/// Replay a whole script, validating each site in turn.
pub fn replay_script(start: &Diagram, moves: &[ScriptMove]) -> Result<Diagram, MoveError> {
    let mut current = start.clone();
    for mv in moves {
        current = apply_script_move(&current, mv)?;
    }
    Ok(current)
}
