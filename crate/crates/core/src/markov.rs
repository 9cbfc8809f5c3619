//! The four word-level moves on twins, bounded equivalence search, and the
//! experiment harness.
//!
//! `M1` swaps a trivial strand between the two ends of the block (a circle
//! shift on closures), `M2` conjugates, `M3` and `M4` stabilize into one
//! more strand with a palindromic tail. Any two twins with equivalent
//! closures are related by these moves and their inverses; the bounded
//! search can confirm relatedness but never refute it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::closure;
use crate::moves::{equivalent_doodles, minimal_code};
use crate::twinword::TwinWord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkovError {
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("strand mismatch: conjugator on {conjugator} strands, word on {word}")]
    ConjugatorMismatch { conjugator: usize, word: usize },
    #[error("word is not presented as a tensor with a trivial strand on the {0} side")]
    NoTrivialStrand(&'static str),
    #[error("move does not apply: {0}")]
    NotApplicable(String),
}

/// One move, as applied left to right in a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MMove {
    /// `β ⊗ I -> I ⊗ β`: shift every letter up by one.
    M1,
    /// `I ⊗ β -> β ⊗ I`: shift every letter down by one.
    M1Inv,
    /// `β -> α β α⁻¹`.
    M2(TwinWord),
    /// `β -> (I ⊗ β) s_1 … s_{i-1} s_i s_{i-1} … s_1`.
    M3(usize),
    M3Inv(usize),
    /// `β -> (β ⊗ I) s_n … s_{i+1} s_i s_{i+1} … s_n`.
    M4(usize),
    M4Inv(usize),
}

impl fmt::Display for MMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MMove::M1 => write!(f, "M1"),
            MMove::M1Inv => write!(f, "M1'"),
            MMove::M2(alpha) => write!(f, "M2 {alpha}"),
            MMove::M3(i) => write!(f, "M3 {i}"),
            MMove::M3Inv(i) => write!(f, "M3' {i}"),
            MMove::M4(i) => write!(f, "M4 {i}"),
            MMove::M4Inv(i) => write!(f, "M4' {i}"),
        }
    }
}

/// Ascending-descending palindrome `s_1 … s_{i-1} s_i s_{i-1} … s_1`.
fn rising_palindrome(i: usize) -> Vec<usize> {
    let mut letters: Vec<usize> = (1..=i).collect();
    letters.extend((1..i).rev());
    letters
}

/// Descending-ascending palindrome `s_n … s_{i+1} s_i s_{i+1} … s_n`.
fn falling_palindrome(i: usize, n: usize) -> Vec<usize> {
    let mut letters: Vec<usize> = (i..=n).rev().collect();
    letters.extend(i + 1..=n);
    letters
}

/// Forward `M1` reads the word as `β ⊗ I` inside `TW_m` (the top strand
/// untouched) and shifts every letter up by one; backward is the inverse.
pub fn apply_m1(w: &TwinWord, forward: bool) -> Result<TwinWord, MarkovError> {
    let m = w.strands();
    if forward {
        if m < 2 || w.letters().iter().any(|&l| l + 1 > m - 1) {
            return Err(MarkovError::NoTrivialStrand("right"));
        }
        Ok(w.shifted(1, m))
    } else {
        if m < 2 || w.letters().iter().any(|&l| l == 1) {
            return Err(MarkovError::NoTrivialStrand("left"));
        }
        Ok(w.shifted(-1, m))
    }
}

/// `β -> α β α⁻¹`, unnormalized.
pub fn apply_m2(beta: &TwinWord, alpha: &TwinWord) -> Result<TwinWord, MarkovError> {
    if alpha.strands() != beta.strands() {
        return Err(MarkovError::ConjugatorMismatch {
            conjugator: alpha.strands(),
            word: beta.strands(),
        });
    }
    let prefix = alpha.multiply(beta).expect("same strand count");
    Ok(prefix.multiply(&alpha.inverse()).expect("same strand count"))
}

pub fn apply_m3(beta: &TwinWord, i: usize) -> Result<TwinWord, MarkovError> {
    let n = beta.strands();
    if i == 0 || i > n {
        return Err(MarkovError::IndexOutOfRange { index: i, max: n });
    }
    let mut letters: Vec<usize> = beta.letters().iter().map(|&l| l + 1).collect();
    letters.extend(rising_palindrome(i));
    Ok(TwinWord::new(n + 1, letters).expect("letters stay in range"))
}

pub fn apply_m4(beta: &TwinWord, i: usize) -> Result<TwinWord, MarkovError> {
    let n = beta.strands();
    if i == 0 || i > n {
        return Err(MarkovError::IndexOutOfRange { index: i, max: n });
    }
    let mut letters: Vec<usize> = beta.letters().to_vec();
    letters.extend(falling_palindrome(i, n));
    Ok(TwinWord::new(n + 1, letters).expect("letters stay in range"))
}

/// An applicable inverse stabilization recovered from a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseStabilization {
    pub kind: InverseKind,
    pub index: usize,
    pub beta: TwinWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseKind {
    M3,
    M4,
}

/// All ways to read `w` as `apply_m3(β', i)` or `apply_m4(β', i)` up to
/// normal-form equality of the remainder.
pub fn detect_inverse_m3_m4(w: &TwinWord) -> Vec<InverseStabilization> {
    let m = w.strands();
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let n = m - 1;
    for i in 1..=n {
        // M3: w · palindrome ≡ I ⊗ β', i.e. no letter 1 in normal form.
        let tail = TwinWord::new(m, rising_palindrome(i)).expect("palindrome fits");
        let rest = w.multiply(&tail).expect("same strands").normal_form();
        if rest.letters().iter().all(|&l| l >= 2) {
            let beta = rest.shifted(-1, n);
            out.push(InverseStabilization { kind: InverseKind::M3, index: i, beta });
        }
        // M4: w · palindrome ≡ β' ⊗ I, i.e. no top letter in normal form.
        let tail = TwinWord::new(m, falling_palindrome(i, n)).expect("palindrome fits");
        let rest = w.multiply(&tail).expect("same strands").normal_form();
        if rest.letters().iter().all(|&l| l + 1 <= n) {
            let beta = rest.shifted(0, n);
            out.push(InverseStabilization { kind: InverseKind::M4, index: i, beta });
        }
    }
    out
}

pub fn apply_move(w: &TwinWord, mv: &MMove) -> Result<TwinWord, MarkovError> {
    match mv {
        MMove::M1 => apply_m1(w, true),
        MMove::M1Inv => apply_m1(w, false),
        MMove::M2(alpha) => apply_m2(w, alpha),
        MMove::M3(i) => apply_m3(w, *i),
        MMove::M4(i) => apply_m4(w, *i),
        MMove::M3Inv(i) => detect_inverse_m3_m4(w)
            .into_iter()
            .find(|s| s.kind == InverseKind::M3 && s.index == *i)
            .map(|s| s.beta)
            .ok_or_else(|| MarkovError::NotApplicable(format!("no inverse M3 at index {i}"))),
        MMove::M4Inv(i) => detect_inverse_m3_m4(w)
            .into_iter()
            .find(|s| s.kind == InverseKind::M4 && s.index == *i)
            .map(|s| s.beta)
            .ok_or_else(|| MarkovError::NotApplicable(format!("no inverse M4 at index {i}"))),
    }
}

/// A witness that `start` and `end` are related by the listed moves, up to
/// normal-form equality at every step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPath {
    pub start: TwinWord,
    pub moves: Vec<MMove>,
    pub end: TwinWord,
}

impl MPath {
    /// Re-apply every move and confirm the endpoint.
    pub fn replay(&self) -> Result<(), MarkovError> {
        let mut w = self.start.clone();
        for mv in &self.moves {
            w = apply_move(&w, mv)?;
            w = w.normal_form();
        }
        if w.strands() == self.end.strands() && w.equal(&self.end).unwrap_or(false) {
            Ok(())
        } else {
            Err(MarkovError::NotApplicable(format!(
                "replay ends at {w}, expected {}",
                self.end
            )))
        }
    }

    /// One move per line; conjugators are carried inline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for mv in &self.moves {
            out.push_str(&mv.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_strands: usize,
    pub max_depth: usize,
    pub conjugator_cap: usize,
}

/// Outcome of the bounded search: a path, or inconclusive exhaustion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MPath),
    /// The bounded search saw this many states without connecting the
    /// words; not a disproof.
    Inconclusive { explored: usize },
}

/// Conjugators tried by the search: reduced words up to `cap` letters over
/// `TW_n`, single generators first.
fn conjugators(n: usize, cap: usize) -> Vec<TwinWord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next_layer = Vec::new();
        for prefix in &layer {
            for g in 1..n {
                let mut letters = prefix.clone();
                letters.push(g);
                let w = TwinWord::new(n, letters.clone()).expect("letters in range");
                let nf = w.normal_form();
                if nf.len() == letters.len() && seen.insert(nf.letters().to_vec()) {
                    out.push(nf);
                }
                next_layer.push(letters);
            }
        }
        layer = next_layer;
    }
    out
}

type State = (usize, Vec<usize>);

fn state_of(w: &TwinWord) -> State {
    (w.strands(), w.normal_form().letters().to_vec())
}

/// Neighbouring states with the moves that reach them.
fn expand(w: &TwinWord, caps: &SearchCaps) -> Vec<(MMove, TwinWord)> {
    let mut out = Vec::new();
    let n = w.strands();
    if let Ok(next) = apply_m1(w, true) {
        out.push((MMove::M1, next));
    }
    if let Ok(next) = apply_m1(w, false) {
        out.push((MMove::M1Inv, next));
    }
    for alpha in conjugators(n, caps.conjugator_cap) {
        let next = apply_m2(w, &alpha).expect("same strand count");
        out.push((MMove::M2(alpha), next));
    }
    if n + 1 <= caps.max_strands {
        for i in 1..=n {
            out.push((MMove::M3(i), apply_m3(w, i).expect("index in range")));
            out.push((MMove::M4(i), apply_m4(w, i).expect("index in range")));
        }
    }
    for s in detect_inverse_m3_m4(w) {
        let mv = match s.kind {
            InverseKind::M3 => MMove::M3Inv(s.index),
            InverseKind::M4 => MMove::M4Inv(s.index),
        };
        out.push((mv, s.beta));
    }
    out
}

const STATE_CAP: usize = 200_000;

/// Bidirectional breadth-first search over the move graph, deduplicating
/// states by `(strand count, normal form)`. Levels expand in sorted state
/// order, so the outcome is deterministic for fixed caps.
pub fn m_search(a: &TwinWord, b: &TwinWord, caps: &SearchCaps) -> SearchOutcome {
    let start = state_of(a);
    let goal = state_of(b);
    if start == goal {
        return SearchOutcome::Found(MPath { start: a.clone(), moves: Vec::new(), end: b.clone() });
    }
    let mut fwd: BTreeMap<State, Option<(State, MMove)>> = BTreeMap::new();
    let mut bwd: BTreeMap<State, Option<(State, MMove)>> = BTreeMap::new();
    fwd.insert(start.clone(), None);
    bwd.insert(goal.clone(), None);
    let mut fwd_frontier = vec![start];
    let mut bwd_frontier = vec![goal];
    let mut explored = 2usize;
    let mut meet: Option<State> = None;
    let fwd_budget = caps.max_depth.div_ceil(2);
    let bwd_budget = caps.max_depth / 2;
    let mut fwd_done = 0usize;
    let mut bwd_done = 0usize;

    'outer: while meet.is_none() {
        let forward_turn = (fwd_done < fwd_budget && fwd_frontier.len() <= bwd_frontier.len()
            || bwd_done >= bwd_budget)
            && fwd_done < fwd_budget;
        if !forward_turn && bwd_done >= bwd_budget {
            break;
        }
        let (frontier, this, other, counter) = if forward_turn {
            (&mut fwd_frontier, &mut fwd, &bwd, &mut fwd_done)
        } else {
            (&mut bwd_frontier, &mut bwd, &fwd, &mut bwd_done)
        };
        if frontier.is_empty() {
            *counter += 1;
            if fwd_done >= fwd_budget && bwd_done >= bwd_budget {
                break;
            }
            continue;
        }
        let mut next_frontier = Vec::new();
        for state in std::mem::take(frontier) {
            let word = TwinWord::new(state.0, state.1.clone()).expect("state is a valid word");
            for (mv, next_word) in expand(&word, caps) {
                if next_word.strands() > caps.max_strands {
                    continue;
                }
                let next = state_of(&next_word);
                if this.contains_key(&next) {
                    continue;
                }
                this.insert(next.clone(), Some((state.clone(), mv)));
                explored += 1;
                if other.contains_key(&next) {
                    meet = Some(next);
                    break 'outer;
                }
                next_frontier.push(next);
                if explored > STATE_CAP {
                    break 'outer;
                }
            }
        }
        next_frontier.sort();
        next_frontier.dedup();
        *frontier = next_frontier;
        *counter += 1;
        if fwd_done >= fwd_budget && bwd_done >= bwd_budget {
            break;
        }
    }

    let Some(meet) = meet else {
        return SearchOutcome::Inconclusive { explored };
    };
    // Forward half: moves from `a` to the meeting state.
    let mut moves = Vec::new();
    let mut cursor = meet.clone();
    while let Some(Some((prev, mv))) = fwd.get(&cursor) {
        moves.push(mv.clone());
        cursor = prev.clone();
    }
    moves.reverse();
    // Backward half: recorded from `b`, so inverted.
    let mut cursor = meet;
    while let Some(Some((prev, mv))) = bwd.get(&cursor) {
        moves.push(invert_move(mv));
        cursor = prev.clone();
    }
    let path = MPath { start: a.clone(), moves, end: b.clone() };
    debug_assert!(path.replay().is_ok(), "search produced an invalid path");
    SearchOutcome::Found(path)
}

fn invert_move(mv: &MMove) -> MMove {
    match mv {
        MMove::M1 => MMove::M1Inv,
        MMove::M1Inv => MMove::M1,
        MMove::M2(alpha) => MMove::M2(alpha.inverse()),
        MMove::M3(i) => MMove::M3Inv(*i),
        MMove::M3Inv(i) => MMove::M3(*i),
        MMove::M4(i) => MMove::M4Inv(*i),
        MMove::M4Inv(i) => MMove::M4(*i),
    }
}

/// Machine-readable result of the experiment harness.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub caps: ExperimentCaps,
    pub forward: ForwardReport,
    pub reverse: ReverseReport,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentCaps {
    pub n_max: usize,
    pub len_max: usize,
    pub m_seq_max: usize,
    pub search_depth: usize,
    pub search_strands: usize,
    pub conjugator_cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForwardReport {
    pub trials: usize,
    pub passes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReverseReport {
    pub buckets: Vec<BucketReport>,
    pub connected_pairs: usize,
    pub inconclusive_pairs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketReport {
    pub code: String,
    pub members: Vec<String>,
    pub connected_pairs: usize,
    /// Pairs the bounded search could not connect; inconclusive, never
    /// counterexamples.
    pub inconclusive_pairs: Vec<[String; 2]>,
}

pub fn random_word(rng: &mut impl Rng, n_max: usize, len_max: usize) -> TwinWord {
    let n = rng.gen_range(1..=n_max.max(1));
    let len = if n == 1 { 0 } else { rng.gen_range(0..=len_max) };
    let letters = (0..len).map(|_| rng.gen_range(1..n)).collect();
    TwinWord::new(n, letters).expect("letters in range")
}

/// A random applicable move under the caps.
pub fn random_move(rng: &mut impl Rng, w: &TwinWord, caps: &SearchCaps) -> Option<MMove> {
    let options = expand(w, caps);
    if options.is_empty() {
        return None;
    }
    let idx = rng.gen_range(0..options.len());
    Some(options[idx].0.clone())
}

/// All words over the given strand counts up to `len_max` letters.
pub fn enumerate_words(strand_counts: &[usize], len_max: usize) -> Vec<TwinWord> {
    let mut words = Vec::new();
    for &n in strand_counts {
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        words.push(TwinWord::identity(n));
        for _ in 1..=len_max {
            let mut next = Vec::new();
            for prefix in &layer {
                for g in 1..n {
                    let mut letters = prefix.clone();
                    letters.push(g);
                    words.push(TwinWord::new(n, letters.clone()).expect("in range"));
                    next.push(letters);
                }
            }
            layer = next;
        }
    }
    words
}

/// Desk-scale verification harness. Forward: random words with random move
/// sequences keep their closure's doodle class. Reverse: enumerate all
/// short words of `TW_2` and `TW_3`, bucket by the canonical code of the
/// reduced closure, and connect bucket members by bounded search.
pub fn markov_experiment(
    seed: u64,
    n_max: usize,
    len_max: usize,
    m_seq_max: usize,
    caps: &SearchCaps,
    forward_trials: usize,
) -> ExperimentReport {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut passes = 0usize;
    for _ in 0..forward_trials {
        let beta = random_word(&mut rng, n_max, len_max);
        let mut word = beta.clone();
        let steps = rng.gen_range(0..=m_seq_max);
        for _ in 0..steps {
            match random_move(&mut rng, &word, caps) {
                Some(mv) => word = apply_move(&word, &mv).expect("move was applicable"),
                None => break,
            }
        }
        if equivalent_doodles(&closure(&beta), &closure(&word)) {
            passes += 1;
        }
    }

    let mut buckets: BTreeMap<Vec<u8>, Vec<TwinWord>> = BTreeMap::new();
    for w in enumerate_words(&[2, 3], len_max) {
        let code = minimal_code(&closure(&w)).into_bytes();
        buckets.entry(code).or_default().push(w);
    }
    let mut bucket_reports = Vec::new();
    let mut connected_total = 0usize;
    let mut inconclusive_total = 0usize;
    for (code, members) in buckets {
        let hub = members[0].clone();
        let mut reaches_hub = vec![true];
        for member in members.iter().skip(1) {
            let ok = matches!(m_search(member, &hub, caps), SearchOutcome::Found(_));
            reaches_hub.push(ok);
        }
        let mut connected = 0usize;
        let mut inconclusive = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if reaches_hub[i] && reaches_hub[j]
                    || matches!(m_search(&members[i], &members[j], caps), SearchOutcome::Found(_))
                {
                    connected += 1;
                } else {
                    inconclusive.push([members[i].to_string(), members[j].to_string()]);
                }
            }
        }
        connected_total += connected;
        inconclusive_total += inconclusive.len();
        bucket_reports.push(BucketReport {
            code: code.iter().map(|b| format!("{b:02x}")).collect(),
            members: members.iter().map(|m| m.to_string()).collect(),
            connected_pairs: connected,
            inconclusive_pairs: inconclusive,
        });
    }

    ExperimentReport {
        seed,
        caps: ExperimentCaps {
            n_max,
            len_max,
            m_seq_max,
            search_depth: caps.max_depth,
            search_strands: caps.max_strands,
            conjugator_cap: caps.conjugator_cap,
        },
        forward: ForwardReport { trials: forward_trials, passes },
        reverse: ReverseReport {
            buckets: bucket_reports,
            connected_pairs: connected_total,
            inconclusive_pairs: inconclusive_total,
        },
    }
}

pub fn render_report(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "forward: {}/{} closures stayed equivalent under random move sequences\n",
        report.forward.passes, report.forward.trials
    ));
    let total = report.reverse.connected_pairs + report.reverse.inconclusive_pairs;
    out.push_str(&format!(
        "reverse: {} buckets, {}/{} pairs connected, {} inconclusive\n",
        report.reverse.buckets.len(),
        report.reverse.connected_pairs,
        total,
        report.reverse.inconclusive_pairs
    ));
    for bucket in &report.reverse.buckets {
        out.push_str(&format!(
            "  bucket {}…: {} members, {} pairs connected, {} inconclusive\n",
            &bucket.code[..bucket.code.len().min(12)],
            bucket.members.len(),
            bucket.connected_pairs,
            bucket.inconclusive_pairs.len()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> TwinWord {
        text.parse().unwrap()
    }

    fn caps() -> SearchCaps {
        SearchCaps { max_strands: 4, max_depth: 8, conjugator_cap: 2 }
    }

    #[test]
    fn m1_shifts_letters() {
        assert_eq!(apply_m1(&w("tw 3: s1"), true).unwrap(), w("tw 3: s2"));
        assert_eq!(apply_m1(&w("tw 3: s2"), false).unwrap(), w("tw 3: s1"));
        assert_eq!(apply_m1(&TwinWord::identity(2), true).unwrap(), TwinWord::identity(2));
        assert!(apply_m1(&w("tw 3: s2"), true).is_err());
    }

    #[test]
    fn m1_is_a_circle_shift_on_closures() {
        for text in ["tw 3: s1", "tw 4: s1 s2 s1", "tw 3: s1 s1"] {
            let beta = w(text);
            let shifted = apply_m1(&beta, true).unwrap();
            assert_eq!(
                minimal_code(&closure(&beta)),
                minimal_code(&closure(&shifted)),
                "{text}"
            );
        }
    }

    #[test]
    fn m2_examples() {
        let beta = w("tw 3: s2");
        assert_eq!(apply_m2(&beta, &TwinWord::identity(3)).unwrap(), beta);
        let conj = apply_m2(&beta, &w("tw 3: s1")).unwrap();
        assert_eq!(conj, w("tw 3: s1 s2 s1"));
        assert!(equivalent_doodles(&closure(&conj), &closure(&beta)));
        let self_conj = apply_m2(&beta, &beta).unwrap();
        assert!(self_conj.equal(&beta).unwrap());
        assert!(apply_m2(&beta, &w("tw 2: s1")).is_err());
    }

    #[test]
    fn m3_formula() {
        assert_eq!(apply_m3(&TwinWord::identity(1), 1).unwrap(), w("tw 2: s1"));
        assert_eq!(apply_m3(&w("tw 2: s1"), 2).unwrap(), w("tw 3: s2 s1 s2 s1"));
        assert!(apply_m3(&w("tw 2: s1"), 3).is_err());
        let beta = w("tw 3: s1 s2");
        for i in 1..=3 {
            let out = apply_m3(&beta, i).unwrap();
            assert_eq!(out.len(), beta.len() + 2 * i - 1);
            assert_eq!(out.strands(), 4);
        }
    }

    #[test]
    fn m4_formula() {
        assert_eq!(apply_m4(&TwinWord::identity(1), 1).unwrap(), w("tw 2: s1"));
        assert_eq!(apply_m4(&w("tw 2: s1"), 1).unwrap(), w("tw 3: s1 s2 s1 s2"));
        assert_eq!(apply_m4(&w("tw 2: s1"), 2).unwrap(), w("tw 3: s1 s2"));
        let beta = w("tw 3: s1 s2");
        let n = beta.strands();
        for i in 1..=n {
            let out = apply_m4(&beta, i).unwrap();
            assert_eq!(out.len(), beta.len() + 2 * (n - i) + 1);
        }
    }

    #[test]
    fn stabilizations_preserve_the_closure() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..100 {
            let beta = random_word(&mut rng, 3, 5);
            let i = rng.gen_range(1..=beta.strands());
            let m3 = apply_m3(&beta, i).unwrap();
            assert!(
                equivalent_doodles(&closure(&m3), &closure(&beta)),
                "M3({i}) on {beta}"
            );
            let m4 = apply_m4(&beta, i).unwrap();
            assert!(
                equivalent_doodles(&closure(&m4), &closure(&beta)),
                "M4({i}) on {beta}"
            );
        }
    }

    #[test]
    fn detect_recovers_stabilizations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(62);
        for _ in 0..200 {
            let beta = random_word(&mut rng, 3, 4);
            let i = rng.gen_range(1..=beta.strands());
            let m3 = apply_m3(&beta, i).unwrap();
            let found = detect_inverse_m3_m4(&m3)
                .into_iter()
                .find(|s| s.kind == InverseKind::M3 && s.index == i)
                .expect("stabilization detected");
            assert!(found.beta.equal(&beta).unwrap());
            let m4 = apply_m4(&beta, i).unwrap();
            let found = detect_inverse_m3_m4(&m4)
                .into_iter()
                .find(|s| s.kind == InverseKind::M4 && s.index == i)
                .expect("stabilization detected");
            assert!(found.beta.equal(&beta).unwrap());
        }
    }

    #[test]
    fn detect_example() {
        let found = detect_inverse_m3_m4(&w("tw 3: s2 s1 s2 s1"));
        assert!(found
            .iter()
            .any(|s| s.kind == InverseKind::M3 && s.index == 2 && s.beta == w("tw 2: s1")));
        assert!(detect_inverse_m3_m4(&TwinWord::identity(1)).is_empty());
    }

    #[test]
    fn search_finds_single_conjugation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(63);
        for _ in 0..50 {
            let beta = random_word(&mut rng, 3, 4);
            if beta.strands() < 2 {
                continue;
            }
            let alpha = TwinWord::generator(beta.strands(), 1).unwrap();
            let conj = apply_m2(&beta, &alpha).unwrap();
            match m_search(&beta, &conj, &caps()) {
                SearchOutcome::Found(path) => path.replay().unwrap(),
                SearchOutcome::Inconclusive { .. } => panic!("conjugate of {beta} not found"),
            }
        }
    }

    #[test]
    fn search_crosses_strand_counts() {
        let a = w("tw 2: s1");
        let b = TwinWord::identity(1);
        match m_search(&a, &b, &caps()) {
            SearchOutcome::Found(path) => {
                assert!(path.moves.len() <= 2);
                path.replay().unwrap();
            }
            SearchOutcome::Inconclusive { .. } => panic!("destabilization not found"),
        }
        let a = w("tw 3: s1 s2");
        let b = w("tw 3: s2 s1");
        match m_search(&a, &b, &caps()) {
            SearchOutcome::Found(path) => path.replay().unwrap(),
            SearchOutcome::Inconclusive { .. } => panic!("mirror words not connected"),
        }
    }

    #[test]
    fn conjugator_list_is_reduced_and_ordered() {
        let list = conjugators(4, 2);
        assert_eq!(list[0], w("tw 4: s1"));
        assert_eq!(list[1], w("tw 4: s2"));
        assert_eq!(list[2], w("tw 4: s3"));
        assert!(list.iter().all(|a| a.normal_form() == *a));
        assert!(list.iter().all(|a| !a.is_empty() && a.len() <= 2));
    }

    #[test]
    fn path_rendering_sketch() {
        let path = MPath {
            start: w("tw 2: s1"),
            moves: vec![MMove::M2(w("tw 2: s1")), MMove::M3(1)],
            end: w("tw 3: s2 s1 s2 s1 s1"),
        };
        let text = path.render();
        assert!(text.contains("M2 tw 2: s1"));
        assert!(text.contains("M3 1"));
    }

    #[test]
    fn tiny_experiment_is_deterministic_and_clean() {
        let caps = SearchCaps { max_strands: 3, max_depth: 4, conjugator_cap: 1 };
        let run = || markov_experiment(5, 2, 3, 2, &caps, 20);
        let a = run();
        let b = run();
        assert_eq!(a.forward.passes, a.forward.trials, "forward check must be perfect");
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
