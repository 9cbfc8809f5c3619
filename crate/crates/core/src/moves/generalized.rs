//! Generalized biangles: lens patterns where a bundle of `k` parallel
//! coherently oriented arcs crosses a bundle of `l` parallel arcs twice
//! each, `2·k·l` crossings in total. Every such lens contains exactly one
//! irregular bigon inside it (its eye); detection grows the maximal
//! pattern outward from each eye and keeps the largest state that verifies
//! structurally. Generalized tightening removes the whole lens;
//! generalized bending builds one, subject to the two conditions: every
//! elementary bending joins arcs of different Seifert circles, and no
//! cross-circle bending at the site is left unused.

use std::collections::BTreeSet;

use super::{apply_r2_add, BigonKind, MoveError};
use crate::diagram::{closure, CrossingId, DartId, Diagram};
use crate::twinword::TwinWord;

/// One arc of a bundle: the lens crossings it runs through, in order, and
/// the darts of its two edges leaving the lens. `seed` is a dart of an edge
/// known to be interior to the lens, from which the run is re-derived as
/// the lens grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensArc {
    pub crossings: Vec<CrossingId>,
    pub out_head: DartId,
    pub out_tail: DartId,
    seed: DartId,
}

impl LensArc {
    /// Edges between consecutive crossings of the arc, as minimal darts.
    fn internal_edges(&self, d: &Diagram) -> Option<Vec<DartId>> {
        let mut dart = self.out_tail;
        if !d.is_inward(dart) || dart / 4 != self.crossings[0] {
            return None;
        }
        let mut out = Vec::new();
        for step in 0..self.crossings.len() - 1 {
            let exit = d.through(dart);
            out.push(exit.min(d.opposite(exit)));
            dart = d.opposite(exit);
            if dart / 4 != self.crossings[step + 1] {
                return None;
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedBiangle {
    /// Bundles listed eye arc first, outermost arc last.
    pub bundle_a: Vec<LensArc>,
    pub bundle_b: Vec<LensArc>,
    pub crossings: BTreeSet<CrossingId>,
}

impl GeneralizedBiangle {
    pub fn k(&self) -> usize {
        self.bundle_a.len()
    }

    pub fn l(&self) -> usize {
        self.bundle_b.len()
    }
}

/// Working state during growth: every arc keeps all plausible runs; the
/// right combination is decided by structural verification.
#[derive(Debug, Clone)]
struct LensState {
    bundle_a: Vec<Vec<LensArc>>,
    bundle_b: Vec<Vec<LensArc>>,
    crossings: BTreeSet<CrossingId>,
}

const COMBO_CAP: usize = 4096;

/// The two darts at the crossing of `dart` belonging to the other strand.
fn cross_strand(dart: DartId) -> [DartId; 2] {
    let c = dart / 4;
    let s = dart % 4;
    [4 * c + (s + 1) % 4, 4 * c + (s + 3) % 4]
}

/// Chain of strand arrivals through the edge of `seed`, restricted to
/// `allowed` crossings. Returns the arrival (inward) darts in flow order
/// and whether the strand closes into a cycle inside `allowed`.
fn strand_chain(d: &Diagram, seed: DartId, allowed: &BTreeSet<CrossingId>) -> (Vec<DartId>, bool) {
    let in_d = if d.is_inward(seed) { seed } else { d.opposite(seed) };
    let tail_in = d.through(d.opposite(in_d));
    if !allowed.contains(&(in_d / 4)) || !allowed.contains(&(tail_in / 4)) {
        return (Vec::new(), false);
    }
    let mut chain = vec![tail_in, in_d];
    // Forward along the flow.
    loop {
        let next = d.strand_next(*chain.last().expect("nonempty"));
        if next == chain[0] {
            return (chain, true); // closed inside `allowed`
        }
        if allowed.contains(&(next / 4)) && !chain.contains(&next) {
            chain.push(next);
        } else {
            break;
        }
    }
    // Backward against the flow.
    loop {
        let prev_out = d.opposite(chain[0]);
        let prev_in = d.through(prev_out);
        if allowed.contains(&(prev_out / 4)) && !chain.contains(&prev_in) {
            chain.insert(0, prev_in);
        } else {
            break;
        }
    }
    (chain, false)
}

/// All runs of exactly `want` crossings whose interior edges include the
/// seed edge. For a chain the windows slide within it; for a cycle they
/// wrap around, omitting one edge each.
fn arc_windows(d: &Diagram, seed: DartId, allowed: &BTreeSet<CrossingId>, want: usize) -> Vec<LensArc> {
    let (chain, cyclic) = strand_chain(d, seed, allowed);
    if chain.len() < want || want < 2 {
        return Vec::new();
    }
    let in_d = if d.is_inward(seed) { seed } else { d.opposite(seed) };
    let seed_pos = chain.iter().position(|&x| x == in_d).expect("seed on chain");
    // The seed edge lies between chain positions seed_pos-1 and seed_pos.
    let mut out = Vec::new();
    let m = chain.len();
    let starts: Vec<usize> = if cyclic {
        (0..m).collect()
    } else {
        (0..=m - want).collect()
    };
    for start in starts {
        // Window covers positions start..start+want (mod m when cyclic).
        let covers = |pos_edge_head: usize| {
            // Edge between positions pos_edge_head-1 and pos_edge_head is
            // interior iff both endpoints lie strictly inside the window.
            if cyclic {
                let rel = (pos_edge_head + m - start) % m;
                rel >= 1 && rel <= want - 1
            } else {
                pos_edge_head > start && pos_edge_head <= start + want - 1
            }
        };
        if !covers(seed_pos) {
            continue;
        }
        let mut crossings = Vec::with_capacity(want);
        for i in 0..want {
            let pos = if cyclic { (start + i) % m } else { start + i };
            crossings.push(chain[pos] / 4);
        }
        let set: BTreeSet<CrossingId> = crossings.iter().copied().collect();
        if set.len() != want {
            continue;
        }
        let first_in = chain[if cyclic { start } else { start }];
        let last_in = chain[if cyclic { (start + want - 1) % m } else { start + want - 1 }];
        out.push(LensArc {
            crossings,
            out_tail: first_in,
            out_head: d.through(last_in),
            seed,
        });
        if out.len() >= 16 {
            break;
        }
    }
    out
}

fn combos<'a>(
    bundles: &'a [Vec<LensArc>],
) -> Box<dyn Iterator<Item = Vec<&'a LensArc>> + 'a> {
    let total: usize = bundles.iter().map(|c| c.len().max(1)).product();
    if bundles.iter().any(|c| c.is_empty()) || total == 0 {
        return Box::new(std::iter::empty());
    }
    let total = total.min(COMBO_CAP);
    Box::new((0..total).map(move |mut idx| {
        let mut pick = Vec::with_capacity(bundles.len());
        for cands in bundles {
            pick.push(&cands[idx % cands.len()]);
            idx /= cands.len();
        }
        pick
    }))
}

/// Grow one bundle by an arc wrapping around the whole opposite bundle.
/// Returns the wrap arc's seed dart when some candidate combination of the
/// opposite bundle admits a consistent wrap.
fn try_wrap(d: &Diagram, state: &LensState, grow_a: bool) -> Option<(DartId, Vec<CrossingId>)> {
    let opposite_bundle = if grow_a { &state.bundle_b } else { &state.bundle_a };
    'combo: for pick in combos(opposite_bundle) {
        let mut candidates: BTreeSet<CrossingId> = BTreeSet::new();
        for arc in &pick {
            for dart in [arc.out_head, arc.out_tail] {
                let far = d.opposite(dart) / 4;
                if state.crossings.contains(&far) || !candidates.insert(far) {
                    continue 'combo;
                }
            }
        }
        // The wrap's innermost interior edge bounds the face on the lens
        // side of the outermost opposite arc's exit edge.
        let probe_out = pick.last().expect("bundle nonempty").out_head;
        let face_of = d.face_of();
        let faces = d.faces();
        let walk = &faces[face_of[probe_out]];
        for &dart in walk {
            let far_end = d.opposite(dart);
            if candidates.contains(&(dart / 4)) && candidates.contains(&(far_end / 4)) {
                // One consecutive run over exactly the candidates.
                let windows = arc_windows(d, dart, &candidates, candidates.len());
                if let Some(w) = windows.first() {
                    return Some((dart, w.crossings.clone()));
                }
            }
        }
    }
    None
}

/// Re-derive candidate runs for every arc against the current lens.
fn rebuild(d: &Diagram, state: &mut LensState) {
    let allowed = state.crossings.clone();
    let want_a = 2 * state.bundle_b.len();
    let want_b = 2 * state.bundle_a.len();
    for cands in state.bundle_a.iter_mut() {
        let seed = cands[0].seed;
        *cands = arc_windows(d, seed, &allowed, want_a);
    }
    for cands in state.bundle_b.iter_mut() {
        let seed = cands[0].seed;
        *cands = arc_windows(d, seed, &allowed, want_b);
    }
}

fn state_is_plausible(state: &LensState) -> bool {
    state.bundle_a.iter().all(|c| !c.is_empty()) && state.bundle_b.iter().all(|c| !c.is_empty())
}

/// Structural verification; on success returns the lens with one concrete
/// run per arc.
fn verify_state(d: &Diagram, state: &LensState) -> Option<GeneralizedBiangle> {
    if !state_is_plausible(state) {
        return None;
    }
    let k = state.bundle_a.len();
    let l = state.bundle_b.len();
    if state.crossings.len() != 2 * k * l {
        return None;
    }
    let region_of_face = d.region_of_face();
    let mut region_sizes = vec![0usize; region_of_face.iter().max().map_or(0, |&m| m + 1)];
    for &r in &region_of_face {
        region_sizes[r] += 1;
    }
    let faces = d.faces();
    let all: Vec<Vec<LensArc>> = state
        .bundle_a
        .iter()
        .chain(state.bundle_b.iter())
        .cloned()
        .collect();
    'combo: for pick in combos(&all) {
        let (arcs_a, arcs_b) = pick.split_at(k);
        let mut owners_a = vec![usize::MAX; d.crossing_count()];
        let mut owners_b = vec![usize::MAX; d.crossing_count()];
        for (i, arc) in arcs_a.iter().enumerate() {
            if arc.crossings.len() != 2 * l {
                continue 'combo;
            }
            for &c in &arc.crossings {
                if !state.crossings.contains(&c) || owners_a[c] != usize::MAX {
                    continue 'combo;
                }
                owners_a[c] = i;
            }
        }
        for (j, arc) in arcs_b.iter().enumerate() {
            if arc.crossings.len() != 2 * k {
                continue 'combo;
            }
            for &c in &arc.crossings {
                if !state.crossings.contains(&c) || owners_b[c] != usize::MAX {
                    continue 'combo;
                }
                owners_b[c] = j;
            }
        }
        let mut pair_count = vec![0usize; k * l];
        for &c in &state.crossings {
            if owners_a[c] == usize::MAX || owners_b[c] == usize::MAX {
                continue 'combo;
            }
            pair_count[owners_a[c] * l + owners_b[c]] += 1;
        }
        if pair_count.iter().any(|&x| x != 2) {
            continue 'combo;
        }
        let mut internal_edges: BTreeSet<DartId> = BTreeSet::new();
        for arc in &pick {
            match arc.internal_edges(d) {
                Some(edges) => internal_edges.extend(edges),
                None => continue 'combo,
            }
        }
        if internal_edges.len() != k * (2 * l - 1) + l * (2 * k - 1) {
            continue 'combo;
        }
        let mut eye_count = 0usize;
        let mut quad_count = 0usize;
        for (i, walk) in faces.iter().enumerate() {
            let inside = walk
                .iter()
                .all(|&x| internal_edges.contains(&x.min(d.opposite(x))));
            if !inside {
                continue;
            }
            if region_sizes[region_of_face[i]] != 1 {
                continue 'combo;
            }
            match walk.len() {
                2 => eye_count += 1,
                4 => quad_count += 1,
                _ => continue 'combo,
            }
        }
        if eye_count == 1 && quad_count == (k - 1) + (l - 1) + 2 * (k - 1) * (l - 1) {
            return Some(GeneralizedBiangle {
                bundle_a: arcs_a.iter().map(|a| (*a).clone()).collect(),
                bundle_b: arcs_b.iter().map(|b| (*b).clone()).collect(),
                crossings: state.crossings.clone(),
            });
        }
    }
    None
}

/// All maximal lens patterns, one per irregular bigon eye.
pub fn find_generalized_biangles(d: &Diagram) -> Vec<GeneralizedBiangle> {
    let mut out: Vec<GeneralizedBiangle> = Vec::new();
    for bigon in super::find_bigons(d) {
        if bigon.kind != BigonKind::Irregular {
            continue;
        }
        let eye_crossings = BTreeSet::from([bigon.crossings[0], bigon.crossings[1]]);
        let seeds = [bigon.darts[0], bigon.darts[1]];
        let mut state = LensState {
            bundle_a: vec![arc_windows(d, seeds[0], &eye_crossings, 2)],
            bundle_b: vec![arc_windows(d, seeds[1], &eye_crossings, 2)],
            crossings: eye_crossings,
        };
        if !state_is_plausible(&state) {
            continue;
        }
        let mut states = vec![state.clone()];
        loop {
            let mut grew = false;
            for grow_a in [true, false] {
                if let Some((wrap_seed, run)) = try_wrap(d, &state, grow_a) {
                    let mut extended = state.clone();
                    extended.crossings.extend(run.iter().copied());
                    let placeholder = LensArc {
                        crossings: run,
                        out_head: 0,
                        out_tail: 0,
                        seed: wrap_seed,
                    };
                    if grow_a {
                        extended.bundle_a.push(vec![placeholder]);
                    } else {
                        extended.bundle_b.push(vec![placeholder]);
                    }
                    rebuild(d, &mut extended);
                    if !state_is_plausible(&extended) {
                        continue;
                    }
                    state = extended;
                    states.push(state.clone());
                    grew = true;
                    break;
                }
            }
            if !grew {
                break;
            }
        }
        for st in states.iter().rev() {
            if let Some(lens) = verify_state(d, st) {
                out.push(lens);
                break;
            }
        }
    }
    out.sort_by(|x, y| {
        x.crossings
            .cmp(&y.crossings)
            .then_with(|| x.bundle_a[0].seed.cmp(&y.bundle_a[0].seed))
    });
    out.dedup_by(|x, y| x.crossings == y.crossings && x.bundle_a[0].seed == y.bundle_a[0].seed);
    out
}

/// Remove all `2kl` crossings of a lens. The Seifert circle count is
/// preserved when the diagram is annular; the result need not stay
/// annular.
pub fn apply_generalized_tightening(
    d: &Diagram,
    g: &GeneralizedBiangle,
) -> Result<Diagram, MoveError> {
    let current = find_generalized_biangles(d);
    let found = current.iter().any(|x| {
        x.crossings == g.crossings
            && ((x.k() == g.k() && x.l() == g.l()) || (x.k() == g.l() && x.l() == g.k()))
    });
    if !found {
        return Err(MoveError::StaleSite(format!(
            "no generalized biangle over crossings {:?}",
            g.crossings
        )));
    }
    let next = d.excise(&g.crossings);
    debug_assert!(next.validate().is_empty(), "{:?}", next.validate());
    Ok(next)
}

/// A bundle for generalized bending: crossing-free circles taken from the
/// diagram's count, or a stack of parallel in-map arcs given by one dart
/// each, interface arc first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleSpec {
    FreeCircles(usize),
    Arcs(Vec<DartId>),
}

/// Word whose closure is the standalone `(k, l)` lens: a block of `k`
/// strands crossing a block of `l` strands and back.
fn lens_word(k: usize, l: usize) -> TwinWord {
    let mut letters = Vec::new();
    for j in 0..l {
        for i in (1 + j..=k + j).rev() {
            letters.push(i);
        }
    }
    let mut rev = letters.clone();
    rev.reverse();
    letters.extend(rev);
    TwinWord::new(k + l, letters).expect("lens word is well formed")
}

/// Reject when the region of `region_dart` carries a possible cross-circle
/// bending not used by the move: two same-class darts on different Seifert
/// circles whose edges are not both among `used_edges`.
fn check_maximal(
    d: &Diagram,
    region_dart: DartId,
    used_edges: &BTreeSet<DartId>,
) -> Result<(), MoveError> {
    let face_of = d.face_of();
    let region_of_face = d.region_of_face();
    let region = region_of_face[face_of[region_dart]];
    let sm = d.smoothing();
    let edge = |x: DartId| x.min(d.opposite(x));
    for class in [true, false] {
        let mut circles: BTreeSet<usize> = BTreeSet::new();
        let mut unused = false;
        for dart in 0..d.dart_count() {
            if d.is_inward(dart) != class || region_of_face[face_of[dart]] != region {
                continue;
            }
            circles.insert(sm.circle_of_dart[dart]);
            if !used_edges.contains(&edge(dart)) {
                unused = true;
            }
        }
        if circles.len() > 1 && unused {
            return Err(MoveError::NotApplicable(
                "another cross-circle bending is possible at the site".to_string(),
            ));
        }
    }
    Ok(())
}

/// Apply a generalized bending over the two bundles. Supported shapes:
/// two bundles of free circles (any `k`, `l`; `host` names a dart of the
/// hosting region when the diagram has crossings), a free circle against
/// an arc stack, and in-map bundles where one side is a single arc. The
/// single side is pushed through the opposite stack one layer at a time,
/// each elementary bending creating an irregular bigon.
pub fn apply_generalized_bending(
    d: &Diagram,
    a: &BundleSpec,
    b: &BundleSpec,
    host: Option<DartId>,
) -> Result<Diagram, MoveError> {
    match (a, b) {
        (BundleSpec::FreeCircles(k), BundleSpec::FreeCircles(l)) => {
            let (k, l) = (*k, *l);
            if k == 0 || l == 0 {
                return Err(MoveError::NotApplicable("bundles must be nonempty".to_string()));
            }
            if k + l > d.free_circles() {
                return Err(MoveError::NotApplicable(format!(
                    "need {} free circles, have {}",
                    k + l,
                    d.free_circles()
                )));
            }
            let word = lens_word(k, l);
            let lens = closure(&word);
            debug_assert_eq!(lens.free_circles(), 0);
            // Outer face of the lens drawing: the face below the last
            // crossing on the leftmost column.
            let outer = 4 * last_index_of(word.letters(), 1) + 2;
            if d.dart_count() == 0 {
                let base = Diagram::circles(d.free_circles() - k - l);
                return append_component(&base, &lens, None, outer);
            }
            let host = host.ok_or_else(|| {
                MoveError::NotApplicable(
                    "hosting dart required to place the lens in a diagram with crossings"
                        .to_string(),
                )
            })?;
            if host >= d.dart_count() {
                return Err(MoveError::StaleSite(format!("host dart {host} out of range")));
            }
            check_maximal(d, host, &BTreeSet::new())?;
            let base = d.with_free_circles(d.free_circles() - k - l);
            append_component(&base, &lens, Some(host), outer)
        }
        (BundleSpec::Arcs(single), BundleSpec::Arcs(stack)) if single.len() == 1 => {
            push_through(d, single[0], stack)
        }
        (BundleSpec::Arcs(stack), BundleSpec::Arcs(single)) if single.len() == 1 => {
            push_through(d, single[0], stack)
        }
        (BundleSpec::FreeCircles(1), BundleSpec::Arcs(stack))
        | (BundleSpec::Arcs(stack), BundleSpec::FreeCircles(1)) => {
            if stack.is_empty() {
                return Err(MoveError::NotApplicable("bundles must be nonempty".to_string()));
            }
            let before = d.crossing_count();
            let (mut cur, _) = super::bend_free_circle(d, stack[0])?;
            // Fingertip: the circle's arc beyond the pierced edge, at the
            // lower crossing on the far side.
            let mut tip = 4 * before + 4;
            for &qdart in &stack[1..] {
                let sm = cur.smoothing();
                if sm.circle_of_dart[tip] == sm.circle_of_dart[qdart] {
                    return Err(MoveError::NotApplicable(
                        "bending would join arcs of one Seifert circle".to_string(),
                    ));
                }
                let at = cur.crossing_count();
                let (next, bigon) = apply_r2_add(&cur, tip, qdart)?;
                if bigon.kind != BigonKind::Irregular {
                    return Err(MoveError::NotApplicable(
                        "stack arcs are not coherently facing the bundle".to_string(),
                    ));
                }
                tip = 4 * at;
                cur = next;
            }
            Ok(cur)
        }
        _ => Err(MoveError::NotApplicable(
            "unsupported bundle shape: one side must be a single arc or both sides free circles"
                .to_string(),
        )),
    }
}

fn last_index_of(letters: &[usize], letter: usize) -> usize {
    letters
        .iter()
        .rposition(|&l| l == letter)
        .expect("lens word touches column 1")
}

/// Push the edge of `first` through the stack of arcs, innermost first.
fn push_through(d: &Diagram, first: DartId, stack: &[DartId]) -> Result<Diagram, MoveError> {
    if stack.is_empty() {
        return Err(MoveError::NotApplicable("bundles must be nonempty".to_string()));
    }
    let edge = |x: DartId, dg: &Diagram| x.min(dg.opposite(x));
    let used: BTreeSet<DartId> = BTreeSet::from([edge(first, d), edge(stack[0], d)]);
    check_maximal(d, first, &used)?;
    let mut cur = d.clone();
    let mut tip = first;
    for &qdart in stack {
        let sm = cur.smoothing();
        if sm.circle_of_dart[tip] == sm.circle_of_dart[qdart] {
            return Err(MoveError::NotApplicable(
                "bending would join arcs of one Seifert circle".to_string(),
            ));
        }
        let at = cur.crossing_count();
        let (next, bigon) = apply_r2_add(&cur, tip, qdart)?;
        if bigon.kind != BigonKind::Irregular {
            return Err(MoveError::NotApplicable(
                "stack arcs are not coherently facing the bundle".to_string(),
            ));
        }
        tip = 4 * at; // fingertip dart beyond the pierced arc
        cur = next;
    }
    Ok(cur)
}

/// Append a standalone connected component, hosting it in the region of
/// `host` (or alongside nothing when the base diagram is crossing-free).
/// `outer` is the component dart whose face opens toward the host.
fn append_component(
    base: &Diagram,
    comp: &Diagram,
    host: Option<DartId>,
    outer: DartId,
) -> Result<Diagram, MoveError> {
    let (mut opposite, mut inward, free, mut merges) = base.parts();
    let offset = base.dart_count();
    for x in 0..comp.dart_count() {
        opposite.push(comp.opposite(x) + offset);
        inward.push(comp.is_inward(x));
    }
    for group in comp.merges() {
        merges.push(group.iter().map(|&x| x + offset).collect());
    }
    if let Some(h) = host {
        merges.push(vec![h, outer + offset]);
    }
    let next = Diagram::from_parts(opposite, inward, free + comp.free_circles(), merges, None);
    let violations = next.validate();
    if !violations.is_empty() {
        return Err(MoveError::NotApplicable(format!(
            "placement is not spherical: {}",
            violations.join("; ")
        )));
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{equivalent_doodles, find_bigons};

    fn closure_of(text: &str) -> Diagram {
        closure(&text.parse::<TwinWord>().unwrap())
    }

    #[test]
    fn lens_words_have_the_right_shape() {
        assert_eq!(lens_word(1, 1).letters(), &[1, 1]);
        assert_eq!(lens_word(2, 1).letters(), &[2, 1, 1, 2]);
        assert_eq!(lens_word(1, 2).letters(), &[1, 2, 2, 1]);
        let w = lens_word(2, 2);
        assert_eq!(w.letters().len(), 8);
        assert!(w.permutation().is_identity());
    }

    #[test]
    fn simple_lens_is_detected() {
        let d = closure_of("tw 2: s1 s1");
        let lenses = find_generalized_biangles(&d);
        // Both irregular bigons seed a one-by-one lens over the same two
        // crossings.
        assert_eq!(lenses.len(), 2);
        for lens in &lenses {
            assert_eq!((lens.k(), lens.l()), (1, 1));
            assert_eq!(lens.crossings.len(), 2);
        }
    }

    #[test]
    fn trivial_closure_has_no_lenses() {
        assert!(find_generalized_biangles(&closure_of("tw 3:")).is_empty());
    }

    #[test]
    fn wide_lens_is_detected_whole() {
        for (k, l) in [(2, 1), (1, 2), (2, 2), (3, 1)] {
            let d = closure(&lens_word(k, l));
            let lenses = find_generalized_biangles(&d);
            assert!(
                lenses.iter().any(|g| g.crossings.len() == 2 * k * l),
                "({k},{l}): found {:?}",
                lenses.iter().map(|g| (g.k(), g.l())).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn tightening_removes_all_lens_crossings() {
        let d = closure(&lens_word(2, 1));
        let lenses = find_generalized_biangles(&d);
        let g = lenses
            .iter()
            .find(|g| g.crossings.len() == 4)
            .expect("full lens found");
        let before = d.seifert_smooth().circle_count;
        let next = apply_generalized_tightening(&d, g).unwrap();
        assert_eq!(next.crossing_count(), 0);
        assert_eq!(next.seifert_smooth().circle_count, before);
        assert!(matches!(
            apply_generalized_tightening(&next, g),
            Err(MoveError::StaleSite(_))
        ));
    }

    #[test]
    fn one_by_one_tightening_matches_bigon_removal() {
        let d = closure_of("tw 2: s1 s1");
        let g = &find_generalized_biangles(&d)[0];
        let via_lens = apply_generalized_tightening(&d, g).unwrap();
        let b = find_bigons(&d)[0];
        let via_bigon = super::super::apply_r2_remove(&d, &b).unwrap();
        assert_eq!(via_lens.canonical_code(), via_bigon.canonical_code());
    }

    #[test]
    fn bending_two_free_circles() {
        let d = Diagram::circles(2);
        let bent = apply_generalized_bending(
            &d,
            &BundleSpec::FreeCircles(1),
            &BundleSpec::FreeCircles(1),
            None,
        )
        .unwrap();
        assert_eq!(bent.canonical_code(), closure_of("tw 2: s1 s1").canonical_code());
        assert!(equivalent_doodles(&bent, &d));
    }

    #[test]
    fn bending_is_deterministic() {
        let d = Diagram::circles(5);
        let build = || {
            apply_generalized_bending(
                &d,
                &BundleSpec::FreeCircles(2),
                &BundleSpec::FreeCircles(3),
                None,
            )
            .unwrap()
        };
        let x = build();
        assert_eq!(x, build());
        assert_eq!(x.crossing_count(), 12);
        assert!(equivalent_doodles(&x, &d));
    }

    #[test]
    fn bent_lens_round_trips_through_tightening() {
        let d = Diagram::circles(3);
        let bent = apply_generalized_bending(
            &d,
            &BundleSpec::FreeCircles(2),
            &BundleSpec::FreeCircles(1),
            None,
        )
        .unwrap();
        let lenses = find_generalized_biangles(&bent);
        let g = lenses.iter().find(|g| g.crossings.len() == 4).expect("lens");
        let back = apply_generalized_tightening(&bent, g).unwrap();
        assert_eq!(back.canonical_code(), d.canonical_code());
    }

    #[test]
    fn bundle_shapes_are_validated() {
        let d = Diagram::circles(1);
        assert!(matches!(
            apply_generalized_bending(
                &d,
                &BundleSpec::FreeCircles(1),
                &BundleSpec::FreeCircles(1),
                None
            ),
            Err(MoveError::NotApplicable(_))
        ));
    }
}
