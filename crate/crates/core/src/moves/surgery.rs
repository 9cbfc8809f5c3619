//! Local surgeries implementing the elementary moves.
//!
//! Removal moves go through `Diagram::excise`, which resplices strands and
//! rebuilds the region structure by dart tracking. Insertion moves wire the
//! two new crossings explicitly. The wiring below follows the conventions
//! of the diagram module: rotations counterclockwise, face walks keeping
//! their face on the right, and a dart traversing its edge away from its
//! own crossing. In the local pictures the pushed edge is drawn on the left
//! of the region traversed upward by its site dart, the target edge on the
//! right traversed downward, and the finger crosses eastward at `u` and
//! returns at `v`.

use std::collections::BTreeSet;

use super::{Bigon, BigonKind, MoveError, Monogon};
use crate::diagram::{DartId, Diagram};

pub(super) fn rebuild_merges_with_anchors(
    d: &Diagram,
    rewrites: &[(usize, DartId)], // (old face index, replacement anchor)
    extra_groups: Vec<Vec<DartId>>,
    opposite: Vec<DartId>,
    inward: Vec<bool>,
    free_circles: usize,
) -> Diagram {
    let face_of = d.face_of();
    let mut groups: Vec<Vec<DartId>> = Vec::new();
    for group in d.merges() {
        let mut fresh = Vec::new();
        for &anchor in group {
            let face = face_of[anchor];
            let replaced = rewrites
                .iter()
                .find(|(f, _)| *f == face)
                .map(|&(_, a)| a)
                .unwrap_or(anchor);
            fresh.push(replaced);
        }
        groups.push(fresh);
    }
    groups.extend(extra_groups);
    Diagram::from_parts(opposite, inward, free_circles, groups, None)
}

/// Remove a kink: the monogon's crossing disappears and the strand runs
/// straight through.
pub fn apply_r1(d: &Diagram, m: &Monogon) -> Result<Diagram, MoveError> {
    if m.dart >= d.dart_count() || m.dart / 4 != m.crossing {
        return Err(MoveError::StaleSite(format!(
            "monogon at crossing {} no longer exists",
            m.crossing
        )));
    }
    let current = super::find_monogons(d);
    if !current.iter().any(|x| x.crossing == m.crossing && x.dart == m.dart) {
        return Err(MoveError::StaleSite(format!(
            "no monogon with dart {} at crossing {}",
            m.dart, m.crossing
        )));
    }
    let next = d.excise(&BTreeSet::from([m.crossing]));
    debug_assert!(next.validate().is_empty(), "{:?}", next.validate());
    Ok(next)
}

/// Remove a lens: both crossings of the bigon disappear and the two
/// strands are pulled apart.
pub fn apply_r2_remove(d: &Diagram, b: &Bigon) -> Result<Diagram, MoveError> {
    let current = super::find_bigons(d);
    if !current.iter().any(|x| {
        let mut a = x.darts;
        let mut want = b.darts;
        a.sort_unstable();
        want.sort_unstable();
        a == want && x.kind == b.kind
    }) {
        return Err(MoveError::StaleSite(format!(
            "no bigon with darts {:?} present",
            b.darts
        )));
    }
    let next = d.excise(&BTreeSet::from([b.crossings[0], b.crossings[1]]));
    debug_assert!(next.validate().is_empty(), "{:?}", next.validate());
    Ok(next)
}

/// Push the edge of `p` across the edge of `q` through their common
/// region, creating two crossings and a lens face. Returns the new diagram
/// and the created bigon. Guests of the pierced regions stay with the face
/// of `p` and the face of `opposite(q)` respectively.
pub fn apply_r2_add(d: &Diagram, p: DartId, q: DartId) -> Result<(Diagram, Bigon), MoveError> {
    let n = d.dart_count();
    if p >= n || q >= n {
        return Err(MoveError::StaleSite(format!("dart {p} or {q} out of range")));
    }
    let edge = |x: DartId| x.min(d.opposite(x));
    if edge(p) == edge(q) {
        return Err(MoveError::NotApplicable(
            "lens insertion needs two distinct edges".to_string(),
        ));
    }
    let face_of = d.face_of();
    let region_of_face = d.region_of_face();
    if region_of_face[face_of[p]] != region_of_face[face_of[q]] {
        return Err(MoveError::NotApplicable(format!(
            "darts {p} and {q} do not bound a common region"
        )));
    }

    let (mut opposite, mut inward, free, _) = d.parts();
    let pbar = d.opposite(p);
    let qbar = d.opposite(q);
    let c = d.crossing_count();
    // u: slots [0 Xright, 1 Qup, 2 Xleft, 3 Qdown]; v likewise with
    // 0 = Xtip and 2 = Xcont. The X strand pierces at u and returns at v.
    let (u0, u1, u2, u3) = (4 * c, 4 * c + 1, 4 * c + 2, 4 * c + 3);
    let (v0, v1, v2, v3) = (4 * c + 4, 4 * c + 5, 4 * c + 6, 4 * c + 7);
    opposite.extend([usize::MAX; 8]);
    inward.extend([false; 8]);
    let pair = |opp: &mut Vec<DartId>, a: DartId, b: DartId| {
        opp[a] = b;
        opp[b] = a;
    };
    pair(&mut opposite, p, u2); // X1
    pair(&mut opposite, u0, v0); // X2 fingertip
    pair(&mut opposite, v2, pbar); // X3
    pair(&mut opposite, q, v1); // Q1
    pair(&mut opposite, v3, u1); // Q2 middle
    pair(&mut opposite, u3, qbar); // Q3

    let x_with_walk = !d.is_inward(p); // strand flow along the walk direction of p
    inward[u2] = x_with_walk; // Xleft receives the strand when flow goes up
    inward[u0] = !x_with_walk;
    inward[v0] = x_with_walk;
    inward[v2] = !x_with_walk;
    let q_with_walk = !d.is_inward(q);
    inward[v1] = q_with_walk; // Qup at v receives when flow goes down
    inward[v3] = !q_with_walk;
    inward[u1] = q_with_walk;
    inward[u3] = !q_with_walk;

    let rewrites = [(face_of[p], p), (face_of[q], q), (face_of[qbar], qbar)];
    let next = rebuild_merges_with_anchors(d, &rewrites, Vec::new(), opposite, inward, free);
    debug_assert!(next.validate().is_empty(), "{:?}", next.validate());

    let kind = if d.is_inward(p) == d.is_inward(q) {
        BigonKind::Irregular
    } else {
        BigonKind::Regular
    };
    let bigon = Bigon { crossings: [c, c + 1], darts: [v0, u1], kind };
    debug_assert!(super::find_bigons(&next)
        .iter()
        .any(|x| x.crossings == bigon.crossings && x.kind == kind));
    Ok((next, bigon))
}

/// Bend one crossing-free circle across the edge of `t`, placing its body
/// in the face of `t`. The created lens on the body side is irregular, so
/// this is a bending. Returns the new diagram and that irregular bigon.
pub fn bend_free_circle(d: &Diagram, t: DartId) -> Result<(Diagram, Bigon), MoveError> {
    if d.free_circles() == 0 {
        return Err(MoveError::NotApplicable("no free circle to bend".to_string()));
    }
    if t >= d.dart_count() {
        return Err(MoveError::StaleSite(format!("dart {t} out of range")));
    }
    let (mut opposite, mut inward, free, _) = d.parts();
    let face_of = d.face_of();
    let tbar = d.opposite(t);
    let c = d.crossing_count();
    // u (upper) and v (lower) on the target edge; slots
    // [0 Ceast, 1 Eup, 2 Cwest, 3 Edown] at both.
    let (u0, u1, u2, u3) = (4 * c, 4 * c + 1, 4 * c + 2, 4 * c + 3);
    let (v0, v1, v2, v3) = (4 * c + 4, 4 * c + 5, 4 * c + 6, 4 * c + 7);
    opposite.extend([usize::MAX; 8]);
    inward.extend([false; 8]);
    let pair = |opp: &mut Vec<DartId>, a: DartId, b: DartId| {
        opp[a] = b;
        opp[b] = a;
    };
    pair(&mut opposite, t, u1); // E1
    pair(&mut opposite, u3, v1); // E2 middle
    pair(&mut opposite, v3, tbar); // E3
    pair(&mut opposite, u0, v0); // circle fingertip (east arc)
    pair(&mut opposite, v2, u2); // circle body (west arc)

    let e_with_walk = !d.is_inward(t); // target flows downward in the picture
    inward[u1] = e_with_walk;
    inward[u3] = !e_with_walk;
    inward[v1] = e_with_walk;
    inward[v3] = !e_with_walk;
    // Circle orientation chosen so the body-side lens is the irregular one.
    inward[u2] = e_with_walk; // body arrives at u when target flows down
    inward[u0] = !e_with_walk;
    inward[v0] = e_with_walk;
    inward[v2] = !e_with_walk;

    let rewrites = [(face_of[t], t), (face_of[tbar], tbar)];
    let next = rebuild_merges_with_anchors(d, &rewrites, Vec::new(), opposite, inward, free - 1);
    debug_assert!(next.validate().is_empty(), "{:?}", next.validate());

    let bigon = Bigon {
        crossings: [c, c + 1],
        darts: [u3, v2],
        kind: BigonKind::Irregular,
    };
    debug_assert!(super::find_bigons(&next)
        .iter()
        .any(|x| x.crossings == bigon.crossings && x.kind == BigonKind::Irregular));
    Ok((next, bigon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::closure;
    use crate::moves::{find_bigons, find_monogons};
    use crate::twinword::TwinWord;

    fn closure_of(text: &str) -> Diagram {
        closure(&text.parse::<TwinWord>().unwrap())
    }

    #[test]
    fn r1_on_kink_leaves_a_circle() {
        let d = closure_of("tw 2: s1");
        let m = find_monogons(&d)[0];
        let next = apply_r1(&d, &m).unwrap();
        assert_eq!(next.crossing_count(), 0);
        assert_eq!(next.free_circles(), 1);
        assert_eq!(next.components(), d.components());
    }

    #[test]
    fn r1_site_goes_stale() {
        let d = closure_of("tw 2: s1");
        let monogons = find_monogons(&d);
        let next = apply_r1(&d, &monogons[0]).unwrap();
        assert!(matches!(
            apply_r1(&next, &monogons[0]),
            Err(MoveError::StaleSite(_))
        ));
    }

    #[test]
    fn r2_remove_splits_lens() {
        let d = closure_of("tw 2: s1 s1");
        let b = find_bigons(&d)[0];
        let next = apply_r2_remove(&d, &b).unwrap();
        assert_eq!(next.crossing_count(), 0);
        assert_eq!(next.free_circles(), 2);
        let stale = apply_r2_remove(&next, &b);
        assert!(matches!(stale, Err(MoveError::StaleSite(_))));
    }

    #[test]
    fn r1_preserves_components_randomly() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        let mut tried = 0;
        while tried < 100 {
            let n = rng.gen_range(2..=5);
            let len = rng.gen_range(1..=9);
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
            let d = closure(&TwinWord::new(n, letters).unwrap());
            let monogons = find_monogons(&d);
            if monogons.is_empty() {
                continue;
            }
            tried += 1;
            let next = apply_r1(&d, &monogons[0]).unwrap();
            assert_eq!(next.components(), d.components());
            assert_eq!(next.crossing_count() + 1, d.crossing_count());
        }
    }

    #[test]
    fn r2_add_then_remove_roundtrips() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(52);
        let mut done = 0;
        while done < 100 {
            let n = rng.gen_range(2..=4);
            let len = rng.gen_range(1..=6);
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
            let d = closure(&TwinWord::new(n, letters).unwrap());
            let sites = crate::moves::r2_add_sites(&d);
            if sites.is_empty() {
                continue;
            }
            done += 1;
            let (p, q) = sites[rng.gen_range(0..sites.len())];
            let code = d.canonical_code();
            let (bigger, bigon) = apply_r2_add(&d, p, q).unwrap();
            assert_eq!(bigger.crossing_count(), d.crossing_count() + 2);
            assert!(bigger.validate().is_empty());
            let back = apply_r2_remove(&bigger, &bigon).unwrap();
            assert_eq!(back.canonical_code(), code, "roundtrip failed at ({p},{q})");
        }
    }

    #[test]
    fn bend_two_free_circles_gives_the_lens_closure() {
        // Bending the two circles of the trivial 2-strand closure yields
        // the diagram of closure(s1 s1), up to canonical code.
        let d = closure_of("tw 2:");
        let first = bend_free_circle(&d, 0);
        // No darts yet: bend the pair directly through the lens closure.
        assert!(first.is_err());
        let lens = crate::moves::apply_generalized_bending(
            &d,
            &crate::moves::BundleSpec::FreeCircles(1),
            &crate::moves::BundleSpec::FreeCircles(1),
            None,
        )
        .unwrap();
        assert_eq!(
            lens.canonical_code(),
            closure_of("tw 2: s1 s1").canonical_code()
        );
    }

    #[test]
    fn bend_free_circle_across_an_arc() {
        let d = closure_of("tw 3: s1"); // one crossing, one free circle
        assert_eq!(d.free_circles(), 1);
        let (next, bigon) = bend_free_circle(&d, 0).unwrap();
        assert_eq!(next.crossing_count(), 3);
        assert_eq!(next.free_circles(), 0);
        assert_eq!(bigon.kind, BigonKind::Irregular);
        assert!(next.validate().is_empty());
        // Undoing the bend restores the doodle.
        assert!(crate::moves::equivalent_doodles(&next, &d));
    }
}
