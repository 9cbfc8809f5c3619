//! Oriented smoothing of every double point and the structure of the
//! resulting family of disjoint circles.
//!
//! Smoothing replaces each crossing by the unique crossingless reconnection
//! that respects the strand orientations: the inward dart at slot `s` joins
//! the outward dart at the cyclically adjacent slot away from the other
//! inward dart. The regions of the smoothed picture are the diagram's
//! regions with, at every crossing, the face at the in-in corner merged
//! into the face at the out-out corner.

use std::collections::BTreeSet;

use super::{DartId, Diagram, UnionFind};

/// Summary of the smoothed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeifertFamily {
    pub circle_count: usize,
    /// The circles are totally ordered by nesting; the family deforms to
    /// the closure of a trivial twin.
    pub concentric: bool,
    /// With concentricity, all circles wind the same way along the chain.
    pub coherently_oriented: bool,
}

/// Full smoothing data, used by the move layer.
#[derive(Debug, Clone)]
pub struct Smoothing {
    /// Seifert circle id of every dart's edge (both darts agree).
    pub circle_of_dart: Vec<usize>,
    /// Number of circles through crossings (free circles not included).
    pub mapped_circles: usize,
}

/// The outward dart joined with inward dart `d` by the smoothing.
pub(crate) fn smoothed_partner(d: &Diagram, dart: DartId) -> DartId {
    debug_assert!(d.is_inward(dart));
    let next = d.rotation_next(dart);
    if d.is_inward(next) {
        // Other inward dart is counterclockwise-adjacent; join clockwise.
        let c = dart / 4;
        4 * c + (dart + 3) % 4
    } else {
        next
    }
}

pub fn smoothing(d: &Diagram) -> Smoothing {
    let mut circle_of_dart = vec![usize::MAX; d.dart_count()];
    let mut circles = 0usize;
    for start in 0..d.dart_count() {
        if !d.is_inward(start) || circle_of_dart[start] != usize::MAX {
            continue;
        }
        let id = circles;
        circles += 1;
        let mut dart = start;
        loop {
            let out = smoothed_partner(d, dart);
            circle_of_dart[dart] = id;
            circle_of_dart[out] = id;
            dart = d.opposite(out);
            if dart == start {
                break;
            }
        }
    }
    Smoothing { circle_of_dart, mapped_circles: circles }
}

/// Regions of the smoothed picture: diagram regions further merged across
/// each crossing's smoothing channel. Returns the region id per face.
fn smoothed_regions(d: &Diagram) -> Vec<usize> {
    let face_of = d.face_of();
    let base = d.region_of_face();
    let nfaces = d.faces().len();
    let mut uf = UnionFind::new(nfaces);
    for (face, &region) in base.iter().enumerate() {
        for (other, &r2) in base.iter().enumerate().skip(face + 1) {
            if region == r2 {
                uf.union(face, other);
            }
        }
    }
    for c in 0..d.crossing_count() {
        // Find the inward slot whose rotation successor is also inward.
        for s in 0..4 {
            let a = d.dart(c, s);
            let b = d.dart(c, s + 1);
            if d.is_inward(a) && d.is_inward(b) {
                // in-in corner between slots s,s+1 is the face of dart b;
                // out-out corner between slots s+2,s+3 is the face of s+3.
                let corner_in = face_of[b];
                let corner_out = face_of[d.dart(c, s + 3)];
                uf.union(corner_in, corner_out);
                break;
            }
        }
    }
    uf.compress()
}

pub fn seifert_smooth(d: &Diagram) -> SeifertFamily {
    let sm = smoothing(d);
    let circle_count = sm.mapped_circles + d.free_circles();
    if sm.mapped_circles == 0 {
        // Free circles alone can always be laid out concentrically and
        // oriented coherently; their position is not part of the diagram.
        return SeifertFamily { circle_count, concentric: true, coherently_oriented: true };
    }
    let regions = smoothed_regions(d);
    let face_of = d.face_of();
    let nregions = regions.iter().collect::<BTreeSet<_>>().len();

    // Each smoothed circle separates exactly two smoothed regions: the one
    // on its left (faces of inward darts along the flow) and on its right.
    let mut left = vec![usize::MAX; sm.mapped_circles];
    let mut right = vec![usize::MAX; sm.mapped_circles];
    let mut consistent = true;
    for dart in 0..d.dart_count() {
        let circle = sm.circle_of_dart[dart];
        let region = regions[face_of[dart]];
        let side = if d.is_inward(dart) { &mut left } else { &mut right };
        if side[circle] == usize::MAX {
            side[circle] = region;
        } else if side[circle] != region {
            consistent = false;
        }
    }
    if !consistent {
        return SeifertFamily { circle_count, concentric: false, coherently_oriented: false };
    }

    // Region adjacency along circles must be a path for concentricity:
    // degrees at most 2 and exactly one region more than circles (the graph
    // is a forest on the sphere, so this forces one path).
    let mut degree = vec![0usize; nregions];
    let mut separated = true;
    for c in 0..sm.mapped_circles {
        if left[c] == right[c] {
            separated = false;
            break;
        }
        degree[left[c]] += 1;
        degree[right[c]] += 1;
    }
    let concentric = separated
        && degree.iter().all(|&deg| deg <= 2)
        && sm.mapped_circles + 1 == nregions;
    if !concentric {
        return SeifertFamily { circle_count, concentric: false, coherently_oriented: false };
    }

    // Orient the chain from one end; coherent iff every circle's left side
    // faces the same end.
    let mut end = usize::MAX;
    for (r, &deg) in degree.iter().enumerate() {
        if deg == 1 {
            end = r;
            break;
        }
    }
    if end == usize::MAX {
        // Single circle or degenerate chain.
        return SeifertFamily { circle_count, concentric: true, coherently_oriented: true };
    }
    // Walk the chain, orienting regions by distance from `end`.
    let mut dist = vec![usize::MAX; nregions];
    dist[end] = 0;
    let mut frontier = vec![end];
    while let Some(r) = frontier.pop() {
        for c in 0..sm.mapped_circles {
            let (a, b) = (left[c], right[c]);
            let other = if a == r {
                b
            } else if b == r {
                a
            } else {
                continue;
            };
            if dist[other] == usize::MAX {
                dist[other] = dist[r] + 1;
                frontier.push(other);
            }
        }
    }
    if dist.iter().any(|&x| x == usize::MAX) {
        return SeifertFamily { circle_count, concentric: false, coherently_oriented: false };
    }
    let mut toward_end: Vec<bool> = Vec::with_capacity(sm.mapped_circles);
    for c in 0..sm.mapped_circles {
        toward_end.push(dist[left[c]] < dist[right[c]]);
    }
    let coherently_oriented = toward_end.iter().all(|&t| t) || toward_end.iter().all(|&t| !t);
    SeifertFamily { circle_count, concentric: true, coherently_oriented }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::closure;
    use crate::twinword::TwinWord;

    fn smooth_of(text: &str) -> SeifertFamily {
        seifert_smooth(&closure(&text.parse::<TwinWord>().unwrap()))
    }

    #[test]
    fn kink_smooths_to_two_concentric_circles() {
        let fam = smooth_of("tw 2: s1");
        assert_eq!(fam.circle_count, 2);
        assert!(fam.concentric);
        assert!(fam.coherently_oriented);
    }

    #[test]
    fn lens_smooths_to_two_concentric_circles() {
        let fam = smooth_of("tw 2: s1 s1");
        assert_eq!(fam.circle_count, 2);
        assert!(fam.concentric);
        assert!(fam.coherently_oriented);
    }

    #[test]
    fn closures_smooth_to_strand_count() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let len = if n == 1 { 0 } else { rng.gen_range(0..=10) };
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
            let word = TwinWord::new(n, letters).unwrap();
            let fam = seifert_smooth(&closure(&word));
            assert_eq!(fam.circle_count, n, "word {word}");
            assert!(fam.concentric, "word {word}");
            assert!(fam.coherently_oriented, "word {word}");
        }
    }

    #[test]
    fn smoothing_assigns_circles_to_all_darts() {
        let d = closure(&"tw 3: s1 s2 s1".parse::<TwinWord>().unwrap());
        let sm = smoothing(&d);
        assert!(sm.circle_of_dart.iter().all(|&c| c != usize::MAX));
        assert_eq!(sm.mapped_circles, 3);
    }
}
