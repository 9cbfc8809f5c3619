//! Closure of a twin word as a diagram on the sphere.
//!
//! The word is drawn as a braid-like sweep: strands run down columns
//! `1..=n`, letter `s_i` crosses columns `i` and `i+1`, and every column's
//! bottom endpoint is joined back to its top endpoint by an arc around the
//! right, nested innermost for the rightmost column. Crossing `k` is letter
//! `k` of the word; slots are `0 = NE`, `1 = NW`, `2 = SW`, `3 = SE`, which
//! is counterclockwise, with strands entering from the top (NE, NW inward).

use super::{DartId, Diagram};
use crate::twinword::TwinWord;

const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// Build the closure of `w`. Crossing count equals the letter count of the
/// word as written; columns untouched by any letter close into free circles.
pub fn closure(w: &TwinWord) -> Diagram {
    let n = w.strands();
    let letters = w.letters();
    let ndarts = 4 * letters.len();
    let mut opposite = vec![usize::MAX; ndarts];
    let mut inward = vec![false; ndarts];
    let pair = |opposite: &mut Vec<DartId>, a: DartId, b: DartId| {
        opposite[a] = b;
        opposite[b] = a;
    };

    // Per column: the first inward dart at the top, and the dangling
    // outward dart at the bottom of the part built so far.
    let mut first_in: Vec<Option<DartId>> = vec![None; n + 1];
    let mut dangling: Vec<Option<DartId>> = vec![None; n + 1];

    for (k, &l) in letters.iter().enumerate() {
        let base = 4 * k;
        inward[base + NE] = true;
        inward[base + NW] = true;
        // Left column i enters at NW and continues below at SW; right
        // column i+1 enters at NE and continues at SE.
        for (col, top_slot, bottom_slot) in [(l, NW, SW), (l + 1, NE, SE)] {
            let top = base + top_slot;
            match dangling[col] {
                Some(d) => pair(&mut opposite, d, top),
                None => first_in[col] = Some(top),
            }
            dangling[col] = Some(base + bottom_slot);
        }
    }

    let mut free_circles = 0usize;
    for col in 1..=n {
        match (first_in[col], dangling[col]) {
            (Some(fi), Some(dg)) => pair(&mut opposite, dg, fi),
            (None, None) => free_circles += 1,
            _ => unreachable!("column opened but never closed"),
        }
    }

    // Blocks of consecutive columns linked by letters; consecutive blocks
    // nest along the closure arcs, merging the right channel of one block
    // with the outer left face of the next.
    let mut linked = vec![false; n + 1];
    for &l in letters {
        linked[l] = true; // columns l and l+1 are joined
    }
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut col = 1;
    while col <= n {
        if col < n && linked[col] {
            let start = col;
            while col < n && linked[col] {
                col += 1;
            }
            blocks.push((start, col));
        }
        col += 1;
    }
    let mut merges = Vec::new();
    for pair_of_blocks in blocks.windows(2) {
        let (_, right_col) = pair_of_blocks[0];
        let (left_col, _) = pair_of_blocks[1];
        let channel = first_in[right_col].expect("linked column has a crossing");
        let outer = dangling[left_col].expect("linked column has a crossing");
        merges.push(vec![channel, outer]);
    }

    Diagram::from_parts(opposite, inward, free_circles, merges, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> TwinWord {
        text.parse().unwrap()
    }

    #[test]
    fn trivial_closure_is_free_circles() {
        let d = closure(&w("tw 3:"));
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_circles(), 3);
        assert_eq!(d.components(), 3);
    }

    #[test]
    fn single_generator_closure() {
        let d = closure(&w("tw 2: s1"));
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.components(), 1);
        assert_eq!(d.free_circles(), 0);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn closure_uses_word_as_written() {
        // s1 s1 is trivial in the group but its closure has 2 crossings.
        let d = closure(&w("tw 2: s1 s1"));
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.components(), 2);
    }

    #[test]
    fn untouched_strands_become_free_circles() {
        let d = closure(&w("tw 4: s1"));
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.free_circles(), 2);
        assert_eq!(d.components(), 3);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn every_closure_validates() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let len = if n == 1 { 0 } else { rng.gen_range(0..=12) };
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
            let word = TwinWord::new(n, letters).unwrap();
            let d = closure(&word);
            assert!(d.validate().is_empty(), "word {word}: {:?}", d.validate());
            assert_eq!(d.components(), word.permutation().cycle_count());
        }
    }
}
