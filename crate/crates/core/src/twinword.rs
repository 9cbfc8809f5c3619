//! Words in the twin group `TW_n`.
//!
//! `TW_n` is generated by involutions `s_1, ..., s_{n-1}` where `s_i` and
//! `s_j` commute whenever `|i - j| > 1`. There is no braid relation, so the
//! word problem is solved by deleting cancelling pairs to exhaustion and then
//! sorting the surviving geodesic into its shortlex-least representative
//! using the allowed commutations.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("letter s{letter} out of range for {strands} strands (need 1 <= k <= {})", strands - 1)]
    LetterOutOfRange { letter: usize, strands: usize },
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("strand count must be at least 1")]
    ZeroStrands,
}

/// An element of `TW_n`, stored as a raw generator sequence.
///
/// The leftmost letter is the topmost elementary diagram; products stack the
/// left factor on top. Values are immutable; all operations return new words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwinWord {
    strands: usize,
    letters: Vec<usize>,
}

impl TwinWord {
    pub fn new(strands: usize, letters: Vec<usize>) -> Result<Self, WordError> {
        if strands == 0 {
            return Err(WordError::ZeroStrands);
        }
        for &l in &letters {
            if l == 0 || l > strands - 1 {
                return Err(WordError::LetterOutOfRange { letter: l, strands });
            }
        }
        Ok(TwinWord { strands, letters })
    }

    /// The empty word on `strands` strands.
    pub fn identity(strands: usize) -> Self {
        TwinWord { strands: strands.max(1), letters: Vec::new() }
    }

    /// Single generator `s_k` in `TW_n`.
    pub fn generator(strands: usize, k: usize) -> Result<Self, WordError> {
        Self::new(strands, vec![k])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation; `self` is stacked on top of `rhs`. No normalization.
    pub fn multiply(&self, rhs: &TwinWord) -> Result<TwinWord, WordError> {
        if self.strands != rhs.strands {
            return Err(WordError::StrandMismatch { left: self.strands, right: rhs.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        Ok(TwinWord { strands: self.strands, letters })
    }

    /// Reversal. Every generator is an involution, so this inverts the word.
    pub fn inverse(&self) -> TwinWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        TwinWord { strands: self.strands, letters }
    }

    /// Juxtaposition: `self` keeps its indices (left block), `rhs` shifts by
    /// `self.strands`.
    pub fn tensor(&self, rhs: &TwinWord) -> TwinWord {
        let strands = self.strands + rhs.strands;
        let mut letters = self.letters.clone();
        letters.extend(rhs.letters.iter().map(|l| l + self.strands));
        TwinWord { strands, letters }
    }

    /// Shift every letter by `delta` and adjust the strand count; used for
    /// block swaps. Callers guarantee the result stays in range.
    pub(crate) fn shifted(&self, delta: isize, strands: usize) -> TwinWord {
        let letters = self
            .letters
            .iter()
            .map(|&l| (l as isize + delta) as usize)
            .collect();
        TwinWord { strands, letters }
    }

    /// The underlying permutation: transpositions `(i, i+1)` applied in
    /// letter order, top to bottom.
    pub fn permutation(&self) -> StrandPermutation {
        let mut images: Vec<usize> = (0..self.strands).collect();
        // images[p] = current bottom position of the strand entering at top p
        for &l in &self.letters {
            for img in images.iter_mut() {
                if *img == l - 1 {
                    *img = l;
                } else if *img == l {
                    *img = l - 1;
                }
            }
        }
        StrandPermutation { images }
    }

    /// Shortlex-least representative of the equivalence class.
    pub fn normal_form(&self) -> TwinWord {
        let mut w = self.letters.clone();
        // Delete s_i .. s_i pairs whose gap commutes with s_i, to exhaustion.
        'scan: loop {
            for p in 0..w.len() {
                let g = w[p];
                for q in p + 1..w.len() {
                    if w[q] == g {
                        w.remove(q);
                        w.remove(p);
                        continue 'scan;
                    }
                    if w[q].abs_diff(g) == 1 {
                        break; // blocked; s_g cannot move past this letter
                    }
                }
            }
            break;
        }
        // Lex-least linearization of the commutation class: repeatedly take
        // the smallest letter all of whose earlier letters commute with it.
        let mut remaining = w;
        let mut out = Vec::with_capacity(remaining.len());
        while !remaining.is_empty() {
            let mut best: Option<(usize, usize)> = None;
            for (i, &g) in remaining.iter().enumerate() {
                if remaining[..i].iter().all(|&h| h.abs_diff(g) >= 2) {
                    if best.map_or(true, |(bg, _)| g < bg) {
                        best = Some((g, i));
                    }
                }
            }
            let (g, i) = best.expect("nonempty word has an available letter");
            out.push(g);
            remaining.remove(i);
        }
        TwinWord { strands: self.strands, letters: out }
    }

    /// True iff both words represent the same element of `TW_n`.
    pub fn equal(&self, rhs: &TwinWord) -> Result<bool, WordError> {
        if self.strands != rhs.strands {
            return Err(WordError::StrandMismatch { left: self.strands, right: rhs.strands });
        }
        Ok(self.normal_form().letters == rhs.normal_form().letters)
    }
}

impl fmt::Display for TwinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tw {}:", self.strands)?;
        for l in &self.letters {
            write!(f, " s{l}")?;
        }
        Ok(())
    }
}

impl FromStr for TwinWord {
    type Err = WordError;

    /// Grammar: `"tw" <n> ":" (s<k>)*`, whitespace separated.
    fn from_str(text: &str) -> Result<Self, WordError> {
        let syntax = |position: usize, message: &str| WordError::Syntax {
            position,
            message: message.to_string(),
        };
        let mut rest = text;
        let mut offset = 0usize;
        let eat_ws = |rest: &mut &str, offset: &mut usize| {
            let trimmed = rest.trim_start();
            *offset += rest.len() - trimmed.len();
            *rest = trimmed;
        };
        eat_ws(&mut rest, &mut offset);
        if let Some(r) = rest.strip_prefix("tw") {
            offset += 2;
            rest = r;
        } else {
            return Err(syntax(offset, "expected keyword `tw`"));
        }
        eat_ws(&mut rest, &mut offset);
        let num_len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if num_len == 0 {
            return Err(syntax(offset, "expected strand count"));
        }
        let strands: usize = rest[..num_len]
            .parse()
            .map_err(|_| syntax(offset, "strand count out of range"))?;
        if strands == 0 {
            return Err(syntax(offset, "strand count must be at least 1"));
        }
        offset += num_len;
        rest = &rest[num_len..];
        eat_ws(&mut rest, &mut offset);
        if let Some(r) = rest.strip_prefix(':') {
            offset += 1;
            rest = r;
        } else {
            return Err(syntax(offset, "expected `:`"));
        }
        let mut letters = Vec::new();
        loop {
            eat_ws(&mut rest, &mut offset);
            if rest.is_empty() {
                break;
            }
            if let Some(r) = rest.strip_prefix('s') {
                offset += 1;
                rest = r;
            } else {
                return Err(syntax(offset, "expected generator `s<k>`"));
            }
            let num_len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
            if num_len == 0 {
                return Err(syntax(offset, "expected generator index"));
            }
            let k: usize = rest[..num_len]
                .parse()
                .map_err(|_| syntax(offset, "generator index out of range"))?;
            offset += num_len;
            rest = &rest[num_len..];
            if k == 0 || k > strands - 1 {
                return Err(WordError::LetterOutOfRange { letter: k, strands });
            }
            letters.push(k);
        }
        TwinWord::new(strands, letters)
    }
}

/// A bijection of `{1, ..., n}` recording where each strand ends up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandPermutation {
    images: Vec<usize>, // 0-based: strand at top position p exits at images[p]
}

impl StrandPermutation {
    pub fn identity(n: usize) -> Self {
        StrandPermutation { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of 1-based position `p`.
    pub fn image(&self, p: usize) -> usize {
        self.images[p - 1] + 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self` followed by `rhs` (apply `self` first).
    pub fn then(&self, rhs: &StrandPermutation) -> StrandPermutation {
        let images = self.images.iter().map(|&v| rhs.images[v]).collect();
        StrandPermutation { images }
    }

    /// Number of cycles, counting fixed points.
    pub fn cycle_count(&self) -> usize {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
            }
        }
        cycles
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn w(text: &str) -> TwinWord {
        text.parse().expect("test word parses")
    }

    #[test]
    fn parse_basic() {
        let word = w("tw 3: s1 s2 s1");
        assert_eq!(word.strands(), 3);
        assert_eq!(word.letters(), &[1, 2, 1]);
    }

    #[test]
    fn parse_empty_word() {
        let word = w("tw 1:");
        assert_eq!(word.strands(), 1);
        assert!(word.is_empty());
    }

    #[test]
    fn parse_rejects_out_of_range_letter() {
        let err = "tw 2: s2".parse::<TwinWord>().unwrap_err();
        assert_eq!(err, WordError::LetterOutOfRange { letter: 2, strands: 2 });
    }

    #[test]
    fn parse_reports_syntax_position() {
        match "tw 3 s1".parse::<TwinWord>().unwrap_err() {
            WordError::Syntax { position, .. } => assert_eq!(position, 5),
            other => panic!("unexpected: {other:?}"),
        }
        assert!("braid 3:".parse::<TwinWord>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["tw 3: s1 s2 s1", "tw 1:", "tw 5: s4"] {
            let word = w(text);
            assert_eq!(word.to_string(), text);
            assert_eq!(w(&word.to_string()), word);
        }
    }

    #[test]
    fn involution_cancels() {
        let word = w("tw 2: s1 s1");
        assert!(word.normal_form().is_empty());
    }

    #[test]
    fn distant_generators_sort() {
        let word = w("tw 4: s3 s1");
        assert_eq!(word.normal_form().letters(), &[1, 3]);
    }

    #[test]
    fn no_braid_relation() {
        // s1 s2 s1 is already geodesic and shortlex-least; the BFS oracle
        // over all rewrites agrees.
        let word = w("tw 3: s1 s2 s1");
        assert_eq!(word.normal_form(), word);
        assert_eq!(oracle::word_normal_form(&word), word);
    }

    #[test]
    fn multiply_concatenates() {
        let a = w("tw 3: s1");
        let b = w("tw 3: s2");
        assert_eq!(a.multiply(&b).unwrap().letters(), &[1, 2]);
        let e = TwinWord::identity(3);
        assert_eq!(e.multiply(&b).unwrap(), b);
        let sq = a.multiply(&a).unwrap();
        assert_eq!(sq.letters(), &[1, 1]);
        assert!(sq.normal_form().is_empty());
        assert!(a.multiply(&w("tw 2: s1")).is_err());
    }

    #[test]
    fn inverse_reverses() {
        assert_eq!(w("tw 3: s1 s2 s1").inverse(), w("tw 3: s1 s2 s1"));
        assert_eq!(w("tw 3: s1 s2").inverse(), w("tw 3: s2 s1"));
    }

    #[test]
    fn tensor_shifts_right_block() {
        let i = TwinWord::identity(1);
        let s1_tw2 = w("tw 2: s1");
        assert_eq!(i.tensor(&s1_tw2), w("tw 3: s2"));
        assert_eq!(s1_tw2.tensor(&i), w("tw 3: s1"));
        assert_eq!(
            TwinWord::identity(2).tensor(&TwinWord::identity(3)),
            TwinWord::identity(5)
        );
    }

    #[test]
    fn permutation_examples() {
        assert!(TwinWord::identity(3).permutation().is_identity());
        let p = w("tw 2: s1").permutation();
        assert_eq!(p.image(1), 2);
        assert_eq!(p.image(2), 1);
        assert_eq!(p.cycle_count(), 1);
        // s1 s2 is a 3-cycle: one closure component.
        assert_eq!(w("tw 3: s1 s2").permutation().cycle_count(), 1);
        assert_eq!(w("tw 3: s1 s2 s1").permutation().cycle_count(), 2);
    }

    #[test]
    fn equal_examples() {
        assert!(w("tw 4: s1 s3").equal(&w("tw 4: s3 s1")).unwrap());
        assert!(!w("tw 3: s1 s2").equal(&w("tw 3: s2 s1")).unwrap());
        assert!(TwinWord::identity(2).equal(&w("tw 2: s1 s1")).unwrap());
        assert!(w("tw 2: s1").equal(&w("tw 3: s1")).is_err());
    }

    #[test]
    fn involution_exhaustive_small() {
        for n in 2..=8 {
            for i in 1..n {
                let word = TwinWord::new(n, vec![i, i]).unwrap();
                assert!(word.normal_form().is_empty(), "s{i}^2 in TW_{n}");
            }
        }
    }

    #[test]
    fn commutation_matches_oracle() {
        for n in [3, 4, 5] {
            for i in 1..n {
                for j in 1..n {
                    if i == j {
                        continue;
                    }
                    let a = TwinWord::new(n, vec![i, j]).unwrap();
                    let b = TwinWord::new(n, vec![j, i]).unwrap();
                    let expect = i.abs_diff(j) > 1;
                    assert_eq!(a.equal(&b).unwrap(), expect);
                    assert_eq!(
                        oracle::word_normal_form(&a) == oracle::word_normal_form(&b),
                        expect
                    );
                }
            }
        }
    }

    #[test]
    fn permutation_is_homomorphism() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let len = rng.gen_range(0..=8);
                let letters = (0..len).map(|_| rng.gen_range(1..n)).collect();
                TwinWord::new(n, letters).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let ab = a.multiply(&b).unwrap();
            assert_eq!(ab.permutation(), a.permutation().then(&b.permutation()));
            assert_eq!(a.permutation(), a.normal_form().permutation());
        }
    }

    #[test]
    fn normal_form_idempotent_and_geodesic() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let n = rng.gen_range(2..=5);
            let len = rng.gen_range(0..=7);
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
            let word = TwinWord::new(n, letters).unwrap();
            let nf = word.normal_form();
            assert_eq!(nf.normal_form(), nf);
            assert_eq!(nf, oracle::word_normal_form(&word), "word {word}");
        }
    }

    #[test]
    fn inverse_property_random() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let len = if n == 1 { 0 } else { rng.gen_range(0..=10) };
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
            let word = TwinWord::new(n, letters).unwrap();
            let prod = word.multiply(&word.inverse()).unwrap();
            assert!(prod.normal_form().is_empty());
        }
    }

    #[test]
    fn tensor_associative_up_to_normal_form() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        for _ in 0..100 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(1..=4);
                let len = if n == 1 { 0 } else { rng.gen_range(0..=4) };
                let letters = (0..len).map(|_| rng.gen_range(1..n)).collect();
                TwinWord::new(n, letters).unwrap()
            };
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let left = a.tensor(&b).tensor(&c);
            let right = a.tensor(&b.tensor(&c));
            assert_eq!(left.normal_form(), right.normal_form());
        }
    }
}
