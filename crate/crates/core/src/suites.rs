//! Named property suites behind the `selftest` command.
//!
//! Each suite packages the checkable statements of one layer — word
//! algebra, diagram structure, moves, word-level moves — behind a common
//! trait, registered by name and selected at runtime. Sample sizes here
//! are sized for a quick self-check; the acceptance test suite runs the
//! full-scale versions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::diagram::{closure, Diagram};
use crate::markov;
use crate::moves;
use crate::oracle;
use crate::twinword::TwinWord;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&format!(
                "[{}] {}/{} — {}\n",
                if check.passed { "pass" } else { "FAIL" },
                self.suite,
                check.name,
                check.detail
            ));
        }
        out
    }
}

struct Checker {
    suite: &'static str,
    checks: Vec<CheckResult>,
}

impl Checker {
    fn new(suite: &'static str) -> Self {
        Checker { suite, checks: Vec::new() }
    }

    fn check(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(CheckResult { name, passed, detail });
    }

    fn finish(self) -> SuiteReport {
        SuiteReport { suite: self.suite, checks: self.checks }
    }
}

/// A property suite: one coherent batch of checks, selectable by name.
pub trait Suite {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self) -> SuiteReport;
}

/// Every registered suite, in execution order.
pub fn registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(TwinwordSuite),
        Box::new(DiagramSuite),
        Box::new(MovesSuite),
        Box::new(MarkovSuite),
    ]
}

pub fn find_suite(name: &str) -> Option<Box<dyn Suite>> {
    registry().into_iter().find(|s| s.name() == name)
}

fn random_word(rng: &mut ChaCha8Rng, n_max: usize, len_max: usize) -> TwinWord {
    corpus::random_word(rng, n_max, len_max)
}

struct TwinwordSuite;

impl Suite for TwinwordSuite {
    fn name(&self) -> &'static str {
        "twinword"
    }

    fn description(&self) -> &'static str {
        "word problem: involutions, commutation, normal form vs rewrite oracle"
    }

    fn run(&self) -> SuiteReport {
        let mut c = Checker::new("twinword");
        let mut rng = ChaCha8Rng::seed_from_u64(0xA1);

        let mut ok = true;
        for n in 2..=8 {
            for i in 1..n {
                ok &= TwinWord::new(n, vec![i, i]).unwrap().normal_form().is_empty();
            }
        }
        c.check("involution", ok, "s_i^2 = e for all generators, n <= 8".into());

        let mut ok = true;
        for n in [3usize, 4, 5] {
            for i in 1..n {
                for j in 1..n {
                    if i == j {
                        continue;
                    }
                    let a = TwinWord::new(n, vec![i, j]).unwrap();
                    let b = TwinWord::new(n, vec![j, i]).unwrap();
                    let expect = i.abs_diff(j) > 1;
                    ok &= a.equal(&b).unwrap() == expect;
                    ok &= oracle::words_equal(&a, &b) == expect;
                }
            }
        }
        c.check(
            "distant-commutation",
            ok,
            "s_i s_j = s_j s_i exactly when |i-j| > 1, against the rewrite oracle".into(),
        );

        let mut mismatches = 0usize;
        let mut total = 0usize;
        for w in markov::enumerate_words(&[4], 4) {
            total += 1;
            if w.normal_form() != oracle::word_normal_form(&w) {
                mismatches += 1;
            }
        }
        c.check(
            "normal-form-vs-oracle",
            mismatches == 0,
            format!("{total} words of TW_4 up to 4 letters, {mismatches} disagreements"),
        );

        let mut ok = true;
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let a = random_word(&mut rng, n, 8);
            let a = TwinWord::new(n, a.letters().to_vec()).unwrap_or_else(|_| TwinWord::identity(n));
            let b = random_word(&mut rng, n, 8);
            let b = TwinWord::new(n, b.letters().to_vec()).unwrap_or_else(|_| TwinWord::identity(n));
            if a.strands() == b.strands() {
                let ab = a.multiply(&b).unwrap();
                ok &= ab.permutation() == a.permutation().then(&b.permutation());
            }
            ok &= a.permutation() == a.normal_form().permutation();
            let prod = a.multiply(&a.inverse()).unwrap();
            ok &= prod.normal_form().is_empty();
        }
        c.check(
            "permutation-homomorphism-and-inverse",
            ok,
            "products map to composed permutations; w·w⁻¹ normalizes to the identity".into(),
        );

        let mut ok = true;
        for _ in 0..100 {
            let a = random_word(&mut rng, 3, 4);
            let b = random_word(&mut rng, 3, 4);
            let t3 = random_word(&mut rng, 3, 4);
            let left = a.tensor(&b).tensor(&t3);
            let right = a.tensor(&b.tensor(&t3));
            ok &= left.normal_form() == right.normal_form();
        }
        c.check("tensor-associativity", ok, "100 random triples".into());

        c.finish()
    }
}

struct DiagramSuite;

impl Suite for DiagramSuite {
    fn name(&self) -> &'static str {
        "diagram"
    }

    fn description(&self) -> &'static str {
        "map structure: validation, smoothing concentricity, canonical code stability"
    }

    fn run(&self) -> SuiteReport {
        let mut c = Checker::new("diagram");
        let mut rng = ChaCha8Rng::seed_from_u64(0xA2);

        let mut ok = true;
        let mut components_ok = true;
        for _ in 0..200 {
            let w = random_word(&mut rng, 5, 10);
            let d = closure(&w);
            ok &= d.validate().is_empty();
            components_ok &= d.components() == w.permutation().cycle_count();
        }
        c.check("closure-validates", ok, "200 random closures pass every invariant".into());
        c.check(
            "components-equal-permutation-cycles",
            components_ok,
            "closure component count matches cycle count".into(),
        );

        let mut ok = true;
        for _ in 0..200 {
            let w = random_word(&mut rng, 5, 10);
            let fam = closure(&w).seifert_smooth();
            ok &= fam.circle_count == w.strands() && fam.concentric && fam.coherently_oriented;
        }
        c.check(
            "smoothing-concentric",
            ok,
            "random closures smooth to strand-many concentric coherent circles".into(),
        );

        use rand::seq::SliceRandom;
        let mut ok = true;
        for _ in 0..100 {
            let w = random_word(&mut rng, 4, 8);
            let d = closure(&w);
            let code = d.canonical_code();
            for _ in 0..10 {
                let mut perm: Vec<usize> = (0..d.crossing_count()).collect();
                perm.shuffle(&mut rng);
                let shifts: Vec<usize> =
                    (0..d.crossing_count()).map(|_| rng.gen_range(0..4)).collect();
                ok &= d.relabelled(&perm, &shifts).canonical_code() == code;
            }
        }
        c.check(
            "code-stability",
            ok,
            "100 diagrams x 10 relabelings keep one canonical code".into(),
        );

        let mut ok = true;
        for text in ["tw 2: s1", "tw 3: s1 s2 s1", "tw 5: s1 s1 s4 s4", "tw 4:"] {
            let d = closure(&text.parse::<TwinWord>().unwrap());
            let json = crate::diagram::write_diagram(&d);
            match crate::diagram::read_diagram(&json) {
                Ok(back) => ok &= back.canonical_code() == d.canonical_code(),
                Err(_) => ok = false,
            }
        }
        c.check("file-round-trip", ok, "diagram files reload to the same code".into());

        c.finish()
    }
}

struct MovesSuite;

impl Suite for MovesSuite {
    fn name(&self) -> &'static str {
        "moves"
    }

    fn description(&self) -> &'static str {
        "bigon bounds, tightening persistence and conservation, reduction confluence"
    }

    fn run(&self) -> SuiteReport {
        let mut c = Checker::new("moves");
        let mut rng = ChaCha8Rng::seed_from_u64(0xA3);

        let mut worst = 0usize;
        let mut ok = true;
        for _ in 0..200 {
            let item = corpus::random_annular_item(&mut rng, 5, 8, 3);
            let irregular = moves::find_bigons(&item.diagram)
                .iter()
                .filter(|b| b.kind == moves::BigonKind::Irregular)
                .count();
            worst = worst.max(irregular);
            ok &= irregular <= 2;
        }
        c.check(
            "irregular-bigon-bound",
            ok,
            format!("200 annular diagrams, at most {worst} irregular bigons each"),
        );

        let (ok, cases) = tightenings_never_create_regular_bigons(&mut rng, 50);
        c.check(
            "tightening-persistence",
            ok,
            format!("{cases} tightening sequences created no regular bigon"),
        );

        let (ok, cases) = tightening_preserves_seifert_count(&mut rng, 50);
        c.check(
            "tightening-conservation",
            ok,
            format!("{cases} generalized tightenings preserved the Seifert circle count"),
        );

        let (ok, cases) = bendings_group_into_two_lenses(&mut rng, 40);
        c.check(
            "bending-decomposition",
            ok,
            format!("{cases} recorded bending sets grouped into at most two lenses"),
        );

        let (ok, cases) = rebending_is_reproducible(&mut rng, 40);
        c.check(
            "rebending-unique",
            ok,
            format!("{cases} rebent minimal diagrams agreed bit-for-bit and by code"),
        );

        let mut ok = true;
        for _ in 0..30 {
            let item = corpus::random_annular_item(&mut rng, 4, 8, 2);
            let code = moves::reduce_minimal(&item.diagram, moves::OrderPolicy::Deterministic)
                .canonical_code();
            for seed in 0..10 {
                let r = moves::reduce_minimal(&item.diagram, moves::OrderPolicy::Seeded(seed));
                ok &= r.canonical_code() == code;
            }
        }
        c.check("reduction-confluence", ok, "30 diagrams x 10 seeded orders, one code".into());

        let (ok, detail) = crossing_deltas_exact(&mut rng);
        c.check("crossing-deltas", ok, detail);

        c.finish()
    }
}

pub fn strip_regular_bigons(start: &Diagram) -> Diagram {
    let mut d = start.clone();
    loop {
        let site = moves::find_bigons(&d)
            .into_iter()
            .find(|b| b.kind == moves::BigonKind::Regular);
        match site {
            Some(b) => d = moves::apply_r2_remove(&d, &b).expect("fresh site"),
            None => return d,
        }
    }
}

/// Random tightening sequences starting from diagrams with no regular
/// bigons; returns whether no regular bigon ever appeared.
pub fn tightenings_never_create_regular_bigons(
    rng: &mut ChaCha8Rng,
    cases: usize,
) -> (bool, usize) {
    let mut done = 0usize;
    let mut ok = true;
    while done < cases {
        let item = corpus::random_annular_item(rng, 5, 8, 3);
        let mut d = strip_regular_bigons(&item.diagram);
        done += 1;
        loop {
            let irregular: Vec<moves::Bigon> = moves::find_bigons(&d)
                .into_iter()
                .filter(|b| b.kind == moves::BigonKind::Irregular)
                .collect();
            if irregular.is_empty() {
                break;
            }
            let site = irregular[rng.gen_range(0..irregular.len())];
            d = moves::apply_r2_remove(&d, &site).expect("fresh site");
            let regular = moves::find_bigons(&d)
                .iter()
                .filter(|b| b.kind == moves::BigonKind::Regular)
                .count();
            if regular > 0 {
                ok = false;
                break;
            }
        }
    }
    (ok, done)
}

/// Generalized tightenings on annular corpus diagrams preserve the Seifert
/// circle count.
pub fn tightening_preserves_seifert_count(rng: &mut ChaCha8Rng, cases: usize) -> (bool, usize) {
    let mut done = 0usize;
    let mut ok = true;
    let mut guard = 0usize;
    while done < cases && guard < cases * 50 {
        guard += 1;
        let item = corpus::random_annular_item(rng, 5, 8, 3);
        let lenses = moves::find_generalized_biangles(&item.diagram);
        if lenses.is_empty() {
            continue;
        }
        let g = &lenses[rng.gen_range(0..lenses.len())];
        let before = item.diagram.seifert_smooth().circle_count;
        let after = moves::apply_generalized_tightening(&item.diagram, g)
            .expect("fresh lens")
            .seifert_smooth()
            .circle_count;
        ok &= before == after;
        done += 1;
    }
    (ok && done == cases, done)
}

/// Corpus diagrams built as a minimal diagram plus recorded bendings: the
/// recorded crossings group into at most two generalized biangles of the
/// final diagram, confirmed by replaying the recording.
pub fn bendings_group_into_two_lenses(rng: &mut ChaCha8Rng, cases: usize) -> (bool, usize) {
    let mut done = 0usize;
    let mut ok = true;
    let mut guard = 0usize;
    while done < cases && guard < cases * 50 {
        guard += 1;
        let base = corpus::random_annular_item(rng, 4, 6, 0);
        let minimal = moves::reduce_minimal(&base.diagram, moves::OrderPolicy::Deterministic);
        // Record bendings on the minimal diagram.
        let mut d = minimal.clone();
        let mut recorded: Vec<[usize; 2]> = Vec::new();
        for _ in 0..rng.gen_range(1..=3usize) {
            let sites = corpus::bending_sites(&d);
            if sites.is_empty() {
                break;
            }
            let mut placed = false;
            for _ in 0..8 {
                let site = &sites[rng.gen_range(0..sites.len())];
                let at = d.crossing_count();
                if let Ok((next, _)) = corpus::apply_bend(&d, site) {
                    if next.validate().is_empty() && corpus::passes_annular_check(&next) {
                        recorded.push([at, at + 1]);
                        d = next;
                        placed = true;
                        break;
                    }
                }
            }
            if !placed {
                break;
            }
        }
        if recorded.is_empty() {
            continue;
        }
        done += 1;
        let lenses = moves::find_generalized_biangles(&d);
        let mut used: Vec<&std::collections::BTreeSet<usize>> = Vec::new();
        for pair in &recorded {
            match lenses
                .iter()
                .find(|g| g.crossings.contains(&pair[0]) && g.crossings.contains(&pair[1]))
            {
                Some(g) => {
                    if !used.iter().any(|s| **s == g.crossings) {
                        used.push(&g.crossings);
                    }
                }
                None => {
                    ok = false;
                }
            }
        }
        ok &= used.len() <= 2;
    }
    (ok && done == cases, done)
}

/// The same generalized bending applied twice to a reduced diagram gives
/// bit-identical results, and rebending after reduction under different
/// orders lands on one canonical code.
pub fn rebending_is_reproducible(rng: &mut ChaCha8Rng, cases: usize) -> (bool, usize) {
    let mut done = 0usize;
    let mut ok = true;
    let mut guard = 0usize;
    while done < cases && guard < cases * 50 {
        guard += 1;
        let item = corpus::random_annular_item(rng, 5, 8, 2);
        let m1 = moves::reduce_minimal(&item.diagram, moves::OrderPolicy::Seeded(1));
        let m2 = moves::reduce_minimal(&item.diagram, moves::OrderPolicy::Seeded(2));
        if m1.canonical_code() != m2.canonical_code() {
            ok = false;
        }
        if m1.free_circles() < 2 || m1.crossing_count() != 0 {
            continue;
        }
        done += 1;
        let k = rng.gen_range(1..m1.free_circles());
        let l = rng.gen_range(1..=(m1.free_circles() - k));
        let bend = |m: &Diagram| {
            moves::apply_generalized_bending(
                m,
                &moves::BundleSpec::FreeCircles(k),
                &moves::BundleSpec::FreeCircles(l),
                None,
            )
            .expect("free-circle bundles are applicable")
        };
        let d1 = bend(&m1);
        let d2 = bend(&m2);
        ok &= d1 == d2;
        ok &= d1.canonical_code() == d2.canonical_code();
        ok &= moves::equivalent_doodles(&d1, &item.diagram);
    }
    (ok && done == cases, done)
}

fn crossing_deltas_exact(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut ok = true;
    let mut r1 = 0usize;
    let mut r2m = 0usize;
    let mut r2a = 0usize;
    let mut gt = 0usize;
    for _ in 0..200 {
        let item = corpus::random_annular_item(rng, 4, 8, 1);
        let d = &item.diagram;
        if let Some(m) = moves::find_monogons(d).first() {
            let next = moves::apply_r1(d, m).expect("fresh site");
            ok &= next.crossing_count() + 1 == d.crossing_count();
            r1 += 1;
        }
        if let Some(b) = moves::find_bigons(d).first() {
            let next = moves::apply_r2_remove(d, b).expect("fresh site");
            ok &= next.crossing_count() + 2 == d.crossing_count();
            r2m += 1;
        }
        if let Some((p, q)) = moves::r2_add_sites(d).first() {
            let (next, _) = moves::apply_r2_add(d, *p, *q).expect("fresh site");
            ok &= next.crossing_count() == d.crossing_count() + 2;
            r2a += 1;
        }
        if let Some(g) = moves::find_generalized_biangles(d).first() {
            let next = moves::apply_generalized_tightening(d, g).expect("fresh lens");
            ok &= next.crossing_count() + 2 * g.k() * g.l() == d.crossing_count();
            gt += 1;
        }
    }
    (
        ok,
        format!("R1 x{r1} (-1), R2- x{r2m} (-2), R2+ x{r2a} (+2), GT x{gt} (-2kl), all exact"),
    )
}

struct MarkovSuite;

impl Suite for MarkovSuite {
    fn name(&self) -> &'static str {
        "markov"
    }

    fn description(&self) -> &'static str {
        "move closure invariance, stabilization bookkeeping, bounded search soundness"
    }

    fn run(&self) -> SuiteReport {
        let mut c = Checker::new("markov");
        let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
        let caps = markov::SearchCaps { max_strands: 4, max_depth: 6, conjugator_cap: 2 };

        let mut ok = true;
        for _ in 0..100 {
            let beta = markov::random_word(&mut rng, 3, 5);
            let mut word = beta.clone();
            for _ in 0..rng.gen_range(0..=3usize) {
                match markov::random_move(&mut rng, &word, &caps) {
                    Some(mv) => word = markov::apply_move(&word, &mv).expect("applicable"),
                    None => break,
                }
            }
            ok &= moves::equivalent_doodles(&closure(&beta), &closure(&word));
        }
        c.check(
            "closure-invariance",
            ok,
            "100 random move sequences preserved the closure's doodle".into(),
        );

        let mut ok = true;
        for _ in 0..100 {
            let beta = markov::random_word(&mut rng, 4, 6);
            let n = beta.strands();
            let i = rng.gen_range(1..=n);
            ok &= markov::apply_m3(&beta, i).unwrap().len() == beta.len() + 2 * i - 1;
            ok &= markov::apply_m4(&beta, i).unwrap().len() == beta.len() + 2 * (n - i) + 1;
        }
        c.check("stabilization-lengths", ok, "M3: +2i-1 letters, M4: +2(n-i)+1, exact".into());

        let mut ok = true;
        for _ in 0..100 {
            let beta = markov::random_word(&mut rng, 3, 4);
            let i = rng.gen_range(1..=beta.strands());
            let m3 = markov::apply_m3(&beta, i).unwrap();
            ok &= markov::detect_inverse_m3_m4(&m3).iter().any(|s| {
                s.kind == markov::InverseKind::M3
                    && s.index == i
                    && s.beta.equal(&beta).unwrap_or(false)
            });
            let m4 = markov::apply_m4(&beta, i).unwrap();
            ok &= markov::detect_inverse_m3_m4(&m4).iter().any(|s| {
                s.kind == markov::InverseKind::M4
                    && s.index == i
                    && s.beta.equal(&beta).unwrap_or(false)
            });
        }
        c.check("stabilization-roundtrip", ok, "inverse detection recovers (β, i)".into());

        let mut ok = true;
        for text in ["tw 3: s1", "tw 4: s1 s2 s1", "tw 3: s1 s1", "tw 2: s1"] {
            let beta: TwinWord = text.parse().unwrap();
            let shifted = markov::apply_m1(&beta, true).unwrap();
            ok &= moves::minimal_code(&closure(&beta)) == moves::minimal_code(&closure(&shifted));
        }
        c.check("m1-circle-shift", ok, "block swap keeps the minimal closure code".into());

        let mut ok = true;
        let mut found = 0usize;
        for _ in 0..20 {
            let beta = markov::random_word(&mut rng, 3, 3);
            let alpha = markov::random_word(&mut rng, beta.strands(), 2);
            let conj = markov::apply_m2(&beta, &alpha).expect("same strands");
            if let markov::SearchOutcome::Found(path) = markov::m_search(&beta, &conj, &caps) {
                ok &= path.replay().is_ok();
                found += 1;
            }
        }
        c.check(
            "search-soundness",
            ok && found > 0,
            format!("{found}/20 conjugate pairs connected; every path replayed"),
        );

        c.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let names: Vec<&str> = registry().iter().map(|s| s.name()).collect();
        let mut dedup = names.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(names.len(), dedup.len());
        assert!(find_suite("twinword").is_some());
        assert!(find_suite("nonsense").is_none());
    }

    #[test]
    fn twinword_suite_passes() {
        let report = TwinwordSuite.run();
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn diagram_suite_passes() {
        let report = DiagramSuite.run();
        assert!(report.passed(), "{}", report.render());
    }
}
