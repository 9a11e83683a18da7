//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use morphud::conllu::{emit_conllu, parse_str, ParseMode, Sentence};
use morphud::eval::{depth_confusion, direction_confusion, ConfusionFilter, DepthConvention, Direction};
use morphud::synthetic::{corrupt_treebank, random_treebank};
use morphud::{convert_sentence, convert_sentences, revert_sentences, score, LabelMatch, TagMap};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Synthetic stand-in for a full ko_gsd-sized treebank.
fn synthetic_gsd(sentences: usize, seed: u64) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_treebank(&mut rng, sentences, 24, &TagMap::sejong())
}

fn figure1_golden() -> Outcome {
    let start = Instant::now();
    let word = load("figure1_word.conllu");
    let conv = convert_sentence(&word[0], &TagMap::sejong()).unwrap();
    let elapsed = start.elapsed();
    let got: Vec<_> = conv
        .sentence
        .tokens
        .iter()
        .map(|t| (t.id, t.head, t.deprel.as_str()))
        .collect();
    let mismatched = got.iter().zip(FIGURE1_ARCS.iter()).filter(|(a, b)| a != b).count()
        + got.len().abs_diff(FIGURE1_ARCS.len());
    outcome(
        mismatched == 0 && elapsed < Duration::from_secs(1),
        format!("{} morphemes, {mismatched} mismatched arcs, {elapsed:.2?}", got.len()),
    )
}

fn round_trip_identity() -> Outcome {
    let mut failures = 0;
    let mut repairs = 0;
    let mut checked = 0;
    for (file, map) in [("gsd_sample.conllu", TagMap::sejong()), ("kaist_sample.conllu", TagMap::kaist())] {
        let words = load(file);
        let (morphs, _) = convert_sentences(&words, &map, false).unwrap();
        let (back, report) = revert_sentences(&morphs, &words, &map).unwrap();
        failures += back.iter().zip(&words).filter(|(a, b)| a != b).count();
        repairs += report.total();
        checked += words.len();
    }

    let words = synthetic_gsd(6000, 2021);
    let map = TagMap::sejong();
    let start = Instant::now();
    let (morphs, summary) = convert_sentences(&words, &map, false).unwrap();
    let (back, report) = revert_sentences(&morphs, &words, &map).unwrap();
    let elapsed = start.elapsed();
    let head_or_label_diff = back
        .iter()
        .zip(&words)
        .filter(|(a, b)| {
            a.tokens
                .iter()
                .zip(&b.tokens)
                .any(|(x, y)| x.head != y.head || x.deprel != y.deprel)
        })
        .count();
    failures += head_or_label_diff;
    repairs += report.total();
    checked += words.len();
    outcome(
        failures == 0 && repairs == 0 && elapsed < Duration::from_secs(30),
        format!(
            "{checked} sentences ({} words, {} morphemes synthetic), {failures} differ, {repairs} repairs, 6000-sentence pass in {elapsed:.2?}",
            summary.words, summary.morphemes
        ),
    )
}

fn structural_invariants() -> Outcome {
    let map = TagMap::sejong();
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let generated = runner.run(&word_sentence(), |word| {
        let conv = convert_sentence(&word, &map).unwrap();
        check_conversion(&word, &conv, &map).map_err(TestCaseError::fail)
    });

    let mut real_failures = 0;
    let mut real = 0;
    for (file, map) in [("gsd_sample.conllu", TagMap::sejong()), ("kaist_sample.conllu", TagMap::kaist())] {
        for word in load(file) {
            let conv = convert_sentence(&word, &map).unwrap();
            real += 1;
            real_failures += check_conversion(&word, &conv, &map).is_err() as usize;
        }
    }
    for word in synthetic_gsd(1000, 7) {
        let conv = convert_sentence(&word, &map).unwrap();
        real += 1;
        real_failures += check_conversion(&word, &conv, &map).is_err() as usize;
    }
    let detail = match &generated {
        Ok(()) => format!("1000 generated trees ok; {real} fixture/synthetic sentences, {real_failures} failures"),
        Err(e) => format!("generated case failed: {e}"),
    };
    outcome(generated.is_ok() && real_failures == 0, detail)
}

fn scorer_oracle() -> Outcome {
    let pairs = pairs();
    let mut mismatches = 0;
    for (gold, system) in &pairs {
        let report = score(gold, system, LabelMatch::MainRelation).unwrap();
        let expected = oracle_counts(&emit_conllu(gold), &emit_conllu(system));
        if (report.total, report.uas_correct, report.las_correct) != expected {
            mismatches += 1;
        }
    }
    outcome(
        pairs.len() >= 20 && mismatches == 0,
        format!("{} pairs, {mismatches} disagree with the brute-force count", pairs.len()),
    )
}

fn matrix_mass() -> Outcome {
    let mut bad = 0;
    let mut evaluated = 0;
    let mut check = |gold: &[Sentence], system: &[Sentence]| {
        evaluated += 1;
        let report = score(gold, system, LabelMatch::default()).unwrap();
        let dir = direction_confusion(gold, system, ConfusionFilter::ErrorsOnly).unwrap();
        let depth = depth_confusion(gold, system, 10, ConfusionFilter::ErrorsOnly, DepthConvention::VirtualRoot).unwrap();
        let ok_errors = dir.total() == report.head_errors() && depth.total() == report.head_errors();
        let dir_all = direction_confusion(gold, gold, ConfusionFilter::All).unwrap();
        let depth_all = depth_confusion(gold, gold, 10, ConfusionFilter::All, DepthConvention::VirtualRoot).unwrap();
        let total = report.total;
        let ok_trace = dir_all.trace() == total && depth_all.trace() == total;
        bad += (!ok_errors || !ok_trace) as usize;
    };
    for (gold, system) in pairs() {
        check(&gold, &system);
    }
    let gold = synthetic_gsd(500, 99);
    for p in [0.1, 0.3, 0.6] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let system = corrupt_treebank(&gold, p, &mut rng);
        check(&gold, &system);
    }
    outcome(bad == 0, format!("{evaluated} evaluated pairs, {bad} violations"))
}

fn strip_misc(sentences: &mut [Sentence]) {
    for s in sentences {
        for t in &mut s.tokens {
            t.misc = "_".into();
        }
    }
}

fn protocol_pipeline() -> Outcome {
    let start = Instant::now();
    let map = TagMap::sejong();
    let gold = synthetic_gsd(1500, 314);
    let gold_text = emit_conllu(&gold);
    let gold = parse_str(&gold_text, ParseMode::Strict).unwrap();
    let (morph, _) = convert_sentences(&gold, &map, false).unwrap();

    let fractions = [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9];
    let mut uas = Vec::new();
    let mut repairs = 0;
    for &p in &fractions {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let mut predicted = corrupt_treebank(&morph, p, &mut rng);
        // parsers do not echo the alignment keys back
        strip_misc(&mut predicted);
        let predicted = parse_str(&emit_conllu(&predicted), ParseMode::Lenient).unwrap();
        let (words, report) = revert_sentences(&predicted, &gold, &map).unwrap();
        repairs += report.total();
        let words = parse_str(&emit_conllu(&words), ParseMode::Strict).unwrap();
        uas.push(score(&gold, &words, LabelMatch::default()).unwrap().uas());
    }
    let elapsed = start.elapsed();
    let monotone = uas.windows(2).all(|w| w[1] < w[0]);
    let curve = fractions
        .iter()
        .zip(&uas)
        .map(|(p, u)| format!("p={p}:{u:.4}"))
        .collect::<Vec<_>>()
        .join(" ");
    outcome(
        uas[0] == 1.0 && monotone && elapsed < Duration::from_secs(60),
        format!("UAS {curve}; {repairs} repairs; {elapsed:.2?}"),
    )
}

fn single_edit_cells() -> Outcome {
    let gold = figure1_morph();
    // right-headed token 3 moved to a head on its left
    let sys = edit(&gold, 0, 3, Some(1), None);
    let dir = direction_confusion(&gold, &sys, ConfusionFilter::ErrorsOnly).unwrap();
    let dir_ok = dir.total() == 1 && dir.get(Direction::Right, Direction::Left) == 1;

    // gold chain 1 <- 2 <- 3, system reattaches 3 to 1
    let chain = parse_str(
        "1\ta\ta\tX\tX\t_\t0\troot\t_\t_\n2\tb\tb\tX\tX\t_\t1\tdep\t_\t_\n3\tc\tc\tX\tX\t_\t2\tdep\t_\t_\n\n",
        ParseMode::Strict,
    )
    .unwrap();
    let moved = edit(&chain, 0, 3, Some(1), None);
    let depth = depth_confusion(&chain, &moved, 10, ConfusionFilter::ErrorsOnly, DepthConvention::VirtualRoot).unwrap();
    let depth_ok = depth.total() == 1 && depth.get(3, 2) == 1;

    // arcs deeper than the cap land in the last bucket
    let deep: String = (1..=14)
        .map(|i| format!("{i}\tw\tw\tX\tX\t_\t{}\t{}\t_\t_\n", i - 1, if i == 1 { "root" } else { "dep" }))
        .collect::<String>()
        + "\n";
    let deep = parse_str(&deep, ParseMode::Strict).unwrap();
    let shifted = edit(&deep, 0, 14, Some(1), None);
    let capped = depth_confusion(&deep, &shifted, 10, ConfusionFilter::ErrorsOnly, DepthConvention::VirtualRoot).unwrap();
    let cap_ok = capped.get(10, 2) == 1 && capped.total() == 1;

    outcome(
        dir_ok && depth_ok && cap_ok,
        format!("direction R->L cell {dir_ok}, depth 3->2 cell {depth_ok}, cap clamp {cap_ok}"),
    )
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("figure-1 golden conversion", figure1_golden),
        ("round-trip identity", round_trip_identity),
        ("structural invariants", structural_invariants),
        ("scorer oracle equivalence", scorer_oracle),
        ("confusion-matrix mass", matrix_mass),
        ("convert/predict/revert/eval protocol", protocol_pipeline),
        ("single-edit matrix cells", single_edit_cells),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {}", i + 1, result.detail);
        failed += !result.pass as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
