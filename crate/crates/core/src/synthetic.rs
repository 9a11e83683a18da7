//! Random word-level treebanks and a stand-in "parser" that corrupts heads.
//!
//! Used by the test suites and benchmarks to exercise the conversion and
//! evaluation pipeline at scale without an external parser.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::conllu::{join_misc, Sentence, Token};
use crate::morphsplit::{find_head, Morpheme};
use crate::tagmap::TagMap;

/// Sejong tag sequences for common eojeol shapes.
pub const SEJONG_PATTERNS: &[&[&str]] = &[
    &["NNG"],
    &["NNP"],
    &["NNG", "JKS"],
    &["NNG", "JKO"],
    &["NNP", "JKG"],
    &["NNG", "JKB"],
    &["NNG", "JX"],
    &["NNG", "NNG", "JKB"],
    &["NNG", "XSN", "VCP", "ETM"],
    &["NNG", "XSN"],
    &["NNG", "XSV", "EP", "EF"],
    &["VV", "EP", "EF"],
    &["VV", "EC"],
    &["VV", "ETM"],
    &["VV", "EC", "VX", "EF"],
    &["VA", "ETM"],
    &["VA", "EC"],
    &["NP", "JX"],
    &["NP"],
    &["MAG"],
    &["MM"],
    &["SN", "NNB"],
    &["SN"],
    &["XPN", "NNG", "JKS"],
    &["VV", "EP", "EF", "SF"],
    &["JKB"],
    &["SL"],
    &["SF"],
    &["SP"],
    &["IC"],
];

const DEPRELS: &[&str] = &[
    "nsubj", "obj", "obl", "advcl", "nmod", "amod", "acl", "advmod", "compound", "conj", "det",
    "flat", "ccomp", "dep", "punct", "cop", "nsubj:pass", "obl:tmod",
];

fn syllables<R: Rng>(rng: &mut R, max: usize) -> String {
    let n = rng.gen_range(1..=max);
    (0..n)
        .map(|_| char::from_u32(rng.gen_range(0xAC00..=0xD7A3)).unwrap())
        .collect()
}

fn segment_for<R: Rng>(rng: &mut R, tag: &str) -> String {
    match tag {
        "SF" => ".".into(),
        "SP" => ",".into(),
        "SN" => rng.gen_range(1..3000).to_string(),
        "SL" => ["UN", "IT", "Apple", "OECD"][rng.gen_range(0..4)].into(),
        "VCP" => "이".into(),
        "ETM" => ["ㄴ", "은", "는", "을"][rng.gen_range(0..4)].into(),
        t if t.starts_with('J') || t.starts_with('E') || t.starts_with('X') => syllables(rng, 1),
        _ => syllables(rng, 3),
    }
}

/// Random tree: heads[i] is the head of token i + 1.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n];
    for k in 1..n {
        heads[order[k] - 1] = order[rng.gen_range(0..k)];
    }
    heads
}

/// A valid word-level sentence of `1..=max_words` eojeols with `+`-joined
/// lemmas and tags drawn from [`SEJONG_PATTERNS`]. About one word in fifty
/// has mismatched lemma/tag counts.
pub fn random_sentence<R: Rng>(rng: &mut R, index: usize, max_words: usize, tagmap: &TagMap) -> Sentence {
    let n = rng.gen_range(1..=max_words.max(1));
    let heads = random_tree(rng, n);
    let mut tokens = Vec::with_capacity(n);
    for (i, &head) in heads.iter().enumerate() {
        let pattern = SEJONG_PATTERNS[rng.gen_range(0..SEJONG_PATTERNS.len())];
        let segments: Vec<String> = pattern.iter().map(|t| segment_for(rng, t)).collect();
        let mut token = Token::new(i + 1, segments.concat());
        token.lemma = segments.join("+");
        token.xpos = pattern.join("+");
        if pattern.len() > 1 && rng.gen_ratio(1, 50) {
            token.xpos = pattern[0].to_string();
        }
        let morphemes: Vec<Morpheme> = pattern.iter().map(|t| Morpheme::new("x", *t, tagmap)).collect();
        token.upos = morphemes[find_head(&morphemes, tagmap)].upos.clone();
        token.head = head;
        token.deprel = if head == 0 {
            "root".into()
        } else {
            DEPRELS[rng.gen_range(0..DEPRELS.len())].into()
        };
        if rng.gen_ratio(1, 4) {
            token.feats = "Polite=Form".into();
        }
        let mut misc = Vec::new();
        if i + 1 == n || rng.gen_ratio(1, 8) {
            misc.push("SpaceAfter=No");
        }
        token.misc = join_misc(misc);
        tokens.push(token);
    }
    let mut sentence = Sentence::new(vec![format!("# sent_id = synth-{}", index + 1)], tokens);
    let text = sentence.surface_text();
    sentence.set_text(&text);
    sentence
}

pub fn random_treebank<R: Rng>(rng: &mut R, sentences: usize, max_words: usize, tagmap: &TagMap) -> Vec<Sentence> {
    (0..sentences)
        .map(|i| random_sentence(rng, i, max_words, tagmap))
        .collect()
}

fn subtree(heads: &[usize], node: usize) -> Vec<bool> {
    let n = heads.len();
    let mut inside = vec![false; n + 1];
    inside[node] = true;
    // heads form a tree, so repeated passes converge within n rounds
    let mut changed = true;
    while changed {
        changed = false;
        for t in 1..=n {
            let h = heads[t - 1];
            if !inside[t] && h != 0 && inside[h] {
                inside[t] = true;
                changed = true;
            }
        }
    }
    inside
}

/// Reattaches about `fraction` of the non-root tokens to a random new head,
/// keeping the result a tree. Labels are left untouched.
pub fn corrupt_heads<R: Rng>(sentence: &Sentence, fraction: f64, rng: &mut R) -> Sentence {
    let mut out = sentence.clone();
    let mut candidates: Vec<usize> = out.tokens.iter().filter(|t| t.head != 0).map(|t| t.id).collect();
    candidates.shuffle(rng);
    let k = ((candidates.len() as f64) * fraction.clamp(0.0, 1.0)).round() as usize;
    for &id in &candidates[..k] {
        let heads = out.heads();
        let inside = subtree(&heads, id);
        let current = heads[id - 1];
        let options: Vec<usize> = (1..=heads.len()).filter(|&h| !inside[h] && h != current).collect();
        if let Some(&h) = options.choose(rng) {
            out.tokens[id - 1].head = h;
        }
    }
    out
}

pub fn corrupt_treebank<R: Rng>(sentences: &[Sentence], fraction: f64, rng: &mut R) -> Vec<Sentence> {
    sentences.iter().map(|s| corrupt_heads(s, fraction, rng)).collect()
}
