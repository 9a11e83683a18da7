#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use morphud::conllu::{parse_str, ParseMode, Sentence, Token};
use morphud::word2morph::Conversion;
use morphud::{convert_sentence, pair_tokens, revert_sentence, TagMap};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load(name: &str) -> Vec<Sentence> {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    parse_str(&text, ParseMode::Strict).unwrap()
}

/// (dependent, head, deprel) for the 21-morpheme tree, bottom-side arcs included.
pub const FIGURE1_ARCS: [(usize, usize, &str); 21] = [
    (1, 8, "nmod"),
    (2, 1, "case"),
    (3, 8, "acl"),
    (4, 3, "aux"),
    (5, 3, "aux"),
    (6, 3, "aux"),
    (7, 8, "compound"),
    (8, 10, "compound"),
    (9, 10, "compound"),
    (10, 18, "nsubj"),
    (11, 10, "case"),
    (12, 13, "compound"),
    (13, 15, "compound"),
    (14, 13, "aux"),
    (15, 16, "compound"),
    (16, 18, "advcl"),
    (17, 16, "case"),
    (18, 0, "root"),
    (19, 18, "aux"),
    (20, 18, "aux"),
    (21, 18, "punct"),
];

pub const FIGURE1_SEGMENTS: [&str; 21] = [
    "프랑스", "의", "세계", "적", "이", "ㄴ", "의상", "디자이너", "엠마누엘", "웅가로", "가", "실내", "장식", "용", "직물",
    "디자이너", "로", "나서", "었", "다", ".",
];

pub const FIGURE1_SPANS: [(usize, usize); 12] = [
    (1, 2),
    (3, 6),
    (7, 7),
    (8, 8),
    (9, 9),
    (10, 11),
    (12, 12),
    (13, 14),
    (15, 15),
    (16, 17),
    (18, 20),
    (21, 21),
];

const TAGS: &[&str] = &[
    "NNG", "NNP", "NNB", "NP", "NR", "SN", "SL", "VV", "VA", "VX", "VCP", "MAG", "MM", "IC", "JKS", "JKO", "JKB",
    "JKG", "JX", "JC", "EP", "EF", "EC", "ETM", "XSN", "XSV", "XPN", "SF", "SP", "QQQ",
];

const LABELS: &[&str] = &[
    "nsubj", "obj", "obl", "advcl", "nmod", "amod", "acl", "compound", "conj", "punct", "dep", "obl:tmod",
];

#[derive(Clone, Debug)]
pub struct WordSpec {
    pub morphemes: Vec<(String, &'static str)>,
    pub label: &'static str,
    pub mismatch: bool,
    pub space_after: bool,
}

fn word_spec() -> impl Strategy<Value = WordSpec> {
    (
        prop::collection::vec(("[가-힣]{1,3}", prop::sample::select(TAGS)), 1..=4),
        prop::sample::select(LABELS),
        prop::bool::weighted(0.05),
        any::<bool>(),
    )
        .prop_map(|(morphemes, label, mismatch, space_after)| WordSpec {
            morphemes,
            label,
            mismatch,
            space_after,
        })
}

pub fn build_sentence(order: &[usize], attach: &[Index], words: &[WordSpec]) -> Sentence {
    let n = words.len();
    let mut heads = vec![0usize; n];
    for k in 1..n {
        heads[order[k] - 1] = order[attach[k].index(k)];
    }
    let tokens = words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let segments: Vec<&str> = w.morphemes.iter().map(|(s, _)| s.as_str()).collect();
            let tags: Vec<&str> = w.morphemes.iter().map(|(_, t)| *t).collect();
            let mut t = Token::new(i + 1, segments.concat());
            t.lemma = segments.join("+");
            t.xpos = if w.mismatch && tags.len() > 1 {
                tags[0].to_string()
            } else {
                tags.join("+")
            };
            t.upos = "X".into();
            t.head = heads[i];
            t.deprel = if heads[i] == 0 { "root".into() } else { w.label.into() };
            if !w.space_after {
                t.misc = "SpaceAfter=No".into();
            }
            t
        })
        .collect();
    Sentence::new(vec!["# sent_id = prop".into()], tokens)
}

/// Random valid word-level trees with randomly segmented lemmas.
pub fn word_sentence() -> impl Strategy<Value = Sentence> {
    (1usize..=12).prop_flat_map(|n| {
        (
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<Index>(), n),
            prop::collection::vec(word_spec(), n),
        )
            .prop_map(|(order, attach, words)| build_sentence(&order, &attach, &words))
    })
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

/// Structural properties every conversion must satisfy.
pub fn check_conversion(word: &Sentence, conv: &Conversion, tagmap: &TagMap) -> Result<(), String> {
    let morph = &conv.sentence;
    let align = &conv.alignment;
    morph.validate().map_err(|e| format!("tree: {e}"))?;
    if align.total() != morph.len() || align.word_count() != word.len() {
        return Err("alignment size".into());
    }

    // locality: arcs not present at word level stay inside one eojeol
    for t in &morph.tokens {
        let w = align.word_of(t.id).unwrap();
        let span = align.span(w).unwrap();
        if t.id == span.head {
            let expected = align.head_morpheme(word.tokens[w - 1].head).unwrap();
            if t.head != expected {
                return Err(format!("head morpheme {} does not mirror its word arc", t.id));
            }
        } else if !span.contains(t.head) {
            return Err(format!("new arc {} -> {} leaves its eojeol", t.id, t.head));
        }
    }

    // label conservation
    let mut word_labels: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &word.tokens {
        *word_labels.entry(t.deprel.as_str()).or_default() += 1;
    }
    let mut head_labels: BTreeMap<&str, usize> = BTreeMap::new();
    for t in morph.tokens.iter().filter(|t| t.misc_get("MorphRole") == Some("Head")) {
        *head_labels.entry(t.deprel.as_str()).or_default() += 1;
    }
    if word_labels != head_labels {
        return Err(format!("labels {word_labels:?} vs {head_labels:?}"));
    }

    // crossing conservation among inter-word arcs
    let word_arcs: Vec<(usize, usize)> = word.tokens.iter().filter(|t| t.head != 0).map(|t| (t.id, t.head)).collect();
    let morph_arcs: Vec<(usize, usize)> = word_arcs
        .iter()
        .map(|&(d, h)| (align.head_morpheme(d).unwrap(), align.head_morpheme(h).unwrap()))
        .collect();
    for i in 0..word_arcs.len() {
        for j in i + 1..word_arcs.len() {
            if crosses(word_arcs[i], word_arcs[j]) != crosses(morph_arcs[i], morph_arcs[j]) {
                return Err(format!("crossing changed for {:?} / {:?}", word_arcs[i], word_arcs[j]));
            }
        }
    }

    // inversion, with and without the MISC alignment keys
    let pairing = pair_tokens(word, morph, tagmap).map_err(|e| e.to_string())?;
    let (back, repairs) = revert_sentence(morph, word, &pairing);
    if back != *word || !repairs.is_clean() {
        return Err(format!("round trip failed ({} repairs)", repairs.total()));
    }
    let mut bare = morph.clone();
    for t in &mut bare.tokens {
        t.misc = "_".into();
    }
    let pairing = pair_tokens(word, &bare, tagmap).map_err(|e| e.to_string())?;
    let (back, repairs) = revert_sentence(&bare, word, &pairing);
    if back != *word || !repairs.is_clean() {
        return Err("round trip without MISC keys failed".into());
    }
    Ok(())
}

/// Raw-text attachment counts `(total, uas, las)`, independent of the crate's
/// reader and scorer.
pub fn oracle_counts(gold: &str, system: &str) -> (usize, usize, usize) {
    fn rows(text: &str) -> Vec<(String, String)> {
        text.lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| {
                let cols: Vec<&str> = l.split('\t').collect();
                let label = cols[7].split(':').next().unwrap().to_string();
                (cols[6].to_string(), label)
            })
            .collect()
    }
    let g = rows(gold);
    let s = rows(system);
    assert_eq!(g.len(), s.len());
    let mut uas = 0;
    let mut las = 0;
    for (a, b) in g.iter().zip(&s) {
        if a.0 == b.0 {
            uas += 1;
            if a.1 == b.1 {
                las += 1;
            }
        }
    }
    (g.len(), uas, las)
}

/// Single-token edit of a copy of `sentences`.
pub fn edit(sentences: &[Sentence], sent: usize, token: usize, head: Option<usize>, deprel: Option<&str>) -> Vec<Sentence> {
    let mut out = sentences.to_vec();
    let t = &mut out[sent].tokens[token - 1];
    if let Some(h) = head {
        t.head = h;
    }
    if let Some(d) = deprel {
        t.deprel = d.into();
    }
    out
}

pub fn figure1_morph() -> Vec<Sentence> {
    let word = load("figure1_word.conllu");
    vec![convert_sentence(&word[0], &TagMap::sejong()).unwrap().sentence]
}

pub type Edit = (usize, usize, Option<usize>, Option<&'static str>);

/// Hand-built (gold, system) pairs: single and multiple edits over the
/// Figure 1 morpheme tree and the word-level sample treebank.
pub fn pairs() -> Vec<(Vec<Sentence>, Vec<Sentence>)> {
    let morph = figure1_morph();
    let gsd = load("gsd_sample.conllu");
    let morph_edits: &[&[Edit]] = &[
        &[],
        &[(0, 1, None, Some("obl"))],
        &[(0, 1, Some(10), None)],
        &[(0, 3, Some(1), None)],
        &[(0, 2, Some(3), Some("aux"))],
        &[(0, 18, Some(21), Some("root"))],
        &[(0, 10, Some(16), Some("nsubj"))],
        &[(0, 10, None, Some("nsubj:pass"))],
        &[(0, 14, Some(15), Some("case")), (0, 12, Some(15), None)],
        &[(0, 21, Some(20), Some("dep")), (0, 20, None, Some("punct")), (0, 19, Some(20), None)],
        &[(0, 8, Some(18), Some("obj"))],
        &[(0, 4, None, Some("case")), (0, 5, None, Some("case")), (0, 6, None, Some("case"))],
    ];
    let word_edits: &[&[Edit]] = &[
        &[],
        &[(0, 1, Some(2), None)],
        &[(0, 11, Some(10), Some("acl"))],
        &[(1, 2, Some(1), Some("obj"))],
        &[(2, 1, Some(5), Some("obl"))],
        &[(2, 1, Some(5), Some("obl:tmod"))],
        &[(3, 3, Some(2), None), (3, 2, Some(4), None)],
        &[(4, 1, None, Some("obj"))],
        &[(5, 1, Some(3), None), (5, 2, Some(1), None)],
        &[(0, 6, Some(10), Some("nsubj")), (1, 1, Some(2), Some("nsubj"))],
        &[(0, 12, Some(1), None), (3, 5, Some(1), None), (2, 6, Some(4), None)],
        &[(1, 4, Some(2), Some("dep")), (2, 4, Some(3), Some("advmod"))],
    ];
    let mut out = Vec::new();
    for (gold, edits) in [(&morph, morph_edits), (&gsd, word_edits)] {
        for list in edits.iter() {
            let mut system = gold.clone();
            for &(s, t, h, d) in list.iter() {
                system = edit(&system, s, t, h, d);
            }
            out.push((gold.clone(), system));
        }
    }
    out
}

