//! Morpheme-level to eojeol-level conversion.
//!
//! Given a morpheme-level tree (gold or predicted) and the word-level
//! skeleton of the same sentence, every word takes its head and relation from
//! the morpheme in its span that attaches outside the span. Predicted trees
//! can break that assumption; such cases are resolved deterministically and
//! counted in a [`RepairReport`].

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::ops::AddAssign;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::align::{AlignError, AlignmentMap, WordSpan};
use crate::conllu::{self, find_cycle, is_root_label, ConlluError, ParseMode, Sentence};
use crate::morphsplit::{find_head, morpheme_count, Morpheme};
use crate::tagmap::TagMap;
use crate::word2morph::{sentence_label, KEY_EOJEOL, KEY_MORPH_ROLE};

#[derive(Debug, Error)]
pub enum RevertError {
    #[error("skeleton has {skeleton} sentences but the morpheme file has {morph}")]
    SentenceCount { skeleton: usize, morph: usize },
    #[error("sentence {sentence}, word {word_id}: needs {needed} morphemes but only {remaining} remain")]
    Overflow {
        sentence: String,
        word_id: usize,
        needed: usize,
        remaining: usize,
    },
    #[error("sentence {sentence}: skeleton accounts for {expected} morphemes but the sentence has {found}")]
    CountMismatch {
        sentence: String,
        expected: usize,
        found: usize,
    },
    #[error("sentence {sentence}: {source}")]
    Alignment {
        sentence: String,
        #[source]
        source: AlignError,
    },
    #[error(transparent)]
    Conllu(#[from] ConlluError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Counts of every adjustment made while reverting predictions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    /// Words whose morphemes all attached inside the word.
    pub no_external: usize,
    /// Words with more than one morpheme attaching outside the word.
    pub multiple_external: usize,
    /// Words that ended up headed by themselves and were reattached to the root.
    pub self_loops: usize,
    /// Extra root words reattached to the first root.
    pub extra_roots: usize,
    /// Words promoted to root because no word was attached to the root.
    pub promoted_roots: usize,
    /// Cycles among words broken by reattaching to the root.
    pub cycles_broken: usize,
    /// Relations rewritten so that `root` appears exactly on the root word.
    pub relabeled: usize,
}

impl RepairReport {
    pub fn total(&self) -> usize {
        self.no_external
            + self.multiple_external
            + self.self_loops
            + self.extra_roots
            + self.promoted_roots
            + self.cycles_broken
            + self.relabeled
    }

    pub fn is_clean(&self) -> bool {
        self.total() == 0
    }

    /// `(name, count)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, usize); 7] {
        [
            ("no_external", self.no_external),
            ("multiple_external", self.multiple_external),
            ("self_loops", self.self_loops),
            ("extra_roots", self.extra_roots),
            ("promoted_roots", self.promoted_roots),
            ("cycles_broken", self.cycles_broken),
            ("relabeled", self.relabeled),
        ]
    }
}

impl AddAssign for RepairReport {
    fn add_assign(&mut self, rhs: Self) {
        self.no_external += rhs.no_external;
        self.multiple_external += rhs.multiple_external;
        self.self_loops += rhs.self_loops;
        self.extra_roots += rhs.extra_roots;
        self.promoted_roots += rhs.promoted_roots;
        self.cycles_broken += rhs.cycles_broken;
        self.relabeled += rhs.relabeled;
    }
}

fn head_in_span(morph: &Sentence, first: usize, last: usize, tagmap: &TagMap) -> usize {
    let morphemes: Vec<Morpheme> = morph.tokens[first - 1..last]
        .iter()
        .map(|t| Morpheme::new(t.form.clone(), t.xpos.clone(), tagmap))
        .collect();
    first + find_head(&morphemes, tagmap)
}

/// Reads spans from `Eojeol` / `MorphRole` MISC keys, if every token has them.
fn pair_from_misc(word: &Sentence, morph: &Sentence, tagmap: &TagMap) -> Option<AlignmentMap> {
    let mut spans: Vec<WordSpan> = Vec::new();
    let mut heads: Vec<Option<usize>> = Vec::new();
    for token in &morph.tokens {
        let word_id: usize = token.misc_get(KEY_EOJEOL)?.parse().ok()?;
        let is_head = token.misc_get(KEY_MORPH_ROLE) == Some("Head");
        let current = spans.len();
        match spans.last_mut() {
            Some(span) if word_id == current => {
                span.last = token.id;
                if is_head {
                    let slot = heads.last_mut().unwrap();
                    if slot.is_some() {
                        return None;
                    }
                    *slot = Some(token.id);
                }
            }
            _ if word_id == current + 1 => {
                spans.push(WordSpan {
                    first: token.id,
                    last: token.id,
                    head: token.id,
                });
                heads.push(is_head.then_some(token.id));
            }
            _ => return None,
        }
    }
    if spans.len() != word.len() {
        return None;
    }
    for (span, head) in spans.iter_mut().zip(heads) {
        span.head = head.unwrap_or_else(|| head_in_span(morph, span.first, span.last, tagmap));
    }
    AlignmentMap::new(spans, morph.len()).ok()
}

/// Pairs the words of a skeleton sentence with the tokens of its
/// morpheme-level counterpart.
///
/// MISC keys written by the forward conversion are used when present and
/// consistent; otherwise each word consumes as many morphemes as its lemma
/// has `+`-separated segments.
pub fn pair_tokens(word: &Sentence, morph: &Sentence, tagmap: &TagMap) -> Result<AlignmentMap, RevertError> {
    pair_labeled(word, morph, tagmap, None)
}

fn pair_labeled(
    word: &Sentence,
    morph: &Sentence,
    tagmap: &TagMap,
    index: Option<usize>,
) -> Result<AlignmentMap, RevertError> {
    if let Some(map) = pair_from_misc(word, morph, tagmap) {
        return Ok(map);
    }
    let label = || sentence_label(word, index);
    let total = morph.len();
    let mut spans = Vec::with_capacity(word.len());
    let mut next = 1;
    for token in &word.tokens {
        let needed = morpheme_count(token);
        let remaining = total + 1 - next;
        if needed > remaining {
            return Err(RevertError::Overflow {
                sentence: label(),
                word_id: token.id,
                needed,
                remaining,
            });
        }
        let last = next + needed - 1;
        spans.push(WordSpan {
            first: next,
            last,
            head: head_in_span(morph, next, last, tagmap),
        });
        next = last + 1;
    }
    if next - 1 != total {
        return Err(RevertError::CountMismatch {
            sentence: label(),
            expected: next - 1,
            found: total,
        });
    }
    AlignmentMap::new(spans, total).map_err(|source| RevertError::Alignment {
        sentence: label(),
        source,
    })
}

/// Builds the word-level sentence from a morpheme-level tree.
///
/// Columns other than HEAD and DEPREL come from `skeleton`. The result is
/// always a single-rooted tree.
pub fn revert_sentence(
    morph: &Sentence,
    skeleton: &Sentence,
    alignment: &AlignmentMap,
) -> (Sentence, RepairReport) {
    let mut report = RepairReport::default();
    let mut heads = Vec::with_capacity(skeleton.len());
    let mut deprels = Vec::with_capacity(skeleton.len());

    for (i, span) in alignment.spans().iter().enumerate() {
        let word_id = i + 1;
        let external: Vec<usize> = span
            .ids()
            .filter(|&id| {
                let h = morph.tokens[id - 1].head;
                h == 0 || !span.contains(h)
            })
            .collect();
        let rep = match external.as_slice() {
            [only] => *only,
            [] => {
                report.no_external += 1;
                span.head
            }
            several => {
                report.multiple_external += 1;
                if several.contains(&span.head) {
                    span.head
                } else {
                    several[0]
                }
            }
        };
        let rep_token = &morph.tokens[rep - 1];
        let head = match rep_token.head {
            0 => 0,
            h if span.contains(h) => word_id,
            h => alignment.word_of(h).unwrap_or(word_id),
        };
        heads.push(head);
        deprels.push(rep_token.deprel.clone());
    }

    repair_tree(&mut heads, &mut deprels, &mut report);

    let tokens = skeleton
        .tokens
        .iter()
        .zip(heads.into_iter().zip(deprels))
        .map(|(t, (head, deprel))| {
            let mut t = t.clone();
            t.head = head;
            t.deprel = deprel;
            t
        })
        .collect();
    (Sentence::new(skeleton.comments.clone(), tokens), report)
}

/// Turns an arbitrary head assignment into a single-rooted tree.
fn repair_tree(heads: &mut [usize], deprels: &mut [String], report: &mut RepairReport) {
    let n = heads.len();
    if n == 0 {
        return;
    }
    let is_self = |heads: &[usize], i: usize| heads[i] == i + 1;

    let mut root = heads.iter().position(|&h| h == 0).map(|i| i + 1);
    if root.is_none() {
        if let Some(i) = (0..n).find(|&i| is_self(heads, i)) {
            heads[i] = 0;
            deprels[i] = "root".into();
            report.promoted_roots += 1;
            root = Some(i + 1);
        }
    }
    if let Some(r) = root {
        for i in 0..n {
            if i + 1 != r && heads[i] == 0 {
                heads[i] = r;
                if is_root_label(&deprels[i]) {
                    deprels[i] = "dep".into();
                }
                report.extra_roots += 1;
            } else if is_self(heads, i) {
                heads[i] = r;
                deprels[i] = "dep".into();
                report.self_loops += 1;
            }
        }
    }
    while let Some(id) = find_cycle(heads) {
        match root {
            Some(r) => {
                heads[id - 1] = r;
                deprels[id - 1] = "dep".into();
                report.cycles_broken += 1;
            }
            None => {
                heads[id - 1] = 0;
                deprels[id - 1] = "root".into();
                report.promoted_roots += 1;
                root = Some(id);
            }
        }
    }
    for (head, deprel) in heads.iter().zip(deprels.iter_mut()) {
        let labeled_root = is_root_label(deprel);
        if *head == 0 && !labeled_root {
            *deprel = "root".into();
            report.relabeled += 1;
        } else if *head != 0 && labeled_root {
            *deprel = "dep".into();
            report.relabeled += 1;
        }
    }
}

/// Reverts a whole treebank sentence by sentence.
pub fn revert_sentences(
    morph: &[Sentence],
    skeleton: &[Sentence],
    tagmap: &TagMap,
) -> Result<(Vec<Sentence>, RepairReport), RevertError> {
    if morph.len() != skeleton.len() {
        return Err(RevertError::SentenceCount {
            skeleton: skeleton.len(),
            morph: morph.len(),
        });
    }
    let mut report = RepairReport::default();
    let mut out = Vec::with_capacity(skeleton.len());
    for (i, (m, w)) in morph.iter().zip(skeleton).enumerate() {
        let alignment = pair_labeled(w, m, tagmap, Some(i))?;
        let (sentence, repairs) = revert_sentence(m, w, &alignment);
        if !repairs.is_clean() {
            log::info!("sentence {}: {} repairs", sentence_label(w, Some(i)), repairs.total());
        }
        report += repairs;
        out.push(sentence);
    }
    Ok((out, report))
}

/// File-level revert: the skeleton is read strictly, the morpheme-level input
/// leniently since it usually comes from a parser.
pub fn revert_treebank(
    morph_path: impl AsRef<Path>,
    skeleton_path: impl AsRef<Path>,
    tagmap: &TagMap,
    output: impl AsRef<Path>,
) -> Result<RepairReport, RevertError> {
    let skeleton = conllu::parse_conllu(BufReader::new(File::open(skeleton_path)?), ParseMode::Strict)?;
    let morph = conllu::parse_conllu(BufReader::new(File::open(morph_path)?), ParseMode::Lenient)?;
    let (words, report) = revert_sentences(&morph, &skeleton, tagmap)?;
    conllu::write_conllu(BufWriter::new(File::create(output)?), &words)?;
    Ok(report)
}
