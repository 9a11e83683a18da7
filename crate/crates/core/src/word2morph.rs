//! Eojeol-level to morpheme-level conversion.
//!
//! Each word is replaced by its morphemes. The head morpheme inherits the
//! word's external arc (retargeted to the head morpheme of the governing
//! word) and every other morpheme attaches to it. MISC keys record the
//! original word so the conversion can be undone:
//!
//! * `Eojeol=<word id>` on every morpheme
//! * `MorphRole=Head` or `MorphRole=Dep`
//! * `OrigForm=<surface form>` on the first morpheme of a split word
//! * `SpaceAfter=No` inside a word; the word's own `SpaceAfter` moves to its
//!   last morpheme

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::align::{AlignError, AlignmentMap, WordSpan};
use crate::conllu::{self, join_misc, ConlluError, ParseMode, Sentence, Token, TreeError, EMPTY};
use crate::morphsplit::{intra_eojeol_deprel, segment_token, HeadPosition, MorphemeAnalysis, SegmentError};
use crate::tagmap::TagMap;

pub const KEY_EOJEOL: &str = "Eojeol";
pub const KEY_MORPH_ROLE: &str = "MorphRole";
pub const KEY_ORIG_FORM: &str = "OrigForm";
pub const KEY_SPACE_AFTER: &str = "SpaceAfter";

const RESERVED_KEYS: [&str; 4] = [KEY_EOJEOL, KEY_MORPH_ROLE, KEY_ORIG_FORM, KEY_SPACE_AFTER];

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("sentence {sentence}, token {token_id}: {source}")]
    Segment {
        sentence: String,
        token_id: usize,
        #[source]
        source: SegmentError,
    },
    #[error("sentence {sentence}: invalid input tree: {source}")]
    InvalidInput {
        sentence: String,
        #[source]
        source: TreeError,
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

/// Result of converting one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conversion {
    pub sentence: Sentence,
    pub alignment: AlignmentMap,
    /// Words whose lemma/XPOS segment counts disagreed.
    pub degraded: usize,
    pub unknown_tags: Vec<String>,
}

pub(crate) fn sentence_label(sentence: &Sentence, index: Option<usize>) -> String {
    match (sentence.sent_id(), index) {
        (Some(id), _) => id.to_string(),
        (None, Some(i)) => format!("#{}", i + 1),
        (None, None) => "?".to_string(),
    }
}

/// Converts a word-level sentence to morpheme level.
pub fn convert_sentence(sentence: &Sentence, tagmap: &TagMap) -> Result<Conversion, ConvertError> {
    convert_labeled(sentence, tagmap, None)
}

fn convert_labeled(
    sentence: &Sentence,
    tagmap: &TagMap,
    index: Option<usize>,
) -> Result<Conversion, ConvertError> {
    sentence
        .validate()
        .map_err(|source| ConvertError::InvalidInput {
            sentence: sentence_label(sentence, index),
            source,
        })?;
    let analyses = sentence
        .tokens
        .iter()
        .map(|t| {
            segment_token(t, tagmap).map_err(|source| ConvertError::Segment {
                sentence: sentence_label(sentence, index),
                token_id: t.id,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let alignment = AlignmentMap::from_counts(analyses.iter().map(|a| (a.len(), a.head_index)))
        .map_err(|source| ConvertError::Alignment {
            sentence: sentence_label(sentence, index),
            source,
        })?;

    let mut tokens = Vec::with_capacity(alignment.total());
    for ((word, analysis), span) in sentence.tokens.iter().zip(&analyses).zip(alignment.spans()) {
        let external_head = alignment
            .head_morpheme(word.head)
            .expect("validated head is in range");
        emit_word(word, analysis, span, external_head, &mut tokens);
    }

    let degraded = analyses.iter().filter(|a| a.degraded).count();
    let unknown_tags = analyses
        .iter()
        .flat_map(|a| a.unknown_tags().map(str::to_string))
        .collect();
    Ok(Conversion {
        sentence: Sentence::new(sentence.comments.clone(), tokens),
        alignment,
        degraded,
        unknown_tags,
    })
}

fn emit_word(
    word: &Token,
    analysis: &MorphemeAnalysis,
    span: &WordSpan,
    external_head: usize,
    out: &mut Vec<Token>,
) {
    let single = analysis.len() == 1;
    let space_after = word.misc_get(KEY_SPACE_AFTER);
    let passthrough: Vec<&str> = word
        .misc_iter()
        .filter(|e| {
            let key = e.split_once('=').map_or(*e, |(k, _)| k);
            !RESERVED_KEYS.contains(&key)
        })
        .collect();

    for (offset, morpheme) in analysis.morphemes.iter().enumerate() {
        let id = span.first + offset;
        let is_head = offset == analysis.head_index;
        let is_last = offset + 1 == analysis.len();

        let mut misc = vec![
            format!("{}={}", KEY_EOJEOL, word.id),
            format!("{}={}", KEY_MORPH_ROLE, if is_head { "Head" } else { "Dep" }),
        ];
        if offset == 0 && !single {
            misc.push(format!("{}={}", KEY_ORIG_FORM, word.form));
        }
        if is_head {
            misc.extend(passthrough.iter().map(|e| e.to_string()));
        }
        if !is_last {
            misc.push(format!("{}=No", KEY_SPACE_AFTER));
        } else if let Some(value) = space_after {
            misc.push(format!("{}={}", KEY_SPACE_AFTER, value));
        }

        let token = if single {
            Token {
                id,
                head: external_head,
                misc: join_misc(misc),
                ..word.clone()
            }
        } else {
            let (head, deprel) = if is_head {
                (external_head, word.deprel.clone())
            } else {
                let position = if offset < analysis.head_index {
                    HeadPosition::After
                } else {
                    HeadPosition::Before
                };
                (span.head, intra_eojeol_deprel(morpheme, position).to_string())
            };
            Token {
                id,
                form: morpheme.segment.clone(),
                lemma: morpheme.segment.clone(),
                upos: morpheme.upos.clone(),
                xpos: morpheme.xtag.clone(),
                feats: if is_head { word.feats.clone() } else { EMPTY.into() },
                head,
                deprel,
                deps: if is_head { word.deps.clone() } else { EMPTY.into() },
                misc: join_misc(misc),
            }
        };
        out.push(token);
    }
}

/// Counts from converting a treebank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConversionSummary {
    pub sentences: usize,
    pub words: usize,
    pub morphemes: usize,
    /// Words kept whole because lemma and XPOS segment counts disagreed.
    pub mismatches: usize,
    /// Sentences dropped under `skip_bad`.
    pub skipped: usize,
    pub unknown_tags: BTreeMap<String, usize>,
}

impl ConversionSummary {
    pub fn merge(&mut self, other: &ConversionSummary) {
        self.sentences += other.sentences;
        self.words += other.words;
        self.morphemes += other.morphemes;
        self.mismatches += other.mismatches;
        self.skipped += other.skipped;
        for (tag, n) in &other.unknown_tags {
            *self.unknown_tags.entry(tag.clone()).or_default() += n;
        }
    }

    fn record(&mut self, input: &Sentence, conversion: &Conversion) {
        self.sentences += 1;
        self.words += input.len();
        self.morphemes += conversion.sentence.len();
        self.mismatches += conversion.degraded;
        for tag in &conversion.unknown_tags {
            *self.unknown_tags.entry(tag.clone()).or_default() += 1;
        }
    }
}

impl std::fmt::Display for ConversionSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} sentences, {} words, {} morphemes",
            self.sentences, self.words, self.morphemes
        )
    }
}

/// Converts sentences in order. With `skip_bad`, sentences that fail are
/// dropped and counted instead of aborting.
pub fn convert_sentences(
    sentences: &[Sentence],
    tagmap: &TagMap,
    skip_bad: bool,
) -> Result<(Vec<Sentence>, ConversionSummary), ConvertError> {
    let mut out = Vec::with_capacity(sentences.len());
    let mut summary = ConversionSummary::default();
    for (i, sentence) in sentences.iter().enumerate() {
        match convert_labeled(sentence, tagmap, Some(i)) {
            Ok(conversion) => {
                summary.record(sentence, &conversion);
                out.push(conversion.sentence);
            }
            Err(e) if skip_bad => {
                log::warn!("skipping: {}", e);
                summary.skipped += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if !summary.unknown_tags.is_empty() {
        log::warn!(
            "tags missing from the tag map: {}",
            summary
                .unknown_tags
                .iter()
                .map(|(t, n)| format!("{}({})", t, n))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    Ok((out, summary))
}

/// Reads a word-level treebank, converts it and writes the morpheme-level result.
pub fn convert_treebank(
    input: impl AsRef<Path>,
    tagmap: &TagMap,
    output: impl AsRef<Path>,
    skip_bad: bool,
) -> Result<ConversionSummary, ConvertError> {
    let reader = BufReader::new(File::open(input)?);
    let mode = if skip_bad {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let sentences = conllu::parse_conllu(reader, mode)?;
    let (converted, summary) = convert_sentences(&sentences, tagmap, skip_bad)?;
    conllu::write_conllu(BufWriter::new(File::create(output)?), &converted)?;
    Ok(summary)
}
