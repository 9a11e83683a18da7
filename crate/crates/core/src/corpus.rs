//! Plain-text token streams for training word or morpheme embeddings.

use std::str::FromStr;

use crate::conllu::{Sentence, EMPTY};
use crate::morphsplit::split_segments;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportMode {
    /// FORM column, one entry per eojeol.
    Word,
    /// `+`-separated lemma segments.
    Morpheme,
}

impl FromStr for ExportMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "word" => Ok(ExportMode::Word),
            "morpheme" | "morph" => Ok(ExportMode::Morpheme),
            other => Err(format!("unknown export mode `{}`", other)),
        }
    }
}

/// One line of space-separated entries for a sentence.
pub fn export_sentence(sentence: &Sentence, mode: ExportMode) -> String {
    let mut entries: Vec<&str> = Vec::new();
    for token in &sentence.tokens {
        match mode {
            ExportMode::Word => entries.push(&token.form),
            ExportMode::Morpheme => match split_segments(&token.lemma, &token.xpos) {
                Some(pairs) => entries.extend(pairs.into_iter().map(|(segment, _)| segment)),
                None if token.lemma != EMPTY => entries.push(&token.lemma),
                None => entries.push(&token.form),
            },
        }
    }
    entries.join(" ")
}

/// Every sentence on its own line, newline-terminated.
pub fn export_corpus(sentences: &[Sentence], mode: ExportMode) -> String {
    let mut out = String::new();
    for sentence in sentences {
        out.push_str(&export_sentence(sentence, mode));
        out.push('\n');
    }
    out
}
