//! Splitting eojeol tokens into morphemes and choosing the head morpheme.

use thiserror::Error;

use crate::conllu::{Token, EMPTY};
use crate::tagmap::{HeadClass, Role, TagMap};

/// One morpheme of an eojeol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morpheme {
    pub segment: String,
    pub xtag: String,
    pub upos: String,
    pub role: Role,
    /// False when `xtag` was missing from the tag map and the default applied.
    pub known: bool,
}

impl Morpheme {
    pub fn new(segment: impl Into<String>, xtag: impl Into<String>, tagmap: &TagMap) -> Self {
        let segment = segment.into();
        let xtag = xtag.into();
        let (entry, known) = match tagmap.get(&xtag) {
            Some(entry) => (entry, true),
            None => (tagmap.default_entry(), false),
        };
        Morpheme {
            segment,
            upos: entry.upos.clone(),
            role: entry.role,
            known,
            xtag,
        }
    }

    fn is_punct(&self) -> bool {
        self.role == Role::Punct || self.upos == "PUNCT"
    }

    fn is_function(&self) -> bool {
        matches!(self.upos.as_str(), "ADP" | "CCONJ" | "SCONJ" | "PART")
    }
}

/// Morphemes of an eojeol in surface order with the chosen head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphemeAnalysis {
    pub morphemes: Vec<Morpheme>,
    pub head_index: usize,
    /// Lemma and XPOS segment counts disagreed; the token was kept whole.
    pub degraded: bool,
}

impl MorphemeAnalysis {
    pub fn len(&self) -> usize {
        self.morphemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphemes.is_empty()
    }

    pub fn head(&self) -> &Morpheme {
        &self.morphemes[self.head_index]
    }

    pub fn unknown_tags(&self) -> impl Iterator<Item = &str> {
        self.morphemes.iter().filter(|m| !m.known).map(|m| m.xtag.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("token {token_id} has an empty lemma")]
    EmptyLemma { token_id: usize },
    #[error("token {token_id} has an empty XPOS")]
    EmptyXpos { token_id: usize },
}

/// Pairs `+`-separated lemma segments with `+`-separated tags.
///
/// Returns `None` when the counts differ or a segment is empty, in which case
/// the token is treated as a single morpheme.
pub fn split_segments<'a>(lemma: &'a str, xpos: &'a str) -> Option<Vec<(&'a str, &'a str)>> {
    let segments: Vec<&str> = lemma.split('+').collect();
    let tags: Vec<&str> = xpos.split('+').collect();
    if segments.len() != tags.len() || segments.iter().chain(&tags).any(|s| s.is_empty()) {
        return None;
    }
    Some(segments.into_iter().zip(tags).collect())
}

/// Number of morphemes `segment_token` produces for this token.
pub fn morpheme_count(token: &Token) -> usize {
    split_segments(&token.lemma, &token.xpos).map_or(1, |pairs| pairs.len())
}

fn is_missing(value: &str) -> bool {
    value.is_empty() || value == EMPTY
}

/// Splits a token into morphemes using its LEMMA and XPOS columns.
pub fn segment_token(token: &Token, tagmap: &TagMap) -> Result<MorphemeAnalysis, SegmentError> {
    // A literal "_" lemma is a legitimate form (the underscore character).
    if token.lemma.is_empty() || (token.lemma == EMPTY && token.form != EMPTY) {
        return Err(SegmentError::EmptyLemma { token_id: token.id });
    }
    if is_missing(&token.xpos) {
        return Err(SegmentError::EmptyXpos { token_id: token.id });
    }
    let (morphemes, degraded) = match split_segments(&token.lemma, &token.xpos) {
        Some(pairs) => (
            pairs
                .into_iter()
                .map(|(segment, xtag)| Morpheme::new(segment, xtag, tagmap))
                .collect::<Vec<_>>(),
            false,
        ),
        None => {
            let pieces = token.lemma.split('+').count();
            let tags = token.xpos.split('+').count();
            log::warn!(
                "token {} ({}): {} lemma segments but {} tags, keeping it whole",
                token.id,
                token.form,
                pieces,
                tags
            );
            (vec![Morpheme::new(token.lemma.clone(), token.xpos.clone(), tagmap)], true)
        }
    };
    let head_index = find_head(&morphemes, tagmap);
    Ok(MorphemeAnalysis {
        morphemes,
        head_index,
        degraded,
    })
}

fn last_of_class(morphemes: &[Morpheme], class: HeadClass) -> Option<usize> {
    morphemes
        .iter()
        .rposition(|m| m.role.head_class() == Some(class))
}

/// Picks the head morpheme of an eojeol.
///
/// Nominals win (last one), then verbs (first one), then the fallback classes
/// in tag-map order (last member of the first non-empty class). Particles,
/// adpositions and conjunctions head only eojeols made of nothing else but
/// punctuation. Anything left defaults to the first morpheme.
pub fn find_head(morphemes: &[Morpheme], tagmap: &TagMap) -> usize {
    if let Some(i) = last_of_class(morphemes, HeadClass::Nominal) {
        return i;
    }
    if let Some(i) = morphemes
        .iter()
        .position(|m| m.role.head_class() == Some(HeadClass::Verbal))
    {
        return i;
    }
    for &class in tagmap.fallback_order() {
        if let Some(i) = last_of_class(morphemes, class) {
            return i;
        }
    }
    let only_function = morphemes
        .iter()
        .filter(|m| !m.is_punct())
        .all(Morpheme::is_function);
    if only_function {
        if let Some(i) = morphemes.iter().rposition(Morpheme::is_function) {
            return i;
        }
    }
    0
}

/// Where the eojeol head sits relative to a dependent morpheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeadPosition {
    Before,
    After,
}

/// Relation label attaching a non-head morpheme to its eojeol head.
pub fn intra_eojeol_deprel(morpheme: &Morpheme, head_position: HeadPosition) -> &'static str {
    match morpheme.role {
        Role::Case => "case",
        Role::Aux => "aux",
        Role::Punct => "punct",
        Role::Compound => "compound",
        Role::Dep => "dep",
        Role::HeadEligible(HeadClass::Nominal | HeadClass::Numeral)
            if head_position == HeadPosition::After =>
        {
            "compound"
        }
        Role::HeadEligible(_) => "dep",
    }
}
