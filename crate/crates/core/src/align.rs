use thiserror::Error;

/// Morpheme span of one word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordSpan {
    /// First morpheme id (1-based, inclusive).
    pub first: usize,
    /// Last morpheme id (inclusive).
    pub last: usize,
    /// Morpheme id carrying the word's external arc.
    pub head: usize,
}

impl WordSpan {
    pub fn contains(&self, morph_id: usize) -> bool {
        (self.first..=self.last).contains(&morph_id)
    }

    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("word {word}: span starts at morpheme {found}, expected {expected}")]
    Gap {
        word: usize,
        expected: usize,
        found: usize,
    },
    #[error("word {word}: empty span")]
    EmptySpan { word: usize },
    #[error("word {word}: head morpheme {head} outside its span")]
    HeadOutsideSpan { word: usize, head: usize },
    #[error("spans cover {covered} morphemes but the sentence has {total}")]
    Coverage { covered: usize, total: usize },
}

/// Word-to-morpheme pairing for one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentMap {
    spans: Vec<WordSpan>,
    total: usize,
}

impl AlignmentMap {
    /// Builds a map, checking that spans are contiguous, ordered and cover
    /// `1..=total`, and that each head lies inside its span.
    pub fn new(spans: Vec<WordSpan>, total: usize) -> Result<Self, AlignError> {
        let mut next = 1;
        for (i, span) in spans.iter().enumerate() {
            let word = i + 1;
            if span.first != next {
                return Err(AlignError::Gap {
                    word,
                    expected: next,
                    found: span.first,
                });
            }
            if span.last < span.first {
                return Err(AlignError::EmptySpan { word });
            }
            if !span.contains(span.head) {
                return Err(AlignError::HeadOutsideSpan {
                    word,
                    head: span.head,
                });
            }
            next = span.last + 1;
        }
        if next - 1 != total {
            return Err(AlignError::Coverage {
                covered: next - 1,
                total,
            });
        }
        Ok(AlignmentMap { spans, total })
    }

    /// Spans from per-word morpheme counts and 0-based head offsets.
    pub fn from_counts<I>(counts: I) -> Result<Self, AlignError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut spans = Vec::new();
        let mut next = 1;
        for (count, head_offset) in counts {
            if count == 0 {
                return Err(AlignError::EmptySpan {
                    word: spans.len() + 1,
                });
            }
            spans.push(WordSpan {
                first: next,
                last: next + count - 1,
                head: next + head_offset,
            });
            next += count;
        }
        Self::new(spans, next - 1)
    }

    pub fn spans(&self) -> &[WordSpan] {
        &self.spans
    }

    /// Span of a 1-based word id.
    pub fn span(&self, word_id: usize) -> Option<&WordSpan> {
        word_id.checked_sub(1).and_then(|i| self.spans.get(i))
    }

    pub fn word_count(&self) -> usize {
        self.spans.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// 1-based word id containing a morpheme.
    pub fn word_of(&self, morph_id: usize) -> Option<usize> {
        if morph_id == 0 || morph_id > self.total {
            return None;
        }
        let idx = self.spans.partition_point(|s| s.last < morph_id);
        Some(idx + 1)
    }

    /// Head morpheme id of a word, with word 0 mapping to 0.
    pub fn head_morpheme(&self, word_id: usize) -> Option<usize> {
        if word_id == 0 {
            return Some(0);
        }
        self.span(word_id).map(|s| s.head)
    }
}
