//! Seeded inputs shared by the benchmarks.

use morphud::synthetic::{corrupt_treebank, random_treebank};
use morphud::{convert_sentences, Sentence, TagMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Word-level treebank of `sentences` random sentences (up to 24 eojeols each).
pub fn word_treebank(sentences: usize, seed: u64) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_treebank(&mut rng, sentences, 24, &TagMap::sejong())
}

/// Morpheme-level conversion of `words`, plus a copy with a fraction of heads moved.
pub fn morph_pair(words: &[Sentence], fraction: f64, seed: u64) -> (Vec<Sentence>, Vec<Sentence>) {
    let (morph, _) = convert_sentences(words, &TagMap::sejong(), false).expect("synthetic input converts");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let predicted = corrupt_treebank(&morph, fraction, &mut rng);
    (morph, predicted)
}
