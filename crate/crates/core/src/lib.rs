//! Conversion between eojeol-level and morpheme-level Korean Universal
//! Dependencies treebanks, and evaluation of parser output.
//!
//! The forward direction ([`word2morph`]) splits each eojeol into the
//! morphemes given by its `+`-joined LEMMA and XPOS columns, picks a head
//! morpheme that inherits the eojeol's arc and attaches the rest to it. The
//! backward direction ([`morph2word`]) recovers eojeol-level arcs from a
//! morpheme-level tree, so that parsers trained on morphemes can be scored
//! against the original treebank with [`eval`].

pub mod align;
pub mod conllu;
pub mod corpus;
pub mod eval;
pub mod morph2word;
pub mod morphsplit;
pub mod synthetic;
pub mod tagmap;
pub mod word2morph;

pub use align::{AlignError, AlignmentMap, WordSpan};
pub use conllu::{emit_conllu, parse_conllu, parse_str, ConlluError, ParseMode, Sentence, Token, TreeError};
pub use corpus::{export_corpus, export_sentence, ExportMode};
pub use eval::{
    analyze, depth_confusion, depth_of, direction_confusion, direction_of, score, Analysis, AnalysisOptions,
    ConfusionFilter, DepthConfusion, DepthConvention, Direction, DirectionConfusion, EvalError, EvalReport,
    LabelMatch,
};
pub use morph2word::{pair_tokens, revert_sentence, revert_sentences, revert_treebank, RepairReport, RevertError};
pub use morphsplit::{find_head, intra_eojeol_deprel, segment_token, HeadPosition, Morpheme, MorphemeAnalysis};
pub use tagmap::{HeadClass, Role, TagMap, TagMapError};
pub use word2morph::{convert_sentence, convert_sentences, convert_treebank, Conversion, ConversionSummary, ConvertError};
