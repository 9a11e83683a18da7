//! Attachment scores and arc-level error analysis.
//!
//! Gold and system files must share tokenization: same sentence count, same
//! token count per sentence and identical forms. Confusion matrices are
//! indexed `[gold][system]`.

use std::fmt;
use std::ops::AddAssign;

use serde::Serialize;
use thiserror::Error;

use crate::conllu::{Sentence, Token};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("gold has {gold} sentences, system has {system}")]
    SentenceCount { gold: usize, system: usize },
    #[error("sentence {sentence}: gold has {gold} tokens, system has {system}")]
    TokenCount {
        sentence: usize,
        gold: usize,
        system: usize,
    },
    #[error("sentence {sentence}, token {token}: gold form `{gold}` differs from system form `{system}`")]
    FormMismatch {
        sentence: usize,
        token: usize,
        gold: String,
        system: String,
    },
}

/// How relation labels are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LabelMatch {
    /// Compare only the part before the first `:`.
    #[default]
    MainRelation,
    Exact,
}

impl LabelMatch {
    pub fn matches(self, gold: &str, system: &str) -> bool {
        match self {
            LabelMatch::Exact => gold == system,
            LabelMatch::MainRelation => main_relation(gold) == main_relation(system),
        }
    }
}

fn main_relation(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub total: usize,
    pub uas_correct: usize,
    pub las_correct: usize,
}

impl EvalReport {
    pub fn uas(&self) -> f64 {
        ratio(self.uas_correct, self.total)
    }

    pub fn las(&self) -> f64 {
        ratio(self.las_correct, self.total)
    }

    pub fn head_errors(&self) -> usize {
        self.total - self.uas_correct
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

impl AddAssign for EvalReport {
    fn add_assign(&mut self, rhs: Self) {
        self.total += rhs.total;
        self.uas_correct += rhs.uas_correct;
        self.las_correct += rhs.las_correct;
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LAS={:.4} UAS={:.4}", self.las(), self.uas())
    }
}

/// Checks that gold and system share tokenization.
pub fn check_alignment(gold: &[Sentence], system: &[Sentence]) -> Result<(), EvalError> {
    if gold.len() != system.len() {
        return Err(EvalError::SentenceCount {
            gold: gold.len(),
            system: system.len(),
        });
    }
    for (i, (g, s)) in gold.iter().zip(system).enumerate() {
        if g.len() != s.len() {
            return Err(EvalError::TokenCount {
                sentence: i + 1,
                gold: g.len(),
                system: s.len(),
            });
        }
        if let Some((gt, st)) = g.tokens.iter().zip(&s.tokens).find(|(a, b)| a.form != b.form) {
            return Err(EvalError::FormMismatch {
                sentence: i + 1,
                token: gt.id,
                gold: gt.form.clone(),
                system: st.form.clone(),
            });
        }
    }
    Ok(())
}

fn token_pairs<'a>(
    gold: &'a [Sentence],
    system: &'a [Sentence],
) -> impl Iterator<Item = (&'a Token, &'a Token)> {
    gold.iter()
        .zip(system)
        .flat_map(|(g, s)| g.tokens.iter().zip(&s.tokens))
}

/// LAS and UAS counts over a treebank.
pub fn score(gold: &[Sentence], system: &[Sentence], labels: LabelMatch) -> Result<EvalReport, EvalError> {
    check_alignment(gold, system)?;
    let mut report = EvalReport::default();
    for (g, s) in token_pairs(gold, system) {
        report.total += 1;
        if g.head == s.head {
            report.uas_correct += 1;
            if labels.matches(&g.deprel, &s.deprel) {
                report.las_correct += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Left,
    Right,
    ToRoot,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Left, Direction::Right, Direction::ToRoot];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn short(self) -> &'static str {
        match self {
            Direction::Left => "L",
            Direction::Right => "R",
            Direction::ToRoot => "O",
        }
    }
}

/// Left when the head precedes the token, Right when it follows.
pub fn direction_of(token: &Token) -> Direction {
    if token.head == 0 {
        Direction::ToRoot
    } else if token.head < token.id {
        Direction::Left
    } else {
        Direction::Right
    }
}

/// Which node sits at depth 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DepthConvention {
    /// The virtual root is 0, so the root token is 1.
    #[default]
    VirtualRoot,
    /// The root token itself is 0.
    RootToken,
}

/// Depth of every token in a sentence.
///
/// Tokens caught in a head cycle, which only occur in unrepaired system
/// output, get a depth larger than the sentence length.
pub fn depths(sentence: &Sentence, convention: DepthConvention) -> Vec<usize> {
    let n = sentence.len();
    let mut depth: Vec<Option<usize>> = vec![None; n];
    for start in 0..n {
        let mut path = Vec::new();
        let mut cur = start;
        let base = loop {
            if let Some(d) = depth[cur] {
                break d;
            }
            if path.len() > n {
                break n + 1;
            }
            path.push(cur);
            match sentence.tokens[cur].head {
                0 => break 0,
                h if h <= n => cur = h - 1,
                _ => break 0,
            }
        };
        for (k, &t) in path.iter().rev().enumerate() {
            if depth[t].is_none() {
                depth[t] = Some(base + k + 1);
            }
        }
    }
    let offset = match convention {
        DepthConvention::VirtualRoot => 0,
        DepthConvention::RootToken => 1,
    };
    depth
        .into_iter()
        .map(|d| d.unwrap_or(n + 1).saturating_sub(offset))
        .collect()
}

/// Head-hops from a token up to the virtual root.
pub fn depth_of(token: &Token, sentence: &Sentence) -> usize {
    depths(sentence, DepthConvention::VirtualRoot)[token.id - 1]
}

/// Which tokens contribute to a confusion matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConfusionFilter {
    /// Only tokens whose system head is wrong.
    #[default]
    ErrorsOnly,
    All,
}

impl ConfusionFilter {
    fn keep(self, gold: &Token, system: &Token) -> bool {
        match self {
            ConfusionFilter::All => true,
            ConfusionFilter::ErrorsOnly => gold.head != system.head,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DirectionConfusion {
    /// `counts[gold][system]` over Left, Right, ToRoot.
    pub counts: [[usize; 3]; 3],
}

impl DirectionConfusion {
    pub fn get(&self, gold: Direction, system: Direction) -> usize {
        self.counts[gold.index()][system.index()]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..3).map(|i| self.counts[i][i]).sum()
    }
}

impl AddAssign for DirectionConfusion {
    fn add_assign(&mut self, rhs: Self) {
        for (row, other) in self.counts.iter_mut().zip(rhs.counts) {
            for (c, o) in row.iter_mut().zip(other) {
                *c += o;
            }
        }
    }
}

pub fn direction_confusion(
    gold: &[Sentence],
    system: &[Sentence],
    filter: ConfusionFilter,
) -> Result<DirectionConfusion, EvalError> {
    check_alignment(gold, system)?;
    let mut matrix = DirectionConfusion::default();
    for (g, s) in token_pairs(gold, system).filter(|(g, s)| filter.keep(g, s)) {
        matrix.counts[direction_of(g).index()][direction_of(s).index()] += 1;
    }
    Ok(matrix)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthConfusion {
    pub cap: usize,
    /// `counts[gold][system]`, `(cap + 1)` square; deeper arcs clamp to `cap`.
    pub counts: Vec<Vec<usize>>,
}

impl DepthConfusion {
    pub fn new(cap: usize) -> Self {
        DepthConfusion {
            cap,
            counts: vec![vec![0; cap + 1]; cap + 1],
        }
    }

    pub fn get(&self, gold: usize, system: usize) -> usize {
        self.counts[gold.min(self.cap)][system.min(self.cap)]
    }

    pub fn add(&mut self, gold: usize, system: usize) {
        self.counts[gold.min(self.cap)][system.min(self.cap)] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..=self.cap).map(|i| self.counts[i][i]).sum()
    }

    pub fn merge(&mut self, other: &DepthConfusion) {
        assert_eq!(self.cap, other.cap, "depth caps differ");
        for (row, other) in self.counts.iter_mut().zip(&other.counts) {
            for (c, o) in row.iter_mut().zip(other) {
                *c += o;
            }
        }
    }
}

pub const DEFAULT_DEPTH_CAP: usize = 10;

pub fn depth_confusion(
    gold: &[Sentence],
    system: &[Sentence],
    cap: usize,
    filter: ConfusionFilter,
    convention: DepthConvention,
) -> Result<DepthConfusion, EvalError> {
    check_alignment(gold, system)?;
    let mut matrix = DepthConfusion::new(cap);
    for (g, s) in gold.iter().zip(system) {
        let gd = depths(g, convention);
        let sd = depths(s, convention);
        for (i, (gt, st)) in g.tokens.iter().zip(&s.tokens).enumerate() {
            if filter.keep(gt, st) {
                matrix.add(gd[i], sd[i]);
            }
        }
    }
    Ok(matrix)
}

/// Scores plus both confusion matrices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub report: EvalReport,
    pub direction: DirectionConfusion,
    pub depth: DepthConfusion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub labels: LabelMatch,
    pub filter: ConfusionFilter,
    pub depth_cap: usize,
    pub convention: DepthConvention,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            labels: LabelMatch::default(),
            filter: ConfusionFilter::default(),
            depth_cap: DEFAULT_DEPTH_CAP,
            convention: DepthConvention::default(),
        }
    }
}

pub fn analyze(gold: &[Sentence], system: &[Sentence], options: AnalysisOptions) -> Result<Analysis, EvalError> {
    Ok(Analysis {
        report: score(gold, system, options.labels)?,
        direction: direction_confusion(gold, system, options.filter)?,
        depth: depth_confusion(gold, system, options.depth_cap, options.filter, options.convention)?,
    })
}
