//! Reading and writing CoNLL-U treebanks.
//!
//! Token columns are kept as strings so that annotations this crate does not
//! interpret (features, enhanced dependencies, misc) pass through unchanged.
//! Only ID and HEAD are parsed into integers.

use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

/// Placeholder for an unspecified column value.
pub const EMPTY: &str = "_";

/// One CoNLL-U token row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// A token with every string column set to `_`.
    pub fn new(id: usize, form: impl Into<String>) -> Self {
        Token {
            id,
            form: form.into(),
            lemma: EMPTY.into(),
            upos: EMPTY.into(),
            xpos: EMPTY.into(),
            feats: EMPTY.into(),
            head: 0,
            deprel: EMPTY.into(),
            deps: EMPTY.into(),
            misc: EMPTY.into(),
        }
    }

    pub fn is_root(&self) -> bool {
        self.head == 0
    }

    /// Value of a `Key=Value` entry in the MISC column.
    pub fn misc_get(&self, key: &str) -> Option<&str> {
        misc_entries(&self.misc).find_map(|entry| match entry.split_once('=') {
            Some((k, v)) if k == key => Some(v),
            _ => None,
        })
    }

    /// Iterator over the `|`-separated MISC entries, skipping the placeholder.
    pub fn misc_iter(&self) -> impl Iterator<Item = &str> {
        misc_entries(&self.misc)
    }
}

fn misc_entries(misc: &str) -> impl Iterator<Item = &str> {
    misc.split('|').filter(|e| !e.is_empty() && *e != EMPTY)
}

/// Whether a dependency label is `root` or a subtype of it (`root:foo`).
pub fn is_root_label(deprel: &str) -> bool {
    deprel == "root" || deprel.starts_with("root:")
}

/// Joins MISC entries, yielding `_` for an empty list.
pub fn join_misc<I, S>(entries: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for entry in entries {
        if !out.is_empty() {
            out.push('|');
        }
        out.push_str(entry.as_ref());
    }
    if out.is_empty() {
        EMPTY.to_string()
    } else {
        out
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = |s: &str| if s.is_empty() { EMPTY.to_string() } else { s.to_string() };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            col(&self.form),
            col(&self.lemma),
            col(&self.upos),
            col(&self.xpos),
            col(&self.feats),
            self.head,
            col(&self.deprel),
            col(&self.deps),
            col(&self.misc),
        )
    }
}

/// Structural problems with a sentence's dependency tree.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token ids are not contiguous: expected {expected}, found {found}")]
    NonContiguousIds { expected: usize, found: usize },
    #[error("token {id} has head {head} outside the sentence")]
    HeadOutOfRange { id: usize, head: usize },
    #[error("token {id} is its own head")]
    SelfLoop { id: usize },
    #[error("sentence has no root token")]
    NoRoot,
    #[error("sentence has multiple roots (tokens {first} and {second})")]
    MultipleRoots { first: usize, second: usize },
    #[error("token {id}: deprel `{deprel}` does not agree with head {head}")]
    RootLabel {
        id: usize,
        head: usize,
        deprel: String,
    },
    #[error("cyclic head assignment through token {id}")]
    Cycle { id: usize },
}

/// Comment lines and tokens of one sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(comments: Vec<String>, tokens: Vec<Token>) -> Self {
        Sentence { comments, tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based id.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let rest = c.strip_prefix('#')?.trim_start();
            let (k, v) = rest.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.comment_value("sent_id")
    }

    pub fn text(&self) -> Option<&str> {
        self.comment_value("text")
    }

    /// Surface text rebuilt from FORM and `SpaceAfter=No`.
    pub fn surface_text(&self) -> String {
        let mut out = String::new();
        for (i, token) in self.tokens.iter().enumerate() {
            out.push_str(&token.form);
            if i + 1 < self.tokens.len() && token.misc_get("SpaceAfter") != Some("No") {
                out.push(' ');
            }
        }
        out
    }

    /// Replaces the `# text =` comment, appending one if absent.
    pub fn set_text(&mut self, text: &str) {
        let line = format!("# text = {}", text);
        match self.comments.iter().position(|c| {
            c.strip_prefix('#')
                .and_then(|r| r.trim_start().split_once('='))
                .is_some_and(|(k, _)| k.trim() == "text")
        }) {
            Some(i) => self.comments[i] = line,
            None => self.comments.push(line),
        }
    }

    /// Heads indexed by token position.
    pub fn heads(&self) -> Vec<usize> {
        self.tokens.iter().map(|t| t.head).collect()
    }

    /// Checks ids, head range, single root, root labels and acyclicity.
    pub fn validate(&self) -> Result<(), TreeError> {
        if self.tokens.is_empty() {
            return Err(TreeError::Empty);
        }
        let n = self.tokens.len();
        let mut root = None;
        for (i, token) in self.tokens.iter().enumerate() {
            if token.id != i + 1 {
                return Err(TreeError::NonContiguousIds {
                    expected: i + 1,
                    found: token.id,
                });
            }
            if token.head > n {
                return Err(TreeError::HeadOutOfRange {
                    id: token.id,
                    head: token.head,
                });
            }
            if token.head == token.id {
                return Err(TreeError::SelfLoop { id: token.id });
            }
            if (token.head == 0) != is_root_label(&token.deprel) {
                return Err(TreeError::RootLabel {
                    id: token.id,
                    head: token.head,
                    deprel: token.deprel.clone(),
                });
            }
            if token.head == 0 {
                if let Some(first) = root {
                    return Err(TreeError::MultipleRoots {
                        first,
                        second: token.id,
                    });
                }
                root = Some(token.id);
            }
        }
        if root.is_none() {
            return Err(TreeError::NoRoot);
        }
        find_cycle(&self.heads()).map_or(Ok(()), |id| Err(TreeError::Cycle { id }))
    }
}

/// Returns the smallest token id lying on a head cycle, if any.
///
/// `heads[i]` is the head of token `i + 1`; heads outside `1..=n` end a path.
pub fn find_cycle(heads: &[usize]) -> Option<usize> {
    let n = heads.len();
    // 0 = unvisited, 1 = on current path, 2 = finished
    let mut state = vec![0u8; n + 1];
    for start in 1..=n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while cur >= 1 && cur <= n && state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            cur = heads[cur - 1];
        }
        if cur >= 1 && cur <= n && state[cur] == 1 {
            let pos = path.iter().position(|&t| t == cur).unwrap();
            return path[pos..].iter().copied().min();
        }
        for t in path {
            state[t] = 2;
        }
    }
    None
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for comment in &self.comments {
            writeln!(f, "{}", comment.trim_end())?;
        }
        for token in &self.tokens {
            writeln!(f, "{}", token)?;
        }
        writeln!(f)
    }
}

/// How much validation the reader applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Every sentence must be a single-rooted tree; multiword tokens and
    /// empty nodes are errors.
    #[default]
    Strict,
    /// Tree shape is not checked and multiword tokens and empty nodes are
    /// skipped with a warning. Used for parser predictions.
    Lenient,
}

#[derive(Debug, Error)]
pub enum ConlluError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: invalid token id `{value}`")]
    BadId { line: usize, value: String },
    #[error("line {line}: invalid head `{value}`")]
    BadHead { line: usize, value: String },
    #[error("line {line}: multiword token range `{value}` is not supported")]
    MultiwordToken { line: usize, value: String },
    #[error("line {line}: empty node `{value}` is not supported")]
    EmptyNode { line: usize, value: String },
    #[error("line {line}: comment inside a sentence")]
    MisplacedComment { line: usize },
    #[error("line {line}: sentence has comments but no tokens")]
    NoTokens { line: usize },
    #[error("sentence starting at line {line}{}: {source}", sent_label(.sent_id))]
    Tree {
        line: usize,
        sent_id: Option<String>,
        #[source]
        source: TreeError,
    },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

fn sent_label(sent_id: &Option<String>) -> String {
    match sent_id {
        Some(id) => format!(" (sent_id {})", id),
        None => String::new(),
    }
}

struct Pending {
    start_line: usize,
    comments: Vec<String>,
    tokens: Vec<Token>,
}

impl Pending {
    fn new(start_line: usize) -> Self {
        Pending {
            start_line,
            comments: Vec::new(),
            tokens: Vec::new(),
        }
    }

    fn is_empty(&self) -> bool {
        self.comments.is_empty() && self.tokens.is_empty()
    }
}

fn normalize_column(value: &str) -> String {
    if value.is_empty() {
        EMPTY.to_string()
    } else {
        value.to_string()
    }
}

fn parse_token(line_no: usize, line: &str, mode: ParseMode) -> Result<Option<Token>, ConlluError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(ConlluError::ColumnCount {
            line: line_no,
            found: cols.len(),
        });
    }
    let id_col = cols[0];
    if id_col.contains('-') || id_col.contains('.') {
        let multiword = id_col.contains('-');
        match mode {
            ParseMode::Strict if multiword => {
                return Err(ConlluError::MultiwordToken {
                    line: line_no,
                    value: id_col.into(),
                })
            }
            ParseMode::Strict => {
                return Err(ConlluError::EmptyNode {
                    line: line_no,
                    value: id_col.into(),
                })
            }
            ParseMode::Lenient => {
                log::warn!("line {}: skipping unsupported token id `{}`", line_no, id_col);
                return Ok(None);
            }
        }
    }
    let id = id_col
        .parse::<usize>()
        .ok()
        .filter(|&id| id > 0)
        .ok_or_else(|| ConlluError::BadId {
            line: line_no,
            value: id_col.into(),
        })?;
    let head = cols[6].parse::<usize>().map_err(|_| ConlluError::BadHead {
        line: line_no,
        value: cols[6].into(),
    })?;
    Ok(Some(Token {
        id,
        form: normalize_column(cols[1]),
        lemma: normalize_column(cols[2]),
        upos: normalize_column(cols[3]),
        xpos: normalize_column(cols[4]),
        feats: normalize_column(cols[5]),
        head,
        deprel: normalize_column(cols[7]),
        deps: normalize_column(cols[8]),
        misc: normalize_column(cols[9]),
    }))
}

fn finish(pending: Pending, mode: ParseMode, out: &mut Vec<Sentence>) -> Result<(), ConlluError> {
    if pending.is_empty() {
        return Ok(());
    }
    if pending.tokens.is_empty() {
        return Err(ConlluError::NoTokens {
            line: pending.start_line,
        });
    }
    let sentence = Sentence::new(pending.comments, pending.tokens);
    let check = match mode {
        ParseMode::Strict => sentence.validate(),
        ParseMode::Lenient => check_lenient(&sentence),
    };
    if let Err(source) = check {
        return Err(ConlluError::Tree {
            line: pending.start_line,
            sent_id: sentence.sent_id().map(str::to_string),
            source,
        });
    }
    out.push(sentence);
    Ok(())
}

/// Lenient mode still needs ids and heads that index into the sentence.
fn check_lenient(sentence: &Sentence) -> Result<(), TreeError> {
    let n = sentence.len();
    for (i, token) in sentence.tokens.iter().enumerate() {
        if token.id != i + 1 {
            return Err(TreeError::NonContiguousIds {
                expected: i + 1,
                found: token.id,
            });
        }
        if token.head > n {
            return Err(TreeError::HeadOutOfRange {
                id: token.id,
                head: token.head,
            });
        }
    }
    Ok(())
}

/// Parses every sentence from a CoNLL-U stream.
pub fn parse_conllu<R: BufRead>(reader: R, mode: ParseMode) -> Result<Vec<Sentence>, ConlluError> {
    let mut sentences = Vec::new();
    let mut pending = Pending::new(1);
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            let done = std::mem::replace(&mut pending, Pending::new(line_no + 1));
            finish(done, mode, &mut sentences)?;
            continue;
        }
        if pending.is_empty() {
            pending.start_line = line_no;
        }
        if line.starts_with('#') {
            if !pending.tokens.is_empty() {
                return Err(ConlluError::MisplacedComment { line: line_no });
            }
            pending.comments.push(line.trim_end().to_string());
            continue;
        }
        if let Some(token) = parse_token(line_no, line, mode)? {
            pending.tokens.push(token);
        }
    }
    finish(pending, mode, &mut sentences)?;
    Ok(sentences)
}

/// Parses CoNLL-U from an in-memory string.
pub fn parse_str(input: &str, mode: ParseMode) -> Result<Vec<Sentence>, ConlluError> {
    parse_conllu(input.as_bytes(), mode)
}

/// Renders sentences as CoNLL-U text.
pub fn emit_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        out.push_str(&sentence.to_string());
    }
    out
}

pub fn write_conllu<W: Write>(mut writer: W, sentences: &[Sentence]) -> std::io::Result<()> {
    for sentence in sentences {
        write!(writer, "{}", sentence)?;
    }
    writer.flush()
}
