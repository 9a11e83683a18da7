//! Mapping from language-specific morpheme tags to universal POS tags and
//! intra-eojeol roles.
//!
//! The file format is line oriented:
//!
//! ```text
//! # comment
//! !fallback   pronoun adjective adverb numeral determiner interjection
//! !default    X   dep
//! NNG         NOUN    head    nominal
//! JKG         ADP     case
//! ```
//!
//! Columns are tab separated. Regular lines are `XTAG UPOS ROLE [CLASS]`.
//! `ROLE` is one of `head`, `compound`, `case`, `aux`, `punct`, `dep`;
//! `head` rows carry a head class, inferred from the UPOS when omitted.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

const SEJONG: &str = include_str!("../tagmaps/sejong.map");
const KAIST: &str = include_str!("../tagmaps/kaist.map");

/// Classes of morphemes that may head an eojeol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeadClass {
    Nominal,
    Verbal,
    Pronoun,
    Adjective,
    Adverb,
    Numeral,
    Determiner,
    Interjection,
}

impl HeadClass {
    /// Classes searched after nominals and verbals, in default order.
    pub const FALLBACK: [HeadClass; 6] = [
        HeadClass::Pronoun,
        HeadClass::Adjective,
        HeadClass::Adverb,
        HeadClass::Numeral,
        HeadClass::Determiner,
        HeadClass::Interjection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HeadClass::Nominal => "nominal",
            HeadClass::Verbal => "verbal",
            HeadClass::Pronoun => "pronoun",
            HeadClass::Adjective => "adjective",
            HeadClass::Adverb => "adverb",
            HeadClass::Numeral => "numeral",
            HeadClass::Determiner => "determiner",
            HeadClass::Interjection => "interjection",
        }
    }

    fn from_upos(upos: &str) -> Option<Self> {
        Some(match upos {
            "NOUN" | "PROPN" => HeadClass::Nominal,
            "VERB" => HeadClass::Verbal,
            "PRON" => HeadClass::Pronoun,
            "ADJ" => HeadClass::Adjective,
            "ADV" => HeadClass::Adverb,
            "NUM" => HeadClass::Numeral,
            "DET" => HeadClass::Determiner,
            "INTJ" => HeadClass::Interjection,
            _ => return None,
        })
    }
}

impl FromStr for HeadClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "nominal" | "noun" => HeadClass::Nominal,
            "verbal" | "verb" => HeadClass::Verbal,
            "pronoun" => HeadClass::Pronoun,
            "adjective" => HeadClass::Adjective,
            "adverb" => HeadClass::Adverb,
            "numeral" => HeadClass::Numeral,
            "determiner" => HeadClass::Determiner,
            "interjection" => HeadClass::Interjection,
            other => return Err(format!("unknown head class `{}`", other)),
        })
    }
}

impl fmt::Display for HeadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a morpheme does inside its eojeol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    HeadEligible(HeadClass),
    Compound,
    Case,
    Aux,
    Punct,
    Dep,
}

impl Role {
    pub fn head_class(self) -> Option<HeadClass> {
        match self {
            Role::HeadEligible(class) => Some(class),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::HeadEligible(class) => write!(f, "head({})", class),
            Role::Compound => f.write_str("compound"),
            Role::Case => f.write_str("case"),
            Role::Aux => f.write_str("aux"),
            Role::Punct => f.write_str("punct"),
            Role::Dep => f.write_str("dep"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagEntry {
    pub upos: String,
    pub role: Role,
}

#[derive(Debug, Error)]
pub enum TagMapError {
    #[error("tag map line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown built-in tag map `{0}` (expected `sejong` or `kaist`)")]
    UnknownBuiltin(String),
    #[error("cannot read tag map {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Tag table plus head-search configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagMap {
    entries: HashMap<String, TagEntry>,
    fallback: Vec<HeadClass>,
    default: TagEntry,
}

impl Default for TagMap {
    fn default() -> Self {
        TagMap {
            entries: HashMap::new(),
            fallback: HeadClass::FALLBACK.to_vec(),
            default: TagEntry {
                upos: "X".into(),
                role: Role::Dep,
            },
        }
    }
}

impl TagMap {
    /// Profile for the Sejong-style tags used by ko_gsd.
    pub fn sejong() -> Self {
        SEJONG.parse().expect("bundled Sejong tag map is valid")
    }

    /// Profile for the KAIST tags used by ko_kaist.
    pub fn kaist() -> Self {
        KAIST.parse().expect("bundled KAIST tag map is valid")
    }

    pub fn builtin(name: &str) -> Result<Self, TagMapError> {
        match name {
            "sejong" | "gsd" => Ok(Self::sejong()),
            "kaist" => Ok(Self::kaist()),
            other => Err(TagMapError::UnknownBuiltin(other.into())),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TagMapError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TagMapError::Io {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    /// Loads `source` as a file if it exists, otherwise as a built-in name.
    pub fn resolve(source: &str) -> Result<Self, TagMapError> {
        if Path::new(source).exists() {
            Self::load(source)
        } else {
            Self::builtin(source).or_else(|_| Self::load(source))
        }
    }

    /// Entry for a tag; `None` means the default entry applies.
    pub fn get(&self, xtag: &str) -> Option<&TagEntry> {
        self.entries.get(xtag)
    }

    pub fn lookup(&self, xtag: &str) -> &TagEntry {
        self.entries.get(xtag).unwrap_or(&self.default)
    }

    pub fn default_entry(&self) -> &TagEntry {
        &self.default
    }

    pub fn fallback_order(&self) -> &[HeadClass] {
        &self.fallback
    }

    pub fn insert(&mut self, xtag: impl Into<String>, upos: impl Into<String>, role: Role) {
        self.entries.insert(
            xtag.into(),
            TagEntry {
                upos: upos.into(),
                role,
            },
        );
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn parse_role(line: usize, upos: &str, role: &str, class: Option<&str>) -> Result<Role, TagMapError> {
    let err = |message: String| TagMapError::Syntax { line, message };
    let role = match role {
        "head" => {
            let class = match class {
                Some(c) => c.parse().map_err(err)?,
                None => HeadClass::from_upos(upos).ok_or_else(|| {
                    err(format!("head role with UPOS `{}` needs an explicit class", upos))
                })?,
            };
            return Ok(Role::HeadEligible(class));
        }
        "compound" => Role::Compound,
        "case" => Role::Case,
        "aux" => Role::Aux,
        "punct" => Role::Punct,
        "dep" => Role::Dep,
        other => return Err(err(format!("unknown role `{}`", other))),
    };
    if class.is_some() {
        return Err(err("only head rows take a class column".into()));
    }
    Ok(role)
}

impl FromStr for TagMap {
    type Err = TagMapError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut map = TagMap::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = content.split('\t').filter(|c| !c.is_empty()).collect();
            let err = |message: String| TagMapError::Syntax { line, message };
            match cols[0] {
                "!fallback" => {
                    let mut order = Vec::new();
                    for name in &cols[1..] {
                        let class: HeadClass = name.parse().map_err(err)?;
                        if !HeadClass::FALLBACK.contains(&class) {
                            return Err(err(format!("`{}` cannot be a fallback class", class)));
                        }
                        if order.contains(&class) {
                            return Err(err(format!("`{}` listed twice", class)));
                        }
                        order.push(class);
                    }
                    if order.len() != HeadClass::FALLBACK.len() {
                        return Err(err(format!(
                            "fallback order must list all of: {}",
                            HeadClass::FALLBACK.map(HeadClass::name).join(" ")
                        )));
                    }
                    map.fallback = order;
                }
                "!default" => {
                    if cols.len() != 3 {
                        return Err(err("expected `!default UPOS ROLE`".into()));
                    }
                    let role = parse_role(line, cols[1], cols[2], None)?;
                    map.default = TagEntry {
                        upos: cols[1].into(),
                        role,
                    };
                }
                directive if directive.starts_with('!') => {
                    return Err(err(format!("unknown directive `{}`", directive)));
                }
                xtag => {
                    if !(3..=4).contains(&cols.len()) {
                        return Err(err(format!("expected 3 or 4 columns, found {}", cols.len())));
                    }
                    let role = parse_role(line, cols[1], cols[2], cols.get(3).copied())?;
                    if map.entries.contains_key(xtag) {
                        return Err(err(format!("duplicate tag `{}`", xtag)));
                    }
                    map.insert(xtag, cols[1], role);
                }
            }
        }
        Ok(map)
    }
}
