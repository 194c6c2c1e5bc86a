//! Lexical entries for the realizer and the annotator.
//!
//! Entries are keyed by lemma. Verb entries carry the five inflected forms
//! and a subcategorisation frame (which role is the subject and which roles
//! follow the verb, with optional prepositions). Noun phrases, proper nouns
//! and pronouns carry their surface text.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::speechact::role;

pub const LEXICON_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("malformed lexicon: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported lexicon format-version {0}")]
    Version(u32),
    #[error("verb `{0}` must define base, third_singular, past, past_participle and progressive forms")]
    IncompleteVerb(String),
    #[error("accent likelihood for `{0}` must lie in [0, 1]")]
    AccentRange(String),
    #[error("givenness decay must lie in (0, 1), got {0}")]
    DecayRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Verb,
    NounPhrase,
    ProperNoun,
    Pronoun,
    Modifier,
    Function,
}

/// Part-of-speech tag attached to annotated tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosTag {
    Verb,
    Noun,
    ProperNoun,
    Pronoun,
    Modifier,
    Function,
    Unknown,
}

impl From<Category> for PosTag {
    fn from(c: Category) -> Self {
        match c {
            Category::Verb => PosTag::Verb,
            Category::NounPhrase => PosTag::Noun,
            Category::ProperNoun => PosTag::ProperNoun,
            Category::Pronoun => PosTag::Pronoun,
            Category::Modifier => PosTag::Modifier,
            Category::Function => PosTag::Function,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    #[default]
    Singular,
    Plural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbForms {
    pub base: String,
    pub third_singular: String,
    pub past: String,
    pub past_participle: String,
    pub progressive: String,
}

impl VerbForms {
    fn is_complete(&self) -> bool {
        [
            &self.base,
            &self.third_singular,
            &self.past,
            &self.past_participle,
            &self.progressive,
        ]
        .iter()
        .all(|f| !f.trim().is_empty())
    }

    fn all(&self) -> [&str; 5] {
        [
            &self.base,
            &self.third_singular,
            &self.past,
            &self.past_participle,
            &self.progressive,
        ]
    }
}

/// A complement position in a verb frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EntryDoc {
    category: Category,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    forms: Option<VerbForms>,
    #[serde(default)]
    subject: Option<String>,
    #[serde(default)]
    complements: Vec<Slot>,
    #[serde(default)]
    number: Number,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub lemma: String,
    pub category: Category,
    /// Surface text for non-verbs; defaults to the lemma.
    pub text: String,
    pub forms: Option<VerbForms>,
    /// Role realised as the grammatical subject (verbs only).
    pub subject: String,
    pub complements: Vec<Slot>,
    pub number: Number,
}

/// Base accent likelihood per part of speech.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AccentTable {
    pub verb: f64,
    pub noun: f64,
    pub proper_noun: f64,
    pub pronoun: f64,
    pub modifier: f64,
    pub function: f64,
    pub unknown: f64,
}

impl Default for AccentTable {
    fn default() -> Self {
        AccentTable {
            verb: 0.8,
            noun: 0.9,
            proper_noun: 0.9,
            pronoun: 0.2,
            modifier: 0.7,
            function: 0.1,
            unknown: 0.5,
        }
    }
}

impl AccentTable {
    pub fn get(&self, pos: PosTag) -> f64 {
        match pos {
            PosTag::Verb => self.verb,
            PosTag::Noun => self.noun,
            PosTag::ProperNoun => self.proper_noun,
            PosTag::Pronoun => self.pronoun,
            PosTag::Modifier => self.modifier,
            PosTag::Function => self.function,
            PosTag::Unknown => self.unknown,
        }
    }

    fn check(&self) -> Result<(), LexiconError> {
        let named = [
            ("verb", self.verb),
            ("noun", self.noun),
            ("proper-noun", self.proper_noun),
            ("pronoun", self.pronoun),
            ("modifier", self.modifier),
            ("function", self.function),
            ("unknown", self.unknown),
        ];
        for (name, v) in named {
            if !(0.0..=1.0).contains(&v) {
                return Err(LexiconError::AccentRange(name.to_string()));
            }
        }
        Ok(())
    }
}

fn default_decay() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LexiconFile {
    format_version: u32,
    #[serde(default)]
    accent: AccentTable,
    #[serde(default = "default_decay")]
    givenness_decay: f64,
    entries: IndexMap<String, EntryDoc>,
}

/// Part of speech and lemma of a surface word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordInfo {
    pub pos: PosTag,
    pub lemma: String,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: IndexMap<String, LexEntry>,
    accent: AccentTable,
    givenness_decay: f64,
    words: HashMap<String, WordInfo>,
}

impl Lexicon {
    pub fn from_json(text: &str) -> Result<Lexicon, LexiconError> {
        let file: LexiconFile = serde_json::from_str(text)?;
        if file.format_version != LEXICON_FORMAT_VERSION {
            return Err(LexiconError::Version(file.format_version));
        }
        file.accent.check()?;
        if !(file.givenness_decay > 0.0 && file.givenness_decay < 1.0) {
            return Err(LexiconError::DecayRange(file.givenness_decay));
        }
        let mut lexicon = Lexicon {
            entries: IndexMap::new(),
            accent: file.accent,
            givenness_decay: file.givenness_decay,
            words: HashMap::new(),
        };
        for (lemma, doc) in file.entries {
            lexicon.insert(lemma, doc)?;
        }
        lexicon.index_words();
        Ok(lexicon)
    }

    fn insert(&mut self, lemma: String, doc: EntryDoc) -> Result<(), LexiconError> {
        if doc.category == Category::Verb && !doc.forms.as_ref().is_some_and(VerbForms::is_complete) {
            return Err(LexiconError::IncompleteVerb(lemma));
        }
        let entry = LexEntry {
            text: doc.text.unwrap_or_else(|| lemma.clone()),
            lemma: lemma.clone(),
            category: doc.category,
            forms: doc.forms,
            subject: doc.subject.unwrap_or_else(|| role::AGENT.to_string()),
            complements: doc.complements,
            number: doc.number,
        };
        self.entries.insert(lemma, entry);
        Ok(())
    }

    // Multi-word texts first, then verb forms, then single-word entries, so
    // that explicit single-word entries take precedence.
    fn index_words(&mut self) {
        let mut words = HashMap::new();
        for e in self.entries.values() {
            let parts: Vec<&str> = e.text.split_whitespace().collect();
            if parts.len() > 1 {
                for w in parts {
                    words.insert(
                        normalize_word(w),
                        WordInfo {
                            pos: e.category.into(),
                            lemma: normalize_word(w),
                        },
                    );
                }
            }
        }
        for e in self.entries.values() {
            if let Some(forms) = &e.forms {
                for f in forms.all() {
                    words.insert(
                        normalize_word(f),
                        WordInfo {
                            pos: PosTag::Verb,
                            lemma: e.lemma.clone(),
                        },
                    );
                }
            }
        }
        for e in self.entries.values() {
            if e.category != Category::Verb && !e.text.contains(char::is_whitespace) {
                words.insert(
                    normalize_word(&e.text),
                    WordInfo {
                        pos: e.category.into(),
                        lemma: e.lemma.clone(),
                    },
                );
            }
        }
        self.words = words;
    }

    pub fn entry(&self, lemma: &str) -> Option<&LexEntry> {
        self.entries.get(lemma)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    pub fn verb(&self, lemma: &str) -> Option<&LexEntry> {
        self.entry(lemma).filter(|e| e.category == Category::Verb)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(lemma)
    }

    /// Look up a surface word, case-insensitively.
    pub fn word(&self, surface: &str) -> Option<&WordInfo> {
        self.words.get(&normalize_word(surface))
    }

    pub fn accent(&self) -> &AccentTable {
        &self.accent
    }

    pub fn givenness_decay(&self) -> f64 {
        self.givenness_decay
    }
}

pub(crate) fn normalize_word(w: &str) -> String {
    w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'')
        .replace('\u{2019}', "'")
        .to_lowercase()
}
