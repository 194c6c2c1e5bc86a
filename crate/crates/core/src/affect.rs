//! Emotional dispositions, affect vectors and prosodic annotation.
//!
//! A disposition selects a fixed 17-slot acoustic parameter vector from a
//! palette. Every utterance is also tokenised and annotated with part of
//! speech, an accent likelihood that decays with repeated mention, and the
//! positions of possible phrase boundaries.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::lexicon::{normalize_word, Lexicon, PosTag};
use crate::social::SocialStructure;

pub const PALETTE_FORMAT_VERSION: u32 = 1;
pub const AFFECT_MIN: i32 = -10;
pub const AFFECT_MAX: i32 = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AffectError {
    #[error("malformed palette: {0}")]
    Json(String),
    #[error("unsupported palette format-version {0}")]
    Version(u32),
    #[error("palette has no entry for `{0}`")]
    MissingDisposition(Disposition),
    #[error("`{disposition}` defines {found} parameters, expected 17")]
    Arity { disposition: String, found: usize },
    #[error("`{disposition}` has unknown parameter `{name}`")]
    UnknownParameter { disposition: String, name: String },
    #[error("`{disposition}`.{name} = {value} lies outside [-10, 10]")]
    Range {
        disposition: String,
        name: String,
        value: i64,
    },
    #[error("unknown disposition `{0}`")]
    UnknownDisposition(String),
    #[error("cannot annotate empty text")]
    EmptyText,
    #[error("speaker `{0}` has no disposition")]
    UnknownSpeaker(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Disposition {
    Angry,
    Annoyed,
    Disgusted,
    Distraught,
    Gruff,
    Pleasant,
    Sad,
    #[default]
    Neutral,
}

impl Disposition {
    pub const ALL: [Disposition; 8] = [
        Disposition::Angry,
        Disposition::Annoyed,
        Disposition::Disgusted,
        Disposition::Distraught,
        Disposition::Gruff,
        Disposition::Pleasant,
        Disposition::Sad,
        Disposition::Neutral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Disposition::Angry => "angry",
            Disposition::Annoyed => "annoyed",
            Disposition::Disgusted => "disgusted",
            Disposition::Distraught => "distraught",
            Disposition::Gruff => "gruff",
            Disposition::Pleasant => "pleasant",
            Disposition::Sad => "sad",
            Disposition::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Disposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Disposition {
    type Err = AffectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Disposition::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| AffectError::UnknownDisposition(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterGroup {
    Pitch,
    Timing,
    VoiceQuality,
    Articulation,
}

/// Slot names, grouped pitch, timing, voice quality, articulation.
pub const PARAMETERS: [(&str, ParameterGroup); 17] = [
    ("accent-shape", ParameterGroup::Pitch),
    ("average-pitch", ParameterGroup::Pitch),
    ("contour-slope", ParameterGroup::Pitch),
    ("final-lowering", ParameterGroup::Pitch),
    ("pitch-range", ParameterGroup::Pitch),
    ("reference-line", ParameterGroup::Pitch),
    ("fluent-pauses", ParameterGroup::Timing),
    ("hesitation-pauses", ParameterGroup::Timing),
    ("speech-rate", ParameterGroup::Timing),
    ("stress-frequency", ParameterGroup::Timing),
    ("pause-discontinuity", ParameterGroup::Timing),
    ("breathiness", ParameterGroup::VoiceQuality),
    ("brilliance", ParameterGroup::VoiceQuality),
    ("laryngealization", ParameterGroup::VoiceQuality),
    ("loudness", ParameterGroup::VoiceQuality),
    ("pitch-discontinuity", ParameterGroup::VoiceQuality),
    ("precision-of-articulation", ParameterGroup::Articulation),
];

/// Seventeen acoustic adjustments around a neutral zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AffectVector([i8; 17]);

impl AffectVector {
    pub const NEUTRAL: AffectVector = AffectVector([0; 17]);

    pub fn new(values: [i8; 17]) -> Result<AffectVector, AffectError> {
        for (i, v) in values.iter().enumerate() {
            if !(AFFECT_MIN..=AFFECT_MAX).contains(&i32::from(*v)) {
                return Err(AffectError::Range {
                    disposition: String::new(),
                    name: PARAMETERS[i].0.to_string(),
                    value: i64::from(*v),
                });
            }
        }
        Ok(AffectVector(values))
    }

    pub fn values(&self) -> &[i8; 17] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, name: &str) -> Option<i8> {
        PARAMETERS
            .iter()
            .position(|(n, _)| *n == name)
            .map(|i| self.0[i])
    }

    pub fn is_neutral(&self) -> bool {
        self.0.iter().all(|v| *v == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, i8)> + '_ {
        PARAMETERS.iter().zip(self.0).map(|((n, _), v)| (*n, v))
    }
}

impl Serialize for AffectVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(17))?;
        for (name, v) in self.iter() {
            map.serialize_entry(name, &v)?;
        }
        map.end()
    }
}

#[derive(Debug, Deserialize)]
struct PaletteFile {
    format_version: u32,
    dispositions: BTreeMap<String, BTreeMap<String, i64>>,
}

/// Disposition → affect vector table.
#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    vectors: BTreeMap<Disposition, AffectVector>,
}

impl Palette {
    /// Parse a palette. All seven non-neutral dispositions are required.
    pub fn from_json(text: &str) -> Result<Palette, AffectError> {
        let file: PaletteFile =
            serde_json::from_str(text).map_err(|e| AffectError::Json(e.to_string()))?;
        if file.format_version != PALETTE_FORMAT_VERSION {
            return Err(AffectError::Version(file.format_version));
        }
        let mut vectors = BTreeMap::new();
        for (name, params) in &file.dispositions {
            let d: Disposition = name.parse()?;
            vectors.insert(d, parse_vector(name, params)?);
        }
        for d in Disposition::ALL {
            if d != Disposition::Neutral && !vectors.contains_key(&d) {
                return Err(AffectError::MissingDisposition(d));
            }
        }
        vectors.insert(Disposition::Neutral, AffectVector::NEUTRAL);
        Ok(Palette { vectors })
    }

    pub fn vector(&self, d: Disposition) -> AffectVector {
        disposition_vector(d, self)
    }
}

fn parse_vector(name: &str, params: &BTreeMap<String, i64>) -> Result<AffectVector, AffectError> {
    if let Some(unknown) = params
        .keys()
        .find(|k| !PARAMETERS.iter().any(|(n, _)| n == k))
    {
        return Err(AffectError::UnknownParameter {
            disposition: name.to_string(),
            name: unknown.clone(),
        });
    }
    if params.len() != PARAMETERS.len() {
        return Err(AffectError::Arity {
            disposition: name.to_string(),
            found: params.len(),
        });
    }
    let mut values = [0i8; 17];
    for (i, (param, _)) in PARAMETERS.iter().enumerate() {
        let v = params[*param];
        if !(i64::from(AFFECT_MIN)..=i64::from(AFFECT_MAX)).contains(&v) {
            return Err(AffectError::Range {
                disposition: name.to_string(),
                name: param.to_string(),
                value: v,
            });
        }
        values[i] = v as i8;
    }
    Ok(AffectVector(values))
}

/// The palette's vector for a disposition; neutral is always zero.
pub fn disposition_vector(d: Disposition, palette: &Palette) -> AffectVector {
    match d {
        Disposition::Neutral => AffectVector::NEUTRAL,
        d => palette.vectors.get(&d).copied().unwrap_or_default(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotatedToken {
    pub surface: String,
    pub pos: PosTag,
    pub lemma: String,
    pub accent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotatedUtterance {
    pub text: String,
    pub tokens: Vec<AnnotatedToken>,
    /// Gap indices: `i` is the boundary after the `i`-th token (1-based).
    pub boundaries: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProsodyRecord {
    pub speaker: String,
    pub disposition: Disposition,
    pub affect: AffectVector,
    pub utterance: AnnotatedUtterance,
}

/// Clause-final adjuncts that open their own intonational phrase.
const FINAL_ADJUNCTS: [&[&str]; 3] = [&["right", "away"], &["yet"], &["please"]];

/// Annotates the utterances of one dialogue, tracking prior mentions.
#[derive(Debug, Clone)]
pub struct Annotator<'a> {
    lexicon: &'a Lexicon,
    mentions: HashMap<String, i32>,
}

impl<'a> Annotator<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Annotator<'a> {
        Annotator {
            lexicon,
            mentions: HashMap::new(),
        }
    }

    pub fn annotate(&mut self, text: &str) -> Result<AnnotatedUtterance, AffectError> {
        let mut words: Vec<(String, bool)> = Vec::new();
        for chunk in text.split_whitespace() {
            let word = chunk.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'');
            let word = word.trim_matches('\'');
            let trailing = chunk.ends_with(|c: char| !c.is_alphanumeric() && c != '\'');
            if word.is_empty() {
                if let Some(last) = words.last_mut() {
                    last.1 = true;
                }
                continue;
            }
            words.push((word.to_string(), trailing));
        }
        if words.is_empty() {
            return Err(AffectError::EmptyText);
        }

        let mut boundaries = BTreeSet::new();
        let lowered: Vec<String> = words.iter().map(|(w, _)| normalize_word(w)).collect();
        for (i, (_, punct)) in words.iter().enumerate() {
            if *punct {
                boundaries.insert(i + 1);
            }
        }
        for adjunct in FINAL_ADJUNCTS {
            let n = adjunct.len();
            for start in 1..lowered.len() {
                let end = start + n;
                if end <= lowered.len()
                    && lowered[start..end].iter().zip(adjunct).all(|(a, b)| a == b)
                    && (end == lowered.len() || words[end - 1].1)
                {
                    boundaries.insert(start);
                }
            }
        }

        let accent = *self.lexicon.accent();
        let decay = self.lexicon.givenness_decay();
        let tokens = words
            .into_iter()
            .zip(lowered)
            .map(|((surface, _), norm)| {
                let (pos, lemma) = match self.lexicon.word(&surface) {
                    Some(info) => (info.pos, info.lemma.clone()),
                    None => (PosTag::Unknown, norm),
                };
                let seen = self.mentions.entry(lemma.clone()).or_insert(0);
                let likelihood = accent.get(pos) * decay.powi(*seen);
                *seen += 1;
                AnnotatedToken {
                    surface,
                    pos,
                    lemma,
                    accent: likelihood,
                }
            })
            .collect();
        Ok(AnnotatedUtterance {
            text: text.to_string(),
            tokens,
            boundaries: boundaries.into_iter().collect(),
        })
    }
}

/// Annotate a single utterance with no dialogue history.
pub fn annotate(text: &str, lexicon: &Lexicon) -> Result<AnnotatedUtterance, AffectError> {
    Annotator::new(lexicon).annotate(text)
}

/// Pair an annotation with the speaker's disposition vector.
pub fn emit_record(
    utterance: AnnotatedUtterance,
    speaker: &str,
    social: &SocialStructure,
    palette: &Palette,
) -> Result<ProsodyRecord, AffectError> {
    let disposition = social
        .disposition(speaker)
        .map_err(|_| AffectError::UnknownSpeaker(speaker.to_string()))?;
    Ok(ProsodyRecord {
        speaker: speaker.to_string(),
        disposition,
        affect: disposition_vector(disposition, palette),
        utterance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::social::ImpositionTable;
    use proptest::prelude::*;

    fn palette_json(skip: Option<&str>, arity: usize) -> String {
        let mut dispositions = serde_json::Map::new();
        for (k, d) in Disposition::ALL.iter().enumerate() {
            if *d == Disposition::Neutral || Some(d.as_str()) == skip {
                continue;
            }
            let params: serde_json::Map<_, _> = PARAMETERS
                .iter()
                .take(arity)
                .enumerate()
                .map(|(i, (n, _))| (n.to_string(), serde_json::json!(((i + k) % 21) as i64 - 10)))
                .collect();
            dispositions.insert(d.as_str().into(), params.into());
        }
        serde_json::json!({"format_version": 1, "dispositions": dispositions}).to_string()
    }

    const LEX: &str = r#"{
        "format_version": 1,
        "entries": {
            "bring": {"category": "verb",
                "forms": {"base": "bring", "third_singular": "brings", "past": "brought",
                          "past_participle": "brought", "progressive": "bringing"}},
            "us": {"category": "pronoun"},
            "two": {"category": "modifier"},
            "cointreaux": {"category": "noun-phrase"},
            "yet": {"category": "function"}
        }
    }"#;

    #[test]
    fn palette_structure() {
        let p = Palette::from_json(&palette_json(None, 17)).unwrap();
        for d in Disposition::ALL {
            let v = p.vector(d);
            assert_eq!(v.len(), 17);
            assert!(v.values().iter().all(|x| (-10..=10).contains(x)));
        }
        assert!(p.vector(Disposition::Neutral).is_neutral());
        assert!(!p.vector(Disposition::Angry).is_neutral());
    }

    #[test]
    fn palette_errors() {
        assert!(matches!(
            Palette::from_json(&palette_json(None, 16)),
            Err(AffectError::Arity { found: 16, .. })
        ));
        assert_eq!(
            Palette::from_json(&palette_json(Some("sad"), 17)),
            Err(AffectError::MissingDisposition(Disposition::Sad))
        );
        let bad = palette_json(None, 17).replace("\"loudness\":", "\"volume\":");
        assert!(matches!(
            Palette::from_json(&bad),
            Err(AffectError::UnknownParameter { .. })
        ));
    }

    #[test]
    fn neutral_stays_zero_even_if_configured() {
        let mut doc: serde_json::Value = serde_json::from_str(&palette_json(None, 17)).unwrap();
        let angry = doc["dispositions"]["angry"].clone();
        doc["dispositions"]["neutral"] = angry;
        let p = Palette::from_json(&doc.to_string()).unwrap();
        assert!(p.vector(Disposition::Neutral).is_neutral());
    }

    #[test]
    fn annotates_bring_us() {
        let lex = Lexicon::from_json(LEX).unwrap();
        let u = annotate("Bring us two cointreaux.", &lex).unwrap();
        let got: Vec<(&str, PosTag, f64)> = u
            .tokens
            .iter()
            .map(|t| (t.surface.as_str(), t.pos, t.accent))
            .collect();
        assert_eq!(
            got,
            vec![
                ("Bring", PosTag::Verb, 0.8),
                ("us", PosTag::Pronoun, 0.2),
                ("two", PosTag::Modifier, 0.7),
                ("cointreaux", PosTag::Noun, 0.9),
            ]
        );
        assert_eq!(u.boundaries, vec![4]);
        assert!(matches!(annotate("", &lex), Err(AffectError::EmptyText)));
        assert!(matches!(annotate(" . ", &lex), Err(AffectError::EmptyText)));
    }

    #[test]
    fn unknown_words_and_adjunct_boundaries() {
        let lex = Lexicon::from_json(LEX).unwrap();
        let u = annotate("Bring us two cointreaux yet.", &lex).unwrap();
        assert_eq!(u.boundaries, vec![4, 5]);
        let u = annotate("Zorp, bring us.", &lex).unwrap();
        assert_eq!(u.tokens[0].pos, PosTag::Unknown);
        assert_eq!(u.tokens[0].accent, 0.5);
        assert_eq!(u.boundaries, vec![1, 3]);
    }

    #[test]
    fn givenness_lowers_repeated_mentions() {
        let lex = Lexicon::from_json(LEX).unwrap();
        let mut a = Annotator::new(&lex);
        let first = a.annotate("Bring us two cointreaux.").unwrap();
        let second = a.annotate("Two cointreaux, please.").unwrap();
        assert!(second.tokens[1].accent < first.tokens[3].accent);
        assert_eq!(second.tokens[1].lemma, "cointreaux");
    }

    #[test]
    fn record_carries_speaker_vector() {
        let p = Palette::from_json(&palette_json(None, 17)).unwrap();
        let lex = Lexicon::from_json(LEX).unwrap();
        let mut s = SocialStructure::new(ImpositionTable::default());
        s.set_disposition("laszlo", Disposition::Angry);
        let u = annotate("Bring us two cointreaux.", &lex).unwrap();
        let r = emit_record(u.clone(), "laszlo", &s, &p).unwrap();
        assert_eq!(r.affect, p.vector(Disposition::Angry));
        assert_eq!(
            emit_record(u, "rick", &s, &p),
            Err(AffectError::UnknownSpeaker("rick".into()))
        );
    }

    proptest! {
        #[test]
        fn annotation_is_total(text in "[A-Za-z' ,.?]{1,60}") {
            let lex = Lexicon::from_json(LEX).unwrap();
            if let Ok(u) = annotate(&text, &lex) {
                prop_assert!(!u.tokens.is_empty());
                for t in &u.tokens {
                    prop_assert!((0.0..=1.0).contains(&t.accent));
                }
                prop_assert!(u.boundaries.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(u.boundaries.iter().all(|b| (1..=u.tokens.len()).contains(b)));
            }
        }
    }
}
