//! Scripts, social configuration and the per-utterance loop.
//!
//! For each speech act of a script the speaker's distance to the hearer,
//! the hearer's power and the act's imposition give a threat value, the
//! threat selects a band, the band and a seeded rng select a strategy, and
//! the strategy's spec is rendered. Turns with several acts join their
//! sentences. Every line can carry a trace and a prosody record.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::affect::{emit_record, AffectError, Annotator, Disposition, Palette, ProsodyRecord};
use crate::lexicon::Lexicon;
use crate::realizer::{Perspective, RealizeError, Realizer};
use crate::roster::{Agent, Roster};
use crate::social::{
    ImpositionTable, SocialError, SocialStructure, StrategyBand, MAX_SOCIAL_VALUE,
};
use crate::speechact::{
    instantiate_act, ActContent, ActError, DomainAct, Polarity, Proposition, SpeechActInstance,
    SpeechActType, Tense, Term,
};
use crate::strategy::{
    apply, applicable_strategies, select_strategy, StrategyContext, StrategyError, StrategyId,
    DEFAULT_SUBSTITUTION_PROBABILITY,
};

pub const SCRIPT_FORMAT_VERSION: u32 = 1;
pub const SOCIAL_FORMAT_VERSION: u32 = 1;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 183_725;

/// Seed fixed for the documented Casablanca runs.
pub const CASABLANCA_SEED: u64 = DEFAULT_SEED;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed {what}: {error}")]
    Json {
        what: &'static str,
        error: serde_json::Error,
    },
    #[error("unsupported {what} format-version {found} (expected {expected})")]
    Version {
        what: &'static str,
        found: u32,
        expected: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionDoc {
    pub predicate: String,
    #[serde(default)]
    pub args: IndexMap<String, String>,
    #[serde(default)]
    pub polarity: Polarity,
    #[serde(default)]
    pub tense: Tense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainActDoc {
    pub verb: String,
    pub agent: String,
    #[serde(default)]
    pub recipient: Option<String>,
    #[serde(default)]
    pub theme: Option<String>,
    #[serde(default)]
    pub preconditions: Vec<PropositionDoc>,
    #[serde(default)]
    pub decomposition: Vec<PropositionDoc>,
    #[serde(default)]
    pub effects: Vec<PropositionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActDoc {
    #[serde(rename = "type")]
    pub act_type: String,
    #[serde(default)]
    pub action: Option<String>,
    #[serde(default)]
    pub proposition: Option<PropositionDoc>,
    /// 1-based turn number of the act being answered.
    #[serde(default)]
    pub responds_to: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurnDoc {
    #[serde(default)]
    pub speaker: Option<String>,
    #[serde(default)]
    pub hearer: Option<String>,
    #[serde(default)]
    pub acts: Vec<ActDoc>,
    #[serde(default)]
    pub stage_direction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptDoc {
    pub format_version: u32,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub agents: Vec<Agent>,
    #[serde(default)]
    pub groups: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub domain_acts: IndexMap<String, DomainActDoc>,
    #[serde(default)]
    pub turns: Vec<TurnDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub speaker: String,
    pub hearer: String,
    pub distance: i64,
    pub hearer_power: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SocialDoc {
    pub format_version: u32,
    #[serde(default)]
    pub pairs: Vec<PairDoc>,
    #[serde(default)]
    pub dispositions: BTreeMap<String, String>,
    /// Overrides of the default imposition table.
    #[serde(default)]
    pub imposition: BTreeMap<String, i64>,
}

fn parse<T: for<'de> Deserialize<'de>>(what: &'static str, text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|error| FormatError::Json { what, error })
}

fn check_version(what: &'static str, found: u32, expected: u32) -> Result<(), FormatError> {
    if found == expected {
        Ok(())
    } else {
        Err(FormatError::Version {
            what,
            found,
            expected,
        })
    }
}

impl ScriptDoc {
    pub fn from_json(text: &str) -> Result<ScriptDoc, FormatError> {
        let doc: ScriptDoc = parse("script", text)?;
        check_version("script", doc.format_version, SCRIPT_FORMAT_VERSION)?;
        Ok(doc)
    }
}

impl SocialDoc {
    pub fn from_json(text: &str) -> Result<SocialDoc, FormatError> {
        let doc: SocialDoc = parse("social structure", text)?;
        check_version("social structure", doc.format_version, SOCIAL_FORMAT_VERSION)?;
        Ok(doc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Range,
    Reference,
    Constraint,
    Lexicon,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Range => "range",
            Category::Reference => "reference",
            Category::Constraint => "constraint",
            Category::Lexicon => "lexicon",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub category: Category,
    /// 1-based turn number, if the problem belongs to a turn.
    pub turn: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]", self.category)?;
        if let Some(t) = self.turn {
            write!(f, " turn {t}")?;
        }
        write!(f, ": {}", self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// A compiled turn.
#[derive(Debug, Clone, PartialEq)]
pub enum Turn {
    Stage(String),
    Speech {
        speaker: String,
        hearer: String,
        acts: Vec<SpeechActInstance>,
    },
}

/// A validated dialogue ready to run.
#[derive(Debug, Clone)]
pub struct Dialogue {
    pub roster: Roster,
    pub social: SocialStructure,
    pub turns: Vec<Turn>,
}

struct Compiler<'a> {
    lexicon: &'a Lexicon,
    roster: Roster,
    diagnostics: Vec<Diagnostic>,
}

impl Compiler<'_> {
    fn error(&mut self, category: Category, turn: Option<usize>, message: impl Into<String>) {
        let d = Diagnostic {
            severity: Severity::Error,
            category,
            turn,
            message: message.into(),
        };
        if !self.diagnostics.contains(&d) {
            self.diagnostics.push(d);
        }
    }

    fn term(&mut self, id: &str, turn: Option<usize>) -> Term {
        if self.roster.is_known(id) {
            Term::agent(id)
        } else if id == "someone" {
            Term::Someone
        } else {
            if !self.lexicon.contains(id) {
                self.error(
                    Category::Lexicon,
                    turn,
                    format!("`{id}` is neither an agent nor a lexicon entry"),
                );
            }
            Term::lexeme(id)
        }
    }

    fn proposition(&mut self, doc: &PropositionDoc, turn: Option<usize>) -> Option<Proposition> {
        if self.lexicon.verb(&doc.predicate).is_none() {
            self.error(
                Category::Lexicon,
                turn,
                format!("predicate `{}` has no verb entry in the lexicon", doc.predicate),
            );
        }
        let args: Vec<(String, Term)> = doc
            .args
            .iter()
            .map(|(role, id)| (role.clone(), self.term(id, turn)))
            .collect();
        match Proposition::new(doc.predicate.clone(), args) {
            Ok(p) => Some(p.with_polarity(doc.polarity).with_tense(doc.tense)),
            Err(e) => {
                self.error(Category::Constraint, turn, e.to_string());
                None
            }
        }
    }

    fn domain_act(&mut self, name: &str, doc: &DomainActDoc) -> Option<DomainAct> {
        if self.lexicon.verb(&doc.verb).is_none() {
            self.error(
                Category::Lexicon,
                None,
                format!("domain act `{name}` uses verb `{}` missing from the lexicon", doc.verb),
            );
        }
        if self.roster.agent(&doc.agent).is_none() {
            self.error(
                Category::Reference,
                None,
                format!("domain act `{name}` has unknown agent `{}`", doc.agent),
            );
        }
        let mut b = DomainAct::builder(name, doc.verb.clone(), doc.agent.clone());
        if let Some(r) = &doc.recipient {
            b = b.recipient(self.term(r, None));
        }
        if let Some(t) = &doc.theme {
            b = b.theme(self.term(t, None));
        }
        let mut ok = true;
        for p in &doc.preconditions {
            match self.proposition(p, None) {
                Some(p) => b = b.precondition(p),
                None => ok = false,
            }
        }
        for p in &doc.decomposition {
            match self.proposition(p, None) {
                Some(p) => b = b.decomposition(p),
                None => ok = false,
            }
        }
        for p in &doc.effects {
            match self.proposition(p, None) {
                Some(p) => b = b.effect(p),
                None => ok = false,
            }
        }
        match b.build() {
            Ok(act) if ok => Some(act),
            Ok(_) => None,
            Err(e) => {
                self.error(Category::Constraint, None, e.to_string());
                None
            }
        }
    }

    fn social(&mut self, doc: &SocialDoc) -> SocialStructure {
        let mut overrides = Vec::new();
        for (name, value) in &doc.imposition {
            match name.parse::<SpeechActType>() {
                Err(_) => self.error(
                    Category::Reference,
                    None,
                    format!("imposition given for unknown act type `{name}`"),
                ),
                Ok(_) if !(0..=i64::from(MAX_SOCIAL_VALUE)).contains(value) => self.error(
                    Category::Range,
                    None,
                    format!("R({name}) = {value} lies outside [0, {MAX_SOCIAL_VALUE}]"),
                ),
                Ok(t) => overrides.push((t, *value)),
            }
        }
        let table = ImpositionTable::with_overrides(overrides).unwrap_or_default();
        let mut social = SocialStructure::new(table);
        for pair in &doc.pairs {
            for id in [&pair.speaker, &pair.hearer] {
                if self.roster.agent(id).is_none() {
                    self.error(
                        Category::Reference,
                        None,
                        format!("social pair names unknown agent `{id}`"),
                    );
                }
            }
            let (s, h) = (&pair.speaker, &pair.hearer);
            let mut in_range = true;
            for (label, v) in [(format!("D({s}, {h})"), pair.distance), (format!("P({h}, {s})"), pair.hearer_power)] {
                if !(0..=i64::from(MAX_SOCIAL_VALUE)).contains(&v) {
                    in_range = false;
                    self.error(
                        Category::Range,
                        None,
                        format!("{label} = {v} lies outside [0, {MAX_SOCIAL_VALUE}]"),
                    );
                }
            }
            if in_range {
                social
                    .set_pair(s.clone(), h.clone(), pair.distance, pair.hearer_power)
                    .expect("range checked");
            }
        }
        for (agent, name) in &doc.dispositions {
            if self.roster.agent(agent).is_none() {
                self.error(
                    Category::Reference,
                    None,
                    format!("disposition given for unknown agent `{agent}`"),
                );
            }
            match name.parse::<Disposition>() {
                Ok(d) => social.set_disposition(agent.clone(), d),
                Err(e) => self.error(Category::Reference, None, e.to_string()),
            }
        }
        social
    }

    // Render every candidate of every band once so that no social setting
    // can hit a missing lexeme at run time.
    fn dry_run(&mut self, act: &SpeechActInstance, turn: usize) {
        let ctx = context(&self.roster, act.speaker(), act.hearer());
        let realizer = Realizer::new(self.lexicon, &self.roster);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut found = Vec::new();
        let mut seen = BTreeSet::new();
        for band in StrategyBand::ALL {
            for id in applicable_strategies(act, band) {
                if !seen.insert(id) {
                    continue;
                }
                let outcome = apply(act, id, &ctx, &mut rng)
                    .map_err(RunFailure::Strategy)
                    .and_then(|spec| realizer.render(&spec).map_err(RunFailure::Realize));
                if let Err(e) = outcome {
                    found.push((e.category(), format!("{} via {id}: {}", act.act_type(), e)));
                }
            }
        }
        for (category, message) in found {
            self.error(category, Some(turn), message);
        }
    }
}

enum RunFailure {
    Strategy(StrategyError),
    Realize(RealizeError),
}

impl RunFailure {
    fn category(&self) -> Category {
        match self {
            RunFailure::Realize(RealizeError::MissingLexeme(_) | RealizeError::NotAVerb(_)) => {
                Category::Lexicon
            }
            RunFailure::Realize(RealizeError::UnresolvableReferent(_)) => Category::Reference,
            _ => Category::Constraint,
        }
    }
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunFailure::Strategy(e) => write!(f, "{e}"),
            RunFailure::Realize(e) => write!(f, "{e}"),
        }
    }
}

fn context(roster: &Roster, speaker: &str, hearer: &str) -> StrategyContext {
    StrategyContext {
        perspective: Perspective::new(speaker, hearer, roster),
        hearer_name: roster
            .agent(hearer)
            .map_or(hearer.to_string(), |a| a.addressed_as().to_string()),
        address_form: roster.address_form(speaker).to_string(),
    }
}

/// Check a script and social structure, and build the dialogue if clean.
pub fn compile(
    script: &ScriptDoc,
    social: &SocialDoc,
    lexicon: &Lexicon,
) -> (Option<Dialogue>, Vec<Diagnostic>) {
    let mut c = Compiler {
        lexicon,
        roster: Roster::new(),
        diagnostics: Vec::new(),
    };

    let mut ids = BTreeSet::new();
    for agent in &script.agents {
        if !ids.insert(agent.id.clone()) {
            c.error(Category::Reference, None, format!("agent `{}` defined twice", agent.id));
        }
        c.roster.add_agent(agent.clone());
    }
    for (group, members) in &script.groups {
        if ids.contains(group) {
            c.error(Category::Reference, None, format!("group `{group}` reuses an agent id"));
        }
        for m in members {
            if !ids.contains(m) {
                c.error(
                    Category::Reference,
                    None,
                    format!("group `{group}` lists unknown agent `{m}`"),
                );
            }
        }
        c.roster.add_group(group.clone(), members.iter().cloned());
    }

    let mut domain_acts: HashMap<String, Arc<DomainAct>> = HashMap::new();
    for (name, doc) in &script.domain_acts {
        if let Some(act) = c.domain_act(name, doc) {
            domain_acts.insert(name.clone(), Arc::new(act));
        }
    }

    let social = c.social(social);

    let mut turns = Vec::new();
    // Initiating acts per 1-based turn, for `responds_to` lookups.
    let mut initiated: HashMap<usize, Vec<SpeechActInstance>> = HashMap::new();
    for (i, doc) in script.turns.iter().enumerate() {
        let n = i + 1;
        if let Some(stage) = &doc.stage_direction {
            if doc.speaker.is_some() || doc.hearer.is_some() || !doc.acts.is_empty() {
                c.error(
                    Category::Constraint,
                    Some(n),
                    "a stage direction cannot also carry speech acts",
                );
            }
            turns.push(Turn::Stage(stage.clone()));
            continue;
        }
        let (Some(speaker), Some(hearer)) = (&doc.speaker, &doc.hearer) else {
            c.error(Category::Constraint, Some(n), "turn needs a speaker and a hearer");
            continue;
        };
        let mut parties_ok = true;
        for id in [speaker, hearer] {
            if c.roster.agent(id).is_none() {
                parties_ok = false;
                c.error(Category::Reference, Some(n), format!("unknown agent `{id}`"));
            }
        }
        if parties_ok {
            if social.pair(speaker, hearer).is_err() {
                c.error(
                    Category::Reference,
                    Some(n),
                    format!("no D/P values for the pair ({speaker}, {hearer})"),
                );
            }
            if social.disposition(speaker).is_err() {
                c.error(
                    Category::Reference,
                    Some(n),
                    format!("no disposition for `{speaker}`"),
                );
            }
        }
        if doc.acts.is_empty() {
            c.error(Category::Constraint, Some(n), "turn has no speech acts");
        }
        let mut acts = Vec::new();
        for act in &doc.acts {
            let act_type = match act.act_type.parse::<SpeechActType>() {
                Ok(t) => t,
                Err(e) => {
                    c.error(Category::Reference, Some(n), e.to_string());
                    continue;
                }
            };
            let mut content: Option<ActContent> = None;
            if let Some(name) = &act.action {
                match domain_acts.get(name) {
                    Some(d) => content = Some(ActContent::Action(Arc::clone(d))),
                    None if script.domain_acts.contains_key(name) => {}
                    None => c.error(
                        Category::Reference,
                        Some(n),
                        format!("unknown domain act `{name}`"),
                    ),
                }
            }
            if let Some(p) = &act.proposition {
                if let Some(p) = c.proposition(p, Some(n)) {
                    content = Some(ActContent::Proposition(p));
                }
            }
            if let Some(target) = act.responds_to {
                match act_type.responds_to() {
                    None => c.error(
                        Category::Constraint,
                        Some(n),
                        format!("{act_type} does not respond to anything"),
                    ),
                    Some(expected) => {
                        let answered = initiated
                            .get(&target)
                            .and_then(|acts| acts.iter().find(|a| a.act_type() == expected));
                        match answered {
                            Some(a) if content.is_none() => content = Some(a.content().clone()),
                            Some(_) => {}
                            None => c.error(
                                Category::Reference,
                                Some(n),
                                format!("turn {target} has no {expected} for this {act_type} to answer"),
                            ),
                        }
                    }
                }
            }
            let Some(content) = content else {
                if act.action.is_none() && act.proposition.is_none() && act.responds_to.is_none() {
                    c.error(
                        Category::Reference,
                        Some(n),
                        format!("{act_type} has no content"),
                    );
                }
                continue;
            };
            match instantiate_act(act_type, speaker, hearer, content) {
                Ok(inst) => acts.push(inst),
                Err(e @ (ActError::AgentConstraint { .. } | ActError::ContentMismatch { .. })) => {
                    c.error(Category::Constraint, Some(n), e.to_string())
                }
                Err(e) => c.error(Category::Constraint, Some(n), e.to_string()),
            }
        }
        if parties_ok {
            for act in &acts {
                c.dry_run(act, n);
            }
        }
        initiated.insert(
            n,
            acts.iter()
                .filter(|a| a.act_type().is_initiating())
                .cloned()
                .collect(),
        );
        turns.push(Turn::Speech {
            speaker: speaker.clone(),
            hearer: hearer.clone(),
            acts,
        });
    }

    let diagnostics = c.diagnostics;
    let dialogue = (!has_errors(&diagnostics)).then_some(Dialogue {
        roster: c.roster,
        social,
        turns,
    });
    (dialogue, diagnostics)
}

/// All diagnostics for a script, social structure and lexicon.
pub fn validate(script: &ScriptDoc, social: &SocialDoc, lexicon: &Lexicon) -> Vec<Diagnostic> {
    compile(script, social, lexicon).1
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub substitution_probability: f64,
    pub contractions: bool,
    /// Strategies forced for (turn, act), both 1-based.
    pub forced: BTreeMap<(usize, usize), StrategyId>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            substitution_probability: DEFAULT_SUBSTITUTION_PROBABILITY,
            contractions: true,
            forced: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> RunConfig {
        RunConfig {
            seed,
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("substitution probability {0} lies outside [0, 1]")]
    Probability(f64),
    #[error("turn {turn}: {error}")]
    Social { turn: usize, error: SocialError },
    #[error("turn {turn}, act {act}: {error}")]
    Strategy {
        turn: usize,
        act: usize,
        error: StrategyError,
    },
    #[error("turn {turn}, act {act}: {error}")]
    Realize {
        turn: usize,
        act: usize,
        error: RealizeError,
    },
    #[error("turn {turn}: {error}")]
    Affect { turn: usize, error: AffectError },
    #[error("forced strategy for turn {turn}, act {act} does not match any act")]
    NoSuchAct { turn: usize, act: usize },
}

/// How one act of a line was realised.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActTrace {
    pub act: SpeechActType,
    #[serde(rename = "D")]
    pub distance: u8,
    #[serde(rename = "P")]
    pub power: u8,
    #[serde(rename = "R")]
    pub imposition: u8,
    pub theta: u8,
    pub band: StrategyBand,
    pub position: f64,
    pub strategy: StrategyId,
    /// Band whose candidates were used, after any fallback.
    pub strategy_band: StrategyBand,
    pub substituted: bool,
    pub forced: bool,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Utterance {
    pub turn: usize,
    pub speaker: String,
    pub speaker_name: String,
    pub hearer: String,
    pub text: String,
    pub acts: Vec<ActTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prosody: Option<ProsodyRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Line {
    Stage { turn: usize, direction: String },
    Speech(Box<Utterance>),
}

impl Line {
    pub fn utterance(&self) -> Option<&Utterance> {
        match self {
            Line::Speech(u) => Some(u),
            Line::Stage { .. } => None,
        }
    }

    /// `Name: text`, or a stage direction in parentheses.
    pub fn to_text(&self) -> String {
        match self {
            Line::Stage { direction, .. } => format!("({direction})"),
            Line::Speech(u) => format!("{}: {}", u.speaker_name, u.text),
        }
    }

    /// One JSON record, with the trace and prosody parts as requested.
    pub fn to_json(&self, trace: bool, prosody: bool) -> serde_json::Value {
        match self {
            Line::Stage { turn, direction } => json!({"turn": turn, "stage_direction": direction}),
            Line::Speech(u) => {
                let mut v = json!({
                    "turn": u.turn,
                    "speaker": u.speaker,
                    "hearer": u.hearer,
                    "text": u.text,
                });
                if trace {
                    v["acts"] = serde_json::to_value(&u.acts).expect("serialisable trace");
                }
                if prosody {
                    if let Some(p) = &u.prosody {
                        v["prosody"] = serde_json::to_value(p).expect("serialisable record");
                    }
                }
                v
            }
        }
    }
}

/// Run a compiled dialogue. Prosody records are attached when a palette is given.
pub fn run_dialogue(
    dialogue: &Dialogue,
    lexicon: &Lexicon,
    palette: Option<&Palette>,
    config: &RunConfig,
) -> Result<Vec<Line>, RunError> {
    let p_sub = config.substitution_probability;
    if !(0.0..=1.0).contains(&p_sub) {
        return Err(RunError::Probability(p_sub));
    }
    for &(turn, act) in config.forced.keys() {
        let exists = matches!(
            dialogue.turns.get(turn.wrapping_sub(1)),
            Some(Turn::Speech { acts, .. }) if act >= 1 && act <= acts.len()
        );
        if !exists {
            return Err(RunError::NoSuchAct { turn, act });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let realizer = Realizer::new(lexicon, &dialogue.roster).with_contractions(config.contractions);
    let mut annotator = Annotator::new(lexicon);
    let mut lines = Vec::with_capacity(dialogue.turns.len());

    for (i, turn) in dialogue.turns.iter().enumerate() {
        let n = i + 1;
        let (speaker, hearer, acts) = match turn {
            Turn::Stage(direction) => {
                lines.push(Line::Stage {
                    turn: n,
                    direction: direction.clone(),
                });
                continue;
            }
            Turn::Speech {
                speaker,
                hearer,
                acts,
            } => (speaker, hearer, acts),
        };
        let ctx = context(&dialogue.roster, speaker, hearer);
        let mut traces = Vec::with_capacity(acts.len());
        for (j, act) in acts.iter().enumerate() {
            let a = j + 1;
            let assessment = dialogue
                .social
                .assess(speaker, hearer, act.act_type())
                .map_err(|error| RunError::Social { turn: n, error })?;
            let (strategy, strategy_band, substituted, forced) =
                match config.forced.get(&(n, a)) {
                    Some(id) => (*id, id.band(), false, true),
                    None => {
                        let s = select_strategy(
                            act,
                            assessment.band,
                            assessment.position,
                            p_sub,
                            &mut rng,
                        );
                        (s.strategy, s.band, s.substituted, false)
                    }
                };
            let spec = apply(act, strategy, &ctx, &mut rng).map_err(|error| RunError::Strategy {
                turn: n,
                act: a,
                error,
            })?;
            let text = realizer.render(&spec).map_err(|error| RunError::Realize {
                turn: n,
                act: a,
                error,
            })?;
            traces.push(ActTrace {
                act: act.act_type(),
                distance: assessment.distance.get(),
                power: assessment.power.get(),
                imposition: assessment.imposition.get(),
                theta: assessment.theta.get(),
                band: assessment.band,
                position: assessment.position,
                strategy,
                strategy_band,
                substituted,
                forced,
                text,
            });
        }
        let text = traces
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let prosody = match palette {
            Some(palette) => {
                let annotated = annotator
                    .annotate(&text)
                    .map_err(|error| RunError::Affect { turn: n, error })?;
                Some(
                    emit_record(annotated, speaker, &dialogue.social, palette)
                        .map_err(|error| RunError::Affect { turn: n, error })?,
                )
            }
            None => None,
        };
        lines.push(Line::Speech(Box::new(Utterance {
            turn: n,
            speaker: speaker.clone(),
            speaker_name: dialogue
                .roster
                .agent(speaker)
                .map_or(speaker.clone(), |a| a.name.clone()),
            hearer: hearer.clone(),
            text,
            acts: traces,
            prosody,
        })));
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn casablanca(social: &str) -> (ScriptDoc, SocialDoc, Lexicon) {
        (
            ScriptDoc::from_json(bundled::CASABLANCA_SCRIPT).unwrap(),
            SocialDoc::from_json(social).unwrap(),
            bundled::lexicon(),
        )
    }

    #[test]
    fn bundled_corpora_validate_clean() {
        let (script, social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        assert_eq!(validate(&script, &social, &lex), vec![]);
        let social = SocialDoc::from_json(bundled::CASABLANCA_RUN2_SOCIAL).unwrap();
        assert_eq!(validate(&script, &social, &lex), vec![]);
        let script = ScriptDoc::from_json(bundled::RESTAURANT_SCRIPT).unwrap();
        let social = SocialDoc::from_json(bundled::RESTAURANT_SOCIAL).unwrap();
        assert_eq!(validate(&script, &social, &lex), vec![]);
    }

    #[test]
    fn out_of_range_distance() {
        let (script, mut social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        social.pairs[0].distance = 60;
        let d = validate(&script, &social, &lex);
        assert!(d.iter().any(|d| d.category == Category::Range && d.message.contains("[0, 50]")));
    }

    #[test]
    fn speaker_as_agent_request() {
        let (mut script, social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        // Laszlo asks the waiter to perform an act whose agent is Laszlo.
        script.domain_acts["serve-cointreaux"].agent = "laszlo".into();
        script.domain_acts["serve-cointreaux"].decomposition[0]
            .args
            .insert("agent".into(), "laszlo".into());
        let d = validate(&script, &social, &lex);
        assert!(d
            .iter()
            .any(|d| d.category == Category::Constraint && d.turn == Some(6)));
    }

    #[test]
    fn broken_reference() {
        let (mut script, social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        script.turns[5].acts[0].action = Some("serve-champagne".into());
        let d = validate(&script, &social, &lex);
        assert!(d
            .iter()
            .any(|d| d.category == Category::Reference && d.turn == Some(6)));
    }

    #[test]
    fn missing_lexeme_is_reported() {
        let (mut script, social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        script.domain_acts["serve-cointreaux"].theme = Some("absinthe".into());
        let d = validate(&script, &social, &lex);
        assert!(d.iter().any(|d| d.category == Category::Lexicon));
    }

    #[test]
    fn empty_script_runs_to_nothing() {
        let (mut script, social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        script.turns.clear();
        let (dialogue, d) = compile(&script, &social, &lex);
        assert!(d.is_empty());
        let lines = run_dialogue(&dialogue.unwrap(), &lex, None, &RunConfig::default()).unwrap();
        assert!(lines.is_empty());
    }

    #[test]
    fn trace_matches_threat_sum() {
        let (script, social, lex) = casablanca(bundled::CASABLANCA_RUN2_SOCIAL);
        let dialogue = compile(&script, &social, &lex).0.unwrap();
        let lines = run_dialogue(&dialogue, &lex, None, &RunConfig::with_seed(11)).unwrap();
        for u in lines.iter().filter_map(Line::utterance) {
            for t in &u.acts {
                assert_eq!(t.theta, t.distance + t.power + t.imposition);
            }
        }
    }

    #[test]
    fn forcing_unknown_act_is_an_error() {
        let (script, social, lex) = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
        let dialogue = compile(&script, &social, &lex).0.unwrap();
        let mut config = RunConfig::default();
        config.forced.insert((1, 1), StrategyId::RealizeDirect);
        assert!(matches!(
            run_dialogue(&dialogue, &lex, None, &config),
            Err(RunError::NoSuchAct { turn: 1, act: 1 })
        ));
    }
}
