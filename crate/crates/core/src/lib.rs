//! Linguistic style improvisation for dialogue characters.
//!
//! Speech acts over domain plans are realised as English utterances whose
//! politeness follows the social relation between speaker and hearer, and
//! each utterance is annotated for an emotional delivery.

pub mod affect;
pub mod lexicon;
pub mod realizer;
pub mod roster;
pub mod social;
pub mod speechact;
pub mod strategy;
pub mod bundled;
pub mod dialogue;

pub use affect::{
    annotate, disposition_vector, emit_record, AffectError, AffectVector, AnnotatedToken,
    AnnotatedUtterance, Annotator, Disposition, Palette, ProsodyRecord, PARAMETERS,
};
pub use dialogue::{
    compile, run_dialogue, validate, ActTrace, Diagnostic, Dialogue, Line, RunConfig, RunError,
    ScriptDoc, Severity, SocialDoc, Utterance, DEFAULT_SEED,
};
pub use lexicon::Lexicon;
pub use realizer::{RealizeError, Realizer};
pub use roster::{Agent, Roster};
pub use social::{
    band_position, select_band, threat, Assessment, ImpositionTable, SocialError,
    SocialStructure, SocialValue, StrategyBand, ThreatValue,
};
pub use speechact::{
    instantiate_act, ActContent, ActError, DomainAct, Polarity, Proposition, SpeechActInstance,
    SpeechActType, Tense, Term,
};
pub use strategy::{
    apply, candidates, select_strategy, SemanticSpec, StrategyContext, StrategyError, StrategyId,
    REGISTRY,
};
