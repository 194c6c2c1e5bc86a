//! Politeness sub-strategies.
//!
//! A strategy picks the semantic content of an utterance from one field of
//! the speech act's plan (its decomposition, a precondition or an effect, or
//! the same fields of the underlying domain act) and attaches a syntactic
//! form plus decorations such as tags, hedges and address forms. The result
//! is a [`SemanticSpec`] that the realizer turns into English.
//!
//! Within a band, candidates are ordered from the lower to the upper end of
//! the band's threat interval. [`choose_strategy`] weights each candidate by
//! how close its slot is to the act's position in the band, so low threat
//! favours early candidates and high threat favours late ones.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::realizer::Perspective;
use crate::social::StrategyBand;
use crate::speechact::{
    abstract_agent, negate, role, ActContent, DomainAct, Proposition, SpeechActInstance,
    SpeechActType, Tense, Term,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("{strategy} does not apply to {act}")]
    NotApplicable { strategy: StrategyId, act: SpeechActType },
    #[error("{strategy} is not a {band} strategy")]
    WrongBand { strategy: StrategyId, band: StrategyBand },
    #[error("{0} has no domain act to draw content from")]
    NoDomainAct(SpeechActType),
    #[error("{strategy} needs {field}, which {act} does not provide")]
    MissingField {
        strategy: StrategyId,
        act: SpeechActType,
        field: &'static str,
    },
    #[error("unknown strategy `{0}`")]
    Unknown(String),
    #[error("malformed semantic spec: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyntacticForm {
    Imperative,
    Declarative,
    YesNoQuestion,
    Fragment,
}

impl SyntacticForm {
    /// Default form for the direct realisation of an act type.
    pub fn default_for(act: SpeechActType) -> SyntacticForm {
        match act {
            SpeechActType::RequestAct => SyntacticForm::Imperative,
            SpeechActType::Inform | SpeechActType::Offer => SyntacticForm::Declarative,
            SpeechActType::RequestInfo => SyntacticForm::YesNoQuestion,
            _ => SyntacticForm::Fragment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HedgeKind {
    PreSentential,
    Verbal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Decoration {
    TagQuestion,
    Hedge { kind: HedgeKind, text: String },
    /// "Hey Emil, my man, ..."
    AddressForm { name: String, form: String },
    /// Clause-final "right away".
    Urgency,
    /// Modal "must"; forces a declarative.
    Obligation,
    /// Trailing "please".
    PolitenessMarker,
    Gladness(String),
    Reluctance(String),
    Apology(String),
    /// Clause-final "yet".
    Yet,
    /// Past-form modal ("could" for "can").
    Deference,
    /// "Let <holder> <verb> ..." with no actor.
    Impersonal,
}

/// Plan field a spec's content was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContentSource {
    /// The act's own content: the proposition of an inform or information request.
    SpeechActContent,
    WantPrecondition,
    CandoPrecondition,
    WantEffect,
    KnowEffect,
    DomainPrecondition,
    DomainDecomposition,
    DomainEffect,
}

/// Realisation plan for one speech act.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSpec {
    pub content: Proposition,
    pub form: SyntacticForm,
    pub decorations: Vec<Decoration>,
    pub perspective: Perspective,
    /// Overrides the content's tense.
    pub tense: Option<Tense>,
    /// Bare word for fragment forms without a formula ("Okay", "No").
    pub fragment: Option<String>,
    pub source: ContentSource,
}

impl SemanticSpec {
    fn new(
        content: Proposition,
        form: SyntacticForm,
        source: ContentSource,
        perspective: &Perspective,
    ) -> SemanticSpec {
        SemanticSpec {
            content,
            form,
            decorations: Vec::new(),
            perspective: perspective.clone(),
            tense: None,
            fragment: None,
            source,
        }
    }

    fn decorate(mut self, d: Decoration) -> Self {
        if !self.decorations.contains(&d) {
            self.decorations.push(d);
        }
        self
    }

    pub fn has(&self, d: &Decoration) -> bool {
        self.decorations.contains(d)
    }

    pub fn hedge(&self) -> Option<(HedgeKind, &str)> {
        self.decorations.iter().find_map(|d| match d {
            Decoration::Hedge { kind, text } => Some((*kind, text.as_str())),
            _ => None,
        })
    }

    pub fn address_form(&self) -> Option<(&str, &str)> {
        self.decorations.iter().find_map(|d| match d {
            Decoration::AddressForm { name, form } => Some((name.as_str(), form.as_str())),
            _ => None,
        })
    }

    /// Formula text for fragment forms.
    pub fn formula(&self) -> Option<&str> {
        self.decorations.iter().find_map(|d| match d {
            Decoration::Gladness(t) | Decoration::Reluctance(t) | Decoration::Apology(t) => {
                Some(t.as_str())
            }
            _ => None,
        })
    }

    pub fn check(&self) -> Result<(), StrategyError> {
        if self.has(&Decoration::TagQuestion) && self.form != SyntacticForm::Declarative {
            return Err(StrategyError::Malformed("tag question on a non-declarative"));
        }
        if self.has(&Decoration::Obligation) && self.form != SyntacticForm::Declarative {
            return Err(StrategyError::Malformed("obligation outside a declarative"));
        }
        if self.has(&Decoration::Impersonal) && self.form != SyntacticForm::Imperative {
            return Err(StrategyError::Malformed("let-form outside an imperative"));
        }
        if self.form == SyntacticForm::Fragment && self.formula().is_none() && self.fragment.is_none() {
            return Err(StrategyError::Malformed("fragment without text"));
        }
        let formulas = self
            .decorations
            .iter()
            .filter(|d| {
                matches!(
                    d,
                    Decoration::Gladness(_) | Decoration::Reluctance(_) | Decoration::Apology(_)
                )
            })
            .count();
        if formulas > 0 && self.form != SyntacticForm::Fragment {
            return Err(StrategyError::Malformed("formula outside a fragment"));
        }
        if formulas > 1 {
            return Err(StrategyError::Malformed("more than one formula"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyId {
    RealizeDirect,
    PowerDirectUrgency,
    PowerDirectObligation,
    ReluctantDirectAccept,
    OptimismApproval,
    GroupApproval,
    GladAcceptApproval,
    SorryRejectApproval,
    NegateEffectAutonomy,
    QueryAbilityAutonomy,
    AssertWantPreconditionAutonomy,
    ImpersonalizeActorAutonomy,
    HedgeInform,
    AssertNegationDomainEffect,
    AssertDomainPreconditionHolds,
    AbstractAgentAndNegateEffect,
}

impl StrategyId {
    pub fn info(self) -> &'static StrategyInfo {
        REGISTRY
            .iter()
            .find(|i| i.id == self)
            .expect("every strategy is registered")
    }

    pub fn as_str(self) -> &'static str {
        self.info().name
    }

    pub fn band(self) -> StrategyBand {
        self.info().band
    }

    pub fn applies_to(self, act: SpeechActType) -> bool {
        self.info().applies_to.contains(&act)
    }

    pub fn all() -> impl Iterator<Item = StrategyId> {
        REGISTRY.iter().map(|i| i.id)
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for StrategyId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl FromStr for StrategyId {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_end_matches("-strategy");
        REGISTRY
            .iter()
            .find(|i| i.name == s)
            .map(|i| i.id)
            .ok_or_else(|| StrategyError::Unknown(s.to_string()))
    }
}

/// Registry entry describing one strategy.
#[derive(Debug)]
pub struct StrategyInfo {
    pub id: StrategyId,
    pub name: &'static str,
    pub band: StrategyBand,
    pub applies_to: &'static [SpeechActType],
    pub summary: &'static str,
}

use SpeechActType as T;

const PLAN_INITIATING: &[SpeechActType] = &[T::RequestAct, T::Offer];

pub static REGISTRY: [StrategyInfo; 16] = [
    StrategyInfo {
        id: StrategyId::RealizeDirect,
        name: "realize-direct",
        band: StrategyBand::Direct,
        applies_to: &SpeechActType::ALL,
        summary: "decomposition content in the act's default syntactic form",
    },
    StrategyInfo {
        id: StrategyId::PowerDirectUrgency,
        name: "power-direct-urgency",
        band: StrategyBand::Direct,
        applies_to: &[T::RequestAct],
        summary: "direct form with clause-final \"right away\"",
    },
    StrategyInfo {
        id: StrategyId::PowerDirectObligation,
        name: "power-direct-obligation",
        band: StrategyBand::Direct,
        applies_to: &[T::RequestAct],
        summary: "direct form with modal \"you must\"",
    },
    StrategyInfo {
        id: StrategyId::ReluctantDirectAccept,
        name: "reluctant-direct-accept",
        band: StrategyBand::Direct,
        applies_to: &[T::AcceptRequest, T::AcceptOffer],
        summary: "reluctance formula at the bottom of the direct band",
    },
    StrategyInfo {
        id: StrategyId::OptimismApproval,
        name: "optimism-approval",
        band: StrategyBand::Approval,
        applies_to: &[T::RequestAct, T::Offer, T::Inform],
        summary: "assert the hearer-want (or hearer-know) effect with a tag question",
    },
    StrategyInfo {
        id: StrategyId::GroupApproval,
        name: "group-approval",
        band: StrategyBand::Approval,
        applies_to: &[
            T::RequestAct,
            T::Offer,
            T::Inform,
            T::RequestInfo,
            T::AcceptInform,
            T::RejectInform,
        ],
        summary: "in-group address form prefixed to the direct realisation",
    },
    StrategyInfo {
        id: StrategyId::GladAcceptApproval,
        name: "glad-accept-approval",
        band: StrategyBand::Approval,
        applies_to: &[T::AcceptRequest, T::AcceptOffer],
        summary: "gladness formula asserting the want effect",
    },
    StrategyInfo {
        id: StrategyId::SorryRejectApproval,
        name: "sorry-reject-approval",
        band: StrategyBand::Approval,
        applies_to: &[T::RejectRequest, T::RejectOffer],
        summary: "apology formula affirming the relationship",
    },
    StrategyInfo {
        id: StrategyId::NegateEffectAutonomy,
        name: "negate-effect-autonomy",
        band: StrategyBand::Autonomy,
        applies_to: &[T::RequestAct],
        summary: "state that the want effect does not hold, with a tag question",
    },
    StrategyInfo {
        id: StrategyId::QueryAbilityAutonomy,
        name: "query-ability-autonomy",
        band: StrategyBand::Autonomy,
        applies_to: &[T::RequestAct, T::Offer, T::RequestInfo],
        summary: "yes/no question about the ability precondition",
    },
    StrategyInfo {
        id: StrategyId::AssertWantPreconditionAutonomy,
        name: "assert-want-precondition-autonomy",
        band: StrategyBand::Autonomy,
        applies_to: &[T::RequestAct, T::Offer, T::RequestInfo],
        summary: "state that the speaker-want precondition holds",
    },
    StrategyInfo {
        id: StrategyId::ImpersonalizeActorAutonomy,
        name: "impersonalize-actor-autonomy",
        band: StrategyBand::Autonomy,
        applies_to: &[T::RequestAct],
        summary: "let-form over the domain effect, with no actor",
    },
    StrategyInfo {
        id: StrategyId::HedgeInform,
        name: "hedge-inform",
        band: StrategyBand::Autonomy,
        applies_to: &[T::Inform],
        summary: "inform content with a pre-sentential or verbal hedge",
    },
    StrategyInfo {
        id: StrategyId::AssertNegationDomainEffect,
        name: "assert-negation-domain-effect",
        band: StrategyBand::OffRecord,
        applies_to: PLAN_INITIATING,
        summary: "assert that the domain effect does not hold yet",
    },
    StrategyInfo {
        id: StrategyId::AssertDomainPreconditionHolds,
        name: "assert-domain-precondition-holds",
        band: StrategyBand::OffRecord,
        applies_to: PLAN_INITIATING,
        summary: "assert that the domain precondition holds",
    },
    StrategyInfo {
        id: StrategyId::AbstractAgentAndNegateEffect,
        name: "abstract-agent-and-negate-effect",
        band: StrategyBand::OffRecord,
        applies_to: PLAN_INITIATING,
        summary: "negated domain decomposition with the agent abstracted to \"someone\"",
    },
];

/// Band positions at or below this use reluctance formulas for accepts.
pub const RELUCTANCE_CEILING: f64 = 0.2;

/// Default probability of answering an off-record band with an autonomy form.
pub const DEFAULT_SUBSTITUTION_PROBABILITY: f64 = 0.5;

/// Half-width, in candidate slots, of each candidate's weighting window.
const SLOT_REACH: f64 = 1.5;

pub const GLADNESS_FORMULAS: [&str; 3] = ["I'd be glad to.", "With pleasure.", "It's a pleasure."];
pub const RELUCTANCE_FORMULAS: [&str; 2] = ["Yes, if you insist.", "Yes, if I must."];
pub const APOLOGY_FORMULA: &str = "I'm sorry, I can't. Normally I'd love to.";
pub const PRE_SENTENTIAL_HEDGES: [&str; 6] = [
    "I feel",
    "I believe",
    "It seems",
    "As you may know,",
    "I think",
    "I heard",
];
pub const VERBAL_HEDGES: [&str; 3] = ["somehow", "sort of", "kind of"];
const ACCEPT_WORDS: [&str; 2] = ["Okay", "Yes"];
const REJECT_WORD: &str = "No";

// Band-specific candidates, lower end first.
fn band_list(act: SpeechActType, band: StrategyBand) -> &'static [StrategyId] {
    use StrategyBand as B;
    use StrategyId::*;
    match (band, act) {
        (B::Direct, T::RequestAct) => &[RealizeDirect, PowerDirectUrgency, PowerDirectObligation],
        (B::Direct, T::AcceptRequest | T::AcceptOffer) => &[ReluctantDirectAccept, RealizeDirect],
        (B::Direct, _) => &[RealizeDirect],

        (B::Approval, T::RequestAct | T::Offer | T::Inform) => &[GroupApproval, OptimismApproval],
        (B::Approval, T::RequestInfo | T::AcceptInform | T::RejectInform) => &[GroupApproval],
        (B::Approval, T::AcceptRequest | T::AcceptOffer) => &[GladAcceptApproval],
        (B::Approval, T::RejectRequest | T::RejectOffer) => &[SorryRejectApproval],

        (B::Autonomy, T::RequestAct) => &[
            QueryAbilityAutonomy,
            AssertWantPreconditionAutonomy,
            ImpersonalizeActorAutonomy,
            NegateEffectAutonomy,
        ],
        (B::Autonomy, T::Offer | T::RequestInfo) => {
            &[QueryAbilityAutonomy, AssertWantPreconditionAutonomy]
        }
        (B::Autonomy, T::Inform) => &[HedgeInform],
        (B::Autonomy, _) => &[],

        (B::OffRecord, T::RequestAct | T::Offer) => &[
            AssertNegationDomainEffect,
            AssertDomainPreconditionHolds,
            AbstractAgentAndNegateEffect,
        ],
        (B::OffRecord, _) => &[],
    }
}

// Whether the act's plan actually supplies the field a strategy draws from.
fn has_content_for(act: &SpeechActInstance, id: StrategyId) -> bool {
    let domain = act.domain_act();
    match id {
        StrategyId::AssertDomainPreconditionHolds => {
            domain.is_some_and(|d| !d.preconditions().is_empty())
        }
        StrategyId::AbstractAgentAndNegateEffect => {
            domain.is_some_and(|d| d.decomposition()[0].has_role(role::AGENT))
        }
        _ => true,
    }
}

fn admits(id: StrategyId, act: SpeechActType, position: f64) -> bool {
    match id {
        StrategyId::ReluctantDirectAccept => position <= RELUCTANCE_CEILING,
        StrategyId::RealizeDirect if matches!(act, T::AcceptRequest | T::AcceptOffer) => {
            position > RELUCTANCE_CEILING
        }
        _ => true,
    }
}

fn usable(act: &SpeechActInstance, band: StrategyBand) -> Vec<StrategyId> {
    band_list(act.act_type(), band)
        .iter()
        .copied()
        .filter(|id| has_content_for(act, *id))
        .collect()
}

/// Ordered candidates for an act in a band, lower end first.
///
/// For the off-record band the autonomy strategies follow as substitutes.
/// A band with no strategy for the act falls back to the next lower band.
pub fn applicable_strategies(act: &SpeechActInstance, band: StrategyBand) -> Vec<StrategyId> {
    let c = candidates(act, band, None);
    c.primary.into_iter().chain(c.substitutes).collect()
}

/// Candidates split into band-specific strategies and off-record substitutes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidates {
    pub band: StrategyBand,
    pub primary: Vec<StrategyId>,
    pub substitutes: Vec<StrategyId>,
}

/// Candidates for an act, optionally gated by band position.
pub fn candidates(act: &SpeechActInstance, band: StrategyBand, position: Option<f64>) -> Candidates {
    let gate = |ids: Vec<StrategyId>| -> Vec<StrategyId> {
        match position {
            Some(pos) => ids
                .into_iter()
                .filter(|id| admits(*id, act.act_type(), pos))
                .collect(),
            None => ids,
        }
    };
    let primary = gate(usable(act, band));
    let substitutes = if band == StrategyBand::OffRecord {
        gate(usable(act, StrategyBand::Autonomy))
    } else {
        Vec::new()
    };
    if primary.is_empty() && substitutes.is_empty() {
        if let Some(lower) = band.lower() {
            return candidates(act, lower, position);
        }
    }
    Candidates {
        band,
        primary,
        substitutes,
    }
}

/// Weight of each of `n` ordered candidates at a band position.
///
/// Candidate `i` sits at the centre of slot `i`, `(i + 0.5) / n`, and its
/// weight falls linearly to zero at 1.5 slots away from the position.
pub fn position_weights(n: usize, position: f64) -> Vec<f64> {
    let pos = position.clamp(0.0, 1.0);
    let reach = SLOT_REACH / n as f64;
    (0..n)
        .map(|i| {
            let centre = (i as f64 + 0.5) / n as f64;
            (1.0 - (pos - centre).abs() / reach).max(0.0)
        })
        .collect()
}

/// Pick one candidate, favouring those whose slot is near `position`.
///
/// Returns `None` only for an empty candidate list. A single candidate is
/// returned without drawing from `rng`.
pub fn choose_strategy<R: Rng + ?Sized>(
    candidates: &[StrategyId],
    position: f64,
    rng: &mut R,
) -> Option<StrategyId> {
    match candidates {
        [] => None,
        [only] => Some(*only),
        _ => {
            let weights = position_weights(candidates.len(), position);
            let total: f64 = weights.iter().sum();
            let mut ticket = rng.gen::<f64>() * total;
            for (id, w) in candidates.iter().zip(&weights) {
                if ticket < *w {
                    return Some(*id);
                }
                ticket -= w;
            }
            candidates
                .iter()
                .zip(&weights)
                .rev()
                .find(|(_, w)| **w > 0.0)
                .map(|(id, _)| *id)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub strategy: StrategyId,
    /// Band whose candidates were used after any fallback.
    pub band: StrategyBand,
    /// An autonomy form standing in for an off-record one.
    pub substituted: bool,
}

/// Select a strategy for an act at a band position.
///
/// In the off-record band, with probability `substitution_probability` one
/// of the autonomy substitutes is drawn uniformly instead.
pub fn select_strategy<R: Rng + ?Sized>(
    act: &SpeechActInstance,
    band: StrategyBand,
    position: f64,
    substitution_probability: f64,
    rng: &mut R,
) -> Selection {
    let c = candidates(act, band, Some(position));
    let substitute = match (c.primary.is_empty(), c.substitutes.is_empty()) {
        (true, _) => true,
        (false, true) => false,
        (false, false) => rng.gen_bool(substitution_probability.clamp(0.0, 1.0)),
    };
    let strategy = if !substitute {
        choose_strategy(&c.primary, position, rng)
    } else if c.primary.is_empty() {
        choose_strategy(&c.substitutes, position, rng)
    } else {
        Some(c.substitutes[rng.gen_range(0..c.substitutes.len())])
    }
    .expect("candidate lists are never both empty");
    Selection {
        strategy,
        band: c.band,
        substituted: substitute,
    }
}

/// Per-utterance context strategies may need besides the act itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyContext {
    pub perspective: Perspective,
    /// How the speaker addresses the hearer by name.
    pub hearer_name: String,
    /// The speaker's in-group address form.
    pub address_form: String,
}

fn check(id: StrategyId, act: &SpeechActInstance, band: StrategyBand) -> Result<(), StrategyError> {
    if id.band() != band {
        return Err(StrategyError::WrongBand { strategy: id, band });
    }
    if !id.applies_to(act.act_type()) {
        return Err(StrategyError::NotApplicable {
            strategy: id,
            act: act.act_type(),
        });
    }
    Ok(())
}

fn domain_of(act: &SpeechActInstance) -> Result<&Arc<DomainAct>, StrategyError> {
    act.domain_act()
        .ok_or(StrategyError::NoDomainAct(act.act_type()))
}

fn field<'a>(
    id: StrategyId,
    act: &SpeechActInstance,
    name: &'static str,
    value: Option<&'a Proposition>,
) -> Result<&'a Proposition, StrategyError> {
    value.ok_or(StrategyError::MissingField {
        strategy: id,
        act: act.act_type(),
        field: name,
    })
}

fn pick<'a, R: Rng + ?Sized>(items: &[&'a str], rng: &mut R) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

/// Apply any strategy, dispatching on its band.
pub fn apply<R: Rng + ?Sized>(
    act: &SpeechActInstance,
    strategy: StrategyId,
    ctx: &StrategyContext,
    rng: &mut R,
) -> Result<SemanticSpec, StrategyError> {
    match strategy.band() {
        StrategyBand::Direct => apply_direct(act, strategy, ctx, rng),
        StrategyBand::Approval => apply_approval(act, strategy, ctx, rng),
        StrategyBand::Autonomy => apply_autonomy(act, strategy, ctx, rng),
        StrategyBand::OffRecord => apply_offrecord(act, strategy, ctx),
    }
}

// The decomposition content of an act in its default form.
fn direct_spec<R: Rng + ?Sized>(
    act: &SpeechActInstance,
    ctx: &StrategyContext,
    rng: &mut R,
) -> SemanticSpec {
    let form = SyntacticForm::default_for(act.act_type());
    let (content, source) = match act.content() {
        ActContent::Action(d) => (d.decomposition()[0].clone(), ContentSource::DomainDecomposition),
        ActContent::Proposition(p) => (p.clone(), ContentSource::SpeechActContent),
    };
    let mut spec = SemanticSpec::new(content, form, source, &ctx.perspective);
    let t = act.act_type();
    if t == T::Offer {
        spec.tense = Some(Tense::Future);
    } else if t.is_accept() {
        spec.fragment = Some(pick(&ACCEPT_WORDS, rng).to_string());
    } else if t.is_reject() {
        spec.fragment = Some(REJECT_WORD.to_string());
    }
    spec
}

pub fn apply_direct<R: Rng + ?Sized>(
    act: &SpeechActInstance,
    strategy: StrategyId,
    ctx: &StrategyContext,
    rng: &mut R,
) -> Result<SemanticSpec, StrategyError> {
    check(strategy, act, StrategyBand::Direct)?;
    Ok(match strategy {
        StrategyId::RealizeDirect => direct_spec(act, ctx, rng),
        StrategyId::PowerDirectUrgency => direct_spec(act, ctx, rng).decorate(Decoration::Urgency),
        StrategyId::PowerDirectObligation => {
            let mut spec = direct_spec(act, ctx, rng).decorate(Decoration::Obligation);
            spec.form = SyntacticForm::Declarative;
            spec
        }
        StrategyId::ReluctantDirectAccept => {
            let d = domain_of(act)?;
            SemanticSpec::new(
                d.decomposition()[0].clone(),
                SyntacticForm::Fragment,
                ContentSource::DomainDecomposition,
                &ctx.perspective,
            )
            .decorate(Decoration::Reluctance(pick(&RELUCTANCE_FORMULAS, rng).to_string()))
        }
        _ => unreachable!("band checked"),
    })
}

pub fn apply_approval<R: Rng + ?Sized>(
    act: &SpeechActInstance,
    strategy: StrategyId,
    ctx: &StrategyContext,
    rng: &mut R,
) -> Result<SemanticSpec, StrategyError> {
    check(strategy, act, StrategyBand::Approval)?;
    Ok(match strategy {
        StrategyId::OptimismApproval => {
            let (content, source) = if act.act_type() == T::Inform {
                (field(strategy, act, "know effect", act.know_effect())?, ContentSource::KnowEffect)
            } else {
                (field(strategy, act, "want effect", act.want_effect())?, ContentSource::WantEffect)
            };
            SemanticSpec::new(content.clone(), SyntacticForm::Declarative, source, &ctx.perspective)
                .decorate(Decoration::TagQuestion)
        }
        StrategyId::GroupApproval => direct_spec(act, ctx, rng).decorate(Decoration::AddressForm {
            name: ctx.hearer_name.clone(),
            form: ctx.address_form.clone(),
        }),
        StrategyId::GladAcceptApproval => {
            let want = field(strategy, act, "want effect", act.want_effect())?;
            SemanticSpec::new(
                want.clone(),
                SyntacticForm::Fragment,
                ContentSource::WantEffect,
                &ctx.perspective,
            )
            .decorate(Decoration::Gladness(pick(&GLADNESS_FORMULAS, rng).to_string()))
        }
        StrategyId::SorryRejectApproval => {
            let want = field(strategy, act, "want effect", act.want_effect())?;
            SemanticSpec::new(
                want.clone(),
                SyntacticForm::Fragment,
                ContentSource::WantEffect,
                &ctx.perspective,
            )
            .decorate(Decoration::Apology(APOLOGY_FORMULA.to_string()))
        }
        _ => unreachable!("band checked"),
    })
}

pub fn apply_autonomy<R: Rng + ?Sized>(
    act: &SpeechActInstance,
    strategy: StrategyId,
    ctx: &StrategyContext,
    rng: &mut R,
) -> Result<SemanticSpec, StrategyError> {
    check(strategy, act, StrategyBand::Autonomy)?;
    let persp = &ctx.perspective;
    Ok(match strategy {
        StrategyId::NegateEffectAutonomy => {
            let want = field(strategy, act, "want effect", act.want_effect())?;
            SemanticSpec::new(
                negate(want),
                SyntacticForm::Declarative,
                ContentSource::WantEffect,
                persp,
            )
            .decorate(Decoration::TagQuestion)
        }
        StrategyId::QueryAbilityAutonomy => {
            let cando = field(strategy, act, "ability precondition", act.cando_precondition())?;
            let spec = SemanticSpec::new(
                cando.clone(),
                SyntacticForm::YesNoQuestion,
                ContentSource::CandoPrecondition,
                persp,
            );
            if act.act_type() == T::Offer {
                spec.decorate(Decoration::Deference)
            } else {
                spec
            }
        }
        StrategyId::AssertWantPreconditionAutonomy => {
            let mut want = field(strategy, act, "want precondition", act.want_precondition())?.clone();
            // Speaking for a party that benefits from the act: "we'd like".
            if let Some(Term::Agent(r)) = act.domain_act().and_then(|d| d.recipient()) {
                if r != &persp.speaker && persp.speaker_group.contains(r) {
                    want = want.with_role(role::AGENT, Term::Agent(r.clone()));
                }
            }
            SemanticSpec::new(
                want,
                SyntacticForm::Declarative,
                ContentSource::WantPrecondition,
                persp,
            )
        }
        StrategyId::ImpersonalizeActorAutonomy => {
            let d = domain_of(act)?;
            SemanticSpec::new(
                d.effects()[0].clone(),
                SyntacticForm::Imperative,
                ContentSource::DomainEffect,
                persp,
            )
            .decorate(Decoration::Impersonal)
        }
        StrategyId::HedgeInform => {
            let p = act
                .content()
                .proposition()
                .ok_or(StrategyError::NotApplicable {
                    strategy,
                    act: act.act_type(),
                })?;
            let n = PRE_SENTENTIAL_HEDGES.len() + VERBAL_HEDGES.len();
            let i = rng.gen_range(0..n);
            let hedge = if i < PRE_SENTENTIAL_HEDGES.len() {
                Decoration::Hedge {
                    kind: HedgeKind::PreSentential,
                    text: PRE_SENTENTIAL_HEDGES[i].to_string(),
                }
            } else {
                Decoration::Hedge {
                    kind: HedgeKind::Verbal,
                    text: VERBAL_HEDGES[i - PRE_SENTENTIAL_HEDGES.len()].to_string(),
                }
            };
            SemanticSpec::new(
                p.clone(),
                SyntacticForm::Declarative,
                ContentSource::SpeechActContent,
                persp,
            )
            .decorate(hedge)
        }
        _ => unreachable!("band checked"),
    })
}

pub fn apply_offrecord(
    act: &SpeechActInstance,
    strategy: StrategyId,
    ctx: &StrategyContext,
) -> Result<SemanticSpec, StrategyError> {
    if strategy.band() != StrategyBand::OffRecord {
        return Err(StrategyError::WrongBand {
            strategy,
            band: StrategyBand::OffRecord,
        });
    }
    let d = domain_of(act)?;
    check(strategy, act, StrategyBand::OffRecord)?;
    let persp = &ctx.perspective;
    Ok(match strategy {
        StrategyId::AssertNegationDomainEffect => SemanticSpec::new(
            negate(&d.effects()[0]),
            SyntacticForm::Declarative,
            ContentSource::DomainEffect,
            persp,
        )
        .decorate(Decoration::Yet),
        StrategyId::AssertDomainPreconditionHolds => {
            let pre = d.preconditions().first().ok_or(StrategyError::MissingField {
                strategy,
                act: act.act_type(),
                field: "domain precondition",
            })?;
            SemanticSpec::new(
                pre.clone(),
                SyntacticForm::Declarative,
                ContentSource::DomainPrecondition,
                persp,
            )
        }
        StrategyId::AbstractAgentAndNegateEffect => {
            let abstracted = abstract_agent(&d.decomposition()[0]).map_err(|_| {
                StrategyError::MissingField {
                    strategy,
                    act: act.act_type(),
                    field: "agent of the domain decomposition",
                }
            })?;
            let mut spec = SemanticSpec::new(
                negate(&abstracted),
                SyntacticForm::Declarative,
                ContentSource::DomainDecomposition,
                persp,
            );
            spec.tense = Some(Tense::Perfect);
            spec
        }
        _ => unreachable!("band checked"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speechact::{instantiate_act, Proposition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn serve() -> DomainAct {
        let has = |holder: Term| {
            Proposition::new(
                "have",
                [("holder", holder), (role::THEME, Term::lexeme("two-cointreaux"))],
            )
            .unwrap()
        };
        DomainAct::builder("serve-cointreaux", "serve", "waiter")
            .recipient(Term::agent("laszlo-party"))
            .theme(Term::lexeme("two-cointreaux"))
            .precondition(has(Term::lexeme("restaurant")))
            .decomposition(
                Proposition::new(
                    "bring",
                    [
                        (role::AGENT, Term::agent("waiter")),
                        (role::RECIPIENT, Term::agent("laszlo-party")),
                        (role::THEME, Term::lexeme("two-cointreaux")),
                    ],
                )
                .unwrap(),
            )
            .effect(has(Term::agent("laszlo-party")))
            .build()
            .unwrap()
    }

    fn request() -> SpeechActInstance {
        instantiate_act(T::RequestAct, "laszlo", "waiter", serve()).unwrap()
    }

    fn ctx() -> StrategyContext {
        let mut p = Perspective::solo("laszlo", "waiter");
        p.speaker_group.insert("laszlo-party".into());
        StrategyContext {
            perspective: p,
            hearer_name: "Emil".into(),
            address_form: "my man".into(),
        }
    }

    #[test]
    fn registry_is_consistent() {
        assert_eq!(REGISTRY.len(), 16);
        for info in &REGISTRY {
            assert_eq!(info.id.as_str().parse::<StrategyId>().unwrap(), info.id);
        }
        for act in T::ALL {
            for band in StrategyBand::ALL {
                for id in band_list(act, band) {
                    assert_eq!(id.band(), band, "{id} listed under {band}");
                    assert!(id.applies_to(act), "{id} listed for {act}");
                }
            }
        }
        for info in &REGISTRY {
            for act in info.applies_to {
                assert!(band_list(*act, info.band).contains(&info.id), "{} for {act}", info.name);
            }
        }
    }

    #[test]
    fn request_candidates_per_band() {
        let r = request();
        use StrategyId::*;
        assert_eq!(
            applicable_strategies(&r, StrategyBand::Direct),
            vec![RealizeDirect, PowerDirectUrgency, PowerDirectObligation]
        );
        let off = applicable_strategies(&r, StrategyBand::OffRecord);
        assert_eq!(
            &off[..3],
            &[
                AssertNegationDomainEffect,
                AssertDomainPreconditionHolds,
                AbstractAgentAndNegateEffect
            ]
        );
        assert!(off[3..].iter().all(|s| s.band() == StrategyBand::Autonomy));
        assert_eq!(off.len(), 7);
    }

    #[test]
    fn accept_candidates() {
        let d = Arc::new(serve());
        let acc = instantiate_act(T::AcceptRequest, "waiter", "laszlo", Arc::clone(&d)).unwrap();
        assert_eq!(
            applicable_strategies(&acc, StrategyBand::Approval),
            vec![StrategyId::GladAcceptApproval]
        );
        // no autonomy or off-record forms for responses: fall back to approval
        let c = candidates(&acc, StrategyBand::OffRecord, Some(0.5));
        assert_eq!(c.band, StrategyBand::Approval);
        assert_eq!(
            candidates(&acc, StrategyBand::Direct, Some(0.1)).primary,
            vec![StrategyId::ReluctantDirectAccept]
        );
        assert_eq!(
            candidates(&acc, StrategyBand::Direct, Some(0.5)).primary,
            vec![StrategyId::RealizeDirect]
        );
    }

    #[test]
    fn weights_favour_nearby_slots() {
        let w = position_weights(3, 0.98);
        assert_eq!(w[0], 0.0);
        assert!(w[2] > w[1]);
        let w = position_weights(3, 0.0);
        assert!(w[0] > w[1] && w[2] == 0.0);
        assert!(position_weights(5, 0.37).iter().any(|w| *w > 0.0));
    }

    #[test]
    fn choose_single_and_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            choose_strategy(&[StrategyId::HedgeInform], 0.3, &mut rng),
            Some(StrategyId::HedgeInform)
        );
        assert_eq!(choose_strategy(&[], 0.3, &mut rng), None);
        let cands = band_list(T::RequestAct, StrategyBand::Direct);
        let a = choose_strategy(cands, 0.98, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = choose_strategy(cands, 0.98, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, StrategyId::RealizeDirect);
    }

    #[test]
    fn seeds_vary_choice() {
        let cands = band_list(T::RequestAct, StrategyBand::Direct);
        let outcomes: std::collections::BTreeSet<_> = (0..100)
            .map(|s| choose_strategy(cands, 0.98, &mut ChaCha8Rng::seed_from_u64(s)).unwrap())
            .collect();
        assert!(outcomes.len() >= 2);
    }

    #[test]
    fn direct_specs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = request();
        let s = apply(&r, StrategyId::RealizeDirect, &ctx(), &mut rng).unwrap();
        assert_eq!(s.form, SyntacticForm::Imperative);
        assert_eq!(s.source, ContentSource::DomainDecomposition);
        let s = apply(&r, StrategyId::PowerDirectObligation, &ctx(), &mut rng).unwrap();
        assert_eq!(s.form, SyntacticForm::Declarative);
        assert!(s.has(&Decoration::Obligation));
        let s = apply(&r, StrategyId::PowerDirectUrgency, &ctx(), &mut rng).unwrap();
        assert!(s.has(&Decoration::Urgency));
    }

    #[test]
    fn want_precondition_speaks_for_party() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = apply(&request(), StrategyId::AssertWantPreconditionAutonomy, &ctx(), &mut rng).unwrap();
        assert_eq!(s.content.get(role::AGENT), Some(&Term::agent("laszlo-party")));
        assert_eq!(s.source, ContentSource::WantPrecondition);
    }

    #[test]
    fn off_record_content() {
        let r = request();
        let s = apply_offrecord(&r, StrategyId::AbstractAgentAndNegateEffect, &ctx()).unwrap();
        assert!(s.content.is_negated());
        assert_eq!(s.content.get(role::AGENT), Some(&Term::Someone));
        assert_eq!(s.tense, Some(Tense::Perfect));
        let s = apply_offrecord(&r, StrategyId::AssertNegationDomainEffect, &ctx()).unwrap();
        assert!(s.has(&Decoration::Yet));
        assert_eq!(s.source, ContentSource::DomainEffect);
    }

    #[test]
    fn mismatches_are_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = request();
        assert!(matches!(
            apply_approval(&r, StrategyId::GladAcceptApproval, &ctx(), &mut rng),
            Err(StrategyError::NotApplicable { .. })
        ));
        assert!(matches!(
            apply_autonomy(&r, StrategyId::RealizeDirect, &ctx(), &mut rng),
            Err(StrategyError::WrongBand { .. })
        ));
        let p = Proposition::new("reserve", [(role::AGENT, Term::agent("laszlo"))]).unwrap();
        let inform = instantiate_act(T::Inform, "laszlo", "waiter", p).unwrap();
        assert!(matches!(
            apply_offrecord(&inform, StrategyId::AssertNegationDomainEffect, &ctx()),
            Err(StrategyError::NoDomainAct(_))
        ));
    }

    #[test]
    fn spec_invariants_hold_for_every_strategy() {
        let r = request();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for band in StrategyBand::ALL {
            for id in applicable_strategies(&r, band) {
                let s = apply(&r, id, &ctx(), &mut rng).unwrap();
                s.check().unwrap();
            }
        }
    }
}
