//! Speech acts, domain plans and the propositions that connect them.
//!
//! A speech act is an instantiated plan operator: a header naming the act
//! type, speaker and hearer, plus the precondition and effect propositions
//! derived from the act schema. The content of an act is either a domain
//! act (for requests, offers and their responses) or a proposition (for
//! informs, information requests and their responses).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Role labels shared by the built-in plan predicates.
pub mod role {
    pub const AGENT: &str = "agent";
    pub const RECIPIENT: &str = "recipient";
    pub const THEME: &str = "theme";
    pub const ACTION: &str = "action";
    pub const CONTENT: &str = "content";
}

/// Built-in predicates produced by act schemas.
pub mod predicate {
    pub const WANT: &str = "want";
    pub const CANDO: &str = "cando";
    pub const KNOW: &str = "know";
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActError {
    #[error("proposition predicate is empty")]
    EmptyPredicate,
    #[error("role `{role}` appears more than once in `{predicate}`")]
    DuplicateRole { predicate: String, role: String },
    #[error("domain act `{0}` has no agent")]
    MissingAgent(String),
    #[error("domain act `{0}` has an empty decomposition")]
    EmptyDecomposition(String),
    #[error("domain act `{0}` has no effects")]
    EmptyEffects(String),
    #[error("{act} takes {expected} content")]
    ContentMismatch { act: SpeechActType, expected: ContentKind },
    #[error("{act} requires `{expected}` to be the agent of `{action}`, found `{found}`")]
    AgentConstraint {
        act: SpeechActType,
        action: String,
        expected: String,
        found: String,
    },
    #[error("`{0}` has no agent role")]
    NoAgentRole(String),
    #[error("unknown speech act type `{0}`")]
    UnknownActType(String),
}

/// The ten speech act types of the inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpeechActType {
    Inform,
    Offer,
    RequestInfo,
    RequestAct,
    AcceptInform,
    AcceptOffer,
    AcceptRequest,
    RejectInform,
    RejectOffer,
    RejectRequest,
}

impl SpeechActType {
    pub const ALL: [SpeechActType; 10] = [
        SpeechActType::Inform,
        SpeechActType::Offer,
        SpeechActType::RequestInfo,
        SpeechActType::RequestAct,
        SpeechActType::AcceptInform,
        SpeechActType::AcceptOffer,
        SpeechActType::AcceptRequest,
        SpeechActType::RejectInform,
        SpeechActType::RejectOffer,
        SpeechActType::RejectRequest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpeechActType::Inform => "inform",
            SpeechActType::Offer => "offer",
            SpeechActType::RequestInfo => "request-info",
            SpeechActType::RequestAct => "request-act",
            SpeechActType::AcceptInform => "accept-inform",
            SpeechActType::AcceptOffer => "accept-offer",
            SpeechActType::AcceptRequest => "accept-request",
            SpeechActType::RejectInform => "reject-inform",
            SpeechActType::RejectOffer => "reject-offer",
            SpeechActType::RejectRequest => "reject-request",
        }
    }

    pub fn is_initiating(self) -> bool {
        matches!(
            self,
            SpeechActType::Inform
                | SpeechActType::Offer
                | SpeechActType::RequestInfo
                | SpeechActType::RequestAct
        )
    }

    pub fn is_accept(self) -> bool {
        matches!(
            self,
            SpeechActType::AcceptInform | SpeechActType::AcceptOffer | SpeechActType::AcceptRequest
        )
    }

    pub fn is_reject(self) -> bool {
        matches!(
            self,
            SpeechActType::RejectInform | SpeechActType::RejectOffer | SpeechActType::RejectRequest
        )
    }

    /// Kind of content the act carries.
    pub fn content_kind(self) -> ContentKind {
        match self {
            SpeechActType::Offer
            | SpeechActType::RequestAct
            | SpeechActType::AcceptOffer
            | SpeechActType::AcceptRequest
            | SpeechActType::RejectOffer
            | SpeechActType::RejectRequest => ContentKind::Action,
            SpeechActType::Inform
            | SpeechActType::RequestInfo
            | SpeechActType::AcceptInform
            | SpeechActType::RejectInform => ContentKind::Proposition,
        }
    }

    /// The initiating act a response answers; `None` for initiating acts.
    ///
    /// Information requests are answered by informs, so they have no
    /// dedicated response pair.
    pub fn responds_to(self) -> Option<SpeechActType> {
        match self {
            SpeechActType::AcceptInform | SpeechActType::RejectInform => Some(SpeechActType::Inform),
            SpeechActType::AcceptOffer | SpeechActType::RejectOffer => Some(SpeechActType::Offer),
            SpeechActType::AcceptRequest | SpeechActType::RejectRequest => {
                Some(SpeechActType::RequestAct)
            }
            _ => None,
        }
    }
}

impl fmt::Display for SpeechActType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpeechActType {
    type Err = ActError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpeechActType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| ActError::UnknownActType(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContentKind {
    Action,
    Proposition,
}

impl fmt::Display for ContentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContentKind::Action => f.write_str("domain-act"),
            ContentKind::Proposition => f.write_str("proposition"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    #[default]
    Positive,
    Negative,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    #[default]
    Present,
    Past,
    Perfect,
    Future,
}

/// Argument of a proposition.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// An agent or a named party of agents.
    Agent(String),
    /// A lexicon key for a noun phrase, proper noun or pronoun.
    Lexeme(String),
    /// Existential placeholder left behind by agent abstraction.
    Someone,
    /// Reference to a domain act, used by `want` and `cando`.
    Action(Arc<DomainAct>),
    /// Embedded proposition, used by `know`.
    Proposition(Box<Proposition>),
}

impl Term {
    pub fn agent(id: impl Into<String>) -> Term {
        Term::Agent(id.into())
    }

    pub fn lexeme(key: impl Into<String>) -> Term {
        Term::Lexeme(key.into())
    }

    pub fn as_agent(&self) -> Option<&str> {
        match self {
            Term::Agent(id) => Some(id),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Agent(id) | Term::Lexeme(id) => f.write_str(id),
            Term::Someone => f.write_str("someone"),
            Term::Action(act) => write!(f, "{}", act.decomposition()[0]),
            Term::Proposition(p) => write!(f, "{p}"),
        }
    }
}

/// A predicate over role-labelled terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposition {
    predicate: String,
    args: Vec<(String, Term)>,
    polarity: Polarity,
    tense: Tense,
}

impl Proposition {
    pub fn new<R: Into<String>>(
        predicate: impl Into<String>,
        args: impl IntoIterator<Item = (R, Term)>,
    ) -> Result<Proposition, ActError> {
        let predicate = predicate.into();
        if predicate.trim().is_empty() {
            return Err(ActError::EmptyPredicate);
        }
        let mut seen: Vec<(String, Term)> = Vec::new();
        for (role, term) in args {
            let role = role.into();
            if seen.iter().any(|(r, _)| *r == role) {
                return Err(ActError::DuplicateRole { predicate, role });
            }
            seen.push((role, term));
        }
        Ok(Proposition {
            predicate,
            args: seen,
            polarity: Polarity::Positive,
            tense: Tense::Present,
        })
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn with_tense(mut self, tense: Tense) -> Self {
        self.tense = tense;
        self
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn args(&self) -> &[(String, Term)] {
        &self.args
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_negated(&self) -> bool {
        self.polarity == Polarity::Negative
    }

    pub fn tense(&self) -> Tense {
        self.tense
    }

    pub fn get(&self, role: &str) -> Option<&Term> {
        self.args.iter().find(|(r, _)| r == role).map(|(_, t)| t)
    }

    pub fn has_role(&self, role: &str) -> bool {
        self.get(role).is_some()
    }

    fn replace(&mut self, role: &str, term: Term) {
        if let Some(slot) = self.args.iter_mut().find(|(r, _)| r == role) {
            slot.1 = term;
        }
    }

    /// Copy with the term in `role` replaced; unchanged if the role is absent.
    pub fn with_role(mut self, role: &str, term: Term) -> Self {
        self.replace(role, term);
        self
    }

    // Schema helpers.
    fn want_action(agent: &str, action: &Arc<DomainAct>) -> Proposition {
        Proposition::built_in(
            predicate::WANT,
            vec![
                (role::AGENT, Term::agent(agent)),
                (role::ACTION, Term::Action(Arc::clone(action))),
            ],
        )
    }

    fn cando_action(agent: &str, action: &Arc<DomainAct>) -> Proposition {
        Proposition::built_in(
            predicate::CANDO,
            vec![
                (role::AGENT, Term::agent(agent)),
                (role::ACTION, Term::Action(Arc::clone(action))),
            ],
        )
    }

    fn want_content(agent: &str, content: Proposition) -> Proposition {
        Proposition::built_in(
            predicate::WANT,
            vec![
                (role::AGENT, Term::agent(agent)),
                (role::CONTENT, Term::Proposition(Box::new(content))),
            ],
        )
    }

    fn know(agent: &str, content: Proposition) -> Proposition {
        Proposition::built_in(
            predicate::KNOW,
            vec![
                (role::AGENT, Term::agent(agent)),
                (role::CONTENT, Term::Proposition(Box::new(content))),
            ],
        )
    }

    fn built_in(predicate: &str, args: Vec<(&str, Term)>) -> Proposition {
        Proposition {
            predicate: predicate.to_string(),
            args: args.into_iter().map(|(r, t)| (r.to_string(), t)).collect(),
            polarity: Polarity::Positive,
            tense: Tense::Present,
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            f.write_str("not ")?;
        }
        write!(f, "{}(", self.predicate)?;
        for (i, (_, term)) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{term}")?;
        }
        f.write_str(")")
    }
}

/// Flip the polarity of a proposition. Involutive.
pub fn negate(p: &Proposition) -> Proposition {
    p.clone().with_polarity(p.polarity.flipped())
}

/// Replace the agent of a proposition with the `someone` placeholder.
pub fn abstract_agent(p: &Proposition) -> Result<Proposition, ActError> {
    if !p.has_role(role::AGENT) {
        return Err(ActError::NoAgentRole(p.to_string()));
    }
    Ok(p.clone().with_role(role::AGENT, Term::Someone))
}

/// A non-linguistic action plan, e.g. serving drinks.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainAct {
    name: String,
    verb: String,
    agent: String,
    recipient: Option<Term>,
    theme: Option<Term>,
    preconditions: Vec<Proposition>,
    decomposition: Vec<Proposition>,
    effects: Vec<Proposition>,
}

#[derive(Debug, Clone, Default)]
pub struct DomainActBuilder {
    name: String,
    verb: String,
    agent: String,
    recipient: Option<Term>,
    theme: Option<Term>,
    preconditions: Vec<Proposition>,
    decomposition: Vec<Proposition>,
    effects: Vec<Proposition>,
}

impl DomainActBuilder {
    pub fn recipient(mut self, term: Term) -> Self {
        self.recipient = Some(term);
        self
    }

    pub fn theme(mut self, term: Term) -> Self {
        self.theme = Some(term);
        self
    }

    pub fn precondition(mut self, p: Proposition) -> Self {
        self.preconditions.push(p);
        self
    }

    pub fn decomposition(mut self, p: Proposition) -> Self {
        self.decomposition.push(p);
        self
    }

    pub fn effect(mut self, p: Proposition) -> Self {
        self.effects.push(p);
        self
    }

    pub fn build(self) -> Result<DomainAct, ActError> {
        if self.agent.trim().is_empty() {
            return Err(ActError::MissingAgent(self.name));
        }
        if self.decomposition.is_empty() {
            return Err(ActError::EmptyDecomposition(self.name));
        }
        if self.effects.is_empty() {
            return Err(ActError::EmptyEffects(self.name));
        }
        Ok(DomainAct {
            name: self.name,
            verb: self.verb,
            agent: self.agent,
            recipient: self.recipient,
            theme: self.theme,
            preconditions: self.preconditions,
            decomposition: self.decomposition,
            effects: self.effects,
        })
    }
}

impl DomainAct {
    pub fn builder(
        name: impl Into<String>,
        verb: impl Into<String>,
        agent: impl Into<String>,
    ) -> DomainActBuilder {
        DomainActBuilder {
            name: name.into(),
            verb: verb.into(),
            agent: agent.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn verb(&self) -> &str {
        &self.verb
    }

    pub fn agent(&self) -> &str {
        &self.agent
    }

    pub fn recipient(&self) -> Option<&Term> {
        self.recipient.as_ref()
    }

    pub fn theme(&self) -> Option<&Term> {
        self.theme.as_ref()
    }

    pub fn preconditions(&self) -> &[Proposition] {
        &self.preconditions
    }

    pub fn decomposition(&self) -> &[Proposition] {
        &self.decomposition
    }

    pub fn effects(&self) -> &[Proposition] {
        &self.effects
    }
}

/// Content of a speech act.
#[derive(Debug, Clone, PartialEq)]
pub enum ActContent {
    Action(Arc<DomainAct>),
    Proposition(Proposition),
}

impl ActContent {
    pub fn kind(&self) -> ContentKind {
        match self {
            ActContent::Action(_) => ContentKind::Action,
            ActContent::Proposition(_) => ContentKind::Proposition,
        }
    }

    pub fn action(&self) -> Option<&Arc<DomainAct>> {
        match self {
            ActContent::Action(a) => Some(a),
            ActContent::Proposition(_) => None,
        }
    }

    pub fn proposition(&self) -> Option<&Proposition> {
        match self {
            ActContent::Proposition(p) => Some(p),
            ActContent::Action(_) => None,
        }
    }
}

impl From<DomainAct> for ActContent {
    fn from(act: DomainAct) -> Self {
        ActContent::Action(Arc::new(act))
    }
}

impl From<Arc<DomainAct>> for ActContent {
    fn from(act: Arc<DomainAct>) -> Self {
        ActContent::Action(act)
    }
}

impl From<Proposition> for ActContent {
    fn from(p: Proposition) -> Self {
        ActContent::Proposition(p)
    }
}

/// An instantiated speech act plan operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeechActInstance {
    act_type: SpeechActType,
    speaker: String,
    hearer: String,
    content: ActContent,
    want_precondition: Option<Proposition>,
    cando_precondition: Option<Proposition>,
    know_precondition: Option<Proposition>,
    want_effect: Option<Proposition>,
    know_effect: Option<Proposition>,
}

impl SpeechActInstance {
    pub fn act_type(&self) -> SpeechActType {
        self.act_type
    }

    pub fn speaker(&self) -> &str {
        &self.speaker
    }

    pub fn hearer(&self) -> &str {
        &self.hearer
    }

    pub fn content(&self) -> &ActContent {
        &self.content
    }

    pub fn domain_act(&self) -> Option<&Arc<DomainAct>> {
        self.content.action()
    }

    pub fn want_precondition(&self) -> Option<&Proposition> {
        self.want_precondition.as_ref()
    }

    pub fn cando_precondition(&self) -> Option<&Proposition> {
        self.cando_precondition.as_ref()
    }

    pub fn know_precondition(&self) -> Option<&Proposition> {
        self.know_precondition.as_ref()
    }

    pub fn want_effect(&self) -> Option<&Proposition> {
        self.want_effect.as_ref()
    }

    pub fn know_effect(&self) -> Option<&Proposition> {
        self.know_effect.as_ref()
    }
}

/// Instantiate the schema for `act_type` with concrete bindings.
///
/// Schemas (S = speaker, H = hearer, A = domain act, p = proposition):
///
/// | act            | preconditions          | effects                         | constraint |
/// |----------------|------------------------|---------------------------------|------------|
/// | request-act    | want(S,A), cando(H,A)  | want(H,A), know(H,want(S,A))    | agent(A)=H |
/// | offer          | want(S,A), cando(S,A)  | want(H,A), know(H,want(S,A))    | agent(A)=S |
/// | accept-request | cando(S,A)             | want(S,A), know(H,want(S,A))    | agent(A)=S |
/// | accept-offer   |                        | want(S,A), know(H,want(S,A))    | agent(A)=H |
/// | reject-request |                        | ¬want(S,A), know(H,¬want(S,A))  | agent(A)=S |
/// | reject-offer   |                        | ¬want(S,A), know(H,¬want(S,A))  | agent(A)=H |
/// | inform         | know(S,p)              | know(H,p)                       |            |
/// | request-info   | want(S,know(S,p)), know(H,p) as ability | want(H,know(S,p)), know(H,want(S,know(S,p))) | |
/// | accept-inform  | know(H,p)              | know(S,p)                       |            |
/// | reject-inform  | know(H,p)              | know(S,¬p)                      |            |
pub fn instantiate_act(
    act_type: SpeechActType,
    speaker: &str,
    hearer: &str,
    content: impl Into<ActContent>,
) -> Result<SpeechActInstance, ActError> {
    let content = content.into();
    let expected = act_type.content_kind();
    if content.kind() != expected {
        return Err(ActError::ContentMismatch {
            act: act_type,
            expected,
        });
    }

    let mut inst = SpeechActInstance {
        act_type,
        speaker: speaker.to_string(),
        hearer: hearer.to_string(),
        content: content.clone(),
        want_precondition: None,
        cando_precondition: None,
        know_precondition: None,
        want_effect: None,
        know_effect: None,
    };

    match content {
        ActContent::Action(action) => {
            let required_agent = match act_type {
                SpeechActType::RequestAct
                | SpeechActType::AcceptOffer
                | SpeechActType::RejectOffer => hearer,
                _ => speaker,
            };
            if action.agent() != required_agent {
                return Err(ActError::AgentConstraint {
                    act: act_type,
                    action: action.name().to_string(),
                    expected: required_agent.to_string(),
                    found: action.agent().to_string(),
                });
            }
            let speaker_wants = Proposition::want_action(speaker, &action);
            match act_type {
                SpeechActType::RequestAct => {
                    inst.want_precondition = Some(speaker_wants.clone());
                    inst.cando_precondition = Some(Proposition::cando_action(hearer, &action));
                    inst.want_effect = Some(Proposition::want_action(hearer, &action));
                    inst.know_effect = Some(Proposition::know(hearer, speaker_wants));
                }
                SpeechActType::Offer => {
                    inst.want_precondition = Some(speaker_wants.clone());
                    inst.cando_precondition = Some(Proposition::cando_action(speaker, &action));
                    inst.want_effect = Some(Proposition::want_action(hearer, &action));
                    inst.know_effect = Some(Proposition::know(hearer, speaker_wants));
                }
                SpeechActType::AcceptRequest => {
                    inst.cando_precondition = Some(Proposition::cando_action(speaker, &action));
                    inst.want_effect = Some(speaker_wants.clone());
                    inst.know_effect = Some(Proposition::know(hearer, speaker_wants));
                }
                SpeechActType::AcceptOffer => {
                    inst.want_effect = Some(speaker_wants.clone());
                    inst.know_effect = Some(Proposition::know(hearer, speaker_wants));
                }
                SpeechActType::RejectRequest | SpeechActType::RejectOffer => {
                    let refusal = negate(&speaker_wants);
                    inst.want_effect = Some(refusal.clone());
                    inst.know_effect = Some(Proposition::know(hearer, refusal));
                }
                _ => unreachable!("content kind checked above"),
            }
        }
        ActContent::Proposition(p) => match act_type {
            SpeechActType::Inform => {
                inst.know_precondition = Some(Proposition::know(speaker, p.clone()));
                inst.know_effect = Some(Proposition::know(hearer, p));
            }
            SpeechActType::RequestInfo => {
                let speaker_knows = Proposition::know(speaker, p.clone());
                let wants_to_know = Proposition::want_content(speaker, speaker_knows.clone());
                inst.want_precondition = Some(wants_to_know.clone());
                inst.cando_precondition = Some(Proposition::know(hearer, p));
                inst.want_effect = Some(Proposition::want_content(hearer, speaker_knows));
                inst.know_effect = Some(Proposition::know(hearer, wants_to_know));
            }
            SpeechActType::AcceptInform => {
                inst.know_precondition = Some(Proposition::know(hearer, p.clone()));
                inst.know_effect = Some(Proposition::know(speaker, p));
            }
            SpeechActType::RejectInform => {
                inst.know_precondition = Some(Proposition::know(hearer, p.clone()));
                inst.know_effect = Some(Proposition::know(speaker, negate(&p)));
            }
            _ => unreachable!("content kind checked above"),
        },
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bring() -> Proposition {
        Proposition::new(
            "bring",
            [
                (role::AGENT, Term::agent("waiter")),
                (role::RECIPIENT, Term::agent("laszlo-party")),
                (role::THEME, Term::lexeme("two-cointreaux")),
            ],
        )
        .unwrap()
    }

    fn serve() -> DomainAct {
        DomainAct::builder("serve-cointreaux", "serve", "waiter")
            .recipient(Term::agent("laszlo-party"))
            .theme(Term::lexeme("two-cointreaux"))
            .precondition(
                Proposition::new(
                    "has",
                    [
                        ("holder", Term::lexeme("restaurant")),
                        (role::THEME, Term::lexeme("two-cointreaux")),
                    ],
                )
                .unwrap(),
            )
            .decomposition(bring())
            .effect(
                Proposition::new(
                    "has",
                    [
                        ("holder", Term::agent("laszlo-party")),
                        (role::THEME, Term::lexeme("two-cointreaux")),
                    ],
                )
                .unwrap(),
            )
            .build()
            .unwrap()
    }

    fn reserved() -> Proposition {
        Proposition::new(
            "reserve",
            [
                (role::AGENT, Term::agent("laszlo")),
                (role::THEME, Term::lexeme("table")),
            ],
        )
        .unwrap()
        .with_tense(Tense::Past)
    }

    #[test]
    fn inventory_split() {
        assert_eq!(SpeechActType::ALL.len(), 10);
        let initiating = SpeechActType::ALL.iter().filter(|t| t.is_initiating()).count();
        assert_eq!(initiating, 4);
        for t in SpeechActType::ALL {
            assert_eq!(t.as_str().parse::<SpeechActType>().unwrap(), t);
        }
    }

    #[test]
    fn request_act_derives_want_effect() {
        let inst = instantiate_act(SpeechActType::RequestAct, "laszlo", "waiter", serve()).unwrap();
        let want = inst.want_effect().unwrap();
        assert_eq!(want.predicate(), "want");
        assert_eq!(want.get(role::AGENT), Some(&Term::agent("waiter")));
        assert_eq!(
            want.to_string(),
            "want(waiter, bring(waiter, laszlo-party, two-cointreaux))"
        );
        assert!(inst.want_precondition().is_some());
        assert!(inst.cando_precondition().is_some());
        assert!(inst.know_effect().is_some());
        assert!(inst.know_precondition().is_none());
    }

    #[test]
    fn inform_derives_know_effect() {
        let inst = instantiate_act(SpeechActType::Inform, "laszlo", "waiter", reserved()).unwrap();
        assert_eq!(
            inst.know_effect().unwrap().to_string(),
            "know(waiter, reserve(laszlo, table))"
        );
        assert!(inst.want_effect().is_none());
    }

    #[test]
    fn request_to_self_violates_constraint() {
        let own = DomainAct::builder("pour", "bring", "laszlo")
            .decomposition(bring())
            .effect(bring())
            .build()
            .unwrap();
        let err = instantiate_act(SpeechActType::RequestAct, "laszlo", "waiter", own).unwrap_err();
        assert!(matches!(err, ActError::AgentConstraint { .. }));
    }

    #[test]
    fn content_kind_mismatch() {
        let err = instantiate_act(SpeechActType::Inform, "laszlo", "waiter", serve()).unwrap_err();
        assert!(matches!(err, ActError::ContentMismatch { .. }));
        let err = instantiate_act(SpeechActType::Offer, "waiter", "laszlo", reserved()).unwrap_err();
        assert!(matches!(err, ActError::ContentMismatch { .. }));
    }

    #[test]
    fn negation_flips_polarity_only() {
        let has = serve().effects()[0].clone();
        let neg = negate(&has);
        assert!(neg.is_negated());
        assert_eq!(neg.args(), has.args());
        assert_eq!(negate(&neg), has);
    }

    #[test]
    fn abstract_agent_replaces_agent() {
        let abs = abstract_agent(&bring()).unwrap();
        assert_eq!(abs.to_string(), "bring(someone, laszlo-party, two-cointreaux)");
        assert_eq!(abstract_agent(&abs).unwrap(), abs);
    }

    #[test]
    fn abstract_agent_needs_agent_role() {
        let pre = serve().preconditions()[0].clone();
        assert!(matches!(abstract_agent(&pre), Err(ActError::NoAgentRole(_))));
    }

    #[test]
    fn proposition_rejects_duplicate_roles() {
        let err = Proposition::new(
            "bring",
            [(role::AGENT, Term::agent("a")), (role::AGENT, Term::agent("b"))],
        )
        .unwrap_err();
        assert!(matches!(err, ActError::DuplicateRole { .. }));
        assert_eq!(
            Proposition::new("  ", Vec::<(&str, Term)>::new()).unwrap_err(),
            ActError::EmptyPredicate
        );
    }

    #[test]
    fn domain_act_invariants() {
        assert!(matches!(
            DomainAct::builder("x", "bring", "waiter").effect(bring()).build(),
            Err(ActError::EmptyDecomposition(_))
        ));
        assert!(matches!(
            DomainAct::builder("x", "bring", "waiter").decomposition(bring()).build(),
            Err(ActError::EmptyEffects(_))
        ));
        assert!(matches!(
            DomainAct::builder("x", "bring", "")
                .decomposition(bring())
                .effect(bring())
                .build(),
            Err(ActError::MissingAgent(_))
        ));
    }
}
