//! Surface realisation of semantic specs.
//!
//! Content propositions become clauses in three steps. A frame picks the
//! subject, any fixed modal, the verb lemma and the rendered complements:
//! `want`, `cando` and `know` have built-in frames, every other predicate
//! uses its lexicon verb frame. The frame is then inflected for tense,
//! obligation and deference into a [`Clause`], and the clause is laid out
//! in the spec's syntactic form with its decorations around it.

mod clause;
mod perspective;

pub use clause::{invert_question, tag_question, AuxKind, Clause};
pub use perspective::{pronominalize, Agreement, Case, Person, Perspective, SOMEONE};

use thiserror::Error;

use crate::lexicon::{Category, Lexicon, Number};
use crate::roster::Roster;
use crate::speechact::{predicate, role, Proposition, Tense, Term};
use crate::strategy::{Decoration, HedgeKind, SemanticSpec, SyntacticForm};

use perspective::{pronoun_agreement, third_person};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizeError {
    #[error("no lexicon entry for `{0}`")]
    MissingLexeme(String),
    #[error("`{0}` is not a verb in the lexicon")]
    NotAVerb(String),
    #[error("cannot resolve referent `{0}`")]
    UnresolvableReferent(String),
    #[error("malformed spec: {0}")]
    Malformed(String),
}

/// Uppercase the first character only.
pub fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

const COPULA: &str = "be";

/// A rendered noun phrase.
#[derive(Debug, Clone, PartialEq)]
struct Np {
    text: String,
    agreement: Agreement,
    /// Subject pronoun that refers back to it in a tag.
    tag: String,
}

/// Everything about a clause that does not depend on tense.
struct Frame {
    subject: Np,
    modal: Option<&'static str>,
    verb: String,
    complements: Vec<String>,
    negated: bool,
}

/// How an embedded `know` complement is introduced.
#[derive(Clone, Copy, PartialEq)]
enum Embedding {
    Finite,
    Question,
    Infinitival,
}

pub struct Realizer<'a> {
    lexicon: &'a Lexicon,
    roster: &'a Roster,
    contractions: bool,
}

impl<'a> Realizer<'a> {
    pub fn new(lexicon: &'a Lexicon, roster: &'a Roster) -> Realizer<'a> {
        Realizer {
            lexicon,
            roster,
            contractions: true,
        }
    }

    pub fn with_contractions(mut self, on: bool) -> Self {
        self.contractions = on;
        self
    }

    /// Render a spec as one capitalised, punctuated sentence.
    pub fn render(&self, spec: &SemanticSpec) -> Result<String, RealizeError> {
        spec.check()
            .map_err(|e| RealizeError::Malformed(e.to_string()))?;

        let mut out = String::new();
        if let Some((name, form)) = spec.address_form() {
            out.push_str(&format!("Hey {name}, {form}, "));
        }

        if spec.form == SyntacticForm::Fragment {
            if let Some(formula) = spec.formula() {
                out.push_str(formula);
                return Ok(capitalize_first(&out));
            }
            let word = spec.fragment.as_deref().unwrap_or_default();
            if out.is_empty() {
                out.push_str(word);
            } else {
                out.push_str(&word.to_lowercase());
            }
            if spec.has(&Decoration::PolitenessMarker) {
                out.push_str(", please");
            }
            out.push('.');
            return Ok(capitalize_first(&out));
        }

        let hedge = spec.hedge();
        if let Some((HedgeKind::PreSentential, text)) = hedge {
            out.push_str(text);
            out.push(' ');
        }

        let embedding = match spec.form {
            SyntacticForm::YesNoQuestion => Embedding::Question,
            _ => Embedding::Finite,
        };
        let frame = self.frame(&spec.content, &spec.perspective, embedding)?;
        let tense = spec.tense.unwrap_or(spec.content.tense());
        let mut clause = self.inflect(
            frame,
            tense,
            spec.has(&Decoration::Obligation),
            spec.has(&Decoration::Deference),
        )?;
        if let Some((HedgeKind::Verbal, text)) = hedge {
            clause.modifiers.push(text.to_string());
        }
        if spec.has(&Decoration::Yet) {
            clause.complements.push("yet".to_string());
        }

        let body = match spec.form {
            SyntacticForm::Imperative if spec.has(&Decoration::Impersonal) => {
                self.let_form(&clause)?
            }
            SyntacticForm::Imperative => clause.imperative(),
            SyntacticForm::Declarative => clause.declarative(),
            SyntacticForm::YesNoQuestion => clause.inverted(),
            SyntacticForm::Fragment => unreachable!("handled above"),
        };
        out.push_str(&body);

        if spec.has(&Decoration::Urgency) {
            out.push_str(", right away");
        }
        let tagged = spec.has(&Decoration::TagQuestion);
        if tagged {
            out.push_str(", ");
            out.push_str(&clause.tag());
        }
        if spec.has(&Decoration::PolitenessMarker) {
            out.push_str(", please");
        }
        out.push(if tagged || spec.form == SyntacticForm::YesNoQuestion {
            '?'
        } else {
            '.'
        });
        Ok(capitalize_first(&out))
    }

    /// Plain declarative of a proposition, lowercase and unpunctuated.
    pub fn declarative(
        &self,
        p: &Proposition,
        perspective: &Perspective,
    ) -> Result<String, RealizeError> {
        let frame = self.frame(p, perspective, Embedding::Finite)?;
        Ok(self.inflect(frame, p.tense(), false, false)?.declarative())
    }

    fn np(&self, term: &Term, persp: &Perspective, case: Case) -> Result<Np, RealizeError> {
        match term {
            Term::Someone => Ok(Np {
                text: SOMEONE.to_string(),
                agreement: Agreement::THIRD_SINGULAR,
                tag: "they".to_string(),
            }),
            Term::Agent(id) => {
                if let Some(p) = pronominalize(id, persp, case) {
                    let subject = pronominalize(id, persp, Case::Subject).unwrap_or(p);
                    return Ok(Np {
                        text: p.to_string(),
                        agreement: pronoun_agreement(&p.to_lowercase()),
                        tag: subject.to_string(),
                    });
                }
                if let Some(agent) = self.roster.agent(id) {
                    return Ok(Np {
                        text: agent.name.clone(),
                        agreement: Agreement::THIRD_SINGULAR,
                        tag: third_person(agent.pronoun, Case::Subject).to_string(),
                    });
                }
                if let Some(members) = self.roster.group(id) {
                    let names: Vec<&str> = members
                        .iter()
                        .map(|m| self.roster.agent(m).map_or(m.as_str(), |a| a.name.as_str()))
                        .collect();
                    return Ok(Np {
                        text: names.join(" and "),
                        agreement: Agreement::THIRD_PLURAL,
                        tag: "they".to_string(),
                    });
                }
                Err(RealizeError::UnresolvableReferent(id.clone()))
            }
            Term::Lexeme(key) => {
                let entry = self
                    .lexicon
                    .entry(key)
                    .ok_or_else(|| RealizeError::MissingLexeme(key.clone()))?;
                if entry.category == Category::Verb {
                    return Err(RealizeError::Malformed(format!(
                        "verb `{key}` used as a noun phrase"
                    )));
                }
                let plural = entry.number == Number::Plural;
                Ok(Np {
                    text: entry.text.clone(),
                    agreement: if plural {
                        Agreement::THIRD_PLURAL
                    } else {
                        Agreement::THIRD_SINGULAR
                    },
                    tag: if plural { "they" } else { "it" }.to_string(),
                })
            }
            Term::Action(_) | Term::Proposition(_) => Err(RealizeError::Malformed(format!(
                "`{term}` cannot be a noun phrase"
            ))),
        }
    }

    fn arg<'p>(&self, p: &'p Proposition, r: &str) -> Result<&'p Term, RealizeError> {
        p.get(r)
            .ok_or_else(|| RealizeError::Malformed(format!("`{p}` has no {r}")))
    }

    fn frame(
        &self,
        p: &Proposition,
        persp: &Perspective,
        embedding: Embedding,
    ) -> Result<Frame, RealizeError> {
        let negated = p.is_negated();
        match p.predicate() {
            predicate::WANT => {
                let wanter = self.arg(p, role::AGENT)?;
                let subject = self.np(wanter, persp, Case::Subject)?;
                let complements = match (p.get(role::ACTION), p.get(role::CONTENT)) {
                    (Some(Term::Action(act)), _) => {
                        let d = &act.decomposition()[0];
                        let doer = d.get(role::AGENT);
                        if doer == Some(wanter) {
                            vec![format!("to {}", self.infinitive(d, persp)?)]
                        } else if d.get(role::RECIPIENT) == Some(wanter) && d.has_role(role::THEME) {
                            vec![self.np(self.arg(d, role::THEME)?, persp, Case::Object)?.text]
                        } else {
                            let doer = doer.ok_or_else(|| {
                                RealizeError::Malformed(format!("`{d}` has no agent"))
                            })?;
                            vec![
                                self.np(doer, persp, Case::Object)?.text,
                                format!("to {}", self.infinitive(d, persp)?),
                            ]
                        }
                    }
                    (_, Some(Term::Proposition(inner))) => {
                        vec![format!("to {}", self.infinitive(inner, persp)?)]
                    }
                    _ => return Err(RealizeError::Malformed(format!("`{p}` wants nothing"))),
                };
                Ok(Frame {
                    subject,
                    modal: Some("would"),
                    verb: if negated { "want" } else { "like" }.to_string(),
                    complements,
                    negated,
                })
            }
            predicate::CANDO => {
                let subject = self.np(self.arg(p, role::AGENT)?, persp, Case::Subject)?;
                let inner = match self.arg(p, role::ACTION)? {
                    Term::Action(act) => act.decomposition()[0].clone(),
                    Term::Proposition(inner) => (**inner).clone(),
                    other => {
                        return Err(RealizeError::Malformed(format!("cannot do `{other}`")))
                    }
                };
                let (verb, complements) = self.predicate_phrase(&inner, persp, Embedding::Infinitival)?;
                Ok(Frame {
                    subject,
                    modal: Some("can"),
                    verb,
                    complements,
                    negated,
                })
            }
            predicate::KNOW => {
                let subject = self.np(self.arg(p, role::AGENT)?, persp, Case::Subject)?;
                let inner = match self.arg(p, role::CONTENT)? {
                    Term::Proposition(inner) => inner,
                    other => {
                        return Err(RealizeError::Malformed(format!("cannot know `{other}`")))
                    }
                };
                let open = negated || embedding != Embedding::Finite;
                let conj = if open { "whether" } else { "that" };
                let embedded = self.declarative(inner, persp)?;
                Ok(Frame {
                    subject,
                    modal: None,
                    verb: predicate::KNOW.to_string(),
                    complements: vec![format!("{conj} {embedded}")],
                    negated,
                })
            }
            lemma => {
                let entry = self.verb_entry(lemma)?;
                let subject = self.np(self.arg(p, &entry.subject)?, persp, Case::Subject)?;
                let (verb, complements) = self.predicate_phrase(p, persp, embedding)?;
                Ok(Frame {
                    subject,
                    modal: None,
                    verb,
                    complements,
                    negated,
                })
            }
        }
    }

    fn verb_entry(&self, lemma: &str) -> Result<&'a crate::lexicon::LexEntry, RealizeError> {
        match self.lexicon.entry(lemma) {
            None => Err(RealizeError::MissingLexeme(lemma.to_string())),
            Some(e) if e.category != Category::Verb => Err(RealizeError::NotAVerb(lemma.to_string())),
            Some(e) => Ok(e),
        }
    }

    /// Verb lemma and complements of a proposition, without its subject.
    fn predicate_phrase(
        &self,
        p: &Proposition,
        persp: &Perspective,
        embedding: Embedding,
    ) -> Result<(String, Vec<String>), RealizeError> {
        if matches!(p.predicate(), predicate::WANT | predicate::CANDO | predicate::KNOW) {
            let f = self.frame(p, persp, embedding)?;
            let verb = match f.modal {
                Some("can") => "be able to ".to_string() + &f.verb,
                Some(m) => return Err(RealizeError::Malformed(format!("`{m}` has no infinitive"))),
                None => f.verb,
            };
            return Ok((verb, f.complements));
        }
        let entry = self.verb_entry(p.predicate())?;
        let mut complements = Vec::new();
        for slot in &entry.complements {
            if let Some(term) = p.get(&slot.role) {
                let np = self.np(term, persp, Case::Object)?.text;
                complements.push(match &slot.preposition {
                    Some(prep) => format!("{prep} {np}"),
                    None => np,
                });
            }
        }
        Ok((entry.lemma.clone(), complements))
    }

    /// "bring us two cointreaux" for use after "to".
    fn infinitive(&self, p: &Proposition, persp: &Perspective) -> Result<String, RealizeError> {
        let (verb, complements) = self.predicate_phrase(p, persp, Embedding::Infinitival)?;
        let mut words = vec![verb];
        if p.is_negated() {
            words.insert(0, "not".to_string());
        }
        words.extend(complements);
        Ok(words.join(" "))
    }

    fn inflect(
        &self,
        frame: Frame,
        tense: Tense,
        obligation: bool,
        deference: bool,
    ) -> Result<Clause, RealizeError> {
        let entry = self.verb_entry(frame.verb.split(' ').next_back().unwrap_or_default())?;
        let forms = entry
            .forms
            .as_ref()
            .ok_or_else(|| RealizeError::NotAVerb(entry.lemma.clone()))?;
        // Multi-word verbs ("be able to bring") inflect their first word.
        let (first, rest) = match frame.verb.split_once(' ') {
            Some((f, r)) => (f.to_string(), format!(" {r}")),
            None => (frame.verb.clone(), String::new()),
        };
        let first_forms = if rest.is_empty() {
            forms.clone()
        } else {
            self.verb_entry(&first)?
                .forms
                .clone()
                .ok_or_else(|| RealizeError::NotAVerb(first.clone()))?
        };
        let copula = first == COPULA;
        let agr = frame.subject.agreement;
        let base = format!("{}{rest}", first_forms.base);

        let modal = match (frame.modal, obligation, tense) {
            (Some(m), _, _) => Some(m),
            (None, true, _) => Some("must"),
            (None, false, Tense::Future) => Some("will"),
            _ => None,
        }
        .map(|m| match (m, deference) {
            ("can", true) => "could",
            ("will", true) => "would",
            (m, _) => m,
        });

        let (auxiliary, verb) = match (modal, tense, copula) {
            (Some(m), _, _) => (Some(AuxKind::Modal(m.to_string())), base.clone()),
            (None, Tense::Perfect, _) => (
                Some(AuxKind::Have),
                format!("{}{rest}", first_forms.past_participle),
            ),
            (None, _, true) => (Some(AuxKind::Be), rest.trim_start().to_string()),
            (None, Tense::Past, false) => (None, format!("{}{rest}", first_forms.past)),
            (None, _, false) if agr.is_third_singular() => {
                (None, format!("{}{rest}", first_forms.third_singular))
            }
            (None, _, false) => (None, base.clone()),
        };
        // Perfect and modal clauses keep their tense only through the auxiliary.
        let clause_tense = match auxiliary {
            Some(AuxKind::Modal(_)) => Tense::Present,
            _ => tense,
        };

        Ok(Clause {
            subject: Some(frame.subject.text),
            auxiliary,
            verb,
            verb_base: base,
            complements: frame.complements,
            negated: frame.negated,
            modifiers: Vec::new(),
            tense: clause_tense,
            agreement: agr,
            tag_subject: frame.subject.tag,
            contractions: self.contractions,
        })
    }

    // "let us have two cointreaux": the subject becomes the object of "let".
    fn let_form(&self, clause: &Clause) -> Result<String, RealizeError> {
        let subject = clause.subject.clone().unwrap_or_default();
        let object = match subject.as_str() {
            "I" => "me".to_string(),
            "we" => "us".to_string(),
            "he" => "him".to_string(),
            "she" => "her".to_string(),
            "they" => "them".to_string(),
            other => other.to_string(),
        };
        let let_verb = self.verb_entry("let")?.lemma.clone();
        let mut words = Vec::new();
        if clause.negated {
            words.push(clause::negate_aux("do", self.contractions));
        }
        words.push(let_verb);
        words.push(object);
        words.extend(clause.modifiers.iter().cloned());
        words.push(clause.verb_base.clone());
        words.extend(clause.complements.iter().cloned());
        Ok(words.join(" "))
    }
}
