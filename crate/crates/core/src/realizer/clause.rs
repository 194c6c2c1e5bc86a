//! Clause skeletons and the operations that reorder or decorate them.

use crate::speechact::Tense;

use super::perspective::Agreement;

/// Auxiliary as it was introduced, so it can be re-inflected for a tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxKind {
    Modal(String),
    Do,
    Have,
    Be,
}

/// A single finite or imperative clause.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    /// Rendered subject; `None` for imperatives.
    pub subject: Option<String>,
    pub auxiliary: Option<AuxKind>,
    /// Inflected main verb; empty when the copula is the auxiliary.
    pub verb: String,
    /// Base form, used when do-support is added.
    pub verb_base: String,
    pub complements: Vec<String>,
    pub negated: bool,
    /// Pre-verbal modifiers such as verbal hedges.
    pub modifiers: Vec<String>,
    pub tense: Tense,
    pub agreement: Agreement,
    /// Subject pronoun used in a tag question.
    pub tag_subject: String,
    pub contractions: bool,
}

pub(crate) fn aux_surface(kind: &AuxKind, tense: Tense, agr: Agreement) -> String {
    use super::perspective::Person;
    let past = tense == Tense::Past;
    match kind {
        AuxKind::Modal(m) => m.clone(),
        AuxKind::Do => match (past, agr.is_third_singular()) {
            (true, _) => "did",
            (false, true) => "does",
            (false, false) => "do",
        }
        .to_string(),
        AuxKind::Have => match (past, agr.is_third_singular()) {
            (true, _) => "had",
            (false, true) => "has",
            (false, false) => "have",
        }
        .to_string(),
        AuxKind::Be => match (past, agr.person, agr.plural) {
            (true, Person::First, false) | (true, Person::Third, false) => "was",
            (true, _, _) => "were",
            (false, Person::First, false) => "am",
            (false, Person::Third, false) => "is",
            (false, _, _) => "are",
        }
        .to_string(),
    }
}

/// Negated auxiliary, contracted or spelled out.
pub(crate) fn negate_aux(aux: &str, contract: bool) -> String {
    if !contract {
        return match aux {
            "can" => "cannot".to_string(),
            other => format!("{other} not"),
        };
    }
    match aux {
        "can" => "can't".to_string(),
        "will" => "won't".to_string(),
        "shall" => "shan't".to_string(),
        "am" => "am not".to_string(),
        other => format!("{other}n't"),
    }
}

fn join(words: impl IntoIterator<Item = String>) -> String {
    words
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_pronoun(word: &str) -> bool {
    matches!(
        word.to_ascii_lowercase().as_str(),
        "i" | "you" | "we" | "they" | "he" | "she" | "it"
    )
}

impl Clause {
    fn aux_text(&self) -> Option<String> {
        self.auxiliary
            .as_ref()
            .map(|k| aux_surface(k, self.tense, self.agreement))
    }

    /// Add do-support if the clause has no auxiliary.
    pub fn ensure_auxiliary(&mut self) {
        if self.auxiliary.is_none() {
            self.auxiliary = Some(AuxKind::Do);
            self.verb = self.verb_base.clone();
        }
    }

    /// Subject-first rendering, without terminal punctuation.
    pub fn declarative(&self) -> String {
        let subject = self.subject.clone().unwrap_or_default();
        let mut head: Vec<String> = Vec::new();
        match (self.aux_text(), self.negated) {
            (Some(aux), false) => {
                if self.contractions && aux == "would" && is_pronoun(&subject) {
                    head.push(format!("{subject}'d"));
                } else {
                    head.push(subject);
                    head.push(aux);
                }
            }
            (Some(aux), true) => {
                head.push(subject);
                head.push(negate_aux(&aux, self.contractions));
            }
            (None, true) => {
                // Negation always carries an auxiliary.
                let mut c = self.clone();
                c.ensure_auxiliary();
                return c.declarative();
            }
            (None, false) => head.push(subject),
        }
        head.extend(self.modifiers.iter().cloned());
        head.push(self.verb.clone());
        head.extend(self.complements.iter().cloned());
        join(head)
    }

    /// Subject-less rendering: "bring us two cointreaux".
    pub fn imperative(&self) -> String {
        let mut words: Vec<String> = Vec::new();
        if self.negated {
            words.push(negate_aux("do", self.contractions));
        }
        words.extend(self.modifiers.iter().cloned());
        words.push(self.verb_base.clone());
        words.extend(self.complements.iter().cloned());
        join(words)
    }

    /// Auxiliary-fronted question without the question mark.
    pub fn inverted(&self) -> String {
        let mut c = self.clone();
        c.ensure_auxiliary();
        let aux = c.aux_text().unwrap_or_default();
        let subject = c.subject.clone().unwrap_or_default();
        let mut words = if c.negated && c.contractions && aux != "am" {
            vec![negate_aux(&aux, true), subject]
        } else if c.negated {
            vec![aux, subject, "not".to_string()]
        } else {
            vec![aux, subject]
        };
        words.extend(c.modifiers.iter().cloned());
        words.push(c.verb.clone());
        words.extend(c.complements.iter().cloned());
        join(words)
    }

    /// Reversed-polarity tag, e.g. "wouldn't you".
    pub fn tag(&self) -> String {
        let mut c = self.clone();
        c.ensure_auxiliary();
        let agr = Agreement::of_pronoun(&c.tag_subject);
        let aux = aux_surface(c.auxiliary.as_ref().unwrap(), c.tense, agr);
        let subject = c.tag_subject.clone();
        if c.negated {
            format!("{aux} {subject}")
        } else if !c.contractions {
            format!("{aux} {subject} not")
        } else if aux == "am" {
            format!("aren't {subject}")
        } else {
            format!("{} {subject}", negate_aux(&aux, true))
        }
    }
}

/// Tag question for a declarative clause: ", wouldn't you?".
pub fn tag_question(clause: &Clause) -> String {
    format!(", {}?", clause.tag())
}

/// Fronted-auxiliary question with a question mark: "Can you bring us two cointreaux?".
pub fn invert_question(clause: &Clause) -> String {
    let mut q = clause.inverted();
    q.push('?');
    super::capitalize_first(&q)
}
