use std::collections::BTreeSet;

use crate::roster::{Pronoun, Roster};

/// Who is speaking to whom, and which ids count as "we" and "you".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perspective {
    pub speaker: String,
    pub hearer: String,
    /// The speaker plus every party the speaker belongs to.
    pub speaker_group: BTreeSet<String>,
    /// The hearer plus every party the hearer belongs to.
    pub hearer_group: BTreeSet<String>,
}

impl Perspective {
    pub fn new(speaker: &str, hearer: &str, roster: &Roster) -> Perspective {
        Perspective {
            speaker: speaker.to_string(),
            hearer: hearer.to_string(),
            speaker_group: roster.parties_of(speaker),
            hearer_group: roster.parties_of(hearer),
        }
    }

    /// Perspective with no parties.
    pub fn solo(speaker: &str, hearer: &str) -> Perspective {
        Perspective {
            speaker: speaker.to_string(),
            hearer: hearer.to_string(),
            speaker_group: BTreeSet::from([speaker.to_string()]),
            hearer_group: BTreeSet::from([hearer.to_string()]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Subject,
    Object,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Person {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    pub person: Person,
    pub plural: bool,
}

impl Agreement {
    pub const FIRST_SINGULAR: Agreement = Agreement { person: Person::First, plural: false };
    pub const FIRST_PLURAL: Agreement = Agreement { person: Person::First, plural: true };
    pub const SECOND: Agreement = Agreement { person: Person::Second, plural: false };
    pub const THIRD_SINGULAR: Agreement = Agreement { person: Person::Third, plural: false };
    pub const THIRD_PLURAL: Agreement = Agreement { person: Person::Third, plural: true };

    pub fn is_third_singular(self) -> bool {
        self.person == Person::Third && !self.plural
    }

    /// Agreement of a subject pronoun as used in tag questions.
    pub fn of_pronoun(pronoun: &str) -> Agreement {
        match pronoun.to_ascii_lowercase().as_str() {
            "i" => Agreement::FIRST_SINGULAR,
            "we" => Agreement::FIRST_PLURAL,
            "you" => Agreement::SECOND,
            "they" => Agreement::THIRD_PLURAL,
            _ => Agreement::THIRD_SINGULAR,
        }
    }
}

pub(crate) fn third_person(pronoun: Pronoun, case: Case) -> &'static str {
    match (pronoun, case) {
        (Pronoun::He, Case::Subject) => "he",
        (Pronoun::He, Case::Object) => "him",
        (Pronoun::She, Case::Subject) => "she",
        (Pronoun::She, Case::Object) => "her",
        (Pronoun::They, Case::Subject) => "they",
        (Pronoun::They, Case::Object) => "them",
        (Pronoun::It, _) => "it",
    }
}

pub const SOMEONE: &str = "someone";

/// Pronoun for a referent seen from `perspective`, if it has one.
///
/// The speaker is I/me, a party containing the speaker is we/us, the hearer
/// or a party containing the hearer is you, and the existential placeholder
/// is "someone". Any other referent is `None` and is realised by name.
pub fn pronominalize(referent: &str, perspective: &Perspective, case: Case) -> Option<&'static str> {
    if referent == SOMEONE {
        Some(SOMEONE)
    } else if referent == perspective.speaker {
        Some(match case {
            Case::Subject => "I",
            Case::Object => "me",
        })
    } else if perspective.speaker_group.contains(referent) {
        Some(match case {
            Case::Subject => "we",
            Case::Object => "us",
        })
    } else if referent == perspective.hearer || perspective.hearer_group.contains(referent) {
        Some("you")
    } else {
        None
    }
}

pub(crate) fn pronoun_agreement(pronoun: &str) -> Agreement {
    match pronoun {
        SOMEONE => Agreement::THIRD_SINGULAR,
        other => Agreement::of_pronoun(match other {
            "me" => "i",
            "us" => "we",
            _ => other,
        }),
    }
}
