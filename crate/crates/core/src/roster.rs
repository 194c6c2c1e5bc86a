//! Characters and the parties they speak for.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// Third-person pronoun used when a character is neither speaker nor hearer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pronoun {
    He,
    She,
    #[default]
    They,
    It,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: String,
    /// Label used in dialogue output and third-person mentions.
    pub name: String,
    /// Name used when the agent is addressed directly ("Hey Emil").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub address_name: Option<String>,
    #[serde(default)]
    pub pronoun: Pronoun,
    /// In-group address form this agent uses towards others.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub address_form: Option<String>,
}

impl Agent {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Agent {
        Agent {
            id: id.into(),
            name: name.into(),
            address_name: None,
            pronoun: Pronoun::default(),
            address_form: None,
        }
    }

    pub fn addressed_as(&self) -> &str {
        self.address_name.as_deref().unwrap_or(&self.name)
    }
}

pub const DEFAULT_ADDRESS_FORM: &str = "my man";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Roster {
    agents: BTreeMap<String, Agent>,
    groups: BTreeMap<String, BTreeSet<String>>,
}

impl Roster {
    pub fn new() -> Roster {
        Roster::default()
    }

    pub fn add_agent(&mut self, agent: Agent) {
        self.agents.insert(agent.id.clone(), agent);
    }

    pub fn add_group<I, S>(&mut self, id: impl Into<String>, members: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.groups
            .insert(id.into(), members.into_iter().map(Into::into).collect());
    }

    pub fn agent(&self, id: &str) -> Option<&Agent> {
        self.agents.get(id)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.agents.values()
    }

    pub fn group(&self, id: &str) -> Option<&BTreeSet<String>> {
        self.groups.get(id)
    }

    pub fn is_known(&self, id: &str) -> bool {
        self.agents.contains_key(id) || self.groups.contains_key(id)
    }

    /// Ids denoting `agent` itself or any party it belongs to.
    pub fn parties_of(&self, agent: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::from([agent.to_string()]);
        out.extend(
            self.groups
                .iter()
                .filter(|(_, members)| members.contains(agent))
                .map(|(id, _)| id.clone()),
        );
        out
    }

    pub fn address_form(&self, agent: &str) -> &str {
        self.agent(agent)
            .and_then(|a| a.address_form.as_deref())
            .unwrap_or(DEFAULT_ADDRESS_FORM)
    }
}
