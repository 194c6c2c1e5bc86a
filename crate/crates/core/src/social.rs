//! Social distance, power and imposition, and the face-threat bands they select.
//!
//! The threat of performing an act is the plain sum of the speaker's social
//! distance to the hearer, the hearer's power over the speaker, and the
//! imposition ranking of the act type. Each variable lies in `0..=50`, so the
//! threat lies in `0..=150` and is cut into four strategy bands.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affect::Disposition;
use crate::speechact::SpeechActType;

pub const MAX_SOCIAL_VALUE: u8 = 50;
pub const MAX_THREAT: u8 = 150;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SocialError {
    #[error("{name} = {value} is outside [0, {MAX_SOCIAL_VALUE}]")]
    OutOfRange { name: &'static str, value: i64 },
    #[error("threat {0} is outside [0, {MAX_THREAT}]")]
    ThreatRange(i64),
    #[error("no social values for speaker `{speaker}` and hearer `{hearer}`")]
    MissingPair { speaker: String, hearer: String },
    #[error("no disposition for `{0}`")]
    MissingDisposition(String),
}

/// A social variable (distance, power or imposition) in `0..=50`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct SocialValue(u8);

impl SocialValue {
    pub const ZERO: SocialValue = SocialValue(0);

    pub fn new(value: i64) -> Result<SocialValue, SocialError> {
        Self::named("value", value)
    }

    fn named(name: &'static str, value: i64) -> Result<SocialValue, SocialError> {
        if (0..=MAX_SOCIAL_VALUE as i64).contains(&value) {
            Ok(SocialValue(value as u8))
        } else {
            Err(SocialError::OutOfRange { name, value })
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<i64> for SocialValue {
    type Error = SocialError;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        SocialValue::new(value)
    }
}

impl From<SocialValue> for u8 {
    fn from(v: SocialValue) -> u8 {
        v.0
    }
}

/// Face threat, `D + P + R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct ThreatValue(u8);

impl ThreatValue {
    pub fn new(value: i64) -> Result<ThreatValue, SocialError> {
        if (0..=MAX_THREAT as i64).contains(&value) {
            Ok(ThreatValue(value as u8))
        } else {
            Err(SocialError::ThreatRange(value))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<i64> for ThreatValue {
    type Error = SocialError;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        ThreatValue::new(value)
    }
}

impl From<ThreatValue> for u8 {
    fn from(v: ThreatValue) -> u8 {
        v.0
    }
}

impl fmt::Display for ThreatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sum distance, hearer power and imposition into a threat value.
pub fn threat(distance: i64, power: i64, imposition: i64) -> Result<ThreatValue, SocialError> {
    let d = SocialValue::named("D", distance)?;
    let p = SocialValue::named("P", power)?;
    let r = SocialValue::named("R", imposition)?;
    Ok(threat_of(d, p, r))
}

pub fn threat_of(distance: SocialValue, power: SocialValue, imposition: SocialValue) -> ThreatValue {
    ThreatValue(distance.0 + power.0 + imposition.0)
}

/// Politeness strategy band, ordered by increasing threat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyBand {
    Direct,
    Approval,
    Autonomy,
    OffRecord,
}

impl StrategyBand {
    pub const ALL: [StrategyBand; 4] = [
        StrategyBand::Direct,
        StrategyBand::Approval,
        StrategyBand::Autonomy,
        StrategyBand::OffRecord,
    ];

    /// Inclusive threat interval covered by the band.
    pub fn range(self) -> RangeInclusive<u8> {
        match self {
            StrategyBand::Direct => 0..=50,
            StrategyBand::Approval => 51..=80,
            StrategyBand::Autonomy => 81..=120,
            StrategyBand::OffRecord => 121..=MAX_THREAT,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyBand::Direct => "direct",
            StrategyBand::Approval => "approval",
            StrategyBand::Autonomy => "autonomy",
            StrategyBand::OffRecord => "off-record",
        }
    }

    /// Next band towards Direct, if any.
    pub fn lower(self) -> Option<StrategyBand> {
        match self {
            StrategyBand::Direct => None,
            StrategyBand::Approval => Some(StrategyBand::Direct),
            StrategyBand::Autonomy => Some(StrategyBand::Approval),
            StrategyBand::OffRecord => Some(StrategyBand::Autonomy),
        }
    }
}

impl fmt::Display for StrategyBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn select_band(theta: ThreatValue) -> StrategyBand {
    match theta.0 {
        0..=50 => StrategyBand::Direct,
        51..=80 => StrategyBand::Approval,
        81..=120 => StrategyBand::Autonomy,
        _ => StrategyBand::OffRecord,
    }
}

/// Linear position of `theta` inside its band: 0 at the floor, 1 at the ceiling.
pub fn band_position(theta: ThreatValue) -> f64 {
    let range = select_band(theta).range();
    let (lo, hi) = (*range.start() as f64, *range.end() as f64);
    (theta.0 as f64 - lo) / (hi - lo)
}

/// Imposition ranking per speech act type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpositionTable(BTreeMap<SpeechActType, SocialValue>);

impl Default for ImpositionTable {
    fn default() -> Self {
        use SpeechActType::*;
        let table = [
            (AcceptRequest, 5),
            (AcceptInform, 5),
            (AcceptOffer, 10),
            (Inform, 15),
            (RequestInfo, 20),
            (Offer, 25),
            (RejectOffer, 30),
            (RejectInform, 35),
            (RejectRequest, 40),
            (RequestAct, 45),
        ];
        ImpositionTable(
            table
                .into_iter()
                .map(|(t, v)| (t, SocialValue(v)))
                .collect(),
        )
    }
}

impl ImpositionTable {
    /// Default table with the given entries replaced.
    pub fn with_overrides(
        overrides: impl IntoIterator<Item = (SpeechActType, i64)>,
    ) -> Result<ImpositionTable, SocialError> {
        let mut table = ImpositionTable::default();
        for (act, value) in overrides {
            table.0.insert(act, SocialValue::named("R", value)?);
        }
        Ok(table)
    }

    pub fn get(&self, act: SpeechActType) -> SocialValue {
        self.0[&act]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpeechActType, SocialValue)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }
}

/// Distance and hearer power for one ordered (speaker, hearer) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairValues {
    /// D(S, H)
    pub distance: SocialValue,
    /// P(H, S)
    pub hearer_power: SocialValue,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SocialStructure {
    pairs: BTreeMap<(String, String), PairValues>,
    dispositions: BTreeMap<String, Disposition>,
    imposition: ImpositionTable,
}

impl SocialStructure {
    pub fn new(imposition: ImpositionTable) -> SocialStructure {
        SocialStructure {
            imposition,
            ..Default::default()
        }
    }

    /// Record D(S,H) and P(H,S) for the ordered pair (speaker, hearer).
    pub fn set_pair(
        &mut self,
        speaker: impl Into<String>,
        hearer: impl Into<String>,
        distance: i64,
        hearer_power: i64,
    ) -> Result<(), SocialError> {
        let values = PairValues {
            distance: SocialValue::named("D", distance)?,
            hearer_power: SocialValue::named("P", hearer_power)?,
        };
        self.pairs.insert((speaker.into(), hearer.into()), values);
        Ok(())
    }

    pub fn set_disposition(&mut self, agent: impl Into<String>, d: Disposition) {
        self.dispositions.insert(agent.into(), d);
    }

    pub fn pair(&self, speaker: &str, hearer: &str) -> Result<PairValues, SocialError> {
        self.pairs
            .get(&(speaker.to_string(), hearer.to_string()))
            .copied()
            .ok_or_else(|| SocialError::MissingPair {
                speaker: speaker.to_string(),
                hearer: hearer.to_string(),
            })
    }

    pub fn disposition(&self, agent: &str) -> Result<Disposition, SocialError> {
        self.dispositions
            .get(agent)
            .copied()
            .ok_or_else(|| SocialError::MissingDisposition(agent.to_string()))
    }

    pub fn imposition(&self) -> &ImpositionTable {
        &self.imposition
    }

    /// Full assessment of one act: D, P, R, threat and band.
    pub fn assess(
        &self,
        speaker: &str,
        hearer: &str,
        act: SpeechActType,
    ) -> Result<Assessment, SocialError> {
        let pair = self.pair(speaker, hearer)?;
        let imposition = self.imposition.get(act);
        let theta = threat_of(pair.distance, pair.hearer_power, imposition);
        Ok(Assessment {
            distance: pair.distance,
            power: pair.hearer_power,
            imposition,
            theta,
            band: select_band(theta),
            position: band_position(theta),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assessment {
    pub distance: SocialValue,
    pub power: SocialValue,
    pub imposition: SocialValue,
    pub theta: ThreatValue,
    pub band: StrategyBand,
    pub position: f64,
}
