//! Acceptance criteria, one PASS/FAIL line each.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lsi_core::affect::PARAMETERS;
use lsi_core::dialogue::Turn;
use lsi_core::lexicon::PosTag;
use lsi_core::realizer::Perspective;
use lsi_core::social::{band_position, select_band, threat};
use lsi_core::strategy::{apply, select_strategy, StrategyContext, DEFAULT_SUBSTITUTION_PROBABILITY};
use lsi_core::{
    bundled, compile, run_dialogue, Annotator, Dialogue, Disposition, ImpositionTable, Line,
    Realizer, RunConfig, ScriptDoc, SocialDoc, SocialStructure, SpeechActInstance, SpeechActType,
    StrategyBand, StrategyId, DEFAULT_SEED,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RUN1: [&str; 5] = [
    "Could I help you?",
    "You must take us to a table. I am Victor Laszlo.",
    "It's a pleasure.",
    "Bring us two cointreaux, right away",
    "I'd be glad to.",
];

const RUN2: [&str; 5] = [
    "I will help you",
    "Can you take us to a table? As you may know, I am Victor Laszlo",
    "Yes, if you insist.",
    "You wouldn't want to bring us two cointreaux, would you?",
    "Yes, if I must.",
];

fn normalize(s: &str) -> String {
    s.trim()
        .trim_end_matches(['.', '?', '!'])
        .to_lowercase()
}

fn casablanca(social: &str) -> Dialogue {
    let script = ScriptDoc::from_json(bundled::CASABLANCA_SCRIPT).unwrap();
    let social = SocialDoc::from_json(social).unwrap();
    let (dialogue, diagnostics) = compile(&script, &social, &bundled::lexicon());
    assert!(diagnostics.is_empty(), "{diagnostics:?}");
    dialogue.unwrap()
}

fn speech(lines: &[Line]) -> Vec<String> {
    lines
        .iter()
        .filter_map(|l| l.utterance().map(|u| u.text.clone()))
        .collect()
}

fn golden(social: &str, expected: &[&str]) {
    let lexicon = bundled::lexicon();
    let dialogue = casablanca(social);
    let start = Instant::now();
    let lines = run_dialogue(&dialogue, &lexicon, None, &RunConfig::with_seed(DEFAULT_SEED)).unwrap();
    let elapsed = start.elapsed();
    let got = speech(&lines);
    assert_eq!(got.len(), expected.len(), "{got:?}");
    for (g, e) in got.iter().zip(expected) {
        assert_eq!(normalize(g), normalize(e), "line {g:?} vs {e:?}");
    }
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
}

fn criterion_1() {
    golden(bundled::CASABLANCA_RUN1_SOCIAL, &RUN1);
}

fn criterion_2() {
    golden(bundled::CASABLANCA_RUN2_SOCIAL, &RUN2);
}

fn criterion_3() {
    let table = ImpositionTable::default();
    let r = table.get(SpeechActType::RequestAct);
    assert_eq!(r.get(), 45);
    let theta = threat(4, 0, i64::from(r.get())).unwrap();
    assert_eq!(theta.get(), 49);
    assert_eq!(select_band(theta), StrategyBand::Direct);

    let mut social = SocialStructure::new(table);
    social.set_pair("laszlo", "waiter", 4, 0).unwrap();
    let a = social.assess("laszlo", "waiter", SpeechActType::RequestAct).unwrap();
    assert_eq!((a.theta.get(), a.band), (49, StrategyBand::Direct));
}

fn criterion_4() {
    use StrategyBand::*;
    let cases = [
        (0, Direct),
        (50, Direct),
        (51, Approval),
        (80, Approval),
        (81, Autonomy),
        (120, Autonomy),
        (121, OffRecord),
        (150, OffRecord),
    ];
    for (t, band) in cases {
        let theta = threat(t.min(50), (t - t.min(50)).min(50), (t - t.min(100)).max(0)).unwrap();
        assert_eq!(theta.get() as i64, t);
        assert_eq!(select_band(theta), band, "theta {t}");
    }
}

/// One compiled instance of every act type, from the restaurant corpus.
fn every_act_type() -> (Dialogue, BTreeMap<SpeechActType, SpeechActInstance>) {
    let script = ScriptDoc::from_json(bundled::RESTAURANT_SCRIPT).unwrap();
    let social = SocialDoc::from_json(bundled::RESTAURANT_SOCIAL).unwrap();
    let dialogue = compile(&script, &social, &bundled::lexicon()).0.unwrap();
    let mut acts = BTreeMap::new();
    for turn in &dialogue.turns {
        if let Turn::Speech { acts: list, .. } = turn {
            for a in list {
                acts.entry(a.act_type()).or_insert_with(|| a.clone());
            }
        }
    }
    (dialogue, acts)
}

fn criterion_5() {
    let lexicon = bundled::lexicon();
    let (dialogue, acts) = every_act_type();
    assert_eq!(acts.len(), SpeechActType::ALL.len());
    let realizer = Realizer::new(&lexicon, &dialogue.roster);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut checked = 0usize;
    for d in 0..=50i64 {
        for p in 0..=50i64 {
            for act in acts.values() {
                let (s, h) = (act.speaker(), act.hearer());
                let mut social = SocialStructure::new(ImpositionTable::default());
                social.set_pair(s, h, d, p).unwrap();
                let a = social.assess(s, h, act.act_type()).unwrap();
                assert_eq!(a.band, select_band(a.theta));
                assert!((0.0..=1.0).contains(&band_position(a.theta)));
                let selection = select_strategy(
                    act,
                    a.band,
                    a.position,
                    DEFAULT_SUBSTITUTION_PROBABILITY,
                    &mut rng,
                );
                assert!(selection.strategy.applies_to(act.act_type()));
                let ctx = StrategyContext {
                    perspective: Perspective::new(s, h, &dialogue.roster),
                    hearer_name: dialogue.roster.agent(h).unwrap().addressed_as().to_string(),
                    address_form: dialogue.roster.address_form(s).to_string(),
                };
                let spec = apply(act, selection.strategy, &ctx, &mut rng)
                    .unwrap_or_else(|e| panic!("D={d} P={p} {}: {e}", act.act_type()));
                let text = realizer
                    .render(&spec)
                    .unwrap_or_else(|e| panic!("D={d} P={p} {}: {e}", act.act_type()));
                assert!(!text.trim().is_empty());
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 51 * 51 * 10);
}

fn criterion_6() {
    let lexicon = bundled::lexicon();
    let dialogue = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
    let expected = [
        (StrategyId::RealizeDirect, "Bring us two cointreaux."),
        (StrategyId::PowerDirectUrgency, "Bring us two cointreaux, right away."),
        (StrategyId::PowerDirectObligation, "You must bring us two cointreaux."),
        (
            StrategyId::OptimismApproval,
            "You'd like to bring us two cointreaux, wouldn't you?",
        ),
        (StrategyId::QueryAbilityAutonomy, "Can you bring us two cointreaux?"),
        (StrategyId::AssertWantPreconditionAutonomy, "We'd like two cointreaux."),
        (StrategyId::ImpersonalizeActorAutonomy, "Let us have two cointreaux."),
        (
            StrategyId::NegateEffectAutonomy,
            "You wouldn't want to bring us two cointreaux, would you?",
        ),
        (StrategyId::AssertNegationDomainEffect, "We don't have two cointreaux yet."),
        (
            StrategyId::AbstractAgentAndNegateEffect,
            "Someone hasn't brought us two cointreaux.",
        ),
    ];
    for (id, sentence) in expected {
        let mut config = RunConfig::default();
        config.forced.insert((6, 1), id);
        let lines = run_dialogue(&dialogue, &lexicon, None, &config).unwrap();
        let u = lines[5].utterance().expect("turn 6 is speech");
        assert_eq!(u.text, sentence, "{id}");
        assert_eq!(u.acts[0].strategy, id);
        assert!(u.acts[0].forced);
    }
}

fn criterion_7() {
    let lexicon = bundled::lexicon();
    let dialogue = casablanca(bundled::CASABLANCA_RUN1_SOCIAL);
    for seed in [0, 1, DEFAULT_SEED, u64::MAX] {
        let a = run_dialogue(&dialogue, &lexicon, Some(&bundled::palette()), &RunConfig::with_seed(seed)).unwrap();
        let b = run_dialogue(&dialogue, &lexicon, Some(&bundled::palette()), &RunConfig::with_seed(seed)).unwrap();
        let bytes = |lines: &[Line]| {
            lines
                .iter()
                .map(|l| l.to_json(true, true).to_string())
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(bytes(&a), bytes(&b));
    }

    // Laszlo's request-act at D=10, P=10: theta 65, approval band.
    let mut social = SocialDoc::from_json(bundled::CASABLANCA_RUN1_SOCIAL).unwrap();
    for pair in &mut social.pairs {
        if pair.speaker == "laszlo" {
            pair.distance = 10;
            pair.hearer_power = 10;
        }
    }
    let social_json = serde_json::to_string(&social).unwrap();
    let dialogue = casablanca(&social_json);
    let mut seen = BTreeSet::new();
    for seed in 0..100 {
        let lines = run_dialogue(&dialogue, &lexicon, None, &RunConfig::with_seed(seed)).unwrap();
        let u = lines[5].utterance().unwrap();
        assert_eq!(u.acts[0].band, StrategyBand::Approval);
        assert_eq!(u.acts[0].act, SpeechActType::RequestAct);
        seen.insert(u.text.clone());
    }
    assert!(seen.len() >= 2, "{seen:?}");
}

fn criterion_8() {
    let palette = bundled::palette();
    assert_eq!(PARAMETERS.len(), 17);
    for d in Disposition::ALL {
        let v = palette.vector(d);
        assert_eq!(v.len(), 17);
        assert!(v.values().iter().all(|x| (-10..=10).contains(x)), "{d:?}");
    }
    assert!(palette.vector(Disposition::Neutral).is_neutral());
    assert!(palette.vector(Disposition::Neutral).values().iter().all(|&x| x == 0));

    let lexicon = bundled::lexicon();
    for social in [bundled::CASABLANCA_RUN1_SOCIAL, bundled::CASABLANCA_RUN2_SOCIAL] {
        let dialogue = casablanca(social);
        let lines = run_dialogue(&dialogue, &lexicon, Some(&palette), &RunConfig::default()).unwrap();
        let mut per_speaker = BTreeMap::new();
        for u in lines.iter().filter_map(Line::utterance) {
            let record = u.prosody.as_ref().unwrap();
            let first = per_speaker.entry(u.speaker.clone()).or_insert(record.affect);
            assert_eq!(*first, record.affect, "{} changed vector", u.speaker);
            assert!(!record.utterance.tokens.is_empty());
            for t in &record.utterance.tokens {
                assert_ne!(t.pos, PosTag::Unknown, "{}", t.surface);
                assert!((0.0..=1.0).contains(&t.accent), "{}", t.surface);
            }
        }
    }

    let mut annotator = Annotator::new(&lexicon);
    let first = annotator.annotate("Bring us two cointreaux.").unwrap();
    let second = annotator.annotate("We don't have two cointreaux yet.").unwrap();
    let accent = |u: &lsi_core::AnnotatedUtterance, lemma: &str| {
        u.tokens.iter().find(|t| t.lemma == lemma).unwrap().accent
    };
    assert!(accent(&second, "cointreaux") < accent(&first, "cointreaux"));
}

fn lsi(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lsi"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.success(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn criterion_9() {
    let dir = tempfile::tempdir().unwrap();
    let script: serde_json::Value = serde_json::from_str(bundled::CASABLANCA_SCRIPT).unwrap();
    let social: serde_json::Value = serde_json::from_str(bundled::CASABLANCA_RUN1_SOCIAL).unwrap();

    let mut bad_social = social.clone();
    bad_social["pairs"][0]["distance"] = 60.into();
    let social_path = write_json(dir.path(), "range.social.json", &bad_social);
    let (ok, out) = lsi(&["validate", "--social", &social_path]);
    assert!(!ok);
    assert!(out.contains("error[range]") && out.contains("[0, 50]"), "{out}");

    let mut broken = script.clone();
    broken["turns"][5]["acts"][0]["action"] = "serve-champagne".into();
    let script_path = write_json(dir.path(), "broken.script.json", &broken);
    let (ok, out) = lsi(&["validate", "--script", &script_path]);
    assert!(!ok);
    assert!(out.contains("error[reference] turn 6"), "{out}");

    let mut own_agent = script.clone();
    own_agent["domain_acts"]["serve-cointreaux"]["agent"] = "laszlo".into();
    own_agent["domain_acts"]["serve-cointreaux"]["decomposition"][0]["args"]["agent"] =
        "laszlo".into();
    let script_path = write_json(dir.path(), "agent.script.json", &own_agent);
    let (ok, out) = lsi(&["validate", "--script", &script_path]);
    assert!(!ok);
    assert!(out.contains("error[constraint] turn 6"), "{out}");
    let (ok, _) = lsi(&["render", "--script", &script_path]);
    assert!(!ok);

    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    let file = |name: &str| data.join(name).to_string_lossy().into_owned();
    for (s, soc) in [
        ("casablanca.script.json", "casablanca.run1.social.json"),
        ("casablanca.script.json", "casablanca.run2.social.json"),
        ("restaurant.script.json", "restaurant.social.json"),
    ] {
        let (ok, out) = lsi(&[
            "validate",
            "--script",
            &file(s),
            "--social",
            &file(soc),
            "--lexicon",
            &file("lexicon.json"),
        ]);
        assert!(ok, "{s} with {soc}: {out}");
        assert_eq!(out.trim(), "ok");
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn()); 9] = [
        ("1 golden run 1 (angry/pleasant)", criterion_1),
        ("2 golden run 2 (distraught/pleasant)", criterion_2),
        ("3 worked threat example", criterion_3),
        ("4 band boundaries", criterion_4),
        ("5 exhaustive totality", criterion_5),
        ("6 strategy catalog fidelity", criterion_6),
        ("7 determinism and variation", criterion_7),
        ("8 affect structure", criterion_8),
        ("9 validation diagnostics", criterion_9),
    ];
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    let mut report = Vec::new();
    for (name, check) in criteria {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(()) => report.push(format!("PASS  {name}")),
            Err(e) => {
                let why = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                report.push(format!("FAIL  {name}: {why}"));
                failed.push(name);
            }
        }
    }
    panic::set_hook(hook);
    // Written to the raw handle so the report shows without --nocapture.
    let mut err = std::io::stderr().lock();
    for line in &report {
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
