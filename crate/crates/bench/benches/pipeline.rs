use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lsi_core::{bundled, compile, run_dialogue, Annotator, RunConfig, ScriptDoc, SocialDoc};

fn pipeline(c: &mut Criterion) {
    let lexicon = bundled::lexicon();
    let palette = bundled::palette();
    let script = ScriptDoc::from_json(bundled::RESTAURANT_SCRIPT).unwrap();
    let social = SocialDoc::from_json(bundled::RESTAURANT_SOCIAL).unwrap();

    c.bench_function("compile restaurant", |b| {
        b.iter(|| compile(black_box(&script), black_box(&social), &lexicon))
    });

    let dialogue = compile(&script, &social, &lexicon).0.unwrap();
    c.bench_function("run restaurant", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            run_dialogue(&dialogue, &lexicon, None, &RunConfig::with_seed(seed)).unwrap()
        })
    });
    c.bench_function("run restaurant with prosody", |b| {
        b.iter(|| run_dialogue(&dialogue, &lexicon, Some(&palette), &RunConfig::default()).unwrap())
    });
    c.bench_function("annotate", |b| {
        b.iter(|| {
            Annotator::new(&lexicon)
                .annotate(black_box("You wouldn't want to bring us two cointreaux, would you?"))
                .unwrap()
        })
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
