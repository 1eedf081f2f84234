use hansard_core::fixture::{fixture_partyfacts, fixture_registry, generate_fixture, FixtureSpec};
use hansard_core::pipeline::{process_day, DayConfig};
use hansard_core::xml::SchemaEra;

fn config() -> DayConfig {
    DayConfig {
        registry: fixture_registry(),
        partyfacts: fixture_partyfacts(),
        ..DayConfig::default()
    }
}

fn check(spec: &FixtureSpec, cfg: &DayConfig) {
    let f = generate_fixture(spec).unwrap();
    let out = process_day(f.bytes(), Some(f.date), cfg)
        .unwrap_or_else(|e| panic!("{spec:?}: {e}\n{}", f.xml));
    assert_eq!(out.era, spec.era, "{spec:?}");
    let got = &out.table.rows;
    let want = &f.truth.rows;
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert_eq!(g, w, "{spec:?} row {i}\n{}", f.xml);
    }
    assert_eq!(got.len(), want.len(), "{spec:?}\n{}", f.xml);
    assert_eq!(out.divisions, f.divisions, "{spec:?}");
    assert_eq!(out.topics, f.topics, "{spec:?}");
}

#[test]
fn every_era_matches_ground_truth() {
    let cfg = config();
    for era in SchemaEra::ALL {
        for seed in 0..40 {
            check(&FixtureSpec::new(era, seed), &cfg);
        }
    }
}

#[test]
fn sparse_and_dense_days() {
    let cfg = config();
    for era in SchemaEra::ALL {
        for (seed, rate, fed, div, n) in [(1, 0.0, false, false, 1), (2, 1.0, true, true, 5), (3, 0.6, false, true, 2)] {
            let spec = FixtureSpec {
                era,
                seed,
                n_debates: n,
                interjection_rate: rate,
                include_fedchamb: fed,
                include_divisions: div,
            };
            check(&spec, &cfg);
        }
    }
}
