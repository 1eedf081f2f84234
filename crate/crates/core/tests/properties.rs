use hansard_core::divisions::flatten_votes;
use hansard_core::fixture::{fixture_partyfacts, fixture_registry, generate_fixture, FixtureSpec};
use hansard_core::pipeline::{process_day, DayConfig};
use hansard_core::segment::StageDirectionLexicon;
use hansard_core::table::{build_corpus, CorpusTable, DailyTable, DebateRecord};
use hansard_core::text::normalize_whitespace;
use hansard_core::validate::compute_summary_stats;
use hansard_core::xml::SchemaEra;
use proptest::prelude::*;

fn config() -> DayConfig {
    DayConfig {
        registry: fixture_registry(),
        partyfacts: fixture_partyfacts(),
        ..DayConfig::default()
    }
}

fn era() -> impl Strategy<Value = SchemaEra> {
    prop::sample::select(SchemaEra::ALL.to_vec())
}

fn spec() -> impl Strategy<Value = FixtureSpec> {
    (era(), any::<u64>(), 1usize..5, 0.0f64..=1.0, any::<bool>(), any::<bool>()).prop_map(
        |(era, seed, n_debates, interjection_rate, include_fedchamb, include_divisions)| FixtureSpec {
            era,
            seed,
            n_debates,
            interjection_rate,
            include_fedchamb,
            include_divisions,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parse_matches_truth(spec in spec()) {
        let f = generate_fixture(&spec).unwrap();
        let out = process_day(f.bytes(), Some(f.date), &config()).unwrap();
        prop_assert_eq!(&out.table, &f.truth);
        prop_assert_eq!(&out.divisions, &f.divisions);
        prop_assert_eq!(&out.topics, &f.topics);
    }

    #[test]
    fn table_invariants_hold(spec in spec()) {
        let f = generate_fixture(&spec).unwrap();
        let out = process_day(f.bytes(), Some(f.date), &config()).unwrap();
        prop_assert!(out.table.validate().is_ok());
        for r in &out.table.rows {
            prop_assert!(!(r.question == 1 && r.answer == 1));
            if r.is_non_speech() {
                prop_assert_eq!(r.interject, 0);
            }
        }
        let votes = flatten_votes(&out.divisions);
        let total: u32 = out.divisions.iter().map(|d| d.num_votes_ayes + d.num_votes_noes + d.num_votes_pairs).sum();
        prop_assert_eq!(votes.len() as u32, total);
        prop_assert!(out.divisions.iter().all(|d| d.is_consistent()));
    }

    #[test]
    fn records_survive_text_fields(spec in spec()) {
        let f = generate_fixture(&spec).unwrap();
        for r in &f.truth.rows {
            let fields = r.to_fields();
            let strs: Vec<&str> = fields.iter().map(|v| v.as_deref().unwrap_or("")).collect();
            prop_assert_eq!(&DebateRecord::from_fields(&strs).unwrap(), r);
        }
    }

    #[test]
    fn stats_ignore_row_order(spec in spec(), shuffle_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f = generate_fixture(&spec).unwrap();
        let stats = |t: DailyTable| compute_summary_stats(&build_corpus(vec![t]).unwrap(), &fixture_partyfacts());
        let mut shuffled = f.truth.clone();
        shuffled.rows.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle_seed));
        prop_assert_eq!(stats(f.truth.clone()), stats(shuffled));
    }

    #[test]
    fn corpus_counts_add_up(seeds in prop::collection::btree_set(any::<u64>(), 1..5)) {
        let days: Vec<DailyTable> = seeds
            .iter()
            .map(|&s| generate_fixture(&FixtureSpec::new(SchemaEra::ModernFedChamb, s)).unwrap().truth)
            .collect();
        let mut dates: Vec<_> = days.iter().map(|d| d.date).collect();
        dates.sort();
        dates.dedup();
        let expected: usize = days.iter().map(|d| d.rows.len()).sum();
        match build_corpus(days) {
            Ok(CorpusTable { days }) => {
                prop_assert_eq!(days.iter().map(|d| d.rows.len()).sum::<usize>(), expected);
                prop_assert_eq!(days.len(), dates.len());
            }
            Err(e) => prop_assert!(dates.len() < seeds.len(), "{}", e),
        }
    }

    #[test]
    fn whitespace_normalisation_is_idempotent(s in "[ a-z\\n\\t\u{a0}.]{0,40}") {
        let once = normalize_whitespace(&s);
        prop_assert_eq!(normalize_whitespace(&once), once.clone());
        prop_assert!(!once.contains("  ") && once.trim() == once);
    }

    #[test]
    fn stage_phrase_peels_off(words in "[a-z]{1,8}( [a-z]{1,8}){0,6}", idx in 0usize..8) {
        let lex = StageDirectionLexicon::default();
        let phrase = lex.phrases()[idx % lex.phrases().len()].clone();
        let body = format!("{words}. {phrase}.");
        let (rest, found) = lex.peel(&body);
        prop_assert_eq!(rest, format!("{words}."));
        prop_assert_eq!(found, vec![format!("{phrase}.")]);
    }
}
