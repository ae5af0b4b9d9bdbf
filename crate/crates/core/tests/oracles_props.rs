use proptest::prelude::*;

use wordstat::exact::{joint_pmf, DistOptions};
use wordstat::numeric::{rat, to_f64};
use wordstat::oracles::{
    automaton_dp_pmf, brute_force_joint_pmf, monte_carlo_from_source, monte_carlo_pmf,
    sample_exact, CountAutomaton, DpOptions, MonteCarloConfig, StreamMode, DEFAULT_BRUTE_BUDGET,
    DEFAULT_STATE_BUDGET,
};
use wordstat::rng::{BitExtraction, BufferSource, GeneratorKind, Mt19937};
use wordstat::stats::ks_test;
use wordstat::words::{count_occurrences, Alphabet, PartialWord, Sampling, Symbol};
use wordstat::{IidModel, OccurrenceSpec};

fn pattern(q: u8, max_len: usize) -> impl Strategy<Value = PartialWord> {
    proptest::collection::vec(proptest::option::weighted(0.8, 0..q), 1..=max_len)
        .prop_filter_map("all wildcards", |l| PartialWord::new(l).ok())
}

fn bin(s: &str) -> PartialWord {
    Alphabet::binary().partial(s).unwrap()
}

#[test]
fn automaton_replays_ten_thousand_strings() {
    let mut rng = Mt19937::new(99);
    let mut draw = |bound: u32| rng.next_u32() % bound;
    for round in 0..20 {
        let q = 2 + draw(3) as u8;
        let patterns: Vec<PartialWord> = (0..1 + draw(4))
            .map(|_| loop {
                let len = 1 + draw(9) as usize;
                let letters = (0..len)
                    .map(|_| {
                        if draw(5) == 0 {
                            None
                        } else {
                            Some(draw(u32::from(q)) as Symbol)
                        }
                    })
                    .collect();
                if let Ok(p) = PartialWord::new(letters) {
                    break p;
                }
            })
            .collect();
        let automaton = CountAutomaton::new(&patterns, q as usize, DEFAULT_STATE_BUDGET).unwrap();
        for _ in 0..500 {
            let len = draw(80) as usize;
            let text: Vec<Symbol> = (0..len).map(|_| draw(u32::from(q)) as Symbol).collect();
            let expect: Vec<u64> = patterns
                .iter()
                .map(|p| count_occurrences(&text, p, Sampling::Sliding))
                .collect();
            assert_eq!(automaton.count(&text), expect, "round {round}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_matches_brute_force_on_any_patterns(
        patterns in proptest::collection::vec(pattern(2, 4), 1..=3),
        n in 0u64..=11,
        a in 1i64..5,
        b in 1i64..5,
    ) {
        let model = IidModel::new(Alphabet::binary(), vec![rat(a, a + b), rat(b, a + b)]).unwrap();
        let spec = OccurrenceSpec::new(patterns, n, model, Sampling::Sliding).unwrap();
        prop_assert_eq!(
            automaton_dp_pmf(&spec, &DpOptions::default()).unwrap(),
            brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).unwrap()
        );
    }

    #[test]
    fn ternary_dp_matches_brute_force(patterns in proptest::collection::vec(pattern(3, 3), 1..=2), n in 0u64..=7) {
        let model = IidModel::uniform(Alphabet::parse("xyz").unwrap());
        let spec = OccurrenceSpec::new(patterns, n, model, Sampling::Sliding).unwrap();
        prop_assert_eq!(
            automaton_dp_pmf(&spec, &DpOptions::default()).unwrap(),
            brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).unwrap()
        );
    }

    #[test]
    fn capped_dp_pools_the_upper_tail(p in pattern(2, 3), n in 1u64..=11, cap in 0u64..4) {
        let spec = OccurrenceSpec::new(vec![p], n, IidModel::fair_coin(), Sampling::Sliding).unwrap();
        let full = brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).unwrap();
        let capped = automaton_dp_pmf(&spec, &DpOptions { count_cap: Some(cap), ..DpOptions::default() }).unwrap();
        prop_assert_eq!(capped, full.map_counts(1, |c| vec![c[0].min(cap + 1)]));
    }
}

#[test]
fn buffer_source_feeds_the_counter() {
    let b = Alphabet::binary();
    let text = b.text("0110101101110011").unwrap();
    let spec = OccurrenceSpec::new(
        vec![bin("011")],
        4,
        IidModel::fair_coin(),
        Sampling::Sliding,
    )
    .unwrap();
    let mut source = BufferSource::new(text.clone());
    let emp = monte_carlo_from_source(&spec, &mut source, 4).unwrap();
    assert_eq!(emp.samples(), 4);
    for chunk in text.chunks(4) {
        let c = count_occurrences(chunk, &bin("011"), Sampling::Sliding);
        assert!(emp.mass(&[c]) > rat(0, 1));
    }
    let mut short = BufferSource::new(text);
    let err = monte_carlo_from_source(&spec, &mut short, 5).unwrap_err();
    assert_eq!(err.kind(), "stream_exhausted");
}

#[test]
fn monte_carlo_is_deterministic_per_seed() {
    let spec = OccurrenceSpec::new(
        vec![bin("0011")],
        64,
        IidModel::fair_coin(),
        Sampling::Sliding,
    )
    .unwrap();
    let cfg = MonteCarloConfig {
        generator: GeneratorKind::Mt19937,
        seed: 42,
        extraction: BitExtraction::Msb,
        iterations: 2000,
        stream: StreamMode::Reseed,
    };
    let (a, meta) = monte_carlo_pmf(&spec, &cfg).unwrap();
    let (b, _) = monte_carlo_pmf(&spec, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(meta.t, 2000);
    let (c, _) = monte_carlo_pmf(&spec, &MonteCarloConfig { seed: 43, ..cfg }).unwrap();
    assert_ne!(a, c);
}

#[test]
fn monte_carlo_agrees_with_the_exact_law() {
    let dna = Alphabet::dna();
    let model = IidModel::parse(dna.clone(), &["0.1", "0.2", "0.3", "0.4"]).unwrap();
    let spec = OccurrenceSpec::single(dna.partial("TG?A").unwrap(), 200, model).unwrap();
    let law = joint_pmf(&spec, &DistOptions::default()).unwrap();
    let (emp, _) = monte_carlo_pmf(
        &spec,
        &MonteCarloConfig {
            generator: GeneratorKind::Mt19937,
            seed: 5489,
            extraction: BitExtraction::Lsb,
            iterations: 20_000,
            stream: StreamMode::Continuous,
        },
    )
    .unwrap();
    let ks = ks_test(&emp.cdf(0).unwrap(), &law).unwrap();
    assert!(ks.p_value > 1e-3, "{ks:?}");
    let mean = to_f64(&emp.to_pmf().mean(0));
    assert!((mean - to_f64(&law.mean(0))).abs() < 0.05, "{mean}");
}

#[test]
fn exact_sampler_converges() {
    let spec = OccurrenceSpec::single(bin("11110"), 1600, IidModel::fair_coin()).unwrap();
    let law = joint_pmf(&spec, &DistOptions::default()).unwrap();
    let t = 100_000;
    let (emp, meta) = sample_exact(&law, 2024, t).unwrap();
    assert_eq!(meta.generator, "exact_sampler");
    let ks = ks_test(&emp.cdf(0).unwrap(), &law).unwrap();
    assert!(ks.d < 1.63 / (t as f64).sqrt(), "{ks:?}");
}
