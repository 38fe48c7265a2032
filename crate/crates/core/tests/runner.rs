use bethe_lab::runner::{
    run, BaeSolveArgs, Cli, Command, DensityArgs, EdArgs, ExperimentConfig, YbeArgs, EXIT_CHECK_FAILED, EXIT_OK,
};
use bethe_lab::{io, C64};
use clap::Parser;
use proptest::prelude::*;
use serde_json::json;

const LEAVES: &[&[&str]] = &[
    &["ed"],
    &["bae", "solve"],
    &["bae", "residual"],
    &["bae", "two-magnon"],
    &["bethe-vector", "build"],
    &["bethe-vector", "verify"],
    &["thermo", "density"],
    &["thermo", "gs-energy"],
    &["thermo", "condensation"],
    &["vertex", "ybe"],
    &["vertex", "transfer"],
    &["vertex", "partition"],
    &["vertex", "ice-entropy"],
    &["vertex", "hamiltonian-link"],
    &["aba", "slavnov"],
    &["aba", "verify-action"],
    &["hubbard", "ed"],
    &["hubbard", "liebwu"],
    &["hubbard", "verify"],
];

fn parse(words: &[&str]) -> Command {
    Cli::try_parse_from(std::iter::once("bethe-lab").chain(words.iter().copied())).unwrap().command.into_command()
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -10.0f64..10.0]
}

fn command() -> impl Strategy<Value = Command> {
    prop_oneof![
        (1usize..16, prop::option::of(0usize..8), finite(), prop::option::of(finite()))
            .prop_map(|(sites, down, j, delta)| Command::Ed(EdArgs { sites, down, j, delta })),
        (prop_oneof![Just(f64::INFINITY), 0.0f64..100.0], 1usize..512, 1usize..200, prop::option::of(finite()))
            .prop_map(|(q, nodes, samples, closed_form_tol)| Command::ThermoDensity(DensityArgs { q, nodes, samples, closed_form_tol })),
        (1usize..1000, prop::option::of((finite(), finite())), finite(), finite()).prop_map(|(trials, eta, rho, scale)| {
            Command::VertexYbe(YbeArgs { trials, eta: eta.map(|(a, b)| C64::new(a, b)), rho: C64::new(rho, 0.0), scale })
        }),
        (prop::collection::vec(-20i64..20, 0..6), finite(), any::<bool>()).prop_map(|(qnums, gamma, compare_ed)| {
            Command::BaeSolve(BaeSolveArgs { qnums, gamma, compare_ed, ..Default::default() })
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// A config survives JSON bit for bit, and re-serializes to the same text.
    #[test]
    fn config_round_trip_is_exact(command in command(), seed in any::<u64>(), tolerance in prop::option::of(finite())) {
        let config = ExperimentConfig { seed, tolerance, ..ExperimentConfig::new(command) };
        let text = io::to_json_string(&config).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &config);
        prop_assert_eq!(io::to_json_string(&back).unwrap(), text);
    }

    /// Same config and seed give byte-identical reports.
    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let config = ExperimentConfig {
            seed,
            ..ExperimentConfig::new(Command::VertexYbe(YbeArgs { trials: 8, ..Default::default() }))
        };
        let first = io::to_json_string(&run(&config).unwrap().report).unwrap();
        let second = io::to_json_string(&run(&config).unwrap().report).unwrap();
        prop_assert_eq!(first, second);
    }
}

#[test]
fn empty_params_take_the_command_line_defaults() {
    for words in LEAVES {
        let from_cli = parse(words);
        let name = from_cli.name();
        assert_eq!(name, words.join("-"));
        let from_json: Command = serde_json::from_value(json!({"name": name, "params": {}})).unwrap();
        assert_eq!(from_json, from_cli, "{name}");
    }
}

#[test]
fn verify_is_an_alias_of_vertex() {
    assert_eq!(parse(&["verify", "ybe", "--trials", "100"]), parse(&["vertex", "ybe"]));
}

#[test]
fn different_seeds_draw_different_trials() {
    let report = |seed| {
        let config = ExperimentConfig {
            seed,
            ..ExperimentConfig::new(Command::VertexYbe(YbeArgs { trials: 4, ..Default::default() }))
        };
        run(&config).unwrap().report
    };
    assert_ne!(report(1).result, report(2).result);
}

#[test]
fn exit_codes_follow_the_checks() {
    let ok = run(&ExperimentConfig::new(Command::Ed(EdArgs { sites: 4, ..Default::default() }))).unwrap();
    assert_eq!(ok.report.exit_code(), EXIT_OK);
    let strict = ExperimentConfig {
        tolerance: Some(0.0),
        ..ExperimentConfig::new(Command::ThermoDensity(DensityArgs { nodes: 8, ..Default::default() }))
    };
    let failed = run(&strict).unwrap();
    assert!(!failed.report.passed);
    assert_eq!(failed.report.exit_code(), EXIT_CHECK_FAILED);
}
