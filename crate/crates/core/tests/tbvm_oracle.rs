mod common;

use common::{oracle_run, OracleRun};
use kolmo::space::programs_up_to;
use kolmo::tbvm::{parse, resolve, run, run_code, DivergenceReason, ResolutionStatus};
use kolmo::{BitSequence, RunLimits, RunStatus};
use proptest::prelude::*;

fn bits(s: &str) -> BitSequence {
    BitSequence::parse(s).unwrap()
}

#[test]
fn hand_executed_examples_match_oracle() {
    // (code, n, output, steps) frozen from the reference interpreter
    let cases = [
        ("10110", 7, "0110", 4),
        ("0000001", 0, "01", 2),
        ("0110100000011101", 3, "000", 14),
        ("0100000101", 5, "", 1),
    ];
    for (code, n, output, steps) in cases {
        assert_eq!(
            oracle_run(code, n, 100_000, None),
            OracleRun::Halted {
                output: output.to_string(),
                steps
            },
            "oracle {code}"
        );
        let outcome = run(&parse(&bits(code)).unwrap(), n, &RunLimits::default());
        assert_eq!(outcome.status, RunStatus::Halted, "{code}");
        assert_eq!(outcome.output.to_string(), output, "{code}");
        assert_eq!(outcome.steps_used, steps, "{code}");
    }
}

#[test]
fn resolution_examples() {
    let limits = RunLimits::default();
    let literal = parse(&bits("10110")).unwrap();
    assert!(matches!(resolve(&literal, 0, &limits), ResolutionStatus::Halts(_)));
    let spin = parse(&bits("0010100101")).unwrap();
    assert!(matches!(
        resolve(&spin, 0, &limits),
        ResolutionStatus::Diverges {
            reason: DivergenceReason::StateRepetition,
            ..
        }
    ));
    let skip = parse(&bits("0100000101")).unwrap();
    match resolve(&skip, 5, &limits) {
        ResolutionStatus::Halts(outcome) => assert!(outcome.output.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn diverges_is_sound() {
    let limits = RunLimits::with_step_budget(10_000);
    let mut checked = 0;
    for p in programs_up_to(13) {
        for n in [0u64, 3, 7] {
            if let ResolutionStatus::Diverges {
                reason: DivergenceReason::StateRepetition,
                ..
            } = resolve(&p, n, &limits)
            {
                let replay = oracle_run(&p.code().to_string(), n, 100 * limits.step_budget, None);
                assert_eq!(replay, OracleRun::NotHalted, "{} on {n}", p.code());
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "only {checked} diverging programs sampled");
}

fn code_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        "1[01]{0,20}",
        (0usize..7).prop_flat_map(|k| proptest::collection::vec(0u8..8, k).prop_map(|ops| {
            let mut s = String::from("0");
            for op in ops {
                s.push_str(&format!("{op:03b}"));
            }
            s
        })),
        "[01]{0,16}",
    ]
}

proptest! {
    #[test]
    fn run_agrees_with_oracle(code in code_strategy(), n in 0u64..40, budget in 1u64..600) {
        let limits = RunLimits::with_step_budget(budget);
        let outcome = run_code(&bits(&code), n, &limits);
        match oracle_run(&code, n, budget, None) {
            OracleRun::Halted { output, steps } => {
                prop_assert_eq!(outcome.status, RunStatus::Halted);
                prop_assert_eq!(outcome.output.to_string(), output);
                prop_assert_eq!(outcome.steps_used, steps);
            }
            OracleRun::Invalid => prop_assert_eq!(outcome.status, RunStatus::ParseError),
            OracleRun::NotHalted => prop_assert!(matches!(
                outcome.status,
                RunStatus::StepLimit | RunStatus::OutputLimit
            )),
        }
    }

    #[test]
    fn deterministic_and_monotone(code in code_strategy(), n in 0u64..40, budget in 1u64..400, extra in 0u64..400) {
        let Ok(program) = parse(&bits(&code)) else { return Ok(()) };
        let small = RunLimits::with_step_budget(budget);
        let first = run(&program, n, &small);
        prop_assert_eq!(&first, &run(&program, n, &small));
        let big = run(&program, n, &RunLimits::with_step_budget(budget + extra));
        // output is append-only across budgets
        prop_assert!(first.output.is_prefix_of(&big.output));
        if first.status == RunStatus::Halted {
            prop_assert_eq!(&first, &big);
            let exact = run(&program, n, &RunLimits::with_step_budget(first.steps_used.max(1)));
            prop_assert_eq!(&exact, &first);
        }
    }

    #[test]
    fn literal_upper_bound(x in "[01]{0,64}", n in 0u64..100) {
        let x = bits(&x);
        let mut code = bits("1");
        code.extend_from(&x);
        let outcome = run(&parse(&code).unwrap(), n, &RunLimits::default());
        prop_assert!(outcome.halted_with(&x));
        prop_assert_eq!(outcome.steps_used, x.len() as u64);
    }

    #[test]
    fn unparse_round_trip(code in code_strategy()) {
        let code = bits(&code);
        if let Ok(p) = parse(&code) {
            prop_assert_eq!(p.code(), &code);
            prop_assert_eq!(parse(p.code()).unwrap(), p);
        }
    }
}
