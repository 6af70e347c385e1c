use soergel_core::coxeter::Parabolic;
use soergel_core::report::all_passed;
use soergel_core::suites::{ranks_suite, run_suite, tj_suite, SuiteConfig, SuiteError, SUITES};

fn config(n: usize, hi: usize) -> SuiteConfig {
    SuiteConfig { n, parabolic: Parabolic::interval(1, hi), seed: 3, degree_window: None }
}

#[test]
fn quick_suites_pass_for_two_colours() {
    let cfg = config(3, 2);
    for name in SUITES.iter().filter(|s| !matches!(**s, "ranks" | "tj")) {
        let reports = run_suite(name, &cfg).unwrap();
        assert!(!reports.is_empty(), "{name} produced no checks");
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_json()).collect();
        assert!(failed.is_empty(), "{name}: {failed:?}");
    }
}

#[test]
fn small_rank_and_induction_suites_pass() {
    let one = Parabolic::new([1]);
    assert!(all_passed(&ranks_suite(2, 4, &one, None).unwrap()));
    assert!(all_passed(&tj_suite(&one, 2).unwrap()));
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(matches!(run_suite("nope", &config(2, 1)), Err(SuiteError::UnknownSuite(_))));
}
