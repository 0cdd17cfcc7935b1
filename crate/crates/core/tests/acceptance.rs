//! The nine acceptance criteria, one test each. Every test prints a single
//! PASS/FAIL line; run with `--nocapture` to see them.

use craig_gamma::suites;

fn criterion(id: usize) {
    let report = suites::run(id).expect("known criterion");
    println!("{}", report.line());
    for f in report.failures.iter().take(10) {
        println!("  {f}");
    }
    assert!(report.passed(), "{}", report.line());
}

#[test]
fn criterion_1_frame_formula_vs_p_morphism() {
    criterion(1);
}

#[test]
fn criterion_2_truth_lemma() {
    criterion(2);
}

#[test]
fn criterion_3_kc_models_are_confluent() {
    criterion(3);
}

#[test]
fn criterion_4_cluster_refinement() {
    criterion(4);
}

#[test]
fn criterion_5_pattern_instances() {
    criterion(5);
}

#[test]
fn criterion_6_interpolants_and_countermodels() {
    criterion(6);
}

#[test]
fn criterion_7_engine_cross_check() {
    criterion(7);
}

#[test]
fn criterion_8_exact_counts() {
    criterion(8);
}

#[test]
fn criterion_9_axioms() {
    criterion(9);
}
