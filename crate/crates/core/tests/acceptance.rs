//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Configurations are pinned here, in code: paths/cycles up to n = 10 with
//! zero tolerance on `⌈2n/3⌉`; the cooperation sweep over every connected
//! graph on at most 6 vertices with `|P| <= 4`, `|U| ∈ {2,3,4}`, `P(u) = 0`;
//! tori from 5x5 to 7x7 with units up to 12 pebbles; the exact grid-bound
//! values; the P_3 ILP shape; and the bounds-vs-solver ordering.

use pebbling::verify::{self, SuiteOutcome, SweepConfig, SweepParts};

fn pinned_config() -> SweepConfig {
    SweepConfig {
        max_n: 6,
        max_pebbles: 4,
        unit_sizes: vec![2, 3, 4],
        torus_min: 5,
        torus_max: 7,
        torus_unit_max: 12,
        solve_max_n: 10,
        ..Default::default()
    }
}

fn report(criterion: &str, outcome: &SuiteOutcome) {
    let status = if outcome.passed() { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion}: {status} ({} checks, {} violations)",
        outcome.checked, outcome.violations
    );
    assert!(
        outcome.passed(),
        "criterion {criterion} failed: {:?}",
        outcome.messages
    );
    assert!(outcome.checked > 0, "criterion {criterion} checked nothing");
}

/// Criterion 1: solve returns ⌈2n/3⌉ for P_n (1..=10) and C_n (3..=10),
/// zero tolerance.
#[test]
fn criterion_1_path_cycle_exactness() {
    let outcome = verify::suite_path_cycle(&pinned_config());
    report("1 (path/cycle exactness)", &outcome);
}

/// Criteria 2-5 share one sweep over every connected graph on <= 6 vertices
/// and every disjoint (P, U) with |P| <= 4, |U| in {2,3,4}, P(u) = 0:
/// the coop - DC <= (Δ-2)·CE inequality, the excess inequality for every
/// solvable distribution, both decomposition identities, and the full
/// transformation audit on the Δ >= 3 instances.
#[test]
fn criteria_2_to_5_cooperation_sweep() {
    let outcomes = verify::run_cooperation_sweep(&pinned_config(), SweepParts::all());
    report("2 (cooperation inequality sweep)", &outcomes.lemma41);
    report("3 (excess inequality sweep)", &outcomes.theorem22);
    report("4 (decomposition identities)", &outcomes.claim35);
    report("5 (transformation audit)", &outcomes.transform);
}

/// Criterion 6: grid_bound(13,13) = 26 and grid_bound(5,5) = 4, exact.
#[test]
fn criterion_6_grid_bound_values() {
    let outcome = verify::suite_grid_bound();
    report("6 (grid bound values)", &outcome);
}

/// Criterion 7: torus unit caps/floors for all |U| <= 12 at all vertices of
/// T_{m,n}, 5 <= m,n <= 7, plus ef(v) < 9 on the same tori.
#[test]
fn criterion_7_torus_claims() {
    let outcome = verify::suite_torus_claims(&pinned_config());
    report("7 (torus claims)", &outcome);
}

/// Criterion 8: the P_3 model has 15 variables, the documented constraint
/// schema, and parses in the strict LP reader.
#[test]
fn criterion_8_ilp_emission() {
    let outcome = verify::suite_ilp();
    report("8 (ILP emission)", &outcome);
}

/// Criterion 9: wherever solve completes, every bound stays at or below the
/// exact optimum.
#[test]
fn criterion_9_consistency_ordering() {
    let outcome = verify::suite_ordering(&pinned_config());
    report("9 (consistency ordering)", &outcome);
}
