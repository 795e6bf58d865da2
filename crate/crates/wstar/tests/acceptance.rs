//! Acceptance suite: every verification criterion at its stated tolerance,
//! one pass/fail line per criterion. The same criteria run through the CLI
//! via `wstar suite --profile acceptance`.

use wstar::disjointness::DEFAULT_MAX_ITER;
use wstar::report::{Report, Tolerances};
use wstar::suites;

const SEED: u64 = 0;

fn gate(index: usize, rep: &Report) {
    let status = if rep.all_pass() { "PASS" } else { "FAIL" };
    println!("criterion {index}: [{status}] {} ({:.0} ms)", rep.command, rep.wall_ms);
    if !rep.all_pass() {
        println!("{}", rep.render_table());
    }
    assert!(rep.all_pass(), "criterion {index} failed");
}

#[test]
fn criterion_01_gibbs_fixture() {
    gate(1, &suites::criterion_gibbs(&Tolerances::default()));
}

#[test]
fn criterion_02_joining_construction_suite() {
    gate(2, &suites::criterion_joining_suite(SEED, 50, &Tolerances::default()));
}

#[test]
fn criterion_03_trivial_f_gives_product() {
    gate(3, &suites::criterion_trivial_product(SEED, 20, &Tolerances::default()));
}

#[test]
fn criterion_04_nested_witness() {
    gate(4, &suites::criterion_nested_witness(&Tolerances::default()));
}

#[test]
fn criterion_05_orthogonality_characterization() {
    gate(5, &suites::criterion_orthogonality(SEED, 50, &Tolerances::default()));
}

#[test]
fn criterion_06_fixed_point_suite() {
    gate(6, &suites::criterion_fixed_points(SEED, 50, &Tolerances::default()));
}

#[test]
fn criterion_07_ergodic_tracial_suite() {
    gate(7, &suites::criterion_ergodic_tracial(SEED, 100, &Tolerances::default()));
}

#[test]
fn criterion_08_disjointness_probe() {
    gate(
        8,
        &suites::criterion_disjointness_probe(SEED, DEFAULT_MAX_ITER, &Tolerances::default()),
    );
}

#[test]
fn criterion_09_classical_oracle() {
    gate(9, &suites::criterion_classical(SEED, 20, &Tolerances::default()));
}

#[test]
fn criterion_10_modular_conjugation() {
    gate(10, &suites::criterion_modular_conjugation(SEED, &Tolerances::default()));
}
