//! Acceptance criteria: one line per item, nonzero exit on any failure.

use germforge_cli::suite::{limits, run_suite, SuiteConfig, ITEMS};

fn pinned() -> Vec<(&'static str, bool)> {
    vec![
        ("commutation depth 12", limits::COMMUTATION_MIN_VALID == 12),
        ("linearization degree 11", limits::LINEARIZATION_DEGREE == 11),
        ("period step consistency 1e-6", limits::PERIOD_CONSISTENCY_REL == 1e-6),
        ("homothety defect 1e-6", limits::HOMOTHETY_DEFECT == 1e-6),
        ("zero period 1e-8", limits::ZERO_PERIOD == 1e-8),
        ("resonant period 1e-6", limits::RESONANT_PERIOD_REL == 1e-6),
        ("leaf variation 1e-6", limits::LEAF_VARIATION == 1e-6),
        ("holonomy agreement 1e-5", limits::HOLONOMY_AGREEMENT == 1e-5),
        ("holonomy seed radius 0.05", limits::HOLONOMY_SEED_RADIUS == 0.05),
        ("Taylor coefficient 1e-4", limits::TAYLOR_COEFFICIENT == 1e-4),
        ("Hirzebruch samples 100", limits::HIRZEBRUCH_SAMPLES == 100),
        ("algebra germs 50", limits::ALGEBRA_GERMS == 50),
        ("decompose frames 20", limits::DECOMPOSE_FRAMES == 20),
        ("default degree 16", germforge::DEFAULT_DEGREE == 16),
    ]
}

fn main() {
    let mut ok = true;
    for (what, pin) in pinned() {
        if !pin {
            println!("[FAIL] tolerance {what} changed");
            ok = false;
        }
    }
    let start = std::time::Instant::now();
    let outcomes = run_suite(&SuiteConfig::default(), &[]).expect("all items known");
    assert_eq!(outcomes.len(), ITEMS.len());
    for (k, o) in outcomes.iter().enumerate() {
        println!("[{}] {:>2} {}", if o.passed { "PASS" } else { "FAIL" }, k + 1, &o.line()[7..]);
        for f in &o.failures {
            println!("         {f}");
        }
        ok &= o.passed;
    }
    let float = run_suite(&SuiteConfig { float: true, degree: 10, ..SuiteConfig::default() }, &[]).expect("all items known");
    let float_ok = float.iter().all(|o| o.passed);
    println!("[{}]    float re-run at degree 10 ({} items)", if float_ok { "PASS" } else { "FAIL" }, float.len());
    for o in float.iter().filter(|o| !o.passed) {
        println!("         {}", o.line());
    }
    ok &= float_ok;
    println!("acceptance: {} in {:.1?}", if ok { "all criteria pass" } else { "FAILED" }, start.elapsed());
    if !ok {
        std::process::exit(1);
    }
}
