//! Fast gate: the reduced-bound verification suites must stay green. The
//! full-bound runs live in tests/acceptance.rs.

use tylens_core::selftest::{run_all, Level};

#[test]
fn quick_suites_pass() {
    for s in run_all(Level::Quick) {
        println!(
            "suite {}: {} - {} ({:.2}s)",
            s.id,
            if s.passed { "PASS" } else { "FAIL" },
            s.detail,
            s.seconds
        );
        for f in &s.failures {
            println!("    {f}");
        }
        assert!(s.passed, "suite {} failed", s.id);
    }
}
