//! Acceptance suite: one line per criterion, then a failure listing.

use msx_core::verify::{self, CriterionReport, Status, VerifyOptions};

fn report(r: &CriterionReport) {
    println!("{}", r.line());
    for c in r.checks.iter().filter(|c| c.status != Status::Pass) {
        println!("       {} {}: expected {}, got {}", c.status, c.name, c.expected, c.got);
    }
}

macro_rules! criterion {
    ($name:ident, $call:expr) => {
        #[test]
        fn $name() {
            let r: CriterionReport = $call;
            report(&r);
            assert_eq!(r.status(), Status::Pass, "{}", verify::render(std::slice::from_ref(&r)));
        }
    };
}

criterion!(c01_pascal, verify::criterion1());
criterion!(c02_max_power, verify::criterion2());
criterion!(c03_rank_one, verify::criterion3(&VerifyOptions::default()));
criterion!(c04_tridiagonal, verify::criterion4(&VerifyOptions::default()));
criterion!(c05_reciprocal_symbol, verify::criterion5(&VerifyOptions::default()));
criterion!(c06_norm_identity, verify::criterion6());
criterion!(c07_persymmetry, verify::criterion7());
criterion!(c08_atom_gap, verify::criterion8(&VerifyOptions::default()));
criterion!(c09_disk_limits, verify::criterion9(&VerifyOptions::default()));
criterion!(c10_hofmaier, verify::criterion10());
criterion!(c11_hilbert, verify::criterion11());

#[test]
fn low_order_reports_non_convergence() {
    let opts = VerifyOptions { n_max: Some(10) };
    for r in [verify::criterion3(&opts), verify::criterion4(&opts), verify::criterion5(&opts), verify::criterion8(&opts)] {
        report(&r);
        assert_eq!(r.status(), Status::NotConverged, "criterion {}", r.id);
    }
}
