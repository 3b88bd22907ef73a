//! The pentagonal oracle: which integers are sums a·p₅(x)+b·p₅(y)+c·p₅(z)?
//! Shows why (1,1,7) fails and spot-checks the seven universal candidates.

use pentaform::universality::{oracle_gaps, verify_quadruple, Quadruple, VerifyMode};

fn main() {
    let bad = Quadruple::pentagonal(1, 1, 7).unwrap();
    let gaps = oracle_gaps(bad, 500);
    println!("(1,1,7) misses: {gaps:?}");

    for (a, b, c) in [
        (1, 1, 6),
        (1, 1, 8),
        (1, 1, 9),
        (1, 1, 10),
        (1, 2, 8),
        (1, 3, 7),
        (1, 3, 8),
    ] {
        let q = Quadruple::pentagonal(a, b, c).unwrap();
        let report = verify_quadruple(q, 2000, VerifyMode::Oracle).unwrap();
        println!(
            "({a},{b},{c}) to 2000: {}",
            if report.universal_up_to_bound {
                "no gaps"
            } else {
                "GAPS FOUND"
            }
        );
        assert!(report.universal_up_to_bound);
    }
}
