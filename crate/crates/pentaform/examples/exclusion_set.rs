//! The exact exclusion set of the determinant-81 form: eligible integers it
//! fails to represent are precisely 2·4^m and 5·4^n.

use pentaform::universality::{expected_theorem31_exclusions, theorem31_exclusions};

fn main() {
    let bound = 10_000;
    let got = theorem31_exclusions(bound).unwrap();
    let want = expected_theorem31_exclusions(bound);
    println!("exclusions up to {bound}: {got:?}");
    assert_eq!(got, want, "exclusion set must match 2·4^m, 5·4^n exactly");
    println!("matches {{2·4^m}} ∪ {{5·4^n}}");
}
