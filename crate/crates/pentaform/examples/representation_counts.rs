//! Exact representation counts for the form [2,1;1,5]⊥⟨9⟩, including the
//! closed-form counts r(2p²) = 2p+2−2(−2/p) and r(5p²) = 4p+4−4(−2/p).

use pentaform::arith::kronecker_symbol;
use pentaform::{enumerate_representations, representation_count, TernaryForm};

fn main() {
    let n = TernaryForm::new([[2, 1, 0], [1, 5, 0], [0, 0, 9]]).unwrap();

    let reps = enumerate_representations(&n, 125);
    println!("r(125) = {}", reps.len());
    for v in reps.iter().take(6) {
        println!("  125 = Q{:?}", v.0);
    }
    println!("  ...");

    // r(2p²) follows the character (−2/p); r(5p²) follows (−5/p).
    println!("\n   p    r(2p²)  2p+2−2(−2/p)    r(5p²)  4p+4−4(−5/p)");
    for p in [5i64, 7, 11, 13] {
        let chi2 = kronecker_symbol(-2, p).unwrap();
        let chi5 = kronecker_symbol(-5, p).unwrap();
        let r2 = representation_count(&n, 2 * p * p);
        let r5 = representation_count(&n, 5 * p * p);
        println!(
            "  {p:>2}    {r2:>5}   {:>8}       {r5:>5}   {:>8}",
            2 * p + 2 - 2 * chi2,
            4 * p + 4 - 4 * chi5
        );
        assert_eq!(r2, (2 * p + 2 - 2 * chi2) as usize);
        assert_eq!(r5, (4 * p + 4 - 4 * chi5) as usize);
    }
}
