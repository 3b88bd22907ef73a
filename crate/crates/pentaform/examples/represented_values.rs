//! Sieve the values represented by a single form over a window and report
//! coverage of an arithmetic progression.

use pentaform::{represented_set, TernaryForm};

fn main() {
    let bound = 5000;
    let form = TernaryForm::new([[1, 0, 0], [0, 9, 3], [0, 3, 10]]).unwrap();
    let sieve = represented_set(&form, bound);
    println!(
        "⟨1⟩⊥[9,3;3,10] represents {} of the integers in [0, {bound}]",
        sieve.count()
    );

    // Values 3n+1 not represented in the window.
    let missing: Vec<i64> = (0..=bound)
        .filter(|v| v % 3 == 1 && !sieve.contains(*v))
        .collect();
    println!(
        "missing values ≡ 1 (mod 3): {:?}{}",
        &missing[..missing.len().min(12)],
        if missing.len() > 12 { " ..." } else { "" }
    );
}
