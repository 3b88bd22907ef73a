//! Residue representation sets, rational isometry search, and the transfer
//! relation N ≺(d,a) M that carries progression values from one form to
//! another.

use pentaform::transfer::{check_prec_search, residue_rep_set, search_isometries};
use pentaform::TernaryForm;

fn main() {
    let n = TernaryForm::new([[1, 0, 0], [0, 1, 0], [0, 0, 9]]).unwrap();
    let m = TernaryForm::new([[1, 0, 0], [0, 9, 3], [0, 3, 10]]).unwrap();

    let rset = residue_rep_set(&n, 3, 1).unwrap();
    println!("R(⟨1,1,9⟩, 3, 1) has {} classes:", rset.len());
    for class in rset.iter() {
        println!("  {class:?}");
    }

    let search = search_isometries(&m, &n, 3, 100_000).unwrap();
    println!(
        "\nisometries σ with σ(3N) ⊆ M: {} found (search {})",
        search.isometries.len(),
        if search.complete { "complete" } else { "capped" }
    );

    let report = check_prec_search(&n, &m, 3, 1, 100_000).unwrap();
    println!(
        "N ≺(3,1) M: {} ({} of {} classes good)",
        if report.holds { "holds" } else { "fails" },
        report.good_classes,
        report.total_classes
    );
}
