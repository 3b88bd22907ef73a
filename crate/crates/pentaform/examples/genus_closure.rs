//! Compute genera by Kneser neighbor closure and show their class lists.

use pentaform::genus::{eligible_set, genus_classes};
use pentaform::TernaryForm;

fn main() {
    let cases = [
        ("⟨1⟩⊥[9,3;3,10]", [[1, 0, 0], [0, 9, 3], [0, 3, 10]], vec![5, 7]),
        ("⟨1,1,9⟩", [[1, 0, 0], [0, 1, 0], [0, 0, 9]], vec![5, 7]),
        ("⟨1,4,5⟩", [[1, 0, 0], [0, 4, 0], [0, 0, 5]], vec![3, 7]),
    ];
    for (name, gram, primes) in cases {
        let seed = TernaryForm::new(gram).unwrap();
        let genus = genus_classes(&seed, &primes).unwrap();
        println!("{name}: class number {}", genus.class_number());
        for rep in genus.representatives() {
            println!("  {:?}", rep.gram());
        }
    }

    // The union of the classes determines which eligible integers appear.
    let seed = TernaryForm::new([[1, 0, 0], [0, 9, 3], [0, 3, 10]]).unwrap();
    let eligible = eligible_set(&seed, 200, &[5, 7]).unwrap();
    let values: Vec<i64> = eligible.values().filter(|v| v % 3 == 1).take(12).collect();
    println!("first eligible values ≡ 1 (mod 3): {values:?}");
}
