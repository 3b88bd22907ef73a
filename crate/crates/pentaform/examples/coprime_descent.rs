//! Binary-form coprime descent: turn any solution of x² + k·y² = target
//! into one with both coordinates coprime to a chosen odd prime p, using
//! the composition identity of the form.

use pentaform::arith::lemma24_descend;

fn main() {
    // 225 = 0² + 9·5² with both coordinates divisible by 3.
    let (sol, path) = lemma24_descend(9, 5, (0, 5), 225).unwrap();
    println!("x² + 9y² = 225: descended to {sol:?} via {path:?}");
    assert_eq!(sol.0 * sol.0 + 9 * sol.1 * sol.1, 225);
    assert!(sol.0 % 5 != 0 && sol.1 % 5 != 0);

    // 54 = 3² + 5·3² with both coordinates divisible by 3; the form
    // represents 9 = 2² + 5·1² with a 3-coprime pair, so descent applies.
    let k = 5;
    let target = 54;
    let (sol, path) = lemma24_descend(k, 3, (3, 3), target).unwrap();
    println!("x² + 5y² = {target}: descended to {sol:?} via {path:?}");
    assert_eq!(sol.0 * sol.0 + k * sol.1 * sol.1, target);
    assert!(sol.0 % 3 != 0 && sol.1 % 3 != 0);
}
