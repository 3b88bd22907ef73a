//! Constructive pipelines: produce explicit pentagonal arguments (x,y,z)
//! for each quadruple rather than just a yes/no verdict.

use pentaform::universality::{coprime_solution, Quadruple};

fn main() {
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
        let n = 2024;
        let sol = coprime_solution(q, n).unwrap();
        println!(
            "{n} = {a}·p5({}) + {b}·p5({}) + {c}·p5({})   [pentagonal values {:?}]",
            sol.x, sol.y, sol.z, sol.pent
        );
    }
}
