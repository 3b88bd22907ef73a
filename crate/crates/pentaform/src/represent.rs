//! Complete enumeration of representations R(a, L) and bounded sieves of
//! represented values.
//!
//! Enumeration is a Fincke–Pohst style nested-interval search with all
//! bounds computed in exact integer arithmetic; the innermost coordinate is
//! solved by an exact quadratic with a perfect-square discriminant test.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::forms::{TernaryForm, Vector3};

/// Provenance of a represented-value sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SieveSource {
    SingleForm,
    GenusUnion,
}

/// Membership table of represented values over [0, bound].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationSieve {
    bound: i64,
    bits: Vec<u64>,
    source: SieveSource,
}

impl RepresentationSieve {
    pub fn empty(bound: i64, source: SieveSource) -> Self {
        let words = (bound as usize + 64) / 64;
        RepresentationSieve {
            bound,
            bits: vec![0; words],
            source,
        }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn source(&self) -> SieveSource {
        self.source
    }

    pub fn insert(&mut self, a: i64) {
        debug_assert!(0 <= a && a <= self.bound);
        self.bits[(a as usize) / 64] |= 1u64 << (a as usize % 64);
    }

    pub fn contains(&self, a: i64) -> bool {
        if a < 0 || a > self.bound {
            return false;
        }
        self.bits[(a as usize) / 64] >> (a as usize % 64) & 1 == 1
    }

    /// Union in place; bounds must agree. The result is tagged as a genus
    /// union.
    pub fn union_with(&mut self, other: &RepresentationSieve) {
        assert_eq!(self.bound, other.bound, "sieve bounds must agree");
        for (w, o) in self.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
        self.source = SieveSource::GenusUnion;
    }

    /// All members in increasing order.
    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        (0..=self.bound).filter(move |&a| self.contains(a))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Cofactor (i,i) of the Gram matrix: determinant of the complementary
/// 2×2 block.
fn cofactor(g: &[[i64; 3]; 3], i: usize) -> i128 {
    let (a, b) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    (g[a][a] as i128) * (g[b][b] as i128) - (g[a][b] as i128).pow(2)
}

/// Iterate 0, 1, −1, 2, −2, … intersected with [lo, hi].
fn graded_range(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    let span = lo.abs().max(hi.abs());
    (0..=span)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .filter(move |&x| lo <= x && x <= hi)
}

/// Solutions x of A·x² + B·x + C = 0 over the integers, ascending.
fn solve_quadratic(a: i128, b: i128, c: i128) -> Vec<i64> {
    debug_assert!(a > 0);
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return Vec::new();
    }
    let s = isqrt(disc);
    if s * s != disc {
        return Vec::new();
    }
    let mut out = Vec::new();
    for num in [-b - s, -b + s] {
        if num % (2 * a) == 0 {
            out.push((num / (2 * a)) as i64);
        }
    }
    out.dedup();
    out.sort_unstable();
    out
}

/// For fixed x1, the integer range of x2 for which some real x3 keeps the
/// value at or below `limit`. Returns None when the range is empty.
fn x2_range(g: &[[i64; 3]; 3], x1: i64, limit: i64) -> Option<(i64, i64)> {
    let g = |i: usize, j: usize| g[i][j] as i128;
    let x1 = x1 as i128;
    // 4·g22·(Q − limit) ≤ (∂Q/∂x3)² as a quadratic in x2
    let alpha = 4 * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2));
    let beta = 8 * x1 * (g(2, 2) * g(0, 1) - g(1, 2) * g(0, 2));
    let gamma = 4 * g(2, 2) * (g(0, 0) * x1 * x1 - limit as i128) - 4 * (g(0, 2) * x1).pow(2);
    debug_assert!(alpha > 0);
    let disc = beta * beta - 4 * alpha * gamma;
    if disc < 0 {
        return None;
    }
    let s = isqrt(disc);
    let lo = ceil_div(-beta - s, 2 * alpha);
    let hi = floor_div(-beta + s, 2 * alpha);
    if lo > hi {
        None
    } else {
        Some((lo as i64, hi as i64))
    }
}

/// For fixed (x1, x2), the integer range of x3 with value at most `limit`.
fn x3_range(g: &[[i64; 3]; 3], x1: i64, x2: i64, limit: i64) -> Option<(i64, i64)> {
    let gq = |i: usize, j: usize| g[i][j] as i128;
    let (x1, x2) = (x1 as i128, x2 as i128);
    let a = gq(2, 2);
    let b = 2 * (gq(0, 2) * x1 + gq(1, 2) * x2);
    let c = gq(0, 0) * x1 * x1 + 2 * gq(0, 1) * x1 * x2 + gq(1, 1) * x2 * x2 - limit as i128;
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return None;
    }
    let s = isqrt(disc);
    let lo = ceil_div(-b - s, 2 * a);
    let hi = floor_div(-b + s, 2 * a);
    if lo > hi {
        None
    } else {
        Some((lo as i64, hi as i64))
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

fn x1_bound(g: &[[i64; 3]; 3], limit: i64) -> i64 {
    let det = crate::forms::det3(g);
    isqrt((limit as i128) * cofactor(g, 0) / det) as i64 + 1
}

/// Exactly all vectors v with Q(v) = a, in the canonical graded order
/// (absolute value first, positive before negative, outer coordinate most
/// significant).
pub fn enumerate_representations(form: &TernaryForm, a: i64) -> Vec<Vector3> {
    assert!(a >= 0, "representation target must be non-negative");
    if a == 0 {
        return vec![Vector3::zero()];
    }
    let g = form.gram();
    let mut out = Vec::new();
    let x1_max = x1_bound(g, a);
    for x1 in graded_range(-x1_max, x1_max) {
        let Some((lo2, hi2)) = x2_range(g, x1, a) else {
            continue;
        };
        for x2 in graded_range(lo2, hi2) {
            let gq = |i: usize, j: usize| g[i][j] as i128;
            let b = 2 * (gq(0, 2) * (x1 as i128) + gq(1, 2) * (x2 as i128));
            let c = gq(0, 0) * (x1 as i128).pow(2)
                + 2 * gq(0, 1) * (x1 as i128) * (x2 as i128)
                + gq(1, 1) * (x2 as i128).pow(2)
                - a as i128;
            let mut sols = solve_quadratic(gq(2, 2), b, c);
            sols.sort_by_key(|&x3| (x3.abs(), x3 < 0));
            for x3 in sols {
                let v = Vector3([x1, x2, x3]);
                debug_assert_eq!(form.eval(v), a);
                out.push(v);
            }
        }
    }
    out
}

/// r(a, L) = |R(a, L)|.
pub fn representation_count(form: &TernaryForm, a: i64) -> usize {
    enumerate_representations(form, a).len()
}

/// The first vector v with Q(v) = a satisfying the predicate, in the
/// canonical graded order, or None when no representation qualifies.
pub fn find_representation_with<P>(form: &TernaryForm, a: i64, constraint: P) -> Option<Vector3>
where
    P: Fn(Vector3) -> bool,
{
    assert!(a >= 0, "representation target must be non-negative");
    if a == 0 {
        let z = Vector3::zero();
        return constraint(z).then_some(z);
    }
    let g = form.gram();
    let x1_max = x1_bound(g, a);
    for x1 in graded_range(-x1_max, x1_max) {
        let Some((lo2, hi2)) = x2_range(g, x1, a) else {
            continue;
        };
        for x2 in graded_range(lo2, hi2) {
            let gq = |i: usize, j: usize| g[i][j] as i128;
            let b = 2 * (gq(0, 2) * (x1 as i128) + gq(1, 2) * (x2 as i128));
            let c = gq(0, 0) * (x1 as i128).pow(2)
                + 2 * gq(0, 1) * (x1 as i128) * (x2 as i128)
                + gq(1, 1) * (x2 as i128).pow(2)
                - a as i128;
            let mut sols = solve_quadratic(gq(2, 2), b, c);
            sols.sort_by_key(|&x3| (x3.abs(), x3 < 0));
            for x3 in sols {
                let v = Vector3([x1, x2, x3]);
                debug_assert_eq!(form.eval(v), a);
                if constraint(v) {
                    return Some(v);
                }
            }
        }
    }
    None
}

/// Membership sieve of Q(L) ∩ [0, bound], built in a single pass over all
/// vectors of value at most the bound. The outer coordinate range is
/// partitioned across workers; the merged result is order-independent.
pub fn represented_set(form: &TernaryForm, bound: i64) -> RepresentationSieve {
    assert!(bound >= 0, "sieve bound must be non-negative");
    let g = *form.gram();
    let x1_max = x1_bound(&g, bound);
    let mut sieve = (0..=x1_max)
        .into_par_iter()
        .fold(
            || RepresentationSieve::empty(bound, SieveSource::SingleForm),
            |mut acc, x1| {
                scan_outer_coordinate(&g, x1, bound, &mut acc);
                acc
            },
        )
        .reduce(
            || RepresentationSieve::empty(bound, SieveSource::SingleForm),
            |mut a, b| {
                for (w, o) in a.bits.iter_mut().zip(&b.bits) {
                    *w |= o;
                }
                a
            },
        );
    sieve.source = SieveSource::SingleForm;
    sieve.insert(0);
    sieve
}

/// Scan all vectors with first coordinate x1 ≥ 0 (one of each ± pair) and
/// record their values.
fn scan_outer_coordinate(g: &[[i64; 3]; 3], x1: i64, bound: i64, sieve: &mut RepresentationSieve) {
    let Some((lo2, hi2)) = x2_range(g, x1, bound) else {
        return;
    };
    let lo2 = if x1 == 0 { lo2.max(0) } else { lo2 };
    let gq = |i: usize, j: usize| g[i][j] as i128;
    for x2 in lo2..=hi2 {
        let Some((lo3, hi3)) = x3_range(g, x1, x2, bound) else {
            continue;
        };
        let lo3 = if x1 == 0 && x2 == 0 { lo3.max(0) } else { lo3 };
        // Incremental evaluation along x3.
        let a3 = gq(2, 2);
        let b3 = 2 * (gq(0, 2) * (x1 as i128) + gq(1, 2) * (x2 as i128));
        let c3 = gq(0, 0) * (x1 as i128).pow(2)
            + 2 * gq(0, 1) * (x1 as i128) * (x2 as i128)
            + gq(1, 1) * (x2 as i128).pow(2);
        let mut q = a3 * (lo3 as i128).pow(2) + b3 * (lo3 as i128) + c3;
        let mut dq = a3 * (2 * (lo3 as i128) + 1) + b3;
        for _x3 in lo3..=hi3 {
            if 0 <= q && q <= bound as i128 {
                sieve.insert(q as i64);
            }
            q += dq;
            dq += 2 * a3;
        }
    }
}
