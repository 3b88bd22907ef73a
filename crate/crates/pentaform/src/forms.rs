//! Ternary quadratic forms as integer Gram matrices, with exact evaluation,
//! Minkowski-style reduction and isometry testing.
//!
//! The Gram convention is bilinear: entry (i,j) holds B(x_i, x_j), so the
//! diagonal carries Q(x_i) and Q(v) = vᵀGv.

use serde::{Deserialize, Serialize};

use crate::{represent, Error, Result};

/// An integer vector of rank 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vector3(pub [i64; 3]);

impl Vector3 {
    pub fn zero() -> Self {
        Vector3([0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn neg(&self) -> Self {
        Vector3([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Content of the vector (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| gcd(g, x.abs()))
    }

    /// Divide out the content and normalize the sign so the first nonzero
    /// coordinate is positive.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g == 0 {
            return *self;
        }
        let mut v = Vector3([self.0[0] / g, self.0[1] / g, self.0[2] / g]);
        if let Some(&lead) = v.0.iter().find(|&&x| x != 0) {
            if lead < 0 {
                v = v.neg();
            }
        }
        v
    }

    /// Canonical enumeration key: coordinates ordered by absolute value,
    /// positive before negative, outer coordinate first.
    pub fn graded_key(&self) -> [i64; 6] {
        let [x, y, z] = self.0;
        [
            x.abs(),
            (x < 0) as i64,
            y.abs(),
            (y < 0) as i64,
            z.abs(),
            (z < 0) as i64,
        ]
    }
}

impl std::fmt::Display for Vector3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Value of the generalized polygonal number p_m(x) = ((m−2)x² − (m−4)x)/2.
///
/// The argument may be negative; orders below 3 are rejected.
pub fn polygonal(m: i64, x: i64) -> Result<i64> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygonal order must be at least 3, got {m}"
        )));
    }
    let m = m as i128;
    let x = x as i128;
    let num = (m - 2) * x * x - (m - 4) * x;
    debug_assert!(num % 2 == 0);
    Ok((num / 2) as i64)
}

/// A polygonal number: order m and integer argument x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonalIndex {
    pub order: i64,
    pub argument: i64,
}

impl PolygonalIndex {
    pub fn new(order: i64, argument: i64) -> Result<Self> {
        if order < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygonal order must be at least 3, got {order}"
            )));
        }
        Ok(PolygonalIndex { order, argument })
    }

    pub fn value(&self) -> i64 {
        polygonal(self.order, self.argument).expect("order validated on construction")
    }
}

/// True iff the symmetric matrix has all leading principal minors positive.
pub fn is_positive_definite(gram: &[[i64; 3]; 3]) -> Result<bool> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if gram[i][j] != gram[j][i] {
                return Err(Error::InvalidForm(format!(
                    "gram matrix not symmetric at ({i},{j})"
                )));
            }
        }
    }
    let m1 = gram[0][0] as i128;
    let m2 = (gram[0][0] as i128) * (gram[1][1] as i128) - (gram[0][1] as i128).pow(2);
    let m3 = det3(gram);
    Ok(m1 > 0 && m2 > 0 && m3 > 0)
}

pub(crate) fn det3(g: &[[i64; 3]; 3]) -> i128 {
    let g = |i: usize, j: usize| g[i][j] as i128;
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
        - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

/// A primitive positive definite ternary quadratic form, held as its Gram
/// matrix of bilinear values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryForm {
    gram: [[i64; 3]; 3],
}

impl TernaryForm {
    /// Build a form from a Gram matrix, validating symmetry and positive
    /// definiteness. Scaled (imprimitive) forms are allowed so that
    /// expressions like 2M stay representable; the lattice-theoretic
    /// standing assumption is exposed as [`TernaryForm::is_primitive`].
    pub fn new(gram: [[i64; 3]; 3]) -> Result<Self> {
        if !is_positive_definite(&gram)? {
            return Err(Error::InvalidForm(
                "gram matrix is not positive definite".into(),
            ));
        }
        Ok(TernaryForm { gram })
    }

    /// Content of the scale ideal; 1 for a primitive lattice.
    pub fn content(&self) -> i64 {
        self.gram.iter().flatten().fold(0i64, |g, &x| gcd(g, x.abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The diagonal form ⟨a, b, c⟩.
    pub fn diagonal(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([[a, 0, 0], [0, b, 0], [0, 0, c]])
    }

    /// The block form ⟨a⟩ ⊥ [b, c; c, d].
    pub fn block(a: i64, binary: [[i64; 2]; 2]) -> Result<Self> {
        Self::new([
            [a, 0, 0],
            [0, binary[0][0], binary[0][1]],
            [0, binary[1][0], binary[1][1]],
        ])
    }

    pub fn gram(&self) -> &[[i64; 3]; 3] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    pub fn det(&self) -> i64 {
        det3(&self.gram) as i64
    }

    /// Q(v) = vᵀGv.
    pub fn eval(&self, v: Vector3) -> i64 {
        let [x, y, z] = v.0;
        let (x, y, z) = (x as i128, y as i128, z as i128);
        let g = |i: usize, j: usize| self.gram[i][j] as i128;
        let q = g(0, 0) * x * x
            + g(1, 1) * y * y
            + g(2, 2) * z * z
            + 2 * (g(0, 1) * x * y + g(0, 2) * x * z + g(1, 2) * y * z);
        q as i64
    }

    /// B(u, v) = uᵀGv.
    pub fn bilinear(&self, u: Vector3, v: Vector3) -> i64 {
        let g = |i: usize, j: usize| self.gram[i][j] as i128;
        let mut acc = 0i128;
        for i in 0..3 {
            for j in 0..3 {
                acc += (u.0[i] as i128) * g(i, j) * (v.0[j] as i128);
            }
        }
        acc as i64
    }

    /// Smallest positive value represented by the form.
    pub fn minimum(&self) -> i64 {
        let reduced = self.reduce();
        let cap = reduced.entry(0, 0).min(reduced.entry(1, 1)).min(reduced.entry(2, 2));
        for a in 1..=cap {
            if represent::representation_count(&reduced, a) > 0 {
                return a;
            }
        }
        cap
    }

    /// A reduced form isometric to this one, with diagonal sorted ascending
    /// and a deterministic sign/permutation normalization.
    pub fn reduce(&self) -> TernaryForm {
        self.reduce_with_transform().0
    }

    /// Reduction together with the unimodular change of basis U such that
    /// UᵀGU is the reduced Gram matrix.
    pub fn reduce_with_transform(&self) -> (TernaryForm, [[i64; 3]; 3]) {
        let mut g = self.gram;
        let mut u = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
        greedy_reduce(&mut g, &mut u);
        canonicalize(&mut g, &mut u);
        debug_assert_eq!(det3(&g), det3(&self.gram));
        (TernaryForm { gram: g }, u)
    }

    /// Whether an integral change of basis of determinant ±1 carries this
    /// form onto the other. Decided by reduction plus a complete backtracking
    /// search over vectors of matching norms.
    pub fn is_isometric(&self, other: &TernaryForm) -> bool {
        if self.det() != other.det() {
            return false;
        }
        let a = self.reduce();
        let b = other.reduce();
        if a.gram == b.gram {
            return true;
        }
        isometry_search(&a, &b)
    }
}

impl std::fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{} {} {}; {} {} {}; {} {} {}]",
            self.gram[0][0],
            self.gram[0][1],
            self.gram[0][2],
            self.gram[1][0],
            self.gram[1][1],
            self.gram[1][2],
            self.gram[2][0],
            self.gram[2][1],
            self.gram[2][2]
        )
    }
}

// -- column operations on (gram, transform) pairs ---------------------------

fn swap_basis(g: &mut [[i64; 3]; 3], u: &mut [[i64; 3]; 3], i: usize, j: usize) {
    for row in g.iter_mut() {
        row.swap(i, j);
    }
    g.swap(i, j);
    for row in u.iter_mut() {
        row.swap(i, j);
    }
}

/// b_i += k · b_j
fn addmul_basis(g: &mut [[i64; 3]; 3], u: &mut [[i64; 3]; 3], i: usize, j: usize, k: i64) {
    for t in 0..3 {
        g[i][t] += k * g[j][t];
    }
    for t in 0..3 {
        g[t][i] += k * g[t][j];
    }
    for row in u.iter_mut() {
        row[i] += k * row[j];
    }
}

fn sort_by_norm(g: &mut [[i64; 3]; 3], u: &mut [[i64; 3]; 3]) -> bool {
    let mut changed = false;
    loop {
        let mut swapped = false;
        for i in 0..2 {
            if g[i + 1][i + 1] < g[i][i] {
                swap_basis(g, u, i, i + 1);
                swapped = true;
                changed = true;
            }
        }
        if !swapped {
            break;
        }
    }
    changed
}

/// Greedy Minkowski-style reduction for rank 3: repeatedly shorten each
/// basis vector against the span of the others until no strict improvement
/// remains.
fn greedy_reduce(g: &mut [[i64; 3]; 3], u: &mut [[i64; 3]; 3]) {
    loop {
        let mut changed = sort_by_norm(g, u);

        // Shorten b1 against b0.
        let k = rounded_quotient(-g[0][1], g[0][0]);
        if k != 0 {
            let new_norm = g[1][1] + k * (2 * g[0][1] + k * g[0][0]);
            if new_norm < g[1][1] {
                addmul_basis(g, u, 1, 0, k);
                changed = true;
            }
        }

        // Shorten b2 against the plane of b0 and b1: search a small box
        // around the real minimizer of Q(b2 + s·b0 + t·b1).
        let det2 = (g[0][0] as i128) * (g[1][1] as i128) - (g[0][1] as i128).pow(2);
        debug_assert!(det2 > 0);
        let rhs0 = -(g[0][2] as i128);
        let rhs1 = -(g[1][2] as i128);
        let s_num = rhs0 * (g[1][1] as i128) - rhs1 * (g[0][1] as i128);
        let t_num = rhs1 * (g[0][0] as i128) - rhs0 * (g[0][1] as i128);
        let s0 = rounded_quotient128(s_num, det2);
        let t0 = rounded_quotient128(t_num, det2);
        let mut best: Option<(i64, i64, i64)> = None;
        for s in (s0 - 2)..=(s0 + 2) {
            for t in (t0 - 2)..=(t0 + 2) {
                if s == 0 && t == 0 {
                    continue;
                }
                let norm = g[2][2]
                    + s * (2 * g[0][2] + s * g[0][0])
                    + t * (2 * g[1][2] + t * g[1][1])
                    + 2 * s * t * g[0][1];
                if norm < g[2][2] && best.map_or(true, |(bn, bs, bt)| {
                    (norm, s.abs(), s, t.abs(), t) < (bn, bs.abs(), bs, bt.abs(), bt)
                }) {
                    best = Some((norm, s, t));
                }
            }
        }
        if let Some((_, s, t)) = best {
            if s != 0 {
                addmul_basis(g, u, 2, 0, s);
            }
            if t != 0 {
                addmul_basis(g, u, 2, 1, t);
            }
            changed = true;
        }

        if !changed {
            break;
        }
    }
}

/// Pick, among diagonal-preserving permutations and sign flips, the
/// lexicographically smallest Gram matrix (row-major).
fn canonicalize(g: &mut [[i64; 3]; 3], u: &mut [[i64; 3]; 3]) {
    sort_by_norm(g, u);
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let flat = |m: &[[i64; 3]; 3]| -> [i64; 9] {
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    };
    let mut best: Option<([i64; 9], [usize; 3], [i64; 3])> = None;
    for perm in perms {
        // Only permutations that keep the diagonal non-decreasing.
        let d = [g[perm[0]][perm[0]], g[perm[1]][perm[1]], g[perm[2]][perm[2]]];
        if d[0] > d[1] || d[1] > d[2] {
            continue;
        }
        for signs_mask in 0..8u8 {
            let signs = [
                if signs_mask & 1 == 0 { 1i64 } else { -1 },
                if signs_mask & 2 == 0 { 1 } else { -1 },
                if signs_mask & 4 == 0 { 1 } else { -1 },
            ];
            let mut cand = [[0i64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    cand[i][j] = signs[i] * signs[j] * g[perm[i]][perm[j]];
                }
            }
            let key = flat(&cand);
            if best.as_ref().map_or(true, |(bk, _, _)| key < *bk) {
                best = Some((key, perm, signs));
            }
        }
    }
    let (_, perm, signs) = best.expect("candidate set is nonempty");
    let old_g = *g;
    let old_u = *u;
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = signs[i] * signs[j] * old_g[perm[i]][perm[j]];
        }
    }
    for r in 0..3 {
        for i in 0..3 {
            u[r][i] = signs[i] * old_u[r][perm[i]];
        }
    }
}

fn rounded_quotient(num: i64, den: i64) -> i64 {
    rounded_quotient128(num as i128, den as i128) as i64
}

fn rounded_quotient128(num: i128, den: i128) -> i64 {
    debug_assert!(den > 0);
    let q = if num >= 0 {
        (2 * num + den) / (2 * den)
    } else {
        -((-2 * num + den) / (2 * den))
    };
    q as i64
}

/// Complete search for an integral isometry carrying `a` onto `b`:
/// columns of U must realize the norms and inner products of `b`'s Gram.
fn isometry_search(a: &TernaryForm, b: &TernaryForm) -> bool {
    let c0 = represent::enumerate_representations(a, b.entry(0, 0));
    if c0.is_empty() {
        return false;
    }
    let c1 = represent::enumerate_representations(a, b.entry(1, 1));
    if c1.is_empty() {
        return false;
    }
    let c2 = represent::enumerate_representations(a, b.entry(2, 2));
    for u0 in &c0 {
        for u1 in &c1 {
            if a.bilinear(*u0, *u1) != b.entry(0, 1) {
                continue;
            }
            for u2 in &c2 {
                if a.bilinear(*u0, *u2) == b.entry(0, 2) && a.bilinear(*u1, *u2) == b.entry(1, 2) {
                    return true;
                }
            }
        }
    }
    false
}
