//! Genus enumeration by p-neighbor closure, class counts, and the
//! eligible-value sieve Q(gen(L)) as a union over class representatives.

use crate::forms::{TernaryForm, Vector3};
use crate::represent::{self, RepresentationSieve, SieveSource};
use crate::{Error, Result};

/// A complete set of class representatives for the genus of a seed form.
#[derive(Debug, Clone)]
pub struct GenusList {
    representatives: Vec<TernaryForm>,
    seed: TernaryForm,
    primes_used: Vec<i64>,
}

impl GenusList {
    pub fn representatives(&self) -> &[TernaryForm] {
        &self.representatives
    }

    pub fn seed(&self) -> &TernaryForm {
        &self.seed
    }

    pub fn primes_used(&self) -> &[i64] {
        &self.primes_used
    }

    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }
}

fn is_odd_prime(p: i64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Modular inverse mod an odd prime.
fn inv_mod(a: i64, p: i64) -> i64 {
    // Fermat: a^(p−2) mod p.
    let mut base = a.rem_euclid(p);
    let mut exp = p - 2;
    let mut acc = 1i64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Hermite normal form of the row lattice spanned by the given generators;
/// returns a 3×3 basis (rows). Panics if the rows do not span rank 3.
fn row_basis(mut rows: Vec<[i64; 3]>) -> [[i64; 3]; 3] {
    let mut basis: Vec<[i64; 3]> = Vec::new();
    for col in 0..3 {
        // Gather a pivot for this column by gcd elimination.
        loop {
            let mut idx = None;
            for (i, r) in rows.iter().enumerate() {
                if r[col] != 0 {
                    idx = match idx {
                        None => Some(i),
                        Some(j) if rows[i][col].abs() < rows[j][col].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(i) = idx else { break };
            let pivot = rows[i];
            let mut reduced_all = true;
            for (j, r) in rows.iter_mut().enumerate() {
                if j == i || r[col] == 0 {
                    continue;
                }
                let q = r[col].div_euclid(pivot[col]);
                for k in 0..3 {
                    r[k] -= q * pivot[k];
                }
                if r[col] != 0 {
                    reduced_all = false;
                }
            }
            if reduced_all {
                basis.push(pivot);
                rows.remove(i);
                break;
            }
        }
    }
    assert_eq!(basis.len(), 3, "generators do not span a rank-3 lattice");
    [basis[0], basis[1], basis[2]]
}

/// All p-neighbors of a form, one per isotropic line mod p, each reduced.
pub fn p_neighbors(form: &TernaryForm, p: i64) -> Result<Vec<TernaryForm>> {
    if !is_odd_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    if (2 * form.det()) % p == 0 {
        return Err(Error::InvalidArgument(format!(
            "{p} divides twice the determinant {}",
            form.det()
        )));
    }

    // Projective line representatives over F_p.
    let mut lines = Vec::new();
    for y in 0..p {
        for z in 0..p {
            lines.push([1, y, z]);
        }
    }
    for z in 0..p {
        lines.push([0, 1, z]);
    }
    lines.push([0, 0, 1]);

    let mut out = Vec::new();
    for v in lines {
        let v3 = Vector3(v);
        if form.eval(v3).rem_euclid(p) != 0 {
            continue;
        }
        out.push(neighbor_at_line(form, p, v)?);
    }
    Ok(out)
}

/// The Kneser neighbor lattice attached to one isotropic line.
fn neighbor_at_line(form: &TernaryForm, p: i64, v: [i64; 3]) -> Result<TernaryForm> {
    let e = [Vector3([1, 0, 0]), Vector3([0, 1, 0]), Vector3([0, 0, 1])];

    // Lift v so that Q(v) ≡ 0 (mod p²), adjusting along a vector with
    // B(w, v) not divisible by p; one exists since the form is
    // nondegenerate mod p and v is nonzero.
    let mut v = v;
    let q = form.eval(Vector3(v));
    if q.rem_euclid(p * p) != 0 {
        let w = e
            .iter()
            .find(|w| form.bilinear(**w, Vector3(v)).rem_euclid(p) != 0)
            .ok_or_else(|| Error::InvalidForm("isotropic vector lies in the radical".into()))?;
        // Q(v + p·t·w) ≡ Q(v) + 2·p·t·B(v,w) (mod p²).
        let b = form.bilinear(*w, Vector3(v)).rem_euclid(p);
        let t = (-(q / p)).rem_euclid(p) * inv_mod(2 * b, p) % p;
        for k in 0..3 {
            v[k] += p * t * w.0[k];
        }
        debug_assert_eq!(form.eval(Vector3(v)).rem_euclid(p * p), 0);
    }

    // p·L(v) is generated by p·K and v, where K = {x : B(x,v) ≡ 0 mod p}.
    let bv: Vec<i64> = e.iter().map(|ei| form.bilinear(*ei, Vector3(v)).rem_euclid(p)).collect();
    let pivot = (0..3)
        .find(|&i| bv[i] != 0)
        .ok_or_else(|| Error::InvalidForm("isotropic vector lies in the radical".into()))?;
    let inv = inv_mod(bv[pivot], p);
    let mut gens: Vec<[i64; 3]> = Vec::new();
    let mut pe = [0i64; 3];
    pe[pivot] = p * p;
    gens.push(pe);
    for j in 0..3 {
        if j == pivot {
            continue;
        }
        let c = bv[j] * inv % p;
        let mut g = [0i64; 3];
        g[j] = p;
        g[pivot] = -p * c;
        gens.push(g);
    }
    gens.push(v);

    let h = row_basis(gens);
    // Gram of the neighbor: (1/p²)·H·G·Hᵀ with H rows as basis vectors.
    let g = form.gram();
    let mut gram = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0i128;
            for s in 0..3 {
                for t in 0..3 {
                    acc += (h[i][s] as i128) * (g[s][t] as i128) * (h[j][t] as i128);
                }
            }
            let p2 = (p * p) as i128;
            if acc % p2 != 0 {
                return Err(Error::InvalidForm(
                    "neighbor lattice is not integral; lift failed".into(),
                ));
            }
            gram[i][j] = (acc / p2) as i64;
        }
    }
    let neighbor = TernaryForm::new(gram)?;
    debug_assert_eq!(neighbor.det(), form.det());
    Ok(neighbor.reduce())
}

/// Closure of a seed form under p-neighbor steps at the given primes, up
/// to isometry, with representatives in sorted reduced-Gram order.
pub fn genus_classes(seed: &TernaryForm, primes: &[i64]) -> Result<GenusList> {
    if primes.is_empty() {
        return Err(Error::InvalidArgument("empty prime list".into()));
    }
    // Sorted primes and FIFO order make the closure canonical: permuting
    // the input prime list cannot change which representative of a class
    // is discovered first.
    let mut sorted_primes = primes.to_vec();
    sorted_primes.sort_unstable();
    sorted_primes.dedup();
    let mut classes = vec![seed.reduce()];
    let mut frontier = std::collections::VecDeque::from(vec![seed.reduce()]);
    while let Some(form) = frontier.pop_front() {
        for &p in &sorted_primes {
            for nb in p_neighbors(&form, p)? {
                if !classes.iter().any(|c| c.is_isometric(&nb)) {
                    classes.push(nb);
                    frontier.push_back(nb);
                }
            }
        }
    }
    classes.sort_by_key(|c| *c.gram());
    Ok(GenusList {
        representatives: classes,
        seed: *seed,
        primes_used: sorted_primes,
    })
}

/// Values up to `bound` represented by some class in the genus.
pub fn eligible_set(seed: &TernaryForm, bound: i64, primes: &[i64]) -> Result<RepresentationSieve> {
    let genus = genus_classes(seed, primes)?;
    let mut sieve = RepresentationSieve::empty(bound, SieveSource::GenusUnion);
    for class in genus.representatives() {
        sieve.union_with(&represent::represented_set(class, bound));
    }
    Ok(sieve)
}
