//! Infinite-order isometries, fixed eigenvectors, and descent certificates:
//! the machinery that turns a failed transfer into a conclusion of the form
//! "every value in the progression is carried over except Q(z)·t²".

use crate::forms::{TernaryForm, Vector3};
use crate::represent;
use crate::transfer::{
    self, good_vectors, is_isometry_into, residue_rep_set, RationalIsometry, ResidueVectorSet,
};
use crate::{Error, Result};

/// τᵏ as an integer matrix over denᵏ.
fn matrix_power(num: &[[i64; 3]; 3], k: u32) -> [[i128; 3]; 3] {
    let mut acc = [[0i128; 3]; 3];
    for (i, row) in acc.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..k {
        let mut next = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (s, row) in num.iter().enumerate() {
                    next[i][j] += acc[i][s] * (row[j] as i128);
                }
            }
        }
        acc = next;
    }
    acc
}

/// True iff τ has infinite order. Finite-order elements of the rational
/// 3×3 linear group have order in {1,2,3,4,6} (crystallographic
/// restriction), so five power checks decide the question.
pub fn has_infinite_order(tau: &RationalIsometry) -> Result<bool> {
    if !tau.satisfies_isometry_relation() {
        return Err(Error::InvalidIsometry(
            "order test requires a genuine isometry".into(),
        ));
    }
    let den = tau.den() as i128;
    for k in [1u32, 2, 3, 4, 6] {
        let pk = matrix_power(tau.num(), k);
        let dk = den.pow(k);
        let is_identity = (0..3).all(|i| (0..3).all(|j| pk[i][j] == if i == j { dk } else { 0 }));
        if is_identity {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// The primitive fixed vector z with τ·z = det(τ)·z, sign-normalized so
/// the first nonzero coordinate is positive. Every rational ternary
/// isometry has det(τ) as an eigenvalue; for infinite order the fixed
/// space is one-dimensional.
pub fn fixed_eigenvector(tau: &RationalIsometry) -> Result<Vector3> {
    let det = tau.det().ok_or_else(|| {
        Error::InvalidIsometry("matrix determinant is not ±denominator³".into())
    })?;
    if det != 1 && det != -1 {
        return Err(Error::InvalidIsometry(format!("determinant {det} is not ±1")));
    }
    // Kernel of A = num − det·den·I, via cross products of rows.
    let mut a = *tau.num();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= det * tau.den();
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let z = cross(a[i], a[j]);
        if z != [0, 0, 0] {
            let z = Vector3(z).primitive();
            // Guard against rank-1 A (two-dimensional fixed space).
            for row in &a {
                let dot: i64 = row.iter().zip(&z.0).map(|(r, x)| r * x).sum();
                if dot != 0 {
                    return Err(Error::InvalidIsometry(
                        "cross-product kernel candidate fails; inconsistent rows".into(),
                    ));
                }
            }
            let first = z.0.iter().find(|&&c| c != 0).copied().unwrap_or(0);
            return Ok(if first < 0 { z.neg() } else { z });
        }
    }
    Err(Error::InvalidIsometry(
        "fixed space is not one-dimensional".into(),
    ))
}

/// How the good subset of R(N,d,a) is specified in a certificate.
#[derive(Debug, Clone)]
pub enum GoodSpec {
    /// Carried by an explicit σ list.
    Sigmas(Vec<RationalIsometry>),
    /// Carried by some member of the exhaustively searched R(M,N,d).
    Search { cap: usize },
    /// Listed classes, for cases where "good" is not σ-defined (e.g. a
    /// parity condition on the solution itself).
    Explicit(Vec<[i64; 3]>),
}

/// One block of the partition of the non-good classes.
#[derive(Debug, Clone)]
pub struct DescentPartition {
    pub classes: ResidueVectorSet,
    pub tau: RationalIsometry,
    /// Indices j such that τ may send this block into P_j; containing the
    /// block's own index makes it a self-loop, which is what produces
    /// exceptional values.
    pub allowed_targets: Vec<usize>,
}

/// Certificate that (S_{d,a} ∩ Q(N)) − ∪ Q(z_i)·t² ⊆ Q(M).
#[derive(Debug, Clone)]
pub struct DescentCertificate {
    pub n: TernaryForm,
    pub m: TernaryForm,
    pub d: i64,
    pub a: i64,
    pub good: GoodSpec,
    pub partitions: Vec<DescentPartition>,
    /// The claimed fixed eigenvectors, one per self-loop partition, in
    /// partition order.
    pub exceptional_vectors: Vec<Vector3>,
}

/// Outcome of certificate verification.
#[derive(Debug, Clone)]
pub struct DescentReport {
    pub valid: bool,
    pub violations: Vec<String>,
    /// Q_N(z_i) for each self-loop partition, in partition order.
    pub exceptional_norms: Vec<i64>,
    /// Whether each z_i lies in R(N,d,a) / R(M,d,a); when the former is
    /// false the eigenline carries no value of the progression at all.
    pub eigenvector_in_source_rset: Vec<bool>,
    pub eigenvector_in_target_rset: Vec<bool>,
}

fn resolve_good(cert: &DescentCertificate) -> Result<ResidueVectorSet> {
    match &cert.good {
        GoodSpec::Sigmas(sigmas) => good_vectors(&cert.n, &cert.m, cert.d, cert.a, sigmas),
        GoodSpec::Search { cap } => {
            let search = transfer::search_isometries(&cert.m, &cert.n, cert.d, *cap)?;
            if !search.complete {
                return Err(Error::Certificate(format!(
                    "good-set isometry search capped at {cap} before exhaustion"
                )));
            }
            good_vectors(&cert.n, &cert.m, cert.d, cert.a, &search.isometries)
        }
        GoodSpec::Explicit(classes) => {
            let set = ResidueVectorSet::new(cert.d, classes.iter().copied())?;
            let all = residue_rep_set(&cert.n, cert.d, cert.a)?;
            for x in set.iter() {
                if !all.contains(x) {
                    return Err(Error::Certificate(format!(
                        "explicit good class {x:?} is not in R(N,{},{})",
                        cert.d, cert.a
                    )));
                }
            }
            Ok(set)
        }
    }
}

/// Check every condition of a descent certificate; violations are
/// collected rather than short-circuited so a report pinpoints all of them.
pub fn verify_descent_certificate(cert: &DescentCertificate) -> Result<DescentReport> {
    let d = cert.d;
    let mut violations = Vec::new();

    let good = resolve_good(cert)?;
    let all = residue_rep_set(&cert.n, d, cert.a)?;
    let bad = all.difference(&good);

    // Partition blocks must tile the bad set exactly.
    let mut seen = std::collections::BTreeSet::new();
    for (i, part) in cert.partitions.iter().enumerate() {
        if part.classes.modulus() != d {
            violations.push(format!("partition {i} uses modulus {}", part.classes.modulus()));
            continue;
        }
        for x in part.classes.iter() {
            if !bad.contains(x) {
                violations.push(format!("partition {i} contains non-bad class {x:?}"));
            }
            if !seen.insert(x) {
                violations.push(format!("class {x:?} appears in two partitions"));
            }
        }
    }
    for x in bad.iter() {
        if !seen.contains(&x) {
            violations.push(format!("bad class {x:?} is not covered by any partition"));
        }
    }

    // τ conditions and the orbit-target digraph.
    for (i, part) in cert.partitions.iter().enumerate() {
        let tau = &part.tau;
        match is_isometry_into(tau, &cert.n, &cert.n, d) {
            Ok(true) => {}
            Ok(false) => {
                violations.push(format!("τ_{i} fails the isometry or d-integrality condition"));
                continue;
            }
            Err(e) => {
                violations.push(format!("τ_{i}: {e}"));
                continue;
            }
        }
        match has_infinite_order(tau) {
            Ok(true) => {}
            Ok(false) => violations.push(format!("τ_{i} has finite order")),
            Err(e) => violations.push(format!("τ_{i}: {e}")),
        }
        for &j in &part.allowed_targets {
            if j >= cert.partitions.len() {
                violations.push(format!("τ_{i} allows out-of-range target {j}"));
            }
        }

        // Condition (iii): the image class of a lift x̃ depends on x̃ mod
        // d·den, so every residue of the lift modulo den must be examined.
        let den = tau.den();
        for x in part.classes.iter() {
            for e0 in 0..den {
                for e1 in 0..den {
                    for e2 in 0..den {
                        let lift = [x[0] + d * e0, x[1] + d * e1, x[2] + d * e2];
                        let img = tau.numerator_image(lift);
                        if img.iter().any(|&c| c % den != 0) {
                            violations.push(format!(
                                "τ_{i} does not keep lift {lift:?} of {x:?} integral"
                            ));
                            continue;
                        }
                        let y = [img[0] / den, img[1] / den, img[2] / den];
                        let in_allowed = part
                            .allowed_targets
                            .iter()
                            .any(|&j| cert.partitions[j].classes.contains(y));
                        if !in_allowed && !good.contains(y) {
                            violations.push(format!(
                                "τ_{i} sends lift {lift:?} of {x:?} to class {:?}, outside its allowed blocks and the good set",
                                [y[0].rem_euclid(d), y[1].rem_euclid(d), y[2].rem_euclid(d)]
                            ));
                        }
                    }
                }
            }
        }
    }

    // Only self-loops may close cycles: a cycle through distinct blocks
    // would let an orbit dodge the good set forever without settling on a
    // single τ's eigenline.
    let k = cert.partitions.len();
    let mut state = vec![0u8; k]; // 0 unvisited, 1 in-stack, 2 done
    fn dfs(
        v: usize,
        parts: &[DescentPartition],
        state: &mut Vec<u8>,
        violations: &mut Vec<String>,
    ) {
        state[v] = 1;
        for &j in &parts[v].allowed_targets {
            if j == v || j >= parts.len() {
                continue;
            }
            match state[j] {
                0 => dfs(j, parts, state, violations),
                1 => violations.push(format!("target digraph has a non-self cycle through {j}")),
                _ => {}
            }
        }
        state[v] = 2;
    }
    for v in 0..k {
        if state[v] == 0 {
            dfs(v, &cert.partitions, &mut state, &mut violations);
        }
    }

    // Exceptional vectors: exactly the fixed eigenvectors of the
    // self-loop τ's, in partition order.
    let mut norms = Vec::new();
    let mut in_source = Vec::new();
    let mut in_target = Vec::new();
    let mut expected = Vec::new();
    for (i, part) in cert.partitions.iter().enumerate() {
        if !part.allowed_targets.contains(&i) {
            continue;
        }
        match fixed_eigenvector(&part.tau) {
            Ok(z) => expected.push((i, z)),
            Err(e) => violations.push(format!("τ_{i}: {e}")),
        }
    }
    if cert.exceptional_vectors.len() != expected.len() {
        violations.push(format!(
            "certificate lists {} exceptional vectors but {} self-loop partitions exist",
            cert.exceptional_vectors.len(),
            expected.len()
        ));
    }
    for (claimed, (i, z)) in cert.exceptional_vectors.iter().zip(&expected) {
        if claimed != z {
            violations.push(format!(
                "exceptional vector {claimed:?} does not match the fixed eigenvector {z:?} of τ_{i}"
            ));
        }
    }
    let m_rset = residue_rep_set(&cert.m, d, cert.a)?;
    for (_, z) in &expected {
        norms.push(cert.n.eval(*z));
        in_source.push(all.contains(z.0));
        in_target.push(m_rset.contains(z.0));
    }

    Ok(DescentReport {
        valid: violations.is_empty(),
        violations,
        exceptional_norms: norms,
        eigenvector_in_source_rset: in_source,
        eigenvector_in_target_rset: in_target,
    })
}

/// Empirical check of the certificate's conclusion up to a bound: every
/// N-represented value in the progression is M-represented or of an
/// exceptional shape Q(z_i)·t².
#[derive(Debug, Clone)]
pub struct GapReport {
    pub holds: bool,
    pub violations: Vec<i64>,
    pub excluded_values: Vec<i64>,
}

pub fn descent_gap_check(cert: &DescentCertificate, bound: i64) -> Result<GapReport> {
    let report = verify_descent_certificate(cert)?;
    if !report.valid {
        return Err(Error::Certificate(format!(
            "gap check requires a valid certificate; first violation: {}",
            report.violations.first().cloned().unwrap_or_default()
        )));
    }
    let mut exceptional = std::collections::BTreeSet::new();
    for q in &report.exceptional_norms {
        let mut t = 1i64;
        while q * t * t <= bound {
            exceptional.insert(q * t * t);
            t += 1;
        }
    }
    let by_n = represent::represented_set(&cert.n, bound);
    let by_m = represent::represented_set(&cert.m, bound);
    let mut violations = Vec::new();
    let mut excluded = Vec::new();
    let mut v = cert.a;
    while v <= bound {
        if by_n.contains(v) && !by_m.contains(v) {
            if exceptional.contains(&v) {
                excluded.push(v);
            } else {
                violations.push(v);
            }
        }
        v += cert.d;
    }
    Ok(GapReport {
        holds: violations.is_empty(),
        violations,
        excluded_values: excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n2() -> TernaryForm {
        TernaryForm::new([[2, 1, 0], [1, 5, 0], [0, 0, 9]]).unwrap()
    }

    fn m_block() -> TernaryForm {
        TernaryForm::block(1, [[9, 3], [3, 10]]).unwrap()
    }

    fn tau1() -> RationalIsometry {
        RationalIsometry::new(3, [[-3, -2, -2], [0, 1, 4], [0, -2, 1]], &n2(), &n2()).unwrap()
    }

    fn tau2() -> RationalIsometry {
        RationalIsometry::new(3, [[-2, 0, 5], [1, 3, -1], [-1, 0, -2]], &n2(), &n2()).unwrap()
    }

    fn tau3() -> RationalIsometry {
        RationalIsometry::new(3, [[-2, -2, -5], [1, -2, 1], [-1, -1, 2]], &n2(), &n2()).unwrap()
    }

    fn residue2_certificate() -> DescentCertificate {
        let n = n2();
        let m = m_block();
        let sigmas = vec![
            RationalIsometry::new(3, [[-3, 3, 0], [1, 2, 1], [0, 0, -3]], &n, &m).unwrap(),
            RationalIsometry::new(3, [[3, -3, 0], [-1, -2, 1], [0, 0, -3]], &n, &m).unwrap(),
        ];
        let p1 = ResidueVectorSet::new(3, [[1, 0, 0], [2, 0, 0]]).unwrap();
        let p2 = ResidueVectorSet::new(3, [[0, 1, 0], [0, 2, 0]]).unwrap();
        let p3 = ResidueVectorSet::new(3, [[1, 2, 0], [2, 1, 0]]).unwrap();
        DescentCertificate {
            n,
            m,
            d: 3,
            a: 2,
            good: GoodSpec::Sigmas(sigmas),
            partitions: vec![
                DescentPartition {
                    classes: p1,
                    tau: tau1(),
                    allowed_targets: vec![0],
                },
                DescentPartition {
                    classes: p2,
                    tau: tau2(),
                    allowed_targets: vec![1],
                },
                DescentPartition {
                    classes: p3,
                    tau: tau3(),
                    allowed_targets: vec![1],
                },
            ],
            exceptional_vectors: vec![Vector3([1, 0, 0]), Vector3([0, 1, 0])],
        }
    }

    #[test]
    fn order_tests() {
        assert!(has_infinite_order(&tau1()).unwrap());
        assert!(has_infinite_order(&tau2()).unwrap());
        assert!(has_infinite_order(&tau3()).unwrap());
        let n = n2();
        let id = RationalIsometry::new(1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], &n, &n).unwrap();
        assert!(!has_infinite_order(&id).unwrap());
        let neg = RationalIsometry::new(1, [[-1, 0, 0], [0, -1, 0], [0, 0, -1]], &n, &n).unwrap();
        assert!(!has_infinite_order(&neg).unwrap());
        // An order-4 rotation in the plane of ⟨1,1,9⟩.
        let f = TernaryForm::diagonal(1, 1, 9).unwrap();
        let rot = RationalIsometry::new(1, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], &f, &f).unwrap();
        assert!(!has_infinite_order(&rot).unwrap());
    }

    #[test]
    fn eigenvectors_match_listings() {
        assert_eq!(fixed_eigenvector(&tau1()).unwrap(), Vector3([1, 0, 0]));
        assert_eq!(fixed_eigenvector(&tau2()).unwrap(), Vector3([0, 1, 0]));

        let f137 = TernaryForm::diagonal(1, 3, 7).unwrap();
        let tau = RationalIsometry::new(8, [[1, 0, 21], [0, 8, 0], [-3, 0, 1]], &f137, &f137)
            .unwrap();
        assert!(has_infinite_order(&tau).unwrap());
        assert_eq!(fixed_eigenvector(&tau).unwrap(), Vector3([0, 1, 0]));

        let f = TernaryForm::new([[2, 1, 0], [1, 4, 1], [0, 1, 8]]).unwrap();
        let s = RationalIsometry::new(2, [[1, -2, -1], [1, 2, 1], [0, 0, -2]], &f, &f).unwrap();
        assert!(has_infinite_order(&s).unwrap());
        assert_eq!(fixed_eigenvector(&s).unwrap(), Vector3([1, -2, 7]));
    }

    #[test]
    fn residue2_certificate_is_valid() {
        let report = verify_descent_certificate(&residue2_certificate()).unwrap();
        assert!(report.valid, "violations: {:?}", report.violations);
        assert_eq!(report.exceptional_norms, vec![2, 5]);
    }

    #[test]
    fn residue2_gap_check() {
        let gaps = descent_gap_check(&residue2_certificate(), 2000).unwrap();
        assert!(gaps.holds, "violations: {:?}", gaps.violations);
        // Every excluded value has the shape 2t² or 5t².
        for v in &gaps.excluded_values {
            let ok = (1..).map(|t| t * t).take_while(|s| 2 * s <= *v)
                .any(|s| *v == 2 * s || *v == 5 * s);
            assert!(ok, "excluded value {v} is not 2t² or 5t²");
        }
        assert!(gaps.excluded_values.contains(&2));
        assert!(gaps.excluded_values.contains(&5));
        assert!(gaps.excluded_values.contains(&8));
    }

    #[test]
    fn tampered_certificate_fails() {
        // Dropping τ₃'s permission to land in P₂ must break condition (iii).
        let mut cert = residue2_certificate();
        cert.partitions[2].allowed_targets = vec![2];
        let report = verify_descent_certificate(&cert).unwrap();
        assert!(!report.valid);

        // Wrong eigenvector is reported.
        let mut cert = residue2_certificate();
        cert.exceptional_vectors[0] = Vector3([0, 0, 1]);
        let report = verify_descent_certificate(&cert).unwrap();
        assert!(!report.valid);
    }

    #[test]
    fn parity_descent_certificate() {
        // M = N = 2x²+4y²+8z²+2xy+2yz, d = 2: good classes are those with
        // x₁ ≢ x₃ (mod 2); the involution-free reflection S fixes (1,−2,7).
        let f = TernaryForm::new([[2, 1, 0], [1, 4, 1], [0, 1, 8]]).unwrap();
        let s = RationalIsometry::new(2, [[1, -2, -1], [1, 2, 1], [0, 0, -2]], &f, &f).unwrap();
        let bad = ResidueVectorSet::new(
            2,
            [[0, 0, 0], [0, 1, 0], [1, 0, 1], [1, 1, 1]],
        )
        .unwrap();
        let cert = DescentCertificate {
            n: f,
            m: f,
            d: 2,
            a: 0,
            good: GoodSpec::Explicit(vec![[0, 0, 1], [0, 1, 1], [1, 0, 0], [1, 1, 0]]),
            partitions: vec![DescentPartition {
                classes: bad,
                tau: s,
                allowed_targets: vec![0],
            }],
            exceptional_vectors: vec![Vector3([1, -2, 7])],
        };
        let report = verify_descent_certificate(&cert).unwrap();
        assert!(report.valid, "violations: {:?}", report.violations);
        assert_eq!(report.exceptional_norms, vec![378]);
    }

    #[test]
    fn case_vi_certificate() {
        // M = ⟨1,3,7⟩ into L = [4,1;1,7]⊥⟨7⟩ at modulus 24, residue 11; the
        // 32 uncarried classes are (4a, 6b+3, ±4a) with a ≢ 0 mod 3.
        let m = TernaryForm::diagonal(1, 3, 7).unwrap();
        let l = TernaryForm::new([[4, 1, 0], [1, 7, 0], [0, 0, 7]]).unwrap();
        let tau = RationalIsometry::new(8, [[1, 0, 21], [0, 8, 0], [-3, 0, 1]], &m, &m).unwrap();
        let mut bad = Vec::new();
        for a in [1i64, 2, 4, 5] {
            for b in 0..4 {
                bad.push([4 * a, 6 * b + 3, (4 * a).rem_euclid(24)]);
                bad.push([4 * a, 6 * b + 3, (-4 * a).rem_euclid(24)]);
            }
        }
        assert_eq!(bad.len(), 32);
        let cert = DescentCertificate {
            n: m,
            m: l,
            d: 24,
            a: 11,
            good: GoodSpec::Search { cap: 1_000_000 },
            partitions: vec![DescentPartition {
                classes: ResidueVectorSet::new(24, bad).unwrap(),
                tau,
                allowed_targets: vec![0],
            }],
            exceptional_vectors: vec![Vector3([0, 1, 0])],
        };
        let report = verify_descent_certificate(&cert).unwrap();
        assert!(report.valid, "violations: {:?}", report.violations);
        // Q(0,1,0) = 3 ≢ 11 (mod 24): the eigenline meets the progression
        // nowhere, so the formal exceptional set 3t² is vacuous here.
        assert_eq!(report.exceptional_norms, vec![3]);
        assert_eq!(report.eigenvector_in_source_rset, vec![false]);
        assert_eq!(report.eigenvector_in_target_rset, vec![false]);

        let gaps = descent_gap_check(&cert, 2000).unwrap();
        assert!(gaps.holds, "violations: {:?}", gaps.violations);
        assert!(gaps.excluded_values.is_empty());
    }

    #[test]
    fn trivial_certificate_reduces_to_transfer() {
        let n = TernaryForm::diagonal(1, 1, 9).unwrap();
        let m = m_block();
        let nums = [
            [[0, 3, 0], [1, 0, -1], [0, 0, 3]],
            [[0, 3, 0], [1, 0, 1], [0, 0, -3]],
            [[3, 0, 0], [0, -1, 1], [0, 0, -3]],
            [[3, 0, 0], [0, 1, 1], [0, 0, -3]],
        ];
        let sigmas = nums
            .iter()
            .map(|num| RationalIsometry::new(3, *num, &n, &m).unwrap())
            .collect();
        let cert = DescentCertificate {
            n,
            m,
            d: 3,
            a: 1,
            good: GoodSpec::Sigmas(sigmas),
            partitions: vec![],
            exceptional_vectors: vec![],
        };
        let report = verify_descent_certificate(&cert).unwrap();
        assert!(report.valid, "violations: {:?}", report.violations);
        let gaps = descent_gap_check(&cert, 2000).unwrap();
        assert!(gaps.holds);
        assert!(gaps.excluded_values.is_empty());
    }
}
