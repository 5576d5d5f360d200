//! Run-length analysis: maximal strings of consecutive Farey denominators
//! sharing a factor with d, the certified bounds on L(d), and the
//! continuant calculus relating l-indices to nu_2 strings.

use crate::analytic::{omega, smallest_prime_factor};
use crate::error::{FareyError, Result};
use crate::fraction::{enumerate, nu_ell, FareyFilter, FareyFraction};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A maximal string of consecutive denominators in F_Q all sharing a
/// factor with d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub d: i64,
    pub q_max: i64,
    /// Position of the first fraction of the run in the enumeration.
    pub start_index: usize,
    pub length: usize,
    pub denominators: Vec<i64>,
}

/// Longest run of consecutive denominators sharing a factor with d in
/// F_Q (earliest run on ties); length 0 when no denominator does.
pub fn max_run(d: i64, q_max: i64) -> Result<RunRecord> {
    if d < 2 {
        return Err(FareyError::InvalidInput(format!("d must be >= 2, got {d}")));
    }
    let mut best = RunRecord {
        d,
        q_max,
        start_index: 0,
        length: 0,
        denominators: vec![],
    };
    let mut cur_start = 0usize;
    let mut cur: Vec<i64> = Vec::new();
    for (i, f) in enumerate(q_max, FareyFilter::All)?.enumerate() {
        if gcd(f.denominator(), d) > 1 {
            if cur.is_empty() {
                cur_start = i;
            }
            cur.push(f.denominator());
        } else if !cur.is_empty() {
            if cur.len() > best.length {
                best.start_index = cur_start;
                best.length = cur.len();
                best.denominators = std::mem::take(&mut cur);
            }
            cur.clear();
        }
    }
    if cur.len() > best.length {
        best.start_index = cur_start;
        best.length = cur.len();
        best.denominators = cur;
    }
    Ok(best)
}

/// Provenance of the proven upper bound on L(d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    /// Prime power: two consecutive denominators are coprime.
    PrimePower,
    /// d = p^a q^b: L(d) <= 5.
    TwoPrimeLemma,
    /// omega(d) <= min prime divisor of d: L(d) <= 4 omega(d)^3.
    OmegaCubedLemma,
    /// Fallback bound L(d) <= 4 d^3.
    GeneralCubic,
}

impl BoundSource {
    pub fn label(self) -> &'static str {
        match self {
            BoundSource::PrimePower => "prime power (trivial)",
            BoundSource::TwoPrimeLemma => "two prime powers: L <= 5",
            BoundSource::OmegaCubedLemma => "omega(d) <= min prime: L <= 4*omega^3",
            BoundSource::GeneralCubic => "general bound: L <= 4*d^3",
        }
    }
}

/// Proven upper bound on L(d) with its source.
pub fn proven_bound(d: i64) -> Result<(i64, BoundSource)> {
    if d < 2 {
        return Err(FareyError::InvalidInput(format!("d must be >= 2, got {d}")));
    }
    let w = omega(d) as i64;
    Ok(match w {
        1 => (1, BoundSource::PrimePower),
        2 => (5, BoundSource::TwoPrimeLemma),
        _ if w <= smallest_prime_factor(d).unwrap() => (4 * w * w * w, BoundSource::OmegaCubedLemma),
        _ => (4 * d * d * d, BoundSource::GeneralCubic),
    })
}

/// Empirical maximum run length over Q <= q_limit paired with the
/// applicable proven bound. L(d) itself is a supremum over all Q; only
/// the bound is a certificate, the empirical maximum a lower bound.
#[derive(Debug, Clone)]
pub struct RunCertificate {
    pub d: i64,
    pub q_limit: i64,
    pub empirical_max: usize,
    pub attaining_q: i64,
    pub proven_bound: i64,
    pub bound_source: BoundSource,
    /// Whether the empirical maximum attains the proven bound.
    pub attains_bound: bool,
    pub witness: RunRecord,
}

pub fn certify_l(d: i64, q_limit: i64) -> Result<RunCertificate> {
    let (bound, source) = proven_bound(d)?;
    let mut best: Option<RunRecord> = None;
    let mut attaining_q = 0;
    for q_max in 1..=q_limit {
        let run = max_run(d, q_max)?;
        if best.as_ref().is_none_or(|b| run.length > b.length) {
            attaining_q = q_max;
            best = Some(run);
        }
    }
    let witness = best.expect("q_limit >= 1");
    Ok(RunCertificate {
        d,
        q_limit,
        empirical_max: witness.length,
        attaining_q,
        proven_bound: bound,
        bound_source: source,
        attains_bound: witness.length as i64 == bound,
        witness,
    })
}

/// The best proven value of L(d) used by the distribution assembly;
/// for omega(d) >= 3 this is only a certified bound, not the exact L.
pub fn run_bound_l(d: i64) -> Result<i64> {
    if d == 1 {
        return Ok(0);
    }
    Ok(proven_bound(d)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuantKind {
    /// K_l = x_l K_{l-1} + K_{l-2}, K_0 = 1, K_1(x) = x.
    Regular,
    /// Farey: K^F_l = x_l K^F_{l-1} - K^F_{l-2}, K^F_0 = 1, K^F_1(x) = x.
    Farey,
}

/// Exact continuant via the three-term recurrence; empty input gives 1.
pub fn continuant(kind: ContinuantKind, xs: &[i64]) -> i64 {
    let sign = match kind {
        ContinuantKind::Regular => 1,
        ContinuantKind::Farey => -1,
    };
    let mut prev = 1i64; // K_0
    let mut cur = match xs.first() {
        None => return 1,
        Some(&x) => x,
    };
    for &x in &xs[1..] {
        let next = x * cur + sign * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Same value via the matrix products of the identities
/// `((x,1),(1,0))...` and `((x,1),(-1,0))...`; independent code path.
pub fn continuant_matrix(kind: ContinuantKind, xs: &[i64]) -> i64 {
    let sign = match kind {
        ContinuantKind::Regular => 1,
        ContinuantKind::Farey => -1,
    };
    let mut m = [[1i64, 0], [0, 1]];
    for &x in xs {
        let f = [[x, 1], [sign, 0]];
        m = [
            [
                m[0][0] * f[0][0] + m[0][1] * f[1][0],
                m[0][0] * f[0][1] + m[0][1] * f[1][1],
            ],
            [
                m[1][0] * f[0][0] + m[1][1] * f[1][0],
                m[1][0] * f[0][1] + m[1][1] * f[1][1],
            ],
        ];
    }
    m[0][0]
}

/// One failure of an index/continuant identity, with its witness data.
#[derive(Debug, Clone)]
pub struct IdentityViolation {
    pub q_max: i64,
    pub position: usize,
    pub ell: usize,
    pub nu: i64,
    pub farey_side: i64,
    pub regular_side: i64,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub checked: usize,
    pub violations: Vec<IdentityViolation>,
}

/// Checks, for every admissible position of F_Q and every l <= ell_max,
/// that the l-index equals the Farey continuant of the nu_2 string and
/// the signed regular continuant of the alternating string.
pub fn verify_identity_32(q_max: i64, ell_max: usize) -> Result<IdentityReport> {
    if q_max < 3 || ell_max < 2 {
        return Err(FareyError::InvalidInput(format!(
            "need q_max >= 3 and ell_max >= 2, got {q_max}, {ell_max}"
        )));
    }
    let seq: Vec<FareyFraction> = enumerate(q_max, FareyFilter::All)?.collect();
    // nu_2 at interior positions 1..len-2.
    let nu2: Vec<i64> = (1..seq.len() - 1)
        .map(|i| (seq[i - 1].denominator() + seq[i + 1].denominator()) / seq[i].denominator())
        .collect();
    let mut report = IdentityReport {
        checked: 0,
        violations: vec![],
    };
    for ell in 2..=ell_max {
        for i in 1..seq.len() {
            if i + ell - 1 >= seq.len() {
                break;
            }
            let nu = nu_ell(&seq, i, ell)?;
            // nu_2(gamma_i), ..., nu_2(gamma_{i+ell-2}); nu2[j] is the
            // index of position j+1.
            let string: Vec<i64> = (0..ell - 1).map(|j| nu2[i + j - 1]).collect();
            let farey_side = continuant(ContinuantKind::Farey, &string);
            let signed: Vec<i64> = string
                .iter()
                .enumerate()
                .map(|(j, &x)| if j % 2 == 0 { -x } else { x })
                .collect();
            let eps = if ell % 4 <= 1 { 1 } else { -1 };
            let regular_side = eps * continuant(ContinuantKind::Regular, &signed);
            report.checked += 1;
            if nu != farey_side || nu != regular_side {
                report.violations.push(IdentityViolation {
                    q_max,
                    position: i,
                    ell,
                    nu,
                    farey_side,
                    regular_side,
                });
            }
        }
    }
    Ok(report)
}
