//! Empirical gap statistics from actual enumeration: normalized-gap
//! CDFs, exact threshold counts, determinant pair counts, and the KS
//! distance against analytic curves.
//!
//! Threshold comparisons are exact integer cross-multiplications; floats
//! only appear once gaps are normalized for CDF storage.

use crate::analytic::PiecewiseCurve;
use crate::error::{FareyError, Result};
use crate::fraction::{count, enumerate, FareyFilter, FareyFraction};
use crate::geometry::Rat;
use num::ToPrimitive;

/// Gaps are stored exactly sorted below this count, binned above.
const BIN_THRESHOLD: usize = 10_000_000;
const BIN_COUNT: usize = 10_000;
const BIN_RANGE: f64 = 20.0;

#[derive(Debug, Clone)]
enum GapStore {
    Exact(Vec<f64>),
    Binned {
        /// Cumulative counts of gaps <= each bin's right edge.
        cumulative: Vec<u64>,
        width: f64,
    },
}

/// Empirical CDF of normalized nearest-neighbor gaps, scaled per the
/// mean-spacing-one convention: `x~_j = N x_j / (x_N - x_0)`.
#[derive(Debug, Clone)]
pub struct EmpiricalCDF {
    store: GapStore,
    n: usize,
    span: f64,
}

impl EmpiricalCDF {
    pub fn from_normalized_gaps(mut gaps: Vec<f64>, span: f64) -> Result<Self> {
        if gaps.is_empty() {
            return Err(FareyError::InvalidInput(
                "need at least one gap (two points)".into(),
            ));
        }
        let n = gaps.len();
        let store = if n > BIN_THRESHOLD {
            Self::bin(&gaps, BIN_COUNT)
        } else {
            gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            GapStore::Exact(gaps)
        };
        Ok(Self { store, n, span })
    }

    fn bin(gaps: &[f64], bins: usize) -> GapStore {
        let width = BIN_RANGE / bins as f64;
        // One overflow bin at the end.
        let mut counts = vec![0u64; bins + 1];
        for &g in gaps {
            let idx = ((g / width) as usize).min(bins);
            counts[idx] += 1;
        }
        let mut cumulative = counts;
        for i in 1..cumulative.len() {
            cumulative[i] += cumulative[i - 1];
        }
        GapStore::Binned { cumulative, width }
    }

    /// Converts exact storage to binned storage with `bins` bins over
    /// [0, 20] plus an overflow bin; evaluations then resolve at bin
    /// granularity. No-op when the store is already binned.
    pub fn into_binned(self, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(FareyError::InvalidInput("bins must be >= 1".into()));
        }
        let store = match self.store {
            GapStore::Exact(g) => Self::bin(&g, bins),
            binned @ GapStore::Binned { .. } => binned,
        };
        Ok(Self { store, ..self })
    }

    /// Number of gaps (the normalization count N).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Unnormalized span `x_N - x_0` of the underlying list.
    pub fn span(&self) -> f64 {
        self.span
    }

    /// `F^(s) = #{gaps <= s} / N`, right-continuous.
    pub fn eval(&self, s: f64) -> f64 {
        let hits = match &self.store {
            GapStore::Exact(g) => g.partition_point(|&x| x <= s),
            GapStore::Binned { cumulative, width } => {
                if s < 0.0 {
                    0
                } else {
                    let idx = ((s / width) as usize).min(cumulative.len() - 1);
                    cumulative[idx] as usize
                }
            }
        };
        hits as f64 / self.n as f64
    }

    /// Left limit `#{gaps < s} / N`.
    pub fn eval_left(&self, s: f64) -> f64 {
        let hits = match &self.store {
            GapStore::Exact(g) => g.partition_point(|&x| x < s),
            GapStore::Binned { cumulative, width } => {
                if s <= 0.0 {
                    0
                } else {
                    let idx = (s / width).ceil() as usize;
                    if idx == 0 {
                        0
                    } else {
                        cumulative[(idx - 1).min(cumulative.len() - 1)] as usize
                    }
                }
            }
        };
        hits as f64 / self.n as f64
    }

    /// Points at which the CDF jumps (unique gap values, or bin edges
    /// when binned).
    pub fn sample_points(&self) -> Vec<f64> {
        match &self.store {
            GapStore::Exact(g) => {
                let mut pts = g.clone();
                pts.dedup();
                pts
            }
            GapStore::Binned { cumulative, width } => (0..cumulative.len())
                .map(|i| (i + 1) as f64 * width)
                .collect(),
        }
    }
}

/// Normalized-gap CDF of the filtered Farey set of order Q.
pub fn gap_cdf(q_max: i64, filter: FareyFilter) -> Result<EmpiricalCDF> {
    let mut iter = enumerate(q_max, filter)?;
    let first = iter
        .next()
        .ok_or_else(|| FareyError::InvalidInput("empty set".into()))?;
    // span = x_last - x_first = 1 - a0/q0, always with x_last = 1.
    let span_num = (first.denominator() - first.numerator()) as i128;
    let span_den = first.denominator() as i128;
    if span_num == 0 {
        return Err(FareyError::InvalidInput(
            "need at least two elements to form a gap".into(),
        ));
    }
    let n = count(q_max, filter)? as i128 - 1;
    let mut gaps = Vec::with_capacity(n as usize);
    let mut prev = first;
    for cur in iter {
        // gap = det / (q q'), normalized by N / span.
        let det = (cur.numerator() as i128) * (prev.denominator() as i128)
            - (prev.numerator() as i128) * (cur.denominator() as i128);
        let num = n * det * span_den;
        let den = (prev.denominator() as i128) * (cur.denominator() as i128) * span_num;
        gaps.push(num as f64 / den as f64);
        prev = cur;
    }
    EmpiricalCDF::from_normalized_gaps(gaps, span_num as f64 / span_den as f64)
}

fn rat_to_i128_pair(xi: &Rat) -> Result<(i128, i128)> {
    let num = xi.numer().to_i128();
    let den = xi.denom().to_i128();
    match (num, den) {
        (Some(n), Some(d)) if d > 0 => Ok((n, d)),
        _ => Err(FareyError::InvalidInput(format!("xi = {xi} out of range"))),
    }
}

/// Exact count of consecutive (filtered) pairs with gap <= xi / Q^2.
pub fn threshold_count(q_max: i64, filter: FareyFilter, xi: &Rat) -> Result<u64> {
    if !num::Signed::is_positive(xi) {
        return Err(FareyError::InvalidInput(format!("xi must be > 0, got {xi}")));
    }
    let (xi_num, xi_den) = rat_to_i128_pair(xi)?;
    let q2 = (q_max as i128) * (q_max as i128);
    let mut iter = enumerate(q_max, filter)?;
    let mut prev = match iter.next() {
        Some(f) => f,
        None => return Ok(0),
    };
    let mut hits = 0u64;
    for cur in iter {
        let det = (cur.numerator() as i128) * (prev.denominator() as i128)
            - (prev.numerator() as i128) * (cur.denominator() as i128);
        let qq = (prev.denominator() as i128) * (cur.denominator() as i128);
        // det/(q q') <= xi/Q^2  <=>  det Q^2 xi_den <= xi_num q q'
        if det * q2 * xi_den <= xi_num * qq {
            hits += 1;
        }
        prev = cur;
    }
    Ok(hits)
}

/// Count of consecutive pairs in the d-coprime set with determinant k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCount {
    pub d: i64,
    pub k: i64,
    pub q_max: i64,
    pub count: u64,
}

pub fn pair_count_k(q_max: i64, d: i64, k: i64) -> Result<PairCount> {
    if k < 1 {
        return Err(FareyError::InvalidInput(format!("k must be >= 1, got {k}")));
    }
    let filter = if d == 1 {
        FareyFilter::All
    } else {
        FareyFilter::denominator_coprime(d)?
    };
    let mut iter = enumerate(q_max, filter)?;
    let mut count = 0u64;
    if let Some(mut prev) = iter.next() {
        for cur in iter {
            if prev.det(&cur) == k {
                count += 1;
            }
            prev = cur;
        }
    }
    Ok(PairCount { d, k, q_max, count })
}

/// Sup distance between an empirical CDF and a continuous CDF curve,
/// evaluated at both one-sided limits of every jump.
pub fn ks_distance(emp: &EmpiricalCDF, curve: &PiecewiseCurve) -> f64 {
    let mut sup: f64 = 0.0;
    for s in emp.sample_points() {
        let f = curve.eval(s);
        sup = sup.max((emp.eval(s) - f).abs());
        sup = sup.max((emp.eval_left(s) - f).abs());
    }
    sup
}

/// The two-case decomposition of filtered gaps: a gap of the
/// numerator-constrained set skips either zero or one fraction of the
/// full sequence, never more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseCounts {
    /// Gaps below threshold skipping no fraction.
    pub n1: u64,
    /// Gaps below threshold skipping exactly one fraction.
    pub n2: u64,
    /// Largest number of skipped fractions over all gaps (any size).
    pub max_skip: usize,
}

pub fn case_counts(q_max: i64, ell: i64, xi: &Rat) -> Result<CaseCounts> {
    let filter = FareyFilter::numerator_not_divisible(ell)?;
    let (xi_num, xi_den) = rat_to_i128_pair(xi)?;
    let q2 = (q_max as i128) * (q_max as i128);
    let mut out = CaseCounts {
        n1: 0,
        n2: 0,
        max_skip: 0,
    };
    let mut prev_kept: Option<FareyFraction> = None;
    let mut skipped: Vec<FareyFraction> = Vec::new();
    for cur in enumerate(q_max, FareyFilter::All)? {
        if !filter.accepts(&cur) {
            skipped.push(cur);
            continue;
        }
        if let Some(p) = &prev_kept {
            out.max_skip = out.max_skip.max(skipped.len());
            let det = (cur.numerator() as i128) * (p.denominator() as i128)
                - (p.numerator() as i128) * (cur.denominator() as i128);
            let qq = (p.denominator() as i128) * (cur.denominator() as i128);
            if det * q2 * xi_den <= xi_num * qq {
                match skipped.len() {
                    0 => out.n1 += 1,
                    1 => out.n2 += 1,
                    _ => {}
                }
            }
            // Case-2 identity: gap = K / (q q'') with K the index of
            // the left fraction.
            if skipped.len() == 1 {
                let k = (q_max + p.denominator()) / skipped[0].denominator();
                debug_assert_eq!(
                    det,
                    k as i128,
                    "gap identity failed at {p} < {} < {cur}",
                    skipped[0]
                );
            }
        }
        skipped.clear();
        prev_kept = Some(cur);
    }
    Ok(out)
}
