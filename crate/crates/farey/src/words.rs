//! The word/residue assembly behind the gap law of the
//! denominator-constrained sets: admissible nu_2 words, their residue
//! sets mod d, and the distribution constant C_d / CDF F_d.

use crate::analytic::{big_a, euler_phi, k_d, omega, zeta2, PiecewiseCurve};
use crate::bcz::{cylinder_polygon, cylinder_matrix, hyperbolic_area, CylinderWord};
use crate::error::{FareyError, Result};
use crate::geometry::{rat_to_f64, Rat, RationalPolygon};
use crate::runs::run_bound_l;
use num::{BigInt, One, Signed, ToPrimitive};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn mat_mul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Clips `poly` by the preimage of cylinder x under the linear map m,
/// i.e. restricts to points whose next itinerary letter is x.
fn clip_next_cylinder(poly: &RationalPolygon, m: &[[i64; 2]; 2], x: i64) -> RationalPolygon {
    use crate::geometry::HalfPlane;
    let planes = [
        (0i64, 1i64, 1i64), // y <= 1
        (-1, -1, -1),       // x + y >= 1
        (-1, x, 1),         // x >= x_j y - 1
        (1, -(x + 1), -1),  // x <= (x_j + 1) y - 1 (closed)
        (1, 0, 1),          // x <= 1
    ];
    let mut out = poly.clone();
    for (a, b, c) in planes {
        let pa = a * m[0][0] + b * m[1][0];
        let pb = a * m[0][1] + b * m[1][1];
        out = out.clip(&HalfPlane::from_i64(pa, pb, c));
        if out.is_empty() {
            break;
        }
    }
    out
}

/// Range of feasible next letters for the region `poly` mapped forward
/// by `m`: the kappa values attained on the image, bounded above by
/// `cap` (the image may touch y = 0, where kappa is unbounded).
fn next_letter_range(poly: &RationalPolygon, m: &[[i64; 2]; 2], cap: i64) -> (i64, i64) {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    let mut unbounded = false;
    for p in poly.vertices() {
        let x = Rat::from(BigInt::from(m[0][0])) * &p.x + Rat::from(BigInt::from(m[0][1])) * &p.y;
        let y = Rat::from(BigInt::from(m[1][0])) * &p.x + Rat::from(BigInt::from(m[1][1])) * &p.y;
        if !y.is_positive() {
            unbounded = true;
            continue;
        }
        let v = (Rat::one() + x) / y;
        if lo.as_ref().is_none_or(|l| &v < l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().is_none_or(|h| &v > h) {
            hi = Some(v);
        }
    }
    let lo = lo
        .map(|v| v.floor().to_integer().to_i64().unwrap().max(1))
        .unwrap_or(1);
    let hi = if unbounded {
        cap
    } else {
        hi.map(|v| v.floor().to_integer().to_i64().unwrap())
            .unwrap_or(cap)
            .min(cap)
    };
    (lo, hi)
}

/// All words of length `ell - 1` with Farey continuant k and nonempty
/// word polygon, in lexicographic order. These are the x(k, ell, m);
/// the list length is n(k, ell).
pub fn enumerate_words(k: i64, ell: i64) -> Result<Vec<CylinderWord>> {
    if k < 1 || ell < 2 {
        return Err(FareyError::InvalidInput(format!(
            "need k >= 1 and ell >= 2, got k={k}, ell={ell}"
        )));
    }
    let len = (ell - 1) as usize;
    // Intermediate continuants of admissible words overshoot the final
    // value by at most the word length; small safety margin on top.
    let cap = k + ell + 2;
    let mut out = Vec::new();
    let mut letters = Vec::with_capacity(len);
    dfs_plain(k, len, cap, None, &[[1, 0], [0, 1]], &mut letters, &mut out);
    Ok(out)
}

fn dfs_plain(
    k: i64,
    len: usize,
    cap: i64,
    poly: Option<&RationalPolygon>,
    m: &[[i64; 2]; 2],
    letters: &mut Vec<i64>,
    out: &mut Vec<CylinderWord>,
) {
    if letters.len() == len {
        if m[1][1] == k {
            out.push(CylinderWord(letters.clone()));
        }
        return;
    }
    let (lo, hi) = match poly {
        None => (1, cap),
        Some(p) => next_letter_range(p, m, cap),
    };
    for x in lo..=hi {
        let child_poly = match poly {
            None => cylinder_polygon(x).unwrap(),
            Some(p) => clip_next_cylinder(p, m, x),
        };
        if child_poly.is_empty() {
            continue;
        }
        let cm = mat_mul(&cylinder_matrix(x), m);
        if cm[1][1] > cap {
            continue;
        }
        letters.push(x);
        dfs_plain(k, len, cap, Some(&child_poly), &cm, letters, out);
        letters.pop();
    }
}

/// The residue pairs (r_{i-1}, r_i) mod d compatible with the word: the
/// recurrence r_{j+1} = x_j r_j - r_{j-1} (mod d) keeps every middle
/// term sharing a factor with d while both endpoints stay coprime.
/// Brute force over all d^2 seed pairs.
pub fn residue_set(d: i64, w: &CylinderWord) -> Result<Vec<(i64, i64)>> {
    if d < 1 {
        return Err(FareyError::InvalidInput(format!("d must be >= 1, got {d}")));
    }
    let mut out = Vec::new();
    for r0 in 1..=d {
        if gcd(r0, d) != 1 {
            continue;
        }
        'seed: for r1 in 1..=d {
            let (mut prev, mut cur) = (r0, r1);
            // Middle terms r_1 .. r_L must share a factor with d.
            for &x in w.letters() {
                if gcd(cur, d) == 1 {
                    continue 'seed;
                }
                let next = (x % d * cur - prev).rem_euclid(d);
                prev = cur;
                cur = next;
            }
            if gcd(cur, d) == 1 {
                out.push((r0, r1));
            }
        }
    }
    Ok(out)
}

/// One word's contribution to C_d for l >= 3: region, linear form of
/// g_l, saturated area, and its residue multiplicity.
#[derive(Debug, Clone)]
struct WordEntry {
    k: i64,
    mult: u32,
    poly: RationalPolygon,
    form: (i64, i64),
    area_full: f64,
    /// The region is empty for xi <= xi_zero and saturated (full area)
    /// for xi >= xi_full; slightly widened so the closed-form slicer is
    /// still consulted near the transitions.
    xi_zero: f64,
    xi_full: f64,
}

#[derive(Debug, Default)]
struct WordTable {
    kmax: i64,
    entries: Vec<WordEntry>,
}

/// The limiting gap law of the denominator-constrained set for a fixed
/// d: evaluates C_d and the CDF F_d. Words for l >= 3 are enumerated
/// once (with residue-viability pruning) and cached up to the largest
/// continuant requested, capped at `word_cap`.
pub struct DGapLaw {
    d: i64,
    /// Word lengths run to l_max - 1 where l_max = L(d) + 1.
    ell_max: i64,
    /// True when L(d) comes from a proven small bound (omega(d) <= 2);
    /// otherwise the l-summation range is only a certified bound.
    bound_proven: bool,
    prefactor: f64,
    phi_sq: f64,
    /// Residue multiplicity of the single length-1 word (k), by k mod d.
    cnt2: Vec<u32>,
    word_cap: i64,
    table: Mutex<WordTable>,
}

pub const DEFAULT_WORD_CAP: i64 = 400;

impl DGapLaw {
    pub fn new(d: i64) -> Result<Self> {
        Self::with_word_cap(d, DEFAULT_WORD_CAP)
    }

    /// `word_cap` limits the continuant of enumerated l >= 3 words;
    /// beyond it C_d omits their (tiny, saturated) contributions.
    pub fn with_word_cap(d: i64, word_cap: i64) -> Result<Self> {
        if d < 1 {
            return Err(FareyError::InvalidInput(format!("d must be >= 1, got {d}")));
        }
        let l = run_bound_l(d)?;
        let mut pref_rat = Rat::one() / Rat::from(BigInt::from(d * d));
        // prod_{p | d} (1 - 1/p^2)^{-1}
        let mut dd = d;
        let mut p = 2;
        while p * p <= dd {
            if dd % p == 0 {
                pref_rat *= Rat::new(BigInt::from(p * p), BigInt::from(p * p - 1));
                while dd % p == 0 {
                    dd /= p;
                }
            }
            p += 1;
        }
        if dd > 1 {
            pref_rat *= Rat::new(BigInt::from(dd * dd), BigInt::from(dd * dd - 1));
        }
        let mut cnt2 = vec![0u32; d as usize];
        for (i, c) in cnt2.iter_mut().enumerate() {
            let w = CylinderWord(vec![i as i64 + d]); // letter ≡ i mod d, >= 1
            *c = residue_set(d, &w)?.len() as u32;
        }
        Ok(Self {
            d,
            ell_max: l + 1,
            bound_proven: omega(d) <= 2,
            prefactor: rat_to_f64(&pref_rat) / zeta2(),
            phi_sq: (euler_phi(d) * euler_phi(d)) as f64,
            cnt2,
            word_cap,
            table: Mutex::new(WordTable::default()),
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn ell_max(&self) -> i64 {
        self.ell_max
    }

    pub fn bound_proven(&self) -> bool {
        self.bound_proven
    }

    fn ensure_table(&self, kmax: i64) {
        let kmax = kmax.min(self.word_cap);
        let mut table = self.table.lock().unwrap();
        if table.kmax >= kmax || self.ell_max < 3 {
            table.kmax = table.kmax.max(kmax);
            return;
        }
        // Rebuild from scratch; the search is cheap relative to reuse
        // bookkeeping and happens a handful of times per law.
        let max_len = (self.ell_max - 1) as usize;
        let cap = kmax + self.ell_max + 2;
        let mut entries = Vec::new();
        // Seeds (r0, r1) collapsed to their current residue state
        // (r_j, r_{j+1}) with multiplicities.
        let mut seeds: HashMap<(i64, i64), u32> = HashMap::new();
        for r0 in 1..=self.d {
            if gcd(r0, self.d) != 1 {
                continue;
            }
            for r1 in 1..=self.d {
                *seeds.entry((r0, r1)).or_insert(0) += 1;
            }
        }
        self.dfs_table(kmax, max_len, cap, None, &[[1, 0], [0, 1]], &seeds, &mut entries);
        entries.sort_by_key(|e| e.k);
        table.kmax = kmax;
        table.entries = entries;
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_table(
        &self,
        kmax: i64,
        max_len: usize,
        cap: i64,
        state: Option<(&RationalPolygon, usize)>,
        m: &[[i64; 2]; 2],
        seeds: &HashMap<(i64, i64), u32>,
        entries: &mut Vec<WordEntry>,
    ) {
        let depth = state.map_or(0, |(_, d)| d);
        if depth > 0 && depth >= 2 {
            // Emit a length-`depth` word when its continuant is in range
            // and some seed exits coprime.
            let k = m[1][1];
            if k <= kmax {
                let mult: u32 = seeds
                    .iter()
                    .filter(|((_, r), _)| gcd(*r, self.d) == 1)
                    .map(|(_, c)| c)
                    .sum();
                if mult > 0 {
                    let poly = state.unwrap().0.clone();
                    let form = (m[1][0], m[1][1]);
                    let (g_min, g_max) = crate::bcz::form_range(&poly, form).unwrap();
                    let kf = k as f64;
                    let xi_zero = if g_max > 0.0 { kf / g_max * (1.0 - 1e-9) } else { f64::INFINITY };
                    let xi_full = if g_min > 0.0 { kf / g_min * (1.0 + 1e-9) } else { f64::INFINITY };
                    entries.push(WordEntry {
                        k,
                        mult,
                        area_full: rat_to_f64(&poly.area()),
                        form,
                        poly,
                        xi_zero,
                        xi_full,
                    });
                }
            }
        }
        if depth == max_len {
            return;
        }
        // Continuation requires the newest middle term to share a factor.
        let cont: HashMap<(i64, i64), u32> = seeds
            .iter()
            .filter(|((_, r), _)| gcd(*r, self.d) > 1)
            .map(|(&s, &c)| (s, c))
            .collect();
        if cont.is_empty() {
            return;
        }
        let (lo, hi) = match state {
            None => (1, cap),
            Some((p, _)) => next_letter_range(p, m, cap),
        };
        for x in lo..=hi {
            let child_poly = match state {
                None => cylinder_polygon(x).unwrap(),
                Some((p, _)) => clip_next_cylinder(p, m, x),
            };
            if child_poly.is_empty() {
                continue;
            }
            let cm = mat_mul(&cylinder_matrix(x), m);
            if cm[1][1] > cap {
                continue;
            }
            let child_seeds: HashMap<(i64, i64), u32> = {
                let mut h: HashMap<(i64, i64), u32> = HashMap::new();
                for (&(prev, cur), &c) in &cont {
                    let next = (x % self.d * cur - prev).rem_euclid(self.d);
                    *h.entry((cur, next)).or_insert(0) += c;
                }
                h
            };
            self.dfs_table(
                kmax,
                max_len,
                cap,
                Some((&child_poly, depth + 1)),
                &cm,
                &child_seeds,
                entries,
            );
        }
    }

    /// The distribution constant: `N_d(Q, xi) ~ C_d(xi) Q^2`.
    pub fn c_d(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(FareyError::InvalidInput(format!("xi must be >= 0, got {xi}")));
        }
        let kmax = xi.floor() as i64;
        let mut bracket = self.phi_sq * big_a(xi);
        for k in 1..=kmax {
            let cnt = self.cnt2[(k % self.d) as usize];
            if cnt > 0 {
                bracket += cnt as f64 * crate::analytic::a_k(k, xi)?;
            }
        }
        if self.ell_max >= 3 && kmax >= 1 {
            self.ensure_table(kmax);
            let table = self.table.lock().unwrap();
            for e in &table.entries {
                if e.k > kmax {
                    break;
                }
                if xi <= e.xi_zero {
                    continue;
                }
                if xi >= e.xi_full {
                    bracket += e.mult as f64 * e.area_full;
                    continue;
                }
                let t = e.k as f64 / xi;
                let area = hyperbolic_area(&e.poly, e.form, t);
                bracket += e.mult as f64 * area.min(e.area_full);
            }
        }
        Ok(self.prefactor * bracket)
    }

    /// The limiting gap CDF: `F_d(s) = (1/K_d) C_d(s / K_d)`.
    pub fn f_d(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(FareyError::InvalidInput(format!("s must be >= 0, got {s}")));
        }
        let kd = k_d(self.d)?;
        Ok(self.c_d(s / kd)? / kd)
    }
}

/// `F_d` as an evaluable curve; shares one cached word table.
pub fn curve_fd(d: i64) -> Result<PiecewiseCurve> {
    let law = Arc::new(DGapLaw::new(d)?);
    let kd = k_d(d)?;
    let breakpoints = (1..=40).map(|n| n as f64 * kd).collect();
    Ok(PiecewiseCurve::new(
        breakpoints,
        Arc::new(move |s| law.f_d(s).unwrap()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::a_k;
    use crate::bcz::word_polygon;
    use crate::fraction::{enumerate, nu_ell, FareyFilter, FareyFraction};

    fn letters(ws: &[CylinderWord]) -> Vec<Vec<i64>> {
        ws.iter().map(|w| w.0.clone()).collect()
    }

    #[test]
    fn words_ell2() {
        for k in [1, 2, 7, 40] {
            assert_eq!(letters(&enumerate_words(k, 2).unwrap()), vec![vec![k]]);
        }
    }

    #[test]
    fn words_ell3_examples() {
        // K^F_2(x, y) = xy - 1 = k, filtered by polygon feasibility.
        let w5 = enumerate_words(5, 3).unwrap();
        for w in &w5 {
            assert_eq!(w.0[0] * w.0[1] - 1, 5);
            assert!(!word_polygon(w).unwrap().is_empty());
        }
        let cand = [vec![1, 6], vec![2, 3], vec![3, 2], vec![6, 1]];
        for c in cand {
            let feasible = !word_polygon(&CylinderWord(c.clone())).unwrap().is_empty();
            assert_eq!(letters(&w5).contains(&c), feasible, "{c:?}");
        }
        let w1 = enumerate_words(1, 3).unwrap();
        for w in &w1 {
            assert_eq!(w.0[0] * w.0[1], 2);
        }
    }

    /// Every nu_2 tuple observed in an actual Farey sequence must be
    /// produced by the word search (soundness of caps and pruning).
    #[test]
    fn words_match_harvest() {
        let q_max = 150;
        let seq: Vec<FareyFraction> = enumerate(q_max, FareyFilter::All).unwrap().collect();
        let nu2: Vec<i64> = (1..seq.len() - 1)
            .map(|i| (seq[i - 1].denominator() + seq[i + 1].denominator()) / seq[i].denominator())
            .collect();
        for ell in [3usize, 4] {
            let mut seen: std::collections::HashSet<(i64, Vec<i64>)> = Default::default();
            for i in 1..seq.len() - ell {
                let k = nu_ell(&seq, i, ell).unwrap();
                if k <= 8 {
                    let word: Vec<i64> = (0..ell - 1).map(|j| nu2[i + j - 1]).collect();
                    seen.insert((k, word));
                }
            }
            for k in 1..=8 {
                let enumerated = letters(&enumerate_words(k, ell as i64).unwrap());
                for (kk, word) in seen.iter().filter(|(kk, _)| *kk == k) {
                    assert!(
                        enumerated.contains(word),
                        "observed word {word:?} (k={kk}, ell={ell}) not enumerated"
                    );
                }
            }
        }
    }

    #[test]
    fn residue_set_basics() {
        // d = 1: middles can never share a factor with 1.
        let w = CylinderWord(vec![3]);
        assert!(residue_set(1, &w).unwrap().is_empty());
        // d = 2, any single-letter word: r0 = 1, r1 = 2, r2 = 2k - 1 odd.
        for k in 1..=6 {
            assert_eq!(residue_set(2, &CylinderWord(vec![k])).unwrap(), vec![(1, 2)]);
        }
        // d = 4: 2 coprime choices for r0 times 2 even choices of r1,
        // exit 4k r1 - r0 always odd.
        for k in 1..=6 {
            assert_eq!(residue_set(4, &CylinderWord(vec![k])).unwrap().len(), 4);
        }
    }

    #[test]
    fn residue_set_matches_harvest() {
        // Harvest actual consecutive denominators mod 6 around nu_2
        // patterns (2,3) and check them against the computed set.
        let d = 6;
        let w = CylinderWord(vec![2, 3]);
        let set = residue_set(d, &w).unwrap();
        let q_max = 200;
        let seq: Vec<FareyFraction> = enumerate(q_max, FareyFilter::All).unwrap().collect();
        let nu2: Vec<i64> = (1..seq.len() - 1)
            .map(|i| (seq[i - 1].denominator() + seq[i + 1].denominator()) / seq[i].denominator())
            .collect();
        let mut found = 0;
        for i in 1..seq.len() - 3 {
            if nu2[i - 1] == 2 && nu2[i] == 3 {
                let qs: Vec<i64> = (0..4).map(|j| seq[i - 1 + j].denominator()).collect();
                let pattern_holds = gcd(qs[0], d) == 1
                    && gcd(qs[1], d) > 1
                    && gcd(qs[2], d) > 1
                    && gcd(qs[3], d) == 1;
                if pattern_holds {
                    found += 1;
                    let pair = (qs[0].rem_euclid(d), qs[1].rem_euclid(d));
                    let pair = (if pair.0 == 0 { d } else { pair.0 }, if pair.1 == 0 { d } else { pair.1 });
                    assert!(set.contains(&pair), "harvested {pair:?} missing");
                }
            }
        }
        assert!(found > 0, "no (2,3) runs found in F_{q_max}");
    }

    #[test]
    fn prime_power_mass() {
        // For prime powers only l = 2 contributes and C_d(inf) = K_d.
        let xi = 1e4;
        let tail = 2.0 / ((xi + 1.0) * (xi + 2.0));
        for d in [2, 3, 4, 5, 8, 9] {
            let law = DGapLaw::new(d).unwrap();
            assert_eq!(law.ell_max(), 2);
            let c = law.c_d(xi).unwrap();
            let kd = k_d(d).unwrap();
            assert!((c / kd - 1.0).abs() <= tail / kd, "d={d}: {c} vs {kd}");
            assert!((law.f_d(kd * xi).unwrap() - 1.0).abs() <= tail / kd);
        }
    }

    #[test]
    fn prime_power_matches_two_term_form() {
        // For d = p^a, C_d reduces to the G-style two-term expression:
        // pref * (phi(d)^2 A(xi) + cnt2 * sum_k A_k(xi)).
        let d = 4;
        let law = DGapLaw::new(d).unwrap();
        for xi in [1.5f64, 3.0, 7.25, 20.0] {
            let mut sum = 0.0;
            for k in 1..=xi.floor() as i64 {
                sum += a_k(k, xi).unwrap();
            }
            let pref = 1.0 / (zeta2() * 16.0) * (4.0 / 3.0);
            let want = pref * (4.0 * big_a(xi) + 4.0 * sum);
            assert!((law.c_d(xi).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn d6_mass() {
        // The full word machinery must reproduce the total mass K_6.
        let law = DGapLaw::with_word_cap(6, 400).unwrap();
        assert_eq!(law.ell_max(), 6);
        assert!(law.bound_proven());
        let xi = 400.0;
        let c = law.c_d(xi).unwrap();
        let kd = k_d(6).unwrap();
        // Exact tail at xi = 400 is ~2/(401*402) relative; leave margin
        // for the omitted above-cap words.
        assert!(
            (c / kd - 1.0).abs() < 1e-3,
            "C_6({xi}) = {c}, K_6 = {kd}, rel {}",
            c / kd - 1.0
        );
        assert!(c < kd, "truncation must underestimate");
    }

    #[test]
    fn d6_curve_monotone() {
        let law = DGapLaw::new(6).unwrap();
        let mut prev = -1.0;
        for i in 0..200 {
            let s = i as f64 * 8.0 / 200.0;
            let v = law.f_d(s).unwrap();
            assert!(v >= prev - 1e-12);
            assert!((0.0..=1.0 + 1e-9).contains(&v));
            prev = v;
        }
        assert_eq!(law.f_d(0.0).unwrap(), 0.0);
    }
}
