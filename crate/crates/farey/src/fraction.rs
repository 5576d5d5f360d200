//! Exact enumeration of Farey fractions of order `Q` and their
//! constrained subsequences, together with the index invariants
//! attached to consecutive fractions.

use crate::error::{FareyError, Result};

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a.rem_euclid(b));
    }
    a.abs()
}

/// A reduced fraction `a/q` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyFraction {
    a: i64,
    q: i64,
}

impl FareyFraction {
    pub fn new(a: i64, q: i64) -> Result<Self> {
        if a <= 0 || q <= 0 || a > q {
            return Err(FareyError::InvalidInput(format!(
                "{a}/{q} is not in (0, 1]"
            )));
        }
        if gcd(a, q) != 1 {
            return Err(FareyError::InvalidInput(format!("{a}/{q} is not reduced")));
        }
        Ok(Self { a, q })
    }

    pub fn numerator(&self) -> i64 {
        self.a
    }

    pub fn denominator(&self) -> i64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    /// Determinant `a'q - aq'`; equals 1 exactly when `self < other` are
    /// consecutive in some Farey sequence.
    pub fn det(&self, other: &FareyFraction) -> i64 {
        other.a * self.q - self.a * other.q
    }
}

impl PartialOrd for FareyFraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FareyFraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.a * other.q).cmp(&(other.a * self.q))
    }
}

impl std::fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

/// Membership constraint selecting `F_Q`, the subset with numerator not
/// divisible by `ell`, or the subset with denominator coprime to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FareyFilter {
    All,
    NumeratorNotDivisible(i64),
    DenominatorCoprime(i64),
}

impl FareyFilter {
    pub fn numerator_not_divisible(ell: i64) -> Result<Self> {
        if ell < 2 {
            return Err(FareyError::InvalidInput(format!(
                "ell must be >= 2, got {ell}"
            )));
        }
        Ok(Self::NumeratorNotDivisible(ell))
    }

    pub fn denominator_coprime(d: i64) -> Result<Self> {
        if d < 1 {
            return Err(FareyError::InvalidInput(format!("d must be >= 1, got {d}")));
        }
        Ok(Self::DenominatorCoprime(d))
    }

    pub fn accepts(&self, f: &FareyFraction) -> bool {
        match *self {
            FareyFilter::All => true,
            FareyFilter::NumeratorNotDivisible(ell) => f.a % ell != 0,
            FareyFilter::DenominatorCoprime(d) => gcd(f.q, d) == 1,
        }
    }
}

/// Streaming enumeration of `F_Q` via the next-term recurrence
/// `K = floor((Q + q) / q')`, `q'' = Kq' - q`, `a'' = Ka' - a`.
/// Constant-size state; terms are produced in strictly increasing order.
pub struct FareyStream {
    q_max: i64,
    prev: Option<FareyFraction>,
    cur: Option<FareyFraction>,
}

impl FareyStream {
    pub fn new(q_max: i64) -> Result<Self> {
        if q_max < 1 {
            return Err(FareyError::InvalidInput(format!(
                "Q must be >= 1, got {q_max}"
            )));
        }
        let cur = if q_max == 1 {
            FareyFraction::new(1, 1).unwrap()
        } else {
            FareyFraction::new(1, q_max).unwrap()
        };
        Ok(Self {
            q_max,
            prev: None,
            cur: Some(cur),
        })
    }
}

impl Iterator for FareyStream {
    type Item = FareyFraction;

    fn next(&mut self) -> Option<FareyFraction> {
        let cur = self.cur?;
        let next = if cur.q == 1 {
            // 1/1 is the last element.
            None
        } else {
            match self.prev {
                None => Some(FareyFraction {
                    a: 1,
                    q: self.q_max - 1,
                }),
                Some(prev) => {
                    let k = (self.q_max + prev.q) / cur.q;
                    Some(FareyFraction {
                        a: k * cur.a - prev.a,
                        q: k * cur.q - prev.q,
                    })
                }
            }
        };
        self.prev = Some(cur);
        self.cur = next;
        Some(cur)
    }
}

/// All members of the filtered Farey sequence of order `Q`, in increasing
/// order. The filter is applied over the full `F_Q` stream.
pub fn enumerate(q_max: i64, filter: FareyFilter) -> Result<impl Iterator<Item = FareyFraction>> {
    let stream = FareyStream::new(q_max)?;
    Ok(stream.filter(move |f| filter.accepts(f)))
}

/// Successor of `cur` in `F_Q`, given the preceding element `prev`.
pub fn next_fraction(
    q_max: i64,
    prev: &FareyFraction,
    cur: &FareyFraction,
) -> Result<FareyFraction> {
    if prev.det(cur) != 1 || prev.q + cur.q <= q_max || prev.q > q_max || cur.q > q_max {
        return Err(FareyError::ContractViolation(format!(
            "{prev} and {cur} are not consecutive in F_{q_max}"
        )));
    }
    if cur.q == 1 {
        return Err(FareyError::ContractViolation(
            "1/1 has no successor".into(),
        ));
    }
    let k = (q_max + prev.q) / cur.q;
    FareyFraction::new(k * cur.a - prev.a, k * cur.q - prev.q)
}

/// Exact cardinality of the filtered set, by a single enumeration pass.
pub fn count(q_max: i64, filter: FareyFilter) -> Result<u64> {
    Ok(enumerate(q_max, filter)?.count() as u64)
}

/// `#F_Q` as a totient sum; independent cross-check for `count`.
pub fn count_via_totients(q_max: i64) -> Result<u64> {
    if q_max < 1 {
        return Err(FareyError::InvalidInput(format!(
            "Q must be >= 1, got {q_max}"
        )));
    }
    let n = q_max as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for p in 2..=n {
        if phi[p] == p as u64 {
            let mut m = p;
            while m <= n {
                phi[m] -= phi[m] / p as u64;
                m += p;
            }
        }
    }
    Ok(phi[1..=n].iter().sum())
}

/// The index `nu_2` of the middle fraction of a consecutive triple:
/// `(q_left + q_right) / q_mid`, an exact positive integer.
pub fn nu_index(q_max: i64, window: &[FareyFraction; 3]) -> Result<i64> {
    let [left, mid, right] = window;
    if left.det(mid) != 1 || mid.det(right) != 1 {
        return Err(FareyError::ContractViolation(format!(
            "{left}, {mid}, {right} are not consecutive in F_{q_max}"
        )));
    }
    let sum = left.q + right.q;
    if sum % mid.q != 0 {
        return Err(FareyError::ContractViolation(format!(
            "(q_left + q_right) = {sum} is not divisible by q_mid = {}",
            mid.q
        )));
    }
    let nu = sum / mid.q;
    debug_assert_eq!(nu, (q_max + left.q) / mid.q);
    Ok(nu)
}

/// The `ell`-index of the fraction at position `i` of the enumerated
/// sequence: `a_{i+ell-1} q_{i-1} - a_{i-1} q_{i+ell-1}`.
pub fn nu_ell(seq: &[FareyFraction], i: usize, ell: usize) -> Result<i64> {
    if ell < 2 {
        return Err(FareyError::InvalidInput(format!(
            "ell must be >= 2, got {ell}"
        )));
    }
    if i == 0 || i + ell - 1 >= seq.len() {
        return Err(FareyError::OutOfRange(format!(
            "positions {} and {} must both exist (len {})",
            i as i64 - 1,
            i + ell - 1,
            seq.len()
        )));
    }
    let lo = &seq[i - 1];
    let hi = &seq[i + ell - 1];
    Ok(hi.a * lo.q - lo.a * hi.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(q_max: i64, filter: FareyFilter) -> Vec<FareyFraction> {
        let mut v = Vec::new();
        for q in 1..=q_max {
            for a in 1..=q {
                if gcd(a, q) == 1 {
                    let f = FareyFraction::new(a, q).unwrap();
                    if filter.accepts(&f) {
                        v.push(f);
                    }
                }
            }
        }
        v.sort();
        v
    }

    fn frac(a: i64, q: i64) -> FareyFraction {
        FareyFraction::new(a, q).unwrap()
    }

    #[test]
    fn enumerate_q5_all() {
        let got: Vec<_> = enumerate(5, FareyFilter::All).unwrap().collect();
        let want = vec![
            frac(1, 5),
            frac(1, 4),
            frac(1, 3),
            frac(2, 5),
            frac(1, 2),
            frac(3, 5),
            frac(2, 3),
            frac(3, 4),
            frac(4, 5),
            frac(1, 1),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_q4_numerator_filter() {
        let filter = FareyFilter::numerator_not_divisible(2).unwrap();
        let got: Vec<_> = enumerate(4, filter).unwrap().collect();
        let want = vec![frac(1, 4), frac(1, 3), frac(1, 2), frac(3, 4), frac(1, 1)];
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_q4_denominator_filter() {
        let filter = FareyFilter::denominator_coprime(6).unwrap();
        let got: Vec<_> = enumerate(4, filter).unwrap().collect();
        assert_eq!(got, vec![frac(1, 1)]);
    }

    #[test]
    fn enumerate_q1() {
        let got: Vec<_> = enumerate(1, FareyFilter::All).unwrap().collect();
        assert_eq!(got, vec![frac(1, 1)]);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for q_max in 1..=200 {
            let filters = [
                FareyFilter::All,
                FareyFilter::NumeratorNotDivisible(2),
                FareyFilter::NumeratorNotDivisible(3),
                FareyFilter::DenominatorCoprime(4),
                FareyFilter::DenominatorCoprime(6),
            ];
            for filter in filters {
                let got: Vec<_> = enumerate(q_max, filter).unwrap().collect();
                assert_eq!(got, brute_force(q_max, filter), "Q={q_max} {filter:?}");
            }
        }
    }

    #[test]
    fn neighbor_determinant_and_consecutivity() {
        for q_max in [1, 2, 10, 137, 500] {
            let seq: Vec<_> = enumerate(q_max, FareyFilter::All).unwrap().collect();
            for pair in seq.windows(2) {
                assert_eq!(pair[0].det(&pair[1]), 1);
                assert!(pair[0].q + pair[1].q > q_max);
                assert!(pair[0].q.max(pair[1].q) <= q_max);
            }
        }
    }

    #[test]
    fn no_two_consecutive_divisible_numerators() {
        for q_max in 1..=300 {
            let seq: Vec<_> = enumerate(q_max, FareyFilter::All).unwrap().collect();
            for ell in 2..=10 {
                for pair in seq.windows(2) {
                    assert!(
                        pair[0].a % ell != 0 || pair[1].a % ell != 0,
                        "Q={q_max} ell={ell}: {} and {}",
                        pair[0],
                        pair[1]
                    );
                }
            }
        }
    }

    #[test]
    fn next_fraction_examples() {
        assert_eq!(
            next_fraction(5, &frac(1, 5), &frac(1, 4)).unwrap(),
            frac(1, 3)
        );
        assert_eq!(
            next_fraction(4, &frac(1, 2), &frac(2, 3)).unwrap(),
            frac(3, 4)
        );
        assert!(next_fraction(5, &frac(4, 5), &frac(1, 1)).is_err());
        assert!(next_fraction(5, &frac(1, 5), &frac(1, 3)).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count(4, FareyFilter::All).unwrap(), 6);
        assert_eq!(count(5, FareyFilter::All).unwrap(), 10);
        assert_eq!(count(4, FareyFilter::DenominatorCoprime(6)).unwrap(), 1);
    }

    #[test]
    fn count_matches_totient_sum() {
        for q_max in [1, 2, 17, 100, 500] {
            assert_eq!(
                count(q_max, FareyFilter::All).unwrap(),
                count_via_totients(q_max).unwrap()
            );
        }
    }

    #[test]
    fn count_asymptotics() {
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        for q_max in [100i64, 1000, 10000] {
            let n = count_via_totients(q_max).unwrap() as f64;
            let q = q_max as f64;
            let dev = (n * 2.0 * zeta2 / (q * q) - 1.0).abs();
            assert!(dev <= 5.0 * q.ln() / q, "Q={q_max} dev={dev}");
        }
    }

    #[test]
    fn nu_index_examples() {
        assert_eq!(
            nu_index(5, &[frac(1, 5), frac(1, 4), frac(1, 3)]).unwrap(),
            2
        );
        assert_eq!(
            nu_index(5, &[frac(1, 4), frac(1, 3), frac(2, 5)]).unwrap(),
            3
        );
        assert_eq!(
            nu_index(4, &[frac(1, 4), frac(1, 3), frac(1, 2)]).unwrap(),
            2
        );
        assert!(nu_index(5, &[frac(1, 5), frac(1, 3), frac(2, 5)]).is_err());
    }

    #[test]
    fn nu_index_equals_floor_form() {
        for q_max in [7, 30, 101] {
            let seq: Vec<_> = enumerate(q_max, FareyFilter::All).unwrap().collect();
            for w in seq.windows(3) {
                let nu = nu_index(q_max, &[w[0], w[1], w[2]]).unwrap();
                assert_eq!(nu, (q_max + w[0].q) / w[1].q);
            }
        }
    }

    #[test]
    fn nu_ell_examples() {
        let seq: Vec<_> = enumerate(5, FareyFilter::All).unwrap().collect();
        // gamma_i = 1/4 sits at position 1.
        assert_eq!(nu_ell(&seq, 1, 3).unwrap(), 5);
        assert_eq!(nu_ell(&seq, 1, 2).unwrap(), 2);
        assert!(nu_ell(&seq, 0, 2).is_err());
        assert!(nu_ell(&seq, 9, 2).is_err());
    }

    #[test]
    fn nu_ell_2_matches_nu_index() {
        for q_max in [5, 40, 150] {
            let seq: Vec<_> = enumerate(q_max, FareyFilter::All).unwrap().collect();
            for i in 1..seq.len() - 1 {
                assert_eq!(
                    nu_ell(&seq, i, 2).unwrap(),
                    nu_index(q_max, &[seq[i - 1], seq[i], seq[i + 1]]).unwrap()
                );
            }
        }
    }
}
