//! The BCZ map `T(x, y) = (y, kappa(x, y) y - x)` on the Farey triangle,
//! its cylinders as exact rational polygons, word regions, and the
//! hyperbolic region areas behind the limiting gap distributions.
//!
//! Cylinders are treated as closed polygons; all inclusion and area
//! statements are up to measure zero.

use crate::error::{FareyError, Result};
use crate::geometry::{rat, rat_int, rat_to_f64, HalfPlane, Rat, RationalPoint, RationalPolygon};
use num::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A point of the Farey triangle `T = {(x,y) in (0,1]^2 : x + y > 1}`,
/// closure boundary allowed (except y = 0, where kappa is undefined).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrianglePoint {
    pub x: Rat,
    pub y: Rat,
}

impl TrianglePoint {
    pub fn new(x: Rat, y: Rat) -> Result<Self> {
        let one = Rat::one();
        if x.is_negative() || !y.is_positive() || x > one || y > one || &x + &y < one {
            return Err(FareyError::InvalidInput(format!(
                "({x}, {y}) is not in the Farey triangle"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn from_i64(x: (i64, i64), y: (i64, i64)) -> Result<Self> {
        Self::new(rat(x.0, x.1), rat(y.0, y.1))
    }
}

/// `kappa(x, y) = floor((1 + x) / y)`.
pub fn kappa(p: &TrianglePoint) -> i64 {
    let q = (Rat::one() + &p.x) / &p.y;
    q.floor().to_integer().to_i64().expect("kappa overflow")
}

/// `T(x, y) = (y, kappa(x, y) y - x)`; exact and area preserving.
pub fn apply_t(p: &TrianglePoint) -> TrianglePoint {
    let k = kappa(p);
    let y2 = rat_int(k) * &p.y - &p.x;
    TrianglePoint::new(p.y.clone(), y2).expect("T maps the triangle into itself")
}

/// `T^{-1}(x, y) = (kappa(y, x) x - y, x)`.
pub fn apply_t_inverse(p: &TrianglePoint) -> TrianglePoint {
    let k = {
        let q = (Rat::one() + &p.y) / &p.x;
        q.floor().to_integer().to_i64().expect("kappa overflow")
    };
    let x0 = rat_int(k) * &p.x - &p.y;
    TrianglePoint::new(x0, p.x.clone()).expect("T^{-1} maps the triangle into itself")
}

/// Closure of the Farey triangle as a polygon.
pub fn farey_triangle() -> RationalPolygon {
    RationalPolygon::from_vertices(vec![
        RationalPoint::from_i64((1, 1), (0, 1)),
        RationalPoint::from_i64((1, 1), (1, 1)),
        RationalPoint::from_i64((0, 1), (1, 1)),
    ])
}

/// Closure of the cylinder `T_K = {kappa = K}`: the inequalities
/// `0 < x, y <= 1`, `x + y > 1`, `Ky - 1 <= x < (K+1)y - 1`.
/// A triangle for K = 1, a quadrilateral for K >= 2.
pub fn cylinder_polygon(k: i64) -> Result<RationalPolygon> {
    if k < 1 {
        return Err(FareyError::InvalidInput(format!("K must be >= 1, got {k}")));
    }
    let mut poly = farey_triangle();
    // -x + K y <= 1
    poly = poly.clip(&HalfPlane::from_i64(-1, k, 1));
    // x - (K+1) y <= -1
    poly = poly.clip(&HalfPlane::from_i64(1, -(k + 1), -1));
    Ok(poly)
}

/// On `T_K` the map T is linear with this matrix; determinant 1.
pub fn cylinder_matrix(k: i64) -> [[i64; 2]; 2] {
    [[0, 1], [-1, k]]
}

/// A tuple `(x_1, ..., x_L)` of cylinder indices; the itinerary of the
/// first `L` applications of T.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderWord(pub Vec<i64>);

impl CylinderWord {
    pub fn new(letters: Vec<i64>) -> Result<Self> {
        if letters.is_empty() || letters.iter().any(|&x| x < 1) {
            return Err(FareyError::InvalidInput(
                "word letters must be a nonempty list of integers >= 1".into(),
            ));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[i64] {
        &self.0
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

/// The word region `T_{x_1} ∩ T^{-1} T_{x_2} ∩ ... ∩ T^{-(L-1)} T_{x_L}`
/// together with the matrix of `T^L` restricted to it. The polygon is
/// empty exactly when the word is infeasible.
pub fn word_region(w: &CylinderWord) -> Result<(RationalPolygon, [[i64; 2]; 2])> {
    let letters = w.letters();
    let mut poly = cylinder_polygon(letters[0])?;
    // Matrix of T^{j} on the region built so far.
    let mut m = cylinder_matrix(letters[0]);
    for &x in &letters[1..] {
        if poly.is_empty() {
            return Ok((RationalPolygon::empty(), m));
        }
        // Constrain T^{j}(p) to lie in T_x by pulling the cylinder's
        // half-planes back through the linear map m.
        let cyl_planes = [
            (0i64, 1i64, 1i64),   // y <= 1
            (-1, -1, -1),         // x + y >= 1
            (-1, x, 1),           // x >= x_j * y - 1
            (1, -(x + 1), -1),    // x < (x_j + 1) y - 1, closed here
            (1, 0, 1),            // x <= 1
        ];
        for (a, b, c) in cyl_planes {
            let pa = a * m[0][0] + b * m[1][0];
            let pb = a * m[0][1] + b * m[1][1];
            poly = poly.clip(&HalfPlane::from_i64(pa, pb, c));
            if poly.is_empty() {
                break;
            }
        }
        m = mat_mul(&cylinder_matrix(x), &m);
    }
    Ok((poly, m))
}

/// Word region polygon only.
pub fn word_polygon(w: &CylinderWord) -> Result<RationalPolygon> {
    Ok(word_region(w)?.0)
}

/// Largest kappa value attained on a polygon; the maximum of the
/// linear-fractional function `(1 + x)/y` sits at a vertex.
fn kappa_max(poly: &RationalPolygon) -> Result<i64> {
    let mut best: Option<Rat> = None;
    for v in poly.vertices() {
        if !v.y.is_positive() {
            return Err(FareyError::InvalidInput(
                "polygon touches y = 0; kappa is unbounded".into(),
            ));
        }
        let val = (Rat::one() + &v.x) / &v.y;
        if best.as_ref().is_none_or(|b| &val > b) {
            best = Some(val);
        }
    }
    let best = best.ok_or_else(|| FareyError::InvalidInput("empty polygon".into()))?;
    Ok(best.floor().to_integer().to_i64().expect("kappa overflow"))
}

/// Forward image of a list of polygons under T, computed exactly by
/// splitting each polygon along the cylinders and mapping the pieces
/// linearly.
pub fn forward_image(polys: &[RationalPolygon]) -> Result<Vec<RationalPolygon>> {
    let mut out = Vec::new();
    for poly in polys {
        if poly.is_empty() {
            continue;
        }
        let kmax = kappa_max(poly)?;
        for k in 1..=kmax {
            let piece = poly.intersect(&cylinder_polygon(k)?);
            if !piece.is_empty() {
                out.push(piece.map_linear(&cylinder_matrix(k)));
            }
        }
    }
    Ok(out)
}

/// Outcome of an inclusion check; on failure `witness` is an interior
/// point of the left-hand side not covered by the right-hand side.
#[derive(Debug, Clone)]
pub struct InclusionCheck {
    pub holds: bool,
    pub witness: Option<RationalPoint>,
}

/// Checks `lhs ⊆ ∪_{K in rhs} T_K` up to measure zero, exactly.
/// The cylinders partition the triangle, so the check reduces to exact
/// area bookkeeping per cylinder.
pub fn check_inclusion(lhs: &[RationalPolygon], rhs: &[i64]) -> Result<InclusionCheck> {
    for piece in lhs {
        if piece.is_empty() {
            continue;
        }
        let kmax = kappa_max(piece)?;
        let mut covered = Rat::zero();
        let mut witness = None;
        for k in 1..=kmax {
            let overlap = piece.intersect(&cylinder_polygon(k)?);
            if overlap.is_empty() {
                continue;
            }
            if rhs.contains(&k) {
                covered += overlap.area();
            } else if witness.is_none() {
                witness = overlap.centroid();
            }
        }
        if covered != piece.area() {
            return Ok(InclusionCheck {
                holds: false,
                witness,
            });
        }
    }
    Ok(InclusionCheck {
        holds: true,
        witness: None,
    })
}

/// Piecewise-linear chain over increasing x; one side of a convex polygon.
struct Chain {
    pts: Vec<(f64, f64)>,
}

impl Chain {
    fn eval(&self, x: f64) -> f64 {
        let pts = &self.pts;
        for w in pts.windows(2) {
            if x <= w[1].0 {
                let (x0, y0) = w[0];
                let (x1, y1) = w[1];
                if x1 == x0 {
                    return y0;
                }
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        pts.last().map(|p| p.1).unwrap_or(0.0)
    }

    fn segments(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        self.pts.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Splits a convex CCW polygon into lower and upper chains with
/// nondecreasing x.
fn chains(poly: &RationalPolygon) -> (Chain, Chain) {
    let verts: Vec<(f64, f64)> = poly.vertices().iter().map(|p| p.to_f64()).collect();
    let n = verts.len();
    let key_min = |i: &usize| {
        let (x, y) = verts[*i];
        (x, y)
    };
    let idx: Vec<usize> = (0..n).collect();
    // leftmost-bottom and rightmost-top in CCW order
    let i_lb = *idx
        .iter()
        .min_by(|a, b| key_min(a).partial_cmp(&key_min(b)).unwrap())
        .unwrap();
    let i_rt = *idx
        .iter()
        .max_by(|a, b| key_min(a).partial_cmp(&key_min(b)).unwrap())
        .unwrap();
    // CCW walk lb -> rt is the lower chain; rt -> lb the upper chain.
    let mut lower = vec![verts[i_lb]];
    let mut i = i_lb;
    while i != i_rt {
        i = (i + 1) % n;
        lower.push(verts[i]);
    }
    let mut upper_rev = vec![verts[i_rt]];
    while i != i_lb {
        i = (i + 1) % n;
        upper_rev.push(verts[i]);
    }
    upper_rev.reverse();
    let dedup = |mut v: Vec<(f64, f64)>| {
        v.dedup_by(|a, b| a.0 == b.0);
        v
    };
    (Chain { pts: dedup(lower) }, Chain { pts: dedup(upper_rev) })
}

/// Range of the quadratic form `g(x, y) = x (c x + d y)` over a convex
/// polygon. `g` is a saddle, so both extremes lie on the boundary; each
/// edge restricts to a quadratic in the edge parameter, whose extremes
/// are at the endpoints or one interior critical point.
pub fn form_range(poly: &RationalPolygon, form: (i64, i64)) -> Option<(f64, f64)> {
    let verts: Vec<(f64, f64)> = poly.vertices().iter().map(|p| p.to_f64()).collect();
    if verts.is_empty() {
        return None;
    }
    let (cf, df) = (form.0 as f64, form.1 as f64);
    let g = |x: f64, y: f64| x * (cf * x + df * y);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let n = verts.len();
    for i in 0..n {
        let (x0, y0) = verts[i];
        let (x1, y1) = verts[(i + 1) % n];
        for v in [g(x0, y0), g(x1, y1)] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // g(p0 + t (p1 - p0)) = a t^2 + b t + c0.
        let (dx, dy) = (x1 - x0, y1 - y0);
        let a = dx * (cf * dx + df * dy);
        let b = 2.0 * cf * x0 * dx + df * (x0 * dy + y0 * dx);
        if a != 0.0 {
            let t = -b / (2.0 * a);
            if t > 0.0 && t < 1.0 {
                let v = g(x0 + t * dx, y0 + t * dy);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    Some((lo, hi))
}

/// Area of `poly ∩ { x (c x + d y) >= t }` for `d > 0`, by slicing the
/// polygon against the curve `y = h(x) = (t - c x^2)/(d x)` and
/// integrating the rational-plus-logarithmic pieces in closed form.
/// Absolute error well below 1e-10 for the regions used here.
pub fn hyperbolic_area(poly: &RationalPolygon, form: (i64, i64), threshold: f64) -> f64 {
    let (c, d) = form;
    assert!(d > 0, "linear form must have positive y-coefficient");
    if poly.is_empty() {
        return 0.0;
    }
    if threshold <= 0.0 {
        return rat_to_f64(&poly.area());
    }
    let (cf, df) = (c as f64, d as f64);
    let t = threshold;
    let h = |x: f64| (t - cf * x * x) / (df * x);
    // Antiderivative of h.
    let h_int = |x0: f64, x1: f64| (t / df) * (x1 / x0).ln() - (cf / (2.0 * df)) * (x1 * x1 - x0 * x0);

    let (lower, upper) = chains(poly);
    let x_min = lower.pts.first().unwrap().0;
    let x_max = lower.pts.last().unwrap().0;

    let mut cuts: Vec<f64> = Vec::new();
    for chain in [&lower, &upper] {
        for p in &chain.pts {
            cuts.push(p.0);
        }
        // Intersections of h with each linear piece y = a + b x:
        // (c + b d) x^2 + a d x - t = 0.
        for ((x0, y0), (x1, y1)) in chain.segments() {
            if x1 <= x0 {
                continue;
            }
            let b = (y1 - y0) / (x1 - x0);
            let a = y0 - b * x0;
            let qa = cf + b * df;
            let qb = a * df;
            let qc = -t;
            if qa.abs() < 1e-300 {
                if qb.abs() > 0.0 {
                    let r = -qc / qb;
                    if r > x0 && r < x1 {
                        cuts.push(r);
                    }
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    // Numerically stable pair of roots.
                    let q = -0.5 * (qb + qb.signum() * sq);
                    let roots = if q == 0.0 {
                        [0.0, 0.0]
                    } else {
                        [q / qa, qc / q]
                    };
                    for r in roots {
                        if r > x0 && r < x1 {
                            cuts.push(r);
                        }
                    }
                }
            }
        }
    }
    cuts.retain(|&x| (x_min..=x_max).contains(&x));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let mut area = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        let xm = 0.5 * (x0 + x1);
        let yu = upper.eval(xm);
        let yl = lower.eval(xm);
        let yh = h(xm);
        if yu <= yh.max(yl) {
            continue;
        }
        // Trapezoid under the upper chain.
        area += 0.5 * (upper.eval(x0) + upper.eval(x1)) * (x1 - x0);
        if yh > yl {
            area -= h_int(x0, x1);
        } else {
            area -= 0.5 * (lower.eval(x0) + lower.eval(x1)) * (x1 - x0);
        }
    }
    area.max(0.0)
}

/// `Area(word_polygon(w) ∩ {g_l >= k/xi})` where `g_l` is the product of
/// the first coordinate with the second coordinate after `|w|` steps of T.
pub fn omega_area(w: &CylinderWord, k: i64, xi: f64) -> Result<f64> {
    if xi <= 0.0 {
        return Err(FareyError::InvalidInput(format!("xi must be > 0, got {xi}")));
    }
    let (poly, m) = word_region(w)?;
    if poly.is_empty() {
        return Ok(0.0);
    }
    Ok(hyperbolic_area(&poly, (m[1][0], m[1][1]), k as f64 / xi))
}

/// The unit-region variant: `Area(T ∩ {xy >= k/xi})`.
pub fn omega_area_unit(k: i64, xi: f64) -> Result<f64> {
    if xi <= 0.0 {
        return Err(FareyError::InvalidInput(format!("xi must be > 0, got {xi}")));
    }
    Ok(hyperbolic_area(&farey_triangle(), (0, 1), k as f64 / xi))
}

/// Fixed-seed Monte Carlo oracle for the same hyperbolic areas. Samples
/// are drawn once per region; thresholds are then answered by binary
/// search over the sorted g-values of the hits.
pub struct RegionSampler {
    g_sorted: Vec<f64>,
    n: usize,
    box_area: f64,
}

impl RegionSampler {
    pub fn new(poly: &RationalPolygon, form: (i64, i64), n: usize, seed: u64) -> Self {
        let verts: Vec<(f64, f64)> = poly.vertices().iter().map(|p| p.to_f64()).collect();
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in &verts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let m = verts.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g_sorted = Vec::new();
        'outer: for _ in 0..n {
            let x = rng.gen_range(x0..x1);
            let y = rng.gen_range(y0..y1);
            for i in 0..m {
                let (ax, ay) = verts[i];
                let (bx, by) = verts[(i + 1) % m];
                if (bx - ax) * (y - ay) - (x - ax) * (by - ay) < 0.0 {
                    continue 'outer;
                }
            }
            g_sorted.push(x * (form.0 as f64 * x + form.1 as f64 * y));
        }
        g_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self {
            g_sorted,
            n,
            box_area: (x1 - x0) * (y1 - y0),
        }
    }

    /// Estimated area of `{g >= threshold}` within the region, with the
    /// binomial standard error.
    pub fn area_ge(&self, threshold: f64) -> (f64, f64) {
        let hits = self.g_sorted.len() - self.g_sorted.partition_point(|&g| g < threshold);
        let p = hits as f64 / self.n as f64;
        let est = self.box_area * p;
        let sigma = self.box_area * (p * (1.0 - p) / self.n as f64).sqrt();
        (est, sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon;

    fn tp(x: (i64, i64), y: (i64, i64)) -> TrianglePoint {
        TrianglePoint::from_i64(x, y).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&tp((1, 1), (4, 5))), 2);
        assert_eq!(kappa(&tp((1, 1), (1, 1))), 2);
        assert_eq!(kappa(&tp((1, 3), (2, 3))), 2);
    }

    #[test]
    fn apply_t_examples() {
        assert_eq!(apply_t(&tp((1, 1), (4, 5))), tp((4, 5), (3, 5)));
        assert_eq!(apply_t_inverse(&tp((4, 5), (3, 5))), tp((1, 1), (4, 5)));
        // (1,1) is a fixed point.
        assert_eq!(apply_t(&tp((1, 1), (1, 1))), tp((1, 1), (1, 1)));
        assert_eq!(apply_t_inverse(&tp((1, 1), (1, 1))), tp((1, 1), (1, 1)));
    }

    #[test]
    fn farey_conjugacy() {
        // T(q_i/Q, q_{i+1}/Q) = (q_{i+1}/Q, q_{i+2}/Q) for consecutive
        // denominators, exactly.
        for q_max in [5, 23, 100] {
            let seq: Vec<_> = crate::fraction::enumerate(q_max, crate::FareyFilter::All)
                .unwrap()
                .collect();
            for w in seq.windows(3) {
                let p = tp((w[0].denominator(), q_max), (w[1].denominator(), q_max));
                let img = apply_t(&p);
                assert_eq!(img, tp((w[1].denominator(), q_max), (w[2].denominator(), q_max)));
            }
        }
    }

    #[test]
    fn cylinder_polygons() {
        let t1 = cylinder_polygon(1).unwrap();
        let want1 = polygon(&[((0, 1), (1, 1)), ((1, 3), (2, 3)), ((1, 1), (1, 1))]);
        assert_eq!(t1.canonical(), want1.canonical());

        let t2 = cylinder_polygon(2).unwrap();
        let want2 = polygon(&[
            ((1, 3), (2, 3)),
            ((1, 2), (1, 2)),
            ((1, 1), (2, 3)),
            ((1, 1), (1, 1)),
        ]);
        assert_eq!(t2.canonical(), want2.canonical());
        assert_eq!(t2.area(), rat(1, 6));
    }

    #[test]
    fn cylinder_areas_telescope() {
        // 1/2 - sum_{K<=N} area(T_K) = 2/((N+1)(N+2))
        let mut total = Rat::zero();
        for k in 1..=50i64 {
            total += cylinder_polygon(k).unwrap().area();
        }
        assert_eq!(rat(1, 2) - total, rat(2, 51 * 52));
        for k in 2..=10i64 {
            assert_eq!(
                cylinder_polygon(k).unwrap().area(),
                rat(4, k * (k + 1) * (k + 2))
            );
        }
    }

    #[test]
    fn t_is_area_preserving_on_cylinders() {
        for k in 1..=8 {
            let cyl = cylinder_polygon(k).unwrap();
            let img = cyl.map_linear(&cylinder_matrix(k));
            assert_eq!(img.area(), cyl.area());
        }
    }

    #[test]
    fn word_polygon_examples() {
        // Length-1 word is the cylinder itself.
        for k in [1, 2, 7] {
            assert_eq!(
                word_polygon(&CylinderWord::new(vec![k]).unwrap()).unwrap(),
                cylinder_polygon(k).unwrap()
            );
        }
        // (5, 3) is infeasible since T T_5 lies in T_1.
        assert!(word_polygon(&CylinderWord::new(vec![5, 3]).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn intersection_quadrilateral() {
        // T T_3 ∩ T_2 has the four stated vertices.
        let t3_img = cylinder_polygon(3).unwrap().map_linear(&cylinder_matrix(3));
        let quad = t3_img.intersect(&cylinder_polygon(2).unwrap());
        let want = polygon(&[
            ((1, 2), (1, 2)),
            ((3, 5), (4, 5)),
            ((3, 7), (5, 7)),
            ((2, 5), (3, 5)),
        ]);
        assert_eq!(quad.canonical(), want.canonical());
        // It also equals the word polygon of (3, 2) pushed forward by T.
        let w32 = word_polygon(&CylinderWord::new(vec![3, 2]).unwrap()).unwrap();
        let pushed = forward_image(&[w32]).unwrap();
        assert_eq!(pushed.len(), 1);
        assert_eq!(pushed[0].canonical(), want.canonical());
    }

    #[test]
    fn cylinder_inclusions() {
        for k in 5..=12 {
            let img = cylinder_polygon(k).unwrap().map_linear(&cylinder_matrix(k));
            assert!(check_inclusion(&[img], &[1]).unwrap().holds, "T T_{k} ⊆ T_1");
        }
        let t3 = cylinder_polygon(3).unwrap().map_linear(&cylinder_matrix(3));
        let t4 = cylinder_polygon(4).unwrap().map_linear(&cylinder_matrix(4));
        assert!(check_inclusion(&[t3.clone(), t4], &[1, 2]).unwrap().holds);
        let t2 = cylinder_polygon(2).unwrap().map_linear(&cylinder_matrix(2));
        assert!(check_inclusion(&[t2.clone()], &[1, 2, 3, 4]).unwrap().holds);
        // T T_2 ⊆ T_1 fails with a witness.
        let res = check_inclusion(&[t2], &[1]).unwrap();
        assert!(!res.holds);
        let w = res.witness.expect("witness point");
        let p = TrianglePoint::new(w.x, w.y).unwrap();
        assert!(kappa(&p) != 1);

        // T(T T_3 ∩ T_2) ⊆ T_1 ∪ T_2 holds; with ∩ on the right it fails.
        let quad = t3.intersect(&cylinder_polygon(2).unwrap());
        let img = forward_image(&[quad]).unwrap();
        assert!(check_inclusion(&img, &[1, 2]).unwrap().holds);
    }

    #[test]
    fn hyperbolic_area_matches_closed_form() {
        // Area(T ∩ {xy >= 1/xi}) against hand-computed values.
        assert_eq!(omega_area_unit(1, 0.5).unwrap(), 0.0);
        let got = omega_area_unit(1, 4.0).unwrap();
        let want = 1.0 - (4f64.ln() + 1.0) / 4.0;
        assert!((got - want).abs() < 1e-12, "got {got} want {want}");
        // Saturation: full cylinder area for large xi.
        for k in 2..=6i64 {
            let w = CylinderWord::new(vec![k]).unwrap();
            let got = omega_area(&w, k, 1e9).unwrap();
            let want = 4.0 / (k * (k + 1) * (k + 2)) as f64;
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn monte_carlo_agrees_with_quadrature() {
        let tri = farey_triangle();
        let sampler = RegionSampler::new(&tri, (0, 1), 2_000_000, 17);
        for xi in [1.5, 3.0, 10.0] {
            let (est, sigma) = sampler.area_ge(1.0 / xi);
            let exact = omega_area_unit(1, xi).unwrap();
            assert!(
                (est - exact).abs() <= 4.0 * sigma,
                "xi={xi}: {est} vs {exact} (sigma {sigma})"
            );
        }
    }
}
