//! Exact rational convex polygons: half-plane clipping, shoelace areas,
//! linear images. The geometry engine behind the cylinder and word-region
//! computations; floating point never enters here.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RationalPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        Self { x, y }
    }

    pub fn from_i64(x: (i64, i64), y: (i64, i64)) -> Self {
        Self::new(rat(x.0, x.1), rat(y.0, y.1))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.x), rat_to_f64(&self.y))
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap()
}

/// A closed half-plane `{ (x, y) : a*x + b*y <= c }`.
#[derive(Debug, Clone)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HalfPlane {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        Self { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        Self::new(rat_int(a), rat_int(b), rat_int(c))
    }

    fn eval(&self, p: &RationalPoint) -> Rat {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }
}

/// Convex polygon with exact rational vertices in counterclockwise order.
/// Degenerate results of clipping (fewer than three distinct vertices, or
/// zero area) collapse to the empty polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolygon {
    vertices: Vec<RationalPoint>,
}

impl RationalPolygon {
    pub fn empty() -> Self {
        Self { vertices: vec![] }
    }

    /// Builds from counterclockwise vertices; collinear and repeated
    /// vertices are removed.
    pub fn from_vertices(vertices: Vec<RationalPoint>) -> Self {
        Self { vertices }.normalized()
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Twice the signed shoelace area (positive for CCW).
    fn double_area(&self) -> Rat {
        let n = self.vertices.len();
        let mut acc = Rat::zero();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            acc += &p.x * &q.y - &q.x * &p.y;
        }
        acc
    }

    pub fn area(&self) -> Rat {
        self.double_area() / rat_int(2)
    }

    fn normalized(mut self) -> Self {
        // Drop duplicates.
        self.vertices.dedup();
        while self.vertices.len() > 1 && self.vertices.first() == self.vertices.last() {
            self.vertices.pop();
        }
        // Drop collinear vertices.
        let mut out: Vec<RationalPoint> = Vec::with_capacity(self.vertices.len());
        let n = self.vertices.len();
        if n >= 3 {
            for i in 0..n {
                let prev = &self.vertices[(i + n - 1) % n];
                let cur = &self.vertices[i];
                let next = &self.vertices[(i + 1) % n];
                let cross = (&cur.x - &prev.x) * (&next.y - &prev.y)
                    - (&next.x - &prev.x) * (&cur.y - &prev.y);
                if !cross.is_zero() {
                    out.push(cur.clone());
                }
            }
        }
        let poly = Self { vertices: out };
        if poly.vertices.len() < 3 || !poly.double_area().is_positive() {
            Self::empty()
        } else {
            poly
        }
    }

    /// Sutherland-Hodgman clip against a single closed half-plane.
    pub fn clip(&self, hp: &HalfPlane) -> Self {
        if self.is_empty() {
            return Self::empty();
        }
        let n = self.vertices.len();
        let side: Vec<Rat> = self.vertices.iter().map(|p| hp.eval(p)).collect();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (&self.vertices[i], &self.vertices[j]);
            let (sp, sq) = (&side[i], &side[j]);
            if !sp.is_positive() {
                out.push(p.clone());
            }
            if (sp.is_positive() && sq.is_negative()) || (sp.is_negative() && sq.is_positive()) {
                let t = sp / (sp - sq);
                out.push(RationalPoint::new(
                    &p.x + &t * (&q.x - &p.x),
                    &p.y + &t * (&q.y - &p.y),
                ));
            }
        }
        Self { vertices: out }.normalized()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut acc = self.clone();
        let n = other.vertices.len();
        for i in 0..n {
            if acc.is_empty() {
                break;
            }
            let p = &other.vertices[i];
            let q = &other.vertices[(i + 1) % n];
            // Interior of a CCW polygon lies left of each directed edge:
            // (q - p) x (r - p) >= 0, rewritten as a*x + b*y <= c.
            let a = &q.y - &p.y;
            let b = &p.x - &q.x;
            let c = &a * &p.x + &b * &p.y;
            acc = acc.clip(&HalfPlane::new(a, b, c));
        }
        acc
    }

    /// Image under the linear map `(x, y) -> (m00 x + m01 y, m10 x + m11 y)`.
    /// Orientation is preserved for positive determinants.
    pub fn map_linear(&self, m: &[[i64; 2]; 2]) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|p| {
                RationalPoint::new(
                    rat_int(m[0][0]) * &p.x + rat_int(m[0][1]) * &p.y,
                    rat_int(m[1][0]) * &p.x + rat_int(m[1][1]) * &p.y,
                )
            })
            .collect();
        Self { vertices }.normalized()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let cross = (&b.x - &a.x) * (&p.y - &a.y) - (&p.x - &a.x) * (&b.y - &a.y);
            if cross.is_negative() {
                return false;
            }
        }
        true
    }

    /// Vertex average; interior for nonempty convex polygons.
    pub fn centroid(&self) -> Option<RationalPoint> {
        if self.is_empty() {
            return None;
        }
        let n = rat_int(self.vertices.len() as i64);
        let mut x = Rat::zero();
        let mut y = Rat::zero();
        for p in &self.vertices {
            x += &p.x;
            y += &p.y;
        }
        Some(RationalPoint::new(x / &n, y / n))
    }

    /// Rotates the vertex list so the lexicographically smallest vertex
    /// comes first; used for exact polygon comparisons.
    pub fn canonical(&self) -> Self {
        if self.is_empty() {
            return Self::empty();
        }
        let pos = self
            .vertices
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| (&p.x, &p.y).cmp(&(&q.x, &q.y)))
            .map(|(i, _)| i)
            .unwrap();
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(pos);
        Self { vertices }
    }
}

/// Convenience builder for polygons with i64-pair vertex coordinates.
pub fn polygon(vertices: &[((i64, i64), (i64, i64))]) -> RationalPolygon {
    RationalPolygon::from_vertices(
        vertices
            .iter()
            .map(|&(x, y)| RationalPoint::from_i64(x, y))
            .collect(),
    )
}

pub fn one() -> Rat {
    Rat::one()
}
