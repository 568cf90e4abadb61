use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational, to_f64, Rational};

/// A point of the plane with exact rational coordinates.
///
/// `BigRational` keeps itself reduced, so structural equality is equality of
/// points. The derived order is lexicographic on `(x, y)`; it is used for
/// every deterministic tie-break in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coord {
    pub x: Rational,
    pub y: Rational,
}

// Hashes the reduced parts directly; the rational type's own hash walks a
// continued fraction.
impl std::hash::Hash for Coord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.x.numer().hash(state);
        self.x.denom().hash(state);
        self.y.numer().hash(state);
        self.y.denom().hash(state);
    }
}

impl Coord {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn dot(&self, other: &Coord) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Coord) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn dist2(&self, other: &Coord) -> Rational {
        // One reduction at the end instead of one per operation.
        let diff = |p: &Rational, q: &Rational| (p.numer() * q.denom() - q.numer() * p.denom(), p.denom() * q.denom());
        let (nx, dx) = diff(&self.x, &other.x);
        let (ny, dy) = diff(&self.y, &other.y);
        let (dx2, dy2) = (&dx * &dx, &dy * &dy);
        Rational::new(&nx * &nx * &dy2 + &ny * &ny * &dx2, dx2 * dy2)
    }

    pub fn scale(&self, k: &Rational) -> Coord {
        Coord::new(&self.x * k, &self.y * k)
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Coord, t: &Rational) -> Coord {
        self + &(other - self).scale(t)
    }

    pub fn midpoint(&self, other: &Coord) -> Coord {
        let two = int(2);
        Coord::new((&self.x + &other.x) / &two, (&self.y + &other.y) / two)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Sub<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn sub(self, rhs: &'a Coord) -> Coord {
        Coord::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl<'a> Add<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn add(self, rhs: &'a Coord) -> Coord {
        Coord::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl<'a> Mul<&'a Rational> for &'a Coord {
    type Output = Coord;
    fn mul(self, rhs: &'a Rational) -> Coord {
        self.scale(rhs)
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.x), format_rational(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = parse_rational(&x).map_err(serde::de::Error::custom)?;
        let y = parse_rational(&y).map_err(serde::de::Error::custom)?;
        Ok(Coord::new(x, y))
    }
}

/// Sign of the turn `a -> b -> c`: `Greater` is counterclockwise.
pub fn orient(a: &Coord, b: &Coord, c: &Coord) -> Ordering {
    // Unreduced fractions: the sign needs no gcd.
    let diff = |p: &Rational, q: &Rational| {
        (p.numer() * q.denom() - q.numer() * p.denom(), p.denom() * q.denom())
    };
    let (ux, uxd) = diff(&b.x, &a.x);
    let (uy, uyd) = diff(&b.y, &a.y);
    let (vx, vxd) = diff(&c.x, &a.x);
    let (vy, vyd) = diff(&c.y, &a.y);
    let lhs = ux * vy * (&vxd * &uyd);
    let rhs = uy * vx * (uxd * vyd);
    lhs.cmp(&rhs)
}

pub fn sign(v: &Rational) -> Ordering {
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Twice the signed area of a closed ring.
pub fn signed_area2(ring: &[Coord]) -> Rational {
    let n = ring.len();
    let mut acc = Rational::zero();
    for i in 0..n {
        acc += ring[i].cross(&ring[(i + 1) % n]);
    }
    acc
}
