//! Weierstrass curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with
//! integer coefficients, the exact group law over Q, and the completed-square
//! short model used by the descent code.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{exact_sqrt, factor_with_budget};
use crate::error::{Error, Result};
use crate::poly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(BigRational, BigRational),
}

impl Point {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        Point::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub a: [BigInt; 5], // a1, a2, a3, a4, a6
    disc: BigInt,
}

/// y^2 = x^3 + a x^2 + b x + c obtained from a long model by completing the
/// square and scaling (x, y) -> (4x, 4(2y + a1 x + a3)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortModel {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl ShortModel {
    /// The cubic x^3 + a x^2 + b x + c.
    pub fn cubic(&self) -> QPoly {
        QPoly::from_int_coeffs(&[self.c.clone(), self.b.clone(), self.a.clone(), BigInt::one()])
    }
}

impl Curve {
    pub fn new(a: [BigInt; 5]) -> Result<Self> {
        let disc = discriminant_of(&a);
        if disc.is_zero() {
            return Err(Error::SingularModel);
        }
        let curve = Curve { a, disc };
        // Structural identities tying the invariants together; a failure here
        // is an arithmetic bug, not bad input.
        let (b2, b4, b6, b8) = curve.b_invariants();
        debug_assert_eq!(BigInt::from(4) * &b8, &b2 * &b6 - &b4 * &b4);
        debug_assert_eq!(
            BigInt::from(1728) * &curve.disc,
            curve.c4().pow(3) - curve.c6().pow(2)
        );
        Ok(curve)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Curve::new([
            BigInt::from(a[0]),
            BigInt::from(a[1]),
            BigInt::from(a[2]),
            BigInt::from(a[3]),
            BigInt::from(a[4]),
        ])
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// b2, b4, b6, b8.
    pub fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        b_invariants_of(&self.a)
    }

    pub fn c4(&self) -> BigInt {
        let (b2, b4, _, _) = self.b_invariants();
        &b2 * &b2 - BigInt::from(24) * b4
    }

    pub fn c6(&self) -> BigInt {
        let (b2, b4, b6, _) = self.b_invariants();
        -(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * b4 - BigInt::from(216) * b6
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let [a1, a2, a3, a4, a6] = &self.a;
                let lhs = y * y + rat(a1) * x * y + rat(a3) * y;
                let rhs = x * x * x + rat(a2) * x * x + rat(a4) * x + rat(a6);
                lhs == rhs
            }
        }
    }

    pub fn require_on_curve(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let [a1, _, a3, _, _] = &self.a;
                let ny = -y - rat(a1) * x - rat(a3);
                Point::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let [a1, a2, a3, a4, a6] = &self.a;
        let (x1, y1) = match p {
            Point::Infinity => return q.clone(),
            Point::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match q {
            Point::Infinity => return p.clone(),
            Point::Affine(x, y) => (x, y),
        };
        let (lambda, nu) = if x1 == x2 {
            // q = -p exactly when y2 = -y1 - a1 x1 - a3
            let ny1 = -y1 - rat(a1) * x1 - rat(a3);
            if *y2 == ny1 {
                return Point::Infinity;
            }
            debug_assert_eq!(y1, y2);
            let denom = BigRational::from_integer(BigInt::from(2)) * y1 + rat(a1) * x1 + rat(a3);
            let num_l = BigRational::from_integer(BigInt::from(3)) * x1 * x1
                + BigRational::from_integer(BigInt::from(2)) * rat(a2) * x1
                + rat(a4)
                - rat(a1) * y1;
            let num_n = -(x1 * x1 * x1)
                + rat(a4) * x1
                + BigRational::from_integer(BigInt::from(2)) * rat(a6)
                - rat(a3) * y1;
            (num_l / denom.clone(), num_n / denom)
        } else {
            let denom = x2 - x1;
            let lambda = (y2 - y1) / denom.clone();
            let nu = (y1 * x2 - y2 * x1) / denom;
            (lambda, nu)
        };
        let x3 = &lambda * &lambda + rat(a1) * &lambda - rat(a2) - x1 - x2;
        let y3 = -(&lambda + rat(a1)) * &x3 - &nu - rat(a3);
        Point::Affine(x3, y3)
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    /// n * p by double-and-add; n = 0 gives the point at infinity.
    pub fn mul_scalar(&self, n: u64, p: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = p.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    pub fn short_model(&self) -> ShortModel {
        let (b2, b4, b6, _) = self.b_invariants();
        ShortModel {
            a: b2,
            b: BigInt::from(8) * b4,
            c: BigInt::from(16) * b6,
        }
    }

    /// Image of an affine point on the short model: (4x, 4(2y + a1 x + a3)).
    pub fn to_short_point(&self, p: &Point) -> Option<(BigRational, BigRational)> {
        match p {
            Point::Infinity => None,
            Point::Affine(x, y) => {
                let [a1, _, a3, _, _] = &self.a;
                let four = BigRational::from_integer(BigInt::from(4));
                let two = BigRational::from_integer(BigInt::from(2));
                let xs = &four * x;
                let ys = four * (two * y + rat(a1) * x + rat(a3));
                Some((xs, ys))
            }
        }
    }

    /// Odd primes of bad reduction together with 2, sorted ascending.
    pub fn rational_bad_set(&self, factor_bound: u64) -> Result<Vec<BigUint>> {
        let mag = self.disc.magnitude().clone();
        let factors = factor_with_budget(&mag, factor_bound)?;
        let mut out: Vec<BigUint> = vec![BigUint::from(2u32)];
        for (p, _) in factors {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }
}

fn rat(i: &BigInt) -> BigRational {
    BigRational::from_integer(i.clone())
}

fn b_invariants_of(a: &[BigInt; 5]) -> (BigInt, BigInt, BigInt, BigInt) {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + BigInt::from(4) * a2;
    let b4 = BigInt::from(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + BigInt::from(4) * a6;
    let b8 = a1 * a1 * a6 + BigInt::from(4) * a2 * a6 - a1 * a3 * a4 + a2 * (a3 * a3)
        - a4 * a4;
    (b2, b4, b6, b8)
}

fn discriminant_of(a: &[BigInt; 5]) -> BigInt {
    let (b2, b4, b6, b8) = b_invariants_of(a);
    -(&b2 * &b2) * &b8 - BigInt::from(8) * (&b4 * &b4 * &b4) - BigInt::from(27) * (&b6 * &b6)
        + BigInt::from(9) * &b2 * &b4 * &b6
}

/// Writes an affine rational point as (A/B^2, C/B^3) with B >= 1 and
/// gcd(B, AC) = 1. On an integral model the x-denominator of a rational
/// point is always a perfect square and the y-denominator its cube.
pub fn decompose(p: &Point) -> Result<(BigInt, BigInt, BigInt)> {
    let (x, y) = match p {
        Point::Infinity => {
            return Err(Error::Precondition(
                "cannot decompose the point at infinity".into(),
            ))
        }
        Point::Affine(x, y) => (x, y),
    };
    let dx = x.denom().magnitude();
    let b = exact_sqrt(dx).ok_or_else(|| {
        Error::Verification(format!(
            "x-denominator {} is not a perfect square; point not on an integral model",
            dx
        ))
    })?;
    let b = BigInt::from(b);
    let b3 = &b * &b * &b;
    if y.denom().magnitude() != b3.magnitude() {
        return Err(Error::Verification(format!(
            "y-denominator {} is not the cube of {}",
            y.denom(),
            b
        )));
    }
    // signs: denominators of reduced BigRational are positive already
    Ok((x.numer().clone(), b, y.numer().clone()))
}
