//! Exact arithmetic in `ℚ(√5)` and quaternions over it.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::exact::{int, rat, to_f64, Rational};

/// `a + b√5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt5 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// The golden ratio `(1 + √5)/2`.
    pub fn phi() -> Self {
        Self::new(rat(1, 2), rat(1, 2))
    }

    /// `1/φ = φ − 1`.
    pub fn phi_inv() -> Self {
        Self::new(rat(-1, 2), rat(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn halve(&self) -> Self {
        Self::new(&self.a / int(2), &self.b / int(2))
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: the larger of a² and 5b² wins.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * int(5);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * 5f64.sqrt()
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Ord for QSqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl PartialOrd for QSqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for QSqrt5 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for QSqrt5 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for QSqrt5 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.a * &rhs.a + &self.b * &rhs.b * int(5);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Self::new(a, b)
    }
}

impl Neg for QSqrt5 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

/// `w + xi + yj + zk`, stored as `[w, x, y, z]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quaternion(pub [QSqrt5; 4]);

impl Quaternion {
    pub fn real(&self) -> &QSqrt5 {
        &self.0[0]
    }

    pub fn conj(&self) -> Self {
        let [w, x, y, z] = self.0.clone();
        Self([w, -x, -y, -z])
    }

    /// Euclidean inner product in `R⁴`.
    pub fn dot(&self, other: &Self) -> QSqrt5 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(QSqrt5::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let [a1, b1, c1, d1] = self.0.clone();
        let [a2, b2, c2, d2] = other.0.clone();
        let m = |x: &QSqrt5, y: &QSqrt5| x.clone() * y.clone();
        Self([
            m(&a1, &a2) - m(&b1, &b2) - m(&c1, &c2) - m(&d1, &d2),
            m(&a1, &b2) + m(&b1, &a2) + m(&c1, &d2) - m(&d1, &c2),
            m(&a1, &c2) - m(&b1, &d2) + m(&c1, &a2) + m(&d1, &b2),
            m(&a1, &d2) + m(&b1, &c2) - m(&c1, &b2) + m(&d1, &a2),
        ])
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.0[0].to_f64(),
            self.0[1].to_f64(),
            self.0[2].to_f64(),
            self.0[3].to_f64(),
        ]
    }
}
