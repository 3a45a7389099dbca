use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::matrix::{Matrix, RationalMatrix};
use super::Rational;

/// `value + derivative·ε` with `ε² = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualRational {
    pub value: Rational,
    pub derivative: Rational,
}

impl DualRational {
    pub fn new(value: Rational, derivative: Rational) -> Self {
        Self { value, derivative }
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            value,
            derivative: Rational::zero(),
        }
    }

    /// The independent variable evaluated at `value`.
    pub fn variable(value: Rational) -> Self {
        Self {
            value,
            derivative: Rational::one(),
        }
    }
}

impl Add for DualRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            derivative: self.derivative + rhs.derivative,
        }
    }
}

impl Sub for DualRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            value: self.value - rhs.value,
            derivative: self.derivative - rhs.derivative,
        }
    }
}

impl Mul for DualRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let derivative = &self.value * &rhs.derivative + &self.derivative * &rhs.value;
        Self {
            value: self.value * rhs.value,
            derivative,
        }
    }
}

impl Neg for DualRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            derivative: -self.derivative,
        }
    }
}

impl Zero for DualRational {
    fn zero() -> Self {
        Self::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.derivative.is_zero()
    }
}

impl One for DualRational {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

pub type DualMatrix = Matrix<DualRational>;

impl DualMatrix {
    pub fn from_parts(value: &RationalMatrix, derivative: &RationalMatrix) -> Self {
        assert_eq!(
            (value.rows(), value.cols()),
            (derivative.rows(), derivative.cols())
        );
        Matrix::from_fn(value.rows(), value.cols(), |i, j| {
            DualRational::new(value.get(i, j).clone(), derivative.get(i, j).clone())
        })
    }

    pub fn value(&self) -> RationalMatrix {
        self.map(|x| x.value.clone())
    }

    pub fn derivative(&self) -> RationalMatrix {
        self.map(|x| x.derivative.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn product_rule() {
        // f(t) = t^3 at t = 2/3 has derivative 3t^2 = 4/3.
        let t = DualRational::variable(rat(2, 3));
        let f = t.clone() * t.clone() * t;
        assert_eq!(f.value, rat(8, 27));
        assert_eq!(f.derivative, rat(4, 3));
    }

    #[test]
    fn matrix_product_rule() {
        // A(t) = [[1, t], [0, 1]], A(t)^2 = [[1, 2t], [0, 1]].
        let a = DualMatrix::from_parts(
            &Matrix::from_rows(vec![vec![int(1), int(5)], vec![int(0), int(1)]]),
            &Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]),
        );
        let sq = &a * &a;
        assert_eq!(*sq.value().get(0, 1), int(10));
        assert_eq!(*sq.derivative().get(0, 1), int(2));
    }
}
