use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{Matrix, RationalMatrix};
use super::{format_rational, int, to_f64, Rational};

/// Polynomial with rational coefficients in ascending degree, kept trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("({})t", format_rational(c)),
                _ => format!("({})t^{i}", format_rational(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same real roots, each simple.
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// `p, p', -rem(p, p'), ...` down to a constant.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        let mut next = self.derivative();
        while !next.is_zero() {
            let rem = seq.last().unwrap().div_rem(&next).1.neg();
            seq.push(next);
            next = rem;
        }
        seq
    }
}

fn sign_variations(seq: &[UnivariatePolynomial], x: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Closed rational interval enclosing exactly one real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "crate::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::serde_rational")]
    pub hi: Rational,
}

impl RootInterval {
    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Disjoint isolating intervals for the distinct real roots of `p` in `[lo, hi]`,
/// in increasing order.
pub fn isolate_real_roots(
    p: &UnivariatePolynomial,
    lo: &Rational,
    hi: &Rational,
) -> Vec<RootInterval> {
    assert!(!p.is_zero(), "zero polynomial has no isolated roots");
    let mut out = Vec::new();
    if lo > hi || p.degree() == Some(0) {
        return out;
    }
    let sf = p.square_free();
    let seq = sf.sturm_sequence();
    if sf.eval(lo).is_zero() {
        out.push(RootInterval {
            lo: lo.clone(),
            hi: lo.clone(),
        });
    }
    if lo == hi {
        return out;
    }
    // Sturm count over the half-open interval (a, b] for a square-free polynomial.
    let count = |a: &Rational, b: &Rational| sign_variations(&seq, a) - sign_variations(&seq, b);
    let mut stack = vec![(lo.clone(), hi.clone(), count(lo, hi))];
    let mut found = Vec::new();
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 && !sf.eval(&a).is_zero() {
            if sf.eval(&b).is_zero() {
                found.push(RootInterval {
                    lo: b.clone(),
                    hi: b,
                });
            } else {
                found.push(RootInterval { lo: a, hi: b });
            }
            continue;
        }
        let mid = (&a + &b) / int(2);
        let left = count(&a, &mid);
        stack.push((mid.clone(), b, n - left));
        stack.push((a, mid, left));
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    out.extend(found);
    out
}

/// Bisects an isolating interval of a simple root until its width is at most `width`.
pub fn refine_root(p: &UnivariatePolynomial, iv: &RootInterval, width: &Rational) -> RootInterval {
    let sf = p.square_free();
    let (mut a, mut b) = (iv.lo.clone(), iv.hi.clone());
    if sf.eval(&a).is_zero() {
        return RootInterval {
            lo: a.clone(),
            hi: a,
        };
    }
    if sf.eval(&b).is_zero() {
        return RootInterval {
            lo: b.clone(),
            hi: b,
        };
    }
    let sa = sf.eval(&a).is_positive();
    while &b - &a > *width {
        let mid = (&a + &b) / int(2);
        let v = sf.eval(&mid);
        if v.is_zero() {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if v.is_positive() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    RootInterval { lo: a, hi: b }
}

/// `det(Id + tN)` as a polynomial in `t`, by exact evaluation at `t = 0..=k`
/// and Lagrange interpolation.
/// `det(x Id − a)` by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &RationalMatrix) -> UnivariatePolynomial {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = a * &next;
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + am.get(i, i));
        coeffs[n - k] = -trace / int(k as i64);
        m = next;
    }
    UnivariatePolynomial::new(coeffs)
}

pub fn det_polynomial(n: &RationalMatrix) -> UnivariatePolynomial {
    let k = n.rows();
    assert_eq!(k, n.cols(), "square matrix required");
    let xs: Vec<Rational> = (0..=k as i64).map(int).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|t| (&Matrix::identity(k) + &n.scale(t)).det())
        .collect();
    let mut result = UnivariatePolynomial::zero();
    for (j, (xj, yj)) in xs.iter().zip(&ys).enumerate() {
        if yj.is_zero() {
            continue;
        }
        let mut basis = UnivariatePolynomial::constant(Rational::one());
        let mut denom = Rational::one();
        for (m, xm) in xs.iter().enumerate() {
            if m != j {
                basis = basis.mul(&UnivariatePolynomial::new(vec![-xm, Rational::one()]));
                denom *= xj - xm;
            }
        }
        result = result.add(&basis.scale(&(yj / denom)));
    }
    result
}
