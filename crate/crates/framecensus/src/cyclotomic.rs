//! Exact arithmetic with integer combinations of n-th roots of unity.
//!
//! A [`RootSum`] stores the multiplicities of the powers of `w = exp(2*pi*i/n)`
//! as a dense length-`n` vector of big integers. Sums multiply by cyclic
//! convolution (the group ring `Z[x]/(x^n - 1)`), and two sums are equal as
//! complex numbers exactly when their coefficient difference is divisible by
//! the n-th cyclotomic polynomial. The cyclotomic polynomial is monic, so that
//! divisibility test runs entirely over the integers.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Dense integer polynomial; index `i` holds the coefficient of `x^i`.
///
/// Kept normalized: the leading coefficient is nonzero and the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// Builds a polynomial from low-to-high coefficients, trimming leading zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        assert!(n >= 1);
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Quotient and remainder under division by a monic polynomial.
    ///
    /// Monic divisors keep the computation in `Z`, so the result is exact.
    ///
    /// # Panics
    /// Panics if the divisor is zero or not monic.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor
            .degree()
            .expect("division by the zero polynomial");
        assert!(divisor.is_monic(), "divisor must be monic");
        let Some(deg) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if deg < d {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); deg - d + 1];
        for i in (d..=deg).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = std::mem::replace(&mut rem[i], BigInt::zero());
            for j in 0..d {
                let delta = &q * &divisor.coeffs[j];
                rem[i - d + j] -= delta;
            }
            quot[i - d] = q;
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Exact quotient by a monic divisor.
    ///
    /// # Panics
    /// Panics if the division leaves a remainder.
    pub fn div_exact_monic(&self, divisor: &Self) -> Self {
        let (quot, rem) = self.div_rem_monic(divisor);
        assert!(rem.is_zero(), "division was not exact");
        quot
    }

    /// Remainder under division by a monic divisor.
    pub fn rem_monic(&self, divisor: &Self) -> Self {
        self.div_rem_monic(divisor).1
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

static CYCLOTOMIC_CACHE: OnceLock<Mutex<HashMap<usize, IntPolynomial>>> = OnceLock::new();

/// The n-th cyclotomic polynomial, computed as `(x^n - 1)` divided by the
/// cyclotomic polynomials of the proper divisors of `n`.
///
/// Results are cached process-wide; concurrent fills recompute the same value
/// and are therefore harmless.
///
/// # Panics
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: usize) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic polynomials are indexed by positive integers");
    let cache = CYCLOTOMIC_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut quotient = IntPolynomial::x_pow_minus_one(n);
    for d in crate::numtheory::divisors(n) {
        if d < n {
            quotient = quotient.div_exact_monic(&cyclotomic_polynomial(d));
        }
    }
    cache
        .lock()
        .unwrap()
        .insert(n, quotient.clone());
    quotient
}

/// An integer linear combination of the n-th roots of unity.
///
/// `coeffs[k]` is the multiplicity of `w^k` where `w = exp(2*pi*i/n)`. The
/// representation is not unique (e.g. `1 + w^4 = 0` for `n = 8`), so value
/// equality goes through [`RootSum::eq_value`] / [`RootSum::is_zero`] rather
/// than coefficient comparison.
#[derive(Clone, Debug)]
pub struct RootSum {
    order: usize,
    coeffs: Vec<BigInt>,
}

impl RootSum {
    /// The zero sum of the given order.
    ///
    /// # Panics
    /// Panics if `order == 0`.
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "root sums require a positive order");
        RootSum {
            order,
            coeffs: vec![BigInt::zero(); order],
        }
    }

    /// Sum of `w^e` over the given exponent multiset; exponents are reduced
    /// into `0..order`, negatives included.
    pub fn from_exponents<I>(order: usize, exponents: I) -> Self
    where
        I: IntoIterator<Item = i64>,
    {
        let mut sum = Self::zero(order);
        let n = order as i64;
        for e in exponents {
            sum.coeffs[e.rem_euclid(n) as usize] += 1;
        }
        sum
    }

    /// The single root `w^k`.
    pub fn root(order: usize, k: usize) -> Self {
        let mut sum = Self::zero(order);
        sum.coeffs[k % order] += 1;
        sum
    }

    /// The ordinary integer `value` as a multiple of `w^0`.
    pub fn integer(order: usize, value: i64) -> Self {
        let mut sum = Self::zero(order);
        sum.coeffs[0] = BigInt::from(value);
        sum
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k % self.order]
    }

    /// Complex conjugate: reverses indices, since conj(w^k) = w^(n-k).
    pub fn conjugate(&self) -> Self {
        let n = self.order;
        let mut coeffs = vec![BigInt::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(n - k) % n] = c.clone();
        }
        RootSum {
            order: n,
            coeffs,
        }
    }

    fn coeff_polynomial(&self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.clone())
    }

    /// Canonical residue of the coefficient polynomial modulo the cyclotomic
    /// polynomial of the order. Two sums are equal as complex numbers exactly
    /// when their canonical residues coincide.
    pub fn canonical_residue(&self) -> IntPolynomial {
        self.coeff_polynomial()
            .rem_monic(&cyclotomic_polynomial(self.order))
    }

    /// Exact test for equality with 0 as a complex number.
    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(Zero::is_zero) {
            return true;
        }
        self.canonical_residue().is_zero()
    }

    /// Exact test for equality with another sum as complex numbers.
    ///
    /// # Panics
    /// Panics if the orders differ.
    pub fn eq_value(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Floating-point evaluation `(re, im)`; a screen, never the arbiter.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().expect("coefficient out of f64 range");
            let theta = TAU * k as f64 / n;
            re += c * theta.cos();
            im += c * theta.sin();
        }
        (re, im)
    }

    /// Magnitude of the floating-point evaluation.
    pub fn abs_approx(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    fn assert_same_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "root sums of different orders cannot be combined"
        );
    }
}

impl Add for &RootSum {
    type Output = RootSum;

    fn add(self, rhs: &RootSum) -> RootSum {
        self.assert_same_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        RootSum {
            order: self.order,
            coeffs,
        }
    }
}

impl Sub for &RootSum {
    type Output = RootSum;

    fn sub(self, rhs: &RootSum) -> RootSum {
        self.assert_same_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        RootSum {
            order: self.order,
            coeffs,
        }
    }
}

impl Neg for &RootSum {
    type Output = RootSum;

    fn neg(self) -> RootSum {
        RootSum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RootSum {
    type Output = RootSum;

    /// Cyclic convolution: exponents add modulo the order.
    fn mul(self, rhs: &RootSum) -> RootSum {
        self.assert_same_order(rhs);
        let n = self.order;
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[(i + j) % n] += a * b;
            }
        }
        RootSum {
            order: n,
            coeffs,
        }
    }
}
