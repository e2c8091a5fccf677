//! Elementary number theory on `Z_n`: totients, Moebius values, divisor
//! lists, unit groups, and the cycle structure of multiplicative and affine
//! maps `x -> a*x + b (mod n)`.

use std::fmt;

/// Greatest common divisor.
pub fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}

/// Euler's totient: the number of units modulo `n`.
///
/// # Panics
/// Panics if `n == 0`.
pub fn euler_phi(n: usize) -> usize {
    assert!(n >= 1, "totient is only defined for positive moduli");
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            result = result / p * (p - 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

/// Distinct prime factors of `n` in increasing order.
pub fn prime_factors(n: usize) -> Vec<usize> {
    assert!(n >= 1, "factorization is only defined for positive integers");
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            factors.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    factors
}

/// Number of distinct prime factors.
pub fn omega(n: usize) -> usize {
    prime_factors(n).len()
}

/// Moebius function: 0 if `n` has a squared prime factor, otherwise
/// (-1)^(number of prime factors).
pub fn moebius(n: usize) -> i32 {
    assert!(n >= 1, "moebius is only defined for positive integers");
    let mut m = n;
    let mut p = 2;
    let mut factor_count = 0;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            factor_count += 1;
        }
        p += 1;
    }
    if m > 1 {
        factor_count += 1;
    }
    if factor_count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    assert!(n >= 1, "divisor lists are only defined for positive integers");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Primality by trial division; intended for desk-scale inputs.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// True when `a` represents a unit modulo `n`.
///
/// Inputs are reduced mod `n` first, so any representative is accepted; for
/// `n = 1` the single residue 0 is the unit.
pub fn is_unit(n: usize, a: usize) -> bool {
    assert!(n >= 1, "unit test requires a positive modulus");
    gcd(a % n, n) == 1
}

/// The units of `Z_n` in increasing order. For `n = 1` this is `[0]`, the
/// lone residue, which acts as the identity.
pub fn units(n: usize) -> Vec<usize> {
    assert!(n >= 1, "unit group requires a positive modulus");
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&a| gcd(a, n) == 1).collect()
}

/// Inverse of `a` modulo `n`, when `a` is a unit.
pub fn mod_inverse(n: usize, a: usize) -> Option<usize> {
    assert!(n >= 1, "modular inverse requires a positive modulus");
    if n == 1 {
        return Some(0);
    }
    let a = a % n;
    // Extended Euclid on (a, n), tracking only the coefficient of a.
    let (mut r0, mut r1) = (a as i64, n as i64);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(n as i64) as usize)
}

/// The map whose orbits an [`OrbitDecomposition`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitMap {
    Mult { a: usize },
    Affine { a: usize, b: usize },
}

impl OrbitMap {
    fn apply(&self, n: usize, x: usize) -> usize {
        match *self {
            OrbitMap::Mult { a } => (a * x) % n,
            OrbitMap::Affine { a, b } => (a * x + b) % n,
        }
    }
}

impl fmt::Display for OrbitMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OrbitMap::Mult { a } => write!(f, "x -> {a}*x"),
            OrbitMap::Affine { a, b } => write!(f, "x -> {a}*x + {b}"),
        }
    }
}

/// Partition of `Z_n` into the cycles of a bijection.
///
/// Each cycle is listed in iteration order starting from its smallest
/// element, and cycles are sorted by that smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    modulus: usize,
    map: OrbitMap,
    orbits: Vec<Vec<usize>>,
}

impl OrbitDecomposition {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn map(&self) -> OrbitMap {
        self.map
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

fn cycle_decomposition(n: usize, map: OrbitMap) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    // Scanning start points in increasing order guarantees each cycle is
    // first entered at its minimum element.
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        loop {
            seen[x] = true;
            cycle.push(x);
            x = map.apply(n, x);
            if x == start {
                break;
            }
        }
        orbits.push(cycle);
    }
    orbits
}

/// Orbits of `x -> a*x (mod n)` on all of `Z_n`.
///
/// # Panics
/// Panics if `a` is not a unit modulo `n` (the map must be a bijection).
pub fn mult_orbits(n: usize, a: usize) -> OrbitDecomposition {
    assert!(is_unit(n, a), "{a} is not a unit modulo {n}");
    let map = OrbitMap::Mult { a: a % n };
    OrbitDecomposition {
        modulus: n,
        map,
        orbits: cycle_decomposition(n, map),
    }
}

/// Orbits of `x -> a*x + b (mod n)` on all of `Z_n`.
///
/// # Panics
/// Panics if `a` is not a unit modulo `n`.
pub fn affine_orbits(n: usize, a: usize, b: usize) -> OrbitDecomposition {
    assert!(is_unit(n, a), "{a} is not a unit modulo {n}");
    let map = OrbitMap::Affine {
        a: a % n,
        b: b % n,
    };
    OrbitDecomposition {
        modulus: n,
        map,
        orbits: cycle_decomposition(n, map),
    }
}

/// True when the subset generates `Z_n` as a group, i.e. when the gcd of its
/// elements together with `n` is 1.
pub fn subset_generates(n: usize, elements: &[usize]) -> bool {
    assert!(n >= 1, "generation test requires a positive modulus");
    let mut g = n;
    for &e in elements {
        g = gcd(g, e % n);
    }
    g == 1
}
