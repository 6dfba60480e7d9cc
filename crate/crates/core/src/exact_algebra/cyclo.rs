//! Cyclotomic polynomials and arithmetic in Q(zeta_n) for squarefree odd n.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use super::field::{Field, Rational};
use super::poly::Poly;
use super::AlgebraError;

/// True for 1 and for squarefree products of odd primes.
pub fn valid_conductor(n: u64) -> bool {
    if n == 0 || n % 2 == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 3;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 2;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn cache() -> &'static Mutex<HashMap<u64, Poly<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Poly<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, by dividing x^n - 1 by the lower Phi_d.
pub fn cyclotomic(n: u64) -> Result<Poly<Rational>, AlgebraError> {
    if !valid_conductor(n) {
        return Err(AlgebraError::UnsupportedConductor(n));
    }
    Ok(phi(n))
}

fn phi(n: u64) -> Poly<Rational> {
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p =
        Poly::<Rational>::monomial(<Rational as Field>::one(), n as usize).sub(&Poly::one());
    for d in divisors(n) {
        if d < n {
            p = p.exact_div(&phi(d)).expect("Phi_d divides x^n - 1");
        }
    }
    cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Euler's totient, the degree of Phi_n.
pub fn totient(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// Element of Q(zeta_n): a polynomial in zeta of degree < phi(n).
/// Conductor 1 is plain Q; mixed conductors are lifted to their lcm.
#[derive(Clone)]
pub struct Cyclo {
    n: u64,
    c: Poly<Rational>,
}

impl Cyclo {
    pub fn new(n: u64, c: Poly<Rational>) -> Result<Self, AlgebraError> {
        let m = cyclotomic(n)?;
        Ok(Cyclo { n, c: c.rem(&m) })
    }

    pub fn rational(q: Rational) -> Self {
        Cyclo {
            n: 1,
            c: Poly::constant(q),
        }
    }

    /// The distinguished primitive n-th root of unity.
    pub fn zeta(n: u64) -> Result<Self, AlgebraError> {
        Self::new(n, Poly::x())
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &Poly<Rational> {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.c.is_constant()
    }

    /// Canonical embedding Q(zeta_n) -> Q(zeta_m), zeta_n -> zeta_m^(m/n).
    pub fn lift(&self, m: u64) -> Result<Self, AlgebraError> {
        if m % self.n != 0 {
            return Err(AlgebraError::UnsupportedConductor(m));
        }
        if m == self.n {
            return Ok(self.clone());
        }
        Self::new(m, self.c.inflate((m / self.n) as usize))
    }

    fn common(&self, o: &Self) -> (Poly<Rational>, Poly<Rational>, u64) {
        let m = self.n.lcm(&o.n);
        let a = self.lift(m).expect("lcm of conductors");
        let b = o.lift(m).expect("lcm of conductors");
        (a.c, b.c, m)
    }

    /// Galois action zeta -> zeta^k for k coprime to the conductor.
    pub fn galois(&self, k: u64) -> Self {
        let m = phi(self.n);
        let mut acc = Poly::zero();
        for (i, a) in self.c.coeffs().iter().enumerate() {
            let e = (i as u64 * k) % self.n;
            acc = acc.add(&Poly::monomial(a.clone(), e as usize));
        }
        Cyclo {
            n: self.n,
            c: acc.rem(&m),
        }
    }
}

/// Inverse modulo Phi_n by the extended Euclidean algorithm.
pub fn cyclo_inverse(a: &Cyclo) -> Result<Cyclo, AlgebraError> {
    if a.c.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let m = phi(a.n);
    let (g, s, _) = a.c.ext_gcd(&m);
    debug_assert!(g == Poly::one());
    Ok(Cyclo {
        n: a.n,
        c: s.rem(&m),
    })
}

/// Whether Q(zeta_n) contains a primitive q-th root of unity (q an odd prime).
pub fn has_primitive_root(q: u64, n: u64) -> bool {
    n % q == 0
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            return self.c == o.c;
        }
        let (a, b, _) = self.common(o);
        a == b
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.n, self.c.render("z"))
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.c.render("z"))
    }
}

impl Field for Cyclo {
    fn zero() -> Self {
        Cyclo {
            n: 1,
            c: Poly::zero(),
        }
    }
    fn one() -> Self {
        Cyclo {
            n: 1,
            c: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b, m) = self.common(o);
        Cyclo { n: m, c: a.add(&b) }
    }
    fn sub(&self, o: &Self) -> Self {
        let (a, b, m) = self.common(o);
        Cyclo { n: m, c: a.sub(&b) }
    }
    fn mul(&self, o: &Self) -> Self {
        let (a, b, m) = self.common(o);
        Cyclo {
            n: m,
            c: a.mul(&b).rem(&phi(m)),
        }
    }
    fn neg(&self) -> Self {
        Cyclo {
            n: self.n,
            c: self.c.neg(),
        }
    }
    fn inv(&self) -> Option<Self> {
        cyclo_inverse(self).ok()
    }
    fn from_rational(q: &Rational) -> Self {
        Cyclo::rational(q.clone())
    }
    fn render(&self) -> String {
        self.c.render("z")
    }
    fn is_rational_literal(&self) -> bool {
        self.c.is_constant()
    }
}
