//! Canonical enumerations of Q and Q^r by height.
//!
//! Within one height, rationals are ordered by denominator, then absolute
//! numerator, positive before negative. Vectors of max-height h are listed in
//! lexicographic order of their coordinates' positions in that order.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::exact_algebra::Rational;

pub fn rationals_of_height(h: u64) -> Vec<Rational> {
    if h == 0 {
        return vec![Rational::from_integer(BigInt::from(0))];
    }
    let mut out = Vec::new();
    for den in 1..=h {
        let nums: Vec<u64> = if den == h { (1..h).collect() } else { vec![h] };
        let nums = if h == 1 { vec![1] } else { nums };
        for n in nums {
            if n.gcd(&den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                out.push(Rational::new(
                    BigInt::from(sign) * BigInt::from(n),
                    BigInt::from(den),
                ));
            }
        }
    }
    out
}

/// Iterator over Q^r in canonical order.
pub struct VectorEnumeration {
    rank: usize,
    height: u64,
    pool: Vec<Rational>,
    level_start: usize,
    odometer: Vec<usize>,
    fresh_level: bool,
}

impl VectorEnumeration {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1);
        VectorEnumeration {
            rank,
            height: 0,
            pool: rationals_of_height(0),
            level_start: 0,
            odometer: vec![0; rank],
            fresh_level: true,
        }
    }

    fn next_level(&mut self) {
        self.height += 1;
        self.level_start = self.pool.len();
        self.pool.extend(rationals_of_height(self.height));
        self.odometer = vec![0; self.rank];
        self.fresh_level = true;
    }

    fn advance(&mut self) -> bool {
        for i in (0..self.rank).rev() {
            self.odometer[i] += 1;
            if self.odometer[i] < self.pool.len() {
                return true;
            }
            self.odometer[i] = 0;
        }
        false
    }
}

impl Iterator for VectorEnumeration {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if !self.fresh_level && !self.advance() {
                self.next_level();
                continue;
            }
            self.fresh_level = false;
            if self.odometer.iter().any(|&i| i >= self.level_start) {
                return Some(
                    self.odometer
                        .iter()
                        .map(|&i| self.pool[i].clone())
                        .collect(),
                );
            }
        }
    }
}
