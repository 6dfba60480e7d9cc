//! Prime tables.

use std::sync::{Mutex, OnceLock};

fn table() -> &'static Mutex<Vec<u64>> {
    static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    PRIMES.get_or_init(|| Mutex::new(vec![2, 3, 5, 7, 11, 13]))
}

fn extend_to_count(v: &mut Vec<u64>, count: usize) {
    let mut c = *v.last().unwrap() + 2;
    while v.len() < count {
        if v.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            v.push(c);
        }
        c += 2;
    }
}

/// The n-th prime, counting from p_0 = 2.
pub fn nth_prime(n: usize) -> u64 {
    let mut v = table().lock().unwrap();
    if v.len() <= n {
        let want = (n + 1).max(v.len() * 2);
        extend_to_count(&mut v, want);
    }
    v[n]
}

/// The n-th odd prime, counting from 3.
pub fn nth_odd_prime(n: usize) -> u64 {
    nth_prime(n + 1)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Index of a prime in the sequence 2, 3, 5, ...
pub fn prime_index(p: u64) -> Option<usize> {
    if !is_prime(p) {
        return None;
    }
    let mut i = 0;
    loop {
        let q = nth_prime(i);
        if q == p {
            return Some(i);
        }
        if q > p {
            return None;
        }
        i += 1;
    }
}

/// Product of the first k odd primes.
pub fn odd_primorial(k: usize) -> u64 {
    (0..k).map(nth_odd_prime).product()
}

/// Prime factorisation by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables() {
        assert_eq!(
            (0..8).map(nth_prime).collect::<Vec<_>>(),
            vec![2, 3, 5, 7, 11, 13, 17, 19]
        );
        assert_eq!(nth_prime(99), 541);
        assert_eq!(prime_index(541), Some(99));
        assert_eq!(prime_index(540), None);
        assert_eq!(odd_primorial(3), 105);
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
