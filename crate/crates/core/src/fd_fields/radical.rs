//! Q(t^{1/p} : p in P) for a set P of odd primes, as rational functions in
//! u = t^{1/n}, n the product of the primes seen so far.

use crate::diagrams::DiagramError;
use crate::exact_algebra::{Poly, RatFunc, Rational};
use crate::primes::is_prime;
use crate::streams::Enumeration;

use super::tower::{Tower, TowerEmitter};

enum Source {
    Fixed(Vec<u64>),
    Enumerated(Enumeration),
}

pub struct RadicalTower {
    source: Source,
    primes: Vec<u64>,
    level: u64,
    prev: u64,
}

fn check_prime(p: u64) -> Result<(), DiagramError> {
    if p == 2 {
        return Err(DiagramError::Contract(
            "t^(1/2) is not supported; primes must be odd".into(),
        ));
    }
    if !is_prime(p) {
        return Err(DiagramError::Contract(format!("{p} is not a prime")));
    }
    Ok(())
}

impl RadicalTower {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// t at the current level.
    pub fn t(&self) -> RatFunc<Rational> {
        u_pow(self.level)
    }

    /// t^{1/p} at the current level, for p among the primes seen.
    pub fn root(&self, p: u64) -> Option<RatFunc<Rational>> {
        self.primes.contains(&p).then(|| u_pow(self.level / p))
    }
}

fn u_pow(k: u64) -> RatFunc<Rational> {
    RatFunc::from_poly(Poly::monomial(
        <Rational as crate::exact_algebra::Field>::one(),
        k as usize,
    ))
}

/// Field generated by the t^{1/p}, p in `primes`, all present from stage 0.
pub fn radical_field(primes: &[u64]) -> Result<RadicalTower, DiagramError> {
    let mut ps = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    for &p in &ps {
        check_prime(p)?;
    }
    Ok(RadicalTower {
        source: Source::Fixed(ps),
        primes: vec![],
        level: 1,
        prev: 1,
    })
}

/// Primes arrive as they are enumerated; an even or composite entry is a
/// contract error at the stage it appears.
pub fn radical_field_enumerated(w: &Enumeration) -> RadicalTower {
    RadicalTower {
        source: Source::Enumerated(w.clone()),
        primes: vec![],
        level: 1,
        prev: 1,
    }
}

impl Tower for RadicalTower {
    type Elem = RatFunc<Rational>;
    type Key = RatFunc<Rational>;

    fn key(&self, x: &Self::Elem) -> Self::Key {
        x.clone()
    }

    fn advance(&mut self, stage: u64) -> Result<bool, DiagramError> {
        let now: Vec<u64> = match &self.source {
            Source::Fixed(v) => v.clone(),
            Source::Enumerated(w) => w.at(stage).into_iter().collect(),
        };
        let mut grew = false;
        for p in now {
            if self.primes.contains(&p) {
                continue;
            }
            check_prime(p)?;
            self.primes.push(p);
            if !grew {
                self.prev = self.level;
            }
            self.level = self.level.checked_mul(p).ok_or(DiagramError::Overflow)?;
            grew = true;
        }
        Ok(grew)
    }

    fn embed(&self, x: &Self::Elem) -> Self::Elem {
        x.inflate((self.level / self.prev) as usize)
    }

    fn generators(&self) -> Vec<Self::Elem> {
        let mut g = vec![self.t()];
        g.extend(self.primes.iter().map(|&p| u_pow(self.level / p)));
        g
    }

    fn render(&self, x: &Self::Elem) -> String {
        x.render_var("u")
    }

    fn header(&self) -> String {
        format!("level {n}: t = u^{n}", n = self.level)
    }
}

pub type RadicalEmitter = TowerEmitter<RadicalTower>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{audit, field_sym, Emitter};
    use crate::exact_algebra::Field;

    #[test]
    fn no_primes_is_q_of_t() {
        let mut e = TowerEmitter::with_defaults(radical_field(&[]).unwrap());
        e.run_to(50).unwrap();
        assert_eq!(e.tower().level(), 1);
        assert_eq!(e.render(2).unwrap(), "u");
        assert!(e.tower().header().ends_with("t = u^1"));
    }

    #[test]
    fn cube_root_only() {
        let mut e = TowerEmitter::with_defaults(radical_field(&[3]).unwrap());
        e.run_to(300).unwrap();
        let t = e.code_of(&e.tower().t()).unwrap();
        let r = e.code_of(&e.tower().root(3).unwrap()).unwrap();
        let r2 = e.diagram().op(field_sym::MUL, &[r, r]).unwrap();
        assert_eq!(e.diagram().op(field_sym::MUL, &[r2, r]), Some(t));
        // 5 v(x) = 3 has no solution, so no emitted element is a fifth root of t
        assert!(e
            .elements()
            .iter()
            .all(|x| x.v_t().is_none_or(|v| 5 * v != 3)));
    }

    #[test]
    fn exponents_add() {
        let mut e = TowerEmitter::with_defaults(radical_field(&[5, 3]).unwrap());
        e.run_to(40).unwrap();
        assert_eq!(e.tower().level(), 15);
        let a = e.code_of(&e.tower().root(3).unwrap()).unwrap();
        let b = e.code_of(&e.tower().root(5).unwrap()).unwrap();
        let c = e.diagram().op(field_sym::MUL, &[a, b]).unwrap();
        assert_eq!(e.render(c).unwrap(), "u^8");
    }

    #[test]
    fn stable_codes_and_errors() {
        let mut e =
            TowerEmitter::with_defaults(radical_field_enumerated(&Enumeration::new("late", |s| {
                [3u64, 5].into_iter().filter(|&p| s > 4 * p).collect()
            })));
        e.run_to(14).unwrap();
        let t = e.code_of(&e.tower().t()).unwrap();
        e.run_to(40).unwrap();
        assert_eq!(e.tower().level(), 15);
        assert_eq!(e.code_of(&e.tower().t()), Some(t));
        assert_eq!(e.element(t).unwrap(), &u_pow(15));
        assert!(audit(e.diagram()).clean());
        assert!(radical_field(&[2, 3]).is_err());
        assert!(radical_field(&[9]).is_err());
        let mut bad =
            TowerEmitter::with_defaults(radical_field_enumerated(&Enumeration::finite(&[2])));
        assert!(matches!(bad.run_to(5), Err(DiagramError::Contract(_))));
        assert!(e.element(0).unwrap().is_zero());
    }
}
