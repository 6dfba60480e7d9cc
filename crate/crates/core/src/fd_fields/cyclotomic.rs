//! Subfields of the odd cyclotomic tower: the example field F, the field
//! families driven by enumerations and by Σ₁ detectors.

use std::sync::Arc;

use crate::diagrams::DiagramError;
use crate::exact_algebra::cyclo::{has_primitive_root, prime_factors, valid_conductor, Cyclo};
use crate::exact_algebra::{Field, Poly};
use crate::primes::{is_prime, odd_primorial};
use crate::streams::{BitStream, Enumeration};
use crate::tfab::Verdict;

use super::tower::{FieldEmitterConfig, Tower, TowerEmitter};

/// Largest conductor the emitters will compute in. Beyond it a step fails
/// with a budget error.
pub const DEFAULT_MAX_CONDUCTOR: u64 = 3 * 5 * 7 * 11;

type Schedule = Box<dyn FnMut(u64) -> Result<u64, DiagramError> + Send>;

/// Q(zeta_{n(s)}) for a nondecreasing divisibility chain of conductors n(s).
pub struct CycloTower {
    name: String,
    schedule: Schedule,
    conductor: u64,
    prev: u64,
    max_conductor: u64,
}

impl CycloTower {
    pub fn new(
        name: &str,
        schedule: impl FnMut(u64) -> Result<u64, DiagramError> + Send + 'static,
    ) -> Self {
        CycloTower {
            name: name.to_string(),
            schedule: Box::new(schedule),
            conductor: 1,
            prev: 1,
            max_conductor: DEFAULT_MAX_CONDUCTOR,
        }
    }

    pub fn with_max_conductor(mut self, m: u64) -> Self {
        self.max_conductor = m;
        self
    }

    /// A fixed abelian field Q(zeta_n).
    pub fn fixed(n: u64) -> Result<Self, DiagramError> {
        if !valid_conductor(n) {
            return Err(DiagramError::Contract(format!(
                "conductor {n} is not a squarefree odd number"
            )));
        }
        Ok(Self::new(&format!("Q(zeta_{n})"), move |_| Ok(n)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }
}

impl Tower for CycloTower {
    type Elem = Cyclo;
    type Key = Poly<crate::exact_algebra::Rational>;

    fn key(&self, x: &Cyclo) -> Self::Key {
        x.lift(self.conductor)
            .expect("conductor divides the current one")
            .coeffs()
            .clone()
    }

    fn advance(&mut self, stage: u64) -> Result<bool, DiagramError> {
        let n = (self.schedule)(stage)?;
        if n == self.conductor {
            return Ok(false);
        }
        if n % self.conductor != 0 || !valid_conductor(n) {
            return Err(DiagramError::Contract(format!(
                "conductor {n} does not extend {}",
                self.conductor
            )));
        }
        if n > self.max_conductor {
            return Err(DiagramError::Budget(format!(
                "conductor {n} exceeds {}",
                self.max_conductor
            )));
        }
        self.prev = self.conductor;
        self.conductor = n;
        Ok(true)
    }

    fn embed(&self, x: &Cyclo) -> Cyclo {
        x.lift(self.conductor).expect("tower levels divide")
    }

    fn generators(&self) -> Vec<Cyclo> {
        let m = self.conductor;
        if m == 1 {
            return vec![];
        }
        let z = Cyclo::zeta(m).expect("valid conductor");
        prime_factors(m).into_iter().map(|p| z.pow(m / p)).collect()
    }

    fn render(&self, x: &Cyclo) -> String {
        x.lift(self.conductor).expect("divides").render()
    }

    fn header(&self) -> String {
        format!(
            "{}: Q(zeta_{}), z = zeta_{}",
            self.name, self.conductor, self.conductor
        )
    }
}

pub type CycloEmitter = TowerEmitter<CycloTower>;

/// Conductor of the example field F at a stage: the product of the first
/// `stage` odd primes.
pub fn example_conductor(stage: u64) -> u64 {
    odd_primorial(stage as usize)
}

/// The example field F, adding a primitive p-th root of unity for the next
/// odd prime p at every stage.
pub fn example_field_f() -> CycloTower {
    CycloTower::new("F", |s| Ok(example_conductor(s)))
}

/// Emitter of F through `stage`.
pub fn example_field_f_at(stage: u64) -> Result<CycloEmitter, DiagramError> {
    let mut e = TowerEmitter::with_defaults(example_field_f());
    crate::diagrams::Emitter::run_to(&mut e, stage + 1)?;
    Ok(e)
}

/// F_W: at stage s, roots of unity for the first |W_s| odd primes.
pub fn inf_reduction(w: &Enumeration) -> CycloTower {
    let w = w.clone();
    CycloTower::new("inf", move |s| Ok(odd_primorial(w.at(s).len())))
}

/// A monotone Σ₁ event over prefixes of a bit stream.
pub trait Detector: Send + Sync {
    fn name(&self) -> String;
    /// Whether D_n has fired on this prefix.
    fn fired(&self, n: usize, prefix: &[bool]) -> bool;
}

/// D_n: the prefix contains at least n ones.
pub struct OnesCount;

impl Detector for OnesCount {
    fn name(&self) -> String {
        "ones-count".into()
    }

    fn fired(&self, n: usize, prefix: &[bool]) -> bool {
        prefix.iter().filter(|&&b| b).count() >= n
    }
}

/// D_n: the word w repeated n times occurs in the prefix.
pub struct PatternRepeat {
    pub word: Vec<bool>,
}

impl Detector for PatternRepeat {
    fn name(&self) -> String {
        let w: String = self
            .word
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        format!("pattern({w})")
    }

    fn fired(&self, n: usize, prefix: &[bool]) -> bool {
        let target: Vec<bool> = std::iter::repeat_n(self.word.iter().copied(), n)
            .flatten()
            .collect();
        target.is_empty() || prefix.windows(target.len()).any(|w| w == target.as_slice())
    }
}

/// D_n: a counter moving up on 1 and down on 0 (never below 0) reaches n.
pub struct UpDownCounter;

impl Detector for UpDownCounter {
    fn name(&self) -> String {
        "up-down-counter".into()
    }

    fn fired(&self, n: usize, prefix: &[bool]) -> bool {
        let mut c = 0usize;
        let mut top = 0;
        for &b in prefix {
            c = if b { c + 1 } else { c.saturating_sub(1) };
            top = top.max(c);
        }
        top >= n
    }
}

/// Arbitrary detector from a closure, for contract tests.
pub struct FnDetector(pub Arc<dyn Fn(usize, &[bool]) -> bool + Send + Sync>);

impl Detector for FnDetector {
    fn name(&self) -> String {
        "custom".into()
    }

    fn fired(&self, n: usize, prefix: &[bool]) -> bool {
        (self.0)(n, prefix)
    }
}

/// Number of detectors fired at stage s (prefix of length s), checking the
/// nesting contract on D_0 .. D_s.
pub fn fired_count(f: &BitStream, det: &dyn Detector, stage: u64) -> Result<usize, DiagramError> {
    let prefix: Vec<bool> = (0..stage).map(|i| f.get(i)).collect();
    let mut k = 0;
    let mut gap = false;
    for n in 0..=stage as usize + 1 {
        let fired = det.fired(n, &prefix);
        if fired && gap {
            return Err(DiagramError::Contract(format!(
                "{}: D_{n} fired before D_{k} at stage {stage}",
                det.name()
            )));
        }
        if fired {
            k = n + 1;
        } else {
            gap = true;
        }
    }
    if k == 0 {
        return Err(DiagramError::Contract(format!(
            "{}: D_0 has not fired",
            det.name()
        )));
    }
    Ok(k)
}

/// Starts as Q and adds the n-th root of unity once f is seen in D_n.
pub fn pi2_reduction(f: &BitStream, det: Arc<dyn Detector>) -> CycloTower {
    let f = f.clone();
    let name = format!("pi2[{}]", det.name());
    CycloTower::new(&name, move |s| {
        Ok(odd_primorial(fired_count(&f, det.as_ref(), s)?))
    })
}

pub fn cyclo_emitter(t: CycloTower) -> CycloEmitter {
    TowerEmitter::new(t, FieldEmitterConfig::default())
}

/// Bounded comparison of Q(zeta_a) and Q(zeta_b) by which primitive q-th
/// roots of unity they contain, for odd primes q <= `prime_bound`.
pub fn compare_cyclotomic(a: u64, b: u64, prime_bound: u64) -> (Verdict, String) {
    for q in (3..=prime_bound).filter(|&q| is_prime(q)) {
        let (x, y) = (has_primitive_root(q, a), has_primitive_root(q, b));
        if x != y {
            let side = if x { "first" } else { "second" };
            return (
                Verdict::NonIsomorphic,
                format!("zeta_{q} lies only in the {side} field"),
            );
        }
    }
    let covered = |n: u64| prime_factors(n).iter().all(|&p| p <= prime_bound);
    if covered(a) && covered(b) {
        (
            Verdict::Isomorphic,
            format!("same roots of unity up to {prime_bound}, conductors covered"),
        )
    } else {
        (
            Verdict::UnknownAtBound,
            format!("no difference among roots of unity up to {prime_bound}"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{audit, Emitter};
    use crate::exact_algebra::cyclo::{cyclotomic, totient};

    #[test]
    fn example_field_stages() {
        assert_eq!(example_conductor(0), 1);
        assert_eq!(example_conductor(1), 3);
        assert_eq!(example_conductor(2), 15);
        assert_eq!(totient(example_conductor(2)), 8);
        let e = example_field_f_at(2).unwrap();
        assert_eq!(e.tower().conductor(), 15);
        assert!(audit(e.diagram()).clean());
    }

    #[test]
    fn codes_persist_across_growth() {
        let mut e = cyclo_emitter(CycloTower::new("capped", |s| {
            Ok(odd_primorial((s as usize).min(3)))
        }));
        e.run_to(2).unwrap();
        let z3 = Cyclo::zeta(3).unwrap();
        let c = e.code_of(&z3).unwrap();
        e.run_to(3).unwrap();
        assert_eq!(e.tower().conductor(), 15);
        assert_eq!(e.code_of(&z3), Some(c));
        assert_eq!(e.element(c).unwrap(), &z3);
        e.run_to(60).unwrap();
        assert!(audit(e.diagram()).clean());
    }

    #[test]
    fn inf_family() {
        let mut e = cyclo_emitter(inf_reduction(&Enumeration::empty()));
        e.run_to(20).unwrap();
        assert_eq!(e.tower().conductor(), 1);
        let mut two = cyclo_emitter(inf_reduction(&Enumeration::finite(&[4, 9])));
        two.run_to(30).unwrap();
        assert_eq!(two.tower().conductor(), 15);
        // F at stage 3 has conductor 105; zeta_7 separates it from Q(zeta_15)
        let (v, w) = compare_cyclotomic(example_conductor(3), 15, 7);
        assert_eq!(v, Verdict::NonIsomorphic);
        assert!(w.contains("zeta_7"));
        // exhaustive check in Q(zeta_15): no power of +-zeta_15 is a root of Phi_7
        let phi7 = cyclotomic(7).unwrap().map(|a| Cyclo::rational(a.clone()));
        let z = Cyclo::zeta(15).unwrap();
        assert!((0..15)
            .all(|k| !phi7.eval(&z.pow(k)).is_zero() && !phi7.eval(&z.pow(k).neg()).is_zero()));
        assert_eq!(compare_cyclotomic(15, 15, 7).0, Verdict::Isomorphic);
        assert_eq!(compare_cyclotomic(15, 15, 3).0, Verdict::UnknownAtBound);
    }

    #[test]
    fn detectors() {
        let f = BitStream::periodic("0100001", "0");
        assert_eq!(fired_count(&f, &OnesCount, 20).unwrap(), 3);
        assert_eq!(fired_count(&BitStream::zeros(), &OnesCount, 20).unwrap(), 1);
        let ones = BitStream::periodic("", "1");
        assert_eq!(fired_count(&ones, &UpDownCounter, 5).unwrap(), 6);
        let p = PatternRepeat {
            word: vec![true, false],
        };
        assert_eq!(
            fired_count(&BitStream::periodic("1010", "0"), &p, 10).unwrap(),
            3
        );
        let bad = FnDetector(Arc::new(|n, _| n == 0 || n == 2));
        assert!(matches!(
            fired_count(&ones, &bad, 5),
            Err(DiagramError::Contract(_))
        ));
        let late = FnDetector(Arc::new(|_, p: &[bool]| !p.is_empty()));
        assert!(fired_count(&ones, &late, 0).is_err());
    }

    #[test]
    fn pi2_examples() {
        let mut all = cyclo_emitter(pi2_reduction(
            &BitStream::periodic("", "1"),
            Arc::new(OnesCount),
        ));
        all.run_to(3).unwrap();
        assert_eq!(all.tower().conductor(), example_conductor(3));
        let mut none = cyclo_emitter(pi2_reduction(&BitStream::zeros(), Arc::new(OnesCount)));
        none.run_to(40).unwrap();
        assert_eq!(none.tower().conductor(), 3);
        // D_0 contributes zeta_3, so a single 1 gives Q(zeta_15) and two give Q(zeta_105)
        let mut one = cyclo_emitter(pi2_reduction(
            &BitStream::periodic("001", "0"),
            Arc::new(OnesCount),
        ));
        one.run_to(40).unwrap();
        assert_eq!(one.tower().conductor(), 15);
        let mut two = cyclo_emitter(pi2_reduction(
            &BitStream::periodic("0101", "0"),
            Arc::new(OnesCount),
        ));
        two.run_to(40).unwrap();
        assert_eq!(two.tower().conductor(), 105);
        assert!(audit(two.diagram()).clean());
    }

    #[test]
    fn budget_guard() {
        let mut e = cyclo_emitter(example_field_f().with_max_conductor(15));
        assert!(matches!(e.run_to(10), Err(DiagramError::Budget(_))));
    }
}
