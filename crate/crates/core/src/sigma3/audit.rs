//! Invariant checks on sampled (triple, stage) points.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact_algebra::Rational;

use super::family::{triple_prime, FamilyCore, Triple};
use super::machine::Side;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub triple: Triple,
    pub stage: u64,
    pub what: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Sigma3Audit {
    pub points: usize,
    pub violations: Vec<Violation>,
}

impl Sigma3Audit {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn inv_power(p: u64, e: u32) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(p).pow(e))
}

/// Check one triple at one stage for groups l < `indices`.
pub fn audit_point(
    core: &mut FamilyCore,
    t: Triple,
    stage: u64,
    indices: usize,
    out: &mut Sigma3Audit,
) {
    let (m, n, _) = t;
    let p = triple_prime(t.0, t.1, t.2);
    let mach = core.machine(t, stage).clone();
    let mut bad = |what: String| {
        out.violations.push(Violation {
            triple: t,
            stage,
            what,
        })
    };
    let st = mach.state_at(stage);
    if st.tags[m] != Side::M {
        bad("tag(m) is not M".into());
    }
    if st.tags[n] != Side::N {
        bad("tag(n) is not N".into());
    }
    let rs: Vec<u32> = mach
        .history()
        .iter()
        .take_while(|h| h.stage <= stage)
        .map(|h| h.r)
        .collect();
    if rs.windows(2).any(|w| w[1] < w[0]) {
        bad("key exponent decreased".into());
    }
    let r = st.r;
    let width = indices.max(mach.big_n + 1);
    // exponents read back through rational membership
    let exps: Vec<u32> = (0..width)
        .map(|l| {
            (1..=r + 1)
                .take_while(|&e| core.membership(l, &inv_power(p, e), stage))
                .count() as u32
        })
        .collect();
    if exps[m] + 1 != r || exps[n] != r {
        bad(format!(
            "G_n not one power ahead of G_m: {} vs {} at r = {r}",
            exps[n], exps[m]
        ));
    }
    for (l, &e) in exps.iter().enumerate() {
        let want = if mach.side_at(l, stage) == Side::N {
            r
        } else {
            r - 1
        };
        if e != want {
            bad(format!("G_{l} holds p^-{e}, tag rule gives p^-{want}"));
        }
        if e != exps[m] && e != exps[n] {
            bad(format!("G_{l} is even with neither G_m nor G_n"));
        }
    }
    out.points += 1;
}

/// Audit `samples` random (triple, stage) points drawn from `triples` and
/// stages up to `stage`.
pub fn audit_invariants(
    core: &mut FamilyCore,
    triples: &[Triple],
    stage: u64,
    indices: usize,
    samples: usize,
    seed: u64,
) -> Sigma3Audit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Sigma3Audit::default();
    if triples.is_empty() {
        return out;
    }
    for _ in 0..samples {
        let t = *triples.choose(&mut rng).expect("nonempty");
        let s = rng.gen_range(0..=stage);
        audit_point(core, t, s, indices, &mut out);
    }
    out
}
