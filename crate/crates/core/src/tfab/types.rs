//! Divisibility types of rank-1 groups and bounded isomorphism verdicts.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact_algebra::Rational;
use crate::primes::{factor, nth_prime, prime_index};

use super::presentation::QrGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeValue {
    Finite(u64),
    Inf,
}

impl fmt::Display for TypeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeValue::Finite(n) => write!(f, "{n}"),
            TypeValue::Inf => f.write_str("inf"),
        }
    }
}

type ApproxFn = Arc<dyn Fn(u64, usize) -> u64 + Send + Sync>;
type LimitFn = Arc<dyn Fn(usize) -> TypeValue + Send + Sync>;

/// A map from primes (by index: p_0 = 2, p_1 = 3, ...) to N or infinity,
/// given through monotone finite-stage lower bounds. When the limit is known
/// it is carried along for oracle use.
#[derive(Clone)]
pub struct DivisibilityType {
    pub name: String,
    approx: ApproxFn,
    limit: Option<LimitFn>,
}

impl fmt::Debug for DivisibilityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisibilityType({})", self.name)
    }
}

impl DivisibilityType {
    /// Standard approximation of a known type: at stage s the first s primes
    /// are visible, with entries capped at s.
    pub fn from_limit(name: &str, f: impl Fn(usize) -> TypeValue + Send + Sync + 'static) -> Self {
        let limit: LimitFn = Arc::new(f);
        let l2 = limit.clone();
        let approx: ApproxFn = Arc::new(move |s, i| {
            if i as u64 >= s {
                return 0;
            }
            match l2(i) {
                TypeValue::Finite(n) => n.min(s),
                TypeValue::Inf => s,
            }
        });
        DivisibilityType {
            name: name.to_string(),
            approx,
            limit: Some(limit),
        }
    }

    /// Type known only through its approximations `approx(stage, prime index)`,
    /// which must be nondecreasing in the stage and zero outside a finite set.
    pub fn from_approx(name: &str, f: impl Fn(u64, usize) -> u64 + Send + Sync + 'static) -> Self {
        DivisibilityType {
            name: name.to_string(),
            approx: Arc::new(f),
            limit: None,
        }
    }

    pub fn zero() -> Self {
        Self::from_limit("0", |_| TypeValue::Finite(0))
    }

    pub fn constant(v: TypeValue) -> Self {
        Self::from_limit(&format!("*:{v}"), move |_| v)
    }

    pub fn approx(&self, stage: u64, index: usize) -> u64 {
        (self.approx)(stage, index)
    }

    pub fn limit(&self, index: usize) -> Option<TypeValue> {
        self.limit.as_ref().map(|f| f(index))
    }

    pub fn has_limit(&self) -> bool {
        self.limit.is_some()
    }

    /// Parse `2:inf,3:1,5:0,...`; unlisted primes get 0, or the value of a
    /// trailing `*:v` entry.
    pub fn parse(s: &str) -> Option<Self> {
        let mut entries: Vec<(usize, TypeValue)> = Vec::new();
        let mut default = TypeValue::Finite(0);
        for part in s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty() && *p != "...")
        {
            let (p, v) = part.split_once(':')?;
            let v = match v.trim() {
                "inf" => TypeValue::Inf,
                n => TypeValue::Finite(n.parse().ok()?),
            };
            if p.trim() == "*" {
                default = v;
                continue;
            }
            let idx = prime_index(p.trim().parse().ok()?)?;
            entries.push((idx, v));
        }
        let name = s.to_string();
        Some(Self::from_limit(&name, move |i| {
            entries
                .iter()
                .find(|(j, _)| *j == i)
                .map(|&(_, v)| v)
                .unwrap_or(default)
        }))
    }

    /// Literal for the first `k` primes, using limits when known and
    /// approximations at `stage` otherwise.
    pub fn render_prefix(&self, k: usize, stage: u64) -> String {
        let mut parts: Vec<String> = (0..k)
            .map(|i| {
                let v = self
                    .limit(i)
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| self.approx(stage, i).to_string());
                format!("{}:{v}", nth_prime(i))
            })
            .collect();
        parts.push("...".into());
        parts.join(",")
    }
}

/// The rank-1 subgroup of Q generated at stage s by 1 and the 1/p^e with
/// e <= approx_s(p).
pub struct Rank1Group {
    pub ty: DivisibilityType,
}

impl Rank1Group {
    pub fn contains_rational(&self, q: &Rational, stage: u64) -> bool {
        let Some(den) = q.denom().to_u64() else {
            return false;
        };
        factor(den).into_iter().all(|(p, e)| match prime_index(p) {
            Some(i) => e as u64 <= self.ty.approx(stage, i),
            None => false,
        })
    }
}

impl QrGroup for Rank1Group {
    fn rank(&self) -> usize {
        1
    }

    fn contains(&mut self, v: &[Rational], stage: u64) -> bool {
        self.contains_rational(&v[0], stage)
    }

    fn describe(&self) -> String {
        format!("rank 1, type {}", self.ty.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Isomorphic,
    NonIsomorphic,
    UnknownAtBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeEquivalenceVerdict {
    pub value: Verdict,
    pub witness: String,
}

/// When to certify "infinitely many differences": at least `num/den` of the
/// primes below the bound, and never fewer than `min_mismatches`.
#[derive(Debug, Clone, Copy)]
pub struct IsoThreshold {
    pub num: u64,
    pub den: u64,
    pub min_mismatches: u64,
}

impl Default for IsoThreshold {
    fn default() -> Self {
        IsoThreshold {
            num: 1,
            den: 2,
            min_mismatches: 10,
        }
    }
}

fn value_at(t: &DivisibilityType, i: usize, bound: u64) -> (TypeValue, bool) {
    match t.limit(i) {
        Some(v) => (v, true),
        None => {
            let a = t.approx(bound, i);
            // saturated approximations are read as infinite
            if a >= bound {
                (TypeValue::Inf, false)
            } else {
                (TypeValue::Finite(a), false)
            }
        }
    }
}

/// Compare two rank-1 types on the primes p_0 .. p_{bound-1}.
///
/// Non-isomorphic needs an infinite/finite clash or at least the threshold
/// number of mismatching primes. Isomorphic needs the infinite entries to
/// agree and every mismatch to sit in the lower half of the window.
pub fn iso_rank1(
    a: &DivisibilityType,
    b: &DivisibilityType,
    bound: u64,
    th: IsoThreshold,
) -> TypeEquivalenceVerdict {
    let mut mismatches = Vec::new();
    let mut exact = true;
    for i in 0..bound as usize {
        let (va, ea) = value_at(a, i, bound);
        let (vb, eb) = value_at(b, i, bound);
        exact &= ea && eb;
        if (va == TypeValue::Inf) != (vb == TypeValue::Inf) {
            let tag = if ea && eb {
                ""
            } else {
                " (saturation heuristic)"
            };
            return TypeEquivalenceVerdict {
                value: Verdict::NonIsomorphic,
                witness: format!("prime {}: {va} vs {vb}{tag}", nth_prime(i)),
            };
        }
        if va != vb {
            mismatches.push(i);
        }
    }
    let need = (bound * th.num).div_ceil(th.den).max(th.min_mismatches);
    if mismatches.len() as u64 >= need {
        return TypeEquivalenceVerdict {
            value: Verdict::NonIsomorphic,
            witness: format!(
                "{} mismatching primes below p_{bound} (threshold {need})",
                mismatches.len()
            ),
        };
    }
    let tag = if exact { "" } else { " (approximations)" };
    match mismatches.last() {
        None => TypeEquivalenceVerdict {
            value: Verdict::Isomorphic,
            witness: format!("types agree below p_{bound}{tag}"),
        },
        Some(&i) if (i as u64) < bound / 2 => TypeEquivalenceVerdict {
            value: Verdict::Isomorphic,
            witness: format!(
                "{} finite differences, last at prime {}{tag}",
                mismatches.len(),
                nth_prime(i)
            ),
        },
        Some(&i) => TypeEquivalenceVerdict {
            value: Verdict::UnknownAtBound,
            witness: format!(
                "{} mismatches, latest at prime {}",
                mismatches.len(),
                nth_prime(i)
            ),
        },
    }
}
