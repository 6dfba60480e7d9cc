//! Oracle inputs: total bit streams and monotone enumerations of sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A total {0,1} stream.
#[derive(Clone)]
pub enum BitStream {
    /// `prefix` followed by `cycle` repeated forever (an empty cycle means zeros).
    Periodic { prefix: Vec<bool>, cycle: Vec<bool> },
    Program {
        name: String,
        f: Arc<dyn Fn(u64) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitStream::Periodic { prefix, cycle } => {
                write!(f, "Periodic({}|{})", bits_text(prefix), bits_text(cycle))
            }
            BitStream::Program { name, .. } => write!(f, "Program({name})"),
        }
    }
}

fn bits_text(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl BitStream {
    pub fn zeros() -> Self {
        BitStream::Periodic {
            prefix: vec![],
            cycle: vec![false],
        }
    }

    pub fn periodic(prefix: &str, cycle: &str) -> Self {
        Self::parse(&format!("{prefix}|{cycle}")).expect("bit literals")
    }

    pub fn program(name: &str, f: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        BitStream::Program {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    /// Text form `prefix|cycle`, e.g. `0110|01`.
    pub fn parse(s: &str) -> Option<Self> {
        let (p, c) = s.trim().split_once('|').unwrap_or((s.trim(), "0"));
        let prefix = parse_bits(p)?;
        let mut cycle = parse_bits(c)?;
        if cycle.is_empty() {
            cycle.push(false);
        }
        Some(BitStream::Periodic { prefix, cycle })
    }

    pub fn text(&self) -> String {
        match self {
            BitStream::Periodic { prefix, cycle } => {
                format!("{}|{}", bits_text(prefix), bits_text(cycle))
            }
            BitStream::Program { name, .. } => name.clone(),
        }
    }

    pub fn get(&self, n: u64) -> bool {
        match self {
            BitStream::Periodic { prefix, cycle } => {
                let n = n as usize;
                if n < prefix.len() {
                    prefix[n]
                } else {
                    cycle[(n - prefix.len()) % cycle.len()]
                }
            }
            BitStream::Program { f, .. } => f(n),
        }
    }

    pub fn flip(&self) -> Self {
        let me = self.clone();
        match self {
            BitStream::Periodic { prefix, cycle } => BitStream::Periodic {
                prefix: prefix.iter().map(|b| !b).collect(),
                cycle: cycle.iter().map(|b| !b).collect(),
            },
            BitStream::Program { name, .. } => {
                BitStream::program(&format!("flip({name})"), move |n| !me.get(n))
            }
        }
    }
}

/// E_0 for eventually periodic streams: equal from some point on.
pub fn e0_equivalent(a: &BitStream, b: &BitStream) -> Option<bool> {
    match (a, b) {
        (
            BitStream::Periodic {
                prefix: pa,
                cycle: ca,
            },
            BitStream::Periodic {
                prefix: pb,
                cycle: cb,
            },
        ) => {
            let start = pa.len().max(pb.len()) as u64;
            let period = num_integer::lcm(ca.len(), cb.len()) as u64;
            Some((start..start + period).all(|n| a.get(n) == b.get(n)))
        }
        _ => None,
    }
}

/// A monotone enumeration of a set of naturals: `at(s)` is the part listed by stage s.
#[derive(Clone)]
pub struct Enumeration {
    pub name: String,
    f: Arc<dyn Fn(u64) -> BTreeSet<u64> + Send + Sync>,
}

impl fmt::Debug for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Enumeration({})", self.name)
    }
}

impl Enumeration {
    pub fn new(name: &str, f: impl Fn(u64) -> BTreeSet<u64> + Send + Sync + 'static) -> Self {
        Enumeration {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    /// Lists every n with `pred(n)` at stage n + 1.
    pub fn decidable(name: &str, pred: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        Self::new(name, move |s| (0..s).filter(|&n| pred(n)).collect())
    }

    pub fn empty() -> Self {
        Self::decidable("empty", |_| false)
    }

    pub fn all() -> Self {
        Self::decidable("all", |_| true)
    }

    pub fn finite(items: &[u64]) -> Self {
        let set: BTreeSet<u64> = items.iter().copied().collect();
        Self::decidable(&format!("finite{items:?}"), move |n| set.contains(&n))
    }

    pub fn at(&self, stage: u64) -> BTreeSet<u64> {
        (self.f)(stage)
    }
}

/// Serializable description of the shipped enumerations and streams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetSpec {
    All,
    Empty,
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
    Multiples(u64),
}

impl SetSpec {
    pub fn enumeration(&self) -> Enumeration {
        match self.clone() {
            SetSpec::All => Enumeration::all(),
            SetSpec::Empty => Enumeration::empty(),
            SetSpec::Finite(v) => Enumeration::finite(&v),
            SetSpec::Cofinite(v) => Enumeration::decidable("cofinite", move |n| !v.contains(&n)),
            SetSpec::Multiples(k) => Enumeration::decidable("multiples", move |n| n % k == 0),
        }
    }

    pub fn is_cofinite(&self) -> bool {
        matches!(
            self,
            SetSpec::All | SetSpec::Cofinite(_) | SetSpec::Multiples(1)
        )
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, SetSpec::Empty | SetSpec::Finite(_))
    }

    /// Parse `all`, `empty`, `finite:1,2`, `cofinite:0,1`, `multiples:2`.
    pub fn parse(s: &str) -> Option<Self> {
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Option<Vec<u64>> {
            tail.split(',')
                .filter(|x| !x.is_empty())
                .map(|x| x.trim().parse().ok())
                .collect()
        };
        match head.trim() {
            "all" => Some(SetSpec::All),
            "empty" => Some(SetSpec::Empty),
            "finite" => Some(SetSpec::Finite(nums()?)),
            "cofinite" => Some(SetSpec::Cofinite(nums()?)),
            "multiples" => Some(SetSpec::Multiples(
                tail.trim().parse().ok().filter(|&k| k > 0)?,
            )),
            _ => None,
        }
    }
}
