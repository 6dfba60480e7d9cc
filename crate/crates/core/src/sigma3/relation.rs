//! Oracle families and computable predicates R(A, B, x, y, z) defining
//! A E B by "exists x, for all y, exists z".

use std::sync::Arc;

use crate::streams::BitStream;

/// Read access to a stream, capped by the caller's declared use bound.
pub struct Prefix<'a> {
    stream: &'a BitStream,
    len: u64,
}

impl<'a> Prefix<'a> {
    pub fn new(stream: &'a BitStream, len: u64) -> Self {
        Prefix { stream, len }
    }

    /// Bit `i`, or None past the use bound.
    pub fn get(&self, i: u64) -> Option<bool> {
        (i < self.len).then(|| self.stream.get(i))
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

pub trait Sigma3Relation: Send + Sync {
    fn name(&self) -> String;
    /// Number of leading bits of each stream a query may read.
    fn use_bound(&self, x: u64, y: u64, z: u64) -> u64;
    fn holds(&self, a: &Prefix, b: &Prefix, x: u64, y: u64, z: u64) -> bool;
}

/// E_0: (y <= x) or A(y) = B(y).
#[derive(Debug, Clone, Copy)]
pub struct E0Relation;

impl Sigma3Relation for E0Relation {
    fn name(&self) -> String {
        "e0".into()
    }

    fn use_bound(&self, _x: u64, y: u64, _z: u64) -> u64 {
        y + 1
    }

    fn holds(&self, a: &Prefix, b: &Prefix, x: u64, y: u64, _z: u64) -> bool {
        y <= x || a.get(y) == b.get(y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstRelation(pub bool);

impl Sigma3Relation for ConstRelation {
    fn name(&self) -> String {
        format!("const-{}", self.0)
    }

    fn use_bound(&self, _x: u64, _y: u64, _z: u64) -> u64 {
        0
    }

    fn holds(&self, _a: &Prefix, _b: &Prefix, _x: u64, _y: u64, _z: u64) -> bool {
        self.0
    }
}

/// A_0, A_1, ... given as a finite list. Indices past the list have no
/// stream; pairs touching them never pass an expansionary check.
#[derive(Debug, Clone, Default)]
pub struct OracleFamily {
    pub streams: Vec<BitStream>,
}

impl OracleFamily {
    pub fn new(streams: Vec<BitStream>) -> Self {
        OracleFamily { streams }
    }

    pub fn get(&self, i: usize) -> Option<&BitStream> {
        self.streams.get(i)
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    /// One `prefix|cycle` literal per line; blank lines and `#` comments skipped.
    pub fn parse(text: &str) -> Option<Self> {
        let streams = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(BitStream::parse)
            .collect::<Option<Vec<_>>>()?;
        Some(OracleFamily { streams })
    }

    /// Eight eventually periodic streams in four E_0 classes (indices
    /// {0,1}, {2,3}, {4,5}, {6,7}); members of a class differ at bit 0 only.
    pub fn e0_sample() -> Self {
        let lits = ["|0", "1|0", "|1", "0|1", "|01", "1|10", "|001", "1|010"];
        OracleFamily {
            streams: lits
                .iter()
                .map(|s| BitStream::parse(s).expect("literal"))
                .collect(),
        }
    }

    /// E_0 class labels of `e0_sample`.
    pub fn e0_sample_classes() -> Vec<usize> {
        vec![0, 0, 1, 1, 2, 2, 3, 3]
    }
}

pub fn relation_by_name(name: &str) -> Option<Arc<dyn Sigma3Relation>> {
    match name {
        "e0" => Some(Arc::new(E0Relation)),
        "const-true" => Some(Arc::new(ConstRelation(true))),
        "const-false" => Some(Arc::new(ConstRelation(false))),
        _ => None,
    }
}
