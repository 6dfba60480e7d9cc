//! Atomic diagrams of structures with universe the natural numbers.
//!
//! Facts are graphs of operations, `sym(args) = res`. A fact is numbered by
//! iterated Cantor pairing of `(args..., res)` and interleaving the symbols:
//! `index = |symbols| * pair(args..., res) + position(sym)`, where
//! `pair(x) = x`, `pair(x, rest...) = cantor(x, pair(rest...))` and
//! `cantor(a, b) = (a + b)(a + b + 1)/2 + b`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub type Code = u64;
pub type BitIndex = u128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("malformed fact: {0}")]
    MalformedFact(String),
    #[error("corrupt stream: {0}")]
    CorruptStream(String),
    #[error("fact index overflow")]
    Overflow,
    #[error("signature mismatch: expected {expected}, found {found}")]
    Composition { expected: String, found: String },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("morphism violation: {0}")]
    MorphismViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolKind {
    Operation,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub id: u32,
    pub name: String,
    pub kind: SymbolKind,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub name: String,
    pub symbols: Vec<Symbol>,
}

fn sym(id: u32, name: &str, arity: usize) -> Symbol {
    let kind = if arity == 0 {
        SymbolKind::Constant
    } else {
        SymbolKind::Operation
    };
    Symbol {
        id,
        name: name.to_string(),
        kind,
        arity,
    }
}

/// Symbol ids of the group signature.
pub mod group_sym {
    pub const E: u32 = 0;
    pub const NEG: u32 = 1;
    pub const ADD: u32 = 2;
}

/// Symbol ids of the field signature.
pub mod field_sym {
    pub const ZERO: u32 = 0;
    pub const ONE: u32 = 1;
    pub const ADD: u32 = 2;
    pub const SUB: u32 = 3;
    pub const MUL: u32 = 4;
}

impl Signature {
    pub fn group() -> Self {
        Signature {
            name: "GROUP".into(),
            symbols: vec![sym(0, "e", 0), sym(1, "neg", 1), sym(2, "+", 2)],
        }
    }

    pub fn field() -> Self {
        Signature {
            name: "FIELD".into(),
            symbols: vec![
                sym(0, "0", 0),
                sym(1, "1", 0),
                sym(2, "+", 2),
                sym(3, "-", 2),
                sym(4, "*", 2),
            ],
        }
    }

    pub fn by_name(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn by_id(&self, id: u32) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.id == id)
    }

    fn position(&self, id: u32) -> Option<usize> {
        self.symbols.iter().position(|s| s.id == id)
    }
}

pub fn cantor_pair(a: u128, b: u128) -> Option<u128> {
    let s = a.checked_add(b)?;
    let t = s.checked_mul(s.checked_add(1)?)? / 2;
    t.checked_add(b)
}

pub fn cantor_unpair(z: u128) -> (u128, u128) {
    let tri = |w: u128| w.checked_mul(w + 1).map(|v| v / 2);
    // largest w with w(w+1)/2 <= z
    let mut w = ((((8.0 * (z as f64) + 1.0).sqrt()) - 1.0) / 2.0) as u128;
    while tri(w).is_none_or(|t| t > z) {
        w -= 1;
    }
    while tri(w + 1).is_some_and(|t| t <= z) {
        w += 1;
    }
    let b = z - tri(w).expect("checked above");
    (w - b, b)
}

/// Bijection N^k -> N for k >= 1.
pub fn tuple_code(xs: &[u128]) -> Option<u128> {
    let (last, init) = xs.split_last()?;
    init.iter()
        .rev()
        .try_fold(*last, |acc, &x| cantor_pair(x, acc))
}

pub fn tuple_decode(mut z: u128, k: usize) -> Vec<u128> {
    let mut out = Vec::with_capacity(k);
    for _ in 1..k {
        let (a, b) = cantor_unpair(z);
        out.push(a);
        z = b;
    }
    out.push(z);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub sym: u32,
    pub args: Vec<Code>,
    pub res: Code,
}

impl Fact {
    pub fn new(sym: u32, args: Vec<Code>, res: Code) -> Self {
        Fact { sym, args, res }
    }
}

/// Canonical bit index of a fact.
pub fn fact_index(sig: &Signature, fact: &Fact) -> Result<BitIndex, DiagramError> {
    let pos = sig
        .position(fact.sym)
        .ok_or_else(|| DiagramError::MalformedFact(format!("unknown symbol {}", fact.sym)))?;
    let arity = sig.symbols[pos].arity;
    if fact.args.len() != arity {
        return Err(DiagramError::MalformedFact(format!(
            "symbol {} takes {} arguments, got {}",
            sig.symbols[pos].name,
            arity,
            fact.args.len()
        )));
    }
    let mut xs: Vec<u128> = fact.args.iter().map(|&a| a as u128).collect();
    xs.push(fact.res as u128);
    let k = tuple_code(&xs).ok_or(DiagramError::Overflow)?;
    k.checked_mul(sig.symbols.len() as u128)
        .and_then(|v| v.checked_add(pos as u128))
        .ok_or(DiagramError::Overflow)
}

pub fn decode_fact(sig: &Signature, index: BitIndex) -> Result<Fact, DiagramError> {
    let s = sig.symbols.len() as u128;
    let symbol = &sig.symbols[(index % s) as usize];
    let xs = tuple_decode(index / s, symbol.arity + 1);
    let to_code = |x: u128| Code::try_from(x).map_err(|_| DiagramError::Overflow);
    let res = to_code(xs[symbol.arity])?;
    let args = xs[..symbol.arity]
        .iter()
        .map(|&x| to_code(x))
        .collect::<Result<_, _>>()?;
    Ok(Fact {
        sym: symbol.id,
        args,
        res,
    })
}

/// Three-valued bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tri {
    Zero,
    One,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub stage: u64,
    pub fact: Fact,
}

/// Operation and arguments, padded; symbols have arity at most 3.
type OpKey = (u32, [Code; 3]);

fn op_key(sym: u32, args: &[Code]) -> OpKey {
    let mut a = [Code::MAX; 3];
    for (slot, &x) in a.iter_mut().zip(args) {
        *slot = x;
    }
    (sym, a)
}

/// A committed prefix of an atomic diagram: the true operation facts together
/// with the stage at which each was committed. Every other fact about the same
/// operation and arguments is thereby committed false.
#[derive(Debug, Clone)]
pub struct Diagram {
    sig: Signature,
    events: Vec<Event>,
    table: HashMap<OpKey, (Code, u64)>,
    negatives: HashMap<BitIndex, u64>,
    size: Code,
    /// (stage, size) each time the size grew.
    growth: Vec<(u64, Code)>,
}

impl Diagram {
    pub fn new(sig: Signature) -> Self {
        Diagram {
            sig,
            events: Vec::new(),
            table: HashMap::new(),
            negatives: HashMap::new(),
            size: 0,
            growth: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// One more than the largest code mentioned so far.
    pub fn size(&self) -> Code {
        self.size
    }

    /// Size of the prefix visible at `stage`.
    pub fn size_at(&self, stage: u64) -> Code {
        let k = self.growth.partition_point(|&(s, _)| s <= stage);
        if k == 0 {
            0
        } else {
            self.growth[k - 1].1
        }
    }

    pub fn last_stage(&self) -> u64 {
        self.events.last().map_or(0, |e| e.stage)
    }

    /// Commit a true fact. Returns `Ok(false)` if it was already present.
    pub fn commit(&mut self, stage: u64, fact: Fact) -> Result<bool, DiagramError> {
        fact_index(&self.sig, &fact)?;
        if stage < self.last_stage() {
            return Err(DiagramError::CorruptStream(format!(
                "stage {stage} after stage {}",
                self.last_stage()
            )));
        }
        if fact.args.len() > 3 {
            return Err(DiagramError::MalformedFact(format!(
                "arity {} above 3",
                fact.args.len()
            )));
        }
        let key = op_key(fact.sym, &fact.args);
        if let Some(&(r, _)) = self.table.get(&key) {
            if r == fact.res {
                return Ok(false);
            }
            return Err(DiagramError::CorruptStream(format!(
                "two results {r} and {} for symbol {} on {:?}",
                fact.res, fact.sym, fact.args
            )));
        }
        if let Some(&s) = self.negatives.get(&fact_index(&self.sig, &fact)?) {
            return Err(DiagramError::CorruptStream(format!(
                "fact refuted at stage {s} then asserted"
            )));
        }
        let top = fact
            .args
            .iter()
            .copied()
            .chain([fact.res])
            .max()
            .unwrap_or(0);
        if top + 1 > self.size {
            self.size = top + 1;
            match self.growth.last_mut() {
                Some(last) if last.0 == stage => last.1 = self.size,
                _ => self.growth.push((stage, self.size)),
            }
        }
        self.table.insert(key, (fact.res, stage));
        self.events.push(Event { stage, fact });
        Ok(true)
    }

    /// Record an explicit 0 bit (only produced by raw-format readers).
    pub fn refute(&mut self, stage: u64, index: BitIndex) -> Result<(), DiagramError> {
        let fact = decode_fact(&self.sig, index)?;
        if self
            .table
            .get(&op_key(fact.sym, &fact.args))
            .is_some_and(|&(r, _)| r == fact.res)
        {
            return Err(DiagramError::CorruptStream(format!(
                "bit {index} asserted then refuted"
            )));
        }
        self.negatives.entry(index).or_insert(stage);
        Ok(())
    }

    /// Result of `sym(args)` if committed by `stage`.
    pub fn read_op(&self, stage: u64, sym: u32, args: &[Code]) -> Option<Code> {
        if args.len() > 3 {
            return None;
        }
        match self.table.get(&op_key(sym, args)) {
            Some(&(r, s)) if s <= stage => Some(r),
            _ => None,
        }
    }

    /// Result of `sym(args)` at the latest committed stage.
    pub fn op(&self, sym: u32, args: &[Code]) -> Option<Code> {
        if args.len() > 3 {
            return None;
        }
        self.table.get(&op_key(sym, args)).map(|&(r, _)| r)
    }

    pub fn read_named(
        &self,
        stage: u64,
        name: &str,
        args: &[Code],
    ) -> Result<Option<Code>, DiagramError> {
        let s = self
            .sig
            .by_name(name)
            .ok_or_else(|| DiagramError::MalformedFact(format!("unknown symbol {name}")))?;
        if s.arity != args.len() {
            return Err(DiagramError::MalformedFact(format!(
                "arity mismatch for {name}"
            )));
        }
        Ok(self.read_op(stage, s.id, args))
    }

    pub fn bit(&self, index: BitIndex, stage: u64) -> Result<Tri, DiagramError> {
        let fact = decode_fact(&self.sig, index)?;
        if let Some(r) = self.read_op(stage, fact.sym, &fact.args) {
            return Ok(if r == fact.res { Tri::One } else { Tri::Zero });
        }
        Ok(match self.negatives.get(&index) {
            Some(&s) if s <= stage => Tri::Zero,
            _ => Tri::Unknown,
        })
    }

    /// Prefix of the diagram visible at `stage`.
    pub fn truncate(&self, stage: u64) -> Diagram {
        let mut d = Diagram::new(self.sig.clone());
        for e in self.events.iter().take_while(|e| e.stage <= stage) {
            d.commit(e.stage, e.fact.clone())
                .expect("prefix of a valid diagram");
        }
        d
    }

    fn symbol_name(&self, id: u32) -> String {
        self.sig
            .by_id(id)
            .map(|s| s.name.clone())
            .unwrap_or_default()
    }

    /// Full JSONL form, one event per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let bit = fact_index(&self.sig, &e.fact).expect("committed facts are well formed");
            let line = JsonEvent {
                stage: e.stage,
                fact: JsonFact {
                    sym: self.symbol_name(e.fact.sym),
                    args: e.fact.args.clone(),
                    res: e.fact.res,
                },
                bit,
            };
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
        out
    }

    /// Raw JSONL form: only bit numbers, values and stages.
    pub fn to_raw_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let bit = fact_index(&self.sig, &e.fact).expect("committed facts are well formed");
            let line = RawEvent {
                bit,
                val: 1,
                stage: e.stage,
            };
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
        out
    }

    /// Parse either JSONL form; the `bit` field must match the fact.
    pub fn from_jsonl(sig: Signature, text: &str) -> Result<Diagram, DiagramError> {
        let mut d = Diagram::new(sig);
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |m: String| DiagramError::CorruptStream(format!("line {}: {m}", lineno + 1));
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
            if v.get("fact").is_some() {
                let ev: JsonEvent = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
                let s = d
                    .sig
                    .by_name(&ev.fact.sym)
                    .ok_or_else(|| bad(format!("symbol {}", ev.fact.sym)))?;
                let fact = Fact::new(s.id, ev.fact.args, ev.fact.res);
                if fact_index(&d.sig, &fact)? != ev.bit {
                    return Err(bad(format!("bit {} does not match fact", ev.bit)));
                }
                d.commit(ev.stage, fact).map_err(|e| bad(e.to_string()))?;
            } else {
                let ev: RawEvent = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
                match ev.val {
                    1 => {
                        let fact = decode_fact(&d.sig, ev.bit)?;
                        d.commit(ev.stage, fact).map_err(|e| bad(e.to_string()))?;
                    }
                    0 => d.refute(ev.stage, ev.bit).map_err(|e| bad(e.to_string()))?,
                    other => return Err(bad(format!("bit value {other}"))),
                }
            }
        }
        Ok(d)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonFact {
    sym: String,
    args: Vec<Code>,
    res: Code,
}

#[derive(Serialize, Deserialize)]
struct JsonEvent {
    stage: u64,
    fact: JsonFact,
    bit: BitIndex,
}

#[derive(Serialize, Deserialize)]
struct RawEvent {
    bit: BitIndex,
    val: u8,
    stage: u64,
}

/// Result of auditing an event sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub events: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check stage monotonicity and functionality of a raw event sequence.
pub fn audit_events(sig: &Signature, events: &[Event]) -> AuditReport {
    let mut seen: HashMap<(u32, Vec<Code>), Code> = HashMap::new();
    let mut last = 0;
    let mut violations = Vec::new();
    for (i, e) in events.iter().enumerate() {
        if e.stage < last {
            violations.push(format!("event {i}: stage {} after {last}", e.stage));
        }
        last = last.max(e.stage);
        if let Err(err) = fact_index(sig, &e.fact) {
            violations.push(format!("event {i}: {err}"));
        }
        match seen.get(&(e.fact.sym, e.fact.args.clone())) {
            Some(&r) if r != e.fact.res => violations.push(format!(
                "event {i}: symbol {} on {:?} has results {r} and {}",
                e.fact.sym, e.fact.args, e.fact.res
            )),
            _ => {
                seen.insert((e.fact.sym, e.fact.args.clone()), e.fact.res);
            }
        }
    }
    AuditReport {
        events: events.len(),
        violations,
    }
}

pub fn audit(d: &Diagram) -> AuditReport {
    audit_events(&d.sig, &d.events)
}

/// A construction that emits a diagram stage by stage.
pub trait Emitter {
    fn diagram(&self) -> &Diagram;
    /// Number of stages completed.
    fn stage(&self) -> u64;
    /// Run one more stage.
    fn step(&mut self) -> Result<(), DiagramError>;

    fn run_to(&mut self, stage: u64) -> Result<&Diagram, DiagramError> {
        while self.stage() < stage {
            self.step()?;
        }
        Ok(self.diagram())
    }
}

/// Finite prefix of a {0,1} sequence; bit n is visible from stage n + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPrefix(pub Vec<bool>);

impl BitPrefix {
    pub fn from_fn(len: usize, f: impl Fn(u64) -> bool) -> Self {
        BitPrefix((0..len as u64).map(f).collect())
    }

    pub fn get(&self, n: u64) -> Option<bool> {
        self.0.get(n as usize).copied()
    }
}

/// Countably many diagrams interleaved; component i's bit n sits at cantor(i, n).
#[derive(Debug, Clone)]
pub struct JoinedStream {
    components: Vec<Diagram>,
}

pub fn join(streams: Vec<Diagram>) -> JoinedStream {
    JoinedStream {
        components: streams,
    }
}

impl JoinedStream {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn project(&self, i: usize) -> Option<&Diagram> {
        self.components.get(i)
    }

    pub fn global_index(i: usize, bit: BitIndex) -> Option<BitIndex> {
        cantor_pair(i as u128, bit)
    }

    pub fn bit(&self, global: BitIndex, stage: u64) -> Result<Tri, DiagramError> {
        let (i, n) = cantor_unpair(global);
        match self.components.get(i as usize) {
            Some(d) => d.bit(n, stage),
            None => Ok(Tri::Unknown),
        }
    }

    /// All committed global bits, ordered by stage then global index.
    pub fn committed_bits(&self) -> Result<Vec<(u64, BitIndex)>, DiagramError> {
        let mut out = Vec::new();
        for (i, d) in self.components.iter().enumerate() {
            for e in d.events() {
                let b = fact_index(d.signature(), &e.fact)?;
                out.push((
                    e.stage,
                    Self::global_index(i, b).ok_or(DiagramError::Overflow)?,
                ));
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Kind tag checked when operators are composed.
pub type Kind = String;

type OpFn<I, O> = Arc<dyn Fn(&I) -> Result<O, DiagramError> + Send + Sync>;

/// A map on committed prefixes.
pub struct Operator<I, O> {
    pub input: Kind,
    pub output: Kind,
    f: OpFn<I, O>,
}

impl<I, O> Clone for Operator<I, O> {
    fn clone(&self) -> Self {
        Operator {
            input: self.input.clone(),
            output: self.output.clone(),
            f: self.f.clone(),
        }
    }
}

impl<I: 'static, O: 'static> Operator<I, O> {
    pub fn new(
        input: &str,
        output: &str,
        f: impl Fn(&I) -> Result<O, DiagramError> + Send + Sync + 'static,
    ) -> Self {
        Operator {
            input: input.into(),
            output: output.into(),
            f: Arc::new(f),
        }
    }

    pub fn apply(&self, x: &I) -> Result<O, DiagramError> {
        (self.f)(x)
    }

    /// Identity on prefixes of the given kind.
    pub fn identity(kind: &str) -> Operator<I, I>
    where
        I: Clone,
    {
        Operator::new(kind, kind, |x: &I| Ok(x.clone()))
    }
}

/// `compose(g, f)(x) = g(f(x))`.
pub fn compose<I: 'static, M: 'static, O: 'static>(
    g: &Operator<M, O>,
    f: &Operator<I, M>,
) -> Result<Operator<I, O>, DiagramError> {
    if f.output != g.input {
        return Err(DiagramError::Composition {
            expected: g.input.clone(),
            found: f.output.clone(),
        });
    }
    let (g, f) = (g.clone(), f.clone());
    let input = f.input.clone();
    let output = g.output.clone();
    Ok(Operator::new(&input, &output, move |x: &I| {
        g.apply(&f.apply(x)?)
    }))
}

/// Emits the two-component join of a fixed diagram and the operator's output.
pub fn pair_with_constant<I: 'static>(
    c: Diagram,
    op: &Operator<I, Diagram>,
) -> Operator<I, JoinedStream> {
    let op = op.clone();
    let input = op.input.clone();
    Operator::new(&input, "JOIN", move |x: &I| {
        Ok(join(vec![c.clone(), op.apply(x)?]))
    })
}

/// A computable permutation of the codes: within each block of `block`
/// consecutive codes, a shuffle drawn from `seed` and the block number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relabel {
    pub seed: u64,
    pub block: u64,
}

impl Relabel {
    pub fn new(seed: u64, block: u64) -> Self {
        assert!(block > 0);
        Relabel { seed, block }
    }

    fn perm(&self, b: u64) -> Vec<u64> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
            self.seed ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let mut p: Vec<u64> = (0..self.block).collect();
        p.shuffle(&mut rng);
        p
    }

    pub fn apply(&self, c: Code) -> Code {
        let b = c / self.block;
        b * self.block + self.perm(b)[(c % self.block) as usize]
    }

    pub fn invert(&self, c: Code) -> Code {
        let b = c / self.block;
        let p = self.perm(b);
        let i = p
            .iter()
            .position(|&x| x == c % self.block)
            .expect("permutation");
        b * self.block + i as Code
    }

    pub fn fact(&self, f: &Fact) -> Fact {
        Fact::new(
            f.sym,
            f.args.iter().map(|&a| self.apply(a)).collect(),
            self.apply(f.res),
        )
    }
}

/// The isomorphic copy of an emitted structure under a `Relabel`.
pub struct Relabeled<E: Emitter> {
    inner: E,
    map: Relabel,
    diagram: Diagram,
    copied: usize,
}

impl<E: Emitter> Relabeled<E> {
    pub fn new(inner: E, map: Relabel) -> Self {
        let sig = inner.diagram().signature().clone();
        Relabeled {
            inner,
            map,
            diagram: Diagram::new(sig),
            copied: 0,
        }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn relabel(&self) -> Relabel {
        self.map
    }
}

impl<E: Emitter> Emitter for Relabeled<E> {
    fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    fn stage(&self) -> u64 {
        self.inner.stage()
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        self.inner.step()?;
        let events = self.inner.diagram().events();
        for e in &events[self.copied..] {
            self.diagram.commit(e.stage, self.map.fact(&e.fact))?;
        }
        self.copied = events.len();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabel_is_a_bijection() {
        let r = Relabel::new(7, 16);
        let img: std::collections::BTreeSet<Code> = (0..64).map(|c| r.apply(c)).collect();
        assert_eq!(img, (0..64).collect());
        for c in 0..200 {
            assert_eq!(r.invert(r.apply(c)), c);
        }
        assert_ne!(
            (0..16).map(|c| r.apply(c)).collect::<Vec<_>>(),
            (0..16).collect::<Vec<_>>()
        );
    }

    #[test]
    fn frozen_indices() {
        let g = Signature::group();
        assert_eq!(
            fact_index(&g, &Fact::new(group_sym::E, vec![], 0)).unwrap(),
            0
        );
        assert_eq!(
            fact_index(&g, &Fact::new(group_sym::ADD, vec![0, 0], 0)).unwrap(),
            2
        );
        // cantor(2, 3) = 18, cantor(1, 18) = 208, 3 * 208 + 2 = 626
        assert_eq!(
            fact_index(&g, &Fact::new(group_sym::ADD, vec![1, 2], 3)).unwrap(),
            626
        );
        assert_eq!(
            fact_index(&g, &Fact::new(group_sym::NEG, vec![1], 2)).unwrap(),
            3 * 8 + 1
        );
        assert!(fact_index(&g, &Fact::new(group_sym::ADD, vec![1], 2)).is_err());
        assert!(fact_index(&g, &Fact::new(9, vec![], 2)).is_err());
    }

    #[test]
    fn round_trip_small_indices() {
        for sig in [Signature::group(), Signature::field()] {
            for i in 0..100_000u128 {
                let f = decode_fact(&sig, i).unwrap();
                assert_eq!(fact_index(&sig, &f).unwrap(), i);
            }
        }
    }

    fn z_mod_fragment() -> Diagram {
        let mut d = Diagram::new(Signature::group());
        d.commit(1, Fact::new(group_sym::E, vec![], 0)).unwrap();
        d.commit(2, Fact::new(group_sym::ADD, vec![1, 2], 3))
            .unwrap();
        d.commit(5, Fact::new(group_sym::NEG, vec![1], 4)).unwrap();
        d
    }

    #[test]
    fn reads_are_monotone_and_three_valued() {
        let d = z_mod_fragment();
        assert_eq!(d.read_op(0, group_sym::ADD, &[1, 2]), None);
        assert_eq!(d.read_op(2, group_sym::ADD, &[1, 2]), Some(3));
        assert_eq!(d.read_op(100, group_sym::ADD, &[1, 2]), Some(3));
        assert_eq!(d.read_named(10, "neg", &[1]).unwrap(), Some(4));
        let one = fact_index(d.signature(), &Fact::new(group_sym::ADD, vec![1, 2], 3)).unwrap();
        let zero = fact_index(d.signature(), &Fact::new(group_sym::ADD, vec![1, 2], 7)).unwrap();
        assert_eq!(d.bit(one, 1).unwrap(), Tri::Unknown);
        assert_eq!(d.bit(one, 2).unwrap(), Tri::One);
        assert_eq!(d.bit(zero, 2).unwrap(), Tri::Zero);
        assert!(audit(&d).clean());
        let sizes: Vec<Code> = (0..7).map(|s| d.size_at(s)).collect();
        assert_eq!(sizes, vec![0, 1, 4, 4, 4, 5, 5]);
        assert!((0..7).all(|s| d.size_at(s) == d.truncate(s).size()));
    }

    #[test]
    fn contradictions_are_rejected() {
        let mut d = z_mod_fragment();
        assert!(matches!(
            d.commit(6, Fact::new(group_sym::ADD, vec![1, 2], 9)),
            Err(DiagramError::CorruptStream(_))
        ));
        assert!(d
            .commit(0, Fact::new(group_sym::ADD, vec![0, 0], 0))
            .is_err());
        let events = vec![
            Event {
                stage: 0,
                fact: Fact::new(group_sym::ADD, vec![0, 0], 0),
            },
            Event {
                stage: 1,
                fact: Fact::new(group_sym::ADD, vec![0, 0], 1),
            },
        ];
        assert_eq!(
            audit_events(&Signature::group(), &events).violations.len(),
            1
        );
    }

    #[test]
    fn jsonl_round_trip() {
        let d = z_mod_fragment();
        let text = d.to_jsonl();
        assert!(text
            .starts_with("{\"stage\":1,\"fact\":{\"sym\":\"e\",\"args\":[],\"res\":0},\"bit\":0}"));
        let back = Diagram::from_jsonl(Signature::group(), &text).unwrap();
        assert_eq!(back.events(), d.events());
        let raw = Diagram::from_jsonl(Signature::group(), &d.to_raw_jsonl()).unwrap();
        assert_eq!(raw.events(), d.events());
        let bad = text.replace("\"bit\":626", "\"bit\":627");
        assert!(Diagram::from_jsonl(Signature::group(), &bad).is_err());
        let refuted =
            Diagram::from_jsonl(Signature::group(), "{\"bit\":626,\"val\":0,\"stage\":0}\n")
                .unwrap();
        assert_eq!(refuted.bit(626, 0).unwrap(), Tri::Zero);
        assert!(Diagram::from_jsonl(
            Signature::group(),
            "{\"bit\":626,\"val\":0,\"stage\":0}\n{\"bit\":626,\"val\":1,\"stage\":1}"
        )
        .is_err());
    }

    #[test]
    fn join_and_project() {
        let a = z_mod_fragment();
        let mut b = Diagram::new(Signature::group());
        b.commit(0, Fact::new(group_sym::E, vec![], 5)).unwrap();
        let j = join(vec![a.clone(), b.clone()]);
        assert_eq!(j.project(1).unwrap().events(), b.events());
        let single = join(vec![a.clone()]);
        assert_eq!(single.project(0).unwrap().events(), a.events());
        let e5 = fact_index(b.signature(), &Fact::new(group_sym::E, vec![], 5)).unwrap();
        let g = JoinedStream::global_index(1, e5).unwrap();
        assert_eq!(j.bit(g, 0).unwrap(), Tri::One);
        assert_eq!(j.committed_bits().unwrap().len(), 4);
    }

    #[test]
    fn composition() {
        let id = Operator::<Diagram, Diagram>::identity("GROUP");
        let both = compose(&id, &id).unwrap();
        let d = z_mod_fragment();
        assert_eq!(both.apply(&d).unwrap().events(), d.events());
        let to_field =
            Operator::<Diagram, Diagram>::new("FIELD", "FIELD", |d: &Diagram| Ok(d.clone()));
        assert!(compose(&to_field, &id).is_err());
        let paired = pair_with_constant(d.clone(), &id);
        let j = paired.apply(&d).unwrap();
        assert_eq!(j.len(), 2);
    }

    #[test]
    fn unpair_inverts_pair() {
        for a in 0..50u128 {
            for b in 0..50u128 {
                assert_eq!(cantor_unpair(cantor_pair(a, b).unwrap()), (a, b));
            }
        }
        let big = cantor_pair(1 << 60, 12345).unwrap();
        assert_eq!(cantor_unpair(big), (1 << 60, 12345));
        assert_eq!(
            tuple_decode(tuple_code(&[4, 5, 6]).unwrap(), 3),
            vec![4, 5, 6]
        );
    }
}
