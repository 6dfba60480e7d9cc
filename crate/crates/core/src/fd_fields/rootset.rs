//! The root-set operator: which integer polynomials have a root, confirmed
//! through committed facts.
//!
//! Polynomials p_0, p_1, ... are listed by level h = max(height, degree),
//! h >= 1. Within a level: by degree, then by the coefficient vector read from
//! the leading coefficient down, each coordinate running from -h to h.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::diagrams::{cantor_unpair, Code, DiagramError, Emitter};

use super::view::FieldView;

struct PolyList {
    polys: Vec<Vec<i64>>,
    level: i64,
}

fn list() -> &'static Mutex<PolyList> {
    static L: OnceLock<Mutex<PolyList>> = OnceLock::new();
    L.get_or_init(|| {
        Mutex::new(PolyList {
            polys: Vec::new(),
            level: 0,
        })
    })
}

fn level_polys(h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for d in 1..=h as usize {
        // digits[0] is the leading coefficient
        let mut digits = vec![-h; d + 1];
        loop {
            let height = digits.iter().map(|c| c.abs()).max().unwrap_or(0);
            if digits[0] != 0 && height.max(d as i64) == h {
                out.push(digits.iter().rev().copied().collect());
            }
            let mut i = d + 1;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if digits[i] < h {
                    digits[i] += 1;
                    break;
                }
                digits[i] = -h;
            }
            if i == 0 && digits.iter().all(|&c| c == -h) {
                break;
            }
        }
    }
    out
}

fn ensure(n: usize) -> std::sync::MutexGuard<'static, PolyList> {
    let mut l = list().lock().unwrap();
    while l.polys.len() <= n {
        l.level += 1;
        let h = l.level;
        l.polys.extend(level_polys(h));
    }
    l
}

/// Coefficients (low first) of p_n.
pub fn int_poly(n: usize) -> Vec<i64> {
    ensure(n).polys[n].clone()
}

/// Position of a polynomial in the list (coefficients low first, no
/// trailing zeros).
pub fn int_poly_index(c: &[i64]) -> Option<usize> {
    let d = c.len().checked_sub(1)?;
    if d == 0 || c[d] == 0 {
        return None;
    }
    let h = c.iter().map(|x| x.abs()).max()?.max(d as i64);
    let mut l = list().lock().unwrap();
    while l.level < h {
        l.level += 1;
        let lv = l.level;
        l.polys.extend(level_polys(lv));
    }
    l.polys.iter().position(|p| p == c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootWitness {
    /// Element committed as a root.
    pub code: Code,
    pub stage: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct RootSetConfig {
    /// New (polynomial, element) pairs tried per stage, in Cantor order.
    pub pairs_per_stage: usize,
    /// Pairs waiting on uncommitted facts re-tried per stage.
    pub retries_per_stage: usize,
}

impl Default for RootSetConfig {
    fn default() -> Self {
        RootSetConfig {
            pairs_per_stage: 16,
            retries_per_stage: 16,
        }
    }
}

/// Runs a field emitter and confirms n once some element e has
/// p_n(e) = 0 evaluated entirely through committed facts.
pub struct RootSetOperator<E: Emitter> {
    inner: E,
    config: RootSetConfig,
    window: Option<Vec<usize>>,
    cursor: u128,
    retry: VecDeque<(usize, Code)>,
    confirmed: BTreeMap<usize, RootWitness>,
}

impl<E: Emitter> RootSetOperator<E> {
    pub fn new(inner: E, config: RootSetConfig) -> Self {
        RootSetOperator {
            inner,
            config,
            window: None,
            cursor: 0,
            retry: VecDeque::new(),
            confirmed: BTreeMap::new(),
        }
    }

    /// Restrict attention to the listed polynomial indices. Pairs are then
    /// visited element by element, each against the whole window.
    pub fn with_window(mut self, indices: Vec<usize>) -> Self {
        assert!(!indices.is_empty());
        self.window = Some(indices);
        self
    }

    pub fn with_defaults(inner: E) -> Self {
        Self::new(inner, RootSetConfig::default())
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn stage(&self) -> u64 {
        self.inner.stage()
    }

    pub fn confirmed(&self) -> &BTreeMap<usize, RootWitness> {
        &self.confirmed
    }

    /// Confirmed indices below `n` as of `stage`.
    pub fn confirmed_below(&self, n: usize, stage: u64) -> BTreeSet<usize> {
        self.confirmed
            .range(..n)
            .filter(|(_, w)| w.stage <= stage)
            .map(|(&k, _)| k)
            .collect()
    }

    pub fn step(&mut self) -> Result<(), DiagramError> {
        let stage = self.inner.stage();
        self.inner.step()?;
        let d = self.inner.diagram();
        let view = FieldView::latest(d);
        let confirmed = &mut self.confirmed;
        for _ in 0..self.config.retries_per_stage.min(self.retry.len()) {
            let (n, e) = self.retry.pop_front().expect("nonempty");
            if !try_pair(confirmed, &view, n, e, stage) {
                self.retry.push_back((n, e));
            }
        }
        for _ in 0..self.config.pairs_per_stage {
            let (n, e) = match &self.window {
                None => cantor_unpair(self.cursor),
                Some(w) => {
                    let len = w.len() as u128;
                    (w[(self.cursor % len) as usize] as u128, self.cursor / len)
                }
            };
            if e as Code >= d.size() {
                break;
            }
            self.cursor += 1;
            if !try_pair(confirmed, &view, n as usize, e as Code, stage) {
                self.retry.push_back((n as usize, e as Code));
            }
        }
        Ok(())
    }

    pub fn run_to(&mut self, stage: u64) -> Result<(), DiagramError> {
        while self.inner.stage() < stage {
            self.step()?;
        }
        Ok(())
    }
}

/// False if the evaluation is still waiting on uncommitted facts.
fn try_pair(
    confirmed: &mut BTreeMap<usize, RootWitness>,
    view: &FieldView,
    n: usize,
    e: Code,
    stage: u64,
) -> bool {
    if confirmed.contains_key(&n) {
        return true;
    }
    match view.eval_int_poly(&int_poly(n), e) {
        Some(v) if Some(v) == view.zero() => {
            confirmed.insert(n, RootWitness { code: e, stage });
            true
        }
        Some(_) => true,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::cyclo::Cyclo;
    use crate::exact_algebra::field::{int, Field};
    use crate::fd_fields::cyclotomic::{cyclo_emitter, CycloTower};

    #[test]
    fn enumeration_prefix() {
        assert_eq!(int_poly(0), vec![-1, -1]);
        assert_eq!(int_poly(1), vec![0, -1]);
        assert_eq!(int_poly(5), vec![1, 1]);
        assert_eq!(int_poly_index(&[1, 1]), Some(5));
        // level 1 has the six polynomials of degree 1 with coefficients in {-1, 0, 1}
        assert_eq!(int_poly(6).iter().map(|c| c.abs()).max(), Some(2));
        let i = int_poly_index(&[-4, 0, 1]).unwrap();
        assert_eq!(int_poly(i), vec![-4, 0, 1]);
        assert!(int_poly_index(&[3]).is_none());
    }

    /// Rational root test: a root p/q has p | c_0 and q | c_d.
    fn has_rational_root(c: &[i64]) -> bool {
        if c[0] == 0 {
            return true;
        }
        let d = c.len() - 1;
        let divs = |n: i64| (1..=n.abs()).filter(move |k| n % k == 0);
        divs(c[0]).any(|p| {
            divs(c[d]).any(|q| {
                [1i128, -1].iter().any(|&s| {
                    let (num, den) = (s * p as i128, q as i128);
                    let v: i128 = c
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| a as i128 * num.pow(i as u32) * den.pow((d - i) as u32))
                        .sum();
                    v == 0
                })
            })
        })
    }

    #[test]
    fn rationals_root_set() {
        let mut op = RootSetOperator::with_defaults(cyclo_emitter(CycloTower::fixed(1).unwrap()));
        op.run_to(2000).unwrap();
        let four = int_poly_index(&[-4, 0, 1]).unwrap();
        let two = int_poly_index(&[-2, 0, 1]).unwrap();
        assert!(!op.confirmed().contains_key(&two));
        let got = op.confirmed_below(40, u64::MAX);
        let want: BTreeSet<usize> = (0..40)
            .filter(|&n| has_rational_root(&int_poly(n)))
            .collect();
        assert_eq!(got, want);
        let mut w = RootSetOperator::with_defaults(cyclo_emitter(CycloTower::fixed(1).unwrap()))
            .with_window(vec![four, two]);
        w.run_to(200).unwrap();
        let root = w.confirmed()[&four].code;
        let x = w.inner().element(root).unwrap();
        assert_eq!(x.mul(x), Cyclo::rational(int(4)));
        assert!(!w.confirmed().contains_key(&two));
    }

    #[test]
    fn permuted_copies_agree() {
        use crate::diagrams::{Relabel, Relabeled};
        let window: Vec<usize> = (0..120).collect();
        let mut sets = Vec::new();
        for seed in 0..3 {
            let e = Relabeled::new(
                cyclo_emitter(CycloTower::fixed(3).unwrap()),
                Relabel::new(seed, 16),
            );
            let mut op = RootSetOperator::with_defaults(e).with_window(window.clone());
            op.run_to(3000).unwrap();
            sets.push(op.confirmed_below(120, u64::MAX));
        }
        let zeta3 = int_poly_index(&[1, 1, 1]).unwrap();
        assert!(sets[0].contains(&zeta3));
        assert_eq!(sets[0], sets[1]);
        assert_eq!(sets[1], sets[2]);
    }
}
