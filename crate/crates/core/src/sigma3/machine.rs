//! The per-prime procedure for a triple (m, n, k), m < n, N = n + k.
//!
//! The state at stage s is the key exponent r and a side for each l <= N:
//! every G_l holds p^-(r-1), the N-side groups also hold p^-r, and none
//! holds p^-(r+1). Groups past N are M-side until the first promotion and
//! N-side afterwards.

use serde::Serialize;
use thiserror::Error;

use super::chips::Chip;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    M,
    N,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("machine expected stage {expected}, got {got}")]
    Sequencing { expected: u64, got: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MachineState {
    /// First stage this state holds at.
    pub stage: u64,
    pub r: u32,
    pub promoted: bool,
    pub tags: Vec<Side>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleMachine {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub big_n: usize,
    /// For l <= N: latest stage with a chip c_{j,l} <= N, j before l, and that j.
    lookback: Vec<Option<(u64, usize)>>,
    history: Vec<MachineState>,
    /// Next global stage to process.
    next: u64,
}

impl TripleMachine {
    pub fn new(m: usize, n: usize, k: usize) -> Self {
        assert!(m < n, "triples have m < n");
        let big_n = n + k;
        let mut tags = vec![Side::M; big_n + 1];
        tags[n] = Side::N;
        TripleMachine {
            m,
            n,
            k,
            big_n,
            lookback: vec![None; big_n + 1],
            history: vec![MachineState {
                stage: 0,
                r: 1,
                promoted: false,
                tags,
            }],
            next: 0,
        }
    }

    /// The order m, n, 0, 1, ..., N with m and n removed from the tail.
    pub fn order(&self) -> Vec<usize> {
        let mut v = vec![self.m, self.n];
        v.extend((0..=self.big_n).filter(|&l| l != self.m && l != self.n));
        v
    }

    fn rank(&self, l: usize) -> usize {
        if l == self.m {
            0
        } else if l == self.n {
            1
        } else {
            2 + l - (l > self.m) as usize - (l > self.n) as usize
        }
    }

    pub fn current(&self) -> &MachineState {
        self.history.last().expect("initial state")
    }

    /// State holding at `stage` (processed chips below it).
    pub fn state_at(&self, stage: u64) -> &MachineState {
        assert!(stage <= self.next, "machine run to {} only", self.next);
        let i = self.history.partition_point(|h| h.stage <= stage);
        &self.history[i - 1]
    }

    pub fn history(&self) -> &[MachineState] {
        &self.history
    }

    /// Stages processed so far; states are known for stages <= this.
    pub fn stage(&self) -> u64 {
        self.next
    }

    pub fn side_at(&self, l: usize, stage: u64) -> Side {
        let st = self.state_at(stage);
        match st.tags.get(l) {
            Some(&s) => s,
            None if st.promoted => Side::N,
            None => Side::M,
        }
    }

    /// Whether p^-e lies in G_l at `stage`.
    pub fn admits(&self, l: usize, e: u32, stage: u64) -> bool {
        let st = self.state_at(stage);
        e < st.r || (e == st.r && self.side_at(l, stage) == Side::N)
    }

    /// Largest e with p^-e in G_l at `stage`.
    pub fn exponent(&self, l: usize, stage: u64) -> u32 {
        let r = self.state_at(stage).r;
        if self.side_at(l, stage) == Side::N {
            r
        } else {
            r - 1
        }
    }

    /// Process the chip of global stage `chip.stage`, producing the state of
    /// the following stage. Returns whether a promotion happened.
    pub fn step(&mut self, chip: &Chip) -> Result<bool, MachineError> {
        if chip.stage != self.next {
            return Err(MachineError::Sequencing {
                expected: self.next,
                got: chip.stage,
            });
        }
        let nn = self.big_n;
        if chip.value <= nn as u64 && chip.n <= nn {
            let (j, l) = if self.rank(chip.m) < self.rank(chip.n) {
                (chip.m, chip.n)
            } else {
                (chip.n, chip.m)
            };
            if l != self.m && l != self.n {
                self.lookback[l] = Some((chip.stage, j));
            }
        }
        let cur = self.current();
        let chip_stage = (chip.m, chip.n, chip.value) == (self.m, self.n, self.k as u64);
        let trigger = !chip_stage
            && (0..=nn)
                .any(|l| matches!(self.lookback[l], Some((_, j)) if cur.tags[l] != cur.tags[j]));
        let promote = chip_stage || trigger;
        if promote {
            let r = cur.r + 1;
            let mut tags = vec![Side::M; nn + 1];
            for l in self.order() {
                tags[l] = if l == self.m {
                    Side::M
                } else if l == self.n {
                    Side::N
                } else {
                    match self.lookback[l] {
                        Some((_, j)) => tags[j],
                        None => Side::M,
                    }
                };
            }
            self.history.push(MachineState {
                stage: chip.stage + 1,
                r,
                promoted: true,
                tags,
            });
        }
        self.next += 1;
        Ok(promote)
    }

    /// Fault injection for auditor tests: flip the side of `l` in the
    /// current state.
    pub fn flip_tag(&mut self, l: usize) {
        let st = self.history.last_mut().expect("initial state");
        st.tags[l] = match st.tags[l] {
            Side::M => Side::N,
            Side::N => Side::M,
        };
    }

    pub fn lookback(&self) -> &[Option<(u64, usize)>] {
        &self.lookback
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chip(stage: u64, m: usize, n: usize, value: u64) -> Chip {
        Chip {
            stage,
            m,
            n,
            value,
            expansionary: false,
        }
    }

    #[test]
    fn first_chip_promotes() {
        let mut t = TripleMachine::new(1, 3, 2);
        assert_eq!(t.order(), [1, 3, 0, 2, 4, 5]);
        assert!(t.admits(3, 1, 0) && !t.admits(1, 1, 0) && !t.admits(9, 1, 0));
        assert!(t.step(&chip(0, 1, 3, 2)).unwrap());
        let st = t.current();
        assert_eq!(st.r, 2);
        assert_eq!(
            st.tags,
            [Side::M, Side::M, Side::M, Side::N, Side::M, Side::M]
        );
        assert!(t.admits(9, 2, 1) && !t.admits(0, 2, 1) && t.admits(0, 1, 1));
        assert!(t.admits(9, 1, 0) == false);
    }

    #[test]
    fn idle_without_relevant_chips() {
        let mut t = TripleMachine::new(0, 1, 1);
        assert!(!t.step(&chip(0, 0, 1, 7)).unwrap());
        assert!(!t.step(&chip(1, 2, 5, 0)).unwrap());
        assert_eq!(t.history().len(), 1);
    }

    #[test]
    fn lookback_triggers_promotion() {
        // c_{n, l0} with value <= N, l0 on the M side
        let mut t = TripleMachine::new(0, 1, 2);
        assert!(t.step(&chip(0, 1, 2, 1)).unwrap());
        assert_eq!(t.lookback()[2], Some((0, 1)));
        assert_eq!(t.current().tags[2], Side::N);
        assert_eq!(t.current().r, 2);
        // consistent now: nothing more happens
        assert!(!t.step(&chip(1, 0, 5, 0)).unwrap());
    }

    #[test]
    fn stage_gap_is_an_error() {
        let mut t = TripleMachine::new(0, 1, 0);
        assert!(t.step(&chip(3, 0, 1, 0)).is_err());
    }
}
