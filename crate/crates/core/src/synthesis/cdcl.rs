//! A small conflict-driven clause-learning SAT solver.

use std::collections::BinaryHeap;
use std::ops::Not;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lit(u32);

impl Lit {
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn negative(self) -> bool {
        self.0 & 1 == 1
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNSET: i8 = 0;

#[derive(Default)]
pub(crate) struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    head: usize,
    activity: Vec<f64>,
    bump: f64,
    heap: BinaryHeap<(u64, usize)>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    unsat: bool,
    pending: Vec<Lit>,
    model: Option<Vec<Lit>>,
}

fn luby(mut i: u64) -> u64 {
    let mut size = 1;
    let mut seq = 0;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

fn signed(value: i8, l: Lit) -> i8 {
    if l.negative() {
        -value
    } else {
        value
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            bump: 1.0,
            ..Default::default()
        }
    }

    pub fn new_lit(&mut self) -> Lit {
        let v = self.value.len();
        self.value.push(UNSET);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.push((0, v));
        Lit((v as u32) << 1)
    }

    fn lit_value(&self, l: Lit) -> i8 {
        signed(self.value[l.var()], l)
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.unsat {
            return;
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        match c.len() {
            0 => self.unsat = true,
            1 => self.pending.push(c[0]),
            _ => {
                self.attach(c);
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let id = self.clauses.len();
        self.watches[c[0].index()].push(id);
        self.watches[c[1].index()].push(id);
        self.clauses.push(c);
        id
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var();
        self.value[v] = if l.negative() { -1 } else { 1 };
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let falsified = !self.trail[self.head];
            self.head += 1;
            let mut watching = std::mem::take(&mut self.watches[falsified.index()]);
            let mut i = 0;
            let mut conflict = None;
            while i < watching.len() {
                let cid = watching[i];
                let clause = &mut self.clauses[cid];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let first_value = signed(self.value[first.var()], first);
                if first_value == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    if signed(self.value[l.var()], l) != -1 {
                        clause.swap(1, k);
                        self.watches[clause[1].index()].push(cid);
                        watching.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if first_value == -1 {
                    conflict = Some(cid);
                    break;
                }
                self.assign(first, Some(cid));
                i += 1;
            }
            let slot = &mut self.watches[falsified.index()];
            watching.append(slot);
            *slot = watching;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.bump;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
            self.heap = (0..self.value.len())
                .filter(|&v| self.value[v] == UNSET)
                .map(|v| (self.activity[v].to_bits(), v))
                .collect();
        } else if self.value[v] == UNSET {
            self.heap.push((self.activity[v].to_bits(), v));
        }
    }

    /// First-UIP learning; returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, conflict: usize) -> (Vec<Lit>, u32) {
        let current = self.trail_lim.len() as u32;
        let mut learnt = vec![Lit(0)];
        let mut open = 0;
        let mut cid = conflict;
        let mut idx = self.trail.len();
        let mut pivot: Option<Lit> = None;
        loop {
            for k in 0..self.clauses[cid].len() {
                let l = self.clauses[cid][k];
                if Some(l) == pivot {
                    continue;
                }
                let v = l.var();
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                self.bump_var(v);
                if self.level[v] == current {
                    open += 1;
                } else {
                    learnt.push(l);
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var()] = false;
            open -= 1;
            if open == 0 {
                learnt[0] = !p;
                break;
            }
            pivot = Some(p);
            cid = self.reason[p.var()].expect("implied literal has a reason");
        }
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var()] > self.level[learnt[best].var()] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[learnt[1].var()];
        }
        self.bump /= 0.95;
        (learnt, back)
    }

    fn backtrack(&mut self, level: u32) {
        if self.trail_lim.len() as u32 <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for l in self.trail.drain(keep..) {
            let v = l.var();
            self.phase[v] = !l.negative();
            self.value[v] = UNSET;
            self.reason[v] = None;
            self.heap.push((self.activity[v].to_bits(), v));
        }
        self.trail_lim.truncate(level as usize);
        self.head = keep;
    }

    fn pick(&mut self) -> Option<Lit> {
        while let Some((bits, v)) = self.heap.pop() {
            if self.value[v] == UNSET && bits == self.activity[v].to_bits() {
                let l = Lit((v as u32) << 1);
                return Some(if self.phase[v] { l } else { !l });
            }
        }
        (0..self.value.len())
            .find(|&v| self.value[v] == UNSET)
            .map(|v| Lit((v as u32) << 1))
    }

    pub fn solve(&mut self) -> bool {
        self.model = None;
        self.backtrack(0);
        for l in std::mem::take(&mut self.pending) {
            match self.lit_value(l) {
                1 => {}
                -1 => self.unsat = true,
                _ => self.assign(l, None),
            }
        }
        if self.unsat || self.propagate().is_some() {
            self.unsat = true;
            return false;
        }
        let mut restarts = 0;
        let mut budget = 100 * luby(0);
        loop {
            if let Some(conflict) = self.propagate() {
                if self.trail_lim.is_empty() {
                    self.unsat = true;
                    return false;
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                let unit = learnt[0];
                if learnt.len() == 1 {
                    self.assign(unit, None);
                } else {
                    let id = self.attach(learnt);
                    self.assign(unit, Some(id));
                }
                budget = budget.saturating_sub(1);
                continue;
            }
            if budget == 0 {
                restarts += 1;
                budget = 100 * luby(restarts);
                self.backtrack(0);
                continue;
            }
            match self.pick() {
                None => {
                    let model = (0..self.value.len())
                        .map(|v| {
                            let l = Lit((v as u32) << 1);
                            if self.value[v] == 1 {
                                l
                            } else {
                                !l
                            }
                        })
                        .collect();
                    self.model = Some(model);
                    return true;
                }
                Some(l) => {
                    self.trail_lim.push(self.trail.len());
                    self.assign(l, None);
                }
            }
        }
    }

    pub fn model(&self) -> Option<Vec<Lit>> {
        self.model.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, clauses: &[Vec<(usize, bool)>]) -> bool {
        (0u32..1 << n).any(|m| {
            clauses
                .iter()
                .all(|c| c.iter().any(|&(v, neg)| ((m >> v) & 1 == 1) != neg))
        })
    }

    #[test]
    fn luby_prefix() {
        let s: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(s, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        let mut s = Solver::new();
        let x: Vec<Vec<Lit>> = (0..5).map(|_| (0..4).map(|_| s.new_lit()).collect()).collect();
        for row in &x {
            s.add_clause(row);
        }
        for h in 0..4 {
            for a in 0..5 {
                for b in a + 1..5 {
                    s.add_clause(&[!x[a][h], !x[b][h]]);
                }
            }
        }
        assert!(!s.solve());
    }

    #[test]
    fn random_3sat_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(3..12);
            let m = rng.gen_range(1..(5 * n));
            let clauses: Vec<Vec<(usize, bool)>> = (0..m)
                .map(|_| {
                    (0..rng.gen_range(1..4))
                        .map(|_| (rng.gen_range(0..n), rng.gen_bool(0.5)))
                        .collect()
                })
                .collect();
            let mut s = Solver::new();
            let lits: Vec<Lit> = (0..n).map(|_| s.new_lit()).collect();
            for c in &clauses {
                let c: Vec<Lit> = c
                    .iter()
                    .map(|&(v, neg)| if neg { !lits[v] } else { lits[v] })
                    .collect();
                s.add_clause(&c);
            }
            let sat = s.solve();
            assert_eq!(sat, brute(n, &clauses));
            if sat {
                let model = s.model().unwrap();
                for c in &clauses {
                    assert!(c.iter().any(|&(v, neg)| (model[v] == lits[v]) != neg));
                }
            }
        }
    }
}
