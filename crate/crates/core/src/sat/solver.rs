//! A small CDCL solver: two watched literals, first-UIP learning,
//! non-chronological backjumping, VSIDS and Luby restarts.

use std::mem;

/// Literal: `2 * var + negated`.
type Lit = u32;

const NO_REASON: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Value of each variable, index `v - 1` for DIMACS variable `v`.
    Sat(Vec<bool>),
    Unsat,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    /// The model as DIMACS literals.
    pub fn literals(&self) -> Option<Vec<i32>> {
        match self {
            SolveOutcome::Sat(values) => Some(
                values
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| if b { i as i32 + 1 } else { -(i as i32 + 1) })
                    .collect(),
            ),
            SolveOutcome::Unsat => None,
        }
    }
}

/// Solves a CNF over variables `1..=num_vars`.
pub fn solve(num_vars: usize, clauses: &[Vec<i32>]) -> SolveOutcome {
    let mut s = Solver::new(num_vars);
    for c in clauses {
        s.add_clause(c);
    }
    s.solve()
}

fn lit_of(x: i32) -> Lit {
    let v = x.unsigned_abs() - 1;
    2 * v + u32::from(x < 0)
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    /// `watches[l]`: clauses watching literal `l`, visited when `l` turns false.
    watches: Vec<Vec<usize>>,
    /// Per variable: 0 unassigned, 1 true, 2 false.
    assign: Vec<u8>,
    level: Vec<usize>,
    reason: Vec<usize>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    pub conflicts: u64,
    pub decisions: u64,
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        Self {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assign: vec![0; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            heap: VarHeap::new(num_vars),
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            ok: true,
            conflicts: 0,
            decisions: 0,
        }
    }

    fn value(&self, l: Lit) -> Option<bool> {
        match self.assign[var(l)] {
            0 => None,
            a => Some((a == 1) != (l & 1 == 1)),
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Adds a clause of DIMACS literals. Must be called before [`Solver::solve`].
    pub fn add_clause(&mut self, clause: &[i32]) {
        if !self.ok {
            return;
        }
        let mut lits: Vec<Lit> = clause.iter().map(|&x| lit_of(x)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|p| p[0] == neg(p[1])) {
            return;
        }
        // drop literals already false at the root, keep satisfied clauses out
        if lits.iter().any(|&l| self.value(l) == Some(true)) {
            return;
        }
        lits.retain(|&l| self.value(l).is_none());
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>) -> usize {
        let id = self.clauses.len();
        self.watches[lits[0] as usize].push(id);
        self.watches[lits[1] as usize].push(id);
        self.clauses.push(lits);
        id
    }

    fn enqueue(&mut self, l: Lit, reason: usize) {
        let v = var(l);
        self.assign[v] = if l & 1 == 0 { 1 } else { 2 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let ws = mem::take(&mut self.watches[false_lit as usize]);
            let mut kept = Vec::with_capacity(ws.len());
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let cid = ws[i];
                i += 1;
                let clause = &mut self.clauses[cid];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if value_of(&self.assign, first) == Some(true) {
                    kept.push(cid);
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    if value_of(&self.assign, clause[k]) != Some(false) {
                        clause.swap(1, k);
                        let new_watch = clause[1];
                        self.watches[new_watch as usize].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                kept.push(cid);
                if value_of(&self.assign, first) == Some(false) {
                    conflict = Some(cid);
                    kept.extend_from_slice(&ws[i..]);
                    break;
                }
                self.enqueue(first, cid);
            }
            // watches added to `false_lit` during the scan cannot happen: a
            // new watch is never false
            self.watches[false_lit as usize] = kept;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    /// First-UIP learnt clause (asserting literal first) and backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            let len = self.clauses[confl].len();
            for j in start..len {
                let q = self.clauses[confl][j];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[var(lit)];
        }
        learnt[0] = neg(p.expect("conflict involves the current level"));
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn backtrack(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = 0;
            self.reason[v] = NO_REASON;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = self.trail.len();
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v] == 0 {
                return Some(2 * v as u32 + u32::from(!self.phase[v]));
            }
        }
        None
    }

    pub fn solve(&mut self) -> SolveOutcome {
        if !self.ok || self.propagate().is_some() {
            return SolveOutcome::Unsat;
        }
        let mut restart = 1u64;
        let mut budget = 100 * luby(restart);
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    return SolveOutcome::Unsat;
                }
                let (learnt, back) = self.analyze(confl);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let asserting = learnt[0];
                    let id = self.attach(learnt);
                    self.enqueue(asserting, id);
                }
                self.var_inc /= 0.95;
                continue;
            }
            if since_restart >= budget {
                since_restart = 0;
                restart += 1;
                budget = 100 * luby(restart);
                self.backtrack(0);
                continue;
            }
            match self.pick_branch() {
                None => {
                    let values = self.assign.iter().map(|&a| a == 1).collect();
                    return SolveOutcome::Sat(values);
                }
                Some(l) => {
                    self.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(l, NO_REASON);
                }
            }
        }
    }
}

fn value_of(assign: &[u8], l: Lit) -> Option<bool> {
    match assign[var(l)] {
        0 => None,
        a => Some((a == 1) != (l & 1 == 1)),
    }
}

/// `luby(i)` for `i >= 1`: 1 1 2 1 1 2 4 1 1 2 ...
fn luby(i: u64) -> u64 {
    let mut k = 1u32;
    while (1u64 << k) - 1 < i {
        k += 1;
    }
    let mut i = i;
    loop {
        if i == (1u64 << k) - 1 {
            return 1u64 << (k - 1);
        }
        // i lies in the second copy of the shorter prefix
        i -= (1u64 << (k - 1)) - 1;
        k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
    }
}

/// Max-heap of variables keyed by activity.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    fn new(n: usize) -> Self {
        Self {
            heap: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.pos[v] != ABSENT {
            return;
        }
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.pos[v] != ABSENT {
            self.up(self.pos[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let u = self.heap[parent];
            if act[u] >= act[v] {
                break;
            }
            self.heap[i] = u;
            self.pos[u] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && act[self.heap[r]] > act[self.heap[l]] { r } else { l };
            if act[self.heap[c]] <= act[v] {
                break;
            }
            let u = self.heap[c];
            self.heap[i] = u;
            self.pos[u] = i;
            i = c;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }
}
