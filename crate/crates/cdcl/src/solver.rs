//! Conflict-driven clause-learning search.
//!
//! Two-watched-literal propagation with blocker literals, first-UIP learning
//! with recursive clause minimization, VSIDS branching with phase saving,
//! Luby restarts and LBD-based learnt clause reduction. Assumptions are
//! handled as pseudo-decisions at the first decision levels, so clauses may
//! be added between calls and the learnt clauses stay valid.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use crate::heap::VarHeap;
use crate::lit::{LBool, Lit, Var};

const NO_REASON: u32 = u32::MAX;

/// Resource limits for a single [`Solver::solve_with`] call.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    /// Maximum number of conflicts spent in this call.
    pub conflicts: Option<u64>,
    /// Wall-clock deadline.
    pub deadline: Option<Instant>,
    /// External stop flag, polled periodically.
    pub interrupt: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn conflicts(limit: u64) -> Budget {
        Budget {
            conflicts: Some(limit),
            ..Budget::default()
        }
    }

    fn expired(&self, spent: u64) -> bool {
        if let Some(limit) = self.conflicts {
            if spent >= limit {
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return true;
            }
        }
        if let Some(flag) = &self.interrupt {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
    /// The budget ran out before the search finished.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_literals: u64,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    removed: bool,
    lbd: u32,
    activity: f64,
}

enum Search {
    Sat,
    Unsat,
    Restart,
    OutOfBudget,
}

pub struct Solver {
    clauses: Vec<Clause>,
    free_slots: Vec<u32>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,

    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<u32>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    heap: VarHeap,

    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    var_inc: f64,
    cla_inc: f64,
    ok: bool,
    next_reduce: u64,
    reduce_round: u64,

    model: Vec<bool>,
    failed: Vec<Lit>,
    stats: Stats,

    analyze_stack: Vec<Lit>,
    analyze_clear: Vec<Var>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver {
            clauses: Vec::new(),
            free_slots: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            seen: Vec::new(),
            heap: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            cla_inc: 1.0,
            ok: true,
            next_reduce: 2000,
            reduce_round: 0,
            model: Vec::new(),
            failed: Vec::new(),
            stats: Stats::default(),
            analyze_stack: Vec::new(),
            analyze_clear: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    /// Number of problem (non-learnt) clauses currently stored, excluding units.
    pub fn num_clauses(&self) -> usize {
        self.clauses
            .iter()
            .filter(|c| !c.learnt && !c.removed)
            .count()
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// `false` once the clause set is unsatisfiable without any assumptions.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.assigns.len() as u32);
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.polarity.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(v.index() + 1);
        self.heap.insert(v.index(), &self.activity);
        v
    }

    /// Makes sure variables `0..n` exist.
    pub fn reserve_vars(&mut self, n: usize) {
        while self.num_vars() < n {
            self.new_var();
        }
    }

    /// Adds a clause. Returns `false` if the solver became trivially
    /// unsatisfiable. Variables referenced by `lits` are created on demand.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        if let Some(max) = lits.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max + 1);
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        for w in c.windows(2) {
            if w[0].var() == w[1].var() {
                return true; // tautology
            }
        }
        let mut kept = Vec::with_capacity(c.len());
        for &l in &c {
            match self.value(l) {
                LBool::True => return true,
                LBool::False => {}
                LBool::Undef => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(kept[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let cref = self.alloc(kept, false, 0);
                self.attach(cref);
                true
            }
        }
    }

    pub fn solve(&mut self) -> SolveResult {
        self.solve_with(&[], &Budget::unlimited())
    }

    /// Solves under the given assumption literals and budget.
    pub fn solve_with(&mut self, assumptions: &[Lit], budget: &Budget) -> SolveResult {
        self.stats.solves += 1;
        self.model.clear();
        self.failed.clear();
        if !self.ok {
            return SolveResult::Unsat;
        }
        if let Some(max) = assumptions.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max + 1);
        }
        let start_conflicts = self.stats.conflicts;
        let mut restart = 0u32;
        let result = loop {
            let limit = (luby(2.0, restart) * 100.0) as u64;
            match self.search(limit, assumptions, budget, start_conflicts) {
                Search::Sat => break SolveResult::Sat,
                Search::Unsat => break SolveResult::Unsat,
                Search::OutOfBudget => break SolveResult::Unknown,
                Search::Restart => {
                    restart += 1;
                    self.stats.restarts += 1;
                    if budget.expired(self.stats.conflicts - start_conflicts) {
                        break SolveResult::Unknown;
                    }
                }
            }
        };
        if result == SolveResult::Sat {
            self.model = self.assigns.iter().map(|&a| a == LBool::True).collect();
        }
        self.cancel_until(0);
        result
    }

    /// Value of a literal in the last model (only meaningful after `Sat`).
    pub fn model_value(&self, lit: Lit) -> bool {
        let v = self.model.get(lit.var().index()).copied().unwrap_or(false);
        v != lit.is_negative()
    }

    pub fn model(&self) -> &[bool] {
        &self.model
    }

    /// Subset of the assumptions responsible for the last `Unsat` answer.
    pub fn failed_assumptions(&self) -> &[Lit] {
        &self.failed
    }

    // ----- internals --------------------------------------------------------

    fn value(&self, lit: Lit) -> LBool {
        match self.assigns[lit.var().index()] {
            LBool::Undef => LBool::Undef,
            LBool::True => LBool::from_bool(lit.is_positive()),
            LBool::False => LBool::from_bool(lit.is_negative()),
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn alloc(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let clause = Clause {
            lits,
            learnt,
            removed: false,
            lbd,
            activity: 0.0,
        };
        let cref = if let Some(slot) = self.free_slots.pop() {
            self.clauses[slot as usize] = clause;
            slot
        } else {
            self.clauses.push(clause);
            (self.clauses.len() - 1) as u32
        };
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a.code()].push(Watcher { cref, blocker: b });
        self.watches[b.code()].push(Watcher { cref, blocker: a });
    }

    fn enqueue(&mut self, lit: Lit, reason: u32) {
        let v = lit.var().index();
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = LBool::from_bool(lit.is_positive());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let bound = self.trail_lim[level];
        for i in (bound..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            self.assigns[v] = LBool::Undef;
            self.reason[v] = NO_REASON;
            self.polarity[v] = lit.is_positive();
            if !self.heap.contains(v) {
                self.heap.insert(v, &self.activity);
            }
        }
        self.trail.truncate(bound);
        self.trail_lim.truncate(level);
        self.qhead = bound;
    }

    /// Unit propagation. Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let first = {
                    let lits = &mut self.clauses[cref as usize].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                    lits[0]
                };
                let kept = Watcher {
                    cref,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref as usize].lits.len();
                for k in 2..len {
                    let cand = self.clauses[cref as usize].lits[k];
                    if self.value(cand) != LBool::False {
                        let lits = &mut self.clauses[cref as usize].lits;
                        lits.swap(1, k);
                        self.watches[cand.code()].push(kept);
                        continue 'watchers;
                    }
                }
                ws[j] = kept;
                j += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if self.heap.contains(v) {
            self.heap.decrease(v, &self.activity);
        }
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1u32 << (self.level[v] & 31)
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;

        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let skip = usize::from(p.is_some());
            let len = self.clauses[confl as usize].lits.len();
            for k in skip..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = lit.var().index();
            confl = self.reason[v];
            self.seen[v] = false;
            p = Some(lit);
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.expect("conflict analysis visited at least one literal");

        // recursive minimization
        self.analyze_clear.clear();
        self.analyze_clear.extend(learnt.iter().map(|l| l.var()));
        let mut abstract_levels = 0u32;
        for l in &learnt[1..] {
            abstract_levels |= self.abstract_level(l.var().index());
        }
        let mut out = vec![learnt[0]];
        for &l in &learnt[1..] {
            let v = l.var().index();
            if self.reason[v] == NO_REASON || !self.lit_redundant(l, abstract_levels) {
                out.push(l);
            }
        }
        for v in std::mem::take(&mut self.analyze_clear) {
            self.seen[v.index()] = false;
        }

        let bt = if out.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..out.len() {
                if self.level[out[k].var().index()] > self.level[out[max_i].var().index()] {
                    max_i = k;
                }
            }
            out.swap(1, max_i);
            self.level[out[1].var().index()] as usize
        };
        (out, bt)
    }

    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32) -> bool {
        self.analyze_stack.clear();
        self.analyze_stack.push(p);
        let top = self.analyze_clear.len();
        while let Some(q) = self.analyze_stack.pop() {
            let cref = self.reason[q.var().index()];
            debug_assert!(cref != NO_REASON);
            let len = self.clauses[cref as usize].lits.len();
            for k in 1..len {
                let l = self.clauses[cref as usize].lits[k];
                let v = l.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    if self.reason[v] != NO_REASON && (self.abstract_level(v) & abstract_levels) != 0 {
                        self.seen[v] = true;
                        self.analyze_stack.push(l);
                        self.analyze_clear.push(l.var());
                    } else {
                        for c in self.analyze_clear.drain(top..) {
                            self.seen[c.index()] = false;
                        }
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Collects the assumptions that imply `p`, where `!p` is itself an assumption.
    fn analyze_final(&mut self, p: Lit) {
        self.failed.clear();
        self.failed.push(!p);
        if self.decision_level() == 0 {
            return;
        }
        self.seen[p.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            if self.seen[v] {
                let r = self.reason[v];
                if r == NO_REASON {
                    if self.level[v] > 0 {
                        self.failed.push(lit);
                    }
                } else {
                    let len = self.clauses[r as usize].lits.len();
                    for k in 1..len {
                        let q = self.clauses[r as usize].lits[k];
                        if self.level[q.var().index()] > 0 {
                            self.seen[q.var().index()] = true;
                        }
                    }
                }
                self.seen[v] = false;
            }
        }
        self.seen[p.var().index()] = false;
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var().index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let first = c.lits[0];
        self.reason[first.var().index()] == cref && self.value(first) == LBool::True
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| !self.clauses[c as usize].removed)
            .collect();
        cands.sort_by(|&a, &b| {
            let ca = &self.clauses[a as usize];
            let cb = &self.clauses[b as usize];
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.partial_cmp(&cb.activity).unwrap_or(std::cmp::Ordering::Equal))
        });
        let target = cands.len() / 2;
        let mut removed = 0;
        let mut keep = Vec::with_capacity(cands.len());
        for &c in &cands {
            let clause = &self.clauses[c as usize];
            if removed < target && clause.lbd > 2 && clause.lits.len() > 2 && !self.locked(c) {
                let clause = &mut self.clauses[c as usize];
                clause.removed = true;
                clause.lits = Vec::new();
                removed += 1;
            } else {
                keep.push(c);
            }
        }
        if removed > 0 {
            let clauses = &self.clauses;
            for ws in self.watches.iter_mut() {
                ws.retain(|w| !clauses[w.cref as usize].removed);
            }
            for (i, c) in self.clauses.iter().enumerate() {
                if c.removed && c.learnt {
                    self.free_slots.push(i as u32);
                }
            }
            // slots are reused, so drop the marker learnt flag to avoid double-listing
            for &slot in &self.free_slots {
                self.clauses[slot as usize].learnt = false;
            }
        }
        keep.sort_unstable();
        self.learnts = keep;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop_max(&self.activity) {
            if self.assigns[v] == LBool::Undef {
                return Some(Var(v as u32).lit(self.polarity[v]));
            }
        }
        None
    }

    fn search(
        &mut self,
        restart_after: u64,
        assumptions: &[Lit],
        budget: &Budget,
        start_conflicts: u64,
    ) -> Search {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                local_conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Search::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                self.stats.learnt_literals += learnt.len() as u64;
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let lbd = self.lbd(&learnt);
                    let asserting = learnt[0];
                    let cref = self.alloc(learnt, true, lbd);
                    self.attach(cref);
                    self.bump_clause(cref);
                    self.enqueue(asserting, cref);
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;

                let spent = self.stats.conflicts - start_conflicts;
                if (spent & 63 == 0 || budget.conflicts.is_some()) && budget.expired(spent) {
                    return Search::OutOfBudget;
                }
            } else {
                if local_conflicts >= restart_after {
                    self.cancel_until(0);
                    return Search::Restart;
                }
                if self.stats.conflicts >= self.next_reduce {
                    self.reduce_round += 1;
                    self.next_reduce = self.stats.conflicts + 2000 + 300 * self.reduce_round;
                    self.reduce_db();
                }

                let mut next = None;
                while self.decision_level() < assumptions.len() {
                    let p = assumptions[self.decision_level()];
                    match self.value(p) {
                        LBool::True => self.new_decision_level(),
                        LBool::False => {
                            self.analyze_final(!p);
                            return Search::Unsat;
                        }
                        LBool::Undef => {
                            next = Some(p);
                            break;
                        }
                    }
                }
                let next = match next {
                    Some(p) => p,
                    None => {
                        self.stats.decisions += 1;
                        if self.stats.decisions & 0x3fff == 0
                            && budget.expired(self.stats.conflicts - start_conflicts)
                        {
                            return Search::OutOfBudget;
                        }
                        match self.pick_branch() {
                            Some(p) => p,
                            None => return Search::Sat,
                        }
                    }
                };
                self.new_decision_level();
                self.enqueue(next, NO_REASON);
            }
        }
    }
}

/// Finite subsequences of the Luby restart sequence, scaled by `y`.
fn luby(y: f64, mut x: u32) -> f64 {
    let mut size = 1u32;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i32]) -> Vec<Lit> {
        v.iter().map(|&x| Lit::from_dimacs(x)).collect()
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u32> = (0..15).map(|i| luby(2.0, i) as u32).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn contradiction_is_unsat() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        assert!(!s.add_clause(&lits(&[-1])));
        assert_eq!(s.solve(), SolveResult::Unsat);
    }

    #[test]
    fn empty_formula_is_sat() {
        let mut s = Solver::new();
        assert_eq!(s.solve(), SolveResult::Sat);
    }

    #[test]
    fn assumptions_do_not_poison_the_solver() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, 2]));
        s.add_clause(&lits(&[-1, 2]));
        let r = s.solve_with(&lits(&[-2]), &Budget::unlimited());
        assert_eq!(r, SolveResult::Unsat);
        assert_eq!(s.failed_assumptions(), &lits(&[-2])[..]);
        assert_eq!(s.solve(), SolveResult::Sat);
        assert!(s.model_value(Lit::from_dimacs(2)));
    }

    #[test]
    fn pigeonhole_four_into_three_is_unsat() {
        // p(i,j): pigeon i in hole j, var = i*3 + j + 1
        let mut s = Solver::new();
        for i in 0..4 {
            let c: Vec<i32> = (0..3).map(|j| i * 3 + j + 1).collect();
            s.add_clause(&lits(&c));
        }
        for j in 0..3 {
            for a in 0..4 {
                for b in (a + 1)..4 {
                    s.add_clause(&lits(&[-(a * 3 + j + 1), -(b * 3 + j + 1)]));
                }
            }
        }
        assert_eq!(s.solve(), SolveResult::Unsat);
    }

    #[test]
    fn conflict_budget_yields_unknown() {
        // pigeonhole 9 into 8 needs far more than 10 conflicts
        let n = 8;
        let mut s = Solver::new();
        let var = |i: i32, j: i32| i * n + j + 1;
        for i in 0..=n {
            let c: Vec<i32> = (0..n).map(|j| var(i, j)).collect();
            s.add_clause(&lits(&c));
        }
        for j in 0..n {
            for a in 0..=n {
                for b in (a + 1)..=n {
                    s.add_clause(&lits(&[-var(a, j), -var(b, j)]));
                }
            }
        }
        let r = s.solve_with(&[], &Budget::conflicts(10));
        assert_eq!(r, SolveResult::Unknown);
    }
}
