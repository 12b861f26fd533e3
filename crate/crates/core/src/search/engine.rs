//! Tree traversal under the three symmetry reductions.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::predicate::{accepts, add_point, counts_of, feasible, odd_secants, remove_point, Node};
use super::{Budget, Objective, Predicate, SymmetryReduction};
use crate::plane::{canonical_form_colored, CanonicalForm, PlaneCtx};

/// Color of the marked point in canonical forms.
pub(crate) const MARK: u32 = 1;

pub(crate) struct Job<'a> {
    pub ctx: &'a PlaneCtx,
    pub n: u32,
    pub objective: Objective,
    pub predicate: Predicate,
    pub reduction: SymmetryReduction,
    pub pruning: bool,
    pub budget: Budget,
}

pub(crate) struct Outcome {
    /// Canonical forms of accepted sets, with their odd-secant counts.
    pub leaves: Vec<(CanonicalForm, u32)>,
    pub nodes: u64,
    pub exhaustive: bool,
}

struct Meter {
    start: Instant,
    nodes: AtomicU64,
    stopped: AtomicBool,
}

impl Meter {
    fn new() -> Meter {
        Meter { start: Instant::now(), nodes: AtomicU64::new(0), stopped: AtomicBool::new(false) }
    }

    fn over_time(&self, budget: &Budget) -> bool {
        budget.max_millis.is_some_and(|ms| self.start.elapsed().as_millis() as u64 >= ms)
    }

    /// Counts one node; false once a limit is hit.
    fn tick(&self, budget: &Budget) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = budget.max_nodes.is_some_and(|max| n > max) || (n.is_multiple_of(1024) && self.over_time(budget));
        if over {
            self.stopped.store(true, Ordering::Relaxed);
        }
        !over
    }
}

impl Job<'_> {
    fn marked(&self) -> bool {
        matches!(self.predicate, Predicate::PeterDual { .. })
    }

    fn node_ok(&self, node: &Node) -> bool {
        !self.pruning || feasible(self.ctx, &self.predicate, self.n, node)
    }

    fn leaf(&self, node: &Node) -> Option<u32> {
        accepts(self.ctx, &self.predicate, node).then(|| odd_secants(node.counts))
    }

    fn canonical(&self, members: &[u32], marked: Option<u32>) -> CanonicalForm {
        let items: Vec<(u32, u32)> = members.iter().map(|&p| (p, 0)).chain(marked.map(|o| (o, MARK))).collect();
        canonical_form_colored(self.ctx, &items)
    }

    pub fn run(&self) -> Outcome {
        let mut out = match self.reduction {
            SymmetryReduction::FullCanonical => self.levels(),
            SymmetryReduction::LexminStabilizer => self.depth_first(),
            SymmetryReduction::None => self.depth_first(),
        };
        out.leaves.sort();
        out.leaves.dedup();
        if self.objective == Objective::MinOddSecants {
            let best = out.leaves.iter().map(|l| l.1).min();
            out.leaves.retain(|l| Some(l.1) == best);
        }
        out
    }

    /// Level-wise orderly generation: every orbit at size `s+1` arises from
    /// some orbit at size `s`, because the bounds are hereditary.
    fn levels(&self) -> Outcome {
        let ctx = self.ctx;
        let meter = Meter::new();
        let root = if self.marked() { self.canonical(&[], Some(0)) } else { CanonicalForm::default() };
        let mut level = vec![root];
        let mut nodes = 1u64;
        for size in 0..self.n {
            let width = (ctx.num_points() - size - self.marked() as u32) as u64;
            let cost = level.len() as u64 * width;
            let over_nodes = self.budget.max_nodes.is_some_and(|max| nodes + cost > max);
            if over_nodes || meter.over_time(&self.budget) {
                return Outcome { leaves: self.complete_greedily(&level), nodes, exhaustive: false };
            }
            let mut next: Vec<CanonicalForm> = level.par_iter().flat_map_iter(|rep| self.children(rep)).collect();
            next.sort_unstable();
            next.dedup();
            nodes += cost;
            level = next;
        }
        let leaves = level
            .into_iter()
            .filter_map(|form| {
                let (members, marked) = self.decode(&form);
                let counts = counts_of(ctx, &members);
                self.leaf(&Node { members: &members, counts: &counts, marked }).map(|v| (form, v))
            })
            .collect();
        Outcome { leaves, nodes, exhaustive: true }
    }

    fn decode(&self, form: &CanonicalForm) -> (Vec<u32>, Option<u32>) {
        let marked = self.marked().then(|| form.points_with_color(self.ctx, MARK)[0]);
        (form.points_with_color(self.ctx, 0), marked)
    }

    fn children(&self, rep: &CanonicalForm) -> Vec<CanonicalForm> {
        let ctx = self.ctx;
        let (mut members, marked) = self.decode(rep);
        let mut counts = counts_of(ctx, &members);
        let mut out = Vec::new();
        for x in 0..ctx.num_points() {
            if Some(x) == marked || members.contains(&x) {
                continue;
            }
            members.push(x);
            add_point(ctx, &mut counts, x);
            if self.node_ok(&Node { members: &members, counts: &counts, marked }) {
                out.push(self.canonical(&members, marked));
            }
            remove_point(ctx, &mut counts, x);
            members.pop();
        }
        out
    }

    /// Best-effort leaves for an interrupted level search: each representative
    /// is filled up with the smallest free points.
    fn complete_greedily(&self, level: &[CanonicalForm]) -> Vec<(CanonicalForm, u32)> {
        if self.objective != Objective::MinOddSecants {
            return Vec::new();
        }
        level
            .iter()
            .take(64)
            .filter_map(|rep| {
                let (mut members, marked) = self.decode(rep);
                let free: Vec<u32> =
                    (0..self.ctx.num_points()).filter(|x| Some(*x) != marked && !members.contains(x)).collect();
                members.extend(free.into_iter().take((self.n as usize).saturating_sub(members.len())));
                let counts = counts_of(self.ctx, &members);
                let node = Node { members: &members, counts: &counts, marked };
                self.leaf(&node).map(|v| (self.canonical(&members, marked), v))
            })
            .collect()
    }

    /// Allowed values at the first positions of a sorted set. `0..=q` is the line
    /// through points 0 and 1, and `q+1` is the smallest point off it; the
    /// stabilizer of the earlier points is transitive on each choice.
    fn prefix(&self) -> Vec<Vec<u32>> {
        let q = self.ctx.q();
        match (self.reduction, self.marked()) {
            (SymmetryReduction::LexminStabilizer, false) => vec![vec![0], vec![1], vec![2, q + 1]],
            (SymmetryReduction::LexminStabilizer, true) => vec![vec![1], vec![2, q + 1]],
            _ => Vec::new(),
        }
    }

    fn choices(&self, members: &[u32], marked: Option<u32>, prefix: &[Vec<u32>]) -> Vec<u32> {
        let after = members.last().map_or(0, |&l| l + 1);
        match prefix.get(members.len()) {
            Some(allowed) => allowed.iter().copied().filter(|&x| x >= after).collect(),
            None => (after..self.ctx.num_points()).filter(|&x| Some(x) != marked).collect(),
        }
    }

    /// Sorted-set enumeration; the subtrees below depth two run in parallel.
    fn depth_first(&self) -> Outcome {
        let ctx = self.ctx;
        let meter = Meter::new();
        let marked = self.marked().then_some(0);
        let prefix = self.prefix();
        let walk = Walk { job: self, marked, prefix: &prefix, meter: &meter };

        let mut found = Found::new(self.objective);
        let mut frontier = Vec::new();
        let mut members = Vec::new();
        let mut counts = counts_of(ctx, &members);
        walk.visit(&mut members, &mut counts, &mut found, 2, &mut frontier);

        let mut all: Vec<(Vec<u32>, u32)> = frontier
            .into_par_iter()
            .flat_map_iter(|mut members| {
                let mut counts = counts_of(ctx, &members);
                let mut found = Found::new(self.objective);
                walk.expand(&mut members, &mut counts, &mut found, usize::MAX, &mut Vec::new());
                found.leaves
            })
            .collect();
        all.extend(found.leaves);
        if self.objective == Objective::MinOddSecants {
            let best = all.iter().map(|l| l.1).min();
            all.retain(|l| Some(l.1) == best);
        }
        let leaves = all.par_iter().map(|(m, v)| (self.canonical(m, marked), *v)).collect();
        Outcome { leaves, nodes: meter.nodes.load(Ordering::Relaxed), exhaustive: !meter.stopped.load(Ordering::Relaxed) }
    }
}

struct Walk<'a> {
    job: &'a Job<'a>,
    marked: Option<u32>,
    prefix: &'a [Vec<u32>],
    meter: &'a Meter,
}

impl Walk<'_> {
    /// Visits a node; nodes at depth `split` are handed back in `frontier`.
    fn visit(&self, members: &mut Vec<u32>, counts: &mut Vec<u32>, found: &mut Found, split: usize, frontier: &mut Vec<Vec<u32>>) {
        if !self.meter.tick(&self.job.budget) {
            return;
        }
        if members.len() as u32 == self.job.n {
            if let Some(v) = self.job.leaf(&Node { members, counts, marked: self.marked }) {
                found.offer(members.clone(), v);
            }
            return;
        }
        if members.len() == split {
            frontier.push(members.clone());
            return;
        }
        self.expand(members, counts, found, split, frontier);
    }

    fn expand(&self, members: &mut Vec<u32>, counts: &mut Vec<u32>, found: &mut Found, split: usize, frontier: &mut Vec<Vec<u32>>) {
        let job = self.job;
        let need = job.n as usize - members.len();
        for x in job.choices(members, self.marked, self.prefix) {
            // Points from x upwards must cover the points still needed; the marked point is 0.
            if ((job.ctx.num_points() - x) as usize) < need {
                break;
            }
            members.push(x);
            add_point(job.ctx, counts, x);
            if job.node_ok(&Node { members, counts, marked: self.marked }) {
                self.visit(members, counts, found, split, frontier);
            }
            remove_point(job.ctx, counts, x);
            members.pop();
        }
    }
}

/// Leaves of one subtree; for minimization only the current best are kept.
struct Found {
    minimize: bool,
    leaves: Vec<(Vec<u32>, u32)>,
}

impl Found {
    fn new(objective: Objective) -> Found {
        Found { minimize: objective == Objective::MinOddSecants, leaves: Vec::new() }
    }

    fn offer(&mut self, members: Vec<u32>, value: u32) {
        if self.minimize {
            match self.leaves.first().map(|l| l.1) {
                Some(best) if value > best => return,
                Some(best) if value < best => self.leaves.clear(),
                _ => {}
            }
        }
        self.leaves.push((members, value));
    }
}
