//! Exact branch-and-bound solver for the generated ILPs.
//!
//! The search branches on binary atom variables; auxiliary counting
//! variables are pinned by interval propagation once the atoms in their
//! rows are fixed, so they never need branching unless a row couples two
//! of them. Child nodes are explored best-bound-first, pruning by an
//! admissible optimistic bound, which makes the relative-gap guarantee a
//! direct consequence of the prune rule.

pub mod brute;
pub mod lp;

use crate::error::SolveError;
use crate::ilp::{IlpModel, LinearConstraint, Sense, VarKind};

/// How the search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The incumbent is proven optimal.
    Optimal,
    /// The incumbent is within the requested relative gap of the bound.
    GapReached,
    /// The node budget ran out; the incumbent is the best found so far.
    Limit,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// One value per ILP variable, in variable order.
    pub assignment: Vec<i64>,
    /// Objective value of the assignment, excluding the model's constant
    /// offset.
    pub objective: f64,
    /// Admissible upper bound on the true optimum (also excluding the
    /// offset); never below `objective`.
    pub bound: f64,
    pub status: Status,
}

/// Hard cap on branch-and-bound node evaluations.
pub const NODE_BUDGET: u64 = 10_000_000;

/// Widest integer range we are willing to enumerate when an auxiliary
/// variable does need branching.
const MAX_AUX_BRANCH_RANGE: i64 = 4096;

/// Maximizes the model's objective over integer assignments satisfying all
/// rows and bounds.
///
/// `gap` is the relative optimality gap: subtrees whose bound cannot beat
/// the incumbent by more than `gap * |incumbent|` are pruned, so `gap = 0`
/// is exact. The result is deterministic; `seed` is accepted for interface
/// stability but does not influence the search.
pub fn solve_ilp(model: &IlpModel, gap: f64, _seed: u64) -> Result<Solution, SolveError> {
    for var in &model.vars {
        if var.lower > var.upper {
            return Err(SolveError::Infeasible);
        }
    }
    for row in &model.constraints {
        for &(c, v) in &row.terms {
            if v.0 as usize >= model.vars.len() {
                return Err(SolveError::MalformedModel(format!(
                    "constraint references undefined variable index {}",
                    v.0
                )));
            }
            if c == 0 {
                return Err(SolveError::MalformedModel(
                    "constraint stores a zero coefficient".into(),
                ));
            }
        }
    }
    for &(w, v) in &model.objective {
        if v.0 as usize >= model.vars.len() {
            return Err(SolveError::MalformedModel(format!(
                "objective references undefined variable index {}",
                v.0
            )));
        }
        if !w.is_finite() {
            return Err(SolveError::MalformedModel(
                "objective coefficient is not finite".into(),
            ));
        }
    }

    let mut search = Search::new(model, gap)?;
    search.dfs();

    if search.limit_hit {
        match search.best.take() {
            Some((objective, assignment)) => Ok(Solution {
                assignment,
                objective,
                bound: search.root_bound,
                status: Status::Limit,
            }),
            None => Err(SolveError::NodeLimit {
                budget: NODE_BUDGET,
            }),
        }
    } else {
        match search.best.take() {
            Some((objective, assignment)) => {
                let bound = objective.max(search.pruned_bound);
                let status = if bound > objective {
                    Status::GapReached
                } else {
                    Status::Optimal
                };
                Ok(Solution {
                    assignment,
                    objective,
                    bound,
                    status,
                })
            }
            None => Err(SolveError::Infeasible),
        }
    }
}

struct Search<'a> {
    rows: &'a [LinearConstraint],
    /// Per-variable objective weight after merging duplicate entries.
    obj_weight: Vec<f64>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
    /// Variables the search branches on, in fixed priority order.
    order: Vec<usize>,
    best: Option<(f64, Vec<i64>)>,
    /// Highest bound among pruned subtrees.
    pruned_bound: f64,
    root_bound: f64,
    gap: f64,
    nodes: u64,
    limit_hit: bool,
}

impl<'a> Search<'a> {
    fn new(model: &'a IlpModel, gap: f64) -> Result<Self, SolveError> {
        let n = model.vars.len();
        let mut obj_weight = vec![0.0; n];
        for &(w, v) in &model.objective {
            obj_weight[v.0 as usize] += w;
        }
        let mut occurrences = vec![0u32; n];
        let mut aux_per_row_max = vec![0u32; n];
        for row in &model.constraints {
            let aux_in_row = row
                .terms
                .iter()
                .filter(|&&(_, v)| matches!(model.vars[v.0 as usize].kind, VarKind::Aux(_)))
                .count() as u32;
            for &(_, v) in &row.terms {
                occurrences[v.0 as usize] += 1;
                if matches!(model.vars[v.0 as usize].kind, VarKind::Aux(_)) {
                    aux_per_row_max[v.0 as usize] =
                        aux_per_row_max[v.0 as usize].max(aux_in_row);
                }
            }
        }

        // Atoms always branch; an aux variable only branches when some row
        // couples it to another aux variable, because then interval
        // reasoning alone cannot certify a joint assignment.
        let mut atoms: Vec<usize> = Vec::new();
        let mut branch_aux: Vec<usize> = Vec::new();
        for (i, var) in model.vars.iter().enumerate() {
            match var.kind {
                VarKind::Atom(_) => atoms.push(i),
                VarKind::Aux(_) => {
                    if aux_per_row_max[i] >= 2 {
                        if var.upper - var.lower > MAX_AUX_BRANCH_RANGE {
                            return Err(SolveError::MalformedModel(format!(
                                "auxiliary variable range {} too wide to branch on",
                                var.upper - var.lower
                            )));
                        }
                        branch_aux.push(i);
                    }
                }
            }
        }
        atoms.sort_by_key(|&i| (std::cmp::Reverse(occurrences[i]), i));
        let mut order = atoms;
        order.extend(branch_aux);

        Ok(Self {
            rows: &model.constraints,
            obj_weight,
            lo: model.vars.iter().map(|v| v.lower).collect(),
            hi: model.vars.iter().map(|v| v.upper).collect(),
            trail: Vec::new(),
            order,
            best: None,
            pruned_bound: f64::NEG_INFINITY,
            root_bound: f64::NEG_INFINITY,
            gap,
            nodes: 0,
            limit_hit: false,
        })
    }

    fn set_bounds(&mut self, v: usize, lo: i64, hi: i64) {
        self.trail.push((v, self.lo[v], self.hi[v]));
        self.lo[v] = lo;
        self.hi[v] = hi;
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, lo, hi) = self.trail.pop().expect("trail mark within bounds");
            self.lo[v] = lo;
            self.hi[v] = hi;
        }
    }

    /// Interval propagation over all rows until fixpoint (or a pass cap).
    /// Returns false when some row is proven unsatisfiable.
    fn propagate(&mut self) -> bool {
        for _ in 0..64 {
            let mut changed = false;
            for row in self.rows {
                let mut min_sum: i128 = 0;
                let mut max_sum: i128 = 0;
                for &(c, v) in &row.terms {
                    let (lo, hi) = (self.lo[v.0 as usize] as i128, self.hi[v.0 as usize] as i128);
                    let c = c as i128;
                    if c > 0 {
                        min_sum += c * lo;
                        max_sum += c * hi;
                    } else {
                        min_sum += c * hi;
                        max_sum += c * lo;
                    }
                }
                let rhs = row.rhs as i128;
                match row.sense {
                    Sense::Ge => {
                        if max_sum < rhs {
                            return false;
                        }
                    }
                    Sense::Le => {
                        if min_sum > rhs {
                            return false;
                        }
                    }
                }
                for &(c, v) in &row.terms {
                    let vi = v.0 as usize;
                    let (lo, hi) = (self.lo[vi], self.hi[vi]);
                    if lo == hi {
                        continue;
                    }
                    let ci = c as i128;
                    match row.sense {
                        Sense::Ge => {
                            // c * v >= rhs - (max over the other terms).
                            let others_max =
                                max_sum - if ci > 0 { ci * hi as i128 } else { ci * lo as i128 };
                            let need = rhs - others_max;
                            if ci > 0 {
                                let new_lo = ceil_div(need, ci);
                                if new_lo > lo as i128 {
                                    if new_lo > hi as i128 {
                                        return false;
                                    }
                                    self.set_bounds(vi, new_lo as i64, hi);
                                    changed = true;
                                }
                            } else {
                                let new_hi = floor_div(need, ci);
                                if new_hi < hi as i128 {
                                    if new_hi < lo as i128 {
                                        return false;
                                    }
                                    self.set_bounds(vi, lo, new_hi as i64);
                                    changed = true;
                                }
                            }
                        }
                        Sense::Le => {
                            // c * v <= rhs - (min over the other terms).
                            let others_min =
                                min_sum - if ci > 0 { ci * lo as i128 } else { ci * hi as i128 };
                            let allow = rhs - others_min;
                            if ci > 0 {
                                let new_hi = floor_div(allow, ci);
                                if new_hi < hi as i128 {
                                    if new_hi < lo as i128 {
                                        return false;
                                    }
                                    self.set_bounds(vi, lo, new_hi as i64);
                                    changed = true;
                                }
                            } else {
                                let new_lo = ceil_div(allow, ci);
                                if new_lo > lo as i128 {
                                    if new_lo > hi as i128 {
                                        return false;
                                    }
                                    self.set_bounds(vi, new_lo as i64, hi);
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        true
    }

    /// Optimistic objective over current intervals. Evaluated in fixed
    /// variable order so a node's bound dominates every descendant's bound
    /// even under floating-point rounding.
    fn bound(&self) -> f64 {
        let mut total = 0.0;
        for (v, &w) in self.obj_weight.iter().enumerate() {
            if w > 0.0 {
                total += w * self.hi[v] as f64;
            } else if w < 0.0 {
                total += w * self.lo[v] as f64;
            }
        }
        total
    }

    fn should_prune(&self, bound: f64) -> bool {
        match &self.best {
            None => false,
            Some((incumbent, _)) => bound - incumbent <= self.gap * incumbent.abs(),
        }
    }

    fn extract_assignment(&self) -> Vec<i64> {
        (0..self.lo.len())
            .map(|v| {
                if self.obj_weight[v] > 0.0 {
                    self.hi[v]
                } else {
                    self.lo[v]
                }
            })
            .collect()
    }

    fn dfs(&mut self) {
        if self.limit_hit {
            return;
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.limit_hit = true;
            return;
        }
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo(mark);
            return;
        }
        let b = self.bound();
        if self.nodes == 1 {
            self.root_bound = b;
        }
        if self.should_prune(b) {
            self.pruned_bound = self.pruned_bound.max(b);
            self.undo(mark);
            return;
        }

        let pick = self
            .order
            .iter()
            .copied()
            .find(|&v| self.lo[v] < self.hi[v]);
        let v = match pick {
            None => {
                // Leaf: all branch variables fixed, remaining aux intervals
                // are per-row exact, so the bound is attained.
                let better = match &self.best {
                    None => true,
                    Some((incumbent, _)) => b > *incumbent,
                };
                if better {
                    self.best = Some((b, self.extract_assignment()));
                }
                self.undo(mark);
                return;
            }
            Some(v) => v,
        };

        // Evaluate both (all) children, then descend best-bound-first.
        let mut children: Vec<(i64, f64)> = Vec::new();
        let (vlo, vhi) = (self.lo[v], self.hi[v]);
        for val in vlo..=vhi {
            let m2 = self.trail.len();
            self.set_bounds(v, val, val);
            if self.propagate() {
                children.push((val, self.bound()));
            }
            self.undo(m2);
        }
        children.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        for (val, child_bound) in children {
            if self.limit_hit {
                break;
            }
            if self.should_prune(child_bound) {
                self.pruned_bound = self.pruned_bound.max(child_bound);
                continue;
            }
            let m2 = self.trail.len();
            self.set_bounds(v, val, val);
            self.dfs();
            self.undo(m2);
        }
        self.undo(mark);
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    let r = a % b;
    if r != 0 && ((r < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}
