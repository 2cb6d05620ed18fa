//! Active-grounding retrieval: given the current intermediate solution, find
//! the ground clauses that must enter the ILP.
//!
//! Positive-weight and hard clauses are active when unsatisfied by the
//! current interpretation. Negative-weight clauses are active when satisfied:
//! the ILP must pay their penalty, so satisfied groundings are exactly the
//! ones whose omission would overestimate the objective.
//!
//! Retrieval runs as an indexed join over per-predicate true/false relations
//! rebuilt from the interpretation each iteration; the full cross product is
//! never enumerated when a bound literal restricts it.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::atoms::{AtomId, AtomTable, GroundClause};
use crate::error::SolveError;
use crate::evidence::EvidenceSet;
use crate::interpretation::{advance, Interpretation};
use crate::model::{FirstOrderClause, Literal, MlnModel, PredId, Term, Weight};

/// Per-predicate tuple relations of the current interpretation.
#[derive(Debug)]
pub struct Relations {
    /// `[pred][value as usize]` -> tuples (argument domain positions).
    tuples: Vec<[Vec<Vec<u32>>; 2]>,
}

impl Relations {
    pub fn from_interpretation(
        model: &MlnModel,
        atoms: &AtomTable,
        interp: &Interpretation,
    ) -> Self {
        let mut tuples: Vec<[Vec<Vec<u32>>; 2]> = model
            .predicates
            .iter()
            .map(|_| [Vec::new(), Vec::new()])
            .collect();
        for (pi, _) in model.predicates.iter().enumerate() {
            let pred = PredId(pi as u32);
            for id in atoms.pred_range(pred) {
                let atom = AtomId(id);
                let (_, args) = atoms.decode(atom);
                tuples[pi][usize::from(interp.is_true(atom))].push(args);
            }
        }
        Self { tuples }
    }

    fn relation(&self, pred: PredId, value: bool) -> &[Vec<u32>] {
        &self.tuples[pred.0 as usize][usize::from(value)]
    }
}

/// How evidence simplification disposed of a retrieved grounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disposition {
    /// Enters the ILP (evidence literals removed from `literals`).
    Kept,
    /// A literal is satisfied by evidence; the clause is a constant and is
    /// dropped (for soft weights its weight joins the objective offset).
    DroppedSatisfied,
    /// Every literal is falsified by evidence; the clause can never hold.
    DroppedFalse,
}

/// One retrieved grounding: identity key, simplified literals, multiplicity.
#[derive(Debug, Clone)]
pub struct Retrieved {
    /// Sorted literal codes of the full (pre-simplification) clause; the
    /// deduplication identity across CPI iterations.
    pub key: Vec<u64>,
    /// Evidence-simplified literals in clause-positional order; empty for
    /// dropped dispositions.
    pub literals: Vec<(AtomId, bool)>,
    pub multiplicity: u32,
    pub disposition: Disposition,
}

/// Result of one clause's retrieval pass, sorted by key.
#[derive(Debug)]
pub struct ViolationSet {
    pub formula_id: usize,
    pub groundings: Vec<Retrieved>,
}

impl ViolationSet {
    /// The groundings that actually enter the ILP.
    pub fn kept(&self) -> impl Iterator<Item = &Retrieved> {
        self.groundings
            .iter()
            .filter(|g| g.disposition == Disposition::Kept)
    }

    /// Simplified ground clauses for the kept groundings.
    pub fn kept_clauses(&self, clause: &FirstOrderClause) -> Vec<GroundClause> {
        self.kept()
            .map(|g| GroundClause {
                literals: g.literals.clone(),
                weight: clause.weight,
                formula_id: clause.formula_id,
                multiplicity: g.multiplicity,
            })
            .collect()
    }
}

/// Removes evidence-falsified literals; detects constant clauses.
pub fn simplify_with_evidence(
    literals: &[(AtomId, bool)],
    evidence: &EvidenceSet,
) -> (Vec<(AtomId, bool)>, Disposition) {
    let mut kept = Vec::with_capacity(literals.len());
    for &(atom, negated) in literals {
        match evidence.value(atom) {
            Some(v) if v != negated => return (Vec::new(), Disposition::DroppedSatisfied),
            Some(_) => {}
            None => kept.push((atom, negated)),
        }
    }
    if kept.is_empty() {
        return (Vec::new(), Disposition::DroppedFalse);
    }
    (kept, Disposition::Kept)
}

/// Retrieves the active groundings of one clause against the interpretation
/// snapshot, evidence-simplified and deduplicated by full-clause identity
/// with substitution multiplicities.
pub fn find_active_groundings(
    model: &MlnModel,
    atoms: &AtomTable,
    clause: &FirstOrderClause,
    relations: &Relations,
    evidence: &EvidenceSet,
) -> Result<ViolationSet, SolveError> {
    let thetas = match clause.weight {
        Weight::Soft(w) if w < 0.0 => satisfied_thetas(model, atoms, clause, relations),
        _ => unsatisfied_thetas(model, atoms, clause, relations),
    };

    // Group substitutions by the ground clause they induce.
    let mut by_key: BTreeMap<Vec<u64>, (Vec<(AtomId, bool)>, u32)> = BTreeMap::new();
    for theta in thetas {
        let lits = instantiate(model, atoms, clause, &theta);
        let mut codes: Vec<u64> = lits
            .iter()
            .map(|&(a, n)| u64::from(a.0) << 1 | u64::from(n))
            .collect();
        codes.sort_unstable();
        // Tautologies are satisfied everywhere and never constrain anything.
        if codes.windows(2).any(|w| w[0] | 1 == w[1] && w[0] & 1 == 0) {
            continue;
        }
        let entry = by_key.entry(codes).or_insert((lits, 0));
        entry.1 += 1;
    }

    let mut groundings = Vec::with_capacity(by_key.len());
    for (key, (full_lits, multiplicity)) in by_key {
        let (simplified, disposition) = simplify_with_evidence(&full_lits, evidence);
        if disposition == Disposition::DroppedFalse && clause.weight.is_hard() {
            let rendered: Vec<String> = full_lits
                .iter()
                .map(|&(a, n)| {
                    let neg = if n { "!" } else { "" };
                    format!("{neg}{}", atoms.render(model, a))
                })
                .collect();
            return Err(SolveError::UnsatisfiableHard {
                clause: rendered.join(" v "),
            });
        }
        groundings.push(Retrieved {
            key,
            literals: simplified,
            multiplicity,
            disposition,
        });
    }
    Ok(ViolationSet {
        formula_id: clause.formula_id,
        groundings,
    })
}

/// Substitutes a variable assignment into the clause, collapsing duplicate
/// literals (first occurrence kept).
pub(crate) fn instantiate(
    model: &MlnModel,
    atoms: &AtomTable,
    clause: &FirstOrderClause,
    theta: &[u32],
) -> Vec<(AtomId, bool)> {
    let mut out: Vec<(AtomId, bool)> = Vec::with_capacity(clause.literals.len());
    for lit in &clause.literals {
        let atom = ground_literal(model, atoms, lit, theta);
        let entry = (atom, lit.negated);
        if !out.contains(&entry) {
            out.push(entry);
        }
    }
    out
}

fn ground_literal(
    model: &MlnModel,
    atoms: &AtomTable,
    lit: &Literal,
    theta: &[u32],
) -> AtomId {
    let sig = model.predicate(lit.pred);
    let positions: Vec<u32> = lit
        .terms
        .iter()
        .enumerate()
        .map(|(argpos, t)| match t {
            Term::Var(v) => theta[*v as usize],
            Term::Const(s) => model
                .domain(sig.arg_domains[argpos])
                .position_of(*s)
                .expect("validated constant"),
        })
        .collect();
    atoms.encode(lit.pred, &positions)
}

/// For each literal, the relation that makes it false (unsatisfied query):
/// a positive literal needs its atom false, a negated one needs it true.
fn falsifying_value(lit: &Literal) -> bool {
    lit.negated
}

/// Substitutions under which every literal is false. Backtracking join:
/// condition on the literal with the smallest falsifying relation, then
/// probe hash indexes for the rest, most-bound literal first.
fn unsatisfied_thetas(
    model: &MlnModel,
    atoms: &AtomTable,
    clause: &FirstOrderClause,
    relations: &Relations,
) -> Vec<Vec<u32>> {
    let nvars = clause.var_domains.len();
    if clause.literals.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..clause.literals.len()).collect();
    order.sort_by_key(|&i| {
        let lit = &clause.literals[i];
        (relations.relation(lit.pred, falsifying_value(lit)).len(), i)
    });
    // Re-order greedily so each probe has as many bound positions as possible.
    let mut plan = vec![order[0]];
    let mut bound: HashSet<u32> = clause.literals[order[0]]
        .terms
        .iter()
        .filter_map(|t| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        })
        .collect();
    let mut remaining: Vec<usize> = order[1..].to_vec();
    while !remaining.is_empty() {
        let (pos, &best) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| {
                let lit = &clause.literals[i];
                let bound_terms = lit
                    .terms
                    .iter()
                    .filter(|t| match t {
                        Term::Var(v) => bound.contains(v),
                        Term::Const(_) => true,
                    })
                    .count();
                let rel_len = relations.relation(lit.pred, falsifying_value(lit)).len();
                (bound_terms, std::cmp::Reverse(rel_len), std::cmp::Reverse(i))
            })
            .expect("non-empty remaining");
        for t in &clause.literals[best].terms {
            if let Term::Var(v) = t {
                bound.insert(*v);
            }
        }
        plan.push(best);
        remaining.remove(pos);
    }

    let mut indexes = IndexCache::default();
    let mut theta: Vec<Option<u32>> = vec![None; nvars];
    let mut out = Vec::new();
    join_step(
        model, atoms, clause, relations, &plan, 0, &mut theta, &mut indexes, &mut out,
    );
    // Variables not occurring in any literal cannot exist (every clause
    // variable occurs in at least one literal), so theta is total here.
    out
}

#[derive(Default)]
struct IndexCache {
    /// (literal index, bound-position mask) -> projection -> tuple indices.
    maps: HashMap<(usize, u64), HashMap<Vec<u32>, Vec<u32>>>,
}

#[allow(clippy::too_many_arguments)]
fn join_step(
    model: &MlnModel,
    atoms: &AtomTable,
    clause: &FirstOrderClause,
    relations: &Relations,
    plan: &[usize],
    depth: usize,
    theta: &mut Vec<Option<u32>>,
    indexes: &mut IndexCache,
    out: &mut Vec<Vec<u32>>,
) {
    if depth == plan.len() {
        out.push(theta.iter().map(|v| v.expect("total assignment")).collect());
        return;
    }
    let li = plan[depth];
    let lit = &clause.literals[li];
    let sig = model.predicate(lit.pred);
    let value = falsifying_value(lit);

    // Fixed argument positions under the current partial assignment.
    let mut fixed: Vec<Option<u32>> = Vec::with_capacity(lit.terms.len());
    let mut mask: u64 = 0;
    for (argpos, t) in lit.terms.iter().enumerate() {
        let v = match t {
            Term::Var(v) => theta[*v as usize],
            Term::Const(s) => Some(
                model
                    .domain(sig.arg_domains[argpos])
                    .position_of(*s)
                    .expect("validated constant"),
            ),
        };
        if v.is_some() {
            mask |= 1 << argpos;
        }
        fixed.push(v);
    }

    let candidates: Vec<u32> = if mask.count_ones() as usize == lit.terms.len() {
        // Fully bound: index lookup degenerates to a membership test.
        let positions: Vec<u32> = fixed.iter().map(|v| v.expect("all fixed")).collect();
        let rel = relations.relation(lit.pred, value);
        let index = indexes
            .maps
            .entry((li, mask))
            .or_insert_with(|| build_index(rel, mask, lit.terms.len()));
        match index.get(&positions) {
            Some(rows) => rows.clone(),
            None => Vec::new(),
        }
    } else if mask == 0 {
        (0..relations.relation(lit.pred, value).len() as u32).collect()
    } else {
        let rel = relations.relation(lit.pred, value);
        let index = indexes
            .maps
            .entry((li, mask))
            .or_insert_with(|| build_index(rel, mask, lit.terms.len()));
        let probe: Vec<u32> = fixed.iter().flatten().copied().collect();
        match index.get(&probe) {
            Some(rows) => rows.clone(),
            None => Vec::new(),
        }
    };

    let rel = relations.relation(lit.pred, value);
    'tuples: for row in candidates {
        let tuple = &rel[row as usize];
        // Unify unbound variable positions; repeated variables must agree.
        let mut assigned: Vec<u32> = Vec::new();
        for (argpos, t) in lit.terms.iter().enumerate() {
            match t {
                Term::Var(v) => {
                    let vi = *v as usize;
                    match theta[vi] {
                        Some(existing) => {
                            if existing != tuple[argpos] {
                                for &u in &assigned {
                                    theta[u as usize] = None;
                                }
                                continue 'tuples;
                            }
                        }
                        None => {
                            theta[vi] = Some(tuple[argpos]);
                            assigned.push(*v);
                        }
                    }
                }
                Term::Const(_) => {
                    debug_assert_eq!(fixed[argpos], Some(tuple[argpos]));
                }
            }
        }
        join_step(
            model, atoms, clause, relations, plan, depth + 1, theta, indexes, out,
        );
        for &u in &assigned {
            theta[u as usize] = None;
        }
    }
}

fn build_index(
    rel: &[Vec<u32>],
    mask: u64,
    arity: usize,
) -> HashMap<Vec<u32>, Vec<u32>> {
    let mut map: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
    for (row, tuple) in rel.iter().enumerate() {
        let key: Vec<u32> = (0..arity)
            .filter(|p| mask & (1 << p) != 0)
            .map(|p| tuple[p])
            .collect();
        map.entry(key).or_default().push(row as u32);
    }
    map
}

/// Substitutions under which at least one literal is true: the union over
/// literals of (bindings making that literal true) x (free completions).
fn satisfied_thetas(
    model: &MlnModel,
    _atoms: &AtomTable,
    clause: &FirstOrderClause,
    relations: &Relations,
) -> Vec<Vec<u32>> {
    let nvars = clause.var_domains.len();
    let sizes: Vec<u32> = clause
        .var_domains
        .iter()
        .map(|&d| model.domain(d).constants.len() as u32)
        .collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for lit in &clause.literals {
        let sig = model.predicate(lit.pred);
        let value = !lit.negated;
        'tuples: for tuple in relations.relation(lit.pred, value) {
            let mut theta: Vec<Option<u32>> = vec![None; nvars];
            for (argpos, t) in lit.terms.iter().enumerate() {
                match t {
                    Term::Var(v) => {
                        let vi = *v as usize;
                        match theta[vi] {
                            Some(existing) if existing != tuple[argpos] => continue 'tuples,
                            _ => theta[vi] = Some(tuple[argpos]),
                        }
                    }
                    Term::Const(s) => {
                        let want = model
                            .domain(sig.arg_domains[argpos])
                            .position_of(*s)
                            .expect("validated constant");
                        if tuple[argpos] != want {
                            continue 'tuples;
                        }
                    }
                }
            }
            // Cross-product completion over variables free in this literal.
            let free: Vec<usize> = (0..nvars).filter(|&v| theta[v].is_none()).collect();
            if free.iter().any(|&v| sizes[v] == 0) {
                continue;
            }
            let free_sizes: Vec<u32> = free.iter().map(|&v| sizes[v]).collect();
            let mut counters = vec![0u32; free.len()];
            loop {
                let mut full: Vec<u32> = theta
                    .iter()
                    .map(|v| v.unwrap_or(u32::MAX))
                    .collect();
                for (slot, &v) in counters.iter().zip(&free) {
                    full[v] = *slot;
                }
                seen.insert(full);
                if !advance(&mut counters, &free_sizes) {
                    break;
                }
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort_unstable();
    out
}
