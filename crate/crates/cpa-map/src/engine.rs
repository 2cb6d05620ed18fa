//! The incremental MAP inference loop.
//!
//! Instead of translating every grounding up front, each round retrieves
//! only the groundings that are active against the current intermediate
//! solution (violated for positive and hard clauses, satisfied for
//! negative ones), adds the new ones to the ILP, and re-solves. The loop
//! stops when a retrieval sweep finds nothing new; at that point every
//! untranslated positive grounding is satisfied and every untranslated
//! negative grounding is falsified, so the partial ILP's optimum extends
//! to the full model.
//!
//! Formulas are processed by a worker pool that pulls from a shared stack;
//! results are committed in formula order, so the outcome does not depend
//! on the number of workers.

use std::collections::HashSet;
use std::sync::Mutex;
use std::time::Instant;

use crate::atoms::{AtomTable, GroundClause};
use crate::cpa::{partition_for_aggregation, translate_group, AggregatedGroup, AggregationPlan};
use crate::error::SolveError;
use crate::evidence::EvidenceSet;
use crate::grounder::{find_active_groundings, Disposition, Relations};
use crate::ilp::{IlpModel, VarKind};
use crate::interpretation::{initial_interpretation, interpretation_weight, Interpretation};
use crate::model::{MlnModel, Weight};
use crate::report::RunReport;
use crate::solver::{solve_ilp, Solution, Status};

/// Tuning knobs for a MAP run.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Aggregate groundings sharing a context into counting constraints.
    pub use_cpa: bool,
    /// Relative optimality gap in `[0, 1)`; `0` demands the exact optimum.
    pub gap: f64,
    /// Stop after this many retrieval rounds (`None` runs to the fixpoint).
    pub max_iterations: Option<u64>,
    /// Worker threads for retrieval and aggregation.
    pub workers: usize,
    /// Accepted for interface stability; the pipeline is deterministic.
    pub seed: u64,
    /// Re-partition all accumulated groundings of a formula each round
    /// instead of only the newly retrieved ones.
    pub merge_groups: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            use_cpa: true,
            gap: 0.0,
            max_iterations: None,
            workers: 1,
            seed: 0,
            merge_groups: false,
        }
    }
}

/// Outcome of a MAP run.
#[derive(Debug)]
pub struct MapResult {
    pub interpretation: Interpretation,
    /// Weight of `interpretation` under the full model (sum of weights of
    /// satisfied soft groundings; negative infinity if a hard grounding is
    /// violated, which only a truncated run can produce).
    pub weight: f64,
    /// Retrieval rounds performed, including the final empty sweep.
    pub iterations: u64,
    /// True when the loop reached its fixpoint and the solver's guarantee
    /// (exactness, or the requested gap) held there.
    pub converged: bool,
    /// The final ILP in canonical form.
    pub ilp: IlpModel,
    pub report: RunReport,
    pub(crate) seen: Vec<HashSet<Vec<u64>>>,
}

struct FormulaState {
    index: usize,
    /// Full-clause keys of every grounding retrieved so far.
    seen: HashSet<Vec<u64>>,
    /// Kept (translated) groundings in discovery order.
    rows: Vec<GroundClause>,
    groups: Vec<AggregatedGroup>,
    singletons: Vec<GroundClause>,
    /// Weight mass of kept positive groundings.
    translated_pos_mass: f64,
    /// Weight mass of positive groundings falsified outright by evidence.
    dead_pos_mass: f64,
    /// Weight mass of negative groundings satisfied outright by evidence.
    offset_neg_mass: f64,
}

struct WorkerOutput {
    formula: usize,
    new_keys: Vec<Vec<u64>>,
    new_rows: Vec<GroundClause>,
    translated_pos_delta: f64,
    dead_pos_delta: f64,
    offset_neg_delta: f64,
    partition: Option<AggregationPlan>,
    grounding_s: f64,
    aggregation_s: f64,
}

struct Engine<'a> {
    model: &'a MlnModel,
    atoms: &'a AtomTable,
    evidence: &'a EvidenceSet,
    config: EngineConfig,
    formulas: Vec<FormulaState>,
    time_grounding: f64,
    time_aggregation: f64,
}

impl<'a> Engine<'a> {
    fn new(
        model: &'a MlnModel,
        atoms: &'a AtomTable,
        evidence: &'a EvidenceSet,
        config: EngineConfig,
    ) -> Self {
        let formulas = (0..model.clauses.len())
            .map(|index| FormulaState {
                index,
                seen: HashSet::new(),
                rows: Vec::new(),
                groups: Vec::new(),
                singletons: Vec::new(),
                translated_pos_mass: 0.0,
                dead_pos_mass: 0.0,
                offset_neg_mass: 0.0,
            })
            .collect();
        Self {
            model,
            atoms,
            evidence,
            config,
            formulas,
            time_grounding: 0.0,
            time_aggregation: 0.0,
        }
    }

    /// One retrieval round: finds active groundings of every formula
    /// against `interp`, keeps the not-yet-seen ones, and folds them into
    /// the per-formula translation state. Returns whether anything new
    /// appeared.
    fn sweep(&mut self, interp: &Interpretation) -> Result<bool, SolveError> {
        let relations = Relations::from_interpretation(self.model, self.atoms, interp);
        let n = self.formulas.len();
        if n == 0 {
            return Ok(false);
        }
        let stack: Mutex<Vec<usize>> = Mutex::new((0..n).rev().collect());
        let results: Mutex<Vec<Result<WorkerOutput, (usize, SolveError)>>> =
            Mutex::new(Vec::with_capacity(n));
        let workers = self.config.workers.max(1).min(n);
        {
            let model = self.model;
            let atoms = self.atoms;
            let evidence = self.evidence;
            let formulas = &self.formulas;
            let use_cpa = self.config.use_cpa;
            let merge = self.config.merge_groups;
            let relations = &relations;
            let stack = &stack;
            let results = &results;
            std::thread::scope(|scope| {
                for _ in 0..workers {
                    scope.spawn(move || loop {
                        let next = stack.lock().expect("stack lock").pop();
                        let Some(fi) = next else { break };
                        let out = process_formula(
                            model,
                            atoms,
                            evidence,
                            relations,
                            &formulas[fi],
                            use_cpa,
                            merge,
                        );
                        results
                            .lock()
                            .expect("results lock")
                            .push(out.map_err(|e| (fi, e)));
                    });
                }
            });
        }
        let mut results = results.into_inner().expect("workers finished");
        assert_eq!(results.len(), n, "each formula is processed exactly once");
        results.sort_by_key(|r| match r {
            Ok(o) => o.formula,
            Err((fi, _)) => *fi,
        });

        let mut new_any = false;
        for res in results {
            let out = match res {
                Ok(o) => o,
                Err((_, e)) => return Err(e),
            };
            let state = &mut self.formulas[out.formula];
            for key in out.new_keys {
                let inserted = state.seen.insert(key);
                debug_assert!(inserted, "worker keys are filtered against seen");
                new_any = true;
            }
            state.translated_pos_mass += out.translated_pos_delta;
            state.dead_pos_mass += out.dead_pos_delta;
            state.offset_neg_mass += out.offset_neg_delta;
            if let Some(plan) = out.partition {
                if self.config.merge_groups {
                    state.groups = plan.groups;
                    state.singletons = plan.singletons;
                } else {
                    state.groups.extend(plan.groups);
                    state.singletons.extend(plan.singletons);
                }
            }
            state.rows.extend(out.new_rows);
            self.time_grounding += out.grounding_s;
            self.time_aggregation += out.aggregation_s;
        }
        Ok(new_any)
    }

    /// Rebuilds the ILP from scratch in canonical order: formulas
    /// ascending, aggregated groups before singletons, auxiliary variables
    /// numbered in emission order.
    fn build_ilp(&self) -> IlpModel {
        let mut ilp = IlpModel::new();
        for state in &self.formulas {
            if self.config.use_cpa {
                for group in &state.groups {
                    translate_group(&mut ilp, group);
                }
                for row in &state.singletons {
                    ilp.translate_clause(row);
                }
            } else {
                for row in &state.rows {
                    ilp.translate_clause(row);
                }
            }
        }
        ilp.evidence_constraints(self.evidence);
        ilp
    }

    fn masses(&self) -> (f64, f64, f64) {
        let mut translated = 0.0;
        let mut dead = 0.0;
        let mut neg = 0.0;
        for state in &self.formulas {
            translated += state.translated_pos_mass;
            dead += state.dead_pos_mass;
            neg += state.offset_neg_mass;
        }
        (translated, dead, neg)
    }
}

fn process_formula(
    model: &MlnModel,
    atoms: &AtomTable,
    evidence: &EvidenceSet,
    relations: &Relations,
    state: &FormulaState,
    use_cpa: bool,
    merge: bool,
) -> Result<WorkerOutput, SolveError> {
    let clause = &model.clauses[state.index];
    let t0 = Instant::now();
    let violations = find_active_groundings(model, atoms, clause, relations, evidence)?;
    let grounding_s = t0.elapsed().as_secs_f64();
    let soft = match clause.weight {
        Weight::Soft(w) => w,
        Weight::Hard => 0.0,
    };
    let mut out = WorkerOutput {
        formula: state.index,
        new_keys: Vec::new(),
        new_rows: Vec::new(),
        translated_pos_delta: 0.0,
        dead_pos_delta: 0.0,
        offset_neg_delta: 0.0,
        partition: None,
        grounding_s,
        aggregation_s: 0.0,
    };
    for g in violations.groundings {
        if state.seen.contains(&g.key) {
            continue;
        }
        let mass = soft * f64::from(g.multiplicity);
        match g.disposition {
            Disposition::Kept => {
                if soft > 0.0 {
                    out.translated_pos_delta += mass;
                }
                out.new_rows.push(GroundClause {
                    literals: g.literals,
                    weight: clause.weight,
                    formula_id: clause.formula_id,
                    multiplicity: g.multiplicity,
                });
            }
            Disposition::DroppedSatisfied => {
                debug_assert!(soft < 0.0, "only negative clauses retrieve satisfied");
                out.offset_neg_delta += mass;
            }
            Disposition::DroppedFalse => {
                debug_assert!(soft > 0.0, "hard dead groundings error out earlier");
                out.dead_pos_delta += mass;
            }
        }
        out.new_keys.push(g.key);
    }
    if use_cpa && !out.new_rows.is_empty() {
        let t1 = Instant::now();
        let plan = if merge {
            let mut all = state.rows.clone();
            all.extend(out.new_rows.iter().cloned());
            partition_for_aggregation(&all)
        } else {
            partition_for_aggregation(&out.new_rows)
        };
        out.aggregation_s = t1.elapsed().as_secs_f64();
        out.partition = Some(plan);
    }
    Ok(out)
}

fn apply_solution(
    base: &Interpretation,
    ilp: &IlpModel,
    sol: &Solution,
    generation: u64,
) -> Interpretation {
    let mut truth = base.truth.clone();
    for (i, var) in ilp.vars.iter().enumerate() {
        if let VarKind::Atom(a) = var.kind {
            truth[a.0 as usize] = sol.assignment[i] == 1;
        }
    }
    Interpretation { truth, generation }
}

/// Runs MAP inference: finds an interpretation maximizing the total weight
/// of satisfied groundings, subject to the evidence and the hard clauses.
///
/// With `gap = 0` the result is exactly optimal. With a positive gap the
/// returned weight `w` satisfies `w >= opt - gap * |opt|` against the true
/// optimum `opt`; if the bound available at the fixpoint cannot certify
/// that, the engine transparently falls back to an exact continuation.
pub fn solve_map(
    model: &MlnModel,
    atoms: &AtomTable,
    evidence: &EvidenceSet,
    config: &EngineConfig,
) -> Result<MapResult, SolveError> {
    assert!(
        config.gap >= 0.0 && config.gap < 1.0,
        "relative gap must lie in [0, 1)"
    );
    let t_start = Instant::now();
    let mut engine = Engine::new(model, atoms, evidence, config.clone());
    // Mass of all positive-clause groundings; what is neither translated
    // nor dead is satisfied whenever no sweep retrieves it.
    let total_pos_mass: f64 = model
        .clauses
        .iter()
        .map(|c| match c.weight {
            Weight::Soft(w) if w > 0.0 => w * c.grounding_count(model) as f64,
            _ => 0.0,
        })
        .sum();

    let base = initial_interpretation(atoms, evidence);
    let mut interp = base.clone();
    let mut iterations: u64 = 0;
    let mut converged = false;
    let mut effective_gap = config.gap;
    let mut last: Option<(IlpModel, Solution)> = None;
    let mut time_solve = 0.0f64;

    loop {
        if config.max_iterations.is_some_and(|m| iterations >= m) {
            break;
        }
        iterations += 1;
        let new_any = engine.sweep(&interp)?;
        if !new_any {
            match &last {
                Some((_, sol)) if effective_gap > 0.0 => {
                    // The solver's bound covers only the translated part;
                    // add the mass the untranslated clauses can contribute
                    // to bound the full optimum, then test the gap against
                    // the smallest magnitude the optimum can have.
                    let (translated, dead, neg) = engine.masses();
                    let full_bound = sol.bound + (total_pos_mass - translated - dead) + neg;
                    let weight = interpretation_weight(model, atoms, &interp);
                    let slack = full_bound - weight;
                    let min_abs = if weight <= 0.0 && full_bound >= 0.0 {
                        0.0
                    } else {
                        weight.abs().min(full_bound.abs())
                    };
                    if slack <= effective_gap * min_abs + 1e-9 {
                        converged = true;
                        break;
                    }
                    // Certificate too weak: finish exactly. The rows are
                    // unchanged, so this re-solves the same ILP with gap 0
                    // and resumes sweeping from its solution.
                    effective_gap = 0.0;
                }
                Some((_, sol)) => {
                    converged = sol.status != Status::Limit;
                    break;
                }
                None => {
                    converged = true;
                    break;
                }
            }
        }
        let ilp = engine.build_ilp();
        if ilp.constraints.is_empty() && ilp.objective.is_empty() {
            // Every retrieved grounding was discharged by evidence; there
            // is nothing to optimize yet.
            continue;
        }
        let t1 = Instant::now();
        let sol = solve_ilp(&ilp, effective_gap, config.seed)?;
        time_solve += t1.elapsed().as_secs_f64();
        interp = apply_solution(&base, &ilp, &sol, iterations);
        last = Some((ilp, sol));
    }

    let weight = interpretation_weight(model, atoms, &interp);
    let (translated, dead, neg) = engine.masses();
    let objective_offset = (total_pos_mass - translated - dead) + neg;
    let (ilp, ilp_objective) = match last {
        Some((ilp, sol)) => (ilp, sol.objective),
        None => (IlpModel::new(), 0.0),
    };
    let report = RunReport {
        groundings_total: engine.formulas.iter().map(|f| f.seen.len() as u64).sum(),
        constraints_without_cpa: engine.formulas.iter().map(|f| f.rows.len() as u64).sum(),
        constraints_with_cpa: ilp.constraints.len() as u64,
        iterations,
        time_grounding_s: engine.time_grounding,
        time_aggregation_s: engine.time_aggregation,
        time_solve_s: time_solve,
        time_total_s: t_start.elapsed().as_secs_f64(),
        final_weight: weight,
        ilp_objective,
        objective_offset,
        converged,
    };
    Ok(MapResult {
        interpretation: interp,
        weight,
        iterations,
        converged,
        ilp,
        report,
        seen: engine.formulas.into_iter().map(|f| f.seen).collect(),
    })
}

/// Builds the ILP of the first round (initial-solution retrieval plus
/// translation) without solving it, for inspection and export.
pub fn first_iteration_ilp(
    model: &MlnModel,
    atoms: &AtomTable,
    evidence: &EvidenceSet,
    config: &EngineConfig,
) -> Result<IlpModel, SolveError> {
    let mut engine = Engine::new(model, atoms, evidence, config.clone());
    let interp = initial_interpretation(atoms, evidence);
    engine.sweep(&interp)?;
    Ok(engine.build_ilp())
}

/// Counts the active groundings of the result's interpretation that the
/// run never saw. A converged run must report zero: the loop only stops
/// when a full sweep finds nothing new.
pub fn fixpoint_violations(
    model: &MlnModel,
    atoms: &AtomTable,
    evidence: &EvidenceSet,
    result: &MapResult,
) -> Result<u64, SolveError> {
    let relations = Relations::from_interpretation(model, atoms, &result.interpretation);
    let mut violations = 0;
    for clause in &model.clauses {
        let vs = find_active_groundings(model, atoms, clause, &relations, evidence)?;
        for g in vs.groundings {
            if !result.seen[clause.formula_id].contains(&g.key) {
                violations += 1;
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::parse_evidence;
    use crate::parse::parse_mln;
    use crate::solver::brute::brute_force_map;

    const SMOKERS: &str = "person = {Anna, Bob}\n\
                           smokes(person)\n\
                           cancer(person)\n\
                           1.5 !smokes(x) v cancer(x)\n";

    fn setup(text: &str, ev: &str) -> (MlnModel, AtomTable, EvidenceSet) {
        let model = parse_mln(text).unwrap();
        let atoms = AtomTable::new(&model).unwrap();
        let evidence = parse_evidence(ev, &model, &atoms).unwrap();
        (model, atoms, evidence)
    }

    #[test]
    fn smokers_reaches_fixpoint_in_two_rounds() {
        let (model, atoms, ev) = setup(SMOKERS, "smokes(Anna)");
        let cfg = EngineConfig::default();
        let result = solve_map(&model, &atoms, &ev, &cfg).unwrap();
        assert!(result.converged);
        assert_eq!(result.iterations, 2);
        assert!((result.weight - 3.0).abs() < 1e-9);
        let cancer_anna = atoms
            .encode_constants(&model, crate::model::PredId(1), &[crate::symbols::SymbolId(0)])
            .unwrap();
        assert!(result.interpretation.is_true(cancer_anna));
        // Weight decomposes into ILP objective plus constant offset.
        assert!(
            (result.report.ilp_objective + result.report.objective_offset - result.weight).abs()
                < 1e-9
        );
        assert_eq!(fixpoint_violations(&model, &atoms, &ev, &result).unwrap(), 0);
    }

    #[test]
    fn empty_clause_set_converges_immediately() {
        let (model, atoms, ev) = setup("d = {A, B}\np(d)\n", "");
        let result = solve_map(&model, &atoms, &ev, &EngineConfig::default()).unwrap();
        assert!(result.converged);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.weight, 0.0);
        assert!(result.ilp.constraints.is_empty());
    }

    #[test]
    fn contradictory_hard_clauses_are_infeasible() {
        // The second hard clause only becomes active after the first one
        // pushes p true, so this exercises the iterative interplay.
        let (model, atoms, ev) = setup("d = {A, B}\np(d)\np(x) .\n!p(x) .\n", "");
        let err = solve_map(&model, &atoms, &ev, &EngineConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::Infeasible));
    }

    #[test]
    fn evidence_falsified_hard_clause_errors() {
        let (model, atoms, ev) = setup("d = {A}\np(d)\np(x) .\n", "!p(A)");
        let err = solve_map(&model, &atoms, &ev, &EngineConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::UnsatisfiableHard { .. }));
    }

    #[test]
    fn aggregation_and_workers_do_not_change_the_result() {
        let text = "person = {A, B, C, D}\n\
                    knows(person, person)\n\
                    tall(person)\n\
                    0.7 !knows(x, y) v tall(x)\n\
                    -0.4 tall(x) v tall(y)\n\
                    1.1 knows(x, y) v knows(y, x)\n";
        let (model, atoms, ev) = setup(text, "knows(A, B)\nknows(B, C)\n!tall(D)");
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for use_cpa in [false, true] {
            for workers in [1, 2, 4] {
                let cfg = EngineConfig {
                    use_cpa,
                    workers,
                    ..EngineConfig::default()
                };
                let result = solve_map(&model, &atoms, &ev, &cfg).unwrap();
                assert!(result.converged);
                weights.push(result.weight);
                states.push(result.interpretation.truth.clone());
            }
        }
        for w in &weights[1..] {
            assert!((w - weights[0]).abs() < 1e-9);
        }
        // Same worker-count sweep per CPA mode must give identical states.
        assert_eq!(states[0], states[1]);
        assert_eq!(states[0], states[2]);
        assert_eq!(states[3], states[4]);
        assert_eq!(states[3], states[5]);
    }

    #[test]
    fn matches_brute_force_on_small_models() {
        let cases = [
            (
                "d = {A, B, C}\np(d)\nq(d)\n1.0 !p(x) v q(x)\n-0.8 q(x) v q(y)\np(A) .\n",
                "!q(C)",
            ),
            (
                "d = {A, B}\ne = {X}\nr(d, e)\ns(e)\n0.6 r(x, y) v s(y)\n-1.2 !s(y) v r(A, y)\n",
                "",
            ),
            (
                "d = {A, B, C, D}\np(d)\n2.0 p(x)\n-1.0 p(x) v p(y)\n",
                "p(A)",
            ),
        ];
        for (text, ev_text) in cases {
            let (model, atoms, ev) = setup(text, ev_text);
            let (_, expected) = brute_force_map(&model, &atoms, &ev).unwrap();
            for use_cpa in [false, true] {
                let cfg = EngineConfig {
                    use_cpa,
                    ..EngineConfig::default()
                };
                let result = solve_map(&model, &atoms, &ev, &cfg).unwrap();
                assert!(
                    (result.weight - expected).abs() < 1e-9,
                    "case {text:?} cpa={use_cpa}: engine {} vs brute {}",
                    result.weight,
                    expected
                );
                assert_eq!(fixpoint_violations(&model, &atoms, &ev, &result).unwrap(), 0);
            }
        }
    }

    #[test]
    fn merge_groups_mode_agrees() {
        let text = "d = {A, B, C, D, E}\np(d)\nq(d)\n1.0 !p(x) v q(x)\n";
        let (model, atoms, ev) = setup(text, "p(A)\np(B)\np(C)\np(D)\np(E)");
        let plain = solve_map(&model, &atoms, &ev, &EngineConfig::default()).unwrap();
        let merged = solve_map(
            &model,
            &atoms,
            &ev,
            &EngineConfig {
                merge_groups: true,
                ..EngineConfig::default()
            },
        )
        .unwrap();
        assert!((plain.weight - merged.weight).abs() < 1e-9);
        assert!((plain.weight - 5.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let (model, atoms, ev) = setup(SMOKERS, "smokes(Anna)");
        let cfg = EngineConfig {
            max_iterations: Some(1),
            ..EngineConfig::default()
        };
        let result = solve_map(&model, &atoms, &ev, &cfg).unwrap();
        assert!(!result.converged);
        assert_eq!(result.iterations, 1);
    }

    #[test]
    fn positive_gap_weight_is_within_contract() {
        let text = "d = {A, B, C, D}\np(d)\nq(d)\n1.0 !p(x) v q(x)\n0.5 p(x)\n-0.3 q(x) v q(y)\n";
        let (model, atoms, ev) = setup(text, "p(A)");
        let exact = solve_map(&model, &atoms, &ev, &EngineConfig::default())
            .unwrap()
            .weight;
        for gap in [0.01, 0.1, 0.5] {
            let cfg = EngineConfig {
                gap,
                ..EngineConfig::default()
            };
            let result = solve_map(&model, &atoms, &ev, &cfg).unwrap();
            assert!(result.converged);
            let floor = if exact >= 0.0 {
                (1.0 - gap) * exact
            } else {
                (1.0 + gap) * exact
            };
            assert!(
                result.weight >= floor - 1e-9,
                "gap {gap}: weight {} below floor {floor}",
                result.weight
            );
        }
    }

    #[test]
    fn negative_clause_satisfied_by_evidence_joins_offset() {
        // Every grounding is satisfied by the q(A) evidence, so nothing is
        // translated and the whole mass sits in the offset.
        let text = "d = {A, B}\np(d)\nq(d)\n-2.0 p(x) v q(A)\n";
        let (model, atoms, ev) = setup(text, "q(A)");
        let result = solve_map(&model, &atoms, &ev, &EngineConfig::default()).unwrap();
        assert!(result.converged);
        assert_eq!(result.report.constraints_without_cpa, 0);
        assert!((result.report.objective_offset - (-4.0)).abs() < 1e-9);
        assert!((result.weight - (-4.0)).abs() < 1e-9);
    }

    #[test]
    fn first_iteration_ilp_matches_direct_expectation() {
        let (model, atoms, ev) = setup(SMOKERS, "smokes(Anna)");
        let ilp = first_iteration_ilp(&model, &atoms, &ev, &EngineConfig::default()).unwrap();
        // Only the Anna grounding is violated initially; its simplified
        // clause is the unit cancer(Anna).
        assert_eq!(ilp.constraints.len(), 1);
        assert_eq!(ilp.objective.len(), 1);
        assert!((ilp.objective[0].0 - 1.5).abs() < 1e-12);
    }
}
