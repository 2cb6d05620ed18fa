//! Property tests: randomized structural invariants of the translation,
//! aggregation, and serialization layers.

use proptest::prelude::*;

use cpa_map::cpa::partition_for_aggregation;
use cpa_map::ilp::{IlpModel, VarKind};
use cpa_map::{
    export_lp, parse_evidence, parse_lp, parse_mln, solve_ilp, AtomId, AtomTable, GroundClause,
    Interpretation, Weight,
};

fn clause_strategy() -> impl Strategy<Value = GroundClause> {
    (
        prop::collection::vec((0u32..5, any::<bool>()), 1..=4),
        prop_oneof![
            (0.2f64..2.0).prop_map(Weight::Soft),
            (-2.0f64..-0.2).prop_map(Weight::Soft),
            Just(Weight::Hard),
        ],
        1u32..=3,
    )
        .prop_map(|(lits, weight, multiplicity)| GroundClause {
            literals: lits.into_iter().map(|(a, n)| (AtomId(a), n)).collect(),
            weight,
            formula_id: 0,
            multiplicity,
        })
}

fn satisfied(clause: &GroundClause, bits: u32) -> bool {
    clause
        .literals
        .iter()
        .any(|&(a, neg)| (bits >> a.0 & 1 == 1) != neg)
}

proptest! {
    /// A translated clause contributes its weight exactly when the clause
    /// is satisfied: with every atom pinned, the optimal objective equals
    /// the satisfaction indicator times weight and multiplicity, and a
    /// hard row is feasible exactly on satisfying assignments. This holds
    /// for every clause shape, including duplicated and complementary
    /// literals.
    #[test]
    fn translated_clause_counts_satisfaction(clause in clause_strategy()) {
        let max_atom = clause.literals.iter().map(|(a, _)| a.0).max().unwrap();
        for bits in 0..(1u32 << (max_atom + 1)) {
            let mut ilp = IlpModel::new();
            ilp.translate_clause(&clause);
            for var in &mut ilp.vars {
                if let VarKind::Atom(a) = var.kind {
                    let v = i64::from(bits >> a.0 & 1);
                    var.lower = v;
                    var.upper = v;
                }
            }
            let sat = satisfied(&clause, bits);
            match clause.weight {
                Weight::Hard => {
                    prop_assert_eq!(solve_ilp(&ilp, 0.0, 0).is_ok(), sat);
                }
                Weight::Soft(w) => {
                    let sol = solve_ilp(&ilp, 0.0, 0).expect("soft rows stay feasible");
                    let expected = if sat { w * f64::from(clause.multiplicity) } else { 0.0 };
                    prop_assert!(
                        (sol.objective - expected).abs() < 1e-9,
                        "bits {:b}: objective {} expected {}", bits, sol.objective, expected
                    );
                }
            }
        }
    }
}

fn soft_rows_strategy() -> impl Strategy<Value = Vec<GroundClause>> {
    prop::collection::vec(
        (
            prop::collection::vec((0u32..6, any::<bool>()), 1..=3),
            0usize..2,
            1u32..=2,
        ),
        1..=12,
    )
    .prop_map(|specs| {
        specs
            .into_iter()
            .map(|(lits, widx, multiplicity)| GroundClause {
                literals: lits.into_iter().map(|(a, n)| (AtomId(a), n)).collect(),
                weight: Weight::Soft([1.0, -0.5][widx]),
                formula_id: 0,
                multiplicity,
            })
            .collect()
    })
}

proptest! {
    /// Partitioning rows into groups and singletons never changes the
    /// weighted satisfaction count of any interpretation.
    #[test]
    fn aggregation_preserves_weighted_count(rows in soft_rows_strategy()) {
        let plan = partition_for_aggregation(&rows);
        for bits in 0..64u32 {
            let direct: f64 = rows
                .iter()
                .filter(|r| satisfied(r, bits))
                .map(|r| match r.weight {
                    Weight::Soft(w) => w * f64::from(r.multiplicity),
                    Weight::Hard => unreachable!(),
                })
                .sum();
            let interp = Interpretation {
                truth: (0..6).map(|i| bits >> i & 1 == 1).collect(),
                generation: 0,
            };
            let grouped: f64 = plan
                .groups
                .iter()
                .map(|g| g.weight * g.feature_value(&interp) as f64)
                .sum();
            let single: f64 = plan
                .singletons
                .iter()
                .filter(|r| satisfied(r, bits))
                .map(|r| match r.weight {
                    Weight::Soft(w) => w * f64::from(r.multiplicity),
                    Weight::Hard => unreachable!(),
                })
                .sum();
            prop_assert!(
                (direct - (grouped + single)).abs() < 1e-9,
                "bits {:b}: direct {} vs plan {}", bits, direct, grouped + single
            );
        }
    }

    /// Exporting a program and parsing it back reproduces the exact same
    /// bytes and the same row and objective structure.
    #[test]
    fn lp_export_parse_identity(
        clauses in prop::collection::vec(clause_strategy(), 0..=6),
        pins in prop::collection::vec((0u32..5, any::<bool>()), 0..=3),
    ) {
        let mut ilp = IlpModel::new();
        for clause in &clauses {
            ilp.translate_clause(clause);
        }
        for &(a, v) in &pins {
            if let Some(var) = ilp.lookup_atom_var(AtomId(a)) {
                ilp.vars[var.0 as usize].lower = i64::from(v);
                ilp.vars[var.0 as usize].upper = i64::from(v);
            }
        }
        let text = export_lp(&ilp);
        let parsed = parse_lp(&text).expect("canonical output parses");
        prop_assert_eq!(export_lp(&parsed), text);
        prop_assert_eq!(parsed.constraints.len(), ilp.constraints.len());
        prop_assert_eq!(parsed.objective.len(), ilp.objective.len());
        prop_assert_eq!(parsed.vars.len(), ilp.vars.len());
    }

    /// The text parsers reject or accept arbitrary input without panicking.
    #[test]
    fn parsers_never_panic(text in any::<String>()) {
        let _ = parse_mln(&text);
        let _ = parse_lp(&text);
    }

    #[test]
    fn evidence_parser_never_panics(text in any::<String>()) {
        let model = parse_mln("d = {A, B}\np(d)\nq(d, d)\n").unwrap();
        let atoms = AtomTable::new(&model).unwrap();
        let _ = parse_evidence(&text, &model, &atoms);
    }
}
