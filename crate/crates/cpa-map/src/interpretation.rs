//! Possible worlds (truth assignments) and the model's log-linear objective.

use crate::atoms::{AtomId, AtomTable};
use crate::evidence::EvidenceSet;
use crate::model::{MlnModel, Term, Weight};

/// A truth assignment for every interned atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub truth: Vec<bool>,
    /// Bumped every time the engine installs a new intermediate solution.
    pub generation: u64,
}

impl Interpretation {
    pub fn is_true(&self, atom: AtomId) -> bool {
        self.truth[atom.0 as usize]
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.truth
            .iter()
            .enumerate()
            .filter_map(|(i, &t)| t.then_some(AtomId(i as u32)))
    }
}

/// Evidence atoms take their fixed values; everything else starts false.
pub fn initial_interpretation(atoms: &AtomTable, evidence: &EvidenceSet) -> Interpretation {
    let mut truth = vec![false; atoms.len()];
    for (atom, value) in evidence.iter_fixed() {
        truth[atom.0 as usize] = value;
    }
    Interpretation {
        truth,
        generation: 0,
    }
}

/// Sum over all ground instantiations of all soft clauses of
/// `weight x satisfied-count`; negative infinity if any hard instantiation
/// is violated.
pub fn interpretation_weight(
    model: &MlnModel,
    atoms: &AtomTable,
    interp: &Interpretation,
) -> f64 {
    let mut total = 0.0;
    for clause in &model.clauses {
        let sizes: Vec<u32> = clause
            .var_domains
            .iter()
            .map(|&d| model.domain(d).constants.len() as u32)
            .collect();
        if sizes.iter().any(|&s| s == 0) {
            continue;
        }
        let mut satisfied: u64 = 0;
        let mut unsatisfied: u64 = 0;
        let mut theta = vec![0u32; sizes.len()];
        loop {
            let sat = clause.literals.iter().any(|lit| {
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
                let atom = atoms.encode(lit.pred, &positions);
                interp.is_true(atom) != lit.negated
            });
            if sat {
                satisfied += 1;
            } else {
                unsatisfied += 1;
            }
            if !advance(&mut theta, &sizes) {
                break;
            }
        }
        match clause.weight {
            Weight::Soft(w) => total += w * satisfied as f64,
            Weight::Hard => {
                if unsatisfied > 0 {
                    return f64::NEG_INFINITY;
                }
            }
        }
    }
    total
}

/// Odometer increment over mixed radices; false when wrapped to all zeros.
pub(crate) fn advance(theta: &mut [u32], sizes: &[u32]) -> bool {
    for i in (0..theta.len()).rev() {
        theta[i] += 1;
        if theta[i] < sizes[i] {
            return true;
        }
        theta[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_mln;

    const SMOKERS: &str = "person={A,B}\nsmokes(person)\ncancer(person)\n1.5 !smokes(x) v cancer(x)";

    fn world(model: &MlnModel, atoms: &AtomTable, true_atoms: &[&str]) -> Interpretation {
        let mut truth = vec![false; atoms.len()];
        for name in true_atoms {
            let found = (0..atoms.len() as u32)
                .map(AtomId)
                .find(|&a| atoms.render(model, a) == *name)
                .expect("atom exists");
            truth[found.0 as usize] = true;
        }
        Interpretation { truth, generation: 0 }
    }

    #[test]
    fn smokers_weight_both_groundings_satisfied() {
        let m = parse_mln(SMOKERS).unwrap();
        let t = AtomTable::new(&m).unwrap();
        let w = world(&m, &t, &["smokes(A)", "cancer(A)"]);
        assert_eq!(interpretation_weight(&m, &t, &w), 3.0);
    }

    #[test]
    fn smokers_weight_all_false() {
        let m = parse_mln(SMOKERS).unwrap();
        let t = AtomTable::new(&m).unwrap();
        let w = world(&m, &t, &[]);
        assert_eq!(interpretation_weight(&m, &t, &w), 3.0);
    }

    #[test]
    fn smokers_weight_one_violated() {
        let m = parse_mln(SMOKERS).unwrap();
        let t = AtomTable::new(&m).unwrap();
        let w = world(&m, &t, &["smokes(A)"]);
        assert_eq!(interpretation_weight(&m, &t, &w), 1.5);
    }

    #[test]
    fn hard_violation_is_negative_infinity() {
        let text = format!("{SMOKERS}\n!smokes(x) v cancer(x) .");
        let m = parse_mln(&text).unwrap();
        let t = AtomTable::new(&m).unwrap();
        let w = world(&m, &t, &["smokes(A)"]);
        assert_eq!(interpretation_weight(&m, &t, &w), f64::NEG_INFINITY);
    }

    #[test]
    fn initial_interpretation_honors_evidence() {
        let m = parse_mln(SMOKERS).unwrap();
        let t = AtomTable::new(&m).unwrap();
        let ev = crate::evidence::parse_evidence("smokes(A)\n!cancer(B)", &m, &t).unwrap();
        let interp = initial_interpretation(&t, &ev);
        let smokes = m.pred_id("smokes").unwrap();
        let cancer = m.pred_id("cancer").unwrap();
        assert!(interp.is_true(t.encode(smokes, &[0])));
        assert!(!interp.is_true(t.encode(smokes, &[1])));
        assert!(!interp.is_true(t.encode(cancer, &[0])));
        assert!(!interp.is_true(t.encode(cancer, &[1])));
    }

    #[test]
    fn weight_invariant_under_clause_and_literal_order() {
        let a = parse_mln(
            "person={A,B}\np(person)\nq(person)\n1.0 p(x) v q(x)\n-0.5 !p(x) v q(y)",
        )
        .unwrap();
        let b = parse_mln(
            "person={A,B}\np(person)\nq(person)\n-0.5 q(y) v !p(x)\n1.0 q(x) v p(x)",
        )
        .unwrap();
        let ta = AtomTable::new(&a).unwrap();
        let tb = AtomTable::new(&b).unwrap();
        for mask in 0..16u32 {
            let wa = Interpretation {
                truth: (0..4).map(|i| mask & (1 << i) != 0).collect(),
                generation: 0,
            };
            let va = interpretation_weight(&a, &ta, &wa);
            let vb = interpretation_weight(&b, &tb, &wa);
            assert!((va - vb).abs() < 1e-12, "mask {mask}: {va} vs {vb}");
        }
    }
}
