//! Exhaustive MAP reference used to validate the main pipeline.
//!
//! Enumerates every assignment of the atoms left free by the evidence,
//! evaluating clause satisfaction through per-clause bitmasks precomputed
//! once. Independent of the grounding, aggregation, and ILP machinery, so
//! agreement with it is meaningful.

use std::collections::HashMap;

use crate::atoms::{AtomId, AtomTable};
use crate::error::SolveError;
use crate::evidence::EvidenceSet;
use crate::grounder::instantiate;
use crate::interpretation::{advance, Interpretation};
use crate::model::{MlnModel, Weight};

/// Most free atoms the enumeration accepts (2^25 assignments).
pub const MAX_FREE_ATOMS: usize = 25;

/// One ground clause reduced to masks over the free-atom vector: the clause
/// is satisfied iff a positive-mask atom is true or a negative-mask atom is
/// false.
struct MaskedClause {
    pos: u64,
    neg: u64,
}

/// Finds a maximum-weight interpretation by exhaustive search.
///
/// Ties are broken toward the lexicographically smallest set of true atoms
/// in atom order, which makes the result unique and comparison-friendly.
/// Evidence (including closed-world completion) is honored exactly; any
/// hard clause falsified under all assignments yields `Infeasible`.
pub fn brute_force_map(
    model: &MlnModel,
    atoms: &AtomTable,
    evidence: &EvidenceSet,
) -> Result<(Interpretation, f64), SolveError> {
    let free: Vec<AtomId> = (0..atoms.len() as u32)
        .map(AtomId)
        .filter(|&a| !evidence.is_fixed(a))
        .collect();
    if free.len() > MAX_FREE_ATOMS {
        return Err(SolveError::TooManyAtoms {
            atoms: free.len(),
            limit: MAX_FREE_ATOMS,
        });
    }
    let free_index: HashMap<AtomId, usize> =
        free.iter().enumerate().map(|(i, &a)| (a, i)).collect();

    // Compile every grounding into either a constant contribution or a
    // mask pair over the free atoms.
    let mut base = 0.0f64;
    let mut hard: Vec<MaskedClause> = Vec::new();
    let mut soft: Vec<(f64, MaskedClause)> = Vec::new();
    for clause in &model.clauses {
        let sizes: Vec<u32> = clause
            .var_domains
            .iter()
            .map(|&d| model.domain(d).constants.len() as u32)
            .collect();
        if sizes.iter().any(|&s| s == 0) {
            continue;
        }
        let mut theta = vec![0u32; sizes.len()];
        loop {
            let lits = instantiate(model, atoms, clause, &theta);
            match compile_grounding(&lits, evidence, &free_index) {
                Compiled::AlwaysSatisfied => {
                    if let Weight::Soft(w) = clause.weight {
                        base += w;
                    }
                }
                Compiled::NeverSatisfied => {
                    if clause.weight.is_hard() {
                        return Err(SolveError::Infeasible);
                    }
                }
                Compiled::Masked(m) => match clause.weight {
                    Weight::Hard => hard.push(m),
                    Weight::Soft(w) => soft.push((w, m)),
                },
            }
            if !advance(&mut theta, &sizes) {
                break;
            }
        }
    }

    let mut best: Option<(f64, u64)> = None;
    for mask in 0..(1u64 << free.len()) {
        if !hard.iter().all(|m| satisfied(m, mask)) {
            continue;
        }
        let mut weight = base;
        for (w, m) in &soft {
            if satisfied(m, mask) {
                weight += w;
            }
        }
        let replace = match best {
            None => true,
            Some((bw, bm)) => weight > bw || (weight == bw && lex_less(mask, bm, free.len())),
        };
        if replace {
            best = Some((weight, mask));
        }
    }
    let (weight, mask) = best.ok_or(SolveError::Infeasible)?;

    let mut truth: Vec<bool> = (0..atoms.len() as u32)
        .map(|a| evidence.value(AtomId(a)).unwrap_or(false))
        .collect();
    for (i, &a) in free.iter().enumerate() {
        truth[a.0 as usize] = mask >> i & 1 == 1;
    }
    Ok((
        Interpretation {
            truth,
            generation: 0,
        },
        weight,
    ))
}

enum Compiled {
    AlwaysSatisfied,
    NeverSatisfied,
    Masked(MaskedClause),
}

fn compile_grounding(
    lits: &[(AtomId, bool)],
    evidence: &EvidenceSet,
    free_index: &HashMap<AtomId, usize>,
) -> Compiled {
    // Complementary literals make the grounding a tautology.
    for (i, &(a, neg)) in lits.iter().enumerate() {
        if lits[i + 1..].contains(&(a, !neg)) {
            return Compiled::AlwaysSatisfied;
        }
    }
    let mut mask = MaskedClause { pos: 0, neg: 0 };
    let mut any_free = false;
    for &(a, neg) in lits {
        match evidence.value(a) {
            Some(v) => {
                if v != neg {
                    return Compiled::AlwaysSatisfied;
                }
            }
            None => {
                let bit = 1u64 << free_index[&a];
                if neg {
                    mask.neg |= bit;
                } else {
                    mask.pos |= bit;
                }
                any_free = true;
            }
        }
    }
    if any_free {
        Compiled::Masked(mask)
    } else {
        Compiled::NeverSatisfied
    }
}

fn satisfied(m: &MaskedClause, mask: u64) -> bool {
    m.pos & mask != 0 || m.neg & !mask != 0
}

/// Lexicographic order over truth vectors read in atom order.
fn lex_less(a: u64, b: u64, bits: usize) -> bool {
    for i in 0..bits {
        let (ai, bi) = (a >> i & 1, b >> i & 1);
        if ai != bi {
            return ai < bi;
        }
    }
    false
}
