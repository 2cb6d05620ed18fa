//! Dense interning of the ground-atom space.
//!
//! Atom ids are assigned arithmetically: each predicate owns a contiguous id
//! range and argument tuples are laid out row-major over the argument domain
//! positions. Encoding and decoding are O(arity) with no hashing, and the
//! id ↔ (predicate, arguments) mapping is a bijection by construction.

use crate::error::ParseError;
use crate::model::{MlnModel, PredId, Weight};
use crate::symbols::SymbolId;

/// Hard ceiling on the ground-atom space; models beyond this are rejected
/// rather than exhausting memory.
pub const MAX_ATOMS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u32);

/// Precomputed layout of the full ground-atom space of a model.
#[derive(Debug, Clone)]
pub struct AtomTable {
    /// First atom id of each predicate; one extra entry holds the total.
    pred_base: Vec<u32>,
    /// Row-major strides per predicate argument position.
    strides: Vec<Vec<u32>>,
    /// Domain sizes per predicate argument position.
    dims: Vec<Vec<u32>>,
}

impl AtomTable {
    pub fn new(model: &MlnModel) -> Result<Self, ParseError> {
        let mut pred_base = Vec::with_capacity(model.predicates.len() + 1);
        let mut strides = Vec::with_capacity(model.predicates.len());
        let mut dims = Vec::with_capacity(model.predicates.len());
        let mut total: u64 = 0;
        for sig in &model.predicates {
            pred_base.push(total as u32);
            let d: Vec<u32> = sig
                .arg_domains
                .iter()
                .map(|&dom| model.domain(dom).constants.len() as u32)
                .collect();
            let mut s = vec![0u32; d.len()];
            let mut stride: u64 = 1;
            for pos in (0..d.len()).rev() {
                s[pos] = stride as u32;
                stride = stride.saturating_mul(u64::from(d[pos]));
                if stride > MAX_ATOMS {
                    return Err(ParseError::HerbrandTooLarge {
                        atoms: total.saturating_add(stride),
                        limit: MAX_ATOMS,
                    });
                }
            }
            total += stride;
            if total > MAX_ATOMS {
                return Err(ParseError::HerbrandTooLarge {
                    atoms: total,
                    limit: MAX_ATOMS,
                });
            }
            strides.push(s);
            dims.push(d);
        }
        pred_base.push(total as u32);
        Ok(Self {
            pred_base,
            strides,
            dims,
        })
    }

    pub fn len(&self) -> usize {
        *self.pred_base.last().unwrap_or(&0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Encodes (predicate, per-position domain indices) into an atom id.
    pub fn encode(&self, pred: PredId, arg_positions: &[u32]) -> AtomId {
        let p = pred.0 as usize;
        debug_assert_eq!(arg_positions.len(), self.strides[p].len());
        let mut id = self.pred_base[p];
        for (pos, &idx) in arg_positions.iter().enumerate() {
            debug_assert!(idx < self.dims[p][pos]);
            id += idx * self.strides[p][pos];
        }
        AtomId(id)
    }

    /// Inverse of [`encode`](Self::encode).
    pub fn decode(&self, atom: AtomId) -> (PredId, Vec<u32>) {
        let p = self.pred_of(atom);
        let mut rest = atom.0 - self.pred_base[p.0 as usize];
        let strides = &self.strides[p.0 as usize];
        let mut args = Vec::with_capacity(strides.len());
        for &s in strides {
            args.push(rest / s);
            rest %= s;
        }
        (p, args)
    }

    pub fn pred_of(&self, atom: AtomId) -> PredId {
        debug_assert!((atom.0 as usize) < self.len());
        // pred_base is sorted; partition_point finds the owning range.
        let p = self.pred_base.partition_point(|&b| b <= atom.0) - 1;
        PredId(p as u32)
    }

    pub fn pred_range(&self, pred: PredId) -> std::ops::Range<u32> {
        let p = pred.0 as usize;
        self.pred_base[p]..self.pred_base[p + 1]
    }

    /// Atom id for constant arguments given as symbols.
    pub fn encode_constants(
        &self,
        model: &MlnModel,
        pred: PredId,
        args: &[SymbolId],
    ) -> Option<AtomId> {
        let sig = model.predicate(pred);
        if args.len() != sig.arity() {
            return None;
        }
        let mut positions = Vec::with_capacity(args.len());
        for (pos, &sym) in args.iter().enumerate() {
            positions.push(model.domain(sig.arg_domains[pos]).position_of(sym)?);
        }
        Some(self.encode(pred, &positions))
    }

    /// Renders an atom as `pred(C1,C2)`, matching the input grammar.
    pub fn render(&self, model: &MlnModel, atom: AtomId) -> String {
        let (pred, args) = self.decode(atom);
        let sig = model.predicate(pred);
        let names: Vec<&str> = args
            .iter()
            .enumerate()
            .map(|(pos, &idx)| {
                let dom = model.domain(sig.arg_domains[pos]);
                model.symbols.name(dom.constants[idx as usize])
            })
            .collect();
        format!("{}({})", sig.name, names.join(","))
    }
}

/// A ground clause: signed atom literals, the owning formula, and the number
/// of variable substitutions of that formula producing exactly this clause.
///
/// Literals are kept in clause-positional order (duplicates collapsed,
/// keeping the first occurrence); `positive/negative` views derive from it.
/// A multiplicity above 1 arises from symmetric substitutions and scales the
/// clause's weight contribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundClause {
    pub literals: Vec<(AtomId, bool)>,
    pub weight: Weight,
    pub formula_id: usize,
    pub multiplicity: u32,
}

impl GroundClause {
    pub fn positive(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.literals
            .iter()
            .filter(|(_, neg)| !neg)
            .map(|(a, _)| *a)
    }

    pub fn negative(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.literals
            .iter()
            .filter(|(_, neg)| *neg)
            .map(|(a, _)| *a)
    }

    /// Canonical identity of the literal set: sorted `atom << 1 | negated`.
    pub fn sorted_codes(&self) -> Vec<u64> {
        let mut codes: Vec<u64> = self
            .literals
            .iter()
            .map(|&(a, neg)| u64::from(a.0) << 1 | u64::from(neg))
            .collect();
        codes.sort_unstable();
        codes
    }

    /// True when the clause contains an atom both negated and unnegated.
    pub fn is_tautology(&self) -> bool {
        let codes = self.sorted_codes();
        codes.windows(2).any(|w| w[0] | 1 == w[1] && w[0] & 1 == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Literal, MlnModel, Term, Weight};

    fn arity2_model() -> MlnModel {
        let mut b = MlnModel::builder();
        let person = b.domain("person", ["A", "B", "C"]);
        let item = b.domain("item", ["X", "Y"]);
        let p = b.predicate("likes", &[person, item], false);
        let q = b.predicate("happy", &[person], false);
        b.clause(
            Weight::Soft(1.0),
            vec![
                Literal {
                    pred: p,
                    negated: true,
                    terms: vec![Term::Var(0), Term::Var(1)],
                },
                Literal {
                    pred: q,
                    negated: false,
                    terms: vec![Term::Var(0)],
                },
            ],
        );
        b.finish()
    }

    #[test]
    fn encode_decode_roundtrip_over_all_atoms() {
        let m = arity2_model();
        let t = AtomTable::new(&m).unwrap();
        assert_eq!(t.len(), 6 + 3);
        let mut seen = std::collections::HashSet::new();
        for pred in 0..m.predicates.len() {
            let pred = crate::model::PredId(pred as u32);
            for id in t.pred_range(pred) {
                let atom = AtomId(id);
                let (p, args) = t.decode(atom);
                assert_eq!(p, pred);
                assert_eq!(t.encode(p, &args), atom);
                assert!(seen.insert(atom), "atom ids must be unique");
            }
        }
        assert_eq!(seen.len(), t.len());
    }

    #[test]
    fn render_matches_grammar() {
        let m = arity2_model();
        let t = AtomTable::new(&m).unwrap();
        let likes = m.pred_id("likes").unwrap();
        let a = m.symbols.get("A").unwrap();
        let y = m.symbols.get("Y").unwrap();
        let atom = t.encode_constants(&m, likes, &[a, y]).unwrap();
        assert_eq!(t.render(&m, atom), "likes(A,Y)");
    }

    #[test]
    fn encode_constants_rejects_wrong_domain() {
        let m = arity2_model();
        let t = AtomTable::new(&m).unwrap();
        let likes = m.pred_id("likes").unwrap();
        let a = m.symbols.get("A").unwrap();
        // `A` is a person, not an item.
        assert!(t.encode_constants(&m, likes, &[a, a]).is_none());
    }

    #[test]
    fn tautology_detection() {
        let g = GroundClause {
            literals: vec![(AtomId(3), false), (AtomId(4), true), (AtomId(3), true)],
            weight: Weight::Soft(1.0),
            formula_id: 0,
            multiplicity: 1,
        };
        assert!(g.is_tautology());
        let g2 = GroundClause {
            literals: vec![(AtomId(3), false), (AtomId(4), true)],
            weight: Weight::Soft(1.0),
            formula_id: 0,
            multiplicity: 1,
        };
        assert!(!g2.is_tautology());
    }
}
