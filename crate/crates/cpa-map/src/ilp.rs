//! Integer linear program representation and the per-clause translation.
//!
//! One ground clause becomes one constraint. Constraints are stored in
//! normalized integer form with all constants moved to the right-hand side,
//! so equal clauses produce bit-identical rows and the LP export is
//! canonical.

use std::collections::HashMap;

use crate::atoms::{AtomId, GroundClause};
use crate::evidence::EvidenceSet;
use crate::model::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Binary variable for a ground atom.
    Atom(AtomId),
    /// Auxiliary clause/group variable; the payload is its display id.
    Aux(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpVar {
    pub kind: VarKind,
    pub lower: i64,
    pub upper: i64,
}

impl IlpVar {
    pub fn is_binary(&self) -> bool {
        self.lower >= 0 && self.upper <= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
}

/// `sum(coeff * var) sense rhs`, with unique vars and nonzero coefficients,
/// terms ordered atoms-first by atom id, then aux vars by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(i64, VarId)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A maximization ILP over binary atom variables and integer aux variables.
#[derive(Debug, Clone, Default)]
pub struct IlpModel {
    pub vars: Vec<IlpVar>,
    pub constraints: Vec<LinearConstraint>,
    /// Objective terms (weight, aux var), in aux-creation order.
    pub objective: Vec<(f64, VarId)>,
    /// Reporting-only constant added to the objective value outside the ILP.
    pub constant_offset: f64,
    atom_vars: HashMap<AtomId, VarId>,
    aux_count: u32,
}

impl IlpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom_var(&mut self, atom: AtomId) -> VarId {
        if let Some(&v) = self.atom_vars.get(&atom) {
            return v;
        }
        let v = VarId(self.vars.len() as u32);
        self.vars.push(IlpVar {
            kind: VarKind::Atom(atom),
            lower: 0,
            upper: 1,
        });
        self.atom_vars.insert(atom, v);
        v
    }

    pub fn lookup_atom_var(&self, atom: AtomId) -> Option<VarId> {
        self.atom_vars.get(&atom).copied()
    }

    pub fn new_aux(&mut self, upper: i64) -> VarId {
        let v = VarId(self.vars.len() as u32);
        self.vars.push(IlpVar {
            kind: VarKind::Aux(self.aux_count),
            lower: 0,
            upper,
        });
        self.aux_count += 1;
        v
    }

    pub fn var(&self, v: VarId) -> &IlpVar {
        &self.vars[v.0 as usize]
    }

    /// Registers a variable with an explicit kind, used when rebuilding a
    /// model from its text form.
    pub(crate) fn insert_declared_var(&mut self, kind: VarKind, lower: i64, upper: i64) -> VarId {
        let v = VarId(self.vars.len() as u32);
        self.vars.push(IlpVar { kind, lower, upper });
        match kind {
            VarKind::Atom(a) => {
                self.atom_vars.insert(a, v);
            }
            VarKind::Aux(k) => {
                self.aux_count = self.aux_count.max(k.saturating_add(1));
            }
        }
        v
    }

    pub fn atom_of(&self, v: VarId) -> Option<AtomId> {
        match self.vars[v.0 as usize].kind {
            VarKind::Atom(a) => Some(a),
            VarKind::Aux(_) => None,
        }
    }

    /// Adds a row after merging duplicate variables, dropping zero
    /// coefficients, and sorting terms canonically.
    pub fn add_constraint(&mut self, terms: Vec<(i64, VarId)>, sense: Sense, rhs: i64) {
        let mut merged: HashMap<VarId, i64> = HashMap::new();
        for (c, v) in terms {
            *merged.entry(v).or_default() += c;
        }
        let mut terms: Vec<(i64, VarId)> = merged
            .into_iter()
            .map(|(v, c)| (c, v))
            .filter(|&(c, _)| c != 0)
            .collect();
        terms.sort_by_key(|&(_, v)| self.sort_key(v));
        self.constraints.push(LinearConstraint { terms, sense, rhs });
    }

    fn sort_key(&self, v: VarId) -> (u8, u32) {
        match self.vars[v.0 as usize].kind {
            VarKind::Atom(a) => (0, a.0),
            VarKind::Aux(k) => (1, k),
        }
    }

    /// Compiles one evidence-simplified ground clause into its constraint.
    ///
    /// The effective objective weight is the clause weight scaled by its
    /// substitution multiplicity; hard clauses get a pure feasibility row.
    pub fn translate_clause(&mut self, g: &GroundClause) {
        debug_assert!(!g.literals.is_empty(), "empty clauses never reach translation");
        let mut terms: Vec<(i64, VarId)> = Vec::with_capacity(g.literals.len() + 1);
        let mut negated = 0i64;
        for &(atom, neg) in &g.literals {
            let v = self.atom_var(atom);
            if neg {
                negated += 1;
                terms.push((-1, v));
            } else {
                terms.push((1, v));
            }
        }
        match g.weight {
            Weight::Hard => {
                self.add_constraint(terms, Sense::Ge, 1 - negated);
            }
            Weight::Soft(w) if w > 0.0 => {
                let z = self.new_aux(1);
                terms.push((-1, z));
                self.add_constraint(terms, Sense::Ge, -negated);
                self.objective.push((w * f64::from(g.multiplicity), z));
            }
            Weight::Soft(w) => {
                debug_assert!(w < 0.0);
                let k = g.literals.len() as i64;
                let z = self.new_aux(1);
                terms.push((-k, z));
                self.add_constraint(terms, Sense::Le, -negated);
                self.objective.push((w * f64::from(g.multiplicity), z));
            }
        }
    }

    /// Tightens variable bounds for atoms fixed by evidence. Rows never
    /// mention evidence atoms after simplification, so in the engine
    /// pipeline this is a no-op; it matters when translating unsimplified
    /// clauses directly.
    pub fn evidence_constraints(&mut self, evidence: &EvidenceSet) {
        for var in &mut self.vars {
            if let VarKind::Atom(a) = var.kind {
                match evidence.value(a) {
                    Some(true) => var.lower = 1,
                    Some(false) => var.upper = 0,
                    None => {}
                }
            }
        }
    }
}
