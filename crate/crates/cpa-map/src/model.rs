//! First-order model structures: typed constant domains, predicate signatures,
//! and weighted clauses.
//!
//! A model is immutable after construction and safe to share across threads.
//! Construction goes through [`ModelBuilder`] (programmatic) or
//! [`crate::parse::parse_mln`] (text); both funnel into the same finalization
//! step that drops zero-weight clauses and merges duplicate clauses by weight
//! summation.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::symbols::{SymbolId, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId(pub u32);

/// A term in a clause literal: a clause-local variable slot or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Const(SymbolId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub pred: PredId,
    pub negated: bool,
    pub terms: Vec<Term>,
}

/// Clause weight: a finite nonzero real, or hard (must hold in any solution).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Soft(f64),
    Hard,
}

impl Weight {
    pub fn is_hard(&self) -> bool {
        matches!(self, Weight::Hard)
    }

    pub fn soft_value(&self) -> Option<f64> {
        match self {
            Weight::Soft(w) => Some(*w),
            Weight::Hard => None,
        }
    }
}

/// A universally quantified disjunction of literals with a weight.
///
/// Variables are clause-local dense indices `0..var_domains.len()`, each with
/// the domain forced by the predicate signatures at its occurrences.
#[derive(Debug, Clone)]
pub struct FirstOrderClause {
    pub weight: Weight,
    pub literals: Vec<Literal>,
    pub var_domains: Vec<DomainId>,
    pub var_names: Vec<String>,
    pub formula_id: usize,
}

impl FirstOrderClause {
    /// Number of ground instantiations over the given domain sizes,
    /// saturating on (absurd) overflow rather than wrapping.
    pub fn grounding_count(&self, model: &MlnModel) -> u64 {
        self.var_domains
            .iter()
            .map(|d| model.domains[d.0 as usize].constants.len() as u64)
            .fold(1u64, u64::saturating_mul)
    }
}

#[derive(Debug, Clone)]
pub struct Domain {
    pub name: String,
    pub constants: Vec<SymbolId>,
    index: HashMap<SymbolId, u32>,
}

impl Domain {
    pub fn position_of(&self, c: SymbolId) -> Option<u32> {
        self.index.get(&c).copied()
    }
}

#[derive(Debug, Clone)]
pub struct PredicateSig {
    pub name: String,
    pub arg_domains: Vec<DomainId>,
    pub closed_world: bool,
}

impl PredicateSig {
    pub fn arity(&self) -> usize {
        self.arg_domains.len()
    }
}

/// A validated Markov logic network: domains, predicates, weighted clauses.
#[derive(Debug, Clone, Default)]
pub struct MlnModel {
    pub symbols: SymbolTable,
    pub domains: Vec<Domain>,
    pub predicates: Vec<PredicateSig>,
    pub clauses: Vec<FirstOrderClause>,
    domain_index: HashMap<String, DomainId>,
    pred_index: HashMap<String, PredId>,
}

impl MlnModel {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    pub fn domain_id(&self, name: &str) -> Option<DomainId> {
        self.domain_index.get(name).copied()
    }

    pub fn pred_id(&self, name: &str) -> Option<PredId> {
        self.pred_index.get(name).copied()
    }

    pub fn domain(&self, id: DomainId) -> &Domain {
        &self.domains[id.0 as usize]
    }

    pub fn predicate(&self, id: PredId) -> &PredicateSig {
        &self.predicates[id.0 as usize]
    }

    /// Renders the model back into its textual form. Re-parsing the output
    /// yields a structurally identical model.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.domains {
            let names: Vec<&str> = d.constants.iter().map(|&c| self.symbols.name(c)).collect();
            let _ = writeln!(out, "{} = {{{}}}", d.name, names.join(", "));
        }
        for p in &self.predicates {
            let star = if p.closed_world { "*" } else { "" };
            let args: Vec<&str> = p
                .arg_domains
                .iter()
                .map(|&d| self.domains[d.0 as usize].name.as_str())
                .collect();
            let _ = writeln!(out, "{}{}({})", star, p.name, args.join(", "));
        }
        for c in &self.clauses {
            let body = self.render_clause_body(c);
            match c.weight {
                Weight::Soft(w) => {
                    let _ = writeln!(out, "{} {}", w, body);
                }
                Weight::Hard => {
                    let _ = writeln!(out, "{} .", body);
                }
            }
        }
        out
    }

    fn render_clause_body(&self, c: &FirstOrderClause) -> String {
        let lits: Vec<String> = c
            .literals
            .iter()
            .map(|l| {
                let sig = &self.predicates[l.pred.0 as usize];
                let args: Vec<&str> = l
                    .terms
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => c.var_names[*v as usize].as_str(),
                        Term::Const(s) => self.symbols.name(*s),
                    })
                    .collect();
                let neg = if l.negated { "!" } else { "" };
                if args.is_empty() {
                    format!("{}{}()", neg, sig.name)
                } else {
                    format!("{}{}({})", neg, sig.name, args.join(","))
                }
            })
            .collect();
        lits.join(" v ")
    }
}

/// Incremental construction of an [`MlnModel`]. Methods panic on structural
/// misuse (unknown ids, arity mismatch); semantic merging happens in
/// [`ModelBuilder::finish`].
#[derive(Debug, Default)]
pub struct ModelBuilder {
    model: MlnModel,
    raw_clauses: Vec<FirstOrderClause>,
}

impl ModelBuilder {
    pub fn domain<'a, I: IntoIterator<Item = &'a str>>(
        &mut self,
        name: &str,
        constants: I,
    ) -> DomainId {
        assert!(
            !self.model.domain_index.contains_key(name),
            "duplicate domain `{name}`"
        );
        let mut ids = Vec::new();
        let mut index = HashMap::new();
        for c in constants {
            let sym = self.model.symbols.intern(c);
            assert!(
                !index.contains_key(&sym),
                "duplicate constant `{c}` in domain `{name}`"
            );
            index.insert(sym, ids.len() as u32);
            ids.push(sym);
        }
        let id = DomainId(self.model.domains.len() as u32);
        self.model.domains.push(Domain {
            name: name.to_owned(),
            constants: ids,
            index,
        });
        self.model.domain_index.insert(name.to_owned(), id);
        id
    }

    pub fn predicate(&mut self, name: &str, arg_domains: &[DomainId], closed_world: bool) -> PredId {
        assert!(
            !self.model.pred_index.contains_key(name),
            "duplicate predicate `{name}`"
        );
        for d in arg_domains {
            assert!((d.0 as usize) < self.model.domains.len(), "unknown domain id");
        }
        let id = PredId(self.model.predicates.len() as u32);
        self.model.predicates.push(PredicateSig {
            name: name.to_owned(),
            arg_domains: arg_domains.to_vec(),
            closed_world,
        });
        self.model.pred_index.insert(name.to_owned(), id);
        id
    }

    /// Adds a clause. Variable domains are inferred from the predicate
    /// signatures; conflicting inferences panic.
    pub fn clause(&mut self, weight: Weight, literals: Vec<Literal>) -> &mut Self {
        assert!(!literals.is_empty(), "clause must have at least one literal");
        if let Weight::Soft(w) = weight {
            assert!(w.is_finite(), "soft weight must be finite");
        }
        let mut var_domains: Vec<Option<DomainId>> = Vec::new();
        for lit in &literals {
            let sig = &self.model.predicates[lit.pred.0 as usize];
            assert_eq!(
                lit.terms.len(),
                sig.arity(),
                "arity mismatch for `{}`",
                sig.name
            );
            for (pos, term) in lit.terms.iter().enumerate() {
                let dom = sig.arg_domains[pos];
                match term {
                    Term::Var(v) => {
                        let v = *v as usize;
                        if var_domains.len() <= v {
                            var_domains.resize(v + 1, None);
                        }
                        match var_domains[v] {
                            None => var_domains[v] = Some(dom),
                            Some(prev) => assert_eq!(prev, dom, "variable domain conflict"),
                        }
                    }
                    Term::Const(s) => {
                        assert!(
                            self.model.domains[dom.0 as usize].position_of(*s).is_some(),
                            "constant not in domain `{}`",
                            self.model.domains[dom.0 as usize].name
                        );
                    }
                }
            }
        }
        let var_domains: Vec<DomainId> = var_domains
            .into_iter()
            .map(|d| d.expect("variable index gap in clause"))
            .collect();
        let var_names = (0..var_domains.len()).map(|i| format!("v{i}")).collect();
        self.raw_clauses.push(FirstOrderClause {
            weight,
            literals,
            var_domains,
            var_names,
            formula_id: 0,
        });
        self
    }

    pub fn finish(mut self) -> MlnModel {
        self.model.clauses = merge_clauses(std::mem::take(&mut self.raw_clauses));
        self.model
    }
}

/// Internal hook for the parser: validated pieces in, finalized model out.
pub(crate) fn assemble_model(
    symbols: SymbolTable,
    domains: Vec<(String, Vec<SymbolId>)>,
    predicates: Vec<PredicateSig>,
    clauses: Vec<FirstOrderClause>,
) -> MlnModel {
    let mut domain_index = HashMap::new();
    let domains: Vec<Domain> = domains
        .into_iter()
        .enumerate()
        .map(|(i, (name, constants))| {
            domain_index.insert(name.clone(), DomainId(i as u32));
            let index = constants
                .iter()
                .enumerate()
                .map(|(p, &c)| (c, p as u32))
                .collect();
            Domain {
                name,
                constants,
                index,
            }
        })
        .collect();
    let pred_index = predicates
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.clone(), PredId(i as u32)))
        .collect();
    MlnModel {
        symbols,
        domains,
        predicates,
        clauses: merge_clauses(clauses),
        domain_index,
        pred_index,
    }
}

/// Drops zero-weight clauses and merges duplicates: clauses equal up to
/// literal order and variable renaming sum their soft weights (a zero sum
/// drops the clause); duplicate hard clauses collapse to one.
fn merge_clauses(raw: Vec<FirstOrderClause>) -> Vec<FirstOrderClause> {
    struct Slot {
        repr: FirstOrderClause,
        soft_sum: f64,
        has_soft: bool,
        has_hard: bool,
    }
    let mut order: Vec<Vec<u64>> = Vec::new();
    let mut slots: HashMap<Vec<u64>, Slot> = HashMap::new();
    for clause in raw {
        if let Weight::Soft(w) = clause.weight {
            if w == 0.0 {
                continue;
            }
        }
        // Hard and soft versions of the same clause are distinct features:
        // the hard one constrains, the soft one still contributes weight.
        let mut key = canonical_clause_key(&clause);
        key.push(u64::from(clause.weight.is_hard()));
        let slot = slots.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Slot {
                repr: clause.clone(),
                soft_sum: 0.0,
                has_soft: false,
                has_hard: false,
            }
        });
        match clause.weight {
            Weight::Soft(w) => {
                slot.soft_sum += w;
                slot.has_soft = true;
            }
            Weight::Hard => slot.has_hard = true,
        }
    }
    let mut out = Vec::new();
    for key in order {
        let slot = slots.remove(&key).expect("slot recorded in order");
        let weight = if slot.has_hard {
            Weight::Hard
        } else if slot.soft_sum != 0.0 {
            Weight::Soft(slot.soft_sum)
        } else {
            continue;
        };
        let mut clause = slot.repr;
        clause.weight = weight;
        clause.formula_id = out.len();
        out.push(clause);
    }
    out
}

/// Canonical form of a clause under literal reordering and variable renaming:
/// the minimum, over literal permutations, of the token stream obtained by
/// renaming variables in first-occurrence order. Clauses longer than 7
/// literals fall back to the identity order (merging is then best-effort).
fn canonical_clause_key(clause: &FirstOrderClause) -> Vec<u64> {
    let n = clause.literals.len();
    if n > 7 {
        return encode_permutation(clause, &(0..n).collect::<Vec<_>>());
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    permute(&mut indices, 0, &mut |perm| {
        let key = encode_permutation(clause, perm);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.expect("non-empty clause")
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn encode_permutation(clause: &FirstOrderClause, perm: &[usize]) -> Vec<u64> {
    let mut rename: HashMap<u32, u64> = HashMap::new();
    let mut key = Vec::new();
    for &i in perm {
        let lit = &clause.literals[i];
        key.push(0xFFFF_0000 | u64::from(lit.pred.0));
        key.push(u64::from(lit.negated));
        for term in &lit.terms {
            match term {
                Term::Var(v) => {
                    let next = rename.len() as u64;
                    let id = *rename.entry(*v).or_insert(next);
                    key.push(1 << 32 | id);
                }
                Term::Const(s) => key.push(2 << 32 | u64::from(s.0)),
            }
        }
    }
    key
}
