//! Evidence: fixed truth values for ground atoms.
//!
//! The evidence file has one ground literal per line (`!` marks false), with
//! `//` comments. Predicates declared closed-world treat every atom not
//! listed true as fixed false.

use crate::atoms::{AtomId, AtomTable};
use crate::error::{ParseError, SourcePos};
use crate::model::MlnModel;
use crate::parse::strip_comment;

/// Dense fixed-value table over the full atom space.
#[derive(Debug, Clone)]
pub struct EvidenceSet {
    fixed: Vec<Option<bool>>,
}

impl EvidenceSet {
    pub fn empty(atoms: &AtomTable) -> Self {
        Self {
            fixed: vec![None; atoms.len()],
        }
    }

    /// Builds evidence from explicit assignments, then applies closed-world
    /// completion per flagged predicate.
    pub fn new(
        model: &MlnModel,
        atoms: &AtomTable,
        assignments: &[(AtomId, bool)],
    ) -> Result<Self, ParseError> {
        let mut ev = Self::empty(atoms);
        for &(atom, value) in assignments {
            ev.set(model, atoms, atom, value, SourcePos { line: 0, col: 0 })?;
        }
        ev.apply_closed_world(model, atoms);
        Ok(ev)
    }

    fn set(
        &mut self,
        model: &MlnModel,
        atoms: &AtomTable,
        atom: AtomId,
        value: bool,
        at: SourcePos,
    ) -> Result<(), ParseError> {
        match self.fixed[atom.0 as usize] {
            Some(prev) if prev != value => Err(ParseError::ContradictoryEvidence {
                pos: at,
                atom: atoms.render(model, atom),
            }),
            _ => {
                self.fixed[atom.0 as usize] = Some(value);
                Ok(())
            }
        }
    }

    fn apply_closed_world(&mut self, model: &MlnModel, atoms: &AtomTable) {
        for (pi, sig) in model.predicates.iter().enumerate() {
            if !sig.closed_world {
                continue;
            }
            for id in atoms.pred_range(crate::model::PredId(pi as u32)) {
                let slot = &mut self.fixed[id as usize];
                if slot.is_none() {
                    *slot = Some(false);
                }
            }
        }
    }

    pub fn value(&self, atom: AtomId) -> Option<bool> {
        self.fixed[atom.0 as usize]
    }

    pub fn is_fixed(&self, atom: AtomId) -> bool {
        self.fixed[atom.0 as usize].is_some()
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed.iter().filter(|v| v.is_some()).count()
    }

    pub fn iter_fixed(&self) -> impl Iterator<Item = (AtomId, bool)> + '_ {
        self.fixed
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (AtomId(i as u32), b)))
    }
}

pub fn parse_evidence(
    text: &str,
    model: &MlnModel,
    atoms: &AtomTable,
) -> Result<EvidenceSet, ParseError> {
    let mut ev = EvidenceSet::empty(atoms);
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let at = SourcePos {
            line: lineno + 1,
            col: 1,
        };
        let (value, body) = match line.strip_prefix('!') {
            Some(rest) => (false, rest.trim_start()),
            None => (true, line),
        };
        let atom = parse_ground_atom(body, model, atoms, at)?;
        ev.set(model, atoms, atom, value, at)?;
    }
    ev.apply_closed_world(model, atoms);
    Ok(ev)
}

fn parse_ground_atom(
    body: &str,
    model: &MlnModel,
    atoms: &AtomTable,
    at: SourcePos,
) -> Result<AtomId, ParseError> {
    let open = body.find('(').ok_or_else(|| ParseError::Syntax {
        pos: at,
        msg: format!("expected `pred(C1,...)`, got `{body}`"),
    })?;
    if !body.ends_with(')') {
        return Err(ParseError::Syntax {
            pos: at,
            msg: format!("unterminated atom `{body}`"),
        });
    }
    let name = &body[..open];
    let pred = model.pred_id(name).ok_or_else(|| ParseError::UnknownPredicate {
        pos: at,
        name: name.to_owned(),
    })?;
    let sig = model.predicate(pred);
    let inner = body[open + 1..body.len() - 1].trim();
    let args: Vec<&str> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    if args.len() != sig.arity() {
        return Err(ParseError::ArityMismatch {
            pos: at,
            name: name.to_owned(),
            expected: sig.arity(),
            got: args.len(),
        });
    }
    let mut positions = Vec::with_capacity(args.len());
    for (argpos, tok) in args.iter().enumerate() {
        let dom = model.domain(sig.arg_domains[argpos]);
        let idx = model
            .symbols
            .get(tok)
            .and_then(|s| dom.position_of(s))
            .ok_or_else(|| ParseError::UnknownConstant {
                pos: at,
                name: (*tok).to_owned(),
                domain: dom.name.clone(),
            })?;
        positions.push(idx);
    }
    Ok(atoms.encode(pred, &positions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_mln;

    fn smokers() -> (MlnModel, AtomTable) {
        let m = parse_mln("person={A,B}\nsmokes(person)\ncancer(person)").unwrap();
        let t = AtomTable::new(&m).unwrap();
        (m, t)
    }

    #[test]
    fn true_and_false_literals() {
        let (m, t) = smokers();
        let ev = parse_evidence("smokes(A)\n!cancer(B)\n", &m, &t).unwrap();
        let smokes = m.pred_id("smokes").unwrap();
        let cancer = m.pred_id("cancer").unwrap();
        assert_eq!(ev.value(t.encode(smokes, &[0])), Some(true));
        assert_eq!(ev.value(t.encode(cancer, &[1])), Some(false));
        assert_eq!(ev.value(t.encode(cancer, &[0])), None);
        assert_eq!(ev.fixed_count(), 2);
    }

    #[test]
    fn contradictory_evidence_is_an_error() {
        let (m, t) = smokers();
        let e = parse_evidence("smokes(A)\n!smokes(A)", &m, &t).unwrap_err();
        assert!(matches!(e, ParseError::ContradictoryEvidence { .. }));
    }

    #[test]
    fn repeated_consistent_evidence_is_fine() {
        let (m, t) = smokers();
        let ev = parse_evidence("smokes(A)\nsmokes(A)", &m, &t).unwrap();
        assert_eq!(ev.fixed_count(), 1);
    }

    #[test]
    fn unknown_constant_is_an_error() {
        let (m, t) = smokers();
        let e = parse_evidence("smokes(Z)", &m, &t).unwrap_err();
        assert!(matches!(e, ParseError::UnknownConstant { .. }));
    }

    #[test]
    fn unknown_predicate_is_an_error() {
        let (m, t) = smokers();
        let e = parse_evidence("ghost(A)", &m, &t).unwrap_err();
        assert!(matches!(e, ParseError::UnknownPredicate { .. }));
    }

    #[test]
    fn closed_world_fills_unlisted_atoms_false() {
        let m = parse_mln("person={A,B}\n*smokes(person)\ncancer(person)").unwrap();
        let t = AtomTable::new(&m).unwrap();
        let ev = parse_evidence("smokes(A)", &m, &t).unwrap();
        let smokes = m.pred_id("smokes").unwrap();
        let cancer = m.pred_id("cancer").unwrap();
        assert_eq!(ev.value(t.encode(smokes, &[0])), Some(true));
        assert_eq!(ev.value(t.encode(smokes, &[1])), Some(false));
        assert_eq!(ev.value(t.encode(cancer, &[0])), None);
    }

    #[test]
    fn closed_world_with_no_listed_atoms() {
        let m = parse_mln("person={A,B}\n*smokes(person)").unwrap();
        let t = AtomTable::new(&m).unwrap();
        let ev = parse_evidence("", &m, &t).unwrap();
        assert_eq!(ev.fixed_count(), 2);
        assert!(ev.iter_fixed().all(|(_, v)| !v));
    }
}
