//! LP-format text export and import for the generated ILPs.
//!
//! The exported layout is canonical: fixed section order, one row per
//! line, terms in stored order, and variables named `x<atom>` and
//! `z<aux>`. Parsing accepts exactly this shape (labels optional) and
//! reconstructs an equivalent model, so exporting a parsed canonical file
//! reproduces it byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::atoms::AtomId;
use crate::error::LpParseError;
use crate::ilp::{IlpModel, LinearConstraint, Sense, VarId, VarKind};

fn var_name(model: &IlpModel, v: VarId) -> String {
    match model.var(v).kind {
        VarKind::Atom(a) => format!("x{}", a.0),
        VarKind::Aux(k) => format!("z{k}"),
    }
}

/// Renders the model in LP format.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("Maximize\n obj:");
    for (i, &(w, v)) in model.objective.iter().enumerate() {
        let name = var_name(model, v);
        let mag = w.abs();
        if w < 0.0 {
            out.push_str(" - ");
        } else if i > 0 {
            out.push_str(" + ");
        } else {
            out.push(' ');
        }
        let _ = write!(out, "{mag} {name}");
    }
    out.push('\n');

    out.push_str("Subject To\n");
    for (i, row) in model.constraints.iter().enumerate() {
        let _ = write!(out, " c{i}:");
        if row.terms.is_empty() {
            out.push_str(" 0");
        }
        for (j, &(c, v)) in row.terms.iter().enumerate() {
            let name = var_name(model, v);
            if c < 0 {
                out.push_str(" - ");
            } else if j > 0 {
                out.push_str(" + ");
            } else {
                out.push(' ');
            }
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&name);
            } else {
                let _ = write!(out, "{mag} {name}");
            }
        }
        let sense = match row.sense {
            Sense::Ge => ">=",
            Sense::Le => "<=",
        };
        let _ = writeln!(out, " {sense} {}", row.rhs);
    }

    // Bounds, atoms in atom order then aux in aux order. Binary [0, 1]
    // atoms need no entry; aux upper bounds are always explicit because
    // the LP default for general variables is unbounded.
    out.push_str("Bounds\n");
    let mut atom_vars: Vec<(u32, VarId)> = Vec::new();
    let mut aux_vars: Vec<(u32, VarId)> = Vec::new();
    for (i, var) in model.vars.iter().enumerate() {
        let v = VarId(i as u32);
        match var.kind {
            VarKind::Atom(a) => atom_vars.push((a.0, v)),
            VarKind::Aux(k) => aux_vars.push((k, v)),
        }
    }
    atom_vars.sort_by_key(|&(a, _)| a);
    aux_vars.sort_by_key(|&(k, _)| k);
    for &(a, v) in &atom_vars {
        let var = model.var(v);
        if var.lower == var.upper {
            let _ = writeln!(out, " x{a} = {}", var.lower);
        } else if (var.lower, var.upper) != (0, 1) {
            if var.lower != 0 {
                let _ = writeln!(out, " x{a} >= {}", var.lower);
            }
            if var.upper != 1 {
                let _ = writeln!(out, " x{a} <= {}", var.upper);
            }
        }
    }
    for &(k, v) in &aux_vars {
        let var = model.var(v);
        if var.lower == var.upper {
            let _ = writeln!(out, " z{k} = {}", var.lower);
        } else {
            if var.lower != 0 {
                let _ = writeln!(out, " z{k} >= {}", var.lower);
            }
            let _ = writeln!(out, " z{k} <= {}", var.upper);
        }
    }

    out.push_str("Generals\n");
    if !aux_vars.is_empty() {
        let names: Vec<String> = aux_vars.iter().map(|&(k, _)| format!("z{k}")).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("Binaries\n");
    if !atom_vars.is_empty() {
        let names: Vec<String> = atom_vars.iter().map(|&(a, _)| format!("x{a}")).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("End\n");
    out
}

/// Default upper bound for general variables without a Bounds entry.
const DEFAULT_AUX_UPPER: i64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Maximize,
    SubjectTo,
    Bounds,
    Generals,
    Binaries,
    End,
}

/// Parsed variable name: which namespace and the numeric id.
enum Name {
    Atom(u32),
    Aux(u32),
}

fn parse_name(token: &str, line: usize) -> Result<Name, LpParseError> {
    let bad = || LpParseError::BadVariableName {
        line,
        name: token.to_string(),
    };
    let rest = &token[1..];
    if token.len() < 2 || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let id: u32 = rest.parse().map_err(|_| bad())?;
    match token.as_bytes()[0] {
        b'x' => Ok(Name::Atom(id)),
        b'z' => Ok(Name::Aux(id)),
        _ => Err(bad()),
    }
}

fn looks_like_name(token: &str) -> bool {
    token.len() >= 2
        && (token.starts_with('x') || token.starts_with('z'))
        && token[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Reads a model from LP-format text. All six sections must be present.
/// Variables must follow the `x<id>`/`z<id>` naming scheme and be declared
/// under Binaries or Generals respectively.
pub fn parse_lp(text: &str) -> Result<IlpModel, LpParseError> {
    let mut section = Section::None;
    let mut seen = [false; 6];
    let mut obj_lines: Vec<(usize, &str)> = Vec::new();
    let mut row_lines: Vec<(usize, &str)> = Vec::new();
    let mut bound_lines: Vec<(usize, &str)> = Vec::new();
    let mut general_lines: Vec<(usize, &str)> = Vec::new();
    let mut binary_lines: Vec<(usize, &str)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let header = match line {
            "Maximize" => Some((Section::Maximize, 0)),
            "Subject To" => Some((Section::SubjectTo, 1)),
            "Bounds" => Some((Section::Bounds, 2)),
            "Generals" => Some((Section::Generals, 3)),
            "Binaries" => Some((Section::Binaries, 4)),
            "End" => Some((Section::End, 5)),
            _ => None,
        };
        if let Some((s, i)) = header {
            if seen[i] {
                return Err(LpParseError::Syntax {
                    line: line_no,
                    msg: format!("duplicate `{line}` section"),
                });
            }
            seen[i] = true;
            section = s;
            continue;
        }
        match section {
            Section::None => {
                return Err(LpParseError::Syntax {
                    line: line_no,
                    msg: "content before the Maximize section".into(),
                })
            }
            Section::Maximize => obj_lines.push((line_no, line)),
            Section::SubjectTo => row_lines.push((line_no, line)),
            Section::Bounds => bound_lines.push((line_no, line)),
            Section::Generals => general_lines.push((line_no, line)),
            Section::Binaries => binary_lines.push((line_no, line)),
            Section::End => {
                return Err(LpParseError::Syntax {
                    line: line_no,
                    msg: "content after the End marker".into(),
                })
            }
        }
    }
    for (i, name) in ["Maximize", "Subject To", "Bounds", "Generals", "Binaries", "End"]
        .iter()
        .enumerate()
    {
        if !seen[i] {
            return Err(LpParseError::MissingSection(name));
        }
    }

    // Declarations first: they fix the variable set.
    let mut model = IlpModel::new();
    let mut by_name: HashMap<String, VarId> = HashMap::new();
    for &(line_no, line) in &general_lines {
        for token in line.split_whitespace() {
            match parse_name(token, line_no)? {
                Name::Aux(k) => {
                    let v = model.insert_declared_var(VarKind::Aux(k), 0, DEFAULT_AUX_UPPER);
                    if by_name.insert(token.to_string(), v).is_some() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: format!("variable `{token}` declared twice"),
                        });
                    }
                }
                Name::Atom(_) => {
                    return Err(LpParseError::Syntax {
                        line: line_no,
                        msg: format!("atom variable `{token}` in the Generals section"),
                    })
                }
            }
        }
    }
    for &(line_no, line) in &binary_lines {
        for token in line.split_whitespace() {
            match parse_name(token, line_no)? {
                Name::Atom(a) => {
                    let v = model.insert_declared_var(VarKind::Atom(AtomId(a)), 0, 1);
                    if by_name.insert(token.to_string(), v).is_some() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: format!("variable `{token}` declared twice"),
                        });
                    }
                }
                Name::Aux(_) => {
                    return Err(LpParseError::Syntax {
                        line: line_no,
                        msg: format!("aux variable `{token}` in the Binaries section"),
                    })
                }
            }
        }
    }

    let lookup = |token: &str, line: usize| -> Result<VarId, LpParseError> {
        if !looks_like_name(token) {
            return Err(LpParseError::BadVariableName {
                line,
                name: token.to_string(),
            });
        }
        by_name
            .get(token)
            .copied()
            .ok_or_else(|| LpParseError::UndeclaredVariable {
                name: token.to_string(),
            })
    };

    // Objective terms, possibly spread over several lines.
    let mut objective: Vec<(f64, VarId)> = Vec::new();
    let mut obj_pos: HashMap<VarId, usize> = HashMap::new();
    for &(line_no, line) in &obj_lines {
        let mut tokens = line.split_whitespace().peekable();
        if let Some(&first) = tokens.peek() {
            if first.ends_with(':') {
                tokens.next();
            }
        }
        let mut sign = 1.0f64;
        let mut pending: Option<f64> = None;
        let mut sign_set = false;
        for token in tokens {
            match token {
                "+" | "-" => {
                    if sign_set || pending.is_some() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: "misplaced sign token".into(),
                        });
                    }
                    sign = if token == "-" { -1.0 } else { 1.0 };
                    sign_set = true;
                }
                _ if looks_like_name(token) => {
                    let v = lookup(token, line_no)?;
                    let coeff = sign * pending.unwrap_or(1.0);
                    if coeff != 0.0 {
                        match obj_pos.get(&v) {
                            Some(&i) => {
                                objective[i].0 += coeff;
                                if !objective[i].0.is_finite() {
                                    return Err(LpParseError::Syntax {
                                        line: line_no,
                                        msg: format!(
                                            "objective coefficient of `{token}` overflows \
                                             when merged"
                                        ),
                                    });
                                }
                            }
                            None => {
                                obj_pos.insert(v, objective.len());
                                objective.push((coeff, v));
                            }
                        }
                    }
                    sign = 1.0;
                    sign_set = false;
                    pending = None;
                }
                _ => {
                    let value: f64 = token.parse().map_err(|_| LpParseError::Syntax {
                        line: line_no,
                        msg: format!("expected a coefficient or variable, got `{token}`"),
                    })?;
                    if !value.is_finite() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: format!("non-finite coefficient `{token}`"),
                        });
                    }
                    if pending.is_some() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: "two coefficients in a row".into(),
                        });
                    }
                    pending = Some(value);
                }
            }
        }
        if pending.is_some() || sign_set {
            return Err(LpParseError::Syntax {
                line: line_no,
                msg: "dangling coefficient or sign at end of objective".into(),
            });
        }
    }
    // Duplicate mentions can cancel each other; canonical output never
    // carries zero coefficients.
    objective.retain(|&(w, _)| w != 0.0);
    model.objective = objective;

    // Constraint rows, one per line.
    for &(line_no, line) in &row_lines {
        let mut tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first().is_some_and(|t| t.ends_with(':')) {
            tokens.remove(0);
        }
        let sense_pos = tokens
            .iter()
            .position(|&t| t == ">=" || t == "<=")
            .ok_or_else(|| LpParseError::Syntax {
                line: line_no,
                msg: "constraint without a `>=` or `<=` comparator".into(),
            })?;
        if sense_pos + 2 != tokens.len() {
            return Err(LpParseError::Syntax {
                line: line_no,
                msg: "expected exactly one right-hand side after the comparator".into(),
            });
        }
        let sense = if tokens[sense_pos] == ">=" {
            Sense::Ge
        } else {
            Sense::Le
        };
        let rhs: i64 = tokens[sense_pos + 1]
            .parse()
            .map_err(|_| LpParseError::Syntax {
                line: line_no,
                msg: format!("bad right-hand side `{}`", tokens[sense_pos + 1]),
            })?;
        let mut terms: Vec<(i64, VarId)> = Vec::new();
        let mut sign = 1i64;
        let mut pending: Option<i64> = None;
        let mut sign_set = false;
        for &token in &tokens[..sense_pos] {
            match token {
                "+" | "-" => {
                    if sign_set || pending.is_some() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: "misplaced sign token".into(),
                        });
                    }
                    sign = if token == "-" { -1 } else { 1 };
                    sign_set = true;
                }
                _ if looks_like_name(token) => {
                    let v = lookup(token, line_no)?;
                    let coeff = sign * pending.unwrap_or(1);
                    if coeff != 0 {
                        terms.push((coeff, v));
                    }
                    sign = 1;
                    sign_set = false;
                    pending = None;
                }
                _ => {
                    let value: i64 = token.parse().map_err(|_| LpParseError::Syntax {
                        line: line_no,
                        msg: format!("expected a coefficient or variable, got `{token}`"),
                    })?;
                    if pending.is_some() {
                        return Err(LpParseError::Syntax {
                            line: line_no,
                            msg: "two coefficients in a row".into(),
                        });
                    }
                    pending = Some(value);
                }
            }
        }
        // A bare `0` stands for an empty left-hand side.
        if pending == Some(0) && !sign_set && terms.is_empty() {
            pending = None;
        }
        if pending.is_some() || sign_set {
            return Err(LpParseError::Syntax {
                line: line_no,
                msg: "dangling coefficient or sign before the comparator".into(),
            });
        }
        model.constraints.push(LinearConstraint { terms, sense, rhs });
    }

    // Bound adjustments.
    for &(line_no, line) in &bound_lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(LpParseError::Syntax {
                line: line_no,
                msg: "bound entries take the form `name <op> value`".into(),
            });
        }
        let v = lookup(tokens[0], line_no)?;
        let value: i64 = tokens[2].parse().map_err(|_| LpParseError::Syntax {
            line: line_no,
            msg: format!("bad bound value `{}`", tokens[2]),
        })?;
        let var = &mut model.vars[v.0 as usize];
        match tokens[1] {
            ">=" => var.lower = value,
            "<=" => var.upper = value,
            "=" => {
                var.lower = value;
                var.upper = value;
            }
            other => {
                return Err(LpParseError::Syntax {
                    line: line_no,
                    msg: format!("unknown bound operator `{other}`"),
                })
            }
        }
    }

    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::GroundClause;
    use crate::model::Weight;

    fn table_model() -> IlpModel {
        let mut ilp = IlpModel::new();
        ilp.translate_clause(&GroundClause {
            literals: vec![(AtomId(1), false), (AtomId(2), true), (AtomId(3), false)],
            weight: Weight::Soft(1.1),
            formula_id: 0,
            multiplicity: 1,
        });
        ilp.translate_clause(&GroundClause {
            literals: vec![(AtomId(1), true), (AtomId(2), false)],
            weight: Weight::Soft(-0.5),
            formula_id: 1,
            multiplicity: 1,
        });
        ilp.translate_clause(&GroundClause {
            literals: vec![(AtomId(1), true), (AtomId(2), false)],
            weight: Weight::Hard,
            formula_id: 2,
            multiplicity: 1,
        });
        ilp
    }

    const TABLE_LP: &str = "Maximize\n \
obj: 1.1 z0 - 0.5 z1\n\
Subject To\n \
c0: x1 - x2 + x3 - z0 >= -1\n \
c1: - x1 + x2 - 2 z1 <= -1\n \
c2: - x1 + x2 >= 0\n\
Bounds\n \
z0 <= 1\n \
z1 <= 1\n\
Generals\n \
z0 z1\n\
Binaries\n \
x1 x2 x3\n\
End\n";

    #[test]
    fn export_matches_expected_layout() {
        assert_eq!(export_lp(&table_model()), TABLE_LP);
    }

    #[test]
    fn parse_then_export_is_identity() {
        let text = export_lp(&table_model());
        let parsed = parse_lp(&text).unwrap();
        assert_eq!(export_lp(&parsed), text);
    }

    #[test]
    fn parse_preserves_structure() {
        let parsed = parse_lp(TABLE_LP).unwrap();
        assert_eq!(parsed.vars.len(), 5);
        assert_eq!(parsed.constraints.len(), 3);
        assert_eq!(parsed.objective.len(), 2);
        assert_eq!(parsed.constraints[0].sense, Sense::Ge);
        assert_eq!(parsed.constraints[0].rhs, -1);
        assert_eq!(parsed.constraints[1].terms.iter().map(|&(c, _)| c).collect::<Vec<_>>(), vec![-1, 1, -2]);
        let solved = crate::solver::solve_ilp(&parsed, 0.0, 0).unwrap();
        assert!((solved.objective - 0.6).abs() < 1e-9);
    }

    #[test]
    fn round_trip_with_bounds_and_groups() {
        use crate::cpa::{translate_group, AggregatedGroup};
        let mut ilp = IlpModel::new();
        translate_group(
            &mut ilp,
            &AggregatedGroup {
                weight: 0.5,
                formula_id: 0,
                context: vec![(AtomId(4), true)],
                members: vec![
                    (AtomId(1), false, 1),
                    (AtomId(2), false, 2),
                    (AtomId(3), true, 1),
                ],
            },
        );
        // Pin one atom the way evidence tightening does.
        let v = ilp.lookup_atom_var(AtomId(2)).unwrap();
        ilp.vars[v.0 as usize].lower = 1;
        ilp.vars[v.0 as usize].upper = 1;
        let text = export_lp(&ilp);
        assert!(text.contains(" x2 = 1\n"));
        assert!(text.contains(" z0 <= 4\n"));
        let parsed = parse_lp(&text).unwrap();
        assert_eq!(export_lp(&parsed), text);
    }

    #[test]
    fn rejects_bad_names_and_undeclared_variables() {
        let bad_name = TABLE_LP.replace("x1", "y1");
        assert!(matches!(
            parse_lp(&bad_name),
            Err(LpParseError::BadVariableName { .. })
        ));
        let undeclared = TABLE_LP.replace("Binaries\n x1 x2 x3\n", "Binaries\n x2 x3\n");
        assert!(matches!(
            parse_lp(&undeclared),
            Err(LpParseError::UndeclaredVariable { .. })
        ));
    }

    #[test]
    fn rejects_missing_sections_and_stray_content() {
        assert!(matches!(
            parse_lp("Maximize\n obj:\n"),
            Err(LpParseError::MissingSection(_))
        ));
        let with_garbage = format!("{TABLE_LP}leftover\n");
        assert!(matches!(
            parse_lp(&with_garbage),
            Err(LpParseError::Syntax { .. })
        ));
        assert!(parse_lp("").is_err());
    }

    #[test]
    fn empty_objective_and_empty_rows_survive() {
        let mut ilp = IlpModel::new();
        ilp.atom_var(AtomId(0));
        ilp.add_constraint(vec![], Sense::Ge, -1);
        let text = export_lp(&ilp);
        assert!(text.contains(" c0: 0 >= -1\n"));
        let parsed = parse_lp(&text).unwrap();
        assert_eq!(export_lp(&parsed), text);
        assert!(parsed.objective.is_empty());
    }
}
