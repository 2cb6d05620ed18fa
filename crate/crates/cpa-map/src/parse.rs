//! Text format for models.
//!
//! Line-oriented UTF-8; `//` starts a comment. Three declaration forms:
//!
//! ```text
//! person = {Anna, Bob}          // domain
//! *smokes(person)               // predicate, `*` = closed world
//! 1.5 !smokes(x) v cancer(x)    // soft clause
//! smokes(x) v cancer(x) .       // hard clause (trailing period)
//! ```
//!
//! Terms starting with a lowercase letter or `_` are variables; anything else
//! must be a constant of the declared domain for that argument position.

use std::collections::HashMap;

use crate::error::{ParseError, SourcePos};
use crate::model::{
    assemble_model, DomainId, FirstOrderClause, Literal, MlnModel, PredicateSig, Term, Weight,
};
use crate::symbols::{SymbolId, SymbolTable};

pub fn parse_mln(text: &str) -> Result<MlnModel, ParseError> {
    let mut symbols = SymbolTable::new();
    let mut domains: Vec<(String, Vec<SymbolId>)> = Vec::new();
    let mut domain_index: HashMap<String, DomainId> = HashMap::new();
    let mut predicates: Vec<PredicateSig> = Vec::new();
    let mut pred_index: HashMap<String, usize> = HashMap::new();
    let mut clauses: Vec<FirstOrderClause> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        if line.contains('=') {
            let (name, consts) = parse_domain_line(line, lineno)?;
            if domain_index.contains_key(&name) {
                return Err(ParseError::DuplicateDeclaration {
                    pos: pos(lineno, 1),
                    name,
                });
            }
            let mut ids = Vec::new();
            for c in &consts {
                let id = symbols.intern(c);
                if ids.contains(&id) {
                    return Err(ParseError::DuplicateDeclaration {
                        pos: pos(lineno, 1),
                        name: c.clone(),
                    });
                }
                ids.push(id);
            }
            domain_index.insert(name.clone(), DomainId(domains.len() as u32));
            domains.push((name, ids));
        } else if is_predicate_decl(line) {
            let sig = parse_predicate_line(line, lineno, &domain_index)?;
            if pred_index.contains_key(&sig.name) {
                return Err(ParseError::DuplicateDeclaration {
                    pos: pos(lineno, 1),
                    name: sig.name,
                });
            }
            pred_index.insert(sig.name.clone(), predicates.len());
            predicates.push(sig);
        } else {
            let clause = parse_clause_line(
                line,
                lineno,
                &mut symbols,
                &domains,
                &predicates,
                &pred_index,
            )?;
            clauses.push(clause);
        }
    }
    Ok(assemble_model(symbols, domains, predicates, clauses))
}

fn pos(line: usize, col: usize) -> SourcePos {
    SourcePos { line, col }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find("//") {
        Some(i) => &line[..i],
        None => line,
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos: pos(line, col),
        msg: msg.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_variable_token(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_')
}

/// `name = {C1, C2, ...}`
fn parse_domain_line(line: &str, lineno: usize) -> Result<(String, Vec<String>), ParseError> {
    let eq = line.find('=').expect("caller checked");
    let name = line[..eq].trim();
    if !is_identifier(name) {
        return Err(syntax(lineno, 1, format!("invalid domain name `{name}`")));
    }
    let rest = line[eq + 1..].trim();
    let inner = rest
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| syntax(lineno, eq + 2, "expected `{C1, C2, ...}`"))?;
    let inner = inner.trim();
    let mut consts = Vec::new();
    if !inner.is_empty() {
        for item in inner.split(',') {
            let item = item.trim();
            if !is_identifier(item) {
                return Err(syntax(lineno, eq + 2, format!("invalid constant `{item}`")));
            }
            consts.push(item.to_owned());
        }
    }
    Ok((name.to_owned(), consts))
}

/// A predicate declaration is `[*]name(dom, ...)` with nothing after the
/// closing parenthesis; anything else on the line makes it a clause.
fn is_predicate_decl(line: &str) -> bool {
    let t = line.trim();
    let t = t.strip_prefix('*').unwrap_or(t);
    let Some(open) = t.find('(') else {
        return false;
    };
    t.ends_with(')') && is_identifier(&t[..open]) && !t[open..].contains('!')
}

fn parse_predicate_line(
    line: &str,
    lineno: usize,
    domain_index: &HashMap<String, DomainId>,
) -> Result<PredicateSig, ParseError> {
    let t = line.trim();
    let (closed_world, t) = match t.strip_prefix('*') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let open = t.find('(').expect("caller checked");
    let name = &t[..open];
    let inner = &t[open + 1..t.len() - 1];
    let mut arg_domains = Vec::new();
    let inner = inner.trim();
    if !inner.is_empty() {
        for d in inner.split(',') {
            let d = d.trim();
            let id = domain_index.get(d).ok_or_else(|| ParseError::UnknownDomain {
                pos: pos(lineno, open + 2),
                name: d.to_owned(),
            })?;
            arg_domains.push(*id);
        }
    }
    Ok(PredicateSig {
        name: name.to_owned(),
        arg_domains,
        closed_world,
    })
}

fn parse_clause_line(
    line: &str,
    lineno: usize,
    symbols: &mut SymbolTable,
    domains: &[(String, Vec<SymbolId>)],
    predicates: &[PredicateSig],
    pred_index: &HashMap<String, usize>,
) -> Result<FirstOrderClause, ParseError> {
    let t = line.trim();
    // Weight prefix (soft) or trailing period (hard).
    let (weight, body) = if let Some(first_ws) = t.find(char::is_whitespace) {
        let head = &t[..first_ws];
        match head.parse::<f64>() {
            Ok(w) => {
                if !w.is_finite() {
                    return Err(ParseError::NonFiniteWeight {
                        pos: pos(lineno, 1),
                        token: head.to_owned(),
                    });
                }
                (Some(w), t[first_ws..].trim())
            }
            Err(_) => (None, t),
        }
    } else {
        (None, t)
    };
    let (weight, body) = match weight {
        Some(w) => (Weight::Soft(w), body),
        None => {
            let stripped = body
                .strip_suffix('.')
                .map(str::trim_end)
                .ok_or_else(|| {
                    syntax(
                        lineno,
                        1,
                        "clause needs a leading weight or a trailing `.` (hard)",
                    )
                })?;
            (Weight::Hard, stripped)
        }
    };
    if body.is_empty() {
        return Err(syntax(lineno, 1, "empty clause"));
    }

    let mut literals = Vec::new();
    let mut var_ids: HashMap<String, u32> = HashMap::new();
    let mut var_domains: Vec<DomainId> = Vec::new();
    let mut var_names: Vec<String> = Vec::new();
    for part in split_literals(body) {
        let part = part.trim();
        if part.is_empty() {
            return Err(syntax(lineno, 1, "empty literal"));
        }
        let (negated, part) = match part.strip_prefix('!') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, part),
        };
        let open = part
            .find('(')
            .ok_or_else(|| syntax(lineno, 1, format!("expected `pred(...)`, got `{part}`")))?;
        if !part.ends_with(')') {
            return Err(syntax(lineno, 1, format!("unterminated literal `{part}`")));
        }
        let name = &part[..open];
        if !is_identifier(name) {
            return Err(syntax(lineno, 1, format!("invalid predicate name `{name}`")));
        }
        let &pi = pred_index
            .get(name)
            .ok_or_else(|| ParseError::UnknownPredicate {
                pos: pos(lineno, 1),
                name: name.to_owned(),
            })?;
        let sig = &predicates[pi];
        let inner = part[open + 1..part.len() - 1].trim();
        let args: Vec<&str> = if inner.is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(str::trim).collect()
        };
        if args.len() != sig.arity() {
            return Err(ParseError::ArityMismatch {
                pos: pos(lineno, 1),
                name: name.to_owned(),
                expected: sig.arity(),
                got: args.len(),
            });
        }
        let mut terms = Vec::with_capacity(args.len());
        for (argpos, tok) in args.iter().enumerate() {
            if !is_identifier(tok) {
                return Err(syntax(lineno, 1, format!("invalid term `{tok}`")));
            }
            let dom = sig.arg_domains[argpos];
            let dom_name = &domains[dom.0 as usize].0;
            if is_variable_token(tok) {
                let next = var_ids.len() as u32;
                let v = *var_ids.entry((*tok).to_owned()).or_insert(next);
                if v as usize == var_domains.len() {
                    var_domains.push(dom);
                    var_names.push((*tok).to_owned());
                } else if var_domains[v as usize] != dom {
                    return Err(ParseError::VariableDomainMismatch {
                        pos: pos(lineno, 1),
                        name: (*tok).to_owned(),
                        first: domains[var_domains[v as usize].0 as usize].0.clone(),
                        second: dom_name.clone(),
                    });
                }
                terms.push(Term::Var(v));
            } else {
                let sym = symbols.get(tok).filter(|s| domains[dom.0 as usize].1.contains(s));
                let sym = sym.ok_or_else(|| ParseError::UnknownConstant {
                    pos: pos(lineno, 1),
                    name: (*tok).to_owned(),
                    domain: dom_name.clone(),
                })?;
                terms.push(Term::Const(sym));
            }
        }
        literals.push(Literal {
            pred: crate::model::PredId(pi as u32),
            negated,
            terms,
        });
    }
    if literals.is_empty() {
        return Err(syntax(lineno, 1, "empty clause"));
    }
    Ok(FirstOrderClause {
        weight,
        literals,
        var_domains,
        var_names,
        formula_id: 0,
    })
}

/// Splits a clause body on ` v ` separators outside parentheses.
fn split_literals(body: &str) -> Vec<&str> {
    let bytes = body.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'v' if depth == 0 => {
                let before_ws = i > 0 && bytes[i - 1].is_ascii_whitespace();
                let after_ws = i + 1 < bytes.len() && bytes[i + 1].is_ascii_whitespace();
                if before_ws && after_ws {
                    parts.push(&body[start..i]);
                    start = i + 1;
                }
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&body[start..]);
    parts
}
