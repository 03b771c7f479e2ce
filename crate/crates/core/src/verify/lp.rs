//! Minimal strict reader for the LP text format the toolkit emits.
//!
//! Supports the subset used by optimal-pebbling models: a single objective,
//! named linear constraints with `>=`, `<=` or `=`, a bounds section, and
//! `Generals`/`Binaries` integrality sections. Unknown tokens are errors, so
//! a parse success certifies the emitted file is well-formed.

use std::collections::BTreeSet;

/// One linear term `coef * var`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub var: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Objective {
    pub name: Option<String>,
    pub terms: Vec<Term>,
}

/// A parsed LP model.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub sense: Sense,
    pub objective: Objective,
    pub constraints: Vec<Constraint>,
    /// `(var, lower)` pairs from simple `var >= c` bound lines.
    pub lower_bounds: Vec<(String, f64)>,
    pub generals: Vec<String>,
    pub binaries: Vec<String>,
}

impl Model {
    /// Every variable mentioned anywhere in the model.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for t in &self.objective.terms {
            vars.insert(t.var.clone());
        }
        for c in &self.constraints {
            for t in &c.terms {
                vars.insert(t.var.clone());
            }
        }
        for (v, _) in &self.lower_bounds {
            vars.insert(v.clone());
        }
        for v in self.generals.iter().chain(&self.binaries) {
            vars.insert(v.clone());
        }
        vars
    }
}

fn is_section_word(token: &str) -> bool {
    matches!(
        token.to_ascii_lowercase().as_str(),
        "subject"
            | "st"
            | "s.t."
            | "bounds"
            | "bound"
            | "generals"
            | "general"
            | "gen"
            | "binaries"
            | "binary"
            | "bin"
            | "end"
    )
}

fn is_number(token: &str) -> bool {
    token.parse::<f64>().is_ok()
}

struct Tokens {
    items: Vec<String>,
    pos: usize,
}

impl Tokens {
    fn peek(&self) -> Option<&str> {
        self.items.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Option<&str> {
        let t = self.items.get(self.pos).map(String::as_str);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), String> {
        match self.next() {
            Some(t) if t.eq_ignore_ascii_case(word) => Ok(()),
            Some(t) => Err(format!("expected '{word}', found '{t}'")),
            None => Err(format!("expected '{word}', found end of file")),
        }
    }
}

/// Parses LP text; any token outside the supported grammar is an error.
pub fn parse(text: &str) -> Result<Model, String> {
    let mut items = Vec::new();
    for line in text.lines() {
        let line = match line.find('\\') {
            Some(i) => &line[..i],
            None => line,
        };
        for raw in line.split_whitespace() {
            items.push(raw.to_string());
        }
    }
    let mut t = Tokens { items, pos: 0 };

    let sense = match t.next() {
        Some(w) if w.eq_ignore_ascii_case("minimize") || w.eq_ignore_ascii_case("min") => {
            Sense::Minimize
        }
        Some(w) if w.eq_ignore_ascii_case("maximize") || w.eq_ignore_ascii_case("max") => {
            Sense::Maximize
        }
        other => return Err(format!("expected Minimize/Maximize, found {other:?}")),
    };

    let (obj_name, obj_terms, _) = parse_expression(&mut t, true)?;
    let objective = Objective {
        name: obj_name,
        terms: obj_terms,
    };

    match t.next() {
        Some(w) if w.eq_ignore_ascii_case("subject") => t.expect_keyword("to")?,
        Some(w) if w.eq_ignore_ascii_case("st") || w.eq_ignore_ascii_case("s.t.") => {}
        other => return Err(format!("expected Subject To, found {other:?}")),
    }

    let mut constraints = Vec::new();
    loop {
        match t.peek() {
            None => return Err("unterminated constraint section".to_string()),
            Some(w) if is_section_word(w) && !w.eq_ignore_ascii_case("subject") => break,
            _ => {}
        }
        let (name, terms, relation) = parse_expression(&mut t, false)?;
        let relation = relation.ok_or("constraint missing relation")?;
        let rhs: f64 = t
            .next()
            .ok_or("constraint missing right-hand side")?
            .parse()
            .map_err(|e| format!("bad rhs: {e}"))?;
        constraints.push(Constraint {
            name: name.ok_or("constraint missing name")?,
            terms,
            relation,
            rhs,
        });
    }

    let mut lower_bounds = Vec::new();
    if t.peek()
        .is_some_and(|w| w.eq_ignore_ascii_case("bounds") || w.eq_ignore_ascii_case("bound"))
    {
        t.next();
        loop {
            match t.peek() {
                None => return Err("unterminated bounds section".to_string()),
                Some(w) if is_section_word(w) => break,
                Some(w) if is_number(w) => {
                    // form: lo <= var [<= hi]
                    let _lo: f64 = t.next().unwrap().parse().unwrap();
                    relation_token(&mut t)?;
                    let var = name_token(&mut t)?;
                    if t.peek().is_some_and(|w| w == "<=" || w == "=<") {
                        t.next();
                        let _hi: f64 = t
                            .next()
                            .ok_or("missing upper bound")?
                            .parse()
                            .map_err(|e| format!("bad upper bound: {e}"))?;
                    }
                    lower_bounds.push((var, _lo));
                }
                _ => {
                    // form: var >= c | var free
                    let var = name_token(&mut t)?;
                    match t.next() {
                        Some(w) if w.eq_ignore_ascii_case("free") => {
                            lower_bounds.push((var, f64::NEG_INFINITY));
                        }
                        Some(w) if w == ">=" || w == "=>" => {
                            let c: f64 = t
                                .next()
                                .ok_or("missing bound value")?
                                .parse()
                                .map_err(|e| format!("bad bound: {e}"))?;
                            lower_bounds.push((var, c));
                        }
                        Some(w) if w == "<=" || w == "=<" || w == "=" => {
                            let _: f64 = t
                                .next()
                                .ok_or("missing bound value")?
                                .parse()
                                .map_err(|e| format!("bad bound: {e}"))?;
                            lower_bounds.push((var, f64::NEG_INFINITY));
                        }
                        other => return Err(format!("bad bound line near {other:?}")),
                    }
                }
            }
        }
    }

    let mut generals = Vec::new();
    if t.peek().is_some_and(|w| {
        let w = w.to_ascii_lowercase();
        w == "generals" || w == "general" || w == "gen"
    }) {
        t.next();
        while let Some(w) = t.peek() {
            if is_section_word(w) {
                break;
            }
            generals.push(name_token(&mut t)?);
        }
    }

    let mut binaries = Vec::new();
    if t.peek().is_some_and(|w| {
        let w = w.to_ascii_lowercase();
        w == "binaries" || w == "binary" || w == "bin"
    }) {
        t.next();
        while let Some(w) = t.peek() {
            if is_section_word(w) {
                break;
            }
            binaries.push(name_token(&mut t)?);
        }
    }

    t.expect_keyword("end")?;
    if let Some(extra) = t.peek() {
        return Err(format!("trailing content after End: '{extra}'"));
    }

    Ok(Model {
        sense,
        objective,
        constraints,
        lower_bounds,
        generals,
        binaries,
    })
}

fn name_token(t: &mut Tokens) -> Result<String, String> {
    match t.next() {
        Some(w) if !is_number(w) && !is_section_word(w) => Ok(w.to_string()),
        other => Err(format!("expected a name, found {other:?}")),
    }
}

fn relation_token(t: &mut Tokens) -> Result<Relation, String> {
    match t.next() {
        Some("<=") | Some("=<") => Ok(Relation::Le),
        Some(">=") | Some("=>") => Ok(Relation::Ge),
        Some("=") => Ok(Relation::Eq),
        other => Err(format!("expected a relation, found {other:?}")),
    }
}

/// Parses `[name:] term term ...` up to a relation, a section keyword, or
/// (for the objective) the Subject To keyword. Returns the optional name,
/// the terms, and the relation if one terminated the expression.
type ParsedExpr = (Option<String>, Vec<Term>, Option<Relation>);

fn parse_expression(t: &mut Tokens, objective: bool) -> Result<ParsedExpr, String> {
    let mut name = None;
    if let Some(w) = t.peek() {
        if let Some(stripped) = w.strip_suffix(':') {
            name = Some(stripped.to_string());
            t.next();
        }
    }
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    while let Some(w) = t.peek() {
        if w == ">=" || w == "<=" || w == "=" || w == "=>" || w == "=<" {
            if coef.is_some() {
                return Err("dangling coefficient before relation".to_string());
            }
            return Ok((name, terms, Some(relation_token(t)?)));
        }
        if is_section_word(w) {
            if objective && !w.eq_ignore_ascii_case("subject") && !w.eq_ignore_ascii_case("st") {
                return Err(format!("objective interrupted by '{w}'"));
            }
            break;
        }
        let w = t.next().unwrap().to_string();
        match w.as_str() {
            "+" => {
                if coef.is_some() {
                    return Err("sign after coefficient".to_string());
                }
                sign = 1.0;
            }
            "-" => {
                if coef.is_some() {
                    return Err("sign after coefficient".to_string());
                }
                sign = -1.0;
            }
            _ if is_number(&w) => {
                if coef.is_some() {
                    return Err(format!("two coefficients in a row near '{w}'"));
                }
                coef = Some(w.parse::<f64>().unwrap());
            }
            _ => {
                terms.push(Term {
                    coef: sign * coef.take().unwrap_or(1.0),
                    var: w,
                });
                sign = 1.0;
            }
        }
    }
    if coef.is_some() {
        return Err("dangling coefficient at end of expression".to_string());
    }
    Ok((name, terms, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_model() {
        let text = "\\ comment\nMinimize\n obj: x + 2 y - 3 z\nSubject To\n c0: x - 2 y >= 1\n c1: z >= 0\nBounds\n x >= 0\nGenerals\n x\n y\nEnd\n";
        let m = parse(text).unwrap();
        assert_eq!(m.sense, Sense::Minimize);
        assert_eq!(m.objective.name.as_deref(), Some("obj"));
        assert_eq!(m.objective.terms.len(), 3);
        assert_eq!(m.objective.terms[2].coef, -3.0);
        assert_eq!(m.constraints.len(), 2);
        assert_eq!(m.constraints[0].relation, Relation::Ge);
        assert_eq!(m.constraints[0].rhs, 1.0);
        assert_eq!(m.constraints[0].terms[1].coef, -2.0);
        assert_eq!(m.generals, vec!["x", "y"]);
        assert_eq!(m.variables().len(), 3);
    }

    #[test]
    fn rejects_malformed_models() {
        assert!(parse("obj: x >= 1").is_err());
        assert!(parse("Minimize\nobj: x\nSubject To\nc: x >= one\nEnd").is_err());
        assert!(parse("Minimize\nobj: x\nSubject To\nc: x >= 1\n").is_err());
        assert!(parse("Minimize\nobj: x\nSubject To\nc: x 2 >= 1\nEnd").is_err());
        assert!(parse("Minimize\nobj: x\nSubject To\nc: x >= 1\nEnd\nextra").is_err());
    }

    #[test]
    fn empty_constraint_section_is_allowed_shapewise() {
        // no constraints before Bounds
        let text = "Minimize\n obj: x\nSubject To\nBounds\n x >= 0\nEnd\n";
        let m = parse(text).unwrap();
        assert!(m.constraints.is_empty());
        assert_eq!(m.lower_bounds.len(), 1);
    }
}
