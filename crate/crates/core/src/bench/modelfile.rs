//! Line-oriented text format for LPN systems.
//!
//! ```text
//! # comment
//! module <name>
//! var <id> = <int>
//! place <id> [marked]
//! trans <id> : {<place>, ...} -> {<place>, ...} [guard <bool-expr>] [assign <id> := <num-expr>, ...]
//! ```
//!
//! Declarations belong to the most recent `module` line and must precede
//! their use. A variable declared with the same name in several modules is
//! shared; its initial values must agree.

use std::fmt::Write as _;
use std::path::Path;

use crate::expr::{NumExpr, ParseError, Parser, Tok};
use crate::model::{LpnModule, LpnSystem, ModelError};

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Model {
        line: usize,
        #[source]
        source: ModelError,
    },
    #[error("{0}")]
    Compose(#[source] ModelError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ModelFileError {
    /// Whether the failure is in the text itself rather than in the net.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ModelFileError::Syntax { .. } | ModelFileError::Io { .. })
    }
}

pub fn read_model(path: &Path) -> Result<LpnSystem, ModelFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ModelFileError::Io { path: path.display().to_string(), source })?;
    parse_model(&text)
}

pub fn parse_model(text: &str) -> Result<LpnSystem, ModelFileError> {
    let mut modules: Vec<LpnModule> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let syntax = |e: ParseError| ModelFileError::Syntax { line: line_no, column: e.offset + 1, message: e.message };
        let model = |source| ModelFileError::Model { line: line_no, source };
        let mut p = Parser::new(line).map_err(syntax)?;
        let at = p.offset();
        let keyword = p.ident().map_err(syntax)?;
        if keyword == "module" {
            let name = p.ident().map_err(syntax)?;
            p.expect_eof().map_err(syntax)?;
            if modules.iter().any(|m| m.name() == name) {
                return Err(model(ModelError::DuplicateModule(name)));
            }
            modules.push(LpnModule::new(name));
            continue;
        }
        let Some(module) = modules.last_mut() else {
            return Err(syntax(ParseError { offset: at, message: format!("`{keyword}` before any `module` line") }));
        };
        match keyword.as_str() {
            "var" => {
                let name = p.ident().map_err(syntax)?;
                p.expect(&Tok::Equals).map_err(syntax)?;
                let value = integer(&mut p).map_err(syntax)?;
                p.expect_eof().map_err(syntax)?;
                module.add_variable(name, value).map_err(model)?;
            }
            "place" => {
                let name = p.ident().map_err(syntax)?;
                let marked = match p.peek() {
                    Tok::Ident(w) if w == "marked" => {
                        p.bump();
                        true
                    }
                    _ => false,
                };
                p.expect_eof().map_err(syntax)?;
                module.add_place(name, marked).map_err(model)?;
            }
            "trans" => {
                let name = p.ident().map_err(syntax)?;
                p.expect(&Tok::Colon).map_err(syntax)?;
                let preset = place_set(&mut p).map_err(syntax)?;
                p.expect(&Tok::Arrow).map_err(syntax)?;
                let postset = place_set(&mut p).map_err(syntax)?;
                let guard = if keyword_next(&p, "guard") {
                    p.bump();
                    Some(p.boolean().map_err(syntax)?)
                } else {
                    None
                };
                let mut assignments: Vec<(String, NumExpr)> = Vec::new();
                if keyword_next(&p, "assign") {
                    p.bump();
                    loop {
                        let target = p.ident().map_err(syntax)?;
                        p.expect(&Tok::Assign).map_err(syntax)?;
                        assignments.push((target, p.num().map_err(syntax)?));
                        if !p.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                p.expect_eof().map_err(syntax)?;
                let pre: Vec<&str> = preset.iter().map(String::as_str).collect();
                let post: Vec<&str> = postset.iter().map(String::as_str).collect();
                module.add_transition(name, &pre, &post, guard, assignments).map_err(model)?;
            }
            other => {
                return Err(syntax(ParseError {
                    offset: at,
                    message: format!("unknown declaration `{other}` (expected module, var, place or trans)"),
                }))
            }
        }
    }
    LpnSystem::compose(modules).map_err(ModelFileError::Compose)
}

fn keyword_next(p: &Parser, word: &str) -> bool {
    matches!(p.peek(), Tok::Ident(w) if w == word)
}

fn integer(p: &mut Parser) -> Result<i64, ParseError> {
    let negative = p.eat(&Tok::Minus);
    match p.peek().clone() {
        Tok::Int(n) => {
            let value = if negative { 0i128 - n as i128 } else { n as i128 };
            let value = i64::try_from(value).map_err(|_| p.error("integer out of range"))?;
            p.bump();
            Ok(value)
        }
        other => Err(p.error(format!("expected an integer, found {other}"))),
    }
}

fn place_set(p: &mut Parser) -> Result<Vec<String>, ParseError> {
    p.expect(&Tok::LBrace)?;
    let mut names = Vec::new();
    if p.eat(&Tok::RBrace) {
        return Ok(names);
    }
    loop {
        names.push(p.ident()?);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.expect(&Tok::RBrace)?;
    Ok(names)
}

/// Renders a system in the format accepted by [`parse_model`].
pub fn write_model(system: &LpnSystem) -> String {
    let mut out = String::new();
    for (i, m) in system.modules().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "module {}", m.name());
        for (name, value) in m.variables() {
            let _ = writeln!(out, "var {name} = {value}");
        }
        for (idx, place) in m.places().iter().enumerate() {
            let marked = if m.initial_marking().contains(&(idx as u32)) { " marked" } else { "" };
            let _ = writeln!(out, "place {place}{marked}");
        }
        let names = |set: &[u32]| set.iter().map(|&p| m.places()[p as usize].as_str()).collect::<Vec<_>>().join(", ");
        for t in m.transitions() {
            let _ = write!(out, "trans {} : {{{}}} -> {{{}}}", t.name, names(&t.preset), names(&t.postset));
            if t.guard != crate::expr::BoolExpr::True {
                let _ = write!(out, " guard {}", t.guard);
            }
            if !t.assignments.is_empty() {
                let parts: Vec<String> = t.assignments.iter().map(|(v, e)| format!("{v} := {e}")).collect();
                let _ = write!(out, " assign {}", parts.join(", "));
            }
            out.push('\n');
        }
    }
    out
}
