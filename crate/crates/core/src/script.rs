//! Construction scripts.
//!
//! A script is a straight-line program of `let` bindings over the
//! construction operators, with explicit verification gates and emit
//! statements:
//!
//! ```text
//! let master = td(5, 5)
//! let pc = find_parallel_class(master)
//! let mg = mgdd_from_td(master, pc)
//! verify mg as mgdd 5^5
//! let big = wilson_compose(master, 5, [mg], [td(5, 5)])
//! verify big as gdd 25^5
//! emit big
//! ```
//!
//! Identifiers are single-assignment. Arguments are integer literals,
//! quoted strings, prior identifiers, bracketed lists, or nested calls;
//! `catalog("name")` expands an embedded entry and `registry(kind,
//! "sig")` pulls an external ingredient, failing with an unresolved
//! ingredient error when nothing matching was registered. `verify`
//! re-runs the verifier and aborts the script on failure. `emit` renders
//! the design in the canonical file format; the caller decides where the
//! text goes.

use std::collections::BTreeMap;

use crate::catalog;
use crate::construct::{
    add_groups_as_blocks, delete_point, fill_groups, find_parallel_class, inflate, mgdd_from_td,
    projective_plane_pbd, td, wilson_compose, wilson_intermediate, FillSet, MgddSet,
};
use crate::design::{BlockSizeSet, Design, DoubleDesign};
use crate::error::ScriptError;
use crate::format::{write_design, write_double_design, DesignFile};
use crate::registry::{DesignRegistry, Kind, Registered};
use crate::signature::GroupSignature;
use crate::verify::{is_mgdd, verify_dgdd, verify_gdd};

/// A runtime value bound to a script identifier.
#[derive(Debug, Clone)]
pub enum Value {
    Design(Design),
    Double(DoubleDesign),
    ParallelClass(Vec<usize>),
    Int(u64),
    Str(String),
    KindWord(Kind),
    List(Vec<Value>),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Design(_) => "design",
            Value::Double(_) => "double design",
            Value::ParallelClass(_) => "parallel class",
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
            Value::KindWord(_) => "kind",
            Value::List(_) => "list",
        }
    }
}

/// One parsed statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Let { id: String, expr: Expr },
    Register { id: String, kind: Kind, signature: GroupSignature },
    Verify { id: String, kind: Kind, signature: GroupSignature },
    Emit { id: String },
}

/// An argument expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(u64),
    Str(String),
    Ident(String),
    List(Vec<Expr>),
    Call(String, Vec<Expr>),
}

/// A parsed script.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionScript {
    pub statements: Vec<Statement>,
}

/// Result of a run: every binding, plus emitted canonical files.
#[derive(Debug)]
pub struct ScriptOutcome {
    pub values: BTreeMap<String, Value>,
    /// `(identifier, canonical file text)` in emit order.
    pub emitted: Vec<(String, String)>,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(u64),
    Str(String),
    Symbol(char),
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Token>, ScriptError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '(' | ')' | '[' | ']' | ',' | '=' => {
                tokens.push(Token::Symbol(c));
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => {
                            return Err(ScriptError::Parse {
                                line,
                                msg: "unterminated string".into(),
                            })
                        }
                    }
                }
                tokens.push(Token::Str(s));
            }
            _ if c.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Int(n.parse().expect("digits")));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut id = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        id.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(id));
            }
            other => {
                return Err(ScriptError::Parse {
                    line,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect_symbol(&mut self, c: char) -> Result<(), ScriptError> {
        match self.next() {
            Some(Token::Symbol(s)) if s == c => Ok(()),
            other => Err(ScriptError::Parse {
                line: self.line,
                msg: format!("expected `{c}`, found {other:?}"),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ScriptError> {
        match self.next() {
            Some(Token::Int(n)) => Ok(Expr::Int(n)),
            Some(Token::Str(s)) => Ok(Expr::Str(s)),
            Some(Token::Symbol('[')) => {
                let mut items = Vec::new();
                if self.peek() == Some(&Token::Symbol(']')) {
                    self.next();
                    return Ok(Expr::List(items));
                }
                loop {
                    items.push(self.parse_expr()?);
                    match self.next() {
                        Some(Token::Symbol(',')) => continue,
                        Some(Token::Symbol(']')) => break,
                        other => {
                            return Err(ScriptError::Parse {
                                line: self.line,
                                msg: format!("expected `,` or `]`, found {other:?}"),
                            })
                        }
                    }
                }
                Ok(Expr::List(items))
            }
            Some(Token::Ident(name)) => {
                if self.peek() == Some(&Token::Symbol('(')) {
                    self.next();
                    let mut args = Vec::new();
                    if self.peek() == Some(&Token::Symbol(')')) {
                        self.next();
                        return Ok(Expr::Call(name, args));
                    }
                    loop {
                        args.push(self.parse_expr()?);
                        match self.next() {
                            Some(Token::Symbol(',')) => continue,
                            Some(Token::Symbol(')')) => break,
                            other => {
                                return Err(ScriptError::Parse {
                                    line: self.line,
                                    msg: format!("expected `,` or `)`, found {other:?}"),
                                })
                            }
                        }
                    }
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            other => Err(ScriptError::Parse {
                line: self.line,
                msg: format!("expected an expression, found {other:?}"),
            }),
        }
    }
}

fn parse_as_clause(
    line: usize,
    rest: &str,
) -> Result<(String, Kind, GroupSignature), ScriptError> {
    // <id> as <kind> <signature...>
    let mut fields = rest.split_whitespace();
    let id = fields.next().ok_or(ScriptError::Parse {
        line,
        msg: "expected an identifier".into(),
    })?;
    if fields.next() != Some("as") {
        return Err(ScriptError::Parse {
            line,
            msg: "expected `as`".into(),
        });
    }
    let kind_word = fields.next().ok_or(ScriptError::Parse {
        line,
        msg: "expected a kind (gdd, dgdd, mgdd)".into(),
    })?;
    let kind = Kind::parse(kind_word).ok_or_else(|| ScriptError::Parse {
        line,
        msg: format!("unknown kind `{kind_word}`"),
    })?;
    let sig_text: Vec<&str> = fields.collect();
    let signature: GroupSignature =
        sig_text.join(" ").parse().map_err(|e| ScriptError::Parse {
            line,
            msg: format!("{e}"),
        })?;
    Ok((id.to_string(), kind, signature))
}

/// Parse a construction script.
pub fn parse_script(text: &str) -> Result<ConstructionScript, ScriptError> {
    let mut statements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        match keyword {
            "let" => {
                let tokens = tokenize(line, rest)?;
                let mut cursor = Cursor {
                    tokens: &tokens,
                    pos: 0,
                    line,
                };
                let id = match cursor.next() {
                    Some(Token::Ident(id)) => id,
                    other => {
                        return Err(ScriptError::Parse {
                            line,
                            msg: format!("expected an identifier, found {other:?}"),
                        })
                    }
                };
                cursor.expect_symbol('=')?;
                let expr = cursor.parse_expr()?;
                if cursor.peek().is_some() {
                    return Err(ScriptError::Parse {
                        line,
                        msg: "trailing tokens after expression".into(),
                    });
                }
                statements.push(Statement::Let { id, expr });
            }
            "register" => {
                let (id, kind, signature) = parse_as_clause(line, rest)?;
                statements.push(Statement::Register { id, kind, signature });
            }
            "verify" => {
                let (id, kind, signature) = parse_as_clause(line, rest)?;
                statements.push(Statement::Verify { id, kind, signature });
            }
            "emit" => {
                let id = rest.trim();
                if id.is_empty() || id.contains(char::is_whitespace) {
                    return Err(ScriptError::Parse {
                        line,
                        msg: "expected `emit <id>`".into(),
                    });
                }
                statements.push(Statement::Emit { id: id.to_string() });
            }
            other => {
                return Err(ScriptError::Parse {
                    line,
                    msg: format!("unknown statement `{other}`"),
                })
            }
        }
    }
    Ok(ConstructionScript { statements })
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct Machine<'r> {
    registry: &'r mut DesignRegistry,
    values: BTreeMap<String, Value>,
}

fn bad(stmt: usize, msg: impl Into<String>) -> ScriptError {
    ScriptError::BadArgument {
        stmt,
        msg: msg.into(),
    }
}

impl<'r> Machine<'r> {
    fn eval(&mut self, stmt: usize, expr: &Expr) -> Result<Value, ScriptError> {
        match expr {
            Expr::Int(n) => Ok(Value::Int(*n)),
            Expr::Str(s) => Ok(Value::Str(s.clone())),
            Expr::List(items) => Ok(Value::List(
                items
                    .iter()
                    .map(|e| self.eval(stmt, e))
                    .collect::<Result<_, _>>()?,
            )),
            Expr::Ident(id) => {
                if let Some(v) = self.values.get(id) {
                    Ok(v.clone())
                } else if let Some(kind) = Kind::parse(id) {
                    Ok(Value::KindWord(kind))
                } else {
                    Err(ScriptError::UnknownId {
                        stmt,
                        id: id.clone(),
                    })
                }
            }
            Expr::Call(name, args) => {
                let args = args
                    .iter()
                    .map(|e| self.eval(stmt, e))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(stmt, name, args)
            }
        }
    }

    fn design(&self, stmt: usize, v: &Value) -> Result<Design, ScriptError> {
        match v {
            Value::Design(d) => Ok(d.clone()),
            other => Err(bad(stmt, format!("expected a design, got {}", other.type_name()))),
        }
    }

    fn int(&self, stmt: usize, v: &Value) -> Result<u64, ScriptError> {
        match v {
            Value::Int(n) => Ok(*n),
            other => Err(bad(stmt, format!("expected an integer, got {}", other.type_name()))),
        }
    }

    fn apply(&mut self, stmt: usize, name: &str, args: Vec<Value>) -> Result<Value, ScriptError> {
        let arity = |want: usize| -> Result<(), ScriptError> {
            if args.len() == want {
                Ok(())
            } else {
                Err(bad(
                    stmt,
                    format!("{name} takes {want} argument(s), got {}", args.len()),
                ))
            }
        };
        let construct = |e| ScriptError::Construct { stmt, source: e };
        match name {
            "td" => {
                arity(2)?;
                let k = self.int(stmt, &args[0])? as usize;
                let q = self.int(stmt, &args[1])? as u32;
                Ok(Value::Design(td(k, q).map_err(construct)?))
            }
            "projective_plane_pbd" => {
                arity(1)?;
                let q = self.int(stmt, &args[0])? as u32;
                Ok(Value::Design(projective_plane_pbd(q).map_err(construct)?))
            }
            "single_block" => {
                arity(1)?;
                let k = self.int(stmt, &args[0])? as u32;
                Ok(Value::Design(Design::single_block(k).map_err(|e| {
                    ScriptError::Construct {
                        stmt,
                        source: e.into(),
                    }
                })?))
            }
            "catalog" => {
                arity(1)?;
                let Value::Str(entry_name) = &args[0] else {
                    return Err(bad(stmt, "catalog takes a quoted entry name"));
                };
                let system = catalog::get_entry(entry_name)?;
                let design = system.expand().map_err(|e| ScriptError::Catalog(e.into()))?;
                Ok(Value::Design(design))
            }
            "registry" => {
                arity(2)?;
                let kind = match &args[0] {
                    Value::KindWord(k) => *k,
                    Value::Str(s) => Kind::parse(s)
                        .ok_or_else(|| bad(stmt, format!("unknown kind `{s}`")))?,
                    other => {
                        return Err(bad(
                            stmt,
                            format!("expected a kind, got {}", other.type_name()),
                        ))
                    }
                };
                let Value::Str(sig_text) = &args[1] else {
                    return Err(bad(stmt, "registry takes a quoted type signature"));
                };
                let signature: GroupSignature = sig_text
                    .parse()
                    .map_err(|e| bad(stmt, format!("bad signature: {e}")))?;
                match self.registry.lookup(kind, &signature) {
                    Some(Registered::Plain(d)) => Ok(Value::Design(d.clone())),
                    Some(Registered::Double(dd)) => Ok(Value::Double(dd.clone())),
                    None => Err(ScriptError::UnresolvedIngredient {
                        kind: kind.to_string(),
                        signature: signature.to_string(),
                    }),
                }
            }
            "find_parallel_class" => {
                arity(1)?;
                let d = self.design(stmt, &args[0])?;
                let pc = find_parallel_class(&d).map_err(construct)?;
                match pc {
                    Some(indices) => Ok(Value::ParallelClass(indices)),
                    None => Err(bad(stmt, "design has no parallel class")),
                }
            }
            "mgdd_from_td" => {
                arity(2)?;
                let d = self.design(stmt, &args[0])?;
                let Value::ParallelClass(pc) = &args[1] else {
                    return Err(bad(stmt, "expected a parallel class"));
                };
                Ok(Value::Double(mgdd_from_td(&d, pc).map_err(construct)?))
            }
            "inflate" => {
                arity(3)?;
                let d = self.design(stmt, &args[0])?;
                let h = self.int(stmt, &args[1])? as u32;
                let ingredient = self.design(stmt, &args[2])?;
                Ok(Value::Design(inflate(&d, h, &ingredient).map_err(construct)?))
            }
            "wilson_compose" | "wilson_intermediate" => {
                arity(if name == "wilson_compose" { 4 } else { 3 })?;
                let master = self.design(stmt, &args[0])?;
                let w = self.int(stmt, &args[1])? as u32;
                let Value::List(mg_values) = &args[2] else {
                    return Err(bad(stmt, "expected a list of modified designs"));
                };
                let mut mgdds = MgddSet::new();
                for v in mg_values {
                    let Value::Double(dd) = v else {
                        return Err(bad(stmt, "modified designs must be double designs"));
                    };
                    let k = dd.base().groups().len();
                    if mgdds.insert(k, dd.clone()).is_some() {
                        return Err(bad(stmt, format!("two modified designs for block size {k}")));
                    }
                }
                if name == "wilson_intermediate" {
                    let dd = wilson_intermediate(&master, w, &mgdds).map_err(construct)?;
                    return Ok(Value::Double(dd));
                }
                let Value::List(fill_values) = &args[3] else {
                    return Err(bad(stmt, "expected a list of fill designs"));
                };
                let mut fills = FillSet::new();
                for v in fill_values {
                    let d = self.design(stmt, v)?;
                    let g = d.groups()[0].len() as u32;
                    if fills.insert(g, d).is_some() {
                        return Err(bad(stmt, format!("two fills for group size {g}")));
                    }
                }
                Ok(Value::Design(
                    wilson_compose(&master, w, &mgdds, &fills).map_err(construct)?,
                ))
            }
            "fill_groups" => {
                arity(3)?;
                let master = self.design(stmt, &args[0])?;
                let extras = self.int(stmt, &args[1])? as u32;
                let n_groups = master.groups().len();
                let fills: BTreeMap<usize, Design> = match &args[2] {
                    Value::Design(d) => (0..n_groups).map(|gi| (gi, d.clone())).collect(),
                    Value::List(items) => {
                        if items.len() != n_groups {
                            return Err(bad(
                                stmt,
                                format!("need {n_groups} fills, got {}", items.len()),
                            ));
                        }
                        items
                            .iter()
                            .enumerate()
                            .map(|(gi, v)| Ok((gi, self.design(stmt, v)?)))
                            .collect::<Result<_, ScriptError>>()?
                    }
                    other => {
                        return Err(bad(
                            stmt,
                            format!("expected a fill design or list, got {}", other.type_name()),
                        ))
                    }
                };
                Ok(Value::Design(
                    fill_groups(&master, extras, &fills).map_err(construct)?,
                ))
            }
            "add_groups_as_blocks" => {
                arity(1)?;
                let d = self.design(stmt, &args[0])?;
                Ok(Value::Design(add_groups_as_blocks(&d).map_err(construct)?))
            }
            "delete_point" => {
                arity(2)?;
                let d = self.design(stmt, &args[0])?;
                let p = self.int(stmt, &args[1])? as u32;
                Ok(Value::Design(delete_point(&d, p).map_err(construct)?))
            }
            other => Err(bad(stmt, format!("unknown operation `{other}`"))),
        }
    }

    /// Check `id` against a kind and signature; error text names the gap.
    fn check(
        &self,
        stmt: usize,
        id: &str,
        kind: Kind,
        signature: &GroupSignature,
    ) -> Result<DesignFile, ScriptError> {
        let value = self.values.get(id).ok_or_else(|| ScriptError::UnknownId {
            stmt,
            id: id.to_string(),
        })?;
        let fail = |detail: String| ScriptError::VerifyFailed {
            stmt,
            id: id.to_string(),
            kind: kind.to_string(),
            signature: signature.to_string(),
            detail,
        };
        match (kind, value) {
            (Kind::Gdd, Value::Design(d)) => {
                if d.signature() != signature {
                    return Err(fail(format!("signature is {}", d.signature())));
                }
                let k = BlockSizeSet::of_design(d).ok_or_else(|| fail("no blocks".into()))?;
                let report = verify_gdd(d, &k);
                if !report.verdict {
                    return Err(fail(report.to_text().lines().take(4).collect::<Vec<_>>().join("; ")));
                }
                Ok(DesignFile::Plain(d.clone()))
            }
            (Kind::Dgdd | Kind::Mgdd, Value::Double(dd)) => {
                if dd.base().signature() != signature {
                    return Err(fail(format!("signature is {}", dd.base().signature())));
                }
                let k = BlockSizeSet::of_design(dd.base())
                    .ok_or_else(|| fail("no blocks".into()))?;
                let report = verify_dgdd(dd, &k);
                if !report.verdict {
                    return Err(fail(report.to_text().lines().take(4).collect::<Vec<_>>().join("; ")));
                }
                if kind == Kind::Mgdd && !is_mgdd(dd) {
                    return Err(fail("holes do not meet every group exactly once".into()));
                }
                Ok(DesignFile::Double(dd.clone()))
            }
            (_, other) => Err(fail(format!("value is a {}", other.type_name()))),
        }
    }
}

/// Execute a script against a registry.
///
/// Statements run in order; `verify` failures abort; `register` makes a
/// value available to later `registry()` lookups (and to later scripts
/// sharing the registry).
pub fn run_script(
    script: &ConstructionScript,
    registry: &mut DesignRegistry,
) -> Result<ScriptOutcome, ScriptError> {
    let mut machine = Machine {
        registry,
        values: BTreeMap::new(),
    };
    let mut emitted = Vec::new();
    for (idx, statement) in script.statements.iter().enumerate() {
        let stmt = idx + 1;
        match statement {
            Statement::Let { id, expr } => {
                if machine.values.contains_key(id) {
                    return Err(ScriptError::Reassigned {
                        stmt,
                        id: id.clone(),
                    });
                }
                let value = machine.eval(stmt, expr)?;
                machine.values.insert(id.clone(), value);
            }
            Statement::Verify { id, kind, signature } => {
                machine.check(stmt, id, *kind, signature)?;
            }
            Statement::Register { id, kind, signature } => {
                let file = machine.check(stmt, id, *kind, signature)?;
                machine
                    .registry
                    .register(*kind, file)
                    .map_err(|msg| ScriptError::VerifyFailed {
                        stmt,
                        id: id.clone(),
                        kind: kind.to_string(),
                        signature: signature.to_string(),
                        detail: msg,
                    })?;
            }
            Statement::Emit { id } => {
                let value = machine.values.get(id).ok_or_else(|| ScriptError::UnknownId {
                    stmt,
                    id: id.clone(),
                })?;
                let text = match value {
                    Value::Design(d) => write_design(d),
                    Value::Double(dd) => write_double_design(dd),
                    other => {
                        return Err(bad(
                            stmt,
                            format!("cannot emit a {}", other.type_name()),
                        ))
                    }
                };
                emitted.push((id.clone(), text));
            }
        }
    }
    Ok(ScriptOutcome {
        values: machine.values,
        emitted,
    })
}
