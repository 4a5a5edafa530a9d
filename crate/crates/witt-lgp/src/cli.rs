//! Command-line front end: an expression grammar for fields, forms and
//! algebras with involution, decision subcommands emitting versioned JSON
//! certificates, and a seeded corpus runner for the property suites.
//!
//! Grammar (EBNF, whitespace-insensitive):
//!
//! ```text
//! top      := form | algebra | model
//! form     := '<' scalar (',' scalar)* '>'
//! algebra  := 'quat' '(' scalar ',' scalar ')'
//! model    := 'ortho'  '(' form ')'
//!           | 'symp'   '(' INT ')'
//!           | 'symp2'  '(' algebra ';' scalar (',' scalar)* ')'
//!           | 'herm'   '(' algebra ';' scalar (',' scalar)* ')'
//!           | 'ortho2' '(' algebra ';' quat (',' quat)* ')'
//!           | 'skew'   '(' algebra ';' quat (',' quat)* ')'
//!           | 'tensor' '(' factor (',' factor)* ')'
//! factor   := algebra ':' ('gamma' | 'int' '(' quat ')')
//! scalar   := sum over atoms INT, 't', 'nf' '(' xpoly ')' '@' 'root' N,
//!             parenthesised subexpressions, with + - * / ^
//! quat     := scalar grammar extended by the atoms 'i', 'j', 'k'
//! xpoly    := scalar grammar in the variable 'x' (rational coefficients)
//! ```
//!
//! `herm` is a synonym for `symp2` and `skew` for `ortho2`. All exact field
//! elements in certificates are serialized as canonical text, never floats.
//! A number-field generator `nf(p)@rootN` requires 1 ≤ N ≤ number of real
//! roots of p; the behavior of every decision procedure quantifies over all
//! real embeddings, so the root index selects a name, not a branch.

use std::fmt::Write as _;
use std::io::Write;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebras::{
    relevant_valuations, HermitianForm, Quaternion, QuaternionAlgebra, SkewHermitianForm, Trit,
};
use crate::fields::factor::is_irreducible;
use crate::fields::numberfield::{NfElem, NumberField};
use crate::fields::poly::{format_poly, QPoly};
use crate::fields::rat::{rat, Rat};
use crate::fields::ratfunc::{RatFunc, RealValuation};
use crate::fields::value::{BaseField, Value};
use crate::invol::{AlgebraWithInvolution, InvolutionWitness, QuatInvol, DEFAULT_DIM_CAP};
use crate::lgp::{bp_involution, bp_quadratic, prestel_sap_quadratic, Decision, LocalObstruction, Witness};
use crate::qforms::{IsotropyWitness, QuadraticForm, SearchBounds};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Int(BigInt),
    Ident(String),
    LAngle,
    RAngle,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    At,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut toks = vec![];
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            let n: BigInt = s.parse().unwrap();
            toks.push(Tok {
                kind: TokKind::Int(n),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            toks.push(Tok {
                kind: TokKind::Ident(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        let kind = match c {
            '<' => TokKind::LAngle,
            '>' => TokKind::RAngle,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            ',' => TokKind::Comma,
            ';' => TokKind::Semi,
            ':' => TokKind::Colon,
            '@' => TokKind::At,
            '+' => TokKind::Plus,
            '-' => TokKind::Minus,
            '*' => TokKind::Star,
            '/' => TokKind::Slash,
            '^' => TokKind::Caret,
            other => return Err(syntax(tl, tc, format!("unexpected character '{other}'"))),
        };
        bump(&mut chars);
        toks.push(Tok {
            kind,
            line: tl,
            col: tc,
        });
    }
    toks.push(Tok {
        kind: TokKind::Eof,
        line,
        col,
    });
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Scalar / quaternion expression AST
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum Ast {
    Int(BigInt),
    Var(String),
    // The root index is validated at parse time; the abstract field is used
    // thereafter (every decision quantifies over all real embeddings, so the
    // index names a root without selecting a branch).
    NfGen { field: Rc<NumberField> },
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

/// A fully parsed top-level expression.
#[derive(Clone, Debug)]
pub enum Parsed {
    Form(QuadraticForm),
    Algebra(QuaternionAlgebra),
    Model(AlgebraWithInvolution),
}

struct Parser {
    toks: Vec<Tok>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(syntax(t.line, t.col, msg))
    }

    fn expect(&mut self, k: TokKind, what: &str) -> Result<Tok> {
        if self.peek().kind == k {
            Ok(self.bump())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn eat_ident(&mut self) -> Option<String> {
        if let TokKind::Ident(s) = &self.peek().kind {
            let s = s.clone();
            self.bump();
            Some(s)
        } else {
            None
        }
    }

    // -- expression level ---------------------------------------------------

    fn parse_expr(&mut self) -> Result<Ast> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek().kind {
                TokKind::Plus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                TokKind::Minus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Ast> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek().kind {
                TokKind::Star => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
                }
                TokKind::Slash => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Ast> {
        match self.peek().kind {
            TokKind::Minus => {
                self.bump();
                Ok(Ast::Neg(Box::new(self.parse_unary()?)))
            }
            TokKind::Plus => {
                self.bump();
                self.parse_unary()
            }
            _ => self.parse_power(),
        }
    }

    fn parse_power(&mut self) -> Result<Ast> {
        let base = self.parse_atom()?;
        if self.peek().kind == TokKind::Caret {
            self.bump();
            if let TokKind::Int(n) = self.peek().kind.clone() {
                self.bump();
                let e = n
                    .to_u32()
                    .ok_or_else(|| {
                        let t = &self.toks[self.i - 1];
                        syntax(t.line, t.col, "exponent out of range")
                    })?;
                return Ok(Ast::Pow(Box::new(base), e));
            }
            return self.err("expected a nonnegative integer exponent");
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Ast> {
        match self.peek().kind.clone() {
            TokKind::Int(n) => {
                self.bump();
                Ok(Ast::Int(n))
            }
            TokKind::LParen => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(TokKind::RParen, "')'")?;
                Ok(e)
            }
            TokKind::Ident(name) => {
                if name == "nf" {
                    return self.parse_nfgen();
                }
                self.bump();
                Ok(Ast::Var(name))
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }

    fn parse_nfgen(&mut self) -> Result<Ast> {
        let key = self.bump(); // 'nf'
        self.expect(TokKind::LParen, "'(' after nf")?;
        let ast = self.parse_expr()?;
        self.expect(TokKind::RParen, "')'")?;
        self.expect(TokKind::At, "'@rootN' after nf(...)")?;
        let root_tok = self.peek().clone();
        let Some(root_word) = self.eat_ident() else {
            return self.err("expected 'rootN' after '@'");
        };
        let Some(idx) = root_word
            .strip_prefix("root")
            .and_then(|d| d.parse::<usize>().ok())
        else {
            return Err(syntax(root_tok.line, root_tok.col, "expected 'rootN' with N ≥ 1"));
        };
        let p = eval_xpoly(&ast, key.line, key.col)?;
        let field = NumberField::new(p.monic())?;
        if field.embeddings.is_empty() {
            return Err(syntax(
                key.line,
                key.col,
                "number field has no real embedding (not formally real)",
            ));
        }
        if idx == 0 || idx > field.embeddings.len() {
            return Err(syntax(
                root_tok.line,
                root_tok.col,
                format!(
                    "root index {idx} out of range (the polynomial has {} real roots)",
                    field.embeddings.len()
                ),
            ));
        }
        Ok(Ast::NfGen { field })
    }

    // -- top level ----------------------------------------------------------

    fn parse_top(&mut self) -> Result<Parsed> {
        let out = match &self.peek().kind {
            TokKind::LAngle => Parsed::Form(self.parse_form()?),
            TokKind::Ident(name) => match name.as_str() {
                "quat" => Parsed::Algebra(self.parse_quat_algebra()?),
                "ortho" | "symp" | "symp2" | "herm" | "ortho2" | "skew" | "tensor" => {
                    Parsed::Model(self.parse_model()?)
                }
                _ => return self.err("expected a form '<...>', 'quat(...)' or a model literal"),
            },
            _ => return self.err("expected a form '<...>', 'quat(...)' or a model literal"),
        };
        if self.peek().kind != TokKind::Eof {
            return self.err("trailing input after a complete expression");
        }
        Ok(out)
    }

    fn parse_form(&mut self) -> Result<QuadraticForm> {
        let open = self.expect(TokKind::LAngle, "'<'")?;
        let mut entries = vec![];
        loop {
            let at = self.peek().clone();
            let ast = self.parse_expr()?;
            let v = eval_scalar(&ast, at.line, at.col)?;
            if v.is_zero() {
                return Err(Error::NonsingularRequired);
            }
            entries.push(v);
            match self.peek().kind {
                TokKind::Comma => {
                    self.bump();
                }
                TokKind::RAngle => {
                    self.bump();
                    break;
                }
                _ => return self.err("expected ',' or '>' in a diagonal form"),
            }
        }
        let entries = unify_values(entries, open.line, open.col)?;
        QuadraticForm::diagonal(entries)
    }

    fn parse_quat_algebra(&mut self) -> Result<QuaternionAlgebra> {
        let key = self.bump(); // 'quat'
        self.expect(TokKind::LParen, "'(' after quat")?;
        let a_ast = self.parse_expr()?;
        self.expect(TokKind::Comma, "',' between quaternion parameters")?;
        let b_ast = self.parse_expr()?;
        self.expect(TokKind::RParen, "')'")?;
        let a = eval_scalar(&a_ast, key.line, key.col)?;
        let b = eval_scalar(&b_ast, key.line, key.col)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::NonsingularRequired);
        }
        let mut both = unify_values(vec![a, b], key.line, key.col)?;
        let b = both.pop().unwrap();
        let a = both.pop().unwrap();
        QuaternionAlgebra::new(a, b)
    }

    fn parse_model(&mut self) -> Result<AlgebraWithInvolution> {
        let head = self.peek().clone();
        let name = self.eat_ident().unwrap();
        self.expect(TokKind::LParen, "'('")?;
        let model = match name.as_str() {
            "ortho" => {
                let q = self.parse_form()?;
                AlgebraWithInvolution::SplitOrthogonal(q)
            }
            "symp" => {
                let TokKind::Int(n) = self.peek().kind.clone() else {
                    return self.err("expected a positive integer in symp(n)");
                };
                self.bump();
                let n = n.to_usize().filter(|&n| n >= 1).ok_or_else(|| {
                    syntax(head.line, head.col, "symp(n) needs a positive integer n")
                })?;
                AlgebraWithInvolution::SplitSymplectic(n)
            }
            "symp2" | "herm" => {
                let alg = self.parse_quat_algebra()?;
                self.expect(TokKind::Semi, "';' between the algebra and entries")?;
                let mut entries = vec![];
                loop {
                    let at = self.peek().clone();
                    let ast = self.parse_expr()?;
                    let v = eval_scalar(&ast, at.line, at.col)?;
                    if v.is_zero() {
                        return Err(Error::NonsingularRequired);
                    }
                    entries.push(v);
                    if self.peek().kind == TokKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                // The common field of the algebra parameters and the
                // entries (a rational algebra over ℚ(t)-entries extends
                // scalars to ℚ(t)).
                let mut all = vec![alg.a.clone(), alg.b.clone()];
                all.extend(entries);
                let mut all = unify_values(all, head.line, head.col)?;
                let entries = all.split_off(2);
                let alg = QuaternionAlgebra::new(all.remove(0), all.remove(0))?;
                let h = HermitianForm::new(alg.clone(), entries)?;
                AlgebraWithInvolution::Index2Symplectic(alg, h)
            }
            "ortho2" | "skew" => {
                let alg = self.parse_quat_algebra()?;
                self.expect(TokKind::Semi, "';' between the algebra and entries")?;
                let mut asts = vec![];
                loop {
                    let at = self.peek().clone();
                    asts.push((self.parse_expr()?, at));
                    if self.peek().kind == TokKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let mut field = alg.field.clone();
                for (ast, at) in &asts {
                    field = join_fields(field, ast_base_field(ast, at.line, at.col)?, at.line, at.col)?;
                }
                let alg = promote_algebra(&alg, &field, head.line, head.col)?;
                let mut entries = vec![];
                for (ast, at) in &asts {
                    entries.push(eval_quat(ast, &alg, at.line, at.col)?);
                }
                let h = SkewHermitianForm::new(alg.clone(), entries)?;
                AlgebraWithInvolution::Index2Orthogonal(alg, h)
            }
            "tensor" => {
                let mut raw = vec![];
                loop {
                    let alg = self.parse_quat_algebra()?;
                    self.expect(TokKind::Colon, "':' after the algebra in tensor(...)")?;
                    let at = self.peek().clone();
                    let Some(kind) = self.eat_ident() else {
                        return self.err("expected 'gamma' or 'int(s)'");
                    };
                    let invol_ast = match kind.as_str() {
                        "gamma" => None,
                        "int" => {
                            self.expect(TokKind::LParen, "'(' after int")?;
                            let ast = self.parse_expr()?;
                            self.expect(TokKind::RParen, "')'")?;
                            Some(ast)
                        }
                        _ => return Err(syntax(at.line, at.col, "expected 'gamma' or 'int(s)'")),
                    };
                    raw.push((alg, invol_ast, at));
                    if self.peek().kind == TokKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                // Common base field across all factors and involution data.
                let mut field = BaseField::Q;
                for (alg, ast, at) in &raw {
                    field = join_fields(field, alg.field.clone(), at.line, at.col)?;
                    if let Some(a) = ast {
                        field = join_fields(field, ast_base_field(a, at.line, at.col)?, at.line, at.col)?;
                    }
                }
                let mut factors = vec![];
                for (alg, ast, at) in &raw {
                    let alg = promote_algebra(alg, &field, at.line, at.col)?;
                    let invol = match ast {
                        None => QuatInvol::Gamma,
                        Some(a) => {
                            let s = eval_quat(a, &alg, at.line, at.col)?;
                            if !s.is_pure() || s.norm().is_zero() {
                                return Err(syntax(
                                    at.line,
                                    at.col,
                                    "int(s) needs an invertible pure quaternion",
                                ));
                            }
                            QuatInvol::IntGamma(s)
                        }
                    };
                    factors.push((alg, invol));
                }
                AlgebraWithInvolution::QuatTensor { factors, s: 1 }
            }
            _ => unreachable!(),
        };
        self.expect(TokKind::RParen, "')'")?;
        Ok(model)
    }
}

/// Parse a top-level expression (form, algebra or model).
pub fn parse_expression(text: &str) -> Result<Parsed> {
    let toks = lex(text)?;
    Parser { toks, i: 0 }.parse_top()
}

/// Parse a single scalar (used for valuation arguments and witness texts).
pub fn parse_scalar(text: &str) -> Result<Value> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0 };
    let ast = p.parse_expr()?;
    if p.peek().kind != TokKind::Eof {
        return p.err("trailing input after a scalar");
    }
    eval_scalar(&ast, 1, 1)
}

fn parse_quaternion_text(text: &str, alg: &QuaternionAlgebra) -> Result<Quaternion> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0 };
    let ast = p.parse_expr()?;
    if p.peek().kind != TokKind::Eof {
        return p.err("trailing input after a quaternion");
    }
    eval_quat(&ast, alg, 1, 1)
}

// ---------------------------------------------------------------------------
// Evaluation into exact field elements
// ---------------------------------------------------------------------------

fn coerce(v: Value, f: &BaseField, line: usize, col: usize) -> Result<Value> {
    if v.field() == *f {
        return Ok(v);
    }
    if let Value::Rat(r) = &v {
        return Ok(Value::from_rat_in(f, r.clone()));
    }
    Err(syntax(line, col, "mixed base fields in one expression"))
}

fn unify_pair(x: Value, y: Value, line: usize, col: usize) -> Result<(Value, Value)> {
    match (x.field(), y.field()) {
        (a, b) if a == b => Ok((x, y)),
        (BaseField::Q, f) => Ok((Value::from_rat_in(&f, x.as_rat().unwrap()), y)),
        (f, BaseField::Q) => {
            let r = y.as_rat().unwrap();
            Ok((x, Value::from_rat_in(&f, r)))
        }
        _ => Err(syntax(line, col, "mixed base fields in one expression")),
    }
}

/// Join of two base fields with ℚ as the bottom; anything else must match.
fn join_fields(a: BaseField, b: BaseField, line: usize, col: usize) -> Result<BaseField> {
    match (a, b) {
        (BaseField::Q, f) | (f, BaseField::Q) => Ok(f),
        (f, g) if f == g => Ok(f),
        _ => Err(syntax(line, col, "mixed base fields in one expression")),
    }
}

/// Base field an expression will evaluate in ('t' forces ℚ(t), a number
/// field generator forces its field, everything else stays over ℚ).
fn ast_base_field(ast: &Ast, line: usize, col: usize) -> Result<BaseField> {
    Ok(match ast {
        Ast::Int(_) => BaseField::Q,
        Ast::Var(n) if n == "t" => BaseField::FunQ,
        Ast::Var(_) => BaseField::Q,
        Ast::NfGen { field, .. } => BaseField::Nf(field.clone()),
        Ast::Neg(a) | Ast::Pow(a, _) => ast_base_field(a, line, col)?,
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => join_fields(
            ast_base_field(a, line, col)?,
            ast_base_field(b, line, col)?,
            line,
            col,
        )?,
    })
}

/// Extend scalars of a quaternion algebra to a larger base field.
fn promote_algebra(
    alg: &QuaternionAlgebra,
    f: &BaseField,
    line: usize,
    col: usize,
) -> Result<QuaternionAlgebra> {
    if alg.field == *f {
        return Ok(alg.clone());
    }
    QuaternionAlgebra::new(
        coerce(alg.a.clone(), f, line, col)?,
        coerce(alg.b.clone(), f, line, col)?,
    )
}

fn unify_values(vals: Vec<Value>, line: usize, col: usize) -> Result<Vec<Value>> {
    let mut field = BaseField::Q;
    for v in &vals {
        let f = v.field();
        if f == BaseField::Q {
            continue;
        }
        if field == BaseField::Q {
            field = f;
        } else if field != f {
            return Err(syntax(line, col, "mixed base fields in one expression"));
        }
    }
    vals.into_iter().map(|v| coerce(v, &field, line, col)).collect()
}

fn eval_scalar(ast: &Ast, line: usize, col: usize) -> Result<Value> {
    Ok(match ast {
        Ast::Int(n) => Value::rat(Rat::from_integer(n.clone())),
        Ast::Var(name) => match name.as_str() {
            "t" => Value::Fun(RatFunc::var()),
            other => {
                return Err(syntax(
                    line,
                    col,
                    format!("unknown identifier '{other}' in a scalar expression"),
                ))
            }
        },
        Ast::NfGen { field, .. } => Value::Nf(field.gen()),
        Ast::Neg(x) => eval_scalar(x, line, col)?.neg(),
        Ast::Add(x, y) => {
            let (a, b) = unify_pair(eval_scalar(x, line, col)?, eval_scalar(y, line, col)?, line, col)?;
            a.add(&b)
        }
        Ast::Sub(x, y) => {
            let (a, b) = unify_pair(eval_scalar(x, line, col)?, eval_scalar(y, line, col)?, line, col)?;
            a.sub(&b)
        }
        Ast::Mul(x, y) => {
            let (a, b) = unify_pair(eval_scalar(x, line, col)?, eval_scalar(y, line, col)?, line, col)?;
            a.mul(&b)
        }
        Ast::Div(x, y) => {
            let (a, b) = unify_pair(eval_scalar(x, line, col)?, eval_scalar(y, line, col)?, line, col)?;
            if b.is_zero() {
                return Err(syntax(line, col, "division by zero"));
            }
            a.div(&b)
        }
        Ast::Pow(x, e) => {
            let base = eval_scalar(x, line, col)?;
            let mut acc = Value::one_of(&base.field());
            for _ in 0..*e {
                acc = acc.mul(&base);
            }
            acc
        }
    })
}

/// Evaluate an expression in the variable `x` to a rational polynomial
/// (for number-field minimal polynomials).
fn eval_xpoly(ast: &Ast, line: usize, col: usize) -> Result<QPoly> {
    fn go(ast: &Ast, line: usize, col: usize) -> Result<RatFunc> {
        Ok(match ast {
            Ast::Int(n) => RatFunc::constant(Rat::from_integer(n.clone())),
            Ast::Var(name) if name == "x" => RatFunc::var(),
            Ast::Var(other) => {
                return Err(syntax(
                    line,
                    col,
                    format!("unknown identifier '{other}' in a minimal polynomial"),
                ))
            }
            Ast::NfGen { .. } => {
                return Err(syntax(line, col, "nested nf(...) is not supported"))
            }
            Ast::Neg(a) => go(a, line, col)?.neg(),
            Ast::Add(a, b) => go(a, line, col)?.add(&go(b, line, col)?),
            Ast::Sub(a, b) => go(a, line, col)?.sub(&go(b, line, col)?),
            Ast::Mul(a, b) => go(a, line, col)?.mul(&go(b, line, col)?),
            Ast::Div(a, b) => {
                let d = go(b, line, col)?;
                if d.is_zero() {
                    return Err(syntax(line, col, "division by zero"));
                }
                go(a, line, col)?.div(&d)
            }
            Ast::Pow(a, e) => {
                let base = go(a, line, col)?;
                let mut acc = RatFunc::one();
                for _ in 0..*e {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }
    let f = go(ast, line, col)?;
    if !f.den.is_one() {
        return Err(syntax(line, col, "a minimal polynomial must be a polynomial"));
    }
    if f.num.deg_or_zero() < 2 {
        return Err(syntax(line, col, "a minimal polynomial must have degree ≥ 2"));
    }
    Ok(f.num)
}

fn eval_quat(ast: &Ast, alg: &QuaternionAlgebra, line: usize, col: usize) -> Result<Quaternion> {
    let basis = alg.basis();
    Ok(match ast {
        Ast::Int(_) | Ast::NfGen { .. } => {
            let v = eval_scalar(ast, line, col)?;
            Quaternion::scalar(alg, coerce(v, &alg.field, line, col)?)
        }
        Ast::Var(name) => match name.as_str() {
            "i" => basis[1].clone(),
            "j" => basis[2].clone(),
            "k" => basis[3].clone(),
            "t" => {
                let v = eval_scalar(ast, line, col)?;
                Quaternion::scalar(alg, coerce(v, &alg.field, line, col)?)
            }
            other => {
                return Err(syntax(
                    line,
                    col,
                    format!("unknown identifier '{other}' in a quaternion expression"),
                ))
            }
        },
        Ast::Neg(a) => eval_quat(a, alg, line, col)?.neg(),
        Ast::Add(a, b) => eval_quat(a, alg, line, col)?.add(&eval_quat(b, alg, line, col)?),
        Ast::Sub(a, b) => eval_quat(a, alg, line, col)?.sub(&eval_quat(b, alg, line, col)?),
        Ast::Mul(a, b) => eval_quat(a, alg, line, col)?.mul(&eval_quat(b, alg, line, col)?),
        Ast::Div(a, b) => {
            let d = eval_quat(b, alg, line, col)?;
            if d.norm().is_zero() {
                return Err(syntax(line, col, "division by a quaternion of norm zero"));
            }
            eval_quat(a, alg, line, col)?.mul(&d.inverse())
        }
        Ast::Pow(a, e) => {
            let base = eval_quat(a, alg, line, col)?;
            let mut acc = alg.one();
            for _ in 0..*e {
                acc = acc.mul(&base);
            }
            acc
        }
    })
}

// ---------------------------------------------------------------------------
// Canonical unparse
// ---------------------------------------------------------------------------

fn canon_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn nf_generator_text(k: &NumberField) -> String {
    format!("nf({})@root1", format_poly(&k.min_poly, "x"))
}

/// Canonical text for an exact scalar; re-parses to an equal value.
pub fn canon_value(v: &Value) -> String {
    match v {
        Value::Rat(r) => canon_rat(r),
        Value::Fun(f) => format!("{f}"),
        Value::Nf(x) => canon_nf(x),
    }
}

fn canon_nf(x: &NfElem) -> String {
    let var = nf_generator_text(&x.field);
    format_poly(&x.rep, &var)
}

pub fn canon_form(q: &QuadraticForm) -> String {
    let parts: Vec<String> = q.entries.iter().map(canon_value).collect();
    format!("<{}>", parts.join(", "))
}

pub fn canon_algebra(d: &QuaternionAlgebra) -> String {
    format!("quat({}, {})", canon_value(&d.a), canon_value(&d.b))
}

pub fn canon_quaternion(x: &Quaternion) -> String {
    let units = ["", "i", "j", "k"];
    let mut parts = vec![];
    for (m, c) in x.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let coef = canon_value(c);
        if m == 0 {
            parts.push(format!("({coef})"));
        } else if c.is_one() {
            parts.push(units[m].to_string());
        } else {
            parts.push(format!("({coef})*{}", units[m]));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn canon_model(m: &AlgebraWithInvolution) -> String {
    match m {
        AlgebraWithInvolution::SplitOrthogonal(q) => format!("ortho({})", canon_form(q)),
        AlgebraWithInvolution::SplitSymplectic(n) => format!("symp({n})"),
        AlgebraWithInvolution::Index2Symplectic(d, h) => {
            let parts: Vec<String> = h.entries.iter().map(canon_value).collect();
            format!("symp2({}; {})", canon_algebra(d), parts.join(", "))
        }
        AlgebraWithInvolution::Index2Orthogonal(d, h) => {
            let parts: Vec<String> = h.entries.iter().map(canon_quaternion).collect();
            format!("ortho2({}; {})", canon_algebra(d), parts.join(", "))
        }
        AlgebraWithInvolution::QuatTensor { factors, s } => {
            let parts: Vec<String> = factors
                .iter()
                .map(|(d, inv)| {
                    let tag = match inv {
                        QuatInvol::Gamma => "gamma".to_string(),
                        QuatInvol::IntGamma(u) => format!("int({})", canon_quaternion(u)),
                    };
                    format!("{}:{}", canon_algebra(d), tag)
                })
                .collect();
            let _ = s;
            format!("tensor({})", parts.join(", "))
        }
    }
}

pub fn canon_parsed(p: &Parsed) -> String {
    match p {
        Parsed::Form(q) => canon_form(q),
        Parsed::Algebra(d) => canon_algebra(d),
        Parsed::Model(m) => canon_model(m),
    }
}

fn canon_valuation(v: &RealValuation) -> String {
    match v {
        RealValuation::Infinity => "inf".to_string(),
        RealValuation::Finite(p) => format_poly(p, "t"),
    }
}

// ---------------------------------------------------------------------------
// Certificate documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DocParams {
    pub seed: u64,
    pub max_copies: usize,
    pub degree_bound: usize,
    pub height_bound: u64,
    pub dim_cap: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessDoc {
    /// "vectors" | "quaternion-vectors" | "trivial"
    pub kind: String,
    pub copies: usize,
    pub vectors: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ObstructionDoc {
    /// "ordering" | "valuation"
    pub kind: String,
    pub at: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformizer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue1: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue2: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definite1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definite2: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateDocument {
    pub schema_version: u32,
    /// Canonical input text; re-parses to the decided object.
    pub input: String,
    /// "quadratic-form" | "algebra-with-involution"
    pub kind: String,
    /// Engine route actually taken.
    pub route: String,
    /// "weakly-isotropic" | "strongly-anisotropic" | "undecided"
    pub decision: String,
    pub params: DocParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undecided_reason: Option<String>,
    /// Wall-clock stamp, excluded from determinism comparisons.
    pub generated_unix_ms: u64,
}

fn now_ms() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn witness_doc(w: &Witness) -> WitnessDoc {
    match w {
        Witness::Quadratic(iw) => WitnessDoc {
            kind: "vectors".to_string(),
            copies: iw.copies,
            vectors: iw
                .vectors
                .iter()
                .map(|v| v.iter().map(canon_value).collect())
                .collect(),
        },
        Witness::Involution(InvolutionWitness::Vectors(vs)) => WitnessDoc {
            kind: "vectors".to_string(),
            copies: vs.len(),
            vectors: vs
                .iter()
                .map(|v| v.iter().map(canon_value).collect())
                .collect(),
        },
        Witness::Involution(InvolutionWitness::QuatVectors(vs)) => WitnessDoc {
            kind: "quaternion-vectors".to_string(),
            copies: vs.len(),
            vectors: vs
                .iter()
                .map(|v| v.iter().map(canon_quaternion).collect())
                .collect(),
        },
        Witness::Involution(InvolutionWitness::Trivial) => WitnessDoc {
            kind: "trivial".to_string(),
            copies: 0,
            vectors: vec![],
        },
    }
}

fn obstruction_doc(o: &LocalObstruction) -> ObstructionDoc {
    match o {
        LocalObstruction::Ordering {
            p,
            signature,
            dim,
            detail,
        } => ObstructionDoc {
            kind: "ordering".to_string(),
            at: format!("{p}"),
            signature: Some(*signature),
            dim: Some(*dim),
            detail: Some(detail.clone()),
            uniformizer: None,
            residue1: None,
            residue2: None,
            definite1: None,
            definite2: None,
        },
        LocalObstruction::Valuation {
            v,
            res1,
            res2,
            definite1,
            definite2,
        } => ObstructionDoc {
            kind: "valuation".to_string(),
            at: format!("{v}"),
            signature: None,
            dim: None,
            detail: None,
            uniformizer: Some(canon_valuation(v)),
            residue1: res1
                .as_ref()
                .map(|q| q.entries.iter().map(canon_value).collect()),
            residue2: res2
                .as_ref()
                .map(|q| q.entries.iter().map(canon_value).collect()),
            definite1: *definite1,
            definite2: *definite2,
        },
    }
}

fn route_of(parsed: &Parsed) -> String {
    match parsed {
        Parsed::Form(q) => match q.field {
            BaseField::FunQ => "weak-isotropy/funq-local-global".to_string(),
            _ => "weak-isotropy/number-field-sap".to_string(),
        },
        Parsed::Algebra(_) => "quaternion/division-test".to_string(),
        Parsed::Model(m) => match m {
            AlgebraWithInvolution::SplitOrthogonal(_) => {
                "involution/split-orthogonal/adjoint-form".to_string()
            }
            AlgebraWithInvolution::SplitSymplectic(_) => {
                "involution/split-symplectic/hyperbolic".to_string()
            }
            AlgebraWithInvolution::Index2Symplectic(..) => {
                "involution/index2-symplectic/jacobson-trace".to_string()
            }
            AlgebraWithInvolution::Index2Orthogonal(..) => {
                "involution/index2-orthogonal/local-scan".to_string()
            }
            AlgebraWithInvolution::QuatTensor { .. } => "involution/quat-tensor".to_string(),
        },
    }
}

fn decision_str(d: &Decision) -> &'static str {
    match d {
        Decision::WeaklyIsotropic(_) => "weakly-isotropic",
        Decision::StronglyAnisotropic(_) => "strongly-anisotropic",
        Decision::Undecided(_) => "undecided",
    }
}

/// Run the decision engine on a parsed expression and produce a certificate.
/// The result is deterministic for fixed input and params (the timestamp is
/// excluded from all comparisons).
pub fn decide_document(parsed: &Parsed, params: &DocParams, budget_ms: Option<u64>) -> Result<CertificateDocument> {
    let bounds = SearchBounds {
        max_copies: params.max_copies,
        degree_bound: params.degree_bound,
        height_bound: params.height_bound,
        budget_ms,
    };
    let (kind, decision) = match parsed {
        Parsed::Form(q) => {
            let d = match q.field {
                BaseField::FunQ => bp_quadratic(q, &bounds),
                _ => prestel_sap_quadratic(q, &bounds),
            };
            // Negative certificates are self-checked before emission.
            if let Decision::StronglyAnisotropic(obs) = &d {
                if !obs.verify_quadratic(q) {
                    return Err(Error::Verification(
                        "freshly computed obstruction failed its own re-check".to_string(),
                    ));
                }
            }
            if let Some(Witness::Quadratic(iw)) = d.witness() {
                if !iw.verify(q) {
                    return Err(Error::Verification(
                        "freshly computed witness failed re-substitution".to_string(),
                    ));
                }
            }
            ("quadratic-form", d)
        }
        Parsed::Model(m) => {
            let d = bp_involution(m, &bounds);
            if let Some(Witness::Involution(w)) = d.witness() {
                if !m.verify_witness(w) {
                    return Err(Error::Verification(
                        "freshly computed witness failed re-substitution".to_string(),
                    ));
                }
            }
            ("algebra-with-involution", d)
        }
        Parsed::Algebra(_) => {
            return Err(Error::Unsupported(
                "decide expects a form or a model; use the admissible subcommand for algebras"
                    .to_string(),
            ))
        }
    };
    let mut doc = CertificateDocument {
        schema_version: SCHEMA_VERSION,
        input: canon_parsed(parsed),
        kind: kind.to_string(),
        route: route_of(parsed),
        decision: decision_str(&decision).to_string(),
        params: params.clone(),
        witness: None,
        obstruction: None,
        undecided_reason: None,
        generated_unix_ms: now_ms(),
    };
    match &decision {
        Decision::WeaklyIsotropic(w) => doc.witness = w.as_ref().map(witness_doc),
        Decision::StronglyAnisotropic(o) => doc.obstruction = Some(obstruction_doc(o)),
        Decision::Undecided(reason) => doc.undecided_reason = Some(reason.clone()),
    }
    Ok(doc)
}

/// Re-check a certificate: the input is re-parsed, the engine re-run with the
/// recorded params, and the fresh document compared field-by-field (excluding
/// the timestamp); stored witnesses are additionally re-substituted from their
/// canonical text.
pub fn verify_document(doc: &CertificateDocument) -> Result<()> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Verification(format!(
            "unsupported schema version {}",
            doc.schema_version
        )));
    }
    let parsed = parse_expression(&doc.input)
        .map_err(|e| Error::Verification(format!("certificate input does not parse: {e}")))?;
    if canon_parsed(&parsed) != doc.input {
        return Err(Error::Verification(
            "certificate input is not in canonical form".to_string(),
        ));
    }
    let mut fresh = decide_document(&parsed, &doc.params, None)?;
    fresh.generated_unix_ms = doc.generated_unix_ms;
    if fresh != *doc {
        return Err(Error::Verification(
            "independent recomputation disagrees with the stored certificate".to_string(),
        ));
    }
    // Independent witness re-substitution from the stored canonical text.
    if let Some(w) = &doc.witness {
        verify_witness_doc(&parsed, w)?;
    }
    Ok(())
}

fn verify_witness_doc(parsed: &Parsed, w: &WitnessDoc) -> Result<()> {
    let fail = |msg: &str| Err(Error::Verification(msg.to_string()));
    match (parsed, w.kind.as_str()) {
        (_, "trivial") => Ok(()),
        (Parsed::Form(q), "vectors") => {
            let mut vectors = vec![];
            for row in &w.vectors {
                let mut v = vec![];
                for s in row {
                    v.push(coerce(parse_scalar(s)?, &q.field, 1, 1)?);
                }
                vectors.push(v);
            }
            if IsotropyWitness::new(vectors).verify(q) {
                Ok(())
            } else {
                fail("stored witness does not evaluate to zero")
            }
        }
        (Parsed::Model(m), "vectors") => {
            let field = m.base_field();
            let mut vectors = vec![];
            for row in &w.vectors {
                let mut v = vec![];
                for s in row {
                    v.push(coerce(parse_scalar(s)?, &field, 1, 1)?);
                }
                vectors.push(v);
            }
            if m.verify_witness(&InvolutionWitness::Vectors(vectors)) {
                Ok(())
            } else {
                fail("stored witness does not evaluate to zero")
            }
        }
        (Parsed::Model(m), "quaternion-vectors") => {
            let alg = match m {
                AlgebraWithInvolution::Index2Symplectic(d, _)
                | AlgebraWithInvolution::Index2Orthogonal(d, _) => d.clone(),
                _ => return fail("quaternion witness on a non-quaternionic model"),
            };
            let mut vectors = vec![];
            for row in &w.vectors {
                let mut v = vec![];
                for s in row {
                    v.push(parse_quaternion_text(s, &alg)?);
                }
                vectors.push(v);
            }
            if m.verify_witness(&InvolutionWitness::QuatVectors(vectors)) {
                Ok(())
            } else {
                fail("stored witness does not evaluate to zero")
            }
        }
        _ => fail("witness kind does not match the decided object"),
    }
}

// ---------------------------------------------------------------------------
// Human-readable rendering
// ---------------------------------------------------------------------------

fn human_document(doc: &CertificateDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input:    {}", doc.input);
    let _ = writeln!(s, "route:    {}", doc.route);
    let _ = writeln!(s, "decision: {}", doc.decision);
    if let Some(w) = &doc.witness {
        match w.kind.as_str() {
            "trivial" => {
                let _ = writeln!(s, "witness:  hyperbolic by construction");
            }
            _ => {
                let _ = writeln!(s, "witness:  {} copies", w.copies);
                for (n, row) in w.vectors.iter().enumerate() {
                    let _ = writeln!(s, "  x_{n} = ({})", row.join(", "));
                }
            }
        }
    }
    if let Some(o) = &doc.obstruction {
        match o.kind.as_str() {
            "ordering" => {
                let _ = writeln!(
                    s,
                    "obstruction: Bröcker–Prestel ordering condition fails at {} (signature {} of dimension {})",
                    o.at,
                    o.signature.unwrap_or(0),
                    o.dim.unwrap_or(0)
                );
                if let Some(d) = &o.detail {
                    if !d.is_empty() {
                        let _ = writeln!(s, "  detail: {d}");
                    }
                }
            }
            _ => {
                let _ = writeln!(
                    s,
                    "obstruction: Bröcker–Prestel valuation condition fails at {}",
                    o.at
                );
                if let Some(r1) = &o.residue1 {
                    let _ = writeln!(s, "  first residue form:  <{}>", r1.join(", "));
                }
                if let Some(r2) = &o.residue2 {
                    let _ = writeln!(s, "  second residue form: <{}>", r2.join(", "));
                }
                let _ = writeln!(
                    s,
                    "  each residue is definite over the residue field (embeddings {:?}, {:?})",
                    o.definite1, o.definite2
                );
            }
        }
    }
    if let Some(r) = &doc.undecided_reason {
        let _ = writeln!(s, "reason:   {r}");
    }
    s
}

// ---------------------------------------------------------------------------
// Subcommand plumbing
// ---------------------------------------------------------------------------

#[derive(clap::Parser, Debug)]
#[command(
    name = "witt-lgp",
    version,
    about = "Exact decision procedures for weak isotropy with machine-checkable certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Debug, Clone)]
struct BoundArgs {
    /// Maximum number of copies n in the witness search for n × φ.
    #[arg(long)]
    max_copies: Option<usize>,
    /// Maximum polynomial degree of witness coordinates over ℚ(t).
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Height bound for rational witness coordinates.
    #[arg(long)]
    height_bound: Option<u64>,
    /// Cap on the F-dimension of algebra models (trace forms grow as deg²).
    #[arg(long)]
    dim_cap: Option<usize>,
    /// Seed recorded in the certificate (decisions are deterministic).
    #[arg(long)]
    seed: Option<u64>,
}

impl BoundArgs {
    fn params(&self) -> DocParams {
        let d = SearchBounds::default();
        DocParams {
            seed: self.seed.unwrap_or(0),
            max_copies: self.max_copies.unwrap_or(d.max_copies),
            degree_bound: self.degree_bound.unwrap_or(d.degree_bound),
            height_bound: self.height_bound.unwrap_or(d.height_bound),
            dim_cap: self.dim_cap.unwrap_or(DEFAULT_DIM_CAP),
        }
    }
}

#[derive(clap::Subcommand, Debug)]
enum Cmd {
    /// Decide weak isotropy of a form or an algebra with involution.
    Decide {
        expr: String,
        #[arg(long)]
        json: bool,
        /// Escalate a missed witness search on a positive decision to an error.
        #[arg(long)]
        require_witness: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Print the full signature profile of a form or involution.
    Signature {
        expr: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dim_cap: Option<usize>,
    },
    /// Print Springer residue forms of a form over ℚ(t) at one or all
    /// relevant real valuations ("inf" or a polynomial in t).
    Residues {
        expr: String,
        at: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the diagonalized involution trace form of a model.
    TraceForm {
        expr: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dim_cap: Option<usize>,
    },
    /// Report the division test and admissible places of a quaternion algebra.
    Admissible {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the seeded self-checking property suites.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Re-check a saved certificate document.
    Verify {
        file: String,
        #[arg(long)]
        json: bool,
    },
}

fn budget_from_env() -> Option<u64> {
    std::env::var("WITT_LGP_BUDGET_MS")
        .ok()
        .and_then(|s| s.parse().ok())
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::NonsingularRequired | Error::SingularForm => 2,
        Error::Verification(_) => 4,
        Error::Unsupported(_)
        | Error::MultipleOrderings(_)
        | Error::UnsupportedResidueField(_)
        | Error::DimensionCap(..)
        | Error::MixedFields
        | Error::ReduciblePolynomial(_) => 3,
        _ => 1,
    }
}

/// Entry point; returns the process exit code. All normal output goes to
/// `out`, diagnostics to stderr.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match <Cli as clap::Parser>::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Help/version are successful exits; anything else is a usage error.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Decide {
            expr,
            json,
            require_witness,
            bounds,
        } => cmd_decide(&expr, json, require_witness, &bounds.params(), out),
        Cmd::Signature { expr, json, dim_cap } => {
            cmd_signature(&expr, json, dim_cap.unwrap_or(DEFAULT_DIM_CAP), out)
        }
        Cmd::Residues { expr, at, json } => cmd_residues(&expr, at.as_deref(), json, out),
        Cmd::TraceForm { expr, json, dim_cap } => {
            cmd_trace_form(&expr, json, dim_cap.unwrap_or(DEFAULT_DIM_CAP), out)
        }
        Cmd::Admissible { expr, json } => cmd_admissible(&expr, json, out),
        Cmd::Corpus { seed, count, json } => cmd_corpus(seed, count, json, out),
        Cmd::Verify { file, json } => cmd_verify(&file, json, out),
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes())
        .map_err(|e| Error::Unsupported(format!("output error: {e}")))
}

fn cmd_decide(
    expr: &str,
    json: bool,
    require_witness: bool,
    params: &DocParams,
    out: &mut dyn Write,
) -> Result<i32> {
    let parsed = parse_expression(expr)?;
    let doc = decide_document(&parsed, params, budget_from_env())?;
    if json {
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
    } else {
        emit(out, &human_document(&doc))?;
    }
    if doc.decision == "undecided" {
        return Ok(3);
    }
    if require_witness && doc.decision == "weakly-isotropic" && doc.witness.is_none() {
        eprintln!("error: positive decision but the bounded witness search found no witness");
        return Ok(4);
    }
    Ok(0)
}

#[derive(Serialize)]
struct SignatureRow {
    ordering: String,
    signature: i64,
}

fn cmd_signature(expr: &str, json: bool, dim_cap: usize, out: &mut dyn Write) -> Result<i32> {
    let parsed = parse_expression(expr)?;
    let rows: Vec<SignatureRow> = match &parsed {
        Parsed::Form(q) => q
            .all_signatures()
            .iter()
            .map(|(p, s)| SignatureRow {
                ordering: format!("{p}"),
                signature: *s,
            })
            .collect(),
        Parsed::Model(m) => {
            let tf = m.trace_form(dim_cap)?;
            let mut rows = vec![];
            for p in tf.sampled_orderings() {
                rows.push(SignatureRow {
                    ordering: format!("{p}"),
                    signature: m.signature_involution(&p)? as i64,
                });
            }
            rows
        }
        Parsed::Algebra(d) => {
            let nf = d.norm_form();
            nf.all_signatures()
                .iter()
                .map(|(p, s)| SignatureRow {
                    ordering: format!("{p}"),
                    signature: *s,
                })
                .collect()
        }
    };
    if json {
        let body = serde_json::json!({
            "input": canon_parsed(&parsed),
            "signatures": rows,
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()))?;
    } else {
        emit(out, &format!("input: {}\n", canon_parsed(&parsed)))?;
        for r in &rows {
            emit(out, &format!("  at {:<24} signature {}\n", r.ordering, r.signature))?;
        }
    }
    Ok(0)
}

fn parse_valuation(text: &str) -> Result<RealValuation> {
    if text.trim() == "inf" {
        return Ok(RealValuation::Infinity);
    }
    let v = parse_scalar(text)?;
    let f = match v {
        Value::Fun(f) => f,
        Value::Rat(_) | Value::Nf(_) => {
            return Err(Error::Unsupported(
                "a finite valuation needs a non-constant polynomial in t".to_string(),
            ))
        }
    };
    if !f.den.is_one() || f.num.deg_or_zero() < 1 {
        return Err(Error::Unsupported(
            "a finite valuation needs a non-constant polynomial in t".to_string(),
        ));
    }
    let p = f.num.monic();
    if !is_irreducible(&p) {
        return Err(Error::Unsupported(format!(
            "the valuation polynomial {} is not irreducible over ℚ",
            format_poly(&p, "t")
        )));
    }
    Ok(RealValuation::finite(p))
}

#[derive(Serialize)]
struct ResidueRow {
    valuation: String,
    residue_field: String,
    residue1: Vec<String>,
    residue2: Vec<String>,
}

fn cmd_residues(expr: &str, at: Option<&str>, json: bool, out: &mut dyn Write) -> Result<i32> {
    let parsed = parse_expression(expr)?;
    let Parsed::Form(q) = &parsed else {
        return Err(Error::Unsupported(
            "residues expects a diagonal quadratic form".to_string(),
        ));
    };
    if q.field != BaseField::FunQ {
        return Err(Error::Unsupported(
            "Springer residues are defined for forms over ℚ(t)".to_string(),
        ));
    }
    let vs = match at {
        Some(text) => vec![parse_valuation(text)?],
        None => relevant_valuations(q),
    };
    let mut rows = vec![];
    for v in &vs {
        let split = q.springer_residues(v)?;
        let kappa = v.residue_field();
        rows.push(ResidueRow {
            valuation: format!("{v}"),
            residue_field: if kappa.degree() == 1 {
                "Q".to_string()
            } else {
                format!("Q[x]/({})", format_poly(&kappa.min_poly, "x"))
            },
            residue1: split.res1.iter().flat_map(|f| f.entries.iter()).map(canon_value).collect(),
            residue2: split.res2.iter().flat_map(|f| f.entries.iter()).map(canon_value).collect(),
        });
    }
    if json {
        let body = serde_json::json!({
            "input": canon_parsed(&parsed),
            "residues": rows,
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()))?;
    } else {
        emit(out, &format!("input: {}\n", canon_parsed(&parsed)))?;
        for r in &rows {
            emit(
                out,
                &format!(
                    "  at {} over {}:\n    first residue:  <{}>\n    second residue: <{}>\n",
                    r.valuation,
                    r.residue_field,
                    r.residue1.join(", "),
                    r.residue2.join(", ")
                ),
            )?;
        }
        if rows.is_empty() {
            emit(out, "  no relevant real valuations\n")?;
        }
    }
    Ok(0)
}

fn cmd_trace_form(expr: &str, json: bool, dim_cap: usize, out: &mut dyn Write) -> Result<i32> {
    let parsed = parse_expression(expr)?;
    let Parsed::Model(m) = &parsed else {
        return Err(Error::Unsupported(
            "trace-form expects an algebra-with-involution model".to_string(),
        ));
    };
    let tf = m.trace_form(dim_cap)?;
    if json {
        let body = serde_json::json!({
            "input": canon_parsed(&parsed),
            "degree": m.degree(),
            "dimension": tf.dim(),
            "entries": tf.entries.iter().map(canon_value).collect::<Vec<_>>(),
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()))?;
    } else {
        emit(
            out,
            &format!(
                "input: {}\ndegree {} / trace form of dimension {}:\n  {}\n",
                canon_parsed(&parsed),
                m.degree(),
                tf.dim(),
                canon_form(&tf)
            ),
        )?;
    }
    Ok(0)
}

fn trit_str(t: &Trit) -> String {
    match t {
        Trit::Yes => "yes".to_string(),
        Trit::No => "no".to_string(),
        Trit::Undecided(r) => format!("undecided ({r})"),
    }
}

fn cmd_admissible(expr: &str, json: bool, out: &mut dyn Write) -> Result<i32> {
    let parsed = parse_expression(expr)?;
    let Parsed::Algebra(d) = &parsed else {
        return Err(Error::Unsupported(
            "admissible expects a quaternion algebra quat(a, b)".to_string(),
        ));
    };
    let division = d.is_division();
    let orderings: Vec<(String, bool)> = d
        .norm_form()
        .sampled_orderings()
        .iter()
        .map(|p| (format!("{p}"), d.ordering_admissible(p)))
        .collect();
    let valuations: Vec<(String, Trit)> = if d.field == BaseField::FunQ {
        relevant_valuations(&d.norm_form())
            .iter()
            .map(|v| (format!("{v}"), d.valuation_admissible(v)))
            .collect()
    } else {
        vec![]
    };
    let undecided = matches!(division.answer, Trit::Undecided(_))
        || valuations.iter().any(|(_, t)| matches!(t, Trit::Undecided(_)));
    if json {
        let body = serde_json::json!({
            "input": canon_parsed(&parsed),
            "division": trit_str(&division.answer),
            "division_route": division.route,
            "split_point": division.split_point.as_ref().map(|w| {
                w.vectors[0].iter().map(canon_value).collect::<Vec<_>>()
            }),
            "ordering_admissible": orderings.iter().map(|(p, a)| {
                serde_json::json!({"ordering": p, "admissible": a})
            }).collect::<Vec<_>>(),
            "valuation_admissible": valuations.iter().map(|(v, t)| {
                serde_json::json!({"valuation": v, "admissible": trit_str(t)})
            }).collect::<Vec<_>>(),
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()))?;
    } else {
        emit(out, &format!("input: {}\n", canon_parsed(&parsed)))?;
        emit(
            out,
            &format!(
                "division algebra: {} (route {})\n",
                trit_str(&division.answer),
                division.route
            ),
        )?;
        for (p, a) in &orderings {
            emit(out, &format!("  ordering {:<24} admissible: {}\n", p, a))?;
        }
        for (v, t) in &valuations {
            emit(out, &format!("  valuation {:<23} admissible: {}\n", v, trit_str(t)))?;
        }
    }
    Ok(if undecided { 3 } else { 0 })
}

fn cmd_verify(file: &str, json: bool, out: &mut dyn Write) -> Result<i32> {
    let raw = std::fs::read_to_string(file)
        .map_err(|e| Error::Verification(format!("cannot read {file}: {e}")))?;
    let doc: CertificateDocument = serde_json::from_str(&raw)
        .map_err(|e| Error::Verification(format!("malformed certificate: {e}")))?;
    verify_document(&doc)?;
    if json {
        emit(out, "{\"verified\": true}\n")?;
    } else {
        emit(out, &format!("verified: {}\n", doc.input))?;
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// Seeded corpus runner
// ---------------------------------------------------------------------------

#[derive(Serialize, Default)]
struct CorpusReport {
    seed: u64,
    count: usize,
    sap_positive: usize,
    funq_positive: usize,
    funq_negative: usize,
    funq_undecided: usize,
    springer_checked: usize,
    failures: Vec<String>,
}

fn nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let n = rng.gen_range(lo..=hi);
        if n != 0 {
            return n;
        }
    }
}

fn random_fun_entry(rng: &mut ChaCha8Rng) -> Value {
    let deg = rng.gen_range(0..=2);
    loop {
        let coeffs: Vec<Rat> = (0..=deg).map(|_| rat(rng.gen_range(-5..=5))).collect();
        let p = QPoly::new(coeffs);
        if !p.is_zero() {
            return Value::Fun(RatFunc::from_poly(p));
        }
    }
}

fn cmd_corpus(seed: u64, count: usize, json: bool, out: &mut dyn Write) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = SearchBounds {
        budget_ms: budget_from_env(),
        ..SearchBounds::default()
    };
    let mut report = CorpusReport {
        seed,
        count,
        ..CorpusReport::default()
    };

    for n in 0..count {
        // Suite 1: the SAP criterion over ℚ — ⟨1, a, b, −ab⟩ is always
        // weakly isotropic, with a verified witness.
        let a = nonzero(&mut rng, -50, 50);
        let b = nonzero(&mut rng, -50, 50);
        let q = QuadraticForm::from_ints(&[1, a, b, -a * b]);
        match prestel_sap_quadratic(&q, &bounds) {
            Decision::WeaklyIsotropic(w) => {
                let ok = matches!(&w, Some(Witness::Quadratic(iw)) if iw.verify(&q));
                if ok {
                    report.sap_positive += 1;
                } else {
                    report
                        .failures
                        .push(format!("sap #{n}: <1, {a}, {b}, {}> missing witness", -a * b));
                }
            }
            other => report.failures.push(format!(
                "sap #{n}: <1, {a}, {b}, {}> decided {:?}",
                -a * b,
                decision_str(&other)
            )),
        }

        // Suite 2: random forms over ℚ(t) — every decision must come with
        // self-verifying evidence.
        let dim = rng.gen_range(2..=4);
        let entries: Vec<Value> = (0..dim).map(|_| random_fun_entry(&mut rng)).collect();
        let q = QuadraticForm::diagonal(entries).unwrap();
        match bp_quadratic(&q, &bounds) {
            Decision::WeaklyIsotropic(w) => {
                report.funq_positive += 1;
                if let Some(Witness::Quadratic(iw)) = &w {
                    if !iw.verify(&q) {
                        report
                            .failures
                            .push(format!("funq #{n}: witness fails on {}", canon_form(&q)));
                    }
                }
            }
            Decision::StronglyAnisotropic(obs) => {
                report.funq_negative += 1;
                if !obs.verify_quadratic(&q) {
                    report
                        .failures
                        .push(format!("funq #{n}: obstruction fails on {}", canon_form(&q)));
                }
            }
            Decision::Undecided(_) => report.funq_undecided += 1,
        }

        // Suite 3: Springer reconstruction at a random relevant valuation.
        if let Some(v) = relevant_valuations(&q).first() {
            match q.springer_residues(v) {
                Ok(split) => {
                    let (recon, t) = q.springer_reconstruction(&split);
                    if crate::qforms::verify_congruence(
                        &crate::qforms::gram_of_diagonal(&q),
                        &t,
                        &recon.entries,
                    ) {
                        report.springer_checked += 1;
                    } else {
                        report.failures.push(format!(
                            "springer #{n}: reconstruction fails on {} at {v}",
                            canon_form(&q)
                        ));
                    }
                }
                Err(e) => report
                    .failures
                    .push(format!("springer #{n}: {e} on {}", canon_form(&q))),
            }
        }
    }

    if json {
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
    } else {
        emit(
            out,
            &format!(
                "corpus seed {} count {}\n  sap positive:      {}\n  funq positive:     {}\n  funq negative:     {}\n  funq undecided:    {}\n  springer checked:  {}\n  failures:          {}\n",
                report.seed,
                report.count,
                report.sap_positive,
                report.funq_positive,
                report.funq_negative,
                report.funq_undecided,
                report.springer_checked,
                report.failures.len()
            ),
        )?;
        for f in &report.failures {
            emit(out, &format!("  FAIL {f}\n"))?;
        }
    }
    Ok(if report.failures.is_empty() { 0 } else { 4 })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["witt-lgp"];
        full.extend_from_slice(args);
        let code = run(full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn parses_the_three_spec_examples() {
        match parse_expression("<1, -t, t^2-2>").unwrap() {
            Parsed::Form(q) => assert_eq!(q.dim(), 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expression("symp2(quat(-1,-1); 1, t)").unwrap() {
            Parsed::Model(AlgebraWithInvolution::Index2Symplectic(_, h)) => {
                assert_eq!(h.dim(), 2)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_expression("<1, 0>"),
            Err(Error::NonsingularRequired)
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_expression("<1, $>") {
            Err(Error::Syntax { line, col, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_expression("quat(1,"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn canonical_unparse_round_trips() {
        for text in [
            "<1, t, t^2-2, -t*(t^2-2)>",
            "<1/2, -3, nf(x^2-2)@root1>",
            "quat(-1, t)",
            "ortho(<1, -1, 7>)",
            "symp(3)",
            "herm(quat(-1,-1); 1, -t^2-1)",
            "skew(quat(-1,-1); i, j + k)",
            "tensor(quat(-1,-1):gamma, quat(2,3):int(i))",
        ] {
            let p1 = parse_expression(text).unwrap();
            let canon = canon_parsed(&p1);
            let p2 = parse_expression(&canon).unwrap();
            assert_eq!(canon, canon_parsed(&p2), "fixpoint failure on {text}");
        }
    }

    #[test]
    fn nf_generator_arithmetic_and_root_bounds() {
        let v = parse_scalar("nf(x^2-2)@root1^2 - 1").unwrap();
        assert!(v.sub(&Value::one_of(&v.field())).is_zero());
        assert!(matches!(
            parse_expression("<nf(x^2-2)@root3>"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expression("<nf(x^2+1)@root1>"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn quaternion_literals_evaluate_in_the_algebra() {
        let alg = QuaternionAlgebra::from_ints(-1, -1);
        let q = parse_quaternion_text("i*j - k", &alg).unwrap();
        assert!(q.is_zero());
        let q = parse_quaternion_text("(1 + i)^2", &alg).unwrap();
        assert_eq!(q.c[1], Value::int(2));
    }

    #[test]
    fn decide_flagship_negative_certificate() {
        let (code, out) = run_capture(&["decide", "--json", "<1,t,t^2-2,-t*(t^2-2)>"]);
        assert_eq!(code, 0, "output: {out}");
        let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.decision, "strongly-anisotropic");
        let obs = doc.obstruction.as_ref().unwrap();
        assert_eq!(obs.kind, "valuation");
        assert_eq!(obs.uniformizer.as_deref(), Some("t^2 - 2"));
        verify_document(&doc).unwrap();
    }

    #[test]
    fn decide_positive_requires_witness_ok() {
        let (code, out) = run_capture(&["decide", "--require-witness", "--json", "<1, -2>"]);
        assert_eq!(code, 0, "output: {out}");
        let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.decision, "weakly-isotropic");
        assert!(doc.witness.is_some());
        verify_document(&doc).unwrap();
    }

    #[test]
    fn decide_definite_form_is_obstruction_not_witness_failure() {
        // Exit 0: an obstruction, not a witness, is required.
        let (code, out) = run_capture(&["decide", "--require-witness", "--json", "<1, 1>"]);
        assert_eq!(code, 0, "output: {out}");
        let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.decision, "strongly-anisotropic");
    }

    #[test]
    fn exit_codes_for_syntax_and_undecided() {
        let (code, _) = run_capture(&["decide", "<1,"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["decide", "<1, 0>"]);
        assert_eq!(code, 2);
        // Tensor models with several quaternion factors are routed through
        // the decomposable checks and may legitimately end undecided.
        let (code, _) = run_capture(&["decide", "tensor(quat(2,3):gamma, quat(5,7):gamma)"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn json_output_is_deterministic_modulo_timestamp() {
        let (c1, o1) = run_capture(&["decide", "--json", "<1,t,t^2-2,-t*(t^2-2)>"]);
        let (c2, o2) = run_capture(&["decide", "--json", "<1,t,t^2-2,-t*(t^2-2)>"]);
        assert_eq!(c1, 0);
        assert_eq!(c2, 0);
        let mut d1: CertificateDocument = serde_json::from_str(&o1).unwrap();
        let mut d2: CertificateDocument = serde_json::from_str(&o2).unwrap();
        d1.generated_unix_ms = 0;
        d2.generated_unix_ms = 0;
        assert_eq!(
            serde_json::to_string(&d1).unwrap(),
            serde_json::to_string(&d2).unwrap()
        );
    }

    #[test]
    fn verify_round_trip_through_a_file() {
        let (code, out) = run_capture(&["decide", "--json", "<1, 1, t>"]);
        assert_eq!(code, 0);
        let dir = std::env::temp_dir().join("witt_lgp_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cert.json");
        std::fs::write(&path, &out).unwrap();
        let (code, vout) = run_capture(&["verify", path.to_str().unwrap()]);
        assert_eq!(code, 0, "verify output: {vout}");

        // Tampering with the obstruction must fail verification with exit 4.
        let tampered = out.replace("strongly-anisotropic", "weakly-isotropic");
        std::fs::write(&path, &tampered).unwrap();
        let (code, _) = run_capture(&["verify", path.to_str().unwrap()]);
        assert_eq!(code, 4);
    }

    #[test]
    fn residues_and_signature_and_trace_form_and_admissible() {
        let (code, out) = run_capture(&["residues", "<1,t,t^2-2,-t*(t^2-2)>", "t^2-2"]);
        assert_eq!(code, 0);
        assert!(out.contains("first residue"), "output: {out}");

        let (code, out) = run_capture(&["signature", "<1, t>"]);
        assert_eq!(code, 0);
        assert!(out.contains("signature"), "output: {out}");

        let (code, out) = run_capture(&["trace-form", "tensor(quat(-1,-1):gamma)"]);
        assert_eq!(code, 0);
        assert!(out.contains("dimension 4"), "output: {out}");

        let (code, out) = run_capture(&["admissible", "quat(-1,-1)"]);
        assert_eq!(code, 0);
        assert!(out.contains("division algebra: yes"), "output: {out}");
    }

    #[test]
    fn corpus_runs_clean_on_a_small_seed() {
        let (code, out) = run_capture(&["corpus", "--seed", "7", "--count", "5", "--json"]);
        assert_eq!(code, 0, "output: {out}");
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["failures"].as_array().unwrap().len(), 0);
        assert_eq!(report["sap_positive"], 5);
    }
}
