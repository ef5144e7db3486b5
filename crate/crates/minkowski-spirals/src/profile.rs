//! A tiny expression language for curvature and torsion profiles κ(s), τ(s).
//!
//! The grammar is deliberately small — the only variable is the arc length
//! `s`, and the function set covers what smooth curvature laws need:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := number | 's' | '(' expr ')' | '-' factor | ident '(' expr ')'
//! ident  := sin | cos | sinh | cosh | exp | ln
//! ```
//!
//! with standard precedence and left associativity. Numbers are unsigned
//! decimal literals with optional fraction and exponent; a leading minus is
//! parsed as unary negation.
//!
//! Parsed expressions print back to text (via [`std::fmt::Display`]) with
//! minimal parentheses and shortest round-trip float formatting, and the
//! printed text reparses to a structurally identical AST — a property the
//! test suite exercises on randomized expressions.
//!
//! [`canonicalize`] detects the three profile families that the
//! classification machinery cares about — constants, linear `a·s + b`, and
//! reciprocal-linear `1/(a·s + b)` — preferring exact structural matching
//! and falling back to a numeric probe.

use std::fmt;

use thiserror::Error;

/// Residual bound for the numeric-probe fallback in [`canonicalize`]: a
/// family is accepted only if it reproduces the expression at all probe
/// points to this absolute accuracy.
pub const PROBE_TOLERANCE: f64 = 1e-9;

/// The unary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
            UnaryFn::Exp => "exp",
            UnaryFn::Ln => "ln",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            "exp" => UnaryFn::Exp,
            "ln" => UnaryFn::Ln,
            _ => return None,
        })
    }
}

/// Expression AST over the profile grammar.
///
/// Parentheses are not represented: they only group during parsing. Two
/// ASTs are equal iff they have the same structure and bitwise-equal
/// literals, which is exactly the equivalence the print/parse round-trip
/// guarantees.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileExpr {
    /// A nonnegative literal; negative values arise via [`ProfileExpr::Neg`].
    Number(f64),
    /// The arc-length variable `s`.
    Var,
    Neg(Box<ProfileExpr>),
    Add(Box<ProfileExpr>, Box<ProfileExpr>),
    Sub(Box<ProfileExpr>, Box<ProfileExpr>),
    Mul(Box<ProfileExpr>, Box<ProfileExpr>),
    Div(Box<ProfileExpr>, Box<ProfileExpr>),
    Call(UnaryFn, Box<ProfileExpr>),
}

/// Why a parse failed; [`ParseError::offset`] points at the byte where.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("malformed number literal")]
    MalformedNumber,
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("unexpected end of input; expected {0}")]
    UnexpectedEnd(&'static str),
}

/// Syntax error with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

/// Domain failure during evaluation, reporting the offending subexpression
/// (pretty-printed) and the arc length at which it occurred.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{expr}` at s = {s}")]
    DivisionByZero { expr: String, s: f64 },
    #[error("ln of non-positive value {arg} in `{expr}` at s = {s}")]
    LnNonPositive { expr: String, s: f64, arg: f64 },
    #[error("non-finite result in `{expr}` at s = {s}")]
    NonFinite { expr: String, s: f64 },
}

impl EvalError {
    /// The arc length at which evaluation failed.
    #[must_use]
    pub fn at(&self) -> f64 {
        match self {
            EvalError::DivisionByZero { s, .. }
            | EvalError::LnNonPositive { s, .. }
            | EvalError::NonFinite { s, .. } => *s,
        }
    }
}

/// The profile families recognized by [`canonicalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalForm {
    /// `c` for all s.
    Constant(f64),
    /// `slope·s + intercept`.
    Linear { slope: f64, intercept: f64 },
    /// `1 / (slope·s + intercept)` with `slope ≠ 0`.
    ReciprocalLinear { slope: f64, intercept: f64 },
    /// None of the above.
    Other,
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let offset = i;
        match c {
            '+' | '-' | '*' | '/' | '(' | ')' => {
                out.push(Token { tok: Tok::Sym(c), offset });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(ParseError { offset, kind: ParseErrorKind::MalformedNumber });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent part, accepted only when it is actually one:
                // `2e3`, `2e-3`, `2E+10`. A bare `e` after digits is left for
                // the identifier rules to reject.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit
                    .parse()
                    .map_err(|_| ParseError { offset, kind: ParseErrorKind::MalformedNumber })?;
                out.push(Token { tok: Tok::Number(value), offset });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(text[start..i].to_string()), offset });
            }
            other => {
                return Err(ParseError {
                    offset,
                    kind: ParseErrorKind::UnexpectedChar(other),
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser: recursive descent, one level per precedence tier
// ---------------------------------------------------------------------------

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    /// Byte length of the source, for end-of-input error offsets.
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                offset: t.offset,
                kind: ParseErrorKind::Unexpected {
                    expected,
                    found: match &t.tok {
                        Tok::Number(v) => format!("number `{v}`"),
                        Tok::Ident(s) => format!("identifier `{s}`"),
                        Tok::Sym(c) => format!("`{c}`"),
                    },
                },
            },
            None => ParseError {
                offset: self.end,
                kind: ParseErrorKind::UnexpectedEnd(expected),
            },
        }
    }

    fn expr(&mut self) -> Result<ProfileExpr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek() {
            match t.tok {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = ProfileExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = ProfileExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ProfileExpr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(t) = self.peek() {
            match t.tok {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = ProfileExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = ProfileExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ProfileExpr, ParseError> {
        let Some(t) = self.bump() else {
            return Err(ParseError {
                offset: self.end,
                kind: ParseErrorKind::UnexpectedEnd("a number, `s`, `(`, `-`, or a function"),
            });
        };
        match &t.tok {
            Tok::Number(v) => Ok(ProfileExpr::Number(*v)),
            Tok::Sym('-') => Ok(ProfileExpr::Neg(Box::new(self.factor()?))),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token { tok: Tok::Sym(')'), .. }) => Ok(inner),
                    Some(other) => Err(ParseError {
                        offset: other.offset,
                        kind: ParseErrorKind::Unexpected {
                            expected: "`)`",
                            found: format!("{:?}", other.tok),
                        },
                    }),
                    None => Err(ParseError {
                        offset: self.end,
                        kind: ParseErrorKind::UnexpectedEnd("`)`"),
                    }),
                }
            }
            Tok::Ident(name) if name == "s" => Ok(ProfileExpr::Var),
            Tok::Ident(name) => {
                let Some(f) = UnaryFn::from_name(name) else {
                    return Err(ParseError {
                        offset: t.offset,
                        kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                    });
                };
                match self.peek() {
                    Some(Token { tok: Tok::Sym('('), .. }) => {
                        self.bump();
                    }
                    _ => return Err(self.err_here("`(` after function name")),
                }
                let arg = self.expr()?;
                match self.bump() {
                    Some(Token { tok: Tok::Sym(')'), .. }) => {
                        Ok(ProfileExpr::Call(f, Box::new(arg)))
                    }
                    Some(other) => Err(ParseError {
                        offset: other.offset,
                        kind: ParseErrorKind::Unexpected {
                            expected: "`)`",
                            found: format!("{:?}", other.tok),
                        },
                    }),
                    None => Err(ParseError {
                        offset: self.end,
                        kind: ParseErrorKind::UnexpectedEnd("`)`"),
                    }),
                }
            }
            Tok::Sym(_) => {
                self.pos -= 1;
                Err(self.err_here("a number, `s`, `(`, `-`, or a function"))
            }
        }
    }
}

/// Parse profile text into an AST.
///
/// Errors carry the byte offset of the offending token; empty (or
/// whitespace-only) input is rejected explicitly.
pub fn parse_profile(text: &str) -> Result<ProfileExpr, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError { offset: 0, kind: ParseErrorKind::Empty });
    }
    let mut p = Parser { tokens: &tokens, pos: 0, end: text.len() };
    let expr = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseError {
            offset: t.offset,
            kind: ParseErrorKind::Unexpected {
                expected: "end of input",
                found: match &t.tok {
                    Tok::Number(v) => format!("number `{v}`"),
                    Tok::Ident(s) => format!("identifier `{s}`"),
                    Tok::Sym(c) => format!("`{c}`"),
                },
            },
        });
    }
    Ok(expr)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluate the expression at arc length `s` in IEEE double precision.
///
/// Division by zero, `ln` of a non-positive argument, and overflow to a
/// non-finite value are reported as domain errors naming the subexpression —
/// downstream quadrature turns these into "singularity at s = …" messages
/// rather than silently integrating infinities.
pub fn eval_profile(p: &ProfileExpr, s: f64) -> Result<f64, EvalError> {
    let v = match p {
        ProfileExpr::Number(v) => *v,
        ProfileExpr::Var => s,
        ProfileExpr::Neg(x) => -eval_profile(x, s)?,
        ProfileExpr::Add(l, r) => eval_profile(l, s)? + eval_profile(r, s)?,
        ProfileExpr::Sub(l, r) => eval_profile(l, s)? - eval_profile(r, s)?,
        ProfileExpr::Mul(l, r) => eval_profile(l, s)? * eval_profile(r, s)?,
        ProfileExpr::Div(l, r) => {
            let den = eval_profile(r, s)?;
            if den == 0.0 {
                return Err(EvalError::DivisionByZero { expr: p.to_string(), s });
            }
            eval_profile(l, s)? / den
        }
        ProfileExpr::Call(f, x) => {
            let arg = eval_profile(x, s)?;
            match f {
                UnaryFn::Sin => arg.sin(),
                UnaryFn::Cos => arg.cos(),
                UnaryFn::Sinh => arg.sinh(),
                UnaryFn::Cosh => arg.cosh(),
                UnaryFn::Exp => arg.exp(),
                UnaryFn::Ln => {
                    if arg <= 0.0 {
                        return Err(EvalError::LnNonPositive { expr: p.to_string(), s, arg });
                    }
                    arg.ln()
                }
            }
        }
    };
    if !v.is_finite() {
        return Err(EvalError::NonFinite { expr: p.to_string(), s });
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Printing: minimal parentheses, shortest round-trip floats
// ---------------------------------------------------------------------------

impl ProfileExpr {
    /// Binding strength of the node's top-level operator.
    fn precedence(&self) -> u8 {
        match self {
            ProfileExpr::Add(..) | ProfileExpr::Sub(..) => 1,
            ProfileExpr::Mul(..) | ProfileExpr::Div(..) => 2,
            ProfileExpr::Neg(..) => 3,
            ProfileExpr::Number(_) | ProfileExpr::Var | ProfileExpr::Call(..) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match self {
            ProfileExpr::Number(v) => write!(f, "{v}")?,
            ProfileExpr::Var => f.write_str("s")?,
            ProfileExpr::Neg(x) => {
                f.write_str("-")?;
                x.fmt_prec(f, prec)?;
            }
            ProfileExpr::Add(l, r) => {
                l.fmt_prec(f, prec)?;
                f.write_str("+")?;
                // Right side one tier tighter: keeps left associativity on
                // reparse (`a+(b+c)` stays distinct from `a+b+c`).
                r.fmt_prec(f, prec + 1)?;
            }
            ProfileExpr::Sub(l, r) => {
                l.fmt_prec(f, prec)?;
                f.write_str("-")?;
                r.fmt_prec(f, prec + 1)?;
            }
            ProfileExpr::Mul(l, r) => {
                l.fmt_prec(f, prec)?;
                f.write_str("*")?;
                r.fmt_prec(f, prec + 1)?;
            }
            ProfileExpr::Div(l, r) => {
                l.fmt_prec(f, prec)?;
                f.write_str("/")?;
                r.fmt_prec(f, prec + 1)?;
            }
            ProfileExpr::Call(func, x) => {
                f.write_str(func.name())?;
                f.write_str("(")?;
                x.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ProfileExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

// ---------------------------------------------------------------------------
// Canonical-form detection
// ---------------------------------------------------------------------------

/// Interpret the AST as an affine function `a·s + b` where that is exact.
///
/// Returns `None` as soon as a node would make the result non-affine
/// (products of two non-constant affine parts, general function calls, …).
fn as_affine(p: &ProfileExpr) -> Option<(f64, f64)> {
    match p {
        ProfileExpr::Number(v) => Some((0.0, *v)),
        ProfileExpr::Var => Some((1.0, 0.0)),
        ProfileExpr::Neg(x) => as_affine(x).map(|(a, b)| (-a, -b)),
        ProfileExpr::Add(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            Some((la + ra, lb + rb))
        }
        ProfileExpr::Sub(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            Some((la - ra, lb - rb))
        }
        ProfileExpr::Mul(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            if la == 0.0 {
                Some((lb * ra, lb * rb))
            } else if ra == 0.0 {
                Some((la * rb, lb * rb))
            } else {
                None
            }
        }
        ProfileExpr::Div(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            if ra == 0.0 && rb != 0.0 {
                Some((la / rb, lb / rb))
            } else {
                None
            }
        }
        ProfileExpr::Call(..) => None,
    }
}

/// Generic probe abscissae for the numeric fallback: irrational-looking,
/// positive, spread over a decade, chosen to avoid the small-integer poles
/// and roots that hand-written profiles tend to have.
const PROBE_POINTS: [f64; 5] = [0.3711, 1.2424, 2.1113, 3.0009, 4.4417];

/// Classify an expression into one of the recognized profile families.
///
/// Structural matching runs first: an expression that is literally affine in
/// `s` (or the reciprocal of one) yields exact coefficients. Otherwise the
/// expression is evaluated at five generic points and each family is fitted
/// in turn; the first with residual ≤ [`PROBE_TOLERANCE`] wins. Expressions
/// that fit nothing — or that fail to evaluate at a probe point — are
/// `Other`. This function never errors: `Other` is the fallback.
#[must_use]
pub fn canonicalize(p: &ProfileExpr) -> CanonicalForm {
    // Structural pass: exact coefficients, no numerics.
    if let Some((a, b)) = as_affine(p) {
        return if a == 0.0 {
            CanonicalForm::Constant(b)
        } else {
            CanonicalForm::Linear { slope: a, intercept: b }
        };
    }
    if let ProfileExpr::Div(num, den) = p {
        if let (Some((na, nb)), Some((da, db))) = (as_affine(num), as_affine(den)) {
            if na == 0.0 && nb != 0.0 && da != 0.0 {
                // c / (a·s + b) = 1 / ((a/c)·s + (b/c)).
                return CanonicalForm::ReciprocalLinear { slope: da / nb, intercept: db / nb };
            }
        }
    }

    // Numeric probe.
    let mut values = [0.0; 5];
    for (v, &s) in values.iter_mut().zip(PROBE_POINTS.iter()) {
        match eval_profile(p, s) {
            Ok(x) => *v = x,
            Err(_) => return CanonicalForm::Other,
        }
    }

    let max_dev_const = values[1..]
        .iter()
        .fold(0.0f64, |m, &v| m.max((v - values[0]).abs()));
    if max_dev_const <= PROBE_TOLERANCE {
        return CanonicalForm::Constant(values[0]);
    }

    let two_point_line = |xs: &[f64; 5], ys: &[f64; 5]| -> (f64, f64) {
        let a = (ys[4] - ys[0]) / (xs[4] - xs[0]);
        let b = ys[0] - a * xs[0];
        (a, b)
    };

    let (a, b) = two_point_line(&PROBE_POINTS, &values);
    let lin_dev = PROBE_POINTS
        .iter()
        .zip(values.iter())
        .fold(0.0f64, |m, (&s, &v)| m.max((a * s + b - v).abs()));
    if lin_dev <= PROBE_TOLERANCE {
        return CanonicalForm::Linear { slope: a, intercept: b };
    }

    if values.iter().all(|&v| v.abs() > 1e-12) {
        let mut recips = [0.0; 5];
        for (r, &v) in recips.iter_mut().zip(values.iter()) {
            *r = 1.0 / v;
        }
        let (a, b) = two_point_line(&PROBE_POINTS, &recips);
        let rec_dev = PROBE_POINTS
            .iter()
            .zip(values.iter())
            .fold(0.0f64, |m, (&s, &v)| {
                let den = a * s + b;
                if den == 0.0 {
                    f64::INFINITY
                } else {
                    m.max((1.0 / den - v).abs())
                }
            });
        if a != 0.0 && rec_dev <= PROBE_TOLERANCE {
            return CanonicalForm::ReciprocalLinear { slope: a, intercept: b };
        }
    }

    CanonicalForm::Other
}
