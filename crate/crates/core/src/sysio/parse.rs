use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::ParseError;
use crate::poly::{Monomial, Polynomial, PolynomialSystem, VariableGroup, VariableStructure};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Float(f64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            } else if c.is_ascii_digit()
                || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
            {
                let start = i;
                let mut integral = true;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    integral = false;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        integral = false;
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if integral {
                    s.parse::<u64>()
                        .map(Tok::Int)
                        .map_err(|_| syntax(line, column, "integer literal too large"))?
                } else {
                    Tok::Float(
                        s.parse::<f64>()
                            .map_err(|_| syntax(line, column, format!("bad number `{s}`")))?,
                    )
                };
                out.push(Token { tok, line, column });
            } else if "+-*/^(),;=".contains(c) {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line,
                    column,
                });
                i += 1;
            } else {
                return Err(syntax(line, column, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.tok == Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s),
                line,
                column,
            }) => Ok((s, line, column)),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an identifier"))
            }
        }
    }
}

struct Scope {
    structure: Arc<VariableStructure>,
    constants: HashMap<String, Complex64>,
}

impl Scope {
    fn expr(&self, p: &mut Parser) -> Result<Polynomial, ParseError> {
        let mut acc = self.term(p)?;
        loop {
            if p.eat('+') {
                acc = acc.add(&self.term(p)?);
            } else if p.eat('-') {
                acc = acc.sub(&self.term(p)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&self, p: &mut Parser) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary(p)?;
        loop {
            if p.eat('*') {
                acc = acc.mul(&self.unary(p)?);
            } else if p.peek().is_some_and(|t| t.tok == Tok::Sym('/')) {
                let (l, c) = p.here();
                p.pos += 1;
                let d = self.unary(p)?;
                let Some(v) = constant_value(&d) else {
                    return Err(syntax(l, c, "division only by nonzero constants"));
                };
                acc = acc.scale(Complex64::new(1.0, 0.0) / v);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&self, p: &mut Parser) -> Result<Polynomial, ParseError> {
        if p.eat('-') {
            return Ok(self.unary(p)?.scale(Complex64::new(-1.0, 0.0)));
        }
        if p.eat('+') {
            return self.unary(p);
        }
        let base = self.atom(p)?;
        if p.eat('^') {
            return match p.next() {
                Some(Token {
                    tok: Tok::Int(k), ..
                }) if k <= u32::MAX as u64 => Ok(base.pow(k as u32)),
                _ => {
                    p.pos -= 1;
                    Err(p.err("exponent must be a nonnegative integer"))
                }
            };
        }
        Ok(base)
    }

    fn atom(&self, p: &mut Parser) -> Result<Polynomial, ParseError> {
        let s = &self.structure;
        let t = p.next().ok_or_else(|| p.err("unexpected end of input"))?;
        match t.tok {
            Tok::Int(v) => Ok(Polynomial::constant(
                s.clone(),
                Complex64::new(v as f64, 0.0),
            )),
            Tok::Float(v) => Ok(Polynomial::constant(s.clone(), Complex64::new(v, 0.0))),
            Tok::Ident(name) if name == "I" => {
                Ok(Polynomial::constant(s.clone(), Complex64::new(0.0, 1.0)))
            }
            Tok::Ident(name) => {
                if let Some(v) = s.index_of(&name) {
                    Ok(Polynomial::variable(s.clone(), v))
                } else if let Some(c) = self.constants.get(&name) {
                    Ok(Polynomial::constant(s.clone(), *c))
                } else {
                    Err(ParseError::Undeclared {
                        name,
                        line: t.line,
                        column: t.column,
                    })
                }
            }
            Tok::Sym('(') => {
                let e = self.expr(p)?;
                p.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => Err(syntax(t.line, t.column, format!("unexpected `{c}`"))),
        }
    }
}

fn constant_value(p: &Polynomial) -> Option<Complex64> {
    let mut it = p.terms();
    let (m, c) = it.next()?;
    (it.next().is_none() && m.exponents().iter().all(|&e| e == 0) && c.norm() > 0.0).then_some(*c)
}

const KEYWORDS: [&str; 5] = [
    "variable_group",
    "affine_group",
    "homogenizing",
    "constant",
    "I",
];

/// Parses a system file.
///
/// Declarations come first: `variable_group` and `affine_group` lists, and
/// `homogenizing v;` marking a coordinate introduced by homogenization. Then
/// `constant c = expr;` and `name = expr;` lines. `#` starts a comment.
pub fn parse_system(text: &str) -> Result<PolynomialSystem, ParseError> {
    let toks = lex(text)?;
    let end = toks
        .last()
        .map(|t| (t.line, t.column + 1))
        .unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, end };
    let mut groups: Vec<VariableGroup> = Vec::new();
    let mut scope: Option<Scope> = None;
    let mut polys = Vec::new();
    let mut names: Vec<String> = Vec::new();

    while p.peek().is_some() {
        let (word, line, column) = p.ident()?;
        match word.as_str() {
            "variable_group" | "affine_group" => {
                if scope.is_some() {
                    return Err(syntax(
                        line,
                        column,
                        "variable groups must be declared before definitions",
                    ));
                }
                let mut list = Vec::new();
                if p.peek().is_some_and(|t| t.tok == Tok::Sym(';')) {
                    return Err(ParseError::EmptyGroup { line, column });
                }
                loop {
                    let (v, l, c) = p.ident()?;
                    if KEYWORDS.contains(&v.as_str()) {
                        return Err(syntax(l, c, format!("`{v}` is reserved")));
                    }
                    if list.contains(&v) || groups.iter().any(|g| g.names.contains(&v)) {
                        return Err(ParseError::Duplicate(v));
                    }
                    list.push(v);
                    if !p.eat(',') {
                        break;
                    }
                }
                p.expect(';')?;
                groups.push(if word == "affine_group" {
                    VariableGroup::affine(list)
                } else {
                    VariableGroup::homogeneous(list)
                });
            }
            "homogenizing" => {
                if scope.is_some() {
                    return Err(syntax(
                        line,
                        column,
                        "homogenizing must precede definitions",
                    ));
                }
                let (v, l, c) = p.ident()?;
                let found = groups
                    .iter_mut()
                    .find_map(|g| g.names.iter().position(|n| n == &v).map(|j| (g, j)));
                match found {
                    Some((g, j)) if !g.affine && g.homogenizer.is_none() => g.homogenizer = Some(j),
                    Some(_) => {
                        return Err(syntax(
                            l,
                            c,
                            format!("`{v}` cannot be a homogenizing coordinate"),
                        ))
                    }
                    None => {
                        return Err(ParseError::Undeclared {
                            name: v,
                            line: l,
                            column: c,
                        })
                    }
                }
                p.expect(';')?;
            }
            _ => {
                if scope.is_none() {
                    if groups.is_empty() {
                        return Err(syntax(line, column, "no variable group declared"));
                    }
                    let structure = Arc::new(VariableStructure::new(groups.clone())?);
                    scope = Some(Scope {
                        structure,
                        constants: HashMap::new(),
                    });
                }
                let sc = scope.as_mut().unwrap();
                if word == "constant" {
                    let (c, l, col) = p.ident()?;
                    if KEYWORDS.contains(&c.as_str()) || sc.structure.index_of(&c).is_some() {
                        return Err(syntax(l, col, format!("`{c}` cannot name a constant")));
                    }
                    if sc.constants.contains_key(&c) {
                        return Err(ParseError::Duplicate(c));
                    }
                    p.expect('=')?;
                    let (el, ec) = p.here();
                    let e = sc.expr(&mut p)?;
                    let v = if e.is_zero() {
                        Complex64::new(0.0, 0.0)
                    } else {
                        constant_value(&e)
                            .ok_or_else(|| syntax(el, ec, "constant must not involve variables"))?
                    };
                    p.expect(';')?;
                    sc.constants.insert(c, v);
                } else {
                    if KEYWORDS.contains(&word.as_str()) || sc.structure.index_of(&word).is_some() {
                        return Err(syntax(
                            line,
                            column,
                            format!("`{word}` cannot name a polynomial"),
                        ));
                    }
                    if names.contains(&word) || sc.constants.contains_key(&word) {
                        return Err(ParseError::Duplicate(word));
                    }
                    p.expect('=')?;
                    let e = sc.expr(&mut p)?;
                    p.expect(';')?;
                    names.push(word);
                    polys.push(e);
                }
            }
        }
    }
    let structure = match scope {
        Some(s) => s.structure,
        None => {
            if groups.is_empty() {
                let (l, c) = p.here();
                return Err(syntax(l, c, "no variable group declared"));
            }
            Arc::new(VariableStructure::new(groups)?)
        }
    };
    Ok(PolynomialSystem::with_names(structure, polys, names)?)
}

/// Shortest decimal that parses back to the same `f64`.
fn real(v: f64) -> String {
    format!("{v:e}")
}

fn coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        real(c.re)
    } else {
        format!("({} + {}*I)", real(c.re), real(c.im))
    }
}

fn monomial(m: &Monomial, s: &VariableStructure) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(s.name(v).to_string()),
            _ => parts.push(format!("{}^{e}", s.name(v))),
        }
    }
    parts.join("*")
}

/// Prints `sys` in the format read by [`parse_system`].
pub fn print_system(sys: &PolynomialSystem) -> String {
    let s = sys.structure();
    let mut out = String::new();
    for g in s.groups() {
        let kw = if g.affine {
            "affine_group"
        } else {
            "variable_group"
        };
        out.push_str(&format!("{kw} {};\n", g.names.join(", ")));
    }
    for g in s.groups() {
        if let Some(h) = g.homogenizer {
            out.push_str(&format!("homogenizing {};\n", g.names[h]));
        }
    }
    for (name, p) in sys.names().iter().zip(sys.polys()) {
        let terms: Vec<String> = p
            .terms()
            .map(|(m, c)| {
                let mon = monomial(m, s);
                if mon.is_empty() {
                    coefficient(*c)
                } else {
                    format!("{}*{mon}", coefficient(*c))
                }
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        out.push_str(&format!("{name} = {body};\n"));
    }
    out
}
