use std::fmt;

use num_complex::Complex;

use super::ast::{BinOp, Expr};
use super::builtins;

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Complex<f64>),
    Name(String),
    Plus,
    Minus,
    Star,
    Quote,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_) => "number".into(),
            Tok::Name(n) => format!("name '{n}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Quote => "'''".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| ParseError {
        line,
        col,
        message,
        expected: Vec::new(),
    };
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '\'' => Some(Tok::Quote),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let x: f64 = text
                .parse()
                .map_err(|_| err(l0, c0, format!("malformed number '{text}'")))?;
            let imag = i < chars.len()
                && chars[i] == 'i'
                && !chars
                    .get(i + 1)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_');
            if imag {
                i += 1;
            }
            col += i - start;
            let z = if imag {
                Complex::new(0.0, x)
            } else {
                Complex::new(x, 0.0)
            };
            out.push(Spanned {
                tok: Tok::Num(z),
                line: l0,
                col: c0,
            });
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Name(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character '{ch}'")));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek();
        let list = match expected.len() {
            0 => String::new(),
            1 => expected[0].to_string(),
            n => format!("{} or {}", expected[..n - 1].join(", "), expected[n - 1]),
        };
        Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("expected {list}, found {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::bin(BinOp::Mul, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let mut e = self.atom()?;
        while self.peek().tok == Tok::Quote {
            self.bump();
            e = Expr::Dagger(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(z) => {
                self.bump();
                Ok(Expr::Num(z))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return self.fail(&["')'", "operator"]);
                }
                self.bump();
                Ok(e)
            }
            Tok::Name(name) => {
                self.bump();
                if self.peek().tok != Tok::LParen {
                    return Ok(Expr::Sym(name));
                }
                let Some(spec) = builtins::lookup(&name) else {
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!("unknown builtin '{name}'"),
                        expected: Vec::new(),
                    });
                };
                self.bump();
                let mut args = Vec::new();
                if self.peek().tok != Tok::RParen {
                    loop {
                        args.push(self.expr()?);
                        match self.peek().tok {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => break,
                            _ => return self.fail(&["')'", "','"]),
                        }
                    }
                }
                self.bump();
                if !spec.accepts(args.len()) {
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!(
                            "builtin '{name}' takes {}, got {} argument(s)",
                            spec.arity_text(),
                            args.len()
                        ),
                        expected: Vec::new(),
                    });
                }
                Ok(Expr::Call { name, args })
            }
            _ => self.fail(&["number", "name", "'('", "'-'"]),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    if toks.len() == 1 {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "empty expression".into(),
            expected: vec!["expression".into()],
        });
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}
