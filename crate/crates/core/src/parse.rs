//! Recursive-descent parser for the shared expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      -- '/' only in field-element context
//! factor := atom ('^' nat)?
//! atom   := rational | name | name '@' nat | '(' expr ')' | '-' atom
//! ```
//!
//! `yj` parses as `yj@0`. Rationals are `int` or `int/nat` (recognized at
//! the atom level, so `1/2` is a literal in both contexts). Whitespace is
//! insignificant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::dfield::FieldElement;
use crate::error::{Error, Result};
use crate::sigma::{SigmaPolynomial, VarRef};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    At,
    LParen,
    RParen,
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '@' => {
                toks.push((Tok::At, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                toks.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Name(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::SyntaxError {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    toks.push((Tok::Eof, bytes.len()));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
}

#[derive(Clone, Debug)]
enum Ast {
    Rat(BigRational),
    Name(String),
    Transform(String, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

fn parse_expr(lx: &mut Lexer) -> Result<Ast> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Tok::Plus => {
                lx.next();
                acc = Ast::Add(Box::new(acc), Box::new(parse_term(lx)?));
            }
            Tok::Minus => {
                lx.next();
                acc = Ast::Sub(Box::new(acc), Box::new(parse_term(lx)?));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Ast> {
    let mut acc = parse_factor(lx)?;
    loop {
        match lx.peek() {
            Tok::Star => {
                lx.next();
                acc = Ast::Mul(Box::new(acc), Box::new(parse_factor(lx)?));
            }
            Tok::Slash => {
                lx.next();
                acc = Ast::Div(Box::new(acc), Box::new(parse_factor(lx)?));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<Ast> {
    let atom = parse_atom(lx)?;
    if *lx.peek() == Tok::Caret {
        lx.next();
        let pos = lx.here();
        match lx.next().0 {
            Tok::Int(n) => {
                let e = u32::try_from(&n).map_err(|_| Error::SyntaxError {
                    pos,
                    msg: "exponent too large".into(),
                })?;
                Ok(Ast::Pow(Box::new(atom), e))
            }
            Tok::Minus => Err(Error::NegativeExponent(pos)),
            _ => Err(Error::SyntaxError {
                pos,
                msg: "expected a nonnegative integer exponent".into(),
            }),
        }
    } else {
        Ok(atom)
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Ast> {
    let pos = lx.here();
    match lx.next().0 {
        Tok::Int(n) => {
            // rational literal int/nat, recognized when a bare integer follows
            if *lx.peek() == Tok::Slash {
                if let Tok::Int(d) = lx.peek2() {
                    let d = d.clone();
                    lx.next();
                    let dpos = lx.here();
                    lx.next();
                    if d.is_zero() {
                        return Err(Error::SyntaxError {
                            pos: dpos,
                            msg: "zero denominator in rational literal".into(),
                        });
                    }
                    return Ok(Ast::Rat(BigRational::new(n, d)));
                }
            }
            Ok(Ast::Rat(BigRational::from_integer(n)))
        }
        Tok::Name(name) => {
            if *lx.peek() == Tok::At {
                lx.next();
                let opos = lx.here();
                match lx.next().0 {
                    Tok::Int(k) => {
                        let order = usize::try_from(&k).map_err(|_| Error::SyntaxError {
                            pos: opos,
                            msg: "transform order too large".into(),
                        })?;
                        Ok(Ast::Transform(name, order))
                    }
                    _ => Err(Error::SyntaxError {
                        pos: opos,
                        msg: "expected a transform order after `@`".into(),
                    }),
                }
            } else {
                Ok(Ast::Name(name))
            }
        }
        // unary minus negates the whole factor, exponent included, so the
        // printer's `-y1^2` reads back as -(y1^2)
        Tok::Minus => Ok(Ast::Neg(Box::new(parse_factor(lx)?))),
        Tok::LParen => {
            let inner = parse_expr(lx)?;
            let pos = lx.here();
            match lx.next().0 {
                Tok::RParen => Ok(inner),
                _ => Err(Error::SyntaxError {
                    pos,
                    msg: "expected `)`".into(),
                }),
            }
        }
        t => Err(Error::SyntaxError {
            pos,
            msg: format!("unexpected token {t:?}"),
        }),
    }
}

fn parse_full(text: &str) -> Result<Ast> {
    let mut lx = lex(text)?;
    let ast = parse_expr(&mut lx)?;
    if *lx.peek() != Tok::Eof {
        return Err(Error::SyntaxError {
            pos: lx.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(ast)
}

/// Parse an equation over system variables `var_names` with coefficients in
/// the field generated by `gen_names`. Division of non-literals is
/// rejected.
pub fn parse_equation(
    text: &str,
    var_names: &[String],
    gen_names: &[String],
) -> Result<SigmaPolynomial> {
    let ast = parse_full(text)?;
    eval_equation(&ast, var_names, gen_names)
}

/// Parse a field element over the generators `gen_names`; division allowed.
pub fn parse_field_element(text: &str, gen_names: &[String]) -> Result<FieldElement> {
    let ast = parse_full(text)?;
    eval_field(&ast, gen_names)
}

fn eval_equation(ast: &Ast, var_names: &[String], gen_names: &[String]) -> Result<SigmaPolynomial> {
    let g = gen_names.len();
    Ok(match ast {
        Ast::Rat(r) => SigmaPolynomial::constant(FieldElement::constant(g, r.clone())),
        Ast::Name(name) => {
            if let Some(j) = var_names.iter().position(|v| v == name) {
                SigmaPolynomial::var(VarRef::new(j, 0), g)
            } else if let Some(i) = gen_names.iter().position(|v| v == name) {
                SigmaPolynomial::constant(FieldElement::generator(g, i))
            } else {
                return Err(Error::UnknownIdentifier(name.clone()));
            }
        }
        Ast::Transform(name, order) => {
            if let Some(j) = var_names.iter().position(|v| v == name) {
                SigmaPolynomial::var(VarRef::new(j, *order), g)
            } else if gen_names.iter().any(|v| v == name) {
                return Err(Error::MalformedExpression(format!(
                    "`@` applies to system variables, not to the field generator `{name}`"
                )));
            } else {
                return Err(Error::UnknownIdentifier(name.clone()));
            }
        }
        Ast::Neg(a) => eval_equation(a, var_names, gen_names)?.neg(),
        Ast::Add(a, b) => {
            eval_equation(a, var_names, gen_names)?.add(&eval_equation(b, var_names, gen_names)?)
        }
        Ast::Sub(a, b) => {
            eval_equation(a, var_names, gen_names)?.sub(&eval_equation(b, var_names, gen_names)?)
        }
        Ast::Mul(a, b) => {
            eval_equation(a, var_names, gen_names)?.mul(&eval_equation(b, var_names, gen_names)?)
        }
        Ast::Div(..) => return Err(Error::DivisionInEquation),
        Ast::Pow(a, e) => eval_equation(a, var_names, gen_names)?.pow(*e),
    })
}

fn eval_field(ast: &Ast, gen_names: &[String]) -> Result<FieldElement> {
    let g = gen_names.len();
    Ok(match ast {
        Ast::Rat(r) => FieldElement::constant(g, r.clone()),
        Ast::Name(name) => match gen_names.iter().position(|v| v == name) {
            Some(i) => FieldElement::generator(g, i),
            None => return Err(Error::UnknownIdentifier(name.clone())),
        },
        Ast::Transform(name, ..) => {
            return Err(Error::MalformedExpression(format!(
                "`{name}@..` is not a field element; transforms live in equations"
            )))
        }
        Ast::Neg(a) => eval_field(a, gen_names)?.neg(),
        Ast::Add(a, b) => eval_field(a, gen_names)?.add(&eval_field(b, gen_names)?),
        Ast::Sub(a, b) => eval_field(a, gen_names)?.sub(&eval_field(b, gen_names)?),
        Ast::Mul(a, b) => eval_field(a, gen_names)?.mul(&eval_field(b, gen_names)?),
        Ast::Div(a, b) => eval_field(a, gen_names)?.div(&eval_field(b, gen_names)?)?,
        Ast::Pow(a, e) => eval_field(a, gen_names)?.pow(*e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_swap_system_equations() {
        let vn = names(&["y1", "y2"]);
        let p = parse_equation("y1@2 - y1", &vn, &[]).unwrap();
        assert_eq!(p.display(&vn, &[]), "y1@2 - y1");
        let p = parse_equation("y1*y2 - 1", &vn, &[]).unwrap();
        assert_eq!(p.display(&vn, &[]), "y1*y2 - 1");
    }

    #[test]
    fn division_in_equation_rejected() {
        let vn = names(&["y1", "y2"]);
        assert!(matches!(
            parse_equation("y1/(y2)", &vn, &[]),
            Err(Error::DivisionInEquation)
        ));
        // but rational literals are fine
        let p = parse_equation("1/2*y1", &vn, &[]).unwrap();
        assert_eq!(p.display(&vn, &[]), "1/2*y1");
    }

    #[test]
    fn field_element_division() {
        let gn = names(&["t"]);
        let x = parse_field_element("1/t", &gn).unwrap();
        assert_eq!(x.display(&gn), "1/t");
        let x = parse_field_element("t/(t+1)", &gn).unwrap();
        assert_eq!(x.display(&gn), "t/(t + 1)");
        let x = parse_field_element("(t^2 - 1)/(t - 1)", &gn).unwrap();
        assert_eq!(x.display(&gn), "t + 1");
    }

    #[test]
    fn error_positions_and_kinds() {
        let vn = names(&["y1"]);
        assert!(matches!(
            parse_equation("y1 + z", &vn, &[]),
            Err(Error::UnknownIdentifier(z)) if z == "z"
        ));
        assert!(matches!(
            parse_equation("y1^-2", &vn, &[]),
            Err(Error::NegativeExponent(_))
        ));
        assert!(matches!(
            parse_equation("y1 + ", &vn, &[]),
            Err(Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_equation("y1 y1", &vn, &[]),
            Err(Error::SyntaxError { .. })
        ));
    }

    #[test]
    fn mixed_coefficients() {
        let vn = names(&["y1"]);
        let gn = names(&["t"]);
        let p = parse_equation("t*y1@1 - 2*y1", &vn, &gn).unwrap();
        assert_eq!(p.display(&vn, &gn), "t*y1@1 - 2*y1");
        // negative rational and parens
        let p = parse_equation("-(3/4)*y1 + 1", &vn, &gn).unwrap();
        assert_eq!(p.display(&vn, &gn), "-3/4*y1 + 1");
    }

    #[test]
    fn unary_minus_and_pow() {
        let vn = names(&["y1"]);
        let p = parse_equation("-y1^2", &vn, &[]).unwrap();
        assert_eq!(p.display(&vn, &[]), "-y1^2");
        let p = parse_equation("(-y1)^2", &vn, &[]).unwrap();
        assert_eq!(p.display(&vn, &[]), "y1^2");
        let p = parse_equation("2^3", &vn, &[]).unwrap();
        assert_eq!(p.display(&vn, &[]), "8");
    }
}
