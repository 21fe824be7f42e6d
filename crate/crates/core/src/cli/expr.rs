//! Recursive-descent parser for warping-function expressions in `x`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'x' | func '(' expr ')' | '(' expr ')'
//! func  := exp | log | sqrt | sin | cos
//! ```

use crate::chebyshev;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates at `x`, rejecting logarithms and roots of negative values
    /// and non-finite results.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, arg) => {
                let a = arg.eval(x)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Log if a <= 0.0 => {
                        return Err(Error::Evaluation(format!("log of {a} at x = {x}")));
                    }
                    Func::Log => a.ln(),
                    Func::Sqrt if a < 0.0 => {
                        return Err(Error::Evaluation(format!("sqrt of {a} at x = {x}")));
                    }
                    Func::Sqrt => a.sqrt(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("non-finite value at x = {x}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let value = text[start..i].parse::<f64>().map_err(|_| Error::Syntax {
                position: start,
                expected: "a number".into(),
            })?;
            tokens.push((start, Token::Num(value)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            tokens.push((start, Token::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            tokens.push((i, Token::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                position: i,
                expected: "an operator, operand or parenthesis".into(),
            });
        }
    }
    tokens.push((text.len(), Token::End));
    Ok(Lexer { tokens })
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

const OPERAND: &str = "a number, x, a function or '('";

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            position: self.offset(),
            expected: expected.into(),
        }
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        if *self.peek() == Token::Sym(sym) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&format!("'{sym}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Sym('+') => BinOp::Add,
                Token::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Sym('*') => BinOp::Mul,
                Token::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Token::Sym('-') {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Token::Sym('^') {
            self.advance();
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.advance() {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::Ident(name) if name == "x" => Ok(Expr::X),
            Token::Ident(name) => {
                let func = Func::from_name(&name).ok_or(Error::Syntax {
                    position: at,
                    expected: "x or one of exp, log, sqrt, sin, cos".into(),
                })?;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Token::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(Error::Syntax {
                position: at,
                expected: OPERAND.into(),
            }),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr> {
    let Lexer { tokens } = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(expr)
}

/// Parses `text`, samples it at `node_count` Lobatto nodes on `[0, 1]` and
/// returns the Chebyshev coefficients with the roundoff tail chopped.
pub fn parse_expression(text: &str, node_count: usize) -> Result<Vec<f64>> {
    let expr = parse(text)?;
    let values = chebyshev::lobatto_nodes(node_count)
        .into_iter()
        .map(|x| expr.eval(x))
        .collect::<Result<Vec<f64>>>()?;
    let mut coeffs = chebyshev::values_to_coeffs(&values);
    chebyshev::chop(&mut coeffs, 1e-14);
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(text: &str, x: f64) -> f64 {
        parse(text).unwrap().eval(x).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(at("1+2*3", 0.0), 7.0);
        assert_eq!(at("2^3^2", 0.0), 512.0);
        assert_eq!(at("-2^2", 0.0), -4.0);
        assert_eq!(at("2^-1", 0.0), 0.5);
        assert_eq!(at("8/4/2", 0.0), 1.0);
        assert_eq!(at("(1 - x) * 3", 0.5), 1.5);
        assert!((at("exp(log(2)) + sqrt(x) - sin(0) * cos(x)", 4.0) - 4.0).abs() < 1e-15);
        assert_eq!(at("1.5e2 + 2E-1", 0.0), 150.2);
    }

    #[test]
    fn constant_expression() {
        assert_eq!(parse_expression("1", 64).unwrap(), vec![1.0]);
    }

    #[test]
    fn quadratic_expression() {
        let c = parse_expression("(1+0.2*x)^2", 64).unwrap();
        assert!(c.len() <= 3);
        assert!((chebyshev::clenshaw(&c, 0.0) - 1.0).abs() < 1e-14);
        assert!((chebyshev::clenshaw(&c, 1.0) - 1.44).abs() < 1e-14);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("1+*x") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(1+x"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse("tan(x)"), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(parse("1 $ 2"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("x x"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { position: 0, .. })));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(parse_expression("log(x - 0.5)", 32), Err(Error::Evaluation(_))));
        assert!(matches!(parse_expression("sqrt(-1 - x)", 32), Err(Error::Evaluation(_))));
        assert!(matches!(parse_expression("1/x", 32), Err(Error::Evaluation(_))));
    }
}
