use num_traits::{One, Zero};

use super::{parse_rational, Alphabet, ArithError, MPoly, Monomial, Rational};

/// Parses the text form of a rational polynomial, e.g. `1 - c1*z + 3/2*c2*z^2`.
///
/// Accepts `+ - * ^`, parentheses and rational literals `p/q`. The alphabet is
/// the set of variables that occur, in natural order (`t2 < t10`).
pub fn parse_qpoly(s: &str) -> Result<MPoly<Rational>, ArithError> {
    let tokens = lex(s)?;
    let mut names: Vec<String> = tokens
        .iter()
        .filter_map(|t| match t {
            Tok::Ident(n) => Some(n.clone()),
            _ => None,
        })
        .collect();
    names.sort_by_key(|a| natural_key(a));
    names.dedup();
    let vars = Alphabet::new(names);
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ArithError::Parse(format!("unexpected trailing input in `{s}`")));
    }
    Ok(out)
}

fn natural_key(s: &str) -> (String, u64, String) {
    let digits = s.len() - s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, tail) = s.split_at(s.len() - digits);
    (head.to_string(), tail.parse().unwrap_or(0), s.to_string())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ArithError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ArithError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    vars: Alphabet,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly<Rational>, ArithError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add_ref(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub_ref(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<Rational>, ArithError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul_ref(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly<Rational>, ArithError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg_ref());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .parse()
                        .map_err(|_| ArithError::Parse(format!("bad exponent `{n}`")))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(ArithError::Parse("expected exponent after `^`".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly<Rational>, ArithError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut text = n;
                if self.peek() == Some(&Tok::Op('/')) {
                    if let Some(Tok::Num(d)) = self.tokens.get(self.pos + 1).cloned() {
                        self.pos += 2;
                        text = format!("{text}/{d}");
                    }
                }
                let q = parse_rational(&text)?;
                let mut p = MPoly::zero(&self.vars);
                if !q.is_zero() {
                    p.add_term(Monomial::one(self.vars.len()), q);
                }
                Ok(p)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                MPoly::monomial(&self.vars, &[(name.as_str(), 1)], Rational::one())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(ArithError::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            other => Err(ArithError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn round_trips_canonical_text() {
        for s in ["1 - c1*z + c2*z^2", "t1^2 - t2^2", "-3/4 + 1/2*x", "0", "t2 - t10"] {
            assert_eq!(parse_qpoly(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_qpoly("(x + 1)^2 - 2*(x - 1/2)").unwrap();
        assert_eq!(p, parse_qpoly("x^2 + 2").unwrap());
        assert_eq!(p.coefficient(&[]).unwrap(), ratio(2, 1));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_qpoly("x + ").is_err());
        assert!(parse_qpoly("x $ y").is_err());
        assert!(parse_qpoly("1/0").is_err());
    }
}
