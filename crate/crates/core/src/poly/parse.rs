//! Reader for the system file format:
//!
//! ```text
//! # comment
//! vars x y
//! p: x^2 + y^2 - 1
//! q: x - y
//! ```

use num_bigint::BigInt;

use super::{MPoly, PolyError, PolySystem};

pub fn parse_system(text: &str) -> Result<PolySystem, PolyError> {
    let mut vars: Option<Vec<String>> = None;
    let mut names = Vec::new();
    let mut polys = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        match &vars {
            None => vars = Some(parse_vars(line, line_no)?),
            Some(vs) => {
                let (name, expr, offset) = split_named(line, line_no)?;
                let mut p = Parser {
                    chars: expr.chars().collect(),
                    pos: 0,
                    line: line_no,
                    offset,
                    vars: vs,
                };
                let poly = p.parse_expr()?;
                p.skip_ws();
                if p.pos < p.chars.len() {
                    return Err(p.error("unexpected trailing input"));
                }
                names.push(name);
                polys.push(poly);
            }
        }
    }

    let vars = vars.ok_or(PolyError::Syntax {
        line: 1,
        column: 1,
        message: "missing `vars` declaration".into(),
    })?;
    PolySystem::new(vars, names, polys)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_ident(s: &str) -> bool {
    let mut it = s.chars();
    it.next().is_some_and(is_ident_start) && it.all(is_ident_char)
}

fn parse_vars(line: &str, line_no: usize) -> Result<Vec<String>, PolyError> {
    let err = |column: usize, message: &str| PolyError::Syntax {
        line: line_no,
        column,
        message: message.into(),
    };
    let start = line.len() - line.trim_start().len();
    let mut words = line.split_whitespace();
    if words.next() != Some("vars") {
        return Err(err(start + 1, "expected `vars` declaration"));
    }
    let mut out: Vec<String> = Vec::new();
    for w in words {
        let col = line.find(w).map_or(1, |c| c + 1);
        if !valid_ident(w) || w == "vars" {
            return Err(err(col, "invalid variable name"));
        }
        if out.iter().any(|v| v == w) {
            return Err(err(col, "duplicate variable name"));
        }
        out.push(w.to_string());
    }
    if out.is_empty() {
        return Err(err(line.trim_end().len() + 1, "no variables declared"));
    }
    Ok(out)
}

fn split_named(line: &str, line_no: usize) -> Result<(String, &str, usize), PolyError> {
    let Some(colon) = line.find(':') else {
        return Err(PolyError::Syntax {
            line: line_no,
            column: 1,
            message: "expected `<name>: <expression>`".into(),
        });
    };
    let name = line[..colon].trim();
    if !valid_ident(name) {
        return Err(PolyError::Syntax {
            line: line_no,
            column: line.len() - line.trim_start().len() + 1,
            message: "invalid polynomial name".into(),
        });
    }
    let offset = line[..=colon].chars().count();
    Ok((name.to_string(), &line[colon + 1..], offset))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    offset: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn column(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn error(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.parse_term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.parse_term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<MPoly, PolyError> {
        let negate = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.parse_factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = &acc * &f;
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn parse_factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.parse_base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let n: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && f(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn parse_base(&mut self) -> Result<MPoly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.parse_expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let v: BigInt = digits.parse().expect("digit string");
                Ok(MPoly::constant(self.nvars(), v))
            }
            Some(c) if is_ident_start(c) => {
                let column = self.column();
                let name = self.take_while(is_ident_char);
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MPoly::var(self.nvars(), i)),
                    None => Err(PolyError::UnknownVariable {
                        name,
                        line: self.line,
                        column,
                    }),
                }
            }
            Some(_) => Err(self.error("expected an integer, a variable or `(`")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn univariate_with_derivatives() {
        let s = parse_system("vars x\np: x^2 - 2").unwrap();
        assert_eq!(s.dim(), 1);
        let x = MPoly::var(1, 0);
        assert_eq!(s.jacobian()[0][0], &MPoly::constant(1, 2.into()) * &x);
        assert_eq!(s.hessians()[0][0][0], MPoly::constant(1, 2.into()));
    }

    #[test]
    fn circle_and_line() {
        let s = parse_system("vars x y\np: x^2+y^2-1\nq: x - y").unwrap();
        let (x, y) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let two = MPoly::constant(2, 2.into());
        let one = MPoly::constant(2, 1.into());
        assert_eq!(s.jacobian()[0], vec![&two * &x, &two * &y]);
        assert_eq!(s.jacobian()[1], vec![one.clone(), -&one]);
    }

    #[test]
    fn non_square_rejected() {
        assert_eq!(
            parse_system("vars x y\np: x").unwrap_err(),
            PolyError::NonSquare { polys: 1, vars: 2 }
        );
    }

    #[test]
    fn unknown_variable_position() {
        let err = parse_system("vars x\np: x + zz").unwrap_err();
        assert_eq!(
            err,
            PolyError::UnknownVariable {
                name: "zz".into(),
                line: 2,
                column: 8
            }
        );
    }

    #[test]
    fn syntax_error_position() {
        match parse_system("vars x\n\np: (x + 1").unwrap_err() {
            PolyError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 10)),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse_system("p: x"), Err(PolyError::Syntax { line: 1, .. })));
        assert!(matches!(parse_system("vars x\np: 2 x"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_system("vars x\np: x^"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_system(""), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_system("vars x x\np: x"), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn comments_big_integers_and_nesting() {
        let text = "# clustered roots\nvars x   # one unknown\nf: (1152921504606846976*x - 2^60) * (2^60*x - 2^60 - 1)\n";
        let s = parse_system(text).unwrap();
        let p = &s.polys()[0];
        assert_eq!(p.coefficient(&[2]), BigInt::one() << 120);
        assert_eq!(p.coefficient(&[0]), (BigInt::one() << 120) + (BigInt::one() << 60));
        let neg = parse_system("vars x\np: -x - -3").unwrap();
        assert_eq!(neg.polys()[0], &(-&MPoly::var(1, 0)) + &MPoly::constant(1, 3.into()));
    }
}
