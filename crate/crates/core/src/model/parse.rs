//! Line-oriented parser for equation files.
//!
//! ```text
//! # comment
//! a[x] = 2*a[x-1] + 4*b[x-1] + 1
//! b[x] = a[x-1] + 3*b[x-1] + 2*c[x-1] + 1
//! c[x] = 2*b[x-1] + 4*c[x-1] + 1
//! init: a = 0, b = 0, c = 0
//! ```
//!
//! Whitespace is ignored everywhere. Right-hand sides may only reference
//! `name[x-1]`; repeated references to one variable are summed.

use std::collections::HashMap;

use crate::error::ParseError;
use crate::exact::{Matrix, Rational};

use super::RecurrenceSystem;

struct Equation {
    name: String,
    terms: Vec<(Rational, String, usize)>,
    constant: Rational,
}

pub fn parse_system(text: &str) -> Result<RecurrenceSystem, ParseError> {
    let mut equations: Vec<Equation> = Vec::new();
    let mut inits: Vec<(usize, String, Rational)> = Vec::new();
    let mut first_init_line = None;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let compact: String = content.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            continue;
        }
        if let Some(rest) = compact.strip_prefix("init:") {
            first_init_line.get_or_insert(line);
            parse_init(line, rest, &mut inits)?;
            continue;
        }
        let eq = parse_equation(line, &compact)?;
        if equations.iter().any(|e| e.name == eq.name) {
            return Err(ParseError::DuplicateEquation {
                line,
                name: eq.name,
            });
        }
        equations.push(eq);
    }

    if equations.is_empty() {
        return Err(ParseError::Syntax {
            line: last_line,
            message: "no equations found".into(),
        });
    }

    let index: HashMap<&str, usize> = equations
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.as_str(), i))
        .collect();
    let n = equations.len();

    let mut undeclared: Vec<(usize, &str)> = equations
        .iter()
        .flat_map(|e| e.terms.iter())
        .filter(|(_, name, _)| !index.contains_key(name.as_str()))
        .map(|(_, name, line)| (*line, name.as_str()))
        .chain(
            inits
                .iter()
                .filter(|(_, name, _)| !index.contains_key(name.as_str()))
                .map(|(line, name, _)| (*line, name.as_str())),
        )
        .collect();
    undeclared.sort();
    if let Some((line, name)) = undeclared.first() {
        return Err(ParseError::UndeclaredVariable {
            line: *line,
            name: name.to_string(),
        });
    }

    let mut coefficients = Matrix::zeros(n, n);
    let mut affine = Vec::with_capacity(n);
    for (i, eq) in equations.iter().enumerate() {
        for (coeff, name, _) in &eq.terms {
            coefficients[(i, index[name.as_str()])] += coeff;
        }
        affine.push(eq.constant.clone());
    }

    let mut initial: Vec<Option<Rational>> = vec![None; n];
    for (line, name, value) in inits {
        let slot = &mut initial[index[name.as_str()]];
        if slot.is_some() {
            return Err(ParseError::DuplicateInit { line, name });
        }
        *slot = Some(value);
    }
    let initial = initial
        .into_iter()
        .zip(&equations)
        .map(|(v, eq)| {
            v.ok_or_else(|| ParseError::MissingInit {
                line: first_init_line.unwrap_or(last_line),
                name: eq.name.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let names = equations.into_iter().map(|e| e.name).collect();
    RecurrenceSystem::new(names, coefficients, affine, initial).map_err(|e| ParseError::Syntax {
        line: last_line,
        message: e.to_string(),
    })
}

fn parse_init(
    line: usize,
    rest: &str,
    out: &mut Vec<(usize, String, Rational)>,
) -> Result<(), ParseError> {
    if rest.is_empty() {
        return Err(ParseError::Syntax {
            line,
            message: "empty init list".into(),
        });
    }
    for item in rest.split(',') {
        let (name, value) = item.split_once('=').ok_or_else(|| ParseError::Syntax {
            line,
            message: format!("expected `name = value` in init list, found `{item}`"),
        })?;
        if !is_identifier(name) {
            return Err(ParseError::Syntax {
                line,
                message: format!("bad variable name `{name}`"),
            });
        }
        let value = value
            .parse::<Rational>()
            .map_err(|_| ParseError::MalformedRational {
                line,
                text: value.to_string(),
            })?;
        if out.iter().any(|(_, n, _)| n == name) {
            return Err(ParseError::DuplicateInit {
                line,
                name: name.to_string(),
            });
        }
        out.push((line, name.to_string(), value));
    }
    Ok(())
}

fn parse_equation(line: usize, s: &str) -> Result<Equation, ParseError> {
    let (lhs, rhs) = s.split_once('=').ok_or_else(|| ParseError::Syntax {
        line,
        message: "expected `name[x] = ...`".into(),
    })?;
    let mut cursor = Cursor {
        line,
        chars: lhs.as_bytes(),
        pos: 0,
    };
    let (name, idx) = cursor.reference()?;
    if !cursor.done() {
        return Err(cursor.unexpected());
    }
    if idx != "x" {
        return Err(ParseError::BadIndex {
            line,
            name,
            index: idx,
            expected: "x",
        });
    }

    let mut eq = Equation {
        name,
        terms: Vec::new(),
        constant: Rational::zero(),
    };
    let mut cursor = Cursor {
        line,
        chars: rhs.as_bytes(),
        pos: 0,
    };
    if cursor.done() {
        return Err(ParseError::Syntax {
            line,
            message: "empty right-hand side".into(),
        });
    }
    let mut sign = match cursor.peek() {
        Some(b'+') => {
            cursor.pos += 1;
            Rational::one()
        }
        Some(b'-') if !cursor.chars.get(1).is_some_and(|c| c.is_ascii_digit()) => {
            cursor.pos += 1;
            Rational::from(-1)
        }
        _ => Rational::one(),
    };
    loop {
        cursor.term(&sign, &mut eq)?;
        match cursor.peek() {
            None => break,
            Some(b'+') => sign = Rational::one(),
            Some(b'-') => sign = Rational::from(-1),
            Some(_) => return Err(cursor.unexpected()),
        }
        cursor.pos += 1;
        if cursor.done() {
            return Err(ParseError::Syntax {
                line,
                message: "dangling operator".into(),
            });
        }
    }
    Ok(eq)
}

struct Cursor<'a> {
    line: usize,
    chars: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.chars.get(self.pos).copied()
    }

    fn done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn unexpected(&self) -> ParseError {
        let rest = String::from_utf8_lossy(&self.chars[self.pos..]);
        ParseError::Syntax {
            line: self.line,
            message: format!("unexpected input `{rest}`"),
        }
    }

    fn identifier(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            let ok =
                c == b'_' || c.is_ascii_alphabetic() || (self.pos > start && c.is_ascii_digit());
            if !ok {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        Ok(String::from_utf8_lossy(&self.chars[start..self.pos]).into_owned())
    }

    /// `name[index]`, returning the raw index text.
    fn reference(&mut self) -> Result<(String, String), ParseError> {
        let name = self.identifier()?;
        if self.peek() != Some(b'[') {
            return Err(ParseError::Syntax {
                line: self.line,
                message: format!("expected `[` after `{name}`"),
            });
        }
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|c| c != b']') {
            self.pos += 1;
        }
        if self.done() {
            return Err(ParseError::Syntax {
                line: self.line,
                message: "unclosed `[`".into(),
            });
        }
        let index = String::from_utf8_lossy(&self.chars[start..self.pos]).into_owned();
        self.pos += 1;
        Ok((name, index))
    }

    fn lagged(&mut self) -> Result<String, ParseError> {
        let (name, index) = self.reference()?;
        if index != "x-1" {
            return Err(ParseError::BadIndex {
                line: self.line,
                name,
                index,
                expected: "x-1",
            });
        }
        Ok(name)
    }

    fn term(&mut self, sign: &Rational, eq: &mut Equation) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'/' => {
                let start = self.pos;
                if c == b'-' {
                    self.pos += 1;
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'/') {
                    self.pos += 1;
                }
                let text = String::from_utf8_lossy(&self.chars[start..self.pos]).into_owned();
                let value =
                    text.parse::<Rational>()
                        .map_err(|_| ParseError::MalformedRational {
                            line: self.line,
                            text,
                        })?;
                let value = sign * &value;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let name = self.lagged()?;
                    eq.terms.push((value, name, self.line));
                } else {
                    eq.constant += value;
                }
                Ok(())
            }
            Some(c) if c == b'_' || c.is_ascii_alphabetic() => {
                let name = self.lagged()?;
                eq.terms.push((sign.clone(), name, self.line));
                Ok(())
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c == '_' || c.is_ascii_alphabetic())
        && chars.all(|c| c == '_' || c.is_ascii_alphanumeric())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::fixtures;

    fn ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_ints(rows).unwrap()
    }

    #[test]
    fn golden_system_32() {
        let sys = parse_system(fixtures::SYSTEM_32).unwrap();
        assert_eq!(
            sys.coefficients(),
            &ints(&[&[2, 4, 0], &[1, 3, 2], &[0, 2, 4]])
        );
        assert_eq!(
            sys.affine(),
            &[Rational::one(), Rational::one(), Rational::one()]
        );
        assert_eq!(sys.names(), &["a", "b", "c"]);
    }

    #[test]
    fn golden_system_33() {
        let sys = parse_system(fixtures::SYSTEM_33).unwrap();
        assert_eq!(
            sys.coefficients().row(0),
            &[q(37, 6), q(-1, 6), Rational::zero()]
        );
        assert_eq!(
            sys.coefficients().row(1),
            &[q(15, 2), q(-7, 2), Rational::from(2)]
        );
        assert_eq!(
            sys.coefficients().row(2),
            &[q(16, 3), q(-10, 3), Rational::from(4)]
        );
        assert_eq!(sys.affine(), vec![Rational::from(2); 3].as_slice());
        assert_eq!(
            sys.initial(),
            &[Rational::from(41), Rational::from(47), Rational::from(60)]
        );
    }

    #[test]
    fn whitespace_order_and_collection() {
        let text = "b [ x ] = - a[x-1] + 1/2 * b[x-1]\n\n  a[x]=a[x-1]+a[x-1]-3 + 1\ninit: b=1\ninit: a=-2/4";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.names(), &["b", "a"]);
        assert_eq!(sys.coefficients().row(0), &[q(1, 2), Rational::from(-1)]);
        assert_eq!(
            sys.coefficients().row(1),
            &[Rational::zero(), Rational::from(2)]
        );
        assert_eq!(sys.affine(), &[Rational::zero(), Rational::from(-2)]);
        assert_eq!(sys.initial(), &[Rational::one(), q(-1, 2)]);
    }

    #[test]
    fn leading_plus_and_negative_literal() {
        let sys = parse_system("a[x] = +2 - -3*a[x-1]\ninit: a = 0").unwrap();
        assert_eq!(sys.alpha(0, 0), &Rational::from(3));
        assert_eq!(sys.affine()[0], Rational::from(2));
    }

    #[test]
    fn undeclared_variable() {
        let err = parse_system("a[x] = d[x-1]\ninit: a = 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredVariable {
                line: 1,
                name: "d".into()
            }
        );
        let err = parse_system("a[x] = a[x-1]\ninit: a = 1, z = 2").unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredVariable {
                line: 2,
                name: "z".into()
            }
        );
    }

    #[test]
    fn bad_lags() {
        let err = parse_system("a[x] = a[x-2]\ninit: a = 1").unwrap_err();
        assert!(matches!(
            err,
            ParseError::BadIndex {
                line: 1,
                expected: "x-1",
                ..
            }
        ));
        let err = parse_system("# c\na[x+1] = a[x-1]\ninit: a = 1").unwrap_err();
        assert!(matches!(
            err,
            ParseError::BadIndex {
                line: 2,
                expected: "x",
                ..
            }
        ));
        let err = parse_system("a[x] = 2*a[x]\ninit: a = 1").unwrap_err();
        assert!(matches!(err, ParseError::BadIndex { .. }));
    }

    #[test]
    fn duplicate_equation() {
        let err = parse_system("a[x] = a[x-1]\na[x] = 2*a[x-1]\ninit: a = 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateEquation {
                line: 2,
                name: "a".into()
            }
        );
    }

    #[test]
    fn missing_init() {
        let err = parse_system("a[x] = a[x-1]\nb[x] = b[x-1]\n").unwrap_err();
        assert!(matches!(err, ParseError::MissingInit { line: 2, .. }));
        let err = parse_system("a[x] = a[x-1]\ninit: a = 1\nb[x] = b[x-1]").unwrap_err();
        assert_eq!(
            err,
            ParseError::MissingInit {
                line: 2,
                name: "b".into()
            }
        );
    }

    #[test]
    fn malformed_rationals() {
        let err = parse_system("a[x] = 1/0*a[x-1]\ninit: a = 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::MalformedRational {
                line: 1,
                text: "1/0".into()
            }
        );
        let err = parse_system("a[x] = a[x-1]\ninit: a = 3/").unwrap_err();
        assert!(matches!(err, ParseError::MalformedRational { line: 2, .. }));
        let err = parse_system("a[x] = 1//2\ninit: a = 1").unwrap_err();
        assert!(matches!(err, ParseError::MalformedRational { .. }));
    }

    #[test]
    fn syntax_errors() {
        for text in [
            "",
            "a[x]\ninit: a=1",
            "a[x] = \ninit: a=1",
            "a[x] = a[x-1] +\ninit: a=1",
            "a[x] = 2a[x-1]\ninit: a=1",
        ] {
            assert!(
                matches!(parse_system(text), Err(ParseError::Syntax { .. })),
                "{text:?}"
            );
        }
        assert!(matches!(
            parse_system("a[x] = a[x-1]\ninit: a = 1, a = 2"),
            Err(ParseError::DuplicateInit { .. })
        ));
    }
}
