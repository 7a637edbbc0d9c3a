//! Function expressions: `MAJ3`, `XOR2`, `tt:3:0x17`, `f o g`,
//! `f o (g1, g2)`, `h^3`, `f[x3=0]`, `~f`, with parentheses for grouping.
//!
//! Precedence, tightest first: postfix `^d` and `[..]`, prefix `~`, then
//! `o` (right associative). `f o g` feeds every input of `f` its own copy of
//! `g`; `f o (g1, .., gk)` needs `k = arity(f)` and takes the inner blocks
//! left to right.

use std::fmt;

use crate::boolfn::{Assignment, BooleanFunction, Builtin, MAX_ARITY};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FunctionExpr {
    pub kind: ExprKind,
    /// Byte offset of the node in the source text.
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Builtin {
        kind: Builtin,
        arity: usize,
    },
    Literal(BooleanFunction),
    Compose {
        outer: Box<FunctionExpr>,
        inner: Vec<FunctionExpr>,
    },
    Power {
        base: Box<FunctionExpr>,
        d: usize,
    },
    Restrict {
        expr: Box<FunctionExpr>,
        assignment: Assignment,
    },
    Negate(Box<FunctionExpr>),
}

/// Positions are ignored: two expressions are equal when their trees are.
impl PartialEq for FunctionExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn mismatch(pos: usize, msg: String) -> Error {
    Error::ArityMismatch(format!("at offset {pos}: {msg}"))
}

impl FunctionExpr {
    /// Arity of the denoted function, checking every node.
    pub fn arity(&self) -> Result<usize> {
        let too_big = || Error::LimitExceeded(format!("at offset {}: arity overflows", self.pos));
        match &self.kind {
            ExprKind::Builtin { arity, .. } => Ok(*arity),
            ExprKind::Literal(f) => Ok(f.arity()),
            ExprKind::Compose { outer, inner } => {
                let a = outer.arity()?;
                if inner.len() == 1 {
                    a.checked_mul(inner[0].arity()?).ok_or_else(too_big)
                } else if inner.len() == a {
                    inner.iter().try_fold(0usize, |acc, g| Ok(acc + g.arity()?))
                } else {
                    Err(mismatch(
                        self.pos,
                        format!(
                            "outer function has arity {a} but {} inner functions are given",
                            inner.len()
                        ),
                    ))
                }
            }
            ExprKind::Power { base, d } => {
                let a = base.arity()?;
                u32::try_from(*d)
                    .ok()
                    .and_then(|d| a.checked_pow(d))
                    .ok_or_else(too_big)
            }
            ExprKind::Restrict { expr, assignment } => {
                let a = expr.arity()?;
                if let Some((&v, _)) = assignment.entries.iter().find(|(&v, _)| v == 0 || v > a) {
                    return Err(mismatch(
                        self.pos,
                        format!("x{v} is not a variable of an arity-{a} function"),
                    ));
                }
                Ok(a - assignment.len())
            }
            ExprKind::Negate(e) => e.arity(),
        }
    }

    /// Builds the truth table.
    pub fn eval(&self) -> Result<BooleanFunction> {
        let n = self.arity()?;
        if n > MAX_ARITY {
            return Err(Error::LimitExceeded(format!(
                "at offset {}: arity {n} exceeds the table cap {MAX_ARITY}",
                self.pos
            )));
        }
        match &self.kind {
            ExprKind::Builtin { kind, arity } => BooleanFunction::builtin(*kind, *arity),
            ExprKind::Literal(f) => Ok(f.clone()),
            ExprKind::Compose { outer, inner } => {
                let f = outer.eval()?;
                let gs = inner
                    .iter()
                    .map(FunctionExpr::eval)
                    .collect::<Result<Vec<_>>>()?;
                if gs.len() == 1 {
                    f.compose_with(&gs[0])
                } else {
                    f.compose(&gs)
                }
            }
            ExprKind::Power { base, d } => base.eval()?.power(*d),
            ExprKind::Restrict { expr, assignment } => expr.eval()?.restrict(assignment),
            ExprKind::Negate(e) => Ok(e.eval()?.negate()),
        }
    }

    fn is_compose(&self) -> bool {
        matches!(self.kind, ExprKind::Compose { .. })
    }

    fn needs_parens_as_postfix_base(&self) -> bool {
        matches!(self.kind, ExprKind::Compose { .. } | ExprKind::Negate(_))
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Builtin { kind, arity } => write!(f, "{kind}{arity}"),
            ExprKind::Literal(t) => write!(f, "{}", t.to_tt_literal()),
            ExprKind::Compose { outer, inner } => {
                if outer.is_compose() {
                    write!(f, "({outer})")?;
                } else {
                    write!(f, "{outer}")?;
                }
                if inner.len() == 1 {
                    write!(f, " o {}", inner[0])
                } else {
                    f.write_str(" o (")?;
                    for (i, g) in inner.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{g}")?;
                    }
                    f.write_str(")")
                }
            }
            ExprKind::Power { base, d } => {
                if base.needs_parens_as_postfix_base() {
                    write!(f, "({base})^{d}")
                } else {
                    write!(f, "{base}^{d}")
                }
            }
            ExprKind::Restrict { expr, assignment } => {
                if expr.needs_parens_as_postfix_base() {
                    write!(f, "({expr})")?;
                } else {
                    write!(f, "{expr}")?;
                }
                f.write_str("[")?;
                for (i, (v, b)) in assignment.entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "x{v}={}", u8::from(*b))?;
                }
                f.write_str("]")
            }
            ExprKind::Negate(e) => {
                if e.is_compose() {
                    write!(f, "~({e})")
                } else {
                    write!(f, "~{e}")
                }
            }
        }
    }
}

/// Parses and arity-checks an expression.
pub fn parse_function_expr(s: &str) -> Result<FunctionExpr> {
    let mut p = Parser { src: s, pos: 0 };
    let e = p.compose()?;
    p.skip_ws();
    if p.pos < s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    e.arity()?;
    Ok(e)
}

/// Parses, checks and evaluates in one step.
pub fn parse_function(s: &str) -> Result<BooleanFunction> {
    parse_function_expr(s)?.eval()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    /// `o` as a keyword: followed by whitespace or `(`.
    fn eat_compose(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        let is_kw = r.starts_with('o')
            && r[1..]
                .chars()
                .next()
                .is_some_and(|c| c.is_whitespace() || c == '(');
        if is_kw {
            self.pos += 1;
        }
        is_kw
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !pred(c))
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let at = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            self.pos = at;
            return Err(self.error("expected a number"));
        }
        digits.parse().map_err(|_| Error::Parse {
            pos: at,
            msg: "number out of range".into(),
        })
    }

    fn compose(&mut self) -> Result<FunctionExpr> {
        let outer = self.unary()?;
        self.compose_tail(outer)
    }

    fn compose_tail(&mut self, outer: FunctionExpr) -> Result<FunctionExpr> {
        self.skip_ws();
        let pos = self.pos;
        if !self.eat_compose() {
            return Ok(outer);
        }
        let inner = self.compose_rhs()?;
        Ok(FunctionExpr {
            kind: ExprKind::Compose {
                outer: Box::new(outer),
                inner,
            },
            pos,
        })
    }

    /// Right operand of `o`: a parenthesised list of two or more inner
    /// functions, or a single (possibly composed) function.
    fn compose_rhs(&mut self) -> Result<Vec<FunctionExpr>> {
        self.skip_ws();
        let pos = self.pos;
        if !self.eat('(') {
            return Ok(vec![self.compose()?]);
        }
        let mut items = vec![self.compose()?];
        while self.eat(',') {
            items.push(self.compose()?);
        }
        self.expect(')')?;
        if items.len() > 1 {
            return Ok(items);
        }
        let group = FunctionExpr {
            kind: items.pop().expect("one item").kind,
            pos,
        };
        let g = self.postfix_on(group)?;
        Ok(vec![self.compose_tail(g)?])
    }

    fn unary(&mut self) -> Result<FunctionExpr> {
        self.skip_ws();
        let pos = self.pos;
        if self.eat('~') || self.eat('¬') {
            let e = self.unary()?;
            return Ok(FunctionExpr {
                kind: ExprKind::Negate(Box::new(e)),
                pos,
            });
        }
        let p = self.primary()?;
        self.postfix_on(p)
    }

    fn postfix_on(&mut self, mut e: FunctionExpr) -> Result<FunctionExpr> {
        loop {
            self.skip_ws();
            let pos = self.pos;
            if self.eat('^') {
                let d = self.number()?;
                e = FunctionExpr {
                    kind: ExprKind::Power {
                        base: Box::new(e),
                        d,
                    },
                    pos,
                };
            } else if self.eat('[') {
                let assignment = self.assignment()?;
                e = FunctionExpr {
                    kind: ExprKind::Restrict {
                        expr: Box::new(e),
                        assignment,
                    },
                    pos,
                };
            } else {
                return Ok(e);
            }
        }
    }

    fn assignment(&mut self) -> Result<Assignment> {
        let mut a = Assignment::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            if !self.eat('x') {
                return Err(self.error("expected a variable `x<k>`"));
            }
            let v = self.number()?;
            self.expect('=')?;
            let b = match self.number()? {
                0 => false,
                1 => true,
                _ => return Err(self.error("a variable can only be fixed to 0 or 1")),
            };
            if a.entries.insert(v, b).is_some() {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("x{v} is assigned twice"),
                });
            }
            if self.eat(']') {
                return Ok(a);
            }
            self.expect(',')?;
        }
    }

    fn primary(&mut self) -> Result<FunctionExpr> {
        self.skip_ws();
        let pos = self.pos;
        if self.eat('(') {
            let e = self.compose()?;
            self.expect(')')?;
            return Ok(FunctionExpr { kind: e.kind, pos });
        }
        if self.rest().starts_with("tt:") {
            let lit = self.take_while(|c| c.is_ascii_alphanumeric() || c == ':');
            let f = BooleanFunction::parse_tt_literal(lit).map_err(|e| Error::Parse {
                pos,
                msg: e.to_string(),
            })?;
            return Ok(FunctionExpr {
                kind: ExprKind::Literal(f),
                pos,
            });
        }
        let name = self.take_while(|c| c.is_ascii_alphabetic()).to_string();
        if name.is_empty() {
            return Err(self.error("expected a function"));
        }
        let kind: Builtin = name.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("unknown function `{name}`"),
        })?;
        let arity = if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            self.number()?
        } else if matches!(kind, Builtin::Not | Builtin::Id) {
            1
        } else {
            return Err(self.error(&format!("`{name}` needs an arity, as in `{name}3`")));
        };
        if arity == 0 || matches!(kind, Builtin::Not | Builtin::Id) && arity != 1 {
            return Err(Error::Parse {
                pos,
                msg: format!("`{name}` cannot have arity {arity}"),
            });
        }
        Ok(FunctionExpr {
            kind: ExprKind::Builtin { kind, arity },
            pos,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(kind: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(kind, n).unwrap()
    }

    #[test]
    fn examples() {
        let e = parse_function_expr("MAJ3^2").unwrap();
        assert!(matches!(e.kind, ExprKind::Power { d: 2, .. }));
        assert_eq!(e.arity().unwrap(), 9);
        assert_eq!(e.eval().unwrap(), b(Builtin::Maj, 3).power(2).unwrap());

        let e = parse_function_expr("(AND2 o OR2)^2").unwrap();
        assert_eq!(e.arity().unwrap(), 16);
        let ao = b(Builtin::And, 2).compose_with(&b(Builtin::Or, 2)).unwrap();
        assert_eq!(e.eval().unwrap(), ao.power(2).unwrap());

        let e = parse_function_expr("MAJ3[x3=0]").unwrap();
        assert_eq!(e.arity().unwrap(), 2);
        assert_eq!(e.eval().unwrap(), b(Builtin::And, 2));
    }

    #[test]
    fn literals_negation_and_lists() {
        assert_eq!(parse_function("tt:3:0xe8").unwrap(), b(Builtin::Maj, 3));
        assert_eq!(parse_function("~OR2").unwrap(), b(Builtin::Or, 2).negate());
        let f = parse_function("AND2 o (XOR2, ID)").unwrap();
        assert_eq!(f.arity(), 3);
        let expect =
            BooleanFunction::from_fn(3, |x| ((x & 1) ^ ((x >> 1) & 1)) == 1 && (x >> 2) & 1 == 1)
                .unwrap();
        assert_eq!(f, expect);
        assert_eq!(parse_function("NOT").unwrap(), b(Builtin::Not, 1));
        // Right associative, and the grouping form agrees with the plain one.
        assert_eq!(
            parse_function("AND2 o OR2 o XOR2").unwrap(),
            parse_function("AND2 o (OR2 o XOR2)").unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_function_expr("AND2 o (OR2, ") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        match parse_function_expr("FOO2") {
            Err(Error::Parse { pos: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_function_expr("MAJ3 o (OR2, OR2)") {
            Err(Error::ArityMismatch(m)) => assert!(m.contains("offset 5"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_function_expr("MAJ3[x4=1]"),
            Err(Error::ArityMismatch(_))
        ));
        assert!(matches!(
            parse_function_expr("AND2 AND2"),
            Err(Error::Parse { pos: 5, .. })
        ));
        assert!(matches!(
            parse_function_expr("MAJ"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn print_round_trip() {
        for s in [
            "MAJ3^2",
            "(AND2 o OR2)^2",
            "MAJ3[x3=0]",
            "~(AND2 o OR2)",
            "(~XOR2)^2",
            "AND2 o (XOR2, ID1)",
            "(AND2 o OR2) o XOR2",
            "tt:3:0x17 o AND2",
            "~MAJ3[x1=1, x2=0]",
        ] {
            let e = parse_function_expr(s).unwrap();
            let again = parse_function_expr(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} printed as {e}");
        }
    }
}
