//! Text and JSON polynomial formats.
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'|'/'] factor)*      '/' only by a rational literal
//! factor := base ['^' digits]
//! base   := digits ['/' digits] | 'x' | 'y' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::bi::{grlex, BiPoly};
use super::rat::{parse_rat, Rat};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = BiPoly::zero();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.rational()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&d.recip());
                }
                Some(c) if c == b'x' || c == b'y' || c == b'(' || c.is_ascii_digit() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let Some(e) = self.digits() else {
                return Err(self.err("expected exponent"));
            };
            let e: u32 = e.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn rational(&mut self) -> Result<Rat> {
        let Some(n) = self.digits() else {
            return Err(self.err("expected number"));
        };
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            if let Some(d) = self.digits() {
                return parse_rat(&format!("{n}/{d}"));
            }
            self.pos = save;
        }
        parse_rat(&n)
    }

    fn base(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPoly::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(BiPoly::constant(self.rational()?)),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse the text form, e.g. `x^2 - 3/2 x y + 5` or `(x + y)^3`.
pub fn parse_poly(s: &str) -> Result<BiPoly> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

fn json_int(v: &Value, key: &str) -> Result<BigInt> {
    let bad = || Error::Parse(format!("term field {key:?} must be an integer"));
    match v.get(key) {
        Some(Value::Number(n)) => n.as_i64().map(BigInt::from).ok_or_else(bad),
        Some(Value::String(s)) => s.trim().parse().map_err(|_| bad()),
        None if key == "den" => Ok(BigInt::from(1)),
        _ => Err(bad()),
    }
}

fn json_exp(v: &Value, key: &str) -> Result<u32> {
    v.get(key)
        .and_then(Value::as_u64)
        .and_then(|e| u32::try_from(e).ok())
        .ok_or_else(|| {
            Error::Parse(format!(
                "term field {key:?} must be a small nonnegative integer"
            ))
        })
}

/// Parse `{"terms": [{"i": 2, "j": 0, "num": 1, "den": 1}, ...]}`. `num`
/// and `den` may be JSON integers or decimal strings; `den` defaults to 1.
/// Repeated monomials are summed.
pub fn poly_from_json(v: &Value) -> Result<BiPoly> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected an object with a \"terms\" array".into()))?;
    let mut out = BiPoly::zero();
    for t in terms {
        let den = json_int(t, "den")?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        let c = Rat::new(json_int(t, "num")?, den);
        out.add_term(json_exp(t, "i")?, json_exp(t, "j")?, c);
    }
    Ok(out)
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Structured form with terms in canonical graded-lex order, largest first.
pub fn poly_to_json(f: &BiPoly) -> Value {
    let mut terms: Vec<((u32, u32), &Rat)> = f.terms().collect();
    terms.sort_by(|a, b| grlex(b.0, a.0));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|((i, j), c)| {
            json!({"i": i, "j": j, "num": int_value(c.numer()), "den": int_value(c.denom())})
        })
        .collect();
    json!({ "terms": terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::rat;

    #[test]
    fn parses_common_shapes() {
        let f = parse_poly("x^2 - 3/2 x*y + 5").unwrap();
        assert_eq!(f.coeff(1, 1), rat(-3, 2));
        assert_eq!(f.coeff(0, 0), rat(5, 1));
        assert_eq!(
            parse_poly("(x+2y)^3").unwrap().to_text(),
            "x^3 + 6*x^2*y + 12*x*y^2 + 8*y^3"
        );
        assert_eq!(parse_poly("-x y/3").unwrap().coeff(1, 1), rat(-1, 3));
        assert_eq!(parse_poly(" 2 3 x ").unwrap().coeff(1, 0), rat(6, 1));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x +", "x^", "(x", "z", "x/0", "x y )"] {
            assert!(parse_poly(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let f = parse_poly("x^2 - 3/2 x y + y^3 - 7").unwrap();
        assert_eq!(poly_from_json(&poly_to_json(&f)).unwrap(), f);
        let v: Value =
            serde_json::from_str(r#"{"terms":[{"i":1,"j":0,"num":"-4","den":"6"}]}"#).unwrap();
        assert_eq!(poly_from_json(&v).unwrap().coeff(1, 0), rat(-2, 3));
    }
}
