use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wave {
    Sin,
    Cos,
}

/// `sin(k·x_i)` or `cos(k·x_i)`, with `var` 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigFactor {
    pub wave: Wave,
    pub freq: i64,
    pub var: usize,
}

impl TrigFactor {
    fn value(&self, x: &[f64]) -> f64 {
        let a = self.freq as f64 * x[self.var];
        match self.wave {
            Wave::Sin => a.sin(),
            Wave::Cos => a.cos(),
        }
    }

    fn derivative(&self, x: &[f64]) -> f64 {
        let k = self.freq as f64;
        let a = k * x[self.var];
        match self.wave {
            Wave::Sin => k * a.cos(),
            Wave::Cos => -k * a.sin(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigTerm {
    pub coeff: f64,
    pub factors: Vec<TrigFactor>,
}

/// A trigonometric polynomial on `R⁶/(2πZ)⁶`, parsed from expressions such
/// as `"sin(x5)"`, `"0.5*cos(2x1)·sin(x3) - 1"`.
///
/// Grammar: a sum of `±` terms, each a product (`*` or `·`) of numbers and
/// `sin(k x_i)` / `cos(k x_i)` with integer `k` and `i ∈ 1..=6`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TrigPoly {
    source: String,
    terms: Vec<TrigTerm>,
}

impl TrigPoly {
    pub const DIM: usize = 6;

    pub fn parse(src: &str) -> Result<Self> {
        let terms = Parser::new(src).expression()?;
        Ok(Self {
            source: src.trim().to_string(),
            terms,
        })
    }

    pub fn zero() -> Self {
        Self::parse("0").expect("constant parses")
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * t.factors.iter().map(|f| f.value(x)).product::<f64>())
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> [f64; 6] {
        let mut g = [0.0; 6];
        for t in &self.terms {
            let values: Vec<f64> = t.factors.iter().map(|f| f.value(x)).collect();
            for (i, f) in t.factors.iter().enumerate() {
                let others: f64 = values
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v)
                    .product();
                g[f.var] += t.coeff * f.derivative(x) * others;
            }
        }
        g
    }

    pub fn max_frequency(&self) -> i64 {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.freq.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Length scale of the field, `1 / max(1, k_max)`.
    pub fn smoothness_radius(&self) -> f64 {
        1.0 / self.max_frequency().max(1) as f64
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }
}

impl TryFrom<String> for TrigPoly {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Self::parse(&s)
    }
}

impl From<TrigPoly> for String {
    fn from(p: TrigPoly) -> String {
        p.source
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<Vec<TrigTerm>> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let mut term = self.term()?;
            term.coeff *= sign;
            terms.push(term);
            sign = match self.peek() {
                Some('+') => 1.0,
                Some('-') => -1.0,
                None => break,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            };
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<TrigTerm> {
        let mut term = TrigTerm {
            coeff: 1.0,
            factors: Vec::new(),
        };
        loop {
            self.factor(&mut term)?;
            if !(self.eat('*') || self.eat('·')) {
                break;
            }
        }
        Ok(term)
    }

    fn factor(&mut self, term: &mut TrigTerm) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => {
                term.coeff *= self.number()?;
                Ok(())
            }
            Some('s') | Some('c') => {
                let wave = if self.keyword("sin") {
                    Wave::Sin
                } else if self.keyword("cos") {
                    Wave::Cos
                } else {
                    return Err(self.err("unknown function"));
                };
                if !self.eat('(') {
                    return Err(self.err("expected '('"));
                }
                let freq = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let k = self.integer()?;
                    let _ = self.eat('*') || self.eat('·');
                    k
                } else {
                    1
                };
                if !self.eat('x') {
                    return Err(self.err("expected a coordinate x1..x6"));
                }
                let i = self.integer()?;
                if !(1..=6).contains(&i) {
                    return Err(self.err("coordinate index outside 1..6"));
                }
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                term.factors.push(TrigFactor {
                    wave,
                    freq,
                    var: (i - 1) as usize,
                });
                Ok(())
            }
            _ => Err(self.err("expected a number, sin or cos")),
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let n = word.chars().count();
        let found: String = self.chars.iter().skip(self.pos).take(n).collect();
        if found == word {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected an integer"))
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == '.')
        {
            self.pos += 1;
        }
        if self
            .chars
            .get(self.pos)
            .is_some_and(|c| *c == 'e' || *c == 'E')
        {
            self.pos += 1;
            if self
                .chars
                .get(self.pos)
                .is_some_and(|c| *c == '-' || *c == '+')
            {
                self.pos += 1;
            }
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("malformed number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_wave() {
        let f = TrigPoly::parse("sin(x5)").unwrap();
        let x = [0.0, 0.0, 0.0, 0.0, 0.7, 0.0];
        assert_eq!(f.eval(&x), 0.7f64.sin());
        assert_eq!(f.gradient(&x)[4], 0.7f64.cos());
        assert_eq!(f.smoothness_radius(), 1.0);
    }

    #[test]
    fn parses_products_sums_and_frequencies() {
        let f = TrigPoly::parse("0.5*cos(2x1)·sin(3*x3) - 1 + -2").unwrap_err();
        assert!(matches!(f, Error::Parse(_)));
        let f = TrigPoly::parse("-0.5*cos(2x1)·sin(3*x3) - 1.5e-1 + 2 cos(x6)");
        assert!(f.is_err());
        let f = TrigPoly::parse(" -0.5*cos(2x1)·sin(3*x3) - 1.5e-1 + 2*cos(x6)").unwrap();
        let x = [0.3, 0.0, -0.4, 0.0, 0.0, 1.1];
        let expect = -0.5 * (0.6f64).cos() * (-1.2f64).sin() - 0.15 + 2.0 * 1.1f64.cos();
        assert!((f.eval(&x) - expect).abs() < 1e-15);
        assert_eq!(f.max_frequency(), 3);
        assert!((f.smoothness_radius() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = TrigPoly::parse("cos(2x1)*sin(x2) + 0.3*sin(x5)*cos(x5) - cos(3x6)").unwrap();
        let x = [0.3, 1.2, 0.0, 0.5, -0.8, 2.2];
        let g = f.gradient(&x);
        for i in 0..6 {
            let h = 1e-6;
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (f.eval(&xp) - f.eval(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-8, "component {i}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "", "tan(x1)", "sin(x7)", "sin(x0)", "sin x1", "sin(y1)", "1 +", "(1)",
        ] {
            assert!(TrigPoly::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn zero_field() {
        assert!(TrigPoly::zero().is_zero());
        assert_eq!(TrigPoly::zero().eval(&[1.0; 6]), 0.0);
    }

    #[test]
    fn serde_as_string() {
        let f = TrigPoly::parse("sin(x5)").unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "\"sin(x5)\"");
        assert_eq!(serde_json::from_str::<TrigPoly>(&s).unwrap(), f);
    }
}
