//! Command-line value parsers: complex literals, spectra and trace polynomials.

use hciz_core::invariant::TracePoly;
use hciz_core::numeric::{sample_separated_reals, McRng, Spectrum};
use hciz_core::GaussianRational;
use num_complex::Complex64;
use rand::SeedableRng;

use crate::error::CliError;

fn bad(what: &str, s: &str) -> CliError {
    CliError::usage(format!("invalid {what} `{s}`"))
}

fn parse_real(s: &str, whole: &str) -> Result<f64, CliError> {
    let v: f64 = s.parse().map_err(|_| bad("complex literal", whole))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad("complex literal", whole))
    }
}

/// Parses `re`, `imi` or `re+imi` (also `re-imi`, `i`, `-i`), with no spaces.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad("complex literal", s));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s, s)?, 0.0));
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], s)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other, s)?,
    };
    Ok(Complex64::new(re, im))
}

/// Interval and minimum gap for randomly drawn spectra.
pub const RANDOM_SPECTRUM_RANGE: (f64, f64) = (-1.0, 1.0);
pub const RANDOM_SPECTRUM_GAP: f64 = 0.1;

/// Comma-separated complex literals, or `r` for `n` seeded random reals.
///
/// `stream` selects the generator stream so that `a` and `b` differ under one seed.
pub fn parse_spectrum(s: &str, n: Option<usize>, seed: u64, stream: u64) -> Result<Spectrum, CliError> {
    if s == "r" {
        let n = n.ok_or_else(|| CliError::usage("a random spectrum `r` needs --n"))?;
        let mut rng = McRng::seed_from_u64(seed);
        rng.set_stream(stream);
        let (lo, hi) = RANDOM_SPECTRUM_RANGE;
        let xs = sample_separated_reals(&mut rng, n, lo, hi, RANDOM_SPECTRUM_GAP)
            .ok_or_else(|| CliError::usage(format!("cannot fit {n} eigenvalues with gap {RANDOM_SPECTRUM_GAP} in [{lo}, {hi}]")))?;
        return Ok(Spectrum::from_reals(&xs)?);
    }
    let eigs = s.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    if let Some(n) = n {
        if eigs.len() != n {
            return Err(CliError::usage(format!("spectrum `{s}` has {} entries but --n is {n}", eigs.len())));
        }
    }
    Ok(Spectrum::new(eigs)?)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(GaussianRational),
    Gen(usize),
    I,
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, CliError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let digits = |k: &mut usize| {
        let start = *k;
        while *k < chars.len() && chars[*k].is_ascii_digit() {
            *k += 1;
        }
        chars[start..*k].iter().collect::<String>()
    };
    while k < chars.len() {
        let c = chars[k];
        match c {
            c if c.is_whitespace() => k += 1,
            '0'..='9' | '.' => {
                let int = digits(&mut k);
                let mut literal = if int.is_empty() { "0".to_string() } else { int };
                let mut den = String::from("1");
                if k < chars.len() && chars[k] == '.' {
                    k += 1;
                    let frac = digits(&mut k);
                    literal.push_str(&frac);
                    den.push_str(&"0".repeat(frac.len()));
                }
                let value: GaussianRational =
                    format!("{literal}/{den}").parse().map_err(|_| bad("number in trace polynomial", s))?;
                out.push(Token::Num(value));
            }
            't' => {
                k += 1;
                let idx = digits(&mut k);
                match idx.parse::<usize>() {
                    Ok(g) if g >= 1 => out.push(Token::Gen(g)),
                    _ => return Err(bad("generator in trace polynomial", s)),
                }
            }
            'i' => {
                out.push(Token::I);
                k += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => {
                out.push(Token::Sym(c));
                k += 1;
            }
            _ => return Err(CliError::usage(format!("unexpected `{c}` in trace polynomial `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail(&self, msg: &str) -> CliError {
        CliError::usage(format!("{msg} in trace polynomial `{}`", self.src))
    }

    fn expr(&mut self) -> Result<TracePoly, CliError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Token::Num(_) | Token::Gen(_) | Token::I | Token::Sym('(')))
    }

    fn term(&mut self) -> Result<TracePoly, CliError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') || self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                let inv = constant_of(&d).and_then(|c| c.inv()).ok_or_else(|| self.fail("division by a non-constant or zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<TracePoly, CliError> {
        if self.eat('-') {
            return Ok(&TracePoly::zero() - &self.factor()?);
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.peek() {
            Some(Token::Num(q)) if q.is_real() && q.re.is_integer() => q.re.to_integer(),
            _ => return Err(self.fail("exponent must be a nonnegative integer")),
        };
        self.pos += 1;
        let e: u32 = e.try_into().map_err(|_| self.fail("exponent too large"))?;
        let mut acc = TracePoly::one();
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<TracePoly, CliError> {
        let token = self.peek().cloned().ok_or_else(|| self.fail("unexpected end"))?;
        self.pos += 1;
        match token {
            Token::Num(q) => Ok(TracePoly::constant(q)),
            Token::I => Ok(TracePoly::constant(GaussianRational::i())),
            Token::Gen(k) => Ok(TracePoly::t(k)),
            Token::Sym('(') => {
                let first = self.expr()?;
                let value = if self.eat(',') {
                    let second = self.expr()?;
                    let (re, im) = constant_of(&first)
                        .zip(constant_of(&second))
                        .filter(|(re, im)| re.is_real() && im.is_real())
                        .ok_or_else(|| self.fail("a coefficient pair must hold two real constants"))?;
                    TracePoly::constant(GaussianRational::new(re.re, im.re))
                } else {
                    first
                };
                if !self.eat(')') {
                    return Err(self.fail("missing `)`"));
                }
                Ok(value)
            }
            Token::Sym(c) => Err(self.fail(&format!("unexpected `{c}`"))),
        }
    }
}

fn constant_of(f: &TracePoly) -> Option<GaussianRational> {
    (f.weighted_degree().unwrap_or(0) == 0).then(|| f.poly().eval_at_zero())
}

/// Parses a trace polynomial such as `t1^2 - 3/2 t2 + (1+2i) t1 t3`.
///
/// Accepts `+ - * / ^`, parentheses, juxtaposition as multiplication, exact
/// decimals and rationals, `i`, generators `t1, t2, …`, and the coefficient
/// pairs `(re, im)` used by the canonical text form.
pub fn parse_trace_poly(s: &str) -> Result<TracePoly, CliError> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(bad("trace polynomial", s));
    }
    let mut p = Parser { tokens, pos: 0, src: s };
    let f = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.fail("trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hciz_core::invariant::random_trace_poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), c(0.5, -0.25));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("-2e-1-i").unwrap(), c(-0.2, -1.0));
        for bad in ["", "1 + 2i", "x", "1+", "nan", "inf", "1+2j", "ii"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn spectra() {
        let s = parse_spectrum("0,1+i,-2", Some(3), 0, 0).unwrap();
        assert_eq!(s.eigs(), &[c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.0)]);
        assert!(parse_spectrum("0,1", Some(3), 0, 0).is_err());
        assert!(parse_spectrum("r", None, 0, 0).is_err());
        let r = parse_spectrum("r", Some(4), 7, 1).unwrap();
        assert!(r.gap() >= RANDOM_SPECTRUM_GAP * (1.0 - 1e-12));
        assert!(r.eigs().iter().all(|z| z.im == 0.0 && z.re.abs() <= 1.0));
        assert_eq!(r, parse_spectrum("r", Some(4), 7, 1).unwrap());
        assert_ne!(r, parse_spectrum("r", Some(4), 7, 2).unwrap());
    }

    #[test]
    fn trace_poly_grammar() {
        let t = TracePoly::t;
        let q = |a, b| GaussianRational::from_ratio(a, b);
        assert_eq!(parse_trace_poly("t1^2").unwrap(), &t(1) * &t(1));
        assert_eq!(parse_trace_poly("1").unwrap(), TracePoly::one());
        assert_eq!(parse_trace_poly("3/2 t1 t2").unwrap(), (&t(1) * &t(2)).scale(&q(3, 2)));
        assert_eq!(parse_trace_poly("t1*t2 - 0.25").unwrap(), &(&t(1) * &t(2)) - &TracePoly::constant(q(1, 4)));
        assert_eq!(parse_trace_poly("-t2^2").unwrap(), &TracePoly::zero() - &(&t(2) * &t(2)));
        assert_eq!(parse_trace_poly("(1+2i) t3").unwrap(), t(3).scale(&GaussianRational::new(q(1, 1).re, q(2, 1).re)));
        assert_eq!(parse_trace_poly("(t1 + t2)^2").unwrap(), &(&t(1) + &t(2)) * &(&t(1) + &t(2)));
        assert_eq!(parse_trace_poly("t1/2").unwrap(), t(1).scale(&q(1, 2)));
        for bad in ["", "t0", "t1^", "t1^t2", "(t1", "t1 / t2", "x", "t1 +", "(t1, 1)", "2^-1"] {
            assert!(parse_trace_poly(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut rng = McRng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_trace_poly(&mut rng, 6, 4, 5);
            assert_eq!(parse_trace_poly(&f.to_string()).unwrap(), f, "{f}");
        }
        assert_eq!(parse_trace_poly(&TracePoly::zero().to_string()).unwrap(), TracePoly::zero());
    }
}
