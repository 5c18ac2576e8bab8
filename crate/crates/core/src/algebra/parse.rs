use super::gaussian::GaussianRational;
use super::laurent::LaurentPoly;
use super::omega::OmegaFunction;
use super::ring::Ring;
use crate::error::{PmError, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(GaussianRational),
    Z,
    W,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> PmError {
    PmError::SyntaxError { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            'z' => out.push((start, Tok::Z)),
            'w' => out.push((start, Tok::W)),
            'i' => out.push((start, Tok::Num(GaussianRational::i()))),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' | '.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let value = GaussianRational::parse_real(&text[i..j])
                    .ok_or_else(|| syntax(start, format!("malformed number '{}'", &text[i..j])))?;
                let mut num = GaussianRational::real(value);
                if j < bytes.len() && bytes[j] == b'i' {
                    num = num * GaussianRational::i();
                    j += 1;
                }
                out.push((start, Tok::Num(num)));
                i = j;
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

/// A quotient whose denominator has no admissible factors left.
#[derive(Clone)]
struct Frac {
    num: OmegaFunction,
    den: LaurentPoly,
}

impl Frac {
    fn of(num: OmegaFunction) -> Self {
        Frac { num, den: LaurentPoly::constant(GaussianRational::from_i64(1)) }
    }

    fn den_is_one(&self) -> bool {
        self.den == LaurentPoly::constant(GaussianRational::from_i64(1))
    }

    fn add(self, o: Frac) -> Frac {
        if self.den == o.den {
            return Frac { num: self.num + o.num, den: self.den };
        }
        let num = self.num * OmegaFunction::from_poly(o.den.clone())
            + o.num * OmegaFunction::from_poly(self.den.clone());
        Frac { num, den: &self.den * &o.den }.reduced()
    }

    fn neg(self) -> Frac {
        Frac { num: -self.num, den: self.den }
    }

    fn mul(self, o: Frac) -> Frac {
        Frac { num: self.num * o.num, den: &self.den * &o.den }.reduced()
    }

    fn recip(self, pos: usize) -> Result<Frac> {
        if self.num.is_zero() {
            return Err(syntax(pos, "division by zero"));
        }
        let (admissible, residual) = split_admissible(&self.num);
        let num = admissible * OmegaFunction::from_poly(self.den);
        Ok(Frac { num, den: residual }.reduced())
    }

    /// Cancels the residual denominator against the numerator when it divides.
    fn reduced(self) -> Frac {
        if self.den_is_one() {
            return self;
        }
        if self.den.len() == 1 && self.den.coeff(0, 0) != GaussianRational::zero() {
            let c = self.den.coeff(0, 0);
            return Frac::of(self.num.scale(&(GaussianRational::from_i64(1) / c)));
        }
        match self.num.numerator().exact_div(&self.den) {
            Some(q) => Frac::of(OmegaFunction::new(q, self.num.k())),
            None => self,
        }
    }
}

/// Writes f = A / Q with A the reciprocal of the admissible part of f and Q the residual factor.
fn split_admissible(f: &OmegaFunction) -> (OmegaFunction, LaurentPoly) {
    let p = f.numerator();
    let (a, b) = p.min_exponents().expect("nonzero");
    let mut rest = p.shift(-a, -b);
    let mut e = 0i32;
    while let Some(q) = rest.div_one_minus_zw() {
        rest = q;
        e += 1;
    }
    // f = z^a w^b (1-zw)^{e-k} rest, so 1/f = z^-a w^-b (1-zw)^{k-e} / rest.
    let recip = OmegaFunction::monomial(-a, -b) * OmegaFunction::one_minus_zw_powi(f.k() as i32 - e);
    if rest.len() == 1 && rest.coeff(0, 0) != GaussianRational::zero() {
        let c = rest.coeff(0, 0);
        return (recip.scale(&(GaussianRational::from_i64(1) / c)), LaurentPoly::constant(GaussianRational::from_i64(1)));
    }
    (recip, rest)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.add(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.mul(self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let d = self.factor()?;
                    acc = acc.mul(d.recip(pos)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Frac> {
        let pos = self.pos();
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let epos = self.pos();
        let e = match self.peek() {
            Some(Tok::Num(n)) if n.is_real() && n.re.is_integer() => {
                let v = n.re.to_integer();
                self.at += 1;
                u32::try_from(v).map_err(|_| syntax(epos, "exponent too large"))?
            }
            _ => return Err(syntax(epos, "expected integer exponent")),
        };
        let mut acc = Frac::of(OmegaFunction::one());
        for _ in 0..e {
            acc = acc.mul(base.clone());
        }
        if negative {
            acc = acc.recip(pos)?;
        }
        Ok(acc)
    }

    fn base(&mut self) -> Result<Frac> {
        let pos = self.pos();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Z) => {
                self.at += 1;
                Ok(Frac::of(OmegaFunction::z()))
            }
            Some(Tok::W) => {
                self.at += 1;
                Ok(Frac::of(OmegaFunction::w()))
            }
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Frac::of(OmegaFunction::constant(n)))
            }
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(self.factor()?.neg())
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.factor()
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => Err(syntax(pos, format!("unexpected token {t:?}"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses an expression in z, w into the closed class.
pub fn parse_expression(text: &str) -> Result<OmegaFunction> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let value = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    let value = value.reduced();
    if !value.den_is_one() {
        return Err(PmError::UnrepresentableDenominator(format!(
            "{}",
            OmegaFunction::from_poly(value.den)
        )));
    }
    Ok(value.num)
}
