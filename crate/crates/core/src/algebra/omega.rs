use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use super::gaussian::GaussianRational;
use super::laurent::LaurentPoly;
use super::ring::{Ring, Scalar};
use crate::error::{PmError, PoleFactor, Result};
use crate::geometry::{ExtPoint2, MoebiusMap};

/// p(z,w) / (1 - zw)^k with p a Laurent polynomial, kept with minimal k.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OmegaFunction {
    num: LaurentPoly,
    k: u32,
}

/// Pullbacks that keep the class closed.
#[derive(Clone, Debug)]
pub enum Pullback {
    Flip,
    Swap,
    Dilation(GaussianRational),
    Moebius(MoebiusMap<GaussianRational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Z,
    W,
}

impl OmegaFunction {
    pub fn new(num: LaurentPoly, k: u32) -> Self {
        let mut f = OmegaFunction { num, k };
        f.normalize_in_place();
        f
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        OmegaFunction { num, k: 0 }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::from_i64(n))
    }

    pub fn z() -> Self {
        Self::monomial(1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(i: i32, j: i32) -> Self {
        Self::from_poly(LaurentPoly::monomial(i, j, GaussianRational::from_i64(1)))
    }

    /// 1 - zw
    pub fn one_minus_zw() -> Self {
        Self::from_poly(LaurentPoly::one_minus_zw_pow(1))
    }

    /// The basis function z^p w^q / (1 - zw)^max(p, q).
    pub fn basis(p: u32, q: u32) -> Self {
        OmegaFunction::new(LaurentPoly::monomial(p as i32, q as i32, GaussianRational::from_i64(1)), p.max(q))
    }

    /// (1 - zw)^e for any integer e.
    pub fn one_minus_zw_powi(e: i32) -> Self {
        if e >= 0 {
            Self::from_poly(LaurentPoly::one_minus_zw_pow(e as u32))
        } else {
            OmegaFunction { num: LaurentPoly::constant(GaussianRational::from_i64(1)), k: (-e) as u32 }
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize_in_place(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_one_minus_zw() {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn normalize(&self) -> Self {
        let mut f = self.clone();
        f.normalize_in_place();
        f
    }

    /// Numerator expressed over (1 - zw)^target, target >= k.
    pub fn numerator_at(&self, target: u32) -> LaurentPoly {
        assert!(target >= self.k);
        &self.num * &LaurentPoly::one_minus_zw_pow(target - self.k)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        OmegaFunction::new(self.num.scale(c), self.k)
    }

    pub fn mul_monomial(&self, a: i32, b: i32) -> Self {
        OmegaFunction { num: self.num.shift(a, b), k: self.k }
    }

    pub fn pow(&self, e: u32) -> Self {
        Ring::pow_u(self, e)
    }

    pub fn derivative(&self, slot: Slot) -> Self {
        // d/dz [p (1-zw)^-k] = [p_z (1-zw) + k w p] / (1-zw)^{k+1}
        let (dp, lift) = match slot {
            Slot::Z => (self.num.partial_z(), self.num.shift(0, 1)),
            Slot::W => (self.num.partial_w(), self.num.shift(1, 0)),
        };
        let k = self.k as i64;
        let num = &dp * &LaurentPoly::one_minus_zw_pow(1) + lift.scale(&GaussianRational::from_i64(k));
        OmegaFunction::new(num, self.k + 1)
    }

    /// Iterated Wirtinger derivative.
    pub fn wirtinger(&self, slot: Slot, order: u32) -> Self {
        let mut f = self.clone();
        for _ in 0..order {
            f = f.derivative(slot);
        }
        f
    }

    pub fn dz(&self) -> Self {
        self.derivative(Slot::Z)
    }

    pub fn dw(&self) -> Self {
        self.derivative(Slot::W)
    }

    /// f(1/w, 1/z)
    pub fn flip(&self) -> Self {
        let k = self.k as i32;
        let sign = if self.k % 2 == 0 { 1 } else { -1 };
        let num = self
            .num
            .map_exponents(|i, j| (k - j, k - i))
            .scale(&GaussianRational::from_i64(sign));
        OmegaFunction::new(num, self.k)
    }

    /// f(w, z)
    pub fn swap(&self) -> Self {
        OmegaFunction::new(self.num.map_exponents(|i, j| (j, i)), self.k)
    }

    /// f(γz, w/γ)
    pub fn dilate(&self, gamma: &GaussianRational) -> Self {
        assert!(!gamma.is_zero(), "dilation by zero");
        let num = self.num.map_coeffs(|i, j, c| c * &gamma.powi((i - j) as i64));
        OmegaFunction::new(num, self.k)
    }

    /// f(1/z, 1/w), the flip composed with swap.
    pub fn invert(&self) -> Self {
        self.swap().flip()
    }

    pub fn pullback(&self, kind: &Pullback) -> Result<Self> {
        match kind {
            Pullback::Flip => Ok(self.flip()),
            Pullback::Swap => Ok(self.swap()),
            Pullback::Dilation(g) => {
                if g.is_zero() {
                    return Err(PmError::NotClassPreserving);
                }
                Ok(self.dilate(g))
            }
            Pullback::Moebius(t) => self.pullback_moebius(t),
        }
    }

    fn pullback_moebius(&self, t: &MoebiusMap<GaussianRational>) -> Result<Self> {
        let (a, b, c, d) = t.entries();
        // f∘T = f∘F∘T+ = (f∘F)∘T+ since F is central.
        let base = if t.flip() { self.flip() } else { self.clone() };
        if b.is_zero() && c.is_zero() {
            return Ok(base.dilate(&(a.clone() / d.clone())));
        }
        if a.is_zero() && d.is_zero() {
            // ψ(z) = b/(cz) = ϱ_{b/c}(1/z); T+ = ϱ_{b/c} ∘ inversion.
            return Ok(base.dilate(&(b.clone() / c.clone())).invert());
        }
        Err(PmError::NotClassPreserving)
    }

    /// Degree k with f∘ϱ_γ = γ^k f, or None when monomials disagree.
    pub fn homogeneity_degree(&self) -> Result<Option<i32>> {
        let mut degs = self.num.terms().map(|(&(i, j), _)| i - j);
        let first = degs.next().ok_or(PmError::ZeroFunction)?;
        Ok(if degs.all(|d| d == first) { Some(first) } else { None })
    }

    /// Whether the function stays finite as z → ∞ with w fixed and nonzero.
    pub fn finite_at_z_infinity(&self) -> bool {
        self.num.terms().all(|(&(i, _), _)| i <= self.k as i32)
    }

    pub fn finite_at_w_infinity(&self) -> bool {
        self.num.terms().all(|(&(_, j), _)| j <= self.k as i32)
    }

    pub fn has_negative_z(&self) -> bool {
        self.num.terms().any(|(&(i, _), _)| i < 0)
    }

    pub fn has_negative_w(&self) -> bool {
        self.num.terms().any(|(&(_, j), _)| j < 0)
    }

    /// Evaluation at a finite point; poles reported by factor.
    pub fn eval_finite<S: Scalar>(&self, z: &S, w: &S) -> Result<S> {
        if z.is_zero() && self.has_negative_z() {
            return Err(PmError::PoleAtPoint(PoleFactor::Z));
        }
        if w.is_zero() && self.has_negative_w() {
            return Err(PmError::PoleAtPoint(PoleFactor::W));
        }
        let p = self.num.eval(z, w);
        if self.k == 0 {
            return Ok(p);
        }
        let q = S::one() - z.clone() * w.clone();
        if q.is_zero() {
            return Err(PmError::PoleAtPoint(PoleFactor::OneMinusZW));
        }
        Ok(p / q.pow_u(self.k))
    }

    /// Evaluation on Ĉ², routing infinite slots through the flip representation.
    pub fn evaluate<S: Scalar>(&self, p: &ExtPoint2<S>) -> Result<S> {
        match (p.z.finite_value(), p.w.finite_value()) {
            (Some(z), Some(w)) => self.eval_finite(&z, &w),
            _ => {
                let q = p.flip_point();
                let (u, v) = (q.z.finite_value(), q.w.finite_value());
                match (u, v) {
                    (Some(u), Some(v)) => self.flip().eval_finite(&u, &v).map_err(|e| match e {
                        PmError::PoleAtPoint(_) => PmError::NoFiniteLimit,
                        other => other,
                    }),
                    _ => Err(PmError::InvalidPoint("point not in the domain".into())),
                }
            }
        }
    }

    pub fn eval_c64(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        self.eval_finite(&z, &w)
    }

    /// Graded order: total degree, then j.
    fn sorted_terms(p: &LaurentPoly) -> Vec<((i32, i32), GaussianRational)> {
        let mut v: Vec<_> = p.terms().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by_key(|&((i, j), _)| (i + j, j));
        v
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn monomial_text(i: i32, j: i32) -> Vec<String> {
    let mut parts = Vec::new();
    for (var, e) in [("z", i), ("w", j)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            e => parts.push(format!("{var}^{e}")),
        }
    }
    parts
}

fn coeff_text(c: &GaussianRational) -> String {
    let t = c.to_string();
    if c.is_real() && !t.contains('/') {
        t
    } else {
        format!("({t})")
    }
}

fn poly_text(p: &LaurentPoly) -> String {
    let mut out = String::new();
    for (idx, ((i, j), c)) in OmegaFunction::sorted_terms(p).into_iter().enumerate() {
        let neg = c.is_real() && c.re < num_rational::BigRational::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        if idx > 0 {
            out.push_str(if neg { "-" } else { "+" });
        } else if neg {
            out.push('-');
        }
        let mono = monomial_text(i, j);
        let one = GaussianRational::from_i64(1);
        let mut factors = Vec::new();
        if mag != one || mono.is_empty() {
            factors.push(coeff_text(&mag));
        }
        factors.extend(mono);
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for OmegaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        // Pull out the monomial content and every (1 - zw) factor of the numerator.
        let (a, b) = self.num.min_exponents().expect("nonzero");
        let mut rest = self.num.shift(-a, -b);
        let mut e: i32 = 0;
        while let Some(q) = rest.div_one_minus_zw() {
            rest = q;
            e += 1;
        }
        let net = e - self.k as i32;
        let mut numer: Vec<String> = Vec::new();
        let mut denom: Vec<String> = Vec::new();
        let mut sign = "";
        if rest.len() == 1 && !rest.coeff(0, 0).is_zero() {
            let c = rest.coeff(0, 0);
            if c == GaussianRational::from_i64(-1) {
                sign = "-";
            } else if c != GaussianRational::from_i64(1) {
                numer.push(coeff_text(&c));
            }
        } else {
            numer.push(format!("({})", poly_text(&rest)));
        }
        for (var, ex) in [("z", a), ("w", b)] {
            let target = if ex > 0 { &mut numer } else { &mut denom };
            match ex.abs() {
                0 => {}
                1 => target.push(var.to_string()),
                m => target.push(format!("{var}^{m}")),
            }
        }
        match net {
            0 => {}
            1 => numer.push("(1-z*w)".into()),
            -1 => denom.push("(1-z*w)".into()),
            n if n > 0 => numer.push(format!("(1-z*w)^{n}")),
            n => denom.push(format!("(1-z*w)^{}", -n)),
        }
        let num_txt = if numer.is_empty() { "1".to_string() } else { numer.join("*") };
        write!(f, "{sign}{num_txt}")?;
        if !denom.is_empty() {
            if denom.len() == 1 {
                write!(f, "/{}", denom[0])?;
            } else {
                write!(f, "/({})", denom.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OmegaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaFunction({self})")
    }
}

impl Serialize for OmegaFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(i32, i32, String, String)> = OmegaFunction::sorted_terms(&self.num)
            .into_iter()
            .map(|((i, j), c)| (i, j, rational_text(&c.re), rational_text(&c.im)))
            .collect();
        let mut st = s.serialize_struct("OmegaFunction", 2)?;
        st.serialize_field("numerator", &terms)?;
        st.serialize_field("k", &self.k)?;
        st.end()
    }
}

fn rational_text(r: &num_rational::BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Deserialize)]
struct RawOmega {
    numerator: Vec<(i32, i32, String, String)>,
    k: u32,
}

impl<'de> Deserialize<'de> for OmegaFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawOmega::deserialize(d)?;
        let mut num = LaurentPoly::zero();
        for (i, j, re, im) in raw.numerator {
            let re = GaussianRational::parse_real(&re).ok_or_else(|| serde::de::Error::custom("bad rational"))?;
            let im = GaussianRational::parse_real(&im).ok_or_else(|| serde::de::Error::custom("bad rational"))?;
            num.add_term(i, j, GaussianRational::new(re, im));
        }
        Ok(OmegaFunction::new(num, raw.k))
    }
}

impl Add for OmegaFunction {
    type Output = OmegaFunction;
    fn add(self, o: OmegaFunction) -> OmegaFunction {
        if self.k == o.k {
            return OmegaFunction::new(self.num + o.num, self.k);
        }
        let k = self.k.max(o.k);
        OmegaFunction::new(self.numerator_at(k) + o.numerator_at(k), k)
    }
}

impl Sub for OmegaFunction {
    type Output = OmegaFunction;
    fn sub(self, o: OmegaFunction) -> OmegaFunction {
        self + (-o)
    }
}

impl Neg for OmegaFunction {
    type Output = OmegaFunction;
    fn neg(self) -> OmegaFunction {
        OmegaFunction { num: -self.num, k: self.k }
    }
}

impl Mul for OmegaFunction {
    type Output = OmegaFunction;
    fn mul(self, o: OmegaFunction) -> OmegaFunction {
        &self * &o
    }
}

impl<'a> Mul<&'a OmegaFunction> for &'a OmegaFunction {
    type Output = OmegaFunction;
    fn mul(self, o: &OmegaFunction) -> OmegaFunction {
        OmegaFunction::new(&self.num * &o.num, self.k + o.k)
    }
}

impl Ring for OmegaFunction {
    fn zero() -> Self {
        OmegaFunction::default()
    }
    fn one() -> Self {
        OmegaFunction::int(1)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_gaussian(c: &GaussianRational) -> Self {
        OmegaFunction::constant(c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProjectiveCoord;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    #[test]
    fn normalization_removes_common_factor() {
        let f = OmegaFunction::new(LaurentPoly::one_minus_zw_pow(2), 3);
        assert_eq!(f, OmegaFunction::one_minus_zw_powi(-1));
        assert_eq!(f.normalize(), f);
    }

    #[test]
    fn product_of_basis_functions() {
        let f = OmegaFunction::basis(1, 0) * OmegaFunction::basis(0, 1);
        assert_eq!(f.numerator().coeff(1, 1), q(1, 1));
        assert_eq!(f.numerator().len(), 1);
        assert_eq!(f.k(), 2);
    }

    #[test]
    fn derivative_of_geometric_kernel() {
        let f = OmegaFunction::one_minus_zw_powi(-1);
        assert_eq!(f.dz(), OmegaFunction::w() * OmegaFunction::one_minus_zw_powi(-2));
        assert!(OmegaFunction::monomial(2, 0).dw().is_zero());
        assert_eq!(OmegaFunction::monomial(3, 0).wirtinger(Slot::Z, 2), OmegaFunction::z().scale(&q(6, 1)));
    }

    #[test]
    fn pullbacks() {
        let kernel = OmegaFunction::one_minus_zw_powi(-1);
        assert_eq!(kernel.flip(), -(OmegaFunction::monomial(1, 1) * kernel.clone()));
        assert_eq!(OmegaFunction::monomial(2, 1).swap(), OmegaFunction::monomial(1, 2));
        assert_eq!(OmegaFunction::basis(1, 0).dilate(&q(3, 1)), OmegaFunction::basis(1, 0).scale(&q(3, 1)));
    }

    #[test]
    fn evaluation_at_infinity() {
        let f = OmegaFunction::basis(1, 0);
        let p = ExtPoint2::new(ProjectiveCoord::infinity(), ProjectiveCoord::finite(q(2, 1)));
        assert_eq!(f.evaluate(&p).unwrap(), q(-1, 2));
        let g = OmegaFunction::monomial(2, 1);
        let p = ExtPoint2::finite(q(1, 2), q(1, 3));
        assert_eq!(g.evaluate(&p).unwrap(), q(1, 12));
        let p = ExtPoint2::finite(q(1, 1), q(1, 1));
        assert_eq!(
            OmegaFunction::one_minus_zw_powi(-1).evaluate(&p),
            Err(PmError::PoleAtPoint(PoleFactor::OneMinusZW))
        );
        let p = ExtPoint2::new(ProjectiveCoord::infinity(), ProjectiveCoord::finite(q(2, 1)));
        assert_eq!(OmegaFunction::z().evaluate(&p), Err(PmError::NoFiniteLimit));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(OmegaFunction::basis(2, 1).homogeneity_degree().unwrap(), Some(1));
        assert_eq!(OmegaFunction::one_minus_zw().homogeneity_degree().unwrap(), Some(0));
        assert_eq!((OmegaFunction::z() + OmegaFunction::w()).homogeneity_degree().unwrap(), None);
        assert_eq!(OmegaFunction::zero().homogeneity_degree(), Err(PmError::ZeroFunction));
    }

    #[test]
    fn printing() {
        let f = OmegaFunction::monomial(1, 0).scale(&q(2, 1)) * OmegaFunction::one_minus_zw();
        assert_eq!(f.to_string(), "2*z*(1-z*w)");
        assert_eq!(OmegaFunction::basis(2, 1).to_string(), "z^2*w/(1-z*w)^2");
        assert_eq!((OmegaFunction::z() + OmegaFunction::w()).to_string(), "(z+w)");
        assert_eq!(OmegaFunction::monomial(-1, 0).scale(&q(-3, 1)).to_string(), "-3/z");
        assert_eq!(OmegaFunction::zero().to_string(), "0");
    }

    #[test]
    fn json_round_trip() {
        let f = OmegaFunction::basis(2, 1).scale(&GaussianRational::complex(1, 2, -3, 1));
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"numerator":[[2,1,"1/2","-3"]],"k":2}"#);
        let back: OmegaFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
