//! One-variable operators on the disk and the sphere, obtained from the two-variable ones by
//! restriction to d_𝔻(z) = (z, z̄) and d_Ĉ(z) = (z, -z̄).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::algebra::{GaussianRational, LaurentPoly, OmegaFunction, Scalar, Slot};
use crate::combinat::{binomial, lah};
use crate::error::{PmError, Result};
use crate::geometry::{ExtPoint2, MoebiusMap};
use crate::jets::{omega_along_curve, Series};
use crate::operators::{pm_derive_at, pullback_jet, pure, recursion_ladder};
use crate::star::{star_eval, BoundMode, StarParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Disk,
    Sphere,
}

impl Target {
    /// ε with w = ε z̄ on the diagonal.
    fn sign(&self) -> i64 {
        match self {
            Target::Disk => 1,
            Target::Sphere => -1,
        }
    }
}

/// Σ c_{ij} z^i z̄^j; the second exponent of the underlying polynomial belongs to z̄.
#[derive(Clone, PartialEq, Eq)]
pub struct SmoothPolyFunction {
    poly: LaurentPoly,
    target: Target,
}

impl SmoothPolyFunction {
    pub fn new(poly: LaurentPoly, target: Target) -> Self {
        SmoothPolyFunction { poly, target }
    }

    pub fn monomial(i: i32, j: i32, target: Target) -> Self {
        Self::new(LaurentPoly::monomial(i, j, GaussianRational::from_i64(1)), target)
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The holomorphic extension to Ω.
    pub fn extension(&self) -> OmegaFunction {
        OmegaFunction::from_poly(flip_signs(&self.poly, self.target))
    }

    /// 1 - ε|z|²
    fn metric_factor(&self) -> LaurentPoly {
        let mut p = LaurentPoly::constant(GaussianRational::from_i64(1));
        p.add_term(1, 1, GaussianRational::from_i64(-self.target.sign()));
        p
    }

    fn with(&self, poly: LaurentPoly) -> Self {
        Self::new(poly, self.target)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.with(self.poly.clone() + o.poly.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.with(&self.poly * &o.poly)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.with(self.poly.scale(c))
    }

    pub fn d(&self) -> Self {
        self.with(self.poly.partial_z())
    }

    pub fn d_bar(&self) -> Self {
        self.with(self.poly.partial_w())
    }

    /// Coefficient-level conjugation with the index swap.
    pub fn conjugate(&self) -> Self {
        self.with(LaurentPoly::from_terms(self.poly.terms().map(|(&(i, j), c)| ((j, i), c.conj()))))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poly.eval(&z, &z.conj())
    }

    /// Splits off the largest power of (1 - ε|z|²): self = (1 - ε|z|²)^e · rest.
    pub fn factored(&self) -> (u32, SmoothPolyFunction) {
        if self.poly.is_zero() {
            return (0, self.clone());
        }
        let mut rest = flip_signs(&self.poly, self.target);
        let mut e = 0;
        while let Some(q) = rest.div_one_minus_zw() {
            rest = q;
            e += 1;
        }
        (e, self.with(flip_signs(&rest, self.target)))
    }
}

/// c_{ij} ↦ ε^j c_{ij}, which maps between z̄ and w = ε z̄ coefficients.
fn flip_signs(p: &LaurentPoly, target: Target) -> LaurentPoly {
    match target {
        Target::Disk => p.clone(),
        Target::Sphere => p.map_coeffs(|_, j, c| if j.rem_euclid(2) == 1 { -c.clone() } else { c.clone() }),
    }
}

fn poly_text(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = p.terms().map(|(k, c)| (*k, c.clone())).collect();
    terms.sort_by_key(|&((i, j), _)| (i + j, j));
    let mut out = String::new();
    for (idx, ((i, j), c)) in terms.into_iter().enumerate() {
        let neg = c.is_real() && c.to_c64().re < 0.0;
        let mag = if neg { -c } else { c };
        if idx > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let mut factors = Vec::new();
        let unit = mag == GaussianRational::from_i64(1);
        if !unit || (i == 0 && j == 0) {
            let t = mag.to_string();
            factors.push(if mag.is_real() && !t.contains('/') { t } else { format!("({t})") });
        }
        for (var, e) in [("z", i), ("zb", j)] {
            match e {
                0 => {}
                1 => factors.push(var.to_string()),
                e => factors.push(format!("{var}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for SmoothPolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, rest) = self.factored();
        let factor = match self.target {
            Target::Disk => "(1-|z|^2)",
            Target::Sphere => "(1+|z|^2)",
        };
        let body = poly_text(&rest.poly);
        match (e, body.as_str()) {
            (0, _) => write!(f, "{body}"),
            (_, "1") => write!(f, "{factor}{}", power(e)),
            (_, b) if rest.poly.len() == 1 => write!(f, "{b}*{factor}{}", power(e)),
            _ => write!(f, "{factor}{}*({body})", power(e)),
        }
    }
}

fn power(e: u32) -> String {
    if e == 1 {
        String::new()
    } else {
        format!("^{e}")
    }
}

impl fmt::Debug for SmoothPolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothPolyFunction[{:?}]({self})", self.target)
    }
}

impl Serialize for SmoothPolyFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Restriction w := z̄ (disk) or w := -z̄ (sphere) of a polynomial class member.
pub fn diagonal_restrict(f: &OmegaFunction, target: Target) -> Result<SmoothPolyFunction> {
    let f = f.normalize();
    if f.k() > 0 {
        return Err(PmError::NonPolynomialRestriction);
    }
    Ok(SmoothPolyFunction::new(flip_signs(f.numerator(), target), target))
}

/// Point z of the disk or the sphere together with its embedding into Ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalPoint {
    pub z: Complex64,
    pub target: Target,
}

impl DiagonalPoint {
    pub fn new(z: Complex64, target: Target) -> Result<Self> {
        if target == Target::Disk && z.norm() >= 1.0 {
            return Err(PmError::InvalidPoint("disk points need |z| < 1".into()));
        }
        if !z.is_finite() {
            return Err(PmError::InvalidPoint("diagonal points are finite".into()));
        }
        Ok(DiagonalPoint { z, target })
    }

    pub fn embed(&self) -> ExtPoint2<Complex64> {
        ExtPoint2::finite(self.z, self.z.conj() * self.target.sign() as f64)
    }
}

fn gq(n: BigInt) -> GaussianRational {
    GaussianRational::from_bigint(n)
}

/// Aharonov sum: Dⁿf = Σ_k n!/k! C(n-1,k-1) (-εz̄)^{n-k} (1 - ε|z|²)^k ∂^k f.
/// The conjugated operator is the restriction of D_w^n, Σ_k (-z)^{n-k}(1 - ε|z|²)^k (ε∂̄)^k f.
pub fn classical_derive(f: &SmoothPolyFunction, n: u32, conjugated: bool) -> SmoothPolyFunction {
    if n == 0 {
        return f.clone();
    }
    let eps = f.target.sign();
    let metric = f.metric_factor();
    let mut acc = LaurentPoly::zero();
    let mut deriv = f.poly.clone();
    let mut metric_pow = LaurentPoly::constant(GaussianRational::from_i64(1));
    for k in 1..=n {
        deriv = if conjugated { deriv.partial_w().scale(&GaussianRational::from_i64(eps)) } else { deriv.partial_z() };
        metric_pow = &metric_pow * &metric;
        let weight = lah(n, k);
        let e = (n - k) as i32;
        let (mono, sign) = if conjugated { ((e, 0), -1) } else { ((0, e), -eps) };
        let c = gq(weight) * GaussianRational::from_i64(sign).powi(e as i64);
        let term = &(&LaurentPoly::monomial(mono.0, mono.1, c) * &metric_pow) * &deriv;
        acc = acc + term;
    }
    f.with(acc)
}

/// conj(Dⁿ(conj f)), the conjugation rule applied literally.
pub fn three_bar(f: &SmoothPolyFunction, n: u32) -> SmoothPolyFunction {
    classical_derive(&f.conjugate(), n, false).conjugate()
}

/// D_z^n (or D_w^n) of the extension, restricted back to the diagonal.
pub fn classical_derive_via_restriction(f: &SmoothPolyFunction, n: u32, conjugated: bool) -> Result<SmoothPolyFunction> {
    let slot = if conjugated { Slot::W } else { Slot::Z };
    diagonal_restrict(&pure(&f.extension(), slot, n), f.target)
}

/// D^{n+1} f = (1 - ε|z|²) ∂ Dⁿf - ε n z̄ Dⁿf, iterated.
pub fn classical_derive_recursive(f: &SmoothPolyFunction, n: u32) -> SmoothPolyFunction {
    let eps = f.target.sign();
    let metric = f.with(f.metric_factor());
    let mut cur = f.clone();
    for k in 0..n {
        let zb = SmoothPolyFunction::monomial(0, 1, f.target).scale(&GaussianRational::from_i64(-eps * k as i64));
        cur = metric.mul(&cur.d()).add(&zb.mul(&cur));
    }
    cur
}

/// D^{n+1} f = (1 - ε|z|²) ∂^{n+1}[(1 - ε|z|²)ⁿ f].
pub fn classical_derive_euclidean(f: &SmoothPolyFunction, n_plus_1: u32) -> SmoothPolyFunction {
    if n_plus_1 == 0 {
        return f.clone();
    }
    let metric = f.with(f.metric_factor());
    let mut inner = f.clone();
    for _ in 0..(n_plus_1 - 1) {
        inner = inner.mul(&metric);
    }
    for _ in 0..n_plus_1 {
        inner = inner.d();
    }
    metric.mul(&inner)
}

/// n-fold D̂ with D̂f = (1 - ε|z|²)² ∂f.
pub fn hat_d_iterate(f: &SmoothPolyFunction, n: u32) -> SmoothPolyFunction {
    let sq = f.with(&f.metric_factor() * &f.metric_factor());
    let mut cur = f.clone();
    for _ in 0..n {
        cur = sq.mul(&cur.d());
    }
    cur
}

/// (1 - ε|z|²)ⁿ Dⁿf = D̂ⁿf, decided structurally.
pub fn check_linearisation(f: &SmoothPolyFunction, n: u32) -> bool {
    let metric = f.with(f.metric_factor());
    let mut lhs = classical_derive(f, n, false);
    for _ in 0..n {
        lhs = lhs.mul(&metric);
    }
    lhs == hat_d_iterate(f, n)
}

/// Mixed operator D^{m,n} of the extension, restricted to the diagonal.
pub fn restricted_mixed(f: &SmoothPolyFunction, m: u32, n: u32) -> Result<SmoothPolyFunction> {
    let ladder = recursion_ladder(&f.extension(), m, n);
    diagonal_restrict(&ladder[m as usize][n as usize], f.target)
}

/// D^n f(z)/n! and D̄^n f(z)/n! for n ≤ order from Euclidean Taylor coefficients at (z, εz̄).
pub fn classical_coefficients(f: &OmegaFunction, p: &DiagonalPoint, order: usize, conjugated: bool) -> Result<Vec<Complex64>> {
    let eps = p.target.sign() as f64;
    let (z, w) = (p.z, p.z.conj() * eps);
    let one = Complex64::new(1.0, 0.0);
    // Taylor coefficients of f(z + u, w) or f(z, w + u)
    let c = if conjugated {
        omega_along_curve(f, Slot::W, &Series::variable(w, order), &z)?.coeffs
    } else {
        omega_along_curve(f, Slot::Z, &Series::variable(z, order), &w)?.coeffs
    };
    let metric = one - z * w;
    let lead = if conjugated { -z } else { -w };
    let mut out = vec![c[0]];
    for n in 1..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            let b = binomial(n as u32 - 1, k as u32 - 1);
            let b = b.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            acc += b * lead.powu((n - k) as u32) * metric.powu(k as u32) * c[k];
        }
        out.push(acc);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalStarResult {
    pub value: [f64; 2],
    pub tail_bound: f64,
    pub terms: usize,
    /// The same product recomputed from one-variable operators.
    pub one_variable_value: [f64; 2],
    pub one_variable_terms: usize,
}

impl DiagonalStarResult {
    pub fn value_c64(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }

    pub fn cross_deviation(&self) -> f64 {
        (self.value_c64() - Complex64::new(self.one_variable_value[0], self.one_variable_value[1])).norm()
    }
}

fn one_variable_sum(phi: &OmegaFunction, eta: &OmegaFunction, p: &DiagonalPoint, params: &StarParams) -> Result<(Complex64, usize)> {
    let x = params.hbar.inv();
    let mut order = 16.min(params.max_terms - 1);
    loop {
        let db = classical_coefficients(phi, p, order, true)?;
        let d = classical_coefficients(eta, p, order, false)?;
        let mut r = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prev = f64::INFINITY;
        for n in 0..=order {
            if n > 0 {
                r = r * n as f64 / (x + (n - 1) as f64);
            }
            let t = r * db[n] * d[n];
            acc += t;
            if n > 0 && t.norm() <= params.abs_tol && prev <= params.abs_tol {
                return Ok((acc, n + 1));
            }
            prev = t.norm();
        }
        if order + 1 >= params.max_terms {
            return Err(PmError::BudgetExhausted { value: acc, tail: prev, terms: order + 1 });
        }
        order = (2 * order + 1).min(params.max_terms - 1);
    }
}

fn diagonal_star(phi: &OmegaFunction, eta: &OmegaFunction, p: &DiagonalPoint, params: &StarParams) -> Result<DiagonalStarResult> {
    let r = star_eval(phi, eta, &p.embed(), params)?;
    let (v1, n1) = one_variable_sum(phi, eta, p, params)?;
    Ok(DiagonalStarResult {
        value: [r.value.re, r.value.im],
        tail_bound: r.tail_bound,
        terms: r.terms,
        one_variable_value: [v1.re, v1.im],
        one_variable_terms: n1,
    })
}

/// φ ⋆_{ħ,𝔻} η at z, from the Ω product at (z, z̄) and from Σ r_n (D̄ⁿφ/n!)(Dⁿη/n!).
pub fn star_disk(phi: &OmegaFunction, eta: &OmegaFunction, z: &DiagonalPoint, params: &StarParams) -> Result<DiagonalStarResult> {
    if z.target != Target::Disk {
        return Err(PmError::InvalidPoint("star_disk needs a disk point".into()));
    }
    diagonal_star(phi, eta, z, params)
}

/// d*_Ĉ(f ⋆ g) at z, evaluated at (z, -z̄) and recomputed from one-variable operators.
pub fn star_sphere(phi: &OmegaFunction, eta: &OmegaFunction, z: &DiagonalPoint, params: &StarParams) -> Result<DiagonalStarResult> {
    if z.target != Target::Sphere {
        return Err(PmError::InvalidPoint("star_sphere needs a sphere point".into()));
    }
    diagonal_star(phi, eta, z, params)
}

/// Σ 1/n! · 1/(-1/ħ)_{n↓} · B_n(f, g) at (z, -z̄): the series with B_n(f, g) and no (-1)^n.
pub fn sphere_display_series(f: &OmegaFunction, g: &OmegaFunction, z: &DiagonalPoint, params: &StarParams) -> Result<Complex64> {
    let q = z.embed();
    let (zz, ww) = q.finite_values().expect("finite");
    let prm = params.clone().with_mode(BoundMode::SuccessiveTerm);
    let order = prm.max_terms.min(80) - 1;
    let a = crate::star::pure_coefficients(f, Slot::Z, &zz, &ww, order)?;
    let b = crate::star::pure_coefficients(g, Slot::W, &zz, &ww, order)?;
    let x = params.hbar.inv();
    let mut r = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..=order {
        if n > 0 {
            // (-1)^n r_n with r_n as in the Ω series
            r = -r * n as f64 / (x + (n - 1) as f64);
        }
        acc += r * a[n] * b[n];
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiskInvarianceReport {
    pub points: usize,
    pub max_deviation: f64,
}

/// Dⁿ(f∘T) = (T'/|T'|)ⁿ (Dⁿf)∘T for T(z) = e^{iθ}(z - a)/(1 - āz), via the two-variable prefactor.
pub fn check_disk_invariance(f: &OmegaFunction, a: Complex64, theta: f64, n: u32, points: &[Complex64]) -> Result<DiskInvarianceReport> {
    let rot = Complex64::from_polar(1.0, theta);
    let t = MoebiusMap::new(rot, -rot * a, -a.conj(), Complex64::new(1.0, 0.0), false)?;
    let mut rep = DiskInvarianceReport { points: 0, max_deviation: 0.0 };
    for &z in points {
        let p = DiagonalPoint::new(z, Target::Disk)?.embed();
        let jet = pullback_jet(f, &t, &p, n as usize, 0)?;
        let provider = crate::jets::FnProvider {
            f: |_: &ExtPoint2<Complex64>, _: usize, _: usize| Ok(jet.clone()),
            domain: crate::jets::ProviderDomain::Omega,
        };
        let lhs = pm_derive_at(&provider, n, 0, &p)?;
        let tz = (rot * z - rot * a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
        let tprime = rot * (Complex64::new(1.0, 0.0) - a.norm_sqr()) / (Complex64::new(1.0, 0.0) - a.conj() * z).powu(2);
        let unit = tprime / tprime.norm();
        let target = DiagonalPoint::new(tz, Target::Disk)?.embed();
        let rhs = unit.powu(n) * pm_derive_at(f, n, 0, &target)?;
        rep.points += 1;
        rep.max_deviation = rep.max_deviation.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expression;
    use crate::star::asym_coeffs;

    fn disk(i: i32, j: i32) -> SmoothPolyFunction {
        SmoothPolyFunction::monomial(i, j, Target::Disk)
    }

    #[test]
    fn restriction_examples() {
        let zw = parse_expression("z*w").unwrap();
        assert_eq!(diagonal_restrict(&zw, Target::Disk).unwrap(), disk(1, 1));
        assert_eq!(
            diagonal_restrict(&zw, Target::Sphere).unwrap(),
            SmoothPolyFunction::monomial(1, 1, Target::Sphere).scale(&GaussianRational::from_i64(-1))
        );
        assert_eq!(diagonal_restrict(&parse_expression("z^2*w").unwrap(), Target::Disk).unwrap(), disk(2, 1));
        assert_eq!(diagonal_restrict(&OmegaFunction::basis(1, 0), Target::Disk), Err(PmError::NonPolynomialRestriction));
    }

    #[test]
    fn worked_derivatives() {
        let z = disk(1, 0);
        assert_eq!(classical_derive(&z, 1, false).to_string(), "(1-|z|^2)");
        let d2 = classical_derive(&disk(2, 0), 2, false);
        assert_eq!(d2.to_string(), "(1-|z|^2)*(2 - 6*z*zb)");
        assert_eq!(classical_derive(&disk(0, 1), 1, true).to_string(), "(1-|z|^2)");
        assert_eq!(three_bar(&disk(0, 1), 1), classical_derive(&disk(0, 1), 1, true));
        let hat = hat_d_iterate(&z, 2);
        assert_eq!(hat.to_string(), "-2*zb*(1-|z|^2)^3");
        assert!(check_linearisation(&z, 2));
        assert_eq!(hat_d_iterate(&z, 0), z);
    }

    #[test]
    fn one_and_two_variable_routes_agree() {
        for target in [Target::Disk, Target::Sphere] {
            for i in 0..=4 {
                for j in 0..=(4 - i) {
                    let f = SmoothPolyFunction::monomial(i, j, target);
                    for n in 0..=4 {
                        for conj in [false, true] {
                            assert_eq!(classical_derive(&f, n, conj), classical_derive_via_restriction(&f, n, conj).unwrap());
                        }
                        assert_eq!(classical_derive_recursive(&f, n), classical_derive(&f, n, false));
                        assert_eq!(classical_derive_euclidean(&f, n), classical_derive(&f, n, false));
                        assert!(check_linearisation(&f, n));
                    }
                }
            }
        }
    }

    #[test]
    fn three_bar_rule_and_the_sphere() {
        let f = SmoothPolyFunction::monomial(1, 2, Target::Disk);
        for n in 0..=4 {
            assert_eq!(three_bar(&f, n), classical_derive(&f, n, true));
        }
        // on the sphere the conjugation rule picks up (-1)^n against the restriction of D_w^n
        let g = SmoothPolyFunction::monomial(1, 2, Target::Sphere);
        for n in 0..=4 {
            let sign = GaussianRational::from_i64(if n % 2 == 0 { 1 } else { -1 });
            assert_eq!(three_bar(&g, n).scale(&sign), classical_derive(&g, n, true));
        }
    }

    #[test]
    fn disk_and_sphere_products() {
        let prm = StarParams::real(0.1);
        let half = DiagonalPoint::new(Complex64::new(0.5, 0.0), Target::Disk).unwrap();
        let r = star_disk(&OmegaFunction::w(), &OmegaFunction::z(), &half, &prm).unwrap();
        let direct = star_eval(&OmegaFunction::w(), &OmegaFunction::z(), &ExtPoint2::finite(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)), &prm).unwrap();
        assert_eq!(r.value_c64(), direct.value);
        assert!(r.cross_deviation() < 1e-12);
        let one = star_disk(&OmegaFunction::int(1), &parse_expression("z^2 + w").unwrap(), &half, &prm).unwrap();
        assert!((one.value_c64() - Complex64::new(0.75, 0.0)).norm() < 1e-15);
        let q = DiagonalPoint::new(Complex64::new(0.25, 0.0), Target::Sphere).unwrap();
        let s = star_sphere(&OmegaFunction::w(), &OmegaFunction::z(), &q, &prm).unwrap();
        let d = star_disk(&OmegaFunction::w(), &OmegaFunction::z(), &DiagonalPoint::new(Complex64::new(0.25, 0.0), Target::Disk).unwrap(), &prm).unwrap();
        assert!(s.cross_deviation() < 1e-12);
        assert!((s.value_c64() - d.value_c64()).norm() > 1e-3);
        let origin = DiagonalPoint::new(Complex64::new(0.0, 0.0), Target::Sphere).unwrap();
        let o = star_sphere(&OmegaFunction::z(), &OmegaFunction::w(), &origin, &prm).unwrap();
        assert!(o.value_c64().norm() < 1e-15);
    }

    #[test]
    fn first_order_coefficient_on_the_disk() {
        let a1 = asym_coeffs(&OmegaFunction::w(), &OmegaFunction::z(), 1).coefficients[1].clone();
        let r = diagonal_restrict(&a1, Target::Disk).unwrap();
        assert_eq!(r.to_string(), "(1-|z|^2)^2");
    }

    #[test]
    fn disk_automorphisms() {
        let f = parse_expression("z^3*w - 2*z + w^2").unwrap();
        let pts = [Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.05), Complex64::new(0.4, -0.4)];
        for n in 1..=3 {
            let rep = check_disk_invariance(&f, Complex64::new(0.25, -0.1), 0.7, n, &pts).unwrap();
            assert!(rep.max_deviation < 1e-12, "{rep:?}");
        }
    }
}
