mod asym;
mod assoc;
mod invariance;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{GaussianRational, OmegaFunction, Ring, Scalar, Slot};
use crate::error::{PmError, Result};
use crate::geometry::{ExtPoint2, ProjectiveCoord};
use crate::jets::{compose_with_phi, omega_along_curve, JetProvider, ProviderDomain, Series};
use crate::operators::{bidiff, pure};

pub use asym::{asym_coeffs, poisson_bracket, remainder_slope, AsymptoticSeries};
pub use assoc::{check_associativity, AssociativityReport};
pub use invariance::{check_dilation_termwise, check_star_invariance, PullbackProvider, StarInvarianceReport, StarOrder};

/// How the tail of the factorial series is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    CertifiedGeometric,
    SuccessiveTerm,
}

impl BoundMode {
    pub fn name(&self) -> &'static str {
        match self {
            BoundMode::CertifiedGeometric => "certified_geometric",
            BoundMode::SuccessiveTerm => "successive_term",
        }
    }
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundMode {
    type Err = PmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "certified_geometric" | "certified" => Ok(BoundMode::CertifiedGeometric),
            "successive_term" | "successive" => Ok(BoundMode::SuccessiveTerm),
            other => Err(PmError::InvalidParams(format!("unknown bound mode {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarParams {
    pub hbar: Complex64,
    pub max_terms: usize,
    pub abs_tol: f64,
    pub radius: Option<f64>,
    pub mode: BoundMode,
    pub samples: usize,
}

impl StarParams {
    pub fn new(hbar: Complex64) -> Self {
        StarParams {
            hbar,
            max_terms: 200,
            abs_tol: 1e-12,
            radius: None,
            mode: BoundMode::CertifiedGeometric,
            samples: 256,
        }
    }

    pub fn real(hbar: f64) -> Self {
        Self::new(Complex64::new(hbar, 0.0))
    }

    pub fn with_mode(mut self, mode: BoundMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_terms == 0 || !(self.abs_tol > 0.0) || self.samples < 8 {
            return Err(PmError::InvalidParams("need max_terms ≥ 1, abs_tol > 0, samples ≥ 8".into()));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0) {
                return Err(PmError::InvalidParams("radius must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarResult {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
    pub mode: BoundMode,
}

impl Serialize for StarResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StarResult", 4)?;
        st.serialize_field("value", &[self.value.re, self.value.im])?;
        st.serialize_field("tail_bound", &self.tail_bound)?;
        st.serialize_field("terms", &self.terms)?;
        st.serialize_field("mode", self.mode.name())?;
        st.end()
    }
}

/// (x)_{n↓} = x(x-1)⋯(x-n+1)
pub fn falling_factorial<S: Scalar>(x: &S, n: u32) -> S {
    let mut acc = S::one();
    for j in 0..n {
        acc = acc * (x.clone() - S::from_i64(j as i64));
    }
    acc
}

/// Stirling numbers of the second kind, with {-1,-1} = 1 and {m,-1} = 0 otherwise.
pub fn stirling2(n: i64, k: i64) -> BigInt {
    if n == -1 && k == -1 {
        return BigInt::one();
    }
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    let mut row = vec![BigInt::one()];
    for i in 1..=n {
        let mut next = vec![BigInt::zero(); i + 1];
        for j in 1..=i {
            let stay = if j < i { &row[j] * BigInt::from(j) } else { BigInt::zero() };
            next[j] = stay + &row[j - 1];
        }
        row = next;
    }
    row[k].clone()
}

fn reciprocal_hbar(hbar: Complex64) -> Result<Complex64> {
    if hbar == Complex64::new(0.0, 0.0) || !hbar.is_finite() {
        return Err(PmError::OutsideDeformationDomain);
    }
    Ok(hbar.inv())
}

/// α with |(-1/ħ)_{n↓}| ≥ n!/α^n for every n.
pub fn alpha_for(hbar: Complex64) -> Result<f64> {
    let x = reciprocal_hbar(hbar)?;
    let big_j = (2.0 * x.norm()).ceil() as usize + 2;
    // beyond J the quotient is at least this
    let tail_lb = if x.re >= 1.0 { 1.0 } else { 1.0 - (1.0 - x.re) / (big_j as f64 + 2.0) };
    let mut c = tail_lb;
    for j in 0..=big_j {
        let q = (x + j as f64).norm() / (j as f64 + 1.0);
        c = c.min(q);
    }
    if !(c > 1e-12) {
        return Err(PmError::OutsideDeformationDomain);
    }
    Ok(1.0 / c)
}

/// Exact membership test for the deformation domain.
pub fn in_deformation_domain(hbar: &GaussianRational) -> bool {
    if hbar.is_zero() {
        return false;
    }
    let x = -(GaussianRational::from_i64(1) / hbar.clone());
    if !x.is_real() {
        return true;
    }
    let re = x.to_c64().re;
    !(re >= 1.0 && GaussianRational::from_i64(re.round() as i64) == x)
}

/// r_n = n!/(1/ħ)(1/ħ + 1)⋯(1/ħ + n - 1), so term n of f⋆g is r_n a_n b_n.
fn ratio_sequence(hbar: Complex64, len: usize) -> Result<Vec<Complex64>> {
    let x = reciprocal_hbar(hbar)?;
    let mut r = Vec::with_capacity(len);
    let mut acc = Complex64::new(1.0, 0.0);
    for n in 0..len {
        if n > 0 {
            let d = x + (n - 1) as f64;
            if d.norm() < 1e-300 {
                return Err(PmError::OutsideDeformationDomain);
            }
            acc = acc * n as f64 / d;
        }
        r.push(acc);
    }
    Ok(r)
}

fn ratio_sequence_exact(hbar: &GaussianRational, len: usize) -> Result<Vec<GaussianRational>> {
    if !in_deformation_domain(hbar) {
        return Err(PmError::OutsideDeformationDomain);
    }
    let x = GaussianRational::from_i64(1) / hbar.clone();
    let mut r = Vec::with_capacity(len);
    let mut acc = GaussianRational::from_i64(1);
    for n in 0..len {
        if n > 0 {
            acc = acc * GaussianRational::from_i64(n as i64) / (x.clone() + GaussianRational::from_i64(n as i64 - 1));
        }
        r.push(acc.clone());
    }
    Ok(r)
}

/// D_z^n g(p)/n! (slot Z) or D_w^n f(p)/n! (slot W) for n = 0..=order.
pub fn pure_coefficients<S: Scalar>(f: &OmegaFunction, slot: Slot, z: &S, w: &S, order: usize) -> Result<Vec<S>> {
    let one = S::one();
    let series = match slot {
        Slot::Z => omega_along_curve(f, Slot::Z, &Series::moebius(&one, z, w, &one, order)?, w)?,
        Slot::W => omega_along_curve(f, Slot::W, &Series::moebius(&one, w, z, &one, order)?, z)?,
    };
    Ok(series.coeffs)
}

/// Smallest n ≤ limit with D^n h = 0 in the given slot; all higher orders then vanish too.
pub fn vanishing_order(h: &OmegaFunction, slot: Slot, limit: u32) -> Option<u32> {
    if h.is_zero() {
        return Some(0);
    }
    if h.numerator().len() > 16 {
        return None;
    }
    (1..=limit).find(|&n| pure(h, slot, n).is_zero())
}

fn termination(f: &OmegaFunction, g: &OmegaFunction) -> Option<usize> {
    match (vanishing_order(g, Slot::Z, 4), vanishing_order(f, Slot::W, 4)) {
        (Some(a), Some(b)) => Some(a.min(b) as usize),
        (Some(a), None) | (None, Some(a)) => Some(a as usize),
        (None, None) => None,
    }
}

fn rounding_allowance(abs_sum: f64, terms: usize) -> f64 {
    8.0 * f64::EPSILON * abs_sum * (terms.max(1) as f64)
}

/// Terms r_n (-1)^n ... of f⋆g are r_n a_n b_n with a = D_z^n g/n!, b = D_w^n f/n!.
fn sum_terms(r: &[Complex64], a: &[Complex64], b: &[Complex64], count: usize) -> (Complex64, f64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for n in 0..count {
        let t = r[n] * a[n] * b[n];
        value += t;
        abs += t.norm();
    }
    (value, abs)
}

/// Looks for two consecutive small terms; returns (terms used, tail estimate).
fn successive_stop(terms: &[Complex64], tol: f64) -> Option<(usize, f64)> {
    for n in 1..terms.len() {
        let (prev, cur) = (terms[n - 1].norm(), terms[n].norm());
        if prev <= tol && cur <= tol {
            let rho = if prev > 0.0 { cur / prev } else { 0.0 };
            let tail = if rho < 0.9 { cur * rho / (1.0 - rho) + cur } else { 10.0 * (cur + prev) };
            return Some((n + 1, tail));
        }
    }
    None
}

/// Sup of |h| over |u| = R from `samples` equispaced points plus one refinement around the maximum.
pub fn sup_on_circle<F>(h: F, radius: f64, samples: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let at = |theta: f64| h(Complex64::from_polar(radius, theta)).map(|v| v.norm());
    let step = 2.0 * PI / samples as f64;
    let mut best = (0.0, 0usize);
    for k in 0..samples {
        let v = at(k as f64 * step)?;
        if !v.is_finite() {
            return Err(PmError::CertificationUnavailable("sup-norm sample is not finite".into()));
        }
        if v > best.0 {
            best = (v, k);
        }
    }
    let mut sup = best.0;
    let centre = best.1 as f64 * step;
    for j in -16i32..=16 {
        sup = sup.max(at(centre + j as f64 * step / 16.0)?);
    }
    Ok(sup)
}

/// Distance from the origin of the nearest singularity of u ↦ g((z+u)/(1+wu), w)
/// and v ↦ f(z, (w+v)/(1+zv)).
fn pole_distance(f: &OmegaFunction, g: &OmegaFunction, z: Complex64, w: Complex64) -> f64 {
    let mut d = f64::INFINITY;
    if g.has_negative_z() {
        d = d.min(z.norm());
    }
    if !g.finite_at_z_infinity() && w.norm() > 0.0 {
        d = d.min(1.0 / w.norm());
    }
    if f.has_negative_w() {
        d = d.min(w.norm());
    }
    if !f.finite_at_w_infinity() && z.norm() > 0.0 {
        d = d.min(1.0 / z.norm());
    }
    d
}

fn choose_radius(params: &StarParams, alpha: f64, dist: f64) -> Result<f64> {
    let floor = alpha.sqrt();
    if let Some(r) = params.radius {
        if r <= floor {
            return Err(PmError::CertificationUnavailable(format!("radius {r} needs R² > α = {alpha}")));
        }
        if r >= dist {
            return Err(PmError::CertificationUnavailable(format!("radius {r} reaches a singularity at {dist}")));
        }
        return Ok(r);
    }
    let r = (2.0 * alpha).sqrt().max(1.0);
    let cap = 0.95 * dist;
    if r < cap {
        return Ok(r);
    }
    if floor < cap {
        return Ok((floor * cap).sqrt());
    }
    Err(PmError::CertificationUnavailable(format!("singularity at distance {dist} leaves no radius above √α = {floor}")))
}

/// Sup-norms of g along the Z-slot circle and of f along the W-slot circle.
fn cauchy_norms(f: &OmegaFunction, g: &OmegaFunction, z: Complex64, w: Complex64, r: f64, samples: usize) -> Result<(f64, f64)> {
    let one = Complex64::new(1.0, 0.0);
    let mg = sup_on_circle(
        |u| g.evaluate(&ExtPoint2::new(ProjectiveCoord::new(z + u, one + w * u)?, ProjectiveCoord::finite(w))),
        r,
        samples,
    )?;
    let mf = sup_on_circle(
        |v| f.evaluate(&ExtPoint2::new(ProjectiveCoord::finite(z), ProjectiveCoord::new(w + v, one + z * v)?)),
        r,
        samples,
    )?;
    Ok((mf, mg))
}

/// (f ⋆_ħ g)(p) as the factorial series Σ r_n · D_z^n g(p)/n! · D_w^n f(p)/n!.
pub fn star_eval(f: &OmegaFunction, g: &OmegaFunction, p: &ExtPoint2<Complex64>, params: &StarParams) -> Result<StarResult> {
    params.validate()?;
    if !p.in_domain(crate::geometry::DomainTag::Omega) {
        return Err(PmError::InvalidPoint("point is not in Ω".into()));
    }
    let Some((z, w)) = p.finite_values() else {
        // (f⋆g)(p) = (g∘F ⋆ f∘F)(F p)
        return star_eval(&g.flip(), &f.flip(), &p.flip_point(), params);
    };
    reciprocal_hbar(params.hbar)?;
    let stop = termination(f, g);
    match params.mode {
        BoundMode::CertifiedGeometric => star_certified(f, g, z, w, params, stop),
        BoundMode::SuccessiveTerm => {
            let fetch = |order: usize| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
                Ok((pure_coefficients(g, Slot::Z, &z, &w, order)?, pure_coefficients(f, Slot::W, &z, &w, order)?))
            };
            star_successive(fetch, params, stop)
        }
    }
}

fn star_certified(
    f: &OmegaFunction,
    g: &OmegaFunction,
    z: Complex64,
    w: Complex64,
    params: &StarParams,
    stop: Option<usize>,
) -> Result<StarResult> {
    let mode = BoundMode::CertifiedGeometric;
    if let Some(t) = stop.filter(|&t| t <= params.max_terms) {
        let len = t.max(1);
        let a = pure_coefficients(g, Slot::Z, &z, &w, len - 1)?;
        let b = pure_coefficients(f, Slot::W, &z, &w, len - 1)?;
        let r = ratio_sequence(params.hbar, len)?;
        let (value, abs) = sum_terms(&r, &a, &b, t);
        return Ok(StarResult { value, tail_bound: rounding_allowance(abs, t), terms: t, mode });
    }
    let alpha = alpha_for(params.hbar)?;
    let radius = choose_radius(params, alpha, pole_distance(f, g, z, w))?;
    let (mf, mg) = cauchy_norms(f, g, z, w, radius, params.samples)?;
    let q = alpha / (radius * radius);
    let scale = mf * mg;
    let tail_after = |n: usize| scale * q.powi(n as i32 + 1) / (1.0 - q);
    let mut last = 0;
    while tail_after(last) > params.abs_tol && last + 1 < params.max_terms {
        last += 1;
    }
    let count = last + 1;
    let a = pure_coefficients(g, Slot::Z, &z, &w, last)?;
    let b = pure_coefficients(f, Slot::W, &z, &w, last)?;
    let r = ratio_sequence(params.hbar, count)?;
    let (value, abs) = sum_terms(&r, &a, &b, count);
    let tail = tail_after(last) + rounding_allowance(abs, count);
    if tail_after(last) > params.abs_tol {
        return Err(PmError::BudgetExhausted { value, tail, terms: count });
    }
    Ok(StarResult { value, tail_bound: tail, terms: count, mode })
}

fn star_successive<F>(fetch: F, params: &StarParams, stop: Option<usize>) -> Result<StarResult>
where
    F: Fn(usize) -> Result<(Vec<Complex64>, Vec<Complex64>)>,
{
    let mode = BoundMode::SuccessiveTerm;
    if let Some(t) = stop.filter(|&t| t <= params.max_terms) {
        let len = t.max(1);
        let (a, b) = fetch(len - 1)?;
        let r = ratio_sequence(params.hbar, len)?;
        let (value, abs) = sum_terms(&r, &a, &b, t);
        return Ok(StarResult { value, tail_bound: rounding_allowance(abs, t), terms: t, mode });
    }
    let mut order = 16.min(params.max_terms - 1);
    loop {
        let (a, b) = fetch(order)?;
        let r = ratio_sequence(params.hbar, order + 1)?;
        let terms: Vec<Complex64> = (0..=order).map(|n| r[n] * a[n] * b[n]).collect();
        if let Some((count, tail)) = successive_stop(&terms, params.abs_tol) {
            let (value, abs) = sum_terms(&r, &a, &b, count);
            return Ok(StarResult { value, tail_bound: tail + rounding_allowance(abs, count), terms: count, mode });
        }
        if order + 1 >= params.max_terms {
            let (value, _) = sum_terms(&r, &a, &b, order + 1);
            let k = terms.len();
            let tail = terms[k - 1].norm() + if k > 1 { terms[k - 2].norm() } else { 0.0 };
            return Err(PmError::BudgetExhausted { value, tail, terms: order + 1 });
        }
        order = (2 * order + 1).min(params.max_terms - 1);
    }
}

fn covers(have: ProviderDomain, need: ProviderDomain) -> bool {
    use ProviderDomain::*;
    match have {
        Omega => true,
        OmegaPlus => matches!(need, OmegaPlus | Bidisk),
        OmegaMinus => matches!(need, OmegaMinus | Bidisk),
        Bidisk => need == Bidisk,
    }
}

/// Admissible (f, g) domain pairings for f ⋆ g.
pub const PAIRINGS: [(ProviderDomain, ProviderDomain); 4] = [
    (ProviderDomain::Bidisk, ProviderDomain::OmegaPlus),
    (ProviderDomain::OmegaMinus, ProviderDomain::Bidisk),
    (ProviderDomain::Omega, ProviderDomain::OmegaPlus),
    (ProviderDomain::OmegaMinus, ProviderDomain::Omega),
];

pub fn pairing_allowed(fd: ProviderDomain, gd: ProviderDomain) -> bool {
    PAIRINGS.iter().any(|&(a, b)| covers(fd, a) && covers(gd, b))
}

/// f⋆g from jets of opaque providers; successive-term estimate only.
pub fn star_eval_jets<F, G>(fp: &F, gp: &G, p: &ExtPoint2<Complex64>, params: &StarParams) -> Result<StarResult>
where
    F: JetProvider<Complex64> + ?Sized,
    G: JetProvider<Complex64> + ?Sized,
{
    params.validate()?;
    let (fd, gd) = (fp.domain(), gp.domain());
    if !pairing_allowed(fd, gd) {
        return Err(PmError::DomainPairingViolation(format!("{fd:?} with {gd:?}")));
    }
    if !fd.contains(p) || !gd.contains(p) {
        return Err(PmError::DomainPairingViolation("point is not interior to both domains".into()));
    }
    reciprocal_hbar(params.hbar)?;
    let fetch = |order: usize| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let gj = compose_with_phi(gp, p, order, 0)?;
        let fj = compose_with_phi(fp, p, 0, order)?;
        Ok(((0..=order).map(|n| *gj.coeff(n, 0)).collect(), (0..=order).map(|n| *fj.coeff(0, n)).collect()))
    };
    star_successive(fetch, params, None)
}

/// The series coefficients c_n = (-1)^n/n! · B_n(g, f), so f⋆g = Σ c_n/(-1/ħ)_{n↓}.
pub fn star_coefficients(f: &OmegaFunction, g: &OmegaFunction, count: u32) -> Vec<OmegaFunction> {
    (0..count)
        .map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let c = GaussianRational::from_bigint(BigInt::from(sign)) / GaussianRational::from_bigint(crate::combinat::factorial(n));
            bidiff(g, f, n).scale(&c)
        })
        .collect()
}

/// Exact value of f⋆g at a point when the series terminates within `limit` terms.
pub fn star_exact(
    f: &OmegaFunction,
    g: &OmegaFunction,
    p: &ExtPoint2<GaussianRational>,
    hbar: &GaussianRational,
    limit: u32,
) -> Result<Option<GaussianRational>> {
    let stop = match (vanishing_order(g, Slot::Z, limit), vanishing_order(f, Slot::W, limit)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return Ok(None),
    };
    if !p.is_finite() {
        return star_exact(&g.flip(), &f.flip(), &p.flip_point(), hbar, limit);
    }
    let (z, w) = p.finite_values().expect("finite");
    let len = stop.max(1) as usize;
    let r = ratio_sequence_exact(hbar, len)?;
    let a = pure_coefficients(g, Slot::Z, &z, &w, len - 1)?;
    let b = pure_coefficients(f, Slot::W, &z, &w, len - 1)?;
    let mut acc = GaussianRational::zero();
    for n in 0..stop as usize {
        acc = acc + r[n].clone() * a[n].clone() * b[n].clone();
    }
    Ok(Some(acc))
}

/// Discrete Cauchy mean of ħ ↦ (f⋆_ħ g)(p) over a circle inside the deformation domain.
#[derive(Clone, Debug, Serialize)]
pub struct HolomorphyReport {
    pub centre_value: [f64; 2],
    pub mean_value: [f64; 2],
    pub deviation: f64,
    pub max_tail: f64,
}

impl HolomorphyReport {
    pub fn passes(&self) -> bool {
        self.deviation <= 10.0 * self.max_tail
    }
}

pub fn check_holomorphy(
    f: &OmegaFunction,
    g: &OmegaFunction,
    p: &ExtPoint2<Complex64>,
    centre: Complex64,
    radius: f64,
    samples: usize,
    params: &StarParams,
) -> Result<HolomorphyReport> {
    let at = |h: Complex64| star_eval(f, g, p, &StarParams { hbar: h, ..params.clone() });
    let c = at(centre)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut max_tail = c.tail_bound;
    for k in 0..samples {
        let h = centre + Complex64::from_polar(radius, 2.0 * PI * k as f64 / samples as f64);
        let r = at(h)?;
        sum += r.value;
        max_tail = max_tail.max(r.tail_bound);
    }
    let mean = sum / samples as f64;
    // the mean of a trapezoidal rule with this many nodes carries its own rounding
    max_tail = max_tail.max(16.0 * f64::EPSILON * c.value.norm().max(1.0));
    Ok(HolomorphyReport {
        centre_value: [c.value.re, c.value.im],
        mean_value: [mean.re, mean.im],
        deviation: (mean - c.value).norm(),
        max_tail,
    })
}
