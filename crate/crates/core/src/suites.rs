//! Seeded property suites behind `pm verify`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{GaussianRational, OmegaFunction, Pullback, Scalar, Slot};
use crate::error::{PmError, Result};
use crate::geometry::{ExtPoint2, MoebiusMap};
use crate::operators::{
    b_coefficient, bidiff, check_invariance, check_invariance_symbolic, d01, d10, derive_laplace, kernel_basis, kernel_rank_check,
    laplace_poly, laplace_poly_diagonal, pm_derive, pure, AlphaConvention, PMethod,
};
use crate::random::{corpus, random_omega, random_phi, random_point, rng, OmegaShape};
use crate::restrict::{
    check_disk_invariance, classical_derive, classical_derive_euclidean, classical_derive_recursive, classical_derive_via_restriction,
    star_disk, star_sphere, DiagonalPoint, SmoothPolyFunction, Target,
};
use crate::star::{
    asym_coeffs, check_associativity, check_dilation_termwise, check_holomorphy, check_star_invariance, poisson_bracket, remainder_slope,
    star_eval, star_eval_jets, star_exact, BoundMode, StarOrder, StarParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Invariance,
    Kernels,
    Positivity,
    Star,
    Asymptotics,
    Restriction,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Identities, Suite::Invariance, Suite::Kernels, Suite::Positivity, Suite::Star, Suite::Asymptotics, Suite::Restriction];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Invariance => "invariance",
            Suite::Kernels => "kernels",
            Suite::Positivity => "positivity",
            Suite::Star => "star",
            Suite::Asymptotics => "asymptotics",
            Suite::Restriction => "restriction",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = PmError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| PmError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub instances: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

/// Accumulates instance counts and deviations for one property.
struct Tally {
    name: &'static str,
    instances: usize,
    max_deviation: f64,
    failures: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, instances: 0, max_deviation: 0.0, failures: 0 }
    }

    fn exact(&mut self, ok: bool) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            self.max_deviation = self.max_deviation.max(1.0);
        }
    }

    fn within(&mut self, deviation: f64, tol: f64) {
        self.instances += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        if !(deviation <= tol) {
            self.failures += 1;
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult { name: self.name.to_string(), instances: self.instances, max_deviation: self.max_deviation, passed: self.failures == 0 }
    }
}

pub fn verify_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let properties = match suite {
        Suite::Identities => identities(seed)?,
        Suite::Invariance => invariance(seed)?,
        Suite::Kernels => kernels(),
        Suite::Positivity => positivity(),
        Suite::Star => star(seed)?,
        Suite::Asymptotics => asymptotics(seed)?,
        Suite::Restriction => restriction(seed)?,
    };
    let passed = properties.iter().all(|p| p.passed);
    Ok(SuiteReport { suite, seed, properties, passed })
}

fn gq(n: i64) -> GaussianRational {
    GaussianRational::from_i64(n)
}

fn identities(seed: u64) -> Result<Vec<PropertyResult>> {
    let fs = corpus(seed, 8);
    let mut paths = Tally::new("pathway_equality");
    let mut column = Tally::new("pure_column_recursion");
    let mut mixed = Tally::new("mixed_recursion");
    for f in &fs {
        for m in 0..=6u32 {
            for n in 0..=(6 - m) {
                let reference = pm_derive(f, m, n, PMethod::Explicit)?;
                for method in PMethod::ALL {
                    if method != PMethod::Explicit && method.applies_to(m, n) {
                        paths.exact(pm_derive(f, m, n, method)? == reference);
                    }
                }
            }
        }
        for a in 0..4u32 {
            let g = pm_derive(f, a, 0, PMethod::Explicit)?;
            let next = d10(&g) - g.mul_monomial(0, 1).scale(&gq(a as i64));
            column.exact(next == pm_derive(f, a + 1, 0, PMethod::Explicit)?);
            for b in 0..3u32 {
                let g = pm_derive(f, a, b, PMethod::Explicit)?;
                let mut next = d01(&g) + g.mul_monomial(1, 0).scale(&gq(a as i64 - b as i64));
                if a >= 2 {
                    next = next + pm_derive(f, a - 1, b, PMethod::Explicit)?.scale(&gq((a * (a - 1)) as i64));
                }
                mixed.exact(next == pm_derive(f, a, b + 1, PMethod::Explicit)?);
            }
        }
    }
    let mut factorial = Tally::new("factorial_alpha_fails_on_z_at_2_1");
    let z = OmegaFunction::z();
    factorial.exact(derive_laplace(&z, 2, 1, AlphaConvention::Factorial) != pm_derive(&z, 2, 1, PMethod::Definition)?);
    let mut corrected = Tally::new("corrected_alpha_factorisation");
    for f in fs.iter().take(3) {
        for m in 0..=4u32 {
            for n in 0..=(4 - m) {
                corrected.exact(derive_laplace(f, m, n, AlphaConvention::Corrected) == pm_derive(f, m, n, PMethod::Definition)?);
            }
        }
    }
    Ok(vec![paths.finish(), column.finish(), mixed.finish(), factorial.finish(), corrected.finish()])
}

fn invariance(seed: u64) -> Result<Vec<PropertyResult>> {
    let fs = corpus(seed, 6);
    let mut r = rng(seed ^ 0x5eed);
    let mut dil = Tally::new("dilation_exact");
    let mut flip = Tally::new("flip_exact");
    let mut phi = Tally::new("phi_numeric");
    let mut bi = Tally::new("bidiff_dilation_exact");
    let mut bi_flip = Tally::new("bidiff_flip_reverses_operands");
    let gamma = GaussianRational::complex(2, 3, 1, 2);
    let rho = MoebiusMap::rho(gamma.clone())?;
    for f in &fs {
        for m in 0..=4u32 {
            for n in 0..=(4 - m) {
                dil.exact(check_invariance_symbolic(f, &rho, m, n)?);
                flip.exact(check_invariance_symbolic(f, &MoebiusMap::flip_map(), m, n)?);
            }
        }
    }
    for idx in 0..4 {
        let f = &fs[idx % fs.len()];
        let (a, b) = random_phi(&mut r);
        let t = MoebiusMap::phi(a.to_c64(), b.to_c64())?;
        let pts: Vec<ExtPoint2<Complex64>> = (0..5).map(|_| random_point(&mut r).to_c64()).collect();
        for m in 0..=4u32 {
            for n in 0..=(4 - m) {
                match check_invariance(f, &t, m, n, &pts) {
                    Ok(rep) => phi.within(rep.max_rel_deviation, 1e-10),
                    Err(PmError::PoleAtPoint(_)) | Err(PmError::SingularPrefactor) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let flip_kind = Pullback::Flip;
    let dil_kind = Pullback::Dilation(gamma);
    for pair in fs.chunks(2) {
        let (f, g) = (&pair[0], &pair[pair.len() - 1]);
        for n in 0..=4 {
            bi.exact(bidiff(&f.pullback(&dil_kind)?, &g.pullback(&dil_kind)?, n) == bidiff(f, g, n).pullback(&dil_kind)?);
            bi_flip.exact(bidiff(&f.flip(), &g.flip(), n) == bidiff(g, f, n).pullback(&flip_kind)?);
        }
    }
    Ok(vec![dil.finish(), flip.finish(), phi.finish(), bi.finish(), bi_flip.finish()])
}

fn kernels() -> Vec<PropertyResult> {
    let mut gen = Tally::new("generators_annihilated");
    let mut rank = Tally::new("kernel_rank_matches");
    for n in 0..=4u32 {
        for slot in [Slot::Z, Slot::W] {
            for g in kernel_basis(n, slot, 6) {
                gen.exact(pure(&g, slot, n + 1).is_zero());
            }
            let rep = kernel_rank_check(n, slot, 6);
            rank.exact(rep.kernel_dim == rep.expected_kernel_dim && rep.generators_annihilated);
        }
    }
    vec![gen.finish(), rank.finish()]
}

fn positivity() -> Vec<PropertyResult> {
    let mut shape = Tally::new("polynomials_monic_min_degree_positive");
    let mut diag = Tally::new("diagonal_family");
    let mut bk = Tally::new("b_formula");
    let ps = laplace_poly_diagonal(12);
    for (n, p) in ps.iter().enumerate() {
        let positive = p.coeffs().iter().skip(1).all(|c| c.is_positive());
        diag.exact(p.is_monic() && p.degree() == n && (n == 0 || (p.coeffs()[0].is_zero() && positive)));
    }
    for m in 0..=8u32 {
        for n in 0..=8u32 {
            let p = laplace_poly(m, n, AlphaConvention::Corrected);
            let d = m.min(n) as usize;
            let positive = p.coeffs().iter().skip(1).all(|c| c.is_positive());
            let constant_ok = m == 0 || n == 0 || p.coeffs()[0].is_zero();
            shape.exact(p.is_monic() && p.degree() == d && constant_ok && positive);
        }
    }
    for np1 in 1..=7u32 {
        let p = &ps[np1 as usize];
        for k in 1..=np1 {
            bk.exact(b_coefficient(k, np1) == num_rational::BigRational::from_integer(p.coeffs()[k as usize].clone()));
        }
    }
    vec![diag.finish(), shape.finish(), bk.finish()]
}

fn pick_point<F: Fn(&ExtPoint2<Complex64>) -> bool, R: rand::Rng>(r: &mut R, ok: F) -> ExtPoint2<Complex64> {
    loop {
        let p = random_point(r).to_c64();
        if ok(&p) {
            return p;
        }
    }
}

fn star(seed: u64) -> Result<Vec<PropertyResult>> {
    let mut r = rng(seed ^ 0x57a2);
    let mut unit = Tally::new("one_star_one");
    let mut z_left = Tally::new("z_star_g_exact");
    let mut oracle = Tally::new("w_star_z_closed_form");
    let mut certified = Tally::new("certified_tail_dominates");
    let mut jets = Tally::new("jets_match_symbolic");
    let mut holo = Tally::new("holomorphic_in_hbar");
    let mut assoc = Tally::new("associativity");
    let mut inv = Tally::new("phi_invariance");
    let mut dil = Tally::new("dilation_termwise");
    let mut flip = Tally::new("flip_reverses_operands");
    let q = |a, b| GaussianRational::ratio(a, b);
    let one = OmegaFunction::int(1);
    let p0 = ExtPoint2::finite(q(1, 2), q(1, 3));
    unit.exact(star_exact(&one, &one, &p0, &q(1, 10), 2)? == Some(gq(1)));
    for _ in 0..5 {
        let g = random_omega(&mut r, OmegaShape::CORPUS);
        let p = random_point(&mut r);
        match star_exact(&OmegaFunction::z(), &g, &p, &q(1, 10), 2) {
            Ok(v) => z_left.exact(v == Some(p.z.finite_value().expect("finite") * g.evaluate(&p)?)),
            Err(PmError::PoleAtPoint(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let closed = {
        let (zw, x) = (1.0 / 6.0, 10.0);
        let mut acc = zw;
        let mut rn = 1.0;
        for n in 1..120 {
            rn *= n as f64 / (x + (n - 1) as f64);
            acc += rn * f64::powi(zw, n as i32 - 1) * (1.0 - zw) * (1.0 - zw);
        }
        acc
    };
    let v = star_eval(&OmegaFunction::w(), &OmegaFunction::z(), &p0.to_c64(), &StarParams::real(0.1))?;
    oracle.within((v.value - Complex64::new(closed, 0.0)).norm(), 1e-9);
    let hbars = [Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.1), Complex64::new(0.05, 0.05)];
    for _ in 0..3 {
        let f = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let g = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let p = random_point(&mut r).to_c64();
        for h in hbars {
            let c = star_eval(&f, &g, &p, &StarParams::new(h))?;
            let fine = star_eval(&f, &g, &p, &StarParams::new(h).with_mode(BoundMode::SuccessiveTerm).with_tol(1e-16))?;
            let err = (c.value - fine.value).norm();
            certified.within(err - fine.tail_bound, c.tail_bound);
            let prm = StarParams::new(h).with_mode(BoundMode::SuccessiveTerm).with_tol(1e-14);
            let a = star_eval(&f, &g, &p, &prm)?;
            let b = star_eval_jets(&f, &g, &p, &prm)?;
            jets.within((a.value - b.value).norm(), 1e-10);
        }
        let rep = check_holomorphy(&f, &g, &p, Complex64::new(0.1, 0.02), 0.02, 64, &StarParams::real(0.1))?;
        holo.within(rep.deviation, 10.0 * rep.max_tail);
    }
    for _ in 0..2 {
        let f = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let g = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let h = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let p = random_point(&mut r).to_c64();
        let (z, w) = p.finite_values().expect("finite");
        let rep = check_associativity(&f, &g, &h, z, w, &StarParams::real(0.1))?;
        assoc.within(rep.deviation, rep.bound);
    }
    let f = OmegaFunction::basis(1, 0);
    let g = OmegaFunction::basis(0, 1);
    for _ in 0..2 {
        let (a, b) = random_phi(&mut r);
        let t = MoebiusMap::phi(a.to_c64(), b.to_c64())?;
        let pts = vec![pick_point(&mut r, |p| t.apply(p).is_finite())];
        let rep = check_star_invariance(&f, &g, &t, &pts, &StarParams::real(0.1).with_tol(1e-13), StarOrder::Literal)?;
        inv.within(rep.worst_ratio, 2.0);
    }
    dil.exact(check_dilation_termwise(&OmegaFunction::w(), &OmegaFunction::z(), &gq(2), 12)?);
    let rep = check_star_invariance(&f, &g, &MoebiusMap::flip_map(), &[p0.to_c64()], &StarParams::real(0.1), StarOrder::Swapped)?;
    flip.within(rep.worst_ratio, 2.0);
    Ok(vec![
        unit.finish(),
        z_left.finish(),
        oracle.finish(),
        certified.finish(),
        jets.finish(),
        holo.finish(),
        assoc.finish(),
        inv.finish(),
        dil.finish(),
        flip.finish(),
    ])
}

/// Rays arg ħ ∈ {0, π/2, -π/2, 0.99·3π/4}.
pub const RAYS: [f64; 4] =
    [0.0, std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2, 0.99 * 3.0 * std::f64::consts::FRAC_PI_4];

pub const SLOPE_RADII: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

/// Random low-degree pair whose asymptotic series does not stop before a_3,
/// so the remainders after a_0, a_1, a_2 are not identically zero.
pub fn asymptotic_pair<R: rand::Rng>(r: &mut R) -> (OmegaFunction, OmegaFunction) {
    loop {
        let f = random_omega(r, OmegaShape::LOW_DEGREE);
        let g = random_omega(r, OmegaShape::LOW_DEGREE);
        if !asym_coeffs(&f, &g, 3).coefficients[3].is_zero() {
            return (f, g);
        }
    }
}

fn asymptotics(seed: u64) -> Result<Vec<PropertyResult>> {
    let mut r = rng(seed ^ 0xa5);
    let mut hand = Tally::new("a1_a2_hand_values");
    let mut comm = Tally::new("first_order_commutator");
    let mut slopes = Tally::new("remainder_slopes");
    let s = asym_coeffs(&OmegaFunction::w(), &OmegaFunction::z(), 2);
    hand.exact(s.coefficients[1] == OmegaFunction::one_minus_zw_powi(2));
    hand.exact(s.coefficients[2] == OmegaFunction::one_minus_zw_powi(2).mul_monomial(1, 1).scale(&gq(2)));
    let (f, g) = asymptotic_pair(&mut r);
    let d = asym_coeffs(&f, &g, 1).coefficients[1].clone() - asym_coeffs(&g, &f, 1).coefficients[1].clone();
    comm.exact(d == -poisson_bracket(&f, &g));
    let p = ExtPoint2::finite(Complex64::new(0.3, 0.1), Complex64::new(0.2, -0.15));
    let prm = StarParams::real(0.1).with_tol(1e-15);
    for (ff, gg) in [(OmegaFunction::w(), OmegaFunction::z()), (f, g)] {
        for order in 0..=2 {
            for angle in RAYS {
                let fit = remainder_slope(&ff, &gg, &p, order, angle, &SLOPE_RADII, &prm)?;
                slopes.within((order as f64 + 0.9 - fit.slope).max(0.0), 0.0);
            }
        }
    }
    Ok(vec![hand.finish(), comm.finish(), slopes.finish()])
}

fn restriction(seed: u64) -> Result<Vec<PropertyResult>> {
    let mut r = rng(seed ^ 0x7e57);
    let mut routes = Tally::new("classical_vs_restriction");
    let mut rec = Tally::new("recursion_and_euclidean_forms");
    let mut prod = Tally::new("diagonal_products_match_omega");
    let mut auto = Tally::new("disk_automorphism_invariance");
    for target in [Target::Disk, Target::Sphere] {
        for i in 0..=6 {
            for j in 0..=(6 - i) {
                let f = SmoothPolyFunction::monomial(i, j, target);
                for n in 0..=5 {
                    for conj in [false, true] {
                        routes.exact(classical_derive(&f, n, conj) == classical_derive_via_restriction(&f, n, conj)?);
                    }
                    let d = classical_derive(&f, n, false);
                    rec.exact(classical_derive_recursive(&f, n) == d && classical_derive_euclidean(&f, n) == d);
                }
            }
        }
    }
    let prm = StarParams::real(0.1);
    for _ in 0..4 {
        let f = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let g = random_omega(&mut r, OmegaShape::LOW_DEGREE);
        let z = random_point(&mut r).z.finite_value().expect("finite").to_c64();
        for target in [Target::Disk, Target::Sphere] {
            let p = DiagonalPoint::new(z, target)?;
            let res = if target == Target::Disk { star_disk(&f, &g, &p, &prm)? } else { star_sphere(&f, &g, &p, &prm)? };
            let omega = star_eval(&f, &g, &p.embed(), &prm)?;
            prod.within((res.value_c64() - omega.value).norm().max(res.cross_deviation()), 1e-10);
        }
    }
    let f = random_omega(&mut r, OmegaShape::LOW_DEGREE);
    let pts = [Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.1)];
    for n in 1..=3 {
        auto.within(check_disk_invariance(&f, Complex64::new(0.2, -0.1), 0.4, n, &pts)?.max_deviation, 1e-10);
    }
    Ok(vec![routes.finish(), rec.finish(), prod.finish(), auto.finish()])
}
