use num_complex::Complex64;
use proptest::prelude::*;

use pm_core::operators::{bidiff, laplace_poly, AlphaConvention};
use pm_core::restrict::{classical_derive, classical_derive_via_restriction, DiagonalPoint, SmoothPolyFunction, Target};
use pm_core::star::{asym_coeffs, falling_factorial, poisson_bracket, star_eval, star_exact, stirling2, StarParams};
use pm_core::{
    parse_expression, pm_derive, ExtPoint2, GaussianRational, LaurentPoly, MoebiusMap, OmegaFunction, PMethod, Pullback, Ring, Scalar,
};

fn coefficient() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3)
        .prop_map(|(a, b, c, d)| GaussianRational::complex(a, b, c, d))
        .prop_filter("nonzero", |c| *c != GaussianRational::from_i64(0))
}

fn omega(min_exp: i32, max_k: u32) -> impl Strategy<Value = OmegaFunction> {
    (prop::collection::vec((min_exp..=3i32, min_exp..=3i32, coefficient()), 1..=4), 0..=max_k)
        .prop_map(|(terms, k)| {
            let mut p = LaurentPoly::zero();
            for (i, j, c) in terms {
                p.add_term(i, j, c);
            }
            OmegaFunction::new(p, k)
        })
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn small_point() -> impl Strategy<Value = ExtPoint2<GaussianRational>> {
    let c = (-4i64..=4, -4i64..=4)
        .prop_map(|(a, b)| GaussianRational::complex(a, 9, b, 9))
        .prop_filter("nonzero", |c| *c != GaussianRational::from_i64(0));
    (c.clone(), c).prop_map(|(z, w)| ExtPoint2::finite(z, w))
}

/// Lift of complex conjugation along the diagonal w = εz̄: f*(z, w) = conj f(εw̄, εz̄).
fn conjugate_lift(f: &OmegaFunction, target: Target) -> OmegaFunction {
    let mut p = LaurentPoly::zero();
    for (&(i, j), c) in f.numerator().terms() {
        let flip = target == Target::Sphere && (i + j).rem_euclid(2) == 1;
        p.add_term(j, i, if flip { -c.conj() } else { c.conj() });
    }
    OmegaFunction::new(p, f.k())
}

fn gq(n: i64) -> GaussianRational {
    GaussianRational::from_i64(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn display_parses_back(f in omega(-3, 2)) {
        prop_assert_eq!(parse_expression(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn pathways_agree(f in omega(-3, 2), m in 0u32..=3, n in 0u32..=3) {
        let reference = pm_derive(&f, m, n, PMethod::Definition).unwrap();
        for method in PMethod::ALL {
            if method.applies_to(m, n) {
                prop_assert_eq!(&pm_derive(&f, m, n, method).unwrap(), &reference, "{}", method);
            }
        }
    }

    #[test]
    fn derivatives_are_linear(f in omega(-2, 1), g in omega(-2, 1), c in coefficient(), m in 0u32..=2, n in 0u32..=2) {
        let lhs = pm_derive(&(f.clone() + g.scale(&c)), m, n, PMethod::Explicit).unwrap();
        let rhs = pm_derive(&f, m, n, PMethod::Explicit).unwrap() + pm_derive(&g, m, n, PMethod::Explicit).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dilation_and_flip_invariance(f in omega(-3, 2), m in 0u32..=3, n in 0u32..=3, a in 1i64..=5, b in 1i64..=5) {
        let gamma = GaussianRational::ratio(a, b);
        for t in [MoebiusMap::rho(gamma).unwrap(), MoebiusMap::flip_map()] {
            prop_assert!(pm_core::operators::check_invariance_symbolic(&f, &t, m, n).unwrap());
        }
    }

    #[test]
    fn flip_reverses_bidifferential_operands(f in omega(-2, 1), g in omega(-2, 1), n in 0u32..=3) {
        let lhs = bidiff(&f.flip(), &g.flip(), n);
        prop_assert_eq!(lhs, bidiff(&g, &f, n).pullback(&Pullback::Flip).unwrap());
    }

    #[test]
    fn laplace_polynomials_positive(m in 0u32..=7, n in 0u32..=7) {
        let p = laplace_poly(m, n, AlphaConvention::Corrected);
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), m.min(n) as usize);
        prop_assert!(p.coeffs().iter().skip(1).all(|c| c.sign() == num_bigint::Sign::Plus));
        prop_assert_eq!(p, laplace_poly(n, m, AlphaConvention::Corrected));
    }

    #[test]
    fn stirling_expands_powers(n in 0u32..=8, a in -7i64..=7, b in 1i64..=5) {
        let x = GaussianRational::ratio(a, b);
        let mut sum = gq(0);
        for k in 0..=n {
            sum = sum + GaussianRational::from_bigint(stirling2(n as i64, k as i64)) * falling_factorial(&x, k);
        }
        prop_assert_eq!(sum, x.pow_u(n));
    }

    #[test]
    fn z_and_one_act_trivially(g in omega(-3, 2), p in small_point(), num in 1i64..=3, den in 5i64..=20) {
        let hbar = GaussianRational::ratio(num, den);
        if let Ok(v) = g.evaluate(&p) {
            let z = p.z.finite_value().unwrap();
            prop_assert_eq!(star_exact(&OmegaFunction::z(), &g, &p, &hbar, 4).unwrap(), Some(z * v.clone()));
            prop_assert_eq!(star_exact(&OmegaFunction::int(1), &g, &p, &hbar, 4).unwrap(), Some(v.clone()));
            prop_assert_eq!(star_exact(&g, &OmegaFunction::int(1), &p, &hbar, 4).unwrap(), Some(v));
        }
    }

    #[test]
    fn leading_asymptotics(f in omega(0, 1), g in omega(0, 1)) {
        let s = asym_coeffs(&f, &g, 1);
        prop_assert_eq!(&s.coefficients[0], &(f.clone() * g.clone()));
        let commutator = s.coefficients[1].clone() - asym_coeffs(&g, &f, 1).coefficients[1].clone();
        prop_assert_eq!(commutator, -poisson_bracket(&f, &g));
    }

    #[test]
    fn star_is_bilinear(f in omega(0, 1), g in omega(0, 1), h in omega(0, 1), p in small_point()) {
        let pc = p.to_c64();
        let prm = StarParams::real(0.1).with_tol(1e-14);
        let sum = star_eval(&f, &(g.clone() + h.clone()), &pc, &prm).unwrap();
        let parts = star_eval(&f, &g, &pc, &prm).unwrap().value + star_eval(&f, &h, &pc, &prm).unwrap().value;
        let scale = sum.value.norm().max(parts.norm()).max(1.0);
        prop_assert!((sum.value - parts).norm() <= 1e-10 * scale);
    }

    #[test]
    fn f_star_conjugate_is_real(f in omega(0, 1), p in small_point(), sphere in any::<bool>()) {
        let target = if sphere { Target::Sphere } else { Target::Disk };
        let z = p.z.to_c64().finite_value().unwrap();
        if z.norm() < 0.9 {
            let pt = DiagonalPoint::new(z, target).unwrap().embed();
            let prm = StarParams::real(0.1).with_tol(1e-14);
            let a = star_eval(&f, &conjugate_lift(&f, target), &pt, &prm).unwrap().value;
            prop_assert!(a.im.abs() <= 1e-10 * a.norm().max(1.0), "{a}");
        }
    }

    #[test]
    fn classical_derivatives_restrict(i in 0i32..=5, j in 0i32..=5, n in 0u32..=4, sphere in any::<bool>(), conj in any::<bool>()) {
        let target = if sphere { Target::Sphere } else { Target::Disk };
        let f = SmoothPolyFunction::monomial(i, j, target);
        prop_assert_eq!(classical_derive(&f, n, conj), classical_derive_via_restriction(&f, n, conj).unwrap());
    }
}

// Σ r_n (zw)^(n-1) (1-zw)^2 at zw = 1/6, 1/ħ = 10, summed in exact rationals to 400 terms.
const W_STAR_Z_ORACLE: f64 = 0.238_307_954_033_674_99;

#[test]
fn w_star_z_against_closed_form() {
    let p = ExtPoint2::finite(Complex64::new(0.5, 0.0), Complex64::new(1.0 / 3.0, 0.0));
    let v = star_eval(&OmegaFunction::w(), &OmegaFunction::z(), &p, &StarParams::real(0.1)).unwrap();
    assert!((v.value.re - W_STAR_Z_ORACLE).abs() < 1e-12 && v.value.im.abs() < 1e-15);
}
