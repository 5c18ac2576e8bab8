use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::{star_eval, stirling2, StarParams};
use crate::algebra::{GaussianRational, OmegaFunction, Ring};
use crate::combinat::factorial;
use crate::error::Result;
use crate::geometry::ExtPoint2;
use crate::operators::bidiff;

/// Coefficients a_0 … a_N of f⋆_ħ g ~ Σ ħ^n a_n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticSeries {
    pub coefficients: Vec<OmegaFunction>,
}

impl AsymptoticSeries {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Σ_{n ≤ N} ħ^n a_n(p)
    pub fn eval(&self, p: &ExtPoint2<Complex64>, hbar: Complex64, upto: usize) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut h = Complex64::new(1.0, 0.0);
        for a in self.coefficients.iter().take(upto + 1) {
            acc += h * a.evaluate(p)?;
            h *= hbar;
        }
        Ok(acc)
    }
}

/// a_0 = fg and a_n = Σ_{k=1}^{n} (-1)^{k+n}/k! {n-1, k-1} B_k(g, f).
pub fn asym_coeffs(f: &OmegaFunction, g: &OmegaFunction, n_max: u32) -> AsymptoticSeries {
    let b: Vec<OmegaFunction> = (0..=n_max).map(|k| bidiff(g, f, k)).collect();
    let mut out = vec![f.clone() * g.clone()];
    for n in 1..=n_max {
        let mut acc = OmegaFunction::zero();
        for k in 1..=n {
            let s = stirling2(n as i64 - 1, k as i64 - 1);
            if s.is_zero() {
                continue;
            }
            let sign = if (k + n) % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            let c = GaussianRational::from_bigint(sign * s) / GaussianRational::from_bigint(factorial(k));
            acc = acc + b[k as usize].scale(&c);
        }
        out.push(acc);
    }
    AsymptoticSeries { coefficients: out }
}

/// {f, g} = B_1(f, g) - B_1(g, f)
pub fn poisson_bracket(f: &OmegaFunction, g: &OmegaFunction) -> OmegaFunction {
    bidiff(f, g, 1) - bidiff(g, f, 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub order: usize,
    pub angle: f64,
    pub slope: f64,
    pub radii: Vec<f64>,
    pub remainders: Vec<f64>,
}

/// Least-squares slope of log |f⋆_ħ g - Σ_{n≤N} ħ^n a_n| against log |ħ| along the ray arg ħ = angle.
pub fn remainder_slope(
    f: &OmegaFunction,
    g: &OmegaFunction,
    p: &ExtPoint2<Complex64>,
    order: usize,
    angle: f64,
    radii: &[f64],
    params: &StarParams,
) -> Result<SlopeFit> {
    let series = asym_coeffs(f, g, order as u32);
    let mut rem = Vec::with_capacity(radii.len());
    for &r in radii {
        let h = Complex64::from_polar(r, angle);
        let v = star_eval(f, g, p, &StarParams { hbar: h, ..params.clone() })?;
        rem.push((v.value - series.eval(p, h, order)?).norm());
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = rem.iter().map(|r| r.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(SlopeFit { order, angle, slope: sxy / sxx, radii: radii.to_vec(), remainders: rem })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expression;

    #[test]
    fn hand_values_for_w_and_z() {
        let s = asym_coeffs(&OmegaFunction::w(), &OmegaFunction::z(), 3);
        assert_eq!(s.coefficients[0], parse_expression("z*w").unwrap());
        assert_eq!(s.coefficients[1], OmegaFunction::one_minus_zw_powi(2));
        assert_eq!(s.coefficients[2], parse_expression("2*z*w*(1-z*w)^2").unwrap());
    }

    #[test]
    fn commutator_and_bracket() {
        let f = parse_expression("z^2*w/(1-z*w)").unwrap();
        let g = parse_expression("w^2 + z").unwrap();
        let fg = asym_coeffs(&f, &g, 1);
        let gf = asym_coeffs(&g, &f, 1);
        let diff = fg.coefficients[1].clone() - gf.coefficients[1].clone();
        assert_eq!(diff, -poisson_bracket(&f, &g));
        assert!(poisson_bracket(&f, &f).is_zero());
        assert!(poisson_bracket(&OmegaFunction::int(1), &g).is_zero());
        assert_eq!(poisson_bracket(&OmegaFunction::z(), &OmegaFunction::w()), OmegaFunction::one_minus_zw_powi(2));
    }

    #[test]
    fn slopes_for_w_star_z() {
        let p = ExtPoint2::finite(Complex64::new(0.5, 0.0), Complex64::new(1.0 / 3.0, 0.0));
        let radii = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
        for order in 0..3 {
            let fit = remainder_slope(&OmegaFunction::w(), &OmegaFunction::z(), &p, order, 0.0, &radii, &StarParams::real(0.1).with_tol(1e-15))
                .unwrap();
            assert!(fit.slope >= order as f64 + 0.9, "{fit:?}");
        }
    }
}
