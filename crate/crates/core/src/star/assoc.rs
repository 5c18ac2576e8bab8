use num_complex::Complex64;
use serde::Serialize;

use super::{pure_coefficients, ratio_sequence, StarParams};
use crate::algebra::{OmegaFunction, Slot};
use crate::error::{PmError, Result};
use crate::jets::{moebius_jet, omega_on_jets, Jet2, Series};

#[derive(Clone, Debug, Serialize)]
pub struct AssociativityReport {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub deviation: f64,
    pub bound: f64,
    pub inner_terms: usize,
    pub outer_terms: usize,
}

impl AssociativityReport {
    pub fn passes(&self) -> bool {
        self.deviation <= self.bound
    }
}

fn unit_series(order: usize) -> Series<Complex64> {
    Series::constant(Complex64::new(1.0, 0.0), order)
}

/// Geometric estimate of Σ_{k>n} from the last two terms.
fn tail_from(prev: f64, cur: f64) -> f64 {
    let rho = if prev > 0.0 { cur / prev } else { 0.0 };
    if rho < 0.9 {
        cur * rho / (1.0 - rho) + cur
    } else {
        10.0 * (cur + prev)
    }
}

/// Σ_n r_n Σ_{i+j=m} a[n][i] b[n][j] for each m, with per-m tail estimates and absolute sums.
fn inner_sums(a: &Jet2<Complex64>, b: &Jet2<Complex64>, r: &[Complex64]) -> (Vec<Complex64>, Vec<f64>, Vec<f64>) {
    let (n_max, m_max) = a.orders();
    let mut vals = vec![Complex64::new(0.0, 0.0); m_max + 1];
    let mut tails = vec![0.0; m_max + 1];
    let mut abs = vec![0.0; m_max + 1];
    for m in 0..=m_max {
        let mut last = (0.0, 0.0);
        for n in 0..=n_max {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..=m {
                s += a.coeff(n, i) * b.coeff(n, m - i);
            }
            let t = r[n] * s;
            vals[m] += t;
            abs[m] += t.norm();
            last = (last.1, t.norm());
        }
        tails[m] = tail_from(last.0, last.1);
    }
    (vals, tails, abs)
}

struct Side {
    value: Complex64,
    bound: f64,
    converged: bool,
}

/// Σ_m r_m c_m F_m with the outer tail plus the inner tails carried through |r_m c_m|.
fn combine(r: &[Complex64], c: &[Complex64], inner: (Vec<Complex64>, Vec<f64>, Vec<f64>), tol: f64) -> Side {
    let (vals, tails, abs) = inner;
    let m_max = vals.len() - 1;
    let mut value = Complex64::new(0.0, 0.0);
    let mut carried = 0.0;
    let mut abs_sum = 0.0;
    let mut outer = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let w = r[m] * c[m];
        let t = w * vals[m];
        value += t;
        outer.push(t.norm());
        carried += w.norm() * tails[m];
        abs_sum += w.norm() * abs[m];
    }
    let (prev, cur) = (outer[m_max.saturating_sub(1)], outer[m_max]);
    let outer_tail = tail_from(prev, cur);
    let rounding = 16.0 * f64::EPSILON * abs_sum * (m_max + 1) as f64;
    let converged = prev <= tol && cur <= tol && carried <= tol;
    Side { value, bound: outer_tail + carried + rounding, converged }
}

/// ((f⋆g)⋆h)(p): outer coefficients of h in z, inner jets moving along w.
fn left_nested(f: &OmegaFunction, g: &OmegaFunction, h: &OmegaFunction, z: Complex64, w: Complex64, n: usize, m: usize, r: &[Complex64], tol: f64) -> Result<Side> {
    let one = Complex64::new(1.0, 0.0);
    let wv = Series::moebius(&one, &w, &z, &one, m)?;
    let zc = Series::constant(z, m);
    let x = moebius_jet(&one, &zc, &wv, n, m)?;
    let w_jet = Jet2::outer(&unit_series(n), &wv);
    let a = omega_on_jets(g, &x, &w_jet)?;
    let y = moebius_jet(&one, &wv, &zc, n, m)?;
    let b = omega_on_jets(f, &Jet2::constant(z, n, m), &y)?;
    let c = pure_coefficients(h, Slot::Z, &z, &w, m)?;
    Ok(combine(r, &c, inner_sums(&a, &b, r), tol))
}

/// (f⋆(g⋆h))(p): outer coefficients of f in w, inner jets moving along z.
fn right_nested(f: &OmegaFunction, g: &OmegaFunction, h: &OmegaFunction, z: Complex64, w: Complex64, n: usize, m: usize, r: &[Complex64], tol: f64) -> Result<Side> {
    let one = Complex64::new(1.0, 0.0);
    let zu = Series::moebius(&one, &z, &w, &one, m)?;
    let wc = Series::constant(w, m);
    let x = moebius_jet(&one, &zu, &wc, n, m)?;
    let a = omega_on_jets(h, &x, &Jet2::constant(w, n, m))?;
    let y = moebius_jet(&one, &wc, &zu, n, m)?;
    let z_jet = Jet2::outer(&unit_series(n), &zu);
    let b = omega_on_jets(g, &z_jet, &y)?;
    let c = pure_coefficients(f, Slot::W, &z, &w, m)?;
    Ok(combine(r, &c, inner_sums(&a, &b, r), tol))
}

/// Compares (f⋆g)⋆h with f⋆(g⋆h) at a finite point using bivariate jets of the inner product.
pub fn check_associativity(
    f: &OmegaFunction,
    g: &OmegaFunction,
    h: &OmegaFunction,
    z: Complex64,
    w: Complex64,
    params: &StarParams,
) -> Result<AssociativityReport> {
    params.validate()?;
    if (Complex64::new(1.0, 0.0) - z * w).norm() == 0.0 {
        return Err(PmError::InvalidPoint("point is not in Ω".into()));
    }
    let cap = params.max_terms.min(96);
    let mut order = 12.min(cap - 1);
    loop {
        let r = ratio_sequence(params.hbar, order + 1)?;
        let lhs = left_nested(f, g, h, z, w, order, order, &r, params.abs_tol)?;
        let rhs = right_nested(f, g, h, z, w, order, order, &r, params.abs_tol)?;
        let report = AssociativityReport {
            lhs: [lhs.value.re, lhs.value.im],
            rhs: [rhs.value.re, rhs.value.im],
            deviation: (lhs.value - rhs.value).norm(),
            bound: lhs.bound + rhs.bound,
            inner_terms: order + 1,
            outer_terms: order + 1,
        };
        if lhs.converged && rhs.converged {
            return Ok(report);
        }
        if order + 1 >= cap {
            return Err(PmError::BudgetExhausted { value: lhs.value, tail: report.bound, terms: order + 1 });
        }
        order = (order + order / 2).min(cap - 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expression;
    use crate::star::{star_eval, BoundMode};

    #[test]
    fn associative_on_small_examples() {
        let f = parse_expression("w + z*w").unwrap();
        let g = parse_expression("z^2/(1-z*w)").unwrap();
        let h = parse_expression("w^2 - z").unwrap();
        for hbar in [Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.1)] {
            let rep = check_associativity(&f, &g, &h, Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.25), &StarParams::new(hbar)).unwrap();
            assert!(rep.passes(), "{rep:?}");
        }
    }

    #[test]
    fn nested_sum_reduces_to_plain_product() {
        // h = 1 makes the outer sum a single term, leaving (f⋆g)(p)
        let f = parse_expression("w^2/(1-z*w)").unwrap();
        let g = parse_expression("z + z^2*w").unwrap();
        let (z, w) = (Complex64::new(0.3, 0.0), Complex64::new(0.2, 0.1));
        let prm = StarParams::real(0.1);
        let rep = check_associativity(&f, &g, &OmegaFunction::int(1), z, w, &prm).unwrap();
        let direct = star_eval(&f, &g, &crate::geometry::ExtPoint2::finite(z, w), &prm.with_mode(BoundMode::SuccessiveTerm)).unwrap();
        assert!((Complex64::new(rep.lhs[0], rep.lhs[1]) - direct.value).norm() < 1e-11);
    }
}
