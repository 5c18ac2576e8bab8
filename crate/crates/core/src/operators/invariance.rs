use serde::Serialize;

use super::{pm_derive, PMethod};
use crate::algebra::{GaussianRational, OmegaFunction, Pullback, Ring, Scalar};
use crate::combinat::factorial;
use crate::error::{PmError, Result};
use crate::geometry::{ExtPoint2, MoebiusMap};
use crate::jets::{compose_jet_with_phi, compose_separable, taylor_jet, Jet2, Series};

/// Ψ₊(z,w) = (z/(1 - zw), w)
pub fn psi_plus<S: Scalar>(z: &S, w: &S) -> (S, S) {
    (z.clone() / (S::one() - z.clone() * w.clone()), w.clone())
}

pub fn psi_plus_inv<S: Scalar>(u: &S, v: &S) -> (S, S) {
    (u.clone() / (S::one() + u.clone() * v.clone()), v.clone())
}

/// Ψ₋(z,w) = (z, w/(1 - zw))
pub fn psi_minus<S: Scalar>(z: &S, w: &S) -> (S, S) {
    (z.clone(), w.clone() / (S::one() - z.clone() * w.clone()))
}

pub fn psi_minus_inv<S: Scalar>(u: &S, v: &S) -> (S, S) {
    (u.clone(), v.clone() / (S::one() + u.clone() * v.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub points: usize,
    pub max_abs_deviation: f64,
    pub max_rel_deviation: f64,
}

impl InvarianceReport {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.max_rel_deviation <= rel_tol
    }
}

/// Jet at p of f∘T for a class member f and any T with T(p) finite.
pub fn pullback_jet<S: Scalar>(f: &OmegaFunction, t: &MoebiusMap<S>, p: &ExtPoint2<S>, m: usize, n: usize) -> Result<Jet2<S>> {
    let h = if t.flip() { f.flip() } else { f.clone() };
    let tp = t.without_flip();
    let (z0, w0) = p
        .finite_values()
        .ok_or_else(|| PmError::InvalidPoint("invariance check needs finite points".into()))?;
    let (qz, qw) = tp
        .apply(p)
        .finite_values()
        .ok_or_else(|| PmError::InvalidPoint("T maps the point to infinity".into()))?;
    let (a, b, c, d) = tp.entries();
    let psi = Series::moebius(a, &(a.clone() * z0.clone() + b.clone()), c, &(c.clone() * z0 + d.clone()), m)?;
    let chi = Series::moebius(d, &(d.clone() * w0.clone() + c.clone()), b, &(b.clone() * w0 + a.clone()), n)?;
    let jet = taylor_jet(&h, &ExtPoint2::finite(qz, qw), m, n)?;
    Ok(compose_separable(&jet, &psi.without_constant(), &chi.without_constant(), false))
}

/// Compares D^{m,n}(f∘T)(p) with the prefactor times (D^{m',n'} f)(T p) at each point,
/// where (m',n') is (n,m) when T contains the flip.
pub fn check_invariance<S: Scalar>(
    f: &OmegaFunction,
    t: &MoebiusMap<S>,
    m: u32,
    n: u32,
    points: &[ExtPoint2<S>],
) -> Result<InvarianceReport> {
    let (mu, nu) = (m as usize, n as usize);
    let (m2, n2) = if t.flip() { (n, m) } else { (m, n) };
    let target = pm_derive(f, m2, n2, PMethod::Explicit)?;
    let scale = S::from_gaussian(&GaussianRational::from_bigint(factorial(m) * factorial(n)));
    let mut report = InvarianceReport { points: 0, max_abs_deviation: 0.0, max_rel_deviation: 0.0 };
    for p in points {
        let (z0, w0) = p
            .finite_values()
            .ok_or_else(|| PmError::InvalidPoint("invariance check needs finite points".into()))?;
        let jet = pullback_jet(f, t, p, mu, nu)?;
        let lhs = compose_jet_with_phi(&jet, &z0, &w0, mu, nu).coeff(mu, nu).clone() * scale.clone();
        let rhs = t.prefactor(m, n, p)? * target.evaluate(&t.apply(p))?;
        let dev = if lhs == rhs { 0.0 } else { (lhs.to_c64() - rhs.to_c64()).norm() };
        let rel = dev / rhs.to_c64().norm().max(1.0);
        report.points += 1;
        report.max_abs_deviation = report.max_abs_deviation.max(dev);
        report.max_rel_deviation = report.max_rel_deviation.max(rel);
    }
    Ok(report)
}

/// The prefactor as a class member, available when T preserves the class.
fn prefactor_symbolic(t: &MoebiusMap<GaussianRational>, m: u32, n: u32) -> Result<OmegaFunction> {
    let (a, b, c, d) = t.entries();
    let e = if t.flip() { n as i64 - m as i64 } else { m as i64 - n as i64 };
    let diagonal = b.is_zero() && c.is_zero();
    let anti = a.is_zero() && d.is_zero();
    let (coef, mono) = match (t.flip(), diagonal, anti) {
        // ((a + bw)/(cz + d))^e
        (false, true, _) => (a.clone() / d.clone(), (0, 0)),
        (false, _, true) => (b.clone() / c.clone(), (-1, 1)),
        // ((az + b)/(dw + c))^e
        (true, true, _) => (a.clone() / d.clone(), (1, -1)),
        (true, _, true) => (b.clone() / c.clone(), (0, 0)),
        _ => return Err(PmError::NotClassPreserving),
    };
    let e32 = e as i32;
    Ok(OmegaFunction::monomial(mono.0 * e32, mono.1 * e32).scale(&coef.powi(e)))
}

/// Exact form of the invariance identity for class-preserving maps (flip, dilations, inversions).
pub fn check_invariance_symbolic(f: &OmegaFunction, t: &MoebiusMap<GaussianRational>, m: u32, n: u32) -> Result<bool> {
    let kind = Pullback::Moebius(t.clone());
    let lhs = pm_derive(&f.pullback(&kind)?, m, n, PMethod::Explicit)?;
    let (m2, n2) = if t.flip() { (n, m) } else { (m, n) };
    let rhs = prefactor_symbolic(t, m, n)? * pm_derive(f, m2, n2, PMethod::Explicit)?.pullback(&kind)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expression;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn pts() -> Vec<ExtPoint2<GaussianRational>> {
        vec![
            ExtPoint2::finite(q(1, 2), q(1, 3)),
            ExtPoint2::finite(q(-1, 3), GaussianRational::complex(1, 5, 1, 7)),
            ExtPoint2::finite(q(2, 3), q(-3, 4)),
        ]
    }

    #[test]
    fn exact_for_generators_and_a_general_map() {
        let f = parse_expression("(z^2*w - w^2/z + 3)/(1-z*w)").unwrap();
        let maps = vec![
            MoebiusMap::identity(),
            MoebiusMap::rho(q(2, 1)).unwrap(),
            MoebiusMap::flip_map(),
            MoebiusMap::phi(q(1, 4), q(1, 5)).unwrap(),
            MoebiusMap::phi(q(1, 4), q(1, 5)).unwrap().compose(&MoebiusMap::flip_map()),
        ];
        for t in &maps {
            for (m, n) in [(1, 0), (0, 2), (2, 1), (1, 3)] {
                let r = check_invariance(&f, t, m, n, &pts()).unwrap();
                assert_eq!(r.max_abs_deviation, 0.0, "{t:?} ({m},{n})");
            }
        }
    }

    #[test]
    fn symbolic_identities() {
        let f = OmegaFunction::basis(1, 1) + parse_expression("z^3/w").unwrap();
        let maps = [
            MoebiusMap::rho(GaussianRational::complex(1, 2, 3, 1)).unwrap(),
            MoebiusMap::flip_map(),
            MoebiusMap::new(q(0, 1), q(2, 1), q(3, 1), q(0, 1), false).unwrap(),
            MoebiusMap::rho(q(3, 1)).unwrap().compose(&MoebiusMap::flip_map()),
        ];
        for t in &maps {
            for (m, n) in [(0, 0), (1, 0), (0, 1), (3, 1), (2, 2)] {
                assert!(check_invariance_symbolic(&f, t, m, n).unwrap(), "{t:?} ({m},{n})");
            }
        }
        assert!(matches!(
            check_invariance_symbolic(&f, &MoebiusMap::phi(q(1, 2), q(0, 1)).unwrap(), 1, 0),
            Err(PmError::NotClassPreserving)
        ));
    }

    #[test]
    fn flip_chart_example() {
        // D^{1,0} f(z,w) = (w/z) D^{0,1} f₋(1/w, 1/z)
        let f = OmegaFunction::basis(1, 1);
        let p = ExtPoint2::finite(q(1, 2), q(1, 3));
        let lhs = pm_derive(&f, 1, 0, PMethod::Explicit).unwrap().evaluate(&p).unwrap();
        let rhs = pm_derive(&f.flip(), 0, 1, PMethod::Explicit).unwrap().evaluate(&p.flip_point()).unwrap();
        assert_eq!(lhs, q(2, 3) * rhs);
    }

    #[test]
    fn psi_maps_invert() {
        let (z, w) = (q(1, 3), q(2, 5));
        let (u, v) = psi_plus(&z, &w);
        assert_eq!(psi_plus_inv(&u, &v), (z.clone(), w.clone()));
        let (u, v) = psi_minus(&z, &w);
        assert_eq!(psi_minus_inv(&u, &v), (z, w));
    }
}
