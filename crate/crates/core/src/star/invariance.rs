use num_complex::Complex64;
use serde::Serialize;

use super::{star_eval, star_eval_jets, BoundMode, StarParams};
use crate::algebra::{GaussianRational, OmegaFunction, Pullback};
use crate::error::Result;
use crate::geometry::{ExtPoint2, MoebiusMap};
use crate::jets::{JetProvider, Jet2, ProviderDomain};
use crate::operators::{bidiff, pullback_jet};

/// f∘T known through jets, for any T in the Möbius-type group.
#[derive(Clone, Debug)]
pub struct PullbackProvider {
    pub f: OmegaFunction,
    pub t: MoebiusMap<Complex64>,
}

impl JetProvider<Complex64> for PullbackProvider {
    fn jet(&self, base: &ExtPoint2<Complex64>, m: usize, n: usize) -> Result<Jet2<Complex64>> {
        pullback_jet(&self.f, &self.t, base, m, n)
    }

    fn domain(&self) -> ProviderDomain {
        ProviderDomain::Omega
    }
}

/// Which product the pulled-back product is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StarOrder {
    /// (f∘T)⋆(g∘T) against (f⋆g)∘T
    Literal,
    /// (f∘T)⋆(g∘T) against (g⋆f)∘T
    Swapped,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarInvarianceReport {
    pub order: StarOrder,
    pub points: usize,
    pub symbolic_pullback: bool,
    pub max_deviation: f64,
    pub max_combined_tail: f64,
    /// largest deviation / combined tail over the points
    pub worst_ratio: f64,
}

impl StarInvarianceReport {
    pub fn passes(&self) -> bool {
        self.worst_ratio <= 2.0
    }
}

fn exact_map(t: &MoebiusMap<Complex64>) -> Option<MoebiusMap<GaussianRational>> {
    let (a, b, c, d) = t.entries();
    let conv = |x: &Complex64| GaussianRational::from_c64(*x);
    MoebiusMap::new(conv(a)?, conv(b)?, conv(c)?, conv(d)?, t.flip()).ok()
}

/// Symbolic pullbacks when T keeps the class closed.
fn symbolic_pullbacks(f: &OmegaFunction, g: &OmegaFunction, t: &MoebiusMap<Complex64>) -> Option<(OmegaFunction, OmegaFunction)> {
    let kind = Pullback::Moebius(exact_map(t)?);
    Some((f.pullback(&kind).ok()?, g.pullback(&kind).ok()?))
}

pub fn check_star_invariance(
    f: &OmegaFunction,
    g: &OmegaFunction,
    t: &MoebiusMap<Complex64>,
    points: &[ExtPoint2<Complex64>],
    params: &StarParams,
    order: StarOrder,
) -> Result<StarInvarianceReport> {
    let prm = params.clone().with_mode(BoundMode::SuccessiveTerm);
    let symbolic = symbolic_pullbacks(f, g, t);
    let mut rep = StarInvarianceReport {
        order,
        points: 0,
        symbolic_pullback: symbolic.is_some(),
        max_deviation: 0.0,
        max_combined_tail: 0.0,
        worst_ratio: 0.0,
    };
    for p in points {
        let lhs = match &symbolic {
            Some((ft, gt)) => star_eval(ft, gt, p, &prm)?,
            None => {
                let fp = PullbackProvider { f: f.clone(), t: t.clone() };
                let gp = PullbackProvider { f: g.clone(), t: t.clone() };
                star_eval_jets(&fp, &gp, p, &prm)?
            }
        };
        let tp = t.apply(p);
        let rhs = match order {
            StarOrder::Literal => star_eval(f, g, &tp, &prm)?,
            StarOrder::Swapped => star_eval(g, f, &tp, &prm)?,
        };
        let dev = (lhs.value - rhs.value).norm();
        let tail = lhs.tail_bound + rhs.tail_bound;
        rep.points += 1;
        rep.max_deviation = rep.max_deviation.max(dev);
        rep.max_combined_tail = rep.max_combined_tail.max(tail);
        let ratio = if dev == 0.0 { 0.0 } else if tail > 0.0 { dev / tail } else { f64::INFINITY };
        rep.worst_ratio = rep.worst_ratio.max(ratio);
    }
    Ok(rep)
}

/// B_n(g∘ϱ, f∘ϱ) = B_n(g, f)∘ϱ for n ≤ n_max, decided by structural equality.
pub fn check_dilation_termwise(f: &OmegaFunction, g: &OmegaFunction, gamma: &GaussianRational, n_max: u32) -> Result<bool> {
    let kind = Pullback::Moebius(MoebiusMap::rho(gamma.clone())?);
    let (fr, gr) = (f.pullback(&kind)?, g.pullback(&kind)?);
    for n in 0..=n_max {
        if bidiff(&gr, &fr, n) != bidiff(g, f, n).pullback(&kind)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expression;

    fn pts() -> Vec<ExtPoint2<Complex64>> {
        vec![
            ExtPoint2::finite(Complex64::new(0.5, 0.0), Complex64::new(1.0 / 3.0, 0.0)),
            ExtPoint2::finite(Complex64::new(-0.2, 0.3), Complex64::new(0.4, 0.1)),
        ]
    }

    #[test]
    fn identity_is_exact() {
        let f = parse_expression("z^2*w/(1-z*w)").unwrap();
        let g = parse_expression("w - 2*z").unwrap();
        let r = check_star_invariance(&f, &g, &MoebiusMap::identity(), &pts(), &StarParams::real(0.1), StarOrder::Literal).unwrap();
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn dilation_termwise() {
        assert!(check_dilation_termwise(&OmegaFunction::w(), &OmegaFunction::z(), &GaussianRational::from_i64(2), 12).unwrap());
        let f = parse_expression("(z^3 - w/z)/(1-z*w)^2").unwrap();
        assert!(check_dilation_termwise(&f, &OmegaFunction::basis(2, 1), &GaussianRational::complex(1, 2, 1, 3), 6).unwrap());
    }

    #[test]
    fn general_maps_numerically() {
        let f = OmegaFunction::basis(1, 0);
        let g = OmegaFunction::basis(0, 1);
        let t = MoebiusMap::phi(Complex64::new(0.2, 0.1), Complex64::new(-0.1, 0.15)).unwrap();
        let r = check_star_invariance(&f, &g, &t, &pts(), &StarParams::real(0.1).with_tol(1e-13), StarOrder::Literal).unwrap();
        assert!(!r.symbolic_pullback);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn flip_reverses_the_order() {
        let f = OmegaFunction::basis(1, 0);
        let g = OmegaFunction::basis(0, 1);
        let prm = StarParams::real(0.1);
        let sw = check_star_invariance(&f, &g, &MoebiusMap::flip_map(), &pts(), &prm, StarOrder::Swapped).unwrap();
        assert!(sw.symbolic_pullback);
        assert!(sw.passes(), "{sw:?}");
        let lit = check_star_invariance(&f, &g, &MoebiusMap::flip_map(), &pts(), &prm, StarOrder::Literal).unwrap();
        assert!(lit.max_deviation > 1e-3, "{lit:?}");
    }
}
