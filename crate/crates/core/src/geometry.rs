//! Points of Ĉ² in per-slot projective coordinates and the Möbius-type group acting on Ω.

use num_complex::Complex64;

use crate::algebra::Scalar;
use crate::error::{PmError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainTag {
    Omega,
    OmegaPlus,
    OmegaMinus,
    FiniteChart,
}

/// A point of the Riemann sphere as a pair (num : den).
#[derive(Clone, Debug)]
pub struct ProjectiveCoord<S> {
    num: S,
    den: S,
}

impl<S: Scalar> ProjectiveCoord<S> {
    pub fn new(num: S, den: S) -> Result<Self> {
        if num.is_zero() && den.is_zero() {
            return Err(PmError::InvalidPoint("projective coordinate (0:0)".into()));
        }
        Ok(ProjectiveCoord { num, den })
    }

    pub fn finite(x: S) -> Self {
        ProjectiveCoord { num: x, den: S::one() }
    }

    pub fn infinity() -> Self {
        ProjectiveCoord { num: S::one(), den: S::zero() }
    }

    pub fn num(&self) -> &S {
        &self.num
    }

    pub fn den(&self) -> &S {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn finite_value(&self) -> Option<S> {
        if self.den.is_zero() {
            None
        } else {
            Some(self.num.clone() / self.den.clone())
        }
    }

    /// (x : 1) for finite points, (1 : 0) for ∞.
    pub fn canonical(&self) -> Self {
        match self.finite_value() {
            Some(x) => Self::finite(x),
            None => Self::infinity(),
        }
    }

    pub fn reciprocal(&self) -> Self {
        ProjectiveCoord { num: self.den.clone(), den: self.num.clone() }
    }

    /// Image under the matrix (a,b;c,d).
    pub fn transform(&self, a: &S, b: &S, c: &S, d: &S) -> Self {
        ProjectiveCoord {
            num: a.clone() * self.num.clone() + b.clone() * self.den.clone(),
            den: c.clone() * self.num.clone() + d.clone() * self.den.clone(),
        }
    }

    pub fn to_c64(&self) -> ProjectiveCoord<Complex64> {
        ProjectiveCoord { num: self.num.to_c64(), den: self.den.to_c64() }
    }
}

impl<S: Scalar> PartialEq for ProjectiveCoord<S> {
    fn eq(&self, o: &Self) -> bool {
        self.num.clone() * o.den.clone() == o.num.clone() * self.den.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtPoint2<S: Scalar> {
    pub z: ProjectiveCoord<S>,
    pub w: ProjectiveCoord<S>,
}

impl<S: Scalar> ExtPoint2<S> {
    pub fn new(z: ProjectiveCoord<S>, w: ProjectiveCoord<S>) -> Self {
        ExtPoint2 { z, w }
    }

    pub fn finite(z: S, w: S) -> Self {
        ExtPoint2 { z: ProjectiveCoord::finite(z), w: ProjectiveCoord::finite(w) }
    }

    pub fn is_finite(&self) -> bool {
        !self.z.is_infinite() && !self.w.is_infinite()
    }

    pub fn finite_values(&self) -> Option<(S, S)> {
        Some((self.z.finite_value()?, self.w.finite_value()?))
    }

    pub fn in_domain(&self, which: DomainTag) -> bool {
        // zw ≠ 1 with 0·∞ = 1, as one polynomial condition on the coordinates.
        let in_omega =
            self.z.num.clone() * self.w.num.clone() != self.z.den.clone() * self.w.den.clone();
        match which {
            DomainTag::Omega => in_omega,
            DomainTag::OmegaPlus => in_omega && !self.w.is_infinite(),
            DomainTag::OmegaMinus => in_omega && !self.z.is_infinite(),
            DomainTag::FiniteChart => in_omega && self.is_finite(),
        }
    }

    /// F(z,w) = (1/w, 1/z)
    pub fn flip_point(&self) -> Self {
        ExtPoint2 { z: self.w.reciprocal(), w: self.z.reciprocal() }
    }

    pub fn swap_point(&self) -> Self {
        ExtPoint2 { z: self.w.clone(), w: self.z.clone() }
    }

    pub fn canonical(&self) -> Self {
        ExtPoint2 { z: self.z.canonical(), w: self.w.canonical() }
    }

    pub fn to_c64(&self) -> ExtPoint2<Complex64> {
        ExtPoint2 { z: self.z.to_c64(), w: self.w.to_c64() }
    }
}

/// T(z,w) = (ψ(z), 1/ψ(1/w)) with ψ = (az+b)/(cz+d), optionally composed with the flip.
#[derive(Clone, Debug)]
pub struct MoebiusMap<S> {
    a: S,
    b: S,
    c: S,
    d: S,
    flip: bool,
}

impl<S: Scalar> MoebiusMap<S> {
    pub fn new(a: S, b: S, c: S, d: S, flip: bool) -> Result<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if det.is_zero() {
            return Err(PmError::InvalidParams("singular Möbius matrix".into()));
        }
        Ok(MoebiusMap { a, b, c, d, flip })
    }

    pub fn identity() -> Self {
        MoebiusMap { a: S::one(), b: S::zero(), c: S::zero(), d: S::one(), flip: false }
    }

    pub fn flip_map() -> Self {
        MoebiusMap { flip: true, ..Self::identity() }
    }

    /// Φ_{z,w}(u,v) = ((z+u)/(1+wu), (w+v)/(1+zv)); requires zw ≠ 1.
    pub fn phi(z: S, w: S) -> Result<Self> {
        Self::new(S::one(), z, w, S::one(), false)
    }

    /// ϱ_γ(u,v) = (γu, v/γ)
    pub fn rho(gamma: S) -> Result<Self> {
        Self::new(gamma, S::zero(), S::zero(), S::one(), false)
    }

    pub fn entries(&self) -> (&S, &S, &S, &S) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn without_flip(&self) -> Self {
        MoebiusMap { flip: false, ..self.clone() }
    }

    /// Action on the first slot.
    pub fn psi(&self, z: &ProjectiveCoord<S>) -> ProjectiveCoord<S> {
        z.transform(&self.a, &self.b, &self.c, &self.d)
    }

    /// Action on the second slot: 1/ψ(1/w) = (dw+c)/(bw+a).
    pub fn chi(&self, w: &ProjectiveCoord<S>) -> ProjectiveCoord<S> {
        w.transform(&self.d, &self.c, &self.b, &self.a)
    }

    pub fn apply(&self, p: &ExtPoint2<S>) -> ExtPoint2<S> {
        let q = ExtPoint2 { z: self.psi(&p.z), w: self.chi(&p.w) };
        if self.flip {
            q.flip_point()
        } else {
            q
        }
    }

    /// self ∘ other
    pub fn compose(&self, o: &Self) -> Self {
        MoebiusMap {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
            flip: self.flip ^ o.flip,
        }
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
            flip: self.flip,
        }
    }

    /// Scaled so that the first nonzero entry in row-major order is 1.
    pub fn normalized(&self) -> Self {
        let lead = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("invertible matrix")
            .clone();
        MoebiusMap {
            a: self.a.clone() / lead.clone(),
            b: self.b.clone() / lead.clone(),
            c: self.c.clone() / lead.clone(),
            d: self.d.clone() / lead,
            flip: self.flip,
        }
    }

    /// T = ϱ_γ ∘ Φ_{z,w} (∘ F): returns (γ, (z,w), flip).
    pub fn decompose(&self) -> Result<(S, ExtPoint2<S>, bool)> {
        if self.a.is_zero() || self.d.is_zero() {
            return Err(PmError::DecompositionOutOfChart);
        }
        let gamma = self.a.clone() / self.d.clone();
        let z = self.b.clone() / self.a.clone();
        let w = self.c.clone() / self.d.clone();
        Ok((gamma, ExtPoint2::finite(z, w), self.flip))
    }

    pub fn recompose(gamma: S, base: &ExtPoint2<S>, flip: bool) -> Result<Self> {
        let (z, w) = base.finite_values().ok_or(PmError::DecompositionOutOfChart)?;
        let t = Self::rho(gamma)?.compose(&Self::phi(z, w)?);
        Ok(if flip { t.compose(&Self::flip_map()) } else { t })
    }

    /// Factor c with D^{m,n}(f∘T)(p) = c · (D^{m',n'} f)(T p), where (m',n') = (m,n)
    /// for flip-free T and (n,m) otherwise.
    pub fn prefactor(&self, m: u32, n: u32, p: &ExtPoint2<S>) -> Result<S> {
        if m == n {
            return Ok(S::one());
        }
        let (z, w) = p
            .finite_values()
            .ok_or_else(|| PmError::InvalidPoint("prefactor needs a finite point".into()))?;
        let (num, den, e) = if self.flip {
            (
                self.a.clone() * z + self.b.clone(),
                self.d.clone() * w + self.c.clone(),
                n as i64 - m as i64,
            )
        } else {
            (
                self.a.clone() + self.b.clone() * w,
                self.c.clone() * z + self.d.clone(),
                m as i64 - n as i64,
            )
        };
        if num.is_zero() || den.is_zero() {
            return Err(PmError::SingularPrefactor);
        }
        Ok((num / den).powi(e))
    }

    pub fn to_c64(&self) -> MoebiusMap<Complex64> {
        MoebiusMap {
            a: self.a.to_c64(),
            b: self.b.to_c64(),
            c: self.c.to_c64(),
            d: self.d.to_c64(),
            flip: self.flip,
        }
    }
}

impl MoebiusMap<Complex64> {
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        let (x, y) = (self.normalized(), o.normalized());
        x.flip == y.flip
            && [(x.a, y.a), (x.b, y.b), (x.c, y.c), (x.d, y.d)]
                .iter()
                .all(|(p, q)| (p - q).norm() <= tol)
    }
}

impl<S: Scalar> PartialEq for MoebiusMap<S> {
    fn eq(&self, o: &Self) -> bool {
        let (x, y) = (self.normalized(), o.normalized());
        x.flip == y.flip && x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn pt(z: (i64, i64), w: (i64, i64)) -> ExtPoint2<GaussianRational> {
        ExtPoint2::finite(q(z.0, z.1), q(w.0, w.1))
    }

    #[test]
    fn domain_membership() {
        let inf = ProjectiveCoord::<GaussianRational>::infinity();
        let zero = ProjectiveCoord::finite(q(0, 1));
        assert!(pt((0, 1), (0, 1)).in_domain(DomainTag::Omega));
        assert!(!ExtPoint2::new(zero, inf.clone()).in_domain(DomainTag::Omega));
        assert!(!pt((2, 1), (1, 2)).in_domain(DomainTag::Omega));
        let both_inf = ExtPoint2::new(inf.clone(), inf.clone());
        assert!(both_inf.in_domain(DomainTag::Omega));
        assert!(!both_inf.in_domain(DomainTag::OmegaPlus));
        let zi = ExtPoint2::new(inf, ProjectiveCoord::finite(q(2, 1)));
        assert!(zi.in_domain(DomainTag::OmegaPlus));
        assert!(!zi.in_domain(DomainTag::OmegaMinus));
    }

    #[test]
    fn generator_actions() {
        let f = MoebiusMap::<GaussianRational>::flip_map();
        assert_eq!(f.apply(&pt((2, 1), (3, 1))), pt((1, 3), (1, 2)));
        let phi = MoebiusMap::phi(q(1, 2), q(1, 3)).unwrap();
        assert_eq!(phi.apply(&pt((0, 1), (0, 1))), pt((1, 2), (1, 3)));
        let rho = MoebiusMap::rho(q(2, 1)).unwrap();
        assert_eq!(rho.apply(&pt((1, 1), (4, 1))), pt((2, 1), (2, 1)));
    }

    #[test]
    fn composition_law_of_phi() {
        let (al, be, z, w) = (q(1, 4), q(1, 5), q(1, 2), q(1, 3));
        let lhs = MoebiusMap::phi(al.clone(), be.clone())
            .unwrap()
            .compose(&MoebiusMap::phi(z.clone(), w.clone()).unwrap());
        let one = GaussianRational::from_i64(1);
        let gamma = (one.clone() + al.clone() * w.clone()) / (one + be.clone() * z.clone());
        let base = MoebiusMap::phi(z, w).unwrap().apply(&pt((1, 4), (1, 5)));
        let (bz, bw) = base.finite_values().unwrap();
        let rhs = MoebiusMap::rho(gamma).unwrap().compose(&MoebiusMap::phi(bz, bw).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_examples() {
        let id = MoebiusMap::<GaussianRational>::identity();
        let (g, b, fl) = id.decompose().unwrap();
        assert_eq!((g, b, fl), (q(1, 1), pt((0, 1), (0, 1)), false));
        let (g, b, fl) = MoebiusMap::<GaussianRational>::flip_map().decompose().unwrap();
        assert_eq!((g, b, fl), (q(1, 1), pt((0, 1), (0, 1)), true));
        let t = MoebiusMap::rho(q(2, 1)).unwrap().compose(&MoebiusMap::phi(q(1, 2), q(1, 3)).unwrap());
        let (g, b, fl) = t.decompose().unwrap();
        assert_eq!((g.clone(), b.clone(), fl), (q(2, 1), pt((1, 2), (1, 3)), false));
        assert_eq!(MoebiusMap::recompose(g, &b, fl).unwrap(), t);
        let inv = MoebiusMap::new(q(0, 1), q(1, 1), q(1, 1), q(0, 1), false).unwrap();
        assert_eq!(inv.decompose().unwrap_err(), PmError::DecompositionOutOfChart);
    }

    #[test]
    fn prefactor_examples() {
        let p = pt((1, 2), (1, 3));
        let inv = MoebiusMap::new(q(0, 1), q(1, 1), q(1, 1), q(0, 1), false).unwrap();
        assert_eq!(inv.prefactor(1, 0, &p).unwrap(), q(2, 3));
        let rho = MoebiusMap::rho(q(5, 1)).unwrap();
        assert_eq!(rho.prefactor(3, 1, &p).unwrap(), q(25, 1));
        assert_eq!(inv.prefactor(2, 2, &p).unwrap(), q(1, 1));
        let zero = pt((0, 1), (1, 3));
        assert_eq!(inv.prefactor(1, 0, &zero).unwrap_err(), PmError::SingularPrefactor);
    }
}
