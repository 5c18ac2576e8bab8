//! Truncated Taylor expansions and their composition with Möbius maps.

use num_complex::Complex64;

use crate::algebra::{GaussianRational, OmegaFunction, Ring, Scalar, Slot};
use crate::error::{PmError, PoleFactor, Result};
use crate::geometry::{DomainTag, ExtPoint2};

/// Univariate power series truncated at a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<R> {
    pub coeffs: Vec<R>,
}

impl<R: Ring> Series<R> {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![R::zero(); order + 1] }
    }

    pub fn constant(c: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// c + u
    pub fn variable(c: R, order: usize) -> Self {
        let mut s = Self::constant(c, order);
        if order > 0 {
            s.coeffs[1] = R::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    pub fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::constant(R::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn without_constant(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = R::zero();
        s
    }
}

impl<S: Scalar> Series<S> {
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(PmError::InvalidParams("series with zero constant term is not invertible".into()));
        }
        let inv0 = a0.inv();
        let n = self.order();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = S::zero();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * out.coeffs[k - i].clone();
            }
            out.coeffs[k] = -(acc * inv0.clone());
        }
        Ok(out)
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_u(e as u32))
        } else {
            Ok(self.inverse()?.pow_u((-e) as u32))
        }
    }

    /// (αu + β)/(γu + δ) expanded at u = 0.
    pub fn moebius(alpha: &S, beta: &S, gamma: &S, delta: &S, order: usize) -> Result<Self> {
        let mut num = Self::constant(beta.clone(), order);
        let mut den = Self::constant(delta.clone(), order);
        if order > 0 {
            num.coeffs[1] = alpha.clone();
            den.coeffs[1] = gamma.clone();
        }
        Ok(num.mul(&den.inverse()?))
    }

    pub fn eval(&self, u: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u.clone() + c.clone();
        }
        acc
    }
}

/// Bivariate jet: coeffs[i][j] is the coefficient of u^i v^j, for i ≤ M, j ≤ N.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<R> {
    coeffs: Vec<Vec<R>>,
}

impl<R: Ring> Jet2<R> {
    pub fn zero(m: usize, n: usize) -> Self {
        Jet2 { coeffs: vec![vec![R::zero(); n + 1]; m + 1] }
    }

    pub fn constant(c: R, m: usize, n: usize) -> Self {
        let mut j = Self::zero(m, n);
        j.coeffs[0][0] = c;
        j
    }

    pub fn from_grid(coeffs: Vec<Vec<R>>) -> Self {
        assert!(!coeffs.is_empty() && !coeffs[0].is_empty());
        Jet2 { coeffs }
    }

    /// Outer product a(u)·b(v).
    pub fn outer(a: &Series<R>, b: &Series<R>) -> Self {
        Jet2 {
            coeffs: a.coeffs.iter().map(|x| b.coeffs.iter().map(|y| x.clone() * y.clone()).collect()).collect(),
        }
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.coeffs.len() - 1, self.coeffs[0].len() - 1)
    }

    pub fn coeff(&self, i: usize, j: usize) -> &R {
        &self.coeffs[i][j]
    }

    pub fn grid(&self) -> &Vec<Vec<R>> {
        &self.coeffs
    }

    pub fn add(&self, o: &Self) -> Self {
        Jet2 {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.clone() + b.clone()).collect())
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&(-R::one())))
    }

    pub fn scale(&self, c: &R) -> Self {
        Jet2 { coeffs: self.coeffs.iter().map(|r| r.iter().map(|a| a.clone() * c.clone()).collect()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (m, n) = self.orders();
        let mut out = Self::zero(m, n);
        for i1 in 0..=m {
            for j1 in 0..=n {
                let a = &self.coeffs[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(m - i1) {
                    for j2 in 0..=(n - j1) {
                        let b = &o.coeffs[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        out.coeffs[i1 + i2][j1 + j2] = out.coeffs[i1 + i2][j1 + j2].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn pow_u(&self, e: u32) -> Self {
        let (m, n) = self.orders();
        let mut acc = Self::constant(R::one(), m, n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Restriction to smaller orders.
    pub fn truncate(&self, m: usize, n: usize) -> Self {
        Jet2 { coeffs: self.coeffs[..=m].iter().map(|r| r[..=n].to_vec()).collect() }
    }
}

impl<S: Scalar> Jet2<S> {
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeffs[0][0].clone();
        if a0.is_zero() {
            return Err(PmError::InvalidParams("jet with zero constant term is not invertible".into()));
        }
        let inv0 = a0.inv();
        let (m, n) = self.orders();
        let mut out = Self::zero(m, n);
        for p in 0..=m {
            for q in 0..=n {
                if p == 0 && q == 0 {
                    out.coeffs[0][0] = inv0.clone();
                    continue;
                }
                let mut acc = S::zero();
                for i in 0..=p {
                    for j in 0..=q {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        acc = acc + self.coeffs[i][j].clone() * out.coeffs[p - i][q - j].clone();
                    }
                }
                out.coeffs[p][q] = -(acc * inv0.clone());
            }
        }
        Ok(out)
    }

    pub fn to_c64(&self) -> Jet2<Complex64> {
        Jet2 { coeffs: self.coeffs.iter().map(|r| r.iter().map(|a| a.to_c64()).collect()).collect() }
    }
}

/// Jet of (αu + β(v))/(1 + γ(v)u) where β, γ are series in v.
pub fn moebius_jet<S: Scalar>(alpha: &S, beta: &Series<S>, gamma: &Series<S>, m: usize, n: usize) -> Result<Jet2<S>> {
    let mut num = Jet2::zero(m, n);
    let mut den = Jet2::constant(S::one(), m, n);
    for j in 0..=n {
        num.coeffs[0][j] = beta.coeffs[j].clone();
        if m > 0 {
            den.coeffs[1][j] = gamma.coeffs[j].clone();
        }
    }
    if m > 0 {
        num.coeffs[1][0] = alpha.clone();
    }
    Ok(num.mul(&den.inverse()?))
}

/// Substitutes jets x, y (in the same variables) into a class member.
pub fn omega_on_jets<S: Scalar>(f: &OmegaFunction, x: &Jet2<S>, y: &Jet2<S>) -> Result<Jet2<S>> {
    let (m, n) = x.orders();
    pole_checks(f, x.coeff(0, 0), y.coeff(0, 0))?;
    let pow = |base: &Jet2<S>, e: i32, inv: &mut Option<Jet2<S>>| -> Result<Jet2<S>> {
        if e >= 0 {
            Ok(base.pow_u(e as u32))
        } else {
            if inv.is_none() {
                *inv = Some(base.inverse()?);
            }
            Ok(inv.as_ref().expect("set").pow_u((-e) as u32))
        }
    };
    let (mut xinv, mut yinv) = (None, None);
    let mut xp = std::collections::BTreeMap::new();
    let mut yp = std::collections::BTreeMap::new();
    let mut acc = Jet2::zero(m, n);
    for (&(i, j), c) in f.numerator().terms() {
        if !xp.contains_key(&i) {
            xp.insert(i, pow(x, i, &mut xinv)?);
        }
        if !yp.contains_key(&j) {
            yp.insert(j, pow(y, j, &mut yinv)?);
        }
        acc = acc.add(&xp[&i].mul(&yp[&j]).scale(&S::from_gaussian(c)));
    }
    if f.k() == 0 {
        return Ok(acc);
    }
    let q = Jet2::constant(S::one(), m, n).sub(&x.mul(y));
    Ok(acc.mul(&q.inverse()?.pow_u(f.k())))
}

/// Where a jet provider's function is holomorphic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProviderDomain {
    Bidisk,
    Omega,
    OmegaPlus,
    OmegaMinus,
}

impl ProviderDomain {
    pub fn contains<S: Scalar>(&self, p: &ExtPoint2<S>) -> bool {
        match self {
            ProviderDomain::Bidisk => match p.finite_values() {
                Some((z, w)) => z.to_c64().norm() < 1.0 && w.to_c64().norm() < 1.0,
                None => false,
            },
            ProviderDomain::Omega => p.in_domain(DomainTag::Omega),
            ProviderDomain::OmegaPlus => p.in_domain(DomainTag::OmegaPlus),
            ProviderDomain::OmegaMinus => p.in_domain(DomainTag::OmegaMinus),
        }
    }
}

/// A holomorphic function known through its Taylor jets.
pub trait JetProvider<S: Scalar>: Sync {
    fn jet(&self, base: &ExtPoint2<S>, m: usize, n: usize) -> Result<Jet2<S>>;
    fn domain(&self) -> ProviderDomain;
}

impl<S: Scalar> JetProvider<S> for OmegaFunction {
    fn jet(&self, base: &ExtPoint2<S>, m: usize, n: usize) -> Result<Jet2<S>> {
        taylor_jet(self, base, m, n)
    }

    fn domain(&self) -> ProviderDomain {
        ProviderDomain::Omega
    }
}

/// exp(z + w) = Σ z^i w^j / (i! j!), used as an entire test function on the bidisk.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExpProvider;

impl JetProvider<Complex64> for ExpProvider {
    fn jet(&self, base: &ExtPoint2<Complex64>, m: usize, n: usize) -> Result<Jet2<Complex64>> {
        let (z, w) = base
            .finite_values()
            .ok_or_else(|| PmError::InvalidPoint("jets need a finite base".into()))?;
        let e = (z + w).exp();
        let fact = |k: usize| (1..=k).fold(1.0, |a, b| a * b as f64);
        let coeffs = (0..=m).map(|i| (0..=n).map(|j| e / (fact(i) * fact(j))).collect()).collect();
        Ok(Jet2::from_grid(coeffs))
    }

    fn domain(&self) -> ProviderDomain {
        ProviderDomain::Bidisk
    }
}

/// Wraps a closure producing jets together with a declared domain.
pub struct FnProvider<F> {
    pub f: F,
    pub domain: ProviderDomain,
}

impl<F> JetProvider<Complex64> for FnProvider<F>
where
    F: Fn(&ExtPoint2<Complex64>, usize, usize) -> Result<Jet2<Complex64>> + Sync,
{
    fn jet(&self, base: &ExtPoint2<Complex64>, m: usize, n: usize) -> Result<Jet2<Complex64>> {
        (self.f)(base, m, n)
    }

    fn domain(&self) -> ProviderDomain {
        self.domain
    }
}

fn pole_checks<S: Scalar>(f: &OmegaFunction, z: &S, w: &S) -> Result<()> {
    if z.is_zero() && f.has_negative_z() {
        return Err(PmError::PoleAtPoint(PoleFactor::Z));
    }
    if w.is_zero() && f.has_negative_w() {
        return Err(PmError::PoleAtPoint(PoleFactor::W));
    }
    if f.k() > 0 && (S::one() - z.clone() * w.clone()).is_zero() {
        return Err(PmError::PoleAtPoint(PoleFactor::OneMinusZW));
    }
    Ok(())
}

/// Taylor jet of a class member at a finite base, by series arithmetic.
pub fn taylor_jet<S: Scalar>(f: &OmegaFunction, base: &ExtPoint2<S>, m: usize, n: usize) -> Result<Jet2<S>> {
    let (z0, w0) = base
        .finite_values()
        .ok_or_else(|| PmError::InvalidPoint("jets need a finite base".into()))?;
    pole_checks(f, &z0, &w0)?;
    let zs = Series::variable(z0.clone(), m);
    let ws = Series::variable(w0.clone(), n);
    let mut zpows = std::collections::BTreeMap::new();
    let mut wpows = std::collections::BTreeMap::new();
    let mut numer = Jet2::zero(m, n);
    for (&(i, j), c) in f.numerator().terms() {
        if !zpows.contains_key(&i) {
            zpows.insert(i, zs.powi(i)?);
        }
        if !wpows.contains_key(&j) {
            wpows.insert(j, ws.powi(j)?);
        }
        let term = Jet2::outer(&zpows[&i], &wpows[&j]).scale(&S::from_gaussian(c));
        numer = numer.add(&term);
    }
    if f.k() == 0 {
        return Ok(numer);
    }
    // 1 - (z0+u)(w0+v) = (1 - z0 w0) - w0 u - z0 v - uv
    let mut q = Jet2::constant(S::one() - z0.clone() * w0.clone(), m, n);
    if m > 0 {
        q.coeffs[1][0] = -w0.clone();
    }
    if n > 0 {
        q.coeffs[0][1] = -z0.clone();
    }
    if m > 0 && n > 0 {
        q.coeffs[1][1] = -S::one();
    }
    Ok(numer.mul(&q.inverse()?.pow_u(f.k())))
}

/// Jet whose coefficients are the functions ∂^i∂^j f / (i! j!).
pub fn taylor_jet_symbolic(f: &OmegaFunction, m: usize, n: usize) -> Jet2<OmegaFunction> {
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut row_start = f.clone();
    let mut fi = GaussianRational::from_i64(1);
    for i in 0..=m {
        if i > 0 {
            row_start = row_start.dz();
            fi = fi * GaussianRational::from_i64(i as i64);
        }
        let mut row = Vec::with_capacity(n + 1);
        let mut cur = row_start.clone();
        let mut fj = GaussianRational::from_i64(1);
        for j in 0..=n {
            if j > 0 {
                cur = cur.dw();
                fj = fj * GaussianRational::from_i64(j as i64);
            }
            row.push(cur.scale(&(GaussianRational::from_i64(1) / (fi.clone() * fj.clone()))));
        }
        coeffs.push(row);
    }
    Jet2::from_grid(coeffs)
}

/// φ_{z,w}(u) - z = Σ_{k≥1} (-1)^{k-1} w^{k-1} (1 - zw) u^k.
pub fn inner_phi_series<R: Ring>(z: &R, w: &R, order: usize) -> Series<R> {
    let mut s = Series::zero(order);
    let c = R::one() - z.clone() * w.clone();
    let mut wp = R::one();
    for k in 1..=order {
        let term = wp.clone() * c.clone();
        s.coeffs[k] = if k % 2 == 1 { term } else { -term };
        wp = wp * w.clone();
    }
    s
}

/// Substitutes s(u), t(v) (no constant terms) into a jet in (Δz, Δw).
/// With `swap`, the first jet variable receives t(v) and the second s(u).
pub fn compose_separable<R: Ring>(jet: &Jet2<R>, s: &Series<R>, t: &Series<R>, swap: bool) -> Jet2<R> {
    let (m, n) = (s.order(), t.order());
    let (jm, jn) = jet.orders();
    let (need_first, need_second) = if swap { (n, m) } else { (m, n) };
    assert!(jm >= need_first && jn >= need_second, "jet orders too small for composition");
    let powers = |x: &Series<R>, k: usize| {
        let mut out = Vec::with_capacity(k + 1);
        out.push(Series::constant(R::one(), x.order()));
        for i in 1..=k {
            out.push(out[i - 1].mul(x));
        }
        out
    };
    let sp = powers(s, m);
    let tp = powers(t, n);
    let mut out = Jet2::zero(m, n);
    for a in 0..=m {
        for b in 0..=n {
            let mut acc = R::zero();
            for i in 0..=a {
                for j in 0..=b {
                    let c = if swap { &jet.coeffs[j][i] } else { &jet.coeffs[i][j] };
                    if c.is_zero() {
                        continue;
                    }
                    let x = &sp[i].coeffs[a];
                    let y = &tp[j].coeffs[b];
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = acc + c.clone() * x.clone() * y.clone();
                }
            }
            out.coeffs[a][b] = acc;
        }
    }
    out
}

/// Jet at (0,0) of f∘Φ_{z,w} given the jet of f at (z,w).
pub fn compose_jet_with_phi<R: Ring>(jet: &Jet2<R>, z: &R, w: &R, m: usize, n: usize) -> Jet2<R> {
    let s = inner_phi_series(z, w, m);
    let t = inner_phi_series(w, z, n);
    compose_separable(jet, &s, &t, false)
}

/// Jet at (0,0) of (u,v) ↦ f(Φ_{z,w}(u,v)) for a provider f.
pub fn compose_with_phi<S: Scalar, P: JetProvider<S> + ?Sized>(
    fp: &P,
    base: &ExtPoint2<S>,
    m: usize,
    n: usize,
) -> Result<Jet2<S>> {
    let (z, w) = base
        .finite_values()
        .ok_or_else(|| PmError::InvalidPoint("compose_with_phi needs a finite base".into()))?;
    if (S::one() - z.clone() * w.clone()).is_zero() {
        return Err(PmError::InvalidPoint("base point not in Ω".into()));
    }
    let jet = fp.jet(base, m, n)?;
    Ok(compose_jet_with_phi(&jet, &z, &w, m, n))
}

/// Taylor coefficients of u ↦ f(Z(u), w0) for a curve Z in the first slot, or of
/// v ↦ f(z0, W(v)) when `slot` is W.
pub fn omega_along_curve<S: Scalar>(f: &OmegaFunction, slot: Slot, curve: &Series<S>, fixed: &S) -> Result<Series<S>> {
    let order = curve.order();
    let c0 = curve.coeffs[0].clone();
    let (z0, w0) = match slot {
        Slot::Z => (c0, fixed.clone()),
        Slot::W => (fixed.clone(), c0),
    };
    pole_checks(f, &z0, &w0)?;
    let mut pows = std::collections::BTreeMap::new();
    let mut fixed_pows = std::collections::BTreeMap::new();
    let mut acc = Series::zero(order);
    for (&(i, j), c) in f.numerator().terms() {
        let (moving, still) = match slot {
            Slot::Z => (i, j),
            Slot::W => (j, i),
        };
        if !pows.contains_key(&moving) {
            pows.insert(moving, curve.powi(moving)?);
        }
        let fp = fixed_pows.entry(still).or_insert_with(|| fixed.powi(still as i64)).clone();
        acc = acc.add(&pows[&moving].scale(&(S::from_gaussian(c) * fp)));
    }
    if f.k() == 0 {
        return Ok(acc);
    }
    let one_minus = Series::constant(S::one(), order).sub(&curve.scale(fixed));
    Ok(acc.mul(&one_minus.inverse()?.pow_u(f.k())))
}
