//! Peschl–Minda derivatives D^{m,n} on the closed function class.

mod invariance;
mod kernel;
mod poly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{GaussianRational, OmegaFunction, Ring, Scalar, Slot};
use crate::combinat::{factorial, lah};
use crate::error::{PmError, Result};
use crate::geometry::ExtPoint2;
use crate::jets::{compose_with_phi, inner_phi_series, taylor_jet_symbolic, JetProvider};

pub use invariance::{check_invariance, check_invariance_symbolic, pullback_jet, psi_minus, psi_minus_inv, psi_plus, psi_plus_inv, InvarianceReport};
pub use kernel::{kernel_basis, kernel_rank_check, rank, KernelRank};
pub use poly::{alpha, b_coefficient, laplace_poly, laplace_poly_diagonal, AlphaConvention, IntPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PMethod {
    Definition,
    Explicit,
    Recursion,
    Laplace,
    PureLinearised,
}

impl PMethod {
    pub const ALL: [PMethod; 5] =
        [PMethod::Definition, PMethod::Explicit, PMethod::Recursion, PMethod::Laplace, PMethod::PureLinearised];

    pub fn name(&self) -> &'static str {
        match self {
            PMethod::Definition => "definition",
            PMethod::Explicit => "explicit",
            PMethod::Recursion => "recursion",
            PMethod::Laplace => "laplace",
            PMethod::PureLinearised => "pure_linearised",
        }
    }

    pub fn applies_to(&self, m: u32, n: u32) -> bool {
        *self != PMethod::PureLinearised || m == 0 || n == 0
    }
}

impl fmt::Display for PMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PMethod {
    type Err = PmError;

    fn from_str(s: &str) -> Result<Self> {
        PMethod::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('_', "-") == s)
            .ok_or_else(|| PmError::InvalidParams(format!("unknown method '{s}'")))
    }
}

fn gq(n: i64) -> GaussianRational {
    GaussianRational::from_i64(n)
}

fn big(n: num_bigint::BigInt) -> GaussianRational {
    GaussianRational::from_bigint(n)
}

/// D^{m,n} f by the chosen pathway.
pub fn pm_derive(f: &OmegaFunction, m: u32, n: u32, method: PMethod) -> Result<OmegaFunction> {
    if m == 0 && n == 0 {
        return Ok(f.clone());
    }
    match method {
        PMethod::Definition => Ok(derive_definition(f, m, n)),
        PMethod::Explicit => Ok(derive_explicit(f, m, n)),
        PMethod::Recursion => Ok(derive_recursion(f, m, n)),
        PMethod::Laplace => Ok(derive_laplace(f, m, n, AlphaConvention::Corrected)),
        PMethod::PureLinearised => {
            if m != 0 && n != 0 {
                return Err(PmError::MethodNotApplicable(format!(
                    "pure_linearised needs a pure order, got ({m},{n})"
                )));
            }
            Ok(if n == 0 { linearised(f, Slot::Z, m) } else { linearised(f, Slot::W, n) })
        }
    }
}

/// Taylor coefficient of f∘Φ_{z,w} at the origin with (z,w) kept symbolic.
fn derive_definition(f: &OmegaFunction, m: u32, n: u32) -> OmegaFunction {
    let (mu, nu) = (m as usize, n as usize);
    let jet = taylor_jet_symbolic(f, mu, nu);
    let (z, w) = (OmegaFunction::z(), OmegaFunction::w());
    let corner = |s: &crate::jets::Series<OmegaFunction>, top: usize| {
        // [u^top] s^i for i = 0..=top
        let mut out = Vec::with_capacity(top + 1);
        let mut p = crate::jets::Series::constant(OmegaFunction::one(), top);
        for _ in 0..=top {
            out.push(p.coeffs[top].clone());
            p = p.mul(s);
        }
        out
    };
    let su = corner(&inner_phi_series(&z, &w, mu), mu);
    let tv = corner(&inner_phi_series(&w, &z, nu), nu);
    let mut acc = OmegaFunction::zero();
    for (i, a) in su.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in tv.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc = acc + jet.coeff(i, j).clone() * a.clone() * b.clone();
        }
    }
    acc.scale(&big(factorial(m) * factorial(n)))
}

fn derive_explicit(f: &OmegaFunction, m: u32, n: u32) -> OmegaFunction {
    let mut acc = OmegaFunction::zero();
    let mut dz = f.clone();
    for j in 0..=m {
        if j > 0 {
            dz = dz.dz();
        }
        let wj = lah(m, j);
        if wj == 0.into() {
            continue;
        }
        let mut d = dz.clone();
        for k in 0..=n {
            if k > 0 {
                d = d.dw();
            }
            let wk = lah(n, k);
            if wk == 0.into() {
                continue;
            }
            let sign = if (m - j + n - k) % 2 == 0 { 1 } else { -1 };
            let term = d
                .mul_monomial((n - k) as i32, (m - j) as i32)
                * OmegaFunction::one_minus_zw_powi((j + k) as i32);
            acc = acc + term.scale(&(big(wj.clone() * wk) * gq(sign)));
        }
    }
    acc
}

/// (1 - zw) ∂_z h
pub fn d10(h: &OmegaFunction) -> OmegaFunction {
    h.dz() * OmegaFunction::one_minus_zw()
}

/// (1 - zw) ∂_w h
pub fn d01(h: &OmegaFunction) -> OmegaFunction {
    h.dw() * OmegaFunction::one_minus_zw()
}

/// The invariant Laplacian (1 - zw)^2 ∂_z ∂_w.
pub fn laplacian(h: &OmegaFunction) -> OmegaFunction {
    h.dz().dw() * OmegaFunction::one_minus_zw_powi(2)
}

/// Ladder G[a][b] = D^{a,b} f for a ≤ m, b ≤ n built from the recursion identities.
pub fn recursion_ladder(f: &OmegaFunction, m: u32, n: u32) -> Vec<Vec<OmegaFunction>> {
    let (mu, nu) = (m as usize, n as usize);
    let mut g = vec![vec![OmegaFunction::zero(); nu + 1]; mu + 1];
    g[0][0] = f.clone();
    for a in 0..mu {
        let prev = &g[a][0];
        g[a + 1][0] = d10(prev) - prev.mul_monomial(0, 1).scale(&gq(a as i64));
    }
    for b in 0..nu {
        for a in 0..=mu {
            let cur = &g[a][b];
            let mut next = d01(cur) + cur.mul_monomial(1, 0).scale(&gq(a as i64 - b as i64));
            if a >= 2 {
                next = next + g[a - 1][b].scale(&gq((a * (a - 1)) as i64));
            }
            g[a][b + 1] = next;
        }
    }
    g
}

fn derive_recursion(f: &OmegaFunction, m: u32, n: u32) -> OmegaFunction {
    recursion_ladder(f, m, n).swap_remove(m as usize).swap_remove(n as usize)
}

/// D_z^p h = (1 - zw) ∂_z^p [(1 - zw)^{p-1} h]; slot W gives D_w^p.
pub fn pure(h: &OmegaFunction, slot: Slot, p: u32) -> OmegaFunction {
    if p == 0 {
        return h.clone();
    }
    let inner = h.clone() * OmegaFunction::one_minus_zw_powi(p as i32 - 1);
    inner.wirtinger(slot, p) * OmegaFunction::one_minus_zw()
}

pub fn pure_z(h: &OmegaFunction, p: u32) -> OmegaFunction {
    pure(h, Slot::Z, p)
}

pub fn pure_w(h: &OmegaFunction, p: u32) -> OmegaFunction {
    pure(h, Slot::W, p)
}

/// (1 - zw)^{-p} ((1 - zw)^2 ∂)^p h
fn linearised(h: &OmegaFunction, slot: Slot, p: u32) -> OmegaFunction {
    let sq = OmegaFunction::one_minus_zw_powi(2);
    let mut acc = h.clone();
    for _ in 0..p {
        acc = acc.derivative(slot) * sq.clone();
    }
    acc * OmegaFunction::one_minus_zw_powi(-(p as i32))
}

/// Applies an integer polynomial in the invariant Laplacian.
pub fn apply_laplace_poly(p: &IntPolynomial, f: &OmegaFunction) -> OmegaFunction {
    let mut acc = OmegaFunction::zero();
    let mut power = f.clone();
    for (k, c) in p.coeffs().iter().enumerate() {
        if k > 0 {
            power = laplacian(&power);
        }
        if c != &0.into() {
            acc = acc + power.scale(&big(c.clone()));
        }
    }
    acc
}

/// D^{m,n} as a pure operator applied to P_{m,n} of the Laplacian.
pub fn derive_laplace(f: &OmegaFunction, m: u32, n: u32, conv: AlphaConvention) -> OmegaFunction {
    let p = laplace_poly(m, n, conv);
    let inner = apply_laplace_poly(&p, f);
    if m >= n {
        pure(&inner, Slot::Z, m - n)
    } else {
        pure(&inner, Slot::W, n - m)
    }
}

/// D̃^{m,n} f = (z/w)^{n-m} D^{n,m} f.
pub fn pm_tilde(f: &OmegaFunction, m: u32, n: u32) -> Result<OmegaFunction> {
    let d = pm_derive(f, n, m, PMethod::Explicit)?;
    let e = n as i32 - m as i32;
    Ok(d.mul_monomial(e, -e))
}

/// D^{m,n} f at a finite point from jets of f∘Φ_{z,w}.
pub fn pm_derive_at<S: Scalar, P: JetProvider<S> + ?Sized>(fp: &P, m: u32, n: u32, p: &ExtPoint2<S>) -> Result<S> {
    let jet = compose_with_phi(fp, p, m as usize, n as usize)?;
    let scale = S::from_gaussian(&big(factorial(m) * factorial(n)));
    Ok(jet.coeff(m as usize, n as usize).clone() * scale)
}

/// B_n(f, g) = D_z^n f · D_w^n g.
pub fn bidiff(f: &OmegaFunction, g: &OmegaFunction, n: u32) -> OmegaFunction {
    pure_z(f, n) * pure_w(g, n)
}
