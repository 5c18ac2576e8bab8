use std::collections::BTreeMap;

use serde::Serialize;

use super::pure;
use crate::algebra::{GaussianRational, LaurentPoly, OmegaFunction, Ring, Slot};

/// z^j w^k / (1 - zw)^n for j ≤ n, k ≤ cutoff (slot Z); variables exchanged for slot W.
pub fn kernel_basis(n: u32, slot: Slot, cutoff: u32) -> Vec<OmegaFunction> {
    let mut out = Vec::new();
    for j in 0..=n {
        for k in 0..=cutoff {
            let (a, b) = match slot {
                Slot::Z => (j as i32, k as i32),
                Slot::W => (k as i32, j as i32),
            };
            out.push(OmegaFunction::new(LaurentPoly::monomial(a, b, GaussianRational::from_i64(1)), n));
        }
    }
    out
}

/// Rank of a matrix over the Gaussian rationals.
pub fn rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut m: Vec<Vec<GaussianRational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = GaussianRational::from_i64(1) / m[r][c].clone();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone() * inv.clone();
            for k in c..cols {
                let sub = factor.clone() * m[r][k].clone();
                m[i][k] = m[i][k].clone() - sub;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelRank {
    pub space_dim: usize,
    pub image_rank: usize,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
    pub generators_annihilated: bool,
}

/// Kernel of D^{n+1} on span{z^i w^j/(1 - zw)^n : i, j ≤ cutoff}, computed by exact rank.
pub fn kernel_rank_check(n: u32, slot: Slot, cutoff: u32) -> KernelRank {
    let mut space = Vec::new();
    for i in 0..=cutoff {
        for j in 0..=cutoff {
            let (a, b) = match slot {
                Slot::Z => (i as i32, j as i32),
                Slot::W => (j as i32, i as i32),
            };
            space.push(OmegaFunction::new(LaurentPoly::monomial(a, b, GaussianRational::from_i64(1)), n));
        }
    }
    let images: Vec<OmegaFunction> = space.iter().map(|f| pure(f, slot, n + 1)).collect();
    let top = images.iter().map(|g| g.k()).max().unwrap_or(0);
    let nums: Vec<LaurentPoly> = images.iter().map(|g| g.numerator_at(top)).collect();
    let mut keys = BTreeMap::new();
    for p in &nums {
        for (&e, _) in p.terms() {
            let len = keys.len();
            keys.entry(e).or_insert(len);
        }
    }
    let rows: Vec<Vec<GaussianRational>> = nums
        .iter()
        .map(|p| {
            let mut row = vec![GaussianRational::zero(); keys.len()];
            for (e, c) in p.terms() {
                row[keys[e]] = c.clone();
            }
            row
        })
        .collect();
    let image_rank = if keys.is_empty() { 0 } else { rank(&rows) };
    let generators_annihilated = kernel_basis(n, slot, cutoff).iter().all(|g| pure(g, slot, n + 1).is_zero());
    KernelRank {
        space_dim: space.len(),
        image_rank,
        kernel_dim: space.len() - image_rank,
        expected_kernel_dim: ((n.min(cutoff) + 1) * (cutoff + 1)) as usize,
        generators_annihilated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{pm_derive, PMethod};

    #[test]
    fn first_kernels() {
        let k0 = kernel_basis(0, Slot::Z, 3);
        assert_eq!(k0[2], OmegaFunction::monomial(0, 2));
        for g in &k0 {
            assert!(pm_derive(g, 1, 0, PMethod::Recursion).unwrap().is_zero());
        }
        let k1 = kernel_basis(1, Slot::Z, 2);
        assert!(k1.contains(&OmegaFunction::basis(1, 0)));
        assert!(pm_derive(&OmegaFunction::basis(1, 0), 2, 0, PMethod::Explicit).unwrap().is_zero());
        let kw = kernel_basis(2, Slot::W, 2);
        assert!(kw.iter().all(|g| pm_derive(g, 0, 3, PMethod::Definition).unwrap().is_zero()));
    }

    #[test]
    fn rank_is_exact() {
        let q = |n| GaussianRational::from_i64(n);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rank(&[vec![q(0), q(1)], vec![q(1), q(0)]]), 2);
        let r = kernel_rank_check(2, Slot::Z, 4);
        assert!(r.generators_annihilated);
        assert_eq!(r.kernel_dim, r.expected_kernel_dim);
    }
}
