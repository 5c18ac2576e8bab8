use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::gaussian::GaussianRational;
use super::ring::{Ring, Scalar};

/// Laurent polynomial in z, w with Gaussian rational coefficients, keyed by (i, j) for z^i w^j.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LaurentPoly {
    terms: BTreeMap<(i32, i32), GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: i32, j: i32, c: GaussianRational) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), GaussianRational)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    /// (1 - zw)^e
    pub fn one_minus_zw_pow(e: u32) -> Self {
        let mut terms = BTreeMap::new();
        let mut binom = num_bigint::BigInt::from(1);
        for l in 0..=e {
            let c = if l % 2 == 0 { binom.clone() } else { -binom.clone() };
            terms.insert((l as i32, l as i32), GaussianRational::from_bigint(c));
            binom = binom * (e - l) / (l + 1);
        }
        LaurentPoly { terms }
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let key = (i, j);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = std::mem::take(v) + c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: i32, j: i32) -> GaussianRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn shift(&self, a: i32, b: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&(i, j), v)| ((i + a, j + b), v.clone())).collect() }
    }

    pub fn map_exponents<F: Fn(i32, i32) -> (i32, i32)>(&self, f: F) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(&(i, j), v)| (f(i, j), v.clone())))
    }

    pub fn map_coeffs<F: Fn(i32, i32, &GaussianRational) -> GaussianRational>(&self, f: F) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(&(i, j), v)| ((i, j), f(i, j, v))))
    }

    pub fn partial_z(&self) -> Self {
        self.map_coeffs(|i, _, c| c * &GaussianRational::from_i64(i as i64)).shift(-1, 0)
    }

    pub fn partial_w(&self) -> Self {
        self.map_coeffs(|_, j, c| c * &GaussianRational::from_i64(j as i64)).shift(0, -1)
    }

    pub fn min_exponents(&self) -> Option<(i32, i32)> {
        let mi = self.terms.keys().map(|k| k.0).min()?;
        let mj = self.terms.keys().map(|k| k.1).min()?;
        Some((mi, mj))
    }

    pub fn max_exponents(&self) -> Option<(i32, i32)> {
        let mi = self.terms.keys().map(|k| k.0).max()?;
        let mj = self.terms.keys().map(|k| k.1).max()?;
        Some((mi, mj))
    }

    /// Quotient by (1 - zw) when it divides exactly.
    ///
    /// (1 - zw) preserves the diagonal index i - j, so each diagonal is a Laurent
    /// polynomial in t = zw and divisibility is a vanishing coefficient sum.
    pub fn div_one_minus_zw(&self) -> Option<Self> {
        let mut diagonals: BTreeMap<i32, Vec<(i32, &GaussianRational)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            diagonals.entry(i - j).or_default().push((j, c));
        }
        let mut out = LaurentPoly::zero();
        for (d, entries) in diagonals {
            // entries are sorted by j ascending because keys are sorted by (i, j) with i = d + j.
            let mut sorted = entries;
            sorted.sort_by_key(|e| e.0);
            let lo = sorted[0].0;
            let hi = sorted[sorted.len() - 1].0;
            let mut prefix = GaussianRational::zero();
            let mut idx = 0;
            for t in lo..=hi {
                if idx < sorted.len() && sorted[idx].0 == t {
                    prefix = &prefix + sorted[idx].1;
                    idx += 1;
                }
                if t < hi {
                    out.add_term(d + t, t, prefix.clone());
                }
            }
            if !prefix.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    /// Exact quotient self / q in the Laurent ring, or None if q does not divide.
    pub fn exact_div(&self, q: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!q.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let (pa, pb) = self.min_exponents()?;
        let (qa, qb) = q.min_exponents()?;
        let mut rem = self.shift(-pa, -pb);
        let qq = q.shift(-qa, -qb);
        let (&(li, lj), lc) = qq.terms.iter().next_back()?;
        let lc = lc.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((&(ri, rj), rc)) = rem.terms.iter().next_back() {
            if ri < li || rj < lj {
                return None;
            }
            let c = rc.clone() / lc.clone();
            let mono = LaurentPoly::monomial(ri - li, rj - lj, c);
            rem = rem - &mono * &qq;
            quot = quot + mono;
        }
        Some(quot.shift(pa - qa, pb - qb))
    }

    pub fn eval<S: Scalar>(&self, z: &S, w: &S) -> S {
        let mut zpow: BTreeMap<i32, S> = BTreeMap::new();
        let mut wpow: BTreeMap<i32, S> = BTreeMap::new();
        let mut acc = S::zero();
        for (&(i, j), c) in &self.terms {
            let zi = zpow.entry(i).or_insert_with(|| z.powi(i as i64)).clone();
            let wj = wpow.entry(j).or_insert_with(|| w.powi(j as i64)).clone();
            acc = acc + S::from_gaussian(c) * zi * wj;
        }
        acc
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, o: LaurentPoly) -> LaurentPoly {
        for ((i, j), c) in o.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        self + (-o)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect() }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                out.add_term(i + k, j + l, c * d);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_i64(n)
    }

    #[test]
    fn binomial_power() {
        let p = LaurentPoly::one_minus_zw_pow(3);
        assert_eq!(p.coeff(0, 0), g(1));
        assert_eq!(p.coeff(1, 1), g(-3));
        assert_eq!(p.coeff(2, 2), g(3));
        assert_eq!(p.coeff(3, 3), g(-1));
    }

    #[test]
    fn divides_by_one_minus_zw() {
        let q = LaurentPoly::from_terms([((2, -1), g(3)), ((0, 0), g(1)), ((-1, 2), g(-2))]);
        let p = &q * &LaurentPoly::one_minus_zw_pow(2);
        let once = p.div_one_minus_zw().unwrap();
        assert_eq!(once.div_one_minus_zw().unwrap(), q);
        assert!(q.div_one_minus_zw().is_none());
    }

    #[test]
    fn exact_division() {
        let a = LaurentPoly::from_terms([((1, 0), g(1)), ((0, 1), g(1))]);
        let b = LaurentPoly::from_terms([((2, -1), g(2)), ((0, 0), g(-1)), ((-1, 3), g(5))]);
        let ab = &a * &b;
        assert_eq!(ab.exact_div(&a).unwrap(), b);
        assert_eq!(ab.exact_div(&b).unwrap(), a);
        let c = LaurentPoly::from_terms([((1, 0), g(1)), ((0, 0), g(1))]);
        assert!(ab.exact_div(&c).is_none());
    }
}
