use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::combinat::factorial;

/// Polynomial with integer coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// x
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<BigInt>, i: usize| v.get(i).cloned().unwrap_or_default();
        Self::new((0..n).map(|i| get(&self.coeffs, i) + get(&o.coeffs, i)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(k == 0 && first) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}*x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// Weight of P_{k+p,k} in the off-diagonal step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlphaConvention {
    /// α_{n,0} = 0 for n ≥ 1.
    Corrected,
    /// α_{n,0} = n!(n-1)! for n ≥ 1.
    Factorial,
}

pub fn alpha(n: u32, k: u32, conv: AlphaConvention) -> BigInt {
    assert!(k <= n);
    match (n, k) {
        (0, 0) => BigInt::one(),
        (_, 0) => match conv {
            AlphaConvention::Corrected => BigInt::zero(),
            AlphaConvention::Factorial => factorial(n) * factorial(n - 1),
        },
        _ => factorial(n) * factorial(n - 1) / (factorial(k) * factorial(k - 1)),
    }
}

/// P_n from the three-term recursion, for n = 0..=top.
pub fn laplace_poly_diagonal(top: u32) -> Vec<IntPolynomial> {
    let mut out = vec![IntPolynomial::one()];
    if top >= 1 {
        out.push(IntPolynomial::x());
    }
    for n in 1..top {
        let nb = BigInt::from(n);
        let shift = IntPolynomial::new(vec![BigInt::from(2) * &nb * &nb, BigInt::one()]);
        let nm1 = &nb - BigInt::one();
        let c: BigInt = -(&nb * &nb * &nm1 * &nm1);
        let next = shift.mul(&out[n as usize]).add(&out[n as usize - 1].scale(&c));
        out.push(next);
    }
    out
}

fn poly_rec(m: u32, n: u32, conv: AlphaConvention, memo: &mut HashMap<(u32, u32), IntPolynomial>) -> IntPolynomial {
    let (m, n) = if m >= n { (m, n) } else { (n, m) };
    if let Some(p) = memo.get(&(m, n)) {
        return p.clone();
    }
    let p = if m == n {
        laplace_poly_diagonal(n).pop().expect("nonempty")
    } else {
        // P_{n+p+1,n} = Σ_k α_{n,k} P_{k+p,k}
        let p_off = m - n - 1;
        let mut acc = IntPolynomial::from_i64(&[0]);
        for k in 0..=n {
            let a = alpha(n, k, conv);
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&poly_rec(k + p_off, k, conv, memo).scale(&a));
        }
        acc
    };
    memo.insert((m, n), p.clone());
    p
}

/// P_{m,n} with D^{m,n} = D^{|m-n|} ∘ P_{m,n}(D^{1,1}).
pub fn laplace_poly(m: u32, n: u32, conv: AlphaConvention) -> IntPolynomial {
    poly_rec(m, n, conv, &mut HashMap::new())
}

/// b_k(n+1) from the closed coefficient formula, with b_0 := 0.
pub fn b_coefficient(k: u32, n_plus_1: u32) -> BigRational {
    fn b(k: u32, np1: u32, memo: &mut HashMap<(u32, u32), BigRational>) -> BigRational {
        if k == 0 || np1 == 0 || k > np1 {
            return BigRational::zero();
        }
        if let Some(v) = memo.get(&(k, np1)) {
            return v.clone();
        }
        let n = np1 - 1;
        let r = |x: BigInt| BigRational::from_integer(x);
        let lead_num = BigInt::from((n as i64 - k as i64 + 1) * (2 * (k as i64) * (k as i64) + 1) + 3 * k as i64);
        let ratio = factorial(n) / factorial(k - 1);
        let mut acc = BigRational::new(lead_num, BigInt::from(3 * k)) * r(&ratio * &ratio);
        for j in (k + 1)..=n {
            let q = factorial(n) / factorial(j);
            acc += b(k - 1, j, memo) * r(&q * &q * BigInt::from(n - j + 1));
        }
        memo.insert((k, np1), acc.clone());
        acc
    }
    b(k, n_plus_1, &mut HashMap::new())
}
