//! Integer combinatorics shared by the operator and star product code.

use num_bigint::BigInt;
use num_traits::One;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// n!/j! · C(n-1, j-1), the weight of ∂^j in the n-th pure operator.
/// W(0,0) = 1 and W(n,0) = 0 for n ≥ 1.
pub fn lah(n: u32, j: u32) -> BigInt {
    match (n, j) {
        (0, 0) => BigInt::one(),
        (_, 0) | (0, _) => BigInt::from(0),
        _ if j > n => BigInt::from(0),
        _ => factorial(n) / factorial(j) * binomial(n - 1, j - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        // unsigned Lah numbers L(3,k) = 6, 6, 1
        assert_eq!((1..=3).map(|k| lah(3, k)).collect::<Vec<_>>(), vec![6.into(), 6.into(), 1.into()]);
        assert_eq!(lah(0, 0), BigInt::one());
        assert_eq!(lah(4, 0), BigInt::from(0));
    }
}
