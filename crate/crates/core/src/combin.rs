//! Factorials, binomial and multinomial coefficients over big integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// n! for n >= 0.
pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of a negative number");
    let mut r = BigInt::one();
    for i in 2..=n {
        r *= BigInt::from(i);
    }
    r
}

/// Falling factorial n (n-1) ... (n-j+1), exactly j factors.
pub fn falling(n: i64, j: i64) -> BigInt {
    assert!(j >= 0, "falling factorial needs j >= 0");
    let mut r = BigInt::one();
    for i in 0..j {
        r *= BigInt::from(n - i);
    }
    r
}

/// Binomial coefficient; zero outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Multinomial coefficient n! / (parts_0! ... parts_m!); the parts must be
/// nonnegative and sum to n.
pub fn multinomial(n: i64, parts: &[i64]) -> BigInt {
    debug_assert_eq!(parts.iter().sum::<i64>(), n);
    let mut r = factorial(n);
    for &p in parts {
        assert!(p >= 0, "negative multinomial part");
        r /= factorial(p);
    }
    r
}

/// Number of perfect matchings of 2a labeled points:
/// (2a)!/(a! 2^a) = (2a-1)!!.
pub fn double_factorial_odd(a: i64) -> BigInt {
    assert!(a >= 0);
    let mut r = BigInt::one();
    for i in 1..=a {
        r *= BigInt::from(2 * i - 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(7, 0), BigInt::from(1));
        assert_eq!(falling(7, 3), BigInt::from(210));
        assert_eq!(falling(3, 5), BigInt::from(0));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(10, 11), BigInt::from(0));
        assert_eq!(binomial(10, -1), BigInt::from(0));
        // Pascal rule on a grid.
        for n in 1..12 {
            for k in 0..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                );
            }
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(6, &[2, 2, 2]), BigInt::from(90));
        assert_eq!(multinomial(4, &[4]), BigInt::from(1));
        assert_eq!(multinomial(5, &[0, 5, 0]), BigInt::from(1));
    }

    #[test]
    fn perfect_matching_counts() {
        // 1, 1, 3, 15, 105, 945
        let want = [1i64, 1, 3, 15, 105, 945];
        for (a, w) in want.iter().enumerate() {
            assert_eq!(double_factorial_odd(a as i64), BigInt::from(*w));
        }
    }
}
