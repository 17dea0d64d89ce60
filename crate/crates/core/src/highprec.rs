//! High-precision floating-point helpers layered over exact rationals.
//!
//! Exact decisions (sign tests, threshold inequalities) never run through
//! this module; it exists to evaluate transcendental expressions (logs,
//! fractional powers) and to render decimal strings with a requested number
//! of significant digits. The working precision leaves ample headroom over
//! the 50-digit display target.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed as _, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;

use crate::polyexact::Rational;

/// Working mantissa precision in bits (about 77 decimal digits).
pub const PREC: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(
        Consts::new().expect("constants cache allocation"),
    );
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Exact conversion: the parse precision covers every bit of the integer.
pub fn from_bigint(x: &BigInt) -> BigFloat {
    let bits = x.magnitude().bits() as usize + 64;
    let p = bits.max(PREC);
    with_consts(|cc| BigFloat::parse(&x.to_string(), Radix::Dec, p, RM, cc))
}

pub fn from_i64(x: i64) -> BigFloat {
    from_bigint(&BigInt::from(x))
}

/// Correctly rounded quotient of the exact numerator and denominator.
pub fn from_rational(x: &Rational) -> BigFloat {
    let num = from_bigint(x.numer());
    let den = from_bigint(x.denom());
    num.div(&den, PREC, RM)
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PREC, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PREC, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PREC, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PREC, RM)
}

pub fn sqrt(a: &BigFloat) -> BigFloat {
    a.sqrt(PREC, RM)
}

pub fn ln(a: &BigFloat) -> BigFloat {
    with_consts(|cc| a.ln(PREC, RM, cc))
}

pub fn exp(a: &BigFloat) -> BigFloat {
    with_consts(|cc| a.exp(PREC, RM, cc))
}

/// Natural log of a positive rational; ln(num) - ln(den) keeps full
/// precision even when the operands are huge integers.
pub fn ln_rational(x: &Rational) -> BigFloat {
    debug_assert!(x.is_positive());
    sub(&ln(&from_bigint(x.numer())), &ln(&from_bigint(x.denom())))
}

/// base^expo for positive rational base and rational exponent,
/// as exp(expo * ln(base)).
pub fn pow_rational(base: &Rational, expo: &Rational) -> BigFloat {
    if expo.is_zero() {
        return from_i64(1);
    }
    exp(&mul(&from_rational(expo), &ln_rational(base)))
}

pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b).expect("comparison of finite values") {
        x if x < 0 => Ordering::Less,
        0 => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

pub fn is_zero(a: &BigFloat) -> bool {
    a.cmp(&BigFloat::from_f64(0.0, PREC)) == Some(0)
}

/// f64 approximation via a 17-significant-digit decimal round trip.
pub fn to_f64(a: &BigFloat) -> f64 {
    to_sig_string(a, 17).parse().expect("decimal round trip")
}

/// Renders `sig` significant decimal digits, half-up in the last place.
/// Plain decimal notation when the exponent is moderate, otherwise
/// scientific `d.dddde<exp>`.
pub fn to_sig_string(a: &BigFloat, sig: usize) -> String {
    assert!(sig > 0);
    let (sign, digits, exp) = with_consts(|cc| {
        a.convert_to_radix(Radix::Dec, RM, cc)
            .expect("finite value to decimal")
    });
    // Value = 0.d1 d2 ... * 10^exp. Normalize away leading zeros.
    let mut exp = exp as i64;
    let mut ds: Vec<u8> = digits;
    while ds.first() == Some(&0) {
        ds.remove(0);
        exp -= 1;
    }
    if ds.is_empty() {
        return "0".to_string();
    }

    // Round half-up to `sig` digits.
    if ds.len() > sig {
        let round_up = ds[sig] >= 5;
        ds.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    exp += 1;
                    ds.truncate(sig);
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    } else {
        ds.resize(sig, 0);
    }

    let digit_str: String = ds.iter().map(|d| (b'0' + d) as char).collect();
    let body = if exp >= 1 && (exp as usize) <= sig {
        let e = exp as usize;
        if e == sig {
            digit_str
        } else {
            format!("{}.{}", &digit_str[..e], &digit_str[e..])
        }
    } else if exp <= 0 && exp >= -5 {
        format!("0.{}{}", "0".repeat((-exp) as usize), digit_str)
    } else {
        // Scientific: d1.d2...ds e(exp-1).
        if sig == 1 {
            format!("{}e{}", digit_str, exp - 1)
        } else {
            format!("{}.{}e{}", &digit_str[..1], &digit_str[1..], exp - 1)
        }
    };
    if sign == Sign::Neg {
        format!("-{}", body)
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyexact::rat;

    #[test]
    fn rational_round_trip() {
        let x = from_rational(&rat(1, 3));
        let s = to_sig_string(&x, 20);
        assert_eq!(s, "0.33333333333333333333");
    }

    #[test]
    fn big_integer_rendering() {
        let x = from_bigint(&BigInt::from(1234567890123456789i64));
        assert_eq!(to_sig_string(&x, 10), "1.234567890e18");
        assert_eq!(to_sig_string(&x, 19), "1234567890123456789");
    }

    #[test]
    fn rounding_carries() {
        let x = from_rational(&rat(99999, 100000));
        assert_eq!(to_sig_string(&x, 4), "1.000");
        assert_eq!(to_sig_string(&x, 5), "0.99999");
    }

    #[test]
    fn scientific_for_extreme_exponents() {
        let x = from_rational(&rat(1, 100000000));
        assert_eq!(to_sig_string(&x, 3), "1.00e-8");
        let y = pow_rational(&rat(10, 1), &rat(30, 1));
        assert_eq!(to_sig_string(&y, 3), "1.00e30");
    }

    #[test]
    fn negative_values() {
        let x = from_rational(&rat(-5, 4));
        assert_eq!(to_sig_string(&x, 3), "-1.25");
        assert_eq!(to_f64(&x), -1.25);
    }

    #[test]
    fn ln_exp_consistency() {
        // exp(ln(7/3)) == 7/3 to working precision.
        let x = rat(7, 3);
        let y = exp(&ln_rational(&x));
        let diff = sub(&y, &from_rational(&x));
        let tol = from_rational(&rat(1, i64::MAX));
        assert!(cmp(&diff.abs(), &tol) == Ordering::Less);
    }

    #[test]
    fn sqrt_of_two() {
        let s = to_sig_string(&sqrt(&from_i64(2)), 20);
        assert_eq!(s, "1.4142135623730950488");
    }

    #[test]
    fn pow_rational_exponent() {
        // 8^(2/3) = 4
        let v = pow_rational(&rat(8, 1), &rat(2, 3));
        let diff = sub(&v, &from_i64(4)).abs();
        assert!(cmp(&diff, &from_rational(&rat(1, i64::MAX))) == Ordering::Less);
    }

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(to_sig_string(&from_i64(0), 5), "0");
        assert!(is_zero(&from_i64(0)));
    }
}
