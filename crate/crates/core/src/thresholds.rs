//! Existence thresholds for k-star decompositions of random d-regular
//! graphs: the generating polynomials f and g, the auxiliary functions
//! eta, f-hat and A, the second-moment conditions (P1)/(P2), the
//! first-moment threshold k+, and the base constant c(d,k).
//!
//! Every pass/fail decision here is exact: integer comparisons for (P2) and
//! the k+ inequality, big-integer power products for c(d,k) > 1, and Sturm
//! root isolation with branch filtering for (P1). High-precision floats
//! appear only in reported decimal values and plot series.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

use crate::combin::binomial;
use crate::highprec as hp;
use crate::polyexact::{
    isolate_roots_with, power_product_compare, rat, rat_int, PowerProduct, Rational,
    RationalInterval, RationalPolynomial, RootCounter,
};
use crate::{domain_err, Result};

/// Degree/star-size pair. `d` is the graph degree, `k` the star size.
/// Operations that need k > d/2 (the nontrivial decomposition regime)
/// validate that themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub d: i64,
    pub k: i64,
}

impl Params {
    pub fn new(d: i64, k: i64) -> Result<Self> {
        if d < 3 {
            return domain_err(format!("d must be at least 3, got {d}"));
        }
        if k < 1 || k >= d {
            return domain_err(format!("k must satisfy 1 <= k < d, got k={k}, d={d}"));
        }
        Ok(Params { d, k })
    }

    /// 2k - d, the in-degree surplus; positive exactly in the star regime.
    pub(crate) fn s(&self) -> i64 {
        2 * self.k - self.d
    }

    pub(crate) fn require_star_regime(&self) -> Result<()> {
        if 2 * self.k <= self.d {
            return domain_err(format!(
                "k out of range: need d/2 < k < d, got d={}, k={}",
                self.d, self.k
            ));
        }
        Ok(())
    }
}

/// Probability generating function of the hypergeometric distribution with
/// parameters (d, k, k): coefficient of x^(k-i) is
/// binom(k,i) binom(d-k,i) / binom(d,k) for i = 0..d-k.
///
/// In the star regime every exponent is at least 2k-d >= 1, so f(0) = 0 and
/// f > 0 on x > 0.
pub fn build_f(params: &Params) -> Result<RationalPolynomial> {
    params.require_star_regime()?;
    let (d, k) = (params.d, params.k);
    let denom = binomial(d, k);
    let mut coeffs = vec![Rational::zero(); (k + 1) as usize];
    for i in 0..=(d - k) {
        let num = binomial(k, i) * binomial(d - k, i);
        coeffs[(k - i) as usize] = Rational::new(num, denom.clone());
    }
    Ok(RationalPolynomial::new(coeffs))
}

/// The reversal g(t) = f(1/t) t^k: coefficient of t^j is
/// binom(k,j) binom(d-k,j) / binom(d,k) for j = 0..d-k.
pub fn build_g(params: &Params) -> Result<RationalPolynomial> {
    params.require_star_regime()?;
    let (d, k) = (params.d, params.k);
    let denom = binomial(d, k);
    let mut coeffs = vec![Rational::zero(); (d - k + 1) as usize];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let num = binomial(k, j as i64) * binomial(d - k, j as i64);
        *c = Rational::new(num, denom.clone());
    }
    Ok(RationalPolynomial::new(coeffs))
}

/// eta(x) = (2k-d) / (d-k + sqrt((d-k)^2 + d(2k-d) f(x))) for x >= 0.
/// Monotonically decreasing from eta(0) = (2k-d)/(2(d-k)); eta(1) = (2k-d)/d.
pub fn eta(params: &Params, x: &Rational) -> Result<BigFloat> {
    params.require_star_regime()?;
    if x.is_negative() {
        return domain_err("eta requires x >= 0");
    }
    let f = build_f(params)?;
    Ok(eta_from_f(params, &f, x))
}

/// eta(x) with f prebuilt; the radicand is assembled exactly and only the
/// square root runs in floating point.
fn eta_from_f(params: &Params, f: &RationalPolynomial, x: &Rational) -> BigFloat {
    let (d, k, s) = (params.d, params.k, params.s());
    let fx = f.eval(x);
    let radicand = rat_int((d - k) * (d - k)) + rat_int(d * s) * fx;
    debug_assert!(radicand.is_positive());
    let root = hp::sqrt(&hp::from_rational(&radicand));
    hp::div(&hp::from_i64(s), &hp::add(&hp::from_i64(d - k), &root))
}

/// f-hat(x) = k (1 + eta(x)) f(x) / ((x+1) f'(x)) - 1 for x > 0.
/// Zero exactly at solutions of the stationarity equation; in particular
/// f-hat(1) = 0 for every valid (d, k).
pub fn fhat(params: &Params, x: &Rational) -> Result<BigFloat> {
    params.require_star_regime()?;
    if !x.is_positive() {
        return domain_err("fhat requires x > 0");
    }
    let f = build_f(params)?;
    let fp = f.derivative();
    Ok(fhat_from_f(params, &f, &fp, x))
}

fn fhat_from_f(
    params: &Params,
    f: &RationalPolynomial,
    fp: &RationalPolynomial,
    x: &Rational,
) -> BigFloat {
    let k = params.k;
    let e = eta_from_f(params, f, x);
    // Exact rational factor k f(x) / ((x+1) f'(x)).
    let factor = rat_int(k) * f.eval(x) / ((x + rat_int(1)) * fp.eval(x));
    let one = hp::from_i64(1);
    hp::sub(
        &hp::mul(&hp::from_rational(&factor), &hp::add(&one, &e)),
        &one,
    )
}

/// (P2): (2k-d)^2 < 4k-d-2, by exact integer comparison.
pub fn check_p2(params: &Params) -> bool {
    let s = params.s();
    s * s < 4 * params.k - params.d - 2
}

/// The open interval on which the stationarity equation must have x = 1 as
/// its only solution. Requires (P2), which makes the lower endpoint positive
/// and keeps 1 inside.
pub fn p1_interval(params: &Params) -> Result<RationalInterval> {
    let (d, k, s) = (params.d, params.k, params.s());
    if !check_p2(params) {
        return domain_err("P1 undefined without P2");
    }
    let disc = 4 * k - d - 2 - s * s;
    let scale = k * (d - k) * disc;
    let lo = rat(scale, scale + s * s * d);
    let hi = rat(5 * k - 2 * d, d - k);
    RationalInterval::open(lo, hi)
}

/// (P1): on the interval of `p1_interval`, x = 1 is the only solution of
/// k (1 + eta(x)) f(x) = (x+1) f'(x).
///
/// Decided exactly. With y = (x+1) f'/k, squaring out the radical in eta
/// turns the equation into Q(x) = (y - f)^2 - (f - 2(d-k) y / d) = 0
/// restricted to the branch 2(d-k) y / d < f < y. Sturm isolation finds
/// every root of Q in the interval; each root other than x = 1 is refined
/// until the signs of both branch constraints are unambiguous, and roots
/// violating either constraint are discarded.
pub fn check_p1(params: &Params) -> Result<bool> {
    params.require_star_regime()?;
    if !check_p2(params) {
        return domain_err("P1 undefined without P2");
    }
    let (d, k) = (params.d, params.k);
    let f = build_f(params)?;
    let fp = f.derivative();
    let xp1 = RationalPolynomial::from_integers(&[1, 1]);
    let y = xp1.mul(&fp).scale(&rat(1, k));
    let c1 = y.sub(&f); // y - f; equals eta*f > 0 at true solutions
    let c2 = f.sub(&y.scale(&rat(2 * (d - k), d))); // f - 2(d-k)y/d
    let q = c1.mul(&c1).sub(&c2);

    let one = rat_int(1);
    assert!(q.eval(&one).is_zero(), "x = 1 must solve the squared equation");
    let window = p1_interval(params)?;
    assert!(window.contains(&one), "x = 1 must lie in the window");

    let q_counter = RootCounter::new(&q)?;
    let c1_counter = RootCounter::new(&c1)?;
    let c2_counter = RootCounter::new(&c2)?;

    for isolator in isolate_roots_with(&q_counter, &window) {
        if isolator.contains(&one) {
            // Q(1) = 0 and the isolator holds one distinct root, so this
            // root is exactly the known solution x = 1.
            continue;
        }
        if survives_branch_filter(&isolator, &q_counter, &c1, &c1_counter, &c2, &c2_counter) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shrinks an isolating interval of Q until both constraint polynomials have
/// constant sign on it, then reports whether the root satisfies
/// c1 > 0 and c2 > 0.
///
/// Terminates because neither constraint can vanish at a root of Q: either
/// would force f to vanish at a positive point, and f has positive
/// coefficients there.
fn survives_branch_filter(
    isolator: &RationalInterval,
    q_counter: &RootCounter,
    c1: &RationalPolynomial,
    c1_counter: &RootCounter,
    c2: &RationalPolynomial,
    c2_counter: &RootCounter,
) -> bool {
    let mut lo = isolator.lo.clone();
    let mut hi = isolator.hi.clone();
    loop {
        let open = RationalInterval::open(lo.clone(), hi.clone())
            .expect("refinement keeps lo < hi");
        if c1_counter.count(&open) == 0 && c2_counter.count(&open) == 0 {
            // Constant signs on the interval interior, which contains the
            // root; the midpoint is interior, so its exact signs decide.
            let m = open.midpoint();
            return c1.eval(&m).is_positive() && c2.eval(&m).is_positive();
        }
        let m = open.midpoint();
        if q_counter.is_root(&m) {
            // Exact root location; the constraints are nonzero there.
            return c1.eval(&m).is_positive() && c2.eval(&m).is_positive();
        }
        let left = RationalInterval::open(lo.clone(), m.clone())
            .expect("bisection keeps lo < mid");
        if q_counter.count(&left) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
}

/// Exact test of the first-moment inequality
/// d^(d-1) > (2k-d)^((2k-d)/d) 2^((d^2-2k)/d) k^(k(d-2)/d) (d-k)^(d-k),
/// compared after raising both sides to the d-th power.
pub(crate) fn kplus_inequality(d: i64, k: i64) -> Result<bool> {
    let s = 2 * k - d;
    debug_assert!(s > 0 && k < d);
    let mut lhs = PowerProduct::new();
    lhs.push(BigInt::from(d).to_biguint().unwrap(), d * (d - 1))?;
    let mut rhs = PowerProduct::new();
    rhs.push(BigInt::from(s).to_biguint().unwrap(), s)?;
    rhs.push(BigInt::from(2).to_biguint().unwrap(), d * d - 2 * k)?;
    rhs.push(BigInt::from(k).to_biguint().unwrap(), k * (d - 2))?;
    rhs.push(BigInt::from(d - k).to_biguint().unwrap(), d * (d - k))?;
    Ok(power_product_compare(&lhs, &rhs) == Ordering::Greater)
}

/// k+(d): the largest k with d/2 < k < d satisfying the first-moment
/// inequality, found by scanning downward from d-1.
pub fn compute_kplus(d: i64) -> Result<i64> {
    if d < 3 {
        return domain_err(format!("d must be at least 3, got {d}"));
    }
    let low = d / 2 + 1;
    for k in (low..d).rev() {
        if kplus_inequality(d, k)? {
            return Ok(k);
        }
    }
    domain_err(format!("no k in (d/2, d) satisfies the first-moment inequality for d={d}"))
}

/// k_SSCM(d): the largest K such that every k with d/2 < k <= K passes both
/// (P2) and (P1); the scan runs upward from the smallest admissible k and
/// stops at the first failure.
pub fn compute_ksscm(d: i64) -> Result<i64> {
    if d < 3 {
        return domain_err(format!("d must be at least 3, got {d}"));
    }
    let mut last = None;
    for k in (d / 2 + 1)..d {
        let params = Params::new(d, k)?;
        if check_p2(&params) && check_p1(&params)? {
            last = Some(k);
        } else {
            break;
        }
    }
    last.ok_or_else(|| {
        crate::Error::Domain(format!("no k in (d/2, d) passes both P2 and P1 for d={d}"))
    })
}

/// c(d, k) = binom(d,k) k^(2k/d) / (2^(k(d-2)/d) d (2k-d)^((2k-d)/d)):
/// the growth base of the expected decomposition count per dn/(2k) cells.
#[derive(Clone, Debug)]
pub struct CValue {
    /// 50 significant digits.
    pub decimal: String,
    /// Exact sign of c - 1, decided by big-integer power products after
    /// raising c to the d-th power.
    pub gt_one: bool,
}

pub fn c_value(params: &Params) -> Result<CValue> {
    params.require_star_regime()?;
    let (d, k, s) = (params.d, params.k, params.s());
    let choose = binomial(d, k);

    // ln c = ln binom + (2k/d) ln k - (k(d-2)/d) ln 2 - ln d - (s/d) ln s.
    let ln_c = [
        (rat_int(1), choose.clone()),
        (rat(2 * k, d), BigInt::from(k)),
        (rat(-k * (d - 2), d), BigInt::from(2)),
        (rat_int(-1), BigInt::from(d)),
        (rat(-s, d), BigInt::from(s)),
    ]
    .iter()
    .fold(hp::from_i64(0), |acc, (coef, base)| {
        hp::add(
            &acc,
            &hp::mul(
                &hp::from_rational(coef),
                &hp::ln_rational(&Rational::from_integer(base.clone())),
            ),
        )
    });
    let decimal = hp::to_sig_string(&hp::exp(&ln_c), 50);

    // c > 1 iff binom(d,k)^d k^(2k) > 2^(k(d-2)) d^d s^s.
    let mut lhs = PowerProduct::new();
    lhs.push(choose.to_biguint().unwrap(), d)?;
    lhs.push(BigInt::from(k).to_biguint().unwrap(), 2 * k)?;
    let mut rhs = PowerProduct::new();
    rhs.push(BigInt::from(2).to_biguint().unwrap(), k * (d - 2))?;
    rhs.push(BigInt::from(d).to_biguint().unwrap(), d)?;
    rhs.push(BigInt::from(s).to_biguint().unwrap(), s)?;
    let gt_one = power_product_compare(&lhs, &rhs) == Ordering::Greater;

    Ok(CValue { decimal, gt_one })
}

/// Samples f-hat over a grid. With no grid given, 201 evenly spaced points
/// spanning the (P1) interval, with x = 1 inserted; explicit grids may be
/// any positive x values.
pub fn plot_fhat(
    params: &Params,
    grid: Option<&[Rational]>,
) -> Result<Vec<(Rational, BigFloat)>> {
    params.require_star_regime()?;
    let xs: Vec<Rational> = match grid {
        Some(g) => {
            if g.iter().any(|x| !x.is_positive()) {
                return domain_err("fhat grid requires all x > 0");
            }
            g.to_vec()
        }
        None => {
            let window = p1_interval(params)?;
            let step = window.width() / rat_int(200);
            let mut xs: Vec<Rational> =
                (0..=200).map(|j| &window.lo + &step * rat_int(j)).collect();
            let one = rat_int(1);
            if !xs.contains(&one) {
                xs.push(one);
                xs.sort();
            }
            xs
        }
    };
    let f = build_f(params)?;
    let fp = f.derivative();
    Ok(xs
        .into_iter()
        .map(|x| {
            let v = fhat_from_f(params, &f, &fp, &x);
            (x, v)
        })
        .collect())
}

/// Sign changes along a series, zeros skipped.
pub fn count_sign_changes(series: &[(Rational, BigFloat)]) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for (_, v) in series {
        let s = match hp::cmp(v, &hp::from_i64(0)) {
            Ordering::Less => -1i8,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// A(t) = (t+1) g(t) - d g(t) / (2(d-k)) - t(t+1) g'(t)/k, evaluated
/// exactly, together with the closed form of A'(1).
#[derive(Clone, Debug)]
pub struct AReport {
    /// A(t), exact.
    pub a: Rational,
    /// A'(1) = k (4k-d-2-(2k-d)^2) / (2d(d-1)), exact.
    pub a1_closed: Rational,
}

pub fn check_a(params: &Params, t: &Rational) -> Result<AReport> {
    params.require_star_regime()?;
    if t < &rat_int(1) {
        return domain_err("check_a requires t >= 1");
    }
    let (d, k, s) = (params.d, params.k, params.s());
    let g = build_g(params)?;
    let gp = g.derivative();
    let gt = g.eval(t);
    let tp1 = t + rat_int(1);
    let a = &tp1 * &gt - rat(d, 2 * (d - k)) * &gt - t * &tp1 * gp.eval(t) / rat_int(k);
    let a1_closed = rat(k * (4 * k - d - 2 - s * s), 2 * d * (d - 1));
    Ok(AReport { a, a1_closed })
}

/// Per-degree summary: both threshold integers plus the conditions and
/// growth constant at a chosen k (defaults to k_SSCM(d)).
#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub d: i64,
    /// k at which p2/p1/c were evaluated.
    pub k: i64,
    pub p2_holds: bool,
    pub p1_holds: bool,
    pub kplus: i64,
    pub ksscm: i64,
    pub c_value: String,
    pub c_gt_one: bool,
}

impl ThresholdReport {
    pub fn compute(d: i64, k: Option<i64>) -> Result<Self> {
        let ksscm = compute_ksscm(d)?;
        let kplus = compute_kplus(d)?;
        let k = k.unwrap_or(ksscm);
        let params = Params::new(d, k)?;
        let p2_holds = check_p2(&params);
        let p1_holds = p2_holds && check_p1(&params)?;
        let c = c_value(&params)?;
        Ok(ThresholdReport {
            d,
            k,
            p2_holds,
            p1_holds,
            kplus,
            ksscm,
            c_value: c.decimal,
            c_gt_one: c.gt_one,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn params(d: i64, k: i64) -> Params {
        Params::new(d, k).unwrap()
    }

    fn approx_f64(v: &BigFloat) -> f64 {
        hp::to_f64(v)
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(2, 1).is_err());
        assert!(Params::new(5, 0).is_err());
        assert!(Params::new(5, 5).is_err());
        assert!(Params::new(5, 3).is_ok());
    }

    #[test]
    fn f_small_case() {
        // (d,k) = (3,2): f = (x^2 + 2x)/3
        let f = build_f(&params(3, 2)).unwrap();
        assert_eq!(f.coeff(0), rat_int(0));
        assert_eq!(f.coeff(1), rat(2, 3));
        assert_eq!(f.coeff(2), rat(1, 3));
    }

    #[test]
    fn f_normalization_and_derivatives() {
        for (d, k) in [(3, 2), (4, 3), (7, 4), (9, 6), (20, 12), (20, 11)] {
            let p = params(d, k);
            let f = build_f(&p).unwrap();
            let one = rat_int(1);
            assert_eq!(f.eval(&one), one, "f(1) at ({d},{k})");
            assert_eq!(f.derivative().eval(&one), rat(k * k, d), "f'(1) at ({d},{k})");
            assert_eq!(
                f.derivative().derivative().eval(&one),
                rat(k * k * (k - 1) * (k - 1), d * (d - 1)),
                "f''(1) at ({d},{k})"
            );
            assert!(f.coeffs().iter().all(|c| !c.is_negative()));
            // Minimum exponent 2k - d.
            for e in 0..(2 * k - d) as usize {
                assert!(f.coeff(e).is_zero());
            }
            assert!(f.coeff((2 * k - d) as usize).is_positive());
        }
    }

    #[test]
    fn g_matches_f_reversal() {
        for (d, k) in [(3, 2), (7, 4), (20, 12)] {
            let p = params(d, k);
            let f = build_f(&p).unwrap();
            let g = build_g(&p).unwrap();
            let one = rat_int(1);
            assert_eq!(g.eval(&one), one);
            assert_eq!(g.derivative().eval(&one), rat(k * (d - k), d));
            // g(t) = f(1/t) t^k at a sample point t = 3/2.
            let t = rat(3, 2);
            let tk = Rational::from_integer(t.numer().pow(k as u32))
                / Rational::from_integer(t.denom().pow(k as u32));
            assert_eq!(g.eval(&t), f.eval(&(rat_int(1) / &t)) * tk);
        }
        let g32 = build_g(&params(3, 2)).unwrap();
        assert_eq!(g32.coeff(0), rat(1, 3));
        assert_eq!(g32.coeff(1), rat(2, 3));
    }

    #[test]
    fn eta_endpoints_and_monotonicity() {
        for (d, k) in [(3, 2), (7, 4), (20, 12)] {
            let p = params(d, k);
            let s = 2 * k - d;
            let at0 = eta(&p, &rat_int(0)).unwrap();
            let at1 = eta(&p, &rat_int(1)).unwrap();
            assert!((approx_f64(&at0) - s as f64 / (2.0 * (d - k) as f64)).abs() < 1e-12);
            assert!((approx_f64(&at1) - s as f64 / d as f64).abs() < 1e-12);
            let mut prev = f64::INFINITY;
            for num in 0..=8i64 {
                let v = approx_f64(&eta(&p, &rat(num, 2)).unwrap());
                assert!(v < prev, "eta must decrease");
                prev = v;
            }
        }
        assert!(eta(&params(7, 4), &rat(-1, 2)).is_err());
        assert!(eta(&params(7, 3), &rat_int(1)).is_err());
    }

    #[test]
    fn eta_at_two_below_eta_at_one() {
        let p = params(20, 12);
        let v = approx_f64(&eta(&p, &rat_int(2)).unwrap());
        assert!(v < 0.2 && v > 0.0);
    }

    #[test]
    fn fhat_zero_at_one() {
        for (d, k) in [(3, 2), (7, 4), (20, 11), (20, 12)] {
            let v = fhat(&params(d, k), &rat_int(1)).unwrap();
            assert!(approx_f64(&v).abs() < 1e-60);
        }
        assert!(fhat(&params(7, 4), &rat_int(0)).is_err());
        assert!(fhat(&params(7, 4), &rat_int(-2)).is_err());
    }

    #[test]
    fn p2_examples() {
        assert!(check_p2(&params(20, 12)));
        assert!(!check_p2(&params(20, 13)));
        for d in 3..=40 {
            let k = (d + 2) / 2; // smallest integer exceeding d/2
            assert!(check_p2(&params(d, k)), "P2 at minimal k for d={d}");
        }
    }

    #[test]
    fn p1_window_contains_one() {
        for (d, k) in [(3, 2), (7, 4), (20, 12), (20, 11)] {
            let w = p1_interval(&params(d, k)).unwrap();
            assert!(w.contains(&rat_int(1)));
            assert!(w.lo.is_positive());
        }
        assert!(p1_interval(&params(20, 13)).is_err());
    }

    #[test]
    fn p1_examples() {
        assert!(check_p1(&params(3, 2)).unwrap());
        assert!(check_p1(&params(20, 11)).unwrap());
        assert!(check_p1(&params(20, 12)).unwrap());
        // P2 holds but an extra stationarity solution survives.
        assert!(check_p2(&params(12, 8)));
        assert!(!check_p1(&params(12, 8)).unwrap());
        assert!(check_p2(&params(14, 9)));
        assert!(!check_p1(&params(14, 9)).unwrap());
        // Undefined without P2.
        assert!(check_p1(&params(20, 13)).is_err());
    }

    #[test]
    fn kplus_spot_values() {
        assert_eq!(compute_kplus(5).unwrap(), 4);
        assert_eq!(compute_kplus(14).unwrap(), 9);
        assert_eq!(compute_kplus(20).unwrap(), 12);
    }

    #[test]
    fn ksscm_spot_values() {
        assert_eq!(compute_ksscm(3).unwrap(), 2);
        assert_eq!(compute_ksscm(16).unwrap(), 10);
        assert_eq!(compute_ksscm(20).unwrap(), 12);
    }

    #[test]
    fn c_values_match_published_decimals() {
        // (value rounded to 3 decimal places, exact side of 1)
        for (d, k, want, gt) in [
            (5, 4, 0.901, false),
            (4, 3, 1.299, true),
            (6, 4, 1.984, true),
            (5, 3, 2.146, true),
        ] {
            let c = c_value(&params(d, k)).unwrap();
            let rounded = (c.decimal.parse::<f64>().unwrap() * 1000.0).round() / 1000.0;
            assert_eq!(rounded, want, "c({d},{k})");
            assert_eq!(c.gt_one, gt, "c({d},{k}) vs 1");
            assert!(c.decimal.len() >= 50);
        }
    }

    #[test]
    fn plot_series_crosses_once() {
        let series = plot_fhat(&params(20, 12), None).unwrap();
        assert!(series.len() >= 201);
        assert!(series.iter().any(|(x, _)| x == &rat_int(1)));
        assert_eq!(count_sign_changes(&series), 1);
        // Series is sorted by x.
        for w in series.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn plot_rejects_nonpositive_grid() {
        let grid = [rat_int(1), rat_int(0)];
        assert!(plot_fhat(&params(20, 12), Some(&grid)).is_err());
    }

    #[test]
    fn a_report_values() {
        // A(1) = -(2k-d)^2 / (2d(d-k)).
        for (d, k) in [(3, 2), (7, 4), (9, 6), (20, 12)] {
            let s = 2 * k - d;
            let rep = check_a(&params(d, k), &rat_int(1)).unwrap();
            assert_eq!(rep.a, rat(-s * s, 2 * d * (d - k)));
        }
        // Closed-form A'(1) at (9,6) is 1/6.
        let rep = check_a(&params(9, 6), &rat_int(1)).unwrap();
        assert_eq!(rep.a1_closed, rat(1, 6));
        assert!(check_a(&params(9, 6), &rat(1, 2)).is_err());
    }

    #[test]
    fn a_derivative_matches_finite_difference() {
        for (d, k) in [(3, 2), (9, 6), (20, 12)] {
            let p = params(d, k);
            let h = rat(1, 100_000);
            let a_plus = check_a(&p, &(rat_int(1) + &h)).unwrap().a;
            let a_one = check_a(&p, &rat_int(1)).unwrap().a;
            let fd = (a_plus - a_one) / &h;
            let closed = check_a(&p, &rat_int(1)).unwrap().a1_closed;
            let rel = ((fd.clone() - &closed) / &closed).to_f64().unwrap().abs();
            assert!(rel < 1e-4, "one-sided difference error {rel} at ({d},{k})");
        }
    }

    #[test]
    fn a_convex_beyond_one() {
        // Second differences positive on [1, 3] for pairs satisfying P2.
        for (d, k) in [(3, 2), (9, 6), (20, 12)] {
            let p = params(d, k);
            let h = rat(1, 10);
            for j in 0..=18 {
                let t = rat_int(1) + &h * rat_int(j);
                let a0 = check_a(&p, &t).unwrap().a;
                let a1 = check_a(&p, &(&t + &h)).unwrap().a;
                let a2 = check_a(&p, &(&t + &h * rat_int(2))).unwrap().a;
                assert!((a2 - a1.clone() * rat_int(2) + a0).is_positive());
            }
        }
    }

    #[test]
    fn report_defaults_to_ksscm() {
        let rep = ThresholdReport::compute(20, None).unwrap();
        assert_eq!(rep.ksscm, 12);
        assert_eq!(rep.kplus, 12);
        assert_eq!(rep.k, 12);
        assert!(rep.p2_holds && rep.p1_holds && rep.c_gt_one);
        assert!(rep.ksscm <= rep.kplus);
        let rep13 = ThresholdReport::compute(20, Some(13)).unwrap();
        assert!(!rep13.p2_holds && !rep13.p1_holds);
    }
}
