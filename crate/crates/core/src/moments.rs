//! First and second moments of the number of k-star decompositions of a
//! random pairing, cycle-statistic parameters, and their closed-form
//! limits, together with exhaustive pairing-enumeration oracles usable at
//! tiny n.
//!
//! Finite-n formulas are exact rationals; asymptotic and series limits are
//! high-precision floats. The two never mix: a decimal is only ever derived
//! from an exact value for display or for a convergence check.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combin::{binomial, double_factorial_odd, factorial, falling, multinomial};
use crate::highprec as hp;
use crate::polyexact::{rat, rat_int, Rational};
use crate::{domain_err, Error, Result};

/// Default cap on the number of lattice points enumerated by `exact_ey2`.
pub const DEFAULT_LATTICE_CAP: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// Cycle parameters
// ---------------------------------------------------------------------------

/// Limit parameters of the j-cycle counts: the Poisson mean lambda_j and the
/// conditioned shift delta_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleParams {
    pub j: i64,
    /// (d-1)^j / (2j)
    pub lambda: Rational,
    /// ((d-2k+1)/(d-1))^j
    pub delta: Rational,
}

impl CycleParams {
    /// lambda_j (1 + delta_j), the mean of the j-cycle Poisson limit after
    /// conditioning on a decomposition.
    pub fn limit_factor(&self) -> Rational {
        &self.lambda * (rat_int(1) + &self.delta)
    }
}

pub fn cycle_params(d: i64, k: i64, j: i64) -> Result<CycleParams> {
    if d < 3 {
        return domain_err(format!("d must be at least 3, got {d}"));
    }
    if j < 1 {
        return domain_err(format!("cycle length index must be >= 1, got {j}"));
    }
    let ju = u32::try_from(j).map_err(|_| Error::Domain("j too large".into()))?;
    let lambda = Rational::new(BigInt::from(d - 1).pow(ju), BigInt::from(2 * j));
    let delta = rat(d - 2 * k + 1, d - 1).pow(ju as i32);
    Ok(CycleParams { j, lambda, delta })
}

// ---------------------------------------------------------------------------
// Series and ratio limits
// ---------------------------------------------------------------------------

fn series_ratio(d: i64, k: i64) -> Result<Rational> {
    // q = (d+1-2k)^2 / (d-1); the series sum_j q^j/(2j) converges iff q < 1,
    // which is exactly (P2) via (d-1) - (d+1-2k)^2 = 4k-d-2-(2k-d)^2.
    if d < 3 || 2 * k <= d || k >= d {
        return domain_err("series condition fails");
    }
    let q = rat((d + 1 - 2 * k) * (d + 1 - 2 * k), d - 1);
    if q >= rat_int(1) {
        return domain_err("series condition fails");
    }
    Ok(q)
}

/// Closed form of sum_j lambda_j delta_j^2 = (1/2) log((d-1) / (4k-d-2-(2k-d)^2)).
/// Defined when 2k > d and (P2) holds, the exact condition for convergence.
pub fn sum_lambda_delta_sq(d: i64, k: i64) -> Result<BigFloat> {
    series_ratio(d, k)?;
    let s = 2 * k - d;
    let disc = 4 * k - d - 2 - s * s;
    Ok(hp::mul(
        &hp::from_rational(&rat(1, 2)),
        &hp::ln_rational(&rat(d - 1, disc)),
    ))
}

/// Partial sum over j <= j_max of lambda_j delta_j^2, exact. The terms are
/// q^j/(2j) with q the squared-delta ratio, so the tail after j_max is below
/// q^(j_max+1) / (2 (j_max+1) (1-q)).
pub fn sum_lambda_delta_sq_partial(d: i64, k: i64, j_max: i64) -> Result<Rational> {
    let q = series_ratio(d, k)?;
    let mut total = Rational::zero();
    let mut qpow = Rational::one();
    for j in 1..=j_max {
        qpow *= &q;
        total += &qpow / rat_int(2 * j);
    }
    Ok(total)
}

/// Limit of E(Y^2) / (E Y)^2: sqrt((d-1) / (4k-d-2-(2k-d)^2)).
/// Equals exp(sum_lambda_delta_sq) exactly; both are computed independently.
pub fn variance_ratio_limit(d: i64, k: i64) -> Result<BigFloat> {
    let s = 2 * k - d;
    let disc = 4 * k - d - 2 - s * s;
    if d < 3 || disc <= 0 {
        return domain_err("variance ratio undefined: 4k-d-2-(2k-d)^2 must be positive");
    }
    Ok(hp::sqrt(&hp::from_rational(&rat(d - 1, disc))))
}

// ---------------------------------------------------------------------------
// First moment
// ---------------------------------------------------------------------------

fn require_divisibility(n: i64, d: i64, k: i64) -> Result<()> {
    if n < 1 || d < 1 || k < 1 || k > d {
        return domain_err(format!("need n >= 1 and 1 <= k <= d, got n={n} d={d} k={k}"));
    }
    if 2 * k <= d {
        return domain_err(format!(
            "moment formulas require 2k > d (in-degrees 0 or k), got d={d} k={k}"
        ));
    }
    if (d * n) % (2 * k) != 0 {
        return domain_err(format!("2k = {} must divide dn = {}", 2 * k, d * n));
    }
    Ok(())
}

/// E Y for the pairing model on n cells of degree d: the expected number of
/// in-degree-{0,k} orientations,
/// binom(n, dn/2k) binom(d,k)^(dn/2k) (dn/2)! / M(dn).
pub fn exact_ey(n: i64, d: i64, k: i64) -> Result<Rational> {
    require_divisibility(n, d, k)?;
    let centers = d * n / (2 * k);
    let num = binomial(n, centers)
        * binomial(d, k).pow(u32::try_from(centers).unwrap())
        * factorial(d * n / 2);
    Ok(Rational::new(num, double_factorial_odd(d * n / 2)))
}

/// Leading-order E Y: (k / sqrt(2k-d)) c(d,k)^(dn/(2k)), with
/// c(d,k) = binom(d,k) k^(2k/d) / (2^(k(d-2)/d) d (2k-d)^((2k-d)/d)).
pub fn asympt_ey(n: i64, d: i64, k: i64) -> Result<BigFloat> {
    require_divisibility(n, d, k)?;
    if k >= d {
        return domain_err("asymptotic first moment requires k < d");
    }
    let s = 2 * k - d;
    let m = d * n / (2 * k);
    // ln E Y = ln k - (1/2) ln s + m ln c.
    let ln_c = [
        (rat_int(1), binomial(d, k)),
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
    let ln_val = hp::add(
        &hp::sub(
            &hp::ln_rational(&rat_int(k)),
            &hp::mul(&hp::from_rational(&rat(1, 2)), &hp::ln_rational(&rat_int(s))),
        ),
        &hp::mul(&hp::from_i64(m), &ln_c),
    );
    Ok(hp::exp(&ln_val))
}

/// Expected number of independent cell sets of size s in the pairing model:
/// binom(n, s) (dn-ds)_(ds) M(dn-2ds) / M(dn).
pub fn exact_ez(n: i64, d: i64, s: i64) -> Result<Rational> {
    if n < 1 || d < 1 {
        return domain_err("need n >= 1 and d >= 1");
    }
    if s < 0 || 2 * s > n {
        return domain_err(format!("independent-set size must satisfy 0 <= s <= n/2, got {s}"));
    }
    if (d * n) % 2 != 0 {
        return domain_err("dn must be even");
    }
    let num = binomial(n, s) * falling(d * n - d * s, d * s) * double_factorial_odd((d * n - 2 * d * s) / 2);
    Ok(Rational::new(num, double_factorial_odd(d * n / 2)))
}

/// h_d(a) = (d-1)(1-a) log(1-a) - a log a - (d/2)(1-2a) log(1-2a) with the
/// 0 log 0 = 0 convention; the exponential rate of E Z at density a.
pub fn hd_alpha(d: i64, alpha: &Rational) -> Result<BigFloat> {
    if d < 1 {
        return domain_err("need d >= 1");
    }
    if alpha.is_negative() || *alpha >= rat(1, 2) {
        return domain_err("alpha must lie in [0, 1/2)");
    }
    if alpha.is_zero() {
        return Ok(hp::from_i64(0));
    }
    let one = rat_int(1);
    let term = |coef: Rational, arg: Rational| -> BigFloat {
        hp::mul(&hp::from_rational(&coef), &hp::ln_rational(&arg))
    };
    let t1 = term(rat_int(d - 1) * (&one - alpha), &one - alpha);
    let t2 = term(alpha.clone(), alpha.clone());
    let t3 = term(rat(d, 2) * (&one - rat_int(2) * alpha), &one - rat_int(2) * alpha);
    Ok(hp::sub(&hp::sub(&t1, &t2), &t3))
}

// ---------------------------------------------------------------------------
// Second moment
// ---------------------------------------------------------------------------

/// Number of lattice points in the overlap domain: vectors in Z^(d-k+1)
/// with nonnegative entries and component sum in [dn/k - n, dn/(2k)].
fn lattice_size(n: i64, d: i64, k: i64) -> BigInt {
    let dims = d - k + 1;
    let lo = (d * n / k - n).max(0);
    let hi = d * n / (2 * k);
    let mut count = BigInt::zero();
    for t in lo..=hi {
        count += binomial(t + dims - 1, dims - 1);
    }
    count
}

/// E(Y^2), exact: the sum over overlap profiles B of
/// multinom(n; B, m-|B|, m-|B|, n-2m+|B|) binom(d,k)^(2m-2|B|)
/// gamma! (dn/2-gamma)! prod_i x_i^(B_i) all over M(dn), where m = dn/(2k),
/// |B| is the component sum, gamma = sum_i (k-i) B_i, and
/// x_i = binom(d,k) binom(k,i) binom(d-k,i) counts ordered center overlaps.
///
/// The profile domain is enumerated directly; `cap` bounds its size
/// (default `DEFAULT_LATTICE_CAP`).
pub fn exact_ey2(n: i64, d: i64, k: i64, cap: Option<u64>) -> Result<Rational> {
    require_divisibility(n, d, k)?;
    let cap = cap.unwrap_or(DEFAULT_LATTICE_CAP);
    let size = lattice_size(n, d, k);
    if size > BigInt::from(cap) {
        return Err(Error::CapExceeded(format!(
            "overlap domain has {size} lattice points, cap is {cap}"
        )));
    }

    let m = d * n / (2 * k); // centers per decomposition
    let lo = (d * n / k - n).max(0);
    let dims = (d - k + 1) as usize;
    let xs: Vec<BigInt> = (0..dims as i64)
        .map(|i| binomial(d, k) * binomial(k, i) * binomial(d - k, i))
        .collect();

    let mut total = BigInt::zero();
    let mut b = vec![0i64; dims];
    // Depth-first enumeration of all B with lo <= sum(B) <= m.
    fn walk(
        pos: usize,
        sum: i64,
        b: &mut Vec<i64>,
        lo: i64,
        m: i64,
        ctx: &(i64, i64, i64, Vec<BigInt>),
        total: &mut BigInt,
    ) {
        let (n, d, k, xs) = ctx;
        if pos == b.len() {
            if sum < lo {
                return;
            }
            let mcount = *d * *n / (2 * *k);
            // gamma = sum (k-i) B_i; in-points shared between the two
            // orientations.
            let gamma: i64 = b.iter().enumerate().map(|(i, &bi)| (*k - i as i64) * bi).sum();
            debug_assert!(gamma <= *d * *n / 2);
            let mut parts: Vec<i64> = b.clone();
            parts.push(mcount - sum);
            parts.push(mcount - sum);
            parts.push(*n - 2 * mcount + sum);
            let mut term = multinomial(*n, &parts);
            term *= binomial(*d, *k).pow(u32::try_from(2 * (mcount - sum)).unwrap());
            term *= factorial(gamma);
            term *= factorial(*d * *n / 2 - gamma);
            for (i, &bi) in b.iter().enumerate() {
                term *= xs[i].pow(u32::try_from(bi).unwrap());
            }
            *total += term;
            return;
        }
        for v in 0..=(m - sum) {
            b[pos] = v;
            walk(pos + 1, sum + v, b, lo, m, ctx, total);
        }
        b[pos] = 0;
    }
    let ctx = (n, d, k, xs);
    walk(0, 0, &mut b, lo, m, &ctx, &mut total);
    Ok(Rational::new(total, double_factorial_odd(d * n / 2)))
}

// ---------------------------------------------------------------------------
// Report bundle
// ---------------------------------------------------------------------------

/// Exact and asymptotic moment values at one (n, d, k).
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub exact_ey: Rational,
    /// 50 significant digits of the leading-order E Y.
    pub asympt_ey: String,
    pub exact_ey2: Rational,
    /// 50 significant digits of sqrt((d-1)/(4k-d-2-(2k-d)^2)).
    pub variance_ratio_limit: String,
    /// 50 significant digits of sum_j lambda_j delta_j^2.
    pub sum_lambda_delta_sq: String,
}

impl MomentReport {
    pub fn compute(n: i64, d: i64, k: i64, cap: Option<u64>) -> Result<Self> {
        let exact_ey = exact_ey(n, d, k)?;
        let exact_ey2 = exact_ey2(n, d, k, cap)?;
        debug_assert!(exact_ey2 >= &exact_ey * &exact_ey);
        Ok(MomentReport {
            exact_ey,
            asympt_ey: hp::to_sig_string(&asympt_ey(n, d, k)?, 50),
            exact_ey2,
            variance_ratio_limit: hp::to_sig_string(&variance_ratio_limit(d, k)?, 50),
            sum_lambda_delta_sq: hp::to_sig_string(&sum_lambda_delta_sq(d, k)?, 50),
        })
    }
}

// ---------------------------------------------------------------------------
// Enumeration oracles
// ---------------------------------------------------------------------------

/// Number of orientations of the pairing's dn/2 pairs in which every cell's
/// in-degree is a valid star in-degree: 0 or k when 2k > d, any multiple of
/// k otherwise. Cells are blocks of d consecutive points.
fn count_star_orientations(partner: &[usize], n: usize, d: usize, k: usize) -> u64 {
    let pairs: Vec<(usize, usize)> = partner
        .iter()
        .enumerate()
        .filter(|&(p, &q)| p < q)
        .map(|(p, &q)| (p, q))
        .collect();
    let m = pairs.len();
    debug_assert_eq!(m, n * d / 2);
    let restricted = 2 * k > d;
    let mut valid = 0u64;
    for mask in 0u64..(1u64 << m) {
        let mut indeg = vec![0usize; n];
        for (j, &(p, q)) in pairs.iter().enumerate() {
            let head = if mask >> j & 1 == 1 { p } else { q };
            indeg[head / d] += 1;
        }
        let ok = indeg.iter().all(|&deg| {
            if restricted {
                deg == 0 || deg == k
            } else {
                deg % k == 0
            }
        });
        if ok {
            valid += 1;
        }
    }
    valid
}

fn oracle_guard(n: i64, d: i64, k: i64) -> Result<(usize, usize, usize)> {
    if n < 1 || d < 1 || k < 1 {
        return domain_err("oracle needs positive n, d, k");
    }
    let points = n * d;
    if points % 2 != 0 {
        return domain_err("dn must be even");
    }
    if points > 16 {
        return Err(Error::CapExceeded(format!(
            "pairing enumeration limited to dn <= 16, got dn = {points}"
        )));
    }
    Ok((n as usize, d as usize, k as usize))
}

/// Splits the pairing enumeration by the mate of point 0 and folds each
/// branch with `per_pairing`, summing the results in parallel.
fn sum_over_pairings(
    points: usize,
    per_pairing: impl Fn(&[usize]) -> BigInt + Sync,
) -> BigInt {
    (1..points)
        .into_par_iter()
        .map(|q0| {
            let mut acc = BigInt::zero();
            let mut partner = vec![usize::MAX; points];
            partner[0] = q0;
            partner[q0] = 0;
            let rest: Vec<usize> =
                (1..points).filter(|&p| p != q0).collect();
            fn rec(
                partner: &mut Vec<usize>,
                rest: &[usize],
                acc: &mut BigInt,
                per: &(impl Fn(&[usize]) -> BigInt + Sync),
            ) {
                let Some(&p) = rest.iter().find(|&&p| partner[p] == usize::MAX) else {
                    *acc += per(partner);
                    return;
                };
                for &q in rest.iter().filter(|&&q| q > p) {
                    if partner[q] == usize::MAX {
                        partner[p] = q;
                        partner[q] = p;
                        rec(partner, rest, acc, per);
                        partner[p] = usize::MAX;
                        partner[q] = usize::MAX;
                    }
                }
            }
            rec(&mut partner, &rest, &mut acc, &per_pairing);
            acc
        })
        .sum()
}

/// E Y by full enumeration: averages the star-orientation count over all
/// M(dn) pairings. Ground truth for `exact_ey` at dn <= 16.
pub fn enumeration_ey(n: i64, d: i64, k: i64) -> Result<Rational> {
    let (nu, du, ku) = oracle_guard(n, d, k)?;
    let total = sum_over_pairings(nu * du, |partner| {
        BigInt::from(count_star_orientations(partner, nu, du, ku))
    });
    Ok(Rational::new(total, double_factorial_odd(d * n / 2)))
}

/// E(Y^2) by full enumeration: averages the squared orientation count.
pub fn enumeration_ey2(n: i64, d: i64, k: i64) -> Result<Rational> {
    let (nu, du, ku) = oracle_guard(n, d, k)?;
    let total = sum_over_pairings(nu * du, |partner| {
        let y = BigInt::from(count_star_orientations(partner, nu, du, ku));
        &y * &y
    });
    Ok(Rational::new(total, double_factorial_odd(d * n / 2)))
}

/// E Z_s by full enumeration: averages, over all pairings, the number of
/// s-subsets of cells with no pair inside the subset.
pub fn enumeration_ez(n: i64, d: i64, s: i64) -> Result<Rational> {
    let (nu, du, _) = oracle_guard(n, d, 1)?;
    if s < 0 || s > n {
        return domain_err("independent-set size out of range");
    }
    let su = s as usize;
    let subsets: Vec<Vec<bool>> = subsets_of_size(nu, su);
    let total = sum_over_pairings(nu * du, |partner| {
        let mut count = 0u64;
        for inset in &subsets {
            let independent = partner
                .iter()
                .enumerate()
                .filter(|&(p, &q)| p < q)
                .all(|(p, &q)| !(inset[p / du] && inset[q / du]));
            if independent {
                count += 1;
            }
        }
        BigInt::from(count)
    });
    Ok(Rational::new(total, double_factorial_odd(d * n / 2)))
}

fn subsets_of_size(n: usize, s: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize == s {
            out.push((0..n).map(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn f64_of(v: &BigFloat) -> f64 {
        hp::to_f64(v)
    }

    #[test]
    fn cycle_params_examples() {
        let cp = cycle_params(3, 2, 1).unwrap();
        assert_eq!(cp.lambda, rat_int(1));
        assert_eq!(cycle_params(4, 3, 1).unwrap().delta, rat(-1, 3));
        for d in [3i64, 5, 7, 9] {
            for j in 1..=5 {
                assert!(cycle_params(d, (d + 1) / 2, j).unwrap().delta.is_zero());
            }
        }
        // delta > -1 and the limit factor is positive whenever k < d.
        for d in 3..=8 {
            for k in 1..d {
                for j in 1..=4 {
                    let cp = cycle_params(d, k, j).unwrap();
                    assert!(cp.delta > rat_int(-1));
                    assert!(cp.limit_factor().is_positive());
                }
            }
        }
        assert!(cycle_params(3, 2, 0).is_err());
    }

    #[test]
    fn series_closed_form_matches_partials() {
        // Partial sums increase to the closed form.
        for (d, k) in [(4i64, 3i64), (7, 4), (20, 12)] {
            let closed = f64_of(&sum_lambda_delta_sq(d, k).unwrap());
            let p50 = sum_lambda_delta_sq_partial(d, k, 50).unwrap();
            let p200 = sum_lambda_delta_sq_partial(d, k, 200).unwrap();
            assert!(p50 <= p200);
            assert!((p200.to_f64().unwrap() - closed).abs() < 1e-10);
        }
        assert!((f64_of(&sum_lambda_delta_sq(4, 3).unwrap()) - 1.5f64.ln() / 2.0).abs() < 1e-14);
        assert!((f64_of(&sum_lambda_delta_sq(20, 12).unwrap()) - 1.9f64.ln() / 2.0).abs() < 1e-14);
        assert!(f64_of(&sum_lambda_delta_sq(9, 5).unwrap()).abs() < 1e-70);
        // P2 fails: series diverges.
        assert!(sum_lambda_delta_sq(20, 13).is_err());
        assert!(sum_lambda_delta_sq(6, 3).is_err());
    }

    #[test]
    fn variance_ratio_examples() {
        assert!((f64_of(&variance_ratio_limit(4, 3).unwrap()) - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((f64_of(&variance_ratio_limit(9, 5).unwrap()) - 1.0).abs() < 1e-70);
        assert!(variance_ratio_limit(20, 13).is_err());
        // Independent computations agree: sqrt form vs exp of the series.
        for (d, k) in [(4i64, 3i64), (5, 3), (7, 4), (20, 12), (29, 15)] {
            let a = f64_of(&variance_ratio_limit(d, k).unwrap());
            let b = f64_of(&hp::exp(&sum_lambda_delta_sq(d, k).unwrap()));
            assert!((a - b).abs() < 1e-10, "({d},{k}): {a} vs {b}");
        }
    }

    #[test]
    fn exact_ey_known_values() {
        assert_eq!(exact_ey(3, 4, 3).unwrap(), rat(256, 77));
        // n=6, d=2, k=2: binom(6,3) binom(2,2)^3 6! / M(12).
        assert_eq!(exact_ey(6, 2, 2).unwrap(), rat(20 * 720, 10395));
        assert!(exact_ey(5, 3, 2).is_err()); // 4 does not divide 15
        assert!(exact_ey(4, 4, 2).is_err()); // 2k = d
    }

    #[test]
    fn exact_ey_matches_enumeration() {
        // Every instance with dn <= 12 and 2k | dn in the star regime.
        for (n, d, k) in [(3i64, 4i64, 3i64), (6, 2, 2), (2, 4, 4), (4, 3, 3), (2, 6, 6)] {
            assert_eq!(
                exact_ey(n, d, k).unwrap(),
                enumeration_ey(n, d, k).unwrap(),
                "EY mismatch at ({n},{d},{k})"
            );
        }
    }

    #[test]
    fn asympt_ey_tracks_exact() {
        // Base < 1 for (5,4): expectation vanishes along the sequence.
        let v24 = f64_of(&asympt_ey(24, 5, 4).unwrap());
        let v48 = f64_of(&asympt_ey(48, 5, 4).unwrap());
        assert!(v48 < v24);
        // Ratio to the exact value near 1 at moderate n for (4,3).
        let n = 60;
        let exact = exact_ey(n, 4, 3).unwrap().to_f64().unwrap();
        let asym = f64_of(&asympt_ey(n, 4, 3).unwrap());
        assert!((asym / exact - 1.0).abs() < 0.05, "ratio {}", asym / exact);
    }

    #[test]
    fn exact_ez_examples() {
        assert_eq!(exact_ez(4, 3, 0).unwrap(), rat_int(1));
        // n=3, d=2, s=1: 3 * (4)_2 * M(4)/M(6) = 3*12*3/15... falling(4,2)=12, M(4)=3.
        assert_eq!(exact_ez(3, 2, 1).unwrap(), rat(12, 5));
        assert!(exact_ez(4, 3, 3).is_err());
    }

    #[test]
    fn exact_ez_matches_enumeration() {
        for (n, d, s) in [(3i64, 2i64, 1i64), (4, 3, 2), (4, 3, 1), (6, 2, 3), (4, 2, 2)] {
            assert_eq!(
                exact_ez(n, d, s).unwrap(),
                enumeration_ez(n, d, s).unwrap(),
                "EZ mismatch at ({n},{d},{s})"
            );
        }
    }

    #[test]
    fn hd_examples() {
        assert!(f64_of(&hd_alpha(10, &rat_int(0)).unwrap()).abs() == 0.0);
        assert!(hd_alpha(10, &rat(1, 2)).is_err());
        assert!(hd_alpha(10, &rat(-1, 10)).is_err());
        // Sign at alpha* = (2k-d)/(2k) agrees with the first-moment inequality.
        for d in 4..=16i64 {
            for k in (d / 2 + 1)..d {
                let alpha_star = rat(2 * k - d, 2 * k);
                let h = f64_of(&hd_alpha(d, &alpha_star).unwrap());
                let holds = crate::thresholds::kplus_inequality(d, k).unwrap();
                assert_eq!(h > 0.0, holds, "sign mismatch at ({d},{k}), h={h}");
            }
        }
    }

    #[test]
    fn hd_concave_and_single_root() {
        // Concavity on a grid for d=10.
        let d = 10;
        let h = rat(1, 100);
        for j in 1..=47i64 {
            let a0 = f64_of(&hd_alpha(d, &(rat(1, 200) + &h * rat_int(j - 1))).unwrap());
            let a1 = f64_of(&hd_alpha(d, &(rat(1, 200) + &h * rat_int(j))).unwrap());
            let a2 = f64_of(&hd_alpha(d, &(rat(1, 200) + &h * rat_int(j + 1))).unwrap());
            assert!(a2 - 2.0 * a1 + a0 <= 1e-12);
        }
        // Exactly one sign change on (0, 1/2) per degree.
        for d in [4i64, 6, 10, 20] {
            let mut changes = 0;
            let mut last = 0i8;
            for j in 1..499i64 {
                let v = f64_of(&hd_alpha(d, &rat(j, 1000)).unwrap());
                let s = if v > 0.0 { 1 } else { -1 };
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
            assert_eq!(changes, 1, "h_{d} should cross zero once");
        }
    }

    #[test]
    fn exact_ey2_matches_enumeration() {
        for (n, d, k) in [(3i64, 4i64, 3i64), (2, 4, 4), (4, 3, 3), (2, 6, 6)] {
            assert_eq!(
                exact_ey2(n, d, k, None).unwrap(),
                enumeration_ey2(n, d, k).unwrap(),
                "EY2 mismatch at ({n},{d},{k})"
            );
        }
    }

    #[test]
    fn ey2_jensen_and_trend() {
        // E(Y^2) >= (E Y)^2 everywhere it is defined.
        for (n, d, k) in [(3i64, 4i64, 3i64), (6, 4, 3), (9, 4, 3), (8, 3, 2), (6, 2, 2)] {
            let ey = exact_ey(n, d, k).unwrap();
            let ey2 = exact_ey2(n, d, k, None).unwrap();
            assert!(ey2 >= &ey * &ey, "Jensen fails at ({n},{d},{k})");
        }
        // Ratio trends toward sqrt(3/2) for (4,3).
        let target = 1.5f64.sqrt();
        let ratio = |n: i64| {
            let ey = exact_ey(n, 4, 3).unwrap();
            let ey2 = exact_ey2(n, 4, 3, None).unwrap();
            (ey2 / (&ey * &ey)).to_f64().unwrap()
        };
        let r6 = ratio(6);
        let r18 = ratio(18);
        let r36 = ratio(36);
        let r60 = ratio(60);
        assert!((r18 - target).abs() < (r6 - target).abs());
        assert!((r36 - target).abs() < (r18 - target).abs());
        assert!((r60 - target).abs() < (r36 - target).abs());
        assert!((r60 - target).abs() < 0.05);
    }

    #[test]
    fn ey2_cap_guard() {
        assert!(matches!(
            exact_ey2(3, 4, 3, Some(1)),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn report_bundle() {
        let rep = MomentReport::compute(3, 4, 3, None).unwrap();
        assert_eq!(rep.exact_ey, rat(256, 77));
        assert!(rep.variance_ratio_limit.starts_with("1.22"));
    }

    #[test]
    fn pairing_enumerator_counts() {
        for a in 1..=5usize {
            let count = sum_over_pairings(2 * a, &|_: &[usize]| BigInt::from(1));
            assert_eq!(
                count,
                double_factorial_odd(a as i64),
                "pairing count at 2a = {}",
                2 * a
            );
        }
    }
}
