//! Second-moment landscape over the slab domain K: the rate function phi,
//! the correction factor psi, their gradient and Hessian, the stationary
//! point b*, the closed-form determinant of -H at b*, and a multistart
//! numeric maximization that cross-checks b* as the unique global maximum.
//!
//! Coordinates live in R^(d-k+1): b_i is the scaled number of cells whose
//! two in-point sets share k-i points. K is the slab
//! (d-k)/k <= sum b_i <= d/(2k) intersected with the nonnegative orthant.
//! phi uses the 0 log 0 = 0 convention so boundary points are admissible;
//! psi, the gradient, and the Hessian are interior-only.

use std::cmp::Ordering;
use std::io::Write;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::combin::{binomial, multinomial};
use crate::highprec as hp;
use crate::polyexact::{rat, rat_int, Rational};
use crate::thresholds::{compute_ksscm, Params};
use crate::{domain_err, mix_seed, Result};

/// A point of the slab domain K: d-k+1 nonnegative coordinates
/// b_0..b_{d-k}, with derived sums beta = sum b_i and
/// gamma = sum (k-i) b_i.
#[derive(Clone, Debug, PartialEq)]
pub struct LandscapePoint {
    d: i64,
    k: i64,
    b: Vec<Rational>,
}

impl LandscapePoint {
    /// Wraps coordinates after validating the star regime, the coordinate
    /// count d-k+1, and nonnegativity. Membership in the slab itself is the
    /// separate predicate [`LandscapePoint::in_k`].
    pub fn new(d: i64, k: i64, b: Vec<Rational>) -> Result<Self> {
        let params = Params::new(d, k)?;
        params.require_star_regime()?;
        let want = (d - k + 1) as usize;
        if b.len() != want {
            return domain_err(format!(
                "expected {want} coordinates for d={d}, k={k}, got {}",
                b.len()
            ));
        }
        if b.iter().any(|bi| bi.is_negative()) {
            return domain_err("coordinates must be nonnegative");
        }
        Ok(LandscapePoint { d, k, b })
    }

    /// Converts floating-point coordinates exactly; every finite f64 is a
    /// rational. Negative rounding noise is clamped to zero.
    pub fn from_f64s(d: i64, k: i64, b: &[f64]) -> Result<Self> {
        let mut coords = Vec::with_capacity(b.len());
        for &v in b {
            if !v.is_finite() {
                return domain_err("coordinates must be finite");
            }
            coords.push(Rational::from_float(v.max(0.0)).expect("finite f64"));
        }
        LandscapePoint::new(d, k, coords)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// beta = sum of all coordinates.
    pub fn beta(&self) -> Rational {
        self.b.iter().fold(Rational::zero(), |acc, bi| acc + bi)
    }

    /// gamma = sum of (k-i) b_i.
    pub fn gamma(&self) -> Rational {
        self.b
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, bi)| {
                acc + rat_int(self.k - i as i64) * bi
            })
    }

    /// True iff the point lies in K: (d-k)/k <= beta <= d/(2k).
    pub fn in_k(&self) -> bool {
        let beta = self.beta();
        rat(self.d - self.k, self.k) <= beta && beta <= rat(self.d, 2 * self.k)
    }

    /// True iff the point is strictly inside K with every coordinate
    /// positive, the region where psi, the gradient, and the Hessian are
    /// all defined. Positivity of gamma and of d/2 - gamma follows.
    pub fn is_interior(&self) -> bool {
        if self.b.iter().any(|bi| !bi.is_positive()) {
            return false;
        }
        let beta = self.beta();
        rat(self.d - self.k, self.k) < beta && beta < rat(self.d, 2 * self.k)
    }
}

/// Interior evaluation bundle: phi, psi, the gradient, and the Hessian.
#[derive(Clone, Debug)]
pub struct LandscapeEval {
    pub phi: f64,
    pub psi: f64,
    pub grad: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

/// Number of ordered pairs of k-subsets of a d-set meeting in exactly k-i
/// points: the multinomial d!/((k-i)! (d-k-i)! i!^2).
pub fn xcoef(d: i64, k: i64, i: i64) -> Result<BigInt> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    if i < 0 || i > d - k {
        return domain_err(format!(
            "overlap index out of range: need 0 <= i <= d - k = {}, got i = {i}",
            d - k
        ));
    }
    Ok(multinomial(d, &[k - i, i, i, d - k - i]))
}

/// The interior stationary point b*: b*_i = (d/(2k))^2 xcoef_i / binom(d,k)^2.
pub fn bstar(d: i64, k: i64) -> Result<LandscapePoint> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let cb = binomial(d, k);
    let scale = rat(d * d, 4 * k * k) / Rational::from(&cb * &cb);
    let mut b = Vec::with_capacity((d - k + 1) as usize);
    for i in 0..=(d - k) {
        b.push(&scale * Rational::from(xcoef(d, k, i)?));
    }
    LandscapePoint::new(d, k, b)
}

/// The boundary point a = (d/(2k), 0, ..., 0), the relevant boundary
/// candidate when comparing boundary values against phi(b*).
pub fn boundary_point(d: i64, k: i64) -> Result<LandscapePoint> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let mut b = vec![Rational::zero(); (d - k + 1) as usize];
    b[0] = rat(d, 2 * k);
    LandscapePoint::new(d, k, b)
}

/// x log x with the 0 log 0 = 0 convention, in high precision.
fn g_ln(x: &Rational) -> Result<BigFloat> {
    if x.is_zero() {
        Ok(hp::from_i64(0))
    } else if x.is_negative() {
        domain_err("x log x needs x >= 0")
    } else {
        Ok(hp::mul(&hp::from_rational(x), &hp::ln_rational(x)))
    }
}

/// phi at a point of K, in high precision. Boundary points are admissible
/// through the 0 log 0 = 0 convention.
pub fn phi_hp(p: &LandscapePoint) -> Result<BigFloat> {
    if !p.in_k() {
        return domain_err("point outside K");
    }
    let (d, k) = (p.d, p.k);
    let beta = p.beta();
    let gamma = p.gamma();
    let slack_hi = rat(d, 2 * k) - &beta;
    let slack_lo = rat_int(1) - rat(d, k) + &beta;
    let cb = Rational::from(binomial(d, k));

    let mut acc = g_ln(&gamma)?;
    acc = hp::add(&acc, &g_ln(&(rat(d, 2) - &gamma))?);
    acc = hp::sub(&acc, &hp::mul(&hp::from_i64(2), &g_ln(&slack_hi)?));
    acc = hp::sub(&acc, &g_ln(&slack_lo)?);
    let two_beta = rat_int(2) * &beta;
    acc = hp::sub(
        &acc,
        &hp::mul(&hp::from_rational(&two_beta), &hp::ln_rational(&cb)),
    );
    for (i, bi) in p.b.iter().enumerate() {
        if bi.is_zero() {
            continue;
        }
        let xi = Rational::from(xcoef(d, k, i as i64)?);
        acc = hp::add(&acc, &hp::mul(&hp::from_rational(bi), &hp::ln_rational(&xi)));
        acc = hp::sub(&acc, &g_ln(bi)?);
    }
    Ok(acc)
}

/// phi at a point of K.
pub fn phi(p: &LandscapePoint) -> Result<f64> {
    Ok(hp::to_f64(&phi_hp(p)?))
}

/// Exact square of psi at an interior point:
/// gamma (d/2 - gamma) / ((d/(2k) - beta)^2 (1 - d/k + beta) prod b_i).
pub fn psi_sq(p: &LandscapePoint) -> Result<Rational> {
    if !p.is_interior() {
        return domain_err("psi undefined outside the interior of K");
    }
    let (d, k) = (p.d, p.k);
    let beta = p.beta();
    let gamma = p.gamma();
    let num = &gamma * (rat(d, 2) - &gamma);
    let slack_hi = rat(d, 2 * k) - &beta;
    let slack_lo = rat_int(1) - rat(d, k) + &beta;
    let mut den = &slack_hi * &slack_hi * slack_lo;
    for bi in &p.b {
        den = den * bi;
    }
    Ok(num / den)
}

/// psi at an interior point, in high precision.
pub fn psi_hp(p: &LandscapePoint) -> Result<BigFloat> {
    Ok(hp::sqrt(&hp::from_rational(&psi_sq(p)?)))
}

/// psi at an interior point.
pub fn psi(p: &LandscapePoint) -> Result<f64> {
    Ok(hp::to_f64(&psi_hp(p)?))
}

/// Analytic gradient of phi at an interior point.
pub fn grad_phi(p: &LandscapePoint) -> Result<Vec<f64>> {
    if !p.is_interior() {
        return domain_err("gradient undefined outside the interior of K");
    }
    let (d, k) = (p.d, p.k);
    let beta = p.beta();
    let gamma = p.gamma();
    let ln_gamma = hp::ln_rational(&gamma);
    let ln_cog = hp::ln_rational(&(rat(d, 2) - &gamma));
    let ln_hi = hp::ln_rational(&(rat(d, 2 * k) - &beta));
    let ln_lo = hp::ln_rational(&(rat_int(1) - rat(d, k) + &beta));
    let ln_cb = hp::ln_rational(&Rational::from(binomial(d, k)));
    let mut grad = Vec::with_capacity(p.b.len());
    for (i, bi) in p.b.iter().enumerate() {
        let km = k - i as i64;
        let xi = Rational::from(xcoef(d, k, i as i64)?);
        let mut gi = hp::sub(&hp::ln_rational(&xi), &hp::mul(&hp::from_i64(2), &ln_cb));
        gi = hp::add(
            &gi,
            &hp::mul(&hp::from_i64(km), &hp::sub(&ln_gamma, &ln_cog)),
        );
        gi = hp::sub(&gi, &hp::ln_rational(bi));
        gi = hp::add(&gi, &hp::mul(&hp::from_i64(2), &ln_hi));
        gi = hp::sub(&gi, &ln_lo);
        grad.push(hp::to_f64(&gi));
    }
    Ok(grad)
}

/// Exact Hessian of phi at an interior point. Entry (i, j) is
/// (k-i)(k-j) (1/gamma + 1/(d/2 - gamma)) - [i = j]/b_i
/// - 2/(d/(2k) - beta) - 1/(1 - d/k + beta), a rational number.
pub fn hessian_phi(p: &LandscapePoint) -> Result<Vec<Vec<Rational>>> {
    if !p.is_interior() {
        return domain_err("hessian undefined outside the interior of K");
    }
    let (d, k) = (p.d, p.k);
    let beta = p.beta();
    let gamma = p.gamma();
    let curve_gamma = gamma.recip() + (rat(d, 2) - &gamma).recip();
    let curve_beta = rat_int(2) * (rat(d, 2 * k) - &beta).recip()
        + (rat_int(1) - rat(d, k) + &beta).recip();
    let q = p.b.len();
    let mut h = vec![vec![Rational::zero(); q]; q];
    for i in 0..q {
        for j in 0..q {
            let km_i = rat_int(k - i as i64);
            let km_j = rat_int(k - j as i64);
            let mut e = km_i * km_j * &curve_gamma - &curve_beta;
            if i == j {
                e = e - p.b[i].recip();
            }
            h[i][j] = e;
        }
    }
    Ok(h)
}

/// Full interior evaluation: phi, psi, gradient, and Hessian.
pub fn phi_psi(p: &LandscapePoint) -> Result<LandscapeEval> {
    let psi = psi(p)?;
    let phi = phi(p)?;
    let grad = grad_phi(p)?;
    let hessian = hessian_phi(p)?
        .iter()
        .map(|row| row.iter().map(|e| e.to_f64().expect("finite")).collect())
        .collect();
    Ok(LandscapeEval {
        phi,
        psi,
        grad,
        hessian,
    })
}

/// Closed form of phi(b*):
/// (d(k-2)/(2k)) log d + 2 log k - (d-2) log 2 - ((2k-d)/k) log(2k-d).
pub fn phi_bstar_closed(d: i64, k: i64) -> Result<BigFloat> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let s = params.s();
    let terms = [
        (rat(d * (k - 2), 2 * k), d),
        (rat_int(2), k),
        (rat_int(-(d - 2)), 2),
        (rat(-s, k), s),
    ];
    Ok(fold_log_terms(&terms))
}

/// Closed form of phi at the boundary point a = (d/(2k), 0, ..., 0):
/// (d(k-1)/(2k)) log d + log k - ((2k-d)/(2k)) log(2k-d)
/// - ((d-2)/2) log 2 - (d/(2k)) log binom(d,k).
pub fn phi_boundary_closed(d: i64, k: i64) -> Result<BigFloat> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let s = params.s();
    let terms = [
        (rat(d * (k - 1), 2 * k), d),
        (rat_int(1), k),
        (rat(-s, 2 * k), s),
        (rat(-(d - 2), 2), 2),
    ];
    let mut acc = fold_log_terms(&terms);
    let cb = Rational::from(binomial(d, k));
    acc = hp::sub(
        &acc,
        &hp::mul(&hp::from_rational(&rat(d, 2 * k)), &hp::ln_rational(&cb)),
    );
    Ok(acc)
}

/// Sum of coef * log(arg) over integer log arguments.
fn fold_log_terms(terms: &[(Rational, i64)]) -> BigFloat {
    let mut acc = hp::from_i64(0);
    for (coef, arg) in terms {
        let contrib = hp::mul(&hp::from_rational(coef), &hp::ln_rational(&rat_int(*arg)));
        acc = hp::add(&acc, &contrib);
    }
    acc
}

/// Exact closed form of the squared psi(b*):
/// (2k^3/(2k-d)^2)^2 / prod b*_i.
pub fn psi_bstar_closed_sq(d: i64, k: i64) -> Result<Rational> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let s = params.s();
    let lead = rat(2 * k * k * k, s * s);
    let mut prod = Rational::from(BigInt::from(1));
    for bi in bstar(d, k)?.b() {
        prod = prod * bi;
    }
    Ok(&lead * &lead / prod)
}

/// det(-H*) in closed form:
/// (2k^2 / ((d-1)(2k-d)^2)) (4k-d-2-(2k-d)^2) prod 1/b*_i,
/// positive exactly on the window (2k-d)^2 < 4k-d-2, which is required.
pub fn det_negh_closed(d: i64, k: i64) -> Result<Rational> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let s = params.s();
    let disc = 4 * k - d - 2 - s * s;
    if disc <= 0 {
        return domain_err(format!(
            "determinant formula needs (2k-d)^2 < 4k-d-2, got d={d}, k={k}"
        ));
    }
    let mut prod_inv = rat_int(1);
    for bi in bstar(d, k)?.b() {
        prod_inv = prod_inv * bi.recip();
    }
    Ok(rat(2 * k * k, (d - 1) * s * s) * rat_int(disc) * prod_inv)
}

/// Rank-two structure of -H* = D + v v^T - w w^T: D_ii = 1/b*_i, every
/// v_i equals (2k/(2k-d)) sqrt((4k-d)/d), and w_i = (k-i) sqrt(8/d).
/// Entries of v and w are irrational, but their pairwise products are
/// rational, so the whole matrix and its determinant stay exact.
#[derive(Clone, Debug)]
pub struct RankTwoUpdate {
    k: i64,
    /// Diagonal entries 1/b*_i.
    pub diag: Vec<Rational>,
    /// Common squared entry of v: 4k^2 (4k-d) / ((2k-d)^2 d).
    pub v_sq: Rational,
    /// Squared unit of w: w_i^2 = (k-i)^2 * 8/d.
    pub w_unit_sq: Rational,
}

impl RankTwoUpdate {
    /// Exact entry (i, j) of D + v v^T - w w^T.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        let km_i = self.k - i as i64;
        let km_j = self.k - j as i64;
        let mut e = &self.v_sq - rat_int(km_i * km_j) * &self.w_unit_sq;
        if i == j {
            e = e + &self.diag[i];
        }
        e
    }

    /// sum v_i^2 / D_ii, which collapses to d(4k-d)/(2k-d)^2.
    pub fn sum_v_sq_over_diag(&self) -> Rational {
        self.diag
            .iter()
            .fold(Rational::zero(), |acc, di| acc + &self.v_sq * di.recip())
    }

    /// Determinant of D + v v^T - w w^T through the rank-two expansion
    /// ((1 + sum v_i^2/d_i)(1 - sum w_i^2/d_i) + (sum v_i w_i/d_i)^2) prod d_i,
    /// evaluated exactly.
    pub fn det(&self) -> Rational {
        let mut s1 = Rational::zero();
        let mut s2 = Rational::zero();
        let mut s3 = Rational::zero();
        let mut prod = rat_int(1);
        for (i, di) in self.diag.iter().enumerate() {
            let km = rat_int(self.k - i as i64);
            let inv = di.recip();
            s1 = s1 + &self.v_sq * &inv;
            s2 = s2 + &km * &km * &self.w_unit_sq * &inv;
            s3 = s3 + &km * &inv;
            prod = prod * di;
        }
        let s3_sq = &self.v_sq * &self.w_unit_sq * &s3 * &s3;
        ((rat_int(1) + s1) * (rat_int(1) - s2) + s3_sq) * prod
    }
}

/// The rank-two decomposition of -H*. Defined in the whole star regime;
/// positivity of its determinant needs the same window as
/// [`det_negh_closed`].
pub fn rank_two_update(d: i64, k: i64) -> Result<RankTwoUpdate> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let s = params.s();
    let diag = bstar(d, k)?.b().iter().map(|bi| bi.recip()).collect();
    Ok(RankTwoUpdate {
        k,
        diag,
        v_sq: rat(4 * k * k * (4 * k - d), s * s * d),
        w_unit_sq: rat(8, d),
    })
}

/// Attempts a Cholesky factorization of a symmetric matrix; success
/// certifies positive definiteness. Apply to -H to certify the Hessian
/// negative definite.
pub fn cholesky_spd(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for t in 0..j {
                sum -= l[i][t] * l[j][t];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

// ---------------------------------------------------------------------------
// Multistart maximization
// ---------------------------------------------------------------------------

/// Options for [`maximize_phi`].
#[derive(Clone, Debug)]
pub struct MaximizeOptions {
    /// Number of ascent starts; at least 100 are always run.
    pub starts: usize,
    /// Master seed; each start derives an independent deterministic stream.
    pub seed: u64,
    /// Iteration cap for the projected-gradient phase of each start.
    pub max_iters: usize,
    /// Optional CSV dump of (start, value, coordinates) per start.
    pub dump: Option<std::path::PathBuf>,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            starts: 120,
            seed: 0,
            max_iters: 400,
            dump: None,
        }
    }
}

/// Result of the multistart maximization. This is a falsification harness
/// for the unique-global-maximum claim, not a proof: `matches_bstar` only
/// reports that no start found anything better than b*.
#[derive(Clone, Debug)]
pub struct MaximizeReport {
    pub argmax: LandscapePoint,
    pub value: f64,
    /// True iff the best point is within 1e-6 of b* in every coordinate
    /// and its value is within 1e-9 of phi(b*).
    pub matches_bstar: bool,
    /// Set when (d, k) falls outside the proven unique-maximum regime.
    pub warning: Option<String>,
    pub starts_run: usize,
}

/// Floating-point evaluation kernel for the ascent loop.
struct Kernel {
    q: usize,
    lo: f64,
    hi: f64,
    km: Vec<f64>,
    ln_x: Vec<f64>,
    two_ln_cb: f64,
    half_d: f64,
    hi_base: f64,
    lo_base: f64,
    bstar: Vec<f64>,
    beta_star: f64,
}

fn xlogx(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

fn ln_pos(v: f64) -> f64 {
    v.max(1e-300).ln()
}

impl Kernel {
    fn new(d: i64, k: i64) -> Result<Kernel> {
        let q = (d - k + 1) as usize;
        let mut ln_x = Vec::with_capacity(q);
        let mut km = Vec::with_capacity(q);
        for i in 0..q {
            ln_x.push(xcoef(d, k, i as i64)?.to_f64().expect("finite").ln());
            km.push((k - i as i64) as f64);
        }
        let bs = bstar(d, k)?;
        let bstar_f: Vec<f64> = bs.b().iter().map(|bi| bi.to_f64().expect("finite")).collect();
        let beta_star = bstar_f.iter().sum();
        Ok(Kernel {
            q,
            lo: (d - k) as f64 / k as f64,
            hi: d as f64 / (2 * k) as f64,
            km,
            ln_x,
            two_ln_cb: 2.0 * binomial(d, k).to_f64().expect("finite").ln(),
            half_d: d as f64 / 2.0,
            hi_base: d as f64 / (2 * k) as f64,
            lo_base: 1.0 - d as f64 / k as f64,
            bstar: bstar_f,
            beta_star,
        })
    }

    fn sums(&self, b: &[f64]) -> (f64, f64) {
        let mut beta = 0.0;
        let mut gamma = 0.0;
        for i in 0..self.q {
            beta += b[i];
            gamma += self.km[i] * b[i];
        }
        (beta, gamma)
    }

    fn phi(&self, b: &[f64]) -> f64 {
        let (beta, gamma) = self.sums(b);
        let mut acc = xlogx(gamma) + xlogx(self.half_d - gamma);
        acc -= 2.0 * xlogx(self.hi_base - beta);
        acc -= xlogx(self.lo_base + beta);
        acc -= beta * self.two_ln_cb;
        for i in 0..self.q {
            acc += b[i] * self.ln_x[i] - xlogx(b[i]);
        }
        acc
    }

    fn grad(&self, b: &[f64], out: &mut [f64]) {
        let (beta, gamma) = self.sums(b);
        let ln_ratio = ln_pos(gamma) - ln_pos(self.half_d - gamma);
        let slabs = 2.0 * ln_pos(self.hi_base - beta) - ln_pos(self.lo_base + beta);
        for i in 0..self.q {
            out[i] = self.ln_x[i] - self.two_ln_cb + self.km[i] * ln_ratio - ln_pos(b[i]) + slabs;
        }
    }

    fn hess(&self, b: &[f64]) -> Vec<Vec<f64>> {
        let (beta, gamma) = self.sums(b);
        let cg = 1.0 / gamma + 1.0 / (self.half_d - gamma);
        let cb = 2.0 / (self.hi_base - beta) + 1.0 / (self.lo_base + beta);
        let mut h = vec![vec![0.0; self.q]; self.q];
        for i in 0..self.q {
            for j in 0..self.q {
                h[i][j] = self.km[i] * self.km[j] * cg - cb;
                if i == j {
                    h[i][j] -= 1.0 / b[i];
                }
            }
        }
        h
    }

    /// Clamps negatives to zero, then pulls beta back into the slab along
    /// the ray toward b*, which preserves nonnegativity.
    fn project(&self, b: &mut [f64]) {
        for v in b.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let beta: f64 = b.iter().sum();
        let bound = if beta < self.lo {
            self.lo
        } else if beta > self.hi {
            self.hi
        } else {
            return;
        };
        let t = (bound - self.beta_star) / (beta - self.beta_star);
        for i in 0..self.q {
            b[i] = self.bstar[i] + t * (b[i] - self.bstar[i]);
            if b[i] < 0.0 {
                b[i] = 0.0;
            }
        }
    }

    /// Projected gradient ascent with backtracking line search.
    fn ascend(&self, b: &mut Vec<f64>, max_iters: usize) {
        let mut grad = vec![0.0; self.q];
        for _ in 0..max_iters {
            self.grad(b, &mut grad);
            let gnorm_sq: f64 = grad.iter().map(|g| g * g).sum();
            if gnorm_sq.sqrt() < 1e-12 {
                return;
            }
            let phi0 = self.phi(b);
            let mut t = 1.0 / (1.0 + gnorm_sq.sqrt());
            let mut advanced = false;
            while t > 1e-18 {
                let mut cand: Vec<f64> =
                    b.iter().zip(&grad).map(|(bi, gi)| bi + t * gi).collect();
                self.project(&mut cand);
                if self.phi(&cand) > phi0 + 1e-4 * t * gnorm_sq {
                    *b = cand;
                    advanced = true;
                    break;
                }
                t *= 0.5;
            }
            if !advanced {
                return;
            }
        }
    }

    /// Newton polish near an interior stationary point, with damping and a
    /// monotonicity guard; leaves b unchanged when the step degrades phi.
    fn newton_polish(&self, b: &mut Vec<f64>) {
        let mut grad = vec![0.0; self.q];
        for _ in 0..60 {
            if b.iter().any(|&v| v < 1e-12) {
                return;
            }
            self.grad(b, &mut grad);
            if grad.iter().all(|g| g.abs() < 1e-14) {
                return;
            }
            let h = self.hess(b);
            let neg_h: Vec<Vec<f64>> = h.iter().map(|row| row.iter().map(|e| -e).collect()).collect();
            let Some(step) = solve_linear(neg_h, grad.clone()) else {
                return;
            };
            let phi0 = self.phi(b);
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..20 {
                let mut cand: Vec<f64> = b
                    .iter()
                    .zip(&step)
                    .map(|(bi, si)| bi + scale * si)
                    .collect();
                self.project(&mut cand);
                if self.phi(&cand) >= phi0 - 1e-13 {
                    *b = cand;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                return;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting; None on a singular system.
fn solve_linear(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| {
            a[r][col]
                .abs()
                .partial_cmp(&a[s][col].abs())
                .unwrap_or(Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = rhs[row];
        for c in (row + 1)..n {
            sum -= a[row][c] * x[c];
        }
        x[row] = sum / a[row][row];
    }
    Some(x)
}

/// None when (d, k) is covered by the proven unique-maximum regime, else a
/// human-readable caveat. The regime is d >= 5 together with either
/// k - d/2 <= max(1, ln(d)/6) or d/2 + 1 < k <= ksscm(d).
fn regime_warning(d: i64, k: i64) -> Option<String> {
    if d < 5 {
        return Some(format!(
            "d = {d} is below the d >= 5 unique-maximum regime; result is a numeric check only"
        ));
    }
    let s = 2 * k - d;
    // k - d/2 <= 1 covers s <= 2; beyond that compare ln d against 3s.
    let cond_near_half = s <= 2
        || hp::cmp(&hp::ln_rational(&rat_int(d)), &hp::from_i64(3 * s)) != Ordering::Less;
    if cond_near_half {
        return None;
    }
    if s >= 3 {
        if let Ok(ks) = compute_ksscm(d) {
            if k <= ks {
                return None;
            }
        }
    }
    Some(format!(
        "(d, k) = ({d}, {k}) lies outside the proven unique-maximum regime; result is a numeric check only"
    ))
}

/// Multistart projected-gradient maximization of phi over K, with Newton
/// polish, used to cross-check that nothing beats b*. Deterministic for a
/// fixed seed. At least 100 starts always run: a coarse grid of uniform and
/// single-coordinate points plus Dirichlet-style interior and
/// boundary-adjacent random starts.
pub fn maximize_phi(d: i64, k: i64, opts: &MaximizeOptions) -> Result<MaximizeReport> {
    let params = Params::new(d, k)?;
    params.require_star_regime()?;
    let kernel = Kernel::new(d, k)?;
    let q = kernel.q;
    let total = opts.starts.max(100);
    let width = kernel.hi - kernel.lo;
    let betas = [
        kernel.lo + 0.125 * width,
        kernel.lo + 0.5 * width,
        kernel.hi - 0.125 * width,
    ];

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(total);
    for &beta in &betas {
        starts.push(vec![beta / q as f64; q]);
    }
    for j in 0..q {
        let mut corner = vec![0.0; q];
        corner[j] = kernel.lo + 0.5 * width;
        starts.push(corner);
    }
    while starts.len() < total {
        let idx = starts.len();
        let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(opts.seed, idx as u64));
        let beta = kernel.lo + width * rng.random::<f64>();
        let mut b: Vec<f64> = (0..q)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        if idx % 3 == 2 {
            // Boundary-adjacent start: crush a random proper subset of
            // coordinates toward the face.
            let keep = rng.random_range(0..q);
            for (i, v) in b.iter_mut().enumerate() {
                if i != keep && rng.random::<f64>() < 0.5 {
                    *v *= 1e-8;
                }
            }
        }
        let sum: f64 = b.iter().sum();
        for v in b.iter_mut() {
            *v *= beta / sum;
        }
        starts.push(b);
    }

    let mut rows: Vec<(usize, f64, Vec<f64>)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(idx, mut b)| {
            kernel.project(&mut b);
            kernel.ascend(&mut b, opts.max_iters);
            kernel.newton_polish(&mut b);
            let value = kernel.phi(&b);
            (idx, value, b)
        })
        .collect();
    rows.sort_by_key(|row| row.0);

    if let Some(path) = &opts.dump {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        let coords: Vec<String> = (0..q).map(|i| format!("b{i}")).collect();
        writeln!(file, "start,value,{}", coords.join(","))?;
        for (idx, value, b) in &rows {
            let cells: Vec<String> = b.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(file, "{idx},{value:.16e},{}", cells.join(","))?;
        }
    }

    let best = rows
        .iter()
        .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal))
        .expect("at least one start");
    let phi_star = hp::to_f64(&phi_hp(&bstar(d, k)?)?);
    let close = best
        .2
        .iter()
        .zip(&kernel.bstar)
        .all(|(v, t)| (v - t).abs() < 1e-6);
    let matches_bstar = close && (best.1 - phi_star).abs() < 1e-9;
    Ok(MaximizeReport {
        argmax: LandscapePoint::from_f64s(d, k, &best.2)?,
        value: best.1,
        matches_bstar,
        warning: regime_warning(d, k),
        starts_run: total,
    })
}
