//! Exact rational polynomial arithmetic, Sturm-sequence real-root isolation,
//! and exact comparison of integer power products.
//!
//! Everything in this module is exact: no floating point anywhere. Root
//! counting runs on integer polynomials (denominators cleared, content
//! stripped) with primitive pseudo-remainder sequences, which keeps
//! coefficient growth near the subresultant minimum without per-step
//! rational blowup.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::{domain_err, Error, Result};

/// Arbitrary-precision rational, always reduced, denominator > 0.
/// `num_rational::BigRational` maintains both invariants on construction.
pub type Rational = BigRational;

/// Shorthand used by every module that builds rationals from machine ints.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// RationalPolynomial
// ---------------------------------------------------------------------------

/// Univariate polynomial with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of x^i. Invariant: the highest-index
/// coefficient is nonzero; the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RationalPolynomial { coeffs: vec![Rational::one()] }
    }

    /// x^n with a rational scale factor.
    pub fn monomial(coeff: Rational, n: usize) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = coeff;
        RationalPolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect();
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// deg(remainder) < deg(divisor). Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / lead;
            quot[i - dd] = q.clone();
            rem[i] = Rational::zero();
            for (j, c) in divisor.coeffs.iter().enumerate().take(dd) {
                let delta = c * &q;
                rem[i - dd + j] -= delta;
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Synthetic division by (x - r). Returns the quotient if r is a root.
    pub fn deflate_root(&self, r: &Rational) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut quot = vec![Rational::zero(); self.coeffs.len() - 1];
        let mut acc = Rational::zero();
        for i in (0..self.coeffs.len()).rev() {
            acc = acc * r + &self.coeffs[i];
            if i > 0 {
                quot[i - 1] = acc.clone();
            }
        }
        acc.is_zero().then(|| Self::new(quot))
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeffs.last().unwrap().clone();
        a.scale(&(Rational::one() / lead))
    }

    /// Square-free part: self / gcd(self, self'). Repeated roots collapse to
    /// multiplicity one; the root set is unchanged.
    pub fn square_free_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(&self.derivative());
        match g.degree() {
            None | Some(0) => self.clone(),
            _ => self.div_exact(&g).expect("gcd divides the polynomial"),
        }
    }
}

// ---------------------------------------------------------------------------
// RationalInterval
// ---------------------------------------------------------------------------

/// Interval with rational endpoints and per-endpoint openness flags.
/// Invariant: lo < hi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational, lo_open: bool, hi_open: bool) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyInterval);
        }
        Ok(RationalInterval { lo, hi, lo_open, hi_open })
    }

    /// Open interval (lo, hi).
    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    /// Closed interval [lo, hi].
    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_open { x > &self.lo } else { x >= &self.lo };
        let below = if self.hi_open { x < &self.hi } else { x <= &self.hi };
        above && below
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials and Sturm chains (internal machinery)
// ---------------------------------------------------------------------------

/// Integer-coefficient polynomial; trailing coefficient nonzero.
#[derive(Clone, Debug)]
pub(crate) struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.c.len() - 1
    }

    /// Clears denominators (positive multiplier), then strips content.
    fn from_rational(p: &RationalPolynomial) -> Self {
        let mut lcm = BigInt::one();
        for c in p.coeffs() {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> =
            p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        IntPoly::new(ints).primitive()
    }

    /// Divides out the content (gcd of coefficients, positive); the sign of
    /// every coefficient is preserved.
    fn primitive(mut self) -> Self {
        if self.is_zero() {
            return self;
        }
        let mut g = BigUint::zero();
        for c in &self.c {
            g = g.gcd(c.magnitude());
            if g.is_one() {
                return self;
            }
        }
        let g = BigInt::from(g);
        for c in &mut self.c {
            *c = &*c / &g;
        }
        self
    }

    fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return IntPoly::new(Vec::new());
        }
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact pseudo-remainder: prem(self, other) with multiplier
    /// lc(other)^(deg self - deg other + 1). Requires deg self >= deg other.
    fn pseudo_rem(&self, other: &Self) -> Self {
        let lead = other.c.last().unwrap();
        let dd = other.degree();
        let mut rem = self.c.clone();
        let steps = rem.len() - dd; // = deg self - deg other + 1
        for i in (dd..rem.len()).rev() {
            // Multiply the whole remainder-so-far by lc once per elimination
            // step so the division below is exact.
            for item in rem.iter_mut().take(i + 1) {
                *item = &*item * lead;
            }
            let q = std::mem::take(&mut rem[i]);
            if !q.is_zero() {
                let q = &q / lead; // rem[i] had just been multiplied by lead
                for (j, c) in other.c.iter().enumerate().take(dd) {
                    rem[i - dd + j] -= c * &q;
                }
            }
        }
        let _ = steps;
        IntPoly::new(rem[..dd.min(rem.len())].to_vec())
    }

    /// Sign of the value at the reduced rational a/b (b > 0): evaluates
    /// sum c_j a^j b^(n-j) exactly.
    fn sign_at(&self, x: &Rational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let a = x.numer();
        let b = x.denom();
        let n = self.degree();
        // Horner in a, multiplying in one factor of b per step:
        // v_n = c_n; v_{j} = v_{j+1} * a + c_j * b^(n-j).
        let mut bpow = BigInt::one();
        let mut terms: Vec<BigInt> = Vec::with_capacity(n + 1);
        for j in (0..=n).rev() {
            terms.push(&self.c[j] * &bpow);
            if j > 0 {
                bpow *= b;
            }
        }
        let mut acc = BigInt::zero();
        for t in terms {
            acc = acc * a + t;
        }
        match acc.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
}

/// Polynomial gcd over the integers via a primitive pseudo-remainder
/// sequence; the result is primitive with positive leading coefficient.
fn int_poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut p = a.clone().primitive();
    let mut q = b.clone().primitive();
    if p.is_zero() {
        return q;
    }
    if q.is_zero() {
        return p;
    }
    if p.degree() < q.degree() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.pseudo_rem(&q).primitive();
        if r.is_zero() {
            if q.c.last().unwrap().is_negative() {
                for c in &mut q.c {
                    *c = -std::mem::take(c);
                }
            }
            return q;
        }
        p = q;
        q = r;
    }
}

/// Exact division of integer polynomials; panics if not exact
/// (callers only divide by known factors).
fn int_poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let dd = den.degree();
    let lead = den.c.last().unwrap();
    let mut rem = num.c.clone();
    assert!(rem.len() > dd || num.is_zero());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let (q, r) = (&rem[i]).div_rem(lead);
        assert!(r.is_zero(), "inexact integer polynomial division");
        quot[i - dd] = q.clone();
        rem[i] = BigInt::zero();
        for (j, c) in den.c.iter().enumerate().take(dd) {
            rem[i - dd + j] -= c * &q;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    IntPoly::new(quot)
}

/// Sturm chain of a square-free integer polynomial. Each element is a
/// positive rational multiple of the classical Sturm remainder, which leaves
/// sign variation counts unchanged.
pub(crate) struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    /// Requires `p` square-free (callers reduce first).
    fn new(p: IntPoly) -> Self {
        let d = p.derivative();
        let mut chain = vec![p, d];
        loop {
            let m = chain.len();
            let (prev, cur) = (&chain[m - 2], &chain[m - 1]);
            if cur.is_zero() || cur.degree() == 0 {
                break;
            }
            if prev.degree() < cur.degree() {
                break; // constant-derivative edge case (deg p <= 1)
            }
            // prem = lc(cur)^e * prev mod cur; the true remainder divides out
            // lc(cur)^e, so the pseudo-remainder's sign agrees with it exactly
            // when lc(cur)^e > 0 and is flipped when lc(cur)^e < 0.
            let e = prev.degree() - cur.degree() + 1;
            let lead_negative = cur.c.last().unwrap().is_negative();
            let flip = lead_negative && e % 2 == 1;
            let mut r = prev.pseudo_rem(cur).primitive();
            if r.is_zero() {
                break;
            }
            // Sturm recurrence takes the negated remainder.
            if !flip {
                for c in &mut r.c {
                    *c = -std::mem::take(c);
                }
            }
            chain.push(r);
        }
        SturmChain { chain }
    }

    /// Sign variations of the chain at x, zeros skipped.
    fn variations_at(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last: i8 = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in the open interval (a, b); requires that
    /// neither endpoint is a root of the chain's first polynomial.
    fn count_open(&self, a: &Rational, b: &Rational) -> usize {
        debug_assert!(a < b);
        debug_assert!(self.chain[0].sign_at(a) != 0);
        debug_assert!(self.chain[0].sign_at(b) != 0);
        let va = self.variations_at(a);
        let vb = self.variations_at(b);
        debug_assert!(va >= vb, "sign variations must be monotone");
        va - vb
    }
}

/// Square-free integer reduction of `p` plus its Sturm chain, reusable
/// across many interval queries on the same polynomial.
pub(crate) struct RootCounter {
    square_free: IntPoly,
    chain: SturmChain,
}

impl RootCounter {
    pub(crate) fn new(p: &RationalPolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let ip = IntPoly::from_rational(p);
        let g = int_poly_gcd(&ip, &ip.derivative());
        let square_free = if g.is_zero() || g.degree() == 0 {
            ip
        } else {
            int_poly_div_exact(&ip, &g).primitive()
        };
        let chain = SturmChain::new(square_free.clone());
        Ok(RootCounter { square_free, chain })
    }

    pub(crate) fn is_root(&self, x: &Rational) -> bool {
        self.square_free.sign_at(x) == 0
    }

    /// Distinct real roots inside `iv`, honoring endpoint openness.
    pub(crate) fn count(&self, iv: &RationalInterval) -> usize {
        let lo_root = self.is_root(&iv.lo);
        let hi_root = self.is_root(&iv.hi);
        // Endpoint roots are simple (square-free), so deflating by (x - e)
        // removes them without disturbing interior roots; the plain Sturm
        // count then applies with non-root endpoints.
        let interior = if lo_root || hi_root {
            let mut q = int_poly_to_rational(&self.square_free);
            if lo_root {
                q = q.deflate_root(&iv.lo).expect("endpoint root divides");
            }
            if hi_root {
                q = q.deflate_root(&iv.hi).expect("endpoint root divides");
            }
            match q.degree() {
                None | Some(0) => 0,
                _ => {
                    let chain = SturmChain::new(IntPoly::from_rational(&q));
                    chain.count_open(&iv.lo, &iv.hi)
                }
            }
        } else {
            self.chain.count_open(&iv.lo, &iv.hi)
        };
        interior
            + usize::from(lo_root && !iv.lo_open)
            + usize::from(hi_root && !iv.hi_open)
    }
}

fn int_poly_to_rational(p: &IntPoly) -> RationalPolynomial {
    RationalPolynomial::new(
        p.c.iter().map(|c| Rational::from_integer(c.clone())).collect(),
    )
}

// ---------------------------------------------------------------------------
// Public root-isolation operations
// ---------------------------------------------------------------------------

/// Number of distinct real roots of `p` inside `iv` (endpoints excluded when
/// the corresponding side is open), via Sturm chains after square-free
/// reduction. Errors on the zero polynomial.
pub fn root_count_in_interval(p: &RationalPolynomial, iv: &RationalInterval) -> Result<usize> {
    Ok(RootCounter::new(p)?.count(iv))
}

/// Shrinks an isolating interval to width <= `width` by rational bisection.
/// The input must isolate exactly one distinct root of `p`; the output is a
/// sub-interval of `iv` still containing that root.
pub fn refine_root(
    p: &RationalPolynomial,
    iv: &RationalInterval,
    width: &Rational,
) -> Result<RationalInterval> {
    if width <= &Rational::zero() {
        return domain_err("refine_root: width must be positive");
    }
    let counter = RootCounter::new(p)?;
    let found = counter.count(iv);
    if found != 1 {
        return Err(Error::NotIsolating(found));
    }

    // When the root's exact location is found (closed endpoint or a lucky
    // bisection midpoint), clamp a width-sized window around it to `iv`.
    let pin = |root: &Rational| -> Result<RationalInterval> {
        let half = width / rat_int(2);
        let lo = (root - &half).max(iv.lo.clone());
        let hi = (root + &half).min(iv.hi.clone());
        let lo_open = &lo != root;
        let hi_open = &hi != root;
        RationalInterval::new(lo, hi, lo_open, hi_open)
    };
    if !iv.lo_open && counter.is_root(&iv.lo) {
        return pin(&iv.lo);
    }
    if !iv.hi_open && counter.is_root(&iv.hi) {
        return pin(&iv.hi);
    }

    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / rat_int(2);
        if counter.is_root(&mid) {
            return pin(&mid);
        }
        let left = RationalInterval::open(lo.clone(), mid.clone())?;
        if counter.count(&left) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RationalInterval::new(lo, hi, true, true)
}

/// Splits an interval into isolating sub-intervals, one per distinct root of
/// `p` inside it (empty when there are none). Bisection points that happen
/// to be roots get small closed isolators around themselves.
pub fn isolate_roots(
    p: &RationalPolynomial,
    iv: &RationalInterval,
) -> Result<Vec<RationalInterval>> {
    Ok(isolate_roots_with(&RootCounter::new(p)?, iv))
}

/// `isolate_roots` on a prebuilt counter, reusable across many queries.
pub(crate) fn isolate_roots_with(
    counter: &RootCounter,
    iv: &RationalInterval,
) -> Vec<RationalInterval> {
    let mut out = Vec::new();
    let mut stack = vec![iv.clone()];
    while let Some(cur) = stack.pop() {
        let c = counter.count(&cur);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push(cur);
            continue;
        }
        let mid = cur.midpoint();
        if counter.is_root(&mid) {
            // Separate the midpoint root with a gap small enough to exclude
            // its neighbors, found by halving.
            let mut eps = (cur.width()) / rat_int(4);
            loop {
                let lo = &mid - &eps;
                let hi = &mid + &eps;
                let probe = RationalInterval::new(lo.clone(), hi.clone(), false, false).expect("eps probe is nonempty");
                if counter.count(&probe) == 1 {
                    out.push(probe);
                    stack.push(RationalInterval::new(cur.lo.clone(), lo, cur.lo_open, true).expect("left split is nonempty"));
                    stack.push(RationalInterval::new(hi, cur.hi.clone(), true, cur.hi_open).expect("right split is nonempty"));
                    break;
                }
                eps /= rat_int(2);
            }
        } else {
            stack.push(RationalInterval::new(cur.lo.clone(), mid.clone(), cur.lo_open, true).expect("left half is nonempty"));
            stack.push(RationalInterval::new(mid, cur.hi.clone(), true, cur.hi_open).expect("right half is nonempty"));
        }
    }
    // Deterministic order for callers that report roots.
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

// ---------------------------------------------------------------------------
// PowerProduct
// ---------------------------------------------------------------------------

/// Product of integer powers prod base_i^exp_i with bases >= 1 and signed
/// integer exponents; represents an exact positive rational too large to
/// expand eagerly.
#[derive(Clone, Debug, Default)]
pub struct PowerProduct {
    factors: Vec<(BigUint, i64)>,
}

impl PowerProduct {
    pub fn new() -> Self {
        PowerProduct { factors: Vec::new() }
    }

    /// Appends base^exp. Errors on base 0 (bases must be >= 1).
    pub fn push(&mut self, base: BigUint, exp: i64) -> Result<()> {
        if base.is_zero() {
            return domain_err("power product bases must be >= 1");
        }
        if !base.is_one() && exp != 0 {
            self.factors.push((base, exp));
        }
        Ok(())
    }

    pub fn push_u64(&mut self, base: u64, exp: i64) -> Result<()> {
        self.push(BigUint::from(base), exp)
    }

    pub fn from_u64_powers(factors: &[(u64, i64)]) -> Result<Self> {
        let mut p = PowerProduct::new();
        for &(b, e) in factors {
            p.push_u64(b, e)?;
        }
        Ok(p)
    }

    /// Expands into (numerator, denominator); positive exponents multiply
    /// the numerator, negative ones the denominator.
    pub fn value_num_den(&self) -> (BigUint, BigUint) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (base, exp) in &self.factors {
            let e = u32::try_from(exp.unsigned_abs()).expect("exponent fits u32");
            let p = base.pow(e);
            if *exp > 0 {
                num *= p;
            } else {
                den *= p;
            }
        }
        (num, den)
    }

    /// Exact value as a rational (reduced on construction).
    pub fn to_rational(&self) -> Rational {
        let (num, den) = self.value_num_den();
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Exact comparison of two power products; no floating point.
pub fn power_product_compare(lhs: &PowerProduct, rhs: &PowerProduct) -> Ordering {
    let (ln, ld) = lhs.value_num_den();
    let (rn, rd) = rhs.value_num_den();
    (ln * rd).cmp(&(rn * ld))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(c)
    }

    #[test]
    fn degree_and_trimming() {
        let p = RationalPolynomial::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(RationalPolynomial::new(vec![rat_int(0)]).is_zero());
        assert_eq!(RationalPolynomial::zero().degree(), None);
    }

    #[test]
    fn eval_and_derivative() {
        // p = 2x^3 - x + 5
        let p = poly(&[5, -1, 0, 2]);
        assert_eq!(p.eval(&rat_int(2)), rat_int(19));
        assert_eq!(p.derivative(), poly(&[-1, 0, 6]));
    }

    #[test]
    fn division_roundtrip() {
        let a = poly(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let b = poly(&[-2, 1]);
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q.mul(&b), a);
        assert_eq!(a.deflate_root(&rat_int(3)).unwrap(), poly(&[2, -3, 1]));
        assert!(a.deflate_root(&rat_int(7)).is_none());
    }

    #[test]
    fn square_free_collapses_multiplicity() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let p = poly(&[2, -3, 0, 1]);
        let sf = p.square_free_part();
        assert_eq!(sf.degree(), Some(2));
        assert!(sf.eval(&rat_int(1)).is_zero());
        assert!(sf.eval(&rat_int(-2)).is_zero());
    }

    #[test]
    fn root_count_examples() {
        // x^2 - 1 on (0, 2): one root at x = 1.
        let p = poly(&[-1, 0, 1]);
        let iv = RationalInterval::open(rat_int(0), rat_int(2)).unwrap();
        assert_eq!(root_count_in_interval(&p, &iv).unwrap(), 1);

        // x^2 + 1 has no real roots.
        let q = poly(&[1, 0, 1]);
        let iv = RationalInterval::open(rat_int(-10), rat_int(10)).unwrap();
        assert_eq!(root_count_in_interval(&q, &iv).unwrap(), 0);
    }

    #[test]
    fn root_count_endpoint_openness() {
        // roots at 1 and 2
        let p = poly(&[2, -3, 1]);
        let open = RationalInterval::open(rat_int(1), rat_int(2)).unwrap();
        assert_eq!(root_count_in_interval(&p, &open).unwrap(), 0);
        let closed = RationalInterval::closed(rat_int(1), rat_int(2)).unwrap();
        assert_eq!(root_count_in_interval(&p, &closed).unwrap(), 2);
        let half = RationalInterval::new(rat_int(1), rat_int(2), false, true).unwrap();
        assert_eq!(root_count_in_interval(&p, &half).unwrap(), 1);
    }

    #[test]
    fn root_count_multiplicity_counts_once() {
        // (x-1)^3
        let p = poly(&[-1, 3, -3, 1]);
        let iv = RationalInterval::open(rat_int(0), rat_int(2)).unwrap();
        assert_eq!(root_count_in_interval(&p, &iv).unwrap(), 1);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let iv = RationalInterval::open(rat_int(0), rat_int(1)).unwrap();
        assert!(matches!(
            root_count_in_interval(&RationalPolynomial::zero(), &iv),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn refine_root_sqrt2() {
        let p = poly(&[-2, 0, 1]);
        let iv = RationalInterval::open(rat_int(1), rat_int(2)).unwrap();
        let w = rat(1, 1000);
        let out = refine_root(&p, &iv, &w).unwrap();
        assert!(out.width() <= w);
        // sqrt(2) = 1.41421356...
        assert!(out.lo < rat(14143, 10000));
        assert!(out.hi > rat(14142, 10000));
        // A sign change certifies the root.
        assert!(p.eval(&out.lo).is_negative() && p.eval(&out.hi).is_positive());
    }

    #[test]
    fn refine_root_exact_hit() {
        let p = poly(&[-1, 1]); // root 1
        let iv = RationalInterval::open(rat_int(0), rat_int(2)).unwrap();
        let out = refine_root(&p, &iv, &rat(1, 10)).unwrap();
        assert!(out.contains(&rat_int(1)));
        assert!(out.width() <= rat(1, 10));
    }

    #[test]
    fn refine_root_rejects_non_isolating() {
        let p = poly(&[2, -3, 1]); // roots 1, 2
        let iv = RationalInterval::open(rat_int(0), rat_int(3)).unwrap();
        assert!(matches!(
            refine_root(&p, &iv, &rat(1, 10)),
            Err(Error::NotIsolating(2))
        ));
    }

    #[test]
    fn isolate_roots_splits() {
        let p = poly(&[-6, 11, -6, 1]); // roots 1, 2, 3
        let iv = RationalInterval::open(rat_int(0), rat_int(10)).unwrap();
        let parts = isolate_roots(&p, &iv).unwrap();
        assert_eq!(parts.len(), 3);
        for (part, root) in parts.iter().zip([1i64, 2, 3]) {
            assert_eq!(root_count_in_interval(&p, part).unwrap(), 1);
            assert!(part.contains(&rat_int(root)));
        }
    }

    #[test]
    fn power_product_compare_examples() {
        // 2^10 = 1024 > 10^3 = 1000
        let a = PowerProduct::from_u64_powers(&[(2, 10)]).unwrap();
        let b = PowerProduct::from_u64_powers(&[(10, 3)]).unwrap();
        assert_eq!(power_product_compare(&a, &b), Ordering::Greater);
        // Negative exponents: 3^-2 = 1/9 < 2^-3 = 1/8
        let c = PowerProduct::from_u64_powers(&[(3, -2)]).unwrap();
        let d = PowerProduct::from_u64_powers(&[(2, -3)]).unwrap();
        assert_eq!(power_product_compare(&c, &d), Ordering::Less);
        assert_eq!(
            power_product_compare(&a, &PowerProduct::from_u64_powers(&[(4, 5)]).unwrap()),
            Ordering::Equal
        );
        assert_eq!(c.to_rational(), rat(1, 9));
    }

    #[test]
    fn power_product_rejects_zero_base() {
        let mut p = PowerProduct::new();
        assert!(p.push_u64(0, 3).is_err());
    }
}
