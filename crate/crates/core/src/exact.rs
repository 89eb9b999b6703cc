//! Exact integer q-analog primitives and a certified real interval type.
//!
//! Every cardinality in this crate (space sizes, volumes, bound values) is an
//! [`ExactInt`]. The only non-integral quantity that shows up in the bounds is
//! the infinite product `gamma_q = prod_{i>=1} (1 - q^-i)^-1`, which is carried
//! as a [`RealInterval`] with rational endpoints so that every rounding step
//! can be taken in the safe direction.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision nonnegative integer.
pub type ExactInt = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("target width must be a positive finite number")]
    InvalidWidth,
    #[error("gamma_{q} interval did not reach the requested width within {iterations} factors")]
    Precision { q: u64, iterations: u32 },
}

/// `base^exp` as an exact integer.
pub fn power(base: u64, exp: u64) -> ExactInt {
    let exp = u32::try_from(exp).expect("exponent exceeds u32 range");
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) at loop entry; C(n, i+1) = C(n, i) * (n - i) / (i + 1)
        acc *= n - i;
        acc = exact_div(&acc, &BigUint::from(i + 1));
    }
    acc
}

/// Divides `a` by `b`, panicking if the division leaves a remainder.
pub fn exact_div(a: &ExactInt, b: &ExactInt) -> ExactInt {
    let (quot, rem) = a.div_rem(b);
    assert!(rem.is_zero(), "inexact division {a} / {b}");
    quot
}

/// Gaussian binomial `[n choose t]_q`, the number of `t`-dimensional subspaces
/// of `F_q^n`; zero when `t < 0` or `t > n`.
///
/// Uses `prod_{i=1}^{t} (q^{n-t+i} - 1) / (q^i - 1)` with the division folded
/// into each step. After `j` steps the running value is `[n-t+j choose j]_q`,
/// so every intermediate division is exact.
pub fn gaussian_binomial(n: u64, t: i64, q: u64) -> ExactInt {
    assert!(q >= 2, "gaussian_binomial needs q >= 2");
    if t < 0 || t as u64 > n {
        return BigUint::zero();
    }
    let t = t as u64;
    let one = BigUint::one();
    let mut acc = BigUint::one();
    for i in 1..=t {
        acc *= power(q, n - t + i) - &one;
        acc = exact_div(&acc, &(power(q, i) - &one));
    }
    acc
}

/// Number of `rows x cols` matrices over `F_q` of rank exactly `t`.
pub fn num_matrices_of_rank(rows: u64, cols: u64, t: i64, q: u64) -> ExactInt {
    assert!(q >= 2, "num_matrices_of_rank needs q >= 2");
    if t < 0 || t as u64 > rows.min(cols) {
        return BigUint::zero();
    }
    let t = t as u64;
    let q_cols = power(q, cols);
    let mut acc = gaussian_binomial(rows, t as i64, q);
    for i in 0..t {
        acc *= &q_cols - power(q, i);
    }
    acc
}

/// Splits `q` into `(p, s)` with `q = p^s`, `p` prime.
pub fn prime_power(q: u64) -> Result<(u64, u32), ExactError> {
    if q < 2 {
        return Err(ExactError::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // no factor up to sqrt(q): q itself is prime
        return Ok((q, 1));
    }
    let mut rest = q;
    let mut s = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        s += 1;
    }
    if rest == 1 {
        Ok((p, s))
    } else {
        Err(ExactError::NotPrimePower(q))
    }
}

pub fn is_prime(p: u64) -> bool {
    matches!(prime_power(p), Ok((_, 1)))
}

/// Closed real interval `[lo, hi]` with exact rational endpoints.
///
/// Arithmetic is exact on the endpoints, so the result always contains the
/// true value whenever the operands do. [`RealInterval::round_outward`] trades
/// exactness for shorter endpoints and only ever widens.
#[derive(Clone, PartialEq, Eq)]
pub struct RealInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RealInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval { lo, hi }
    }

    pub fn point(value: BigRational) -> Self {
        RealInterval {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn from_int(value: &ExactInt) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(value.clone())))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Endpoints converted to `f64` (for display only).
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        RealInterval { lo, hi }
    }

    /// Division by an interval that lies strictly on one side of zero.
    pub fn div(&self, other: &RealInterval) -> RealInterval {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "division by an interval containing zero"
        );
        let inv = RealInterval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        self.mul(&inv)
    }

    pub fn powi(&self, exp: u32) -> RealInterval {
        let mut acc = RealInterval::point(BigRational::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Widens the endpoints to multiples of `10^-digits`.
    pub fn round_outward(&self, digits: u32) -> RealInterval {
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), digits as usize));
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        RealInterval { lo, hi }
    }

    /// Interval containing `base^(num/den)` for integers `base >= 1`, `den >= 1`,
    /// with endpoints on the grid `10^-digits`.
    pub fn rational_power(base: u64, num: i64, den: u32, digits: u32) -> RealInterval {
        assert!(base >= 1 && den >= 1);
        let scale = num_traits::pow(BigUint::from(10u32), digits as usize);
        let magnitude = power(base, num.unsigned_abs());
        // floor/ceil of (magnitude * scale^den)^(1/den) bracket magnitude^(1/den) * scale
        let scaled = &magnitude * num_traits::pow(scale.clone(), den as usize);
        let root_lo = scaled.nth_root(den);
        let root_hi = if num_traits::pow(root_lo.clone(), den as usize) == scaled {
            root_lo.clone()
        } else {
            &root_lo + 1u32
        };
        let to_rat = |v: BigUint| BigRational::from_integer(BigInt::from(v));
        let scale_r = to_rat(scale);
        let root_lo = to_rat(root_lo) / &scale_r;
        let root_hi = to_rat(root_hi) / &scale_r;
        if num >= 0 {
            RealInterval::new(root_lo, root_hi)
        } else {
            RealInterval::new(root_hi.recip(), root_lo.recip())
        }
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_f64_bounds();
        write!(f, "[{lo:.12}, {hi:.12}]")
    }
}

/// Rational conversion of an `f64`; `None` for NaN and infinities.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

const GAMMA_MAX_FACTORS: u32 = 4096;

/// Certified enclosure of `gamma_q = prod_{i>=1} (1 - q^-i)^-1`.
///
/// The lower end is the partial product over `i <= N`, which increases to the
/// limit. For the tail, `-ln(1 - x) <= x / (1 - x)` with `x = q^-i <= q^-(N+1)`
/// gives `ln(tail) <= eps` where `eps = q / ((q - 1)(q^(N+1) - 1))`, and
/// `exp(eps) <= 1 / (1 - eps)` for `eps < 1`. `N` grows until the enclosure
/// is narrow enough, then the endpoints are rounded outward to a decimal grid.
pub fn gamma_q_interval(q: u64, target_width: f64) -> Result<RealInterval, ExactError> {
    prime_power(q)?;
    if !(target_width.is_finite() && target_width > 0.0) {
        return Err(ExactError::InvalidWidth);
    }
    let target = rational_from_f64(target_width).ok_or(ExactError::InvalidWidth)?;
    let half = &target / BigRational::from_integer(BigInt::from(2));

    // smallest d with 10^-d <= target / 4
    let mut digits = 0u32;
    let quarter = &target / BigRational::from_integer(BigInt::from(4));
    while BigRational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(10), digits as usize),
    ) > quarter
    {
        digits += 1;
    }

    let qb = BigInt::from(q);
    let one = BigRational::one();
    let mut partial = BigRational::one();
    let mut q_pow = BigInt::one();
    for _ in 0..GAMMA_MAX_FACTORS {
        q_pow *= &qb;
        partial *= BigRational::new(q_pow.clone(), &q_pow - 1);
        let eps = BigRational::new(qb.clone(), (&qb - 1) * (&q_pow * &qb - 1));
        if eps >= one {
            continue;
        }
        let hi = &partial / (&one - &eps);
        if &hi - &partial <= half {
            return Ok(RealInterval::new(partial, hi).round_outward(digits));
        }
    }
    Err(ExactError::Precision {
        q,
        iterations: GAMMA_MAX_FACTORS,
    })
}

/// `ceil(num / den)` for a positive denominator.
pub fn ceil_div(num: &ExactInt, den: &ExactInt) -> ExactInt {
    let (quot, rem) = num.div_rem(den);
    if rem.is_zero() {
        quot
    } else {
        quot + 1u32
    }
}

/// Smallest integer `>= x` for a nonnegative rational.
pub fn ceil_rational(x: &BigRational) -> ExactInt {
    let c = x.ceil().to_integer();
    c.to_biguint().unwrap_or_default()
}

/// `floor(log_base(value))` for `value >= 1`, `base >= 2`.
pub fn floor_log(value: &ExactInt, base: &ExactInt) -> u64 {
    assert!(!value.is_zero(), "log of zero");
    let mut k = 0;
    let mut acc = base.clone();
    while &acc <= value {
        acc *= base;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> ExactInt {
        BigUint::from(v)
    }

    #[test]
    fn power_examples() {
        assert_eq!(power(2, 0), big(1));
        assert_eq!(power(2, 7), big(128));
        assert_eq!(power(3, 4), big(81));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(4, -1), big(0));
        assert_eq!(binomial(60, 30), big(118264581564861424));
    }

    /// Counts `t`-dimensional subspaces of `F_q^n` (q prime) by collecting the
    /// distinct spans of all `t`-tuples of vectors.
    fn brute_subspaces(n: u32, t: u32, q: u64) -> u64 {
        use std::collections::BTreeSet;
        let size = q.pow(n);
        let span = |gens: &[u64]| -> BTreeSet<u64> {
            let mut set = BTreeSet::from([0u64]);
            for &g in gens {
                let cur: Vec<u64> = set.iter().copied().collect();
                for v in cur {
                    for c in 1..q {
                        // v + c*g coordinate-wise mod q
                        let (mut a, mut b, mut out, mut place) = (v, g, 0, 1);
                        for _ in 0..n {
                            out += ((a % q + c * (b % q)) % q) * place;
                            a /= q;
                            b /= q;
                            place *= q;
                        }
                        set.insert(out);
                    }
                }
            }
            set
        };
        let mut spaces = BTreeSet::new();
        let mut gens = vec![0u64; t as usize];
        let total = size.pow(t);
        for code in 0..total {
            let mut c = code;
            for g in gens.iter_mut() {
                *g = c % size;
                c /= size;
            }
            let s = span(&gens);
            if s.len() as u64 == q.pow(t) {
                spaces.insert(s.into_iter().collect::<Vec<_>>());
            }
        }
        spaces.len() as u64
    }

    #[test]
    fn gaussian_binomial_matches_subspace_enumeration() {
        assert_eq!(brute_subspaces(2, 1, 2), 3);
        assert_eq!(brute_subspaces(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(2, 1, 2), big(3));
        assert_eq!(gaussian_binomial(4, 2, 2), big(35));
        for n in 0..=3u32 {
            for t in 0..=n {
                assert_eq!(
                    gaussian_binomial(n as u64, t as i64, 3),
                    big(brute_subspaces(n, t, 3)),
                    "n={n} t={t}"
                );
            }
        }
    }

    #[test]
    fn gaussian_binomial_edges() {
        for n in 0..6 {
            assert_eq!(gaussian_binomial(n, 0, 2), big(1));
            assert_eq!(gaussian_binomial(n, -1, 2), big(0));
            assert_eq!(gaussian_binomial(n, n as i64 + 1, 2), big(0));
        }
    }

    #[test]
    fn gaussian_binomial_symmetry() {
        for q in [2, 3, 4] {
            for n in 0..=6u64 {
                for t in 0..=n {
                    assert_eq!(
                        gaussian_binomial(n, t as i64, q),
                        gaussian_binomial(n, (n - t) as i64, q)
                    );
                }
            }
        }
    }

    /// Rank counts by enumerating every matrix over a prime field.
    fn brute_rank_counts(rows: usize, cols: usize, q: u64) -> Vec<u64> {
        let cells = rows * cols;
        let mut counts = vec![0u64; rows.min(cols) + 1];
        for code in 0..q.pow(cells as u32) {
            let mut c = code;
            let mut m = vec![vec![0u64; cols]; rows];
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v = c % q;
                    c /= q;
                }
            }
            let mut rank = 0;
            for col in 0..cols {
                let Some(piv) = (rank..rows).find(|&r| m[r][col] != 0) else {
                    continue;
                };
                m.swap(rank, piv);
                let inv = (1..q).find(|&x| x * m[rank][col] % q == 1).unwrap();
                let pivot = m[rank].clone();
                for (r, row) in m.iter_mut().enumerate() {
                    if r != rank && row[col] != 0 {
                        let f = row[col] * inv % q;
                        for (x, &p) in row.iter_mut().zip(&pivot) {
                            *x = (*x + q * q - f * p % q) % q;
                        }
                    }
                }
                rank += 1;
            }
            counts[rank] += 1;
        }
        counts
    }

    #[test]
    fn matrix_rank_counts_examples() {
        assert_eq!(num_matrices_of_rank(2, 2, 0, 2), big(1));
        assert_eq!(num_matrices_of_rank(2, 2, 1, 2), big(9));
        assert_eq!(num_matrices_of_rank(2, 2, 2, 2), big(6));
        assert_eq!(num_matrices_of_rank(2, 2, 3, 2), big(0));
        assert_eq!(num_matrices_of_rank(2, 2, -1, 2), big(0));
    }

    #[test]
    fn matrix_rank_counts_match_enumeration() {
        for q in [2u64, 3] {
            for rows in 1..=3usize {
                for cols in 1..=3usize {
                    if q == 3 && rows * cols > 6 {
                        continue;
                    }
                    let brute = brute_rank_counts(rows, cols, q);
                    for (t, &count) in brute.iter().enumerate() {
                        assert_eq!(
                            num_matrices_of_rank(rows as u64, cols as u64, t as i64, q),
                            big(count),
                            "{rows}x{cols} over F_{q} rank {t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_rank_counts_sum_to_all_matrices() {
        for q in [2u64, 3] {
            for r in 1..=4u64 {
                for c in 1..=4u64 {
                    let total: ExactInt = (0..=r.min(c))
                        .map(|t| num_matrices_of_rank(r, c, t as i64, q))
                        .sum();
                    assert_eq!(total, power(q, r * c));
                }
            }
        }
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(prime_power(2), Ok((2, 1)));
        assert_eq!(prime_power(4), Ok((2, 2)));
        assert_eq!(prime_power(27), Ok((3, 3)));
        assert_eq!(prime_power(49), Ok((7, 2)));
        assert_eq!(prime_power(65536), Ok((2, 16)));
        assert_eq!(prime_power(6), Err(ExactError::NotPrimePower(6)));
        assert_eq!(prime_power(1), Err(ExactError::NotPrimePower(1)));
        assert_eq!(prime_power(0), Err(ExactError::NotPrimePower(0)));
    }

    fn gamma_reference(q: u64) -> f64 {
        (1..200).fold(1.0, |acc, i| acc / (1.0 - (q as f64).powi(-i)))
    }

    #[test]
    fn gamma_intervals_contain_reference_values() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for width in [1e-3, 1e-6, 1e-9] {
                let iv = gamma_q_interval(q, width).unwrap();
                let (lo, hi) = iv.to_f64_bounds();
                let reference = gamma_reference(q);
                assert!(lo <= reference + 1e-12 && reference - 1e-12 <= hi, "q={q}");
                assert!(hi - lo <= width, "q={q} width {}", hi - lo);
            }
        }
    }

    #[test]
    fn gamma_quoted_values() {
        for (q, quoted) in [(2u64, 3.463), (3, 1.785), (4, 1.452)] {
            let (lo, hi) = gamma_q_interval(q, 1e-3).unwrap().to_f64_bounds();
            assert!(
                lo <= quoted + 5e-4 && quoted - 5e-4 <= hi,
                "q={q}: [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn gamma_interval_contains_deeper_partial_products() {
        for q in [2u64, 3, 4] {
            let iv = gamma_q_interval(q, 1e-6).unwrap();
            let mut partial = BigRational::one();
            let qb = BigInt::from(q);
            let mut qp = BigInt::one();
            for i in 1..=80 {
                qp *= &qb;
                partial *= BigRational::new(qp.clone(), &qp - 1);
                if i >= 30 {
                    assert!(iv.contains(&partial), "q={q} i={i}");
                }
            }
        }
    }

    #[test]
    fn gamma_rejects_bad_inputs() {
        assert_eq!(gamma_q_interval(6, 1e-3), Err(ExactError::NotPrimePower(6)));
        assert_eq!(gamma_q_interval(2, 0.0), Err(ExactError::InvalidWidth));
        assert_eq!(gamma_q_interval(2, f64::NAN), Err(ExactError::InvalidWidth));
    }

    #[test]
    fn rational_power_brackets() {
        for (base, num, den) in [
            (2u64, 1i64, 2u32),
            (3, 5, 3),
            (2, -3, 2),
            (5, 0, 4),
            (4, 2, 1),
        ] {
            let iv = RealInterval::rational_power(base, num, den, 9);
            let truth = (base as f64).powf(num as f64 / den as f64);
            let (lo, hi) = iv.to_f64_bounds();
            assert!(lo <= truth + 1e-12 && truth - 1e-12 <= hi);
            assert!(hi - lo < 1e-8);
        }
    }

    #[test]
    fn floor_log_and_ceil_div() {
        assert_eq!(floor_log(&big(1), &big(4)), 0);
        assert_eq!(floor_log(&big(15), &big(4)), 1);
        assert_eq!(floor_log(&big(16), &big(4)), 2);
        assert_eq!(ceil_div(&big(256), &big(19)), big(14));
        assert_eq!(ceil_div(&big(128), &big(8)), big(16));
    }
}
