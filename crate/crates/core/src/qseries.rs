//! Exact truncated Laurent series in `q` with exponents in `(1/N)Z`.
//!
//! A [`QSeries`] stores only nonzero coefficients, keyed by exponent, and
//! carries its own precision: every exponent strictly below `prec` is known
//! (absent keys are zero), nothing at or above `prec` is. Arithmetic keeps
//! this honest. The product of two series with precisions `p1, p2` and
//! lowest exponents `l1, l2` is only trusted below `min(p1 + l2, p2 + l1)`.
//!
//! Internally exponents are integers in units of `1/den`; `den` is kept
//! minimal so structurally equal series compare equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Assign;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{fmt_rational, gcd_u64, is_integer, lcm_u64, parse_rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    den: u64,
    prec: i64,
    coeffs: BTreeMap<i64, Rational>,
}

fn units(exp: &Rational, den: u64) -> Option<i64> {
    let scaled = Rational::from(exp * den);
    if is_integer(&scaled) {
        scaled.numer().to_i64()
    } else {
        None
    }
}

impl QSeries {
    /// Build from `(exponent, coefficient)` pairs. Exponents at or above `prec`
    /// are dropped; exponents off the `(1/den)Z` lattice are rejected.
    pub fn new<I>(den: u64, prec: &Rational, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        if den == 0 {
            return Err(Error::Domain("den must be positive".into()));
        }
        let prec_u = units(prec, den)
            .ok_or_else(|| Error::Domain(format!("prec {prec} not in (1/{den})Z")))?;
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            let k = units(&e, den)
                .ok_or_else(|| Error::Domain(format!("exponent {e} not in (1/{den})Z")))?;
            *map.entry(k).or_default() += c;
        }
        Ok(Self::from_units(den, prec_u, map))
    }

    /// Build directly from lattice units (`exponent = k / den`).
    pub(crate) fn from_units(den: u64, prec: i64, coeffs: BTreeMap<i64, Rational>) -> Self {
        let mut s = QSeries { den, prec, coeffs };
        s.canonicalize();
        s
    }

    /// Dense integer coefficients starting at exponent `start/den`, step `1/den`.
    pub(crate) fn from_dense(den: u64, start: i64, prec: i64, dense: &[Integer]) -> Self {
        let map = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (start + i as i64, Rational::from(c.clone())))
            .collect();
        Self::from_units(den, prec, map)
    }

    pub fn zero(prec: &Rational) -> Result<Self> {
        let den = prec.denom().to_u64().unwrap_or(1);
        Self::new(den, prec, std::iter::empty())
    }

    pub fn one(prec: &Rational) -> Result<Self> {
        Self::monomial(Rational::from(1), &Rational::new(), prec)
    }

    pub fn monomial(coeff: Rational, exp: &Rational, prec: &Rational) -> Result<Self> {
        let den = lcm_u64(
            exp.denom().to_u64().unwrap_or(1),
            prec.denom().to_u64().unwrap_or(1),
        );
        Self::new(den, prec, [(exp.clone(), coeff)])
    }

    fn canonicalize(&mut self) {
        self.coeffs.retain(|k, c| *k < self.prec && *c != 0);
        let mut g = self.den;
        g = gcd_u64(g, self.prec.unsigned_abs());
        for k in self.coeffs.keys() {
            if g == 1 {
                break;
            }
            g = gcd_u64(g, k.unsigned_abs());
        }
        if g > 1 {
            let g = g as i64;
            self.den /= g as u64;
            self.prec /= g;
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
        }
    }

    fn lifted(&self, den: u64) -> (i64, BTreeMap<i64, Rational>) {
        debug_assert_eq!(den % self.den, 0);
        let f = (den / self.den) as i64;
        let map = self
            .coeffs
            .iter()
            .map(|(k, c)| (k * f, c.clone()))
            .collect();
        (self.prec * f, map)
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Exclusive upper bound of the known exponents.
    pub fn prec(&self) -> Rational {
        Rational::from((self.prec, self.den))
    }

    /// Lowest exponent with a nonzero coefficient, or `prec` for the zero series.
    pub fn lo(&self) -> Rational {
        Rational::from((self.lo_units(), self.den))
    }

    fn lo_units(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^exp`; `None` when `exp` is not below the precision.
    pub fn coeff(&self, exp: &Rational) -> Option<Rational> {
        if *exp >= self.prec() {
            return None;
        }
        Some(match units(exp, self.den) {
            Some(k) => self.coeffs.get(&k).cloned().unwrap_or_default(),
            None => Rational::new(),
        })
    }

    /// Shorthand for `coeff(num/den)`; panics past the precision.
    pub fn coeff_at(&self, num: i64, den: i64) -> Rational {
        self.coeff(&Rational::from((num, den)))
            .unwrap_or_else(|| panic!("q^({num}/{den}) is beyond the series precision"))
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        self.coeffs
            .iter()
            .map(move |(k, c)| (Rational::from((*k, self.den)), c))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(is_integer)
    }

    /// Drop everything at or above `prec` (which may not exceed the current precision).
    pub fn truncate(&self, prec: &Rational) -> Result<Self> {
        if *prec > self.prec() {
            return Err(Error::PrecisionExhausted(format!(
                "cannot truncate to {prec}: series only known below {}",
                self.prec()
            )));
        }
        let den = lcm_u64(self.den, prec.denom().to_u64().unwrap_or(1));
        let (_, map) = self.lifted(den);
        let p = units(prec, den).expect("lcm denominator");
        Ok(Self::from_units(den, p, map))
    }

    /// True when both series agree on every exponent below the smaller precision.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let p = self.prec().min(other.prec());
        match (self.truncate(&p), other.truncate(&p)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let map = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, Rational::from(v * c)))
            .collect();
        Self::from_units(self.den, self.prec, map)
    }

    /// Multiply by `q^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        let den = lcm_u64(self.den, shift.denom().to_u64().unwrap_or(1));
        let (p, map) = self.lifted(den);
        let s = units(shift, den).expect("lcm denominator");
        let map = map.into_iter().map(|(k, c)| (k + s, c)).collect();
        Self::from_units(den, p + s, map)
    }

    pub fn add(&self, other: &QSeries) -> Self {
        let den = lcm_u64(self.den, other.den);
        let (pa, mut ma) = self.lifted(den);
        let (pb, mb) = other.lifted(den);
        for (k, c) in mb {
            *ma.entry(k).or_default() += c;
        }
        Self::from_units(den, pa.min(pb), ma)
    }

    pub fn sub(&self, other: &QSeries) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let map = self
            .coeffs
            .iter()
            .map(|(k, c)| (*k, Rational::from(-c)))
            .collect();
        Self::from_units(self.den, self.prec, map)
    }

    /// Sparse Cauchy product, truncated per the precision discipline.
    pub fn mul(&self, other: &QSeries) -> Self {
        let den = lcm_u64(self.den, other.den);
        let (pa, ma) = self.lifted(den);
        let (pb, mb) = other.lifted(den);
        let f = (den / self.den) as i64;
        let g = (den / other.den) as i64;
        let la = self.lo_units() * f;
        let lb = other.lo_units() * g;
        let bound = (pa + lb).min(pb + la);
        let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
        let mut prod = Rational::new();
        for (i, a) in &ma {
            if i + lb >= bound {
                break;
            }
            for (j, b) in &mb {
                if i + j >= bound {
                    break;
                }
                prod.assign(a * b);
                *out.entry(i + j).or_default() += &prod;
            }
        }
        Self::from_units(den, bound, out)
    }

    /// Multiplicative inverse. The result has `lo = -self.lo` and is known to
    /// the same relative precision as `self`.
    pub fn invert(&self) -> Result<Self> {
        let (&l, lead) = self
            .coeffs
            .iter()
            .next()
            .ok_or(Error::ZeroLeadingCoefficient)?;
        let len = (self.prec - l) as usize;
        let inv_lead = Rational::from(lead.recip_ref());
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        out.push(inv_lead.clone());
        let tail: Vec<(usize, &Rational)> = self
            .coeffs
            .iter()
            .skip(1)
            .map(|(k, c)| ((k - l) as usize, c))
            .collect();
        let mut acc = Rational::new();
        let mut prod = Rational::new();
        for n in 1..len {
            acc.assign(0);
            for &(j, c) in &tail {
                if j > n {
                    break;
                }
                prod.assign(c * &out[n - j]);
                acc += &prod;
            }
            acc *= &inv_lead;
            out.push(Rational::from(-&acc));
        }
        let map = out
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (i as i64 - l, c))
            .collect();
        Ok(Self::from_units(self.den, self.prec - 2 * l, map))
    }

    /// `self^t`, known to the same relative precision as `self`.
    pub fn pow(&self, t: u32) -> Result<Self> {
        let rel = self.prec() - self.lo();
        let mut acc = Self::one(&rel)?;
        for _ in 0..t {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> QSeriesJson {
        QSeriesJson {
            den: self.den,
            lo: fmt_rational(&self.lo()),
            prec: fmt_rational(&self.prec()),
            terms: self
                .terms()
                .map(|(e, c)| TermJson {
                    exp: fmt_rational(&e),
                    coeff: fmt_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &QSeriesJson) -> Result<Self> {
        let prec = parse_rational(&j.prec)?;
        let lo = parse_rational(&j.lo)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            terms.push((parse_rational(&t.exp)?, parse_rational(&t.coeff)?));
        }
        let s = Self::new(j.den, &prec, terms)?;
        if s.lo() < lo {
            return Err(Error::InvalidForm(format!(
                "declared lo {lo} exceeds the lowest stored exponent {}",
                s.lo()
            )));
        }
        Ok(s)
    }
}

fn exp_str(e: &Rational) -> String {
    if *e == 1 {
        String::new()
    } else if *e > 0 && *e.denom() == 1 {
        format!("^{e}")
    } else {
        format!("^({e})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if *c < 0 { "-" } else { "+" };
            match (first, *c < 0) {
                (true, false) => {}
                (true, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            let mag = Rational::from(c.abs_ref());
            match (mag == 1, e == 0) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "q{}", exp_str(&e))?,
                (false, false) => write!(f, "{mag} q{}", exp_str(&e))?,
            }
            first = false;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q{})", exp_str(&self.prec()))
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeriesJson {
    pub den: u64,
    pub lo: String,
    pub prec: String,
    pub terms: Vec<TermJson>,
}

// ---------------------------------------------------------------------------
// Classical series builders

fn dense_mul(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// `prod_{n>=1} (1 - q^n)` to `len` coefficients, via Euler's pentagonal numbers.
fn euler_product(len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if (e as usize) < len {
                any = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                out[e as usize] = Integer::from(sign);
            }
            if k == 0 {
                break;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    out
}

fn dense_pow(base: &[Integer], mut t: u32, len: usize) -> Vec<Integer> {
    let mut acc = vec![Integer::new(); len];
    if len > 0 {
        acc[0] = Integer::from(1);
    }
    let mut b = base[..len.min(base.len())].to_vec();
    while t > 0 {
        if t & 1 == 1 {
            acc = dense_mul(&acc, &b, len);
        }
        t >>= 1;
        if t > 0 {
            b = dense_mul(&b, &b, len);
        }
    }
    acc
}

fn check_prec(prec: i64) -> Result<()> {
    if prec < 1 {
        return Err(Error::Domain(format!(
            "series precision must be >= 1, got {prec}"
        )));
    }
    Ok(())
}

/// `Delta = q prod (1 - q^n)^24`, exponents `< prec`.
pub fn build_delta(prec: i64) -> Result<QSeries> {
    check_prec(prec)?;
    let len = (prec - 1) as usize;
    let eta = euler_product(len);
    let d = dense_pow(&eta, 24, len);
    Ok(QSeries::from_dense(1, 1, prec, &d))
}

fn sigma(k: u32, n: u64) -> Integer {
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

fn eisenstein(prec: i64, k: u32, c: i64) -> Result<QSeries> {
    check_prec(prec)?;
    let mut dense = Vec::with_capacity(prec as usize);
    dense.push(Integer::from(1));
    for n in 1..prec as u64 {
        dense.push(sigma(k, n) * c);
    }
    Ok(QSeries::from_dense(1, 0, prec, &dense))
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn build_e4(prec: i64) -> Result<QSeries> {
    eisenstein(prec, 3, 240)
}

/// `E6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn build_e6(prec: i64) -> Result<QSeries> {
    eisenstein(prec, 5, -504)
}

/// `j = E4^3 / Delta`, exponents `< prec`.
pub fn build_j(prec: i64) -> Result<QSeries> {
    check_prec(prec)?;
    let e4 = build_e4(prec + 2)?;
    let delta = build_delta(prec + 2)?;
    let e4_cubed = e4.mul(&e4).mul(&e4);
    let j = e4_cubed.mul(&delta.invert()?);
    j.truncate(&Rational::from(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;
    use proptest::prelude::*;

    fn series(den: u64, prec: (i64, i64), terms: &[((i64, i64), i64)]) -> QSeries {
        QSeries::new(
            den,
            &rat(prec.0, prec.1),
            terms.iter().map(|&((n, d), c)| (rat(n, d), rat(c, 1))),
        )
        .unwrap()
    }

    /// Naive `q prod_{n < len} (1-q^n)^24` by repeated multiplication.
    fn delta_oracle(prec: i64) -> Vec<i64> {
        let len = (prec - 1) as usize;
        let mut poly = vec![0i128; len];
        poly[0] = 1;
        for n in 1..len {
            for _ in 0..24 {
                for i in (n..len).rev() {
                    poly[i] -= poly[i - n];
                }
            }
        }
        poly.into_iter().map(|c| c as i64).collect()
    }

    #[test]
    fn addition_cancels() {
        let a = series(1, (5, 1), &[((-1, 1), 1), ((0, 1), 2)]);
        let b = series(1, (5, 1), &[((-1, 1), -1)]);
        let s = &a + &b;
        assert_eq!(s, series(1, (5, 1), &[((0, 1), 2)]));
        assert_eq!(&a + &QSeries::zero(&rat(5, 1)).unwrap(), a);
    }

    #[test]
    fn addition_lifts_denominator_and_takes_min_precision() {
        let a = series(1, (3, 1), &[((0, 1), 10)]);
        let b = series(4, (11, 4), &[((-1, 4), 1)]);
        let s = &a + &b;
        assert_eq!(s.den(), 4);
        assert_eq!(s.prec(), rat(11, 4));
        assert_eq!(s.coeff_at(0, 1), 10);
        assert_eq!(s.coeff_at(-1, 4), 1);
    }

    #[test]
    fn geometric_inverse() {
        let a = series(1, (10, 1), &[((0, 1), 1), ((1, 1), -1)]);
        let geo = QSeries::new(1, &rat(10, 1), (0..10).map(|n| (rat(n, 1), rat(1, 1)))).unwrap();
        let p = &a * &geo;
        assert_eq!(p, QSeries::one(&rat(10, 1)).unwrap());
        assert_eq!(a.invert().unwrap(), geo);
    }

    #[test]
    fn product_precision_follows_truncation_discipline() {
        // lo = -1, prec = 3 and lo = 1/4, prec = 2  => valid below min(3 + 1/4, 2 - 1)
        let a = series(1, (3, 1), &[((-1, 1), 1), ((2, 1), 5)]);
        let b = series(4, (2, 1), &[((1, 4), 1)]);
        assert_eq!((&a * &b).prec(), rat(1, 1));
    }

    #[test]
    fn invert_monomial() {
        let a = series(2, (3, 1), &[((1, 2), 2)]);
        let b = a.invert().unwrap();
        assert_eq!(b.lo(), rat(-1, 2));
        assert_eq!(b.coeff_at(-1, 2), rat(1, 2));
        assert_eq!(b.len(), 1);
        assert_eq!(
            QSeries::one(&rat(4, 1)).unwrap().invert().unwrap(),
            QSeries::one(&rat(4, 1)).unwrap()
        );
    }

    #[test]
    fn invert_zero_series_fails() {
        let z = QSeries::zero(&rat(4, 1)).unwrap();
        assert_eq!(z.invert(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn delta_matches_eta_product_oracle() {
        let d = build_delta(14).unwrap();
        let oracle = delta_oracle(14);
        for (i, c) in oracle.iter().enumerate() {
            assert_eq!(d.coeff_at(i as i64 + 1, 1), rat(*c, 1), "tau({})", i + 1);
        }
        assert_eq!(d.coeff_at(1, 1), 1);
        assert_eq!(d.coeff_at(2, 1), -24);
        assert_eq!(d.coeff_at(3, 1), 252);
        // Ramanujan tau is multiplicative
        assert_eq!(d.coeff_at(6, 1), d.coeff_at(2, 1) * d.coeff_at(3, 1));
    }

    #[test]
    fn inverse_delta_leading_terms() {
        // long division of q - 24q^2 + 252q^3 - 1472q^4 ... by hand
        let inv = build_delta(6).unwrap().invert().unwrap();
        assert_eq!(inv.lo(), rat(-1, 1));
        assert_eq!(inv.coeff_at(-1, 1), 1);
        assert_eq!(inv.coeff_at(0, 1), 24);
        assert_eq!(inv.coeff_at(1, 1), 324);
        assert_eq!(inv.coeff_at(2, 1), 3200);
        let unit = &build_delta(6).unwrap() * &inv;
        assert_eq!(unit, QSeries::one(&rat(5, 1)).unwrap());
    }

    #[test]
    fn j_invariant_expansion() {
        let j = build_j(4).unwrap();
        assert_eq!(j.prec(), rat(4, 1));
        assert_eq!(j.coeff_at(-1, 1), 1);
        assert_eq!(j.coeff_at(0, 1), 744);
        assert_eq!(j.coeff_at(1, 1), 196884);
        assert_eq!(j.coeff_at(2, 1), 21493760);
        assert!(j.is_integral());
    }

    #[test]
    fn j_delta_equals_e4_cubed() {
        let p = 10;
        let j = build_j(p).unwrap();
        let d = build_delta(p + 2).unwrap();
        let e4 = build_e4(p + 2).unwrap();
        let lhs = &j * &d;
        let rhs = &(&e4 * &e4) * &e4;
        assert!(lhs.agrees_with(&rhs));
        assert_eq!(lhs.prec(), rat(p + 1, 1));
    }

    #[test]
    fn eisenstein_series_are_integral() {
        let e4 = build_e4(8).unwrap();
        let e6 = build_e6(8).unwrap();
        assert_eq!(e4.coeff_at(0, 1), 1);
        assert_eq!(e4.coeff_at(1, 1), 240);
        assert_eq!(e6.coeff_at(1, 1), -504);
        assert_eq!(e6.coeff_at(2, 1), -504 * 33);
        assert!(e4.is_integral() && e6.is_integral() && build_delta(8).unwrap().is_integral());
        // E4^2 = E8 = 1 + 480 sum sigma_7
        let e8 = &e4 * &e4;
        assert_eq!(e8.coeff_at(2, 1), 480 * 129);
    }

    #[test]
    fn builders_reject_nonpositive_precision() {
        assert!(build_delta(0).is_err());
        assert!(build_j(0).is_err());
    }

    #[test]
    fn text_and_json_rendering() {
        let a = series(4, (3, 4), &[((-1, 4), 1), ((0, 1), -3)]);
        assert_eq!(a.to_string(), "q^(-1/4) - 3 + O(q^(3/4))");
        let j = a.to_json();
        assert_eq!(j.lo, "-1/4");
        assert_eq!(j.prec, "3/4");
        assert_eq!(QSeries::from_json(&j).unwrap(), a);
    }

    #[test]
    fn truncate_refuses_to_extend() {
        let a = series(1, (3, 1), &[((0, 1), 1)]);
        assert!(a.truncate(&rat(4, 1)).is_err());
        assert_eq!(a.truncate(&rat(1, 2)).unwrap().prec(), rat(1, 2));
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        (
            prop::sample::select(vec![1u64, 2, 4]),
            -2i64..2,
            4i64..12,
            prop::collection::vec(-20i64..20, 1..10),
        )
            .prop_map(|(den, lo, span, coeffs)| {
                let den_i = den as i64;
                let lo_u = lo * den_i;
                let prec_u = lo_u + span;
                let mut terms: Vec<(Rational, Rational)> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (rat(lo_u + i as i64, den_i), rat(c, 3)))
                    .collect();
                // nonzero leading coefficient keeps the series invertible
                terms[0].1 = rat(coeffs[0].abs() + 1, 1);
                QSeries::new(
                    den,
                    &rat(prec_u.max(lo_u + coeffs.len() as i64), den_i),
                    terms,
                )
                .unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms_on_truncations(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert!((&a * &b).agrees_with(&(&b * &a)));
            prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
            prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn inverse_is_two_sided(a in arb_series()) {
            let inv = a.invert().unwrap();
            prop_assert_eq!(inv.lo(), -a.lo());
            let one = &a * &inv;
            prop_assert_eq!(one.prec(), a.prec() - a.lo());
            prop_assert_eq!(one, QSeries::one(&(a.prec() - a.lo())).unwrap());
        }

        #[test]
        fn json_round_trip(a in arb_series()) {
            prop_assert_eq!(QSeries::from_json(&a.to_json()).unwrap(), a);
        }
    }
}
