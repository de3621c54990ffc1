//! Exact arithmetic kernel: Kronecker characters, discriminant decomposition,
//! (generalized) Bernoulli numbers, `L(1-r, chi_d)`, Cohen's numbers `H(r, N)`
//! and the local Euler factors `b_p(n, s)` together with their exact
//! logarithmic derivatives.

use std::sync::RwLock;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::ratio::is_integer;

// ---------------------------------------------------------------------------
// Characters and discriminants

/// Kronecker symbol `(a / n)` for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= v;
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a / n) for odd n > 0
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// `d = 1`, or a fundamental discriminant (positive or negative).
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let k = d / 4;
            matches!(k.rem_euclid(4), 2 | 3) && is_squarefree(k.unsigned_abs())
        }
        _ => false,
    }
}

/// The quadratic character `chi_d(n)`; `chi_1` is trivial.
pub fn kronecker_chi(d: i64, n: i64) -> Result<i32> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(chi_unchecked(d, n))
}

pub(crate) fn chi_unchecked(d: i64, n: i64) -> i32 {
    if d == 1 {
        1
    } else {
        kronecker(d, n)
    }
}

/// Write a discriminant `D` as `n^2 d` with `d` fundamental (or `d = 1` when `D` is a square).
pub fn disc_decompose(disc: i64) -> Result<(u64, i64)> {
    if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::NotDiscriminant(disc));
    }
    let sign = disc.signum();
    let mut square_part = 1u64;
    let mut core = 1u64;
    for (p, e) in factorize(disc.unsigned_abs()) {
        square_part *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    let core = sign * core as i64;
    if core.rem_euclid(4) == 1 {
        Ok((square_part, core))
    } else {
        // core = 2,3 mod 4; D = 0 mod 4 forces an even square part
        debug_assert_eq!(square_part % 2, 0);
        Ok((square_part / 2, 4 * core))
    }
}

/// `4m = n^2 d` with `d` the discriminant of `Q(sqrt(m))` (`d = 1` for square `4m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundDiscDecomp {
    pub m: Rational,
    pub n: u64,
    pub d: i64,
}

pub fn fund_disc_decompose(m: &Rational) -> Result<FundDiscDecomp> {
    let four_m = Rational::from(m * 4u32);
    if !is_integer(&four_m) {
        return Err(Error::NonIntegral(format!("4m = {four_m}")));
    }
    let disc = four_m
        .numer()
        .to_i64()
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::Domain(format!("4m = {four_m} must be a positive integer")))?;
    let (n, d) = disc_decompose(disc)?;
    Ok(FundDiscDecomp { m: m.clone(), n, d })
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and L-values at nonpositive integers

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = BERNOULLI.read().expect("bernoulli cache").get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().expect("bernoulli cache");
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= n {
        let m = table.len() as u32;
        let mut acc = Rational::new();
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from(b * binomial(m + 1, k as u32));
        }
        table.push(-acc / (m + 1));
    }
    table[n].clone()
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    let mut xp = Rational::from(1);
    for j in (0..=n).rev() {
        // term binom(n, j) B_j x^{n-j}
        acc += (&xp * bernoulli(j)) * binomial(n as u32, j as u32);
        xp *= x;
    }
    acc
}

/// Generalized Bernoulli number `B_{r, chi_d} = f^{r-1} sum_{a=1}^{f} chi_d(a) B_r(a/f)`.
pub fn gen_bernoulli(r: u32, d: i64) -> Result<Rational> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let f = d.unsigned_abs();
    let mut acc = Rational::new();
    for a in 1..=f {
        let c = chi_unchecked(d, a as i64);
        if c == 0 {
            continue;
        }
        let b = bernoulli_poly(r as usize, &Rational::from((a, f)));
        if c > 0 {
            acc += b;
        } else {
            acc -= b;
        }
    }
    Ok(acc * Integer::from(f).pow(r - 1))
}

/// `L(1 - r, chi_d) = -B_{r, chi_d} / r`; for `d = 1` this is `zeta(1 - r)`.
pub fn l_value_neg(r: u32, d: i64) -> Result<Rational> {
    if r == 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    Ok(-gen_bernoulli(r, d)? / r)
}

// ---------------------------------------------------------------------------
// Local factors

fn ord_p(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Euler factor `b_p(n, s)` as a rational function of `X = p^{-s}`:
/// numerator `1 - chi X + chi p^k X^{2k+1} - p^{k+1} X^{2k+2}`, denominator `1 - p X^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub p: u64,
    pub k: u32,
    pub chi_p: i32,
    pub numerator: Vec<Integer>,
    pub denominator: Vec<Integer>,
}

fn poly_eval(coeffs: &[Integer], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::new(), |acc, c| acc * x + c)
}

fn poly_deriv(coeffs: &[Integer]) -> Vec<Integer> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Integer::from(c * i as u32))
        .collect()
}

fn poly_eval_float(coeffs: &[Integer], x: &Float) -> Float {
    let mut acc = Float::new(x.prec());
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

impl LocalFactor {
    pub fn new(p: u64, n: u64, d: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        let chi_p = kronecker_chi(d, p as i64)?;
        let k = ord_p(n, p);
        Ok(Self::from_parts(p, k, chi_p))
    }

    pub fn from_parts(p: u64, k: u32, chi_p: i32) -> Self {
        let len = 2 * k as usize + 3;
        let mut num = vec![Integer::new(); len];
        num[0] += 1;
        num[1] -= chi_p;
        num[2 * k as usize + 1] += Integer::from(p).pow(k) * chi_p;
        num[2 * k as usize + 2] -= Integer::from(p).pow(k + 1);
        let den = vec![Integer::from(1), Integer::new(), -Integer::from(p)];
        LocalFactor {
            p,
            k,
            chi_p,
            numerator: num,
            denominator: den,
        }
    }

    /// `X = p^{-s}` for integer `s`.
    pub fn x_at(&self, s: i64) -> Rational {
        let p = Integer::from(self.p);
        if s <= 0 {
            Rational::from(p.pow((-s) as u32))
        } else {
            Rational::from((Integer::from(1), p.pow(s as u32)))
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let den = poly_eval(&self.denominator, x);
        if den == 0 {
            return Err(Error::PoleAtS(format!("X = {x}")));
        }
        Ok(poly_eval(&self.numerator, x) / den)
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        poly_eval_float(&self.numerator, x) / poly_eval_float(&self.denominator, x)
    }

    /// Exact `r` with `d/ds log b_p(n, s) = r log p` at integer `s`.
    ///
    /// With `X = p^{-s}`, `dX/ds = -X log p`, so `r = -X (N'/N - D'/D)`.
    pub fn logderiv_coeff(&self, s: i64) -> Result<Rational> {
        let x = self.x_at(s);
        let n = poly_eval(&self.numerator, &x);
        let d = poly_eval(&self.denominator, &x);
        if d == 0 {
            return Err(Error::PoleAtS(s.to_string()));
        }
        if n == 0 {
            return Err(Error::Domain(format!("b_{}(n, {s}) vanishes", self.p)));
        }
        let dn = poly_eval(&poly_deriv(&self.numerator), &x);
        let dd = poly_eval(&poly_deriv(&self.denominator), &x);
        Ok(-x * (dn / n - dd / d))
    }
}

pub fn local_b(p: u64, n: u64, d: i64, s: i64) -> Result<Rational> {
    let lf = LocalFactor::new(p, n, d)?;
    lf.eval(&lf.x_at(s))
}

/// `r` with `b'_p(n,-1) / b_p(n,-1) = r log p`.
pub fn local_b_logderiv(p: u64, n: u64, d: i64) -> Result<Rational> {
    LocalFactor::new(p, n, d)?.logderiv_coeff(-1)
}

/// Closed-form value of `-(1/log p) b'_p(n,-1)/b_p(n,-1)` in terms of `(p, k, chi_d(p))`:
/// `2p^3/(1-p^3) + (-chi p + chi (2k+1) p^{3k+1} - (2k+2) p^{3k+3}) / (1 - chi p + chi p^{3k+1} - p^{3k+3})`.
pub fn logderiv_closed_form(p: u64, k: u32, chi: i32) -> Rational {
    let p_i = Integer::from(p);
    let p3 = p_i.clone().pow(3);
    let first = Rational::from((Integer::from(&p3 * 2u32), Integer::from(1 - &p3)));
    let a = p_i.clone().pow(3 * k + 1);
    let b = p_i.clone().pow(3 * k + 3);
    let num = Integer::from(-chi) * &p_i + Integer::from(&a * chi) * (2 * k + 1)
        - Integer::from(&b * (2 * k + 2));
    let den = Integer::from(1) - Integer::from(chi) * &p_i + Integer::from(&a * chi) - &b;
    if k == 0 {
        // numerator and denominator of the rational function coincide
        return Rational::new();
    }
    first + Rational::from((num, den))
}

// ---------------------------------------------------------------------------
// Cohen numbers

fn sigma_int(k: u32, n: u64) -> Integer {
    let mut s = Integer::new();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(k);
        }
    }
    s
}

fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^r N` as a discriminant, or `None` when `H(r, N)` vanishes for shape reasons.
fn cohen_disc(r: u32, big_n: u64) -> Option<i64> {
    let signed = if r.is_multiple_of(2) {
        big_n as i64
    } else {
        -(big_n as i64)
    };
    matches!(signed.rem_euclid(4), 0 | 1).then_some(signed)
}

/// Cohen's `H(r, N)` from the divisor-sum formula; `H(r, 0) = zeta(1 - 2r)`,
/// and zero when `(-1)^r N` is not congruent to 0 or 1 mod 4.
pub fn cohen_h(r: u32, big_n: u64) -> Rational {
    assert!(r >= 1, "Cohen numbers need r >= 1");
    if big_n == 0 {
        return l_value_neg(2 * r, 1).expect("trivial character");
    }
    let Some(disc) = cohen_disc(r, big_n) else {
        return Rational::new();
    };
    let (n, d) = disc_decompose(disc).expect("admissible discriminant");
    let l = l_value_neg(r, d).expect("fundamental by construction");
    let mut sum = Integer::new();
    for c in 1..=n {
        if n % c != 0 {
            continue;
        }
        let mu = mobius(c);
        if mu == 0 {
            continue;
        }
        let ch = chi_unchecked(d, c as i64);
        if ch == 0 {
            continue;
        }
        sum += Integer::from(c).pow(r - 1) * sigma_int(2 * r - 1, n / c) * (mu * ch);
    }
    l * sum
}

/// `H(r, N)` from the Euler product `L(1-r, chi_d) prod_{p | n} b_p(n, 1-r)`.
pub fn cohen_h_euler(r: u32, big_n: u64) -> Rational {
    assert!(r >= 1, "Cohen numbers need r >= 1");
    if big_n == 0 {
        return l_value_neg(2 * r, 1).expect("trivial character");
    }
    let Some(disc) = cohen_disc(r, big_n) else {
        return Rational::new();
    };
    let (n, d) = disc_decompose(disc).expect("admissible discriminant");
    let mut acc = l_value_neg(r, d).expect("fundamental by construction");
    for (p, _) in factorize(n) {
        acc *= local_b(p, n, d, 1 - r as i64).expect("no pole at integer s");
    }
    acc
}
