//! Hurwitz zeta and Dirichlet L-functions with their `s`-derivatives at real
//! points, by Euler–Maclaurin summation in MPFR arithmetic.
//!
//! The error estimates are the size of the first omitted Euler–Maclaurin
//! term. That is the usual heuristic for an asymptotic series and is not a
//! rigorous bound.

use std::sync::RwLock;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::arith::{bernoulli, is_fundamental, kronecker_chi};
use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LN_10 / std::f64::consts::LN_2;

/// Euler–Maclaurin cutoffs: `n` summed terms, `m` Bernoulli corrections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmTerms {
    pub n: u32,
    pub m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub digits: u32,
    /// Fixed cutoffs; `None` picks them adaptively from `digits`.
    pub em_terms: Option<EmTerms>,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            digits: 50,
            em_terms: None,
        }
    }
}

impl PrecisionConfig {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 15 {
            return Err(Error::Domain(format!("digits must be >= 15, got {digits}")));
        }
        Ok(PrecisionConfig {
            digits,
            em_terms: None,
        })
    }

    pub fn with_em_terms(mut self, n: u32, m: u32) -> Self {
        self.em_terms = Some(EmTerms { n, m });
        self
    }

    /// Working precision in bits: `digits` plus 20 guard digits.
    pub fn bits(&self) -> u32 {
        ((self.digits + 20) as f64 * LOG2_10).ceil() as u32
    }

    /// `10^{-(digits - slack)}` at working precision.
    pub fn tol(&self, slack: i32) -> Float {
        Float::with_val(self.bits(), 10).pow(slack - self.digits as i32)
    }

    /// Target for series tails and quadrature: 15 digits beyond the request.
    fn eps(&self) -> Float {
        self.tol(-15)
    }
}

// ---------------------------------------------------------------------------
// Hurwitz zeta

static EM_COEFFS: RwLock<Vec<(u32, Vec<Float>)>> = RwLock::new(Vec::new());

/// `B_{2j} / (2j)!` for `j = 1..=m` at `bits` precision.
fn em_coeffs(m: usize, bits: u32) -> Vec<Float> {
    {
        let cache = EM_COEFFS.read().expect("em cache");
        if let Some((_, v)) = cache.iter().find(|(b, v)| *b == bits && v.len() >= m) {
            return v[..m].to_vec();
        }
    }
    let mut out = Vec::with_capacity(m);
    let mut fact = Rational::from(1);
    for j in 1..=m {
        fact *= (2 * j - 1) as u32;
        fact *= (2 * j) as u32;
        out.push(Float::with_val(bits, bernoulli(2 * j) / &fact));
    }
    let mut cache = EM_COEFFS.write().expect("em cache");
    cache.retain(|(b, _)| *b != bits);
    cache.push((bits, out.clone()));
    out
}

/// Euler–Maclaurin pieces for `zeta(s, x)` with the `a^{1-s}/(s-1)` term split off.
struct EmParts {
    /// value and `s`-derivative without the pole term
    regular: (Float, Float),
    /// `ln(N + x)`
    log_a: Float,
    err: Float,
}

/// `None` if the correction terms start growing before reaching `eps`.
fn em_sum(
    s: &Float,
    x: &Float,
    n: u32,
    m: Option<u32>,
    eps: &Float,
    cap: usize,
) -> Option<EmParts> {
    let bits = s.prec();
    let mut value = Float::new(bits);
    let mut deriv = Float::new(bits);
    for k in 0..n {
        let lk = Float::with_val(bits, x + k).ln();
        let t = (-Float::with_val(bits, s * &lk)).exp();
        deriv -= Float::with_val(bits, &lk * &t);
        value += t;
    }
    let a = Float::with_val(bits, x + n);
    let log_a = Float::with_val(bits, a.ln_ref());
    let a_s = (-Float::with_val(bits, s * &log_a)).exp();
    value += Float::with_val(bits, &a_s / 2u32);
    deriv -= Float::with_val(bits, &log_a * &a_s) / 2u32;

    let inv_a2 = Float::with_val(bits, a.square_ref()).recip();
    let mut pw = Float::with_val(bits, &a_s / &a);
    let mut p = Float::with_val(bits, s);
    let mut dp = Float::with_val(bits, 1);
    let limit = m.map(|m| m as usize).unwrap_or(cap);
    let coeffs = em_coeffs(limit + 1, bits);
    let mut prev = Float::with_val(bits, f64::INFINITY);
    let size = |t: &Float, dt: &Float| {
        Float::with_val(bits, t.abs_ref()).max(&Float::with_val(bits, dt.abs_ref()))
    };
    for (j, c) in coeffs.iter().enumerate() {
        let j = j + 1;
        if j > 1 {
            // P_j = P_{j-1} (s + 2j - 3)(s + 2j - 2)
            for i in [2 * j - 3, 2 * j - 2] {
                let f = Float::with_val(bits, s + i as u32);
                dp = Float::with_val(bits, &dp * &f) + &p;
                p *= f;
            }
            pw *= &inv_a2;
        }
        let cp = Float::with_val(bits, c * &pw);
        let term = Float::with_val(bits, &cp * &p);
        let dterm = Float::with_val(bits, &cp * &dp) - Float::with_val(bits, &term * &log_a);
        let sz = size(&term, &dterm);
        let scale = Float::with_val(bits, value.abs_ref())
            .max(&Float::with_val(bits, deriv.abs_ref()))
            .max(&Float::with_val(bits, 1));
        if j > limit {
            return Some(EmParts {
                regular: (value, deriv),
                log_a,
                err: sz,
            });
        }
        if m.is_none() {
            if sz <= Float::with_val(bits, eps * &scale) {
                return Some(EmParts {
                    regular: (value, deriv),
                    log_a,
                    err: sz,
                });
            }
            if j > 2 && sz > prev {
                return None;
            }
        }
        prev = sz;
        value += term;
        deriv += dterm;
    }
    None
}

fn em_parts(s: &Float, x: &Float, cfg: &PrecisionConfig) -> Result<EmParts> {
    let eps = cfg.eps();
    if let Some(EmTerms { n, m }) = cfg.em_terms {
        return em_sum(s, x, n, Some(m), &eps, 0)
            .ok_or_else(|| Error::PrecisionExhausted("Euler-Maclaurin cutoffs".into()));
    }
    let sabs = s.to_f64().abs();
    let mut n = (0.6 * cfg.digits as f64 + 10.0 + sabs).ceil() as u32;
    let cap = (4 * cfg.digits + 40) as usize;
    for _ in 0..8 {
        if let Some(parts) = em_sum(s, x, n, None, &eps, cap) {
            return Ok(parts);
        }
        n *= 2;
    }
    Err(Error::PrecisionExhausted(format!(
        "Euler-Maclaurin did not reach 1e-{} at s = {s}",
        cfg.digits + 15
    )))
}

/// Adds `a^{1-s}/(s-1)` and its derivative.
fn with_pole(parts: &EmParts, s: &Float) -> (Float, Float) {
    let bits = s.prec();
    let sm1 = Float::with_val(bits, s - 1u32);
    let pole = (-Float::with_val(bits, &sm1 * &parts.log_a)).exp() / &sm1;
    let dpole = -Float::with_val(bits, &pole * &parts.log_a) - Float::with_val(bits, &pole / &sm1);
    (
        Float::with_val(bits, &parts.regular.0 + &pole),
        Float::with_val(bits, &parts.regular.1 + &dpole),
    )
}

#[derive(Clone, Debug)]
pub struct HurwitzResult {
    pub value: Float,
    pub deriv: Float,
    pub err: Float,
}

/// `zeta(s, x)` and `d/ds zeta(s, x)` for real `s != 1`, `0 < x <= 1`.
pub fn hurwitz_zeta_deriv(s: &Float, x: &Float, cfg: &PrecisionConfig) -> Result<HurwitzResult> {
    if *s == 1 {
        return Err(Error::PoleAtOne);
    }
    if *x <= 0 || *x > 1 {
        return Err(Error::Domain(format!("x = {x} outside (0, 1]")));
    }
    let bits = cfg.bits();
    let s = Float::with_val(bits, s);
    let x = Float::with_val(bits, x);
    let parts = em_parts(&s, &x, cfg)?;
    let (value, deriv) = with_pole(&parts, &s);
    Ok(HurwitzResult {
        value,
        deriv,
        err: parts.err,
    })
}

// ---------------------------------------------------------------------------
// Dirichlet L-functions

#[derive(Clone, Debug)]
pub struct LDerivResult {
    pub value: Float,
    pub deriv: Float,
    /// `deriv / value`; NaN when `value` is indistinguishable from zero.
    pub logderiv: Float,
    pub err_estimate: Float,
}

fn finish(value: Float, deriv: Float, err: Float) -> LDerivResult {
    let bits = value.prec();
    let floor = Float::with_val(bits, &err * 100u32);
    let logderiv = if Float::with_val(bits, value.abs_ref()) <= floor {
        Float::with_val(bits, f64::NAN)
    } else {
        Float::with_val(bits, &deriv / &value)
    };
    LDerivResult {
        value,
        deriv,
        logderiv,
        err_estimate: err,
    }
}

fn conductor(d: i64) -> Result<u64> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(d.unsigned_abs())
}

/// `L(s, chi_d)` and `L'(s, chi_d)` as `|d|^{-s} sum_a chi_d(a) zeta(s, a/|d|)`.
pub fn dirichlet_l_deriv(s: &Rational, d: i64, cfg: &PrecisionConfig) -> Result<LDerivResult> {
    let f = conductor(d)?;
    let bits = cfg.bits();
    if *s == 1 && f == 1 {
        return Err(Error::PoleAtOne);
    }
    let sf = Float::with_val(bits, s);
    let mut sum = Float::new(bits);
    let mut dsum = Float::new(bits);
    let mut err = Float::new(bits);
    for a in 1..=f {
        let c = kronecker_chi(d, a as i64)?;
        if c == 0 {
            continue;
        }
        let x = Float::with_val(bits, Rational::from((a, f)));
        let parts = em_parts(&sf, &x, cfg)?;
        let (v, dv) = if *s == 1 {
            // the 1/(s-1) parts cancel because sum chi(a) = 0
            let la = &parts.log_a;
            let la2 = Float::with_val(bits, la.square_ref()) / 2u32;
            (
                Float::with_val(bits, &parts.regular.0 - la),
                Float::with_val(bits, &parts.regular.1 + &la2),
            )
        } else {
            with_pole(&parts, &sf)
        };
        if c > 0 {
            sum += v;
            dsum += dv;
        } else {
            sum -= v;
            dsum -= dv;
        }
        err += parts.err;
    }
    let log_f = Float::with_val(bits, f).ln();
    let f_s = (-Float::with_val(bits, &sf * &log_f)).exp();
    let value = Float::with_val(bits, &sum * &f_s);
    let deriv = (dsum - Float::with_val(bits, &log_f * &sum)) * &f_s;
    // truncation plus accumulated rounding across the character sum
    let rounding = Float::with_val(bits, f) >> (bits - 16);
    let err = err * f_s * (log_f + 1u32) + rounding;
    Ok(finish(value, deriv, err))
}

/// `zeta'(p) / zeta(p)` for `p = -1` or `-3`, confirmed against the functional equation.
pub fn zeta_logderiv(point: i64, cfg: &PrecisionConfig) -> Result<Float> {
    if point != -1 && point != -3 {
        return Err(Error::Domain(format!(
            "zeta_logderiv supports -1 and -3, got {point}"
        )));
    }
    let s = Rational::from(point);
    let main = dirichlet_l_deriv(&s, 1, cfg)?;
    let check = oracle::dirichlet_l_deriv_fe(&s, 1, cfg)?;
    let diff = Float::with_val(cfg.bits(), &main.logderiv - &check.logderiv).abs();
    let tol = cfg.tol(10)
        * Float::with_val(cfg.bits(), main.logderiv.abs_ref()).max(&Float::with_val(cfg.bits(), 1));
    if diff > tol {
        return Err(Error::PrecisionExhausted(format!(
            "zeta'/zeta({point}): Euler-Maclaurin and functional equation differ by {}",
            diff.to_f64()
        )));
    }
    Ok(main.logderiv)
}

pub fn digamma(x: &Float) -> Float {
    Float::with_val(x.prec(), x.digamma_ref())
}

#[derive(Clone, Debug)]
pub struct Constants {
    pub pi: Float,
    pub gamma: Float,
    pub log2: Float,
    pub log_pi: Float,
    /// `C = (log 4 pi + gamma) / 2`
    pub c: Float,
    /// `C0 = log 2 pi - gamma`
    pub c0: Float,
    pub zeta3: Float,
    pub zeta4: Float,
}

pub fn constants(cfg: &PrecisionConfig) -> Constants {
    let bits = cfg.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let gamma = Float::with_val(bits, Constant::Euler);
    let log2 = Float::with_val(bits, Constant::Log2);
    let log_pi = Float::with_val(bits, pi.ln_ref());
    let c = (Float::with_val(bits, &log2 * 2u32) + &log_pi + &gamma) / 2u32;
    let c0 = Float::with_val(bits, &log2 + &log_pi) - &gamma;
    let zeta3 = Float::with_val(bits, 3).zeta();
    let zeta4 = Float::with_val(bits, pi.clone().pow(4u32)) / 90u32;
    Constants {
        pi,
        gamma,
        log2,
        log_pi,
        c,
        c0,
        zeta3,
        zeta4,
    }
}

/// Independent evaluation through the functional equation, for cross-checks.
pub mod oracle {
    use super::*;
    use crate::quad::exp_sinh_vec;

    /// `Gamma(sigma) L(sigma)` and its `sigma`-derivative from the Mellin integral
    /// of `F(t) = sum_n chi(n) e^{-nt}`.
    fn mellin_l(
        sigma: &Float,
        d: i64,
        f: u64,
        cfg: &PrecisionConfig,
    ) -> Result<(Float, Float, Float)> {
        let bits = cfg.bits();
        let chi: Vec<i32> = (1..=f)
            .map(|a| kronecker_chi(d, a as i64))
            .collect::<Result<_>>()?;
        let sm1 = Float::with_val(bits, sigma - 1u32);
        let kernel = |t: &Float| -> Vec<Float> {
            let lt = Float::with_val(bits, t.ln_ref());
            let big_f = if f == 1 {
                Float::with_val(bits, t.exp_m1_ref()).recip()
            } else {
                let e1 = Float::with_val(bits, -t).exp();
                let mut p = e1.clone();
                let mut num = Float::new(bits);
                for &c in &chi {
                    match c {
                        1 => num += &p,
                        -1 => num -= &p,
                        _ => {}
                    }
                    p *= &e1;
                }
                let ft = Float::with_val(bits, t * f);
                num / -Float::with_val(bits, (-ft).exp_m1_ref())
            };
            let w = Float::with_val(bits, &sm1 * &lt).exp() * big_f;
            let wl = Float::with_val(bits, &w * &lt);
            vec![w, wl]
        };
        let mut r = exp_sinh_vec(kernel, 2, bits, &cfg.eps());
        let i1 = r.pop().expect("two integrals");
        let i0 = r.pop().expect("two integrals");
        let err = i0.err.max(&i1.err);
        Ok((i0.value, i1.value, err))
    }

    /// `L(s, chi_d)`, `L'(s, chi_d)` for an even character (`d = 1` or `d > 0`)
    /// from `L(1-s)`, `L'(1-s)` and `Lambda(s) = Lambda(1-s)`.
    ///
    /// Needs `1 - s > 1` for `d = 1` and `1 - s > 0` otherwise; `s` must avoid
    /// the trivial zeros `0, -2, -4, ...`.
    pub fn dirichlet_l_deriv_fe(
        s: &Rational,
        d: i64,
        cfg: &PrecisionConfig,
    ) -> Result<LDerivResult> {
        let f = conductor(d)?;
        if d < 0 {
            return Err(Error::Domain(
                "functional-equation oracle covers even characters only".into(),
            ));
        }
        let sigma_q = Rational::from(1 - s);
        if (f == 1 && sigma_q <= 1) || sigma_q <= 0 {
            return Err(Error::Domain(format!(
                "Mellin integral diverges at 1 - s = {sigma_q}"
            )));
        }
        let half_s = Rational::from(s / 2);
        if *half_s.denom() == 1 && half_s <= 0 {
            return Err(Error::Domain(format!("s = {s} is a trivial zero")));
        }
        let bits = cfg.bits();
        let sigma = Float::with_val(bits, &sigma_q);
        let (i0, i1, qerr) = mellin_l(&sigma, d, f, cfg)?;
        let gamma_sigma = Float::with_val(bits, sigma.gamma_ref());
        let l_sigma = Float::with_val(bits, &i0 / &gamma_sigma);
        let dl_sigma = (i1 - Float::with_val(bits, &i0 * digamma(&sigma))) / &gamma_sigma;

        let sf = Float::with_val(bits, s);
        let pi = Float::with_val(bits, Constant::Pi);
        let log_fpi = Float::with_val(bits, f).ln() - Float::with_val(bits, pi.ln_ref());
        let a = Float::with_val(bits, 1u32 - &sf) / 2u32;
        let b = Float::with_val(bits, &sf / 2u32);
        let expo = Float::with_val(bits, 1u32 - Float::with_val(bits, &sf * 2u32)) / 2u32;
        let factor = Float::with_val(bits, &expo * &log_fpi).exp()
            * Float::with_val(bits, a.gamma_ref())
            / Float::with_val(bits, b.gamma_ref());
        let value = Float::with_val(bits, &factor * &l_sigma);
        let logderiv = -log_fpi
            - (digamma(&a) + digamma(&b)) / 2u32
            - Float::with_val(bits, &dl_sigma / &l_sigma);
        let deriv = Float::with_val(bits, &logderiv * &value);
        let err = qerr * factor.abs();
        Ok(LDerivResult {
            value,
            deriv,
            logderiv,
            err_estimate: err,
        })
    }
}
