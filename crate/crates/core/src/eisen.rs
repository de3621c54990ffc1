//! Fourier data of the weight 5/2 Eisenstein series for the signature (3,2)
//! lattice: values `a_mu(m)`, degrees of `Z(m, mu)`, the limiting derivative
//! coefficients `kappa_mu(m)`, the finite-`v` coefficients `b_mu(m, v)`, and
//! archimedean Whittaker values for general `n`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::arith::{cohen_h, factorize, fund_disc_decompose, l_value_neg, LocalFactor};
use crate::error::{Error, Result};
use crate::lfun::PrecisionConfig;
use crate::quad::{exp_sinh, gauss_legendre, gl_panel};
use crate::ratio::{fmt_rational, is_integer};
use crate::symbolic::{Evaluator, LinearForm, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureContext {
    pub n: u32,
    pub ell: Rational,
    pub s0: Rational,
    pub weight_e: Rational,
    /// Known only where the Eisenstein data is explicit (`n = 3`).
    pub vol_x: Option<Rational>,
}

impl SignatureContext {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("signature (0,2) is degenerate".into()));
        }
        let half = Rational::from((n, 2));
        let vol_x = (n == 3)
            .then(|| l_value_neg(2, 1).expect("zeta(-1)") * l_value_neg(4, 1).expect("zeta(-3)"));
        Ok(SignatureContext {
            n,
            ell: Rational::from(&half - 1u32),
            s0: half.clone(),
            weight_e: half + 1u32,
            vol_x,
        })
    }

    /// The fully explicit `n = 3` case.
    pub fn siegel() -> Self {
        Self::new(3).expect("n = 3")
    }

    fn explicit(&self) -> Result<&Rational> {
        self.vol_x
            .as_ref()
            .ok_or(Error::UnsupportedSignature(self.n))
    }
}

fn check_mu(mu: u8) -> Result<()> {
    if mu > 1 {
        return Err(Error::Domain(format!(
            "coset index must be 0 or 1, got {mu}"
        )));
    }
    Ok(())
}

/// `4m` as an integer.
fn four_m(m: &Rational) -> Result<i64> {
    let x = Rational::from(m * 4u32);
    if !is_integer(&x) {
        return Err(Error::NonIntegral(format!("4m = {x}")));
    }
    x.numer()
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("4m = {x} out of range")))
}

/// Whether `m` lies in the support coset of `mu`: `4m = mu mod 4`.
pub fn in_coset(mu: u8, m: &Rational) -> Result<bool> {
    check_mu(mu)?;
    Ok(four_m(m)?.rem_euclid(4) == mu as i64)
}

/// `a_mu(m)`: `delta_{mu,0}` at `m = 0`, `120 H(2, 4m)` on the coset, else 0.
pub fn eis_value_coeff(ctx: &SignatureContext, mu: u8, m: &Rational) -> Result<Rational> {
    ctx.explicit()?;
    if *m < 0 {
        return Err(Error::Domain(format!("a_mu(m) needs m >= 0, got {m}")));
    }
    let n4 = four_m(m)?;
    check_mu(mu)?;
    if n4 == 0 {
        return Ok(Rational::from(if mu == 0 { 1 } else { 0 }));
    }
    if n4 % 4 != mu as i64 {
        return Ok(Rational::new());
    }
    Ok(cohen_h(2, n4 as u64) / l_value_neg(4, 1)?)
}

/// `deg Z(m, mu) = -(1/12) H(2, 4m)` on the coset, else 0.
pub fn degree_z(mu: u8, m: &Rational) -> Result<Rational> {
    if *m <= 0 {
        return Err(Error::Domain(format!("degree needs m > 0, got {m}")));
    }
    if !in_coset(mu, m)? {
        return Ok(Rational::new());
    }
    Ok(cohen_h(2, four_m(m)? as u64) * Rational::from((-1, 12)))
}

// ---------------------------------------------------------------------------
// kappa_mu(m)

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTerm {
    pub p: u64,
    pub k: u32,
    pub chi_p: i32,
    /// `log|n|_p = -k log p`, as the coefficient of `log p`
    pub log_abs_n: Rational,
    /// `b'_p(n,-1)/b_p(n,-1)` as the coefficient of `log p`
    pub b_logderiv: Rational,
}

impl PrimeTerm {
    /// Coefficient of `log p` in `log|n|_p - b'_p/b_p`.
    pub fn coeff(&self) -> Rational {
        Rational::from(&self.log_abs_n - &self.b_logderiv)
    }
}

/// The named blocks of the bracket for one `(mu, m)`, scaled by `prefactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaBreakdown {
    pub n: u64,
    pub d: i64,
    /// `120 H(2, 4m)`
    pub prefactor: Rational,
    /// `4/3 + 2 zeta'(-3)/zeta(-3) - C`
    pub constant_block: LinearForm,
    /// `-(1/2) log d`
    pub half_log_d: LinearForm,
    /// `-L'(-1, chi_d)/L(-1, chi_d)`
    pub l_term: LinearForm,
    pub primes: Vec<PrimeTerm>,
}

impl KappaBreakdown {
    pub fn prime_block(&self) -> LinearForm {
        let mut out = LinearForm::zero();
        for t in &self.primes {
            out.add_term(Symbol::Log(t.p), t.coeff());
        }
        out
    }

    pub fn bracket(&self) -> LinearForm {
        self.constant_block
            .add(&self.half_log_d)
            .add(&self.l_term)
            .add(&self.prime_block())
    }

    pub fn total(&self) -> LinearForm {
        self.bracket().scale(&self.prefactor)
    }
}

#[derive(Clone, Debug)]
pub struct KappaTerm {
    pub mu: u8,
    pub m: Rational,
    pub symbolic: LinearForm,
    pub numeric: Float,
    /// Present for `m > 0` on the coset.
    pub breakdown: Option<KappaBreakdown>,
}

/// `4/3 + 2 zeta'(-3)/zeta(-3) - C`.
pub fn kappa_constant_block() -> LinearForm {
    let mut out = LinearForm::rational(Rational::from((4, 3)));
    out.add_term(Symbol::ZetaLogDeriv(-3), Rational::from(2));
    out.sub(&LinearForm::c())
}

/// `L'(-1, chi_d)/L(-1, chi_d)`, with `d = 1` meaning `zeta`.
pub fn l_logderiv_symbol(d: i64) -> Symbol {
    if d == 1 {
        Symbol::ZetaLogDeriv(-1)
    } else {
        Symbol::LLogDeriv(d)
    }
}

/// Exact symbolic `kappa_mu(m)` and its breakdown.
pub fn kappa_symbolic(mu: u8, m: &Rational) -> Result<(LinearForm, Option<KappaBreakdown>)> {
    if *m < 0 {
        return Err(Error::Domain(format!("kappa_mu(m) needs m >= 0, got {m}")));
    }
    if !in_coset(mu, m)? {
        return Ok((LinearForm::zero(), None));
    }
    if *m == 0 {
        return Ok((LinearForm::c0().scale(&Rational::from((1, 2))), None));
    }
    let dec = fund_disc_decompose(m)?;
    let prefactor = cohen_h(2, four_m(m)? as u64) / l_value_neg(4, 1)?;
    let primes = factorize(dec.n)
        .into_iter()
        .map(|(p, k)| {
            let lf = LocalFactor::new(p, dec.n, dec.d)?;
            Ok(PrimeTerm {
                p,
                k,
                chi_p: lf.chi_p,
                log_abs_n: Rational::from(-(k as i64)),
                b_logderiv: lf.logderiv_coeff(-1)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let breakdown = KappaBreakdown {
        n: dec.n,
        d: dec.d,
        prefactor,
        constant_block: kappa_constant_block(),
        half_log_d: LinearForm::log_int(dec.d.unsigned_abs()).scale(&Rational::from((-1, 2))),
        l_term: LinearForm::symbol(l_logderiv_symbol(dec.d)).scale(&Rational::from(-1)),
        primes,
    };
    Ok((breakdown.total(), Some(breakdown)))
}

pub fn kappa_mu(mu: u8, m: &Rational, ev: &Evaluator) -> Result<KappaTerm> {
    let (symbolic, breakdown) = kappa_symbolic(mu, m)?;
    let numeric = ev.eval(&symbolic)?;
    Ok(KappaTerm {
        mu,
        m: m.clone(),
        symbolic,
        numeric,
        breakdown,
    })
}

// ---------------------------------------------------------------------------
// J-integral and b_mu(m, v)

/// `((1+r)^{3/2} - 1) / r` without cancellation near 0.
fn j_kernel(r: &Float) -> Float {
    let bits = r.prec();
    if r.is_zero() {
        return Float::with_val(bits, 1.5);
    }
    let l = Float::with_val(bits, r.ln_1p_ref()) * 1.5f64;
    l.exp_m1() / r
}

fn check_t(t: &Float) -> Result<()> {
    if !t.is_finite() || *t <= 0 {
        return Err(Error::NonPositiveT(t.to_string()));
    }
    Ok(())
}

/// `J(3/2, t) = int_0^inf e^{-tr} ((1+r)^{3/2} - 1)/r dr`, double-exponential quadrature.
pub fn j_integral(t: &Float, cfg: &PrecisionConfig) -> Result<Float> {
    check_t(t)?;
    let bits = cfg.bits();
    let t = Float::with_val(bits, t);
    let g = |r: &Float| {
        let e = (-Float::with_val(bits, &t * r)).exp();
        if e.is_zero() {
            return e;
        }
        e * j_kernel(r)
    };
    Ok(exp_sinh(g, bits, &cfg.tol(-15)).value)
}

/// The same integral by composite Gauss–Legendre panels, for cross-checks.
///
/// Panels stay within half their distance to the branch point `r = -1` and
/// within `4/t` in width; the range is cut where `e^{-tr} r^{1/2}` drops below
/// the target.
pub fn j_integral_gl(t: &Float, cfg: &PrecisionConfig) -> Result<Float> {
    check_t(t)?;
    let bits = cfg.bits();
    let t = Float::with_val(bits, t);
    let nodes = (0.7 * (cfg.digits + 20) as f64) as usize + 10;
    let rule = gauss_legendre(nodes, bits);
    let g = |r: &Float| (-Float::with_val(bits, &t * r)).exp() * j_kernel(r);
    let tf = t.to_f64();
    let target = (cfg.digits + 20) as f64 * std::f64::consts::LN_10;
    let mut cut = target / tf;
    while tf * cut - 0.5 * cut.max(1.0).ln() < target {
        cut *= 1.1;
    }
    let mut acc = Float::new(bits);
    let mut a = 0.0f64;
    while a < cut {
        let width = if a == 0.0 {
            1.0
        } else {
            ((1.0 + a) / 2.0).min(4.0 / tf)
        };
        let b = (a + width).min(cut);
        acc += gl_panel(
            &g,
            &Float::with_val(bits, a),
            &Float::with_val(bits, b),
            &rule,
        );
        a = b;
    }
    Ok(acc)
}

/// `int_1^inf e^{-a r} r^{-w} dr` for `a > 0`.
pub fn tail_integral(a: &Float, w: &Float, cfg: &PrecisionConfig) -> Result<Float> {
    check_t(a)?;
    let bits = cfg.bits();
    let g = |x: &Float| {
        let r = Float::with_val(bits, x + 1u32);
        let e = (-Float::with_val(bits, a * &r)).exp();
        if e.is_zero() {
            return e;
        }
        let p = (-Float::with_val(bits, w * r.ln())).exp();
        e * p
    };
    Ok(exp_sinh(g, bits, &cfg.tol(-15)).value)
}

/// `b_mu(m, v)`. For `m < 0` the Dirichlet value `L(2, chi_m)` must be supplied.
pub fn b_mu(mu: u8, m: &Rational, v: &Float, l2: Option<&Float>, ev: &Evaluator) -> Result<Float> {
    if !v.is_finite() || *v <= 0 {
        return Err(Error::Domain(format!("v must be positive, got {v}")));
    }
    let bits = ev.bits();
    let k = ev.constants();
    if !in_coset(mu, m)? {
        return Ok(Float::new(bits));
    }
    if *m == 0 {
        // (1/2) log v - (pi/6)(zeta(3)/zeta(4)) v^{-3/2}
        let half_log = Float::with_val(bits, v.ln_ref()) / 2u32;
        let corr = Float::with_val(bits, &k.pi * &k.zeta3) / &k.zeta4 / 6u32
            * Float::with_val(bits, v.pow(-1.5f64));
        return Ok(half_log - corr);
    }
    if *m > 0 {
        let kappa = kappa_mu(mu, m, ev)?;
        let t = Float::with_val(bits, &k.pi * 4u32) * Float::with_val(bits, m) * v;
        let j = j_integral(&t, ev.cfg())?;
        let pre = kappa.breakdown.expect("on coset").prefactor;
        return Ok(kappa.numeric + j * pre / 2u32);
    }
    let l2 = l2.ok_or(Error::MissingLFactor)?;
    let abs_m = Float::with_val(bits, Rational::from(-m));
    let a = Float::with_val(bits, &k.pi * 4u32) * abs_m * v;
    let integral = tail_integral(&a, &Float::with_val(bits, 1.5), ev.cfg())?;
    let pi_v = Float::with_val(bits, &k.pi * v);
    let pre = Float::with_val(bits, k.pi.square_ref()) / 3u32 * l2 / &k.zeta4;
    Ok(-(pre * pi_v.pow(-1.5f64) * integral))
}

// ---------------------------------------------------------------------------
// Archimedean Whittaker values

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(bits: u32) -> Self {
        Complex {
            re: Float::new(bits),
            im: Float::new(bits),
        }
    }

    pub fn polar(r: &Float, theta: &Float) -> Self {
        let bits = r.prec();
        let (s, c) = Float::with_val(bits, theta).sin_cos(Float::new(bits));
        Complex {
            re: c * r,
            im: s * r,
        }
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.re.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let bits = self.re.prec();
        Complex {
            re: Float::with_val(bits, &self.re * &o.re) - Float::with_val(bits, &self.im * &o.im),
            im: Float::with_val(bits, &self.re * &o.im) + Float::with_val(bits, &self.im * &o.re),
        }
    }

    pub fn scale(&self, k: &Float) -> Complex {
        Complex {
            re: Float::with_val(self.re.prec(), &self.re * k),
            im: Float::with_val(self.im.prec(), &self.im * k),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WhittakerValue {
    /// `W_{m,inf}(tau, n/2; n/2 + 1)`
    pub value: Complex,
    /// `s`-derivative at `s0 = n/2`, where a closed form is available (`m <= 0`).
    pub deriv: Option<Complex>,
}

/// `q^m = e^{2 pi i m tau}` at `tau = u + iv`.
fn q_power(m: &Float, u: &Float, v: &Float, pi: &Float) -> Complex {
    let bits = m.prec();
    let two_pi_m = Float::with_val(bits, pi * 2u32) * m;
    let r = (-Float::with_val(bits, &two_pi_m * v)).exp();
    Complex::polar(&r, &Float::with_val(bits, &two_pi_m * u))
}

pub fn whittaker_arch(
    ctx: &SignatureContext,
    m: &Rational,
    u: &Float,
    v: &Float,
    cfg: &PrecisionConfig,
) -> Result<WhittakerValue> {
    if !v.is_finite() || *v <= 0 {
        return Err(Error::Domain(format!("v must be positive, got {v}")));
    }
    let bits = cfg.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let half_n = Float::with_val(bits, &ctx.s0);
    let w = Float::with_val(bits, &ctx.weight_e);
    let u = Float::with_val(bits, u);
    let v = Float::with_val(bits, v);
    let mf = Float::with_val(bits, m);
    let half_pi_w = Float::with_val(bits, &pi * &w) / 2u32;

    if *m > 0 {
        // (-2i)^w / Gamma(w) * m^{n/2} q^m, principal branch
        let modulus = Float::with_val(bits, 2).pow(&w) / Float::with_val(bits, w.gamma_ref())
            * Float::with_val(bits, mf.clone().pow(&half_n));
        let phase = Complex::polar(&modulus, &-half_pi_w);
        return Ok(WhittakerValue {
            value: phase.mul(&q_power(&mf, &u, &v, &pi)),
            deriv: None,
        });
    }
    let two_pow = Float::with_val(bits, 2).pow(&-Float::with_val(bits, &half_n));
    let v_pow = v.clone().pow(-Float::with_val(bits, &half_n));
    if *m < 0 {
        // pi (-i)^{-w} 2^{-n/2} q^m v^{-n/2} int_1^inf e^{-4 pi |m| v r} r^{-w} dr
        let abs_m = Float::with_val(bits, -&mf);
        let a = Float::with_val(bits, &pi * 4u32) * &abs_m * &v;
        let integral = tail_integral(&a, &w, cfg)?;
        let modulus = Float::with_val(bits, &pi * &two_pow) * &v_pow * integral;
        let phase = Complex::polar(&modulus, &half_pi_w);
        return Ok(WhittakerValue {
            value: Complex::zero(bits),
            deriv: Some(phase.mul(&q_power(&mf, &u, &v, &pi))),
        });
    }
    // m = 0: the factor (s - n/2) kills the value at s0
    let gamma_ratio =
        Float::with_val(bits, half_n.gamma_ref()) / Float::with_val(bits, w.gamma_ref());
    let modulus = Float::with_val(bits, &pi * &two_pow) * &v_pow * gamma_ratio;
    Ok(WhittakerValue {
        value: Complex::zero(bits),
        deriv: Some(Complex::polar(&modulus, &-half_pi_w)),
    })
}

/// `W_{0,inf}(tau, s; l + 2)` at real `s`.
pub fn w0_arch(ctx: &SignatureContext, s: &Float, v: &Float, cfg: &PrecisionConfig) -> Complex {
    let bits = cfg.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let half_n = Float::with_val(bits, &ctx.s0);
    let w = Float::with_val(bits, &ctx.weight_e);
    let s = Float::with_val(bits, s);
    let expo = -Float::with_val(bits, &s + &half_n) / 2u32;
    let a = (Float::with_val(bits, &s + &half_n) + 2u32) / 2u32;
    let b = (Float::with_val(bits, &s - &half_n) + 2u32) / 2u32;
    let modulus = Float::with_val(bits, &pi * 2u32)
        * Float::with_val(bits, v).pow(&expo)
        * Float::with_val(bits, 2).pow(-Float::with_val(bits, &s))
        * Float::with_val(bits, s.gamma_ref())
        * (Float::with_val(bits, &s - &half_n) / 2u32)
        / Float::with_val(bits, a.gamma_ref())
        / Float::with_val(bits, b.gamma_ref());
    let half_pi_w = Float::with_val(bits, &pi * &w) / 2u32;
    Complex::polar(&modulus, &-half_pi_w)
}

// ---------------------------------------------------------------------------
// Serialization helpers

#[derive(Clone, Debug, Serialize)]
pub struct PrimeTermJson {
    pub p: u64,
    pub k: u32,
    pub chi_p: i32,
    pub log_abs_n: String,
    pub b_logderiv: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaBreakdownJson {
    pub n: u64,
    pub d: i64,
    pub prefactor: String,
    pub constant_block: crate::symbolic::LinearFormJson,
    pub half_log_d: crate::symbolic::LinearFormJson,
    pub l_term: crate::symbolic::LinearFormJson,
    pub primes: Vec<PrimeTermJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaTermJson {
    pub mu: u8,
    pub m: String,
    pub numeric: String,
    pub symbolic: crate::symbolic::LinearFormJson,
    pub symbolic_text: String,
    pub breakdown: Option<KappaBreakdownJson>,
}

impl KappaTerm {
    pub fn to_json(&self, digits: usize) -> KappaTermJson {
        KappaTermJson {
            mu: self.mu,
            m: fmt_rational(&self.m),
            numeric: crate::ratio::fmt_float(&self.numeric, digits),
            symbolic: self.symbolic.to_json(),
            symbolic_text: self.symbolic.to_string(),
            breakdown: self.breakdown.as_ref().map(|b| KappaBreakdownJson {
                n: b.n,
                d: b.d,
                prefactor: fmt_rational(&b.prefactor),
                constant_block: b.constant_block.to_json(),
                half_log_d: b.half_log_d.to_json(),
                l_term: b.l_term.to_json(),
                primes: b
                    .primes
                    .iter()
                    .map(|t| PrimeTermJson {
                        p: t.p,
                        k: t.k,
                        chi_p: t.chi_p,
                        log_abs_n: fmt_rational(&t.log_abs_n),
                        b_logderiv: fmt_rational(&t.b_logderiv),
                    })
                    .collect(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;

    fn ev() -> Evaluator {
        Evaluator::new(PrecisionConfig::default())
    }

    #[test]
    fn context_for_signature_three() {
        let c = SignatureContext::siegel();
        assert_eq!(c.ell, rat(1, 2));
        assert_eq!(c.s0, rat(3, 2));
        assert_eq!(c.weight_e, rat(5, 2));
        assert_eq!(c.vol_x, Some(rat(-1, 1440)));
        assert_eq!(c.s0, Rational::from(&c.ell + 1u32));
        let c5 = SignatureContext::new(5).unwrap();
        assert_eq!(
            eis_value_coeff(&c5, 0, &rat(1, 1)),
            Err(Error::UnsupportedSignature(5))
        );
    }

    #[test]
    fn eisenstein_values() {
        let c = SignatureContext::siegel();
        assert_eq!(eis_value_coeff(&c, 0, &rat(0, 1)).unwrap(), 1);
        assert_eq!(eis_value_coeff(&c, 1, &rat(0, 1)).unwrap(), 0);
        assert_eq!(eis_value_coeff(&c, 0, &rat(1, 1)).unwrap(), -70);
        assert_eq!(eis_value_coeff(&c, 1, &rat(1, 4)).unwrap(), -10);
        assert_eq!(eis_value_coeff(&c, 0, &rat(1, 4)).unwrap(), 0);
        assert!(matches!(
            eis_value_coeff(&c, 0, &rat(1, 3)),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_z(0, &rat(1, 1)).unwrap(), rat(7, 144));
        assert_eq!(degree_z(1, &rat(1, 4)).unwrap(), rat(1, 144));
        assert_eq!(degree_z(1, &rat(1, 2)).unwrap(), 0);
        assert_eq!(degree_z(0, &rat(1, 2)).unwrap(), 0);
        let c = SignatureContext::siegel();
        let vol = c.vol_x.clone().unwrap();
        for k in 1..=100i64 {
            let m = rat(k, 4);
            for mu in 0..2u8 {
                let a = eis_value_coeff(&c, mu, &m).unwrap();
                assert_eq!(degree_z(mu, &m).unwrap(), Rational::from(&vol * &a));
                if mu == 0 && k % 4 == 0 {
                    assert!(degree_z(mu, &m).unwrap() > 0);
                }
            }
        }
    }

    #[test]
    fn kappa_quarter_has_no_prime_terms() {
        let (form, bd) = kappa_symbolic(1, &rat(1, 4)).unwrap();
        let bd = bd.unwrap();
        assert_eq!((bd.n, bd.d), (1, 1));
        assert!(bd.primes.is_empty());
        // -10 [4/3 + 2 Z(-3) - Z(-1) - C]
        let mut want = kappa_constant_block();
        want.add_term(Symbol::ZetaLogDeriv(-1), rat(-1, 1));
        assert_eq!(form, want.scale(&rat(-10, 1)));
    }

    #[test]
    fn kappa_at_one_uses_exact_local_derivative() {
        let (_, bd) = kappa_symbolic(0, &rat(1, 1)).unwrap();
        let bd = bd.unwrap();
        assert_eq!((bd.n, bd.d), (2, 1));
        assert_eq!(bd.prefactor, -70);
        assert_eq!(bd.primes.len(), 1);
        let t = &bd.primes[0];
        assert_eq!((t.p, t.k, t.chi_p), (2, 1, 1));
        assert_eq!(t.log_abs_n, -1);
        assert_eq!(t.b_logderiv, -2);
        assert_eq!(t.coeff(), 1);
    }

    #[test]
    fn kappa_special_values() {
        let e = ev();
        let k0 = kappa_mu(0, &rat(0, 1), &e).unwrap();
        let half_c0 = Float::with_val(e.bits(), &e.constants().c0) / 2u32;
        assert!(Float::with_val(e.bits(), &k0.numeric - &half_c0).abs() < e.cfg().tol(5));
        let z = kappa_mu(0, &rat(1, 2), &e).unwrap();
        assert!(z.numeric.is_zero() && z.symbolic.is_zero());
        assert!(kappa_mu(1, &rat(0, 1), &e).unwrap().symbolic.is_zero());
    }

    #[test]
    fn breakdown_recombines() {
        let e = ev();
        for (mu, m) in [
            (1u8, rat(1, 4)),
            (0, rat(1, 1)),
            (1, rat(5, 4)),
            (0, rat(2, 1)),
            (1, rat(9, 4)),
        ] {
            let k = kappa_mu(mu, &m, &e).unwrap();
            let bd = k.breakdown.clone().unwrap();
            let parts = [&bd.constant_block, &bd.half_log_d, &bd.l_term]
                .iter()
                .map(|f| e.eval(f).unwrap())
                .fold(Float::new(e.bits()), |a, b| a + b)
                + e.eval(&bd.prime_block()).unwrap();
            let total = parts * &bd.prefactor;
            assert!(Float::with_val(e.bits(), &total - &k.numeric).abs() < e.cfg().tol(12));
        }
    }

    #[test]
    fn coset_vanishing() {
        let c = SignatureContext::siegel();
        for k in 0..=100i64 {
            let m = rat(k, 4);
            for mu in 0..2u8 {
                if k % 4 != mu as i64 {
                    assert_eq!(eis_value_coeff(&c, mu, &m).unwrap(), 0);
                    assert!(kappa_symbolic(mu, &m).unwrap().0.is_zero());
                }
            }
        }
    }

    #[test]
    fn j_integral_behaviour() {
        let cfg = PrecisionConfig::default();
        let b = cfg.bits();
        let j = |t: f64| j_integral(&Float::with_val(b, t), &cfg).unwrap();
        let (j1, j2, j4) = (j(1.0), j(2.0), j(4.0));
        assert!(j1 > j2 && j2 > j4);
        // algebraic decay: t J(t) -> 3/2
        let big = j(1e4) * 1e4f64;
        assert!((big.to_f64() - 1.5).abs() < 1e-3);
        let gl = j_integral_gl(&Float::with_val(b, 1), &cfg).unwrap();
        assert!(Float::with_val(b, &gl - &j1).abs() < 1e-25);
        assert!(matches!(
            j_integral(&Float::with_val(b, 0), &cfg),
            Err(Error::NonPositiveT(_))
        ));
        assert!(matches!(
            j_integral(&Float::with_val(b, -1), &cfg),
            Err(Error::NonPositiveT(_))
        ));
    }

    #[test]
    fn tail_integral_closed_form() {
        // int_1^inf e^{-ar} r^{-3/2} dr = 2 e^{-a} - 2 sqrt(pi a) erfc(sqrt a)
        let cfg = PrecisionConfig::default();
        let b = cfg.bits();
        for a in [0.5f64, 3.0, 12.566] {
            let af = Float::with_val(b, a);
            let num = tail_integral(&af, &Float::with_val(b, 1.5), &cfg).unwrap();
            let sa = Float::with_val(b, af.sqrt_ref());
            let pi = Float::with_val(b, Constant::Pi);
            let closed = Float::with_val(b, -&af).exp() * 2u32
                - Float::with_val(b, &pi * &af).sqrt() * 2u32 * sa.erfc();
            let rel = Float::with_val(b, &num - &closed).abs() / closed.abs();
            assert!(rel < cfg.tol(10), "a={a}");
        }
    }

    #[test]
    fn b_mu_limits() {
        let e = ev();
        let b = e.bits();
        let k = e.constants();
        // constant term
        let v = Float::with_val(b, 100);
        let b0 = b_mu(0, &rat(0, 1), &v, None, &e).unwrap();
        let lhs = b0 - Float::with_val(b, v.ln_ref()) / 2u32;
        let want =
            -(Float::with_val(b, &k.pi * &k.zeta3) / &k.zeta4 / 6u32) * v.clone().pow(-1.5f64);
        let rel = Float::with_val(b, &lhs - &want).abs() / Float::with_val(b, want.abs_ref());
        assert!(rel < 1e-8);
        let v4 = Float::with_val(b, 1e4);
        let gap =
            b_mu(0, &rat(0, 1), &v4, None, &e).unwrap() - Float::with_val(b, v4.ln_ref()) / 2u32;
        assert!(gap.abs() < 1e-5);
        assert!(b_mu(1, &rat(0, 1), &v, None, &e).unwrap().is_zero());
        // m > 0: the J term is 60 H(2,4m) J(4 pi m v), negative and shrinking like 1/v
        let m = rat(1, 4);
        let kappa = kappa_mu(1, &m, &e).unwrap().numeric;
        let mut prev: Option<Float> = None;
        for vv in [1.0f64, 10.0, 50.0, 1000.0] {
            let diff = b_mu(1, &m, &Float::with_val(b, vv), None, &e).unwrap() - &kappa;
            assert!(diff < 0);
            if let Some(p) = prev {
                assert!(diff.clone().abs() < p);
            }
            prev = Some(diff.abs());
        }
        // m < 0
        assert_eq!(
            b_mu(1, &rat(-3, 4), &v, None, &e).unwrap_err(),
            Error::MissingLFactor
        );
        let one = Float::with_val(b, 1);
        let vals: Vec<Float> = [1.0f64, 2.0, 4.0]
            .iter()
            .map(|&vv| b_mu(0, &rat(-1, 1), &Float::with_val(b, vv), Some(&one), &e).unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[0] < 0 && w[1] < 0);
        }
        let r1 = Float::with_val(b, &vals[1] / &vals[0]);
        let r2 = Float::with_val(b, &vals[2] / &vals[1]);
        let four_pi = Float::with_val(b, &k.pi * 4u32);
        assert!(r1 < (-four_pi.clone()).exp());
        assert!(r2 < (-(four_pi * 2u32)).exp());
    }

    #[test]
    fn whittaker_positive_m() {
        let ctx = SignatureContext::siegel();
        let cfg = PrecisionConfig::default();
        let b = cfg.bits();
        let (u, v) = (Float::new(b), Float::with_val(b, 1));
        let w1 = whittaker_arch(&ctx, &rat(1, 1), &u, &v, &cfg).unwrap();
        let pi = Float::with_val(b, Constant::Pi);
        let want = Float::with_val(b, 2).pow(2.5f64) / Float::with_val(b, 2.5f64).gamma()
            * (-Float::with_val(b, &pi * 2u32)).exp();
        assert!(Float::with_val(b, w1.value.abs() - &want).abs() < cfg.tol(5));
        let w4 = whittaker_arch(&ctx, &rat(4, 1), &u, &v, &cfg).unwrap();
        let ratio = w4.value.abs() / w1.value.abs();
        let want = Float::with_val(b, 8) * (-Float::with_val(b, &pi * 6u32)).exp();
        assert!(Float::with_val(b, &ratio - &want).abs() < Float::with_val(b, &want * cfg.tol(5)));
        // value / q^m is independent of tau
        for (uu, vv) in [(0.3f64, 0.7f64), (-1.2, 2.0)] {
            let (uu, vv) = (Float::with_val(b, uu), Float::with_val(b, vv));
            let w = whittaker_arch(&ctx, &rat(3, 4), &uu, &vv, &cfg).unwrap();
            let q = q_power(&Float::with_val(b, 0.75), &uu, &vv, &pi);
            let base = whittaker_arch(&ctx, &rat(3, 4), &u, &v, &cfg).unwrap();
            let q0 = q_power(&Float::with_val(b, 0.75), &u, &v, &pi);
            let c1 = w.value.abs() / q.abs();
            let c0 = base.value.abs() / q0.abs();
            assert!(Float::with_val(b, &c1 - &c0).abs() < cfg.tol(5));
            let dphase =
                Float::with_val(b, w.value.arg() - q.arg()) - (base.value.arg() - q0.arg());
            let tau = Float::with_val(b, &pi * 2u32);
            let wrapped = Float::with_val(b, dphase.remainder_ref(&tau));
            assert!(wrapped.abs() < cfg.tol(5));
        }
    }

    #[test]
    fn whittaker_nonpositive_m() {
        let ctx = SignatureContext::siegel();
        let cfg = PrecisionConfig::default();
        let b = cfg.bits();
        let (u, v) = (Float::with_val(b, 0.1), Float::with_val(b, 1.5));
        let neg = whittaker_arch(&ctx, &rat(-1, 4), &u, &v, &cfg).unwrap();
        assert!(neg.value.abs().is_zero());
        assert!(neg.deriv.unwrap().abs() > 0);
        // m = 0: the closed-form derivative matches a central difference of W_0(s)
        let zero = whittaker_arch(&ctx, &rat(0, 1), &u, &v, &cfg).unwrap();
        assert!(zero.value.abs().is_zero());
        let s0 = Float::with_val(b, 1.5);
        assert!(w0_arch(&ctx, &s0, &v, &cfg).abs() < cfg.tol(5));
        let h = Float::with_val(b, 1e-20);
        let hi = w0_arch(&ctx, &Float::with_val(b, &s0 + &h), &v, &cfg);
        let lo = w0_arch(&ctx, &Float::with_val(b, &s0 - &h), &v, &cfg);
        let d = zero.deriv.unwrap();
        let fd_re = Float::with_val(b, &hi.re - &lo.re) / Float::with_val(b, &h * 2u32);
        let fd_im = Float::with_val(b, &hi.im - &lo.im) / Float::with_val(b, &h * 2u32);
        assert!(Float::with_val(b, &fd_re - &d.re).abs() < 1e-30);
        assert!(Float::with_val(b, &fd_im - &d.im).abs() < 1e-30);
        // general n is accepted
        let c7 = SignatureContext::new(7).unwrap();
        assert!(whittaker_arch(&c7, &rat(1, 1), &u, &v, &cfg).is_ok());
    }
}
