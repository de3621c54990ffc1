//! Exact linear combinations of the transcendental constants that occur in
//! kappa values, plus a cached numeric evaluator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::error::Result;
use crate::lfun::{constants, dirichlet_l_deriv, zeta_logderiv, Constants, PrecisionConfig};
use crate::ratio::fmt_rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// `log p` for a prime `p`
    Log(u64),
    LogPi,
    EulerGamma,
    /// `zeta'(s)/zeta(s)` at `s = -1` or `-3`
    ZetaLogDeriv(i64),
    /// `L'(-1, chi_d) / L(-1, chi_d)` for `d > 1`
    LLogDeriv(i64),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Log(p) => write!(f, "log({p})"),
            Symbol::LogPi => write!(f, "log(pi)"),
            Symbol::EulerGamma => write!(f, "gamma"),
            Symbol::ZetaLogDeriv(s) => write!(f, "zeta'/zeta({s})"),
            Symbol::LLogDeriv(d) => write!(f, "L'/L(-1,chi_{d})"),
        }
    }
}

/// `constant + sum coeff * symbol`, with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Rational,
    terms: BTreeMap<Symbol, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFormJson {
    pub constant: String,
    pub terms: Vec<SymbolTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTermJson {
    pub symbol: String,
    pub coeff: String,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: Rational) -> Self {
        LinearForm {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(sym: Symbol) -> Self {
        let mut out = Self::zero();
        out.add_term(sym, Rational::from(1));
        out
    }

    /// `log n` expanded over the primes dividing `n`.
    pub fn log_int(n: u64) -> Self {
        let mut out = Self::zero();
        for (p, e) in factorize(n) {
            out.add_term(Symbol::Log(p), Rational::from(e));
        }
        out
    }

    /// `C = log 2 + (1/2) log pi + (1/2) gamma`.
    pub fn c() -> Self {
        let mut out = Self::zero();
        out.add_term(Symbol::Log(2), Rational::from(1));
        out.add_term(Symbol::LogPi, Rational::from((1, 2)));
        out.add_term(Symbol::EulerGamma, Rational::from((1, 2)));
        out
    }

    /// `C0 = log 2 + log pi - gamma`.
    pub fn c0() -> Self {
        let mut out = Self::zero();
        out.add_term(Symbol::Log(2), Rational::from(1));
        out.add_term(Symbol::LogPi, Rational::from(1));
        out.add_term(Symbol::EulerGamma, Rational::from(-1));
        out
    }

    pub fn add_term(&mut self, sym: Symbol, c: Rational) {
        let slot = self.terms.entry(sym.clone()).or_default();
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&sym);
        }
    }

    pub fn coeff(&self, sym: &Symbol) -> Rational {
        self.terms.get(sym).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    pub fn add(&self, other: &LinearForm) -> Self {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LinearForm) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if *k == 0 {
            return Self::zero();
        }
        LinearForm {
            constant: Rational::from(&self.constant * k),
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), Rational::from(c * k)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> LinearFormJson {
        LinearFormJson {
            constant: fmt_rational(&self.constant),
            terms: self
                .terms
                .iter()
                .map(|(s, c)| SymbolTermJson {
                    symbol: s.to_string(),
                    coeff: fmt_rational(c),
                })
                .collect(),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.constant != 0 || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        for (s, c) in &self.terms {
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mag == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{mag}*{s}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Numeric values of symbols at a fixed precision, computed on first use.
pub struct Evaluator {
    cfg: PrecisionConfig,
    consts: Constants,
    cache: Mutex<BTreeMap<Symbol, Float>>,
}

impl Evaluator {
    pub fn new(cfg: PrecisionConfig) -> Self {
        Evaluator {
            consts: constants(&cfg),
            cfg,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn cfg(&self) -> &PrecisionConfig {
        &self.cfg
    }

    pub fn constants(&self) -> &Constants {
        &self.consts
    }

    pub fn bits(&self) -> u32 {
        self.cfg.bits()
    }

    pub fn symbol_value(&self, sym: &Symbol) -> Result<Float> {
        if let Some(v) = self.cache.lock().expect("symbol cache").get(sym) {
            return Ok(v.clone());
        }
        let bits = self.bits();
        let v = match sym {
            Symbol::Log(p) => Float::with_val(bits, *p).ln(),
            Symbol::LogPi => self.consts.log_pi.clone(),
            Symbol::EulerGamma => self.consts.gamma.clone(),
            Symbol::ZetaLogDeriv(s) => zeta_logderiv(*s, &self.cfg)?,
            Symbol::LLogDeriv(d) => dirichlet_l_deriv(&Rational::from(-1), *d, &self.cfg)?.logderiv,
        };
        self.cache
            .lock()
            .expect("symbol cache")
            .insert(sym.clone(), v.clone());
        Ok(v)
    }

    pub fn eval(&self, form: &LinearForm) -> Result<Float> {
        let bits = self.bits();
        let mut acc = Float::with_val(bits, &form.constant);
        for (s, c) in form.terms() {
            acc += self.symbol_value(s)? * c;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;

    #[test]
    fn archimedean_constants_cancel() {
        // 10 C + 5 C0 = 15 log 2 + 10 log pi
        let lhs = LinearForm::c()
            .scale(&rat(10, 1))
            .add(&LinearForm::c0().scale(&rat(5, 1)));
        let mut rhs = LinearForm::zero();
        rhs.add_term(Symbol::Log(2), rat(15, 1));
        rhs.add_term(Symbol::LogPi, rat(10, 1));
        assert_eq!(lhs, rhs);
        // 2C - C0 = log 2 + 2 gamma
        let d = LinearForm::c().scale(&rat(2, 1)).sub(&LinearForm::c0());
        assert_eq!(d.coeff(&Symbol::Log(2)), 1);
        assert_eq!(d.coeff(&Symbol::EulerGamma), 2);
        assert_eq!(d.coeff(&Symbol::LogPi), 0);
    }

    #[test]
    fn log_of_integers_splits_over_primes() {
        let f = LinearForm::log_int(12);
        assert_eq!(f.coeff(&Symbol::Log(2)), 2);
        assert_eq!(f.coeff(&Symbol::Log(3)), 1);
        assert!(LinearForm::log_int(1).is_zero());
    }

    #[test]
    fn evaluation_matches_constants() {
        let ev = Evaluator::new(PrecisionConfig::default());
        let v = ev.eval(&LinearForm::c0()).unwrap();
        let diff = Float::with_val(ev.bits(), &v - &ev.constants().c0).abs();
        assert!(diff < ev.cfg().tol(0));
        let v = ev.eval(&LinearForm::c()).unwrap();
        let diff = Float::with_val(ev.bits(), &v - &ev.constants().c).abs();
        assert!(diff < ev.cfg().tol(0));
    }

    #[test]
    fn display() {
        let mut f = LinearForm::rational(rat(-4, 3));
        f.add_term(Symbol::ZetaLogDeriv(-3), rat(-2, 1));
        f.add_term(Symbol::Log(2), rat(3, 2));
        assert_eq!(f.to_string(), "-4/3 + 3/2*log(2) - 2*zeta'/zeta(-3)");
        assert_eq!(LinearForm::zero().to_string(), "0");
    }
}
