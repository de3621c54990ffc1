//! Theta components of the weight 12, index 1 Jacobi cusp form, the
//! vector-valued input form `f = phi_{12,1} / Delta`, and its `j^t` multiples.
//!
//! `phi_{12,1}` is assembled from Jacobi–Eisenstein series of weights 4 and 6,
//! whose coefficients are Cohen numbers:
//! `e_k(N) = H(k-1, N) / zeta(3-2k)`, and
//! `phi_{12,1} = (E4^2 E_{4,1} - E6 E_{6,1}) / c` with `c` fixing `C12(3) = 1`.

use std::collections::BTreeMap;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::arith::{cohen_h, l_value_neg};
use crate::error::{Error, Result};
use crate::qseries::{build_delta, build_e4, build_e6, build_j, QSeries, QSeriesJson};
use crate::ratio::{fmt_rational, is_integer, parse_rational};

/// Reference values `C12(D)` the construction must reproduce.
pub const C12_REFERENCE: [(u64, i64); 11] = [
    (0, 0),
    (3, 1),
    (4, 10),
    (7, -88),
    (8, -132),
    (11, 1275),
    (12, 736),
    (15, -8040),
    (16, -2880),
    (19, 24035),
    (20, 13080),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiCuspCoefficients {
    /// `D -> C12(D)` for every `D < bound` (zeros included for `D = 1, 2 mod 4`).
    pub c12: BTreeMap<u64, Rational>,
    pub bound: u64,
}

impl JacobiCuspCoefficients {
    pub fn get(&self, d: u64) -> Option<&Rational> {
        self.c12.get(&d)
    }
}

/// `sum_{N >= 0, N = 0,3 mod 4} e_k(N) q^{N/4}` with exponents `< prec`.
fn eisenstein_theta(k: u32, prec: i64) -> QSeries {
    let scale = l_value_neg(2 * k - 2, 1)
        .expect("trivial character")
        .recip();
    let map = (0..4 * prec)
        .filter(|n| matches!(n % 4, 0 | 3))
        .map(|n| (n, cohen_h(k - 1, n as u64) * &scale))
        .collect();
    QSeries::from_units(4, 4 * prec, map)
}

/// All `C12(D)` with `D < 4 prec`, checked against the reference table.
pub fn jacobi_cusp_coefficients(prec: i64) -> Result<JacobiCuspCoefficients> {
    if prec < 1 {
        return Err(Error::Domain(format!("prec must be positive, got {prec}")));
    }
    let e4 = build_e4(prec)?;
    let e6 = build_e6(prec)?;
    let combo = e4
        .mul(&e4)
        .mul(&eisenstein_theta(4, prec))
        .sub(&e6.mul(&eisenstein_theta(6, prec)));
    let norm = combo.coeff_at(3, 4);
    if norm == 0 {
        return Err(Error::ConstructionMismatch {
            d: 3,
            expected: 1,
            computed: "0".into(),
        });
    }
    let norm = norm.recip();
    let bound = (4 * prec) as u64;
    let c12: BTreeMap<u64, Rational> = (0..bound)
        .map(|d| (d, combo.coeff_at(d as i64, 4) * &norm))
        .collect();
    for &(d, expected) in &C12_REFERENCE {
        if let Some(c) = c12.get(&d) {
            if *c != expected {
                return Err(Error::ConstructionMismatch {
                    d,
                    expected,
                    computed: fmt_rational(c),
                });
            }
        }
    }
    if let Some((d, c)) = c12.iter().find(|(_, c)| !is_integer(c)) {
        return Err(Error::ConstructionMismatch {
            d: *d,
            expected: 0,
            computed: format!("non-integral {}", fmt_rational(c)),
        });
    }
    Ok(JacobiCuspCoefficients { c12, bound })
}

/// `(h0, h1)` with `h_mu = sum_{D = -mu mod 4} C12(D) q^{D/4}`, exponents `< prec`.
pub fn phi12_theta_components(prec: i64) -> Result<(QSeries, QSeries)> {
    let table = jacobi_cusp_coefficients(prec)?;
    let component = |residue: u64| {
        let map = table
            .c12
            .iter()
            .filter(|(d, c)| *d % 4 == residue && **c != 0)
            .map(|(d, c)| (*d as i64, c.clone()))
            .collect();
        QSeries::from_units(4, 4 * prec, map)
    };
    Ok((component(0), component(3)))
}

// ---------------------------------------------------------------------------
// Vector-valued forms

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorValuedForm {
    f0: QSeries,
    f1: QSeries,
    weight: Rational,
    principal_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub coset: u8,
    pub series: QSeriesJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorValuedFormJson {
    pub weight: String,
    pub components: Vec<ComponentJson>,
}

fn coset_shift(mu: u8) -> Rational {
    if mu == 0 {
        Rational::new()
    } else {
        Rational::from((1, 4))
    }
}

fn check_component(mu: u8, s: &QSeries) -> Result<()> {
    if s.prec() <= 0 {
        return Err(Error::PrecisionExhausted(format!(
            "component {mu} known only below q^{}, principal part not covered",
            s.prec()
        )));
    }
    let shift = coset_shift(mu);
    for (e, c) in s.terms() {
        if !is_integer(&Rational::from(&e + &shift)) {
            return Err(Error::InvalidForm(format!(
                "component {mu} has exponent {e} outside its coset"
            )));
        }
        if e <= 0 && !is_integer(c) {
            return Err(Error::NonIntegralPrincipalPart {
                mu,
                exp: fmt_rational(&e),
                coeff: fmt_rational(c),
            });
        }
    }
    Ok(())
}

impl VectorValuedForm {
    /// Validates coset support, integrality of the principal part and that
    /// both components are known past the constant term.
    pub fn new(f0: QSeries, f1: QSeries, weight: Rational) -> Result<Self> {
        check_component(0, &f0)?;
        check_component(1, &f1)?;
        let lowest = [&f0, &f1]
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.lo())
            .min()
            .unwrap_or_default();
        let principal_bound = if lowest < 0 { -lowest } else { Rational::new() };
        Ok(VectorValuedForm {
            f0,
            f1,
            weight,
            principal_bound,
        })
    }

    pub fn f0(&self) -> &QSeries {
        &self.f0
    }

    pub fn f1(&self) -> &QSeries {
        &self.f1
    }

    pub fn component(&self, mu: u8) -> &QSeries {
        if mu == 0 {
            &self.f0
        } else {
            &self.f1
        }
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn principal_bound(&self) -> &Rational {
        &self.principal_bound
    }

    /// Common precision of the two components.
    pub fn prec(&self) -> Rational {
        self.f0.prec().min(self.f1.prec())
    }

    pub fn to_json(&self) -> VectorValuedFormJson {
        VectorValuedFormJson {
            weight: fmt_rational(&self.weight),
            components: vec![
                ComponentJson {
                    coset: 0,
                    series: self.f0.to_json(),
                },
                ComponentJson {
                    coset: 1,
                    series: self.f1.to_json(),
                },
            ],
        }
    }

    pub fn from_json(j: &VectorValuedFormJson) -> Result<Self> {
        let weight = parse_rational(&j.weight)?;
        let mut parts: [Option<QSeries>; 2] = [None, None];
        for c in &j.components {
            let slot = parts
                .get_mut(c.coset as usize)
                .ok_or_else(|| Error::InvalidForm(format!("unknown coset {}", c.coset)))?;
            if slot.is_some() {
                return Err(Error::InvalidForm(format!("coset {} given twice", c.coset)));
            }
            *slot = Some(QSeries::from_json(&c.series)?);
        }
        let [f0, f1] = parts;
        let missing = |mu| Error::InvalidForm(format!("missing component for coset {mu}"));
        Self::new(
            f0.ok_or_else(|| missing(0))?,
            f1.ok_or_else(|| missing(1))?,
            weight,
        )
    }
}

/// `f = (h0/Delta, h1/Delta)` with exponents `< prec`, weight `-1/2`.
pub fn build_vv_form(prec: i64) -> Result<VectorValuedForm> {
    if prec < 1 {
        return Err(Error::Domain(format!("prec must be positive, got {prec}")));
    }
    let (h0, h1) = phi12_theta_components(prec + 1)?;
    let delta_inv = build_delta(prec + 2)?.invert()?;
    let p = Rational::from(prec);
    VectorValuedForm::new(
        h0.mul(&delta_inv).truncate(&p)?,
        h1.mul(&delta_inv).truncate(&p)?,
        Rational::from((-1, 2)),
    )
}

/// `j^t f`. Each factor of `j` costs one unit of precision.
pub fn scale_by_j_power(f: &VectorValuedForm, t: u32) -> Result<VectorValuedForm> {
    if t == 0 {
        return Ok(f.clone());
    }
    let p = f.prec();
    let out_prec = Rational::from(&p - t);
    if out_prec <= 0 {
        return Err(Error::PrecisionExhausted(format!(
            "input known below q^{p}; j^{t} f would only be known below q^{out_prec}"
        )));
    }
    let pj = p.ceil().numer().to_i64().expect("small precision");
    let jt = build_j(pj)?.pow(t)?;
    let scale = |s: &QSeries| -> Result<QSeries> {
        let prod = jt.mul(s);
        if prod.prec() < out_prec {
            return Err(Error::PrecisionExhausted(format!(
                "j^{t} f component certified only below q^{}",
                prod.prec()
            )));
        }
        prod.truncate(&out_prec)
    };
    VectorValuedForm::new(scale(&f.f0)?, scale(&f.f1)?, f.weight.clone())
}

/// `j^t f` known to exponents `< prec` (the input is built `t` units deeper).
pub fn family_member(t: u32, prec: i64) -> Result<VectorValuedForm> {
    scale_by_j_power(&build_vv_form(prec + t as i64)?, t)
}
