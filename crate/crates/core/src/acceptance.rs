//! Self-checks against the published tables and identities. Each criterion
//! reports pass/fail with a one-line detail; nothing here panics on failure.

use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use crate::arith::{
    cohen_h, cohen_h_euler, is_fundamental, kronecker_chi, l_value_neg, local_b_logderiv,
    logderiv_closed_form, LocalFactor,
};
use crate::borcherds::{
    degree_identity_check, extract_principal_part, kappa_psi, PRINTED_B2_LOGDERIV,
};
use crate::eisen::{b_mu, degree_z, eis_value_coeff, in_coset, kappa_mu, SignatureContext};
use crate::error::Result;
use crate::jacobi::{build_vv_form, family_member, jacobi_cusp_coefficients};
use crate::lfun::{dirichlet_l_deriv, oracle::dirichlet_l_deriv_fe, PrecisionConfig};
use crate::qseries::QSeries;
use crate::ratio::rat;
use crate::symbolic::{Evaluator, LinearForm, Symbol};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

pub const NAMES: [&str; 12] = [
    "cohen table",
    "finite sum vs euler product",
    "jacobi cusp form table",
    "input form coefficients",
    "j-multiple principal parts",
    "weight/degree identity",
    "volume",
    "local log-derivative at 2",
    "dirichlet L-values",
    "kappa closed form for f5",
    "laurent coefficient asymptotics",
    "property suites",
];

/// Runs criterion `id` (1 to 12).
pub fn run(id: u8, ev: &Evaluator) -> Outcome {
    let start = Instant::now();
    let res = match id {
        1 => cohen_table(),
        2 => euler_product(),
        3 => jacobi_table(),
        4 => input_forms(),
        5 => j_multiples(),
        6 => degree_identity(),
        7 => volume(),
        8 => local_derivative(ev),
        9 => l_values(ev.cfg()),
        10 => kappa_closed_form(ev),
        11 => asymptotics(ev),
        12 => properties(ev),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (pass, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        pass,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all(ev: &Evaluator) -> Vec<Outcome> {
    (1..=12).map(|id| run(id, ev)).collect()
}

type Check = Result<(bool, String)>;

fn cohen_table() -> Check {
    let ns = [0u64, 1, 4, 5, 8, 9, 12, 13, 16, 17, 20];
    let want = [-1i64, 10, 70, 48, 120, 250, 240, 240, 550, 480, 528];
    let got: Vec<Rational> = ns.iter().map(|&n| cohen_h(2, n) * -120).collect();
    let bad: Vec<String> = ns
        .iter()
        .zip(&want)
        .zip(&got)
        .filter(|((_, w), g)| **g != **w)
        .map(|((n, w), g)| format!("N={n}: {g} != {w}"))
        .collect();
    let row: Vec<String> = got.iter().map(|g| g.to_string()).collect();
    Ok((
        bad.is_empty(),
        format!("-120 H(2,N) = [{}] {}", row.join(", "), bad.join("; ")),
    ))
}

fn euler_product() -> Check {
    let mut checked = 0;
    for n in (0..=400u64).filter(|n| matches!(n % 4, 0 | 1)) {
        let a = cohen_h(2, n);
        let b = cohen_h_euler(2, n);
        if a != b {
            return Ok((false, format!("N={n}: sum {a} != product {b}")));
        }
        checked += 1;
    }
    Ok((true, format!("{checked} admissible N <= 400 agree exactly")))
}

fn jacobi_table() -> Check {
    let want: [(u64, i64); 11] = [
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
    let t = jacobi_cusp_coefficients(6)?;
    let bad: Vec<String> = want
        .iter()
        .filter(|(d, c)| t.get(*d).map(|v| *v != *c).unwrap_or(true))
        .map(|(d, c)| {
            format!(
                "C12({d}) = {:?}, want {c}",
                t.get(*d).map(|v| v.to_string())
            )
        })
        .collect();
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            "all 11 coefficients reproduced".into()
        } else {
            bad.join("; ")
        },
    ))
}

fn series(den: u64, prec: (i64, i64), terms: &[(i64, i64, i64)]) -> Result<QSeries> {
    QSeries::new(
        den,
        &rat(prec.0, prec.1),
        terms.iter().map(|&(n, d, c)| (rat(n, d), rat(c, 1))),
    )
}

fn input_forms() -> Check {
    let f = build_vv_form(3)?;
    let f0 = series(1, (3, 1), &[(0, 1, 10), (1, 1, 108), (2, 1, 808)])?;
    let f1 = series(4, (11, 4), &[(-1, 4, 1), (3, 4, -64), (7, 4, -513)])?;
    let g0 = f.f0().truncate(&rat(3, 1))?;
    let g1 = f.f1().truncate(&rat(11, 4))?;
    let pass = g0 == f0 && g1 == f1;
    Ok((pass, format!("f0 = {} ; f1 = {}", g0, g1)))
}

fn pp_matches(t: u32, want: &[(i64, i64, u8, i64)]) -> Result<(bool, String)> {
    let pp = extract_principal_part(&family_member(t, 2)?)?;
    let mut bad = Vec::new();
    for &(n, d, mu, c) in want {
        let got = pp.get(&rat(n, d), mu);
        if got != c {
            bad.push(format!("t={t} c_{mu}(-{n}/{d}) = {got}, want {c}"));
        }
    }
    if pp.len() != want.len() {
        bad.push(format!(
            "t={t}: {} principal terms, want {}",
            pp.len(),
            want.len()
        ));
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn j_multiples() -> Check {
    let (p1, d1) = pp_matches(
        1,
        &[(0, 1, 0, 7548), (1, 1, 0, 10), (5, 4, 1, 1), (1, 4, 1, 680)],
    )?;
    let (p2, d2) = pp_matches(
        2,
        &[
            (0, 1, 0, 9634552),
            (2, 1, 0, 10),
            (1, 1, 0, 14988),
            (9, 4, 1, 1),
            (5, 4, 1, 1424),
            (1, 4, 1, 851559),
        ],
    )?;
    let detail = if p1 && p2 {
        "j f constant 7548, j^2 f constant 9634552, all polar terms match".to_string()
    } else {
        format!("{d1} {d2}")
    };
    Ok((p1 && p2, detail))
}

fn degree_identity() -> Check {
    let published = [10i64, 7548, 9634552];
    let mut parts = Vec::new();
    let mut pass = true;
    for t in 0..=5u32 {
        let chk = degree_identity_check(&family_member(t, 1)?)?;
        let mut ok = chk.pass;
        if let Some(&c) = published.get(t as usize) {
            ok &= chk.rhs == c;
        }
        pass &= ok;
        parts.push(format!(
            "t={t}: {}={}{}",
            chk.lhs,
            chk.rhs,
            if ok { "" } else { " MISMATCH" }
        ));
    }
    Ok((pass, parts.join(", ")))
}

fn volume() -> Check {
    let vol = SignatureContext::siegel().vol_x.unwrap_or_default();
    let zz = l_value_neg(2, 1)? * l_value_neg(4, 1)?;
    Ok((
        vol == rat(-1, 1440) && vol == zz,
        format!("vol(X) = {vol}, zeta(-1) zeta(-3) = {zz}"),
    ))
}

fn local_derivative(ev: &Evaluator) -> Check {
    let r = local_b_logderiv(2, 2, 1)?;
    let chi = kronecker_chi(1, 2)?;
    let closed = -logderiv_closed_form(2, 1, chi);
    // central difference of log b_2(2, s) at s = -1
    let bits = ev.bits();
    let lf = LocalFactor::new(2, 2, 1)?;
    let log2 = Float::with_val(bits, 2).ln();
    let h = Float::with_val(bits, 1e-6);
    let logb = |s: Float| {
        let x = (-s * &log2).exp();
        lf.eval_float(&x).abs().ln()
    };
    let s0 = Float::with_val(bits, -1);
    let fd = (logb(Float::with_val(bits, &s0 + &h)) - logb(Float::with_val(bits, &s0 - &h)))
        / (h * 2u32);
    let fd_err = Float::with_val(bits, &fd - Float::with_val(bits, &r) * &log2).abs();
    let fd_ok = fd_err < Float::with_val(bits, 1e-8) * &log2;

    let printed = rat(PRINTED_B2_LOGDERIV.0, PRINTED_B2_LOGDERIV.1);
    let report = kappa_psi(&family_member(1, 2)?, ev)?;
    let disc = report
        .closed_form_check
        .as_ref()
        .and_then(|c| c.discrepancy.as_ref());
    let mut want_diff = LinearForm::zero();
    want_diff.add_term(Symbol::Log(2), Rational::from(&r - &printed) * 700u32);
    let flagged = disc.is_some_and(|d| {
        d.derived_coeff == r && d.printed_coeff == printed && d.difference == want_diff
    });
    let pass = r == -2 && r == closed && fd_ok && r != printed && flagged;
    Ok((
        pass,
        format!(
            "b'_2/b_2 = {r} log 2 (closed form {closed}, finite difference err {}); printed {printed} flagged: {flagged}, difference {}",
            crate::ratio::fmt_float(&fd_err, 3),
            want_diff
        ),
    ))
}

fn l_values(cfg: &PrecisionConfig) -> Check {
    let exact = l_value_neg(2, 5)?;
    let s = rat(-1, 1);
    let num = dirichlet_l_deriv(&s, 5, cfg)?;
    let bits = cfg.bits();
    let e1 = Float::with_val(bits, &num.value - &exact).abs();
    let exact_ok = exact == rat(-2, 5) && e1 < cfg.tol(5);
    let tol = cfg.tol(10);
    let mut worst = Float::new(bits);
    let mut count = 0;
    let mut bad = Vec::new();
    for d in (1..=200i64).filter(|&d| is_fundamental(d)) {
        let a = dirichlet_l_deriv(&s, d, cfg)?;
        let b = dirichlet_l_deriv_fe(&s, d, cfg)?;
        let dv = Float::with_val(bits, &a.value - &b.value).abs();
        let dd = Float::with_val(bits, &a.deriv - &b.deriv).abs();
        let m = dv.max(&dd);
        if m > tol {
            bad.push(d);
        }
        if m > worst {
            worst = m;
        }
        count += 1;
    }
    let pass = exact_ok && bad.is_empty();
    Ok((
        pass,
        format!(
            "L(-1,chi_5) = {exact} (numeric err {}); {count} discriminants, worst dual-path gap {}{}",
            crate::ratio::fmt_float(&e1, 3),
            crate::ratio::fmt_float(&worst, 3),
            if bad.is_empty() { String::new() } else { format!(", failing d = {bad:?}") }
        ),
    ))
}

fn kappa_closed_form(ev: &Evaluator) -> Check {
    let report = kappa_psi(&build_vv_form(2)?, ev)?;
    let Some(chk) = report.closed_form_check else {
        return Ok((false, "no closed-form comparison attached".into()));
    };
    let lhs = LinearForm::c()
        .scale(&rat(10, 1))
        .add(&LinearForm::c0().scale(&rat(5, 1)));
    let mut rhs = LinearForm::log_int(2).scale(&rat(15, 1));
    rhs.add_term(Symbol::LogPi, rat(10, 1));
    let ident = lhs == rhs;
    let within = chk.abs_diff < ev.cfg().tol(12);
    Ok((
        chk.symbolic_match && within && ident,
        format!(
            "kappa = {}, closed form gap {}, symbolic match {}, 10C + 5C0 = 15 log 2 + 10 log pi: {ident}",
            crate::ratio::fmt_float(&report.kappa, 30),
            crate::ratio::fmt_float(&chk.abs_diff, 3),
            chk.symbolic_match
        ),
    ))
}

fn asymptotics(ev: &Evaluator) -> Check {
    let bits = ev.bits();
    // (a) independent double-precision value of (pi/6) zeta(3)/zeta(4) v^{-3/2}
    let v = Float::with_val(bits, 100);
    let b0 = b_mu(0, &rat(0, 1), &v, None, ev)?;
    let gap = (b0 - Float::with_val(bits, v.ln_ref()) / 2u32).to_f64();
    let pi = std::f64::consts::PI;
    let want = -(pi / 6.0) * (1.202_056_903_159_594_2 / (pi.powi(4) / 90.0)) * 100f64.powf(-1.5);
    let rel = ((gap - want) / want).abs();
    let ok_a = rel < 1e-8;

    // (b) b_mu(m, 50) against kappa_mu(m)
    let v50 = Float::with_val(bits, 50);
    let mut diffs = Vec::new();
    let mut ok_b = true;
    for (mu, m) in [(1u8, rat(1, 4)), (0, rat(1, 1))] {
        let b = b_mu(mu, &m, &v50, None, ev)?;
        let k = kappa_mu(mu, &m, ev)?.numeric;
        let d = Float::with_val(bits, &b - &k).to_f64();
        ok_b &= d.abs() < 1e-15;
        diffs.push(format!("m={m}: {d:.3e}"));
    }

    // (c) m < 0 with unit L-factor: b(2v)/b(v) e^{4 pi |m| v} stays in (0, 1]
    let one = Float::with_val(bits, 1);
    let m = rat(-1, 1);
    let mut vals = Vec::new();
    for v in [1u32, 2, 4] {
        vals.push(b_mu(0, &m, &Float::with_val(bits, v), Some(&one), ev)?);
    }
    let mut ok_c = true;
    let mut ratios = Vec::new();
    for (i, v) in [1.0f64, 2.0].iter().enumerate() {
        let r = Float::with_val(bits, &vals[i + 1] / &vals[i]).to_f64() * (4.0 * pi * v).exp();
        ok_c &= r > 0.0 && r <= 1.0;
        ratios.push(format!("{r:.4}"));
    }

    let detail = format!(
        "(a) rel err {rel:.2e} [{}]; (b) b - kappa at v=50: {} [{}]; (c) scaled ratios {} [{}]{}",
        if ok_a { "ok" } else { "fail" },
        diffs.join(", "),
        if ok_b { "ok" } else { "fail" },
        ratios.join(", "),
        if ok_c { "ok" } else { "fail" },
        if ok_b {
            ""
        } else {
            "; b - kappa = (120 H(2,4m)/2) J(3/2, 4 pi m v) and J(3/2, t) ~ 3/(2t), so the gap at v=50 is of order 1e-2"
        }
    );
    Ok((ok_a && ok_b && ok_c, detail))
}

fn random_series(rng: &mut ChaCha8Rng) -> Result<QSeries> {
    let den = *[1u64, 2, 4].choose(rng).expect("nonempty");
    let lo: i64 = rng.gen_range(-2..=1);
    let len: i64 = rng.gen_range(1..=6);
    let mut terms = vec![(
        rat(lo, den as i64),
        rat(rng.gen_range(1..=5), rng.gen_range(1..=3)),
    )];
    for k in 1..len {
        let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        terms.push((rat(lo + k, den as i64), c));
    }
    let prec = rat(lo + len + rng.gen_range(0..3), den as i64);
    QSeries::new(den, &prec, terms)
}

fn ring_axioms(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let a = random_series(rng)?;
    let b = random_series(rng)?;
    let c = random_series(rng)?;
    if !a.mul(&b.mul(&c)).agrees_with(&a.mul(&b).mul(&c)) {
        return Ok(Some(format!("associativity: {a} {b} {c}")));
    }
    if a.mul(&b) != b.mul(&a) || a.add(&b) != b.add(&a) {
        return Ok(Some(format!("commutativity: {a} {b}")));
    }
    if !a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))) {
        return Ok(Some(format!("distributivity: {a} {b} {c}")));
    }
    if !a.sub(&a).is_zero() {
        return Ok(Some(format!("additive inverse: {a}")));
    }
    let one = QSeries::one(&rat(1, 1))?;
    let inv = a.invert()?;
    let prod = a.mul(&inv);
    if !prod.agrees_with(&one) && prod.prec() > 0 {
        return Ok(Some(format!("multiplicative inverse: {a}")));
    }
    Ok(None)
}

fn properties(ev: &Evaluator) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..200 {
        if let Some(msg) = ring_axioms(&mut rng)? {
            return Ok((false, format!("ring axioms case {i}: {msg}")));
        }
    }

    let ctx = SignatureContext::siegel();
    let vol = ctx.vol_x.clone().unwrap_or_default();
    let mut grid = 0;
    for four_m in 0..=100i64 {
        let m = rat(four_m, 4);
        for mu in 0..2u8 {
            let a = eis_value_coeff(&ctx, mu, &m)?;
            let k = kappa_mu(mu, &m, ev)?;
            if !in_coset(mu, &m)? && (a != 0 || !k.symbolic.is_zero()) {
                return Ok((false, format!("coset vanishing fails at mu={mu} m={m}")));
            }
            if four_m > 0 && degree_z(mu, &m)? != Rational::from(&vol * &a) {
                return Ok((false, format!("degree_Z != vol a at mu={mu} m={m}")));
            }
            grid += 1;
        }
    }

    let mut worst = Float::new(ev.bits());
    for t in 1..=2u32 {
        let report = kappa_psi(&family_member(t, 2)?, ev)?;
        let mut order: Vec<usize> = (0..report.contributions.len()).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            let s = report.resum(&order, ev)?;
            let d = Float::with_val(ev.bits(), &s - &report.kappa).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    let pass = worst < ev.cfg().tol(12);
    Ok((
        pass,
        format!(
            "200 ring-axiom cases, {grid} grid points (m <= 25), resummation gap {}",
            crate::ratio::fmt_float(&worst, 3)
        ),
    ))
}
