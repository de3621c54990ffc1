//! Quadrature at MPFR precision: double-exponential (exp-sinh) on `(0, inf)`
//! and composite Gauss–Legendre.

use rug::float::Constant;
use rug::Float;

/// Integral value together with the difference between the last two refinements.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    pub err: Float,
}

const MAX_LEVEL: u32 = 12;
const U_MAX: f64 = 7.0;

/// `int_0^inf g(t) dt` by the exp-sinh map `t = exp(pi/2 sinh u)`.
///
/// `g` must decay at least exponentially at infinity and be integrable at 0.
/// Refinement stops once successive trapezoid sums agree to `tol` relative.
pub fn exp_sinh<G>(g: G, bits: u32, tol: &Float) -> QuadResult
where
    G: Fn(&Float) -> Float,
{
    exp_sinh_vec(|t| vec![g(t)], 1, bits, tol)
        .pop()
        .expect("one component")
}

/// Several integrals over `(0, inf)` sharing the same node evaluations.
pub fn exp_sinh_vec<G>(g: G, k: usize, bits: u32, tol: &Float) -> Vec<QuadResult>
where
    G: Fn(&Float) -> Vec<Float>,
{
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let node = |u: f64| -> Vec<Float> {
        let u = Float::with_val(bits, u);
        let sh = Float::with_val(bits, u.sinh_ref());
        let ch = Float::with_val(bits, u.cosh_ref());
        let t = Float::with_val(bits, &half_pi * &sh).exp();
        let w = Float::with_val(bits, &t * &half_pi) * ch;
        let vals = g(&t);
        debug_assert_eq!(vals.len(), k);
        vals.into_iter()
            .map(|v| {
                if v.is_finite() && w.is_finite() && !t.is_zero() {
                    v * &w
                } else {
                    Float::new(bits)
                }
            })
            .collect()
    };
    let magnitude = |v: &[Float]| {
        v.iter()
            .map(|x| Float::with_val(bits, x.abs_ref()))
            .fold(Float::new(bits), |a, b| a.max(&b))
    };

    // find where the transformed integrand becomes negligible on each side
    let step = 0.25;
    let mut sum = vec![Float::new(bits); k];
    let mut scale = Float::new(bits);
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for dir in [-1.0f64, 1.0] {
        let mut u = if dir < 0.0 { -step } else { 0.0 };
        loop {
            let v = node(u);
            let a = magnitude(&v);
            if a > scale {
                scale = a.clone();
            }
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            lo = lo.min(u);
            hi = hi.max(u);
            let negligible = a <= Float::with_val(bits, &scale * tol) >> 64u32;
            if u.abs() >= U_MAX || (u.abs() > 1.0 && negligible) {
                break;
            }
            u += dir * step;
        }
    }

    let mut h = step;
    let mut value: Vec<Float> = sum.iter().map(|s| Float::with_val(bits, s * h)).collect();
    let mut err = vec![Float::with_val(bits, &scale); k];
    for _ in 0..MAX_LEVEL {
        h /= 2.0;
        let n = ((hi - lo) / h).round() as i64;
        let mut j = 1;
        while j < n {
            for (s, x) in sum.iter_mut().zip(node(lo + j as f64 * h)) {
                *s += x;
            }
            j += 2;
        }
        let mut done = true;
        for i in 0..k {
            let next = Float::with_val(bits, &sum[i] * h);
            err[i] = Float::with_val(bits, &next - &value[i]).abs();
            value[i] = next;
            let mag = Float::with_val(bits, value[i].abs_ref()).max(&scale);
            if err[i] > Float::with_val(bits, &mag * tol) {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    value
        .into_iter()
        .zip(err)
        .map(|(value, err)| QuadResult { value, err })
        .collect()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize, bits: u32) -> Vec<(Float, Float)> {
    let mut out = Vec::with_capacity(n);
    let pi = Float::with_val(bits, Constant::Pi);
    let eps = Float::with_val(bits, 1) >> (bits - 8);
    for i in 1..=n.div_ceil(2) {
        let guess = Float::with_val(bits, 4 * i - 1) / (4 * n + 2) as u32 * &pi;
        let mut x = guess.cos();
        let mut dp = Float::new(bits);
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = Float::with_val(bits, 1);
            let mut p1 = Float::with_val(bits, &x);
            for k in 2..=n {
                let p2 = (Float::with_val(bits, &x * &p1) * (2 * k - 1) as u32
                    - Float::with_val(bits, &p0 * (k - 1) as u32))
                    / k as u32;
                p0 = p1;
                p1 = p2;
            }
            let x2m1 = Float::with_val(bits, x.square_ref()) - 1u32;
            dp = (Float::with_val(bits, &x * &p1) - &p0) * n as u32 / x2m1;
            let dx = Float::with_val(bits, &p1 / &dp);
            x -= &dx;
            if dx.abs() < eps {
                break;
            }
        }
        let x2 = Float::with_val(bits, x.square_ref());
        let w = Float::with_val(bits, 2) / ((1u32 - x2) * dp.square());
        if 2 * i - 1 == n {
            out.push((Float::new(bits), w));
        } else {
            out.push((Float::with_val(bits, -&x), w.clone()));
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    out
}

/// Gauss–Legendre rule on `[a, b]` with precomputed `rule`.
pub fn gl_panel<G>(g: &G, a: &Float, b: &Float, rule: &[(Float, Float)]) -> Float
where
    G: Fn(&Float) -> Float,
{
    let bits = a.prec();
    let half = Float::with_val(bits, b - a) / 2u32;
    let mid = Float::with_val(bits, a + b) / 2u32;
    let mut acc = Float::new(bits);
    for (x, w) in rule {
        let t = Float::with_val(bits, &half * x) + &mid;
        acc += Float::with_val(bits, w * g(&t));
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    const BITS: u32 = 256;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(BITS, a - b).abs() < tol
    }

    #[test]
    fn exp_sinh_gamma_integrals() {
        let tol = Float::with_val(BITS, 1e-70);
        // int t e^{-t} = 1
        let r = exp_sinh(|t| Float::with_val(BITS, -t).exp() * t, BITS, &tol);
        assert!(
            close(&r.value, &Float::with_val(BITS, 1), 1e-60),
            "{}",
            r.value
        );
        // int t^{-1/2} e^{-t} = sqrt(pi)
        let r = exp_sinh(
            |t| Float::with_val(BITS, -t).exp() / Float::with_val(BITS, t.sqrt_ref()),
            BITS,
            &tol,
        );
        let sp = Float::with_val(BITS, Constant::Pi).sqrt();
        assert!(close(&r.value, &sp, 1e-55), "{}", r.value);
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let rule = gauss_legendre(10, BITS);
        assert_eq!(rule.len(), 10);
        let wsum = rule.iter().fold(Float::new(BITS), |acc, (_, w)| acc + w);
        assert!(close(&wsum, &Float::with_val(BITS, 2), 1e-70));
        // int_0^2 x^19 dx = 2^20 / 20
        let g = |x: &Float| Float::with_val(BITS, x.clone().pow(19u32));
        let v = gl_panel(
            &g,
            &Float::with_val(BITS, 0),
            &Float::with_val(BITS, 2),
            &rule,
        );
        let want = Float::with_val(BITS, 1u64 << 20) / 20u32;
        assert!(close(&v, &want, 1e-60));
        let odd = gauss_legendre(7, BITS);
        assert_eq!(odd.len(), 7);
        assert!(odd[3].0.is_zero());
    }
}
