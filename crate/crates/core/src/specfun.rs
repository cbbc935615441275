//! Polygamma functions of orders 0 to 2, log-gamma and log-beta.
//!
//! Polygammas shift the argument above 10 with the upward recurrence and then
//! evaluate the Bernoulli-number asymptotic series. Log-gamma is the Lanczos
//! approximation (g = 7, nine coefficients); log-beta switches to Stirling
//! corrections when an argument is large so that the result keeps full
//! relative precision where the three log-gamma terms would cancel.

use crate::error::{domain, GeError, Result};
use std::f64::consts::PI;

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// B_2, B_4, ..., B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Order of a polygamma function: 0 is digamma, 1 trigamma, 2 tetragamma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyOrder {
    Digamma,
    Trigamma,
    Tetragamma,
}

impl PolyOrder {
    pub fn order(self) -> u8 {
        match self {
            PolyOrder::Digamma => 0,
            PolyOrder::Trigamma => 1,
            PolyOrder::Tetragamma => 2,
        }
    }
}

impl TryFrom<u8> for PolyOrder {
    type Error = GeError;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(PolyOrder::Digamma),
            1 => Ok(PolyOrder::Trigamma),
            2 => Ok(PolyOrder::Tetragamma),
            k => Err(domain("polygamma", format!("order {k} not in {{0, 1, 2}}"))),
        }
    }
}

/// Polygamma function of the given order at `x > 0`.
pub fn polygamma(order: PolyOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("polygamma", format!("x = {x} must be positive and finite")));
    }
    Ok(match order {
        PolyOrder::Digamma => digamma(x),
        PolyOrder::Trigamma => trigamma(x),
        PolyOrder::Tetragamma => tetragamma(x),
    })
}

/// Digamma ψ(x) for x > 0. Returns NaN outside the domain.
pub fn digamma(x: f64) -> f64 {
    if !(x > 0.0) || x.is_infinite() {
        return f64::NAN;
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        series += b / (2.0 * (k as f64 + 1.0)) * pow;
        pow *= inv2;
    }
    (x.ln() - 0.5 / x - series) + shift
}

/// Trigamma ψ'(x) for x > 0. Returns NaN outside the domain.
pub fn trigamma(x: f64) -> f64 {
    if !(x > 0.0) || x.is_infinite() {
        return f64::NAN;
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut series = 0.0;
    for b in BERNOULLI_EVEN {
        series += b * pow;
        pow *= inv2;
    }
    (inv + 0.5 * inv2 + series) + shift
}

/// Tetragamma ψ''(x) for x > 0. Returns NaN outside the domain.
pub fn tetragamma(x: f64) -> f64 {
    if !(x > 0.0) || x.is_infinite() {
        return f64::NAN;
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift -= 2.0 / (x * x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        series += (2.0 * (k as f64 + 1.0) + 1.0) * b * pow;
        pow *= inv2;
    }
    (-inv2 - inv2 * inv - series) + shift
}

/// ln Γ(x) for x > 0 (Lanczos, with reflection below 1/2).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Stirling remainder ln Γ(x) − [(x − ½) ln x − x + ln √(2π)], valid for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        + inv2
            * (-1.0 / 360.0
                + inv2
                    * (1.0 / 1260.0
                        + inv2
                            * (-1.0 / 1680.0
                                + inv2
                                    * (1.0 / 1188.0
                                        + inv2 * (-691.0 / 360_360.0 + inv2 / 156.0))))))
}

/// log B(a, b) without argument checks. Exactly symmetric in its arguments.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    let (p, q) = if a <= b { (a, b) } else { (b, a) };
    let s = p + q;
    if p >= 10.0 {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(s);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / s).ln() + q * (-p / s).ln_1p()
    } else if q >= 10.0 {
        let corr = stirling_correction(q) - stirling_correction(s);
        ln_gamma(p) + corr + p - p * s.ln() + (q - 0.5) * (-p / s).ln_1p()
    } else {
        ln_gamma(p) + ln_gamma(q) - ln_gamma(s)
    }
}

/// log B(a, b) for positive arguments.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(domain("log_beta", format!("arguments ({a}, {b}) must be positive")));
    }
    Ok(ln_beta(a, b))
}

/// B(a, b) without argument checks.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use proptest::prelude::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn zeta3_by_summation() -> f64 {
        let n = 2000usize;
        let head: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
        let nf = n as f64;
        // Euler-Maclaurin tail of sum_{k>n} k^-3
        head + 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf.powi(3)) + 1.0 / (4.0 * nf.powi(4))
    }

    #[test]
    fn known_values_at_one() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-14);
        let zeta3 = zeta3_by_summation();
        assert!((zeta3 - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert!((tetragamma(1.0) + 2.0 * zeta3).abs() < 1e-13);
        assert!((tetragamma(1.0) + 2.404_113_806_3).abs() < 1e-10);
    }

    #[test]
    fn half_integer_reflection() {
        let expected = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(0.5) - expected).abs() < 1e-12);
        // trigamma(1/2) = pi^2 / 2
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn reference_values_across_range() {
        // (x, psi, psi', psi'') computed with 30-digit arithmetic
        let table = [
            (1e-3, -1000.5755719318103, 1000001.642533195869, -2000000002.3976322897),
            (0.37, -2.7953014108905639616, 8.3604738277990979087, -40.53032699757738573),
            (3.25, 1.0169909110681790364, 0.35979829030957987507, -0.12815694713911512072),
            (17.5, 2.8333574322286841031, 0.058806588095783507448, -0.0034572203720343102715),
            (1e6, 13.815510057964190771, 1.0000005000001666667e-6, -1.0000010000005e-12),
        ];
        for (x, d0, d1, d2) in table {
            let scale = |v: f64| 1e-12f64.max(v.abs() * 2e-15);
            assert!((digamma(x) - d0).abs() < scale(d0), "psi({x}) = {}", digamma(x));
            assert!((trigamma(x) - d1).abs() < scale(d1), "psi'({x}) = {}", trigamma(x));
            assert!((tetragamma(x) - d2).abs() < scale(d2), "psi''({x}) = {}", tetragamma(x));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(polygamma(PolyOrder::Digamma, 0.0).is_err());
        assert!(polygamma(PolyOrder::Trigamma, -1.5).is_err());
        assert!(polygamma(PolyOrder::Tetragamma, f64::NAN).is_err());
        assert!(polygamma(PolyOrder::Digamma, f64::INFINITY).is_err());
        assert!(PolyOrder::try_from(3).is_err());
        assert_eq!(PolyOrder::try_from(2).unwrap(), PolyOrder::Tetragamma);
        assert!(log_beta(0.0, 1.0).is_err());
        assert!(log_beta(1.0, -2.0).is_err());
    }

    #[test]
    fn log_beta_examples() {
        assert!(log_beta(1.0, 1.0).unwrap().abs() < 1e-15);
        assert!((log_beta(1.0, 2.5).unwrap() + 2.5f64.ln()).abs() < 1e-14);
        let quad = integrate(|t| t.powf(0.3) * (1.0 - t).powf(1.7), 0.0, 1.0, 1e-15, 1e-14).unwrap();
        let lb = log_beta(1.3, 2.7).unwrap();
        assert!((lb.exp() / quad.value - 1.0).abs() < 1e-12, "{} vs {}", lb.exp(), quad.value);
        assert!((quad.value - 0.231_051_713_608_330_5).abs() < 1e-12);
    }

    #[test]
    fn log_beta_large_arguments() {
        // 30-digit references
        let cases = [
            (1e4, 1e4, -13866.28325676140964),
            (1e-3, 1e4, 6.8979685949627083347),
            (25.5, 3000.25, -147.87915857693555159),
            (12.0, 7.5, -12.824414426328478197),
        ];
        for (a, b, want) in cases {
            let got = log_beta(a, b).unwrap();
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "lbeta({a},{b}) = {got}");
        }
    }

    proptest! {
        #[test]
        fn polygamma_recurrence(x in 1e-3f64..1e3) {
            let r0 = digamma(x + 1.0) - digamma(x) - 1.0 / x;
            let r1 = trigamma(x + 1.0) - trigamma(x) + 1.0 / (x * x);
            let r2 = tetragamma(x + 1.0) - tetragamma(x) - 2.0 / (x * x * x);
            // tolerance relative to the size of the terms involved
            let tol = |m: f64| 1e-10f64.max(m * 1e-14);
            prop_assert!(r0.abs() < tol(1.0 / x));
            prop_assert!(r1.abs() < tol(1.0 / (x * x)));
            prop_assert!(r2.abs() < tol(2.0 / (x * x * x)));
        }

        #[test]
        fn log_beta_symmetric(a in 1e-3f64..1e4, b in 1e-3f64..1e4) {
            prop_assert_eq!(ln_beta(a, b).to_bits(), ln_beta(b, a).to_bits());
        }

        #[test]
        fn log_beta_matches_gamma_route(a in 0.01f64..9.0, b in 0.01f64..9.0) {
            let direct = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
            prop_assert!((ln_beta(a, b) - direct).abs() < 1e-13);
        }
    }
}
