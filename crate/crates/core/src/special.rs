//! The gamma function on the complex plane, used for closed-form spectra of
//! exponential-type corpus members.

use num_complex::Complex64;
use std::f64::consts::PI;

// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function of a complex argument (Lanczos, about 13 significant
/// digits). Poles at the nonpositive integers return infinity.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z) Γ(1-z) = π / sin(π z).
        let sin = (PI * z).sin();
        if sin.norm() == 0.0 {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        return PI / (sin * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        acc += coef / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_factorials_on_integers() {
        for (n, expect) in [(1.0, 1.0), (2.0, 1.0), (3.0, 2.0), (5.0, 24.0), (8.0, 5040.0)] {
            let v = gamma(Complex64::new(n, 0.0));
            assert!((v.re - expect).abs() / expect < 1e-12, "n={n}: {v}");
            assert!(v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_at_half_is_sqrt_pi() {
        let v = gamma(Complex64::new(0.5, 0.0));
        assert!((v.re - PI.sqrt()).abs() < 1e-13, "{v}");
    }

    #[test]
    fn gamma_on_the_critical_line_matches_modulus_identity() {
        // |Γ(1 + it)|^2 = π t / sinh(π t)
        for &t in &[0.5, 1.0, 3.0, 8.0] {
            let v = gamma(Complex64::new(1.0, t));
            let expect = (PI * t / (PI * t).sinh()).sqrt();
            assert!(
                (v.norm() - expect).abs() / expect < 1e-12,
                "t={t}: {} vs {expect}",
                v.norm()
            );
        }
    }

    #[test]
    fn gamma_known_complex_point() {
        // Γ(1 + i) = 0.49801566811835604 - 0.15494982830181069 i
        let v = gamma(Complex64::new(1.0, 1.0));
        assert!((v.re - 0.49801566811835604).abs() < 1e-12, "{v}");
        assert!((v.im + 0.15494982830181069).abs() < 1e-12, "{v}");
    }

    #[test]
    fn gamma_reflection_region() {
        // Γ(-0.5) = -2 sqrt(pi)
        let v = gamma(Complex64::new(-0.5, 0.0));
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-11, "{v}");
    }
}
