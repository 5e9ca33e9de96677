//! Principal branch of `ln Γ(z)` for complex `z` (Lanczos, g = 7, n = 9).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
// Coefficients as tabulated in the GNU Scientific Library.
const LANCZOS_COEF: [f64; 9] = [
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

// ln(2π)/2
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

fn lanczos(z: C64) -> C64 {
    let z = z - 1.0;
    let mut series = C64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

/// `ln Γ(z)` on the principal branch (continuous off the negative real
/// axis, real for real positive `z`).
pub fn log_gamma_complex(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!(
            "log-gamma of non-finite argument {z}"
        )));
    }
    if is_pole(z) {
        return Err(Error::Domain(format!("log-gamma pole at z = {}", z.re)));
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    if z.im < 0.0 {
        return log_gamma_complex(z.conj()).map(|l| l.conj());
    }
    // Reflection in the closed upper half-plane, with ln sin(πz) continued
    // holomorphically: ln(1/2) + iπ/2 − iπz + ln(1 − e^{2πiz}).
    let w = (C64::new(0.0, 2.0 * PI) * z).exp();
    let ln_sin =
        C64::new(-std::f64::consts::LN_2, 0.5 * PI) - C64::new(0.0, PI) * z + (1.0 - w).ln();
    Ok(PI.ln() - lanczos(1.0 - z) - ln_sin)
}

/// `arg Γ(z)` on the continuous (principal log-gamma) branch.
pub fn arg_gamma(z: C64) -> Result<f64> {
    log_gamma_complex(z).map(|l| l.im)
}
