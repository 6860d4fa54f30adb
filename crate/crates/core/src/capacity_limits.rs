//! Closed-form capacities and photon information efficiencies (PIE) of
//! coherent-state channels.
//!
//! Every function takes the mean received photon number per mode, `nbar`,
//! and returns bits per symbol (or bits per photon for the `pie_*` helpers).

use std::f64::consts::LN_2;
use std::ops::RangeInclusive;

use crate::entropy::{binary_entropy, xlog2x};
use crate::error::{check_nbar, Error, Result};
use crate::quadrature;

/// A capacity value together with its photon efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityPoint {
    pub nbar: f64,
    pub bits_per_symbol: f64,
    /// Bits per received photon; zero when `nbar` is zero.
    pub pie: f64,
    pub label: String,
}

impl CapacityPoint {
    pub fn new(label: impl Into<String>, nbar: f64, bits_per_symbol: f64) -> Self {
        let pie = if nbar > 0.0 { bits_per_symbol / nbar } else { 0.0 };
        CapacityPoint {
            nbar,
            bits_per_symbol,
            pie,
            label: label.into(),
        }
    }
}

/// One point on the photon-efficiency versus spectral-efficiency tradeoff of
/// an `modes`-mode channel carrying `n_r` received photons per slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub spectral_efficiency: f64,
    pub pie: f64,
    pub n_r: f64,
    pub modes: u32,
}

/// Superchannel families whose PIE envelope over the code order `m` is of
/// interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeFamily {
    /// BPSK Hadamard code with the Green Machine receiver.
    Hadamard,
    /// First-order Reed-Muller code with Green Machine + Dolinar receiver.
    RmGm,
}

/// Ultimate single-mode capacity `g(n) = (1+n)log2(1+n) - n log2 n`.
pub fn g(nbar: f64) -> Result<f64> {
    check_nbar(nbar)?;
    if nbar == 0.0 {
        return Ok(0.0);
    }
    Ok(((1.0 + nbar) * nbar.ln_1p()) / LN_2 - xlog2x(nbar))
}

/// Ultimate photon information efficiency `g(n)/n` in bits per photon.
pub fn pie_ultimate(nbar: f64) -> Result<f64> {
    if nbar.is_nan() || nbar <= 0.0 {
        return Err(Error::domain(format!("PIE needs nbar > 0, got {nbar}")));
    }
    Ok(((1.0 + nbar) * nbar.ln_1p() / nbar - nbar.ln()) / LN_2)
}

/// Inverts [`pie_ultimate`] by bisection in `log(nbar)`.
pub fn nbar_for_pie(target_pie: f64) -> Result<f64> {
    if !(target_pie > 0.0) || !target_pie.is_finite() {
        return Err(Error::domain(format!(
            "target PIE must be positive and finite, got {target_pie}"
        )));
    }
    let pie = |n: f64| pie_ultimate(n).expect("bracket stays positive");

    let (mut lo, mut hi) = (1.0_f64, 1.0_f64);
    while pie(lo) < target_pie {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::domain(format!(
                "PIE {target_pie} needs a photon number below f64 range"
            )));
        }
    }
    while pie(hi) > target_pie {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::domain(format!(
                "PIE {target_pie} needs a photon number above f64 range"
            )));
        }
    }

    // pie is strictly decreasing: pie(lo) >= target >= pie(hi)
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if pie(mid) > target_pie {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 4.0 * f64::EPSILON {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Holevo capacity of the BPSK alphabet `{|a>, |-a>}`, `|a|^2 = nbar`:
/// `H_b((1 + e^{-2n})/2)`.
pub fn holevo_bpsk(nbar: f64) -> Result<f64> {
    check_nbar(nbar)?;
    let minority = -0.5 * (-2.0 * nbar).exp_m1();
    Ok(binary_entropy(minority))
}

/// `s = sqrt(1 - e^{-4n})`, the Helstrom contrast of the BPSK pair.
fn bpsk_contrast(nbar: f64) -> f64 {
    (-(-4.0 * nbar).exp_m1()).sqrt()
}

/// Error probability of the Dolinar (Helstrom) receiver on BPSK:
/// `q = [1 - sqrt(1 - e^{-4n})]/2`.
pub fn dolinar_error_q(nbar: f64) -> Result<f64> {
    check_nbar(nbar)?;
    let s = bpsk_contrast(nbar);
    // (1 - s) = e^{-4n} / (1 + s), free of cancellation at large n
    Ok((-4.0 * nbar).exp() / (2.0 * (1.0 + s)))
}

/// Best symbol-by-symbol BPSK capacity: the binary symmetric channel left by
/// the Dolinar receiver, `1 - H_b(q)`.
pub fn c1_bpsk_dolinar(nbar: f64) -> Result<f64> {
    check_nbar(nbar)?;
    if nbar == 0.0 {
        return Ok(0.0);
    }
    let s = bpsk_contrast(nbar);
    let log_plus = s.ln_1p();
    // ln(1 - s) = ln(e^{-4n}) - ln(1 + s)
    let log_minus = -4.0 * nbar - log_plus;
    let one_minus_s = (-4.0 * nbar).exp() / (1.0 + s);
    Ok((0.5 * ((1.0 + s) * log_plus + one_minus_s * log_minus) / LN_2).max(0.0))
}

/// `f(b) = 1/2 * integral_a^1 sqrt(1 - (a/x)^4) dx` with `a = e^{-b}`.
///
/// The integrand has a square-root cusp at `x = a`; substituting
/// `x = a + (1-a) t^2` makes it smooth, and `1 - (a/x)^4` is factored as
/// `(1-r)(1+r)(1+r^2)` with `1 - r = (1-a) t^2 / x` to avoid cancellation.
pub fn f_integral(b: f64) -> Result<f64> {
    if b.is_nan() || b < 0.0 {
        return Err(Error::domain(format!("f(b) needs b >= 0, got {b}")));
    }
    if b == 0.0 {
        return Ok(0.0);
    }
    let a = (-b).exp();
    if a == 0.0 {
        return Ok(0.5);
    }
    let width = -(-b).exp_m1();
    let integrand = |t: f64| {
        let t2 = t * t;
        let x = a + width * t2;
        let r = a / x;
        2.0 * width * t2 * (width * (1.0 + r) * (1.0 + r * r) / x).sqrt()
    };
    let v = 0.5 * quadrature::integrate(integrand, 0.0, 1.0, 1e-13);
    Ok(v.clamp(0.0, 0.5 * width))
}

fn check_order(m: u32) -> Result<()> {
    if m == 0 || m > 30 {
        return Err(Error::domain(format!("code order m must be in 1..=30, got {m}")));
    }
    Ok(())
}

/// Per-symbol capacity of the Hadamard code (ancilla included in the block
/// length) with the Green Machine + photon-counting receiver:
/// `(m / 2^m)(1 - e^{-2^m n})`.
pub fn hadamard_jdr_capacity(m: u32, nbar: f64) -> Result<f64> {
    check_order(m)?;
    check_nbar(nbar)?;
    let len = f64::from(1u32 << m);
    Ok(f64::from(m) / len * -(-len * nbar).exp_m1())
}

/// Outcome probabilities `(p_plus, p_minus, p_0)` of the Green Machine +
/// Dolinar receiver for a PPM pulse carrying `pulse_energy` photons.
pub fn rm_gm_probabilities(pulse_energy: f64) -> Result<(f64, f64, f64)> {
    check_nbar(pulse_energy)?;
    let p0 = (-pulse_energy).exp();
    let detected = -(-pulse_energy).exp_m1();
    let f = f_integral(pulse_energy)?;
    let p_plus = 0.5 * detected + f;
    let p_minus = 0.5 * detected - f;
    if p_minus < -1e-12 {
        return Err(Error::Consistency(format!(
            "p_minus = {p_minus:e} < 0 at pulse energy {pulse_energy}"
        )));
    }
    let p_minus = p_minus.max(0.0);
    let total = p_plus + p_minus + p0;
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Consistency(format!(
            "receiver probabilities sum to {total}"
        )));
    }
    Ok((p_plus, p_minus, p0))
}

/// Per-symbol Shannon capacity of the RM(1,m) code with the Green Machine +
/// Dolinar receiver, erasures passed to the outer code.
pub fn rm_gm_jdr_capacity(m: u32, nbar: f64) -> Result<f64> {
    check_order(m)?;
    check_nbar(nbar)?;
    let len = f64::from(1u32 << m);
    let pulse = len * nbar;
    let (_, p_minus, _) = rm_gm_probabilities(pulse)?;
    let detected = -(-pulse).exp_m1();
    if detected == 0.0 {
        return Ok(0.0);
    }
    // (1-p0)(m+1) + H(p0, 1-p0) - H(p+, p-, p0) regrouped so the click mass
    // factors out: (1-p0) [m + 1 - H_b(p- / (1-p0))]
    let sign_error = (p_minus / detected).clamp(0.0, 0.5);
    Ok(detected * (f64::from(m) + 1.0 - binary_entropy(sign_error)) / len)
}

/// Per-symbol Shannon capacity of the RM(1,m) code under the minimum-error
/// (Helstrom) joint measurement.
pub fn rm_mpe_capacity(m: u32, nbar: f64) -> Result<f64> {
    check_order(m)?;
    check_nbar(nbar)?;
    let len = f64::from(1u32 << m);
    let codewords = 2.0 * len;
    let pulse = len * nbar;
    let p0 = (-pulse).exp();
    let detected = -(-pulse).exp_m1();

    let gamma = 1.0 + 2.0 * p0 * (0.5 * len - 1.0) + p0 * p0;
    let naive_disc = gamma * gamma - len * len * p0 * p0;
    if naive_disc < -1e-12 {
        return Err(Error::Consistency(format!(
            "negative discriminant {naive_disc:e} at m={m}, nbar={nbar}"
        )));
    }
    // gamma - 2^m p0 = (1 - p0)^2, so the root factors exactly
    let root = detected * (gamma + len * p0).sqrt();
    let c = p0 / (2.0 * (gamma + root)).sqrt();
    let c2 = c * c;
    let lead = 0.5 * (2.0 * (gamma + root)).sqrt() - 0.5 * c * (codewords - 4.0);
    let spread = (detected * (1.0 + p0)).sqrt();
    let a_plus = 0.5 * (lead + spread);
    let a_minus = 0.5 * (lead - spread);

    let bits = f64::from(m)
        + 1.0
        + xlog2x(a_plus * a_plus)
        + xlog2x(a_minus * a_minus)
        + (codewords - 2.0) * xlog2x(c2);
    Ok((bits / len).max(0.0))
}

/// Maximizes the family capacity over `m` at fixed `nbar`; ties go to the
/// smaller `m`. Returns `(m_star, pie)`.
pub fn pie_envelope(
    nbar: f64,
    family: EnvelopeFamily,
    m_range: RangeInclusive<u32>,
) -> Result<(u32, f64)> {
    if m_range.is_empty() {
        return Err(Error::domain("empty code-order range"));
    }
    if nbar.is_nan() || nbar <= 0.0 {
        return Err(Error::domain(format!("envelope needs nbar > 0, got {nbar}")));
    }
    let mut best: Option<(u32, f64)> = None;
    for m in m_range {
        let bits = match family {
            EnvelopeFamily::Hadamard => hadamard_jdr_capacity(m, nbar)?,
            EnvelopeFamily::RmGm => rm_gm_jdr_capacity(m, nbar)?,
        };
        if best.is_none_or(|(_, b)| bits > b) {
            best = Some((m, bits));
        }
    }
    let (m_star, bits) = best.expect("range is nonempty");
    Ok((m_star, bits / nbar))
}

/// Spectral efficiency `M g(N_R / M)` and PIE along a grid of received photon
/// numbers per slot.
pub fn tradeoff_curve(modes: u32, n_r_grid: &[f64]) -> Result<Vec<TradeoffPoint>> {
    if modes == 0 {
        return Err(Error::domain("mode count must be >= 1"));
    }
    n_r_grid
        .iter()
        .map(|&n_r| {
            if n_r.is_nan() || n_r <= 0.0 {
                return Err(Error::domain(format!("N_R must be > 0, got {n_r}")));
            }
            let m = f64::from(modes);
            let nbar = n_r / m;
            let pie = pie_ultimate(nbar)?;
            Ok(TradeoffPoint {
                spectral_efficiency: pie * n_r,
                pie,
                n_r,
                modes,
            })
        })
        .collect()
}
