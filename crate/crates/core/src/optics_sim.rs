//! Amplitude-level simulation of the linear-optics receivers.
//!
//! Coherent states stay coherent under passive linear optics, so a multimode
//! coherent state is tracked as a vector of complex amplitudes and each
//! detector's statistics follow from the amplitude on its port. Detectors are
//! ideal: unit efficiency, no dark counts.

use std::fmt;

use num_complex::Complex64;

use crate::capacity_limits;
use crate::codes::{hadamard_code, rm1_code, two_symbol_code, BinaryCode};
use crate::discrimination::helstrom_binary;
use crate::error::{check_nbar, Error, Result};
use crate::superchannel::{DiscreteChannel, ERASURE};

/// Complex coherent-state amplitudes, one per optical mode. `|a_i|^2` is the
/// mean photon number in mode `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes(Vec<Complex64>);

impl ModeAmplitudes {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain("mode amplitudes must be finite"));
        }
        Ok(ModeAmplitudes(amps))
    }

    pub fn vacuum(modes: usize) -> Self {
        ModeAmplitudes(vec![Complex64::new(0.0, 0.0); modes])
    }

    /// BPSK modulation of a codeword: bit 0 -> `+alpha`, bit 1 -> `-alpha`.
    pub fn bpsk(codeword: &[u8], alpha: f64) -> Self {
        ModeAmplitudes(
            codeword
                .iter()
                .map(|&b| Complex64::new(if b == 0 { alpha } else { -alpha }, 0.0))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.0
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// A labeled receiver outcome and its probability for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverOutcome {
    pub label: String,
    pub probability: f64,
}

/// 50-50 beam splitter, real convention: `((a+b)/sqrt2, (a-b)/sqrt2)`.
pub fn beam_splitter(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ((a + b) * s, (a - b) * s)
}

/// Green Machine: `log2 n` stages of pairwise beam splitters wired as a
/// butterfly. On amplitudes this is the normalized Walsh-Hadamard transform.
pub fn green_machine(x: &ModeAmplitudes) -> Result<ModeAmplitudes> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::domain(format!("Green Machine needs 2^k modes, got {n}")));
    }
    let mut v = x.0.clone();
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                let (top, bottom) = beam_splitter(v[i], v[i + half]);
                v[i] = top;
                v[i + half] = bottom;
            }
        }
        half *= 2;
    }
    Ok(ModeAmplitudes(v))
}

/// Click probability of an ideal photon counter on a coherent pulse.
pub fn spd_click_prob(a: Complex64) -> f64 {
    -(-a.norm_sqr()).exp_m1()
}

/// The input states the Dolinar receiver model accepts, relative to its
/// hypothesis pair `{|+b>, |-b>}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DolinarInput {
    Plus,
    Minus,
    Vacuum,
}

impl fmt::Display for DolinarInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DolinarInput::Plus => "plus",
            DolinarInput::Minus => "minus",
            DolinarInput::Vacuum => "vacuum",
        })
    }
}

/// Probability that a Dolinar receiver tuned to `{|+b>, |-b>}` with
/// `|b|^2 = hypothesis_energy` and equal priors decides "plus".
///
/// The receiver realizes the binary Helstrom measurement; vacuum is invariant
/// under the sign flip that exchanges the two projectors, so it is decided
/// either way with probability 1/2.
pub fn dolinar_outcomes(hypothesis_energy: f64, input: DolinarInput) -> Result<f64> {
    check_nbar(hypothesis_energy)?;
    let q = helstrom_binary((-4.0 * hypothesis_energy).exp(), 0.5, 0.5)?;
    Ok(match input {
        DolinarInput::Plus => 1.0 - q,
        DolinarInput::Minus => q,
        DolinarInput::Vacuum => 0.5,
    })
}

/// Classifies an incoming amplitude against the hypotheses `+-sqrt(E)`.
pub fn classify_dolinar_input(amp: Complex64, hypothesis_energy: f64) -> Result<DolinarInput> {
    check_nbar(hypothesis_energy)?;
    let b = hypothesis_energy.sqrt();
    let tol = 1e-9 * b.max(1.0);
    if amp.norm() <= tol {
        Ok(DolinarInput::Vacuum)
    } else if (amp - b).norm() <= tol {
        Ok(DolinarInput::Plus)
    } else if (amp + b).norm() <= tol {
        Ok(DolinarInput::Minus)
    } else {
        Err(Error::UnsupportedInput(format!(
            "amplitude {amp} is neither vacuum nor +-{b}"
        )))
    }
}

fn codeword_labels(code: &BinaryCode) -> Vec<String> {
    code.codewords()
        .iter()
        .map(|c| c.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect())
        .collect()
}

/// Channel of the two-symbol joint receiver: the two BPSK symbols meet on a
/// beam splitter. A photon counter watches the sum port while a Dolinar
/// receiver (hypothesis energy `2 nbar`) watches the difference port.
///
/// Outputs are ordered `click,+ | click,- | no-click,+ | no-click,-`.
pub fn two_symbol_receiver_channel(nbar: f64) -> Result<DiscreteChannel> {
    check_nbar(nbar)?;
    let code = two_symbol_code();
    let alpha = nbar.sqrt();
    let hypothesis = 2.0 * nbar;
    let rows = code
        .codewords()
        .iter()
        .map(|c| {
            let x = ModeAmplitudes::bpsk(c, alpha);
            let (sum, diff) = beam_splitter(x.0[0], x.0[1]);
            let click = spd_click_prob(sum);
            let plus = dolinar_outcomes(hypothesis, classify_dolinar_input(diff, hypothesis)?)?;
            Ok(vec![
                click * plus,
                click * (1.0 - plus),
                (1.0 - click) * plus,
                (1.0 - click) * (1.0 - plus),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let outputs = ["click,+", "click,-", "no-click,+", "no-click,-"]
        .map(String::from)
        .to_vec();
    DiscreteChannel::new(codeword_labels(&code), outputs, rows)
}

/// Per-mode energies after the Green Machine for one BPSK codeword.
fn green_machine_output(codeword: &[u8], alpha: f64) -> Result<ModeAmplitudes> {
    green_machine(&ModeAmplitudes::bpsk(codeword, alpha))
}

/// Hadamard code (pilot included) + Green Machine + photon-counter array.
///
/// Outputs are the click positions `0..2^m` and a final erasure. If several
/// counters click, the lowest-indexed one is reported; with ideal optics the
/// Green Machine output has a single lit mode, so this never matters beyond
/// round-off.
pub fn hadamard_jdr_channel(m: u32, nbar: f64) -> Result<DiscreteChannel> {
    check_nbar(nbar)?;
    let code = hadamard_code(m, true)?;
    let alpha = nbar.sqrt();
    let modes = 1usize << m;
    let rows = code
        .codewords()
        .iter()
        .map(|c| {
            let out = green_machine_output(c, alpha)?;
            let mut row = Vec::with_capacity(modes + 1);
            let mut dark = 0.0_f64; // energy already passed without a click
            for a in out.amps() {
                row.push((-dark).exp() * spd_click_prob(*a));
                dark += a.norm_sqr();
            }
            row.push((-dark).exp());
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut outputs: Vec<String> = (0..modes).map(|j| format!("pos{j}")).collect();
    outputs.push(ERASURE.into());
    DiscreteChannel::new(codeword_labels(&code), outputs, rows)
}

/// RM(1,m) code + Green Machine + photon counters, with the clicking mode's
/// remaining light sent to a Dolinar receiver for the sign.
///
/// The Green Machine stage is simulated on amplitudes; the post-click sign
/// statistics use `p_+`, `p_-`, `p_0` for the lit mode's pulse energy.
/// Outputs are `(j,+)`, `(j,-)` for each mode `j`, then the erasure.
pub fn rm_gm_jdr_channel(m: u32, nbar: f64) -> Result<DiscreteChannel> {
    check_nbar(nbar)?;
    let code = rm1_code(m)?;
    let alpha = nbar.sqrt();
    let modes = 1usize << m;
    let mut cached: Option<(f64, (f64, f64, f64))> = None;
    let mut probabilities = |energy: f64| -> Result<(f64, f64, f64)> {
        match cached {
            Some((e, p)) if e == energy => Ok(p),
            _ => {
                let p = capacity_limits::rm_gm_probabilities(energy)?;
                cached = Some((energy, p));
                Ok(p)
            }
        }
    };
    let mut rows = Vec::with_capacity(code.size());
    for c in code.codewords() {
        let out = green_machine_output(c, alpha)?;
        let mut row = vec![0.0; 2 * modes + 1];
        let mut dark = 0.0_f64;
        for (j, a) in out.amps().iter().enumerate() {
            let energy = a.norm_sqr();
            if energy == 0.0 {
                continue;
            }
            let (p_right, p_wrong, _) = probabilities(energy)?;
            let reach = (-dark).exp();
            let (same, flipped) = if a.re >= 0.0 { (2 * j, 2 * j + 1) } else { (2 * j + 1, 2 * j) };
            row[same] += reach * p_right;
            row[flipped] += reach * p_wrong;
            dark += energy;
        }
        row[2 * modes] = (-dark).exp();
        rows.push(row);
    }
    let inputs = (0..code.size())
        .map(|k| {
            let sign = if k < modes { '+' } else { '-' };
            format!("({},{sign})", k % modes)
        })
        .collect();
    let mut outputs: Vec<String> = (0..modes)
        .flat_map(|j| [format!("({j},+)"), format!("({j},-)")])
        .collect();
    outputs.push(ERASURE.into());
    DiscreteChannel::new(inputs, outputs, rows)
}
