//! Message-bit error rates of uncoded and Hadamard-coded BPSK.
//!
//! The Dolinar-receiver curve is Monte Carlo: the receiver turns each symbol
//! into a binary symmetric channel with crossover `q(nbar)`, and the code is
//! ML-decoded with one FWHT per trial. The Green Machine curve is exact.
//!
//! Trials are split into fixed-size chunks, each with its own ChaCha stream
//! keyed by `(seed, chunk)`, and chunk sums are combined in chunk order, so
//! results do not depend on the number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::capacity_limits::dolinar_error_q;
use crate::codes::{fwht_in_place, hadamard_code, ml_decode_hard, BinaryCode};
use crate::error::{check_nbar, Error, Result};

pub const MIN_TRIALS: u64 = 10_000;
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerScheme {
    UncodedDolinar,
    HadamardDolinar,
    HadamardJdr,
}

/// How the Dolinar-receiver Monte Carlo draws its error patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BerEstimator {
    /// Flip every symbol independently with probability `q`.
    Direct,
    /// Importance sampling from an equal mixture over the nonzero codewords
    /// `j`: positions in the support of codeword `j` flip with probability
    /// 1/2, the rest with `q`. Each trial is weighted by the likelihood ratio
    /// to the true channel. Unbiased, and resolves error rates far below
    /// `1 / trials`.
    #[default]
    MixtureImportance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub nbar: f64,
    pub ber: f64,
    /// Standard error of `ber`; zero for analytic points.
    pub stderr: f64,
    pub scheme: BerScheme,
    /// Monte Carlo trials, or 0 for analytic points.
    pub trials: u64,
    pub seed: u64,
}

/// Uncoded BPSK with symbol-by-symbol Dolinar detection: the bit error rate
/// is the Helstrom error `q(nbar)` itself.
pub fn uncoded_bpsk_ber(nbar: f64) -> Result<f64> {
    dolinar_error_q(nbar)
}

/// SplitMix64 finalizer; derives independent per-grid-point seeds.
pub fn derive_point_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Direct Monte Carlo BER of the punctured Hadamard code with
/// symbol-by-symbol Dolinar detection and ML decoding.
pub fn hadamard_dr_ber(m: u32, nbar: f64, trials: u64, seed: u64) -> Result<BerPoint> {
    hadamard_dr_ber_with(m, nbar, trials, seed, BerEstimator::Direct)
}

#[derive(Default, Clone, Copy)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(self, other: Moments) -> Moments {
        Moments {
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }
}

struct Trial<'a> {
    code: &'a BinaryCode,
    m: u32,
    q: f64,
    estimator: BerEstimator,
    // ln of the per-position likelihood ratios used by the mixture weights
    log_half_over_keep: f64,
    log_keep_over_flip: f64,
}

impl Trial<'_> {
    /// One sampled error-fraction contribution (already weighted).
    fn run(&self, rng: &mut ChaCha8Rng, received: &mut [u8], flips: &mut [f64]) -> Result<f64> {
        let k = self.code.size();
        let n = self.code.n();
        let message = rng.gen_range(0..k);
        let codeword = self.code.codeword(message);

        let weight = match self.estimator {
            BerEstimator::Direct => {
                for (r, &c) in received.iter_mut().zip(codeword) {
                    *r = c ^ u8::from(rng.gen::<f64>() < self.q);
                }
                1.0
            }
            BerEstimator::MixtureImportance => {
                let component = self.code.codeword(rng.gen_range(1..k));
                flips[0] = 0.0; // punctured pilot position never flips
                for i in 0..n {
                    let p = if component[i] == 1 { 0.5 } else { self.q };
                    let flip = rng.gen::<f64>() < p;
                    received[i] = codeword[i] ^ u8::from(flip);
                    flips[i + 1] = f64::from(u8::from(flip));
                }
                self.mixture_weight(flips)?
            }
        };

        let decoded = ml_decode_hard(self.code, received)?;
        let bit_errors = (decoded ^ message).count_ones();
        Ok(weight * f64::from(bit_errors) / f64::from(self.m))
    }

    /// `1 / mean_j L_j(x)` where `L_j` is the likelihood ratio of mixture
    /// component `j` to the true channel. `flips` is overwritten.
    fn mixture_weight(&self, flips: &mut [f64]) -> Result<f64> {
        let total: f64 = flips.iter().sum();
        let len = flips.len();
        let d = (len / 2) as f64;
        fwht_in_place(flips, false)?;
        // flips in the support of codeword j: (|x| - (Hx)_j) / 2
        let logs: Vec<f64> = flips[1..]
            .iter()
            .map(|&h| d * self.log_half_over_keep + 0.5 * (total - h) * self.log_keep_over_flip)
            .collect();
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = logs.iter().map(|l| (l - peak).exp()).sum::<f64>() / logs.len() as f64;
        Ok((-peak - mean.ln()).exp())
    }
}

/// Monte Carlo BER of the punctured `(2^m - 1, 2^m, 2^{m-1})` Hadamard code
/// with symbol-by-symbol Dolinar detection, using the chosen estimator.
pub fn hadamard_dr_ber_with(
    m: u32,
    nbar: f64,
    trials: u64,
    seed: u64,
    estimator: BerEstimator,
) -> Result<BerPoint> {
    check_nbar(nbar)?;
    if trials < MIN_TRIALS {
        return Err(Error::domain(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    let code = hadamard_code(m, false)?;
    let q = dolinar_error_q(nbar)?;
    let point = |ber: f64, stderr: f64| BerPoint {
        nbar,
        ber,
        stderr,
        scheme: BerScheme::HadamardDolinar,
        trials,
        seed,
    };
    if q == 0.0 {
        return Ok(point(0.0, 0.0));
    }
    let trial = Trial {
        code: &code,
        m,
        q,
        estimator,
        log_half_over_keep: (0.5 / (1.0 - q)).ln(),
        log_keep_over_flip: ((1.0 - q) / q).ln(),
    };

    let chunks = trials.div_ceil(CHUNK);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = CHUNK.min(trials - chunk * CHUNK);
            let mut received = vec![0u8; code.n()];
            let mut flips = vec![0.0; code.n() + 1];
            let mut moments = Moments::default();
            for _ in 0..count {
                moments.push(trial.run(&mut rng, &mut received, &mut flips)?);
            }
            Ok(moments)
        })
        .collect::<Result<Vec<Moments>>>()?;
    let total = partials.into_iter().fold(Moments::default(), Moments::merge);

    let t = trials as f64;
    let mean = total.sum / t;
    let variance = ((total.sum_sq / t - mean * mean) * t / (t - 1.0)).max(0.0);
    Ok(point(mean, (variance / t).sqrt()))
}

/// Exact BER of the Hadamard code (pilot included) with the Green Machine
/// receiver. A click identifies the codeword; on an erasure the decoder
/// guesses a codeword uniformly, so the BER is `P(erasure)` times the mean
/// message-bit disagreement over all (sent, guessed) pairs.
pub fn hadamard_jdr_ber(m: u32, nbar: f64) -> Result<BerPoint> {
    check_nbar(nbar)?;
    let code = hadamard_code(m, true)?;
    let k = code.size();
    let mut disagreement = 0u64;
    for sent in 0..k {
        for guess in 0..k {
            disagreement += u64::from((sent ^ guess).count_ones());
        }
    }
    let mean_fraction = disagreement as f64 / (k * k) as f64 / f64::from(m);
    let erasure = (-(k as f64) * nbar).exp();
    Ok(BerPoint {
        nbar,
        ber: erasure * mean_fraction,
        stderr: 0.0,
        scheme: BerScheme::HadamardJdr,
        trials: 0,
        seed: 0,
    })
}
