//! Discrete memoryless channels induced by an inner code and its receiver,
//! their mutual information and capacity, and the capacity curves built on
//! top of them.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::capacity_limits::{self, CapacityPoint};
use crate::codes::{rm1_code, two_symbol_code};
use crate::discrimination::{gram_from_code, mpe_solve, srm_channel};
use crate::error::{Error, Result};
use crate::optics_sim::{self, ReceiverOutcome};

/// Output label used for the no-click outcome.
pub const ERASURE: &str = "erasure";

const ROW_TOL: f64 = 1e-10;

/// Row-stochastic transition matrix `P(j | i)` with labeled inputs and outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    probs: Vec<f64>,
}

impl DiscreteChannel {
    /// Validates shape, entries (`>= -1e-15`, clamped to zero) and row sums.
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.is_empty() || outputs.is_empty() || rows.len() != inputs.len() {
            return Err(Error::domain("channel needs one row per input and at least one output"));
        }
        let mut probs = Vec::with_capacity(inputs.len() * outputs.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != outputs.len() {
                return Err(Error::domain(format!("row {i} has {} entries", row.len())));
            }
            if let Some(bad) = row.iter().find(|&&x| !(x >= -1e-15) || x > 1.0 + 1e-12) {
                return Err(Error::domain(format!("row {i} has entry {bad}")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_TOL {
                return Err(Error::domain(format!("row {i} sums to {total}")));
            }
            probs.extend(row.into_iter().map(|x| x.max(0.0)));
        }
        Ok(DiscreteChannel {
            inputs,
            outputs,
            probs,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn input_labels(&self) -> &[String] {
        &self.inputs
    }

    pub fn output_labels(&self) -> &[String] {
        &self.outputs
    }

    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.probs[input * self.outputs.len() + output]
    }

    pub fn row(&self, input: usize) -> &[f64] {
        let j = self.outputs.len();
        &self.probs[input * j..(input + 1) * j]
    }

    pub fn erasure_index(&self) -> Option<usize> {
        self.outputs.iter().position(|l| l == ERASURE)
    }

    /// Largest `|sum_j P(j|i) - 1|` over inputs.
    pub fn max_row_deviation(&self) -> f64 {
        (0..self.n_inputs())
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn outcomes(&self, input: usize) -> Vec<ReceiverOutcome> {
        self.outputs
            .iter()
            .zip(self.row(input))
            .map(|(label, &probability)| ReceiverOutcome {
                label: label.clone(),
                probability,
            })
            .collect()
    }
}

fn check_priors(ch: &DiscreteChannel, priors: &[f64]) -> Result<()> {
    if priors.len() != ch.n_inputs() {
        return Err(Error::domain(format!(
            "{} priors for a {}-input channel",
            priors.len(),
            ch.n_inputs()
        )));
    }
    if priors.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::domain("priors must be nonnegative"));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("priors sum to {total}")));
    }
    Ok(())
}

fn output_distribution(ch: &DiscreteChannel, priors: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; ch.n_outputs()];
    for (i, &p) in priors.iter().enumerate() {
        if p > 0.0 {
            for (o, &w) in out.iter_mut().zip(ch.row(i)) {
                *o += p * w;
            }
        }
    }
    out
}

/// Relative entropy `D(P(.|i) || out)` in bits.
fn row_divergence(row: &[f64], out: &[f64]) -> f64 {
    row.iter()
        .zip(out)
        .filter(|(&w, _)| w > 0.0)
        .map(|(&w, &o)| w * (w / o).log2())
        .sum()
}

/// `I(X; Y)` in bits for input distribution `priors`.
pub fn mutual_information(ch: &DiscreteChannel, priors: &[f64]) -> Result<f64> {
    check_priors(ch, priors)?;
    let out = output_distribution(ch, priors);
    let mi: f64 = priors
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| p * row_divergence(ch.row(i), &out))
        .sum();
    Ok(mi.max(0.0))
}

pub fn uniform_priors(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCapacity {
    pub capacity: f64,
    pub priors: Vec<f64>,
    /// `max_i D(P(.|i) || P_Y)`, an upper bound on capacity.
    pub upper_bound: f64,
    pub iterations: usize,
}

/// Blahut-Arimoto alternating maximization. Stops when the standard bracket
/// `max_i D_i - I(r)` falls below `tol` (bits).
pub fn capacity_blahut_arimoto(ch: &DiscreteChannel, tol: f64, max_iter: usize) -> Result<ChannelCapacity> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let k = ch.n_inputs();
    let mut priors = uniform_priors(k);
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    for iteration in 1..=max_iter {
        let out = output_distribution(ch, &priors);
        let divergences: Vec<f64> = (0..k).map(|i| row_divergence(ch.row(i), &out)).collect();
        lower = priors.iter().zip(&divergences).map(|(p, d)| p * d).sum::<f64>().max(0.0);
        upper = divergences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if upper - lower < tol {
            return Ok(ChannelCapacity {
                capacity: lower,
                priors,
                upper_bound: upper,
                iterations: iteration,
            });
        }
        // r_i <- r_i 2^{D_i}, shifted by the max for stability
        let mut total = 0.0;
        for (p, d) in priors.iter_mut().zip(&divergences) {
            *p *= ((d - upper) * LN_2).exp();
            total += *p;
        }
        priors.iter_mut().for_each(|p| *p /= total);
    }
    Err(Error::CapacityNotConverged {
        iterations: max_iter,
        lower,
        upper,
        priors,
    })
}

/// Maximizes `f(p)` over `p in [0, 1/2]`: a uniform scan with `resolution`
/// points, then golden-section refinement between the neighbours of the best
/// scan point. The refined point replaces the scan point only if strictly
/// better, so flat functions return the smallest `p`.
pub fn prior_scan_max<F>(f: F, resolution: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if resolution < 3 {
        return Err(Error::domain(format!("resolution must be >= 3, got {resolution}")));
    }
    let step = 0.5 / (resolution - 1) as f64;
    let mut best = (0.0, f64::NEG_INFINITY, 0usize);
    for idx in 0..resolution {
        let p = if idx + 1 == resolution { 0.5 } else { step * idx as f64 };
        let v = f(p)?;
        if v > best.1 {
            best = (p, v, idx);
        }
    }
    let lo = step * best.2.saturating_sub(1) as f64;
    let hi = (step * (best.2 + 1) as f64).min(0.5);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let p = 0.5 * (a + b);
    let v = f(p)?;
    if v > best.1 {
        Ok((p, v))
    } else {
        Ok((best.0, best.1))
    }
}

/// Receiver used on the two-symbol `(2,3,1)` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoSymbolReceiver {
    /// Beam splitter, photon counter on the sum port, Dolinar receiver on the
    /// difference port.
    Structured,
    /// Minimum-error joint measurement on the three two-symbol states.
    Mpe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSymbolPoint {
    pub nbar: f64,
    /// Per-symbol mutual information at the optimal prior `(1-2p, p, p)`.
    pub i2: f64,
    pub c1: f64,
    pub ratio: f64,
    pub p_star: f64,
}

const TWO_SYMBOL_SCAN: usize = 41;
const MPE_TOL: f64 = 1e-12;
const MPE_MAX_ITER: usize = 10_000;

fn two_symbol_priors(p: f64) -> Vec<f64> {
    vec![1.0 - 2.0 * p, p, p]
}

/// Per-symbol two-symbol mutual information at prior parameter `p`.
pub fn two_symbol_information(nbar: f64, p: f64, receiver: TwoSymbolReceiver) -> Result<f64> {
    let priors = two_symbol_priors(p);
    let ch = match receiver {
        TwoSymbolReceiver::Structured => optics_sim::two_symbol_receiver_channel(nbar)?,
        TwoSymbolReceiver::Mpe => {
            let e = gram_from_code(&two_symbol_code(), nbar)?.with_priors(priors.clone())?;
            mpe_solve(&e, MPE_TOL, MPE_MAX_ITER)?.channel
        }
    };
    Ok(mutual_information(&ch, &priors)? / 2.0)
}

pub fn two_symbol_point(nbar: f64, receiver: TwoSymbolReceiver) -> Result<TwoSymbolPoint> {
    if !(nbar > 0.0) {
        return Err(Error::domain(format!("grid points must be > 0, got {nbar}")));
    }
    // the structured channel does not depend on p; build it once
    let (p_star, i2) = match receiver {
        TwoSymbolReceiver::Structured => {
            let ch = optics_sim::two_symbol_receiver_channel(nbar)?;
            prior_scan_max(|p| Ok(mutual_information(&ch, &two_symbol_priors(p))? / 2.0), TWO_SYMBOL_SCAN)?
        }
        TwoSymbolReceiver::Mpe => {
            prior_scan_max(|p| two_symbol_information(nbar, p, receiver), TWO_SYMBOL_SCAN)?
        }
    };
    let c1 = capacity_limits::c1_bpsk_dolinar(nbar)?;
    Ok(TwoSymbolPoint {
        nbar,
        i2,
        c1,
        ratio: i2 / c1,
        p_star,
    })
}

/// `I2 / C1` along a grid, with `I2` maximized over priors `(1-2p, p, p)`.
pub fn two_symbol_ratio_curve(nbar_grid: &[f64], receiver: TwoSymbolReceiver) -> Result<Vec<TwoSymbolPoint>> {
    if nbar_grid.is_empty() {
        return Err(Error::domain("empty photon-number grid"));
    }
    nbar_grid
        .par_iter()
        .map(|&n| two_symbol_point(n, receiver))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    HadamardJdr { m: u32 },
    RmGm { m: u32 },
    RmMpe { m: u32 },
    TwoSymbol { receiver: TwoSymbolReceiver },
}

impl CurveFamily {
    pub fn label(&self) -> String {
        match self {
            CurveFamily::HadamardJdr { m } => format!("hadamard_jdr_m{m}"),
            CurveFamily::RmGm { m } => format!("rm_gm_m{m}"),
            CurveFamily::RmMpe { m } => format!("rm_mpe_m{m}"),
            CurveFamily::TwoSymbol { receiver } => match receiver {
                TwoSymbolReceiver::Structured => "two_symbol_structured".into(),
                TwoSymbolReceiver::Mpe => "two_symbol_mpe".into(),
            },
        }
    }
}

/// Largest order for which the RM minimum-error curve is re-derived from the
/// Gram matrix when cross-checking (the eigensolve is `O(2^{3(m+1)})`).
pub const RM_MPE_CROSS_CHECK_MAX_M: u32 = 6;
const CROSS_CHECK_TOL: f64 = 1e-9;

fn cross_check(family: CurveFamily, nbar: f64, closed_form: f64) -> Result<()> {
    let simulated = match family {
        CurveFamily::HadamardJdr { m } => {
            let ch = optics_sim::hadamard_jdr_channel(m, nbar)?;
            mutual_information(&ch, &uniform_priors(ch.n_inputs()))? / f64::from(1u32 << m)
        }
        CurveFamily::RmGm { m } => {
            let ch = optics_sim::rm_gm_jdr_channel(m, nbar)?;
            mutual_information(&ch, &uniform_priors(ch.n_inputs()))? / f64::from(1u32 << m)
        }
        CurveFamily::RmMpe { m } if m <= RM_MPE_CROSS_CHECK_MAX_M => {
            let ch = srm_channel(&gram_from_code(&rm1_code(m)?, nbar)?)?;
            mutual_information(&ch, &uniform_priors(ch.n_inputs()))? / f64::from(1u32 << m)
        }
        _ => return Ok(()),
    };
    if (simulated - closed_form).abs() > CROSS_CHECK_TOL {
        return Err(Error::Consistency(format!(
            "{}: closed form {closed_form} vs simulated channel {simulated} at nbar={nbar}",
            family.label()
        )));
    }
    Ok(())
}

/// Per-symbol capacity and PIE of a superchannel family over a grid. With
/// `verify`, each closed-form point is compared against the physically
/// constructed channel (or the Gram/SRM oracle for the minimum-error curve).
pub fn capacity_curves(family: CurveFamily, nbar_grid: &[f64], verify: bool) -> Result<Vec<CapacityPoint>> {
    let label = family.label();
    nbar_grid
        .par_iter()
        .map(|&n| {
            let bits = match family {
                CurveFamily::HadamardJdr { m } => capacity_limits::hadamard_jdr_capacity(m, n)?,
                CurveFamily::RmGm { m } => capacity_limits::rm_gm_jdr_capacity(m, n)?,
                CurveFamily::RmMpe { m } => capacity_limits::rm_mpe_capacity(m, n)?,
                CurveFamily::TwoSymbol { receiver } => two_symbol_point(n, receiver)?.i2,
            };
            if verify {
                cross_check(family, n, bits)?;
            }
            Ok(CapacityPoint::new(label.clone(), n, bits))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::binary_entropy;

    fn labels(prefix: &str, k: usize) -> Vec<String> {
        (0..k).map(|i| format!("{prefix}{i}")).collect()
    }

    fn bsc(q: f64) -> DiscreteChannel {
        DiscreteChannel::new(labels("x", 2), labels("y", 2), vec![vec![1.0 - q, q], vec![q, 1.0 - q]]).unwrap()
    }

    fn bec(eps: f64) -> DiscreteChannel {
        DiscreteChannel::new(
            labels("x", 2),
            vec!["0".into(), "1".into(), ERASURE.into()],
            vec![vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]],
        )
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(DiscreteChannel::new(labels("x", 1), labels("y", 2), vec![vec![0.5, 0.6]]).is_err());
        assert!(DiscreteChannel::new(labels("x", 1), labels("y", 2), vec![vec![1.5, -0.5]]).is_err());
        assert!(DiscreteChannel::new(labels("x", 2), labels("y", 2), vec![vec![1.0, 0.0]]).is_err());
        let ch = bec(0.3);
        assert_eq!(ch.erasure_index(), Some(2));
        let outs = ch.outcomes(0);
        assert_eq!(outs[2].label, ERASURE);
        assert!((outs.iter().map(|o| o.probability).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let k = 5;
        let id: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let ch = DiscreteChannel::new(labels("x", k), labels("y", k), id).unwrap();
        assert!((mutual_information(&ch, &uniform_priors(k)).unwrap() - (k as f64).log2()).abs() < 1e-14);

        let constant = DiscreteChannel::new(labels("x", 3), labels("y", 2), vec![vec![0.3, 0.7]; 3]).unwrap();
        assert!(mutual_information(&constant, &uniform_priors(3)).unwrap().abs() < 1e-15);

        for &q in &[0.0, 0.1, 0.37, 0.5] {
            let mi = mutual_information(&bsc(q), &[0.5, 0.5]).unwrap();
            assert!((mi - (1.0 - binary_entropy(q))).abs() < 1e-14);
        }
        assert!(mutual_information(&bsc(0.1), &[0.6, 0.6]).is_err());
        assert!(mutual_information(&bsc(0.1), &[1.0]).is_err());
    }

    #[test]
    fn blahut_arimoto_closed_forms() {
        for &q in &[0.01, 0.2, 0.45] {
            let cap = capacity_blahut_arimoto(&bsc(q), 1e-12, 100_000).unwrap();
            assert!((cap.capacity - (1.0 - binary_entropy(q))).abs() < 1e-9);
            assert!((cap.priors[0] - 0.5).abs() < 1e-9);
        }
        for &eps in &[0.0, 0.3, 0.9] {
            let cap = capacity_blahut_arimoto(&bec(eps), 1e-12, 100_000).unwrap();
            assert!((cap.capacity - (1.0 - eps)).abs() < 1e-9);
        }
    }

    #[test]
    fn blahut_arimoto_asymmetric_z_channel() {
        // Z-channel with crossover 1/2: C = log2(5/4)
        let ch = DiscreteChannel::new(labels("x", 2), labels("y", 2), vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let cap = capacity_blahut_arimoto(&ch, 1e-12, 100_000).unwrap();
        assert!((cap.capacity - (1.25f64).log2()).abs() < 1e-9);
        assert!((cap.priors[1] - 0.4).abs() < 1e-5);
        assert!(matches!(
            capacity_blahut_arimoto(&ch, 1e-15, 2),
            Err(Error::CapacityNotConverged { .. })
        ));
    }

    #[test]
    fn prior_scan_synthetic() {
        let (p, v) = prior_scan_max(|p| Ok(-(p - 0.1234).powi(2)), 11).unwrap();
        assert!((p - 0.1234).abs() < 1e-6 && v.abs() < 1e-12);
        let (p, _) = prior_scan_max(|_| Ok(1.0), 11).unwrap();
        assert_eq!(p, 0.0);
        assert!(prior_scan_max(|_| Ok(1.0), 2).is_err());
        let (p, _) = prior_scan_max(Ok, 5).unwrap();
        assert_eq!(p, 0.5);
    }

    #[test]
    fn two_symbol_prior_scan_matches_dense_grid() {
        let n = 0.01;
        let ch = optics_sim::two_symbol_receiver_channel(n).unwrap();
        let f = |p: f64| mutual_information(&ch, &two_symbol_priors(p)).unwrap() / 2.0;
        let brute = (0..=50_000).map(|k| f(0.5 * f64::from(k) / 50_000.0)).fold(f64::NEG_INFINITY, f64::max);
        let point = two_symbol_point(n, TwoSymbolReceiver::Structured).unwrap();
        assert!((point.i2 - brute).abs() < 1e-6);
        assert!(point.i2 >= brute - 1e-12);
    }

    #[test]
    fn two_symbol_ratio_below_one_at_high_photon_number() {
        for receiver in [TwoSymbolReceiver::Structured, TwoSymbolReceiver::Mpe] {
            let pt = two_symbol_point(5.0, receiver).unwrap();
            assert!(pt.ratio < 1.0);
            assert!(pt.i2 <= 3f64.log2() / 2.0);
        }
    }

    #[test]
    fn two_symbol_beats_c1_somewhere() {
        let grid = [1e-3, 1e-2];
        for receiver in [TwoSymbolReceiver::Structured, TwoSymbolReceiver::Mpe] {
            let curve = two_symbol_ratio_curve(&grid, receiver).unwrap();
            assert!(curve.iter().any(|p| p.ratio > 1.0));
        }
    }

    #[test]
    fn curves_cross_check() {
        let grid = [1e-4, 1e-2, 0.3];
        for family in [
            CurveFamily::HadamardJdr { m: 4 },
            CurveFamily::RmGm { m: 4 },
            CurveFamily::RmMpe { m: 3 },
        ] {
            let pts = capacity_curves(family, &grid, true).unwrap();
            assert_eq!(pts.len(), 3);
            assert!(pts.windows(2).all(|w| w[0].nbar < w[1].nbar));
        }
    }

    #[test]
    fn rm_gm_channel_capacity_is_uniform_prior_information() {
        for m in 1..=3 {
            let ch = optics_sim::rm_gm_jdr_channel(m, 0.05).unwrap();
            let uniform = mutual_information(&ch, &uniform_priors(ch.n_inputs())).unwrap();
            let cap = capacity_blahut_arimoto(&ch, 1e-12, 100_000).unwrap();
            assert!((cap.capacity - uniform).abs() < 1e-9);
            let tv: f64 = cap.priors.iter().map(|p| (p - 1.0 / ch.n_inputs() as f64).abs()).sum::<f64>() / 2.0;
            assert!(tv < 1e-6);
        }
    }
}
