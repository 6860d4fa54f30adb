//! Pure-state discrimination carried out entirely in Gram coordinates.
//!
//! A codebook of pure states is represented by its Gram matrix of pairwise
//! inner products and a prior vector; every measurement considered here lives
//! in the span of the states, so the K-dimensional Gram picture is exact and
//! no Hilbert space is ever built.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::codes::BinaryCode;
use crate::error::{check_nbar, Error, Result};
use crate::superchannel::DiscreteChannel;

const PRIOR_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PureStateEnsemble {
    gram: DMatrix<f64>,
    priors: Vec<f64>,
}

fn check_priors(priors: &[f64], k: usize) -> Result<()> {
    if priors.len() != k {
        return Err(Error::domain(format!("expected {k} priors, got {}", priors.len())));
    }
    if priors.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::domain(format!("priors must be nonnegative: {priors:?}")));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > PRIOR_TOL {
        return Err(Error::domain(format!("priors sum to {total}, not 1")));
    }
    Ok(())
}

impl PureStateEnsemble {
    pub fn new(gram: DMatrix<f64>, priors: Vec<f64>) -> Result<Self> {
        let k = gram.nrows();
        if k == 0 || gram.ncols() != k {
            return Err(Error::domain("Gram matrix must be square and nonempty"));
        }
        for i in 0..k {
            if (gram[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::domain(format!("Gram diagonal entry {i} is {}", gram[(i, i)])));
            }
            for j in 0..i {
                if (gram[(i, j)] - gram[(j, i)]).abs() > 1e-12 {
                    return Err(Error::domain(format!("Gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        check_priors(&priors, k)?;
        Ok(PureStateEnsemble { gram, priors })
    }

    /// Same states with a different prior vector.
    pub fn with_priors(&self, priors: Vec<f64>) -> Result<Self> {
        check_priors(&priors, self.len())?;
        Ok(PureStateEnsemble {
            gram: self.gram.clone(),
            priors,
        })
    }

    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priors.is_empty()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `sqrt(p_i p_j) G_ij`, the Gram matrix of the prior-weighted states.
    fn weighted_gram(&self, weights: &[f64]) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |i, j| (weights[i] * weights[j]).sqrt() * self.gram[(i, j)])
    }
}

/// BPSK coherent-state codebook: `<c_i|c_j> = exp(-2 nbar d_H(i, j))`, uniform
/// priors.
pub fn gram_from_code(code: &BinaryCode, nbar: f64) -> Result<PureStateEnsemble> {
    check_nbar(nbar)?;
    let k = code.size();
    let gram = DMatrix::from_fn(k, k, |i, j| (-2.0 * nbar * code.distance(i, j) as f64).exp());
    PureStateEnsemble::new(gram, vec![1.0 / k as f64; k])
}

/// Principal square root of a symmetric positive-semidefinite matrix.
///
/// Eigenvalues in `[-1e-10 * max(1, lambda_max), 0)` are clamped to zero;
/// anything more negative is reported as [`Error::NotPsd`].
pub fn sqrtm_psd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::domain("sqrtm needs a square matrix"));
    }
    let eig = SymmetricEigen::new(m.clone());
    let lambda_max = eig.eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    let floor = -PSD_TOL * lambda_max.max(1.0);
    if let Some(&worst) = eig.eigenvalues.iter().find(|&&l| l < floor) {
        return Err(Error::NotPsd { min_eigenvalue: worst });
    }
    // eigenvalues within roundoff of zero are zero; their square roots would
    // otherwise inject errors of order sqrt(eps)
    let noise = f64::EPSILON * m.nrows() as f64 * lambda_max;
    let roots = eig.eigenvalues.map(|l| if l > noise { l.sqrt() } else { 0.0 });
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&roots) * v.transpose())
}

fn state_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("s{i}")).collect()
}

fn outcome_labels(k: usize) -> Vec<String> {
    (0..k).map(|j| format!("m{j}")).collect()
}

/// Transition matrix of the pretty-good measurement built from `weights`,
/// evaluated on the ensemble states. Rows for zero weight are uniform.
fn pgm_rows(e: &PureStateEnsemble, weights: &[f64]) -> Result<Vec<Vec<f64>>> {
    let k = e.len();
    let root = sqrtm_psd(&e.weighted_gram(weights))?;
    Ok((0..k)
        .map(|i| {
            let row: Vec<f64> = (0..k).map(|j| root[(j, i)] * root[(j, i)]).collect();
            let total: f64 = row.iter().sum();
            if weights[i] <= 0.0 || total <= 0.0 {
                vec![1.0 / k as f64; k]
            } else {
                // total equals weights[i] up to eigenvalue clamping
                row.into_iter().map(|x| x / total).collect()
            }
        })
        .collect())
}

/// Square-root (pretty-good) measurement channel for the ensemble.
pub fn srm_channel(e: &PureStateEnsemble) -> Result<DiscreteChannel> {
    let k = e.len();
    let rows = pgm_rows(e, e.priors())?;
    DiscreteChannel::new(state_labels(k), outcome_labels(k), rows)
}

/// Minimum error probability for two pure states with squared overlap
/// `overlap_sq` and priors `p1`, `p2`.
pub fn helstrom_binary(overlap_sq: f64, p1: f64, p2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&overlap_sq) {
        return Err(Error::domain(format!("squared overlap must be in [0,1], got {overlap_sq}")));
    }
    if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) || (p1 + p2 - 1.0).abs() > PRIOR_TOL {
        return Err(Error::domain(format!("invalid binary priors ({p1}, {p2})")));
    }
    let disc = (1.0 - 4.0 * p1 * p2 * overlap_sq).max(0.0);
    Ok(0.5 * (1.0 - disc.sqrt()))
}

#[derive(Debug, Clone)]
pub struct MpeSolution {
    pub success_probability: f64,
    pub channel: DiscreteChannel,
    /// Pretty-good-measurement weights realizing the returned measurement.
    pub weights: Vec<f64>,
    /// Success probability after the seed and after each accepted update.
    pub history: Vec<f64>,
    pub iterations: usize,
}

fn success_probability(priors: &[f64], rows: &[Vec<f64>]) -> f64 {
    priors.iter().enumerate().map(|(i, p)| p * rows[i][i]).sum()
}

fn normalize(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter_mut().for_each(|x| *x /= total);
    }
}

/// Proposed weights from the stationarity condition `p_i S_ii / w_i = const`,
/// where `S` is the square root of the `w`-weighted Gram matrix.
fn stationary_update(e: &PureStateEnsemble, weights: &[f64]) -> Result<Vec<f64>> {
    let root = sqrtm_psd(&e.weighted_gram(weights))?;
    let mut next: Vec<f64> = e
        .priors()
        .iter()
        .enumerate()
        .map(|(i, p)| p * root[(i, i)].max(0.0))
        .collect();
    normalize(&mut next);
    Ok(next)
}

/// Minimum-probability-of-error measurement on a pure-state ensemble.
///
/// The optimal measurement for linearly independent pure states is a
/// pretty-good measurement with reweighted priors. Starting from the SRM
/// (weights = priors), the weights are moved toward the stationarity
/// fixed point; steps are geometrically damped until the success
/// probability does not drop, so the history is nondecreasing. Stops once
/// an accepted step improves the success probability by less than `tol`.
pub fn mpe_solve(e: &PureStateEnsemble, tol: f64, max_iter: usize) -> Result<MpeSolution> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let k = e.len();
    let mut weights = e.priors().to_vec();
    let mut rows = pgm_rows(e, &weights)?;
    let mut success = success_probability(e.priors(), &rows);
    let mut history = vec![success];

    let finish = |weights: Vec<f64>, rows: Vec<Vec<f64>>, success: f64, history: Vec<f64>, iterations: usize| {
        Ok(MpeSolution {
            success_probability: success,
            channel: DiscreteChannel::new(state_labels(k), outcome_labels(k), rows)?,
            weights,
            history,
            iterations,
        })
    };

    for iteration in 1..=max_iter {
        let target = stationary_update(e, &weights)?;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial: Vec<f64> = weights
                .iter()
                .zip(&target)
                .map(|(&w, &t)| if w > 0.0 && t > 0.0 { w.powf(1.0 - step) * t.powf(step) } else { t })
                .collect();
            normalize(&mut trial);
            let trial_rows = pgm_rows(e, &trial)?;
            let trial_success = success_probability(e.priors(), &trial_rows);
            if trial_success >= success {
                accepted = Some((trial, trial_rows, trial_success));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, trial_rows, trial_success)) = accepted else {
            // no ascent direction left at working precision
            return finish(weights, rows, success, history, iteration);
        };
        let improvement = trial_success - success;
        weights = trial;
        rows = trial_rows;
        success = trial_success;
        history.push(success);
        if improvement < tol {
            return finish(weights, rows, success, history, iteration);
        }
    }
    let best = finish(weights, rows, success, history, max_iter)?;
    Err(Error::MpeNotConverged {
        iterations: max_iter,
        best: Box::new(best),
    })
}
