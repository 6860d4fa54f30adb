//! Entropy primitives shared by every capacity computation.
//!
//! All functions use the `0 log 0 = 0` convention and return finite values for
//! probability arguments in `[0, 1]`.

use std::f64::consts::LN_2;

/// `x log2 x` with the continuous extension at zero.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits of a (not necessarily normalized) weight vector.
pub fn shannon(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// Binary entropy `H_b(p)` in bits.
///
/// The `1 - p` branch goes through `ln_1p`, so `p` close to zero keeps full
/// relative precision.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.ln() + (1.0 - p) * (-p).ln_1p()) / LN_2
}

/// `1 - H_b((1 - s) / 2)` in bits, evaluated without forming the entropy.
///
/// This is the capacity of a binary symmetric channel whose crossover
/// probability is `(1 - s)/2`. For small `s` it behaves like `s^2 / (2 ln 2)`,
/// which the direct form would lose to cancellation.
pub fn bsc_capacity_centered(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    if s == 0.0 {
        return 0.0;
    }
    let plus = (1.0 + s) * s.ln_1p();
    let minus = if s >= 1.0 {
        0.0
    } else {
        (1.0 - s) * (-s).ln_1p()
    };
    0.5 * (plus + minus) / LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xlog2x_limits() {
        assert_eq!(xlog2x(0.0), 0.0);
        assert_eq!(xlog2x(1.0), 0.0);
        assert!((xlog2x(0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn binary_entropy_edges() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert!(binary_entropy(1e-300).is_finite());
    }

    #[test]
    fn centered_bsc_matches_direct_form() {
        for &s in &[0.9, 0.5, 0.1, 1e-3] {
            let q: f64 = (1.0 - s) / 2.0;
            let direct = 1.0 - binary_entropy(q);
            assert!((bsc_capacity_centered(s) - direct).abs() < 1e-13, "s={s}");
        }
        let s = 1e-7;
        let series = s * s / (2.0 * LN_2);
        assert!((bsc_capacity_centered(s) / series - 1.0).abs() < 1e-6);
        assert_eq!(bsc_capacity_centered(1.0), 1.0);
    }

    #[test]
    fn shannon_of_uniform() {
        assert!((shannon(&[0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(shannon(&[1.0, 0.0]), 0.0);
    }
}
