//! Free-space optical link arithmetic, from aperture geometry to the power
//! needed for a PIE/SE target.

use std::f64::consts::PI;

use crate::capacity_limits::nbar_for_pie;
use crate::error::{Error, Result};

/// Planck constant, J·s (exact SI value).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Below this Fresnel number the near-field mode count is not trusted.
pub const NEAR_FIELD_MIN_FRESNEL: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Meters.
    pub wavelength: f64,
    /// Meters.
    pub range: f64,
    /// Square meters.
    pub tx_aperture_area: f64,
    /// Square meters.
    pub rx_aperture_area: f64,
    /// Slots per second.
    pub slot_rate: f64,
    /// Received photons per slot, summed over modes.
    pub n_r: f64,
    /// Per-mode power transmissivity; 1 in the near field.
    pub transmissivity: f64,
}

impl LinkParams {
    pub fn with_areas(
        wavelength: f64,
        range: f64,
        tx_aperture_area: f64,
        rx_aperture_area: f64,
        slot_rate: f64,
        n_r: f64,
    ) -> Result<Self> {
        let p = LinkParams {
            wavelength,
            range,
            tx_aperture_area,
            rx_aperture_area,
            slot_rate,
            n_r,
            transmissivity: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Circular apertures given by radius, `A = pi r^2`.
    pub fn with_radii(
        wavelength: f64,
        range: f64,
        tx_radius: f64,
        rx_radius: f64,
        slot_rate: f64,
        n_r: f64,
    ) -> Result<Self> {
        for (name, r) in [("tx_radius", tx_radius), ("rx_radius", rx_radius)] {
            positive(name, r)?;
        }
        Self::with_areas(
            wavelength,
            range,
            PI * tx_radius * tx_radius,
            PI * rx_radius * rx_radius,
            slot_rate,
            n_r,
        )
    }

    pub fn validate(&self) -> Result<()> {
        positive("wavelength", self.wavelength)?;
        positive("range", self.range)?;
        positive("tx_aperture_area", self.tx_aperture_area)?;
        positive("rx_aperture_area", self.rx_aperture_area)?;
        positive("slot_rate", self.slot_rate)?;
        positive("transmissivity", self.transmissivity)?;
        // n_r = 0 is a legitimate idle link
        if !(self.n_r >= 0.0 && self.n_r.is_finite()) {
            return Err(Error::domain(format!("n_r must be finite and >= 0, got {}", self.n_r)));
        }
        Ok(())
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {x}")))
    }
}

/// `D_f = A_t A_r / (lambda L)^2`.
pub fn fresnel_number(params: &LinkParams) -> Result<f64> {
    params.validate()?;
    let wl = params.wavelength * params.range;
    Ok(params.tx_aperture_area * params.rx_aperture_area / (wl * wl))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NearField,
    FarField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeCount {
    pub fresnel_number: f64,
    /// Spatio-polarization modes, `round(2 D_f)`.
    pub modes: u64,
    /// Spatial modes per polarization, `round(D_f)`.
    pub spatial_modes: u64,
    pub regime: Regime,
    /// Power transmissivity of each mode: 1 in the near field, about `D_f`
    /// for the single useful mode in the far field.
    pub per_mode_transmissivity: f64,
    pub warning: Option<String>,
}

pub fn mode_count(params: &LinkParams) -> Result<ModeCount> {
    let df = fresnel_number(params)?;
    let near = df >= NEAR_FIELD_MIN_FRESNEL;
    let warning = (!near).then(|| {
        format!(
            "Fresnel number {df:.4} is below {NEAR_FIELD_MIN_FRESNEL}; the 2*D_f mode count is not reliable outside the near field"
        )
    });
    Ok(ModeCount {
        fresnel_number: df,
        modes: (2.0 * df).round() as u64,
        spatial_modes: df.round() as u64,
        regime: if near { Regime::NearField } else { Regime::FarField },
        per_mode_transmissivity: if near { params.transmissivity } else { df.min(1.0) },
        warning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequiredModes {
    pub n_r: f64,
    pub nbar_star: f64,
    pub modes: u64,
}

/// Fewest modes reaching both targets: spend `N_R = SE / PIE` photons per slot
/// spread so every mode sits at the ultimate-PIE operating point.
pub fn required_modes(pie_target: f64, se_target: f64) -> Result<RequiredModes> {
    positive("pie_target", pie_target)?;
    positive("se_target", se_target)?;
    let n_r = se_target / pie_target;
    let nbar_star = nbar_for_pie(pie_target)?;
    let ratio = n_r / nbar_star;
    // a ratio that is an integer up to rounding must not round up by one
    let modes = (ratio * (1.0 - 1e-9)).ceil().max(1.0) as u64;
    Ok(RequiredModes { n_r, nbar_star, modes })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerRate {
    pub watts: f64,
    pub bits_per_second: f64,
}

/// Received optical power and information rate at a given PIE.
pub fn power_and_rate(params: &LinkParams, pie: f64) -> Result<PowerRate> {
    params.validate()?;
    if !(pie >= 0.0 && pie.is_finite()) {
        return Err(Error::domain(format!("pie must be finite and >= 0, got {pie}")));
    }
    let photon_energy = PLANCK * SPEED_OF_LIGHT / params.wavelength;
    let photons_per_second = params.n_r * params.slot_rate;
    Ok(PowerRate {
        watts: photons_per_second * photon_energy,
        bits_per_second: pie * photons_per_second,
    })
}
