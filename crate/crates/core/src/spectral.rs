//! Black-body radiation formulas and the spectral power distribution models
//! used throughout the crate.
//!
//! Public wavelengths are in nanometres and temperatures in kelvin. SI metres
//! only appear inside the Planck evaluations.

use std::f64::consts::PI;
use std::io::Read;

use crate::error::{Error, Result};
use crate::quadrature::CubicSpline;

/// Planck constant (J·s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Largest exponent evaluated before a Boltzmann factor is treated as zero.
pub const MAX_EXPONENT: f64 = 700.0;

const NM: f64 = 1e-9;

/// Gaussian tails further than this many widths from the centre underflow to
/// exactly zero in `f64`.
const GAUSSIAN_SUPPORT_WIDTHS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub planck: f64,
    pub speed_of_light: f64,
    pub boltzmann: f64,
}

impl PhysicalConstants {
    /// Exact SI values.
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        planck: PLANCK,
        speed_of_light: SPEED_OF_LIGHT,
        boltzmann: BOLTZMANN,
    };

    /// Second radiation constant hc/k_B (m·K).
    pub fn second_radiation_constant(&self) -> f64 {
        self.planck * self.speed_of_light / self.boltzmann
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Closed wavelength interval in nanometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavelengthRange {
    min_nm: f64,
    max_nm: f64,
}

impl WavelengthRange {
    pub const VISIBLE: WavelengthRange = WavelengthRange {
        min_nm: 380.0,
        max_nm: 780.0,
    };

    /// 300–900 nm, wide enough that both analytic eye-sensitivity curves are
    /// negligible outside it.
    pub const EXTENDED_VISIBLE: WavelengthRange = WavelengthRange {
        min_nm: 300.0,
        max_nm: 900.0,
    };

    pub fn new(min_nm: f64, max_nm: f64) -> Result<Self> {
        if !(min_nm.is_finite() && max_nm.is_finite()) {
            return Err(Error::domain("wavelength bounds must be finite"));
        }
        if min_nm <= 0.0 {
            return Err(Error::domain(format!(
                "wavelength bounds must be positive, got {min_nm} nm"
            )));
        }
        if min_nm >= max_nm {
            return Err(Error::domain(format!(
                "empty wavelength range [{min_nm}, {max_nm}] nm"
            )));
        }
        Ok(Self { min_nm, max_nm })
    }

    pub fn min_nm(&self) -> f64 {
        self.min_nm
    }

    pub fn max_nm(&self) -> f64 {
        self.max_nm
    }

    pub fn width(&self) -> f64 {
        self.max_nm - self.min_nm
    }

    pub fn contains(&self, wavelength_nm: f64) -> bool {
        (self.min_nm..=self.max_nm).contains(&wavelength_nm)
    }

    /// Overlap of two ranges, `None` when it has zero width.
    pub fn intersect(&self, other: &WavelengthRange) -> Option<WavelengthRange> {
        let lo = self.min_nm.max(other.min_nm);
        let hi = self.max_nm.min(other.max_nm);
        (lo < hi).then_some(WavelengthRange {
            min_nm: lo,
            max_nm: hi,
        })
    }
}

/// Tabulated relative power spectrum, interpolated with a natural cubic
/// spline.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectrum {
    wavelengths_nm: Vec<f64>,
    values: Vec<f64>,
    spline: CubicSpline,
}

impl SampledSpectrum {
    pub const MIN_POINTS: usize = 4;

    pub fn new(wavelengths_nm: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if wavelengths_nm.len() != values.len() {
            return Err(Error::InvalidSpectrum(format!(
                "{} wavelengths but {} values",
                wavelengths_nm.len(),
                values.len()
            )));
        }
        if wavelengths_nm.len() < Self::MIN_POINTS {
            return Err(Error::InvalidSpectrum(format!(
                "at least {} samples are required, got {}",
                Self::MIN_POINTS,
                wavelengths_nm.len()
            )));
        }
        if let Some(&w) = wavelengths_nm.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidSpectrum(format!(
                "wavelengths must be positive and finite, got {w}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidSpectrum(format!(
                "negative or non-finite power {} at {} nm",
                values[i], wavelengths_nm[i]
            )));
        }
        let spline = CubicSpline::fit(&wavelengths_nm, &values)?;
        Ok(Self {
            wavelengths_nm,
            values,
            spline,
        })
    }

    /// Reads a `wavelength_nm,power` CSV stream.
    pub fn from_csv<R: Read>(source: R) -> Result<Self> {
        let table = crate::csvio::read_columns(source, &["wavelength_nm", "power"])?;
        let mut columns = table.columns.into_iter();
        let wavelengths = columns.next().unwrap_or_default();
        let values = columns.next().unwrap_or_default();
        if let Some(i) = values.iter().position(|v| *v < 0.0) {
            return Err(Error::Validation(format!(
                "line {}: negative power {}",
                table.lines[i], values[i]
            )));
        }
        Self::new(wavelengths, values)
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spline(&self) -> &CubicSpline {
        &self.spline
    }

    pub fn range(&self) -> WavelengthRange {
        WavelengthRange {
            min_nm: self.wavelengths_nm[0],
            max_nm: self.wavelengths_nm[self.wavelengths_nm.len() - 1],
        }
    }

    /// Same samples multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.wavelengths_nm.clone(),
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    fn evaluate(&self, wavelength_nm: f64) -> f64 {
        if !self.range().contains(wavelength_nm) {
            return 0.0;
        }
        self.spline.eval(wavelength_nm).max(0.0)
    }
}

/// Power emission spectrum of a radiation source, in arbitrary units per nm.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumModel {
    /// Black body over all wavelengths.
    Planck { temperature: f64 },
    /// Black body restricted to a wavelength window.
    TruncatedPlanck {
        temperature: f64,
        range: WavelengthRange,
    },
    /// Equal-energy spectrum on a window.
    Flat { range: WavelengthRange },
    /// `exp(-(λ-λ0)²/(2Δλ²))`, untruncated.
    Gaussian { center_nm: f64, width_nm: f64 },
    /// Dirac delta at one wavelength. Only handled analytically.
    Line { wavelength_nm: f64 },
    Sampled(SampledSpectrum),
}

impl SpectrumModel {
    pub fn planck(temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self::Planck { temperature })
    }

    pub fn truncated_planck(temperature: f64, min_nm: f64, max_nm: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self::TruncatedPlanck {
            temperature,
            range: WavelengthRange::new(min_nm, max_nm)?,
        })
    }

    pub fn flat(min_nm: f64, max_nm: f64) -> Result<Self> {
        Ok(Self::Flat {
            range: WavelengthRange::new(min_nm, max_nm)?,
        })
    }

    pub fn gaussian(center_nm: f64, width_nm: f64) -> Result<Self> {
        check_wavelength(center_nm)?;
        if !(width_nm.is_finite() && width_nm > 0.0) {
            return Err(Error::domain(format!(
                "Gaussian width must be positive, got {width_nm} nm"
            )));
        }
        Ok(Self::Gaussian {
            center_nm,
            width_nm,
        })
    }

    pub fn line(wavelength_nm: f64) -> Result<Self> {
        check_wavelength(wavelength_nm)?;
        Ok(Self::Line { wavelength_nm })
    }

    pub fn sampled(spectrum: SampledSpectrum) -> Self {
        Self::Sampled(spectrum)
    }

    /// Re-checks the variant invariants, for values built directly from the
    /// public enum fields.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Planck { temperature } => check_temperature(*temperature),
            Self::TruncatedPlanck { temperature, .. } => check_temperature(*temperature),
            Self::Flat { .. } | Self::Sampled(_) => Ok(()),
            Self::Gaussian {
                center_nm,
                width_nm,
            } => Self::gaussian(*center_nm, *width_nm).map(|_| ()),
            Self::Line { wavelength_nm } => check_wavelength(*wavelength_nm),
        }
    }

    /// Interval outside of which the model evaluates to exactly zero. `None`
    /// for the unbounded black body.
    pub fn support(&self) -> Option<WavelengthRange> {
        match self {
            Self::Planck { .. } => None,
            Self::TruncatedPlanck { range, .. } | Self::Flat { range } => Some(*range),
            Self::Gaussian {
                center_nm,
                width_nm,
            } => {
                let reach = GAUSSIAN_SUPPORT_WIDTHS * width_nm;
                Some(WavelengthRange {
                    min_nm: (center_nm - reach).max(center_nm * 1e-6),
                    max_nm: center_nm + reach,
                })
            }
            Self::Line { wavelength_nm } => Some(WavelengthRange {
                min_nm: *wavelength_nm,
                max_nm: *wavelength_nm,
            }),
            Self::Sampled(s) => Some(s.range()),
        }
    }

    /// Points inside `range` where the model is not smooth or has a sharp
    /// feature that quadrature should not straddle.
    pub(crate) fn breakpoints_in(&self, range: &WavelengthRange) -> Vec<f64> {
        let inside = |w: &f64| *w > range.min_nm && *w < range.max_nm;
        match self {
            Self::Gaussian { center_nm, .. } => {
                std::iter::once(*center_nm).filter(inside).collect()
            }
            Self::Sampled(s) => s.wavelengths_nm.iter().copied().filter(inside).collect(),
            _ => Vec::new(),
        }
    }

    /// Relative power density at `wavelength_nm`.
    pub fn evaluate(&self, wavelength_nm: f64) -> Result<f64> {
        if matches!(self, Self::Line { .. }) {
            return Err(Error::UnsupportedModel(
                "a spectral line is a delta function and cannot be sampled",
            ));
        }
        check_wavelength(wavelength_nm)?;
        self.validate()?;
        Ok(self.density(wavelength_nm))
    }

    /// Unchecked evaluation for quadrature kernels. The model must be valid,
    /// not a `Line`, and `wavelength_nm > 0`.
    pub(crate) fn density(&self, wavelength_nm: f64) -> f64 {
        match self {
            Self::Planck { temperature } => planck_unchecked(wavelength_nm, *temperature),
            Self::TruncatedPlanck { temperature, range } => {
                if range.contains(wavelength_nm) {
                    planck_unchecked(wavelength_nm, *temperature)
                } else {
                    0.0
                }
            }
            Self::Flat { range } => {
                if range.contains(wavelength_nm) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Gaussian {
                center_nm,
                width_nm,
            } => {
                let u = (wavelength_nm - center_nm) / width_nm;
                (-0.5 * u * u).exp()
            }
            Self::Line { .. } => 0.0,
            Self::Sampled(s) => s.evaluate(wavelength_nm),
        }
    }
}

/// Free-function form of [`SpectrumModel::evaluate`].
pub fn evaluate_spectrum(model: &SpectrumModel, wavelength_nm: f64) -> Result<f64> {
    model.evaluate(wavelength_nm)
}

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature.is_finite() && temperature > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "temperature must be positive, got {temperature} K"
        )))
    }
}

fn check_wavelength(wavelength_nm: f64) -> Result<()> {
    if wavelength_nm.is_finite() && wavelength_nm > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "wavelength must be positive, got {wavelength_nm} nm"
        )))
    }
}

fn check_angular_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "angular frequency must be positive, got {omega} rad/s"
        )))
    }
}

/// `1/(e^x - 1)`, zero once `x` passes [`MAX_EXPONENT`].
fn bose_einstein(x: f64) -> f64 {
    if x > MAX_EXPONENT {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

pub(crate) fn planck_unchecked(wavelength_nm: f64, temperature: f64) -> f64 {
    let lambda = wavelength_nm * NM;
    let x = PLANCK * SPEED_OF_LIGHT / (lambda * BOLTZMANN * temperature);
    if x > MAX_EXPONENT {
        return 0.0;
    }
    2.0 * PLANCK * SPEED_OF_LIGHT * SPEED_OF_LIGHT / lambda.powi(5) * bose_einstein(x)
}

/// Black-body spectral radiance `2hc²/λ⁵ / (exp(hc/λk_BT) - 1)` in
/// W·m⁻²·sr⁻¹ per metre of wavelength.
pub fn planck_radiance(wavelength_nm: f64, temperature: f64) -> Result<f64> {
    check_wavelength(wavelength_nm)?;
    check_temperature(temperature)?;
    Ok(planck_unchecked(wavelength_nm, temperature))
}

/// Bose-Einstein occupancy of a photon mode at angular frequency `omega`.
pub fn photon_number_density(omega: f64, temperature: f64) -> Result<f64> {
    check_angular_frequency(omega)?;
    check_temperature(temperature)?;
    Ok(bose_einstein(HBAR * omega / (BOLTZMANN * temperature)))
}

/// Photon-gas energy density per unit angular frequency (J·m⁻³·s/rad).
pub fn energy_density_omega(omega: f64, temperature: f64) -> Result<f64> {
    check_angular_frequency(omega)?;
    check_temperature(temperature)?;
    let occupancy = bose_einstein(HBAR * omega / (BOLTZMANN * temperature));
    Ok(omega * omega / (PI * PI * SPEED_OF_LIGHT.powi(3)) * HBAR * omega * occupancy)
}

/// Photon-gas energy density per unit wavelength, `8πhc/λ⁵ / (exp(hc/λk_BT) - 1)`
/// in J·m⁻³ per metre.
pub fn energy_density_wavelength(wavelength_nm: f64, temperature: f64) -> Result<f64> {
    check_wavelength(wavelength_nm)?;
    check_temperature(temperature)?;
    let lambda = wavelength_nm * NM;
    let x = PLANCK * SPEED_OF_LIGHT / (lambda * BOLTZMANN * temperature);
    Ok(8.0 * PI * PLANCK * SPEED_OF_LIGHT / lambda.powi(5) * bose_einstein(x))
}

/// Angular frequency of light with the given vacuum wavelength.
pub fn angular_frequency(wavelength_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (wavelength_nm * NM)
}
