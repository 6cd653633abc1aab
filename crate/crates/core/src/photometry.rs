//! Eye-sensitivity weighting, the mechanical equivalent of the lumen, and
//! photometric efficacy (lumens per radiant watt) of spectrum models.

use rayon::prelude::*;

use crate::colorimetry::CmfTable;
use crate::error::{Error, Result};
use crate::quadrature::{self, integrate_piecewise, DEFAULT_MAX_DEPTH, DEFAULT_REL_TOL};
use crate::spectral::{SpectrumModel, WavelengthRange};

/// SI-adopted mechanical equivalent of the lumen (lm/W).
pub const ADOPTED_KM: f64 = 683.0;

/// Freezing point of platinum used by the pre-1979 candela (K).
pub const PLATINUM_FREEZING_POINT: f64 = 2042.0;

/// 60 cd/cm² expressed per square metre (lm·m⁻²·sr⁻¹).
pub const PLATINUM_LUMINANCE: f64 = 6.0e5;

/// Band outside which both analytic sensitivity curves are negligible; the
/// black-body numerators are integrated over it.
pub const ANALYTIC_SUPPORT: WavelengthRange = WavelengthRange::EXTENDED_VISIBLE;

const NM: f64 = 1e-9;

/// Linearly interpolated sensitivity table, zero outside its range.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCurve {
    wavelengths_nm: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedCurve {
    pub fn new(wavelengths_nm: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if wavelengths_nm.len() != values.len() || wavelengths_nm.len() < 2 {
            return Err(Error::Validation(
                "a tabulated curve needs at least two (wavelength, value) pairs".into(),
            ));
        }
        if wavelengths_nm.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::Validation(
                "tabulated wavelengths must be strictly ascending".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Validation(format!(
                "tabulated sensitivity {v} lies outside [0, 1]"
            )));
        }
        Ok(Self {
            wavelengths_nm,
            values,
        })
    }

    /// The ȳ column of a colour matching table.
    pub fn from_cmf(cmf: &CmfTable) -> Result<Self> {
        Self::new(cmf.wavelengths_nm().to_vec(), cmf.ybar().to_vec())
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn range(&self) -> WavelengthRange {
        WavelengthRange::new(
            self.wavelengths_nm[0],
            self.wavelengths_nm[self.wavelengths_nm.len() - 1],
        )
        .expect("validated on construction")
    }

    pub fn eval(&self, wavelength_nm: f64) -> f64 {
        linear_interp(&self.wavelengths_nm, &self.values, wavelength_nm)
    }
}

/// Linear interpolation on ascending `xs`, zero outside `[xs[0], xs[n-1]]`.
pub(crate) fn linear_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if !(x >= xs[0] && x <= xs[n - 1]) {
        return 0.0;
    }
    let hi = xs.partition_point(|&k| k < x).clamp(1, n - 1);
    let lo = hi - 1;
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + t * (ys[hi] - ys[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub enum LuminosityFunction {
    /// Daylight sensitivity `1.019·exp(-285·(λ/1000 - 0.559)²)`.
    PhotopicAnalytic,
    /// Dark-adapted sensitivity `0.992·exp(-321.9·(λ/1000 - 0.503)²)`.
    ScotopicAnalytic,
    Tabulated(TabulatedCurve),
}

impl LuminosityFunction {
    pub fn tabulated_from_cmf(cmf: &CmfTable) -> Result<Self> {
        TabulatedCurve::from_cmf(cmf).map(Self::Tabulated)
    }

    pub fn eval(&self, wavelength_nm: f64) -> f64 {
        match self {
            Self::PhotopicAnalytic => {
                let u = wavelength_nm / 1000.0 - 0.559;
                1.019 * (-285.0 * u * u).exp()
            }
            Self::ScotopicAnalytic => {
                let u = wavelength_nm / 1000.0 - 0.503;
                0.992 * (-321.9 * u * u).exp()
            }
            Self::Tabulated(curve) => curve.eval(wavelength_nm),
        }
    }

    /// Peak sensitivity.
    pub fn max_value(&self) -> f64 {
        match self {
            Self::PhotopicAnalytic => 1.019,
            Self::ScotopicAnalytic => 0.992,
            Self::Tabulated(curve) => curve.values.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Wavelengths outside which the weighting is treated as zero.
    pub fn support(&self) -> WavelengthRange {
        match self {
            Self::PhotopicAnalytic | Self::ScotopicAnalytic => ANALYTIC_SUPPORT,
            Self::Tabulated(curve) => curve.range(),
        }
    }

    fn knots(&self) -> &[f64] {
        match self {
            Self::Tabulated(curve) => &curve.wavelengths_nm,
            _ => &[],
        }
    }
}

/// Free-function form of [`LuminosityFunction::eval`].
pub fn luminosity(v: &LuminosityFunction, wavelength_nm: f64) -> f64 {
    v.eval(wavelength_nm)
}

/// Photometric efficacy of a source and its share of the 683 lm/W ideal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficacyResult {
    /// lm/W
    pub per: f64,
    pub efficiency: f64,
}

impl EfficacyResult {
    pub fn from_per(per: f64) -> Self {
        Self {
            per,
            efficiency: per / ADOPTED_KM,
        }
    }

    /// Overall efficiency once photon production efficacy `eta_c` is applied.
    pub fn overall_efficiency(&self, eta_c: f64) -> f64 {
        self.efficiency * eta_c
    }
}

/// Ascending breakpoints covering `range`, including every interior knot.
pub(crate) fn breakpoints(range: &WavelengthRange, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut points: Vec<f64> = interior
        .into_iter()
        .filter(|w| *w > range.min_nm() && *w < range.max_nm())
        .collect();
    points.push(range.min_nm());
    points.push(range.max_nm());
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// `∫ P(λ)·V(λ) dλ` over `range` (nm), with the spectrum evaluated as given.
pub(crate) fn weighted_integral(
    model: &SpectrumModel,
    v: &LuminosityFunction,
    range: &WavelengthRange,
) -> Result<f64> {
    let points = breakpoints(
        range,
        model
            .breakpoints_in(range)
            .into_iter()
            .chain(v.knots().iter().copied()),
    );
    integrate_piecewise(
        |w| model.density(w) * v.eval(w),
        &points,
        DEFAULT_REL_TOL,
        DEFAULT_MAX_DEPTH,
    )
}

/// `∫ P(λ) dλ` over `range` (nm).
pub(crate) fn power_integral(model: &SpectrumModel, range: &WavelengthRange) -> Result<f64> {
    let points = breakpoints(range, model.breakpoints_in(range));
    integrate_piecewise(|w| model.density(w), &points, DEFAULT_REL_TOL, DEFAULT_MAX_DEPTH)
}

/// `∫ f_B(λ, T)·V(λ) dλ` in W·m⁻²·sr⁻¹ over the sensitivity support.
pub fn planck_luminous_integral(temperature: f64, v: &LuminosityFunction) -> Result<f64> {
    let model = SpectrumModel::planck(temperature)?;
    let range = v
        .support()
        .intersect(&ANALYTIC_SUPPORT)
        .ok_or(Error::ZeroDenominator { a: 300.0, b: 900.0 })?;
    Ok(weighted_integral(&model, v, &range)? * NM)
}

/// Mechanical equivalent of the lumen from a black-body luminance standard:
/// `luminance / ∫ f_B(λ, T)·V(λ) dλ`.
pub fn km_from_standard(v: &LuminosityFunction, luminance: f64, temperature: f64) -> Result<f64> {
    if matches!(v, LuminosityFunction::ScotopicAnalytic) {
        return Err(Error::domain(
            "the lumen is calibrated against photopic sensitivity",
        ));
    }
    let denominator = planck_luminous_integral(temperature, v)?;
    if denominator <= 0.0 {
        return Err(Error::ZeroDenominator { a: 300.0, b: 900.0 });
    }
    Ok(luminance / denominator)
}

/// K_m from 60 cd/cm² at the platinum point.
pub fn compute_km(v: &LuminosityFunction) -> Result<f64> {
    km_from_standard(v, PLATINUM_LUMINANCE, PLATINUM_FREEZING_POINT)
}

/// Photometric efficacy ratio `K_m·∫P·V / ∫P`.
///
/// Bounded models integrate over their support clipped to `range`. The full
/// black body ignores `range`: its denominator is the exact integral over all
/// wavelengths. A spectral line yields `K_m·V(λ0)` and must lie inside
/// `range`.
pub fn per(
    model: &SpectrumModel,
    v: &LuminosityFunction,
    range: WavelengthRange,
    km: f64,
) -> Result<EfficacyResult> {
    model.validate()?;
    check_km(km)?;
    let value = match model {
        SpectrumModel::Planck { temperature } => {
            let numerator = planck_luminous_integral(*temperature, v)?;
            let denominator = quadrature::total_planck_radiance(*temperature)?;
            if denominator == 0.0 {
                return Err(Error::ZeroDenominator {
                    a: 0.0,
                    b: f64::INFINITY,
                });
            }
            km * numerator / denominator
        }
        SpectrumModel::Line { wavelength_nm } => {
            if !range.contains(*wavelength_nm) {
                return Err(Error::domain(format!(
                    "line at {wavelength_nm} nm lies outside [{}, {}] nm",
                    range.min_nm(),
                    range.max_nm()
                )));
            }
            km * v.eval(*wavelength_nm)
        }
        _ => {
            let support = model.support().expect("bounded model");
            let domain = support.intersect(&range).ok_or(Error::ZeroDenominator {
                a: range.min_nm(),
                b: range.max_nm(),
            })?;
            let denominator = power_integral(model, &domain)?;
            if denominator <= 0.0 {
                return Err(Error::ZeroDenominator {
                    a: domain.min_nm(),
                    b: domain.max_nm(),
                });
            }
            let numerator = match v.support().intersect(&domain) {
                Some(overlap) => weighted_integral(model, v, &overlap)?,
                None => 0.0,
            };
            km * numerator / denominator
        }
    };
    Ok(EfficacyResult::from_per(value))
}

fn check_km(km: f64) -> Result<()> {
    if km.is_finite() && km > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("K_m must be positive, got {km}")))
    }
}

/// Efficacy of black bodies over a temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanckSweep {
    /// `(T, per)` in ascending temperature.
    pub rows: Vec<(f64, f64)>,
}

impl PlanckSweep {
    /// Row with the largest efficacy; the lowest temperature wins ties.
    pub fn argmax(&self) -> (f64, f64) {
        self.rows
            .iter()
            .copied()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, row| {
                if row.1 > best.1 {
                    row
                } else {
                    best
                }
            })
    }
}

/// Temperatures `t_min, t_min + step, …` not exceeding `t_max`.
pub fn temperature_grid(t_min: f64, t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_min.is_finite() && t_max.is_finite() && t_min > 0.0 && t_min <= t_max) {
        return Err(Error::domain(format!(
            "temperature range must satisfy 0 < T_min <= T_max, got [{t_min}, {t_max}]"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    let count = ((t_max - t_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| t_min + step * i as f64).collect())
}

pub fn per_sweep_planck(
    t_min: f64,
    t_max: f64,
    step: f64,
    v: &LuminosityFunction,
    km: f64,
) -> Result<PlanckSweep> {
    let temperatures = temperature_grid(t_min, t_max, step)?;
    let rows = temperatures
        .par_iter()
        .map(|&t| {
            let model = SpectrumModel::planck(t)?;
            per(&model, v, WavelengthRange::VISIBLE, km).map(|r| (t, r.per))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlanckSweep { rows })
}

/// Lumens emitted by a source radiating `radiant_power` watts.
pub fn luminous_flux(
    model: &SpectrumModel,
    radiant_power: f64,
    v: &LuminosityFunction,
    km: f64,
    range: WavelengthRange,
) -> Result<f64> {
    if !(radiant_power.is_finite() && radiant_power >= 0.0) {
        return Err(Error::domain(format!(
            "radiant power must be non-negative, got {radiant_power} W"
        )));
    }
    Ok(radiant_power * per(model, v, range, km)?.per)
}
