//! Photometric efficacy of light sources.
//!
//! Spectral models (blackbody, truncated blackbody, flat, Gaussian, single
//! line, tabulated), adaptive quadrature, luminous efficacy of radiation,
//! CIE 1931 colorimetry and the linear program for the largest efficacy
//! reachable at a given chromaticity.

pub mod colorimetry;
mod csvio;
pub mod error;
pub mod maxper;
pub mod photometry;
pub mod quadrature;
pub mod spectral;

pub use colorimetry::{
    chromaticity, in_gamut, load_cmf, planckian_locus, spectrum_chromaticity, tristimulus,
    Chromaticity, CmfTable, SpectralLocus, Tristimulus,
};
pub use error::{Error, Result};
pub use maxper::{
    build_problem, iso_per_scan, max_per, simplex_solve, IsoPerGrid, LpProblem, LpSolution,
    LpStatus,
};
pub use photometry::{compute_km, luminosity, per, per_sweep_planck, EfficacyResult, LuminosityFunction};
pub use quadrature::{integrate, spline_fit, CubicSpline, IntegrationSpec};
pub use spectral::{
    evaluate_spectrum, planck_radiance, SampledSpectrum, SpectrumModel, WavelengthRange,
};
