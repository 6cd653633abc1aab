//! Largest photometric efficacy attainable at a fixed chromaticity.
//!
//! The spectrum is discretised onto the colour matching grid, `P_i ≥ 0`
//! at wavelengths `λ_i` spaced `Δλ` apart, and the linear program
//!
//! ```text
//! maximise   Σ K_m·ȳ_i·P_i
//! subject to Δλ·Σ P_i = 1
//!            Σ P_i·(x_c·(x̄_i + ȳ_i + z̄_i) − x̄_i) = 0
//!            Σ P_i·(y_c·(x̄_i + ȳ_i + z̄_i) − ȳ_i) = 0
//! ```
//!
//! is solved by two-phase simplex. The reported efficacy is
//! `K_m·Δλ·Σ ȳ_i·P_i` in lm/W. An optimal vertex has at most three nonzero
//! `P_i`, i.e. the best spectrum is made of at most three lines.

pub mod simplex;

use rayon::prelude::*;

use crate::colorimetry::{Chromaticity, CmfTable, SpectralLocus};
use crate::error::{Error, Result};
use simplex::Outcome;

/// Pivots allowed per variable before the solver gives up.
pub const PIVOTS_PER_VARIABLE: usize = 50;

/// Powers at or below this fraction of the largest are not reported.
pub const SUPPORT_THRESHOLD: f64 = 1e-9;

pub const MAX_GRID_STEP: f64 = 0.05;

/// Equality-form linear program for one target chromaticity.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    target: Chromaticity,
    km: f64,
    delta_lambda: f64,
    wavelengths_nm: Vec<f64>,
    objective: Vec<f64>,
    constraints: [Vec<f64>; 3],
    rhs: [f64; 3],
}

impl LpProblem {
    /// Builds the program from explicit `(λ_i, [x̄_i, ȳ_i, z̄_i])` columns.
    pub fn from_samples(
        target: Chromaticity,
        samples: &[(f64, [f64; 3])],
        km: f64,
        delta_lambda: f64,
    ) -> Result<Self> {
        if !(target.x.is_finite() && target.y.is_finite()) {
            return Err(Error::InvalidProblem("target chromaticity is not finite".into()));
        }
        if !(km.is_finite() && km > 0.0) {
            return Err(Error::InvalidProblem(format!("K_m must be positive, got {km}")));
        }
        if !(delta_lambda.is_finite() && delta_lambda > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "Δλ must be positive, got {delta_lambda}"
            )));
        }
        if samples.len() < 4 {
            return Err(Error::InvalidProblem(format!(
                "at least 4 wavelengths are required, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|(_, c)| c.iter().any(|v| *v < 0.0 || !v.is_finite())) {
            return Err(Error::InvalidProblem(
                "colour matching values must be non-negative".into(),
            ));
        }

        let mut normalization = Vec::with_capacity(samples.len());
        let mut x_row = Vec::with_capacity(samples.len());
        let mut y_row = Vec::with_capacity(samples.len());
        for (_, [xb, yb, zb]) in samples {
            let sum = xb + yb + zb;
            normalization.push(delta_lambda);
            x_row.push(target.x * sum - xb);
            y_row.push(target.y * sum - yb);
        }
        Ok(Self {
            target,
            km,
            delta_lambda,
            wavelengths_nm: samples.iter().map(|(w, _)| *w).collect(),
            objective: samples.iter().map(|(_, c)| km * c[1]).collect(),
            constraints: [normalization, x_row, y_row],
            rhs: [1.0, 0.0, 0.0],
        })
    }

    pub fn target(&self) -> Chromaticity {
        self.target
    }

    pub fn km(&self) -> f64 {
        self.km
    }

    pub fn delta_lambda(&self) -> f64 {
        self.delta_lambda
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    /// `c_i = K_m·ȳ_i`.
    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Rows: normalisation, x-chromaticity, y-chromaticity.
    pub fn constraints(&self) -> &[Vec<f64>; 3] {
        &self.constraints
    }

    pub fn rhs(&self) -> [f64; 3] {
        self.rhs
    }

    pub fn len(&self) -> usize {
        self.wavelengths_nm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths_nm.is_empty()
    }
}

/// Discretises the max-efficacy problem on `cmf`, taking every
/// `Δλ / spacing`-th table row.
pub fn build_problem(
    target: Chromaticity,
    cmf: &CmfTable,
    km: f64,
    delta_lambda: f64,
) -> Result<LpProblem> {
    let ratio = delta_lambda / cmf.spacing();
    let stride = ratio.round();
    if !(stride >= 1.0 && (ratio - stride).abs() <= 1e-9 * ratio) {
        return Err(Error::InvalidProblem(format!(
            "Δλ = {delta_lambda} nm is not a multiple of the {} nm table spacing",
            cmf.spacing()
        )));
    }
    let samples: Vec<(f64, [f64; 3])> = (0..cmf.len())
        .step_by(stride as usize)
        .map(|i| (cmf.wavelengths_nm()[i], cmf.row(i)))
        .collect();
    LpProblem::from_samples(target, &samples, km, delta_lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// One line of an optimal spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub wavelength_nm: f64,
    /// Power density `P_i`; `P_i·Δλ` is its share of the total power.
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Maximum efficacy (lm/W); NaN unless optimal.
    pub objective_value: f64,
    /// Lines above [`SUPPORT_THRESHOLD`], ascending in wavelength.
    pub support: Vec<SpectralLine>,
    /// Full `P_i` vector, empty unless optimal.
    pub powers: Vec<f64>,
}

impl LpSolution {
    fn without_solution(status: LpStatus) -> Self {
        Self {
            status,
            objective_value: f64::NAN,
            support: Vec::new(),
            powers: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn simplex_solve(problem: &LpProblem) -> Result<LpSolution> {
    let max_pivots = PIVOTS_PER_VARIABLE * problem.len();
    let outcome = simplex::solve(
        problem.constraints(),
        &problem.rhs,
        problem.objective(),
        max_pivots,
    )?;
    Ok(match outcome {
        Outcome::Infeasible => LpSolution::without_solution(LpStatus::Infeasible),
        Outcome::Unbounded => LpSolution::without_solution(LpStatus::Unbounded),
        Outcome::Optimal { x, objective } => {
            let largest = x.iter().copied().fold(0.0, f64::max);
            let support = x
                .iter()
                .zip(&problem.wavelengths_nm)
                .filter(|(p, _)| **p > SUPPORT_THRESHOLD * largest)
                .map(|(&power, &wavelength_nm)| SpectralLine {
                    wavelength_nm,
                    power,
                })
                .collect();
            LpSolution {
                status: LpStatus::Optimal,
                objective_value: problem.delta_lambda * objective,
                support,
                powers: x,
            }
        }
    })
}

/// [`build_problem`] followed by [`simplex_solve`].
pub fn max_per(
    target: Chromaticity,
    cmf: &CmfTable,
    km: f64,
    delta_lambda: f64,
) -> Result<LpSolution> {
    simplex_solve(&build_problem(target, cmf, km, delta_lambda)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoPerRow {
    pub x: f64,
    pub y: f64,
    /// `None` outside the spectral gamut.
    pub max_per: Option<f64>,
}

/// Maximum efficacy sampled on a square chromaticity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoPerGrid {
    pub grid_step: f64,
    /// Row-major over `[0, 1]²`: `y` outer, `x` inner.
    pub rows: Vec<IsoPerRow>,
}

impl IsoPerGrid {
    pub fn in_gamut(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.rows
            .iter()
            .filter_map(|r| r.max_per.map(|v| (r.x, r.y, v)))
    }

    /// In-gamut row with the largest efficacy.
    pub fn maximum(&self) -> Option<(f64, f64, f64)> {
        self.in_gamut()
            .fold(None, |best: Option<(f64, f64, f64)>, row| match best {
                Some(b) if b.2 >= row.2 => Some(b),
                _ => Some(row),
            })
    }
}

pub fn iso_per_scan(
    grid_step: f64,
    cmf: &CmfTable,
    km: f64,
    delta_lambda: f64,
) -> Result<IsoPerGrid> {
    if !(grid_step > 0.0 && grid_step <= MAX_GRID_STEP) {
        return Err(Error::domain(format!(
            "grid step must lie in (0, {MAX_GRID_STEP}], got {grid_step}"
        )));
    }
    // Validate Δλ once up front rather than per grid point.
    build_problem(Chromaticity::new(1.0 / 3.0, 1.0 / 3.0), cmf, km, delta_lambda)?;

    let locus = SpectralLocus::new(cmf);
    let n = (1.0 / grid_step + 1e-9).floor() as usize;
    let points: Vec<(f64, f64)> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| (i as f64 * grid_step, j as f64 * grid_step)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(x, y)| {
            let target = Chromaticity::new(x, y);
            if !locus.contains(&target) {
                return Ok(IsoPerRow { x, y, max_per: None });
            }
            let solution = max_per(target, cmf, km, delta_lambda)?;
            Ok(IsoPerRow {
                x,
                y,
                max_per: solution.is_optimal().then_some(solution.objective_value),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IsoPerGrid { grid_step, rows })
}
