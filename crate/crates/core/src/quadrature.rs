//! Adaptive Simpson quadrature, the closed-form black-body integral, and
//! natural cubic splines.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{SampledSpectrum, BOLTZMANN, PLANCK, SPEED_OF_LIGHT};

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Uniform panels each interval is cut into before adaptive refinement starts.
const INITIAL_PANELS: usize = 16;

/// Finite integration interval with its accuracy requirements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSpec {
    pub a: f64,
    pub b: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl IntegrationSpec {
    /// Interval with the default tolerance and depth.
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            rel_tol: DEFAULT_REL_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(Error::domain(format!(
                "integration bounds must satisfy a < b, got [{}, {}]",
                self.a, self.b
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::domain(format!(
                "relative tolerance must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::domain("max_depth must be at least 1"));
        }
        Ok(())
    }
}

/// Integrates `f` over `[spec.a, spec.b]` by adaptive Simpson.
///
/// The tolerance is relative to the integral of `|f|`, estimated from the
/// initial panels, and is shared between panels in proportion to their width.
pub fn integrate<F>(f: F, spec: &IntegrationSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_piecewise(f, &[spec.a, spec.b], spec.rel_tol, spec.max_depth)
}

/// Like [`integrate`] but never lets a panel straddle one of the ascending
/// `breakpoints`; the first and last entries are the integration bounds.
pub fn integrate_piecewise<F>(f: F, breakpoints: &[f64], rel_tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if breakpoints.len() < 2 {
        return Err(Error::domain("at least two breakpoints are required"));
    }
    let a = breakpoints[0];
    let b = breakpoints[breakpoints.len() - 1];
    IntegrationSpec {
        a,
        b,
        rel_tol,
        max_depth,
    }
    .validate()?;
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("breakpoints must be strictly ascending"));
    }

    let segments = breakpoints.len() - 1;
    let per_segment = (INITIAL_PANELS / segments).max(2);
    let mut panels = Vec::with_capacity(segments * per_segment);
    for w in breakpoints.windows(2) {
        let h = (w[1] - w[0]) / per_segment as f64;
        for i in 0..per_segment {
            let lo = w[0] + h * i as f64;
            let hi = if i + 1 == per_segment { w[1] } else { lo + h };
            panels.push(Panel::new(&f, lo, hi)?);
        }
    }

    let magnitude: f64 = panels.iter().map(|p| p.abs_estimate).sum();
    if magnitude == 0.0 {
        return Ok(0.0);
    }
    let tolerance = rel_tol * magnitude;
    let width = b - a;

    let mut total = 0.0;
    for p in &panels {
        let eps = tolerance * (p.b - p.a) / width;
        total += refine(&f, p.a, p.b, p.fa, p.fm, p.fb, p.estimate, eps, max_depth, max_depth)?;
    }
    Ok(total)
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    estimate: f64,
    abs_estimate: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Self> {
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
            return Err(Error::domain(format!("integrand is not finite on [{a}, {b}]")));
        }
        let h = (b - a) / 6.0;
        Ok(Self {
            a,
            b,
            fa,
            fm,
            fb,
            estimate: h * (fa + 4.0 * fm + fb),
            abs_estimate: h * (fa.abs() + 4.0 * fm.abs() + fb.abs()),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth_left: u32,
    max_depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    let h = (b - a) / 12.0;
    let left = h * (fa + 4.0 * flm + fm);
    let right = h * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth_left == 0 {
        return Err(Error::NonConvergence { a, b, max_depth });
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * eps, depth_left - 1, max_depth)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * eps, depth_left - 1, max_depth)?;
    Ok(l + r)
}

/// Black-body radiance integrated over all wavelengths,
/// `(2π⁴/15)·k_B⁴T⁴/(h³c²)` in W·m⁻²·sr⁻¹.
pub fn total_planck_radiance(temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::domain(format!(
            "temperature must be positive, got {temperature} K"
        )));
    }
    let kt = BOLTZMANN * temperature;
    Ok(2.0 * PI.powi(4) / 15.0 * kt.powi(4) / (PLANCK.powi(3) * SPEED_OF_LIGHT.powi(2)))
}

/// Piecewise cubic interpolant with zero second derivative at both ends.
///
/// On `[x_i, x_{i+1}]` the value is `a + b·t + c·t² + d·t³` with `t = x - x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    coefficients: Vec<[f64; 4]>,
    last_value: f64,
}

impl CubicSpline {
    pub fn fit(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::InvalidSpectrum(format!(
                "{n} knots but {} values",
                y.len()
            )));
        }
        if n < 4 {
            return Err(Error::InvalidSpectrum(format!(
                "a cubic spline needs at least 4 knots, got {n}"
            )));
        }
        if let Some(w) = x.windows(2).find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidSpectrum(format!(
                "knots must be strictly ascending, found {} then {}",
                w[0], w[1]
            )));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite knot or value".into()));
        }

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // Tridiagonal system for interior second derivatives (Thomas algorithm).
        let m_inner = n - 2;
        let mut diag = vec![0.0; m_inner];
        let mut upper = vec![0.0; m_inner];
        let mut rhs = vec![0.0; m_inner];
        for k in 0..m_inner {
            let i = k + 1;
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            upper[k] = h[i];
            rhs[k] = 6.0 * (slope[i] - slope[i - 1]);
        }
        for k in 1..m_inner {
            let w = h[k] / diag[k - 1];
            diag[k] -= w * upper[k - 1];
            rhs[k] -= w * rhs[k - 1];
        }
        let mut second = vec![0.0; n];
        for k in (0..m_inner).rev() {
            let next = if k + 1 < m_inner { second[k + 2] } else { 0.0 };
            second[k + 1] = (rhs[k] - upper[k] * next) / diag[k];
        }

        let coefficients = (0..n - 1)
            .map(|i| {
                let (m0, m1) = (second[i], second[i + 1]);
                [
                    y[i],
                    slope[i] - h[i] * (2.0 * m0 + m1) / 6.0,
                    0.5 * m0,
                    (m1 - m0) / (6.0 * h[i]),
                ]
            })
            .collect();

        Ok(Self {
            knots: x.to_vec(),
            coefficients,
            last_value: y[n - 1],
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Per-interval `[a, b, c, d]` in powers of the offset from the left knot.
    pub fn coefficients(&self) -> &[[f64; 4]] {
        &self.coefficients
    }

    /// Evaluates the interpolant; outside the knot range the end cubics are
    /// extended.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x == self.knots[n - 1] {
            return self.last_value;
        }
        let i = self
            .knots
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(n - 2);
        let t = x - self.knots[i];
        let [a, b, c, d] = self.coefficients[i];
        a + t * (b + t * (c + t * d))
    }

    /// Second derivative of the interpolant.
    pub fn second_derivative(&self, x: f64) -> f64 {
        let n = self.knots.len();
        let i = self
            .knots
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(n - 2);
        let t = x - self.knots[i];
        let [_, _, c, d] = self.coefficients[i];
        2.0 * c + 6.0 * d * t
    }
}

/// Natural cubic spline through the samples of `data`.
pub fn spline_fit(data: &SampledSpectrum) -> CubicSpline {
    data.spline().clone()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::spectral::planck_radiance;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn planck_integral(t: f64) -> f64 {
        // f_B is per metre, the variable is nm.
        integrate(
            |w| planck_radiance(w, t).unwrap() * 1e-9,
            &IntegrationSpec::new(10.0, 1e6),
        )
        .unwrap()
    }

    #[test]
    fn quadratic_is_exact() {
        let v = integrate(|x| x * x, &IntegrationSpec::new(0.0, 1.0)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(
            |w: f64| (-(w - 555.0).powi(2) / 200.0).exp(),
            &IntegrationSpec::new(300.0, 900.0),
        )
        .unwrap();
        assert_relative_eq!(v, 10.0 * (2.0 * PI).sqrt(), max_relative = 1e-8);
    }

    #[test]
    fn stefan_boltzmann_closed_form() {
        for t in [1800.0, 2042.0, 3000.0, 6000.0, 9300.0] {
            let ratio = planck_integral(t) / total_planck_radiance(t).unwrap();
            assert!((ratio - 1.0).abs() < 1e-4, "T={t}: ratio {ratio}");
        }
    }

    #[test]
    fn total_radiance_closed_form() {
        // 50-digit evaluation of (2π⁴/15)k⁴T⁴/(h³c²) at 2042 K.
        assert_relative_eq!(
            total_planck_radiance(2042.0).unwrap(),
            313_823.032_668_383_990_989_230_1,
            max_relative = 1e-13
        );
        let one = total_planck_radiance(2500.0).unwrap();
        let two = total_planck_radiance(5000.0).unwrap();
        assert_relative_eq!(two / one, 16.0, max_relative = 1e-14);
        assert!(total_planck_radiance(0.0).is_err());
    }

    #[test]
    fn step_function_does_not_converge() {
        let spec = IntegrationSpec::new(0.0, 1.0).with_max_depth(20);
        let r = integrate(|x| if x < 0.3 { 0.0 } else { 1.0 }, &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
        // A kink placed on a breakpoint is integrated exactly.
        let v = integrate_piecewise(|x: f64| (x - 0.3).max(0.0), &[0.0, 0.3, 1.0], 1e-8, 20).unwrap();
        assert_relative_eq!(v, 0.245, max_relative = 1e-12);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(integrate(|x| x, &IntegrationSpec::new(1.0, 0.0)).is_err());
        assert!(integrate(|x| x, &IntegrationSpec::new(0.0, 1.0).with_rel_tol(0.0)).is_err());
        assert!(integrate(|x| x, &IntegrationSpec::new(0.0, 1.0).with_max_depth(0)).is_err());
        assert!(integrate(|_| f64::NAN, &IntegrationSpec::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn spline_reproduces_affine_data() {
        let x: Vec<f64> = (0..20).map(|i| 400.0 + 7.5 * i as f64 + (i % 3) as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let s = CubicSpline::fit(&x, &y).unwrap();
        let mut w = x[0];
        while w <= x[x.len() - 1] {
            assert!((s.eval(w) - (2.0 * w + 1.0)).abs() < 1e-9);
            w += 0.37;
        }
    }

    #[test]
    fn spline_hits_knots_and_is_natural() {
        let x: Vec<f64> = (0..15).map(|i| 380.0 + 10.0 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| (v / 37.0).cos() + 2.0).collect();
        let s = CubicSpline::fit(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_relative_eq!(s.eval(*xi), *yi, max_relative = 1e-12);
        }
        assert!(s.second_derivative(x[0]).abs() < 1e-12);
        assert!(s.second_derivative(x[14]).abs() < 1e-12);
    }

    #[test]
    fn spline_tracks_sine() {
        let x: Vec<f64> = (0..=80).map(|i| 380.0 + 5.0 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| (v / 50.0).sin()).collect();
        let s = CubicSpline::fit(&x, &y).unwrap();
        let err = |lo: f64, hi: f64| {
            (0..=40_000)
                .map(|i| lo + (hi - lo) * i as f64 / 40_000.0)
                .map(|w| (s.eval(w) - (w / 50.0).sin()).abs())
                .fold(0.0f64, f64::max)
        };
        // The natural end condition forces s'' = 0 where sin'' is not, which
        // costs accuracy in the outer knot intervals only.
        assert!(err(400.0, 760.0) < 1e-5);
        assert!(err(380.0, 780.0) < 1e-3);
    }

    #[test]
    fn spline_rejects_bad_knots() {
        assert!(CubicSpline::fit(&[1.0, 2.0, 3.0], &[0.0; 3]).is_err());
        assert!(CubicSpline::fit(&[1.0, 3.0, 2.0, 4.0], &[0.0; 4]).is_err());
        assert!(CubicSpline::fit(&[1.0, 2.0, 2.0, 4.0], &[0.0; 4]).is_err());
    }

    fn noise_spline(values: &[f64]) -> CubicSpline {
        let x: Vec<f64> = (0..values.len()).map(|i| 10.0 * i as f64).collect();
        CubicSpline::fit(&x, values).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn integral_is_linear(
            fv in prop::collection::vec(-1.0..1.0f64, 8),
            gv in prop::collection::vec(-1.0..1.0f64, 8),
            alpha in -3.0..3.0f64,
            beta in -3.0..3.0f64,
        ) {
            let (f, g) = (noise_spline(&fv), noise_spline(&gv));
            let spec = IntegrationSpec::new(0.0, 70.0);
            let knots: Vec<f64> = (0..8).map(|i| 10.0 * i as f64).collect();
            let i = |h: &dyn Fn(f64) -> f64| integrate_piecewise(h, &knots, spec.rel_tol, spec.max_depth).unwrap();
            let combined = i(&|x| alpha * f.eval(x) + beta * g.eval(x));
            let separate = alpha * i(&|x| f.eval(x)) + beta * i(&|x| g.eval(x));
            let scale = i(&|x| (alpha * f.eval(x)).abs() + (beta * g.eval(x)).abs()).max(1e-300);
            prop_assert!((combined - separate).abs() <= 2.0 * spec.rel_tol * scale);
        }

        #[test]
        fn integral_is_additive(
            fv in prop::collection::vec(0.0..1.0f64, 8),
            split in 1.0..69.0f64,
        ) {
            let f = noise_spline(&fv);
            let whole = integrate(|x| f.eval(x), &IntegrationSpec::new(0.0, 70.0)).unwrap();
            let left = integrate(|x| f.eval(x), &IntegrationSpec::new(0.0, split)).unwrap();
            let right = integrate(|x| f.eval(x), &IntegrationSpec::new(split, 70.0)).unwrap();
            prop_assert!((whole - left - right).abs() <= 2.0 * DEFAULT_REL_TOL * whole.abs().max(1e-300));
        }
    }
}
