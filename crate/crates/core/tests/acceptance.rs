//! Release acceptance checks. Each criterion prints one PASS/FAIL line;
//! the target fails if any criterion does.

mod common;

use std::f64::consts::PI;

use common::{enumerate_bases, random_instance, relative_difference};
use lumen_core::colorimetry::{spectrum_chromaticity, Chromaticity, CmfTable};
use lumen_core::maxper::{iso_per_scan, max_per, simplex_solve, LpStatus};
use lumen_core::photometry::{
    compute_km, luminous_flux, per, per_sweep_planck, LuminosityFunction, ADOPTED_KM,
};
use lumen_core::quadrature::{integrate, total_planck_radiance, IntegrationSpec};
use lumen_core::spectral::{
    angular_frequency, energy_density_omega, energy_density_wavelength, planck_radiance,
    SampledSpectrum, SpectrumModel, WavelengthRange, SPEED_OF_LIGHT,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const V: LuminosityFunction = LuminosityFunction::PhotopicAnalytic;
const VISIBLE: WavelengthRange = WavelengthRange::VISIBLE;

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn check(&mut self, id: &str, passed: bool, detail: String) {
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id}: {detail}");
        if !passed {
            self.failures.push(id.to_string());
        }
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn per_of(model: SpectrumModel, km: f64) -> f64 {
    per(&model, &V, VISIBLE, km).unwrap().per
}

fn km_value(r: &mut Report) {
    let km = compute_km(&V).unwrap();
    r.check("1", within(km, 679.0, 2.0), format!("K_m = {km:.3} lm/W, expected 679 ± 2"));
}

fn black_bodies(r: &mut Report) {
    let cases = [(6000.0, 93.0, 2.0), (3000.0, 15.0, 2.0), (1800.0, 0.6, 0.2)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (t, expected, tol) in cases {
        let v = per_of(SpectrumModel::planck(t).unwrap(), ADOPTED_KM);
        ok &= within(v, expected, tol);
        parts.push(format!("{t} K -> {v:.3} (want {expected} ± {tol})"));
    }
    r.check("2", ok, parts.join("; "));
}

fn sweep_peak(r: &mut Report) {
    let sweep = per_sweep_planck(1000.0, 10_000.0, 10.0, &V, ADOPTED_KM).unwrap();
    let (t, value) = sweep.argmax();
    r.check(
        "3",
        within(value, 95.0, 3.0) && within(t, 7000.0, 300.0),
        format!("max {value:.3} lm/W at {t} K, expected 95 ± 3 at 7000 ± 300 K"),
    );
}

fn truncated_black_body(r: &mut Report) {
    let v = per_of(SpectrumModel::truncated_planck(5800.0, 400.0, 700.0).unwrap(), ADOPTED_KM);
    r.check("4", within(v, 250.0, 10.0), format!("{v:.3} lm/W, expected 250 ± 10"));
}

fn equal_energy(r: &mut Report) {
    let v = per_of(SpectrumModel::flat(380.0, 780.0).unwrap(), ADOPTED_KM);
    r.check("5", within(v, 179.0, 5.0), format!("{v:.3} lm/W, expected 179 ± 5"));
}

fn blue_led(r: &mut Report) {
    let v = per_of(SpectrumModel::gaussian(450.0, 20.0).unwrap(), ADOPTED_KM);
    let s2: f64 = 1e6 / 570.0;
    let w2 = 400.0;
    let oracle = ADOPTED_KM * 1.019 * (s2 / (s2 + w2)).sqrt()
        * (-(450.0f64 - 559.0).powi(2) / (2.0 * (s2 + w2))).exp();
    let rel = relative_difference(v, oracle);
    r.check(
        "6",
        within(v, 39.7, 1.0) && rel < 5e-3,
        format!("{v:.3} lm/W (want 39.7 ± 1); closed form {oracle:.3}, rel diff {rel:.2e} (< 5e-3)"),
    );
}

fn monochromatic(r: &mut Report) {
    let cmf = CmfTable::cie1931_2deg();
    let tab = LuminosityFunction::tabulated_from_cmf(&cmf).unwrap();
    let at_555 = per(&SpectrumModel::line(555.0).unwrap(), &tab, VISIBLE, ADOPTED_KM)
        .unwrap()
        .per;
    let flux = luminous_flux(&SpectrumModel::line(570.0).unwrap(), 0.05, &V, ADOPTED_KM, VISIBLE)
        .unwrap();
    r.check(
        "7",
        relative_difference(at_555, 683.0) < 1e-12 && (28.0..=35.0).contains(&flux),
        format!("Line(555) -> {at_555} lm/W (want 683); 50 mW at 570 nm -> {flux:.3} lm (want [28, 35])"),
    );
}

fn white_point(r: &mut Report) {
    let cmf = CmfTable::cie1931_2deg();
    let c = spectrum_chromaticity(&SpectrumModel::flat(380.0, 780.0).unwrap(), &cmf).unwrap();
    r.check(
        "8",
        within(c.x, 1.0 / 3.0, 0.01) && within(c.y, 1.0 / 3.0, 0.01),
        format!("({:.5}, {:.5}), expected (1/3, 1/3) ± 0.01", c.x, c.y),
    );
}

fn lp_extremes(r: &mut Report) {
    let cmf = CmfTable::cie1931_2deg();
    let white = max_per(Chromaticity::new(1.0 / 3.0, 1.0 / 3.0), &cmf, ADOPTED_KM, 5.0).unwrap();
    let grid = iso_per_scan(0.01, &cmf, ADOPTED_KM, 5.0).unwrap();
    let (gx, gy, gmax) = grid.maximum().unwrap();
    let i555 = cmf.wavelengths_nm().iter().position(|&w| w == 555.0).unwrap();
    let p555 = cmf.locus_point(i555).unwrap();
    let distance = p555.distance(&Chromaticity::new(gx, gy));
    let peak = ADOPTED_KM * cmf.ybar()[i555];
    let white_ok = white.status == LpStatus::Optimal && (350.0..=400.0).contains(&white.objective_value);
    let grid_ok = distance <= 0.03 && relative_difference(gmax, peak) <= 0.01;
    r.check(
        "9",
        white_ok && grid_ok,
        format!(
            "white point {:.3} lm/W (want [350, 400]); grid max {gmax:.3} at ({gx:.2}, {gy:.2}), \
             {distance:.4} from 555 nm locus point (want ≤ 0.03, value within 1% of {peak})",
            white.objective_value
        ),
    );
}

fn lp_oracle(r: &mut Report) {
    let cmf = CmfTable::cie1931_2deg();
    let mut rng = StdRng::seed_from_u64(20_240_917);
    let mut worst: f64 = 0.0;
    let mut max_support = 0;
    let mut all_optimal = true;
    for _ in 0..50 {
        let n = rng.gen_range(4..=8);
        let p = random_instance(&mut rng, &cmf, n, ADOPTED_KM);
        let s = simplex_solve(&p).unwrap();
        all_optimal &= s.status == LpStatus::Optimal;
        let oracle = enumerate_bases(&p).unwrap();
        worst = worst.max(relative_difference(s.objective_value, oracle));
        max_support = max_support.max(s.support.len());
    }
    r.check(
        "10",
        all_optimal && worst <= 1e-9 && max_support <= 3,
        format!("50 instances, worst rel diff {worst:.2e} (≤ 1e-9), largest support {max_support} (≤ 3)"),
    );
}

fn numerical_hygiene(r: &mut Report) {
    let mut worst_sb: f64 = 0.0;
    for t in [1800.0, 3000.0, 6000.0, 9300.0] {
        let numeric = 1e-9
            * integrate(
                |w| planck_radiance(w, t).unwrap(),
                &IntegrationSpec::new(10.0, 1e6),
            )
            .unwrap();
        worst_sb = worst_sb.max(relative_difference(numeric, total_planck_radiance(t).unwrap()));
    }

    let mut rng = StdRng::seed_from_u64(11);
    let mut worst_cov: f64 = 0.0;
    for _ in 0..10 {
        let w: f64 = rng.gen_range(200.0..3000.0);
        let t: f64 = rng.gen_range(1000.0..10_000.0);
        let jacobian = 2.0 * PI * SPEED_OF_LIGHT / (w * 1e-9).powi(2);
        let lhs = energy_density_omega(angular_frequency(w), t).unwrap() * jacobian;
        let rhs = energy_density_wavelength(w, t).unwrap();
        worst_cov = worst_cov.max(relative_difference(lhs, rhs));
    }

    let (ws, values): (Vec<f64>, Vec<f64>) = (0..=200)
        .map(|i| {
            let w = 380.0 + 2.0 * i as f64;
            (w, 1.0 + 0.5 * ((w - 380.0) / 60.0).sin())
        })
        .unzip();
    let base = SampledSpectrum::new(ws, values).unwrap();
    let reference = per_of(SpectrumModel::sampled(base.clone()), ADOPTED_KM);
    let worst_scale = [1e-6, 0.37, 1.0, 42.0, 1e5]
        .iter()
        .map(|&f| {
            let v = per_of(SpectrumModel::sampled(base.scaled(f).unwrap()), ADOPTED_KM);
            relative_difference(v, reference)
        })
        .fold(0.0, f64::max);

    r.check(
        "11",
        worst_sb <= 1e-4 && worst_cov <= 1e-10 && worst_scale <= 1e-10,
        format!(
            "T^4 law rel diff {worst_sb:.2e} (≤ 1e-4); change of variables {worst_cov:.2e} (≤ 1e-10); \
             scale invariance {worst_scale:.2e} (≤ 1e-10)"
        ),
    );
}

fn sampled_versus_analytic(r: &mut Report) {
    let analytic = SpectrumModel::gaussian(530.0, 15.0).unwrap();
    let (ws, values): (Vec<f64>, Vec<f64>) = (0..=200)
        .map(|i| {
            let w = 380.0 + 2.0 * i as f64;
            (w, analytic.evaluate(w).unwrap())
        })
        .unzip();
    let sampled = SpectrumModel::sampled(SampledSpectrum::new(ws, values).unwrap());
    let a = per_of(analytic, ADOPTED_KM);
    let s = per_of(sampled, ADOPTED_KM);
    let rel = relative_difference(a, s);
    r.check(
        "12",
        rel <= 5e-3,
        format!("Gaussian(530, 15) sampled at 2 nm {s:.4} vs analytic {a:.4} lm/W, rel diff {rel:.2e} (≤ 5e-3)"),
    );
}

#[test]
fn acceptance() {
    let mut r = Report { failures: Vec::new() };
    km_value(&mut r);
    black_bodies(&mut r);
    sweep_peak(&mut r);
    truncated_black_body(&mut r);
    equal_energy(&mut r);
    blue_led(&mut r);
    monochromatic(&mut r);
    white_point(&mut r);
    lp_extremes(&mut r);
    lp_oracle(&mut r);
    numerical_hygiene(&mut r);
    sampled_versus_analytic(&mut r);
    assert!(r.failures.is_empty(), "failed criteria: {}", r.failures.join(", "));
}
