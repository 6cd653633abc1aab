#![allow(dead_code)]

use lumen_core::colorimetry::{Chromaticity, CmfTable};
use lumen_core::maxper::LpProblem;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Best objective over every basic solution with 1, 2 or 3 columns, or
/// `None` when no nonnegative solution exists.
pub fn enumerate_bases(problem: &LpProblem) -> Option<f64> {
    let a = problem.constraints();
    let b = problem.rhs();
    let c = problem.objective();
    let n = problem.len();
    let mut best: Option<f64> = None;
    let mut consider = |cols: &[usize]| {
        if let Some(p) = solve_subsystem(a, &b, cols) {
            if p.iter().all(|v| *v >= -1e-12) {
                let value = problem.delta_lambda()
                    * cols.iter().zip(&p).map(|(&j, pj)| c[j] * pj).sum::<f64>();
                best = Some(best.map_or(value, |v: f64| v.max(value)));
            }
        }
    };
    for i in 0..n {
        consider(&[i]);
        for j in i + 1..n {
            consider(&[i, j]);
            for k in j + 1..n {
                consider(&[i, j, k]);
            }
        }
    }
    best
}

/// Solves `A_S·p = b` by elimination with partial pivoting over the three
/// rows, keeping the solution only if the leftover rows are consistent.
fn solve_subsystem(a: &[Vec<f64>; 3], b: &[f64; 3], cols: &[usize]) -> Option<Vec<f64>> {
    let m = cols.len();
    let mut rows: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let norm = cols.iter().map(|&j| a[i][j].abs()).fold(b[i].abs(), f64::max).max(1e-300);
            let mut row: Vec<f64> = cols.iter().map(|&j| a[i][j] / norm).collect();
            row.push(b[i] / norm);
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..3).max_by(|&i, &j| rows[i][col].abs().total_cmp(&rows[j][col].abs()))?;
        if rows[pivot][col].abs() < 1e-12 {
            return None;
        }
        rows.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let f = rows[r][col] / rows[col][col];
                let pivot_row = rows[col].clone();
                for (v, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                    *v -= f * p;
                }
            }
        }
    }
    if rows[m..].iter().any(|r| r[m].abs() > 1e-9) {
        return None;
    }
    Some((0..m).map(|i| rows[i][m] / rows[i][i]).collect())
}

/// Chromaticity of the spectrum `Σ w_i δ(λ - λ_i)` over `samples`.
pub fn mixture_chromaticity(samples: &[(f64, [f64; 3])], weights: &[f64]) -> Chromaticity {
    let mut t = [0.0; 3];
    for ((_, row), w) in samples.iter().zip(weights) {
        for k in 0..3 {
            t[k] += w * row[k];
        }
    }
    let sum = t[0] + t[1] + t[2];
    Chromaticity::new(t[0] / sum, t[1] / sum)
}

/// Random reduced problem with `n` table wavelengths and a target inside
/// their gamut. Instances whose sample chromaticities are nearly collinear
/// through the target are redrawn: their constraint rows are dependent to
/// working precision, so no f64 method can pin the optimum to 1e-9.
pub fn random_instance(rng: &mut StdRng, cmf: &CmfTable, n: usize, km: f64) -> LpProblem {
    // Skip the table ends where all three functions are nearly zero.
    let candidates: Vec<usize> = (4..cmf.len() - 12).collect();
    loop {
        let mut chosen: Vec<usize> = candidates.choose_multiple(rng, n).copied().collect();
        chosen.sort_unstable();
        let samples: Vec<(f64, [f64; 3])> = chosen
            .iter()
            .map(|&i| (cmf.wavelengths_nm()[i], cmf.row(i)))
            .collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let target = mixture_chromaticity(&samples, &weights);
        let problem = LpProblem::from_samples(target, &samples, km, cmf.spacing()).unwrap();
        if row_gram_determinant(&problem) > 1e-8 {
            return problem;
        }
    }
}

/// Determinant of `A·Aᵀ` after scaling each row to unit max-norm; the
/// product of the squared singular values.
fn row_gram_determinant(problem: &LpProblem) -> f64 {
    let rows: Vec<Vec<f64>> = problem
        .constraints()
        .iter()
        .map(|r| {
            let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            r.iter().map(|v| v / norm).collect()
        })
        .collect();
    let g = |i: usize, j: usize| -> f64 { rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum() };
    let m = [[g(0, 0), g(0, 1), g(0, 2)], [g(1, 0), g(1, 1), g(1, 2)], [g(2, 0), g(2, 1), g(2, 2)]];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn relative_difference(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}
