//! Dense two-phase simplex for `max c·x` subject to `A·x = b`, `x ≥ 0`.
//!
//! Entering and leaving variables follow Bland's rule, so degenerate
//! problems terminate. Rows are scaled to unit max-norm before pivoting.

use crate::error::{Error, Result};

/// Entries smaller than this are not used as pivots.
const PIVOT_TOL: f64 = 1e-11;
/// Reduced costs must exceed this fraction of the largest cost to enter.
const REDUCED_COST_TOL: f64 = 1e-11;
/// Largest residual infeasibility accepted at the end of phase one.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// One row per constraint: `n` structural, `m` artificial, then rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    structural: usize,
    pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.rows[r].len() - 1]
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(Error::IterationLimit {
                limit: self.max_pivots,
            });
        }
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = other[col];
            if factor != 0.0 {
                for (v, pv) in other.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                other[col] = 0.0;
            }
        }
        for row in self.rows.iter_mut() {
            let last = row.len() - 1;
            if row[last] < 0.0 && row[last] > -1e-14 {
                row[last] = 0.0;
            }
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Runs primal simplex for `max cost·x` over columns accepted by
    /// `allowed`, starting from the current basis.
    fn optimize(&mut self, cost: &[f64], allowed: impl Fn(usize) -> bool) -> Result<PhaseEnd> {
        let scale = cost.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let tol = REDUCED_COST_TOL * scale.max(f64::MIN_POSITIVE);
        loop {
            let width = self.width();
            let entering = (0..width).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                reduced > tol
            });
            let Some(col) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leaving = match leaving {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * best_ratio.max(1e-300);
                        if ratio < best_ratio && !tie
                            || tie && self.basis[r] < self.basis[best]
                        {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col)?,
                None => return Ok(PhaseEnd::Unbounded),
            }
        }
    }
}

/// Solves `max c·x` s.t. `a·x = b`, `x ≥ 0`, failing once more than
/// `max_pivots` pivots are needed.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64], max_pivots: usize) -> Result<Outcome> {
    let n = c.len();
    if a.len() != b.len() || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidProblem(
            "constraint matrix, rhs and objective dimensions disagree".into(),
        ));
    }

    let mut scaled: Vec<(Vec<f64>, f64)> = Vec::with_capacity(a.len());
    for (row, &rhs) in a.iter().zip(b) {
        let norm = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if norm == 0.0 {
            if rhs.abs() > FEASIBILITY_TOL {
                return Ok(Outcome::Infeasible);
            }
            continue;
        }
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        let s = sign / norm;
        scaled.push((row.iter().map(|v| v * s).collect(), rhs * s));
    }

    let m = scaled.len();
    let rows: Vec<Vec<f64>> = scaled
        .into_iter()
        .enumerate()
        .map(|(r, (coeffs, rhs))| {
            let mut row = coeffs;
            row.extend((0..m).map(|k| if k == r { 1.0 } else { 0.0 }));
            row.push(rhs);
            row
        })
        .collect();
    let mut tableau = Tableau {
        rows,
        basis: (n..n + m).collect(),
        structural: n,
        pivots: 0,
        max_pivots,
    };

    // Phase one: drive the artificial variables to zero.
    let phase_one: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { -1.0 }).collect();
    tableau.optimize(&phase_one, |j| j < n)?;
    let infeasibility: f64 = tableau
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &j)| j >= n)
        .map(|(r, _)| tableau.rhs(r))
        .sum();
    if infeasibility > FEASIBILITY_TOL {
        return Ok(Outcome::Infeasible);
    }

    // Pivot remaining (zero-level) artificials out, dropping redundant rows.
    let mut r = 0;
    while r < tableau.rows.len() {
        if tableau.basis[r] >= n {
            let replacement = (0..n)
                .filter(|j| !tableau.basis.contains(j))
                .find(|&j| tableau.rows[r][j].abs() > 1e-9);
            match replacement {
                Some(j) => tableau.pivot(r, j)?,
                None => {
                    tableau.rows.remove(r);
                    tableau.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase_two = c.to_vec();
    phase_two.extend(std::iter::repeat_n(0.0, m));
    let structural = tableau.structural;
    match tableau.optimize(&phase_two, |j| j < structural)? {
        PhaseEnd::Unbounded => Ok(Outcome::Unbounded),
        PhaseEnd::Optimal => {
            let mut x = vec![0.0; n];
            for (r, &j) in tableau.basis.iter().enumerate() {
                if j < n {
                    x[j] = tableau.rhs(r).max(0.0);
                }
            }
            let objective = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
            Ok(Outcome::Optimal { x, objective })
        }
    }
}
