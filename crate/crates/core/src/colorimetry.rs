//! CIE 1931 colour matching functions, tristimulus values, chromaticity
//! coordinates and the spectral gamut.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::photometry::{breakpoints, linear_interp, temperature_grid};
use crate::quadrature::{integrate_piecewise, DEFAULT_MAX_DEPTH, DEFAULT_REL_TOL};
use crate::spectral::{SpectrumModel, WavelengthRange};

/// CIE 1931 2° standard observer, 380–780 nm in 5 nm steps.
pub const CIE1931_2DEG_CSV: &str = include_str!("../data/cie1931_2deg_5nm.csv");

/// Header every CMF file starts with.
pub const CMF_HEADER: [&str; 4] = ["wavelength_nm", "xbar", "ybar", "zbar"];

/// Locus vertices closer than this are merged when building the gamut
/// polygon. The long-wavelength tail of the standard table collapses onto a
/// single chromaticity with ~1e-8 jitter.
const LOCUS_MERGE_DISTANCE: f64 = 1e-6;

/// Points this close to a gamut edge count as inside.
const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Colour matching functions on a uniform wavelength grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CmfTable {
    wavelengths_nm: Vec<f64>,
    xbar: Vec<f64>,
    ybar: Vec<f64>,
    zbar: Vec<f64>,
    spacing: f64,
}

impl CmfTable {
    /// Builds a table from columns, sorting rows by wavelength.
    pub fn from_columns(
        wavelengths_nm: Vec<f64>,
        xbar: Vec<f64>,
        ybar: Vec<f64>,
        zbar: Vec<f64>,
    ) -> Result<Self> {
        let n = wavelengths_nm.len();
        if xbar.len() != n || ybar.len() != n || zbar.len() != n {
            return Err(Error::Validation("CMF columns differ in length".into()));
        }
        if n < 4 {
            return Err(Error::Validation(format!(
                "a CMF table needs at least 4 rows, got {n}"
            )));
        }
        let mut rows: Vec<[f64; 4]> = (0..n)
            .map(|i| [wavelengths_nm[i], xbar[i], ybar[i], zbar[i]])
            .collect();
        for r in &rows {
            if !(r[0] > 0.0 && r[0].is_finite()) {
                return Err(Error::Validation(format!(
                    "wavelength {} nm is not positive",
                    r[0]
                )));
            }
            for (name, v) in ["xbar", "ybar", "zbar"].iter().zip(&r[1..]) {
                if !(*v >= 0.0 && v.is_finite()) {
                    return Err(Error::Validation(format!(
                        "negative {name} {v} at {} nm",
                        r[0]
                    )));
                }
            }
        }
        rows.sort_by(|a, b| a[0].total_cmp(&b[0]));

        let spacing = (rows[n - 1][0] - rows[0][0]) / (n - 1) as f64;
        for (i, pair) in rows.windows(2).enumerate() {
            let step = pair[1][0] - pair[0][0];
            if (step - spacing).abs() > 1e-6 * spacing {
                return Err(Error::Validation(format!(
                    "non-uniform wavelength grid: step {step} nm after row {} ({} nm), expected {spacing} nm",
                    i + 1,
                    pair[0][0]
                )));
            }
        }

        let table = Self {
            wavelengths_nm: rows.iter().map(|r| r[0]).collect(),
            xbar: rows.iter().map(|r| r[1]).collect(),
            ybar: rows.iter().map(|r| r[2]).collect(),
            zbar: rows.iter().map(|r| r[3]).collect(),
            spacing,
        };
        let (peak_wavelength, peak) = table.ybar_peak();
        if !(550.0..=560.0).contains(&peak_wavelength) || (peak - 1.0).abs() > 0.02 {
            return Err(Error::Validation(format!(
                "ybar must peak at 1.0 ± 0.02 within 550–560 nm, found {peak} at {peak_wavelength} nm"
            )));
        }
        Ok(table)
    }

    /// Reads a `wavelength_nm,xbar,ybar,zbar` CSV stream.
    pub fn from_reader<R: Read>(source: R) -> Result<Self> {
        let table = crate::csvio::read_columns(source, &CMF_HEADER)?;
        for (row, line) in table.lines.iter().enumerate() {
            for (c, name) in CMF_HEADER.iter().enumerate().skip(1) {
                let v = table.columns[c][row];
                if v < 0.0 {
                    return Err(Error::Validation(format!(
                        "line {line}: negative {name} {v}"
                    )));
                }
            }
        }
        let mut columns = table.columns.into_iter();
        let mut next = || columns.next().unwrap_or_default();
        Self::from_columns(next(), next(), next(), next())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| {
            Error::Validation(format!("cannot open {}: {e}", path.display()))
        })?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    /// The bundled CIE 1931 2° observer.
    pub fn cie1931_2deg() -> Self {
        Self::from_reader(CIE1931_2DEG_CSV.as_bytes()).expect("bundled CMF table is valid")
    }

    pub fn len(&self) -> usize {
        self.wavelengths_nm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths_nm.is_empty()
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    pub fn xbar(&self) -> &[f64] {
        &self.xbar
    }

    pub fn ybar(&self) -> &[f64] {
        &self.ybar
    }

    pub fn zbar(&self) -> &[f64] {
        &self.zbar
    }

    /// Grid step (nm).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn range(&self) -> WavelengthRange {
        WavelengthRange::new(self.wavelengths_nm[0], self.wavelengths_nm[self.len() - 1])
            .expect("validated grid")
    }

    /// `(x̄, ȳ, z̄)` at a table row.
    pub fn row(&self, i: usize) -> [f64; 3] {
        [self.xbar[i], self.ybar[i], self.zbar[i]]
    }

    /// Linearly interpolated `(x̄, ȳ, z̄)`, zero outside the table.
    pub fn sample(&self, wavelength_nm: f64) -> [f64; 3] {
        let w = &self.wavelengths_nm;
        [
            linear_interp(w, &self.xbar, wavelength_nm),
            linear_interp(w, &self.ybar, wavelength_nm),
            linear_interp(w, &self.zbar, wavelength_nm),
        ]
    }

    /// Wavelength and value of the largest ȳ entry.
    pub fn ybar_peak(&self) -> (f64, f64) {
        self.ybar
            .iter()
            .enumerate()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (self.wavelengths_nm[i], v)
                } else {
                    best
                }
            })
    }

    /// Chromaticity of a monochromatic source at table row `i`, if the row
    /// is not all zero.
    pub fn locus_point(&self, i: usize) -> Option<Chromaticity> {
        let [x, y, z] = self.row(i);
        chromaticity(&Tristimulus { x, y, z }).ok()
    }
}

/// Free-function form of [`CmfTable::from_reader`].
pub fn load_cmf<R: Read>(source: R) -> Result<CmfTable> {
    CmfTable::from_reader(source)
}

/// CIE tristimulus values `X`, `Y`, `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tristimulus {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Tristimulus {
    pub fn sum(&self) -> f64 {
        self.x + self.y + self.z
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            x: self.x * factor,
            y: self.y * factor,
            z: self.z * factor,
        }
    }
}

impl std::ops::Add for Tristimulus {
    type Output = Tristimulus;

    fn add(self, rhs: Self) -> Self {
        Self {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
        }
    }
}

/// Point `(x, y)` of the CIE 1931 diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chromaticity {
    pub x: f64,
    pub y: f64,
}

impl Chromaticity {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Satisfies `x ≥ 0`, `y ≥ 0`, `x + y ≤ 1`.
    pub fn is_valid(&self) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.x + self.y <= 1.0 + 1e-12
    }

    pub fn distance(&self, other: &Chromaticity) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// `K_m·∫P·(x̄, ȳ, z̄) dλ` over `range` clipped to the table and the model's
/// support. Lines are evaluated analytically from the interpolated CMFs.
pub fn tristimulus(
    model: &SpectrumModel,
    cmf: &CmfTable,
    km: f64,
    range: WavelengthRange,
) -> Result<Tristimulus> {
    model.validate()?;
    if let SpectrumModel::Line { wavelength_nm } = model {
        if !range.contains(*wavelength_nm) {
            return Err(Error::domain(format!(
                "line at {wavelength_nm} nm lies outside [{}, {}] nm",
                range.min_nm(),
                range.max_nm()
            )));
        }
        let [x, y, z] = cmf.sample(*wavelength_nm);
        let t = Tristimulus { x, y, z }.scaled(km);
        if t.sum() <= 0.0 {
            return Err(Error::ZeroDenominator {
                a: *wavelength_nm,
                b: *wavelength_nm,
            });
        }
        return Ok(t);
    }

    let no_overlap = Error::ZeroDenominator {
        a: range.min_nm(),
        b: range.max_nm(),
    };
    let mut domain = range.intersect(&cmf.range()).ok_or(no_overlap.clone())?;
    if let Some(support) = model.support() {
        domain = domain.intersect(&support).ok_or(no_overlap.clone())?;
    }
    let points = breakpoints(
        &domain,
        model
            .breakpoints_in(&domain)
            .into_iter()
            .chain(cmf.wavelengths_nm().iter().copied()),
    );
    let w = cmf.wavelengths_nm();
    let channel = |column: &[f64]| {
        integrate_piecewise(
            |l| model.density(l) * linear_interp(w, column, l),
            &points,
            DEFAULT_REL_TOL,
            DEFAULT_MAX_DEPTH,
        )
    };
    let t = Tristimulus {
        x: km * channel(cmf.xbar())?,
        y: km * channel(cmf.ybar())?,
        z: km * channel(cmf.zbar())?,
    };
    if t.sum() <= 0.0 {
        return Err(Error::ZeroDenominator {
            a: domain.min_nm(),
            b: domain.max_nm(),
        });
    }
    Ok(t)
}

/// `x = X/(X+Y+Z)`, `y = Y/(X+Y+Z)`.
pub fn chromaticity(t: &Tristimulus) -> Result<Chromaticity> {
    let sum = t.sum();
    if !(sum > 0.0 && sum.is_finite()) {
        return Err(Error::domain(
            "chromaticity of a black spectrum is undefined (X+Y+Z = 0)",
        ));
    }
    Ok(Chromaticity {
        x: t.x / sum,
        y: t.y / sum,
    })
}

/// Chromaticity of a spectrum over the whole table range.
pub fn spectrum_chromaticity(model: &SpectrumModel, cmf: &CmfTable) -> Result<Chromaticity> {
    chromaticity(&tristimulus(model, cmf, 1.0, cmf.range())?)
}

/// Black-body chromaticities for `t_min, t_min + step, …, ≤ t_max`.
pub fn planckian_locus(
    t_min: f64,
    t_max: f64,
    step: f64,
    cmf: &CmfTable,
) -> Result<Vec<(f64, Chromaticity)>> {
    temperature_grid(t_min, t_max, step)?
        .into_par_iter()
        .map(|t| Ok((t, spectrum_chromaticity(&SpectrumModel::planck(t)?, cmf)?)))
        .collect()
}

/// The monochromatic locus in wavelength order, closed by the purple line,
/// and the gamut it bounds.
///
/// Tabulated CMFs put small concave dents into the locus, so a mixture of
/// neighbouring lines can sit a few 1e-6 outside the raw polygon. Membership
/// is therefore tested against the convex hull of the locus, which is
/// exactly the set of chromaticities reachable by non-negative spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLocus {
    vertices: Vec<Chromaticity>,
    hull: Vec<Chromaticity>,
}

impl SpectralLocus {
    pub fn new(cmf: &CmfTable) -> Self {
        let mut vertices: Vec<Chromaticity> = Vec::with_capacity(cmf.len());
        for p in (0..cmf.len()).filter_map(|i| cmf.locus_point(i)) {
            match vertices.last() {
                Some(last) if last.distance(&p) <= LOCUS_MERGE_DISTANCE => {}
                _ => vertices.push(p),
            }
        }
        while vertices.len() > 1 && vertices[0].distance(&vertices[vertices.len() - 1]) <= LOCUS_MERGE_DISTANCE {
            vertices.pop();
        }
        let hull = convex_hull(&vertices);
        Self { vertices, hull }
    }

    /// Locus points in wavelength order.
    pub fn vertices(&self) -> &[Chromaticity] {
        &self.vertices
    }

    /// Counter-clockwise convex hull of the locus points.
    pub fn hull(&self) -> &[Chromaticity] {
        &self.hull
    }

    /// Locus edges including the closing purple line.
    pub fn edges(&self) -> impl Iterator<Item = (Chromaticity, Chromaticity)> + '_ {
        closed_edges(&self.vertices)
    }

    /// Even–odd ray crossing against the hull; points on an edge are inside.
    pub fn contains(&self, p: &Chromaticity) -> bool {
        if self.hull.len() < 3 {
            return false;
        }
        if closed_edges(&self.hull).any(|(a, b)| segment_distance(p, &a, &b) <= BOUNDARY_TOLERANCE) {
            return true;
        }
        let mut inside = false;
        for (a, b) in closed_edges(&self.hull) {
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn closed_edges(points: &[Chromaticity]) -> impl Iterator<Item = (Chromaticity, Chromaticity)> + '_ {
    let n = points.len();
    (0..n).map(move |i| (points[i], points[(i + 1) % n]))
}

/// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(points: &[Chromaticity]) -> Vec<Chromaticity> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    sorted.dedup();
    if sorted.len() < 3 {
        return sorted;
    }
    let cross = |o: &Chromaticity, a: &Chromaticity, b: &Chromaticity| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };
    let mut hull: Vec<Chromaticity> = Vec::with_capacity(2 * sorted.len());
    for pass in [&sorted[..], &sorted.iter().rev().copied().collect::<Vec<_>>()[..]] {
        let start = hull.len();
        for p in pass {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

pub(crate) fn segment_distance(p: &Chromaticity, a: &Chromaticity, b: &Chromaticity) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.x - (a.x + t * dx)).hypot(p.y - (a.y + t * dy))
}

/// Whether `p` lies inside (or on) the spectral gamut of `cmf`.
pub fn in_gamut(p: &Chromaticity, cmf: &CmfTable) -> bool {
    SpectralLocus::new(cmf).contains(p)
}
