use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Photometric efficacy, colorimetry and maximum-efficacy spectra, as CSV.
#[derive(Debug, Parser)]
#[command(name = "lumen", version)]
pub struct Cli {
    /// Luminous efficacy constant: the SI value 683 lm/W or the value
    /// calibrated from the platinum-point standard.
    #[arg(long, value_enum, default_value = "adopted_683", global = true)]
    pub km: KmMode,

    /// Eye sensitivity curve.
    #[arg(long = "v-mode", value_enum, default_value = "photopic_analytic", global = true)]
    pub v_mode: VMode,

    /// Colour matching table, `wavelength_nm,xbar,ybar,zbar`.
    #[arg(long, env = "LUMEN_CMF_PATH", global = true)]
    pub cmf: Option<PathBuf>,

    /// Write CSV here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KmMode {
    #[value(name = "adopted_683", alias = "683", alias = "adopted")]
    Adopted683,
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VMode {
    #[value(name = "photopic_analytic", alias = "photopic")]
    PhotopicAnalytic,
    #[value(name = "scotopic_analytic", alias = "scotopic")]
    ScotopicAnalytic,
    Tabulated,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Luminous efficacy constant from the platinum-point standard.
    Km,
    /// Photometric efficacy of a source, or of black bodies over a sweep.
    Per(PerArgs),
    /// Eye sensitivity from 380 to 780 nm in 1 nm steps.
    Vlambda,
    /// CIE 1931 chromaticity of a source.
    Chroma(SourceArgs),
    /// Chromaticity of black bodies over a temperature range.
    Locus {
        t_min: f64,
        t_max: f64,
        step: f64,
    },
    /// Largest efficacy attainable at a chromaticity, and its line spectrum.
    Maxper {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        /// Wavelength step; a multiple of the table spacing.
        #[arg(long = "delta-lambda")]
        delta_lambda: Option<f64>,
    },
    /// Largest efficacy over a square chromaticity grid.
    Isoper {
        #[arg(long = "grid-step")]
        grid_step: f64,
        #[arg(long = "delta-lambda")]
        delta_lambda: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Black body at temperature T (K).
    #[arg(long, value_name = "T")]
    pub planck: Option<f64>,

    /// Black body at T restricted to [MIN, MAX] nm.
    #[arg(long = "truncated-planck", num_args = 3, value_names = ["T", "MIN", "MAX"])]
    pub truncated_planck: Option<Vec<f64>>,

    /// Constant power on [MIN, MAX] nm.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    pub flat: Option<Vec<f64>>,

    /// Gaussian band centred at L0 nm with standard deviation SIGMA nm.
    #[arg(long, num_args = 2, value_names = ["L0", "SIGMA"])]
    pub gaussian: Option<Vec<f64>>,

    /// Single spectral line at L0 nm.
    #[arg(long, value_name = "L0")]
    pub line: Option<f64>,

    /// Sampled spectrum, `wavelength_nm,power`.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PerArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Black bodies from TMIN to TMAX (K) in steps of STEP.
    #[arg(long, num_args = 3, value_names = ["TMIN", "TMAX", "STEP"])]
    pub sweep: Option<Vec<f64>>,

    /// Integration range in nm.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], default_values_t = [380.0, 780.0])]
    pub range: Vec<f64>,
}
