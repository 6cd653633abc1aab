use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use lumen_core::colorimetry::{planckian_locus, spectrum_chromaticity, Chromaticity, CmfTable};
use lumen_core::maxper::{iso_per_scan, max_per, LpStatus};
use lumen_core::photometry::{
    compute_km, per, per_sweep_planck, LuminosityFunction, ADOPTED_KM,
};
use lumen_core::spectral::{SampledSpectrum, SpectrumModel, WavelengthRange};
use lumen_core::Error;

use crate::cli::{Cli, Command, KmMode, PerArgs, SourceArgs, VMode};
use crate::format::{row, sig9};

/// A failed run, tagged with its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    Input(String),
    Infeasible,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Input(_) => 4,
            Failure::Infeasible => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Input(m) => m,
            Failure::Infeasible => "infeasible: chromaticity outside spectral gamut",
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::ZeroDenominator { .. } | Error::IterationLimit { .. } => {
                Failure::Numeric(e.to_string())
            }
            Error::Parse { .. } => Failure::Input(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let ctx = Context { cli };
    match &cli.command {
        Command::Km => ctx.km(),
        Command::Per(args) => ctx.per(args),
        Command::Vlambda => ctx.vlambda(),
        Command::Chroma(source) => ctx.chroma(source),
        Command::Locus { t_min, t_max, step } => ctx.locus(*t_min, *t_max, *step),
        Command::Maxper { x, y, delta_lambda } => ctx.maxper(*x, *y, *delta_lambda),
        Command::Isoper {
            grid_step,
            delta_lambda,
        } => ctx.isoper(*grid_step, *delta_lambda),
    }
}

struct Context<'a> {
    cli: &'a Cli,
}

impl Context<'_> {
    fn cmf(&self) -> Result<CmfTable, Failure> {
        let path = self.cli.cmf.as_deref().ok_or_else(|| {
            Failure::Usage("a colour matching table is required: pass --cmf or set LUMEN_CMF_PATH".into())
        })?;
        let file = open(path)?;
        CmfTable::from_reader(file).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn luminosity(&self) -> Result<LuminosityFunction, Failure> {
        Ok(match self.cli.v_mode {
            VMode::PhotopicAnalytic => LuminosityFunction::PhotopicAnalytic,
            VMode::ScotopicAnalytic => LuminosityFunction::ScotopicAnalytic,
            VMode::Tabulated => LuminosityFunction::tabulated_from_cmf(&self.cmf()?)?,
        })
    }

    fn km_for(&self, v: &LuminosityFunction) -> Result<f64, Failure> {
        match self.cli.km {
            KmMode::Adopted683 => Ok(ADOPTED_KM),
            KmMode::Computed => Ok(compute_km(v)?),
        }
    }

    fn km(&self) -> Outcome {
        if self.cli.v_mode != VMode::PhotopicAnalytic {
            return Err(Failure::Usage(
                "the platinum-point calibration is defined for the photopic analytic curve only".into(),
            ));
        }
        let km = compute_km(&LuminosityFunction::PhotopicAnalytic)?;
        Ok(format!("km_lm_per_w\n{}\n", sig9(km)))
    }

    fn per(&self, args: &PerArgs) -> Outcome {
        let v = self.luminosity()?;
        let km = self.km_for(&v)?;
        let given = args.source.count() + usize::from(args.sweep.is_some());
        if given != 1 {
            return Err(Failure::Usage(
                "exactly one of --planck, --truncated-planck, --flat, --gaussian, --line, --file or --sweep is required".into(),
            ));
        }
        if let Some(sweep) = &args.sweep {
            let table = per_sweep_planck(sweep[0], sweep[1], sweep[2], &v, km)?;
            let mut out = String::from("T_K,per_lm_per_w\n");
            for (t, value) in table.rows {
                writeln!(out, "{}", row(&[t, value])).unwrap();
            }
            return Ok(out);
        }
        let model = args.source.model()?;
        let range = WavelengthRange::new(args.range[0], args.range[1])?;
        let result = per(&model, &v, range, km)?;
        Ok(format!(
            "per_lm_per_w,efficiency\n{}\n",
            row(&[result.per, result.efficiency])
        ))
    }

    fn vlambda(&self) -> Outcome {
        let v = self.luminosity()?;
        let mut out = String::from("lambda_nm,v\n");
        for w in 380..=780 {
            let w = f64::from(w);
            writeln!(out, "{}", row(&[w, v.eval(w)])).unwrap();
        }
        Ok(out)
    }

    fn chroma(&self, source: &SourceArgs) -> Outcome {
        if source.count() != 1 {
            return Err(Failure::Usage(
                "exactly one of --planck, --truncated-planck, --flat, --gaussian, --line or --file is required".into(),
            ));
        }
        let cmf = self.cmf()?;
        let c = spectrum_chromaticity(&source.model()?, &cmf)?;
        Ok(format!("x,y\n{}\n", row(&[c.x, c.y])))
    }

    fn locus(&self, t_min: f64, t_max: f64, step: f64) -> Outcome {
        let cmf = self.cmf()?;
        let mut out = String::from("T_K,x,y\n");
        for (t, c) in planckian_locus(t_min, t_max, step, &cmf)? {
            writeln!(out, "{}", row(&[t, c.x, c.y])).unwrap();
        }
        Ok(out)
    }

    fn lp_setup(&self, delta_lambda: Option<f64>) -> Result<(CmfTable, f64, f64), Failure> {
        let cmf = self.cmf()?;
        let km = match self.cli.km {
            KmMode::Adopted683 => ADOPTED_KM,
            KmMode::Computed => compute_km(&LuminosityFunction::PhotopicAnalytic)?,
        };
        let dl = delta_lambda.unwrap_or(cmf.spacing());
        Ok((cmf, km, dl))
    }

    fn maxper(&self, x: f64, y: f64, delta_lambda: Option<f64>) -> Outcome {
        let (cmf, km, dl) = self.lp_setup(delta_lambda)?;
        let solution = max_per(Chromaticity::new(x, y), &cmf, km, dl)?;
        match solution.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Failure::Infeasible),
            LpStatus::Unbounded => {
                return Err(Failure::Numeric("linear program reported unbounded".into()))
            }
        }
        let mut out = format!("max_per_lm_per_w\n{}\nlambda_nm,weight\n", sig9(solution.objective_value));
        for line in &solution.support {
            writeln!(out, "{}", row(&[line.wavelength_nm, line.power * dl])).unwrap();
        }
        Ok(out)
    }

    fn isoper(&self, grid_step: f64, delta_lambda: Option<f64>) -> Outcome {
        let (cmf, km, dl) = self.lp_setup(delta_lambda)?;
        let grid = iso_per_scan(grid_step, &cmf, km, dl)?;
        let mut out = String::from("x,y,max_per\n");
        for (x, y, v) in grid.in_gamut() {
            writeln!(out, "{}", row(&[x, y, v])).unwrap();
        }
        Ok(out)
    }
}

impl SourceArgs {
    fn count(&self) -> usize {
        [
            self.planck.is_some(),
            self.truncated_planck.is_some(),
            self.flat.is_some(),
            self.gaussian.is_some(),
            self.line.is_some(),
            self.file.is_some(),
        ]
        .into_iter()
        .filter(|given| *given)
        .count()
    }

    fn model(&self) -> Result<SpectrumModel, Failure> {
        let model = if let Some(t) = self.planck {
            SpectrumModel::planck(t)?
        } else if let Some(a) = &self.truncated_planck {
            SpectrumModel::truncated_planck(a[0], a[1], a[2])?
        } else if let Some(a) = &self.flat {
            SpectrumModel::flat(a[0], a[1])?
        } else if let Some(a) = &self.gaussian {
            SpectrumModel::gaussian(a[0], a[1])?
        } else if let Some(w) = self.line {
            SpectrumModel::line(w)?
        } else if let Some(path) = &self.file {
            let spectrum = SampledSpectrum::from_csv(open(path)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            SpectrumModel::sampled(spectrum)
        } else {
            return Err(Failure::Usage("no source given".into()));
        };
        Ok(model)
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))
}
