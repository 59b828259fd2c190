//! Job descriptions read from JSON.

use serde::{Deserialize, Serialize};

use polyzeta::exact::{parse_rat, Rat, ZMonomial};
use polyzeta::parse::parse_polynomial;
use polyzeta::series::MultSeries;
use polyzeta::sorokin::SorokinIntegral;
use polyzeta::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    DecomposeAtOne,
    DecomposeGenericZ,
    FromIntegral,
    /// Decompose (at one or at the given point) and check numerically.
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZSpec {
    /// `"one"` or `"symbolic"`.
    Named(String),
    /// Rational coordinates such as `["2", "3/2"]`.
    Point(Vec<String>),
}

impl ZSpec {
    pub fn one() -> Self {
        ZSpec::Named("one".into())
    }

    pub fn symbolic() -> Self {
        ZSpec::Named("symbolic".into())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ZSpec::Named(s) if s == "one")
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ZSpec::Named(s) if s == "symbolic")
    }

    pub fn point(&self) -> Result<Option<Vec<Rat>>> {
        match self {
            ZSpec::Named(_) => Ok(None),
            ZSpec::Point(v) => v
                .iter()
                .map(|x| parse_rat(x).ok_or_else(|| Error::Parse(format!("bad rational `{x}` in z"))))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub numerator: String,
    pub a: Vec<u32>,
    pub n: Vec<u32>,
    #[serde(default)]
    pub r: Vec<u32>,
}

impl SeriesSpec {
    pub fn build(&self) -> Result<MultSeries> {
        let p = self.a.len();
        let r = if self.r.is_empty() { vec![0; p] } else { self.r.clone() };
        let num = parse_polynomial(&self.numerator, p)?;
        MultSeries::new(num, self.a.clone(), self.n.clone(), r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub dim: usize,
    pub r: Vec<u32>,
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    pub d: Vec<usize>,
}

impl IntegralSpec {
    pub fn build(&self) -> Result<SorokinIntegral> {
        SorokinIntegral::new(self.dim, self.r.clone(), self.s.clone(), self.t.clone(), self.d.clone())
    }
}

fn default_precision() -> u32 {
    128
}

fn default_cutoff() -> usize {
    20000
}

fn default_tolerance() -> f64 {
    1e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<IntegralSpec>,
    pub z: ZSpec,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(default)]
    pub emit_certificate: bool,
    /// Attach a numeric verification block (implied by `mode = verify`).
    #[serde(default)]
    pub verify: bool,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<JobSpec> {
        let job: JobSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        job.validate()?;
        Ok(job)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job specs always serialize")
    }

    pub fn wants_verification(&self) -> bool {
        self.verify || self.mode == Mode::Verify
    }

    /// Mode-dependent field checks.
    pub fn validate(&self) -> Result<()> {
        if let ZSpec::Named(s) = &self.z {
            if s != "one" && s != "symbolic" {
                return Err(Error::InvalidInput(format!("z must be \"one\", \"symbolic\" or a point, got `{s}`")));
            }
        }
        if self.precision < 16 {
            return Err(Error::InvalidInput("precision must be at least 16 bits".into()));
        }
        if self.cutoff < 2 {
            return Err(Error::InvalidInput("cutoff must be at least 2".into()));
        }
        let p = match self.mode {
            Mode::FromIntegral => {
                let int = self
                    .integral
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("from-integral needs an `integral`".into()))?;
                int.build()?;
                1
            }
            _ => {
                let s = self
                    .series
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("this mode needs a `series`".into()))?;
                s.build()?.depth()
            }
        };
        match self.mode {
            Mode::DecomposeAtOne if !self.z.is_one() => {
                return Err(Error::InvalidInput("decompose-at-one needs z = \"one\"".into()))
            }
            Mode::DecomposeGenericZ if self.z.is_one() => {
                return Err(Error::InvalidInput("decompose-generic-z needs z symbolic or a point".into()))
            }
            _ => {}
        }
        if self.wants_verification() && self.z.is_symbolic() {
            return Err(Error::InvalidInput("verification needs z = \"one\" or a point".into()));
        }
        if let Some(pt) = self.z.point()? {
            if pt.len() != p {
                return Err(Error::InvalidInput(format!("z has {} coordinates, expected {p}", pt.len())));
            }
        }
        Ok(())
    }

    /// The series to decompose; for integrals, the series part and prefactor.
    pub fn series(&self) -> Result<MultSeries> {
        match (&self.series, &self.integral) {
            (Some(s), _) => s.build(),
            (None, Some(i)) => Ok(polyzeta::sorokin::series_from_integral(&i.build()?)?.1),
            _ => Err(Error::InvalidInput("no series given".into())),
        }
    }
}

/// Unit arguments `z_i` for a plain series.
pub fn unit_args(p: usize) -> Vec<ZMonomial> {
    (0..p).map(|i| ZMonomial::var(p, i)).collect()
}
