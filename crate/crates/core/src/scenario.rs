//! Scenario files and reports.
//!
//! A scenario is a versioned TOML document naming a generator, an optional
//! bound, an `(n, x)` grid and run settings. Running it yields a [`Report`],
//! written both as TOML (with the resolved scenario echoed in its header, so
//! it can be rerun from the report alone) and as a flat CSV table. Field
//! names are listed in `docs/schema.md`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{BetaMode, BoundReport, Constant, Provenance, DEFAULT_N_MAX};
use crate::error::{Error, Result};
use crate::phi::PhiFunction;
use crate::sim::{
    estimate_q_multi, gauss_hermite_distribution, DiscreteDist, Generator, IidLaw, MartingaleSpec, SignRule,
};
use crate::validate::{fit_scaling, validate_upper, BoundSpec, NormModel, ScalingFit, Scenario, SCALING_CAVEAT};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_REPLICAS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;
pub const DEFAULT_MIN_R_SQUARED: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LawFile {
    Rademacher {},
    Uniform {
        half_width: f64,
    },
    WeibullSym {
        q: f64,
    },
    /// `[value, probability]` pairs.
    Discrete {
        atoms: Vec<(f64, f64)>,
    },
}

impl LawFile {
    fn build(&self) -> Result<IidLaw> {
        Ok(match self {
            LawFile::Rademacher {} => IidLaw::Rademacher,
            LawFile::Uniform { half_width } => IidLaw::Uniform {
                half_width: *half_width,
            },
            LawFile::WeibullSym { q } => IidLaw::WeibullSym { q: *q },
            LawFile::Discrete { atoms } => IidLaw::Discrete(DiscreteDist::new(atoms.clone())?),
        })
    }
}

/// `ζ` of the adversarial product: a Gauss–Hermite law of the given order
/// or explicit atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_hermite: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorFile {
    Rademacher {},
    Uniform { half_width: f64 },
    WeibullSym { q: f64 },
    Discrete { atoms: Vec<(f64, f64)> },
    ProductAdversarial { q: f64, zeta: ZetaFile },
    ConditionalSubPhi { base: LawFile, rule: SignRule },
}

impl GeneratorFile {
    pub fn build(&self) -> Result<Generator> {
        let law = |l: LawFile| Ok::<_, Error>(Generator::Iid(l.build()?));
        match self {
            GeneratorFile::Rademacher {} => law(LawFile::Rademacher {}),
            GeneratorFile::Uniform { half_width } => law(LawFile::Uniform {
                half_width: *half_width,
            }),
            GeneratorFile::WeibullSym { q } => law(LawFile::WeibullSym { q: *q }),
            GeneratorFile::Discrete { atoms } => law(LawFile::Discrete { atoms: atoms.clone() }),
            GeneratorFile::ProductAdversarial { q, zeta } => {
                let zeta = match (zeta.gauss_hermite, &zeta.atoms) {
                    (Some(m), None) => gauss_hermite_distribution(m)?,
                    (None, Some(atoms)) => DiscreteDist::new(atoms.clone())?,
                    _ => {
                        return Err(Error::Scenario(
                            "zeta needs exactly one of `gauss_hermite` or `atoms`".into(),
                        ))
                    }
                };
                Ok(Generator::ProductAdversarial { q: *q, zeta })
            }
            GeneratorFile::ConditionalSubPhi { base, rule } => Ok(Generator::ConditionalSubPhi {
                base: base.build()?,
                rule: *rule,
            }),
        }
    }
}

/// p-norms of the differences for the moment bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum NormFile {
    Constant(f64),
    WeibullSym(f64),
}

impl NormFile {
    fn build(&self) -> NormModel {
        match *self {
            NormFile::Constant(c) => NormModel::Constant(c),
            NormFile::WeibullSym(q) => NormModel::WeibullSym(q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundFile {
    #[serde(alias = "thm21")]
    WOperator {
        tail: String,
    },
    #[serde(alias = "ex21")]
    Weibull {
        y: f64,
        k: f64,
        q: f64,
        #[serde(default)]
        beta_q_alt: bool,
    },
    #[serde(alias = "ex22")]
    LogModified {
        c1: f64,
        c2: f64,
        k: f64,
        q: f64,
        r: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c4: Option<f64>,
    },
    Moment {
        p: f64,
        norm: NormFile,
    },
    MomentOpt {
        a: f64,
        norm: NormFile,
    },
    #[serde(alias = "thm41")]
    SubPhi {
        phi: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_max: Option<u64>,
    },
    #[serde(alias = "ex41")]
    PowerPhi {
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c2: Option<f64>,
    },
    /// Not a bound: a fixed value, for exercising the failure path.
    Forced {
        value: f64,
    },
}

impl BoundFile {
    pub fn build(&self) -> Result<BoundSpec> {
        Ok(match self {
            BoundFile::WOperator { tail } => BoundSpec::WOperator { tail: tail.parse()? },
            BoundFile::Weibull { y, k, q, beta_q_alt } => BoundSpec::Weibull {
                y: *y,
                k: *k,
                q: *q,
                mode: if *beta_q_alt {
                    BetaMode::Alt
                } else {
                    BetaMode::AsPrinted
                },
            },
            BoundFile::LogModified { c1, c2, k, q, r, c4 } => BoundSpec::LogModified {
                c1: *c1,
                c2: *c2,
                k: *k,
                q: *q,
                r: *r,
                c4: *c4,
            },
            BoundFile::Moment { p, norm } => BoundSpec::Moment {
                p: *p,
                norms: norm.build(),
            },
            BoundFile::MomentOpt { a, norm } => BoundSpec::MomentOpt {
                a: *a,
                norms: norm.build(),
            },
            BoundFile::SubPhi { phi, n_max } => BoundSpec::SubPhi {
                phi: PhiFunction::parse(phi)?,
                n_max: n_max.unwrap_or(DEFAULT_N_MAX),
            },
            BoundFile::PowerPhi { q, c1, c2 } => BoundSpec::PowerPhi {
                q: *q,
                c1: *c1,
                c2: *c2,
            },
            BoundFile::Forced { value } => BoundSpec::Forced { value: *value },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub n: Vec<u64>,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

/// Regression of `−ln Q̂_n(x)` on `n^{q/(q+2)}` over the grid's `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingFile {
    pub q: f64,
    #[serde(default = "one")]
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_r_squared: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generator: GeneratorFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundFile>,
    pub grid: GridFile,
    #[serde(default)]
    pub run: RunFile,
    #[serde(default)]
    pub output: OutputFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingFile>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub replicas: Option<u64>,
    pub seed: Option<u64>,
    pub confidence: Option<f64>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Scenario(e.message().to_string()))?;
        if file.version != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "unsupported scenario version {} (expected {SCHEMA_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Scenario(e.to_string()))
    }

    /// Applies overrides and fills run defaults, returning the names of the
    /// settings that were defaulted.
    pub fn resolve(&mut self, overrides: Overrides) -> Vec<Constant> {
        let mut defaulted = Vec::new();
        let mut note_default = |name: &str, value: f64| {
            defaulted.push(Constant {
                name: name.into(),
                value,
                provenance: Provenance::ConfigDefault,
            })
        };
        let run = &mut self.run;
        if overrides.replicas.is_some() {
            run.replicas = overrides.replicas;
        } else if run.replicas.is_none() {
            run.replicas = Some(DEFAULT_REPLICAS);
            note_default("replicas", DEFAULT_REPLICAS as f64);
        }
        if overrides.seed.is_some() {
            run.seed = overrides.seed;
        } else if run.seed.is_none() {
            run.seed = Some(DEFAULT_SEED);
            note_default("seed", DEFAULT_SEED as f64);
        }
        if overrides.confidence.is_some() {
            run.confidence = overrides.confidence;
        } else if run.confidence.is_none() {
            run.confidence = Some(DEFAULT_CONFIDENCE);
            note_default("confidence", DEFAULT_CONFIDENCE);
        }
        if let Some(s) = &mut self.scaling {
            if s.min_r_squared.is_none() {
                s.min_r_squared = Some(DEFAULT_MIN_R_SQUARED);
                note_default("min_r_squared", DEFAULT_MIN_R_SQUARED);
            }
        }
        defaulted
    }

    pub fn grid_points(&self) -> Vec<(u64, f64)> {
        self.grid
            .n
            .iter()
            .flat_map(|&n| self.grid.x.iter().map(move |&x| (n, x)))
            .collect()
    }

    fn check_shape(&self) -> Result<()> {
        if self.grid.n.is_empty() || self.grid.x.is_empty() {
            return Err(Error::Scenario("grid needs at least one n and one x".into()));
        }
        if self.grid.n.contains(&0) {
            return Err(Error::Scenario("grid n values must be at least 1".into()));
        }
        if let Some(s) = &self.scaling {
            if !self.grid.x.contains(&s.x) {
                return Err(Error::Scenario(format!(
                    "scaling threshold x = {} is not in the grid",
                    s.x
                )));
            }
        }
        Ok(())
    }
}

/// One row per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub scenario: String,
    pub method: String,
    /// `name=value:provenance` entries joined by `;`.
    pub parameters: String,
    pub n: u64,
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub successes: u64,
    pub replicas: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub seed: u64,
    pub timestamp: String,
}

pub const CSV_HEADER: [&str; 16] = [
    "scenario",
    "method",
    "parameters",
    "n",
    "x",
    "bound",
    "successes",
    "replicas",
    "estimate",
    "ci_low",
    "ci_high",
    "confidence",
    "pass",
    "margin",
    "seed",
    "timestamp",
];

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn parameters_string(params: &[Constant]) -> String {
    params
        .iter()
        .map(|c| format!("{}={}:{}", c.name, fmt_f64(c.value), c.provenance))
        .collect::<Vec<_>>()
        .join(";")
}

impl ReportRecord {
    fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        vec![
            self.scenario.clone(),
            self.method.clone(),
            self.parameters.clone(),
            self.n.to_string(),
            fmt_f64(self.x),
            opt(self.bound),
            self.successes.to_string(),
            self.replicas.to_string(),
            fmt_f64(self.estimate),
            fmt_f64(self.ci_low),
            fmt_f64(self.ci_high),
            fmt_f64(self.confidence),
            self.pass.map(|p| p.to_string()).unwrap_or_default(),
            opt(self.margin),
            self.seed.to_string(),
            self.timestamp.clone(),
        ]
    }

    fn from_csv_row(row: &csv::StringRecord) -> Result<Self> {
        let bad = |what: &str| Error::Io(format!("malformed report row: {what}"));
        let get = |i: usize| row.get(i).ok_or_else(|| bad(CSV_HEADER[i]));
        let f = |i: usize| get(i)?.parse::<f64>().map_err(|_| bad(CSV_HEADER[i]));
        let u = |i: usize| get(i)?.parse::<u64>().map_err(|_| bad(CSV_HEADER[i]));
        let of = |i: usize| {
            let s = get(i)?;
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>().map(Some).map_err(|_| bad(CSV_HEADER[i]))
            }
        };
        let pass = match get(12)? {
            "" => None,
            s => Some(s.parse::<bool>().map_err(|_| bad("pass"))?),
        };
        Ok(ReportRecord {
            scenario: get(0)?.to_string(),
            method: get(1)?.to_string(),
            parameters: get(2)?.to_string(),
            n: u(3)?,
            x: f(4)?,
            bound: of(5)?,
            successes: u(6)?,
            replicas: u(7)?,
            estimate: f(8)?,
            ci_low: f(9)?,
            ci_high: f(10)?,
            confidence: f(11)?,
            pass,
            margin: of(13)?,
            seed: u(14)?,
            timestamp: get(15)?.to_string(),
        })
    }
}

pub fn records_to_csv(records: &[ReportRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.csv_row()).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn records_from_csv(text: &str) -> Result<Vec<ReportRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|row| ReportRecord::from_csv_row(&row.map_err(|e| Error::Io(e.to_string()))?))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub fit: ScalingFit,
    pub min_r_squared: f64,
    pub pass: bool,
    pub caveat: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub timestamp: String,
    /// Every constant or setting that was not given explicitly.
    pub defaulted: Vec<Constant>,
    pub notes: Vec<String>,
    /// `None` when there was nothing to certify.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    /// The scenario as run, with overrides applied and defaults filled in.
    pub scenario: ScenarioFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingReport>,
    pub records: Vec<ReportRecord>,
}

impl Report {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Io(e.message().to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        records_to_csv(&self.records)
    }

    /// Writes `<stem>.report.toml` and `<stem>.report.csv` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let toml_path = dir.join(format!("{stem}.report.toml"));
        let csv_path = dir.join(format!("{stem}.report.csv"));
        fs::write(&toml_path, self.to_toml()?)?;
        fs::write(&csv_path, self.to_csv()?)?;
        Ok((toml_path, csv_path))
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// What a run has to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Estimates, with bound values and pass flags when a bound is given.
    Simulate,
    /// As `Simulate`, but a bound or a scaling section is required and the
    /// report carries an overall verdict.
    Certify,
}

/// Validates the scenario, runs it and assembles the report. Every input
/// error is returned before any simulation starts.
pub fn run_scenario(file: &ScenarioFile, overrides: Overrides, mode: Mode) -> Result<Report> {
    let mut file = file.clone();
    file.check_shape()?;
    let mut defaulted = file.resolve(overrides);
    let replicas = file.run.replicas.expect("resolved");
    let seed = file.run.seed.expect("resolved");
    let confidence = file.run.confidence.expect("resolved");
    if mode == Mode::Certify && file.bound.is_none() && file.scaling.is_none() {
        return Err(Error::Scenario(
            "certification needs a [bound] or a [scaling] section".into(),
        ));
    }
    let generator = file.generator.build()?;
    let base = MartingaleSpec::new(generator, 1)?;
    let grid = file.grid_points();
    let name = file.name.clone().unwrap_or_else(|| "scenario".into());
    let timestamp = now();
    let mut notes = Vec::new();
    if matches!(file.generator, GeneratorFile::ProductAdversarial { .. }) {
        notes.push("η has a symmetric sign, so its one-sided tail is exp(-x^q)/2; the factor is absorbed into the free constants".into());
    }

    let mut records: Vec<ReportRecord>;
    let mut passed = None;
    if let Some(bound_file) = &file.bound {
        let scenario = Scenario::new(
            base.clone(),
            bound_file.build()?,
            grid.clone(),
            replicas,
            seed,
            confidence,
        )?;
        collect_defaults(&mut defaulted, scenario.bounds());
        for b in scenario.bounds() {
            for note in &b.notes {
                if !notes.contains(note) {
                    notes.push(note.clone());
                }
            }
        }
        let verdict = validate_upper(&scenario)?;
        passed = Some(verdict.passed());
        records = verdict
            .points
            .into_iter()
            .map(|p| ReportRecord {
                scenario: name.clone(),
                method: p.bound.method.name().to_string(),
                parameters: parameters_string(&p.bound.parameters),
                n: p.n,
                x: p.x,
                bound: Some(p.bound.value),
                successes: p.estimate.successes,
                replicas,
                estimate: p.estimate.point,
                ci_low: p.estimate.ci_low,
                ci_high: p.estimate.ci_high,
                confidence,
                pass: Some(p.pass),
                margin: Some(p.margin),
                seed,
                timestamp: timestamp.clone(),
            })
            .collect();
    } else {
        records = Vec::with_capacity(grid.len());
        for &n in &file.grid.n {
            let spec = MartingaleSpec::new(base.generator.clone(), n)?;
            for e in estimate_q_multi(&spec, &file.grid.x, replicas, seed, confidence)? {
                records.push(ReportRecord {
                    scenario: name.clone(),
                    method: "none".into(),
                    parameters: String::new(),
                    n,
                    x: e.x,
                    bound: None,
                    successes: e.successes,
                    replicas,
                    estimate: e.point,
                    ci_low: e.ci_low,
                    ci_high: e.ci_high,
                    confidence,
                    pass: None,
                    margin: None,
                    seed,
                    timestamp: timestamp.clone(),
                });
            }
        }
    }

    let scaling = match &file.scaling {
        Some(s) => {
            let points: Vec<(u64, f64)> = records
                .iter()
                .filter(|r| r.x == s.x)
                .map(|r| (r.n, r.estimate))
                .collect();
            let fit = fit_scaling(s.q, &points)?;
            let min_r_squared = s.min_r_squared.expect("resolved");
            let pass = fit.r_squared >= min_r_squared && fit.exponent_preferred();
            if !fit.excluded.is_empty() {
                notes.push(format!("scaling fit excluded n = {:?}: zero estimates", fit.excluded));
            }
            passed = Some(passed.unwrap_or(true) && pass);
            Some(ScalingReport {
                fit,
                min_r_squared,
                pass,
                caveat: SCALING_CAVEAT.into(),
            })
        }
        None => None,
    };

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp,
        defaulted,
        notes,
        passed,
        scenario: file,
        scaling,
        records,
    })
}

fn collect_defaults(out: &mut Vec<Constant>, bounds: &[BoundReport]) {
    let mut seen: BTreeMap<String, f64> = BTreeMap::new();
    for b in bounds {
        for c in b
            .parameters
            .iter()
            .filter(|c| c.provenance == Provenance::ConfigDefault)
        {
            if seen.insert(c.name.clone(), c.value).is_none() {
                out.push(c.clone());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RADEMACHER: &str = r#"
version = 1
name = "rademacher"

[generator]
kind = "rademacher"

[bound]
method = "thm21"
tail = "subgaussian:1"

[grid]
n = [16, 64]
x = [2.0, 3.0]

[run]
replicas = 20000
seed = 7
"#;

    #[test]
    fn parses_and_round_trips() {
        let file = ScenarioFile::parse(RADEMACHER).unwrap();
        assert_eq!(
            file.bound,
            Some(BoundFile::WOperator {
                tail: "subgaussian:1".into()
            })
        );
        let again = ScenarioFile::parse(&file.to_toml().unwrap()).unwrap();
        assert_eq!(file, again);
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        let extra = RADEMACHER.replace("seed = 7", "seed = 7\nthreads = 3");
        assert!(matches!(ScenarioFile::parse(&extra), Err(Error::Scenario(_))));
        let gen = RADEMACHER.replace("kind = \"rademacher\"", "kind = \"rademacher\"\nq = 2");
        assert!(ScenarioFile::parse(&gen).is_err());
        let v2 = RADEMACHER.replace("version = 1", "version = 2");
        assert!(ScenarioFile::parse(&v2).unwrap_err().to_string().contains("version"));
    }

    #[test]
    fn domain_errors_precede_simulation() {
        let bad = RADEMACHER.replace("x = [2.0, 3.0]", "x = [1.0]");
        let file = ScenarioFile::parse(&bad).unwrap();
        let err = run_scenario(&file, Overrides::default(), Mode::Certify).unwrap_err();
        assert!(err.to_string().contains("x >= 2"), "{err}");
    }

    #[test]
    fn certify_and_echo_defaults() {
        let file = ScenarioFile::parse(RADEMACHER).unwrap();
        let report = run_scenario(&file, Overrides::default(), Mode::Certify).unwrap();
        assert_eq!(report.passed, Some(true));
        assert_eq!(report.records.len(), 4);
        assert!(report.defaulted.iter().any(|c| c.name == "confidence"));
        assert_eq!(report.scenario.run.confidence, Some(DEFAULT_CONFIDENCE));
        // the echoed scenario reruns to the same numbers
        let rerun = run_scenario(&report.scenario, Overrides::default(), Mode::Certify).unwrap();
        let strip = |r: &Report| {
            r.records
                .iter()
                .map(|x| (x.successes, x.bound, x.ci_high))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&report), strip(&rerun));
    }

    #[test]
    fn overrides_win() {
        let file = ScenarioFile::parse(RADEMACHER).unwrap();
        let o = Overrides {
            replicas: Some(100),
            seed: Some(3),
            confidence: Some(0.9),
        };
        let report = run_scenario(&file, o, Mode::Simulate).unwrap();
        assert!(report
            .records
            .iter()
            .all(|r| r.replicas == 100 && r.seed == 3 && r.confidence == 0.9));
        assert!(report.defaulted.is_empty());
    }

    #[test]
    fn records_round_trip_through_csv_and_toml() {
        let file = ScenarioFile::parse(RADEMACHER).unwrap();
        let mut report = run_scenario(&file, Overrides::default(), Mode::Simulate).unwrap();
        report.records[0].x = 0.1 + 0.2;
        report.records[0].ci_high = std::f64::consts::PI / 7.0;
        let back = records_from_csv(&report.to_csv().unwrap()).unwrap();
        assert_eq!(back, report.records);
        let toml_back = Report::from_toml(&report.to_toml().unwrap()).unwrap();
        assert_eq!(toml_back, report);
    }

    #[test]
    fn forced_bound_fails() {
        let forced = RADEMACHER.replace(
            "method = \"thm21\"\ntail = \"subgaussian:1\"",
            "method = \"forced\"\nvalue = 0.0",
        );
        let file = ScenarioFile::parse(&forced).unwrap();
        let report = run_scenario(&file, Overrides::default(), Mode::Certify).unwrap();
        assert_eq!(report.passed, Some(false));
    }

    #[test]
    fn scaling_section() {
        let text = r#"
version = 1
[generator]
kind = "product-adversarial"
q = 0.5
zeta = { gauss_hermite = 2 }
[grid]
n = [16, 32, 64, 128, 256]
x = [1.0]
[run]
replicas = 20000
seed = 1
[scaling]
q = 0.5
"#;
        let file = ScenarioFile::parse(text).unwrap();
        let report = run_scenario(&file, Overrides::default(), Mode::Certify).unwrap();
        let s = report.scaling.as_ref().unwrap();
        assert_eq!(s.fit.alternatives.len(), 2);
        assert!(report.defaulted.iter().any(|c| c.name == "min_r_squared"));
        assert!(report.notes.iter().any(|n| n.contains("symmetric sign")));
        let bad = text
            .replace("q = 0.5\n\"#", "q = 0.5\nx = 2.0\n\"#")
            .replace("[scaling]\nq = 0.5", "[scaling]\nq = 0.5\nx = 2.0");
        assert!(run_scenario(&ScenarioFile::parse(&bad).unwrap(), Overrides::default(), Mode::Certify).is_err());
    }

    #[test]
    fn moment_and_power_bounds_in_files() {
        let text = r#"
version = 1
[generator]
kind = "conditional-sub-phi"
rule = "follow-sign"
base = { kind = "rademacher" }
[bound]
method = "ex41"
q = 2.0
c1 = 2.0
c2 = 0.5
[grid]
n = [64]
x = [0.25, 0.5]
[run]
replicas = 10000
"#;
        let report = run_scenario(&ScenarioFile::parse(text).unwrap(), Overrides::default(), Mode::Certify).unwrap();
        assert_eq!(report.passed, Some(true));
        let moment = r#"
version = 1
[generator]
kind = "weibull-sym"
q = 1.0
[bound]
method = "moment-opt"
a = 8.0
norm = { weibull-sym = 1.0 }
[grid]
n = [64]
x = [1.0]
[run]
replicas = 1000
"#;
        let report = run_scenario(
            &ScenarioFile::parse(moment).unwrap(),
            Overrides::default(),
            Mode::Certify,
        )
        .unwrap();
        assert!(report.records[0].parameters.contains("p_argmin="));
    }
}
