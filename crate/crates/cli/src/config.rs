//! Run settings: command-line flags, an optional `key=value` file, and the
//! resolved [`RunSpec`].
//!
//! The file holds one `key = value` per line; blank lines and lines starting
//! with `#` are skipped. Keys are the long flag names without dashes
//! (`eps-lo` and `eps_lo` are both accepted). Flags override the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use difb_core::elm::{
    Activation, DEFAULT_HIDDEN_CLASSIFICATION, DEFAULT_HIDDEN_REGRESSION, DEFAULT_MU,
};
use difb_core::solvers::{Algorithm, DifbSettings, LassoSolver};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Regress,
    Classify,
    Trace,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Regress => "regress",
            Experiment::Classify => "classify",
            Experiment::Trace => "trace",
        }
    }
}

/// Flags shared by `regress`, `classify` and `trace`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat key=value file with defaults for any of these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hidden-layer activation: linear or sigmoid
    #[arg(long)]
    pub activation: Option<String>,
    /// Number of sine samples (regress, trace)
    #[arg(long)]
    pub samples: Option<usize>,
    /// Hidden nodes
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Iterations per solver run
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// ℓ1 weight on the output weights
    #[arg(long)]
    pub mu: Option<f64>,
    /// Comma-separated: difb,fista,tseng,suantai,dong_mann,iyiola_dr
    #[arg(long)]
    pub algorithms: Option<String>,
    /// Iris CSV (classify)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Training fraction (classify)
    #[arg(long)]
    pub split: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Step of the double-inertial method as a multiple of the cocoercivity constant, in (0, 2)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// First inertial weight (second defaults to 0 when only this is given)
    #[arg(long)]
    pub theta: Option<f64>,
    /// Second inertial weight, nonpositive
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Lower relaxation bound
    #[arg(long = "eps-lo")]
    pub eps_lo: Option<f64>,
    /// Upper relaxation bound
    #[arg(long = "eps-hi")]
    pub eps_hi: Option<f64>,
}

/// Config mistakes are usage errors.
fn config_error(path: &Path, line: u64, message: String) -> CliError {
    CliError::Usage(format!("{}, line {line}: {message}", path.display()))
}

/// Parses the config file format into a key → (line, value) map.
pub fn parse_config(text: &str, path: &Path) -> Result<BTreeMap<String, (u64, String)>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_error(path, i as u64 + 1, format!("expected key=value, found '{line}'")))?;
        let key = key.trim().replace('_', "-");
        out.insert(key, (i as u64 + 1, value.trim().to_string()));
    }
    Ok(out)
}

fn file_value<T: FromStr>(
    entries: &mut BTreeMap<String, (u64, String)>,
    key: &str,
    path: &Path,
) -> Result<Option<T>> {
    match entries.remove(key) {
        None => Ok(None),
        Some((line, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| config_error(path, line, format!("bad value for {key}: '{v}'"))),
    }
}

impl RunArgs {
    /// Fills unset flags from the config file, if one was given.
    pub fn merged_with_file(&self) -> Result<RunArgs> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut entries = parse_config(&text, path)?;
        let mut e = |k: &str| -> Result<Option<String>> { file_value(&mut entries, k, path) };
        let activation = e("activation")?;
        let algorithms = e("algorithms")?;
        let data: Option<String> = e("data")?;
        let out: Option<String> = e("out")?;
        let mut n = |k: &str| -> Result<Option<f64>> { file_value(&mut entries, k, path) };
        let (mu, split, lambda, theta, delta, eps_lo, eps_hi) =
            (n("mu")?, n("split")?, n("lambda")?, n("theta")?, n("delta")?, n("eps-lo")?, n("eps-hi")?);
        let mut c = |k: &str| -> Result<Option<usize>> { file_value(&mut entries, k, path) };
        let (samples, hidden, iters) = (c("samples")?, c("hidden")?, c("iters")?);
        let seed: Option<u64> = file_value(&mut entries, "seed", path)?;
        if let Some((key, (line, _))) = entries.into_iter().next() {
            return Err(config_error(path, line, format!("unknown key '{key}'")));
        }
        Ok(RunArgs {
            config: self.config.clone(),
            activation: self.activation.clone().or(activation),
            samples: self.samples.or(samples),
            hidden: self.hidden.or(hidden),
            iters: self.iters.or(iters),
            seed: self.seed.or(seed),
            mu: self.mu.or(mu),
            algorithms: self.algorithms.clone().or(algorithms),
            data: self.data.clone().or(data.map(PathBuf::from)),
            split: self.split.or(split),
            out: self.out.clone().or(out.map(PathBuf::from)),
            lambda: self.lambda.or(lambda),
            theta: self.theta.or(theta),
            delta: self.delta.or(delta),
            eps_lo: self.eps_lo.or(eps_lo),
            eps_hi: self.eps_hi.or(eps_hi),
        })
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub experiment: Experiment,
    pub activation: Activation,
    pub n_samples: usize,
    pub n_hidden: usize,
    pub iterations: usize,
    pub seed: u64,
    pub mu: f64,
    pub algorithms: Vec<Algorithm>,
    pub difb: DifbSettings,
    pub data_path: Option<PathBuf>,
    pub split_fraction: f64,
    pub out_path: PathBuf,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10;
pub const DEFAULT_SPLIT: f64 = 0.8;

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

impl RunSpec {
    /// Defaults: linear activation for regress/trace and sigmoid for
    /// classify; 1000 iterations for linear runs and 5000 for sigmoid;
    /// every algorithm for regress/trace and `difb` for classify.
    pub fn defaults(experiment: Experiment) -> RunSpec {
        let activation = match experiment {
            Experiment::Classify => Activation::Sigmoid,
            _ => Activation::Linear,
        };
        RunSpec {
            experiment,
            activation,
            n_samples: DEFAULT_SAMPLES,
            n_hidden: match experiment {
                Experiment::Classify => DEFAULT_HIDDEN_CLASSIFICATION,
                _ => DEFAULT_HIDDEN_REGRESSION,
            },
            iterations: default_iterations(activation),
            seed: DEFAULT_SEED,
            mu: DEFAULT_MU,
            algorithms: match experiment {
                Experiment::Classify => vec![Algorithm::Difb],
                _ => Algorithm::ALL.to_vec(),
            },
            difb: DifbSettings::default(),
            data_path: None,
            split_fraction: DEFAULT_SPLIT,
            out_path: PathBuf::from("out"),
        }
    }

    pub fn resolve(experiment: Experiment, args: &RunArgs) -> Result<RunSpec> {
        let args = args.merged_with_file()?;
        let mut spec = RunSpec::defaults(experiment);
        if let Some(a) = &args.activation {
            spec.activation = a.parse().map_err(usage)?;
            spec.iterations = default_iterations(spec.activation);
        }
        if let Some(n) = args.samples {
            spec.n_samples = n;
        }
        if let Some(h) = args.hidden {
            spec.n_hidden = h;
        }
        if let Some(i) = args.iters {
            spec.iterations = i;
        }
        if let Some(s) = args.seed {
            spec.seed = s;
        }
        if let Some(mu) = args.mu {
            spec.mu = mu;
        }
        if let Some(list) = &args.algorithms {
            spec.algorithms = parse_algorithms(list)?;
        }
        if let Some(l) = args.lambda {
            spec.difb.step_factor = l;
        }
        if args.theta.is_some() || args.delta.is_some() {
            spec.difb.inertia = Some((args.theta.unwrap_or(0.0), args.delta.unwrap_or(0.0)));
        }
        if let Some(e) = args.eps_lo {
            spec.difb.eps_lo = e;
        }
        if let Some(e) = args.eps_hi {
            spec.difb.eps_hi = e;
        }
        spec.data_path = args.data.clone();
        if let Some(f) = args.split {
            spec.split_fraction = f;
        }
        if let Some(o) = &args.out {
            spec.out_path = o.clone();
        }
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.n_hidden == 0 {
            return Err(usage("--hidden must be at least 1"));
        }
        if self.experiment != Experiment::Classify && self.n_samples < 2 {
            return Err(usage("--samples must be at least 2"));
        }
        if self.experiment != Experiment::Trace && self.iterations == 0 {
            return Err(usage("--iters must be at least 1"));
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(usage(format!("--mu must be nonnegative, got {}", self.mu)));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(usage(format!("--split must lie in (0, 1), got {}", self.split_fraction)));
        }
        let s = self.difb.step_factor;
        if !(s > 0.0 && s < 2.0) {
            return Err(usage(format!("--lambda is a multiple of the cocoercivity constant and must lie in (0, 2), got {s}")));
        }
        if self.experiment == Experiment::Classify && self.data_path.is_none() {
            return Err(usage("classify needs --data PATH (an Iris CSV)"));
        }
        Ok(())
    }

    pub fn solver(&self, algorithm: Algorithm) -> LassoSolver {
        match algorithm {
            Algorithm::Difb => LassoSolver::Difb(self.difb),
            other => LassoSolver::defaults(other),
        }
    }
}

fn default_iterations(activation: Activation) -> usize {
    match activation {
        Activation::Linear => 1000,
        Activation::Sigmoid => 5000,
    }
}

pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let a: Algorithm = name.parse().map_err(usage)?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(usage("--algorithms is empty"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_experiment_and_activation() {
        let r = RunSpec::resolve(Experiment::Regress, &RunArgs::default()).unwrap();
        assert_eq!((r.activation, r.iterations, r.n_hidden), (Activation::Linear, 1000, 20));
        assert_eq!(r.algorithms.len(), 6);
        let args = RunArgs { activation: Some("sigmoid".into()), ..Default::default() };
        let r = RunSpec::resolve(Experiment::Regress, &args).unwrap();
        assert_eq!(r.iterations, 5000);
        let args = RunArgs { data: Some("x.csv".into()), ..Default::default() };
        let c = RunSpec::resolve(Experiment::Classify, &args).unwrap();
        assert_eq!((c.activation, c.n_hidden), (Activation::Sigmoid, 50));
    }

    #[test]
    fn usage_errors() {
        let bad = [
            RunArgs { activation: Some("relu".into()), ..Default::default() },
            RunArgs { algorithms: Some("difb,newton".into()), ..Default::default() },
            RunArgs { lambda: Some(2.0), ..Default::default() },
            RunArgs { split: Some(1.0), ..Default::default() },
            RunArgs { samples: Some(1), ..Default::default() },
        ];
        for args in bad {
            let err = RunSpec::resolve(Experiment::Regress, &args).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{err}");
        }
        let err = RunSpec::resolve(Experiment::Classify, &RunArgs::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn algorithm_list_parsing() {
        assert_eq!(
            parse_algorithms("fista, difb,fista").unwrap(),
            vec![Algorithm::Fista, Algorithm::Difb]
        );
        assert!(parse_algorithms(" , ").is_err());
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# sine run\nsamples = 25\nseed=7\neps_lo = 0.6\nalgorithms = difb\n").unwrap();
        let args = RunArgs { config: Some(path.clone()), seed: Some(9), ..Default::default() };
        let spec = RunSpec::resolve(Experiment::Regress, &args).unwrap();
        assert_eq!((spec.n_samples, spec.seed, spec.difb.eps_lo), (25, 9, 0.6));
        assert_eq!(spec.algorithms, vec![Algorithm::Difb]);

        std::fs::write(&path, "samples = 25\ncolour = red\n").unwrap();
        let err = RunSpec::resolve(Experiment::Regress, &args).unwrap_err();
        assert!(err.to_string().contains("line 2: unknown key 'colour'"), "{err}");
        assert_eq!(err.exit_code(), 1);
        std::fs::write(&path, "samples = many\n").unwrap();
        assert!(RunSpec::resolve(Experiment::Regress, &args).is_err());
        std::fs::write(&path, "samples\n").unwrap();
        assert!(RunSpec::resolve(Experiment::Regress, &args).is_err());
    }
}
