//! The experiment registry and the runner that binds specs to it.

mod catalog;
mod tools;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use oscillab_core::seqgen::{SieveCache, SieveTable};
use oscillab_core::ARTIFACT_VERSION;

use crate::config::{parse_list, ExperimentSpec, ParamValue};
use crate::error::{CliError, Result};
use crate::manifest::{Outcome, RunManifest};
use crate::output::write_manifest;

type RunFn = fn(&Params, &[usize], u64, &RunContext) -> Result<Outcome>;
type CheckpointFn = fn(&Params) -> Result<Vec<usize>>;

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    /// `(key, default)`; the default text is parsed like a config value.
    pub params: &'static [(&'static str, &'static str)],
    default_checkpoints: Option<CheckpointFn>,
    run: RunFn,
}

impl Experiment {
    pub fn takes_checkpoints(&self) -> bool {
        self.default_checkpoints.is_some()
    }
}

pub fn experiments() -> &'static [Experiment] {
    catalog::EXPERIMENTS
}

/// `gen`, `gowers` and `corr`: the same machinery with a free choice of sequence.
pub fn tools() -> &'static [Experiment] {
    tools::TOOLS
}

pub fn experiment_names() -> Vec<&'static str> {
    experiments().iter().map(|e| e.name).collect()
}

pub fn lookup(name: &str) -> Result<&'static Experiment> {
    experiments()
        .iter()
        .chain(tools())
        .find(|e| e.name == name)
        .ok_or_else(|| CliError::UnknownExperiment {
            name: name.to_string(),
            registered: experiment_names(),
        })
}

/// Shared resources for a run.
#[derive(Debug, Clone, Default)]
pub struct RunContext {
    /// Sieve tables are loaded from and stored to this directory when set.
    pub cache_dir: Option<PathBuf>,
}

impl RunContext {
    pub fn sieve(&self, n_max: u64) -> Result<SieveTable> {
        Ok(match &self.cache_dir {
            Some(dir) => SieveCache::new(dir).load_or_build(n_max)?.0,
            None => SieveTable::build(n_max)?,
        })
    }
}

/// Validated parameters with typed accessors.
pub struct Params<'a>(&'a BTreeMap<String, ParamValue>);

impl Params<'_> {
    fn get(&self, key: &str) -> Result<&ParamValue> {
        self.0
            .get(key)
            .ok_or_else(|| CliError::InvalidParam(format!("missing parameter {key:?}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.get(key)?;
        v.as_f64()
            .ok_or_else(|| CliError::InvalidParam(format!("{key} must be a number, got {v}")))
    }

    pub fn i64(&self, key: &str) -> Result<i64> {
        let v = self.get(key)?;
        v.as_i64()
            .ok_or_else(|| CliError::InvalidParam(format!("{key} must be an integer, got {v}")))
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        let v = self.i64(key)?;
        u64::try_from(v).map_err(|_| CliError::InvalidParam(format!("{key} must be non-negative, got {v}")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        Ok(self.u64(key)? as usize)
    }

    pub fn u32(&self, key: &str) -> Result<u32> {
        let v = self.u64(key)?;
        u32::try_from(v).map_err(|_| CliError::InvalidParam(format!("{key} is too large: {v}")))
    }

    pub fn text(&self, key: &str) -> Result<String> {
        Ok(self.get(key)?.to_string())
    }

    /// Parses the value's text form with `T::from_str`.
    pub fn parsed<T>(&self, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Into<CliError>,
    {
        self.text(key)?.parse().map_err(Into::into)
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        parse_list(&self.text(key)?)
    }
}

fn validate(exp: &Experiment, spec: &mut ExperimentSpec) -> Result<()> {
    if let Some(bad) = spec.params.keys().find(|k| !exp.params.iter().any(|(p, _)| p == k)) {
        let known: Vec<&str> = exp.params.iter().map(|(k, _)| *k).collect();
        return Err(CliError::InvalidParam(format!(
            "{} does not take parameter {bad:?} (accepted: {})",
            exp.name,
            known.join(", ")
        )));
    }
    for (k, default) in exp.params {
        spec.params
            .entry(k.to_string())
            .or_insert_with(|| ParamValue::parse(default));
    }
    match exp.default_checkpoints {
        None if !spec.checkpoints.is_empty() => {
            return Err(CliError::InvalidParam(format!("{} does not take checkpoints", exp.name)));
        }
        None => {}
        Some(f) => {
            if spec.checkpoints.is_empty() {
                spec.checkpoints = f(&Params(&spec.params))?;
            }
            if spec.checkpoints.first() == Some(&0) || spec.checkpoints.windows(2).any(|p| p[1] <= p[0]) {
                return Err(CliError::InvalidParam(
                    "checkpoints must be positive and strictly increasing".into(),
                ));
            }
        }
    }
    Ok(())
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Validates `spec`, runs it and writes its output (when requested).
pub fn run_experiment_in(spec: &ExperimentSpec, ctx: &RunContext) -> Result<RunManifest> {
    let exp = lookup(&spec.name)?;
    let mut spec = spec.clone();
    validate(exp, &mut spec)?;
    let started = now();
    let outcome = (exp.run)(&Params(&spec.params), &spec.checkpoints, spec.seed, ctx)?;
    let manifest = RunManifest {
        artifact_version: ARTIFACT_VERSION.to_string(),
        experiment: spec,
        started,
        finished: now(),
        results: outcome.results,
        pass_flags: outcome.pass_flags,
    };
    if let Some(out) = &manifest.experiment.output {
        write_manifest(&manifest, out)?;
    }
    Ok(manifest)
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunManifest> {
    run_experiment_in(spec, &RunContext::default())
}

/// Runs on a dedicated pool of `threads` workers.
pub fn run_with_threads(spec: &ExperimentSpec, ctx: &RunContext, threads: usize) -> Result<RunManifest> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::InvalidParam(format!("cannot build a pool of {threads} threads: {e}")))?;
    pool.install(|| run_experiment_in(spec, ctx))
}

fn ladder(n: usize, candidates: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = candidates.iter().copied().filter(|&c| c < n).collect();
    out.push(n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names_list_the_registry() {
        let err = run_experiment(&ExperimentSpec::new("no-such-thing")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("osc-random") && msg.contains("expansive-search"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let spec = ExperimentSpec::new("non-orthogonality").with_param("bogus", "1");
        let err = run_experiment(&spec).unwrap_err();
        assert!(err.to_string().contains("bogus"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn registry_is_complete() {
        let names = experiment_names();
        assert_eq!(names.len(), 11);
        for e in experiments().iter().chain(tools()) {
            let mut spec = ExperimentSpec::new(e.name);
            validate(e, &mut spec).unwrap();
            assert_eq!(spec.params.len(), e.params.len());
        }
    }

    #[test]
    fn checkpoints_must_increase() {
        let spec = ExperimentSpec::new("non-orthogonality").with_checkpoints(vec![8, 4]);
        assert_eq!(run_experiment(&spec).unwrap_err().exit_code(), 2);
        let spec = ExperimentSpec::new("expansive-search").with_checkpoints(vec![8]);
        assert!(run_experiment(&spec).is_err());
    }

    #[test]
    fn capacity_errors_map_to_exit_code_3() {
        let spec = ExperimentSpec::new("expansive-search").with_param("n", "20000");
        let err = run_experiment(&spec).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.hint().is_some());
    }

    #[test]
    fn ladder_examples() {
        assert_eq!(ladder(65536, &[1024, 65536]), vec![1024, 65536]);
        assert_eq!(ladder(500, &[1024]), vec![500]);
    }
}
