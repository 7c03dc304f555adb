//! Experiment configuration: an optional JSON file overlaid by flags.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use misp::arrival::ArrivalOrder;
use misp::harness::{Algorithm, AlgorithmKind};
use misp::RationalInstance;

pub const DEFAULT_TRIALS: usize = 10_000;

/// A problem with the configuration or with a file it names.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Either a path to an instance file or the instance itself.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path(PathBuf),
    Inline(Box<RationalInstance>),
}

/// Every field is optional so that a file and the flags can be merged;
/// [`ExperimentConfig::resolve`] fills defaults and checks ranges.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: Option<InstanceSource>,
    #[serde(alias = "algorithm")]
    pub algo: Option<String>,
    pub p: Option<f64>,
    pub sparsity: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub order: Option<String>,
    pub threads: Option<usize>,
    pub out_json: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
}

/// A checked configuration, ready to run.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub instance: RationalInstance,
    /// File stem used for default report names.
    pub stem: String,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub seed: u64,
    pub order: ArrivalOrder,
    pub threads: Option<usize>,
    pub out_json: PathBuf,
    pub out_csv: PathBuf,
}

impl ExperimentConfig {
    /// Reads a config file. Relative instance and output paths are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let mut config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(InstanceSource::Path(p)) = &mut config.instance {
            *p = base.join(&*p);
        }
        for out in [&mut config.out_json, &mut config.out_csv].into_iter().flatten() {
            *out = base.join(&*out);
        }
        Ok(config)
    }

    /// Fields set in `flags` win.
    pub fn overlay(self, flags: ExperimentConfig) -> Self {
        ExperimentConfig {
            instance: flags.instance.or(self.instance),
            algo: flags.algo.or(self.algo),
            p: flags.p.or(self.p),
            sparsity: flags.sparsity.or(self.sparsity),
            trials: flags.trials.or(self.trials),
            seed: flags.seed.or(self.seed),
            order: flags.order.or(self.order),
            threads: flags.threads.or(self.threads),
            out_json: flags.out_json.or(self.out_json),
            out_csv: flags.out_csv.or(self.out_csv),
        }
    }

    pub fn resolve(self) -> Result<Experiment, ConfigError> {
        let (instance, stem) = match self.instance.ok_or_else(|| bad("no instance given"))? {
            InstanceSource::Path(path) => {
                let instance =
                    RationalInstance::load(&path).map_err(|e| bad(format!("instance {}: {e}", path.display())))?;
                let stem = path.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
                (instance, stem)
            }
            InstanceSource::Inline(instance) => {
                instance.validate().map_err(|e| bad(format!("inline instance: {e}")))?;
                (*instance, "instance".to_string())
            }
        };
        let kind: AlgorithmKind = self
            .algo
            .as_deref()
            .ok_or_else(|| bad("no algorithm given"))?
            .parse()
            .map_err(|e| bad(format!("{e}")))?;
        if let Some(p) = self.p {
            if !(p > 0.0 && p < 1.0) {
                return Err(bad(format!("p must lie strictly between 0 and 1, got {p}")));
            }
        }
        if self.sparsity == Some(0) {
            return Err(bad("sparsity must be at least 1"));
        }
        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(bad("trials must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(bad("threads must be at least 1"));
        }
        let order: ArrivalOrder = self
            .order
            .as_deref()
            .unwrap_or("uniform")
            .parse()
            .map_err(|e| bad(format!("{e}")))?;
        order.validate(instance.n()).map_err(|e| bad(format!("{e}")))?;
        let seed = self.seed.unwrap_or(0);
        let base = format!("{stem}.{kind}.s{seed}");
        Ok(Experiment {
            out_json: self.out_json.unwrap_or_else(|| PathBuf::from(format!("{base}.json"))),
            out_csv: self.out_csv.unwrap_or_else(|| PathBuf::from(format!("{base}.csv"))),
            instance,
            stem,
            algorithm: Algorithm { kind, p: self.p, sparsity: self.sparsity },
            trials,
            seed,
            order,
            threads: self.threads,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BLOCKS: &str = r#"{"weights": [3, 2, 1], "matroids": [{"type": "partition", "blocks": [[0, 1], [2]]}]}"#;

    fn inline(extra: &str) -> ExperimentConfig {
        serde_json::from_str(&format!(r#"{{"instance": {TWO_BLOCKS}, {extra}}}"#)).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let file = inline(r#""algo": "partition", "trials": 50, "seed": 4"#);
        let flags = ExperimentConfig { seed: Some(9), ..Default::default() };
        let run = file.overlay(flags).resolve().unwrap();
        assert_eq!(run.trials, 50);
        assert_eq!(run.seed, 9);
        assert_eq!(run.out_json, PathBuf::from("instance.partition.s9.json"));
    }

    #[test]
    fn range_checks() {
        for extra in [
            r#""algo": "partition", "p": 1.0"#,
            r#""algo": "partition", "trials": 0"#,
            r#""algo": "partition", "order": "0,1""#,
            r#""algo": "nonsense""#,
        ] {
            assert!(inline(extra).resolve().is_err(), "{extra}");
        }
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"triels": 3}"#).is_err());
    }
}
