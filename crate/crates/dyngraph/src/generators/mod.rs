//! Instance generation: static random graphs, the dynamization procedures
//! that turn them into update sequences, adversarial sequences coupled to a
//! live algorithm instance, and ingestion of real-world temporal edge lists.
//!
//! Every generator emits a validated [`UpdateSequence`]. The non-adaptive
//! generators are deterministic per seed; the adaptive ones (clashing,
//! sliding window with η > 0) are deterministic per (seed, target seed).

use thiserror::Error;

use crate::graph::{FormatError, SequenceError, UpdateSequence};
use crate::UpdateError;

mod sequences;
mod static_graphs;
mod temporal;

pub use sequences::{
    clashing_sequence, equal_degree_sequence, random_update_sequence, sliding_window_sequence,
    ClashingSequence, EqualDegreeInstance,
};
pub use static_graphs::{gen_er, gen_rhg, max_edges};
pub use temporal::{parse_temporal_file, TemporalIngest};

/// Default phase-1 density target of the equal-degree generator, as a
/// fraction of Δ−1.
pub const DEFAULT_EQUAL_DEGREE_RATIO: f64 = 0.99;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("{requested} edges requested but only {available} exist for n={n}")]
    TooManyEdges {
        requested: u64,
        available: u64,
        n: usize,
    },
    #[error("radius calibration missed the target degree {target} (reached {reached:.2})")]
    Calibration { target: f64, reached: f64 },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid generator spec {spec:?}: {msg}")]
    InvalidSpec { spec: String, msg: String },
    #[error("coupled target algorithm aborted: {0}")]
    TargetAborted(#[from] UpdateError),
    #[error("generated sequence failed validation: {0}")]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// A generated benchmark instance: an optional untimed preamble that builds
/// the starting graph, and the measured update sequence.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub init: Option<UpdateSequence>,
    pub main: UpdateSequence,
    /// Whether an adaptive generator stopped before reaching its target
    /// length.
    pub truncated: bool,
}

impl GeneratedInstance {
    fn plain(main: UpdateSequence) -> GeneratedInstance {
        GeneratedInstance {
            init: None,
            main,
            truncated: false,
        }
    }
}

/// Parsed form of the CLI `kind:key=value,...` instance specs.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorConfig {
    /// Uniform random graph with exactly `m` edges, dynamized with deletion
    /// rate `rho`.
    Er { n: usize, m: u64, rho: f64 },
    /// Threshold random hyperbolic graph calibrated to `avg_deg`, dynamized
    /// with deletion rate `rho`.
    Rhg {
        n: usize,
        avg_deg: f64,
        gamma: f64,
        rho: f64,
    },
    /// Insertions that always clash in the eyes of a coupled coloring
    /// algorithm instance.
    Clashing {
        algo: String,
        n: usize,
        delta: usize,
        count: usize,
    },
    /// Near-Δ-regular base graph plus a degree-1 overlay churned at random.
    EqualDegree {
        n: usize,
        delta: usize,
        updates: usize,
        ratio: f64,
    },
    /// FIFO sliding window over a random edge order, with probability `eta`
    /// of instead deleting the oldest edge matched by a coupled trivial
    /// matcher.
    SlidingWindow {
        n: usize,
        m: u64,
        phi: usize,
        eta: f64,
    },
}

impl GeneratorConfig {
    /// True when generation consults a live algorithm instance, in which
    /// case replaying with the same algorithm seed reproduces the adversary.
    pub fn is_adaptive(&self) -> bool {
        matches!(
            self,
            GeneratorConfig::Clashing { .. } | GeneratorConfig::SlidingWindow { .. }
        )
    }

    /// Parses `kind:key=value,...` specs, e.g.
    /// `er:n=1024,m=65536,rho=0.25` or `clash:algo=countcol,n=4096,delta=512,count=100000`.
    pub fn parse(spec: &str) -> Result<GeneratorConfig, GenError> {
        let bad = |msg: &str| GenError::InvalidSpec {
            spec: spec.to_string(),
            msg: msg.to_string(),
        };
        let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("missing kind prefix"))?;
        let mut fields = std::collections::HashMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad("expected key=value fields"))?;
            fields.insert(k.trim(), v.trim());
        }
        let mut take = |key: &str| fields.remove(key).ok_or_else(|| bad(&format!("missing {key}")));
        macro_rules! num {
            ($key:expr) => {
                take($key)?.parse().map_err(|_| bad(&format!("bad {}", $key)))?
            };
        }
        let config = match kind {
            "er" => GeneratorConfig::Er {
                n: num!("n"),
                m: num!("m"),
                rho: fields
                    .remove("rho")
                    .map(|v| v.parse().map_err(|_| bad("bad rho")))
                    .transpose()?
                    .unwrap_or(0.0),
            },
            "rhg" => GeneratorConfig::Rhg {
                n: num!("n"),
                avg_deg: num!("avgdeg"),
                gamma: num!("gamma"),
                rho: fields
                    .remove("rho")
                    .map(|v| v.parse().map_err(|_| bad("bad rho")))
                    .transpose()?
                    .unwrap_or(0.0),
            },
            "clash" => GeneratorConfig::Clashing {
                algo: take("algo")?.to_string(),
                n: num!("n"),
                delta: num!("delta"),
                count: num!("count"),
            },
            "eqdeg" => GeneratorConfig::EqualDegree {
                n: num!("n"),
                delta: num!("delta"),
                updates: num!("updates"),
                ratio: fields
                    .remove("ratio")
                    .map(|v| v.parse().map_err(|_| bad("bad ratio")))
                    .transpose()?
                    .unwrap_or(DEFAULT_EQUAL_DEGREE_RATIO),
            },
            "window" => GeneratorConfig::SlidingWindow {
                n: num!("n"),
                m: num!("m"),
                phi: num!("phi"),
                eta: num!("eta"),
            },
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        };
        if !fields.is_empty() {
            let extra: Vec<&str> = fields.keys().copied().collect();
            return Err(bad(&format!("unknown fields {extra:?}")));
        }
        check_ranges(&config).map_err(|msg| bad(&msg))?;
        Ok(config)
    }

    /// Runs the generator. `seed` drives the structural randomness;
    /// `target_seed` seeds the coupled algorithm instance of the adaptive
    /// kinds, and must match the seed of the algorithm the sequence will be
    /// replayed against for the adversary to bite.
    pub fn generate(&self, seed: u64, target_seed: u64) -> Result<GeneratedInstance, GenError> {
        match *self {
            GeneratorConfig::Er { n, m, rho } => {
                let edges = gen_er(n, m, seed)?;
                let seq = random_update_sequence(n, &edges, rho, seed)?;
                Ok(GeneratedInstance::plain(seq))
            }
            GeneratorConfig::Rhg {
                n,
                avg_deg,
                gamma,
                rho,
            } => {
                let edges = gen_rhg(n, avg_deg, gamma, seed)?;
                let seq = random_update_sequence(n, &edges, rho, seed)?;
                Ok(GeneratedInstance::plain(seq))
            }
            GeneratorConfig::Clashing {
                ref algo,
                n,
                delta,
                count,
            } => {
                let mut target = crate::algo::build_coloring_by_name(algo, n, delta, target_seed)
                    .map_err(|e| GenError::InvalidParameter(e.to_string()))?;
                let out = clashing_sequence(target.as_mut(), n, delta, count, seed)?;
                Ok(GeneratedInstance {
                    init: None,
                    main: out.sequence,
                    truncated: out.truncated,
                })
            }
            GeneratorConfig::EqualDegree {
                n,
                delta,
                updates,
                ratio,
            } => {
                let inst = equal_degree_sequence(n, delta, updates, seed, ratio)?;
                Ok(GeneratedInstance {
                    init: Some(inst.initial),
                    main: inst.dynamic,
                    truncated: false,
                })
            }
            GeneratorConfig::SlidingWindow { n, m, phi, eta } => {
                let edges = gen_er(n, m, seed)?;
                let seq = sliding_window_sequence(n, &edges, phi, eta, seed)?;
                Ok(GeneratedInstance::plain(seq))
            }
        }
    }
}

fn check_ranges(config: &GeneratorConfig) -> Result<(), String> {
    let check_rho = |rho: f64| {
        if (0.0..=1.0).contains(&rho) {
            Ok(())
        } else {
            Err(format!("rho {rho} outside [0,1]"))
        }
    };
    match *config {
        GeneratorConfig::Er { rho, .. } => check_rho(rho),
        GeneratorConfig::Rhg {
            gamma, avg_deg, rho, ..
        } => {
            check_rho(rho)?;
            if gamma <= 2.0 {
                return Err(format!("gamma {gamma} must exceed 2"));
            }
            if avg_deg < 1.0 {
                return Err(format!("avgdeg {avg_deg} must be at least 1"));
            }
            Ok(())
        }
        GeneratorConfig::Clashing { count, delta, .. } => {
            if count == 0 {
                return Err("count must be positive".into());
            }
            if delta == 0 {
                return Err("delta must be positive".into());
            }
            Ok(())
        }
        GeneratorConfig::EqualDegree { delta, ratio, .. } => {
            if delta < 2 {
                return Err("delta must be at least 2".into());
            }
            if !(0.0..=1.0).contains(&ratio) {
                return Err(format!("ratio {ratio} outside [0,1]"));
            }
            Ok(())
        }
        GeneratorConfig::SlidingWindow { phi, eta, .. } => {
            if phi == 0 {
                return Err("phi must be at least 1".into());
            }
            if !(0.0..=1.0).contains(&eta) {
                return Err(format!("eta {eta} outside [0,1]"));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings_round_trip() {
        assert_eq!(
            GeneratorConfig::parse("er:n=1024,m=65536,rho=0.25").unwrap(),
            GeneratorConfig::Er {
                n: 1024,
                m: 65536,
                rho: 0.25
            }
        );
        assert_eq!(
            GeneratorConfig::parse("eqdeg:n=8192,delta=512,updates=1000").unwrap(),
            GeneratorConfig::EqualDegree {
                n: 8192,
                delta: 512,
                updates: 1000,
                ratio: DEFAULT_EQUAL_DEGREE_RATIO
            }
        );
        assert!(GeneratorConfig::parse("er:n=10").is_err());
        assert!(GeneratorConfig::parse("er:n=10,m=5,bogus=1").is_err());
        assert!(GeneratorConfig::parse("warp:n=10").is_err());
        assert!(GeneratorConfig::parse("er:n=10,m=5,rho=3.0").is_err());
    }

    #[test]
    fn adaptivity_flags() {
        assert!(GeneratorConfig::parse("clash:algo=countcol,n=64,delta=8,count=10")
            .unwrap()
            .is_adaptive());
        assert!(!GeneratorConfig::parse("er:n=64,m=128").unwrap().is_adaptive());
    }
}
