//! Reproducible experiment driver: config records, auto pair selection, and
//! byte-stable CSV / JSON outputs shared by the library and the CLI.

use crate::dynamics::{hubble_experiment, ExpansionParams, HubbleFit};
use crate::error::{Error, Result};
use crate::io::ComplexSource;
use crate::lattice::VertexId;
use crate::spectral::{reattach, return_probability, spectral_dimension, ReattachmentParams};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const TOOL_NAME: &str = "qspace";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Automatic pair selection: `count` pairs from the origin vertex to the
/// lowest-identity vertex at each target distance, targets evenly spaced in
/// [min_d, max_d].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoPairs {
    pub count: usize,
    #[serde(alias = "min_D")]
    pub min_d: u32,
    #[serde(alias = "max_D")]
    pub max_d: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbleConfig {
    pub source: ComplexSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(u32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto_pairs: Option<AutoPairs>,
    pub p: f64,
    pub steps: u32,
    #[serde(default = "default_window")]
    pub window: usize,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<f64>>,
}

fn default_window() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReattachSpec {
    pub lambda: f64,
    pub base_rate: f64,
    #[serde(default)]
    pub remove_local: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    pub source: ComplexSource,
    pub walkers: usize,
    pub t_max: usize,
    pub window: (usize, usize),
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reattach: Option<ReattachSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ExperimentConfig {
    Hubble(HubbleConfig),
    Spectral(SpectralConfig),
}

/// Rendered experiment outputs. Identical configs produce identical bytes.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub csv: String,
    pub summary_json: String,
}

fn csv_header(config_json: &str, columns: &str) -> String {
    format!("# {TOOL_NAME} {TOOL_VERSION}\n# config {config_json}\n{columns}\n")
}

fn canonical_config(config: &ExperimentConfig) -> String {
    serde_json::to_string(config).expect("config serializes")
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    match config {
        ExperimentConfig::Hubble(h) => run_hubble(h, &canonical_config(config)),
        ExperimentConfig::Spectral(s) => run_spectral(s, &canonical_config(config)),
    }
}

/// Resolves the marked pairs of a Hubble run on a freshly built complex.
pub fn resolve_pairs(
    complex: &crate::lattice::LatticeComplex,
    pairs: &Option<Vec<(u32, u32)>>,
    auto: &Option<AutoPairs>,
) -> Result<Vec<(VertexId, VertexId)>> {
    match (pairs, auto) {
        (Some(list), _) => Ok(list.iter().map(|&(a, b)| (VertexId(a), VertexId(b))).collect()),
        (None, Some(auto)) => {
            if auto.count == 0 || auto.max_d < auto.min_d {
                return Err(Error::InvalidParameter(
                    "auto_pairs needs count >= 1 and max_d >= min_d".into(),
                ));
            }
            let snap = complex.snapshot();
            let origin = VertexId(0);
            let src = *snap
                .index
                .get(&complex.rep(origin))
                .ok_or(Error::UnknownVertex(origin))?;
            let dist = snap.distances_from(src);
            let mut out = Vec::new();
            for i in 0..auto.count {
                let target = if auto.count == 1 {
                    auto.min_d
                } else {
                    auto.min_d
                        + ((auto.max_d - auto.min_d) as usize * i / (auto.count - 1)) as u32
                };
                let found = snap
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| dist[i] == target)
                    .map(|(_, &v)| v)
                    .min()
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("no vertex at distance {target}"))
                    })?;
                out.push((origin, found));
            }
            Ok(out)
        }
        (None, None) => Err(Error::InvalidParameter(
            "hubble config needs either pairs or auto_pairs".into(),
        )),
    }
}

#[derive(Debug, Serialize)]
struct HubbleSeedSummary {
    seed: u64,
    h0: f64,
    r_squared: f64,
}

#[derive(Debug, Serialize)]
struct Summary<R: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: serde_json::Value,
    results: R,
}

fn render_summary<R: Serialize>(config_json: &str, results: R) -> String {
    let summary = Summary {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        config: serde_json::from_str(config_json).expect("config parses"),
        results,
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

fn run_hubble(config: &HubbleConfig, config_json: &str) -> Result<ExperimentOutput> {
    if config.seeds.is_empty() {
        return Err(Error::InvalidParameter("seeds must not be empty".into()));
    }
    let mut csv = csv_header(config_json, "seed,step,pair_id,D,v");
    let mut per_seed: Vec<HubbleSeedSummary> = Vec::new();
    let mut fits: Vec<HubbleFit> = Vec::new();
    for &seed in &config.seeds {
        let mut complex = config.source.build();
        complex.set_rng_seed(seed);
        let pairs = resolve_pairs(&complex, &config.pairs, &config.auto_pairs)?;
        let params = ExpansionParams {
            split_probability: config.p,
            steps: config.steps,
            seed,
            schedule: config.schedule.clone(),
        };
        let fit = hubble_experiment(&mut complex, &pairs, &params, config.window)?;
        for s in &fit.samples {
            let _ = writeln!(csv, "{seed},{},{},{},{}", s.step, s.pair, s.d, s.v);
        }
        per_seed.push(HubbleSeedSummary { seed, h0: fit.h0, r_squared: fit.r_squared });
        fits.push(fit);
    }
    let n = per_seed.len() as f64;
    let mean_h0 = per_seed.iter().map(|s| s.h0).sum::<f64>() / n;
    let mean_r2 = per_seed.iter().map(|s| s.r_squared).sum::<f64>() / n;

    #[derive(Serialize)]
    struct HubbleResults {
        mean_h0: f64,
        mean_r_squared: f64,
        per_seed: Vec<HubbleSeedSummary>,
    }
    let summary_json = render_summary(
        config_json,
        HubbleResults { mean_h0, mean_r_squared: mean_r2, per_seed },
    );
    Ok(ExperimentOutput { csv, summary_json })
}

#[derive(Debug, Serialize)]
struct SpectralSeedSummary {
    seed: u64,
    d_s: f64,
    stderr: f64,
    reattachments: usize,
}

fn run_spectral(config: &SpectralConfig, config_json: &str) -> Result<ExperimentOutput> {
    if config.seeds.is_empty() {
        return Err(Error::InvalidParameter("seeds must not be empty".into()));
    }
    let mut csv = csv_header(config_json, "seed,t,P,stderr");
    let mut per_seed = Vec::new();
    for &seed in &config.seeds {
        let mut complex = config.source.build();
        complex.set_rng_seed(seed);
        let mut fired = 0;
        if let Some(spec) = &config.reattach {
            let params = ReattachmentParams {
                lambda: spec.lambda,
                base_rate: spec.base_rate,
                seed: seed.wrapping_mul(2).wrapping_add(1),
                remove_local: spec.remove_local,
            };
            fired = reattach(&mut complex, &params)?.fired;
        }
        let origin = VertexId(0);
        let p = return_probability(&complex, origin, config.t_max, config.walkers, seed)?;
        for (t, &pt) in p.iter().enumerate() {
            let se = (pt * (1.0 - pt) / config.walkers as f64).sqrt();
            let _ = writeln!(csv, "{seed},{t},{pt},{se}");
        }
        let est = spectral_dimension(&p, config.window)?;
        per_seed.push(SpectralSeedSummary {
            seed,
            d_s: est.d_s,
            stderr: est.stderr,
            reattachments: fired,
        });
    }
    let mean_d_s = per_seed.iter().map(|s| s.d_s).sum::<f64>() / per_seed.len() as f64;

    #[derive(Serialize)]
    struct SpectralResults {
        mean_d_s: f64,
        window: (usize, usize),
        walkers: usize,
        per_seed: Vec<SpectralSeedSummary>,
    }
    let summary_json = render_summary(
        config_json,
        SpectralResults {
            mean_d_s,
            window: config.window,
            walkers: config.walkers,
            per_seed,
        },
    );
    Ok(ExperimentOutput { csv, summary_json })
}
