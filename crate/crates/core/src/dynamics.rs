//! The expansion process — stochastic edge splitting per half-time step —
//! and the recession-rate-versus-distance statistics it produces.

use crate::error::{Error, Result};
use crate::lattice::{LatticeComplex, VertexId};
use crate::topology::split_edge;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Parameters of an expansion run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpansionParams {
    /// Probability that a live splittable edge splits in one half-time step.
    pub split_probability: f64,
    pub steps: u32,
    pub seed: u64,
    /// Optional per-step probabilities overriding `split_probability`;
    /// the half-time need not stay constant as the complex grows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<f64>>,
}

impl ExpansionParams {
    pub fn validate(&self) -> Result<()> {
        let mut ps = vec![self.split_probability];
        if let Some(s) = &self.schedule {
            ps.extend_from_slice(s);
        }
        for p in ps {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "split probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    fn probability_at(&self, step: u32) -> f64 {
        self.schedule
            .as_ref()
            .and_then(|s| s.get(step as usize).copied())
            .unwrap_or(self.split_probability)
    }
}

/// Runs one half-time step: every live, non-tadpole edge existing at step
/// start splits independently with probability `p`. Edges created during the
/// step are not candidates until the next one. Returns the split count.
pub fn step_halftime(
    complex: &mut LatticeComplex,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("split probability {p} outside [0, 1]")));
    }
    let candidates: Vec<_> = complex
        .edges()
        .filter(|e| e.is_live() && complex.rep(e.base) != complex.rep(e.head))
        .map(|e| e.id)
        .collect();
    let mut split = 0;
    for edge in candidates {
        if rng.gen_bool(p) {
            // Splitting never touches contracted edges; the candidate filter
            // guarantees it and the operation re-checks.
            assert!(complex.edge(edge)?.is_live(), "contracted edge offered for splitting");
            split_edge(complex, edge)?;
            split += 1;
        }
    }
    Ok(split)
}

/// Hop count over live edges: the light travel time between two vertices in
/// unit-edge automaton ticks.
pub fn light_distance(complex: &LatticeComplex, u: VertexId, v: VertexId) -> Result<u32> {
    if !complex.contains_vertex(u) {
        return Err(Error::UnknownVertex(u));
    }
    if !complex.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let snap = complex.snapshot();
    let (ru, rv) = (complex.rep(u), complex.rep(v));
    snap.distance(snap.index[&ru], snap.index[&rv])
        .ok_or(Error::Unreachable(u, v))
}

/// One regression sample: trailing-window mean distance against the
/// trailing-window recession rate of a marked pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HubbleSample {
    pub pair: usize,
    pub step: u32,
    pub d: f64,
    pub v: f64,
}

/// Zero-intercept fit of recession rate against distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HubbleFit {
    /// Slope of v on D through the origin, per half-time step.
    pub h0: f64,
    /// Uncentered coefficient of determination of the zero-intercept fit.
    pub r_squared: f64,
    pub samples: Vec<HubbleSample>,
}

/// Runs the expansion for `params.steps` half-time steps and fits the Hubble
/// law v = H0·D over all (pair, step) samples. At step t the rate is the
/// window-averaged distance increment and it is paired with the matching
/// window-averaged pre-step distance, so exact doubling fits exactly.
pub fn hubble_experiment(
    complex: &mut LatticeComplex,
    pairs: &[(VertexId, VertexId)],
    params: &ExpansionParams,
    window: usize,
) -> Result<HubbleFit> {
    use rand::SeedableRng;
    params.validate()?;
    if window == 0 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }
    if pairs.len() < 3 {
        return Err(Error::InsufficientSpan(format!(
            "{} pair(s) provided, need at least 3",
            pairs.len()
        )));
    }

    let mut history: Vec<Vec<f64>> = Vec::with_capacity(pairs.len());
    {
        let snap = complex.snapshot();
        for &(u, v) in pairs {
            let (ru, rv) = (complex.rep(u), complex.rep(v));
            let (iu, iv) = (
                *snap.index.get(&ru).ok_or(Error::UnknownVertex(u))?,
                *snap.index.get(&rv).ok_or(Error::UnknownVertex(v))?,
            );
            let d = snap.distance(iu, iv).ok_or(Error::Unreachable(u, v))? as f64;
            history.push(vec![d]);
        }
    }
    let initial: std::collections::BTreeSet<u64> =
        history.iter().map(|h| h[0].to_bits()).collect();
    if initial.len() < 3 {
        return Err(Error::InsufficientSpan(format!(
            "pairs span only {} distinct initial distance(s), need at least 3",
            initial.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut samples = Vec::new();
    for step in 1..=params.steps {
        step_halftime(complex, params.probability_at(step - 1), &mut rng)?;
        let snap = complex.snapshot();
        for (pair, &(u, v)) in pairs.iter().enumerate() {
            let (ru, rv) = (complex.rep(u), complex.rep(v));
            let d = snap
                .distance(snap.index[&ru], snap.index[&rv])
                .ok_or(Error::Unreachable(u, v))? as f64;
            history[pair].push(d);

            let t = step as usize;
            let w = window.min(t);
            let h = &history[pair];
            let v_rate = (h[t] - h[t - w]) / w as f64;
            let d_mean = h[t - w..t].iter().sum::<f64>() / w as f64;
            samples.push(HubbleSample { pair, step, d: d_mean, v: v_rate });
        }
    }

    let sum_dv: f64 = samples.iter().map(|s| s.d * s.v).sum();
    let sum_dd: f64 = samples.iter().map(|s| s.d * s.d).sum();
    let h0 = if sum_dd > 0.0 { sum_dv / sum_dd } else { 0.0 };
    let ss_res: f64 = samples.iter().map(|s| (s.v - h0 * s.d).powi(2)).sum();
    let ss_tot: f64 = samples.iter().map(|s| s.v * s.v).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    Ok(HubbleFit { h0, r_squared, samples })
}
