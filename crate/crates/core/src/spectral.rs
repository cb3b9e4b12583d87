//! Effective dimension from random-walk return probabilities, plus the
//! long-range face-reattachment reconfiguration that lowers it.

use crate::error::{Error, Result};
use crate::lattice::{EdgeLabel, LatticeComplex, VertexId};
use crate::topology::cells::all_faces;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Long-range reattachment parameters. A sampled pair of faces at hop
/// distance k is glued with probability base_rate · exp(−k/λ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReattachmentParams {
    /// Distance scale at which the gluing probability drops by a factor e.
    pub lambda: f64,
    pub base_rate: f64,
    pub seed: u64,
    /// Also delete the paired faces' own boundary edges when a gluing fires.
    #[serde(default)]
    pub remove_local: bool,
}

impl ReattachmentParams {
    pub fn validate(&self) -> Result<()> {
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda {} must be positive", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.base_rate) {
            return Err(Error::InvalidParameter(format!(
                "base_rate {} outside [0, 1]",
                self.base_rate
            )));
        }
        Ok(())
    }
}

/// One sampled face pair during reattachment.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampledPair {
    pub distance: u32,
    pub fired: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReattachReport {
    pub fired: usize,
    pub samples: Vec<SampledPair>,
}

/// Samples one partner face for every 2-face of the complex and adds
/// vertex-level shortcut edges between the paired faces (sorted-identity
/// pairing) with probability base_rate · exp(−k/λ) at face hop distance k.
/// Touching pairs (distance 0) are never glued. Distances are measured on
/// the complex as it stood at entry, so one round of gluings does not feed
/// back into its own sampling.
pub fn reattach(complex: &mut LatticeComplex, params: &ReattachmentParams) -> Result<ReattachReport> {
    params.validate()?;
    let faces = all_faces(complex);
    let mut report = ReattachReport { fired: 0, samples: Vec::new() };
    if faces.len() < 2 {
        return Ok(report);
    }
    let snap = complex.snapshot();
    let dense: Vec<Vec<usize>> = faces
        .iter()
        .map(|f| f.iter().map(|v| snap.index[&complex.rep(*v)]).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut gluings: Vec<usize> = Vec::new();
    for i in 0..faces.len() {
        let j = {
            // Uniform partner other than the face itself.
            let j = rng.gen_range(0..faces.len() - 1);
            if j >= i {
                j + 1
            } else {
                j
            }
        };
        let k = face_distance(&snap, &dense[i], &dense[j])
            .ok_or(Error::Unreachable(faces[i][0], faces[j][0]))?;
        let mut fired = false;
        if k > 0 {
            let p = (params.base_rate * (-(k as f64) / params.lambda).exp()).clamp(0.0, 1.0);
            if p > 0.0 && rng.gen_bool(p) {
                fired = true;
                gluings.push(i);
                gluings.push(j);
                report.fired += 1;
                glue_shortcuts(complex, &faces[i], &faces[j]);
            }
        }
        report.samples.push(SampledPair { distance: k, fired });
    }
    if params.remove_local {
        for &f in &gluings {
            remove_boundary(complex, &faces[f]);
        }
    }
    Ok(report)
}

/// Minimal live-edge hop distance between two dense vertex sets.
fn face_distance(snap: &crate::lattice::Snapshot, a: &[usize], b: &[usize]) -> Option<u32> {
    use std::collections::VecDeque;
    if a.iter().any(|v| b.contains(v)) {
        return Some(0);
    }
    let mut dist = vec![u32::MAX; snap.verts.len()];
    let mut queue = VecDeque::new();
    for &i in a {
        dist[i] = 0;
        queue.push_back(i);
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        for &(w, _) in &snap.adj[v] {
            if dist[w] == u32::MAX {
                if b.contains(&w) {
                    return Some(d);
                }
                dist[w] = d;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Orientation stand-in: i-th vertex to i-th vertex in ascending identity
/// order; same-size faces on a single-system complex.
fn glue_shortcuts(complex: &mut LatticeComplex, a: &[VertexId], b: &[VertexId]) {
    for (&u, &v) in a.iter().zip(b.iter()) {
        if u == v {
            continue;
        }
        complex.add_edge(u, v, EdgeLabel::Shortcut);
    }
}

fn remove_boundary(complex: &mut LatticeComplex, face: &[VertexId]) {
    for i in 0..face.len() {
        for j in (i + 1)..face.len() {
            while let Some(e) = complex.find_edge(face[i], face[j]) {
                let data = complex.edge(e).expect("edge exists");
                if data.label == EdgeLabel::Shortcut {
                    break;
                }
                let _ = complex.remove_edge(e);
            }
        }
    }
}

fn mix_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 on the combined value.
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Estimates the return probability P(t) at the origin for t = 0..=t_max by
/// simulating independent simple random walks over live edges. A step picks
/// one incident live edge uniformly; self-loop edges are lazy moves. Walkers
/// carry derived seeds, so the ensemble is deterministic and order-free.
pub fn return_probability(
    complex: &LatticeComplex,
    origin: VertexId,
    t_max: usize,
    walkers: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if walkers == 0 {
        return Err(Error::InvalidParameter("walker count must be positive".into()));
    }
    if !complex.contains_vertex(origin) {
        return Err(Error::UnknownVertex(origin));
    }
    let snap = complex.snapshot();
    let start = snap.index[&complex.rep(origin)];
    let moves: Vec<Vec<u32>> = snap
        .adj
        .iter()
        .map(|list| list.iter().map(|&(w, _)| w as u32).collect())
        .collect();

    let counts = (0..walkers)
        .into_par_iter()
        .fold(
            || vec![0u64; t_max + 1],
            |mut acc, w| {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, w as u64));
                let mut pos = start;
                acc[0] += 1;
                for slot in acc.iter_mut().skip(1) {
                    let opts = &moves[pos];
                    if !opts.is_empty() {
                        pos = opts[rng.gen_range(0..opts.len())] as usize;
                    }
                    if pos == start {
                        *slot += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; t_max + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts.into_iter().map(|c| c as f64 / walkers as f64).collect())
}

/// Spectral dimension estimate from a return-probability series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub d_s: f64,
    pub stderr: f64,
    pub window: (usize, usize),
    /// Number of regression points (even t inside the window).
    pub samples: usize,
}

/// d_s = −2 · slope of log P(t) against log t, least squares over the even-t
/// subsequence of the window. Odd times carry the bipartite parity zero and
/// never enter the fit.
pub fn spectral_dimension(p: &[f64], window: (usize, usize)) -> Result<SpectralEstimate> {
    let (t_min, t_max) = window;
    if t_min < 1 || t_max <= t_min {
        return Err(Error::InvalidParameter(format!(
            "window ({t_min}, {t_max}) must satisfy 1 <= t_min < t_max"
        )));
    }
    if p.len() <= t_max {
        return Err(Error::InvalidParameter(format!(
            "series has {} entries, window needs t up to {t_max}",
            p.len()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let start = t_min + (t_min % 2);
    let mut t = start.max(2);
    while t <= t_max {
        if p[t] <= 0.0 {
            return Err(Error::InsufficientStatistics(t));
        }
        xs.push((t as f64).ln());
        ys.push(p[t].ln());
        t += 2;
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "window ({t_min}, {t_max}) leaves only {n} even sample(s)"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let fitted = my + slope * (x - mx);
            (y - fitted).powi(2)
        })
        .sum();
    let se_slope = if n > 2 { (ss_res / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(SpectralEstimate {
        d_s: -2.0 * slope,
        stderr: 2.0 * se_slope,
        window,
        samples: n,
    })
}
