//! Affinity propagation over a distance matrix (similarity = -distance).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::distance::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinityConfig {
    pub damping: f64,
    pub max_iter: usize,
    /// Iterations the exemplar set must stay unchanged to declare convergence.
    pub convergence_iter: usize,
    /// Self-similarity; `None` uses the median off-diagonal similarity.
    pub preference: Option<f64>,
}

impl Default for AffinityConfig {
    fn default() -> Self {
        AffinityConfig {
            damping: 0.7,
            max_iter: 500,
            convergence_iter: 15,
            preference: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffinityResult {
    /// Exemplar indices in increasing order.
    pub exemplars: Vec<usize>,
    /// For each input point, the position of its exemplar in `exemplars`.
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn affinity_propagation(dist: &DistanceMatrix, config: &AffinityConfig) -> AffinityResult {
    let n = dist.len();
    if n == 0 {
        return AffinityResult {
            exemplars: vec![],
            labels: vec![],
            iterations: 0,
            converged: true,
        };
    }
    if n == 1 {
        return AffinityResult {
            exemplars: vec![0],
            labels: vec![0],
            iterations: 0,
            converged: true,
        };
    }

    let mut s = vec![0.0; n * n];
    let mut off_diag = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for k in 0..n {
            if i != k {
                s[i * n + k] = -dist.get(i, k);
                off_diag.push(s[i * n + k]);
            }
        }
    }
    let preference = config.preference.unwrap_or_else(|| median(off_diag.clone()));

    // Every pair equally similar: the message updates cannot break the tie.
    let first = off_diag[0];
    if off_diag.iter().all(|&v| v == first) {
        return if preference > first {
            AffinityResult {
                exemplars: (0..n).collect(),
                labels: (0..n).collect(),
                iterations: 0,
                converged: true,
            }
        } else {
            AffinityResult {
                exemplars: vec![0],
                labels: vec![0; n],
                iterations: 0,
                converged: true,
            }
        };
    }

    for k in 0..n {
        s[k * n + k] = preference;
    }
    let s_clean = s.clone();
    // Tiny deterministic jitter removes exact ties between candidate exemplars.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for v in s.iter_mut() {
        let scale = f64::EPSILON * v.abs() + f64::MIN_POSITIVE * 100.0;
        *v += scale * rng.gen::<f64>();
    }

    let damp = config.damping;
    let mut r = vec![0.0; n * n];
    let mut a = vec![0.0; n * n];
    let mut stable_for = 0usize;
    let mut prev: Option<Vec<bool>> = None;
    let mut converged = false;
    let mut iterations = 0;
    let mut col = vec![0.0; n];

    for it in 0..config.max_iter {
        iterations = it + 1;
        // responsibilities
        for i in 0..n {
            let row = i * n;
            let (mut best, mut best_k, mut second) = (f64::NEG_INFINITY, 0, f64::NEG_INFINITY);
            for k in 0..n {
                let v = a[row + k] + s[row + k];
                if v > best {
                    second = best;
                    best = v;
                    best_k = k;
                } else if v > second {
                    second = v;
                }
            }
            for k in 0..n {
                let other = if k == best_k { second } else { best };
                let new = s[row + k] - other;
                r[row + k] = damp * r[row + k] + (1.0 - damp) * new;
            }
        }
        // availabilities
        col.iter_mut().for_each(|c| *c = 0.0);
        for i in 0..n {
            for k in 0..n {
                let v = r[i * n + k];
                col[k] += if i == k { v } else { v.max(0.0) };
            }
        }
        for i in 0..n {
            for k in 0..n {
                let rik = r[i * n + k];
                let new = if i == k {
                    col[k] - rik
                } else {
                    (col[k] - rik.max(0.0)).min(0.0)
                };
                a[i * n + k] = damp * a[i * n + k] + (1.0 - damp) * new;
            }
        }

        let current: Vec<bool> = (0..n).map(|k| a[k * n + k] + r[k * n + k] > 0.0).collect();
        if prev.as_ref() == Some(&current) {
            stable_for += 1;
        } else {
            stable_for = 1;
        }
        let any = current.iter().any(|&e| e);
        prev = Some(current);
        if stable_for >= config.convergence_iter && any {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("affinity propagation did not converge after {iterations} iterations");
    }

    let mut exemplars: Vec<usize> = prev
        .unwrap_or_default()
        .iter()
        .enumerate()
        .filter_map(|(k, &e)| e.then_some(k))
        .collect();
    if exemplars.is_empty() {
        // No point claimed itself: fall back to the global medoid.
        let medoid = (0..n)
            .max_by(|&x, &y| {
                let sx: f64 = (0..n).map(|i| s_clean[i * n + x]).sum();
                let sy: f64 = (0..n).map(|i| s_clean[i * n + y]).sum();
                sx.total_cmp(&sy).then(y.cmp(&x))
            })
            .expect("n > 0");
        exemplars = vec![medoid];
        converged = false;
    }

    let assign = |ex: &[usize]| -> Vec<usize> {
        (0..n)
            .map(|i| {
                if let Some(p) = ex.iter().position(|&e| e == i) {
                    return p;
                }
                let mut best = 0;
                for (p, &e) in ex.iter().enumerate() {
                    if s_clean[i * n + e] > s_clean[i * n + ex[best]] {
                        best = p;
                    }
                }
                best
            })
            .collect()
    };

    // Refine each cluster's exemplar to the member with the largest summed
    // similarity to the rest of its cluster.
    let labels = assign(&exemplars);
    let mut refined = Vec::with_capacity(exemplars.len());
    for (p, &e) in exemplars.iter().enumerate() {
        let members: Vec<usize> = (0..n).filter(|&i| labels[i] == p).collect();
        let mut best = e;
        let mut best_score = f64::NEG_INFINITY;
        for &j in &members {
            let score: f64 = members.iter().map(|&i| s_clean[i * n + j]).sum();
            if score > best_score {
                best_score = score;
                best = j;
            }
        }
        refined.push(best);
    }
    refined.sort_unstable();
    refined.dedup();
    let labels = assign(&refined);

    AffinityResult {
        exemplars: refined,
        labels,
        iterations,
        converged,
    }
}
