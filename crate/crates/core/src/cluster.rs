//! Activity grouping: percentile trimming, product-space normalization and
//! a scalar k-means under the absolute-difference distance
//! d(a, b) = |C_a * I_a - C_b * I_b| on normalized consistency/intensity.
//!
//! Clustering runs on the scalar x = (C/C_max + 1) * (I/I_max + 1): the
//! distance depends only on that product, so the 2-D problem collapses to
//! one dimension exactly.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ActivityProfile;
use crate::types::{GroupLabel, Tier, UserId};

/// The paper's distance on the normalized product scale.
pub fn product_distance(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

/// Centroid update rule. Mean is the standard k-means update; the median
/// variant (the L1 minimizer) is available for sensitivity analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum CentroidUpdate {
    #[default]
    Mean,
    Median,
}

impl std::str::FromStr for CentroidUpdate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(CentroidUpdate::Mean),
            "median" => Ok(CentroidUpdate::Median),
            other => Err(format!("unknown centroid update {other:?}")),
        }
    }
}

impl std::fmt::Display for CentroidUpdate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CentroidUpdate::Mean => f.write_str("mean"),
            CentroidUpdate::Median => f.write_str("median"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOptions {
    pub k: usize,
    pub seed: u64,
    pub trim_percentile: f64,
    pub update: CentroidUpdate,
    pub max_iterations: u32,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            k: 3,
            seed: 42,
            trim_percentile: 99.9,
            update: CentroidUpdate::Mean,
            max_iterations: 100,
        }
    }
}

/// Normalization constants frozen into the fitted model so out-of-sample
/// assignment matches the training transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub c_max: f64,
    pub i_max: f64,
    pub trim_c: f64,
    pub trim_i: f64,
    pub trim_percentile: f64,
}

impl Normalization {
    /// Normalized product point for raw (consistency, intensity), clamping
    /// at the stored trim thresholds.
    pub fn point(&self, consistency: f64, intensity: f64) -> f64 {
        let c = consistency.min(self.trim_c);
        let i = intensity.min(self.trim_i);
        let c_div = if self.c_max > 0.0 { self.c_max } else { 1.0 };
        let i_div = if self.i_max > 0.0 { self.i_max } else { 1.0 };
        (c / c_div + 1.0) * (i / i_div + 1.0)
    }
}

/// One retained user after trimming, with the scalar clustering point.
#[derive(Debug, Clone, PartialEq)]
pub struct RetainedPoint {
    pub user_id: UserId,
    pub consistency: f64,
    pub intensity: f64,
    pub point: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrimReport {
    pub input_profiles: usize,
    pub inactive_dropped: usize,
    pub trimmed: Vec<UserId>,
    pub retained: usize,
    pub trim_c: f64,
    pub trim_i: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub points: Vec<RetainedPoint>,
    pub norm: Normalization,
    pub report: TrimReport,
}

/// Nearest-rank percentile: the value at rank ceil(q/100 * n) of the sorted
/// sample (1-based).
pub fn percentile_nearest_rank(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    assert!((0.0..=100.0).contains(&q));
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let t = q * sorted.len() as f64 / 100.0;
    // Guard the ceiling against float noise on exact ranks (e.g. 99.9% of 1000).
    let rank = if (t - t.round()).abs() < 1e-9 {
        t.round() as usize
    } else {
        t.ceil() as usize
    };
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Trim extreme users and map the rest to normalized product points.
///
/// Users with no activity are excluded outright; users whose raw C or I
/// exceeds the respective trim percentile are dropped and reported.
pub fn preprocess(profiles: &[ActivityProfile], trim_percentile: f64) -> Result<Preprocessed> {
    let active: Vec<&ActivityProfile> = profiles.iter().filter(|p| p.is_active()).collect();
    if active.is_empty() {
        return Err(Error::NoActiveUsers);
    }
    let rated = active.iter().filter(|p| p.weekly_rate > 0.0).count();
    if rated < 10 {
        return Err(Error::TooFewProfiles {
            needed: 10,
            got: rated,
        });
    }

    let cs: Vec<f64> = active.iter().map(|p| p.consistency).collect();
    let is: Vec<f64> = active.iter().map(|p| p.intensity).collect();
    let trim_c = percentile_nearest_rank(&cs, trim_percentile);
    let trim_i = percentile_nearest_rank(&is, trim_percentile);

    let mut trimmed = Vec::new();
    let mut kept: Vec<&ActivityProfile> = Vec::with_capacity(active.len());
    for p in &active {
        if p.consistency > trim_c || p.intensity > trim_i {
            trimmed.push(p.user_id);
        } else {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return Err(Error::NoActiveUsers);
    }

    let c_max = kept.iter().map(|p| p.consistency).fold(0.0_f64, f64::max);
    let i_max = kept.iter().map(|p| p.intensity).fold(0.0_f64, f64::max);
    let norm = Normalization {
        c_max,
        i_max,
        trim_c,
        trim_i,
        trim_percentile,
    };

    let points = kept
        .iter()
        .map(|p| RetainedPoint {
            user_id: p.user_id,
            consistency: p.consistency,
            intensity: p.intensity,
            point: norm.point(p.consistency, p.intensity),
        })
        .collect();

    Ok(Preprocessed {
        points,
        norm,
        report: TrimReport {
            input_profiles: profiles.len(),
            inactive_dropped: profiles.len() - active.len(),
            trimmed,
            retained: kept.len(),
            trim_c,
            trim_i,
        },
    })
}

/// Result of the scalar k-means.
#[derive(Debug, Clone, PartialEq)]
pub struct KmeansFit {
    /// Ascending centroids.
    pub centroids: Vec<f64>,
    /// Cluster index per input point, aligned with the ascending centroids.
    pub assignments: Vec<usize>,
    /// Total inertia sum |x - c| recorded after every assignment phase.
    pub inertia_trace: Vec<f64>,
    pub converged: bool,
    pub iterations: u32,
}

fn nearest_centroid(x: f64, centroids: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &c) in centroids.iter().enumerate() {
        let d = product_distance(x, c);
        // Strict improvement, or an equal distance to a lower centroid value.
        if d < best_d || (d == best_d && c < centroids[best]) {
            best = i;
            best_d = d;
        }
    }
    best
}

fn inertia(values: &[f64], assignments: &[usize], centroids: &[f64]) -> f64 {
    values
        .iter()
        .zip(assignments)
        .map(|(&x, &a)| product_distance(x, centroids[a]))
        .sum()
}

/// Lloyd iterations on scalar points with farthest-point initialization.
pub fn kmeans_1d(
    values: &[f64],
    k: usize,
    seed: u64,
    update: CentroidUpdate,
    max_iterations: u32,
) -> Result<KmeansFit> {
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < k {
        return Err(Error::TooFewDistinctPoints {
            needed: k,
            got: distinct.len(),
        });
    }

    // Farthest-point init: seed picks the first centroid among the distinct
    // values, then each next centroid is the value farthest from the chosen
    // set (ties toward the smaller value).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = vec![distinct[rng.random_range(0..distinct.len())]];
    while centroids.len() < k {
        let mut best_val = f64::NAN;
        let mut best_d = -1.0;
        for &v in &distinct {
            let d = centroids
                .iter()
                .map(|&c| product_distance(v, c))
                .fold(f64::INFINITY, f64::min);
            if d > best_d {
                best_d = d;
                best_val = v;
            }
        }
        centroids.push(best_val);
    }

    let mut assignments: Vec<usize> =
        values.iter().map(|&x| nearest_centroid(x, &centroids)).collect();
    let mut inertia_trace = vec![inertia(values, &assignments, &centroids)];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;

        // Update phase.
        let mut members: Vec<Vec<f64>> = vec![Vec::new(); k];
        for (&x, &a) in values.iter().zip(&assignments) {
            members[a].push(x);
        }
        for (ci, m) in members.iter_mut().enumerate() {
            if m.is_empty() {
                // Re-seed an emptied cluster at the point farthest from its
                // currently assigned centroid (smallest such value on ties).
                let mut far_val = centroids[ci];
                let mut far_d = -1.0;
                for (&x, &a) in values.iter().zip(&assignments) {
                    let d = product_distance(x, centroids[a]);
                    if d > far_d || (d == far_d && x < far_val) {
                        far_d = d;
                        far_val = x;
                    }
                }
                centroids[ci] = far_val;
                continue;
            }
            centroids[ci] = match update {
                CentroidUpdate::Mean => m.iter().sum::<f64>() / m.len() as f64,
                CentroidUpdate::Median => {
                    m.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    m[(m.len() - 1) / 2]
                }
            };
        }

        // Assignment phase.
        let next: Vec<usize> = values.iter().map(|&x| nearest_centroid(x, &centroids)).collect();
        inertia_trace.push(inertia(values, &next, &centroids));
        let stable = next == assignments;
        assignments = next;
        if stable {
            converged = true;
            break;
        }
    }

    // Relabel clusters by ascending centroid.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| centroids[a].partial_cmp(&centroids[b]).unwrap());
    let mut rank = vec![0usize; k];
    for (new_idx, &old_idx) in order.iter().enumerate() {
        rank[old_idx] = new_idx;
    }
    let sorted_centroids: Vec<f64> = order.iter().map(|&i| centroids[i]).collect();
    let assignments = assignments.into_iter().map(|a| rank[a]).collect();

    Ok(KmeansFit {
        centroids: sorted_centroids,
        assignments,
        inertia_trace,
        converged,
        iterations,
    })
}

/// The fitted activity-group model: ascending centroids in normalized
/// product space plus the frozen preprocessing constants.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupModel {
    pub centroids: Vec<f64>,
    pub norm: Normalization,
    pub seed: u64,
    pub update: CentroidUpdate,
    pub converged: bool,
    pub iterations: u32,
}

impl GroupModel {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Nearest-centroid index for a normalized point, ties toward the
    /// lower centroid.
    pub fn assign_point(&self, x: f64) -> usize {
        nearest_centroid(x, &self.centroids)
    }

    /// Group label for a profile. Requires k = 3.
    pub fn assign(&self, profile: &ActivityProfile) -> GroupLabel {
        assert_eq!(self.k(), 3, "group labels are defined for k = 3");
        let x = self.norm.point(profile.consistency, profile.intensity);
        GroupLabel::from_index(self.assign_point(x))
    }

    /// Midpoints between adjacent centroids, mapped back to raw actions per
    /// week along the diagonal section C/C_max = I/I_max (reporting aid).
    pub fn raw_boundaries(&self) -> Vec<f64> {
        self.centroids
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let s = mid.max(1.0).sqrt() - 1.0;
                s * s * self.norm.c_max * self.norm.i_max
            })
            .collect()
    }

    /// Plain-text model record (versioned, round-trips exactly).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("badgelab-group-model v1\n");
        s.push_str(&format!("seed {}\n", self.seed));
        s.push_str(&format!("update {}\n", self.update));
        s.push_str(&format!("converged {}\n", self.converged));
        s.push_str(&format!("iterations {}\n", self.iterations));
        s.push_str(&format!("trim_percentile {}\n", self.norm.trim_percentile));
        s.push_str(&format!("trim_c {}\n", self.norm.trim_c));
        s.push_str(&format!("trim_i {}\n", self.norm.trim_i));
        s.push_str(&format!("c_max {}\n", self.norm.c_max));
        s.push_str(&format!("i_max {}\n", self.norm.i_max));
        let cents: Vec<String> = self.centroids.iter().map(|c| format!("{c}")).collect();
        s.push_str(&format!("centroids {}\n", cents.join(" ")));
        s
    }

    pub fn from_text(text: &str) -> Result<GroupModel> {
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 {
                if line.trim() != "badgelab-group-model v1" {
                    return Err(Error::ModelParse {
                        line: 1,
                        message: format!("unexpected header {line:?}"),
                    });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line.split_once(' ').ok_or(Error::ModelParse {
                line: i + 1,
                message: format!("expected `key value`, got {line:?}"),
            })?;
            fields.insert(key, value.trim());
        }
        fn get<'a>(fields: &BTreeMap<&str, &'a str>, key: &str) -> Result<&'a str> {
            fields.get(key).copied().ok_or(Error::ModelParse {
                line: 0,
                message: format!("missing field {key:?}"),
            })
        }
        fn parse<T: std::str::FromStr>(s: &str, key: &str) -> Result<T> {
            s.parse().map_err(|_| Error::ModelParse {
                line: 0,
                message: format!("bad value for {key:?}: {s:?}"),
            })
        }
        let centroids: Vec<f64> = get(&fields, "centroids")?
            .split_whitespace()
            .map(|t| parse(t, "centroids"))
            .collect::<Result<_>>()?;
        Ok(GroupModel {
            centroids,
            norm: Normalization {
                c_max: parse(get(&fields, "c_max")?, "c_max")?,
                i_max: parse(get(&fields, "i_max")?, "i_max")?,
                trim_c: parse(get(&fields, "trim_c")?, "trim_c")?,
                trim_i: parse(get(&fields, "trim_i")?, "trim_i")?,
                trim_percentile: parse(get(&fields, "trim_percentile")?, "trim_percentile")?,
            },
            seed: parse(get(&fields, "seed")?, "seed")?,
            update: parse(get(&fields, "update")?, "update")?,
            converged: parse(get(&fields, "converged")?, "converged")?,
            iterations: parse(get(&fields, "iterations")?, "iterations")?,
        })
    }
}

/// Fitted model plus the per-user assignments of the training population.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub model: GroupModel,
    pub assignments: Vec<(UserId, GroupLabel)>,
    pub inertia_trace: Vec<f64>,
}

/// Fit the activity-group model on preprocessed points.
pub fn fit(pre: &Preprocessed, opts: &ClusterOptions) -> Result<FitOutcome> {
    let values: Vec<f64> = pre.points.iter().map(|p| p.point).collect();
    let km = kmeans_1d(&values, opts.k, opts.seed, opts.update, opts.max_iterations)?;

    let mut distinct = km.centroids.clone();
    distinct.dedup_by(|a, b| a == b);
    if distinct.len() < opts.k {
        return Err(Error::DegenerateCentroids {
            distinct: distinct.len(),
            k: opts.k,
        });
    }

    let model = GroupModel {
        centroids: km.centroids,
        norm: pre.norm,
        seed: opts.seed,
        update: opts.update,
        converged: km.converged,
        iterations: km.iterations,
    };
    let assignments = if opts.k == 3 {
        pre.points
            .iter()
            .zip(&km.assignments)
            .map(|(p, &a)| (p.user_id, GroupLabel::from_index(a)))
            .collect()
    } else {
        Vec::new()
    };
    Ok(FitOutcome {
        model,
        assignments,
        inertia_trace: km.inertia_trace,
    })
}

/// Cross-tabulation of activity group by highest badge tier attained.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupCounts {
    /// tier -> counts per group (Low, Medium, High).
    pub counts: BTreeMap<Tier, [u64; 3]>,
}

impl GroupCounts {
    pub fn totals_per_group(&self) -> [u64; 3] {
        let mut t = [0u64; 3];
        for row in self.counts.values() {
            for (i, &c) in row.iter().enumerate() {
                t[i] += c;
            }
        }
        t
    }

    pub fn total(&self) -> u64 {
        self.totals_per_group().iter().sum()
    }
}

/// Count (group, highest tier) pairs.
pub fn group_counts<I>(rows: I) -> GroupCounts
where
    I: IntoIterator<Item = (GroupLabel, Tier)>,
{
    let mut out = GroupCounts::default();
    for (group, tier) in rows {
        out.counts.entry(tier).or_insert([0; 3])[group.index()] += 1;
    }
    out
}
