//! Trial statistics and the significance tests used to compare algorithms.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("need at least 3 observations in total for a t-test")]
    InsufficientData,
}

/// Aggregate of the per-run best values of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub per_run: Vec<u32>,
    pub min: u32,
    pub mean: f64,
    /// Population standard deviation over the runs.
    pub stdev: f64,
}

impl TrialStats {
    pub fn from_values(per_run: Vec<u32>) -> Result<Self, StatsError> {
        if per_run.is_empty() {
            return Err(StatsError::EmptySample);
        }
        let n = per_run.len() as f64;
        let mean = per_run.iter().map(|&v| v as f64).sum::<f64>() / n;
        let var = per_run
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / n;
        Ok(TrialStats {
            min: *per_run.iter().min().unwrap(),
            mean,
            stdev: var.sqrt(),
            per_run,
        })
    }

    fn as_f64(&self) -> Vec<f64> {
        self.per_run.iter().map(|&v| v as f64).collect()
    }
}

/// One-sided significance report for the hypothesis "A's values are smaller
/// than B's".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub t_p: f64,
    pub wilcoxon_p: f64,
    pub alpha: f64,
    pub t_significant: bool,
    pub wilcoxon_significant: bool,
}

/// Runs both the pooled two-sample t-test and the Wilcoxon rank-sum test,
/// one-sided with alternative `mean(a) < mean(b)`, flagging significance at
/// `alpha`. Sample sizes may differ.
pub fn compare(a: &TrialStats, b: &TrialStats, alpha: f64) -> Result<Comparison, StatsError> {
    let (xa, xb) = (a.as_f64(), b.as_f64());
    let t_p = t_test_one_sided_less(&xa, &xb)?;
    let wilcoxon_p = wilcoxon_rank_sum_less(&xa, &xb)?;
    Ok(Comparison {
        t_p,
        wilcoxon_p,
        alpha,
        t_significant: t_p <= alpha,
        wilcoxon_significant: wilcoxon_p <= alpha,
    })
}

/// Pooled-variance two-sample t-test, one-sided lower tail: the p-value of
/// observing a mean difference as small as `mean(a) - mean(b)` under the null
/// of equal means. Degenerate zero-variance samples fall back to comparing
/// the means directly.
pub fn t_test_one_sided_less(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    if a.len() + b.len() < 3 {
        return Err(StatsError::InsufficientData);
    }
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let ss = |x: &[f64], m: f64| x.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    let df = na + nb - 2.0;
    let pooled_var = (ss(a, ma) + ss(b, mb)) / df;
    let se = (pooled_var * (1.0 / na + 1.0 / nb)).sqrt();
    if se == 0.0 {
        return Ok(if ma < mb {
            0.0
        } else if ma > mb {
            1.0
        } else {
            0.5
        });
    }
    let t = (ma - mb) / se;
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid dof");
    Ok(dist.cdf(t))
}

/// Wilcoxon rank-sum test, one-sided lower tail (small rank sums of `a`
/// support `a < b`). Uses exact enumeration when the smaller sample has
/// fewer than 10 observations (and the subset count stays tractable),
/// otherwise the normal approximation with midrank tie correction and
/// continuity correction.
pub fn wilcoxon_rank_sum_less(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let n1 = a.len();
    let n2 = b.len();
    let n = n1 + n2;

    // Midranks doubled so rank sums stay integral under ties.
    let mut pooled: Vec<(f64, usize)> = a
        .iter()
        .chain(b.iter())
        .copied()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks2 = vec![0u64; n];
    let mut tie_term = 0u64; // sum of t^3 - t over tie groups
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let t = (j - i) as u64;
        tie_term += t * t * t - t;
        // doubled midrank of positions i..j (1-based ranks i+1 ..= j)
        let rank2 = (i + 1 + j) as u64;
        for k in i..j {
            ranks2[pooled[k].1] = rank2;
        }
        i = j;
    }
    let w2_obs: u64 = ranks2[..n1].iter().sum();

    let min_n = n1.min(n2);
    if min_n < 10 {
        if let Some(total) = binomial(n as u64, n1 as u64).filter(|&c| c <= 20_000_000) {
            let le = count_subsets_le(&ranks2, n1, w2_obs);
            return Ok(le as f64 / total as f64);
        }
    }

    // Normal approximation with tie and continuity corrections.
    let w = w2_obs as f64 / 2.0;
    let mu = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let var = (n1 as f64 * n2 as f64 / 12.0)
        * ((n as f64 + 1.0) - tie_term as f64 / (n as f64 * (n as f64 - 1.0)));
    if var <= 0.0 {
        return Ok(0.5);
    }
    let z = (w - mu + 0.5) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    Ok(normal.cdf(z))
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Number of size-k subsets of `ranks2` whose sum is <= `limit`.
fn count_subsets_le(ranks2: &[u64], k: usize, limit: u64) -> u64 {
    fn rec(sorted: &[u64], prefix: &[u64], from: usize, k: usize, budget: i64) -> u64 {
        if k == 0 {
            return 1;
        }
        let n = sorted.len();
        let mut count = 0;
        for i in from..=(n - k) {
            // Cheapest completion that includes i takes the k-1 items right
            // after it; once that busts the budget, later i only get bigger.
            let cheapest = (prefix[i + k] - prefix[i]) as i64;
            if cheapest > budget {
                break;
            }
            count += rec(sorted, prefix, i + 1, k - 1, budget - sorted[i] as i64);
        }
        count
    }
    let mut sorted = ranks2.to_vec();
    sorted.sort_unstable();
    let mut prefix = vec![0u64; sorted.len() + 1];
    for (i, &r) in sorted.iter().enumerate() {
        prefix[i + 1] = prefix[i] + r;
    }
    rec(&sorted, &prefix, 0, k, limit as i64)
}

/// Spearman rank correlation with midranks; `None` when either sequence has
/// no rank variance or the lengths differ.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let rx = midranks(x);
    let ry = midranks(y);
    pearson(&rx, &ry)
}

fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        let rank = (i + 1 + j) as f64 / 2.0;
        for k in i..j {
            ranks[idx[k]] = rank;
        }
        i = j;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
