use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample standard deviation; 0 for fewer than two samples.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn t_quantile(p: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df)
        .expect("df >= 1")
        .inverse_cdf(p)
}

pub fn ci95_half_width(xs: &[f64]) -> Option<f64> {
    (xs.len() >= 2).then(|| {
        t_quantile(0.975, (xs.len() - 1) as f64) * sample_sd(xs) / (xs.len() as f64).sqrt()
    })
}

/// One-sided paired t-test of `mean(a - b) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    pub n: usize,
    pub mean_diff: f64,
    pub sd_diff: f64,
    pub t_stat: f64,
    pub critical: f64,
    pub significant: bool,
}

/// Needs at least two pairs. With zero spread in the differences the test
/// reduces to the sign of the mean difference.
pub fn paired_one_sided(a: &[f64], b: &[f64], confidence: f64) -> Option<PairedTest> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = diffs.len();
    let mean_diff = mean(&diffs);
    let sd_diff = sample_sd(&diffs);
    let critical = t_quantile(confidence, (n - 1) as f64);
    let t_stat = if sd_diff == 0.0 {
        if mean_diff > 0.0 {
            f64::INFINITY
        } else if mean_diff < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        }
    } else {
        mean_diff / (sd_diff / (n as f64).sqrt())
    };
    Some(PairedTest {
        n,
        mean_diff,
        sd_diff,
        t_stat,
        critical,
        significant: t_stat > critical,
    })
}
