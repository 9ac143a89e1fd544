use super::special::f_distribution_sf;
use super::{check_finite, PMethod, Statistic, StatsError, TestResult};

/// One-way ANOVA across `groups` (each of size >= 2).
///
/// F = MSB / MSW with df (k - 1, N - k); p is the F upper tail.
pub fn anova_oneway(groups: &[&[f64]]) -> Result<TestResult, StatsError> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::TooFewGroups(2));
    }
    for g in groups {
        if g.len() < 2 {
            return Err(StatsError::SampleSize {
                n: g.len(),
                min: 2,
                max: usize::MAX,
            });
        }
        check_finite(g)?;
    }

    let n_total: usize = groups.iter().map(|g| g.len()).sum();
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / n_total as f64;

    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ss_between += g.len() as f64 * (m - grand).powi(2);
        ss_within += g.iter().map(|x| (x - m).powi(2)).sum::<f64>();
    }

    let df_between = (k - 1) as f64;
    let df_within = (n_total - k) as f64;
    if ss_within <= 0.0 {
        return Err(if ss_between > 0.0 {
            StatsError::Degenerate
        } else {
            StatsError::ZeroVariance
        });
    }
    let f = (ss_between / df_between) / (ss_within / df_within);
    let p = f_distribution_sf(f, df_between, df_within)?;

    Ok(TestResult {
        statistic: Statistic::F,
        value: f,
        df: Some((df_between, df_within)),
        p_value: Some(p),
        method: PMethod::Exact,
    })
}
