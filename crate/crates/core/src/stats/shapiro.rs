use super::{check_finite, PMethod, Statistic, StatsError, TestResult};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 20;

// Published Shapiro-Wilk coefficients a_{n-i+1}, i = 1..floor(n/2), for
// n = 3..=20 (four decimals, as tabulated).
#[allow(clippy::approx_constant)]
const TABLE: [&[f64]; MAX_N - MIN_N + 1] = [
    &[0.7071],
    &[0.6872, 0.1677],
    &[0.6646, 0.2413],
    &[0.6431, 0.2806, 0.0875],
    &[0.6233, 0.3031, 0.1401],
    &[0.6052, 0.3164, 0.1743, 0.0561],
    &[0.5888, 0.3244, 0.1976, 0.0947],
    &[0.5739, 0.3291, 0.2141, 0.1224, 0.0399],
    &[0.5601, 0.3315, 0.2260, 0.1429, 0.0695],
    &[0.5475, 0.3325, 0.2347, 0.1586, 0.0922, 0.0303],
    &[0.5359, 0.3325, 0.2412, 0.1707, 0.1099, 0.0539],
    &[0.5251, 0.3318, 0.2460, 0.1802, 0.1240, 0.0727, 0.0240],
    &[0.5150, 0.3306, 0.2495, 0.1878, 0.1353, 0.0880, 0.0433],
    &[0.5056, 0.3290, 0.2521, 0.1939, 0.1447, 0.1005, 0.0593, 0.0196],
    &[0.4968, 0.3273, 0.2540, 0.1988, 0.1524, 0.1109, 0.0725, 0.0359],
    &[0.4886, 0.3253, 0.2553, 0.2027, 0.1587, 0.1197, 0.0837, 0.0496, 0.0163],
    &[0.4808, 0.3232, 0.2561, 0.2059, 0.1641, 0.1271, 0.0932, 0.0612, 0.0303],
    &[
        0.4734, 0.3211, 0.2565, 0.2085, 0.1686, 0.1334, 0.1013, 0.0711, 0.0422, 0.0140,
    ],
];

/// Tabulated coefficients for sample size `n`, largest first.
pub fn shapiro_wilk_coefficients(n: usize) -> Option<&'static [f64]> {
    (MIN_N..=MAX_N).contains(&n).then(|| TABLE[n - MIN_N])
}

/// Shapiro-Wilk W for 3 <= n <= 20. No p-value is attached.
///
/// The four-decimal table does not have exactly unit norm, so the
/// coefficients are rescaled to `2 * sum(a^2) = 1`; this keeps W in (0, 1].
pub fn shapiro_wilk(sample: &[f64]) -> Result<TestResult, StatsError> {
    let n = sample.len();
    let coef = shapiro_wilk_coefficients(n).ok_or(StatsError::SampleSize {
        n,
        min: MIN_N,
        max: MAX_N,
    })?;
    check_finite(sample)?;

    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let mean = x.iter().sum::<f64>() / n as f64;
    let ss: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    if ss <= 0.0 || x[0] == x[n - 1] {
        return Err(StatsError::ZeroVariance);
    }

    let norm = (2.0 * coef.iter().map(|a| a * a).sum::<f64>()).sqrt();
    let b: f64 = coef
        .iter()
        .enumerate()
        .map(|(i, a)| a / norm * (x[n - 1 - i] - x[i]))
        .sum();
    let w = (b * b / ss).min(1.0);

    Ok(TestResult {
        statistic: Statistic::W,
        value: w,
        df: None,
        p_value: None,
        method: PMethod::Exact,
    })
}
