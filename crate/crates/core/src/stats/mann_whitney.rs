use super::special::normal_sf;
use super::{check_finite, PMethod, Statistic, StatsError, TestResult};

/// Largest number of rank assignments enumerated for an exact p-value.
pub const EXACT_ENUMERATION_LIMIT: u64 = 200_000;

/// `(U_a, U_b)`: U_a counts pairs with `a_i > b_j`, ties counting one half.
pub fn u_statistics(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut twice_ua: u64 = 0;
    for x in a {
        for y in b {
            twice_ua += if x > y {
                2
            } else if x == y {
                1
            } else {
                0
            };
        }
    }
    let ua = twice_ua as f64 / 2.0;
    (ua, (a.len() * b.len()) as f64 - ua)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Pooled midranks, doubled so they are integers.
fn doubled_midranks(a: &[f64], b: &[f64]) -> Vec<u64> {
    let mut pooled: Vec<(f64, usize)> = a.iter().chain(b).copied().zip(0..).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks = vec![0u64; pooled.len()];
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1..=j+1 share the midrank (i + j + 2) / 2
        let twice_mid = (i + j + 2) as u64;
        for p in &pooled[i..=j] {
            ranks[p.1] = twice_mid;
        }
        i = j + 1;
    }
    ranks
}

fn tie_groups(ranks: &[u64]) -> Vec<u64> {
    let mut sorted = ranks.to_vec();
    sorted.sort_unstable();
    sorted
        .chunk_by(|x, y| x == y)
        .map(|c| c.len() as u64)
        .filter(|&t| t > 1)
        .collect()
}

/// Two-sample Mann-Whitney U test; `U = min(U_a, U_b)`.
///
/// The two-sided p-value is exact (enumerating every assignment of the
/// pooled midranks to the first sample) when there are at most
/// [`EXACT_ENUMERATION_LIMIT`] assignments, otherwise a tie-corrected normal
/// approximation with continuity correction.
pub fn mann_whitney(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_finite(a)?;
    check_finite(b)?;

    let (ua, ub) = u_statistics(a, b);
    let (na, nb) = (a.len() as u64, b.len() as u64);
    let n = na + nb;

    let (p, method) = if binomial(n, na) <= EXACT_ENUMERATION_LIMIT {
        (exact_p(a, b), PMethod::Exact)
    } else {
        (approximate_p(a, b, ua), PMethod::Approximate)
    };

    Ok(TestResult {
        statistic: Statistic::U,
        value: ua.min(ub),
        df: None,
        p_value: Some(p.clamp(0.0, 1.0)),
        method,
    })
}

fn exact_p(a: &[f64], b: &[f64]) -> f64 {
    let ranks = doubled_midranks(a, b);
    let na = a.len();
    let n = ranks.len() as u64;
    // 2 * rank-sum expectation is na * (n + 1); deviations compared in
    // doubled units stay integral.
    let center = na as u64 * (n + 1);
    let observed: u64 = ranks[..na].iter().sum();
    let threshold = observed.abs_diff(center);

    let mut hits = 0u64;
    let mut total = 0u64;
    enumerate_sums(&ranks, na, 0, 0, &mut |sum| {
        total += 1;
        if sum.abs_diff(center) >= threshold {
            hits += 1;
        }
    });
    hits as f64 / total as f64
}

fn enumerate_sums(ranks: &[u64], pick: usize, start: usize, acc: u64, visit: &mut impl FnMut(u64)) {
    if pick == 0 {
        visit(acc);
        return;
    }
    for i in start..=ranks.len() - pick {
        enumerate_sums(ranks, pick - 1, i + 1, acc + ranks[i], visit);
    }
}

fn approximate_p(a: &[f64], b: &[f64], ua: f64) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let ranks = doubled_midranks(a, b);
    let tie_term: f64 = tie_groups(&ranks).into_iter().map(|t| (t * t * t - t) as f64).sum();
    let variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let mu = na * nb / 2.0;
    let z = ((ua - mu).abs() - 0.5).max(0.0) / variance.sqrt();
    2.0 * normal_sf(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_separation() {
        let r = mann_whitney(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, PMethod::Exact);
        // 2 of 20 assignments are as extreme
        assert!((r.p_value.unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn interleaved_small() {
        let r = mann_whitney(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        assert_eq!(r.value, 1.0);
        assert!((r.p_value.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(u_statistics(&[1.0, 3.0], &[2.0, 4.0]), (1.0, 3.0));
    }

    #[test]
    fn ties_count_half() {
        assert_eq!(u_statistics(&[1.0, 2.0], &[2.0]), (0.5, 1.5));
        let r = mann_whitney(&[5.0, 5.0], &[5.0, 5.0]).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.p_value, Some(1.0));
    }

    #[test]
    fn large_samples_use_normal_approximation() {
        let a: Vec<f64> = (0..20).map(f64::from).collect();
        let b: Vec<f64> = (10..30).map(f64::from).collect();
        let r = mann_whitney(&a, &b).unwrap();
        assert_eq!(r.method, PMethod::Approximate);
        let p = r.p_value.unwrap();
        assert!(p > 0.0 && p < 0.01, "{p}");
    }

    #[test]
    fn empty_sample() {
        assert_eq!(mann_whitney(&[], &[1.0]), Err(StatsError::EmptySample));
        assert_eq!(mann_whitney(&[1.0], &[]), Err(StatsError::EmptySample));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(200, 100), u64::MAX);
    }
}
