//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use fbt_core::geometry::{CalibrationFile, Fingertips};
use fbt_core::Point;
use rand::Rng;

/// Edit distance by direct recursion over suffixes, memoised.
pub fn edit_distance_oracle(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if a.is_empty() {
            return b.len();
        }
        if b.is_empty() {
            return a.len();
        }
        let key = (a.len(), b.len());
        if let Some(&d) = memo.get(&key) {
            return d;
        }
        let d = if a[0] == b[0] {
            go(&a[1..], &b[1..], memo)
        } else {
            1 + go(&a[1..], b, memo)
                .min(go(a, &b[1..], memo))
                .min(go(&a[1..], &b[1..], memo))
        };
        memo.insert(key, d);
        d
    }
    go(a, b, &mut HashMap::new())
}

/// All strings over `alphabet` of length 0..=max_len.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t: Vec<char> = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Two-sided exact Mann-Whitney p by relabelling every split of the pooled
/// sample and counting pairwise wins directly.
pub fn mann_whitney_exact_oracle(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let na = a.len();
    // doubled U so that ties stay integral
    let u2 = |mask: u32| -> i64 {
        let mut s = 0;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                s += match pooled[i].partial_cmp(&pooled[j]).unwrap() {
                    std::cmp::Ordering::Greater => 2,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Less => 0,
                };
            }
        }
        s
    };
    let centre = (na * (n - na)) as i64;
    let observed = (u2((1u32 << na) - 1) - centre).abs();
    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != na {
            continue;
        }
        total += 1;
        if (u2(mask) - centre).abs() >= observed {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Regularized incomplete beta by integrating the beta density. With
/// t = u^2 the integrand stays bounded for a >= 1/2.
pub fn incomplete_beta_oracle(x: f64, a: f64, b: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > 0.5 {
        return 1.0 - incomplete_beta_oracle(1.0 - x, b, a);
    }
    let ln_b = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    let density = |u: f64| {
        if u == 0.0 {
            return if a == 0.5 { 2.0 * (-ln_b).exp() } else { 0.0 };
        }
        2.0 * ((2.0 * a - 1.0) * u.ln() + (b - 1.0) * (1.0 - u * u).ln() - ln_b).exp()
    };
    integrate(&density, 0.0, x.sqrt(), 1e-13)
}

/// Upper tail of F(d1, d2) by quadrature.
pub fn f_sf_oracle(f: f64, d1: f64, d2: f64) -> f64 {
    let x = d1 * f / (d1 * f + d2);
    1.0 - incomplete_beta_oracle(x, d1 / 2.0, d2 / 2.0)
}

/// A random grip: four fingertips down the left edge in order and a thumb
/// on the right.
pub fn random_calibration(rng: &mut impl Rng) -> CalibrationFile {
    let mut y = rng.random_range(0.12..0.30);
    let mut tips: Vec<Point> = Vec::new();
    for i in 0..4 {
        if i > 0 {
            y += rng.random_range(0.08..0.18);
        }
        tips.push(Point::new(rng.random_range(0.0..0.15), y));
    }
    tips.push(Point::new(rng.random_range(0.82..1.0), rng.random_range(0.35..0.65)));
    let fingertips: Fingertips = tips.try_into().expect("five points");
    CalibrationFile {
        fingertips,
        edge_offset: rng.random_range(0.0..0.08),
        radius: rng.random_range(0.1..0.25),
    }
}
