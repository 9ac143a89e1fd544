// The statistics used for method comparison, on small hand-made samples.

use fbt_core::stats::{anova_oneway, mann_whitney, regularized_incomplete_beta, shapiro_wilk};

pub fn run_example() -> f64 {
    let fast = [3.1, 3.6, 2.8, 3.4, 3.9, 2.7];
    let slow = [1.9, 2.2, 1.6, 2.4, 1.8, 2.0];

    for (name, xs) in [("fast", &fast), ("slow", &slow)] {
        let w = shapiro_wilk(xs).expect("valid sample");
        println!("W({name}) = {:.4}", w.value);
    }

    let f = anova_oneway(&[&fast, &slow]).expect("non-degenerate groups");
    let (d1, d2) = f.df.expect("anova reports degrees of freedom");
    println!("F({d1}, {d2}) = {:.3}, p = {:.5}", f.value, f.p_value.unwrap());

    let u = mann_whitney(&fast, &slow).expect("non-empty samples");
    println!("U = {}, p = {:.5} ({:?})", u.value, u.p_value.unwrap(), u.method);

    let i = regularized_incomplete_beta(0.3, 2.5, 4.0).expect("in domain");
    println!("I_0.3(2.5, 4) = {i:.6}");
    f.value
}

fn main() {
    run_example();
}
