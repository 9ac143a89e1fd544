// Simulate all three methods at the same press rate and compare them.

use fbt_core::phrases::phrases_for;
use fbt_core::report::{compare, SelectionRule};
use fbt_core::{
    builtin_layout, replay_session, synthesize_session, trial_metrics, CalibrationProfile, LatencyModel, Method,
};

pub fn run_example() -> fbt_core::report::ComparisonReport {
    let profile = CalibrationProfile::reference();
    let mut trials = Vec::new();
    for method in Method::ALL {
        let layout = builtin_layout(method);
        for (i, phrase) in phrases_for(method, 12, 42).iter().enumerate() {
            let latency = LatencyModel {
                interval: "uniform:700-1300".parse().expect("valid latency spec"),
                seed: i as u64,
            };
            let log = synthesize_session(phrase, &layout, &profile, &latency).expect("producible phrase");
            let replay = replay_session(&log, &layout, &profile).expect("replay succeeds");
            trials.push((method, trial_metrics(&replay.record).expect("non-empty transcript")));
        }
    }
    let report = compare(&trials, SelectionRule::default());
    print!("{}", report.to_pretty_text());
    report
}

fn main() {
    run_example();
}
