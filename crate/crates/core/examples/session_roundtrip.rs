// Synthesize a touch log for a phrase, write it as JSON Lines, read it back
// and replay it.

use fbt_core::session::{synthesize_session_with, PayloadMode, SynthesisOptions};
use fbt_core::{
    builtin_layout, parse_session_log, replay_session, trial_metrics, CalibrationProfile, LatencyModel, Method,
};

pub fn run_example() -> String {
    let layout = builtin_layout(Method::Fti);
    let profile = CalibrationProfile::reference();
    let latency = "uniform:600-1400".parse().expect("valid latency spec");
    let options = SynthesisOptions {
        payload: PayloadMode::Touch,
        participant_id: Some("p01".into()),
        inline_profile: true,
    };
    let log = synthesize_session_with(
        "see you at noon",
        &layout,
        &profile,
        &LatencyModel {
            interval: latency,
            seed: 7,
        },
        &options,
    )
    .expect("phrase is producible");

    let text = log.serialize();
    println!("{} lines, {} bytes", text.lines().count(), text.len());

    let parsed = parse_session_log(&text).expect("round trip parses");
    let replay = replay_session(&parsed, &layout, &profile).expect("replay succeeds");
    let m = trial_metrics(&replay.record).expect("non-empty transcript");
    println!("transcript {:?}", replay.transcript);
    println!("wpm {:.2}  msd {}  kspc {:.2}", m.wpm, m.msd, m.kspc);
    replay.transcript
}

fn main() {
    run_example();
}
