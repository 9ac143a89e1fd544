// Two digits per key: tap once or twice to pick, Enter to commit.

use fbt_core::{builtin_layout, new_session, Method, Pending, Region, RegionId};

pub fn run_example() -> String {
    let mut state = new_session(builtin_layout(Method::DoubleDigitFdi)).expect("shipped layout is valid");
    let index = Region::Canonical(RegionId::Index);
    let enter = Region::Canonical(RegionId::Thumb);
    let call = Region::Canonical(RegionId::BottomCenter);

    // "2" then "1": the index key cycles 1, 2, 1, ...
    for region in [&index, &index, &enter, &index, &index, &index, &enter, &call] {
        let feedback = state.apply(region).expect("press accepted");
        let pending = match state.pending() {
            Some(Pending::Digit { press_count, .. }) => format!("press {press_count}"),
            _ => "-".into(),
        };
        let spoken: Vec<_> = feedback.iter().map(|f| f.utterance.as_str()).collect();
        println!("{:>12}  {:<8} {}", region.name(), pending, spoken.join(", "));
    }
    println!("dialled {} in {} presses", state.transcript(), state.press_total());
    state.transcript().to_string()
}

fn main() {
    run_example();
}
