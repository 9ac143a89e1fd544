// Dial a number with one press per digit, then place the call.

use fbt_core::{builtin_layout, new_session, Method, Region, RegionId};

pub fn run_example() -> String {
    let layout = builtin_layout(Method::SingleDigitFdi);
    let mut state = new_session(layout.clone()).expect("shipped layout is valid");

    let call = layout
        .find(|a| a.is_terminal())
        .expect("single-digit layout has a call key");
    let presses = [
        Region::Canonical(RegionId::Index),
        Region::Canonical(RegionId::Index),
        Region::Canonical(RegionId::Ring),
        Region::Canonical(RegionId::AboveIndex),
        Region::Canonical(RegionId::Middle),
        call,
    ];
    for region in &presses {
        let (next, feedback) = state.press(region).expect("press accepted");
        for f in feedback {
            println!("{:>12}  {:?}: {}", region.name(), f.kind, f.utterance);
        }
        state = next;
    }
    println!("dialled {}", state.transcript());
    state.transcript().to_string()
}

fn main() {
    run_example();
}
