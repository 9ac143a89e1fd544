// Type mixed-case text with letter groups, the case toggle and Enter.

use fbt_core::session::press_plan;
use fbt_core::{builtin_layout, new_session, Method};

pub fn run_example() -> String {
    let layout = builtin_layout(Method::Fti);
    let phrase = "Hi there!";
    let plan = press_plan(phrase, &layout).expect("every symbol is on the layout");

    let mut state = new_session(layout).expect("shipped layout is valid");
    for region in &plan {
        for f in state.apply(region).expect("press accepted") {
            println!("{:>12}  {}", region.name(), f.utterance);
        }
    }
    println!(
        "typed {:?} with {} presses, {:.2} per character",
        state.transcript(),
        plan.len() - 1,
        (plan.len() - 1) as f64 / phrase.chars().count() as f64
    );
    state.transcript().to_string()
}

fn main() {
    run_example();
}
