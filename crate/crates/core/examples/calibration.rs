// Derive key anchors from five fingertip positions and classify touches.

use fbt_core::geometry::reference_calibration;
use fbt_core::{builtin_layout, resolve_region, Method, Point};

pub fn run_example() -> usize {
    let calibration = reference_calibration();
    let layout = builtin_layout(Method::Fti);
    let extra: Vec<_> = layout.synthetic_anchors().cloned().collect();
    let profile = calibration.derive(&extra).expect("reference calibration is valid");

    for a in &profile.anchors {
        println!("{:>13}  ({:.3}, {:.3})", a.region.name(), a.point.x, a.point.y);
    }
    println!("closest anchor pair: {:.3}", profile.min_anchor_separation());

    for p in [Point::new(0.10, 0.22), Point::new(0.9, 0.3), Point::new(0.31, 0.05)] {
        match resolve_region(p, &profile) {
            Some(r) => println!("touch ({:.2}, {:.2}) -> {}", p.x, p.y, r.name()),
            None => println!("touch ({:.2}, {:.2}) -> no key", p.x, p.y),
        }
    }
    profile.anchors.len()
}

fn main() {
    run_example();
}
