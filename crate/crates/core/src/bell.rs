//! Two-party, two-setting fixtures.

use crate::pbox::ProbabilityBox;
use crate::rational::Rational;
use crate::scenario::Scenario;

/// Parties `A` (`a0`, `a1`) and `B` (`b0`, `b1`) with the four cross contexts only.
pub fn chsh_scenario() -> Scenario {
    Scenario::binary(
        &[("A", &["a0", "a1"]), ("B", &["b0", "b1"])],
        &[&["a0", "b0"], &["a0", "b1"], &["a1", "b0"], &["a1", "b1"]],
    )
    .expect("static scenario")
}

/// `P(ab|xy) = 1/2` when `a ⊕ b = x·y`, else 0.
pub fn pr_box() -> ProbabilityBox {
    let s = chsh_scenario();
    let settings: alloc::vec::Vec<(u32, u32)> = s
        .contexts()
        .iter()
        .map(|c| {
            let x = s.input(c.inputs()[0]).label.ends_with('1') as u32;
            let y = s.input(c.inputs()[1]).label.ends_with('1') as u32;
            (x, y)
        })
        .collect();
    ProbabilityBox::from_fn(s, |k, o| {
        let (x, y) = settings[k];
        if o[0] ^ o[1] == x & y {
            Rational::new(1, 2)
        } else {
            Rational::zero()
        }
    })
    .expect("PR box is normalized")
}
