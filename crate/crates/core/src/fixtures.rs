//! The bundled example inputs, embedded at compile time.

use crate::dblcat::{DoubleCategory, DoublePresentation};
use crate::fractions::FractionsInput;

pub const FIX_ARROW: &str = include_str!("../../../fixtures/fix-arrow.json");
pub const FIX_ISO: &str = include_str!("../../../fixtures/fix-iso.json");
pub const FIX_POSB: &str = include_str!("../../../fixtures/fix-posb.json");
pub const FIX_BG: &str = include_str!("../../../fixtures/fix-bg.json");
pub const FIX_B2A: &str = include_str!("../../../fixtures/fix-b2a.json");
pub const V_Z2: &str = include_str!("../../../fixtures/v-z2.json");

/// File name and contents of every bundled fixture.
pub const ALL: &[(&str, &str)] = &[
    ("fix-arrow.json", FIX_ARROW),
    ("fix-iso.json", FIX_ISO),
    ("fix-posb.json", FIX_POSB),
    ("fix-bg.json", FIX_BG),
    ("fix-b2a.json", FIX_B2A),
    ("v-z2.json", V_Z2),
];

pub fn fractions_input(text: &str) -> FractionsInput {
    serde_json::from_str(text).expect("bundled fixture parses")
}

pub fn double(text: &str) -> DoubleCategory {
    let p: DoublePresentation = serde_json::from_str(text).expect("bundled fixture parses");
    DoubleCategory::from_presentation(&p).expect("bundled fixture is a double category")
}
