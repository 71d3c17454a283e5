//! Bundled example contexts.

use crate::context::FormalContext;
use crate::io::read_cxt;

/// Five people and their hobbies (Swimming, Hiking, Biking, Rafting,
/// Jogging).
pub const HOBBIES_CXT: &str = include_str!("../../../fixtures/hobbies.cxt");
/// The hobbies network as a tab-separated person/activity edge list.
pub const HOBBIES_EDGES: &str = include_str!("../../../fixtures/hobbies.tsv");
/// Davis' Southern Women: 18 women × 14 events, 89 attendances.
pub const SOUTHERN_CXT: &str = include_str!("../../../fixtures/southern.cxt");
/// Closure family {∅, a, b, ac, bd, abcd}.
pub const FIG2_LEFT_CXT: &str = include_str!("../../../fixtures/fig2-left.cxt");
/// Closure family {∅, a, b, c, d, ab, ac, bd, cd, abcd}.
pub const FIG2_MIDDLE_CXT: &str = include_str!("../../../fixtures/fig2-middle.cxt");
/// Closure family {∅, a..e, ab, ac, bd, ce, de, abcde}.
pub const FIG2_RIGHT_CXT: &str = include_str!("../../../fixtures/fig2-right.cxt");

pub const ALL_CXT: [&str; 5] = [
    HOBBIES_CXT,
    SOUTHERN_CXT,
    FIG2_LEFT_CXT,
    FIG2_MIDDLE_CXT,
    FIG2_RIGHT_CXT,
];

fn load(text: &str) -> FormalContext {
    read_cxt(text).expect("bundled fixture parses")
}

pub fn hobbies() -> FormalContext {
    load(HOBBIES_CXT)
}

pub fn southern() -> FormalContext {
    load(SOUTHERN_CXT)
}

pub fn fig2_left() -> FormalContext {
    load(FIG2_LEFT_CXT)
}

pub fn fig2_middle() -> FormalContext {
    load(FIG2_MIDDLE_CXT)
}

pub fn fig2_right() -> FormalContext {
    load(FIG2_RIGHT_CXT)
}
