//! Models shipped with the crate, used by tests and examples.

use crate::automata::Lts;
use crate::model::parse_model;

pub const G2: &str = include_str!("../fixtures/g2.lts");
pub const STATIC_AB: &str = include_str!("../fixtures/static_ab.lts");
pub const HDL: &str = include_str!("../fixtures/hdl.lts");

/// Seven-state system with a downgrading event; secret states 3 and 7.
pub fn g2() -> Lts {
    parse_model(G2).expect("bundled fixture parses")
}

/// Ten-state system over a, b, c with hidden h1, h2; secret `a* (b* + c*)`.
pub fn static_ab() -> Lts {
    parse_model(STATIC_AB).expect("bundled fixture parses")
}

/// Prefix closure of `h d l`.
pub fn hdl() -> Lts {
    parse_model(HDL).expect("bundled fixture parses")
}
