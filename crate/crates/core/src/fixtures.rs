//! Bundled triangulations of the two smallest census manifolds.

use crate::triangulation::{parse_triangulation, IdealTriangulation};

pub const M003_JSON: &str = include_str!("../fixtures/m003.json");
pub const M004_JSON: &str = include_str!("../fixtures/m004.json");

pub fn m003() -> IdealTriangulation {
    parse_triangulation(M003_JSON).expect("bundled m003 parses")
}

pub fn m004() -> IdealTriangulation {
    parse_triangulation(M004_JSON).expect("bundled m004 parses")
}
