#![allow(dead_code)]

use circle_angles::triangulation::{parse_triangulation, IdealTriangulation};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::PathBuf;

pub const CENSUS: &[&str] = &[
    "m003", "m004", "m006", "m009", "m010", "m019", "m125", "m203", "s000", "s776", "L6a4", "L8n1", "K8a1",
    "o9_12345", "K12a100", "L13n1000", "L14a78", "L14a456",
];

#[derive(Deserialize)]
pub struct Meta {
    pub name: String,
    pub tetrahedra: usize,
    pub cusps: usize,
    pub snappy_edge_rows: Vec<Vec<i64>>,
    pub h1_z2: usize,
    pub h1_hat_z2: usize,
    pub homology: String,
}

#[derive(Deserialize)]
struct ShapeFile {
    z: Vec<[f64; 2]>,
}

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(file)
}

pub fn read(file: &str) -> String {
    std::fs::read_to_string(data(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

pub fn triangulation(name: &str) -> IdealTriangulation {
    parse_triangulation(&read(&format!("{name}.json"))).unwrap()
}

pub fn meta(name: &str) -> Meta {
    serde_json::from_str(&read(&format!("{name}.meta.json"))).unwrap()
}

pub fn shapes_file(file: &str) -> Vec<Complex64> {
    let s: ShapeFile = serde_json::from_str(&read(file)).unwrap();
    s.z.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

pub fn shapes(name: &str) -> Vec<Complex64> {
    shapes_file(&format!("{name}.shapes.json"))
}
