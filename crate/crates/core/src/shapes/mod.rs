//! Shape parameters, log-branches, combinatorial flattenings and the obstruction read off
//! an SL(2,C) labelling of the doubly truncated complex.

mod labelling;

pub use labelling::{
    build_labelling, coorient, verify_labelling, CellHolonomy, Labelling, LabellingReport, Mat2, OrientedEdge,
};

use crate::angles::{AngleContext, CircleAngleStructure, Space};
use crate::complex::rect;
use crate::error::{Error, Result};
use crate::linalg::BitVec;
use crate::obstruction::{ClassId, Obstruction};
use crate::tol::Tolerances;
use crate::triangulation::GluingData;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeFile {
    #[serde(default)]
    triangulation: Option<String>,
    z: Vec<[f64; 2]>,
}

/// Parses `{"triangulation": name, "z": [[re, im], ...]}`: one shape per tetrahedron, on edge 01.
pub fn parse_shapes(text: &str) -> Result<(Option<String>, Vec<Complex64>)> {
    let f: ShapeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((f.triangulation, f.z.iter().map(|&[re, im]| Complex64::new(re, im)).collect()))
}

/// `z`, `z' = 1/(1-z)`, `z'' = (z-1)/z`.
pub fn shape_triple(z: Complex64) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    [z, one / (one - z), (z - one) / z]
}

/// Shapes on every quad with the residuals of the edge and completeness equations.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeSolution {
    #[serde(skip)]
    pub z: Vec<Complex64>,
    pub edge_residual: f64,
    pub completeness_residual: f64,
    pub complete: bool,
}

fn monomial(z: &[Complex64], row: &[i64]) -> Complex64 {
    z.iter().zip(row).fold(Complex64::new(1.0, 0.0), |acc, (w, &g)| acc * w.powi(g as i32))
}

/// Completes one shape per tetrahedron to all quads and checks the edge equations.
pub fn check_shapes(g: &GluingData, shapes: &[Complex64], tol: &Tolerances) -> Result<ShapeSolution> {
    let n = g.n;
    if shapes.len() != n {
        return Err(Error::Shape(format!("expected {n} shapes, got {}", shapes.len())));
    }
    let mut z = vec![Complex64::new(0.0, 0.0); 3 * n];
    for (t, &s) in shapes.iter().enumerate() {
        if !(s.re.is_finite() && s.im.is_finite()) || s.norm() < tol.sing || (s - 1.0).norm() < tol.sing {
            return Err(Error::Shape(format!("tetrahedron {t} is degenerate (z = {s})")));
        }
        for (q, w) in shape_triple(s).into_iter().enumerate() {
            z[q * n + t] = w;
        }
    }
    let residual = |rows: &[Vec<i64>]| rows.iter().map(|r| (monomial(&z, r) - 1.0).norm()).fold(0.0, f64::max);
    let edge_residual = residual(&g.edges);
    if edge_residual > tol.eq {
        return Err(Error::Residual { what: "edge equations".into(), residual: edge_residual, tolerance: tol.eq });
    }
    let completeness_residual = residual(&g.peripheral);
    Ok(ShapeSolution { z, edge_residual, completeness_residual, complete: completeness_residual <= tol.eq })
}

/// Log-parameters with tetrahedron sums `i pi`, and the right-hand sides `G Z = pi i c`,
/// `G_d Z = pi i d` (the latter only for complete structures).
#[derive(Clone, Debug, Serialize)]
pub struct LogParameters {
    #[serde(skip)]
    pub z: Vec<Complex64>,
    pub c: Vec<i64>,
    pub d: Option<Vec<i64>>,
}

fn principal_arg(w: Complex64, tol: &Tolerances) -> f64 {
    if w.im.abs() <= tol.real {
        if w.re > 0.0 {
            0.0
        } else {
            PI
        }
    } else {
        w.arg()
    }
}

fn round_even(v: f64, what: String, tol: &Tolerances) -> Result<i64> {
    let r = (v - v.round()).abs();
    if r > tol.round {
        return Err(Error::Residual { what, residual: r, tolerance: tol.round });
    }
    let x = v.round() as i64;
    if x % 2 != 0 {
        return Err(Error::Inconsistency(format!("{what} has odd right-hand side {x}")));
    }
    Ok(x)
}

pub fn log_branches(g: &GluingData, sol: &ShapeSolution, tol: &Tolerances) -> Result<LogParameters> {
    let n = g.n;
    let mut z: Vec<Complex64> = sol.z.iter().map(|w| Complex64::new(w.norm().ln(), principal_arg(*w, tol))).collect();
    for t in 0..n {
        let s = (z[t].im + z[n + t].im + z[2 * n + t].im) / PI;
        if (s + 1.0).abs() <= tol.round {
            z[t].im += 2.0 * PI;
        } else if (s - 1.0).abs() > tol.round {
            return Err(Error::Residual { what: format!("tetrahedron {t} argument sum"), residual: (s - 1.0).abs(), tolerance: tol.round });
        }
    }
    let sums = |rows: &[Vec<i64>], what: &str| -> Result<Vec<i64>> {
        rows.iter()
            .enumerate()
            .map(|(i, row)| {
                let v: Complex64 = row.iter().zip(&z).map(|(&k, w)| w * k as f64).sum();
                if v.re.abs() > tol.eq {
                    return Err(Error::Residual { what: format!("{what} {i} (real part)"), residual: v.re.abs(), tolerance: tol.eq });
                }
                round_even(v.im / PI, format!("{what} {i}"), tol)
            })
            .collect()
    };
    let c = sums(&g.edges, "edge")?;
    let d = if sol.complete { Some(sums(&g.peripheral, "peripheral curve")?) } else { None };
    Ok(LogParameters { z, c, d })
}

/// `W = Z - i pi f`.
#[derive(Clone, Debug, Serialize)]
pub struct Flattening {
    pub f: Vec<i64>,
    #[serde(skip)]
    pub w: Vec<Complex64>,
    /// `f mod 2`.
    pub delta: Vec<u8>,
    pub strong: bool,
    /// Whether the peripheral condition was imposed.
    pub complete: bool,
}

impl Flattening {
    pub fn delta_bits(&self) -> BitVec {
        BitVec::from_parities(self.delta.iter().map(|&x| x as i64))
    }
}

/// Checks the flattening conditions for `f` exactly: tetrahedron sums of `f` are 1, `G f = c`
/// and, when `logs.d` is present, `G_d f = d`. Returns the flattening with its strong flag.
pub fn verify_flattening(ctx: &AngleContext, logs: &LogParameters, f: &[i64]) -> Result<Flattening> {
    let g = ctx.gluing();
    if f.len() != 3 * g.n {
        return Err(Error::InvalidArgument(format!("expected {} integers, got {}", 3 * g.n, f.len())));
    }
    let dot = |row: &[i64]| -> i64 { row.iter().zip(f).map(|(a, b)| a * b).sum() };
    for t in 0..g.n {
        if f[t] + f[g.n + t] + f[2 * g.n + t] != 1 {
            return Err(Error::Inconsistency(format!("tetrahedron {t}: flattening sum is not zero")));
        }
    }
    for (e, row) in g.edges.iter().enumerate() {
        if dot(row) != logs.c[e] {
            return Err(Error::Inconsistency(format!("edge {e}: G W is not zero")));
        }
    }
    if let Some(d) = &logs.d {
        for (i, row) in g.peripheral.iter().enumerate() {
            if dot(row) != d[i] {
                return Err(Error::Inconsistency(format!("peripheral curve {i}: G_d W is not zero")));
            }
        }
    }
    let w = logs.z.iter().zip(f).map(|(z, &k)| z - Complex64::new(0.0, PI * k as f64)).collect();
    let delta: Vec<u8> = f.iter().map(|x| x.rem_euclid(2) as u8).collect();
    let strong = ctx.has_even_parity(&BitVec::from_parities(f.iter().copied()));
    Ok(Flattening { f: f.to_vec(), w, delta, strong, complete: logs.d.is_some() })
}

/// Whether `f` gives a strong combinatorial flattening of `logs`.
pub fn verify_strong(ctx: &AngleContext, logs: &LogParameters, f: &[i64]) -> bool {
    verify_flattening(ctx, logs, f).is_ok_and(|fl| fl.strong)
}

/// A strong flattening, through the integer pseudo-angle solver.
pub fn find_flattening(ctx: &AngleContext, logs: &LogParameters) -> Result<Flattening> {
    let f = ctx.integer_pseudo_angle(&logs.c, logs.d.as_deref(), false)?;
    let fl = verify_flattening(ctx, logs, &f)?;
    if !fl.strong {
        return Err(Error::Inconsistency("solver returned a flattening that is not strong".into()));
    }
    Ok(fl)
}

/// `z / |z|` on every quad.
pub fn unit_angles(sol: &ShapeSolution) -> CircleAngleStructure {
    CircleAngleStructure::from_angles(&sol.z.iter().map(|w| w.arg()).collect::<Vec<_>>())
}

/// Obstruction class of the representation given by shapes, with the labelling audit.
#[derive(Clone, Debug)]
pub struct ShapeObstruction {
    pub solution: ShapeSolution,
    pub logs: LogParameters,
    pub flattening: Flattening,
    pub report: LabellingReport,
    /// Relative class when complete, absolute otherwise.
    pub class: ClassId,
    /// The class of `z/|z|` under `Phi_0` (complete) or `Phi`.
    pub angle_class: ClassId,
    /// `(-1)^delta` and `z/|z|` lie in the same component.
    pub same_component: bool,
}

pub fn obstruction_from_shapes(ob: &Obstruction, shapes: &[Complex64], tol: &Tolerances) -> Result<ShapeObstruction> {
    let ctx = ob.angles();
    let g = ctx.gluing();
    let solution = check_shapes(g, shapes, tol)?;
    let logs = log_branches(g, &solution, tol)?;
    let flattening = find_flattening(ctx, &logs)?;
    let lab = build_labelling(ob.complex(), ctx.triangulation(), &flattening)?;
    let report = verify_labelling(ob.complex(), ctx.triangulation(), &lab, tol)?;
    if !report.non_rectangle_identity {
        return Err(Error::Inconsistency("a 2-cell other than a rectangle has holonomy -I".into()));
    }
    if flattening.complete && !report.unipotent {
        return Err(Error::Inconsistency("peripheral monodromy is not unipotent".into()));
    }
    let delta = flattening.delta_bits();
    if report.sign_cochain != rect(ob.complex(), g, &delta)? {
        return Err(Error::Inconsistency("sign cochain of the labelling differs from rect(delta)".into()));
    }
    let space = if solution.complete { Space::Sa0 } else { Space::Sa };
    let class = ob.class_of_signs(&delta, space)?;
    let omega = CircleAngleStructure::new(g, unit_angles(&solution).values().to_vec(), tol)?;
    let angle_class = match space {
        Space::Sa0 => ob.phi0(&omega, tol)?,
        Space::Sa => ob.phi(&omega, tol)?,
    };
    if angle_class.coordinates != class.coordinates {
        return Err(Error::Inconsistency("obstruction from shapes disagrees with the angle-structure class".into()));
    }
    let same_component = ctx.same_component(&omega, &CircleAngleStructure::from_signs(&delta), solution.complete, tol)?;
    if !same_component {
        return Err(Error::Inconsistency("(-1)^delta and z/|z| lie in different components".into()));
    }
    Ok(ShapeObstruction { solution, logs, flattening, report, class, angle_class, same_component })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::triangulation::gluing_matrices;

    fn geometric() -> Vec<Complex64> {
        vec![Complex64::from_polar(1.0, PI / 3.0); 2]
    }

    fn golden() -> Vec<Complex64> {
        vec![Complex64::new((1.0 + 5f64.sqrt()) / 2.0, 0.0); 2]
    }

    #[test]
    fn m003_shapes_solve_the_equations() {
        let g = gluing_matrices(&fixtures::m003(), None).unwrap();
        let tol = Tolerances::default();
        for z in [geometric(), golden()] {
            let s = check_shapes(&g, &z, &tol).unwrap();
            assert!(s.edge_residual < 1e-12 && s.completeness_residual < 1e-12 && s.complete);
        }
        let mut bad = geometric();
        bad[0] = Complex64::new(2.0, 0.0);
        assert!(matches!(check_shapes(&g, &bad, &tol), Err(Error::Residual { .. })));
        assert!(matches!(check_shapes(&g, &[Complex64::new(1.0, 0.0); 2], &tol), Err(Error::Shape(_))));
    }

    #[test]
    fn m003_log_branches() {
        let g = gluing_matrices(&fixtures::m003(), None).unwrap();
        let tol = Tolerances::default();
        let logs = log_branches(&g, &check_shapes(&g, &geometric(), &tol).unwrap(), &tol).unwrap();
        assert_eq!(logs.c, vec![2, 2]);
        assert_eq!(logs.d, Some(vec![0, 0]));
        for w in &logs.z {
            assert!((w.im - PI / 3.0).abs() < 1e-12 && w.re.abs() < 1e-12);
        }
        let logs = log_branches(&g, &check_shapes(&g, &golden(), &tol).unwrap(), &tol).unwrap();
        let args: Vec<f64> = logs.z.iter().map(|w| w.im).collect();
        assert_eq!(args, vec![0.0, 0.0, PI, PI, 0.0, 0.0]);
    }

    #[test]
    fn lower_half_plane_tetrahedron_is_corrected_at_slot_zero() {
        let g = gluing_matrices(&fixtures::m003(), None).unwrap();
        let z = Complex64::from_polar(1.0, -PI / 3.0);
        let mut zs = vec![Complex64::new(0.0, 0.0); 6];
        for t in 0..2 {
            for (q, w) in shape_triple(z).into_iter().enumerate() {
                zs[q * 2 + t] = w;
            }
        }
        let sol = ShapeSolution { z: zs, edge_residual: 0.0, completeness_residual: 0.0, complete: false };
        let logs = log_branches(&g, &sol, &Tolerances::default()).unwrap();
        for t in 0..2 {
            assert!((logs.z[t].im - 5.0 * PI / 3.0).abs() < 1e-12);
            let s = logs.z[t] + logs.z[2 + t] + logs.z[4 + t];
            assert!((s - Complex64::new(0.0, PI)).norm() < 1e-12);
        }
    }

    #[test]
    fn m003_given_flattening_is_strong() {
        let t = fixtures::m003();
        let ctx = AngleContext::new(&t).unwrap();
        let tol = Tolerances::default();
        let logs = log_branches(ctx.gluing(), &check_shapes(ctx.gluing(), &geometric(), &tol).unwrap(), &tol).unwrap();
        assert!(verify_strong(&ctx, &logs, &[0, 0, 0, 0, 1, 1]));
        assert!(!verify_strong(&ctx, &logs, &[0, 0, 0, 0, 0, 1]));
        let fl = find_flattening(&ctx, &logs).unwrap();
        let d1 = BitVec::from_parities([0, 0, 0, 0, 1, 1]);
        assert!(ctx.same_class_mod2(&fl.delta_bits(), &d1, Space::Sa0));
    }
}
