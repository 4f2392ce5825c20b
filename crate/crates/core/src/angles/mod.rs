//! Circle-valued angle structures, their components, and integer pseudo-angles.

mod lt;

pub use lt::{lt_matrices, lt_row, lt_row_mod2, space_dimensions, LtMatrices};

use crate::error::{Error, Result};
use crate::linalg::{integer_solve_with, smith_normal_form, z2_solve, BitVec, IntMatrix, SnfDecomposition, Z2Matrix, Z2Span};
use crate::tol::Tolerances;
use crate::triangulation::{
    curve_coefficients_mod2, cusp_cycles, cycle_basis, edge_loop, gluing_matrices, CurvePath, GluingData,
    IdealTriangulation,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// `SA` (all circle-valued structures) or `SA0` (peripherally trivial ones).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "SA")]
    Sa,
    #[serde(rename = "SA0")]
    Sa0,
}

/// Unit complex number per quad, in block layout.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleAngleStructure {
    omega: Vec<Complex64>,
}

fn residual_err(what: impl Into<String>, residual: f64, tolerance: f64) -> Error {
    Error::Residual { what: what.into(), residual, tolerance }
}

impl CircleAngleStructure {
    /// Checks the tetrahedron and edge equations.
    pub fn new(g: &GluingData, omega: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let n = g.n;
        if omega.len() != 3 * n {
            return Err(Error::InvalidArgument(format!("expected {} angles, got {}", 3 * n, omega.len())));
        }
        for (i, w) in omega.iter().enumerate() {
            let r = (w.norm() - 1.0).abs();
            if r.is_nan() || r > tol.unit {
                return Err(residual_err(format!("modulus of quad {i}"), r, tol.unit));
            }
        }
        for t in 0..n {
            let r = (omega[t] * omega[n + t] * omega[2 * n + t] + 1.0).norm();
            if r > tol.eq {
                return Err(residual_err(format!("tetrahedron {t} product"), r, tol.eq));
            }
        }
        for (e, row) in g.edges.iter().enumerate() {
            let r = (holonomy(&omega, row) - 1.0).norm();
            if r > tol.eq {
                return Err(residual_err(format!("edge {e} product"), r, tol.eq));
            }
        }
        Ok(CircleAngleStructure { omega })
    }

    /// `(-1)^alpha`, not validated.
    pub fn from_signs(alpha: &BitVec) -> Self {
        let omega = alpha.to_bools().iter().map(|&b| Complex64::new(if b { -1.0 } else { 1.0 }, 0.0)).collect();
        CircleAngleStructure { omega }
    }

    /// `exp(i a)` per quad, not validated.
    pub fn from_angles(angles: &[f64]) -> Self {
        CircleAngleStructure { omega: angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect() }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.omega
    }

    /// Largest distance of a peripheral angle-holonomy from 1.
    pub fn peripheral_residual(&self, g: &GluingData) -> f64 {
        g.peripheral.iter().map(|r| (holonomy(&self.omega, r) - 1.0).norm()).fold(0.0, f64::max)
    }

    pub fn check_peripheral(&self, g: &GluingData, tol: &Tolerances) -> Result<()> {
        let r = self.peripheral_residual(g);
        if r > tol.eq {
            return Err(residual_err("peripheral holonomy", r, tol.eq));
        }
        Ok(())
    }
}

/// `prod omega(q)^G(q)`.
pub fn holonomy(omega: &[Complex64], coefficients: &[i64]) -> Complex64 {
    omega.iter().zip(coefficients).fold(Complex64::new(1.0, 0.0), |acc, (w, &g)| acc * w.powi(g as i32))
}

pub fn parity(t: &IdealTriangulation, x: &BitVec, path: &CurvePath) -> Result<bool> {
    Ok(curve_coefficients_mod2(t, path)?.dot(x))
}

/// `p(x)(V) = sum_E inc(E, V) x(E)`.
pub fn p_map(t: &IdealTriangulation, x: &[i64]) -> Vec<i64> {
    (0..t.num_cusps())
        .map(|v| (0..t.edge_classes().len()).map(|e| t.incidence(e, v) * x[e]).sum())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LoopKind {
    Basis,
    Edge { class: usize },
    Peripheral { cusp: usize },
}

/// A closed curve on which parities are checked.
#[derive(Clone, Debug)]
pub struct AuditLoop {
    pub kind: LoopKind,
    pub path: CurvePath,
    pub coefficients: BitVec,
}

/// Dual-graph cycle basis, edge loops and cusp cycles.
pub fn audit_loops(t: &IdealTriangulation) -> Result<Vec<AuditLoop>> {
    let mut out = Vec::new();
    for path in cycle_basis(t) {
        let coefficients = curve_coefficients_mod2(t, &path)?;
        out.push(AuditLoop { kind: LoopKind::Basis, path, coefficients });
    }
    for class in 0..t.edge_classes().len() {
        let path = edge_loop(t, class);
        let coefficients = curve_coefficients_mod2(t, &path)?;
        out.push(AuditLoop { kind: LoopKind::Edge { class }, path, coefficients });
    }
    for c in cusp_cycles(t) {
        let path = c.path(t);
        let coefficients = curve_coefficients_mod2(t, &path)?;
        out.push(AuditLoop { kind: LoopKind::Peripheral { cusp: c.cusp }, path, coefficients });
    }
    Ok(out)
}

/// `c` per edge class and, for `SA0`, `d` per peripheral curve, with `G alpha = pi c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentSignature {
    pub c: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
}

/// Everything derived from one triangulation that the angle computations share.
#[derive(Debug)]
pub struct AngleContext {
    t: IdealTriangulation,
    g: GluingData,
    lt: LtMatrices,
    loops: Vec<AuditLoop>,
    parity_rows: Z2Matrix,
    relative_span: Z2Span,
    absolute_span: Z2Span,
    systems: [OnceLock<SnfDecomposition>; 2],
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn parities(v: &[BigInt]) -> BitVec {
    BitVec::from_bools(&v.iter().map(|x| x.is_odd()).collect::<Vec<_>>())
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl AngleContext {
    pub fn new(t: &IdealTriangulation) -> Result<Self> {
        let g = gluing_matrices(t, None)?;
        Self::with_gluing(t, g)
    }

    pub fn with_gluing(t: &IdealTriangulation, g: GluingData) -> Result<Self> {
        let lt = lt_matrices(&g)?;
        let loops = audit_loops(t)?;
        let nq = 3 * g.n;
        let parity_rows = Z2Matrix::from_rows(nq, loops.iter().map(|l| l.coefficients.clone()).collect());
        let l2 = lt.l_mod2();
        let lb2 = lt.l_boundary_mod2();
        let relative_span = Z2Span::from_vectors(nq, l2.row_vecs());
        let absolute_span = Z2Span::from_vectors(nq, l2.row_vecs().iter().chain(lb2.row_vecs()));
        Ok(AngleContext {
            t: t.clone(),
            g,
            lt,
            loops,
            parity_rows,
            relative_span,
            absolute_span,
            systems: [OnceLock::new(), OnceLock::new()],
        })
    }

    pub fn triangulation(&self) -> &IdealTriangulation {
        &self.t
    }

    pub fn gluing(&self) -> &GluingData {
        &self.g
    }

    pub fn lt(&self) -> &LtMatrices {
        &self.lt
    }

    pub fn loops(&self) -> &[AuditLoop] {
        &self.loops
    }

    pub fn num_quads(&self) -> usize {
        3 * self.g.n
    }

    /// Parities of `x` along every audit loop.
    pub fn parities(&self, x: &BitVec) -> BitVec {
        self.parity_rows.mul_vec(x)
    }

    pub fn has_even_parity(&self, x: &BitVec) -> bool {
        self.parities(x).is_zero()
    }

    /// Membership in the even-parity Z2 angle structures: tetrahedron sums 1 and even parity.
    pub fn is_even_structure(&self, alpha: &BitVec) -> bool {
        self.tet_sums_mod2(alpha).iter().all(|&b| b) && self.has_even_parity(alpha)
    }

    /// Membership in the subspace with tetrahedron sums 0 and even parity.
    pub fn in_s(&self, s: &BitVec) -> bool {
        self.tet_sums_mod2(s).iter().all(|&b| !b) && self.has_even_parity(s)
    }

    fn tet_sums_mod2(&self, x: &BitVec) -> Vec<bool> {
        let n = self.g.n;
        (0..n).map(|t| x.get(t) ^ x.get(n + t) ^ x.get(2 * n + t)).collect()
    }

    /// Whether `a - b` lies in `Im L_2^T` (`SA0`) or `Im L_2^T + Im [L_d]_2^T` (`SA`).
    pub fn same_class_mod2(&self, a: &BitVec, b: &BitVec, space: Space) -> bool {
        let span = match space {
            Space::Sa0 => &self.relative_span,
            Space::Sa => &self.absolute_span,
        };
        span.contains(&a.xor(b))
    }

    fn system(&self, peripheral: bool) -> &SnfDecomposition {
        self.systems[peripheral as usize].get_or_init(|| {
            let mut rows = self.g.tetrahedron_rows();
            rows.extend(self.g.edges.iter().cloned());
            if peripheral {
                rows.extend(self.g.peripheral.iter().cloned());
            }
            smith_normal_form(&IntMatrix::from_rows(&rows, 3 * self.g.n))
        })
    }

    /// An integer vector with tetrahedron sums 1 (0 if `homogeneous`), `G eta = c`,
    /// `G_d eta = d` when `d` is given, and even parity along every curve.
    pub fn integer_pseudo_angle(&self, c: &[i64], d: Option<&[i64]>, homogeneous: bool) -> Result<Vec<i64>> {
        let (n, k) = (self.g.n, self.g.k);
        if c.len() != n || d.is_some_and(|d| d.len() != 2 * k) {
            return Err(Error::InvalidArgument("signature has the wrong length".into()));
        }
        if c.iter().chain(d.unwrap_or(&[])).any(|x| x % 2 != 0) {
            return Err(Error::InvalidArgument("signature entries must be even".into()));
        }
        let shift = if homogeneous { 0 } else { 2 };
        let shifted: Vec<i64> = c.iter().map(|x| x - shift).collect();
        if p_map(&self.t, &shifted).iter().any(|&x| x != 0) {
            return Err(Error::InvalidArgument(format!("p(c - {shift}) is not zero")));
        }
        let mut b = vec![BigInt::from(!homogeneous as i64); n];
        b.extend(to_big(c));
        if let Some(d) = d {
            b.extend(to_big(d));
        }
        let sol = integer_solve_with(self.system(d.is_some()), &b)
            .ok_or_else(|| Error::Inconsistency("no integer solution of the pseudo-angle equations".into()))?;
        // even parity: fix the mod-2 class of x0 inside the kernel lattice
        let rhs = self.parities(&parities(&sol.particular));
        let cols: Vec<BitVec> = sol.kernel.iter().map(|kv| self.parities(&parities(kv))).collect();
        let p = Z2Matrix::from_rows(self.loops.len(), cols).transpose();
        let fix = z2_solve(&p, &rhs).ok_or_else(|| Error::Inconsistency("parity correction has no solution".into()))?;
        let mut eta = sol.particular.clone();
        for j in fix.particular.ones() {
            for (e, kv) in eta.iter_mut().zip(&sol.kernel[j]) {
                *e += kv;
            }
        }
        let eta: Vec<i64> = eta
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Inconsistency("pseudo-angle entry overflows i64".into())))
            .collect::<Result<_>>()?;
        self.check_pseudo_angle(&eta, c, d, homogeneous)?;
        Ok(eta)
    }

    /// Conditions 1-4 on an integer vector, exactly.
    pub fn check_pseudo_angle(&self, eta: &[i64], c: &[i64], d: Option<&[i64]>, homogeneous: bool) -> Result<()> {
        let n = self.g.n;
        let want = !homogeneous as i64;
        for t in 0..n {
            if eta[t] + eta[n + t] + eta[2 * n + t] != want {
                return Err(Error::Inconsistency(format!("tetrahedron {t} sum is not {want}")));
            }
        }
        for (e, row) in self.g.edges.iter().enumerate() {
            if dot(row, eta) != c[e] {
                return Err(Error::Inconsistency(format!("edge {e} sum is not {}", c[e])));
            }
        }
        if let Some(d) = d {
            for (i, row) in self.g.peripheral.iter().enumerate() {
                if dot(row, eta) != d[i] {
                    return Err(Error::Inconsistency(format!("peripheral sum {i} is not {}", d[i])));
                }
            }
        }
        if !self.has_even_parity(&BitVec::from_parities(eta.iter().copied())) {
            return Err(Error::Inconsistency("pseudo-angle has odd parity along an audit loop".into()));
        }
        Ok(())
    }

    /// Signature of `omega`: principal arguments, tetrahedron sums moved to `pi` at slot 0.
    pub fn component_signature(&self, omega: &CircleAngleStructure, space: Space, tol: &Tolerances) -> Result<ComponentSignature> {
        let n = self.g.n;
        let mut alpha: Vec<f64> = omega.values().iter().map(|w| w.arg()).collect();
        for a in &mut alpha {
            if *a <= -PI {
                *a += 2.0 * PI;
            }
        }
        for t in 0..n {
            let s = alpha[t] + alpha[n + t] + alpha[2 * n + t];
            let k = ((s - PI) / (2.0 * PI)).round();
            let r = ((s - PI) / (2.0 * PI) - k).abs();
            if r > tol.round {
                return Err(residual_err(format!("tetrahedron {t} angle sum"), r, tol.round));
            }
            alpha[t] -= 2.0 * PI * k;
        }
        let round_rows = |rows: &[Vec<i64>], what: &str| -> Result<Vec<i64>> {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    let v: f64 = row.iter().zip(&alpha).map(|(&g, a)| g as f64 * a).sum::<f64>() / PI;
                    let r = (v - v.round()).abs();
                    if r > tol.round {
                        return Err(residual_err(format!("{what} {i}"), r, tol.round));
                    }
                    let x = v.round() as i64;
                    if x % 2 != 0 {
                        return Err(Error::Inconsistency(format!("{what} {i} has odd signature {x}")));
                    }
                    Ok(x)
                })
                .collect()
        };
        let c = round_rows(&self.g.edges, "edge")?;
        let d = match space {
            Space::Sa0 => Some(round_rows(&self.g.peripheral, "peripheral curve")?),
            Space::Sa => None,
        };
        Ok(ComponentSignature { c, d })
    }

    /// Exact signature of the structure `exp(2 pi i x)` with `x` in turns.
    pub fn signature_from_turns(&self, x: &[BigRational], space: Space) -> Result<ComponentSignature> {
        let n = self.g.n;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut r: Vec<BigRational> = x.iter().map(|v| v - (v - &half).ceil()).collect();
        for t in 0..n {
            let s = &r[t] + &r[n + t] + &r[2 * n + t] - &half;
            if !s.is_integer() {
                return Err(Error::Inconsistency(format!("tetrahedron {t} product is not -1")));
            }
            r[t] -= s;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let eval = |rows: &[Vec<i64>]| -> Result<Vec<i64>> {
            rows.iter()
                .map(|row| {
                    let v = row
                        .iter()
                        .zip(&r)
                        .fold(BigRational::zero(), |acc, (&g, a)| acc + a * BigRational::from_integer(g.into()))
                        * &two;
                    if !v.is_integer() || v.to_integer().is_odd() {
                        return Err(Error::Inconsistency("exact signature is not an even integer".into()));
                    }
                    Ok(v.to_integer().to_i64().unwrap())
                })
                .collect()
        };
        let c = eval(&self.g.edges)?;
        let d = match space {
            Space::Sa0 => Some(eval(&self.g.peripheral)?),
            Space::Sa => None,
        };
        Ok(ComponentSignature { c, d })
    }

    /// A `+-1`-valued structure (as its exponent mod 2) in the component with this signature.
    pub fn representative(&self, sig: &ComponentSignature) -> Result<BitVec> {
        let eta = self.integer_pseudo_angle(&sig.c, sig.d.as_deref(), false)?;
        Ok(BitVec::from_parities(eta))
    }

    /// Whether two structures lie in the same component of `SA0` (`relative`) or `SA`.
    pub fn same_component(
        &self,
        a: &CircleAngleStructure,
        b: &CircleAngleStructure,
        relative: bool,
        tol: &Tolerances,
    ) -> Result<bool> {
        let space = if relative { Space::Sa0 } else { Space::Sa };
        if relative {
            a.check_peripheral(&self.g, tol)?;
            b.check_peripheral(&self.g, tol)?;
        }
        let ra = self.representative(&self.component_signature(a, space, tol)?)?;
        let rb = self.representative(&self.component_signature(b, space, tol)?)?;
        Ok(self.same_class_mod2(&ra, &rb, space))
    }

    pub fn space_dimensions(&self) -> Result<(usize, usize)> {
        space_dimensions(&self.g)
    }
}
