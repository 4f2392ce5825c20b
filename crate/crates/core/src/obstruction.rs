//! The obstruction maps on circle-valued angle structures and the component census.

use crate::angles::{AngleContext, CircleAngleStructure, ComponentSignature, Space};
use crate::complex::{include_relative, rect, restrict_to_boundary, Cohomology, CwComplex, Support};
use crate::error::{Error, Result};
use crate::linalg::{BitVec, IntMatrix, TorusSystem};
use crate::par::{self, Exec};
use crate::tol::Tolerances;
use crate::triangulation::IdealTriangulation;
use serde::Serialize;
use std::collections::BTreeSet;

/// A class in one of the cohomology groups, with the cocycle it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassId {
    pub support: Support,
    pub coordinates: BitVec,
    pub cocycle: BitVec,
}

impl ClassId {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_zero()
    }

    pub fn bits(&self) -> Vec<u8> {
        self.coordinates.to_u8s()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub dim: usize,
    /// Exponent of the `+-1`-valued representative, per quad.
    pub representative: Vec<u8>,
    pub class: Vec<u8>,
    pub signature: ComponentSignature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub space: Space,
    pub components: Vec<Component>,
}

/// Complex, cohomology groups and angle data of one triangulation.
#[derive(Debug)]
pub struct Obstruction {
    angles: AngleContext,
    cx: CwComplex,
    relative: Cohomology,
    absolute: Cohomology,
    boundary: Cohomology,
}

impl Obstruction {
    pub fn new(t: &IdealTriangulation) -> Result<Self> {
        Self::with_context(AngleContext::new(t)?)
    }

    pub fn with_context(angles: AngleContext) -> Result<Self> {
        let cx = CwComplex::build(angles.triangulation())?;
        let relative = cx.cohomology(2, Support::Relative)?;
        let absolute = cx.cohomology(2, Support::Absolute)?;
        let boundary = cx.cohomology(2, Support::Boundary)?;
        Ok(Obstruction { angles, cx, relative, absolute, boundary })
    }

    pub fn angles(&self) -> &AngleContext {
        &self.angles
    }

    pub fn complex(&self) -> &CwComplex {
        &self.cx
    }

    pub fn relative(&self) -> &Cohomology {
        &self.relative
    }

    pub fn absolute(&self) -> &Cohomology {
        &self.absolute
    }

    pub fn boundary(&self) -> &Cohomology {
        &self.boundary
    }

    /// Dimension of the kernel of `H^2(M) -> H^2(dM)`.
    pub fn restriction_kernel_dim(&self) -> Result<usize> {
        self.cx.restriction_kernel_dim(&self.absolute, &self.boundary)
    }

    /// `[rect(alpha)]` in relative (`SA0`) or absolute (`SA`) cohomology.
    pub fn class_of_signs(&self, alpha: &BitVec, space: Space) -> Result<ClassId> {
        let r = rect(&self.cx, self.angles.gluing(), alpha)?;
        match space {
            Space::Sa0 => Ok(ClassId { support: Support::Relative, coordinates: self.relative.reduce(&r)?, cocycle: r }),
            Space::Sa => {
                let a = include_relative(&self.cx, &r)?;
                let coordinates = self.absolute.reduce(&a)?;
                if !self.boundary.is_trivial(&restrict_to_boundary(&self.cx, &a))? {
                    return Err(Error::Inconsistency("class does not restrict to zero on the boundary".into()));
                }
                Ok(ClassId { support: Support::Absolute, coordinates, cocycle: a })
            }
        }
    }

    /// Representative exponent of the component with signature `sig`.
    pub fn representative(&self, sig: &ComponentSignature) -> Result<BitVec> {
        self.angles.representative(sig)
    }

    /// `Phi_0`: the class in `H^2(M, dM; Z2)` of a peripherally trivial structure.
    pub fn phi0(&self, omega: &CircleAngleStructure, tol: &Tolerances) -> Result<ClassId> {
        omega.check_peripheral(self.angles.gluing(), tol)?;
        let sig = self.angles.component_signature(omega, Space::Sa0, tol)?;
        self.class_of_signs(&self.representative(&sig)?, Space::Sa0)
    }

    /// `Phi`: the class in `H^2(M; Z2)`; lies in the kernel of restriction to the boundary.
    pub fn phi(&self, omega: &CircleAngleStructure, tol: &Tolerances) -> Result<ClassId> {
        let sig = self.angles.component_signature(omega, Space::Sa, tol)?;
        self.class_of_signs(&self.representative(&sig)?, Space::Sa)
    }

    /// Monomial system cutting out the space: tetrahedron products `-1`, edge and (for `SA0`)
    /// peripheral products `1`.
    pub fn torus_system(&self, space: Space) -> TorusSystem {
        let g = self.angles.gluing();
        let mut rows = g.tetrahedron_rows();
        let mut signs = vec![-1i8; g.n];
        rows.extend(g.edges.iter().cloned());
        signs.extend(std::iter::repeat(1).take(g.edges.len()));
        if space == Space::Sa0 {
            rows.extend(g.peripheral.iter().cloned());
            signs.extend(std::iter::repeat(1).take(g.peripheral.len()));
        }
        TorusSystem::new(&IntMatrix::from_rows(&rows, 3 * g.n), &signs)
    }

    /// One entry per connected component, with its class; checks that `Phi_0` is a bijection
    /// onto `H^2(M, dM; Z2)`, or that `Phi` is injective with image the kernel of restriction.
    pub fn enumerate_components(&self, space: Space, exec: Exec) -> Result<ComponentReport> {
        let system = self.torus_system(space);
        let info = system
            .components()
            .ok_or_else(|| Error::Inconsistency("the space of circle-valued angle structures is empty".into()))?;
        let labels = system.labels();
        let entries: Vec<Result<Component>> = par::map(exec, &labels, |label| {
            let x = system.point_of_label(label);
            let signature = self.angles.signature_from_turns(&x, space)?;
            let rep = self.representative(&signature)?;
            let class = self.class_of_signs(&rep, space)?;
            Ok(Component { dim: info.dim, representative: rep.to_u8s(), class: class.bits(), signature })
        });
        let components: Vec<Component> = entries.into_iter().collect::<Result<_>>()?;

        let expected_dim = match space {
            Space::Sa0 => self.relative.dim(),
            Space::Sa => self.restriction_kernel_dim()?,
        };
        let classes: BTreeSet<&[u8]> = components.iter().map(|c| c.class.as_slice()).collect();
        if classes.len() != components.len() {
            return Err(Error::Inconsistency("two components share an obstruction class".into()));
        }
        if components.len() as u64 != 1u64 << expected_dim {
            return Err(Error::Inconsistency(format!(
                "{} components but the target group has {} elements",
                components.len(),
                1u64 << expected_dim
            )));
        }
        Ok(ComponentReport { space, components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn m003() -> Obstruction {
        Obstruction::new(&fixtures::m003()).unwrap()
    }

    #[test]
    fn m003_phi0_separates_the_two_solutions() {
        let ob = m003();
        let tol = Tolerances::default();
        let g = ob.angles().gluing();
        let w1 = CircleAngleStructure::new(g, vec![Complex64::from_polar(1.0, PI / 3.0); 6], &tol).unwrap();
        let signs = [1.0, 1.0, -1.0, -1.0, 1.0, 1.0].map(|x| Complex64::new(x, 0.0)).to_vec();
        let w2 = CircleAngleStructure::new(g, signs, &tol).unwrap();
        assert_eq!(ob.phi0(&w1, &tol).unwrap().bits(), vec![1]);
        assert!(ob.phi0(&w2, &tol).unwrap().is_zero());
        assert!(ob.phi(&w1, &tol).unwrap().coordinates.is_empty());
    }

    #[test]
    fn m003_components() {
        let ob = m003();
        let rel = ob.enumerate_components(Space::Sa0, Exec::Sequential).unwrap();
        assert_eq!(rel.components.len(), 2);
        assert!(rel.components.iter().all(|c| c.dim == 1));
        let mut classes: Vec<_> = rel.components.iter().map(|c| c.class.clone()).collect();
        classes.sort();
        assert_eq!(classes, vec![vec![0], vec![1]]);
        let abs = ob.enumerate_components(Space::Sa, Exec::Sequential).unwrap();
        assert_eq!(abs.components.len(), 1);
        assert_eq!(abs.components[0].dim, 3);
    }

    #[test]
    fn report_serializes_to_the_documented_schema() {
        let rep = m003().enumerate_components(Space::Sa0, Exec::Sequential).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["space"], "SA0");
        let c = &v["components"][0];
        assert!(c["dim"].is_u64() && c["representative"].as_array().unwrap().len() == 6);
        assert!(c["signature"]["c"].is_array() && c["signature"]["d"].is_array());
    }
}
