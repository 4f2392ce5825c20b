use super::CwComplex;
use crate::error::{Error, Result};
use crate::linalg::{z2_solve, BitVec, Z2Matrix, Z2Span};

/// Which cochains are allowed: all cells, cells off the boundary, or boundary cells only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    Absolute,
    Relative,
    Boundary,
}

/// A basis of `H^k` with a reduction map from cocycles to coordinates.
///
/// Cochains are full-length vectors over all `k`-cells and vanish off the support.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    pub support: Support,
    /// Representing cocycles of the basis classes.
    pub generators: Vec<BitVec>,
    span: Z2Span,
    /// Generator index inside `span` of every basis class.
    slots: Vec<usize>,
    allowed: BitVec,
    cocycle_rows: Z2Matrix,
}

fn mask(cx: &CwComplex, dim: usize, support: Support) -> BitVec {
    let b = cx.boundary_mask(dim);
    match support {
        Support::Absolute => BitVec::from_bools(&vec![true; cx.num_cells(dim)]),
        Support::Relative => BitVec::from_bools(&b.to_bools().iter().map(|x| !x).collect::<Vec<_>>()),
        Support::Boundary => b,
    }
}

fn select_rows(m: &Z2Matrix, keep: &BitVec) -> Z2Matrix {
    Z2Matrix::from_rows(m.ncols(), keep.ones().map(|i| m.row(i).clone()).collect())
}

fn and(a: &BitVec, b: &BitVec) -> BitVec {
    BitVec::from_bools(&a.to_bools().iter().zip(b.to_bools()).map(|(x, y)| *x && y).collect::<Vec<_>>())
}

impl Cohomology {
    pub fn compute(cx: &CwComplex, degree: usize, support: Support) -> Result<Self> {
        if degree > 2 {
            return Err(Error::InvalidArgument(format!("cohomology degree {degree} is not supported")));
        }
        let ncells = cx.num_cells(degree);
        let allowed = mask(cx, degree, support);
        let cocycle_rows = select_rows(cx.boundary_matrix(degree + 1), &mask(cx, degree + 1, support));
        // cocycles: kernel of delta restricted to the allowed columns
        let cols: Vec<usize> = allowed.ones().collect();
        let restricted = Z2Matrix::from_rows(
            cols.len(),
            cocycle_rows
                .row_vecs()
                .iter()
                .map(|r| BitVec::from_bools(&cols.iter().map(|&c| r.get(c)).collect::<Vec<_>>()))
                .collect(),
        );
        let kernel = z2_solve(&restricted, &BitVec::zeros(restricted.nrows())).expect("homogeneous system").kernel;
        let cocycles: Vec<BitVec> = kernel
            .iter()
            .map(|k| {
                let mut v = BitVec::zeros(ncells);
                for i in k.ones() {
                    v.set(cols[i], true);
                }
                v
            })
            .collect();
        let coboundaries: Vec<BitVec> = if degree == 0 {
            Vec::new()
        } else {
            cx.boundary_matrix(degree)
                .columns()
                .into_iter()
                .enumerate()
                .filter(|(c, _)| mask(cx, degree - 1, support).get(*c))
                .map(|(_, col)| and(&col, &allowed))
                .collect()
        };
        let mut span = Z2Span::from_vectors(ncells, coboundaries.iter());
        let mut generators = Vec::new();
        let mut slots = Vec::new();
        let base = coboundaries.len();
        for (i, z) in cocycles.into_iter().enumerate() {
            if !span.contains(&z) {
                span.insert(z.clone());
                generators.push(z);
                slots.push(base + i);
            } else {
                // keep generator numbering aligned with the cocycle list
                span.insert(z);
            }
        }
        Ok(Cohomology { degree, support, generators, span, slots, allowed, cocycle_rows })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn is_cocycle(&self, c: &BitVec) -> bool {
        c.ones().all(|i| self.allowed.get(i)) && self.cocycle_rows.mul_vec(c).is_zero()
    }

    /// Coordinates of the class of `c` in the pinned basis.
    pub fn reduce(&self, c: &BitVec) -> Result<BitVec> {
        if c.len() != self.allowed.len() {
            return Err(Error::InvalidArgument("cochain has the wrong length".into()));
        }
        if c.ones().any(|i| !self.allowed.get(i)) {
            return Err(Error::NotCocycle(format!("{:?} cochain does not vanish off its support", self.support)));
        }
        if !self.cocycle_rows.mul_vec(c).is_zero() {
            return Err(Error::NotCocycle(format!("degree {} coboundary is nonzero", self.degree)));
        }
        let comb = self.span.express(c).expect("cocycles lie in the span");
        Ok(BitVec::from_bools(&self.slots.iter().map(|&s| comb.get(s)).collect::<Vec<_>>()))
    }

    pub fn is_trivial(&self, c: &BitVec) -> Result<bool> {
        Ok(self.reduce(c)?.is_zero())
    }
}

impl CwComplex {
    pub fn cohomology(&self, degree: usize, support: Support) -> Result<Cohomology> {
        Cohomology::compute(self, degree, support)
    }

    /// Dimension of the kernel of restriction `H^2(M) -> H^2(dM)`.
    pub fn restriction_kernel_dim(&self, absolute: &Cohomology, boundary: &Cohomology) -> Result<usize> {
        let bmask = self.boundary_mask(2);
        let images: Vec<BitVec> = absolute
            .generators
            .iter()
            .map(|g| boundary.reduce(&and(g, &bmask)))
            .collect::<Result<_>>()?;
        let rank = Z2Span::from_vectors(boundary.dim(), images.iter()).dim();
        Ok(absolute.dim() - rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_t00;
    use crate::fixtures;

    #[test]
    fn m003_second_cohomology() {
        let cx = build_t00(&fixtures::m003()).unwrap();
        assert_eq!(cx.cohomology(2, Support::Relative).unwrap().dim(), 1);
        assert_eq!(cx.cohomology(2, Support::Absolute).unwrap().dim(), 0);
        assert_eq!(cx.cohomology(2, Support::Boundary).unwrap().dim(), 1);
        assert_eq!(cx.cohomology(0, Support::Absolute).unwrap().dim(), 1);
    }

    #[test]
    fn reduce_rejects_non_cocycles() {
        let cx = build_t00(&fixtures::m003()).unwrap();
        let h = cx.cohomology(2, Support::Relative).unwrap();
        let mut c = BitVec::zeros(cx.num_cells(2));
        c.set(cx.rectangle(0, 0, 1), true);
        assert!(matches!(h.reduce(&c), Err(Error::NotCocycle(_))));
    }
}
