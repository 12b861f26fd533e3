use serde::{Deserialize, Serialize};

use super::Triple;
use crate::gf::{Field, FieldElement};

/// A 3×3 matrix over GF(q) acting on column vectors of homogeneous coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix3(pub [[FieldElement; 3]; 3]);

impl Matrix3 {
    pub fn identity() -> Matrix3 {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Matrix3([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn from_codes(rows: [[u32; 3]; 3]) -> Matrix3 {
        Matrix3(rows.map(|r| r.map(FieldElement)))
    }

    pub fn from_columns(a: Triple, b: Triple, c: Triple) -> Matrix3 {
        Matrix3([[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]])
    }

    #[inline]
    pub fn apply(&self, f: &Field, v: Triple) -> Triple {
        let r = &self.0;
        let row = |i: usize| f.add(f.add(f.mul(r[i][0], v[0]), f.mul(r[i][1], v[1])), f.mul(r[i][2], v[2]));
        [row(0), row(1), row(2)]
    }

    pub fn mul(&self, f: &Field, other: &Matrix3) -> Matrix3 {
        let mut out = [[FieldElement::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).fold(FieldElement::ZERO, |acc, k| f.add(acc, f.mul(self.0[i][k], other.0[k][j])));
            }
        }
        Matrix3(out)
    }

    fn minor(&self, f: &Field, i: usize, j: usize) -> FieldElement {
        let r = &self.0;
        let (i0, i1) = ((i + 1) % 3, (i + 2) % 3);
        let (j0, j1) = ((j + 1) % 3, (j + 2) % 3);
        // Cyclic index choice makes this the signed cofactor directly.
        f.sub(f.mul(r[i0][j0], r[i1][j1]), f.mul(r[i0][j1], r[i1][j0]))
    }

    pub fn det(&self, f: &Field) -> FieldElement {
        (0..3).fold(FieldElement::ZERO, |acc, j| f.add(acc, f.mul(self.0[0][j], self.minor(f, 0, j))))
    }

    /// Inverse via the adjugate, or `None` when singular.
    pub fn inverse(&self, f: &Field) -> Option<Matrix3> {
        let det = self.det(f);
        if det.is_zero() {
            return None;
        }
        let inv_det = f.inv_nonzero(det);
        let mut out = [[FieldElement::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f.mul(self.minor(f, j, i), inv_det);
            }
        }
        Some(Matrix3(out))
    }

    /// Solves `self · x = b` for an invertible matrix.
    pub fn solve(&self, f: &Field, b: Triple) -> Option<Triple> {
        Some(self.inverse(f)?.apply(f, b))
    }

    /// The collineation sending the ordered frame `(p1, p2, p3, p4)` to
    /// `((0,0,1), (0,1,0), (1,0,0), (1,1,1))`, or `None` if the four points
    /// are not in general position.
    pub fn frame_to_standard(f: &Field, frame: [Triple; 4]) -> Option<Matrix3> {
        let [p1, p2, p3, p4] = frame;
        let basis = Matrix3::from_columns(p1, p2, p3);
        let lambda = basis.solve(f, p4)?;
        if lambda.iter().any(|c| c.is_zero()) {
            return None;
        }
        let scale = |v: Triple, s: FieldElement| v.map(|c| f.mul(c, s));
        // This sends e1, e2, e3 and (1,1,1) to p3, p2, p1 and p4.
        let back = Matrix3::from_columns(scale(p3, lambda[2]), scale(p2, lambda[1]), scale(p1, lambda[0]));
        back.inverse(f)
    }
}
