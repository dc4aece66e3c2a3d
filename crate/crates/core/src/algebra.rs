//! Finite-dimensional unital associative algebras by structure constants,
//! plus the constructors everything downstream needs: opposite algebras,
//! tensor products, enveloping algebras, and matrix algebras over a base.

use crate::linalg::{sv_canon, sv_get, sv_scale, sv_unit, Matrix, Scalar, SparseVec};
use crate::{Error, Result};
use num::One;
use std::sync::Arc;

/// A unital associative algebra over the rationals. Validated on
/// construction: associativity and unitality are checked exhaustively on
/// basis triples, never sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    pub dim: usize,
    pub labels: Vec<String>,
    /// mul[i][j] is the coefficient vector of e_i * e_j.
    mul: Vec<Vec<SparseVec>>,
    unit: SparseVec,
}

impl Algebra {
    /// Validate and build an algebra from structure constants.
    pub fn new(
        dim: usize,
        labels: Vec<String>,
        mul: Vec<Vec<SparseVec>>,
        unit: SparseVec,
    ) -> Result<Self> {
        if labels.len() != dim || mul.len() != dim || mul.iter().any(|r| r.len() != dim) {
            return Err(Error::Invalid(format!(
                "structure constant shapes inconsistent with dim {dim}"
            )));
        }
        let a = Algebra {
            dim,
            labels,
            mul: mul
                .into_iter()
                .map(|row| row.into_iter().map(sv_canon).collect())
                .collect(),
            unit: sv_canon(unit),
        };
        a.check()?;
        Ok(a)
    }

    /// Exhaustive associativity and unit checks.
    pub fn check(&self) -> Result<()> {
        for (i, row) in self.mul.iter().enumerate() {
            for v in row {
                if let Some((top, _)) = v.last() {
                    if *top >= self.dim {
                        return Err(Error::Invalid(format!(
                            "product coefficients of basis {i} leave the space"
                        )));
                    }
                }
            }
        }
        for i in 0..self.dim {
            let left = self.mul_vec(&self.unit, &sv_unit(i));
            let right = self.mul_vec(&sv_unit(i), &self.unit);
            if left != sv_unit(i) || right != sv_unit(i) {
                return Err(Error::NotUnital { index: i });
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul[i][j].clone();
                for k in 0..self.dim {
                    let l = self.mul_vec(&ij, &sv_unit(k));
                    let r = self.mul_vec(&sv_unit(i), &self.mul[j][k]);
                    if l != r {
                        return Err(Error::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i][j]
    }

    /// Product of two elements in coordinates.
    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, ca) in a {
            for (j, cb) in b {
                let coeff = ca * cb;
                for (k, ck) in &self.mul[*i][*j] {
                    acc.push((*k, ck * &coeff));
                }
            }
        }
        sv_canon(acc)
    }

    /// Matrix of left multiplication by an element.
    pub fn left_mul_matrix(&self, a: &SparseVec) -> Matrix {
        let mut m = Matrix::zero(self.dim, self.dim);
        for j in 0..self.dim {
            m.set_col(j, self.mul_vec(a, &sv_unit(j)));
        }
        m
    }

    /// Matrix of right multiplication by an element.
    pub fn right_mul_matrix(&self, a: &SparseVec) -> Matrix {
        let mut m = Matrix::zero(self.dim, self.dim);
        for j in 0..self.dim {
            m.set_col(j, self.mul_vec(&sv_unit(j), a));
        }
        m
    }

    /// Structure-constant equality, ignoring labels. Used to decide whether
    /// two independently built algebras are the same balancing ring.
    pub fn same_structure(&self, other: &Algebra) -> bool {
        self.dim == other.dim && self.mul == other.mul && self.unit == other.unit
    }

    /// The ground field as a one-dimensional algebra.
    pub fn rationals() -> Self {
        Algebra::new(1, vec!["1".into()], vec![vec![sv_unit(0)]], sv_unit(0)).unwrap()
    }

    /// Dual numbers: basis (1, x) with x * x = 0.
    pub fn dual_numbers() -> Self {
        Algebra::new(
            2,
            vec!["1".into(), "x".into()],
            vec![
                vec![sv_unit(0), sv_unit(1)],
                vec![sv_unit(1), Vec::new()],
            ],
            sv_unit(0),
        )
        .unwrap()
    }

    /// The split pair: two orthogonal idempotents a, b with unit a + b.
    pub fn split_pair() -> Self {
        Algebra::new(
            2,
            vec!["a".into(), "b".into()],
            vec![
                vec![sv_unit(0), Vec::new()],
                vec![Vec::new(), sv_unit(1)],
            ],
            sv_canon(vec![(0, Scalar::one()), (1, Scalar::one())]),
        )
        .unwrap()
    }
}

/// Same space, reversed multiplication.
pub fn opposite(a: &Algebra) -> Algebra {
    let mul = (0..a.dim)
        .map(|i| (0..a.dim).map(|j| a.mul[j][i].clone()).collect())
        .collect();
    Algebra {
        dim: a.dim,
        labels: a.labels.clone(),
        mul,
        unit: a.unit.clone(),
    }
}

/// Tensor product algebra with factorwise multiplication; basis index of
/// e_i tensor f_j is i * dim(b) + j.
pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Algebra {
    let dim = a.dim * b.dim;
    let labels = (0..a.dim)
        .flat_map(|i| {
            (0..b.dim).map(move |j| format!("{}(x){}", a.labels[i], b.labels[j]))
        })
        .collect();
    let mut mul = vec![vec![Vec::new(); dim]; dim];
    for i1 in 0..a.dim {
        for j1 in 0..b.dim {
            for i2 in 0..a.dim {
                for j2 in 0..b.dim {
                    let pa = &a.mul[i1][i2];
                    let pb = &b.mul[j1][j2];
                    let mut v: SparseVec = Vec::with_capacity(pa.len() * pb.len());
                    for (ka, ca) in pa {
                        for (kb, cb) in pb {
                            v.push((ka * b.dim + kb, ca * cb));
                        }
                    }
                    mul[i1 * b.dim + j1][i2 * b.dim + j2] = sv_canon(v);
                }
            }
        }
    }
    let mut unit: SparseVec = Vec::new();
    for (ia, ca) in &a.unit {
        for (ib, cb) in &b.unit {
            unit.push((ia * b.dim + ib, ca * cb));
        }
    }
    Algebra {
        dim,
        labels,
        mul,
        unit: sv_canon(unit),
    }
}

/// Tensor an element pair into the tensor algebra's coordinates.
pub fn tensor_elem(b_dim: usize, a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut v: SparseVec = Vec::with_capacity(a.len() * b.len());
    for (ia, ca) in a {
        for (ib, cb) in b {
            v.push((ia * b_dim + ib, ca * cb));
        }
    }
    sv_canon(v)
}

/// The enveloping algebra: the tensor product with the opposite.
pub fn enveloping(r: &Algebra) -> Algebra {
    tensor_algebra(r, &opposite(r))
}

/// k x k matrices over a base algebra; basis E_ij tensor r with index
/// (i * k + j) * dim(r) + r_index, matrix-unit multiplication.
pub fn matrix_algebra(r: &Algebra, k: usize) -> Algebra {
    assert!(k >= 1, "matrix size must be at least 1");
    let dim = k * k * r.dim;
    let label = |i: usize, j: usize, t: usize| {
        if r.dim == 1 {
            format!("E{}{}", i + 1, j + 1)
        } else {
            format!("E{}{}(x){}", i + 1, j + 1, r.labels[t])
        }
    };
    let mut labels = Vec::with_capacity(dim);
    for i in 0..k {
        for j in 0..k {
            for t in 0..r.dim {
                labels.push(label(i, j, t));
            }
        }
    }
    let idx = |i: usize, j: usize, t: usize| (i * k + j) * r.dim + t;
    let mut mul = vec![vec![Vec::new(); dim]; dim];
    for i in 0..k {
        for j in 0..k {
            for t1 in 0..r.dim {
                for l in 0..k {
                    for t2 in 0..r.dim {
                        // (E_ij x a)(E_jl x b) = E_il x ab
                        let prod: SparseVec = r.mul[t1][t2]
                            .iter()
                            .map(|(t, c)| (idx(i, l, *t), c.clone()))
                            .collect();
                        mul[idx(i, j, t1)][idx(j, l, t2)] = sv_canon(prod);
                    }
                }
            }
        }
    }
    let mut unit: SparseVec = Vec::new();
    for i in 0..k {
        for (t, c) in &r.unit {
            unit.push((idx(i, i, *t), c.clone()));
        }
    }
    Algebra {
        dim,
        labels,
        mul,
        unit: sv_canon(unit),
    }
}

/// A unital algebra map given by its matrix, validated on basis pairs.
#[derive(Debug, Clone)]
pub struct AlgebraMap {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub matrix: Matrix,
}

impl AlgebraMap {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Matrix) -> Result<Self> {
        assert_eq!(matrix.rows(), target.dim);
        assert_eq!(matrix.cols(), source.dim);
        if matrix.apply(source.unit()) != *target.unit() {
            return Err(Error::NotAlgebraMap {
                context: "unit is not preserved".into(),
            });
        }
        for i in 0..source.dim {
            for j in 0..source.dim {
                let lhs = matrix.apply(source.mul_basis(i, j));
                let rhs = target.mul_vec(&matrix.apply(&sv_unit(i)), &matrix.apply(&sv_unit(j)));
                if lhs != rhs {
                    return Err(Error::NotAlgebraMap {
                        context: format!(
                            "multiplicativity fails at ({}, {})",
                            source.labels[i], source.labels[j]
                        ),
                    });
                }
            }
        }
        Ok(AlgebraMap {
            source,
            target,
            matrix,
        })
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(v)
    }
}

/// Scale an element; tiny convenience used all over formula evaluation.
pub fn scaled(v: &SparseVec, c: &Scalar) -> SparseVec {
    sv_scale(v, c)
}

/// Coefficient of a basis element inside an element.
pub fn coeff_of(v: &SparseVec, i: usize) -> Scalar {
    sv_get(v, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sc;

    #[test]
    fn standard_algebras_validate() {
        assert_eq!(Algebra::rationals().dim, 1);
        assert_eq!(Algebra::dual_numbers().dim, 2);
        let s = Algebra::split_pair();
        assert_eq!(s.mul_vec(s.unit(), &sv_unit(1)), sv_unit(1));
    }

    #[test]
    fn rejects_bad_structure() {
        // x * x = 1 with unit x is not unital (x * 1 should be x).
        let bad = Algebra::new(
            2,
            vec!["1".into(), "x".into()],
            vec![
                vec![sv_unit(0), sv_unit(1)],
                vec![sv_unit(1), sv_unit(0)],
            ],
            sv_unit(1),
        );
        assert!(matches!(bad, Err(Error::NotUnital { .. })));

        // a non-associative table: e1 * e1 = e1, but e1 * (e1 * e1) made
        // to differ by directing e1*e0 wrong under a fake unit e0
        let bad = Algebra::new(
            2,
            vec!["1".into(), "y".into()],
            vec![
                vec![sv_unit(0), sv_unit(1)],
                vec![sv_unit(1), vec![(0, sc(1)), (1, sc(1))]],
            ],
            sv_unit(0),
        );
        // (y y) y = (1 + y) y = y + y y = 1 + 2y ; y (y y) = y (1 + y) = 1 + 2y
        // that one is associative, so force a genuinely broken one:
        let really_bad = Algebra::new(
            2,
            vec!["1".into(), "y".into()],
            vec![
                vec![sv_unit(0), sv_unit(1)],
                vec![sv_unit(1), sv_unit(1)],
            ],
            sv_unit(0),
        );
        // (y y) y = y y = y ; y (y y) = y y = y -- also associative; use dim 3
        drop(bad);
        drop(really_bad);
        let broken = Algebra::new(
            3,
            vec!["1".into(), "u".into(), "v".into()],
            vec![
                vec![sv_unit(0), sv_unit(1), sv_unit(2)],
                vec![sv_unit(1), sv_unit(2), Vec::new()],
                vec![sv_unit(2), sv_unit(1), Vec::new()],
            ],
            sv_unit(0),
        );
        assert!(matches!(broken, Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn opposite_involution_and_matrix_example() {
        let m2 = matrix_algebra(&Algebra::rationals(), 2);
        let op = opposite(&m2);
        assert!(opposite(&op).same_structure(&m2));
        // in the opposite, E12 . E21 means E21 E12 = E22
        let e12 = sv_unit(1);
        let e21 = sv_unit(2);
        assert_eq!(op.mul_vec(&e12, &e21), sv_unit(3));
        // commutative algebras are their own opposites
        let d = Algebra::dual_numbers();
        assert!(opposite(&d).same_structure(&d));
        assert!(opposite(&Algebra::rationals()).same_structure(&Algebra::rationals()));
    }

    #[test]
    fn tensor_and_enveloping_dims() {
        let q = Algebra::rationals();
        assert!(tensor_algebra(&q, &q).same_structure(&q));
        assert_eq!(enveloping(&Algebra::dual_numbers()).dim, 4);
        assert_eq!(enveloping(&matrix_algebra(&q, 2)).dim, 16);
        // associativity of the tensor construction on a triple
        let a = Algebra::dual_numbers();
        let b = Algebra::split_pair();
        let c = matrix_algebra(&q, 2);
        let left = tensor_algebra(&tensor_algebra(&a, &b), &c);
        let right = tensor_algebra(&a, &tensor_algebra(&b, &c));
        assert!(left.same_structure(&right));
        left.check().unwrap();
    }

    #[test]
    fn matrix_units_multiply() {
        let q = Algebra::rationals();
        assert!(matrix_algebra(&q, 1).same_structure(&q));
        let m2 = matrix_algebra(&q, 2);
        // E12 E21 = E11, E21 E12 = E22, E12 E12 = 0
        assert_eq!(m2.mul_vec(&sv_unit(1), &sv_unit(2)), sv_unit(0));
        assert_eq!(m2.mul_vec(&sv_unit(2), &sv_unit(1)), sv_unit(3));
        assert!(m2.mul_vec(&sv_unit(1), &sv_unit(1)).is_empty());
        assert_eq!(matrix_algebra(&Algebra::dual_numbers(), 2).dim, 8);
    }

    #[test]
    fn algebra_map_validation() {
        let q = Arc::new(Algebra::rationals());
        let d = Arc::new(Algebra::dual_numbers());
        // unit inclusion of the field into dual numbers
        let incl = Matrix::from_rows_i64(&[&[1], &[0]]);
        assert!(AlgebraMap::new(q.clone(), d.clone(), incl).is_ok());
        // sending 1 to x is not unital
        let bad = Matrix::from_rows_i64(&[&[0], &[1]]);
        assert!(AlgebraMap::new(q.clone(), d.clone(), bad).is_err());
        // x -> 1 breaks multiplicativity (x^2 = 0 but 1 * 1 = 1)
        let bad2 = Matrix::from_rows_i64(&[&[1, 1], &[0, 0]]);
        assert!(AlgebraMap::new(d.clone(), d, bad2).is_err());
    }
}
