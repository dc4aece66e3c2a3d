//! Bimodules over pairs of algebras and balanced tensor products realized
//! as explicit quotient spaces. Everything downstream (coproduct targets,
//! chain spaces, base-changed totals) is built from these.

use crate::algebra::Algebra;
use crate::linalg::{
    descend, quotient_from_rref, sv_canon, sv_unit, Matrix, QuotientSpace, Rref, Scalar,
    SparseVec,
};
use crate::{Error, Result};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A bimodule: a left action of `left_alg` and a commuting right action of
/// `right_alg` on a coordinate space. Validated exhaustively on
/// construction: both actions are unital, the left one is an algebra map,
/// the right one reverses products, and they commute.
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub left_alg: Arc<Algebra>,
    pub right_alg: Arc<Algebra>,
    pub dim: usize,
    /// left_act[i] is the matrix of the left action of basis element i.
    pub left_act: Vec<Matrix>,
    /// right_act[j] is the matrix of the right action of basis element j.
    pub right_act: Vec<Matrix>,
}

fn combination(mats: &[Matrix], coeffs: &SparseVec, dim: usize) -> Matrix {
    let mut acc = Matrix::zero(dim, dim);
    for (i, c) in coeffs {
        acc = acc.add(&mats[*i].scale(c));
    }
    acc
}

impl Bimodule {
    pub fn new(
        left_alg: Arc<Algebra>,
        right_alg: Arc<Algebra>,
        dim: usize,
        left_act: Vec<Matrix>,
        right_act: Vec<Matrix>,
        context: &str,
    ) -> Result<Self> {
        if left_act.len() != left_alg.dim || right_act.len() != right_alg.dim {
            return Err(Error::NotAction {
                context: format!("{context}: action family sizes do not match the algebras"),
            });
        }
        for m in left_act.iter().chain(right_act.iter()) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::NotAction {
                    context: format!("{context}: action matrix shape is not {dim}x{dim}"),
                });
            }
        }
        let id = Matrix::identity(dim);
        if combination(&left_act, left_alg.unit(), dim) != id {
            return Err(Error::NotAction {
                context: format!("{context}: left action of the unit is not the identity"),
            });
        }
        if combination(&right_act, right_alg.unit(), dim) != id {
            return Err(Error::NotAction {
                context: format!("{context}: right action of the unit is not the identity"),
            });
        }
        for i in 0..left_alg.dim {
            for j in 0..left_alg.dim {
                let composed = left_act[i].mul(&left_act[j]);
                let direct = combination(&left_act, left_alg.mul_basis(i, j), dim);
                if composed != direct {
                    return Err(Error::NotAction {
                        context: format!(
                            "{context}: left action breaks at ({}, {})",
                            left_alg.label(i),
                            left_alg.label(j)
                        ),
                    });
                }
            }
        }
        for i in 0..right_alg.dim {
            for j in 0..right_alg.dim {
                // (m . a) . b = m . (ab), so matrices compose in reverse
                let composed = right_act[j].mul(&right_act[i]);
                let direct = combination(&right_act, right_alg.mul_basis(i, j), dim);
                if composed != direct {
                    return Err(Error::NotAction {
                        context: format!(
                            "{context}: right action breaks at ({}, {})",
                            right_alg.label(i),
                            right_alg.label(j)
                        ),
                    });
                }
            }
        }
        for i in 0..left_alg.dim {
            for j in 0..right_alg.dim {
                if left_act[i].mul(&right_act[j]) != right_act[j].mul(&left_act[i]) {
                    return Err(Error::NotAction {
                        context: format!(
                            "{context}: actions do not commute at ({}, {})",
                            left_alg.label(i),
                            right_alg.label(j)
                        ),
                    });
                }
            }
        }
        Ok(Bimodule {
            left_alg,
            right_alg,
            dim,
            left_act,
            right_act,
        })
    }

    /// An algebra as a bimodule over itself by left and right multiplication.
    pub fn regular(alg: &Arc<Algebra>) -> Self {
        let left_act = (0..alg.dim)
            .map(|i| alg.left_mul_matrix(&sv_unit(i)))
            .collect();
        let right_act = (0..alg.dim)
            .map(|j| alg.right_mul_matrix(&sv_unit(j)))
            .collect();
        Bimodule {
            left_alg: alg.clone(),
            right_alg: alg.clone(),
            dim: alg.dim,
            left_act,
            right_act,
        }
    }

    pub fn left_apply(&self, a: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, c) in a {
            for (k, ck) in self.left_act[*i].apply(m) {
                acc.push((k, &ck * c));
            }
        }
        sv_canon(acc)
    }

    pub fn right_apply(&self, m: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in a {
            for (k, ck) in self.right_act[*j].apply(m) {
                acc.push((k, &ck * c));
            }
        }
        sv_canon(acc)
    }
}

/// Swap the two actions: an (A,B)-bimodule becomes a (B°,A°)-bimodule with
/// the same underlying space. Valid by symmetry of the bimodule laws, so no
/// re-validation is needed.
pub fn flip(m: &Bimodule) -> Bimodule {
    Bimodule {
        left_alg: Arc::new(crate::algebra::opposite(&m.right_alg)),
        right_alg: Arc::new(crate::algebra::opposite(&m.left_alg)),
        dim: m.dim,
        left_act: m.right_act.clone(),
        right_act: m.left_act.clone(),
    }
}

/// Names which stored action of a factor enters the balancing relation.
/// `Stored` keeps the factor as given; `Flipped` swaps its two actions
/// first. This is how a tensor over R is told apart from one over R^op when
/// a space carries several commuting actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSide {
    Stored,
    Flipped,
}

/// A balanced tensor product of two bimodules: the quotient of the pair
/// space by (x.r) tensor y - x tensor (r.y), carrying the residual outer
/// bimodule structure.
#[derive(Debug, Clone)]
pub struct BalancedTensor {
    pub over: Arc<Algebra>,
    pub left_dim: usize,
    pub right_dim: usize,
    pub space: QuotientSpace,
    /// The quotient as a (left factor's left algebra, right factor's right
    /// algebra) bimodule; actions are descended and re-validated.
    pub module: Bimodule,
}

impl BalancedTensor {
    pub fn dim(&self) -> usize {
        self.space.quotient_dim
    }

    pub fn pure_index(&self, i: usize, j: usize) -> usize {
        i * self.right_dim + j
    }

    /// x tensor y in ambient pair coordinates.
    pub fn ambient_pure(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut v: SparseVec = Vec::with_capacity(x.len() * y.len());
        for (i, cx) in x {
            for (j, cy) in y {
                v.push((i * self.right_dim + j, cx * cy));
            }
        }
        sv_canon(v)
    }

    /// x tensor y in quotient coordinates.
    pub fn pure_tensor(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.space.project(&self.ambient_pure(x, y))
    }

    /// Canonical representative of a quotient element as a sum of pure
    /// pairs (left index, right index, coefficient).
    pub fn legs_of(&self, v: &SparseVec) -> Vec<(usize, usize, Scalar)> {
        self.space
            .lift(v)
            .into_iter()
            .map(|(k, c)| (k / self.right_dim, k % self.right_dim, c))
            .collect()
    }
}

/// The matrix of f tensor identity on a pair space indexed i * right_dim + j.
pub fn left_kron(l: &Matrix, right_dim: usize) -> Matrix {
    let dim = l.rows() * right_dim;
    let mut out = Matrix::zero(dim, dim);
    for i in 0..l.cols() {
        let col = l.col(i);
        for j in 0..right_dim {
            out.set_col(
                i * right_dim + j,
                col.iter().map(|(k, c)| (k * right_dim + j, c.clone())).collect(),
            );
        }
    }
    out
}

/// The matrix of identity tensor g on a pair space indexed i * right_dim + j.
pub fn right_kron(left_dim: usize, r: &Matrix) -> Matrix {
    let rd = r.rows();
    let dim = left_dim * rd;
    let mut out = Matrix::zero(dim, dim);
    for i in 0..left_dim {
        for j in 0..r.cols() {
            out.set_col(
                i * rd + j,
                r.col(j).iter().map(|(l, c)| (i * rd + l, c.clone())).collect(),
            );
        }
    }
    out
}

/// Balanced tensor product over `over`. The side selectors name which
/// stored action of each factor is balanced: the (possibly flipped) right
/// action of `m` against the (possibly flipped) left action of `n`.
pub fn balanced_tensor(
    m: &Bimodule,
    n: &Bimodule,
    over: &Arc<Algebra>,
    m_side: ActionSide,
    n_side: ActionSide,
    size_limit: usize,
) -> Result<BalancedTensor> {
    let em = match m_side {
        ActionSide::Stored => m.clone(),
        ActionSide::Flipped => flip(m),
    };
    let en = match n_side {
        ActionSide::Stored => n.clone(),
        ActionSide::Flipped => flip(n),
    };
    if !em.right_alg.same_structure(over) {
        return Err(Error::ActionMismatch {
            context: "selected right action of the left factor is not an action of the balancing algebra".into(),
        });
    }
    if !en.left_alg.same_structure(over) {
        return Err(Error::ActionMismatch {
            context: "selected left action of the right factor is not an action of the balancing algebra".into(),
        });
    }
    let (ld, rd) = (em.dim, en.dim);
    let ambient = ld * rd;
    if ambient > size_limit {
        return Err(Error::SizeLimit {
            dim: ambient,
            cap: size_limit,
        });
    }
    let mut rref = Rref::new(ambient);
    for r in 0..over.dim {
        let ra = &em.right_act[r];
        let la = &en.left_act[r];
        for i in 0..ld {
            let xr = ra.col(i);
            for j in 0..rd {
                let mut rel: SparseVec =
                    xr.iter().map(|(k, c)| (k * rd + j, c.clone())).collect();
                for (l, c) in la.col(j) {
                    rel.push((i * rd + l, -c.clone()));
                }
                let rel = sv_canon(rel);
                if !rel.is_empty() {
                    rref.insert(&rel);
                }
            }
        }
    }
    let space = quotient_from_rref(rref);

    let mut left_q = Vec::with_capacity(em.left_alg.dim);
    for a in 0..em.left_alg.dim {
        let amb = left_kron(&em.left_act[a], rd);
        left_q.push(descend(&amb, &space, &space, "outer left action on balanced tensor")?);
    }
    let mut right_q = Vec::with_capacity(en.right_alg.dim);
    for b in 0..en.right_alg.dim {
        let amb = right_kron(ld, &en.right_act[b]);
        right_q.push(descend(&amb, &space, &space, "outer right action on balanced tensor")?);
    }
    let module = Bimodule::new(
        em.left_alg.clone(),
        en.right_alg.clone(),
        space.quotient_dim,
        left_q,
        right_q,
        "balanced tensor outer structure",
    )?;
    Ok(BalancedTensor {
        over: over.clone(),
        left_dim: ld,
        right_dim: rd,
        space,
        module,
    })
}

/// A formal linear combination of index tuples, used to evaluate operator
/// formulas on pure tensors before embedding into quotient coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormalSum(pub BTreeMap<Vec<usize>, Scalar>);

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum(BTreeMap::new())
    }

    pub fn term(tuple: Vec<usize>, coeff: Scalar) -> Self {
        let mut s = FormalSum::zero();
        s.add_term(tuple, coeff);
        s
    }

    pub fn add_term(&mut self, tuple: Vec<usize>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry(tuple.clone()).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.0.remove(&tuple);
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum, coeff: &Scalar) {
        for (t, c) in &other.0 {
            self.add_term(t.clone(), c * coeff);
        }
    }

    /// Cartesian expansion of one slot list: each slot contributes its
    /// support, coefficients multiply.
    pub fn from_slots(slots: &[&SparseVec]) -> Self {
        let mut acc = FormalSum::term(Vec::new(), Scalar::one());
        for slot in slots {
            let mut next = FormalSum::zero();
            for (tuple, c) in &acc.0 {
                for (i, ci) in slot.iter() {
                    let mut t = tuple.clone();
                    t.push(*i);
                    next.add_term(t, c * ci);
                }
            }
            acc = next;
        }
        acc
    }
}

/// Evaluate a tuple formula multilinearly on sparse slot contents.
pub fn eval_formula(
    f: &dyn Fn(&[usize]) -> FormalSum,
    slots: &[&SparseVec],
) -> FormalSum {
    let expanded = FormalSum::from_slots(slots);
    let mut out = FormalSum::zero();
    for (tuple, c) in &expanded.0 {
        out.add_scaled(&f(tuple), c);
    }
    out
}

/// A left-associated chain of balanced tensor products with canonical
/// section lifts. Factors are stored already normalized (flips applied),
/// so balancing is always the stored right action against the stored left.
/// Boundaries may balance over different algebras (overs[k] sits between
/// factor k and factor k+1).
#[derive(Debug, Clone)]
pub struct TensorChain {
    pub overs: Vec<Arc<Algebra>>,
    pub factors: Vec<Bimodule>,
    pub steps: Vec<BalancedTensor>,
}

impl TensorChain {
    pub fn dim(&self) -> usize {
        match self.steps.last() {
            Some(s) => s.dim(),
            None => self.factors[0].dim,
        }
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// The outermost bimodule structure of the full chain.
    pub fn outer(&self) -> &Bimodule {
        match self.steps.last() {
            Some(s) => &s.module,
            None => &self.factors[0],
        }
    }

    fn tuple_upto(&self, step_count: usize, q: usize) -> Vec<usize> {
        if step_count == 0 {
            return vec![q];
        }
        let st = &self.steps[step_count - 1];
        let amb = st.space.non_pivots[q];
        let mut t = self.tuple_upto(step_count - 1, amb / st.right_dim);
        t.push(amb % st.right_dim);
        t
    }

    /// The unique pure tuple representing a quotient basis element under
    /// the canonical sections.
    pub fn tuple_of_basis(&self, q: usize) -> Vec<usize> {
        self.tuple_upto(self.steps.len(), q)
    }

    /// Quotient coordinates of a pure basis tuple.
    pub fn embed_tuple(&self, tuple: &[usize]) -> SparseVec {
        assert_eq!(tuple.len(), self.factors.len(), "tuple arity mismatch");
        let mut v = sv_unit(tuple[0]);
        for (k, st) in self.steps.iter().enumerate() {
            let amb: SparseVec = v
                .iter()
                .map(|(a, c)| (a * st.right_dim + tuple[k + 1], c.clone()))
                .collect();
            v = st.space.project(&amb);
        }
        v
    }

    pub fn embed_sum(&self, s: &FormalSum) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (tuple, c) in &s.0 {
            for (k, ck) in self.embed_tuple(tuple) {
                acc.push((k, &ck * c));
            }
        }
        sv_canon(acc)
    }

    /// Pure tensor of slot elements in quotient coordinates.
    pub fn embed_slots(&self, slots: &[&SparseVec]) -> SparseVec {
        assert_eq!(slots.len(), self.factors.len(), "slot arity mismatch");
        let mut v = slots[0].clone();
        for (k, st) in self.steps.iter().enumerate() {
            v = st.pure_tensor(&v, slots[k + 1]);
        }
        v
    }

    /// Build the matrix of an operator given by a formula on pure tensors.
    /// The formula is evaluated on the top-level ambient space (previous
    /// quotient basis paired with the last factor), embedded into the
    /// target chain, and descended; descending verifies the formula kills
    /// the top-level balancing relations exactly.
    pub fn operator_to(
        &self,
        target: &TensorChain,
        f: &dyn Fn(&[usize]) -> FormalSum,
        context: &str,
    ) -> Result<Matrix> {
        match self.steps.last() {
            None => {
                let mut out = Matrix::zero(target.dim(), self.dim());
                for q in 0..self.dim() {
                    out.set_col(q, target.embed_sum(&f(&[q])));
                }
                Ok(out)
            }
            Some(top) => {
                let (pd, ld) = (top.left_dim, top.right_dim);
                let mut amb = Matrix::zero(target.dim(), pd * ld);
                for a in 0..pd {
                    let mut tuple = self.tuple_upto(self.steps.len() - 1, a);
                    for b in 0..ld {
                        tuple.push(b);
                        amb.set_col(a * ld + b, target.embed_sum(&f(&tuple)));
                        tuple.pop();
                    }
                }
                descend(
                    &amb,
                    &top.space,
                    &QuotientSpace::trivial(target.dim()),
                    context,
                )
            }
        }
    }
}

/// Left-associated iterated balanced tensor product with one balancing
/// algebra per boundary. `sides[k]` selects the balanced actions at the
/// boundary between factor k and factor k+1; the left selector of boundary
/// 0 applies to factor 0 and every other left selector must be Stored (the
/// accumulated quotient has no flip).
pub fn iterated_tensor_over(
    factors: &[&Bimodule],
    overs: &[&Arc<Algebra>],
    sides: &[(ActionSide, ActionSide)],
    size_limit: usize,
) -> Result<TensorChain> {
    assert!(!factors.is_empty(), "empty tensor chain");
    assert_eq!(sides.len() + 1, factors.len(), "one selector pair per boundary");
    assert_eq!(overs.len() + 1, factors.len(), "one balancing algebra per boundary");
    for (k, s) in sides.iter().enumerate() {
        if k > 0 && s.0 != ActionSide::Stored {
            return Err(Error::ActionMismatch {
                context: "interior left selectors refer to an accumulated quotient and must be Stored".into(),
            });
        }
    }
    let mut normalized: Vec<Bimodule> = Vec::with_capacity(factors.len());
    for (k, f) in factors.iter().enumerate() {
        let side = if k == 0 {
            sides.first().map(|s| s.0).unwrap_or(ActionSide::Stored)
        } else {
            sides[k - 1].1
        };
        normalized.push(match side {
            ActionSide::Stored => (*f).clone(),
            ActionSide::Flipped => flip(f),
        });
    }
    let mut steps: Vec<BalancedTensor> = Vec::new();
    let mut acc: Bimodule = normalized[0].clone();
    for (next, over) in normalized[1..].iter().zip(overs) {
        let step = balanced_tensor(&acc, next, over, ActionSide::Stored, ActionSide::Stored, size_limit)?;
        acc = step.module.clone();
        steps.push(step);
    }
    Ok(TensorChain {
        overs: overs.iter().map(|o| (*o).clone()).collect(),
        factors: normalized,
        steps,
    })
}

/// Iterated balanced tensor product with the same balancing algebra at
/// every boundary, the common case for chain spaces.
pub fn iterated_tensor(
    factors: &[&Bimodule],
    over: &Arc<Algebra>,
    sides: &[(ActionSide, ActionSide)],
    size_limit: usize,
) -> Result<TensorChain> {
    let overs: Vec<&Arc<Algebra>> = std::iter::repeat(over)
        .take(factors.len().saturating_sub(1))
        .collect();
    iterated_tensor_over(factors, &overs, sides, size_limit)
}

/// Single factor as a chain, for uniform operator plumbing.
pub fn single_chain(factor: &Bimodule) -> TensorChain {
    TensorChain {
        overs: Vec::new(),
        factors: vec![factor.clone()],
        steps: Vec::new(),
    }
}

/// Exhaustively verify that a tuple formula respects every interior
/// balancing boundary of `source`: replacing (x.r, y) by (x, r.y) at each
/// boundary leaves the embedded value in `target` unchanged. Exponential in
/// the chain arity, so this runs on small inputs in tests; the top boundary
/// is checked on every operator build by descend.
pub fn check_formula_balanced(
    source: &TensorChain,
    target: &TensorChain,
    f: &dyn Fn(&[usize]) -> FormalSum,
    context: &str,
) -> Result<()> {
    let dims: Vec<usize> = source.factors.iter().map(|b| b.dim).collect();
    let n = dims.len();
    let mut tuple = vec![0usize; n];
    loop {
        for boundary in 0..n.saturating_sub(1) {
            let left = &source.factors[boundary];
            let right = &source.factors[boundary + 1];
            for r in 0..source.overs[boundary].dim {
                // slots with x.r in position `boundary`
                let xr = left.right_act[r].col(tuple[boundary]).clone();
                let ry = right.left_act[r].col(tuple[boundary + 1]).clone();
                let mut slots_a: Vec<SparseVec> =
                    tuple.iter().map(|&i| sv_unit(i)).collect();
                slots_a[boundary] = xr;
                let mut slots_b: Vec<SparseVec> =
                    tuple.iter().map(|&i| sv_unit(i)).collect();
                slots_b[boundary + 1] = ry;
                let refs_a: Vec<&SparseVec> = slots_a.iter().collect();
                let refs_b: Vec<&SparseVec> = slots_b.iter().collect();
                let va = target.embed_sum(&eval_formula(f, &refs_a));
                let vb = target.embed_sum(&eval_formula(f, &refs_b));
                if va != vb {
                    return Err(Error::NotWellDefined {
                        relation: boundary,
                        context: format!("{context}: boundary {boundary}, base element {r}"),
                    });
                }
            }
        }
        // advance the tuple odometer
        let mut k = 0;
        loop {
            if k == n {
                return Ok(());
            }
            tuple[k] += 1;
            if tuple[k] < dims[k] {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enveloping, matrix_algebra, opposite, tensor_elem, Algebra};
    use crate::linalg::{rank, sc, DEFAULT_SIZE_LIMIT};

    fn dual() -> Arc<Algebra> {
        Arc::new(Algebra::dual_numbers())
    }

    #[test]
    fn tensor_over_self_collapses() {
        let r = dual();
        let reg = Bimodule::regular(&r);
        let t = balanced_tensor(
            &reg,
            &reg,
            &r,
            ActionSide::Stored,
            ActionSide::Stored,
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        assert_eq!(t.dim(), r.dim);
        // v -> 1 tensor v intertwines the outer right action and is square,
        // so the quotient is the regular bimodule again
        let mut phi = Matrix::zero(t.dim(), r.dim);
        for j in 0..r.dim {
            phi.set_col(j, t.pure_tensor(r.unit(), &sv_unit(j)));
        }
        assert_eq!(rank(&phi), r.dim);
        for a in 0..r.dim {
            let lhs = phi.mul(&r.right_mul_matrix(&sv_unit(a)));
            let rhs = t.module.right_act[a].mul(&phi);
            assert_eq!(lhs, rhs);
        }
    }

    /// The two commuting module structures on an enveloping algebra through
    /// its two embeddings, with both actions on the same chosen side.
    fn env_views(r: &Arc<Algebra>) -> (Arc<Algebra>, Bimodule, Bimodule) {
        let u = Arc::new(enveloping(r));
        let rop = Arc::new(opposite(r));
        let s_emb = |k: usize| tensor_elem(r.dim, &sv_unit(k), r.unit());
        let t_emb = |k: usize| tensor_elem(r.dim, r.unit(), &sv_unit(k));
        // right multiplication by the two embeddings: a left/right pair
        // over the opposite base
        let cat = Bimodule::new(
            rop.clone(),
            rop.clone(),
            u.dim,
            (0..r.dim).map(|k| u.right_mul_matrix(&s_emb(k))).collect(),
            (0..r.dim).map(|k| u.right_mul_matrix(&t_emb(k))).collect(),
            "right multiplications through both embeddings",
        )
        .unwrap();
        // left multiplication by the two embeddings, roles swapped
        let beta_right = Bimodule::new(
            rop.clone(),
            rop.clone(),
            u.dim,
            (0..r.dim).map(|k| u.left_mul_matrix(&t_emb(k))).collect(),
            (0..r.dim).map(|k| u.left_mul_matrix(&s_emb(k))).collect(),
            "left multiplications through both embeddings",
        )
        .unwrap();
        (rop, cat, beta_right)
    }

    #[test]
    fn translation_square_dimension() {
        let r = dual();
        let (rop, cat, beta_right) = env_views(&r);
        let t = balanced_tensor(
            &cat,
            &beta_right,
            &rop,
            ActionSide::Stored,
            ActionSide::Stored,
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        assert_eq!(t.left_dim * t.right_dim, 16);
        assert_eq!(t.dim(), 8);
        // balance holds exactly on every pure pair
        for r_idx in 0..rop.dim {
            for i in 0..cat.dim {
                for j in 0..beta_right.dim {
                    let xr = cat.right_act[r_idx].col(i);
                    let ry = beta_right.left_act[r_idx].col(j);
                    assert_eq!(
                        t.pure_tensor(xr, &sv_unit(j)),
                        t.pure_tensor(&sv_unit(i), ry)
                    );
                }
            }
        }
    }

    #[test]
    fn action_mismatch_detected() {
        let r = dual();
        let q = Arc::new(Algebra::rationals());
        let reg = Bimodule::regular(&r);
        let err = balanced_tensor(
            &reg,
            &reg,
            &q,
            ActionSide::Stored,
            ActionSide::Stored,
            DEFAULT_SIZE_LIMIT,
        );
        assert!(matches!(err, Err(Error::ActionMismatch { .. })));
    }

    #[test]
    fn flip_is_an_involution_on_structure() {
        let r = dual();
        let reg = Bimodule::regular(&r);
        let ff = flip(&flip(&reg));
        assert_eq!(ff.left_act, reg.left_act);
        assert_eq!(ff.right_act, reg.right_act);
        assert!(ff.left_alg.same_structure(&reg.left_alg));
    }

    #[test]
    fn association_order_does_not_change_dimension() {
        let s = Arc::new(matrix_algebra(&Arc::new(Algebra::rationals()), 2));
        let reg = Bimodule::regular(&s);
        // left-associated triple over S
        let left = iterated_tensor(
            &[&reg, &reg, &reg],
            &s,
            &[
                (ActionSide::Stored, ActionSide::Stored),
                (ActionSide::Stored, ActionSide::Stored),
            ],
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        // right-associated: B tensor C first, then A tensor (BC)
        let bc = balanced_tensor(
            &reg,
            &reg,
            &s,
            ActionSide::Stored,
            ActionSide::Stored,
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        let a_bc = balanced_tensor(
            &reg,
            &bc.module,
            &s,
            ActionSide::Stored,
            ActionSide::Stored,
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        assert_eq!(left.dim(), a_bc.dim());
        assert_eq!(left.dim(), s.dim);
    }

    #[test]
    fn chain_tuples_round_trip() {
        let r = dual();
        let (rop, cat, beta_right) = env_views(&r);
        let chain = iterated_tensor(
            &[&cat, &beta_right],
            &rop,
            &[(ActionSide::Stored, ActionSide::Stored)],
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        for q in 0..chain.dim() {
            let t = chain.tuple_of_basis(q);
            assert_eq!(chain.embed_tuple(&t), sv_unit(q));
        }
    }

    #[test]
    fn formula_machinery_identity() {
        let r = dual();
        let reg = Bimodule::regular(&r);
        let chain = iterated_tensor(
            &[&reg, &reg],
            &r,
            &[(ActionSide::Stored, ActionSide::Stored)],
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        let id_formula = |t: &[usize]| FormalSum::term(t.to_vec(), sc(1));
        check_formula_balanced(&chain, &chain, &id_formula, "identity").unwrap();
        let m = chain.operator_to(&chain, &id_formula, "identity").unwrap();
        assert_eq!(m, Matrix::identity(chain.dim()));
        // multiplication into a single factor is balanced over R and equals
        // the collapse isomorphism
        let mul_chain = single_chain(&reg);
        let r2 = r.clone();
        let mul_formula = move |t: &[usize]| {
            FormalSum(
                r2.mul_basis(t[0], t[1])
                    .iter()
                    .map(|(k, c)| (vec![*k], c.clone()))
                    .collect(),
            )
        };
        check_formula_balanced(&chain, &mul_chain, &mul_formula, "multiplication").unwrap();
        let m = chain
            .operator_to(&mul_chain, &mul_formula, "multiplication")
            .unwrap();
        assert_eq!(rank(&m), r.dim);
    }
}

#[cfg(test)]
mod chain_dims {
    use super::*;
    use crate::algebra::{matrix_algebra, opposite, Algebra};
    use crate::linalg::DEFAULT_SIZE_LIMIT;
    use std::sync::Arc;

    /// Four copies of the 2x2 matrix algebra, balanced opposite-style
    /// through left and right multiplication. Each pairwise quotient
    /// collapses to dimension 4; the relation rank at the first step is
    /// cross-checked against the independent dense elimination.
    #[test]
    fn matrix_chain_collapses_stepwise() {
        let s = Arc::new(matrix_algebra(&Arc::new(Algebra::rationals()), 2));
        let sop = Arc::new(opposite(&s));
        let reg = Bimodule::regular(&s);
        let chain = iterated_tensor(
            &[&reg, &reg, &reg, &reg],
            &sop,
            &[
                (ActionSide::Flipped, ActionSide::Flipped),
                (ActionSide::Stored, ActionSide::Flipped),
                (ActionSide::Stored, ActionSide::Flipped),
            ],
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        let dims: Vec<usize> = chain.steps.iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![4, 4, 4]);

        // dense cross-check of the first-step relation rank: ambient 16,
        // relations (x.r) tensor y - x tensor (r.y) with both sides flipped
        let f = flip(&reg);
        let mut dense: Vec<Vec<Scalar>> = Vec::new();
        for r in 0..sop.dim {
            for i in 0..f.dim {
                for j in 0..f.dim {
                    let mut row = vec![Scalar::zero(); 16];
                    for (k, c) in f.right_act[r].col(i) {
                        row[k * 4 + j] += c.clone();
                    }
                    for (l, c) in f.left_act[r].col(j) {
                        row[i * 4 + l] -= c.clone();
                    }
                    dense.push(row);
                }
            }
        }
        assert_eq!(crate::oracle::dense_rank(dense), 12);
        assert_eq!(chain.steps[0].space.quotient_dim, 16 - 12);
    }
}
