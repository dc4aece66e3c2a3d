//! Coefficients over a left Hopf algebroid: right modules over the total
//! algebra carrying a left comodule structure over the base, the stability
//! conditions that make them cyclic coefficients, and Morita base change of
//! the algebroid together with its coefficients.

use crate::algebra::{enveloping, Algebra, AlgebraMap};
use crate::bimodule::{
    iterated_tensor_over, left_kron, right_kron, ActionSide, BalancedTensor, Bimodule, FormalSum,
    TensorChain,
};
use crate::hopfalgebroid::{
    first_col_mismatch, legs_from, record, translation_from_beta, vec_mismatch, Legs,
    LeftBialgebroid, LeftHopfAlgebroid,
};
use crate::linalg::{descend, fmt_sparse, rank, sv_canon, sv_unit, Matrix, Scalar, SparseVec};
use crate::morita::{enveloping_context, MoritaContext};
use crate::report::Report;
use crate::{Error, Result};
use std::sync::Arc;

/// A coefficient for the (co)cyclic complexes of a left Hopf algebroid: a
/// right module over the total algebra that also carries a left comodule
/// structure (a left base action plus a coaction into the balanced square).
/// Construction validates the module laws and the bimodule views; the
/// comodule axioms and the stability conditions are reported by
/// `check_sayd` so that broken examples can be inspected instead of
/// rejected.
#[derive(Debug, Clone)]
pub struct Coefficient {
    pub hopf: Arc<LeftHopfAlgebroid>,
    pub dim: usize,
    /// right_action[u] is the matrix of m -> m e_u over the total algebra.
    pub right_action: Vec<Matrix>,
    /// left_base[r] is the comodule-side left base action r . m.
    pub left_base: Vec<Matrix>,
    /// bract[r]: m -> m s(r), the module-side right base action.
    pub bract: Vec<Matrix>,
    /// blact[r]: m -> m t(r), the module-side left base action.
    pub blact: Vec<Matrix>,
    /// The coefficient as a bimodule with both actions through the module
    /// structure, in the opposite-base order used by chain spaces.
    pub module_view: Bimodule,
    /// The coefficient as a bimodule with the comodule left action and the
    /// module right action, used by the coaction target and cochain spaces.
    pub comodule_view: Bimodule,
    /// The coaction target: total algebra tensor coefficient over the base,
    /// balanced between the target-left action and the left base action.
    pub square: BalancedTensor,
    /// Coaction in quotient coordinates of `square`.
    pub coaction: Matrix,
    /// Canonical legs (total index, coefficient index, coeff) per basis.
    pub coaction_legs: Legs,
}

impl Coefficient {
    pub fn new(
        hopf: &Arc<LeftHopfAlgebroid>,
        dim: usize,
        right_action: Vec<Matrix>,
        left_base: Vec<Matrix>,
        coaction_ambient: &Matrix,
        size_limit: usize,
    ) -> Result<Self> {
        let b = &hopf.bialgebroid;
        let du = b.total.dim;
        let dr = b.base.dim;
        if right_action.len() != du || left_base.len() != dr {
            return Err(Error::NotAction {
                context: "coefficient action family sizes do not match the algebroid".into(),
            });
        }
        for m in right_action.iter().chain(left_base.iter()) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::NotAction {
                    context: format!("coefficient action matrix shape is not {dim}x{dim}"),
                });
            }
        }
        let id = Matrix::identity(dim);
        let mut unit_act = Matrix::zero(dim, dim);
        for (k, c) in b.total.unit() {
            unit_act = unit_act.add(&right_action[*k].scale(c));
        }
        if unit_act != id {
            return Err(Error::NotAction {
                context: "coefficient right action of the unit is not the identity".into(),
            });
        }
        for i in 0..du {
            for j in 0..du {
                // m . (e_i e_j) = (m . e_i) . e_j, so matrices compose in reverse
                let composed = right_action[j].mul(&right_action[i]);
                let mut direct = Matrix::zero(dim, dim);
                for (k, c) in b.total.mul_basis(i, j) {
                    direct = direct.add(&right_action[*k].scale(c));
                }
                if composed != direct {
                    return Err(Error::NotAction {
                        context: format!(
                            "coefficient right action breaks at ({}, {})",
                            b.total.label(i),
                            b.total.label(j)
                        ),
                    });
                }
            }
        }
        let act_of = |v: &SparseVec| -> Matrix {
            let mut acc = Matrix::zero(dim, dim);
            for (k, c) in v {
                acc = acc.add(&right_action[*k].scale(c));
            }
            acc
        };
        let bract: Vec<Matrix> = (0..dr).map(|r| act_of(b.s_map.col(r))).collect();
        let blact: Vec<Matrix> = (0..dr).map(|r| act_of(b.t_map.col(r))).collect();
        let module_view = Bimodule::new(
            b.base_op.clone(),
            b.base_op.clone(),
            dim,
            bract.clone(),
            blact.clone(),
            "coefficient with both base actions through the module structure",
        )?;
        let comodule_view = Bimodule::new(
            b.base.clone(),
            b.base.clone(),
            dim,
            left_base.clone(),
            bract.clone(),
            "coefficient with the comodule left action and the source right action",
        )?;
        let square = crate::bimodule::balanced_tensor(
            &b.delta_view(),
            &comodule_view,
            &b.base,
            ActionSide::Stored,
            ActionSide::Stored,
            size_limit,
        )?;
        assert_eq!(coaction_ambient.rows(), du * dim);
        assert_eq!(coaction_ambient.cols(), dim);
        let coaction = square.space.projection.mul(coaction_ambient);
        let coaction_legs = legs_from(&square, &coaction);
        Ok(Coefficient {
            hopf: hopf.clone(),
            dim,
            right_action,
            left_base,
            bract,
            blact,
            module_view,
            comodule_view,
            square,
            coaction,
            coaction_legs,
        })
    }

    /// m . u for coordinate vectors.
    pub fn act(&self, m: &SparseVec, u: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (k, c) in u {
            for (i, ci) in self.right_action[*k].apply(m) {
                acc.push((i, &ci * c));
            }
        }
        sv_canon(acc)
    }

    /// The comodule-side left base action of an element of the base.
    pub fn l_apply(&self, r: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (k, c) in r {
            for (i, ci) in self.left_base[*k].apply(m) {
                acc.push((i, &ci * c));
            }
        }
        sv_canon(acc)
    }

    /// The right base action derived from the coaction and the counit,
    /// m . r = counit(m_pre s(r)) acting on m_post.
    pub fn derived_right_base(&self) -> Vec<Matrix> {
        let b = &self.hopf.bialgebroid;
        (0..b.base.dim)
            .map(|r| {
                let mut out = Matrix::zero(self.dim, self.dim);
                for j in 0..self.dim {
                    let mut acc: SparseVec = Vec::new();
                    for (u, i, c) in &self.coaction_legs[j] {
                        let w = b.total.mul_vec(&sv_unit(*u), b.s_map.col(r));
                        let e = b.counit.apply(&w);
                        for (k, ck) in self.l_apply(&e, &sv_unit(*i)) {
                            acc.push((k, &ck * c));
                        }
                    }
                    out.set_col(j, sv_canon(acc));
                }
                out
            })
            .collect()
    }
}

/// The condition that the comodule left base action is the module action of
/// target embeddings; this alone makes the cyclic operator well defined.
pub fn left_action_matches_targets(c: &Coefficient) -> Option<String> {
    let base = &c.hopf.bialgebroid.base;
    (0..base.dim).find_map(|r| {
        first_col_mismatch(&c.left_base[r], &c.blact[r], &|j| {
            format!("base element {} on basis {j}", base.label(r))
        })
    })
}

/// Verify the comodule axioms and the stability conditions of a
/// coefficient, one report entry per condition.
pub fn check_sayd(c: &Coefficient) -> Report {
    let mut report = Report::new();
    let b = &c.hopf.bialgebroid;
    let du = b.total.dim;
    let dr = b.base.dim;
    let dm = c.dim;
    let grimm = c.derived_right_base();

    record(&mut report, "coaction is counital", {
        (0..dm).find_map(|j| {
            let mut acc: SparseVec = Vec::new();
            for (u, i, cc) in &c.coaction_legs[j] {
                let e = b.counit.apply(&sv_unit(*u));
                for (k, ck) in c.l_apply(&e, &sv_unit(*i)) {
                    acc.push((k, &ck * cc));
                }
            }
            vec_mismatch(format!("basis {j}"), &sv_canon(acc), &sv_unit(j))
        })
    });

    record(&mut report, "coaction is coassociative", {
        let dv = b.delta_view();
        match iterated_tensor_over(
            &[&dv, &dv, &c.comodule_view],
            &[&b.base, &b.base],
            &[
                (ActionSide::Stored, ActionSide::Stored),
                (ActionSide::Stored, ActionSide::Stored),
            ],
            b.size_limit,
        ) {
            Err(e) => Some(format!("coassociativity chain failed to build: {e}")),
            Ok(chain) => (0..dm).find_map(|j| {
                let mut lhs = FormalSum::zero();
                let mut rhs = FormalSum::zero();
                for (u, i, cc) in &c.coaction_legs[j] {
                    for (p, q, c2) in &b.delta_legs[*u] {
                        lhs.add_term(vec![*p, *q, *i], cc * c2);
                    }
                    for (w, i2, c2) in &c.coaction_legs[*i] {
                        rhs.add_term(vec![*u, *w, *i2], cc * c2);
                    }
                }
                vec_mismatch(
                    format!("basis {j}"),
                    &chain.embed_sum(&lhs),
                    &chain.embed_sum(&rhs),
                )
            }),
        }
    });

    // membership of the coaction image in the comodule Takeuchi subspace:
    // (r |>> leg1) tensor leg2 equals leg1 tensor (leg2 . r)
    record(
        &mut report,
        "coaction lands in the comodule Takeuchi subspace",
        {
            let mut failure = None;
            'outer: for r in 0..dr {
                let diff = left_kron(&b.blact[r], dm).sub(&right_kron(du, &grimm[r]));
                let cond = match descend(
                    &diff,
                    &c.square.space,
                    &c.square.space,
                    "comodule Takeuchi membership condition",
                ) {
                    Ok(m) => m,
                    Err(e) => {
                        failure = Some(format!("condition map does not descend: {e}"));
                        break 'outer;
                    }
                };
                let img = cond.mul(&c.coaction);
                if let Some(j) = (0..dm).find(|&j| !img.col(j).is_empty()) {
                    failure = Some(format!(
                        "basis {j} fails against base element {}: residue {}",
                        b.base.label(r),
                        fmt_sparse(img.col(j))
                    ));
                    break 'outer;
                }
            }
            failure
        },
    );

    record(&mut report, "coaction intertwines the base actions", {
        let mut failure = None;
        'outer: for r in 0..dr {
            for r2 in 0..dr {
                for j in 0..dm {
                    let moved = c.l_apply(&sv_unit(r), &grimm[r2].apply(&sv_unit(j)));
                    let lhs = c.coaction.apply(&moved);
                    let mut rhs: SparseVec = Vec::new();
                    for (u, i, cc) in &c.coaction_legs[j] {
                        let w = b.total.mul_vec(
                            &b.total.mul_vec(b.s_map.col(r), &sv_unit(*u)),
                            b.s_map.col(r2),
                        );
                        for (k, ck) in c.square.pure_tensor(&w, &sv_unit(*i)) {
                            rhs.push((k, &ck * cc));
                        }
                    }
                    if let Some(d) = vec_mismatch(
                        format!(
                            "base pair ({}, {}) at basis {j}",
                            b.base.label(r),
                            b.base.label(r2)
                        ),
                        &lhs,
                        &sv_canon(rhs),
                    ) {
                        failure = Some(d);
                        break 'outer;
                    }
                }
            }
        }
        failure
    });

    record(
        &mut report,
        "left base action agrees with acting by targets",
        left_action_matches_targets(c),
    );

    record(
        &mut report,
        "derived right base action agrees with acting by sources",
        (0..dr).find_map(|r| {
            first_col_mismatch(&grimm[r], &c.bract[r], &|j| {
                format!("base element {} on basis {j}", b.base.label(r))
            })
        }),
    );

    record(&mut report, "coaction is compatible with the action", {
        let mut failure = None;
        'outer: for u in 0..du {
            for j in 0..dm {
                let lhs = c.coaction.apply(&c.right_action[u].apply(&sv_unit(j)));
                let mut rhs: SparseVec = Vec::new();
                for (up, um, c1) in &c.hopf.trans_legs[u] {
                    for (u1, u2, c2) in &b.delta_legs[*up] {
                        for (w, i, c3) in &c.coaction_legs[j] {
                            let uvec =
                                b.total.mul_vec(b.total.mul_basis(*um, *w), &sv_unit(*u1));
                            let mvec = c.right_action[*u2].apply(&sv_unit(*i));
                            let coeff = &(c1 * c2) * c3;
                            for (k, ck) in c.square.pure_tensor(&uvec, &mvec) {
                                rhs.push((k, &ck * &coeff));
                            }
                        }
                    }
                }
                if let Some(d) = vec_mismatch(
                    format!("total element {} at basis {j}", b.total.label(u)),
                    &lhs,
                    &sv_canon(rhs),
                ) {
                    failure = Some(d);
                    break 'outer;
                }
            }
        }
        failure
    });

    record(&mut report, "coefficient is stable", {
        (0..dm).find_map(|j| {
            let mut acc: SparseVec = Vec::new();
            for (u, i, cc) in &c.coaction_legs[j] {
                for (k, ck) in c.right_action[*u].apply(&sv_unit(*i)) {
                    acc.push((k, &ck * cc));
                }
            }
            vec_mismatch(format!("basis {j}"), &sv_canon(acc), &sv_unit(j))
        })
    });

    report
}

/// The base itself as a coefficient over the enveloping algebroid of the
/// base: the action sandwiches, the coaction tensors against the unit.
pub fn canonical_coefficient(h: &Arc<LeftHopfAlgebroid>, size_limit: usize) -> Result<Coefficient> {
    let b = &h.bialgebroid;
    let r = &b.base;
    let dr = r.dim;
    let du = b.total.dim;
    if du != dr * dr
        || !b.total.same_structure(&enveloping(r))
        || b.eta.matrix != Matrix::identity(du)
    {
        return Err(Error::Invalid(
            "the canonical coefficient needs the enveloping algebroid of the base".into(),
        ));
    }
    let mut right_action = Vec::with_capacity(du);
    for a in 0..dr {
        for bb in 0..dr {
            let mut m = Matrix::zero(dr, dr);
            for j in 0..dr {
                m.set_col(j, r.mul_vec(r.mul_basis(bb, j), &sv_unit(a)));
            }
            right_action.push(m);
        }
    }
    let left_base: Vec<Matrix> = (0..dr).map(|k| r.left_mul_matrix(&sv_unit(k))).collect();
    let mut coaction_ambient = Matrix::zero(du * dr, dr);
    for j in 0..dr {
        let u = crate::algebra::tensor_elem(dr, &sv_unit(j), r.unit());
        let mut col: SparseVec = Vec::new();
        for (k, ck) in &u {
            for (l, cl) in r.unit() {
                col.push((k * dr + l, ck * cl));
            }
        }
        coaction_ambient.set_col(j, sv_canon(col));
    }
    Coefficient::new(h, dr, right_action, left_base, &coaction_ambient, size_limit)
}

/// The canonical coefficient with its module structure twisted by an
/// algebra endomorphism of the base. A non-identity twist keeps every
/// module and comodule law intact but breaks stability, so this is the
/// standard deliberate failure for the stability checks.
pub fn twisted_canonical_coefficient(
    h: &Arc<LeftHopfAlgebroid>,
    alpha: &Matrix,
    size_limit: usize,
) -> Result<Coefficient> {
    let good = canonical_coefficient(h, size_limit)?;
    let b = &h.bialgebroid;
    let r = &b.base;
    let dr = r.dim;
    AlgebraMap::new(r.clone(), r.clone(), alpha.clone())?;
    let mut right_action = Vec::with_capacity(b.total.dim);
    for a in 0..dr {
        for bb in 0..dr {
            let im = alpha.apply(&sv_unit(a));
            let mut m = Matrix::zero(dr, dr);
            for j in 0..dr {
                m.set_col(j, r.mul_vec(r.mul_basis(bb, j), &im));
            }
            right_action.push(m);
        }
    }
    let coaction_ambient = good.square.space.section.mul(&good.coaction);
    Coefficient::new(
        h,
        dr,
        right_action,
        good.left_base.clone(),
        &coaction_ambient,
        size_limit,
    )
}

/// A copy of a coefficient with its coaction rescaled, leaving the module
/// structure alone; a deliberate counitality violation for tests.
pub fn with_scaled_coaction(c: &Coefficient, factor: &Scalar, size_limit: usize) -> Result<Coefficient> {
    let ambient = c.square.space.section.mul(&c.coaction).scale(factor);
    Coefficient::new(
        &c.hopf,
        c.dim,
        c.right_action.clone(),
        c.left_base.clone(),
        &ambient,
        size_limit,
    )
}

/// Relations of a three-factor chain expressed on pure basis triples, for
/// checking that formulas defined on representatives are balanced.
fn relation_triples(chain: &TensorChain) -> Vec<Vec<(usize, usize, usize, Scalar)>> {
    assert_eq!(chain.arity(), 3);
    let step0 = &chain.steps[0];
    let step1 = &chain.steps[1];
    let d1 = step0.right_dim;
    let d2 = step1.right_dim;
    let mut out = Vec::new();
    for j in 0..step0.space.relation_basis.cols() {
        let rel = step0.space.relation_basis.col(j);
        for z in 0..d2 {
            out.push(
                rel.iter()
                    .map(|(x, c)| (x / d1, x % d1, z, c.clone()))
                    .collect(),
            );
        }
    }
    for j in 0..step1.space.relation_basis.cols() {
        let rel = step1.space.relation_basis.col(j);
        out.push(
            rel.iter()
                .map(|(x, c)| {
                    let amb = step0.space.non_pivots[x / d2];
                    (amb / d1, amb % d1, x % d2, c.clone())
                })
                .collect(),
        );
    }
    out
}

/// A Morita base change of a left Hopf algebroid: the context from R to S,
/// its enveloping extension, the source algebroid over R, the carrier chain
/// of the new total algebra, and the induced left Hopf algebroid over S.
#[derive(Debug, Clone)]
pub struct BaseChange {
    pub context: MoritaContext,
    pub env: MoritaContext,
    pub source: Arc<LeftHopfAlgebroid>,
    /// First enveloping carrier tensor total algebra tensor second
    /// enveloping carrier, balanced over the enveloping base on both sides.
    pub carrier: TensorChain,
    pub hopf: Arc<LeftHopfAlgebroid>,
}

impl BaseChange {
    /// Decode a carrier basis element into its five tensor positions
    /// (first carrier pair, total element, second carrier pair).
    pub fn decode(&self, t: usize) -> (usize, usize, usize, usize, usize) {
        let v = self.carrier.tuple_of_basis(t);
        let (pd, qd) = (self.context.p.dim, self.context.q.dim);
        (v[0] / qd, v[0] % qd, v[1], v[2] / pd, v[2] % pd)
    }
}

/// Transport a left Hopf algebroid over R across a Morita context to a left
/// Hopf algebroid over S. Every structure map is built from its closed
/// formula on representatives, checked to be balanced against the carrier
/// presentation, and the translation map obtained by inverting the Galois
/// map is required to match its own closed formula.
pub fn base_change_algebroid(
    ctx: &MoritaContext,
    source: &Arc<LeftHopfAlgebroid>,
    size_limit: usize,
) -> Result<BaseChange> {
    let sb = &source.bialgebroid;
    if !sb.base.same_structure(&ctx.r) {
        return Err(Error::Invalid(
            "the context base does not match the algebroid base".into(),
        ));
    }
    let env = enveloping_context(ctx, size_limit)?;
    let du = sb.total.dim;
    let (pd, qd) = (ctx.p.dim, ctx.q.dim);
    let ds = ctx.s.dim;
    let re = env.r.clone();
    let u_view = Bimodule::new(
        re.clone(),
        re.clone(),
        du,
        (0..re.dim)
            .map(|k| sb.total.left_mul_matrix(&sb.eta.apply(&sv_unit(k))))
            .collect(),
        (0..re.dim)
            .map(|k| sb.total.right_mul_matrix(&sb.eta.apply(&sv_unit(k))))
            .collect(),
        "total algebra as a bimodule over the enveloping base",
    )?;
    let carrier = iterated_tensor_over(
        &[&env.p, &u_view, &env.q],
        &[&re, &re],
        &[
            (ActionSide::Stored, ActionSide::Stored),
            (ActionSide::Stored, ActionSide::Stored),
        ],
        size_limit,
    )?;
    let n = carrier.dim();
    let tuples: Vec<(usize, usize, usize)> = (0..n)
        .map(|t| {
            let v = carrier.tuple_of_basis(t);
            (v[0], v[1], v[2])
        })
        .collect();

    // multiplication on pure triples: keep the outer pairs of the outer
    // arguments and contract the inner pairs into the total algebra through
    // the unit of the source algebroid, which lands them on s and t
    let mu_pure = |x: (usize, usize, usize), y: (usize, usize, usize)| -> SparseVec {
        let (pe1, u1, qe1) = x;
        let (pe2, u2, qe2) = y;
        let (c1, d1) = (qe1 / pd, qe1 % pd);
        let (a2, b2) = (pe2 / qd, pe2 % qd);
        let r1 = ctx.psi_pure(c1, a2);
        let r2 = ctx.psi_pure(b2, d1);
        let mid = sb.total.mul_vec(
            &sb.total
                .mul_vec(&sb.total.mul_vec(&sv_unit(u1), &sb.s_of(&r1)), &sb.t_of(&r2)),
            &sv_unit(u2),
        );
        carrier.embed_slots(&[&sv_unit(pe1), &mid, &sv_unit(qe2)])
    };

    let rels = relation_triples(&carrier);
    for (ridx, rel) in rels.iter().enumerate() {
        for t in 0..n {
            let mut left: SparseVec = Vec::new();
            let mut right: SparseVec = Vec::new();
            for (i0, i1, i2, c) in rel {
                for (k, ck) in mu_pure((*i0, *i1, *i2), tuples[t]) {
                    left.push((k, &ck * c));
                }
                for (k, ck) in mu_pure(tuples[t], (*i0, *i1, *i2)) {
                    right.push((k, &ck * c));
                }
            }
            if !sv_canon(left).is_empty() || !sv_canon(right).is_empty() {
                return Err(Error::NotWellDefined {
                    relation: ridx,
                    context: "base changed multiplication".into(),
                });
            }
        }
    }

    let mul: Vec<Vec<SparseVec>> = (0..n)
        .map(|i| (0..n).map(|j| mu_pure(tuples[i], tuples[j])).collect())
        .collect();

    let se = env.s.clone();
    let mut eta_tilde = Matrix::zero(n, se.dim);
    for x in 0..ds {
        for y in 0..ds {
            let mut acc: SparseVec = Vec::new();
            for (pj, qj, cj) in ctx.s_unit_legs() {
                for (pi, qi, ci) in ctx.s_unit_legs() {
                    let sp = ctx.p.left_apply(&sv_unit(x), &sv_unit(*pj));
                    let pe_vec: SparseVec =
                        sp.iter().map(|(pp, cp)| (pp * qd + qi, cp.clone())).collect();
                    let sp2 = ctx.p.left_apply(&sv_unit(y), &sv_unit(*pi));
                    let qe_vec: SparseVec =
                        sp2.iter().map(|(pp, cp)| (qj * pd + pp, cp.clone())).collect();
                    let emb = carrier.embed_slots(&[
                        &sv_canon(pe_vec),
                        sb.total.unit(),
                        &sv_canon(qe_vec),
                    ]);
                    for (k, ck) in emb {
                        acc.push((k, &(&ck * ci) * cj));
                    }
                }
            }
            eta_tilde.set_col(x * ds + y, sv_canon(acc));
        }
    }

    let labels: Vec<String> = tuples
        .iter()
        .map(|(pe, u, qe)| {
            format!(
                "[{}.{}|{}|{}.{}]",
                pe / qd,
                pe % qd,
                sb.total.label(*u),
                qe / pd,
                qe % pd
            )
        })
        .collect();
    let unit_tilde = eta_tilde.apply(se.unit());
    let total_tilde = Arc::new(Algebra::new(n, labels, mul, unit_tilde)?);
    let eta_map = AlgebraMap::new(se.clone(), total_tilde.clone(), eta_tilde)?;

    let mut delta_ambient = Matrix::zero(n * n, n);
    let mut counit_tilde = Matrix::zero(ds, n);
    for t in 0..n {
        let (pe, u, qe) = tuples[t];
        let (a, b) = (pe / qd, pe % qd);
        let (c, d) = (qe / pd, qe % pd);
        let mut acc: SparseVec = Vec::new();
        for (qi, pi, ci) in ctx.r_unit_legs() {
            for (pj, qj, cj) in ctx.s_unit_legs() {
                for (u1, u2, cu) in &sb.delta_legs[u] {
                    let leg1 = carrier.embed_slots(&[
                        &sv_unit(a * qd + qi),
                        &sv_unit(*u1),
                        &sv_unit(c * pd + pj),
                    ]);
                    let leg2 = carrier.embed_slots(&[
                        &sv_unit(pi * qd + b),
                        &sv_unit(*u2),
                        &sv_unit(qj * pd + d),
                    ]);
                    let coeff = &(ci * cj) * cu;
                    for (k1, cc1) in &leg1 {
                        for (k2, cc2) in &leg2 {
                            acc.push((k1 * n + k2, &(cc1 * cc2) * &coeff));
                        }
                    }
                }
            }
        }
        delta_ambient.set_col(t, sv_canon(acc));

        let psi_cd = ctx.psi_pure(c, d);
        let w = sb.total.mul_vec(&sv_unit(u), &sb.s_of(&psi_cd));
        let e = sb.counit.apply(&w);
        let ap = ctx.p.right_apply(&sv_unit(a), &e);
        let mut col: SparseVec = Vec::new();
        for (pp, cp) in &ap {
            for (k, ck) in ctx.phi_pure(*pp, b) {
                col.push((k, &ck * cp));
            }
        }
        counit_tilde.set_col(t, sv_canon(col));
    }

    let bial = LeftBialgebroid::new(
        ctx.s.clone(),
        total_tilde.clone(),
        eta_map,
        &delta_ambient,
        counit_tilde,
        size_limit,
    )?;
    let hopf = translation_from_beta(bial)?;

    // closed form of the translation map on the carrier
    let mut closed = Matrix::zero(hopf.bialgebroid.trans_square.dim(), n);
    for t in 0..n {
        let (pe, u, qe) = tuples[t];
        let (a, b) = (pe / qd, pe % qd);
        let (c, d) = (qe / pd, qe % pd);
        let mut acc: SparseVec = Vec::new();
        for (qi, pi, ci) in ctx.r_unit_legs() {
            for (pj, qj, cj) in ctx.s_unit_legs() {
                for (up, um, cu) in &source.trans_legs[u] {
                    let v1 = carrier.embed_slots(&[
                        &sv_unit(a * qd + qj),
                        &sv_unit(*up),
                        &sv_unit(c * pd + pi),
                    ]);
                    let v2 = carrier.embed_slots(&[
                        &sv_unit(d * qd + qi),
                        &sv_unit(*um),
                        &sv_unit(b * pd + pj),
                    ]);
                    let coeff = &(ci * cj) * cu;
                    for (k, ck) in hopf.bialgebroid.trans_square.pure_tensor(&v1, &v2) {
                        acc.push((k, &ck * &coeff));
                    }
                }
            }
        }
        closed.set_col(t, sv_canon(acc));
    }
    if closed != hopf.translation {
        return Err(Error::Invalid(
            "base changed translation does not match its closed form".into(),
        ));
    }

    Ok(BaseChange {
        context: ctx.clone(),
        env,
        source: source.clone(),
        carrier,
        hopf: Arc::new(hopf),
    })
}

/// When the source total algebra is the enveloping algebra of its base, the
/// base changed total algebra is canonically the enveloping algebra of the
/// new base; build that isomorphism and validate it as an algebra map.
pub fn enveloping_total_iso(bc: &BaseChange) -> Result<AlgebraMap> {
    let ctx = &bc.context;
    let sb = &bc.source.bialgebroid;
    let dr = sb.base.dim;
    let ds = ctx.s.dim;
    let n = bc.hopf.bialgebroid.total.dim;
    if !sb.total.same_structure(&enveloping(&sb.base)) || sb.eta.matrix != Matrix::identity(dr * dr)
    {
        return Err(Error::Invalid(
            "the source total algebra is not the enveloping algebra of its base".into(),
        ));
    }
    if n != ds * ds {
        return Err(Error::NotIso {
            context: "base changed total algebra has the wrong dimension".into(),
        });
    }
    let mut iso = Matrix::zero(ds * ds, n);
    for t in 0..n {
        let (a, b, u, c, d) = bc.decode(t);
        let (rr, rb) = (u / dr, u % dr);
        let rc = ctx.q.left_apply(&sv_unit(rr), &sv_unit(c));
        let mut x_vec: SparseVec = Vec::new();
        for (qq, cq) in &rc {
            for (k, ck) in ctx.phi_pure(a, *qq) {
                x_vec.push((k, &ck * cq));
            }
        }
        let dr_vec = ctx.p.right_apply(&sv_unit(d), &sv_unit(rb));
        let mut y_vec: SparseVec = Vec::new();
        for (pp, cp) in &dr_vec {
            for (k, ck) in ctx.phi_pure(*pp, b) {
                y_vec.push((k, &ck * cp));
            }
        }
        let xv = sv_canon(x_vec);
        let yv = sv_canon(y_vec);
        let mut col: SparseVec = Vec::new();
        for (x, cx) in &xv {
            for (y, cy) in &yv {
                col.push((x * ds + y, cx * cy));
            }
        }
        iso.set_col(t, sv_canon(col));
    }
    if rank(&iso) != n {
        return Err(Error::NotIso {
            context: "base changed total algebra map to the enveloping algebra is singular".into(),
        });
    }
    AlgebraMap::new(
        bc.hopf.bialgebroid.total.clone(),
        bc.env.s.clone(),
        iso,
    )
}

/// A base changed coefficient together with the carrier chain it lives on.
#[derive(Debug, Clone)]
pub struct ChangedCoefficient {
    /// First carrier tensor coefficient tensor second carrier over the base.
    pub chain: TensorChain,
    pub coefficient: Coefficient,
}

/// Transport a coefficient across a Morita base change: the carrier is the
/// two-sided tensor with the context bimodules, the action sandwiches
/// through the inner products, and the coaction distributes the dual
/// families over both factors.
pub fn base_change_coefficient(
    bc: &BaseChange,
    coeff: &Coefficient,
    size_limit: usize,
) -> Result<ChangedCoefficient> {
    let ctx = &bc.context;
    let sb = &bc.source.bialgebroid;
    if !coeff.hopf.bialgebroid.total.same_structure(&sb.total) {
        return Err(Error::Invalid(
            "the coefficient does not live over the source algebroid".into(),
        ));
    }
    let (pd, qd) = (ctx.p.dim, ctx.q.dim);
    let ds = ctx.s.dim;
    let m_salz = Bimodule::new(
        sb.base.clone(),
        sb.base.clone(),
        coeff.dim,
        coeff.blact.clone(),
        coeff.bract.clone(),
        "coefficient in its module base actions",
    )?;
    let chain = iterated_tensor_over(
        &[&ctx.p, &m_salz, &ctx.q],
        &[&sb.base, &sb.base],
        &[
            (ActionSide::Stored, ActionSide::Stored),
            (ActionSide::Stored, ActionSide::Stored),
        ],
        size_limit,
    )?;
    let dm = chain.dim();
    let mtuples: Vec<(usize, usize, usize)> = (0..dm)
        .map(|t| {
            let v = chain.tuple_of_basis(t);
            (v[0], v[1], v[2])
        })
        .collect();
    let n = bc.hopf.bialgebroid.total.dim;
    let utuples: Vec<(usize, usize, usize)> = (0..n)
        .map(|t| {
            let v = bc.carrier.tuple_of_basis(t);
            (v[0], v[1], v[2])
        })
        .collect();

    let act_pure = |m: (usize, usize, usize), x: (usize, usize, usize)| -> SparseVec {
        let (p, mm, q) = m;
        let (pe, u, qe) = x;
        let (a, b) = (pe / qd, pe % qd);
        let (c, d) = (qe / pd, qe % pd);
        let r1 = ctx.psi_pure(b, p);
        let r2 = ctx.psi_pure(q, a);
        let v = coeff.act(&sv_unit(mm), &sb.s_of(&r2));
        let v = coeff.act(&v, &sb.t_of(&r1));
        let v = coeff.act(&v, &sv_unit(u));
        chain.embed_slots(&[&sv_unit(d), &v, &sv_unit(c)])
    };

    for (ridx, rel) in relation_triples(&bc.carrier).iter().enumerate() {
        for t in 0..dm {
            let mut acc: SparseVec = Vec::new();
            for (i0, i1, i2, c) in rel {
                for (k, ck) in act_pure(mtuples[t], (*i0, *i1, *i2)) {
                    acc.push((k, &ck * c));
                }
            }
            if !sv_canon(acc).is_empty() {
                return Err(Error::NotWellDefined {
                    relation: ridx,
                    context: "base changed action against the total presentation".into(),
                });
            }
        }
    }
    for (ridx, rel) in relation_triples(&chain).iter().enumerate() {
        for t in 0..n {
            let mut acc: SparseVec = Vec::new();
            for (i0, i1, i2, c) in rel {
                for (k, ck) in act_pure((*i0, *i1, *i2), utuples[t]) {
                    acc.push((k, &ck * c));
                }
            }
            if !sv_canon(acc).is_empty() {
                return Err(Error::NotWellDefined {
                    relation: ridx,
                    context: "base changed action against the coefficient presentation".into(),
                });
            }
        }
    }

    let right_action: Vec<Matrix> = (0..n)
        .map(|tu| {
            let mut m = Matrix::zero(dm, dm);
            for (mt, mtuple) in mtuples.iter().enumerate() {
                m.set_col(mt, act_pure(*mtuple, utuples[tu]));
            }
            m
        })
        .collect();

    let left_base: Vec<Matrix> = (0..ds)
        .map(|s| {
            let mut m = Matrix::zero(dm, dm);
            for (mt, (p, mm, q)) in mtuples.iter().enumerate() {
                let sp = ctx.p.left_apply(&sv_unit(s), &sv_unit(*p));
                m.set_col(mt, chain.embed_slots(&[&sp, &sv_unit(*mm), &sv_unit(*q)]));
            }
            m
        })
        .collect();

    let mut coaction_ambient = Matrix::zero(n * dm, dm);
    for (mt, (p, mm, q)) in mtuples.iter().enumerate() {
        let mut acc: SparseVec = Vec::new();
        for (qi, pi, ci) in ctx.r_unit_legs() {
            for (pj, qj, cj) in ctx.s_unit_legs() {
                for (w, m0, cw) in &coeff.coaction_legs[*mm] {
                    let uleg = bc.carrier.embed_slots(&[
                        &sv_unit(p * qd + qi),
                        &sv_unit(*w),
                        &sv_unit(q * pd + pj),
                    ]);
                    let mleg =
                        chain.embed_slots(&[&sv_unit(*pi), &sv_unit(*m0), &sv_unit(*qj)]);
                    let coeff_c = &(ci * cj) * cw;
                    for (k1, c1) in &uleg {
                        for (k2, c2) in &mleg {
                            acc.push((k1 * dm + k2, &(c1 * c2) * &coeff_c));
                        }
                    }
                }
            }
        }
        coaction_ambient.set_col(mt, sv_canon(acc));
    }

    let coefficient = Coefficient::new(
        &bc.hopf,
        dm,
        right_action,
        left_base,
        &coaction_ambient,
        size_limit,
    )?;
    Ok(ChangedCoefficient { chain, coefficient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, Algebra};
    use crate::hopfalgebroid::{check_left_hopf, enveloping_hopf_algebroid};
    use crate::linalg::{sc, DEFAULT_SIZE_LIMIT};
    use crate::morita::{identity_context, matrix_context};

    fn env(alg: Algebra) -> Arc<LeftHopfAlgebroid> {
        Arc::new(enveloping_hopf_algebroid(&Arc::new(alg), DEFAULT_SIZE_LIMIT).unwrap())
    }

    fn item_passes(report: &Report, name: &str) -> bool {
        report
            .items
            .iter()
            .find(|i| i.name == name)
            .map(|i| i.pass)
            .unwrap_or_else(|| panic!("missing report item {name}"))
    }

    #[test]
    fn canonical_coefficient_over_the_field_is_stable() {
        let h = env(Algebra::rationals());
        let c = canonical_coefficient(&h, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(c.dim, 1);
        let report = check_sayd(&c);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn canonical_coefficient_over_dual_numbers_is_stable() {
        let h = env(Algebra::dual_numbers());
        let c = canonical_coefficient(&h, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(c.dim, 2);
        for legs in &c.coaction_legs {
            assert_eq!(legs.len(), 1);
        }
        let report = check_sayd(&c);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn scaled_coaction_breaks_counitality_and_stability() {
        let h = env(Algebra::dual_numbers());
        let c = canonical_coefficient(&h, DEFAULT_SIZE_LIMIT).unwrap();
        let bad = with_scaled_coaction(&c, &sc(2), DEFAULT_SIZE_LIMIT).unwrap();
        let report = check_sayd(&bad);
        assert!(!item_passes(&report, "coaction is counital"));
        assert!(!item_passes(&report, "coefficient is stable"));
        assert!(item_passes(&report, "left base action agrees with acting by targets"));
    }

    #[test]
    fn twisted_module_breaks_stability_but_not_the_left_action() {
        let h = env(Algebra::dual_numbers());
        let alpha = Matrix::from_rows_i64(&[&[1, 0], &[0, 2]]);
        let c = twisted_canonical_coefficient(&h, &alpha, DEFAULT_SIZE_LIMIT).unwrap();
        let report = check_sayd(&c);
        assert!(item_passes(&report, "left base action agrees with acting by targets"));
        assert!(!item_passes(&report, "derived right base action agrees with acting by sources"));
        assert!(!item_passes(&report, "coefficient is stable"));
    }

    #[test]
    fn identity_base_change_keeps_the_axioms() {
        let r = Arc::new(Algebra::dual_numbers());
        let h = env(Algebra::dual_numbers());
        let ctx = identity_context(&r, DEFAULT_SIZE_LIMIT).unwrap();
        let bc = base_change_algebroid(&ctx, &h, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(bc.hopf.bialgebroid.total.dim, 4);
        let report = check_left_hopf(&bc.hopf);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn matrix_base_change_over_the_field() {
        let r = Arc::new(Algebra::rationals());
        let h = env(Algebra::rationals());
        let ctx = matrix_context(&r, 2, DEFAULT_SIZE_LIMIT).unwrap();
        let bc = base_change_algebroid(&ctx, &h, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(bc.hopf.bialgebroid.total.dim, 16);
        let report = check_left_hopf(&bc.hopf);
        assert!(report.all_pass(), "{report}");
        let iso = enveloping_total_iso(&bc).unwrap();
        assert!(iso.target.same_structure(&enveloping(&Arc::new(matrix_algebra(
            &Algebra::rationals(),
            2
        )))));
    }

    #[test]
    fn matrix_base_change_coefficient_is_stable() {
        let r = Arc::new(Algebra::rationals());
        let h = env(Algebra::rationals());
        let ctx = matrix_context(&r, 2, DEFAULT_SIZE_LIMIT).unwrap();
        let bc = base_change_algebroid(&ctx, &h, DEFAULT_SIZE_LIMIT).unwrap();
        let c = canonical_coefficient(&h, DEFAULT_SIZE_LIMIT).unwrap();
        let cc = base_change_coefficient(&bc, &c, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(cc.coefficient.dim, 4);
        let report = check_sayd(&cc.coefficient);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn stability_violation_survives_base_change() {
        let r = Arc::new(Algebra::dual_numbers());
        let h = env(Algebra::dual_numbers());
        let ctx = identity_context(&r, DEFAULT_SIZE_LIMIT).unwrap();
        let bc = base_change_algebroid(&ctx, &h, DEFAULT_SIZE_LIMIT).unwrap();
        let alpha = Matrix::from_rows_i64(&[&[1, 0], &[0, 2]]);
        let bad = twisted_canonical_coefficient(&h, &alpha, DEFAULT_SIZE_LIMIT).unwrap();
        assert!(!item_passes(&check_sayd(&bad), "coefficient is stable"));
        let moved = base_change_coefficient(&bc, &bad, DEFAULT_SIZE_LIMIT).unwrap();
        assert!(!item_passes(&check_sayd(&moved.coefficient), "coefficient is stable"));
    }
}
