//! Transfer machinery between the (co)cyclic module of a coefficient and
//! the (co)cyclic module of its Morita base change: transfer maps in both
//! directions built from the dual families of the context, an explicit
//! homotopy contracting the round trip on the source side, the closed form
//! of the changed cyclic operator, and the mirrored cochain transfers.

use crate::basechange::{BaseChange, ChangedCoefficient, Coefficient};
use crate::bimodule::FormalSum;
use crate::cyclic::{
    boundary, coboundary, slots_sum, ParaCocyclicModule, ParaCyclicModule,
};
use crate::hopfalgebroid::{first_col_mismatch, record};
use crate::linalg::{sc, sv_unit, Matrix, Scalar, SparseVec};
use crate::report::Report;
use crate::{Error, Result};

/// Run `f` once per tuple of digits below the given radices, lowest digit
/// first; an empty radix list yields exactly one empty tuple.
pub(crate) fn odometer(radices: &[usize], mut f: impl FnMut(&[usize])) {
    if radices.iter().any(|&r| r == 0) {
        return;
    }
    let mut digits = vec![0usize; radices.len()];
    loop {
        f(&digits);
        let mut k = 0;
        loop {
            if k == digits.len() {
                return;
            }
            digits[k] += 1;
            if digits[k] < radices[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Everything the transfer formulas consume: the base change, the source
/// coefficient, the changed coefficient with its carrier chain, and the two
/// dual families of the Morita context.
struct Transfer<'a> {
    bc: &'a BaseChange,
    coeff: &'a Coefficient,
    changed: &'a ChangedCoefficient,
}

impl<'a> Transfer<'a> {
    /// The family splitting the unit of R, legs (q index, p index, scalar).
    fn unprimed(&self) -> &'a [(usize, usize, Scalar)] {
        self.bc.context.r_unit_legs()
    }

    /// The family splitting the unit of S, legs (p index, q index, scalar).
    fn primed(&self) -> &'a [(usize, usize, Scalar)] {
        self.bc.context.s_unit_legs()
    }

    /// The inner product landing in R on a pure basis pair.
    fn psi(&self, q: usize, p: usize) -> SparseVec {
        self.bc.context.psi_pure(q, p)
    }

    /// Components (p, m, q) of a basis element of the changed coefficient.
    fn m_parts(&self, t: usize) -> (usize, usize, usize) {
        let v = self.changed.chain.tuple_of_basis(t);
        (v[0], v[1], v[2])
    }

    /// Changed-coefficient coordinates of a pure p tensor m tensor q slot.
    fn embed_m(&self, p: &SparseVec, m: &SparseVec, q: &SparseVec) -> SparseVec {
        self.changed.chain.embed_slots(&[p, m, q])
    }

    /// Changed total algebra coordinates of a framed total element.
    fn embed_u(&self, pe: usize, u: &SparseVec, qe: usize) -> SparseVec {
        self.bc
            .carrier
            .embed_slots(&[&sv_unit(pe), u, &sv_unit(qe)])
    }

    /// Basis index of the first carrier pair p tensor q-opposite.
    fn pq_pair(&self, p: usize, q: usize) -> usize {
        p * self.bc.context.q.dim + q
    }

    /// Basis index of the second carrier pair q tensor p-opposite.
    fn qp_pair(&self, q: usize, p: usize) -> usize {
        q * self.bc.context.p.dim + p
    }

    /// Scalar product of the chosen legs of one family.
    fn legs_coeff(family: &[(usize, usize, Scalar)], picks: &[usize]) -> Scalar {
        let mut c = sc(1);
        for &d in picks {
            c = &c * &family[d].2;
        }
        c
    }
}

/// Transfer of a chain tuple (m, u1, ..., un) into the base change: the
/// unit of R is split across every tensor boundary, the first legs wrap m,
/// each total factor is framed by carrier pairs, and the last frame closes
/// on a doubled leg.
fn into_formula<'a>(f: &'a Transfer<'a>, n: usize) -> impl Fn(&[usize]) -> FormalSum + 'a {
    move |t: &[usize]| {
        let un = f.unprimed();
        let mut out = FormalSum::zero();
        if n == 0 {
            for (q, p, c) in un {
                out.add_scaled(
                    &slots_sum(&[f.embed_m(&sv_unit(*p), &sv_unit(t[0]), &sv_unit(*q))]),
                    c,
                );
            }
            return out;
        }
        // digits: i_0..i_{n-1} then j_0..j_n, all over the unit legs of R
        odometer(&vec![un.len(); 2 * n + 1], |dg| {
            let i = &dg[..n];
            let j = &dg[n..];
            let coeff = Transfer::legs_coeff(un, dg);
            let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
            slots.push(f.embed_m(
                &sv_unit(un[i[0]].1),
                &sv_unit(t[0]),
                &sv_unit(un[j[0]].0),
            ));
            for k in 1..=n {
                let pe = f.pq_pair(un[j[k - 1]].1, un[i[k - 1]].0);
                let qe = if k < n {
                    f.qp_pair(un[j[k]].0, un[i[k]].1)
                } else {
                    f.qp_pair(un[j[n]].0, un[j[n]].1)
                };
                slots.push(f.embed_u(pe, &sv_unit(t[k]), qe));
            }
            out.add_scaled(&slots_sum(&slots), &coeff);
        });
        out
    }
}

/// Transfer of a changed chain tuple back to the source: every carrier leg
/// is paired through the inner product in R, with the unit of S split
/// across the boundaries by the primed family.
fn back_formula<'a>(f: &'a Transfer<'a>, n: usize) -> impl Fn(&[usize]) -> FormalSum + 'a {
    move |t: &[usize]| {
        let b = &f.coeff.hopf.bialgebroid;
        let pr = f.primed();
        let (p, m, q) = f.m_parts(t[0]);
        let mut out = FormalSum::zero();
        if n == 0 {
            for (pj, qj, c) in pr {
                let v = f.coeff.act(&sv_unit(m), &b.s_of(&f.psi(q, *pj)));
                let v = f.coeff.act(&v, &b.t_of(&f.psi(*qj, p)));
                out.add_scaled(&slots_sum(&[v]), c);
            }
            return out;
        }
        let parts: Vec<(usize, usize, usize, usize, usize)> =
            t[1..].iter().map(|&u| f.bc.decode(u)).collect();
        odometer(&vec![pr.len(); n + 1], |j| {
            let coeff = Transfer::legs_coeff(pr, j);
            let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
            slots.push(f.coeff.act(&sv_unit(m), &b.s_of(&f.psi(q, pr[j[0]].0))));
            for k in 1..=n {
                let (ak, bk, uk, ck, dk) = parts[k - 1];
                let d_prev = if k == 1 { p } else { parts[k - 2].4 };
                let mut w = b.total.mul_vec(
                    &b.s_of(&f.psi(pr[j[k - 1]].1, ak)),
                    &b.t_of(&f.psi(bk, d_prev)),
                );
                w = b.total.mul_vec(&w, &sv_unit(uk));
                w = b.total.mul_vec(&w, &b.s_of(&f.psi(ck, pr[j[k]].0)));
                if k == n {
                    w = b.total.mul_vec(&w, &b.t_of(&f.psi(pr[j[n]].1, dk)));
                }
                slots.push(w);
            }
            out.add_scaled(&slots_sum(&slots), &coeff);
        });
        out
    }
}

/// Homotopy between the transfer round trip and the identity on the source
/// chains: for each cut position both unit splittings interleave along the
/// initial factors, a bare split factor is inserted at the cut, and the
/// tail passes through unchanged.
fn homotopy_formula<'a>(f: &'a Transfer<'a>, n: usize) -> impl Fn(&[usize]) -> FormalSum + 'a {
    move |t: &[usize]| {
        let b = &f.coeff.hopf.bialgebroid;
        let un = f.unprimed();
        let pr = f.primed();
        let m = t[0];
        let us = &t[1..];
        let mut out = FormalSum::zero();
        for k in 0..=n {
            let sign = if (n + k) % 2 == 0 { sc(1) } else { sc(-1) };
            let mut radices = vec![un.len(); k + 1];
            radices.extend(vec![pr.len(); k + 1]);
            odometer(&radices, |dg| {
                let i = &dg[..k + 1];
                let j = &dg[k + 1..];
                let coeff = &(&sign * &Transfer::legs_coeff(un, i))
                    * &Transfer::legs_coeff(pr, j);
                let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 2);
                slots.push(f.coeff.act(
                    &sv_unit(m),
                    &b.s_of(&f.psi(un[i[0]].0, pr[j[0]].0)),
                ));
                for l in 1..=k {
                    let mut w = b.total.mul_vec(
                        &b.s_of(&f.psi(pr[j[l - 1]].1, un[i[l - 1]].1)),
                        &sv_unit(us[l - 1]),
                    );
                    w = b.total.mul_vec(&w, &b.s_of(&f.psi(un[i[l]].0, pr[j[l]].0)));
                    slots.push(w);
                }
                slots.push(b.s_of(&f.psi(pr[j[k]].1, un[i[k]].1)));
                for &u in &us[k..] {
                    slots.push(sv_unit(u));
                }
                out.add_scaled(&slots_sum(&slots), &coeff);
            });
        }
        out
    }
}

/// Closed form of the cyclic operator on the changed chains: the plus legs
/// of the source translation shift left while the carrier frames rotate one
/// slot, and the minus legs collect into the last slot paired through the
/// inner product in R.
fn closed_cyclic_formula<'a>(f: &'a Transfer<'a>, n: usize) -> impl Fn(&[usize]) -> FormalSum + 'a {
    move |t: &[usize]| {
        let b = &f.coeff.hopf.bialgebroid;
        let (p, m, q) = f.m_parts(t[0]);
        let mut out = FormalSum::zero();
        if n == 0 {
            for (pj, qj, cj) in f.primed() {
                for (w, m0, cw) in &f.coeff.coaction_legs[m] {
                    let v = f.coeff.act(&sv_unit(*m0), &b.s_of(&f.psi(*qj, p)));
                    let v = f.coeff.act(&v, &sv_unit(*w));
                    out.add_scaled(
                        &slots_sum(&[f.embed_m(&sv_unit(*pj), &v, &sv_unit(q))]),
                        &(cj * cw),
                    );
                }
            }
            return out;
        }
        let un = f.unprimed();
        let parts: Vec<(usize, usize, usize, usize, usize)> =
            t[1..].iter().map(|&u| f.bc.decode(u)).collect();
        // digits: the coaction leg of m, one translation leg per total
        // factor, then the family picks i_1..i_n
        let trans = &f.coeff.hopf.trans_legs;
        let mut radices = vec![f.coeff.coaction_legs[m].len()];
        for pt in &parts {
            radices.push(trans[pt.2].len());
        }
        radices.extend(vec![un.len(); n]);
        odometer(&radices, |dg| {
            let (w, m0, cw) = &f.coeff.coaction_legs[m][dg[0]];
            let picks: Vec<&(usize, usize, Scalar)> = (0..n)
                .map(|k| &trans[parts[k].2][dg[1 + k]])
                .collect();
            let fam = &dg[1 + n..];
            let mut coeff = &cw.clone() * &Transfer::legs_coeff(un, fam);
            for pk in &picks {
                coeff = &coeff * &pk.2;
            }
            let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
            slots.push(f.embed_m(
                &sv_unit(un[fam[0]].1),
                &f.coeff.act(&sv_unit(*m0), &sv_unit(picks[0].0)),
                &sv_unit(parts[0].3),
            ));
            for k in 1..n {
                let pe = f.pq_pair(parts[k].0, un[fam[k - 1]].0);
                let qe = f.qp_pair(parts[k].3, un[fam[k]].1);
                slots.push(f.embed_u(pe, &sv_unit(picks[k].0), qe));
            }
            let mut acc = sv_unit(*w);
            for k in 1..=n {
                let d_prev = if k == 1 { p } else { parts[k - 2].4 };
                let factor = b.total.mul_vec(
                    &sv_unit(picks[k - 1].1),
                    &b.s_of(&f.psi(parts[k - 1].1, d_prev)),
                );
                acc = b.total.mul_vec(&factor, &acc);
            }
            let pe = f.pq_pair(parts[n - 1].4, un[fam[n - 1]].0);
            let qe = f.qp_pair(q, parts[0].0);
            slots.push(f.embed_u(pe, &acc, qe));
            out.add_scaled(&slots_sum(&slots), &coeff);
        });
        out
    }
}

/// Transfer of a cochain tuple (u1, ..., un, m) into the base change: the
/// frames pair consecutive factors through the primed family on the right
/// legs and the unprimed family on the left legs.
fn cochain_into_formula<'a>(f: &'a Transfer<'a>, n: usize) -> impl Fn(&[usize]) -> FormalSum + 'a {
    move |t: &[usize]| {
        let un = f.unprimed();
        let pr = f.primed();
        let mut out = FormalSum::zero();
        if n == 0 {
            for (pj, qj, c) in pr {
                out.add_scaled(
                    &slots_sum(&[f.embed_m(&sv_unit(*pj), &sv_unit(t[0]), &sv_unit(*qj))]),
                    c,
                );
            }
            return out;
        }
        let us = &t[..n];
        let m = t[n];
        let mut radices = vec![un.len(); n];
        radices.extend(vec![pr.len(); n + 1]);
        odometer(&radices, |dg| {
            let i = &dg[..n];
            let j = &dg[n..];
            let coeff =
                &Transfer::legs_coeff(un, i) * &Transfer::legs_coeff(pr, j);
            let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
            for k in 1..=n {
                let pe = if k == 1 {
                    f.pq_pair(pr[j[0]].0, un[i[0]].0)
                } else {
                    f.pq_pair(un[i[k - 2]].1, un[i[k - 1]].0)
                };
                let qe = f.qp_pair(pr[j[k - 1]].1, pr[j[k]].0);
                slots.push(f.embed_u(pe, &sv_unit(us[k - 1]), qe));
            }
            slots.push(f.embed_m(
                &sv_unit(un[i[n - 1]].1),
                &sv_unit(m),
                &sv_unit(pr[j[n]].1),
            ));
            out.add_scaled(&slots_sum(&slots), &coeff);
        });
        out
    }
}

/// Transfer of a changed cochain tuple back to the source, pairing every
/// carrier leg through the inner product in R with the unprimed family.
fn cochain_back_formula<'a>(f: &'a Transfer<'a>, n: usize) -> impl Fn(&[usize]) -> FormalSum + 'a {
    move |t: &[usize]| {
        let b = &f.coeff.hopf.bialgebroid;
        let un = f.unprimed();
        let mut out = FormalSum::zero();
        if n == 0 {
            let (p, m, q) = f.m_parts(t[0]);
            for (qi, pi, c) in un {
                let v = f.coeff.act(&sv_unit(m), &b.t_of(&f.psi(*qi, p)));
                let v = f.coeff.act(&v, &b.s_of(&f.psi(q, *pi)));
                out.add_scaled(&slots_sum(&[v]), c);
            }
            return out;
        }
        let parts: Vec<(usize, usize, usize, usize, usize)> =
            t[..n].iter().map(|&u| f.bc.decode(u)).collect();
        let (p, m, q) = f.m_parts(t[n]);
        odometer(&vec![un.len(); n + 1], |i| {
            let coeff = Transfer::legs_coeff(un, i);
            let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
            for k in 1..=n {
                let (ak, bk, uk, ck, dk) = parts[k - 1];
                let next = if k < n { parts[k].0 } else { p };
                let mut w = b
                    .total
                    .mul_vec(&b.t_of(&f.psi(bk, next)), &sv_unit(uk));
                if k == 1 {
                    w = b.total.mul_vec(&b.s_of(&f.psi(un[i[0]].0, ak)), &w);
                }
                w = b.total.mul_vec(&w, &b.t_of(&f.psi(un[i[k]].0, dk)));
                w = b.total.mul_vec(&w, &b.s_of(&f.psi(ck, un[i[k - 1]].1)));
                slots.push(w);
            }
            slots.push(f.coeff.act(&sv_unit(m), &b.s_of(&f.psi(q, un[i[n]].1))));
            out.add_scaled(&slots_sum(&slots), &coeff);
        });
        out
    }
}

/// Homotopy between the cochain round trip and the identity: the counit
/// absorbs the factor at the cut, the remaining factors are framed by the
/// two unit splittings, and the leading factors pass through unchanged.
fn cochain_homotopy_formula<'a>(
    f: &'a Transfer<'a>,
    n: usize,
) -> impl Fn(&[usize]) -> FormalSum + 'a {
    // input lives in cochain degree n + 1, tuple (u0, ..., un, m)
    move |t: &[usize]| {
        let b = &f.coeff.hopf.bialgebroid;
        let un = f.unprimed();
        let pr = f.primed();
        let us = &t[..n + 1];
        let m = t[n + 1];
        let mut out = FormalSum::zero();
        for k in 0..=n {
            let sign = if (n + k) % 2 == 0 { sc(1) } else { sc(-1) };
            let mut radices = vec![un.len(); k + 1];
            radices.extend(vec![pr.len(); k + 1]);
            odometer(&radices, |dg| {
                let i = &dg[..k + 1];
                let j = &dg[k + 1..];
                let coeff = &(&sign * &Transfer::legs_coeff(un, i))
                    * &Transfer::legs_coeff(pr, j);
                let eps = b.counit.apply(&b.total.mul_vec(
                    &sv_unit(us[n - k]),
                    &b.t_of(&f.psi(un[i[0]].0, pr[j[0]].0)),
                ));
                let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
                for &u in &us[..n - k] {
                    slots.push(sv_unit(u));
                }
                for l in 1..=k {
                    let mut w = b.total.mul_vec(
                        &sv_unit(us[n - k + l]),
                        &b.t_of(&f.psi(un[i[l]].0, pr[j[l]].0)),
                    );
                    w = b.total.mul_vec(
                        &w,
                        &b.s_of(&f.psi(pr[j[l - 1]].1, un[i[l - 1]].1)),
                    );
                    if l == 1 {
                        w = b.total.mul_vec(&b.s_of(&eps), &w);
                    }
                    slots.push(w);
                }
                let mut v = f.coeff.act(
                    &sv_unit(m),
                    &b.s_of(&f.psi(pr[j[k]].1, un[i[k]].1)),
                );
                if k == 0 {
                    v = f.coeff.l_apply(&eps, &v);
                }
                slots.push(v);
                out.add_scaled(&slots_sum(&slots), &coeff);
            });
        }
        out
    }
}

fn check_shapes(
    bc: &BaseChange,
    changed: &ChangedCoefficient,
    source: &Coefficient,
    target: &Coefficient,
) -> Result<()> {
    let sb = &source.hopf.bialgebroid;
    let tb = &target.hopf.bialgebroid;
    if !sb.total.same_structure(&bc.source.bialgebroid.total) {
        return Err(Error::Invalid(
            "source module does not live over the algebroid being changed".into(),
        ));
    }
    if !tb.total.same_structure(&bc.hopf.bialgebroid.total) {
        return Err(Error::Invalid(
            "target module does not live over the changed algebroid".into(),
        ));
    }
    if changed.chain.dim() != target.dim {
        return Err(Error::Invalid(
            "changed coefficient does not match the target module".into(),
        ));
    }
    Ok(())
}

/// Degreewise comparison data between the cyclic module of a coefficient
/// and the cyclic module of its Morita base change.
#[derive(Debug, Clone)]
pub struct CyclicComparison {
    /// Top degree of the comparison maps.
    pub cap: usize,
    /// into[n] maps degree n source chains into the changed chains.
    pub into: Vec<Matrix>,
    /// back[n] maps degree n changed chains to the source chains.
    pub back: Vec<Matrix>,
    /// homotopy[n] maps source degree n to source degree n + 1.
    pub homotopy: Vec<Matrix>,
    /// closed_cyclic[n] is the changed cyclic operator computed from its
    /// closed transfer formula rather than from the generic construction.
    pub closed_cyclic: Vec<Matrix>,
}

/// Build the chain transfers, homotopy, and closed cyclic operator through
/// degree `cap`. The homotopy raises degree, so the source module must be
/// built one degree beyond the comparison cap.
pub fn cyclic_comparison(
    bc: &BaseChange,
    changed: &ChangedCoefficient,
    source: &ParaCyclicModule,
    target: &ParaCyclicModule,
    cap: usize,
) -> Result<CyclicComparison> {
    if source.cap < cap + 1 || target.cap < cap {
        return Err(Error::Invalid(
            "chain comparison needs one spare source degree above its cap".into(),
        ));
    }
    check_shapes(bc, changed, &source.coefficient, &target.coefficient)?;
    let f = Transfer {
        bc,
        coeff: &source.coefficient,
        changed,
    };
    let mut into = Vec::with_capacity(cap + 1);
    let mut back = Vec::with_capacity(cap + 1);
    let mut homotopy = Vec::with_capacity(cap + 1);
    let mut closed_cyclic = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        into.push(source.chains[n].operator_to(
            &target.chains[n],
            &into_formula(&f, n),
            &format!("transfer into the base change in degree {n}"),
        )?);
        back.push(target.chains[n].operator_to(
            &source.chains[n],
            &back_formula(&f, n),
            &format!("transfer back from the base change in degree {n}"),
        )?);
        homotopy.push(source.chains[n].operator_to(
            &source.chains[n + 1],
            &homotopy_formula(&f, n),
            &format!("round-trip homotopy in degree {n}"),
        )?);
        closed_cyclic.push(target.chains[n].operator_to(
            &target.chains[n],
            &closed_cyclic_formula(&f, n),
            &format!("closed cyclic operator in degree {n}"),
        )?);
    }
    Ok(CyclicComparison {
        cap,
        into,
        back,
        homotopy,
        closed_cyclic,
    })
}

/// Verify the chain transfers are chain maps, the homotopy contracts the
/// round trip on the source, both transfers commute with the cyclic
/// operators, and the closed form of the changed cyclic operator matches
/// the generic one. One report entry per identity family.
pub fn check_cyclic_comparison(
    source: &ParaCyclicModule,
    target: &ParaCyclicModule,
    comp: &CyclicComparison,
) -> Report {
    let cap = comp.cap;
    let mut report = Report::new();
    record(
        &mut report,
        "transfer into the base change is a chain map",
        (1..=cap).find_map(|n| {
            first_col_mismatch(
                &boundary(target, n).mul(&comp.into[n]),
                &comp.into[n - 1].mul(&boundary(source, n)),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "transfer back from the base change is a chain map",
        (1..=cap).find_map(|n| {
            first_col_mismatch(
                &boundary(source, n).mul(&comp.back[n]),
                &comp.back[n - 1].mul(&boundary(target, n)),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "homotopy contracts the transfer round trip",
        (0..=cap).find_map(|n| {
            let round = comp.back[n]
                .mul(&comp.into[n])
                .sub(&Matrix::identity(source.dim(n)));
            let mut lhs = boundary(source, n + 1).mul(&comp.homotopy[n]);
            if n > 0 {
                lhs = lhs.add(&comp.homotopy[n - 1].mul(&boundary(source, n)));
            }
            first_col_mismatch(&lhs, &round, &|col| format!("degree {n} column {col}"))
        }),
    );
    record(
        &mut report,
        "transfer into the base change commutes with the cyclic operators",
        (0..=cap).find_map(|n| {
            first_col_mismatch(
                &comp.into[n].mul(&source.cyclic[n]),
                &target.cyclic[n].mul(&comp.into[n]),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "transfer back commutes with the cyclic operators",
        (0..=cap).find_map(|n| {
            first_col_mismatch(
                &comp.back[n].mul(&target.cyclic[n]),
                &source.cyclic[n].mul(&comp.back[n]),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "closed form of the changed cyclic operator matches the generic one",
        (0..=cap).find_map(|n| {
            first_col_mismatch(&comp.closed_cyclic[n], &target.cyclic[n], &|col| {
                format!("degree {n} column {col}")
            })
        }),
    );
    report
}

/// Degreewise comparison data between the cocyclic module of a coefficient
/// and the cocyclic module of its Morita base change.
#[derive(Debug, Clone)]
pub struct CocyclicComparison {
    /// Top degree at which the homotopy identity is certified; the
    /// transfers themselves reach one degree higher.
    pub cap: usize,
    /// into[n] maps degree n source cochains into the changed cochains.
    pub into: Vec<Matrix>,
    /// back[n] maps degree n changed cochains to the source cochains.
    pub back: Vec<Matrix>,
    /// homotopy[n] maps source cochain degree n + 1 down to degree n.
    pub homotopy: Vec<Matrix>,
}

/// Build the cochain transfers and the degree-lowering homotopy. The
/// transfers are built through degree `cap + 1` so the cochain-map property
/// is checkable through degree `cap`; both modules need that spare degree.
pub fn cocyclic_comparison(
    bc: &BaseChange,
    changed: &ChangedCoefficient,
    source: &ParaCocyclicModule,
    target: &ParaCocyclicModule,
    cap: usize,
) -> Result<CocyclicComparison> {
    if source.cap < cap + 1 || target.cap < cap + 1 {
        return Err(Error::Invalid(
            "cochain comparison needs one spare degree above its cap on both sides".into(),
        ));
    }
    check_shapes(bc, changed, &source.coefficient, &target.coefficient)?;
    let f = Transfer {
        bc,
        coeff: &source.coefficient,
        changed,
    };
    let mut into = Vec::with_capacity(cap + 2);
    let mut back = Vec::with_capacity(cap + 2);
    let mut homotopy = Vec::with_capacity(cap + 1);
    for n in 0..=cap + 1 {
        into.push(source.cochains[n].operator_to(
            &target.cochains[n],
            &cochain_into_formula(&f, n),
            &format!("cochain transfer into the base change in degree {n}"),
        )?);
        back.push(target.cochains[n].operator_to(
            &source.cochains[n],
            &cochain_back_formula(&f, n),
            &format!("cochain transfer back from the base change in degree {n}"),
        )?);
        if n <= cap {
            homotopy.push(source.cochains[n + 1].operator_to(
                &source.cochains[n],
                &cochain_homotopy_formula(&f, n),
                &format!("cochain round-trip homotopy in degree {n}"),
            )?);
        }
    }
    Ok(CocyclicComparison {
        cap,
        into,
        back,
        homotopy,
    })
}

/// Verify the cochain transfers are cochain maps, the homotopy contracts
/// the round trip, and both transfers commute with the cocyclic operators.
pub fn check_cocyclic_comparison(
    source: &ParaCocyclicModule,
    target: &ParaCocyclicModule,
    comp: &CocyclicComparison,
) -> Report {
    let cap = comp.cap;
    let mut report = Report::new();
    record(
        &mut report,
        "cochain transfer into the base change is a cochain map",
        (0..=cap).find_map(|n| {
            first_col_mismatch(
                &comp.into[n + 1].mul(&coboundary(source, n)),
                &coboundary(target, n).mul(&comp.into[n]),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "cochain transfer back from the base change is a cochain map",
        (0..=cap).find_map(|n| {
            first_col_mismatch(
                &comp.back[n + 1].mul(&coboundary(target, n)),
                &coboundary(source, n).mul(&comp.back[n]),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "cochain homotopy contracts the transfer round trip",
        (0..=cap).find_map(|n| {
            let round = comp.back[n]
                .mul(&comp.into[n])
                .sub(&Matrix::identity(source.dim(n)));
            let mut lhs = comp.homotopy[n].mul(&coboundary(source, n));
            if n > 0 {
                lhs = lhs.add(&coboundary(source, n - 1).mul(&comp.homotopy[n - 1]));
            }
            first_col_mismatch(&lhs, &round, &|col| format!("degree {n} column {col}"))
        }),
    );
    record(
        &mut report,
        "cochain transfer into the base change commutes with the cocyclic operators",
        (0..=cap + 1).find_map(|n| {
            first_col_mismatch(
                &comp.into[n].mul(&source.cocyclic[n]),
                &target.cocyclic[n].mul(&comp.into[n]),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    record(
        &mut report,
        "cochain transfer back commutes with the cocyclic operators",
        (0..=cap + 1).find_map(|n| {
            first_col_mismatch(
                &comp.back[n].mul(&target.cocyclic[n]),
                &source.cocyclic[n].mul(&comp.back[n]),
                &|col| format!("degree {n} column {col}"),
            )
        }),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::basechange::{
        base_change_algebroid, base_change_coefficient, canonical_coefficient,
    };
    use crate::bimodule::check_formula_balanced;
    use crate::cyclic::{para_cocyclic_module, para_cyclic_module};
    use crate::hopfalgebroid::enveloping_hopf_algebroid;
    use crate::linalg::DEFAULT_SIZE_LIMIT;
    use crate::morita::{identity_context, matrix_context, MoritaContext};
    use std::sync::Arc;

    struct Stack {
        bc: BaseChange,
        changed: ChangedCoefficient,
        source: ParaCyclicModule,
        target: ParaCyclicModule,
    }

    fn stack(ctx: MoritaContext, cap: usize) -> Stack {
        let env = Arc::new(enveloping_hopf_algebroid(&ctx.r, DEFAULT_SIZE_LIMIT).unwrap());
        let coeff = canonical_coefficient(&env, DEFAULT_SIZE_LIMIT).unwrap();
        let bc = base_change_algebroid(&ctx, &env, DEFAULT_SIZE_LIMIT).unwrap();
        let changed = base_change_coefficient(&bc, &coeff, DEFAULT_SIZE_LIMIT).unwrap();
        let source = para_cyclic_module(&coeff, cap + 1, DEFAULT_SIZE_LIMIT).unwrap();
        let target = para_cyclic_module(&changed.coefficient, cap, DEFAULT_SIZE_LIMIT).unwrap();
        Stack {
            bc,
            changed,
            source,
            target,
        }
    }

    fn comparison(st: &Stack, cap: usize) -> CyclicComparison {
        cyclic_comparison(&st.bc, &st.changed, &st.source, &st.target, cap).unwrap()
    }

    fn assert_all_pass(report: &Report) {
        assert!(
            report.all_pass(),
            "failures: {:?}",
            report
                .failures()
                .map(|i| format!("{}: {}", i.name, i.detail.clone().unwrap_or_default()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn identity_context_round_trip_is_identity() {
        let st = stack(
            identity_context(&Arc::new(Algebra::dual_numbers()), DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = comparison(&st, 2);
        assert_all_pass(&check_cyclic_comparison(&st.source, &st.target, &comp));
        for n in 0..=2 {
            let round = comp.back[n].mul(&comp.into[n]);
            assert_eq!(round, Matrix::identity(st.source.dim(n)));
        }
    }

    #[test]
    fn matrix_context_over_rationals_passes() {
        let st = stack(
            matrix_context(&Arc::new(Algebra::rationals()), 2, DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = comparison(&st, 2);
        assert_all_pass(&check_cyclic_comparison(&st.source, &st.target, &comp));
        // the unit of the rationals splits through a single leg, so the
        // degree zero transfer of a basis coefficient is one pure tensor
        assert_eq!(comp.into[0].col(0).len(), 1);
    }

    #[test]
    fn matrix_context_over_dual_numbers_passes() {
        let st = stack(
            matrix_context(&Arc::new(Algebra::dual_numbers()), 2, DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = comparison(&st, 2);
        assert_all_pass(&check_cyclic_comparison(&st.source, &st.target, &comp));
    }

    #[test]
    fn transfer_formulas_are_balanced_on_interior_boundaries() {
        let st = stack(
            matrix_context(&Arc::new(Algebra::rationals()), 2, DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let f = Transfer {
            bc: &st.bc,
            coeff: &st.source.coefficient,
            changed: &st.changed,
        };
        check_formula_balanced(
            &st.source.chains[2],
            &st.target.chains[2],
            &into_formula(&f, 2),
            "transfer into the base change in degree 2",
        )
        .unwrap();
        check_formula_balanced(
            &st.target.chains[2],
            &st.source.chains[2],
            &back_formula(&f, 2),
            "transfer back from the base change in degree 2",
        )
        .unwrap();
        check_formula_balanced(
            &st.source.chains[2],
            &st.source.chains[3],
            &homotopy_formula(&f, 2),
            "round-trip homotopy in degree 2",
        )
        .unwrap();
    }

    #[test]
    fn sign_flips_are_detected() {
        let st = stack(
            identity_context(&Arc::new(Algebra::dual_numbers()), DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = comparison(&st, 2);
        assert_all_pass(&check_cyclic_comparison(&st.source, &st.target, &comp));

        let find = |report: &Report, name: &str| -> bool {
            report
                .items
                .iter()
                .find(|i| i.name == name)
                .expect("item present")
                .pass
        };

        let mut bad = comp.clone();
        bad.into[1] = bad.into[1].neg();
        let report = check_cyclic_comparison(&st.source, &st.target, &bad);
        assert!(!find(&report, "transfer into the base change is a chain map"));

        let mut bad = comp.clone();
        bad.back[1] = bad.back[1].neg();
        let report = check_cyclic_comparison(&st.source, &st.target, &bad);
        assert!(!find(
            &report,
            "transfer back from the base change is a chain map"
        ));

        let mut bad = comp.clone();
        bad.homotopy[1] = bad.homotopy[1].neg();
        let report = check_cyclic_comparison(&st.source, &st.target, &bad);
        assert!(!find(&report, "homotopy contracts the transfer round trip"));
    }

    struct CoStack {
        bc: BaseChange,
        changed: ChangedCoefficient,
        source: ParaCocyclicModule,
        target: ParaCocyclicModule,
    }

    fn costack(ctx: MoritaContext, cap: usize) -> CoStack {
        let env = Arc::new(enveloping_hopf_algebroid(&ctx.r, DEFAULT_SIZE_LIMIT).unwrap());
        let coeff = canonical_coefficient(&env, DEFAULT_SIZE_LIMIT).unwrap();
        let bc = base_change_algebroid(&ctx, &env, DEFAULT_SIZE_LIMIT).unwrap();
        let changed = base_change_coefficient(&bc, &coeff, DEFAULT_SIZE_LIMIT).unwrap();
        let source = para_cocyclic_module(&coeff, cap + 1, DEFAULT_SIZE_LIMIT).unwrap();
        let target =
            para_cocyclic_module(&changed.coefficient, cap + 1, DEFAULT_SIZE_LIMIT).unwrap();
        CoStack {
            bc,
            changed,
            source,
            target,
        }
    }

    #[test]
    fn identity_context_cochain_round_trip_is_identity() {
        let st = costack(
            identity_context(&Arc::new(Algebra::dual_numbers()), DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = cocyclic_comparison(&st.bc, &st.changed, &st.source, &st.target, 2).unwrap();
        assert_all_pass(&check_cocyclic_comparison(&st.source, &st.target, &comp));
        for n in 0..=2 {
            let round = comp.back[n].mul(&comp.into[n]);
            assert_eq!(round, Matrix::identity(st.source.dim(n)));
        }
    }

    #[test]
    fn matrix_context_cochain_transfers_pass() {
        let st = costack(
            matrix_context(&Arc::new(Algebra::rationals()), 2, DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = cocyclic_comparison(&st.bc, &st.changed, &st.source, &st.target, 2).unwrap();
        assert_all_pass(&check_cocyclic_comparison(&st.source, &st.target, &comp));
    }

    #[test]
    fn matrix_context_over_dual_numbers_cochain_transfers_pass() {
        let st = costack(
            matrix_context(&Arc::new(Algebra::dual_numbers()), 2, DEFAULT_SIZE_LIMIT).unwrap(),
            2,
        );
        let comp = cocyclic_comparison(&st.bc, &st.changed, &st.source, &st.target, 2).unwrap();
        assert_all_pass(&check_cocyclic_comparison(&st.source, &st.target, &comp));
    }
}
