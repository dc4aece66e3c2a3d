//! Brute-force Hochschild and cyclic homology of a finite-dimensional
//! algebra via the bar complex, kept deliberately independent of the rest
//! of the crate: its own dense matrices, its own Gaussian elimination, its
//! own tensor index bookkeeping. It shares nothing with the balanced-tensor
//! pipeline except the rational number type, so agreement between the two
//! is meaningful evidence rather than a tautology.

use num::{BigRational, One, Zero};

type Q = BigRational;

/// Structure constants of a unital associative algebra, dense.
/// mul[i][j] is the coefficient vector of e_i * e_j.
#[derive(Debug, Clone)]
pub struct OracleAlgebra {
    pub dim: usize,
    pub unit: Vec<Q>,
    pub mul: Vec<Vec<Vec<Q>>>,
}

/// A bimodule over an OracleAlgebra, dense action matrices per basis index.
/// left[a] maps m to e_a . m; right[a] maps m to m . e_a.
#[derive(Debug, Clone)]
pub struct OracleBimodule {
    pub dim: usize,
    pub left: Vec<Vec<Vec<Q>>>,
    pub right: Vec<Vec<Vec<Q>>>,
}

impl OracleBimodule {
    /// The algebra over itself, actions by multiplication.
    pub fn regular(a: &OracleAlgebra) -> Self {
        let left = (0..a.dim)
            .map(|i| {
                (0..a.dim)
                    .map(|m| a.mul[i][m].clone())
                    .collect::<Vec<_>>()
            })
            .map(|cols_by_m| transpose_dense(&cols_by_m))
            .collect();
        let right = (0..a.dim)
            .map(|i| {
                (0..a.dim)
                    .map(|m| a.mul[m][i].clone())
                    .collect::<Vec<_>>()
            })
            .map(|cols_by_m| transpose_dense(&cols_by_m))
            .collect();
        OracleBimodule {
            dim: a.dim,
            left,
            right,
        }
    }
}

/// Input adapter: densify structure constants from the sparse algebra
/// type so cross-checks can hand both pipelines the same algebra. Only the
/// input translation is shared; every computation here stays independent.
pub fn dense_structure(a: &crate::algebra::Algebra) -> OracleAlgebra {
    let dense = |v: &crate::linalg::SparseVec| -> Vec<Q> {
        let mut out = vec![Q::zero(); a.dim];
        for (i, c) in v {
            out[*i] = c.clone();
        }
        out
    };
    OracleAlgebra {
        dim: a.dim,
        unit: dense(a.unit()),
        mul: (0..a.dim)
            .map(|i| (0..a.dim).map(|j| dense(a.mul_basis(i, j))).collect())
            .collect(),
    }
}

fn transpose_dense(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

fn dense_apply(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    let rows = m.len();
    (0..rows)
        .map(|i| {
            m[i].iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .fold(Q::zero(), |acc, x| acc + x)
        })
        .collect()
}

/// Rank by plain dense Gaussian elimination over the rationals.
pub fn dense_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let sub = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Chain spaces are M tensor A^n with index m * dim^n + sum a_i * dim^(n-1-i).
struct BarComplex<'a> {
    alg: &'a OracleAlgebra,
    coeff: &'a OracleBimodule,
}

impl<'a> BarComplex<'a> {
    fn space_dim(&self, n: usize) -> usize {
        self.coeff.dim * self.alg.dim.pow(n as u32)
    }

    fn decode(&self, n: usize, mut idx: usize) -> (usize, Vec<usize>) {
        let d = self.alg.dim;
        let mut a = vec![0usize; n];
        for i in (0..n).rev() {
            a[i] = idx % d;
            idx /= d;
        }
        (idx, a)
    }

    fn encode(&self, m: usize, a: &[usize]) -> usize {
        let d = self.alg.dim;
        let mut idx = m;
        for &x in a {
            idx = idx * d + x;
        }
        idx
    }

    /// Add coeff * (mvec tensor pure a-string with slot `slot` replaced by
    /// the dense vector `repl`) into the dense accumulator.
    fn add_term(
        &self,
        acc: &mut [Q],
        sign: &Q,
        mvec: &[Q],
        a: &[usize],
        slot: Option<(usize, &[Q])>,
    ) {
        for (mi, mc) in mvec.iter().enumerate() {
            if mc.is_zero() {
                continue;
            }
            match slot {
                None => {
                    let idx = self.encode(mi, a);
                    acc[idx] += sign * mc;
                }
                Some((s, repl)) => {
                    for (ri, rc) in repl.iter().enumerate() {
                        if rc.is_zero() {
                            continue;
                        }
                        let mut digits = a.to_vec();
                        digits[s] = ri;
                        let idx = self.encode(mi, &digits);
                        acc[idx] += &(sign * mc) * rc;
                    }
                }
            }
        }
    }

    /// Hochschild boundary b_n: C_n -> C_(n-1), dense, column-major here
    /// as rows of the returned Vec being matrix rows.
    fn boundary(&self, n: usize) -> Vec<Vec<Q>> {
        assert!(n >= 1);
        let src = self.space_dim(n);
        let dst = self.space_dim(n - 1);
        let mut cols: Vec<Vec<Q>> = Vec::with_capacity(src);
        for idx in 0..src {
            let (m, a) = self.decode(n, idx);
            let mut acc = vec![Q::zero(); dst];
            // face 0: m . a_1
            let mvec = {
                let unit_m: Vec<Q> = (0..self.coeff.dim)
                    .map(|k| if k == m { Q::one() } else { Q::zero() })
                    .collect();
                dense_apply(&self.coeff.right[a[0]], &unit_m)
            };
            self.add_term(&mut acc, &Q::one(), &mvec, &a[1..], None);
            // inner faces: multiply a_i a_(i+1)
            let mut munit: Vec<Q> = vec![Q::zero(); self.coeff.dim];
            munit[m] = Q::one();
            for i in 0..n.saturating_sub(1) {
                let prod = &self.alg.mul[a[i]][a[i + 1]];
                let mut digits: Vec<usize> = Vec::with_capacity(n - 1);
                digits.extend_from_slice(&a[..i]);
                digits.push(0);
                digits.extend_from_slice(&a[i + 2..]);
                let sign = if (i + 1) % 2 == 0 { Q::one() } else { -Q::one() };
                self.add_term(&mut acc, &sign, &munit, &digits, Some((i, prod)));
            }
            // last face: a_n . m, sign (-1)^n
            let mvec = dense_apply(&self.coeff.left[a[n - 1]], &munit);
            let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
            self.add_term(&mut acc, &sign, &mvec, &a[..n - 1], None);
            cols.push(acc);
        }
        transpose_dense(&cols)
    }
}

/// Hochschild homology dimensions HH_0 .. HH_top of A with coefficients in
/// the bimodule M, by brute force on the bar complex.
pub fn hochschild_dims(alg: &OracleAlgebra, coeff: &OracleBimodule, top: usize) -> Vec<usize> {
    let bar = BarComplex { alg, coeff };
    let boundaries: Vec<Vec<Vec<Q>>> = (1..=top + 1).map(|n| bar.boundary(n)).collect();
    // sanity: b . b = 0
    for w in boundaries.windows(2) {
        assert!(
            dense_product_is_zero(&w[0], &w[1]),
            "bar differential fails b*b = 0"
        );
    }
    (0..=top)
        .map(|n| {
            let ker = if n == 0 {
                bar.space_dim(0)
            } else {
                let b_n = &boundaries[n - 1];
                bar.space_dim(n) - dense_rank(b_n.clone())
            };
            let im = dense_rank(boundaries[n].clone());
            ker - im
        })
        .collect()
}

fn dense_product_is_zero(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    // a: p x q, b: q x r
    let p = a.len();
    if p == 0 {
        return true;
    }
    let r = if b.is_empty() { 0 } else { b[0].len() };
    for i in 0..p {
        for j in 0..r {
            let mut s = Q::zero();
            for (k, bk) in b.iter().enumerate() {
                if !a[i][k].is_zero() && !bk[j].is_zero() {
                    s += &a[i][k] * &bk[j];
                }
            }
            if !s.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Cyclic homology dimensions HC_0 .. HC_top of A (coefficients in A
/// itself), via the first-quadrant (b, -b', 1-t, N) bicomplex with the
/// signed cyclic operator t_n = (-1)^n rotation.
pub fn cyclic_dims(alg: &OracleAlgebra, top: usize) -> Vec<usize> {
    let coeff = OracleBimodule::regular(alg);
    let bar = BarComplex {
        alg,
        coeff: &coeff,
    };
    let need = top + 1;
    let b: Vec<Vec<Vec<Q>>> = (1..=need).map(|n| bar.boundary(n)).collect();
    let bprime: Vec<Vec<Vec<Q>>> = (1..=need).map(|n| boundary_prime(&bar, n)).collect();
    let t: Vec<Vec<Vec<Q>>> = (0..=need).map(|n| cyclic_t(&bar, n)).collect();
    let norm: Vec<Vec<Vec<Q>>> = (0..=need)
        .map(|n| {
            // N = 1 + t + ... + t^n
            let dim = bar.space_dim(n);
            let mut acc = dense_identity(dim);
            let mut pow = dense_identity(dim);
            for _ in 0..n {
                pow = dense_mul(&t[n], &pow);
                acc = dense_add(&acc, &pow);
            }
            acc
        })
        .collect();

    // Total differential D_k : Tot_k -> Tot_(k-1), blocks (p, q) with
    // p + q = k, q major in the block layout, ordered by p ascending.
    let tot_dim = |k: usize| -> usize { (0..=k).map(|p| bar.space_dim(k - p)).sum() };
    let offset = |k: usize, p: usize| -> usize { (0..p).map(|pp| bar.space_dim(k - pp)).sum() };

    let total = |k: usize| -> Vec<Vec<Q>> {
        let mut m = vec![vec![Q::zero(); tot_dim(k)]; tot_dim(k - 1)];
        for p in 0..=k {
            let q = k - p;
            let co = offset(k, p);
            // vertical: (p, q) -> (p, q-1), b on even p, -b' on odd p
            if q >= 1 {
                let block = if p % 2 == 0 {
                    b[q - 1].clone()
                } else {
                    dense_neg(&bprime[q - 1])
                };
                let ro = offset(k - 1, p);
                dense_paste(&mut m, &block, ro, co);
            }
            // horizontal: (p, q) -> (p-1, q), 1-t out of odd p, N out of even p
            if p >= 1 {
                let block = if p % 2 == 1 {
                    dense_sub(&dense_identity(bar.space_dim(q)), &t[q])
                } else {
                    norm[q].clone()
                };
                let ro = offset(k - 1, p - 1);
                dense_paste(&mut m, &block, ro, co);
            }
        }
        m
    };

    let totals: Vec<Vec<Vec<Q>>> = (1..=need).map(total).collect();
    for w in totals.windows(2) {
        assert!(
            dense_product_is_zero(&w[0], &w[1]),
            "cyclic bicomplex total differential fails D*D = 0"
        );
    }
    (0..=top)
        .map(|n| {
            let ker = if n == 0 {
                tot_dim(0)
            } else {
                tot_dim(n) - dense_rank(totals[n - 1].clone())
            };
            ker - dense_rank(totals[n].clone())
        })
        .collect()
}

/// b' drops the last face (the wrap-around one).
fn boundary_prime(bar: &BarComplex, n: usize) -> Vec<Vec<Q>> {
    let src = bar.space_dim(n);
    let dst = bar.space_dim(n - 1);
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(src);
    for idx in 0..src {
        let (m, a) = bar.decode(n, idx);
        let mut acc = vec![Q::zero(); dst];
        let munit: Vec<Q> = (0..bar.coeff.dim)
            .map(|k| if k == m { Q::one() } else { Q::zero() })
            .collect();
        let mvec = dense_apply(&bar.coeff.right[a[0]], &munit);
        bar.add_term(&mut acc, &Q::one(), &mvec, &a[1..], None);
        for i in 0..n.saturating_sub(1) {
            let prod = &bar.alg.mul[a[i]][a[i + 1]];
            let mut digits: Vec<usize> = Vec::with_capacity(n - 1);
            digits.extend_from_slice(&a[..i]);
            digits.push(0);
            digits.extend_from_slice(&a[i + 2..]);
            let sign = if (i + 1) % 2 == 0 { Q::one() } else { -Q::one() };
            bar.add_term(&mut acc, &sign, &munit, &digits, Some((i, prod)));
        }
        cols.push(acc);
    }
    transpose_dense(&cols)
}

/// Signed cyclic operator: t(a_0 tensor ... tensor a_n) =
/// (-1)^n a_n tensor a_0 tensor ... tensor a_(n-1), for M = A.
fn cyclic_t(bar: &BarComplex, n: usize) -> Vec<Vec<Q>> {
    let dim = bar.space_dim(n);
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(dim);
    let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
    for idx in 0..dim {
        let (m, a) = bar.decode(n, idx);
        let mut acc = vec![Q::zero(); dim];
        // rotate: new m = a_n, digits = (old m, a_1 .. a_(n-1))
        let (nm, digits) = if n == 0 {
            (m, Vec::new())
        } else {
            let mut d = Vec::with_capacity(n);
            d.push(m);
            d.extend_from_slice(&a[..n - 1]);
            (a[n - 1], d)
        };
        let target = bar.encode(nm, &digits);
        acc[target] = sign.clone();
        cols.push(acc);
    }
    transpose_dense(&cols)
}

fn dense_identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

fn dense_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let p = a.len();
    let q = b.len();
    let r = if q == 0 { 0 } else { b[0].len() };
    (0..p)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut s = Q::zero();
                    for k in 0..q {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            s += &a[i][k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn dense_add(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

fn dense_sub(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn dense_neg(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    a.iter()
        .map(|r| r.iter().map(|x| -x.clone()).collect())
        .collect()
}

fn dense_paste(m: &mut [Vec<Q>], block: &[Vec<Q>], ro: usize, co: usize) {
    for (i, row) in block.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                m[ro + i][co + j] = v.clone();
            }
        }
    }
}
