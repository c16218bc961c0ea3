//! Interpolation matrices over support sets and the rank machinery that
//! decides emptiness and point separation.
//!
//! Every support point contributes one row; every derivative order (a,b)
//! with a+b <= m-1 contributes one column. The derivative matrix A holds
//! the falling-factorial derivative values at (1,1); the power matrix B
//! holds plain powers i^a j^b and is reached from A by invertible column
//! operations, so the two share rank and left kernel. B is the default
//! computational matrix because its entries reduce mod p by modular
//! exponentiation without ever building huge integers.
//!
//! Rank protocol: full row rank modulo any listed prime certifies the true
//! rank (modular rank is a lower bound that is capped at the row count);
//! any deficiency claim must come from fraction-free exact elimination and
//! carries a nonzero left-kernel witness verified by multiplication.

// elimination and back-substitution walk coupled indices across several
// buffers; indexed loops are the readable form here
#![allow(clippy::needless_range_loop)]

use num_integer::Integer as _;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{Int, PrimeField, PrimeList, Rat};
use crate::lattice::SupportSet;

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::validation("matrix dimensions must be positive"));
        }
        Ok(IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        })
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::validation("matrix must be rectangular and nonempty"));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows).expect("nonempty");
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// The matrix with one extra right-hand column.
    pub fn augmented(&self, rhs: &[Int]) -> Result<IntMatrix> {
        if rhs.len() != self.rows {
            return Err(Error::validation(format!(
                "right-hand side has {} entries for {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let mut out = IntMatrix::zero(self.rows, self.cols + 1)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            out.set(i, self.cols, rhs[i].clone());
        }
        Ok(out)
    }

    /// Standard basis vector as a column right-hand side.
    pub fn unit_rhs(&self, idx: usize) -> Result<Vec<Int>> {
        if idx >= self.rows {
            return Err(Error::domain(format!(
                "row index {idx} out of range 0..{}",
                self.rows
            )));
        }
        let mut rhs = vec![Int::zero(); self.rows];
        rhs[idx] = Int::one();
        Ok(rhs)
    }

    /// self * v for an integer vector.
    pub fn mul_int_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if v.len() != self.cols {
            return Err(Error::validation(
                "vector length does not match column count",
            ));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// self * v for a rational vector.
    pub fn mul_rat_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::validation(
                "vector length does not match column count",
            ));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| Rat::from(a.clone()) * b)
                    .sum()
            })
            .collect())
    }

    /// v^T * self for an integer vector.
    pub fn left_mul_int_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if v.len() != self.rows {
            return Err(Error::validation("vector length does not match row count"));
        }
        let mut out = vec![Int::zero(); self.cols];
        for i in 0..self.rows {
            if v[i].is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(self.row(i)) {
                *o += &v[i] * e;
            }
        }
        Ok(out)
    }
}

/// Derivative orders (a,b) with a+b <= m-1 in lexicographic order; the
/// column order of both interpolation matrices. Length m(m+1)/2.
pub fn deriv_orders(m: &Int) -> Result<Vec<(u64, u64)>> {
    let mu = validate_multiplicity(m)?;
    let mut orders = Vec::with_capacity((mu * (mu + 1) / 2) as usize);
    for a in 0..mu {
        for b in 0..mu - a {
            orders.push((a, b));
        }
    }
    Ok(orders)
}

fn validate_multiplicity(m: &Int) -> Result<u64> {
    if !m.is_positive() {
        return Err(Error::domain(format!("multiplicity m = {m} must be >= 1")));
    }
    let mu = m
        .to_u64()
        .filter(|v| v.checked_mul(v + 1).is_some())
        .ok_or_else(|| Error::domain(format!("multiplicity m = {m} is too large")))?;
    Ok(mu)
}

/// Which of the two §-matrices a [`DerivMatrix`] holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixFlavor {
    /// Derivative values at (1,1): falling(i,a) * falling(j,b).
    Derivative,
    /// Plain powers i^a * j^b (with 0^0 = 1).
    Power,
}

/// An interpolation matrix together with its row/column labels.
#[derive(Clone, Debug)]
pub struct DerivMatrix {
    pub flavor: MatrixFlavor,
    pub orders: Vec<(u64, u64)>,
    pub matrix: IntMatrix,
}

fn build_matrix(
    s: &SupportSet,
    m: &Int,
    flavor: MatrixFlavor,
    entry: impl Fn(&Int, &Int, u64, u64) -> Int,
) -> Result<DerivMatrix> {
    if s.is_empty() {
        return Err(Error::domain("support set is empty"));
    }
    let orders = deriv_orders(m)?;
    let mut matrix = IntMatrix::zero(s.len(), orders.len())?;
    for (i, p) in s.points().iter().enumerate() {
        for (j, &(a, b)) in orders.iter().enumerate() {
            matrix.set(i, j, entry(&p.x, &p.y, a, b));
        }
    }
    Ok(DerivMatrix {
        flavor,
        orders,
        matrix,
    })
}

/// Derivative matrix A: row (i,j), column (a,b) holds
/// i(i-1)...(i-a+1) * j(j-1)...(j-b+1).
pub fn build_a(s: &SupportSet, m: &Int) -> Result<DerivMatrix> {
    build_matrix(s, m, MatrixFlavor::Derivative, |x, y, a, b| {
        crate::exact::falling(x, a) * crate::exact::falling(y, b)
    })
}

/// Power matrix B: row (i,j), column (a,b) holds i^a * j^b, with 0^0 = 1.
pub fn build_b(s: &SupportSet, m: &Int) -> Result<DerivMatrix> {
    build_matrix(s, m, MatrixFlavor::Power, |x, y, a, b| {
        Pow::pow(x, a) * Pow::pow(y, b)
    })
}

/// B(s,m) reduced modulo the field prime, in Montgomery form, row-major.
/// Built column-free of big integers: per point, the power tables
/// x^0..x^{m-1} and y^0..y^{m-1} are filled by modular multiplication.
pub fn power_matrix_mod(s: &SupportSet, m: &Int, f: &PrimeField) -> Result<(Vec<u64>, usize)> {
    if s.is_empty() {
        return Err(Error::domain("support set is empty"));
    }
    let mu = validate_multiplicity(m)?;
    let r = (mu * (mu + 1) / 2)
        .to_usize()
        .ok_or_else(|| Error::domain("matrix too large"))?;
    let n = s.len();
    let mut data = vec![
        0u64;
        n.checked_mul(r)
            .ok_or_else(|| Error::domain("matrix too large"))?
    ];
    let mut xp = vec![f.one(); mu as usize];
    let mut yp = vec![f.one(); mu as usize];
    for (i, p) in s.points().iter().enumerate() {
        let x = f.encode_int(&p.x);
        let y = f.encode_int(&p.y);
        for a in 1..mu as usize {
            xp[a] = f.mul(xp[a - 1], x);
            yp[a] = f.mul(yp[a - 1], y);
        }
        let row = &mut data[i * r..(i + 1) * r];
        let mut k = 0;
        for a in 0..mu as usize {
            for b in 0..mu as usize - a {
                row[k] = f.mul(xp[a], yp[b]);
                k += 1;
            }
        }
    }
    Ok((data, r))
}

/// In-place Gaussian elimination over the prime field on a row-major grid;
/// returns the rank. Entries may enter canonical or lazy; the grid holds
/// lazy residues afterwards. Stops early once the rank hits the row count.
pub fn eliminate_mod(data: &mut [u64], rows: usize, cols: usize, f: &PrimeField) -> usize {
    assert_eq!(data.len(), rows * cols);
    if f.p < 1 << 62 {
        eliminate_lazy_paired(data, rows, cols, f)
    } else {
        eliminate_strict(data, rows, cols, f)
    }
}

/// Reference single-pivot elimination in strict canonical arithmetic; used
/// for primes too large for the lazy domain.
fn eliminate_strict(data: &mut [u64], rows: usize, cols: usize, f: &PrimeField) -> usize {
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| data[i * cols + col] != 0) else {
            continue;
        };
        if p != row {
            for k in col..cols {
                data.swap(p * cols + k, row * cols + k);
            }
        }
        let inv = f.inv(data[row * cols + col]);
        for k in col..cols {
            let idx = row * cols + k;
            data[idx] = f.mul(data[idx], inv);
        }
        let (top, below) = data.split_at_mut((row + 1) * cols);
        let pivot_row = &top[row * cols..];
        let reduce = |r: &mut [u64]| {
            let factor = r[col];
            if factor != 0 {
                r[col] = 0;
                for (rj, &pj) in r[col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
                    *rj = f.sub(*rj, f.mul(factor, pj));
                }
            }
        };
        if rayon::current_num_threads() > 1 && below.len() / cols >= 64 {
            below.par_chunks_exact_mut(cols).for_each(reduce);
        } else {
            below.chunks_exact_mut(cols).for_each(reduce);
        }
        row += 1;
    }
    row
}

/// Elimination in the lazy Montgomery domain [0, 2p), processing pivots in
/// pairs so each sweep over the trailing rows applies two eliminations in
/// one pass (half the row traffic, and the two products per entry overlap
/// in the pipeline). Zero tests always canonicalize first.
fn eliminate_lazy_paired(data: &mut [u64], rows: usize, cols: usize, f: &PrimeField) -> usize {
    // first pivot at a column >= col in rows >= row, scanning column-first
    let find_pivot = |data: &[u64], row: usize, col: usize| -> Option<(usize, usize)> {
        for c in col..cols {
            for i in row..rows {
                if f.canon(data[i * cols + c]) != 0 {
                    return Some((i, c));
                }
            }
        }
        None
    };
    let swap_rows = |data: &mut [u64], a: usize, b: usize| {
        if a != b {
            for k in 0..cols {
                data.swap(a * cols + k, b * cols + k);
            }
        }
    };

    let mut row = 0usize;
    let mut col = 0usize;
    while row < rows && col < cols {
        let Some((r1, c1)) = find_pivot(data, row, col) else {
            break;
        };
        swap_rows(data, r1, row);
        let inv1 = f.inv(f.canon(data[row * cols + c1]));
        for k in c1..cols {
            let idx = row * cols + k;
            data[idx] = f.mul_lazy(data[idx], inv1);
        }

        // second pivot: first column past c1 with a nonzero entry after the
        // first elimination is applied (computed on the fly, rows untouched)
        let mut second = None;
        'search: for c2 in c1 + 1..cols {
            for i in row + 1..rows {
                let v = f.sub_lazy(
                    data[i * cols + c2],
                    f.mul_lazy(data[i * cols + c1], data[row * cols + c2]),
                );
                if f.canon(v) != 0 {
                    second = Some((i, c2));
                    break 'search;
                }
            }
        }
        let Some((r2, c2)) = second else {
            // after this pivot every remaining row is zero: rank settled
            return row + 1;
        };

        swap_rows(data, r2, row + 1);
        // materialize the second pivot row, then normalize it
        let f1 = data[(row + 1) * cols + c1];
        for j in c1 + 1..cols {
            let m1 = f.mul_lazy(f1, data[row * cols + j]);
            data[(row + 1) * cols + j] = f.sub_lazy(data[(row + 1) * cols + j], m1);
        }
        data[(row + 1) * cols + c1] = 0;
        let inv2 = f.inv(f.canon(data[(row + 1) * cols + c2]));
        for k in c2..cols {
            let idx = (row + 1) * cols + k;
            data[idx] = f.mul_lazy(data[idx], inv2);
        }

        let (top, below) = data.split_at_mut((row + 2) * cols);
        let p1 = &top[row * cols..(row + 1) * cols];
        let p2 = &top[(row + 1) * cols..];
        let reduce = |r: &mut [u64]| {
            let f1 = r[c1];
            let f2 = f.sub_lazy(r[c2], f.mul_lazy(f1, p1[c2]));
            for ((rj, &p1j), &p2j) in r[c1 + 1..].iter_mut().zip(&p1[c1 + 1..]).zip(&p2[c1 + 1..]) {
                let m1 = f.mul_lazy(f1, p1j);
                let m2 = f.mul_lazy(f2, p2j);
                *rj = f.sub_lazy(f.sub_lazy(*rj, m1), m2);
            }
            r[c1] = 0;
            r[c2] = 0;
        };
        // update target rows two at a time as well, so each pass over the
        // pivot rows feeds four independent multiply chains
        let reduce_two = |pair: &mut [u64]| {
            let (ra, rb) = pair.split_at_mut(cols);
            let fa1 = ra[c1];
            let fa2 = f.sub_lazy(ra[c2], f.mul_lazy(fa1, p1[c2]));
            let fb1 = rb[c1];
            let fb2 = f.sub_lazy(rb[c2], f.mul_lazy(fb1, p1[c2]));
            let iter = ra[c1 + 1..]
                .iter_mut()
                .zip(rb[c1 + 1..].iter_mut())
                .zip(&p1[c1 + 1..])
                .zip(&p2[c1 + 1..]);
            for (((raj, rbj), &p1j), &p2j) in iter {
                let ma1 = f.mul_lazy(fa1, p1j);
                let mb1 = f.mul_lazy(fb1, p1j);
                let ma2 = f.mul_lazy(fa2, p2j);
                let mb2 = f.mul_lazy(fb2, p2j);
                *raj = f.sub_lazy(f.sub_lazy(*raj, ma1), ma2);
                *rbj = f.sub_lazy(f.sub_lazy(*rbj, mb1), mb2);
            }
            ra[c1] = 0;
            ra[c2] = 0;
            rb[c1] = 0;
            rb[c2] = 0;
        };
        let below_rows = below.len() / cols;
        let (paired, tail) = below.split_at_mut((below_rows / 2) * 2 * cols);
        if rayon::current_num_threads() > 1 && below_rows >= 64 {
            paired.par_chunks_exact_mut(2 * cols).for_each(reduce_two);
        } else {
            paired.chunks_exact_mut(2 * cols).for_each(reduce_two);
        }
        if !tail.is_empty() {
            reduce(tail);
        }
        row += 2;
        col = c2 + 1;
    }
    row
}

/// Rank of an integer matrix modulo the field prime (a lower bound for the
/// rational rank; exact when it reaches the row count).
pub fn modular_row_rank(m: &IntMatrix, f: &PrimeField) -> usize {
    let mut data: Vec<u64> = m.data.iter().map(|v| f.encode_int(v)).collect();
    eliminate_mod(&mut data, m.rows, m.cols, f)
}

/// Fraction-free (one-step Bareiss) echelon form: integer entries
/// throughout, rows beyond the rank identically zero, row swaps tracked in
/// `sign`. Every interior division is exact (minor identity); this is
/// checked at runtime in debug builds.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub mat: IntMatrix,
    pub pivots: Vec<usize>,
    pub sign: i32,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn bareiss_echelon(m: &IntMatrix) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut prev = Int::one();
    let mut sign = 1i32;
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            a.swap_rows(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = a.get(r, c) * a.get(i, j) - a.get(i, c) * a.get(r, j);
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free division must be exact");
                a.set(i, j, q);
            }
            a.set(i, c, Int::zero());
        }
        prev = a.get(r, c).clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        mat: a,
        pivots,
        sign,
    }
}

/// Exact rational rank.
pub fn rank_exact(m: &IntMatrix) -> usize {
    bareiss_echelon(m).rank()
}

/// Exact determinant of a square matrix: the final fraction-free pivot
/// times the row-swap sign.
pub fn det_exact(m: &IntMatrix) -> Result<Int> {
    if m.rows != m.cols {
        return Err(Error::validation(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let ech = bareiss_echelon(m);
    if ech.rank() < m.rows {
        return Ok(Int::zero());
    }
    let last = ech.mat.get(m.rows - 1, ech.pivots[m.rows - 1]).clone();
    Ok(if ech.sign < 0 { -last } else { last })
}

/// Scale a rational vector to a primitive integer vector with positive
/// first nonzero entry.
fn to_primitive(v: &[Rat]) -> Vec<Int> {
    let mut l = Int::one();
    for r in v {
        l = l.lcm(r.denom());
    }
    let lr = Rat::from(l);
    let mut out: Vec<Int> = v.iter().map(|r| (r * &lr).to_integer()).collect();
    let mut g = Int::zero();
    for e in &out {
        g = g.gcd(e);
    }
    if !g.is_zero() && !g.is_one() {
        for e in &mut out {
            *e /= &g;
        }
    }
    if let Some(first) = out.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut out {
                *e = -e.clone();
            }
        }
    }
    out
}

/// Basis of { x : M x = 0 } as primitive integer vectors (free-variable
/// back-substitution over the rationals, one vector per free column).
pub fn right_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let ech = bareiss_echelon(m);
    let rank = ech.rank();
    let mut is_pivot = vec![false; m.cols];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(m.cols - rank);
    for fc in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rat::zero(); m.cols];
        x[fc] = Rat::one();
        for i in (0..rank).rev() {
            let pc = ech.pivots[i];
            let mut s = Rat::zero();
            for j in pc + 1..m.cols {
                let e = ech.mat.get(i, j);
                if !e.is_zero() && !x[j].is_zero() {
                    s += Rat::from(e.clone()) * &x[j];
                }
            }
            x[pc] = -s / Rat::from(ech.mat.get(i, pc).clone());
        }
        basis.push(to_primitive(&x));
    }
    basis
}

/// Basis of { a : a^T M = 0 } as primitive integer vectors; empty iff the
/// rows are linearly independent.
pub fn left_kernel_exact(m: &IntMatrix) -> Vec<Vec<Int>> {
    right_kernel(&m.transpose())
}

/// True iff every left-kernel basis vector has a zero coordinate at `idx`
/// (equivalently: every left-kernel vector does).
pub fn left_kernel_vanishes_at(m: &IntMatrix, idx: usize) -> Result<bool> {
    if idx >= m.rows() {
        return Err(Error::domain(format!(
            "row index {idx} out of range 0..{}",
            m.rows()
        )));
    }
    Ok(left_kernel_exact(m).iter().all(|v| v[idx].is_zero()))
}

/// True iff the standard basis vector e_idx lies in the column span,
/// decided by comparing exact ranks of M and [M | e_idx]. Independent of
/// the kernel route.
pub fn in_column_span(m: &IntMatrix, idx: usize) -> Result<bool> {
    let rhs = m.unit_rhs(idx)?;
    let aug = m.augmented(&rhs)?;
    Ok(rank_exact(&aug) == rank_exact(m))
}

/// One exact solution of M x = rhs (free variables set to zero), or None
/// when the system is inconsistent. The solution is verified by exact
/// multiplication before being returned.
pub fn solve_exact(m: &IntMatrix, rhs: &[Int]) -> Result<Option<Vec<Rat>>> {
    let aug = m.augmented(rhs)?;
    let ech = bareiss_echelon(&aug);
    if ech.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); m.cols];
    for i in (0..ech.rank()).rev() {
        let pc = ech.pivots[i];
        let mut s = Rat::from(ech.mat.get(i, m.cols).clone());
        for j in pc + 1..m.cols {
            let e = ech.mat.get(i, j);
            if !e.is_zero() && !x[j].is_zero() {
                s -= Rat::from(e.clone()) * &x[j];
            }
        }
        x[pc] = s / Rat::from(ech.mat.get(i, pc).clone());
    }
    let check = m.mul_rat_vec(&x)?;
    let target: Vec<Rat> = rhs.iter().map(|v| Rat::from(v.clone())).collect();
    if check != target {
        return Err(Error::invariant("exact solve failed verification"));
    }
    Ok(Some(x))
}

/// How a rank claim was established.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RankMethod {
    Modular { prime: u64 },
    Exact,
}

/// Machine-checkable outcome of a rank computation. Modular certificates
/// only assert a lower bound and are conclusive exactly when
/// `full_row_rank`; deficiency claims always carry an exact left-kernel
/// witness (verified with `k^T M = 0` at construction time).
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub support_size: usize,
    pub m: Option<u64>,
    pub cols: usize,
    pub rank: usize,
    pub method: RankMethod,
    pub full_row_rank: bool,
    pub witness: Option<Vec<Int>>,
}

impl RankCertificate {
    /// JSON with structural counts as numbers and arbitrary-precision
    /// values (the prime, witness entries) as decimal strings.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "support_size": self.support_size,
            "cols": self.cols,
            "rank": self.rank,
            "method": match self.method {
                RankMethod::Modular { .. } => "modular",
                RankMethod::Exact => "exact",
            },
            "full_row_rank": self.full_row_rank,
        });
        if let Some(m) = self.m {
            v["m"] = json!(m);
        }
        if let RankMethod::Modular { prime } = self.method {
            v["prime"] = json!(prime.to_string());
        }
        if let Some(w) = &self.witness {
            v["witness"] = json!(w.iter().map(Int::to_string).collect::<Vec<_>>());
        }
        v
    }
}

/// Requested rank computation mode.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RankMode {
    Modular { prime: u64 },
    Exact,
}

/// Certified rank of an arbitrary integer matrix. Modular mode requires the
/// prime to come from the configured list unless `allow_unlisted` is set.
pub fn rank(
    m: &IntMatrix,
    mode: RankMode,
    primes: &PrimeList,
    allow_unlisted: bool,
) -> Result<RankCertificate> {
    match mode {
        RankMode::Modular { prime } => {
            if !allow_unlisted && !primes.contains(prime) {
                return Err(Error::Configuration(format!(
                    "prime {prime} is not in the configured prime list (pass the override to use it)"
                )));
            }
            let f = PrimeField::new(prime)?;
            let r = modular_row_rank(m, &f);
            Ok(RankCertificate {
                support_size: m.rows(),
                m: None,
                cols: m.cols(),
                rank: r,
                method: RankMethod::Modular { prime },
                full_row_rank: r == m.rows(),
                witness: None,
            })
        }
        RankMode::Exact => {
            let r = rank_exact(m);
            let witness = if r < m.rows() {
                Some(verified_left_kernel_vector(m)?)
            } else {
                None
            };
            Ok(RankCertificate {
                support_size: m.rows(),
                m: None,
                cols: m.cols(),
                rank: r,
                method: RankMethod::Exact,
                full_row_rank: r == m.rows(),
                witness,
            })
        }
    }
}

fn verified_left_kernel_vector(m: &IntMatrix) -> Result<Vec<Int>> {
    let basis = left_kernel_exact(m);
    let k = basis
        .into_iter()
        .next()
        .ok_or_else(|| Error::invariant("deficient rank but empty left kernel"))?;
    let product = m.left_mul_int_vec(&k)?;
    if product.iter().any(|v| !v.is_zero()) || k.iter().all(Int::is_zero) {
        return Err(Error::invariant("left-kernel witness failed verification"));
    }
    Ok(k)
}

/// Emptiness decision for the linear system of degree-d curves with
/// multiplicity >= m at a general point, over the given support.
#[derive(Clone, Debug)]
pub struct EmptinessOutcome {
    pub empty: bool,
    pub certificate: RankCertificate,
}

/// The system is empty iff B(s,m) has full row rank. Protocol: eliminate
/// modulo the first listed prime; full row rank certifies emptiness on its
/// own. Any deficiency falls back to exact elimination, and a nonempty
/// verdict carries a verified left-kernel witness — the coefficients, per
/// support point, of a section with multiplicity >= m at the general point.
pub fn linear_system_empty(
    s: &SupportSet,
    m: &Int,
    primes: &PrimeList,
) -> Result<EmptinessOutcome> {
    let mu = validate_multiplicity(m)?;
    if s.is_empty() {
        // no monomials of this degree at all: empty, rank 0 = row count
        return Ok(EmptinessOutcome {
            empty: true,
            certificate: RankCertificate {
                support_size: 0,
                m: Some(mu),
                cols: deriv_orders(m)?.len(),
                rank: 0,
                method: RankMethod::Exact,
                full_row_rank: true,
                witness: None,
            },
        });
    }
    let f = PrimeField::new(primes.first())?;
    let (mut data, cols) = power_matrix_mod(s, m, &f)?;
    let n = s.len();
    let modular_rank = eliminate_mod(&mut data, n, cols, &f);
    drop(data);
    if modular_rank == n {
        return Ok(EmptinessOutcome {
            empty: true,
            certificate: RankCertificate {
                support_size: n,
                m: Some(mu),
                cols,
                rank: n,
                method: RankMethod::Modular { prime: f.p },
                full_row_rank: true,
                witness: None,
            },
        });
    }
    // Modular deficiency proves nothing: settle the rank exactly.
    let b = build_b(s, m)?;
    let r = rank_exact(&b.matrix);
    let witness = if r < n {
        Some(verified_left_kernel_vector(&b.matrix)?)
    } else {
        None
    };
    Ok(EmptinessOutcome {
        empty: r == n,
        certificate: RankCertificate {
            support_size: n,
            m: Some(mu),
            cols,
            rank: r,
            method: RankMethod::Exact,
            full_row_rank: r == n,
            witness,
        },
    })
}

/// Coefficients (over deriv_orders(m)) of a polynomial of degree <= m-1
/// that evaluates to 1 at s[idx] and 0 at every other support point, or
/// None when no such polynomial exists. Exact; verified by multiplication.
pub fn separating_polynomial(s: &SupportSet, m: &Int, idx: usize) -> Result<Option<Vec<Rat>>> {
    if idx >= s.len() {
        return Err(Error::domain(format!(
            "point index {idx} out of range 0..{}",
            s.len()
        )));
    }
    let b = build_b(s, m)?;
    let rhs = b.matrix.unit_rhs(idx)?;
    solve_exact(&b.matrix, &rhs)
}
