//! Dense exact linear algebra over cyclotomic numbers.
//!
//! Matrices carry a single field order; mixed-order operands are lifted to
//! the lcm conductor automatically.  Rank, determinant and inverse use
//! exact-pivot Gaussian elimination — no floating point anywhere on these
//! paths.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclofield::poly::CycPoly;
use crate::cyclofield::{conductor_normalize, CycNum, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CycMatrix {
    order: u64,
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn new(order: u64, rows: usize, cols: usize, mut entries: Vec<CycNum>) -> Result<Self> {
        let order = conductor_normalize(order);
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for e in entries.iter_mut() {
            *e = e.lift(order)?;
        }
        Ok(CycMatrix { order, rows, cols, entries })
    }

    pub fn from_rows(order: u64, rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        CycMatrix::new(order, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(order: u64, rows: usize, cols: usize) -> Self {
        let order = conductor_normalize(order);
        CycMatrix { order, rows, cols, entries: vec![CycNum::zero(order); rows * cols] }
    }

    pub fn identity(order: u64, n: usize) -> Self {
        let mut m = CycMatrix::zeros(order, n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = CycNum::one(m.order);
        }
        m
    }

    pub fn diag(order: u64, entries: Vec<CycNum>) -> Result<Self> {
        let n = entries.len();
        let mut m = CycMatrix::zeros(order, n, n);
        for (i, e) in entries.into_iter().enumerate() {
            *m.entry_mut(i, i) = e.lift(m.order)?;
        }
        Ok(m)
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(order: u64, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| CycNum::from_i64(v, order)))
            .collect();
        CycMatrix::new(order, r, c, entries).expect("literal matrix")
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut CycNum {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn lift(&self, order: u64) -> Result<CycMatrix> {
        let order = conductor_normalize(order);
        if order == self.order {
            return Ok(self.clone());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.lift(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix { order, rows: self.rows, cols: self.cols, entries })
    }

    /// Exact representation over `Q(zeta_target)` if every entry lies there.
    pub fn descend(&self, order: u64) -> Option<CycMatrix> {
        let order = conductor_normalize(order);
        if order == self.order {
            return Some(self.clone());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.descend(order))
            .collect::<Option<Vec<_>>>()?;
        Some(CycMatrix { order, rows: self.rows, cols: self.cols, entries })
    }

    fn unify(&self, other: &CycMatrix) -> (CycMatrix, CycMatrix) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let m = self.order.lcm(&other.order);
        (self.lift(m).expect("lcm"), other.lift(m).expect("lcm"))
    }

    pub fn map<F: Fn(&CycNum) -> CycNum>(&self, f: F) -> CycMatrix {
        let entries: Vec<CycNum> = self.entries.iter().map(f).collect();
        CycMatrix::new(self.order, self.rows, self.cols, entries)
            .unwrap_or_else(|_| CycMatrix::zeros(self.order, self.rows, self.cols))
    }

    pub fn add(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (mut a, b) = self.unify(other);
        for (x, y) in a.entries.iter_mut().zip(b.entries.iter()) {
            *x = &*x + y;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &CycMatrix) -> Result<CycMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycMatrix {
        CycMatrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> CycMatrix {
        let m = self.order.lcm(&c.order());
        let c = c.lift(m).expect("lcm");
        let a = self.lift(m).expect("lcm");
        CycMatrix {
            order: m,
            rows: a.rows,
            cols: a.cols,
            entries: a.entries.iter().map(|e| e * &c).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> CycMatrix {
        CycMatrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(r)).collect(),
        }
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.unify(other);
        let mut out = CycMatrix::zeros(a.order, a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.entry(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.entry(k, j);
                    if bkj.is_zero() {
                        continue;
                    }
                    let prod = aik * bkj;
                    let cur = out.entry(i, j);
                    *out.entry_mut(i, j) = cur + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u64) -> Result<CycMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut acc = CycMatrix::identity(self.order, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<CycNum> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut t = CycNum::zero(self.order);
        for i in 0..self.rows {
            t = &t + self.entry(i, i);
        }
        Ok(t)
    }

    /// Trace as an integer; errors if the trace is not a rational integer.
    pub fn trace_int(&self) -> Result<BigInt> {
        self.trace()?
            .to_integer()
            .ok_or_else(|| Error::Parse("trace is not an integer".into()))
    }

    /// Exact rank by Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<CycNum>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, p);
            let pivot_inv = work[rank][col].inv().expect("nonzero pivot");
            for r in rank + 1..self.rows {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = &work[r][col] * &pivot_inv;
                for c in col..self.cols {
                    let delta = &factor * &work[rank][c];
                    work[r][c] = &work[r][c] - &delta;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn det(&self) -> Result<CycNum> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut work: Vec<Vec<CycNum>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        let mut det = CycNum::one(self.order);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !work[r][col].is_zero()) else {
                return Ok(CycNum::zero(self.order));
            };
            if p != col {
                work.swap(col, p);
                det = -&det;
            }
            let pivot = work[col][col].clone();
            det = &det * &pivot;
            let pivot_inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = &work[r][col] * &pivot_inv;
                for c in col..n {
                    let delta = &factor * &work[col][c];
                    work[r][c] = &work[r][c] - &delta;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<CycMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut work: Vec<Vec<CycNum>> = (0..n)
            .map(|i| {
                let mut row: Vec<CycNum> = (0..n).map(|j| self.entry(i, j).clone()).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        CycNum::one(self.order)
                    } else {
                        CycNum::zero(self.order)
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !work[r][col].is_zero()) else {
                return Err(Error::Singular);
            };
            work.swap(col, p);
            let pivot_inv = work[col][col].inv().expect("nonzero pivot");
            for c in col..2 * n {
                work[col][c] = &work[col][c] * &pivot_inv;
            }
            for r in 0..n {
                if r == col || work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone();
                for c in col..2 * n {
                    let delta = &factor * &work[col][c];
                    work[r][c] = &work[r][c] - &delta;
                }
            }
        }
        let entries: Vec<CycNum> = work.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        CycMatrix::new(self.order, n, n, entries)
    }

    /// `e^n == e`, exactly.
    pub fn is_npotent(&self, n: u32) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.pow(n as u64)? == *self)
    }

    /// Frobenius norm of the complex embedding.
    pub fn frobenius_norm(&self, precision_bits: u32) -> f64 {
        let mut sum = 0.0f64;
        for e in &self.entries {
            let (v, _) = e.embed_complex(precision_bits);
            sum += v.norm_sqr();
        }
        sum.sqrt()
    }
}

impl PartialEq for CycMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let (a, b) = self.unify(other);
        a.entries == b.entries
    }
}

impl Eq for CycMatrix {}

/// Square block-diagonal assembly; blocks are lifted to a common order.
pub fn block_diag(blocks: &[CycMatrix]) -> Result<CycMatrix> {
    let mut order = 1u64;
    let mut size = 0usize;
    for b in blocks {
        if !b.is_square() {
            return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
        }
        order = order.lcm(&b.order());
        size += b.rows();
    }
    let mut out = CycMatrix::zeros(order, size, size);
    let mut off = 0usize;
    for b in blocks {
        let b = b.lift(order)?;
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                *out.entry_mut(off + i, off + j) = b.entry(i, j).clone();
            }
        }
        off += b.rows();
    }
    Ok(out)
}

/// `diag(a, b)` in block form.
pub fn direct_sum(a: &CycMatrix, b: &CycMatrix) -> Result<CycMatrix> {
    block_diag(&[a.clone(), b.clone()])
}

/// Assemble `[[a, b], [c, d]]` from four square blocks of equal size.
pub fn from_blocks_2x2(
    a: &CycMatrix,
    b: &CycMatrix,
    c: &CycMatrix,
    d: &CycMatrix,
) -> Result<CycMatrix> {
    let s = a.rows();
    for m in [a, b, c, d] {
        if !m.is_square() || m.rows() != s {
            return Err(Error::DimensionMismatch("2x2 block assembly needs equal square blocks".into()));
        }
    }
    let order = a
        .order()
        .lcm(&b.order())
        .lcm(&c.order())
        .lcm(&d.order());
    let mut out = CycMatrix::zeros(order, 2 * s, 2 * s);
    for (bi, bj, blk) in [(0, 0, a), (0, 1, b), (1, 0, c), (1, 1, d)] {
        let blk = blk.lift(order)?;
        for i in 0..s {
            for j in 0..s {
                *out.entry_mut(bi * s + i, bj * s + j) = blk.entry(i, j).clone();
            }
        }
    }
    Ok(out)
}

/// Horner evaluation of a cyclotomic-coefficient polynomial at a square
/// matrix.
pub fn poly_eval(p: &CycPoly, a: &CycMatrix) -> Result<CycMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let order = p.order().lcm(&a.order());
    let a = a.lift(order)?;
    let n = a.rows();
    let mut acc = CycMatrix::zeros(order, n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&a)?;
        let c = c.lift(order)?;
        for i in 0..n {
            let cur = acc.entry(i, i);
            *acc.entry_mut(i, i) = cur + &c;
        }
    }
    Ok(acc)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Int(i64),
    Str(String),
    Full { m: u64, c: Vec<CoeffRepr> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Str(String),
}

impl CoeffRepr {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            CoeffRepr::Int(v) => Ok(Rational::from_integer((*v).into())),
            CoeffRepr::Str(s) => crate::cyclofield::parse_rational(s),
        }
    }
}

#[derive(Deserialize)]
struct MatrixRepr {
    m: u64,
    rows: Vec<Vec<EntryRepr>>,
}

impl Serialize for CycMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::{SerializeSeq, SerializeStruct};

        struct Row<'a>(&'a CycMatrix, usize);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.cols))?;
                for j in 0..self.0.cols {
                    let e = self.0.entry(self.1, j);
                    match e.as_rational() {
                        Some(r) => seq.serialize_element(&r.to_string())?,
                        None => seq.serialize_element(e)?,
                    }
                }
                seq.end()
            }
        }

        struct Rows<'a>(&'a CycMatrix);
        impl Serialize for Rows<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.rows))?;
                for i in 0..self.0.rows {
                    seq.serialize_element(&Row(self.0, i))?;
                }
                seq.end()
            }
        }

        let mut st = serializer.serialize_struct("CycMatrix", 2)?;
        st.serialize_field("m", &self.order)?;
        st.serialize_field("rows", &Rows(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.m < 1 {
            return Err(D::Error::custom("order must be >= 1"));
        }
        let order = conductor_normalize(repr.m);
        let nrows = repr.rows.len();
        let ncols = repr.rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in &repr.rows {
            if row.len() != ncols {
                return Err(D::Error::custom("ragged matrix rows"));
            }
            for e in row {
                let v = match e {
                    EntryRepr::Int(v) => {
                        CycNum::from_rational(Rational::from_integer((*v).into()), order)
                    }
                    EntryRepr::Str(s) => {
                        let r = crate::cyclofield::parse_rational(s).map_err(D::Error::custom)?;
                        CycNum::from_rational(r, order)
                    }
                    EntryRepr::Full { m, c } => {
                        let coeffs = c
                            .iter()
                            .map(|x| x.to_rational())
                            .collect::<Result<Vec<_>>>()
                            .map_err(D::Error::custom)?;
                        let num = CycNum::new(*m, coeffs);
                        num.lift(order).map_err(|e| D::Error::custom(e.to_string()))?
                    }
                };
                entries.push(v);
            }
        }
        CycMatrix::new(order, nrows, ncols, entries).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The explicit 3x3 quadripotent over `Q(i)` whose class generates the odd
/// part of the n = 4 invariant: `diag(1) (+) [[0, i], [i, -1]]`.
pub fn generator_quadripotent_q4() -> CycMatrix {
    let i = CycNum::root_of_unity(4, 1);
    let zero = CycNum::zero(4);
    let one = CycNum::one(4);
    CycMatrix::from_rows(
        4,
        vec![
            vec![one.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), i.clone()],
            vec![zero.clone(), i, -&one],
        ],
    )
    .expect("3x3 literal")
}
