//! Dense and sparse linear algebra over a prime field, plus homology of
//! finite cochain complexes.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("{0} is not a prime in [2, 2^32)")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d^{0} composed with d^{1} is nonzero")]
    NonzeroComposition(i32, i32),
}

/// The field F_p. Moduli are kept below 2^32 so products fit in a u64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Result<u64, LinalgError> {
        let a = a % self.p;
        if a == 0 {
            return Err(LinalgError::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn to_i64(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn sign(&self, negative: bool) -> u64 {
        if negative {
            self.p - 1
        } else {
            1
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

pub fn field_inverse(a: u64, field: PrimeField) -> Result<u64, LinalgError> {
    field.inv(a)
}

/// Sparse vector: (index, nonzero value) pairs sorted by index.
pub type SparseVec = Vec<(usize, u64)>;

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&a| field.from_i64(a)).collect();
        Ok(FieldMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: u64) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(self.data[i], v % self.field.p);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let i = r * other.cols + c;
                        out.data[i] = f.add(out.data[i], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..m.cols {
                    m.data.swap(pr * m.cols + k, r * m.cols + k);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for k in c..m.cols {
                let i = r * m.cols + k;
                m.data[i] = f.mul(m.data[i], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let a = m.get(i, c);
                if a == 0 {
                    continue;
                }
                let na = f.neg(a);
                for k in c..m.cols {
                    let b = m.data[r * m.cols + k];
                    if b != 0 {
                        let idx = i * m.cols + k;
                        m.data[idx] = f.add(m.data[idx], f.mul(na, b));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            e.insert_dense(self.row(r).to_vec());
        }
        e.rank()
    }

    /// Basis of {v : Mv = 0} as column vectors of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut s = SparseMatrix::zeros(self.field, self.rows, self.cols);
        for c in 0..self.cols {
            let col = (0..self.rows)
                .filter_map(|r| {
                    let a = self.get(r, c);
                    (a != 0).then_some((r, a))
                })
                .collect();
            s.columns[c] = col;
        }
        s
    }
}

/// Column-oriented sparse matrix: column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    columns: Vec<SparseVec>,
}

impl From<&FieldMatrix> for SparseMatrix {
    fn from(m: &FieldMatrix) -> Self {
        m.to_sparse()
    }
}

impl From<FieldMatrix> for SparseMatrix {
    fn from(m: FieldMatrix) -> Self {
        m.to_sparse()
    }
}

impl SparseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, columns: vec![Vec::new(); cols] }
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().flatten().all(|&(r, a)| r < rows && a != 0 && a < field.p));
        SparseMatrix { field, rows, columns }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn set_column(&mut self, c: usize, v: SparseVec) {
        self.columns[c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.rows);
        for c in &self.columns {
            e.insert(c);
        }
        e.rank()
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols() != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let cols = other.columns.iter().map(|v| self.apply(v)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, columns: cols })
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let f = self.field;
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for &(k, a) in v {
            for &(r, b) in &self.columns[k] {
                let e = acc.entry(r).or_insert(0);
                *e = f.add(*e, f.mul(a, b));
            }
        }
        acc.into_iter().filter(|&(_, a)| a != 0).collect()
    }

    pub fn to_dense(&self) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(self.field, self.rows, self.cols());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, a) in col {
                m.set(r, c, a);
            }
        }
        m
    }
}

/// Incrementally built echelon basis of a subspace of F_p^dim.
///
/// Each stored row has leading entry 1 at its pivot and is reduced against
/// the pivots that existed when it was inserted. Reduction against all rows
/// still yields a unique normal form supported off the pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    dim: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Echelon { field, dim, pivot_row: vec![None; dim], rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    /// Subtracts stored rows from `acc` until no pivot column is nonzero.
    pub fn reduce_dense(&self, acc: &mut [u64]) {
        let f = self.field;
        let p = f.p;
        for c in 0..self.dim {
            let a = acc[c];
            if a == 0 {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let na = p - a;
                for &(k, b) in &self.rows[r] {
                    acc[k] = (acc[k] + na * b) % p;
                }
            }
        }
    }

    pub fn insert(&mut self, v: &SparseVec) -> bool {
        if v.is_empty() {
            return false;
        }
        let mut acc = vec![0u64; self.dim];
        for &(k, a) in v {
            acc[k] = a;
        }
        self.insert_dense(acc)
    }

    pub fn insert_dense(&mut self, mut acc: Vec<u64>) -> bool {
        self.reduce_dense(&mut acc);
        let Some(lead) = acc.iter().position(|&a| a != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(acc[lead]).expect("nonzero lead");
        let row: SparseVec = acc
            .iter()
            .enumerate()
            .skip(lead)
            .filter(|&(_, &a)| a != 0)
            .map(|(k, &a)| (k, f.mul(a, inv)))
            .collect();
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut acc = vec![0u64; self.dim];
        for &(k, a) in v {
            acc[k] = a;
        }
        self.reduce_dense(&mut acc);
        acc.iter().all(|&a| a == 0)
    }

    /// Normal form of `v`, written in the coordinates of the non-pivot columns.
    pub fn normal_form(&self, v: &SparseVec, non_pivot_index: &[Option<usize>]) -> SparseVec {
        let mut acc = vec![0u64; self.dim];
        for &(k, a) in v {
            acc[k] = self.field.add(acc[k], a);
        }
        self.reduce_dense(&mut acc);
        acc.iter()
            .enumerate()
            .filter(|&(_, &a)| a != 0)
            .map(|(k, &a)| (non_pivot_index[k].expect("reduced vector off pivots"), a))
            .collect()
    }
}

/// A bounded cochain complex C^lo -> C^{lo+1} -> ... of F_p vector spaces.
#[derive(Debug, Clone)]
pub struct ChainComplexSpec {
    field: PrimeField,
    lo: i32,
    dims: Vec<usize>,
    differentials: Vec<Option<SparseMatrix>>,
}

impl ChainComplexSpec {
    pub fn new(field: PrimeField, lo: i32, dims: Vec<usize>) -> Self {
        let n = dims.len();
        ChainComplexSpec { field, lo, dims, differentials: vec![None; n] }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, i: i32) -> usize {
        let k = i - self.lo;
        if k < 0 || k as usize >= self.dims.len() {
            0
        } else {
            self.dims[k as usize]
        }
    }

    pub fn differential(&self, i: i32) -> Option<&SparseMatrix> {
        let k = i - self.lo;
        if k < 0 {
            return None;
        }
        self.differentials.get(k as usize).and_then(|d| d.as_ref())
    }

    /// Sets d^i : C^i -> C^{i+1}.
    pub fn set_differential(&mut self, i: i32, m: impl Into<SparseMatrix>) -> Result<(), LinalgError> {
        let m = m.into();
        let k = i - self.lo;
        if k < 0 || k as usize >= self.dims.len() {
            return Err(LinalgError::Shape(format!("index {i} outside complex")));
        }
        if m.cols() != self.dim(i) || m.rows() != self.dim(i + 1) {
            return Err(LinalgError::Shape(format!(
                "d^{i} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                self.dim(i + 1),
                self.dim(i)
            )));
        }
        self.differentials[k as usize] = Some(m);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        for i in self.lo..self.hi() {
            if let (Some(a), Some(b)) = (self.differential(i), self.differential(i + 1)) {
                if !b.mul(a)?.is_zero() {
                    return Err(LinalgError::NonzeroComposition(i + 1, i));
                }
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|i| if i.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(i) as i64)
            .sum()
    }
}

pub fn chain_homology_dims(c: &ChainComplexSpec) -> Result<BTreeMap<i32, usize>, LinalgError> {
    c.validate()?;
    let ranks: Vec<usize> = (c.lo..=c.hi())
        .map(|i| c.differential(i).map_or(0, |d| d.rank()))
        .collect();
    let rank_at = |i: i32| -> usize {
        let k = i - c.lo;
        if k < 0 {
            0
        } else {
            ranks[k as usize]
        }
    };
    Ok((c.lo..=c.hi())
        .map(|i| (i, c.dim(i) - rank_at(i) - rank_at(i - 1)))
        .collect())
}
