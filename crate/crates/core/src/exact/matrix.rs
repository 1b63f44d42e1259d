use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{checked_pow, ensure_within_cap, sum, Rational};
use crate::{Error, Result};

/// Dense rational matrix with no stochasticity requirement.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Rational::one());
        }
        m
    }

    /// Row-major construction.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &Rational> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn column_sum(&self, col: usize) -> Rational {
        sum(self.column(col))
    }

    /// Kronecker product. Entry `((ia, ib), (ja, jb))` is `a[ia, ja] * b[ib, jb]`
    /// with the left factor most significant in both row and column index.
    pub fn tensor(&self, other: &RationalMatrix) -> RationalMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = RationalMatrix::zeros(rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a.is_zero() {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        let b = other.get(ib, jb);
                        if !b.is_zero() {
                            out.set(ia * other.rows + ib, ja * other.cols + jb, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &RationalMatrix) -> Result<Rational> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::Dimension(format!(
                "trace of {}x{} times {}x{} is undefined",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = Rational::zero();
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, r);
                if !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Rational {
        sum((0..self.rows.min(self.cols)).map(|k| self.get(k, k)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// First (row, col) holding a negative entry.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|v| v.is_negative())
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn is_column_stochastic(&self) -> bool {
        self.is_nonnegative() && (0..self.cols).all(|c| self.column_sum(c).is_one())
    }

    /// True iff every entry is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.data.iter().all(|v| v.is_zero() || v.is_one())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix({}x{})", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Probability vector over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticVector(Vec<Rational>);

impl StochasticVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.iter().any(|v| v.is_negative()) {
            return Err(Error::Invalid("negative probability".into()));
        }
        if !sum(&entries).is_one() {
            return Err(Error::Invalid(format!(
                "probabilities sum to {}, expected 1",
                sum(&entries)
            )));
        }
        Ok(Self(entries))
    }

    /// The deterministic vector encoding `value`.
    pub fn basis(size: usize, value: usize) -> Self {
        let mut v = vec![Rational::zero(); size];
        v[value] = Rational::one();
        Self(v)
    }

    pub fn uniform(size: usize) -> Self {
        let p = Rational::new(1.into(), (size as i64).into());
        Self(vec![p; size])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Column-stochastic matrix: rows index the output alphabet, columns the
/// input alphabet, and column `j` is the distribution of the output given
/// input `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticMatrix(RationalMatrix);

impl StochasticMatrix {
    pub fn new(matrix: RationalMatrix) -> Result<Self> {
        if let Some((r, c)) = matrix.first_negative() {
            return Err(Error::Invalid(format!("negative entry at ({r}, {c})")));
        }
        for c in 0..matrix.cols() {
            let s = matrix.column_sum(c);
            if !s.is_one() {
                return Err(Error::Invalid(format!("column {c} sums to {s}, expected 1")));
            }
        }
        Ok(Self(matrix))
    }

    pub fn identity(n: usize) -> Self {
        Self(RationalMatrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        self.0.get(row, col)
    }

    pub fn as_matrix(&self) -> &RationalMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RationalMatrix {
        self.0
    }

    pub fn column(&self, col: usize) -> StochasticVector {
        StochasticVector(self.0.column(col).cloned().collect())
    }

    /// Kronecker product; stays column-stochastic.
    pub fn tensor(&self, other: &StochasticMatrix) -> StochasticMatrix {
        StochasticMatrix(self.0.tensor(&other.0))
    }

    pub fn apply(&self, v: &StochasticVector) -> Result<StochasticVector> {
        if v.len() != self.cols() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols()
            )));
        }
        let out = (0..self.rows())
            .map(|r| sum(&(0..self.cols()).map(|c| self.get(r, c) * &v.0[c]).collect::<Vec<_>>()))
            .collect();
        Ok(StochasticVector(out))
    }

    pub fn is_deterministic(&self) -> bool {
        self.0.is_zero_one()
    }
}

/// Free function form of [`StochasticMatrix::tensor`].
pub fn tensor(a: &StochasticMatrix, b: &StochasticMatrix) -> StochasticMatrix {
    a.tensor(b)
}

/// Total map between finite alphabets `{0..in_size} -> {0..out_size}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicOp {
    out_size: usize,
    table: Vec<usize>,
}

impl DeterministicOp {
    pub fn new(out_size: usize, table: Vec<usize>) -> Result<Self> {
        if table.is_empty() || out_size == 0 {
            return Err(Error::Invalid("alphabets must be non-empty".into()));
        }
        if let Some(v) = table.iter().find(|&&v| v >= out_size) {
            return Err(Error::Invalid(format!("value {v} outside output alphabet of size {out_size}")));
        }
        Ok(Self { out_size, table })
    }

    pub fn identity(n: usize) -> Self {
        Self { out_size: n, table: (0..n).collect() }
    }

    /// `i -> i + 1 mod n`; the bit flip for `n = 2`.
    pub fn not(n: usize) -> Self {
        Self { out_size: n, table: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn constant(in_size: usize, out_size: usize, value: usize) -> Self {
        assert!(value < out_size);
        Self { out_size, table: vec![value; in_size] }
    }

    pub fn in_size(&self) -> usize {
        self.table.len()
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, input: usize) -> usize {
        self.table[input]
    }

    pub fn to_matrix(&self) -> StochasticMatrix {
        let mut m = RationalMatrix::zeros(self.out_size, self.table.len());
        for (i, &o) in self.table.iter().enumerate() {
            m.set(o, i, Rational::one());
        }
        StochasticMatrix(m)
    }

    /// `d_id`, `d_not`, `d_0`, `d_1` for bit maps, the truth table otherwise.
    pub fn name(&self) -> String {
        if self.table.len() == 2 && self.out_size == 2 {
            match self.table.as_slice() {
                [0, 1] => return "d_id".into(),
                [1, 0] => return "d_not".into(),
                [0, 0] => return "d_0".into(),
                [1, 1] => return "d_1".into(),
                _ => {}
            }
        }
        let t: Vec<String> = self.table.iter().map(|v| v.to_string()).collect();
        format!("[{}]", t.join(","))
    }

    /// Inverse of [`DeterministicOp::name`] for bit maps.
    pub fn from_bit_name(name: &str) -> Option<Self> {
        let table = match name {
            "d_id" | "id" => vec![0, 1],
            "d_not" | "not" => vec![1, 0],
            "d_0" | "0" => vec![0, 0],
            "d_1" | "1" => vec![1, 1],
            _ => return None,
        };
        Some(Self { out_size: 2, table })
    }
}

impl fmt::Debug for DeterministicOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// All `out_size^in_size` total maps, ordered lexicographically by truth
/// table `(f(0), f(1), ...)`. For bits the order is `d_0, d_id, d_not, d_1`.
pub fn enumerate_deterministic_ops(
    in_size: usize,
    out_size: usize,
    cap: u64,
) -> Result<Vec<DeterministicOp>> {
    if in_size == 0 || out_size == 0 {
        return Err(Error::Invalid("alphabet sizes must be at least 1".into()));
    }
    let count = ensure_within_cap(checked_pow(out_size, in_size), cap)? as usize;
    let mut ops = Vec::with_capacity(count);
    let mut table = vec![0usize; in_size];
    for _ in 0..count {
        ops.push(DeterministicOp { out_size, table: table.clone() });
        for slot in table.iter_mut().rev() {
            *slot += 1;
            if *slot < out_size {
                break;
            }
            *slot = 0;
        }
    }
    Ok(ops)
}
