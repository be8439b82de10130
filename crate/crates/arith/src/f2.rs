//! Linear algebra over F_2 with packed 64-bit words.

use std::fmt;

/// A vector over F_2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Low `len` bits of an integer, bit i is coordinate i.
    pub fn from_u64(x: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { x } else { x & ((1u64 << len) - 1) };
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index out of range");
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "index out of range");
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index out of range");
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, o: &F2Vec) {
        assert_eq!(self.len, o.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    pub fn add(&self, o: &F2Vec) -> F2Vec {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn dot(&self, o: &F2Vec) -> bool {
        assert_eq!(self.len, o.len, "length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&o.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Concatenation `self || o`.
    pub fn concat(&self, o: &F2Vec) -> F2Vec {
        let mut r = F2Vec::zeros(self.len + o.len);
        for i in 0..self.len {
            r.set(i, self.get(i));
        }
        for i in 0..o.len {
            r.set(self.len + i, o.get(i));
        }
        r
    }

    /// Coordinates `start..start+len`.
    pub fn slice(&self, start: usize, len: usize) -> F2Vec {
        let mut r = F2Vec::zeros(len);
        for i in 0..len {
            r.set(i, self.get(start + i));
        }
        r
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Row-major matrix over F_2.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vec>,
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: F2Matrix,
    pub pivots: Vec<usize>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            cols,
            rows: vec![F2Vec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix {
            cols: n,
            rows: (0..n).map(|i| F2Vec::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        F2Matrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b)
    }

    pub fn push_row(&mut self, r: F2Vec) {
        assert_eq!(r.len(), self.cols, "row length mismatch");
        self.rows.push(r);
    }

    /// Matrix-vector product `M v`.
    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Row-vector product `v^T M`.
    pub fn vec_mul(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.rows.len());
        let mut out = F2Vec::zeros(self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            if v.get(i) {
                out.add_assign(r);
            }
        }
        out
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if r.get(j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Reduced row echelon form; zero rows are dropped.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(k) = (r..rows.len()).find(|&k| rows[k].get(c)) else {
                continue;
            };
            rows.swap(r, k);
            let pr = rows[r].clone();
            for (k, row) in rows.iter_mut().enumerate() {
                if k != r && row.get(c) {
                    row.add_assign(&pr);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        Echelon {
            matrix: F2Matrix {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<F2Vec> {
        let e = self.rref();
        let mut out = Vec::new();
        let is_pivot: Vec<bool> = {
            let mut b = vec![false; self.cols];
            for &p in &e.pivots {
                b[p] = true;
            }
            b
        };
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = F2Vec::unit(self.cols, free);
            for (row, &pc) in e.matrix.rows.iter().zip(&e.pivots) {
                if row.get(free) {
                    v.set(pc, true);
                }
            }
            out.push(v);
        }
        out
    }

    /// Basis of the left null space `{v : v^T M = 0}`.
    pub fn left_kernel(&self) -> Vec<F2Vec> {
        self.transpose().kernel()
    }

    /// Some `x` with `M x = b`, if one exists.
    pub fn solve(&self, b: &F2Vec) -> Option<F2Vec> {
        assert_eq!(b.len(), self.rows.len());
        let aug_rows: Vec<F2Vec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&F2Vec::from_bits(&[b.get(i)])))
            .collect();
        let aug = F2Matrix::from_rows(self.cols + 1, aug_rows);
        let e = aug.rref();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = F2Vec::zeros(self.cols);
        for (row, &pc) in e.matrix.rows.iter().zip(&e.pivots) {
            if row.get(self.cols) {
                x.set(pc, true);
            }
        }
        Some(x)
    }
}

/// Incremental span membership and coordinates with respect to inserted vectors.
#[derive(Clone, Debug)]
pub struct SpanTracker {
    len: usize,
    /// reduced basis rows, their pivot, and the combination of inserted generators
    rows: Vec<(F2Vec, usize, F2Vec)>,
    count: usize,
    capacity: usize,
}

impl SpanTracker {
    /// `capacity` bounds the number of independent generators that can be recorded.
    pub fn new(len: usize, capacity: usize) -> Self {
        SpanTracker {
            len,
            rows: Vec::new(),
            count: 0,
            capacity,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &F2Vec) -> (F2Vec, F2Vec) {
        let mut r = v.clone();
        let mut combo = F2Vec::zeros(self.capacity);
        for (row, piv, c) in &self.rows {
            if r.get(*piv) {
                r.add_assign(row);
                combo.add_assign(c);
            }
        }
        (r, combo)
    }

    /// Inserts `v`; returns true if it was independent of the current span.
    pub fn insert(&mut self, v: &F2Vec) -> bool {
        assert_eq!(v.len(), self.len);
        let (r, mut combo) = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(piv) => {
                assert!(self.count < self.capacity, "span tracker capacity exceeded");
                combo.set(self.count, true);
                self.count += 1;
                // keep rows fully reduced on the new pivot
                for (row, _, c) in self.rows.iter_mut() {
                    if row.get(piv) {
                        row.add_assign(&r);
                        c.add_assign(&combo);
                    }
                }
                self.rows.push((r, piv, combo));
                true
            }
        }
    }

    /// A reduced basis of the current span.
    pub fn basis(&self) -> Vec<F2Vec> {
        self.rows.iter().map(|r| r.0.clone()).collect()
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Expresses `v` in terms of the independent generators in insertion order.
    pub fn coordinates(&self, v: &F2Vec) -> Option<F2Vec> {
        let (r, combo) = self.reduce(v);
        if r.is_zero() {
            let mut out = F2Vec::zeros(self.count);
            for i in 0..self.count {
                out.set(i, combo.get(i));
            }
            Some(out)
        } else {
            None
        }
    }
}
