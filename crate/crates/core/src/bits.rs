//! Bit-packed GF(2) vectors and matrices.
//!
//! Rows are stored as contiguous `u64` words so that row operations are plain
//! XOR loops. Elimination always pivots on the lowest available column and the
//! lowest available row, which makes every derived basis reproducible.

use std::fmt;

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVec::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        BitVec { len, words }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// Parity of the overlap `<self, other>` over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Number of positions set in both vectors.
    pub fn overlap(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + bit)
                }
            })
        })
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copies the bits at `positions` (in order) into a new vector.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(j, true);
            }
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let mut out = BitVec::zeros(end - start);
        for i in self.iter_ones().filter(|&i| i >= start && i < end) {
            out.set(i - start, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense GF(2) matrix with bit-packed rows in one flat buffer.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn with_cols(cols: usize) -> Self {
        BitMatrix::zeros(0, cols)
    }

    pub fn from_rows<'a>(cols: usize, rows: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut m = BitMatrix::with_cols(cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_row(&mut self, row: &BitVec) {
        assert_eq!(row.len(), self.cols, "row length does not match matrix width");
        self.data.extend_from_slice(row.words());
        self.rows += 1;
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }


    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let idx = r * self.stride + c / WORD;
        let mask = 1u64 << (c % WORD);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]` restricted to words `from_word..`.
    #[inline]
    fn xor_row_into(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        debug_assert_ne!(dst, src);
        let (d, sr) = if dst < src {
            let (head, tail) = self.data.split_at_mut(src * s);
            (&mut head[dst * s..(dst + 1) * s], &tail[..s])
        } else {
            let (head, tail) = self.data.split_at_mut(dst * s);
            (&mut tail[..s], &head[src * s..(src + 1) * s])
        };
        for (a, b) in d[from_word..].iter_mut().zip(&sr[from_word..]) {
            *a ^= *b;
        }
    }

    /// Rank over GF(2). Consumes a scratch copy; the receiver is untouched.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon_in_place(false, None).len()
    }

    /// Gaussian elimination in place. Returns pivot columns in order. With
    /// `reduce` the result is reduced row echelon form; otherwise only rows
    /// below each pivot are cleared. `track` receives the same row operations.
    fn echelon_in_place(&mut self, reduce: bool, mut track: Option<&mut BitMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut c = 0;
        while r < self.rows && c < self.cols {
            let w = c / WORD;
            let bit = 1u64 << (c % WORD);
            let found = (r..self.rows).find(|&i| self.data[i * self.stride + w] & bit != 0);
            let Some(p) = found else {
                c += 1;
                continue;
            };
            self.swap_rows(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(r, p);
            }
            let start = if reduce { 0 } else { r + 1 };
            for i in start..self.rows {
                if i != r && self.data[i * self.stride + w] & bit != 0 {
                    self.xor_row_into(i, r, w);
                    if let Some(t) = track.as_deref_mut() {
                        t.xor_row_into(i, r, 0);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            c += 1;
        }
        pivots
    }

    /// Rank of the matrix with every column outside `mask` zeroed. Equal to
    /// the rank of the selected columns, without the gather.
    pub fn rank_masked(&self, mask: &BitVec) -> usize {
        assert_eq!(mask.len(), self.cols, "mask length does not match matrix width");
        let mut m = self.clone();
        for r in 0..m.rows {
            for (w, mw) in m.data[r * m.stride..(r + 1) * m.stride].iter_mut().zip(mask.words()) {
                *w &= mw;
            }
        }
        m.echelon_in_place(false, None).len()
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.echelon_in_place(true, None);
        m.truncate(pivots.len());
        Echelon { matrix: m, pivots }
    }

    /// Reduced row echelon form that also records, for every output row
    /// (including zero rows), which input rows were summed to produce it.
    pub fn rref_tracked(&self) -> TrackedEchelon {
        let mut m = self.clone();
        let mut t = BitMatrix::identity(self.rows);
        let pivots = m.echelon_in_place(true, Some(&mut t));
        TrackedEchelon {
            reduced: m,
            transform: t,
            pivots,
        }
    }

    fn truncate(&mut self, rows: usize) {
        self.rows = rows;
        self.data.truncate(rows * self.stride);
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let e = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (i, &p) in e.pivots.iter().enumerate() {
                if e.matrix.get(i, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// `self * v` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= a & b;
            }
            if acc.count_ones() & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Copies the given columns (in order) into a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            let src = self.row_words(r);
            let dst_stride = out.stride;
            let dst = &mut out.data[r * dst_stride..(r + 1) * dst_stride];
            for (j, &c) in cols.iter().enumerate() {
                if (src[c / WORD] >> (c % WORD)) & 1 == 1 {
                    dst[j / WORD] |= 1u64 << (j % WORD);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                out.set(c, r, true);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form: independent rows plus their pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivot rows, returning the residue.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out.get(p) {
                for (a, b) in out.words.iter_mut().zip(self.matrix.row_words(i)) {
                    *a ^= *b;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Elimination result that remembers how each reduced row was formed.
#[derive(Clone, Debug)]
pub struct TrackedEchelon {
    /// All rows after elimination; the first `pivots.len()` are nonzero.
    pub reduced: BitMatrix,
    /// Row `i` lists the input rows whose sum is `reduced` row `i`.
    pub transform: BitMatrix,
    pub pivots: Vec<usize>,
}

impl TrackedEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Combinations of input rows that sum to zero (a basis of the left kernel).
    pub fn dependencies(&self) -> Vec<BitVec> {
        (self.rank()..self.reduced.rows())
            .map(|r| self.transform.row(r))
            .collect()
    }

    /// Solves `sum_i c_i * input_i = v`, returning the combination `c` if one exists.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let mut residue = v.clone();
        let mut combo = BitVec::zeros(self.transform.cols());
        for (i, &p) in self.pivots.iter().enumerate() {
            if residue.get(p) {
                for (a, b) in residue.words.iter_mut().zip(self.reduced.row_words(i)) {
                    *a ^= *b;
                }
                for (a, b) in combo.words.iter_mut().zip(self.transform.row_words(i)) {
                    *a ^= *b;
                }
            }
        }
        residue.is_zero().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    // Rank by brute force: size of the row span, counted by enumeration.
    fn brute_rank(m: &BitMatrix) -> usize {
        let rows: Vec<BitVec> = m.iter_rows().collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut v = BitVec::zeros(m.cols());
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(r);
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.gen_range(1..10);
            let cols = rng.gen_range(1..140);
            let m = random_matrix(&mut rng, rows, cols, 0.3);
            assert_eq!(m.rank(), brute_rank(&m));
        }
    }

    #[test]
    fn masked_rank_matches_selected_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let m = random_matrix(&mut rng, 15, 100, 0.3);
            let cols: Vec<usize> = (0..100).filter(|_| rng.gen_bool(0.5)).collect();
            let mask = BitVec::from_indices(100, cols.iter().copied());
            assert_eq!(m.rank_masked(&mask), m.select_columns(&cols).rank());
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let m = random_matrix(&mut rng, 12, 90, 0.2);
            let k = m.kernel();
            assert_eq!(k.len() + m.rank(), m.cols());
            for v in &k {
                assert!(m.mul_vec(v).is_zero());
            }
        }
    }

    #[test]
    fn tracked_solve_and_dependencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 20, 15, 0.4);
        let t = m.rref_tracked();
        for dep in t.dependencies() {
            let mut acc = BitVec::zeros(15);
            for i in dep.iter_ones() {
                acc.xor_assign(&m.row(i));
            }
            assert!(acc.is_zero());
        }
        let mut target = m.row(3);
        target.xor_assign(&m.row(8));
        let c = t.solve(&target).expect("in span");
        let mut acc = BitVec::zeros(15);
        for i in c.iter_ones() {
            acc.xor_assign(&m.row(i));
        }
        assert_eq!(acc, target);
    }

    #[test]
    fn select_and_iter_ones() {
        let v = BitVec::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.select(&[129, 1, 64]).iter_ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(v.first_one(), Some(0));
    }
}
