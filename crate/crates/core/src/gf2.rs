//! Dense bit vectors and Gaussian elimination over GF(2).
//!
//! `Bits` is the workhorse for edge subsets, cycle-space coordinates, and the
//! rows of every GF(2) linear system in the crate. Rows are packed into `u64`
//! words; all the solvers below are plain row reduction with deterministic
//! (lowest-index) pivoting so that repeated runs give identical answers.

/// Fixed-length bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut b = Bits::new(len);
        for &i in idx {
            b.set(i, true);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let (w, b) = (i / 64, i % 64);
        if v {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the intersection with `other` (the GF(2) dot product).
    pub fn dot(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterate the indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bits{:?}", self.ones().collect::<Vec<_>>())
    }
}

/// Row echelon basis of a GF(2) row space with remembered pivot columns.
///
/// Rows are kept fully reduced (each pivot column is zero in every other
/// row), which makes membership tests a single sweep.
pub struct RowSpace {
    pub rows: Vec<Bits>,
    pub pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis in place; returns true if `v` was in the
    /// span (i.e. reduced to zero).
    pub fn reduce(&self, v: &mut Bits) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v.is_zero()
    }

    /// Insert `v` unless it is already in the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Bits) -> bool {
        if self.reduce(&mut v) {
            return false;
        }
        let p = v.first_one().expect("nonzero after reduction");
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        // keep rows sorted by pivot for determinism
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains(&self, v: &Bits) -> bool {
        let mut t = v.clone();
        self.reduce(&mut t)
    }
}

impl Default for RowSpace {
    fn default() -> Self {
        Self::new()
    }
}

/// One solution of the affine system `rows * x = rhs` over GF(2), with free
/// variables set to zero. Returns `None` when the system is inconsistent.
pub fn solve(ncols: usize, rows: &[(Bits, bool)]) -> Option<Bits> {
    // augmented elimination: store rhs as an extra trailing bit
    let mut aug: Vec<(Bits, bool)> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for (row, rhs) in rows {
        let mut r = row.clone();
        let mut b = *rhs;
        for ((prow, prhs), &p) in aug.iter().zip(&pivots) {
            if r.get(p) {
                r.xor_assign(prow);
                b ^= prhs;
            }
        }
        match r.first_one() {
            Some(p) => {
                for ((prow, prhs), _) in aug.iter_mut().zip(&pivots) {
                    if prow.get(p) {
                        prow.xor_assign(&r);
                        *prhs ^= b;
                    }
                }
                aug.push((r, b));
                pivots.push(p);
            }
            None => {
                if b {
                    return None;
                }
            }
        }
    }
    let mut x = Bits::new(ncols);
    for ((_, rhs), &p) in aug.iter().zip(&pivots) {
        if *rhs {
            x.set(p, true);
        }
    }
    Some(x)
}
