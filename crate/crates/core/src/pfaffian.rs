//! Skew-symmetric matrices and Pfaffians over exchangeable scalar types.
//!
//! The generic path is Parlett–Reid tridiagonalization (congruence by Gauss
//! transforms, rank-two updates of the trailing block). Floating point uses
//! it directly with magnitude pivoting; exact rationals route through a
//! residue pipeline instead: clear denominators, compute the integer
//! Pfaffian modulo enough 62-bit primes, and reassemble by the Chinese
//! remainder theorem. A certified magnitude bound rides along with the
//! matrix so the residue pipeline knows how many primes are enough.

use crate::error::Error;
use crate::gf2::Bits;
use crate::graph::Multigraph;
use crate::{Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Div, Neg, Sub};

/// Scalar types the solver can evaluate over.
///
/// `pfaffian_of` has a generic elimination default; exact rationals override
/// it with the residue pipeline. `magnitude_bound` lets exact types report
/// |self| for prime-count planning; approximate types return `None`.
pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + std::fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(x: &Rational) -> Self;

    /// Approximate magnitude used for pivot selection.
    fn pivot_score(&self) -> f64;

    /// Exact |self| when the type can certify one.
    fn magnitude_bound(&self) -> Option<Rational>;

    fn pfaffian_of(m: &SkewMatrix<Self>) -> Self {
        pfaffian_elimination(m)
    }
}

impl Scalar for f64 {
    fn from_rational(x: &Rational) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }

    fn pivot_score(&self) -> f64 {
        self.abs()
    }

    fn magnitude_bound(&self) -> Option<Rational> {
        None
    }
}

impl Scalar for f32 {
    fn from_rational(x: &Rational) -> Self {
        x.to_f64().unwrap_or(f64::NAN) as f32
    }

    fn pivot_score(&self) -> f64 {
        self.abs() as f64
    }

    fn magnitude_bound(&self) -> Option<Rational> {
        None
    }
}

impl Scalar for Rational {
    fn from_rational(x: &Rational) -> Self {
        x.clone()
    }

    fn pivot_score(&self) -> f64 {
        // only ordering matters; saturate huge values instead of failing
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn magnitude_bound(&self) -> Option<Rational> {
        Some(self.abs())
    }

    fn pfaffian_of(m: &SkewMatrix<Self>) -> Self {
        modular::pfaffian_rational(m)
    }
}

/// Dense skew-symmetric matrix (`a[j][i] = -a[i][j]`, zero diagonal).
#[derive(Clone, Debug)]
pub struct SkewMatrix<S> {
    dim: usize,
    data: Vec<S>,
    /// Certified bound on |Pf|, when the builder knows one.
    pub value_bound: Option<Rational>,
}

impl<S: Scalar> SkewMatrix<S> {
    pub fn zero(dim: usize) -> Self {
        SkewMatrix {
            dim,
            data: vec![S::zero(); dim * dim],
            value_bound: None,
        }
    }

    /// Build from strictly-upper entries `(i, j, v)` with `i < j`.
    pub fn from_upper(dim: usize, entries: &[(usize, usize, S)]) -> Self {
        let mut m = SkewMatrix::zero(dim);
        for (i, j, v) in entries {
            m.add_pair(*i, *j, v.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    /// Add `v` at `(i, j)` and `-v` at `(j, i)`.
    pub fn add_pair(&mut self, i: usize, j: usize, v: S) {
        assert!(i != j, "diagonal of a skew matrix stays zero");
        let n = self.dim;
        self.data[i * n + j] = self.data[i * n + j].clone() + v.clone();
        self.data[j * n + i] = self.data[j * n + i].clone() - v;
    }

    /// Exchange rows and columns `i` and `j` (congruence by a transposition;
    /// flips the sign of the Pfaffian).
    pub fn swap(&mut self, i: usize, j: usize) {
        let n = self.dim;
        for c in 0..n {
            self.data.swap(i * n + c, j * n + c);
        }
        for r in 0..n {
            self.data.swap(r * n + i, r * n + j);
        }
    }
}

/// Direction flag per edge: `false` orients first endpoint to second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation(pub Bits);

impl Orientation {
    pub fn new(edge_count: usize) -> Self {
        Orientation(Bits::new(edge_count))
    }

    /// `(tail, head)` of the directed edge.
    pub fn directs(&self, g: &Multigraph, e: usize) -> (usize, usize) {
        let (u, v) = g.endpoints(e);
        if self.0.get(e) {
            (v, u)
        } else {
            (u, v)
        }
    }
}

/// Signed weighted adjacency matrix of an orientation: entry `(tail, head)`
/// gets `+w`, `(head, tail)` gets `-w`. Loops cannot be matched and are
/// skipped; parallel edges accumulate. The certified Pfaffian bound
/// `prod_e (1 + |w_e|)` is attached.
pub fn skew_adjacency<S: Scalar>(
    g: &Multigraph,
    weights: &[Rational],
    orientation: &Orientation,
) -> SkewMatrix<S> {
    assert_eq!(weights.len(), g.edge_count(), "one weight per edge");
    let mut m = SkewMatrix::zero(g.vertex_count());
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            continue;
        }
        let (tail, head) = orientation.directs(g, e);
        m.add_pair(tail, head, S::from_rational(&weights[e]));
    }
    m.value_bound = Some(crate::graph::monomial_sum_bound(weights));
    m
}

/// Pfaffian of `m`, dispatching to the scalar's preferred algorithm.
pub fn pfaffian<S: Scalar>(m: &SkewMatrix<S>) -> S {
    S::pfaffian_of(m)
}

/// Parlett–Reid elimination. Works over any field-like scalar; picks the
/// largest pivot by `pivot_score` within each column.
pub fn pfaffian_elimination<S: Scalar>(m: &SkewMatrix<S>) -> S {
    let n = m.dim();
    if n % 2 == 1 {
        return S::zero();
    }
    if n == 0 {
        return S::one();
    }
    let mut a = m.data.clone();
    let mut negate = false;
    let mut acc = S::one();
    let mut tau = vec![S::zero(); n];
    let mut col = vec![S::zero(); n];
    for k in (0..n - 1).step_by(2) {
        // pivot: largest |a[r][k]| for r > k
        let mut best = k + 1;
        let mut best_score = a[(k + 1) * n + k].pivot_score();
        for r in k + 2..n {
            let s = a[r * n + k].pivot_score();
            if s > best_score {
                best = r;
                best_score = s;
            }
        }
        if a[best * n + k].is_zero() {
            return S::zero();
        }
        if best != k + 1 {
            for c in 0..n {
                a.swap((k + 1) * n + c, best * n + c);
            }
            for r in 0..n {
                a.swap(r * n + k + 1, r * n + best);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k + 1].clone();
        acc = acc * pivot.clone();
        if k + 2 < n {
            for j in k + 2..n {
                tau[j] = a[k * n + j].clone() / pivot.clone();
                col[j] = a[j * n + k + 1].clone();
            }
            // trailing block += tau (x) col - col (x) tau
            for i in k + 2..n {
                let ti = tau[i].clone();
                let ci = col[i].clone();
                if ti.is_zero() && ci.is_zero() {
                    continue;
                }
                let row = &mut a[i * n..(i + 1) * n];
                for j in k + 2..n {
                    row[j] = row[j].clone() + ti.clone() * col[j].clone()
                        - ci.clone() * tau[j].clone();
                }
            }
        }
    }
    if negate {
        -acc
    } else {
        acc
    }
}

/// Determinant by Gaussian elimination; used to cross-check `Pf^2 = det`.
pub fn determinant<S: Scalar>(m: &SkewMatrix<S>) -> S {
    let n = m.dim();
    let mut a = m.data.clone();
    let mut acc = S::one();
    let mut negate = false;
    for k in 0..n {
        let mut best = k;
        let mut best_score = a[k * n + k].pivot_score();
        for r in k + 1..n {
            let s = a[r * n + k].pivot_score();
            if s > best_score {
                best = r;
                best_score = s;
            }
        }
        if a[best * n + k].is_zero() {
            return S::zero();
        }
        if best != k {
            for c in 0..n {
                a.swap(k * n + c, best * n + c);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        acc = acc * pivot.clone();
        for r in k + 1..n {
            let f = a[r * n + k].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                a[r * n + c] = a[r * n + c].clone() - f.clone() * a[k * n + c].clone();
            }
        }
    }
    if negate {
        -acc
    } else {
        acc
    }
}

/// Pfaffian by memoized expansion along the first live row; exponential,
/// for cross-checks on small matrices only.
pub fn pfaffian_expansion<S: Scalar>(m: &SkewMatrix<S>) -> Result<S> {
    let n = m.dim();
    if n > 20 {
        return Err(Error::Capacity {
            what: "pfaffian expansion",
            needed: format!("dimension {n}"),
            cap: 20,
        });
    }
    if n % 2 == 1 {
        return Ok(S::zero());
    }
    fn go<S: Scalar>(
        m: &SkewMatrix<S>,
        mask: u32,
        memo: &mut std::collections::HashMap<u32, S>,
    ) -> S {
        if mask == 0 {
            return S::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = S::zero();
        let mut sign_flip = false;
        let mut j_mask = rest;
        while j_mask != 0 {
            let j = j_mask.trailing_zeros() as usize;
            j_mask &= j_mask - 1;
            let entry = m.get(i, j).clone();
            if !entry.is_zero() {
                let sub = go(m, rest & !(1 << j), memo);
                let term = entry * sub;
                acc = if sign_flip { acc - term } else { acc + term };
            }
            sign_flip = !sign_flip;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(go(m, mask, &mut std::collections::HashMap::new()))
}

/// Exact integer-residue Pfaffian for rational matrices.
pub mod modular {
    use super::*;
    use num_integer::Integer;

    /// Deterministic Miller–Rabin for `u64`.
    pub fn is_prime_u64(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n == p {
                return true;
            }
            if n % p == 0 {
                return false;
            }
        }
        let mut d = n - 1;
        let mut s = 0;
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
        let powmod = |mut base: u64, mut e: u64| {
            let mut acc = 1u64;
            base %= n;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(acc, base);
                }
                base = mulmod(base, base);
                e >>= 1;
            }
            acc
        };
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = powmod(a, d);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 0..s - 1 {
                x = mulmod(x, x);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    /// Montgomery arithmetic modulo an odd prime below 2^62.
    #[derive(Clone, Copy)]
    pub struct Mont {
        pub p: u64,
        ninv: u64, // -p^{-1} mod 2^64
        r2: u64,   // 2^128 mod p
    }

    impl Mont {
        pub fn new(p: u64) -> Self {
            debug_assert!(p % 2 == 1 && p < 1 << 62);
            // Newton iteration for p^{-1} mod 2^64
            let mut inv = p;
            for _ in 0..5 {
                inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
            }
            let r = (u64::MAX % p + 1) % p; // 2^64 mod p
            let r2 = ((r as u128 * r as u128) % p as u128) as u64;
            Mont {
                p,
                ninv: inv.wrapping_neg(),
                r2,
            }
        }

        #[inline]
        fn redc(&self, t: u128) -> u64 {
            let m = (t as u64).wrapping_mul(self.ninv);
            let t2 = ((t + m as u128 * self.p as u128) >> 64) as u64;
            if t2 >= self.p {
                t2 - self.p
            } else {
                t2
            }
        }

        #[inline]
        pub fn to_mont(&self, x: u64) -> u64 {
            self.redc(x as u128 * self.r2 as u128)
        }

        #[inline]
        pub fn from_mont(&self, x: u64) -> u64 {
            self.redc(x as u128)
        }

        #[inline]
        pub fn mul(&self, a: u64, b: u64) -> u64 {
            self.redc(a as u128 * b as u128)
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

        pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
            let mut acc = self.to_mont(1);
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul(acc, base);
                }
                base = self.mul(base, base);
                e >>= 1;
            }
            acc
        }

        pub fn inv(&self, a: u64) -> u64 {
            self.pow(a, self.p - 2)
        }
    }

    /// Integer matrix with denominators cleared, `b[i][j] = a[i][j] d_i d_j`.
    enum Cleared {
        Small(Vec<i64>),
        Big(Vec<BigInt>),
    }

    struct ClearedMatrix {
        dim: usize,
        entries: Cleared,
        row_scale: Vec<BigInt>, // d_i
    }

    fn clear_denominators(m: &SkewMatrix<Rational>) -> ClearedMatrix {
        let n = m.dim();
        let mut row_scale = Vec::with_capacity(n);
        for i in 0..n {
            let mut d = BigInt::one();
            for j in 0..n {
                d = d.lcm(m.get(i, j).denom());
            }
            row_scale.push(d);
        }
        let mut big = Vec::with_capacity(n * n);
        let mut all_small = true;
        for i in 0..n {
            for j in 0..n {
                let x = m.get(i, j);
                let v: BigInt = x.numer() * (&row_scale[i] / x.denom()) * &row_scale[j];
                all_small &= v.to_i64().is_some();
                big.push(v);
            }
        }
        let entries = if all_small {
            Cleared::Small(big.iter().map(|v| v.to_i64().unwrap()).collect())
        } else {
            Cleared::Big(big)
        };
        ClearedMatrix {
            dim: n,
            entries,
            row_scale,
        }
    }

    /// Hadamard-style fallback bound: |Pf|^2 = det <= prod_i ||row_i||_2.
    fn hadamard_pfaffian_bound(c: &ClearedMatrix) -> BigInt {
        let n = c.dim;
        let mut det_bound = BigInt::one();
        for i in 0..n {
            let mut norm2 = BigInt::zero();
            for j in 0..n {
                let v = match &c.entries {
                    Cleared::Small(e) => BigInt::from(e[i * n + j]),
                    Cleared::Big(e) => e[i * n + j].clone(),
                };
                norm2 += &v * &v;
            }
            det_bound *= norm2.sqrt() + 1;
        }
        det_bound.sqrt() + 1
    }

    /// Pfaffian of the residue image by Parlett–Reid over the prime field.
    fn pfaffian_mod(mont: &Mont, a: &mut [u64], n: usize) -> u64 {
        if n == 0 {
            return 1 % mont.p;
        }
        if n % 2 == 1 {
            return 0;
        }
        let mut negate = false;
        let mut acc = mont.to_mont(1);
        let mut tau = vec![0u64; n];
        let mut col = vec![0u64; n];
        for k in (0..n - 1).step_by(2) {
            // any nonzero residue works as pivot; take the first
            let mut pivot_row = usize::MAX;
            for r in k + 1..n {
                if a[r * n + k] != 0 {
                    pivot_row = r;
                    break;
                }
            }
            if pivot_row == usize::MAX {
                return 0;
            }
            if pivot_row != k + 1 {
                for c in 0..n {
                    a.swap((k + 1) * n + c, pivot_row * n + c);
                }
                for r in 0..n {
                    a.swap(r * n + k + 1, r * n + pivot_row);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k + 1];
            acc = mont.mul(acc, pivot);
            if k + 2 < n {
                let pinv = mont.inv(pivot);
                for j in k + 2..n {
                    tau[j] = mont.mul(a[k * n + j], pinv);
                    col[j] = a[j * n + k + 1];
                }
                for i in k + 2..n {
                    let ti = tau[i];
                    let ci = col[i];
                    if ti == 0 && ci == 0 {
                        continue;
                    }
                    let row = &mut a[i * n..(i + 1) * n];
                    for j in k + 2..n {
                        let up = mont.sub(mont.mul(ti, col[j]), mont.mul(ci, tau[j]));
                        row[j] = mont.add(row[j], up);
                    }
                }
            }
        }
        let v = mont.from_mont(acc);
        if negate && v != 0 {
            mont.p - v
        } else {
            v
        }
    }

    fn residues_for_prime(c: &ClearedMatrix, mont: &Mont, out: &mut Vec<u64>) {
        let p = mont.p;
        out.clear();
        match &c.entries {
            Cleared::Small(e) => {
                out.extend(e.iter().map(|&v| {
                    let r = v.rem_euclid(p as i64) as u64;
                    mont.to_mont(r)
                }));
            }
            Cleared::Big(e) => {
                let pb = BigInt::from(p);
                out.extend(e.iter().map(|v| {
                    let r = v.mod_floor(&pb).to_u64().expect("residue fits u64");
                    mont.to_mont(r)
                }));
            }
        }
    }

    /// Exact Pfaffian of a rational skew matrix.
    ///
    /// Uses the attached `value_bound` when present (times the denominator
    /// clearing factor), otherwise a Hadamard bound, to decide how many
    /// primes are needed so the symmetric CRT range covers the true value.
    pub fn pfaffian_rational(m: &SkewMatrix<Rational>) -> Rational {
        let n = m.dim();
        if n % 2 == 1 {
            return Rational::zero();
        }
        if n == 0 {
            return Rational::one();
        }
        let cleared = clear_denominators(m);
        let scale: BigInt = cleared.row_scale.iter().product();
        let bound = match &m.value_bound {
            Some(b) => {
                let scaled = b * Rational::from_integer(scale.clone());
                scaled.ceil().to_integer()
            }
            None => hadamard_pfaffian_bound(&cleared),
        };
        let target: BigInt = bound * 2 + 1;

        let mut product = BigInt::one();
        let mut value = BigInt::zero();
        let mut candidate = (1u64 << 62) - 1;
        let mut residues = Vec::new();
        while product <= target {
            while !is_prime_u64(candidate) {
                candidate -= 2;
            }
            let p = candidate;
            candidate -= 2;
            let mont = Mont::new(p);
            residues_for_prime(&cleared, &mont, &mut residues);
            let r = pfaffian_mod(&mont, &mut residues, n);

            // incremental CRT: value stays the canonical representative mod product
            let pb = BigInt::from(p);
            let vr = value.mod_floor(&pb).to_u64().expect("residue fits");
            let diff = mont.sub(r % p, vr % p);
            let minv = {
                let mp = product.mod_floor(&pb).to_u64().expect("residue fits");
                mont.from_mont(mont.inv(mont.to_mont(mp)))
            };
            let t = ((diff as u128 * minv as u128) % p as u128) as u64;
            value += &product * BigInt::from(t);
            product *= pb;
        }
        if &value * 2 > product {
            value -= &product;
        }
        Rational::new(value, scale)
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn small_primes_recognized() {
            assert!(is_prime_u64(2));
            assert!(is_prime_u64(3));
            assert!(is_prime_u64(97));
            assert!(!is_prime_u64(1));
            assert!(!is_prime_u64(91)); // 7 * 13
            assert!(is_prime_u64(4611686018427387847)); // just below 2^62
        }

        #[test]
        fn montgomery_roundtrip_and_inverse() {
            let mut p = (1u64 << 62) - 1;
            while !is_prime_u64(p) {
                p -= 2;
            }
            let m = Mont::new(p);
            for x in [0u64, 1, 2, 12345678901234567, p - 1] {
                assert_eq!(m.from_mont(m.to_mont(x)), x);
            }
            let a = m.to_mont(987654321);
            let prod = m.mul(a, m.inv(a));
            assert_eq!(m.from_mont(prod), 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::monomial_sum_bound;
    use proptest::prelude::*;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn rat2(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn two_by_two_is_the_entry() {
        let m = SkewMatrix::from_upper(2, &[(0, 1, rat2(3, 7))]);
        assert_eq!(pfaffian_elimination(&m), rat2(3, 7));
        assert_eq!(modular::pfaffian_rational(&m), rat2(3, 7));
    }

    #[test]
    fn four_by_four_closed_form() {
        // upper entries a..f; Pf = af - be + cd
        let (a, b, c, d, e, f) = (rat(2), rat(3), rat(5), rat(7), rat(11), rat(13));
        let m = SkewMatrix::from_upper(
            4,
            &[
                (0, 1, a.clone()),
                (0, 2, b.clone()),
                (0, 3, c.clone()),
                (1, 2, d.clone()),
                (1, 3, e.clone()),
                (2, 3, f.clone()),
            ],
        );
        let want = a * f - b * e + c * d; // 26 - 33 + 35 = 28
        assert_eq!(want, rat(28));
        assert_eq!(pfaffian_elimination(&m), want);
        assert_eq!(modular::pfaffian_rational(&m), want);
        assert_eq!(pfaffian_expansion(&m).unwrap(), want);
    }

    #[test]
    fn odd_dimension_and_empty() {
        let m = SkewMatrix::<Rational>::from_upper(3, &[(0, 1, rat(5))]);
        assert_eq!(pfaffian(&m), Rational::zero());
        let empty = SkewMatrix::<Rational>::zero(0);
        assert_eq!(pfaffian(&empty), Rational::one());
    }

    #[test]
    fn swap_flips_sign() {
        let mut m = SkewMatrix::from_upper(
            4,
            &[(0, 1, rat(2)), (2, 3, rat(3)), (0, 2, rat(1))],
        );
        let before = pfaffian(&m);
        m.swap(1, 2);
        assert_eq!(pfaffian(&m), -before);
    }

    #[test]
    fn direct_sum_multiplies() {
        let mut m = SkewMatrix::zero(6);
        m.add_pair(0, 1, rat(4));
        m.add_pair(2, 3, rat(5));
        m.add_pair(4, 5, rat2(1, 3));
        assert_eq!(pfaffian(&m), rat(20) * rat2(1, 3));
    }

    #[test]
    fn skew_adjacency_of_a_matched_path() {
        // path on 4 vertices: only one perfect matching {0-1, 2-3}
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let w = vec![rat(3), rat(5), rat(7)];
        let m: SkewMatrix<Rational> = skew_adjacency(&g, &w, &Orientation::new(3));
        let pf = pfaffian(&m);
        assert_eq!(pf.clone() * pf.clone(), rat(21) * rat(21));
        assert!(m.value_bound.clone().unwrap() >= rat(21));
    }

    #[test]
    fn loops_are_skipped_parallels_accumulate() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1), (0, 1)]).unwrap();
        let w = vec![rat(9), rat(3), rat(4)];
        let m: SkewMatrix<Rational> = skew_adjacency(&g, &w, &Orientation::new(3));
        assert_eq!(pfaffian(&m), rat(7));
        let mut flip = Orientation::new(3);
        flip.0.set(2, true);
        let m: SkewMatrix<Rational> = skew_adjacency(&g, &w, &flip);
        assert_eq!(pfaffian(&m), rat(-1));
    }

    #[test]
    fn float_matches_exact() {
        let entries: Vec<(usize, usize, Rational)> = vec![
            (0, 1, rat2(1, 2)),
            (0, 3, rat(-3)),
            (1, 2, rat2(7, 5)),
            (2, 3, rat(2)),
            (0, 5, rat2(-4, 3)),
            (4, 5, rat(6)),
            (1, 4, rat2(5, 9)),
        ];
        let exact = SkewMatrix::from_upper(6, &entries);
        let float_entries: Vec<(usize, usize, f64)> = entries
            .iter()
            .map(|(i, j, v)| (*i, *j, f64::from_rational(v)))
            .collect();
        let approx = SkewMatrix::from_upper(6, &float_entries);
        let want = modular::pfaffian_rational(&exact).to_f64().unwrap();
        let got = pfaffian(&approx);
        assert!((want - got).abs() <= 1e-9 * want.abs().max(1.0));
    }

    #[test]
    fn value_bound_controls_prime_count_correctly() {
        // a matrix whose Pfaffian is huge; bound from weights must be honored
        let n = 8;
        let mut entries = Vec::new();
        let mut weights = Vec::new();
        for k in 0..4 {
            let w = rat(90 + k as i64);
            entries.push((2 * k, 2 * k + 1, w.clone()));
            weights.push(w);
        }
        let mut m = SkewMatrix::from_upper(n, &entries);
        m.value_bound = Some(monomial_sum_bound(&weights));
        let want = rat(90) * rat(91) * rat(92) * rat(93);
        assert_eq!(modular::pfaffian_rational(&m), want);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pfaffian_squared_is_determinant(
            dim in (1usize..=5).prop_map(|k| 2 * k),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut entries = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    let v = rng.gen_range(-9i64..=9);
                    if v != 0 {
                        entries.push((i, j, rat(v)));
                    }
                }
            }
            let m = SkewMatrix::from_upper(dim, &entries);
            let pf = pfaffian_elimination(&m);
            let det = determinant(&m);
            prop_assert_eq!(pf.clone() * pf.clone(), det);
            // the residue pipeline agrees with direct elimination
            prop_assert_eq!(modular::pfaffian_rational(&m), pf.clone());
            if dim <= 10 {
                prop_assert_eq!(pfaffian_expansion(&m).unwrap(), pf);
            }
        }

        #[test]
        fn rational_entries_roundtrip(
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dim = 6;
            let mut entries = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    let n = rng.gen_range(-20i64..=20);
                    let d = rng.gen_range(1i64..=12);
                    entries.push((i, j, rat2(n, d)));
                }
            }
            let m = SkewMatrix::from_upper(dim, &entries);
            prop_assert_eq!(modular::pfaffian_rational(&m), pfaffian_elimination(&m));
        }
    }
}
