//! Matching signs, quadratic forms on homology, and the sign fit that turns
//! one seed orientation into the full signed family of orientations.
//!
//! The Pfaffian of a signed adjacency matrix sums perfect matchings with
//! permutation signs. For expanded graphs those signs, restricted to the
//! matchings that extend even host subsets, factor through homology: there
//! is an orientation `D`, a global sign, and a quadratic form `q~` on the
//! `2g`-dimensional homology such that the sign of the matching extending
//! `E'` is `eps0 * (-1)^{q~(class(E'))}`. The fit solves for these over
//! GF(2); flipping edge sets dual to linear functionals then produces one
//! orientation per quadratic form `q`, and the weighted combination with
//! coefficients `eps0 * (-1)^{Arf(q)} / 2^g` recovers the even-subgraph sum.

use crate::error::Error;
use crate::fisher::FisherBlowup;
use crate::gf2::{solve, Bits};
use crate::graph::{cycle_basis, even_subsets, EdgeSubset, Multigraph};
use crate::pfaffian::Orientation;
use crate::surface::HomologyData;
use crate::{Rational, Result};
use num_bigint::BigInt;

/// Sign of the perfect matching `m` in the Pfaffian of the signed adjacency
/// matrix for `delta`: the permutation parity of the concatenated directed
/// pairs. Independent of pair order; flipping one matched edge's direction
/// flips it.
pub fn matching_sign(g: &Multigraph, delta: &Orientation, m: &EdgeSubset) -> Result<i32> {
    let n = g.vertex_count();
    let mut covered = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    for e in m.ones() {
        if g.is_loop(e) {
            return Err(Error::NotPerfectMatching {
                msg: format!("edge {e} is a loop"),
            });
        }
        let (tail, head) = delta.directs(g, e);
        for v in [tail, head] {
            if covered[v] {
                return Err(Error::NotPerfectMatching {
                    msg: format!("vertex {v} is covered twice"),
                });
            }
            covered[v] = true;
        }
        seq.push(tail);
        seq.push(head);
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Error::NotPerfectMatching {
            msg: format!("vertex {v} is uncovered"),
        });
    }

    // inversion parity of `seq` as a permutation of 0..n
    let mut fenwick = vec![0u32; n + 1];
    let update = |f: &mut Vec<u32>, mut i: usize| {
        i += 1;
        while i <= n {
            f[i] += 1;
            i += i & i.wrapping_neg();
        }
    };
    let query = |f: &Vec<u32>, mut i: usize| {
        // count of inserted values <= i
        i += 1;
        let mut acc = 0u32;
        while i > 0 {
            acc += f[i];
            i -= i & i.wrapping_neg();
        }
        acc
    };
    let mut inversions = 0u64;
    for (placed, &x) in seq.iter().enumerate() {
        inversions += placed as u64 - query(&fenwick, x) as u64;
        update(&mut fenwick, x);
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Mask of the low bit of each coordinate pair `(2t, 2t+1)`.
const PAIR_MASK: u64 = 0x5555_5555_5555_5555;

/// Sum over pairs of the product of both coordinates, `sum_t x_{2t} x_{2t+1}`.
pub fn pair_term(x: u64) -> bool {
    (x & (x >> 1) & PAIR_MASK).count_ones() % 2 == 1
}

/// Crossing parity of two classes under the standard symplectic pairing
/// (coordinates ordered `a1, b1, a2, b2, ...`).
pub fn symplectic_pairing(x: u64, y: u64) -> bool {
    let cross = (x & (y >> 1) & PAIR_MASK) ^ (y & (x >> 1) & PAIR_MASK);
    cross.count_ones() % 2 == 1
}

/// Quadratic refinement of the symplectic pairing:
/// `q(x) = bits . x + sum_t x_{2t} x_{2t+1}`, satisfying
/// `q(x + y) = q(x) + q(y) + <x, y>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub genus: usize,
    pub bits: u64,
}

impl QuadraticForm {
    pub fn eval(&self, x: u64) -> bool {
        debug_assert_eq!(x >> (2 * self.genus).min(63) & !1, 0, "class fits 2g bits");
        ((self.bits & x).count_ones() % 2 == 1) ^ pair_term(x)
    }

    /// Arf invariant in closed form: `sum_t bits_{2t} bits_{2t+1}`.
    pub fn arf(&self) -> bool {
        pair_term(self.bits)
    }

    /// Arf invariant by counting zeros: forms with Arf 0 vanish on
    /// `2^{2g-1} + 2^{g-1}` classes, forms with Arf 1 on `2^{2g-1} - 2^{g-1}`.
    pub fn arf_by_counting(&self) -> Result<bool> {
        let g = self.genus;
        if 2 * g > 26 {
            return Err(Error::Capacity {
                what: "quadratic form zero counting",
                needed: format!("2^{}", 2 * g),
                cap: 1 << 26,
            });
        }
        let zeros = (0..1u64 << (2 * g)).filter(|&x| !self.eval(x)).count() as u64;
        let half = 1u64 << (2 * g - 1).max(0);
        let offset = 1u64 << (g - 1);
        if zeros == half + offset {
            Ok(false)
        } else if zeros == half - offset {
            Ok(true)
        } else {
            Err(Error::Internal(format!(
                "form {:#x} has {zeros} zeros, which matches neither Arf class",
                self.bits
            )))
        }
    }

    /// All `4^g` quadratic refinements, ordered by their coefficient bits.
    pub fn all(genus: usize) -> impl Iterator<Item = QuadraticForm> {
        assert!(2 * genus < 64, "coefficient bits must fit a word");
        (0..1u64 << (2 * genus)).map(move |bits| QuadraticForm { genus, bits })
    }
}

/// How the sign fit gathers its constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMode {
    /// Empty set, each fundamental cycle, and all pairwise symmetric
    /// differences. Sound because both the true sign exponent and the
    /// fitted ansatz are quadratic over cycle-space coordinates, and this
    /// family determines a quadratic function.
    QuadraticCertified,
    /// Every even subset (subject to the enumeration cap).
    Exhaustive,
}

/// Result of the sign fit on an expansion.
pub struct BaseFit {
    /// Seed orientation with the fitted host-edge flips applied.
    pub orientation: Orientation,
    /// Fitted quadratic form on homology classes.
    pub q_tilde: QuadraticForm,
    /// Global sign, `+1` or `-1`.
    pub epsilon0: i32,
    /// Host edges flipped relative to the seed (for reporting).
    pub host_flips: EdgeSubset,
    pub mode: FitMode,
    pub constraints: usize,
}

impl BaseFit {
    /// Sign the fit predicts for the matching extending a subset of class `x`
    /// under the fitted orientation.
    pub fn predicted_sign(&self, x: u64) -> i32 {
        if (self.epsilon0 < 0) ^ self.q_tilde.eval(x) {
            -1
        } else {
            1
        }
    }
}

/// Fit `(orientation flips, q~, eps0)` so that the matching extending every
/// even subset `E'` has sign `eps0 * (-1)^{q~(class(E'))}`.
pub fn fit_base(
    b: &FisherBlowup,
    hom: &HomologyData,
    mode: FitMode,
    cap: u64,
) -> Result<BaseFit> {
    let m = b.host_edge_count();
    let genus = hom.genus;

    let subsets: Vec<EdgeSubset> = match mode {
        FitMode::Exhaustive => {
            let basis = cycle_basis(&b.host, &Bits::new(m))?;
            even_subsets(&b.host, &basis, cap)?.collect()
        }
        FitMode::QuadraticCertified => {
            let basis = cycle_basis(&b.host, &Bits::new(m))?;
            let mut subsets = vec![Bits::new(m)];
            for c in &basis.cycles {
                subsets.push(c.subset.clone());
            }
            for i in 0..basis.cycles.len() {
                for j in i + 1..basis.cycles.len() {
                    let mut s = basis.cycles[i].subset.clone();
                    s.xor_assign(&basis.cycles[j].subset);
                    subsets.push(s);
                }
            }
            subsets
        }
    };

    let mut observations = Vec::with_capacity(subsets.len());
    for s in &subsets {
        let pm = b.extend_even_to_matching(s)?;
        let sign = matching_sign(&b.graph, &b.delta, &pm)?;
        let x = hom.class_of_subset(s);
        observations.push((s.clone(), x, sign));
    }
    fit_signs(m, &b.delta, genus, &observations, mode)
}

/// Solve for `(flips, q~, eps0)` from arbitrary sign observations.
///
/// Each observation is `(marker, x, sign)`: flipping edge `e` of the first
/// `edge_count` edges negates the signs of exactly the observations whose
/// marker contains `e`.  The fit demands
/// `sign = eps0 * (-1)^{q~(x)}` after flips.
pub fn fit_signs(
    edge_count: usize,
    delta: &Orientation,
    genus: usize,
    observations: &[(EdgeSubset, u64, i32)],
    mode: FitMode,
) -> Result<BaseFit> {
    let m = edge_count;
    let cols = m + 2 * genus + 1; // edge flips, form coefficients, global sign
    let mut rows = Vec::with_capacity(observations.len());
    for (marker, x, sign) in observations {
        let mut row = Bits::new(cols);
        for e in marker.ones() {
            row.set(e, true);
        }
        for i in 0..2 * genus {
            if x >> i & 1 == 1 {
                row.set(m + i, true);
            }
        }
        row.set(m + 2 * genus, true);
        rows.push((row, (*sign < 0) ^ pair_term(*x)));
    }

    let sol = solve(cols, &rows).ok_or_else(|| {
        Error::Internal("matching signs do not fit the quadratic ansatz".into())
    })?;

    let mut orientation = delta.clone();
    let mut host_flips = Bits::new(m);
    for e in 0..m {
        if sol.get(e) {
            orientation.0.flip(e);
            host_flips.set(e, true);
        }
    }
    let mut bits = 0u64;
    for i in 0..2 * genus {
        if sol.get(m + i) {
            bits |= 1 << i;
        }
    }
    Ok(BaseFit {
        orientation,
        q_tilde: QuadraticForm { genus, bits },
        epsilon0: if sol.get(m + 2 * genus) { -1 } else { 1 },
        host_flips,
        mode,
        constraints: rows.len(),
    })
}

/// One orientation of the family, with its coefficient.
pub struct FamilyEntry {
    pub form: QuadraticForm,
    pub arf: bool,
    /// Host edges flipped relative to the fitted base orientation.
    pub flips: EdgeSubset,
    /// Full orientation of the expanded graph.
    pub orientation: Orientation,
    /// `eps0 * (-1)^{Arf} / 2^g`.
    pub alpha: Rational,
}

/// The signed family: one Pfaffian orientation per quadratic form, whose
/// alpha-weighted combination counts every even subset exactly once.
pub struct PfaffianFamily {
    pub genus: usize,
    pub epsilon0: i32,
    pub entries: Vec<FamilyEntry>,
}

impl PfaffianFamily {
    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

/// Build all `4^g` orientations from the fitted base. The entry for form `q`
/// flips the host edges whose class pairs nontrivially with `q + q~`.
pub fn build_family(b: &FisherBlowup, hom: &HomologyData, fit: &BaseFit) -> PfaffianFamily {
    pfaffian_family(b.host_edge_count(), hom, fit)
}

/// [`build_family`] for fits not mediated by an expansion: the fitted
/// orientation lives on the graph itself and every edge may flip.
pub fn pfaffian_family(edge_count: usize, hom: &HomologyData, fit: &BaseFit) -> PfaffianFamily {
    let m = edge_count;
    let genus = hom.genus;
    let denom: BigInt = BigInt::from(1) << genus;
    let entries = QuadraticForm::all(genus)
        .map(|form| {
            let l = form.bits ^ fit.q_tilde.bits;
            let mut flips = Bits::new(m);
            let mut orientation = fit.orientation.clone();
            for (e, &cls) in hom.class_of_edge.iter().take(m).enumerate() {
                if (l & cls).count_ones() % 2 == 1 {
                    flips.set(e, true);
                    orientation.0.flip(e);
                }
            }
            let arf = form.arf();
            let numer: BigInt = if (fit.epsilon0 < 0) ^ arf {
                BigInt::from(-1)
            } else {
                BigInt::from(1)
            };
            FamilyEntry {
                form,
                arf,
                flips,
                orientation,
                alpha: Rational::new(numer, denom.clone()),
            }
        })
        .collect();
    PfaffianFamily {
        genus,
        epsilon0: fit.epsilon0,
        entries,
    }
}
