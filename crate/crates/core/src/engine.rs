//! End-to-end evaluation pipelines.
//!
//! Everything here composes the lower layers in one fixed order: expand the
//! graph so even subsets become perfect matchings, read the genus and a
//! symplectic homology basis off the embedding, fit the matching signs, and
//! combine `4^g` Pfaffians into the requested number.  The entry points
//! differ only in what they feed in and how they package the result:
//!
//! * [`even_poly`] — the even-subgraph generating polynomial at given edge
//!   weights.
//! * [`ising_partition`] — the Ising partition function, via the
//!   high-temperature expansion of [`even_poly`].
//! * [`matching_poly`] — the perfect-matching polynomial of the graph
//!   itself, fitted over its matchings directly (no expansion).
//! * [`symbolic_even_poly`] — all monomials of the even polynomial,
//!   recovered from `2^m` evaluations and checked to be multilinear 0/1.
//! * [`verify`] — randomized comparison against direct enumeration.
//! * [`optimality_certificate`] — exhibits even subsets in all `4^g`
//!   homology classes and shows the family's sign vectors on them have full
//!   rank, so no subfamily can be dropped.
//!
//! Exact arithmetic everywhere `S = Rational`; `f64`/`f32` give the same
//! pipeline with floating-point Pfaffians.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fisher::{blow_up, FisherBlowup};
use crate::gf2::{solve, Bits};
use crate::graph::{
    cycle_basis, even_poly_oracle, monomial_sum_bound, perfect_matchings, EdgeSubset, Multigraph,
    DEFAULT_CAP,
};
use crate::pfaffian::{pfaffian, skew_adjacency, Orientation, Scalar};
use crate::signfit::{
    build_family, fit_base, fit_signs, matching_sign, pfaffian_family, BaseFit, FamilyEntry,
    FitMode, PfaffianFamily,
};
use crate::surface::{homology_data, min_genus_search, HomologyData, RotationSystem};
use crate::{Rational, Result};

/// Knobs shared by every pipeline.
#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    /// How the sign fit gathers constraints.
    pub mode: FitMode,
    /// Bound on anything enumerative: even subsets, matchings, family size.
    pub cap: u64,
    /// Worker threads for the Pfaffian evaluations.
    pub jobs: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            mode: FitMode::QuadraticCertified,
            cap: DEFAULT_CAP,
            jobs: 1,
        }
    }
}

/// Wall-clock milliseconds per pipeline stage.
#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub expand_ms: u128,
    pub homology_ms: u128,
    pub fit_ms: u128,
    pub evaluate_ms: u128,
    pub total_ms: u128,
}

impl Timings {
    pub fn to_json(&self) -> Value {
        json!({
            "expand_ms": self.expand_ms as u64,
            "homology_ms": self.homology_ms as u64,
            "fit_ms": self.fit_ms as u64,
            "evaluate_ms": self.evaluate_ms as u64,
            "total_ms": self.total_ms as u64,
        })
    }
}

fn ms(t: Instant) -> u128 {
    t.elapsed().as_millis()
}

pub fn mode_name(mode: FitMode) -> &'static str {
    match mode {
        FitMode::QuadraticCertified => "quadratic",
        FitMode::Exhaustive => "exhaustive",
    }
}

/// Result of evaluating one polynomial.
#[derive(Clone, Debug)]
pub struct EvaluationReport<S> {
    pub value: S,
    /// Genus of the embedding the family was built on.
    pub genus: usize,
    /// Number of Pfaffians combined (`4^genus`, or `0` for an empty sum).
    pub family_size: usize,
    /// Global sign of the combination.
    pub epsilon0: i32,
    pub mode: FitMode,
    /// Number of sign observations the fit consumed.
    pub constraints: usize,
    pub timings: Timings,
}

impl<S: Scalar> EvaluationReport<S> {
    pub fn to_json(&self, include_timing: bool) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("value".into(), Value::String(self.value.to_string()));
        map.insert("genus".into(), json!(self.genus));
        map.insert("family_size".into(), json!(self.family_size));
        map.insert("epsilon0".into(), json!(self.epsilon0));
        map.insert("certified".into(), json!(mode_name(self.mode)));
        map.insert("constraints".into(), json!(self.constraints));
        if include_timing {
            map.insert("timing_ms".into(), self.timings.to_json());
        }
        Value::Object(map)
    }
}

fn family_capacity(genus: usize, cap: u64) -> Result<()> {
    if genus >= 31 || 1u64 << (2 * genus) > cap {
        return Err(Error::Capacity {
            what: "pfaffian family",
            needed: format!("4^{genus}"),
            cap,
        });
    }
    Ok(())
}

/// The reusable part of the pipeline: everything except the weights.
pub struct Expansion {
    pub blowup: FisherBlowup,
    pub homology: HomologyData,
    pub fit: BaseFit,
    pub family: PfaffianFamily,
    pub timings: Timings,
}

/// Expand, embed, and fit; weights enter later via [`combine_family`].
pub fn expand_and_fit(
    g: &Multigraph,
    rot: &RotationSystem,
    opts: &EngineOptions,
) -> Result<Expansion> {
    let total = Instant::now();
    let t = Instant::now();
    let blowup = blow_up(g, rot)?;
    let expand_ms = ms(t);

    let t = Instant::now();
    let homology = homology_data(&blowup.graph, &blowup.rotation, &blowup.required)?;
    let homology_ms = ms(t);
    family_capacity(homology.genus, opts.cap)?;

    let t = Instant::now();
    let fit = fit_base(&blowup, &homology, opts.mode, opts.cap)?;
    let family = build_family(&blowup, &homology, &fit);
    let fit_ms = ms(t);

    Ok(Expansion {
        blowup,
        homology,
        fit,
        family,
        timings: Timings {
            expand_ms,
            homology_ms,
            fit_ms,
            evaluate_ms: 0,
            total_ms: ms(total),
        },
    })
}

/// Evaluate `sum_q alpha_q Pf(A_q)` over the family's orientations.
///
/// `value_bound` must dominate the magnitude of every individual Pfaffian;
/// exact evaluation uses it to size its modulus.  The Pfaffians are summed
/// in family order, so float results do not depend on the thread schedule.
pub fn combine_family<S: Scalar>(
    graph: &Multigraph,
    weights: &[Rational],
    value_bound: &Rational,
    family: &PfaffianFamily,
    jobs: usize,
) -> S {
    let entries = &family.entries;
    let evaluate = |entry: &FamilyEntry| -> S {
        let mut mat = skew_adjacency::<S>(graph, weights, &entry.orientation);
        mat.value_bound = Some(value_bound.clone());
        pfaffian(&mat)
    };

    let mut values: Vec<Option<S>> = vec![None; entries.len()];
    if jobs <= 1 || entries.len() <= 1 {
        for (slot, entry) in values.iter_mut().zip(entries) {
            *slot = Some(evaluate(entry));
        }
    } else {
        let chunk = (entries.len() + jobs - 1) / jobs;
        let evaluate = &evaluate;
        std::thread::scope(|scope| {
            for (slots, part) in values.chunks_mut(chunk).zip(entries.chunks(chunk)) {
                scope.spawn(move || {
                    for (slot, entry) in slots.iter_mut().zip(part) {
                        *slot = Some(evaluate(entry));
                    }
                });
            }
        });
    }

    let mut acc = S::zero();
    for (value, entry) in values.into_iter().zip(entries) {
        acc = acc + S::from_rational(&entry.alpha) * value.expect("all chunks were evaluated");
    }
    acc
}

/// Export a fitted family: global sign, the fitted form's values on the
/// symplectic basis, and for each orientation its form's basis values,
/// invariant bit, flipped edge ids, and exact coefficient.
pub fn family_json(fit: &BaseFit, family: &PfaffianFamily) -> Value {
    let basis_values = |bits: u64| -> Vec<u8> {
        (0..2 * family.genus)
            .map(|t| (bits >> t & 1) as u8)
            .collect()
    };
    let entries: Vec<Value> = family
        .entries
        .iter()
        .map(|entry| {
            json!({
                "basis_values": basis_values(entry.form.bits),
                "arf": entry.arf as u8,
                "flips": entry.flips.ones().collect::<Vec<_>>(),
                "alpha": entry.alpha.to_string(),
            })
        })
        .collect();
    json!({
        "genus": family.genus,
        "epsilon0": family.epsilon0,
        "q_tilde_basis_values": basis_values(fit.q_tilde.bits),
        "base_flips": fit.host_flips.ones().collect::<Vec<_>>(),
        "certified": mode_name(fit.mode),
        "entries": entries,
    })
}

/// Evaluate the even-subgraph generating polynomial: the sum over all even
/// edge subsets of the product of their edge weights.
pub fn even_poly<S: Scalar>(
    g: &Multigraph,
    rot: &RotationSystem,
    weights: &[Rational],
    opts: &EngineOptions,
) -> Result<EvaluationReport<S>> {
    assert_eq!(weights.len(), g.edge_count(), "one weight per edge");
    let total = Instant::now();
    let mut ex = expand_and_fit(g, rot, opts)?;

    let expanded = ex.blowup.weights_on_blowup(weights);
    let bound = monomial_sum_bound(weights);
    let t = Instant::now();
    let value = combine_family::<S>(&ex.blowup.graph, &expanded, &bound, &ex.family, opts.jobs);
    ex.timings.evaluate_ms = ms(t);
    ex.timings.total_ms = ms(total);

    Ok(EvaluationReport {
        value,
        genus: ex.homology.genus,
        family_size: ex.family.size(),
        epsilon0: ex.fit.epsilon0,
        mode: opts.mode,
        constraints: ex.fit.constraints,
        timings: ex.timings,
    })
}

/// [`even_poly`] packaged for the Ising model.
#[derive(Clone, Debug)]
pub struct IsingReport<S> {
    /// The partition function.
    pub partition: S,
    /// `2^n * prod_e (x_e^2 + 1) / (2 x_e)`, exactly.
    pub prefactor: Rational,
    /// The even-polynomial evaluation at the transformed weights.
    pub even: EvaluationReport<S>,
}

impl<S: Scalar> IsingReport<S> {
    pub fn to_json(&self, include_timing: bool) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("partition".into(), Value::String(self.partition.to_string()));
        map.insert("prefactor".into(), Value::String(self.prefactor.to_string()));
        map.insert("even".into(), self.even.to_json(include_timing));
        Value::Object(map)
    }
}

/// The Ising partition function `sum_spins prod_e x_e^(s_u s_v)` with spins
/// in `{-1, +1}` and one weight `x_e = exp(beta_e)` per edge.
///
/// Uses the high-temperature identity: the spin sum equals
/// `2^n prod_e ((x_e + 1/x_e)/2)` times the even polynomial at
/// `z_e = (x_e - 1/x_e)/(x_e + 1/x_e)`.
pub fn ising_partition<S: Scalar>(
    g: &Multigraph,
    rot: &RotationSystem,
    x: &[Rational],
    opts: &EngineOptions,
) -> Result<IsingReport<S>> {
    assert_eq!(x.len(), g.edge_count(), "one weight per edge");
    let one = Rational::one();
    let mut z = Vec::with_capacity(x.len());
    let mut prefactor = Rational::from_integer(BigInt::one() << g.vertex_count());
    for (e, xe) in x.iter().enumerate() {
        if xe.is_zero() {
            return Err(Error::BadWeight {
                edge: e,
                msg: "Ising edge weight must be nonzero".into(),
            });
        }
        let sq = xe * xe;
        z.push((&sq - &one) / (&sq + &one));
        prefactor *= (&sq + &one) / (xe + xe);
    }
    let even = even_poly::<S>(g, rot, &z, opts)?;
    let partition = S::from_rational(&prefactor) * even.value.clone();
    Ok(IsingReport {
        partition,
        prefactor,
        even,
    })
}

/// Brute-force Ising partition function, summing over all `2^n` spin
/// assignments.  Kept deliberately independent of the Pfaffian machinery.
pub fn spin_sum_oracle(g: &Multigraph, x: &[Rational]) -> Result<Rational> {
    let n = g.vertex_count();
    assert_eq!(x.len(), g.edge_count(), "one weight per edge");
    if n > 24 {
        return Err(Error::Capacity {
            what: "spin assignments",
            needed: format!("2^{n}"),
            cap: 1 << 24,
        });
    }
    for (e, xe) in x.iter().enumerate() {
        if xe.is_zero() {
            return Err(Error::BadWeight {
                edge: e,
                msg: "Ising edge weight must be nonzero".into(),
            });
        }
    }
    let ends: Vec<(usize, usize)> = (0..g.edge_count()).map(|e| g.endpoints(e)).collect();
    let mut total = Rational::zero();
    for mask in 0u64..1u64 << n {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (e, &(u, v)) in ends.iter().enumerate() {
            if (mask >> u ^ mask >> v) & 1 == 0 {
                num *= x[e].numer();
                den *= x[e].denom();
            } else {
                num *= x[e].denom();
                den *= x[e].numer();
            }
        }
        total += Rational::new(num, den);
    }
    Ok(total)
}

/// Evaluate the perfect-matching generating polynomial of the graph itself.
///
/// No expansion is involved: the homology data comes from the given
/// embedding directly, and the sign fit runs over the matchings themselves
/// (which must be enumerated anyway to observe their signs), so the mode
/// option does not apply here.
pub fn matching_poly<S: Scalar>(
    g: &Multigraph,
    rot: &RotationSystem,
    weights: &[Rational],
    opts: &EngineOptions,
) -> Result<EvaluationReport<S>> {
    assert_eq!(weights.len(), g.edge_count(), "one weight per edge");
    let total = Instant::now();
    let t = Instant::now();
    let homology = homology_data(g, rot, &Bits::new(g.edge_count()))?;
    let homology_ms = ms(t);
    family_capacity(homology.genus, opts.cap)?;

    let t = Instant::now();
    let matchings = perfect_matchings(g, opts.cap)?;
    if matchings.is_empty() {
        return Ok(EvaluationReport {
            value: S::zero(),
            genus: homology.genus,
            family_size: 0,
            epsilon0: 1,
            mode: FitMode::Exhaustive,
            constraints: 0,
            timings: Timings {
                expand_ms: 0,
                homology_ms,
                fit_ms: ms(t),
                evaluate_ms: 0,
                total_ms: ms(total),
            },
        });
    }
    let delta = Orientation::new(g.edge_count());
    let mut observations = Vec::with_capacity(matchings.len());
    for pm in &matchings {
        let sign = matching_sign(g, &delta, pm)?;
        observations.push((pm.clone(), homology.class_of_subset(pm), sign));
    }
    let fit = fit_signs(
        g.edge_count(),
        &delta,
        homology.genus,
        &observations,
        FitMode::Exhaustive,
    )?;
    let family = pfaffian_family(g.edge_count(), &homology, &fit);
    let fit_ms = ms(t);

    let bound = monomial_sum_bound(weights);
    let t = Instant::now();
    let value = combine_family::<S>(g, weights, &bound, &family, opts.jobs);
    let evaluate_ms = ms(t);

    Ok(EvaluationReport {
        value,
        genus: homology.genus,
        family_size: family.size(),
        epsilon0: fit.epsilon0,
        mode: FitMode::Exhaustive,
        constraints: fit.constraints,
        timings: Timings {
            expand_ms: 0,
            homology_ms,
            fit_ms,
            evaluate_ms,
            total_ms: ms(total),
        },
    })
}

/// Recover the full even polynomial symbolically: the result lists every
/// monomial as an edge bitmask.  Evaluates the fitted family at all `2^m`
/// zero/one weight vectors and inverts the subset-sum transform; any
/// coefficient other than 0 or 1 is reported as an internal error, so a
/// successful return is a certificate that the family computes a multilinear
/// 0/1 polynomial.
pub fn symbolic_even_poly(
    g: &Multigraph,
    rot: &RotationSystem,
    opts: &EngineOptions,
) -> Result<Vec<u64>> {
    let m = g.edge_count();
    if m > 16 {
        return Err(Error::Capacity {
            what: "symbolic coefficients",
            needed: format!("2^{m}"),
            cap: 1 << 16,
        });
    }
    let ex = expand_and_fit(g, rot, opts)?;
    let mut vals: Vec<Rational> = Vec::with_capacity(1usize << m);
    for mask in 0..1u64 << m {
        let weights: Vec<Rational> = (0..m)
            .map(|e| {
                if mask >> e & 1 == 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let expanded = ex.blowup.weights_on_blowup(&weights);
        let bound = monomial_sum_bound(&weights);
        vals.push(combine_family::<Rational>(
            &ex.blowup.graph,
            &expanded,
            &bound,
            &ex.family,
            opts.jobs,
        ));
    }
    // vals[S] is now the sum of coefficients over submasks of S; peel one
    // edge at a time to isolate the coefficients.
    for bit in 0..m {
        for s in 0..1usize << m {
            if s >> bit & 1 == 1 {
                let lower = vals[s ^ (1 << bit)].clone();
                vals[s] -= lower;
            }
        }
    }
    let mut monomials = Vec::new();
    for (s, c) in vals.iter().enumerate() {
        if c.is_one() {
            monomials.push(s as u64);
        } else if !c.is_zero() {
            return Err(Error::Internal(format!(
                "coefficient of monomial {s:#b} is {c}, expected 0 or 1"
            )));
        }
    }
    Ok(monomials)
}

/// One failed comparison from [`verify`].
#[derive(Clone, Debug)]
pub struct VerifyTrial {
    pub weights: Vec<Rational>,
    pub family_value: Rational,
    pub oracle_value: Rational,
}

/// Outcome of randomized verification.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub genus: usize,
    pub family_size: usize,
    pub trials: usize,
    pub matched: usize,
    pub failures: Vec<VerifyTrial>,
}

impl VerifyReport {
    pub fn all_matched(&self) -> bool {
        self.matched == self.trials && self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "weights": f.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    "family_value": f.family_value.to_string(),
                    "oracle_value": f.oracle_value.to_string(),
                })
            })
            .collect();
        json!({
            "genus": self.genus,
            "family_size": self.family_size,
            "trials": self.trials,
            "passed": self.matched,
            "failures": failures,
        })
    }
}

/// Compare the Pfaffian combination against direct even-subset enumeration
/// on seeded random weights (numerators and denominators drawn from 1..=97).
pub fn verify(
    g: &Multigraph,
    rot: &RotationSystem,
    trials: usize,
    seed: u64,
    opts: &EngineOptions,
) -> Result<VerifyReport> {
    let ex = expand_and_fit(g, rot, opts)?;
    let m = g.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matched = 0;
    let mut failures = Vec::new();
    for _ in 0..trials {
        let weights: Vec<Rational> = (0..m)
            .map(|_| {
                let num: i64 = rng.gen_range(1..=97);
                let den: i64 = rng.gen_range(1..=97);
                Rational::new(num.into(), den.into())
            })
            .collect();
        let expanded = ex.blowup.weights_on_blowup(&weights);
        let bound = monomial_sum_bound(&weights);
        let family_value =
            combine_family::<Rational>(&ex.blowup.graph, &expanded, &bound, &ex.family, opts.jobs);
        let oracle_value = even_poly_oracle(g, &weights, opts.cap)?;
        if family_value == oracle_value {
            matched += 1;
        } else {
            failures.push(VerifyTrial {
                weights,
                family_value,
                oracle_value,
            });
        }
    }
    Ok(VerifyReport {
        genus: ex.homology.genus,
        family_size: ex.family.size(),
        trials,
        matched,
        failures,
    })
}

/// Certificate that all `4^g` Pfaffians are needed.
///
/// `representatives[x]` is an even subset of the host graph in homology
/// class `x`, and `sign_matrix[q][x]` is the observed sign of its extension
/// under family orientation `q`.  When the matrix has full rank `4^g`, no
/// proper signed subfamily can agree with the family on all even subsets, so
/// the family size cannot be reduced for this embedding.
#[derive(Clone, Debug)]
pub struct OptimalityReport {
    pub genus: usize,
    pub family_size: usize,
    pub representatives: Vec<EdgeSubset>,
    pub sign_matrix: Vec<Vec<i32>>,
    /// `M^T M == 4^g I`, verified entry by entry.
    pub gram_is_scaled_identity: bool,
    /// Exact rank of the sign matrix over the rationals.
    pub rank: usize,
    /// Every observed sign equals `eps0 * (-1)^{q(x)}`.
    pub signs_match_prediction: bool,
    /// Smallest genus over all rotation systems, when the search space is
    /// small enough to sweep.
    pub minimal_genus: Option<usize>,
}

impl OptimalityReport {
    pub fn certified(&self) -> bool {
        self.gram_is_scaled_identity
            && self.signs_match_prediction
            && self.rank == self.family_size
    }

    pub fn to_json(&self) -> Value {
        let reps: Vec<Value> = self
            .representatives
            .iter()
            .map(|r| json!(r.ones().collect::<Vec<_>>()))
            .collect();
        json!({
            "genus": self.genus,
            "family_size": self.family_size,
            "representatives": reps,
            "sign_matrix": self.sign_matrix,
            "gram_is_scaled_identity": self.gram_is_scaled_identity,
            "rank": self.rank,
            "lower_bound": self.rank,
            "signs_match_prediction": self.signs_match_prediction,
            "minimal_genus": self.minimal_genus,
            "certified": self.certified(),
        })
    }
}

fn exact_rank(m: &[Vec<i32>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let lead = a[rank][col].clone();
            let ours = a[r][col].clone();
            for c in col..cols {
                a[r][c] = &a[r][c] * &lead - &a[rank][c] * &ours;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Build the rank certificate for the family on this embedding.
pub fn optimality_certificate(
    g: &Multigraph,
    rot: &RotationSystem,
    opts: &EngineOptions,
) -> Result<OptimalityReport> {
    let ex = expand_and_fit(g, rot, opts)?;
    let genus = ex.homology.genus;
    let size = ex.family.size();
    let class_count = 1usize << (2 * genus);

    // One even subset of the host per homology class, assembled from
    // fundamental cycles.
    let basis = cycle_basis(g, &Bits::new(g.edge_count()))?;
    let cycle_classes: Vec<u64> = basis
        .cycles
        .iter()
        .map(|c| ex.homology.class_of_subset(&c.subset))
        .collect();
    let r = basis.cycles.len();
    let mut representatives = Vec::with_capacity(class_count);
    for x in 0..class_count as u64 {
        let rows: Vec<(Bits, bool)> = (0..2 * genus)
            .map(|t| {
                let mut row = Bits::new(r);
                for (i, cls) in cycle_classes.iter().enumerate() {
                    if cls >> t & 1 == 1 {
                        row.set(i, true);
                    }
                }
                (row, x >> t & 1 == 1)
            })
            .collect();
        let sol = solve(r, &rows).ok_or_else(|| {
            Error::Internal("host cycle classes do not span the homology group".into())
        })?;
        let mut rep = Bits::new(g.edge_count());
        for i in sol.ones() {
            rep.xor_assign(&basis.cycles[i].subset);
        }
        if ex.homology.class_of_subset(&rep) != x {
            return Err(Error::Internal(
                "assembled representative has the wrong homology class".into(),
            ));
        }
        representatives.push(rep);
    }

    let extensions: Vec<EdgeSubset> = representatives
        .iter()
        .map(|rep| ex.blowup.extend_even_to_matching(rep))
        .collect::<Result<_>>()?;

    let mut signs_match = true;
    let mut sign_matrix = Vec::with_capacity(size);
    for entry in &ex.family.entries {
        let mut row = Vec::with_capacity(class_count);
        for (x, pm) in extensions.iter().enumerate() {
            let s = matching_sign(&ex.blowup.graph, &entry.orientation, pm)?;
            let predicted = if (ex.fit.epsilon0 < 0) ^ entry.form.eval(x as u64) {
                -1
            } else {
                1
            };
            if s != predicted {
                signs_match = false;
            }
            row.push(s);
        }
        sign_matrix.push(row);
    }

    let mut gram_ok = true;
    for x in 0..class_count {
        for y in 0..class_count {
            let dot: i64 = (0..size)
                .map(|q| (sign_matrix[q][x] * sign_matrix[q][y]) as i64)
                .sum();
            let want = if x == y { size as i64 } else { 0 };
            if dot != want {
                gram_ok = false;
            }
        }
    }

    let rank = exact_rank(&sign_matrix);

    let minimal_genus = match min_genus_search(g, 1_000_000) {
        Ok((mg, _)) => Some(mg),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };

    Ok(OptimalityReport {
        genus,
        family_size: size,
        representatives,
        sign_matrix,
        gram_is_scaled_identity: gram_ok,
        rank,
        signs_match_prediction: signs_match,
        minimal_genus,
    })
}
