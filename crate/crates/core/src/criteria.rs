//! Completeness certificates and the convergence/divergence brackets of the
//! special integral built from them.
//!
//! Divergence is certified by the rank deficit (tag `T1`) and the
//! completeness-weighted exponent-sum bound (tag `T2`); convergence by the
//! general criterion (tag `T3`), its uniform-structure variant (tag `T4`),
//! and the rank-free consequence (tag `C`). Real thresholds and integer
//! certificates are reported separately: the even integer grid of moments
//! `2k` can leave a one-step gap around a real threshold, and the report
//! keeps that gap explicit instead of rounding it away.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::shape::PolynomialShape;
use crate::structure::{structure_decompose, StructureDecomposition};

/// Exhaustive subset search refuses to run above this variable count.
pub const MAX_EXHAUSTIVE_R: usize = 12;

/// Tags naming which criterion produced a certificate or bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremTag {
    /// Divergence from rank deficit: `k * rank < N`.
    T1,
    /// Divergence from `k >= q` and `2kr <= v + S`.
    T2,
    /// Convergence from `k >= q`, `2kr >= 2N + r`, `2kr > r + S`.
    T3,
    /// Convergence variant for uniform structure: `k * rank >= N` replaces
    /// the block-count bound.
    T4,
    /// Rank-free consequence: `k >= N`, `2kr > r + S`.
    C,
}

/// Witness that a polynomial is downward closed on some `v`-subset of its
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessResult {
    pub v: usize,
    /// A witnessing subset (0-based variable indices), `None` only above the
    /// exhaustive-search guard. `v = 0` is witnessed by the empty subset.
    pub witness_subset: Option<Vec<usize>>,
    pub is_complete: bool,
}

/// True when, for every monomial, every reduction of its exponents on the
/// given subset that keeps total degree at least one is again a monomial of
/// the shape. The subset-sum bound on the reduced exponents is implied by
/// the componentwise bounds, so only the componentwise box is enumerated.
pub fn v_complete(p: &PolynomialShape, v: usize, subset: &[usize]) -> Result<bool> {
    if subset.len() != v {
        return Err(Error::BadSubset(format!(
            "expected {v} indices, got {}",
            subset.len()
        )));
    }
    if v > p.r() {
        return Err(Error::BadSubset(format!("v = {v} exceeds r = {}", p.r())));
    }
    let mut seen = HashSet::new();
    for &i in subset {
        if i >= p.r() {
            return Err(Error::BadSubset(format!(
                "index {i} out of range for r = {}",
                p.r()
            )));
        }
        if !seen.insert(i) {
            return Err(Error::BadSubset(format!("index {i} repeated")));
        }
    }
    let members: HashSet<&[u32]> = p.monomials().iter().map(|m| m.exponents()).collect();
    for mono in p.monomials() {
        let caps: Vec<u32> = subset.iter().map(|&i| mono.exponents()[i]).collect();
        let total = mono.degree();
        let sub_total: u64 = caps.iter().map(|&c| u64::from(c)).sum();
        let mut reduced_exps = vec![0u32; v];
        loop {
            let reduced_sum: u64 = reduced_exps.iter().map(|&c| u64::from(c)).sum();
            let reduced_total = total - (sub_total - reduced_sum);
            if reduced_total >= 1 {
                let mut candidate = mono.exponents().to_vec();
                for (slot, &i) in subset.iter().enumerate() {
                    candidate[i] = reduced_exps[slot];
                }
                if !members.contains(candidate.as_slice()) {
                    return Ok(false);
                }
            }
            // Advance the mixed-radix counter over the box [0, caps].
            let mut pos = 0;
            while pos < v && reduced_exps[pos] == caps[pos] {
                reduced_exps[pos] = 0;
                pos += 1;
            }
            if pos == v {
                break;
            }
            reduced_exps[pos] += 1;
        }
    }
    Ok(true)
}

fn combinations(r: usize, v: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, v: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == v {
            out.push(current.clone());
            return;
        }
        for i in start..r {
            current.push(i);
            rec(i + 1, r, v, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, v, &mut Vec::new(), &mut out);
    out
}

/// Largest `v` for which some subset witnesses completeness, searched
/// exhaustively over subsets from `v = r` downward. `v = 0` always closes.
pub fn max_v(p: &PolynomialShape) -> Result<CompletenessResult> {
    if p.r() > MAX_EXHAUSTIVE_R {
        return Err(Error::TooManyVariables {
            r: p.r(),
            max: MAX_EXHAUSTIVE_R,
        });
    }
    for v in (1..=p.r()).rev() {
        for subset in combinations(p.r(), v) {
            if v_complete(p, v, &subset)? {
                return Ok(CompletenessResult {
                    v,
                    witness_subset: Some(subset),
                    is_complete: true,
                });
            }
        }
    }
    Ok(CompletenessResult {
        v: 0,
        witness_subset: Some(Vec::new()),
        is_complete: true,
    })
}

/// A reduced rational threshold on `2k` with the criteria that produce it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalBound {
    pub num: i64,
    pub den: i64,
    /// Convenience float of `num / den`.
    pub value: f64,
    pub sources: Vec<TheoremTag>,
}

impl RationalBound {
    fn new(num: u64, den: u64, sources: Vec<TheoremTag>) -> Self {
        let g = num.gcd(&den).max(1);
        let (num, den) = (num / g, den / g);
        RationalBound {
            num: num as i64,
            den: den as i64,
            value: num as f64 / den as f64,
            sources,
        }
    }

    /// Exact comparison against `num/den`.
    pub fn equals(&self, num: i64, den: i64) -> bool {
        self.num * den == num * self.den
    }
}

/// One certified-divergent moment.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceCertificate {
    pub k: u64,
    pub two_k: u64,
    pub theorems: Vec<TheoremTag>,
}

/// The smallest certified-convergent moment; every larger `k` satisfies the
/// same criterion.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceCertificate {
    pub k: u64,
    pub two_k: u64,
    pub theorem: TheoremTag,
}

/// Hypotheses the convergence criteria need.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HypothesisFlags {
    pub senior_form_full: bool,
    pub indecomposable: bool,
    pub uniform_structure: bool,
}

/// The assembled report: shape statistics, certificates, real thresholds,
/// and the explicit gap between them.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub r: usize,
    pub n: usize,
    /// Sum of all exponents over all monomials.
    pub exponent_sum: u64,
    pub rank: usize,
    pub q: usize,
    pub structure: Vec<usize>,
    pub v_max: usize,
    pub v_witness: Option<Vec<usize>>,
    pub hypotheses: HypothesisFlags,
    /// Every certified-divergent `k`, ascending.
    pub divergent: Vec<DivergenceCertificate>,
    /// Smallest certified-convergent moment, when the hypotheses hold.
    pub convergent: Option<ConvergenceCertificate>,
    /// Supremum of real `2k` values excluded by the divergence criteria.
    pub gamma_low: Option<RationalBound>,
    /// Infimum real threshold of the applicable convergence criteria;
    /// absent (never guessed) when their hypotheses fail.
    pub gamma_high: Option<RationalBound>,
    /// The thresholds coincide, pinning the convergence exponent exactly.
    pub exact_exponent: bool,
    /// Even moments `2k` certified neither way, below the convergence
    /// certificate when one exists.
    pub unknown_two_k: Vec<u64>,
    pub notes: Vec<String>,
}

/// Smallest integer `k > bound_num / bound_den`.
fn smallest_k_strictly_above(bound_num: u64, bound_den: u64) -> u64 {
    bound_num / bound_den + 1
}

/// Smallest integer `k >= bound_num / bound_den`.
fn smallest_k_at_least(bound_num: u64, bound_den: u64) -> u64 {
    bound_num.div_ceil(bound_den)
}

/// Smallest `k` allowed by the general convergence criterion:
/// `k >= q`, `2kr >= 2N + r`, `2kr > r + S`.
pub fn smallest_t3_k(q: u64, n: u64, r: u64, s: u64) -> u64 {
    q.max(smallest_k_at_least(2 * n + r, 2 * r))
        .max(smallest_k_strictly_above(r + s, 2 * r))
}

/// Smallest `k` allowed by the uniform-structure variant:
/// `k * rank >= N`, `2kr >= 2N + r`, `2kr > r + S`.
pub fn smallest_t4_k(rank: u64, n: u64, r: u64, s: u64) -> u64 {
    smallest_k_at_least(n, rank)
        .max(smallest_k_at_least(2 * n + r, 2 * r))
        .max(smallest_k_strictly_above(r + s, 2 * r))
}

/// Smallest `k` allowed by the rank-free consequence: `k >= N`, `2kr > r + S`.
pub fn smallest_c_k(n: u64, r: u64, s: u64) -> u64 {
    n.max(smallest_k_strictly_above(r + s, 2 * r))
}

struct Context {
    r: u64,
    n: u64,
    s: u64,
    rank: u64,
    q: u64,
    v_max: u64,
    hypotheses: HypothesisFlags,
}

impl Context {
    fn divergence(&self, up_to_k: u64) -> Vec<DivergenceCertificate> {
        let mut out = Vec::new();
        for k in 1..=up_to_k {
            let mut theorems = Vec::new();
            if k * self.rank < self.n {
                theorems.push(TheoremTag::T1);
            }
            if k >= self.q && 2 * k * self.r <= self.v_max + self.s {
                theorems.push(TheoremTag::T2);
            }
            if !theorems.is_empty() {
                out.push(DivergenceCertificate {
                    k,
                    two_k: 2 * k,
                    theorems,
                });
            }
        }
        out
    }

    /// Last `k` either divergence criterion can possibly certify.
    fn divergence_horizon(&self) -> u64 {
        let t1 = self.n.div_ceil(self.rank).saturating_sub(1);
        let t2 = (self.v_max + self.s) / (2 * self.r);
        t1.max(t2)
    }

    fn convergence(&self) -> Option<ConvergenceCertificate> {
        if !(self.hypotheses.indecomposable && self.hypotheses.senior_form_full) {
            return None;
        }
        let mut candidates = vec![(
            smallest_t3_k(self.q, self.n, self.r, self.s),
            TheoremTag::T3,
        )];
        if self.hypotheses.uniform_structure {
            candidates.push((
                smallest_t4_k(self.rank, self.n, self.r, self.s),
                TheoremTag::T4,
            ));
        }
        candidates.push((smallest_c_k(self.n, self.r, self.s), TheoremTag::C));
        let (k, theorem) = candidates
            .into_iter()
            .min_by_key(|&(k, _)| k)
            .expect("candidate list is non-empty");
        Some(ConvergenceCertificate {
            k,
            two_k: 2 * k,
            theorem,
        })
    }

    fn gamma_low(&self) -> RationalBound {
        let t1 = (2 * self.n, self.rank);
        let t2_compatible = 2 * self.q * self.r <= self.v_max + self.s;
        let t2 = (self.v_max + self.s, self.r);
        if t2_compatible && t2.0 * t1.1 >= t1.0 * t2.1 {
            if t2.0 * t1.1 == t1.0 * t2.1 {
                RationalBound::new(t2.0, t2.1, vec![TheoremTag::T1, TheoremTag::T2])
            } else {
                RationalBound::new(t2.0, t2.1, vec![TheoremTag::T2])
            }
        } else {
            RationalBound::new(t1.0, t1.1, vec![TheoremTag::T1])
        }
    }

    fn gamma_high(&self) -> Option<RationalBound> {
        if !(self.hypotheses.indecomposable && self.hypotheses.senior_form_full) {
            return None;
        }
        let mut sources = vec![TheoremTag::T3];
        if self.hypotheses.uniform_structure {
            sources.push(TheoremTag::T4);
        }
        sources.push(TheoremTag::C);
        Some(RationalBound::new(self.r + self.s, self.r, sources))
    }
}

fn context(p: &PolynomialShape, decomposition: &StructureDecomposition, v_max: u64) -> Context {
    Context {
        r: p.r() as u64,
        n: p.n() as u64,
        s: p.exponent_sum(),
        rank: decomposition.rank as u64,
        q: decomposition.q as u64,
        v_max,
        hypotheses: HypothesisFlags {
            senior_form_full: p.senior_form_full(),
            indecomposable: !p.decomposability().decomposable,
            uniform_structure: decomposition.uniform(),
        },
    }
}

/// Every certified-divergent `k` up to `up_to_k`, with tags.
pub fn divergence_certificates(
    p: &PolynomialShape,
    up_to_k: u64,
) -> Result<Vec<DivergenceCertificate>> {
    let decomposition = structure_decompose(&p.exponent_matrix())?;
    let completeness = max_v(p)?;
    Ok(context(p, &decomposition, completeness.v as u64).divergence(up_to_k))
}

/// The smallest certified-convergent moment, or `None` when the hypotheses
/// of every convergence criterion fail.
pub fn convergence_certificate(p: &PolynomialShape) -> Result<Option<ConvergenceCertificate>> {
    let decomposition = structure_decompose(&p.exponent_matrix())?;
    let completeness = max_v(p)?;
    Ok(context(p, &decomposition, completeness.v as u64).convergence())
}

/// Assembles the full report for a shape.
pub fn convergence_report(p: &PolynomialShape) -> Result<ConvergenceReport> {
    let decomposition = structure_decompose(&p.exponent_matrix())?;
    let completeness = max_v(p)?;
    let ctx = context(p, &decomposition, completeness.v as u64);
    let convergent = ctx.convergence();
    let divergent = ctx.divergence(ctx.divergence_horizon());
    let gamma_low = Some(ctx.gamma_low());
    let gamma_high = ctx.gamma_high();
    let exact_exponent = match (&gamma_low, &gamma_high) {
        (Some(lo), Some(hi)) => lo.num == hi.num && lo.den == hi.den,
        _ => false,
    };

    let divergent_ks: HashSet<u64> = divergent.iter().map(|c| c.k).collect();
    let unknown_horizon = match &convergent {
        Some(c) => c.k.saturating_sub(1),
        None => ctx.divergence_horizon() + 1,
    };
    let unknown_two_k: Vec<u64> = (1..=unknown_horizon)
        .filter(|k| !divergent_ks.contains(k))
        .map(|k| 2 * k)
        .collect();

    let mut notes = Vec::new();
    if completeness.v > 0 {
        notes.push(
            "completeness uses the componentwise reading: reduced exponents are bounded \
             coordinatewise on the witness subset, which implies the subset-sum bound"
                .to_string(),
        );
    }
    if !unknown_two_k.is_empty() {
        notes.push(
            "moments listed in unknown_two_k are certified neither divergent nor convergent"
                .to_string(),
        );
    }
    if convergent.is_none() {
        notes.push(
            "no convergence criterion applies (hypotheses fail); gamma_high is left undefined \
             and every moment above the divergence certificates is unclassified"
                .to_string(),
        );
    }

    Ok(ConvergenceReport {
        r: p.r(),
        n: p.n(),
        exponent_sum: ctx.s,
        rank: decomposition.rank,
        q: decomposition.q,
        structure: decomposition.blocks.clone(),
        v_max: completeness.v,
        v_witness: completeness.witness_subset,
        hypotheses: ctx.hypotheses,
        divergent,
        convergent,
        gamma_low,
        gamma_high,
        exact_exponent,
        unknown_two_k,
        notes,
    })
}
