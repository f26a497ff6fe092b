//! Measurement scenarios and behaviors.
//!
//! A [`Behavior`] is the dense conditional probability table
//! `P(a_1 .. a_N | A_1 .. A_N)` of an `N`-party scenario. The table is stored
//! row-major with the setting vector as the major index and the outcome vector
//! as the minor index; inside each, party 0 is the most significant digit.
//! Setting and outcome indices are 0-based. Outcome `0` maps to `+1` and
//! outcome `1` maps to `-1` when correlators are formed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for validation and no-signalling checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default upper bound on `prod(settings) * prod(outcomes)`.
pub const DEFAULT_TABLE_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    settings: Vec<usize>,
    outcomes: Vec<usize>,
}

impl Scenario {
    pub fn new(settings: Vec<usize>, outcomes: Vec<usize>) -> Result<Self> {
        Self::with_cap(settings, outcomes, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(settings: Vec<usize>, outcomes: Vec<usize>, cap: usize) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::InvalidScenario(
                "at least one party is required".into(),
            ));
        }
        if settings.len() != outcomes.len() {
            return Err(Error::InvalidScenario(format!(
                "{} setting counts but {} outcome counts",
                settings.len(),
                outcomes.len()
            )));
        }
        if let Some(p) = settings.iter().position(|&s| s == 0) {
            return Err(Error::InvalidScenario(format!("party {p} has no settings")));
        }
        if let Some(p) = outcomes.iter().position(|&o| o < 2) {
            return Err(Error::InvalidScenario(format!(
                "party {p} has fewer than two outcomes"
            )));
        }
        let size = settings
            .iter()
            .chain(outcomes.iter())
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::SizeCap { size, cap });
        }
        Ok(Self { settings, outcomes })
    }

    /// `parties` parties with identical setting and outcome counts.
    pub fn uniform(parties: usize, settings: usize, outcomes: usize) -> Result<Self> {
        Self::new(vec![settings; parties], vec![outcomes; parties])
    }

    /// The 2-party, 2-setting, 2-outcome CHSH scenario.
    pub fn chsh() -> Self {
        Self::uniform(2, 2, 2).expect("valid scenario")
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn num_contexts(&self) -> usize {
        self.settings.iter().product()
    }

    pub fn num_outcome_vectors(&self) -> usize {
        self.outcomes.iter().product()
    }

    pub fn table_len(&self) -> usize {
        self.num_contexts() * self.num_outcome_vectors()
    }

    pub fn is_dichotomic(&self) -> bool {
        self.outcomes.iter().all(|&o| o == 2)
    }

    pub fn context_index(&self, context: &[usize]) -> usize {
        mixed_radix_index(&self.settings, context)
    }

    pub fn outcome_index(&self, outcome: &[usize]) -> usize {
        mixed_radix_index(&self.outcomes, outcome)
    }

    pub fn context(&self, index: usize) -> Vec<usize> {
        mixed_radix_digits(&self.settings, index)
    }

    pub fn outcome_vector(&self, index: usize) -> Vec<usize> {
        mixed_radix_digits(&self.outcomes, index)
    }

    /// Flat table index of `(context, outcome)`.
    pub fn index(&self, context: &[usize], outcome: &[usize]) -> usize {
        self.context_index(context) * self.num_outcome_vectors() + self.outcome_index(outcome)
    }

    /// All setting vectors in table order.
    pub fn contexts(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.num_contexts()).map(move |i| self.context(i))
    }

    /// The scenario of the listed parties, in the listed order.
    pub fn sub(&self, parties: &[usize]) -> Result<Scenario> {
        self.check_parties(parties)?;
        Scenario::new(
            parties.iter().map(|&p| self.settings[p]).collect(),
            parties.iter().map(|&p| self.outcomes[p]).collect(),
        )
    }

    /// Party-wise concatenation.
    pub fn concat(parts: &[&Scenario]) -> Result<Scenario> {
        let settings = parts
            .iter()
            .flat_map(|s| s.settings.iter().copied())
            .collect();
        let outcomes = parts
            .iter()
            .flat_map(|s| s.outcomes.iter().copied())
            .collect();
        Scenario::new(settings, outcomes)
    }

    pub(crate) fn check_parties(&self, parties: &[usize]) -> Result<()> {
        if parties.is_empty() {
            return Err(Error::InvalidArgument("empty party subset".into()));
        }
        let mut seen = vec![false; self.parties()];
        for &p in parties {
            if p >= self.parties() {
                return Err(Error::InvalidArgument(format!(
                    "party {p} out of range for {} parties",
                    self.parties()
                )));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("party {p} listed twice")));
            }
        }
        Ok(())
    }

    /// Stride of party `p` inside a mixed-radix index over `radices`.
    fn stride(radices: &[usize], p: usize) -> usize {
        radices[p + 1..].iter().product()
    }
}

fn mixed_radix_index(radices: &[usize], digits: &[usize]) -> usize {
    debug_assert_eq!(radices.len(), digits.len());
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| {
        debug_assert!(d < r);
        acc * r + d
    })
}

fn mixed_radix_digits(radices: &[usize], mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = index % r;
        index /= r;
    }
    digits
}

/// A conditional probability table over a [`Scenario`].
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryIssue {
    pub context: Vec<usize>,
    pub outcome: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextDeviation {
    pub context: Vec<usize>,
    pub sum: f64,
    pub deviation: f64,
}

/// Result of checking positivity and per-context normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passes: bool,
    pub tolerance: f64,
    pub positivity_failures: Vec<EntryIssue>,
    pub normalization_failures: Vec<ContextDeviation>,
    /// Largest `|sum - 1|` over all contexts, reported even when passing.
    pub max_normalization_deviation: f64,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} negative entries, {} contexts off normalization (max deviation {:e})",
            self.positivity_failures.len(),
            self.normalization_failures.len(),
            self.max_normalization_deviation
        )?;
        if let Some(c) = self.normalization_failures.first() {
            write!(f, "; first context {:?} sums to {}", c.context, c.sum)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignallingWitness {
    /// The party whose setting change moves the marginal of the others.
    pub discarded_party: usize,
    pub context: Vec<usize>,
    pub alternative_setting: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignallingReport {
    pub is_no_signalling: bool,
    pub max_violation: f64,
    pub witness: Option<SignallingWitness>,
}

/// Marginal over a subset of parties, the discarded parties' settings taken
/// from a fixed full context.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalTable {
    pub parties: Vec<usize>,
    pub behavior: Behavior,
}

impl Behavior {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        if table.len() != scenario.table_len() {
            return Err(Error::DimensionMismatch {
                expected: scenario.table_len(),
                got: table.len(),
            });
        }
        Ok(Self { scenario, table })
    }

    pub fn from_fn(scenario: Scenario, mut f: impl FnMut(&[usize], &[usize]) -> f64) -> Self {
        let nout = scenario.num_outcome_vectors();
        let mut table = Vec::with_capacity(scenario.table_len());
        for c in 0..scenario.num_contexts() {
            let ctx = scenario.context(c);
            for o in 0..nout {
                table.push(f(&ctx, &scenario.outcome_vector(o)));
            }
        }
        Self { scenario, table }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn into_table(self) -> Vec<f64> {
        self.table
    }

    pub fn prob(&self, context: &[usize], outcome: &[usize]) -> f64 {
        self.table[self.scenario.index(context, outcome)]
    }

    /// Outcome distribution of one context.
    pub fn context_slice(&self, context_index: usize) -> &[f64] {
        let n = self.scenario.num_outcome_vectors();
        &self.table[context_index * n..(context_index + 1) * n]
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let sc = &self.scenario;
        let nout = sc.num_outcome_vectors();
        let mut positivity_failures = Vec::new();
        let mut normalization_failures = Vec::new();
        let mut max_dev: f64 = 0.0;
        for (c, row) in self.table.chunks(nout).enumerate() {
            for (o, &v) in row.iter().enumerate() {
                if !(v >= -tol) {
                    positivity_failures.push(EntryIssue {
                        context: sc.context(c),
                        outcome: sc.outcome_vector(o),
                        value: v,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            let dev = (sum - 1.0).abs();
            if dev.is_nan() {
                max_dev = f64::NAN;
            } else {
                max_dev = max_dev.max(dev);
            }
            if !(dev <= tol) {
                normalization_failures.push(ContextDeviation {
                    context: sc.context(c),
                    sum,
                    deviation: dev,
                });
            }
        }
        ValidationReport {
            passes: positivity_failures.is_empty() && normalization_failures.is_empty(),
            tolerance: tol,
            positivity_failures,
            normalization_failures,
            max_normalization_deviation: max_dev,
        }
    }

    /// `self` if it validates at `tol`, otherwise the report as an error.
    pub fn validated(self, tol: f64) -> Result<Self> {
        let report = self.validate(tol);
        if report.passes {
            Ok(self)
        } else {
            Err(Error::Validation(Box::new(report)))
        }
    }

    /// Compares, for every party `k` and every pair of its settings, the
    /// marginal of the remaining parties.
    pub fn no_signalling_report(&self, tol: f64) -> SignallingReport {
        let sc = &self.scenario;
        let n = sc.parties();
        let mut max_violation: f64 = 0.0;
        let mut witness = None;
        if n == 1 {
            return SignallingReport {
                is_no_signalling: true,
                max_violation,
                witness,
            };
        }
        let nout = sc.num_outcome_vectors();
        for k in 0..n {
            let sk = sc.settings[k];
            if sk < 2 {
                continue;
            }
            let ok = sc.outcomes[k];
            let ctx_stride = Scenario::stride(&sc.settings, k);
            let out_stride = Scenario::stride(&sc.outcomes, k);
            let others_out = nout / ok;
            // marginals[s][j]: remaining parties' outcome j with party k at setting s
            let mut marginals = vec![vec![0.0; others_out]; sk];
            for c in 0..sc.num_contexts() {
                if (c / ctx_stride) % sk != 0 {
                    continue;
                }
                for (s, marg) in marginals.iter_mut().enumerate() {
                    let row = self.context_slice(c + s * ctx_stride);
                    marg.iter_mut().for_each(|m| *m = 0.0);
                    for (o, &v) in row.iter().enumerate() {
                        let hi = o / (out_stride * ok);
                        let lo = o % out_stride;
                        marg[hi * out_stride + lo] += v;
                    }
                }
                for s in 0..sk {
                    for t in s + 1..sk {
                        let diff = marginals[s]
                            .iter()
                            .zip(&marginals[t])
                            .map(|(x, y)| (x - y).abs())
                            .fold(0.0, f64::max);
                        if diff > max_violation {
                            max_violation = diff;
                            let mut context = sc.context(c);
                            context[k] = s;
                            witness = Some(SignallingWitness {
                                discarded_party: k,
                                context,
                                alternative_setting: t,
                            });
                        }
                    }
                }
            }
        }
        SignallingReport {
            is_no_signalling: max_violation <= tol,
            max_violation,
            witness: if max_violation > tol { witness } else { None },
        }
    }

    /// Marginal on `keep` (in that order) with discarded parties' settings
    /// fixed by `context`. Only the discarded parties' entries of `context`
    /// are read.
    pub fn marginal(&self, keep: &[usize], context: &[usize]) -> Result<MarginalTable> {
        let sc = &self.scenario;
        sc.check_parties(keep)?;
        if context.len() != sc.parties() {
            return Err(Error::DimensionMismatch {
                expected: sc.parties(),
                got: context.len(),
            });
        }
        for (p, (&s, &max)) in context.iter().zip(&sc.settings).enumerate() {
            if s >= max {
                return Err(Error::InvalidArgument(format!(
                    "setting {s} out of range for party {p}"
                )));
            }
        }
        let sub = sc.sub(keep)?;
        let mut table = vec![0.0; sub.table_len()];
        let sub_nout = sub.num_outcome_vectors();
        let mut full_ctx = context.to_vec();
        for sc_idx in 0..sub.num_contexts() {
            let sub_ctx = sub.context(sc_idx);
            for (&p, &s) in keep.iter().zip(&sub_ctx) {
                full_ctx[p] = s;
            }
            let row = self.context_slice(sc.context_index(&full_ctx));
            let dst = &mut table[sc_idx * sub_nout..(sc_idx + 1) * sub_nout];
            for (o, &v) in row.iter().enumerate() {
                let out = sc.outcome_vector(o);
                let kept: Vec<usize> = keep.iter().map(|&p| out[p]).collect();
                dst[sub.outcome_index(&kept)] += v;
            }
        }
        Ok(MarginalTable {
            parties: keep.to_vec(),
            behavior: Behavior {
                scenario: sub,
                table,
            },
        })
    }

    /// Expectation of the product of `+1/-1` mapped outcomes at `settings`.
    pub fn correlator(&self, settings: &[usize]) -> Result<f64> {
        let sc = &self.scenario;
        if let Some(p) = sc.outcomes.iter().position(|&o| o != 2) {
            return Err(Error::NotDichotomic {
                party: p,
                outcomes: sc.outcomes[p],
            });
        }
        if settings.len() != sc.parties() {
            return Err(Error::DimensionMismatch {
                expected: sc.parties(),
                got: settings.len(),
            });
        }
        if let Some(p) = settings.iter().zip(&sc.settings).position(|(s, m)| s >= m) {
            return Err(Error::InvalidArgument(format!(
                "setting {} out of range for party {p}",
                settings[p]
            )));
        }
        let row = self.context_slice(sc.context_index(settings));
        Ok(row
            .iter()
            .enumerate()
            .map(|(o, &v)| if o.count_ones() % 2 == 0 { v } else { -v })
            .sum())
    }

    /// Single-party expectation `<A_x>` of `party` at setting `x` read from a
    /// context whose other settings are all `0`.
    pub fn one_body(&self, party: usize, setting: usize) -> Result<f64> {
        let mut ctx = vec![0; self.scenario.parties()];
        ctx[party] = setting;
        self.marginal(&[party], &ctx)?
            .behavior
            .correlator(&[setting])
    }

    /// Entry-wise `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Behavior, w: f64) -> Result<Behavior> {
        Behavior::mixture(&[self.clone(), other.clone()], &[w, 1.0 - w])
    }

    pub fn mixture(parts: &[Behavior], weights: &[f64]) -> Result<Behavior> {
        check_weights(weights)?;
        if parts.len() != weights.len() || parts.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} behaviors but {} weights",
                parts.len(),
                weights.len()
            )));
        }
        let scenario = parts[0].scenario.clone();
        if let Some(bad) = parts.iter().find(|b| b.scenario != scenario) {
            return Err(Error::InvalidArgument(format!(
                "mixture of different scenarios {:?} and {:?}",
                scenario, bad.scenario
            )));
        }
        let mut table = vec![0.0; scenario.table_len()];
        for (b, &w) in parts.iter().zip(weights) {
            for (t, &v) in table.iter_mut().zip(&b.table) {
                *t += w * v;
            }
        }
        Ok(Behavior { scenario, table })
    }

    /// Independent behaviors side by side; parties are concatenated in order.
    pub fn product(factors: &[Behavior]) -> Result<Behavior> {
        let mut next = 0;
        let blocks: Vec<(Vec<usize>, &Behavior)> = factors
            .iter()
            .map(|b| {
                let parties: Vec<usize> = (next..next + b.scenario.parties()).collect();
                next += b.scenario.parties();
                (parties, b)
            })
            .collect();
        let refs: Vec<(&[usize], &Behavior)> =
            blocks.iter().map(|(p, b)| (p.as_slice(), *b)).collect();
        embed_product(&refs)
    }

    /// Relabels parties: party `i` of the result is party `order[i]` of `self`.
    pub fn reorder_parties(&self, order: &[usize]) -> Result<Behavior> {
        let sc = &self.scenario;
        if order.len() != sc.parties() {
            return Err(Error::DimensionMismatch {
                expected: sc.parties(),
                got: order.len(),
            });
        }
        sc.check_parties(order)?;
        let target = sc.sub(order)?;
        let mut ctx = vec![0; sc.parties()];
        let mut out = vec![0; sc.parties()];
        Ok(Behavior::from_fn(target, |c, o| {
            for (i, &p) in order.iter().enumerate() {
                ctx[p] = c[i];
                out[p] = o[i];
            }
            self.prob(&ctx, &out)
        }))
    }

    /// Largest entry-wise absolute difference; `None` if the scenarios differ.
    pub fn max_abs_diff(&self, other: &Behavior) -> Option<f64> {
        (self.scenario == other.scenario).then(|| {
            self.table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w >= -1e-12)) || !((sum - 1.0).abs() <= 1e-9) {
        return Err(Error::BadWeights { sum });
    }
    Ok(())
}

/// Product of block behaviors, each block occupying the listed global parties.
/// The blocks must partition `0..N`.
pub fn embed_product(blocks: &[(&[usize], &Behavior)]) -> Result<Behavior> {
    let n: usize = blocks.iter().map(|(p, _)| p.len()).sum();
    let mut settings = vec![0; n];
    let mut outcomes = vec![0; n];
    let mut seen = vec![false; n];
    for (parties, b) in blocks {
        if parties.len() != b.scenario.parties() {
            return Err(Error::DimensionMismatch {
                expected: b.scenario.parties(),
                got: parties.len(),
            });
        }
        for (i, &p) in parties.iter().enumerate() {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!(
                    "blocks do not partition the {n} parties (party {p})"
                )));
            }
            settings[p] = b.scenario.settings[i];
            outcomes[p] = b.scenario.outcomes[i];
        }
    }
    let scenario = Scenario::new(settings, outcomes)?;
    let mut sub_ctx: Vec<Vec<usize>> = blocks.iter().map(|(p, _)| vec![0; p.len()]).collect();
    let mut sub_out = sub_ctx.clone();
    Ok(Behavior::from_fn(scenario, |ctx, out| {
        let mut prob = 1.0;
        for (bi, (parties, b)) in blocks.iter().enumerate() {
            for (i, &p) in parties.iter().enumerate() {
                sub_ctx[bi][i] = ctx[p];
                sub_out[bi][i] = out[p];
            }
            prob *= b.prob(&sub_ctx[bi], &sub_out[bi]);
        }
        prob
    }))
}

pub fn validate_behavior(b: &Behavior, tol: f64) -> ValidationReport {
    b.validate(tol)
}

pub fn is_no_signalling(b: &Behavior, tol: f64) -> SignallingReport {
    b.no_signalling_report(tol)
}

pub fn marginal(b: &Behavior, keep: &[usize], context: &[usize]) -> Result<MarginalTable> {
    b.marginal(keep, context)
}

pub fn correlator(b: &Behavior, settings: &[usize]) -> Result<f64> {
    b.correlator(settings)
}

/// Named behaviors.
#[derive(Clone, Debug)]
pub enum BoxKind {
    Uniform,
    /// `assignment[party][setting]` is the outcome that party always reports.
    Deterministic(Vec<Vec<usize>>),
    /// `P(a,b|A,B) = 1/2` iff `a xor b = A * B`.
    Pr,
    Product(Vec<Behavior>),
    Mixture(Vec<Behavior>, Vec<f64>),
}

pub fn named_box(kind: &BoxKind, scenario: &Scenario) -> Result<Behavior> {
    let mismatch = |what: &str| {
        Err(Error::InvalidArgument(format!(
            "{what} does not fit scenario {scenario:?}"
        )))
    };
    match kind {
        BoxKind::Uniform => {
            let p = 1.0 / scenario.num_outcome_vectors() as f64;
            Behavior::new(scenario.clone(), vec![p; scenario.table_len()])
        }
        BoxKind::Deterministic(assignment) => {
            let fits = assignment.len() == scenario.parties()
                && assignment.iter().enumerate().all(|(p, resp)| {
                    resp.len() == scenario.settings[p]
                        && resp.iter().all(|&o| o < scenario.outcomes[p])
                });
            if !fits {
                return mismatch("deterministic assignment");
            }
            Ok(Behavior::from_fn(scenario.clone(), |ctx, out| {
                let hit = ctx
                    .iter()
                    .zip(out)
                    .enumerate()
                    .all(|(p, (&s, &o))| assignment[p][s] == o);
                if hit {
                    1.0
                } else {
                    0.0
                }
            }))
        }
        BoxKind::Pr => {
            if *scenario != Scenario::chsh() {
                return mismatch("PR box");
            }
            Ok(Behavior::from_fn(scenario.clone(), |ctx, out| {
                if (out[0] ^ out[1]) == (ctx[0] & ctx[1]) {
                    0.5
                } else {
                    0.0
                }
            }))
        }
        BoxKind::Product(factors) => {
            let b = Behavior::product(factors)?;
            if b.scenario != *scenario {
                return mismatch("product factors");
            }
            Ok(b)
        }
        BoxKind::Mixture(parts, weights) => {
            let b = Behavior::mixture(parts, weights)?;
            if b.scenario != *scenario {
                return mismatch("mixture components");
            }
            Ok(b)
        }
    }
}

/// Convex combination of block products over a fixed bipartition of the
/// parties. Each term supplies one behavior for `first` and one for
/// `second`; block behaviors may signal internally.
pub fn partial_local_box(
    first: &[usize],
    second: &[usize],
    terms: &[(Behavior, Behavior)],
    weights: &[f64],
) -> Result<Behavior> {
    check_weights(weights)?;
    if terms.len() != weights.len() || terms.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{} terms but {} weights",
            terms.len(),
            weights.len()
        )));
    }
    if first.is_empty() || second.is_empty() {
        return Err(Error::InvalidArgument(
            "both blocks must be nonempty".into(),
        ));
    }
    let products = terms
        .iter()
        .map(|(x, y)| embed_product(&[(first, x), (second, y)]))
        .collect::<Result<Vec<_>>>()?;
    Behavior::mixture(&products, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr() -> Behavior {
        named_box(&BoxKind::Pr, &Scenario::chsh()).unwrap()
    }

    fn uniform(sc: &Scenario) -> Behavior {
        named_box(&BoxKind::Uniform, sc).unwrap()
    }

    #[test]
    fn scenario_rejects_bad_counts() {
        assert!(Scenario::new(vec![], vec![]).is_err());
        assert!(Scenario::new(vec![2, 0], vec![2, 2]).is_err());
        assert!(Scenario::new(vec![2, 2], vec![2, 1]).is_err());
        assert!(matches!(
            Scenario::with_cap(vec![2, 2], vec![2, 2], 15),
            Err(Error::SizeCap { size: 16, cap: 15 })
        ));
    }

    #[test]
    fn index_layout_is_settings_major() {
        let sc = Scenario::new(vec![2, 3], vec![2, 2]).unwrap();
        assert_eq!(sc.index(&[0, 0], &[0, 0]), 0);
        assert_eq!(sc.index(&[0, 0], &[1, 0]), 2);
        assert_eq!(sc.index(&[0, 1], &[0, 0]), 4);
        assert_eq!(sc.index(&[1, 0], &[0, 0]), 12);
        for i in 0..sc.num_contexts() {
            assert_eq!(sc.context_index(&sc.context(i)), i);
        }
    }

    #[test]
    fn uniform_validates() {
        let r = uniform(&Scenario::chsh()).validate(DEFAULT_TOL);
        assert!(r.passes);
        assert_eq!(r.max_normalization_deviation, 0.0);
    }

    #[test]
    fn negative_entry_is_reported() {
        let sc = Scenario::chsh();
        let mut t = vec![0.25; 16];
        t[5] = -0.1;
        t[4] = 0.6;
        let r = Behavior::new(sc.clone(), t).unwrap().validate(DEFAULT_TOL);
        assert!(!r.passes);
        assert_eq!(r.positivity_failures.len(), 1);
        let f = &r.positivity_failures[0];
        assert_eq!(sc.index(&f.context, &f.outcome), 5);
        assert_eq!(f.value, -0.1);
        assert!(r.normalization_failures.is_empty());
    }

    #[test]
    fn normalization_deviation_is_reported() {
        let mut t = vec![0.25; 16];
        t[12] = 0.45;
        let r = Behavior::new(Scenario::chsh(), t)
            .unwrap()
            .validate(DEFAULT_TOL);
        assert!(!r.passes);
        assert_eq!(r.normalization_failures.len(), 1);
        assert_eq!(r.normalization_failures[0].context, vec![1, 1]);
        assert!((r.normalization_failures[0].deviation - 0.2).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        assert!(matches!(
            Behavior::new(Scenario::chsh(), vec![0.25; 15]),
            Err(Error::DimensionMismatch {
                expected: 16,
                got: 15
            })
        ));
    }

    #[test]
    fn pr_box_is_no_signalling() {
        let r = pr().no_signalling_report(DEFAULT_TOL);
        assert!(r.is_no_signalling);
        assert_eq!(r.max_violation, 0.0);
        assert!(r.witness.is_none());
    }

    #[test]
    fn remote_setting_copy_signals() {
        // party 1 outputs party 0's setting
        let b = Behavior::from_fn(Scenario::chsh(), |ctx, out| {
            if out[1] == ctx[0] && out[0] == 0 {
                1.0
            } else {
                0.0
            }
        });
        assert!(b.validate(DEFAULT_TOL).passes);
        let r = b.no_signalling_report(DEFAULT_TOL);
        assert!(!r.is_no_signalling);
        assert_eq!(r.max_violation, 1.0);
        let w = r.witness.unwrap();
        assert_eq!(w.discarded_party, 0);
        assert_ne!(w.context[0], w.alternative_setting);
    }

    #[test]
    fn product_behavior_is_no_signalling() {
        let a = Behavior::new(
            Scenario::uniform(1, 2, 2).unwrap(),
            vec![0.3, 0.7, 0.9, 0.1],
        )
        .unwrap();
        let b = Behavior::new(
            Scenario::uniform(1, 3, 2).unwrap(),
            vec![0.2, 0.8, 0.5, 0.5, 1.0, 0.0],
        )
        .unwrap();
        let p = Behavior::product(&[a.clone(), b.clone()]).unwrap();
        assert!(p.validate(1e-12).passes);
        assert!(p.no_signalling_report(1e-12).is_no_signalling);
        for ctx in p.scenario().contexts() {
            let m = p.marginal(&[1], &ctx).unwrap();
            assert!(m.behavior.max_abs_diff(&b).unwrap() < 1e-15);
            let m = p.marginal(&[0], &ctx).unwrap();
            assert!(m.behavior.max_abs_diff(&a).unwrap() < 1e-15);
        }
    }

    #[test]
    fn pr_marginal_is_uniform() {
        let b = pr();
        for ctx in b.scenario().contexts() {
            let m = b.marginal(&[0], &ctx).unwrap();
            assert_eq!(m.behavior.table(), &[0.5, 0.5, 0.5, 0.5]);
        }
    }

    #[test]
    fn deterministic_marginal_is_point_mass() {
        let sc = Scenario::uniform(3, 2, 2).unwrap();
        let b = named_box(&BoxKind::Deterministic(vec![vec![0, 0]; 3]), &sc).unwrap();
        let m = b.marginal(&[2, 0], &[1, 1, 0]).unwrap();
        for c in 0..4 {
            assert_eq!(m.behavior.context_slice(c), &[1.0, 0.0, 0.0, 0.0]);
        }
        assert!(b.marginal(&[], &[0, 0, 0]).is_err());
    }

    #[test]
    fn correlators() {
        let b = pr();
        assert_eq!(b.correlator(&[1, 1]).unwrap(), -1.0);
        assert_eq!(b.correlator(&[0, 1]).unwrap(), 1.0);
        assert_eq!(uniform(&Scenario::chsh()).correlator(&[1, 0]).unwrap(), 0.0);
        let det = named_box(
            &BoxKind::Deterministic(vec![vec![0, 0]; 2]),
            &Scenario::chsh(),
        )
        .unwrap();
        assert_eq!(det.correlator(&[1, 0]).unwrap(), 1.0);
        let tri = uniform(&Scenario::new(vec![1], vec![3]).unwrap());
        assert!(matches!(
            tri.correlator(&[0]),
            Err(Error::NotDichotomic { .. })
        ));
    }

    #[test]
    fn pr_requires_chsh_scenario() {
        assert!(named_box(&BoxKind::Pr, &Scenario::uniform(3, 2, 2).unwrap()).is_err());
        assert!(named_box(
            &BoxKind::Deterministic(vec![vec![0, 2]; 2]),
            &Scenario::chsh()
        )
        .is_err());
    }

    #[test]
    fn partial_local_uniform_blocks() {
        let u2 = uniform(&Scenario::chsh());
        let u1 = uniform(&Scenario::uniform(1, 2, 2).unwrap());
        let b = partial_local_box(&[0, 2], &[1], &[(u2, u1)], &[1.0]).unwrap();
        assert_eq!(b, uniform(&Scenario::uniform(3, 2, 2).unwrap()));
    }

    #[test]
    fn partial_local_preserves_block_marginal() {
        let u1 = uniform(&Scenario::uniform(1, 2, 2).unwrap());
        let b = partial_local_box(&[0, 1], &[2], &[(pr(), u1)], &[1.0]).unwrap();
        assert!(b.validate(1e-12).passes);
        for ctx in b.scenario().contexts() {
            assert_eq!(b.marginal(&[0, 1], &ctx).unwrap().behavior, pr());
        }
    }

    #[test]
    fn partial_local_two_terms_average() {
        let sc1 = Scenario::uniform(1, 2, 2).unwrap();
        let zero = named_box(&BoxKind::Deterministic(vec![vec![0, 0]]), &sc1).unwrap();
        let one = named_box(&BoxKind::Deterministic(vec![vec![1, 1]]), &sc1).unwrap();
        let t1 = (pr(), zero.clone());
        let t2 = (uniform(&Scenario::chsh()), one.clone());
        let mixed =
            partial_local_box(&[0, 1], &[2], &[t1.clone(), t2.clone()], &[0.5, 0.5]).unwrap();
        let a = partial_local_box(&[0, 1], &[2], &[t1], &[1.0]).unwrap();
        let b = partial_local_box(&[0, 1], &[2], &[t2], &[1.0]).unwrap();
        for ((m, x), y) in mixed.table().iter().zip(a.table()).zip(b.table()) {
            assert!((m - 0.5 * (x + y)).abs() < 1e-15);
        }
        assert!(partial_local_box(&[0, 1], &[2], &[(pr(), zero)], &[0.9]).is_err());
    }

    #[test]
    fn signalling_inside_block_is_localized() {
        let sig = Behavior::from_fn(Scenario::chsh(), |ctx, out| {
            if out[1] == ctx[0] && out[0] == 0 {
                1.0
            } else {
                0.0
            }
        });
        let u1 = uniform(&Scenario::uniform(1, 2, 2).unwrap());
        let b = partial_local_box(&[0, 1], &[2], &[(sig, u1)], &[1.0]).unwrap();
        let r = b.no_signalling_report(1e-12);
        assert!(!r.is_no_signalling);
        assert_eq!(r.witness.unwrap().discarded_party, 0);
    }

    #[test]
    fn reorder_round_trip() {
        let b = partial_local_box(
            &[0, 1],
            &[2],
            &[(pr(), uniform(&Scenario::uniform(1, 2, 2).unwrap()))],
            &[1.0],
        )
        .unwrap();
        let r = b.reorder_parties(&[2, 0, 1]).unwrap();
        assert_eq!(r.marginal(&[1, 2], &[0, 0, 0]).unwrap().behavior, pr());
        assert_eq!(r.reorder_parties(&[1, 2, 0]).unwrap(), b);
    }
}
