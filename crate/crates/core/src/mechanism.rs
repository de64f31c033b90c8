//! Correlated-agreement scoring: on-task agreement minus off-task agreement,
//! averaged over claims and then over peers, plus the majority baseline,
//! inclusion rules and utility.

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ScoreReport, Stance, StanceMatrix};
use crate::rng::stream_rng;

/// Inclusion threshold used throughout the experiments.
pub const DEFAULT_THRESHOLD: f64 = 0.06;

/// Bijection on claim indices choosing the off-task pair for each claim.
///
/// For claim `k` the off-task indices are `ℓ = ρ(k+1)` and `m = ρ(k+2)`
/// (mod K); both are required to differ from `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffTaskPermutation {
    mapping: Vec<usize>,
}

impl OffTaskPermutation {
    pub fn identity(k: usize) -> Result<Self> {
        Self::new((0..k).collect())
    }

    /// Validate a 0-based mapping.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let k = mapping.len();
        if k < 3 {
            return Err(Error::TooFewClaims(k));
        }
        let mut seen = vec![false; k];
        for &x in &mapping {
            if x >= k || std::mem::replace(&mut seen[x], true) {
                return Err(Error::shape("off-task mapping is not a bijection"));
            }
        }
        if !Self::offtask_distinct(&mapping) {
            return Err(Error::shape("off-task indices must differ from the on-task claim"));
        }
        Ok(OffTaskPermutation { mapping })
    }

    fn offtask_distinct(mapping: &[usize]) -> bool {
        let k = mapping.len();
        (0..k).all(|c| mapping[(c + 1) % k] != c && mapping[(c + 2) % k] != c)
    }

    /// Uniform draw from the valid permutations by rejection sampling.
    pub fn sample<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Self> {
        if k < 3 {
            return Err(Error::TooFewClaims(k));
        }
        let mut mapping: Vec<usize> = (0..k).collect();
        loop {
            mapping.shuffle(rng);
            if Self::offtask_distinct(&mapping) {
                return Ok(OffTaskPermutation { mapping });
            }
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    /// Off-task indices `(ℓ, m)` for claim `k`.
    #[inline]
    pub fn offtask(&self, k: usize) -> (usize, usize) {
        let n = self.mapping.len();
        (self.mapping[(k + 1) % n], self.mapping[(k + 2) % n])
    }
}

/// Draw an off-task permutation for `k` claims.
pub fn sample_offtask_permutation<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<OffTaskPermutation> {
    OffTaskPermutation::sample(k, rng)
}

/// The permutation used for `source` when scoring under `seed`.
pub fn source_permutation(k: usize, seed: u64, source: usize) -> Result<OffTaskPermutation> {
    OffTaskPermutation::sample(k, &mut stream_rng(seed, source as u64))
}

/// 1 when both stances are polar and equal.
#[inline]
pub fn pair_task_score(a: Stance, b: Stance) -> u8 {
    u8::from(a == b && a.is_polar())
}

fn check_pair(i: usize, j: usize, matrix: &StanceMatrix, perm: &OffTaskPermutation) -> Result<()> {
    let n = matrix.n_sources();
    if i >= n || j >= n {
        return Err(Error::OutOfRange(format!("source index {} >= {n}", i.max(j))));
    }
    if i == j {
        return Err(Error::SelfScoring(i));
    }
    check_claims(matrix, perm)
}

fn check_claims(matrix: &StanceMatrix, perm: &OffTaskPermutation) -> Result<()> {
    if matrix.n_claims() < 3 {
        return Err(Error::TooFewClaims(matrix.n_claims()));
    }
    if perm.len() != matrix.n_claims() {
        return Err(Error::shape(format!(
            "permutation over {} claims for a matrix with {}",
            perm.len(),
            matrix.n_claims()
        )));
    }
    Ok(())
}

/// `σ_ikj = S(r_ik, r_jk) − S(r_iℓ, r_jm)`.
pub fn pairwise_claim_score(
    i: usize,
    j: usize,
    k: usize,
    matrix: &StanceMatrix,
    perm: &OffTaskPermutation,
) -> Result<i8> {
    check_pair(i, j, matrix, perm)?;
    if k >= matrix.n_claims() {
        return Err(Error::OutOfRange(format!("claim index {k} >= {}", matrix.n_claims())));
    }
    let (l, m) = perm.offtask(k);
    let on = pair_task_score(matrix.get(i, k), matrix.get(j, k));
    let off = pair_task_score(matrix.get(i, l), matrix.get(j, m));
    Ok(on as i8 - off as i8)
}

fn peer_sum(row_i: &[Stance], row_j: &[Stance], perm: &OffTaskPermutation) -> i64 {
    let mut sum = 0i64;
    for k in 0..row_i.len() {
        let (l, m) = perm.offtask(k);
        sum += i64::from(pair_task_score(row_i[k], row_j[k]));
        sum -= i64::from(pair_task_score(row_i[l], row_j[m]));
    }
    sum
}

/// `σ̄_ij`: the pairwise score averaged over all K claims.
pub fn peer_average_score(i: usize, j: usize, matrix: &StanceMatrix, perm: &OffTaskPermutation) -> Result<f64> {
    check_pair(i, j, matrix, perm)?;
    Ok(peer_sum(matrix.row(i), matrix.row(j), perm) as f64 / matrix.n_claims() as f64)
}

/// Peer components and the (weighted) mean `ŵ_i`.
pub(crate) fn score_with_components(
    i: usize,
    matrix: &StanceMatrix,
    perm: &OffTaskPermutation,
    weights: Option<&[f64]>,
) -> Result<(f64, Vec<(usize, f64)>)> {
    let n = matrix.n_sources();
    if i >= n {
        return Err(Error::OutOfRange(format!("source index {i} >= {n}")));
    }
    if n < 2 {
        return Err(Error::NoPeers { source_index: i });
    }
    check_claims(matrix, perm)?;
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::shape(format!("expected {n} weights, got {}", w.len())));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::domain("weights must be finite and nonnegative"));
        }
    }
    let k = matrix.n_claims() as f64;
    let row_i = matrix.row(i);
    let components: Vec<(usize, f64)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| (j, peer_sum(row_i, matrix.row(j), perm) as f64 / k))
        .collect();
    let score = match weights {
        None => components.iter().map(|(_, s)| s).sum::<f64>() / components.len() as f64,
        Some(w) => {
            let total: f64 = components.iter().map(|&(j, _)| w[j]).sum();
            if total <= 0.0 {
                return Err(Error::ZeroWeights { source_index: i });
            }
            components.iter().map(|&(j, s)| w[j] * s).sum::<f64>() / total
        }
    };
    Ok((score, components))
}

/// `ŵ_i`: mean of `σ̄_ij` over peers, or `Σ ω_j σ̄_ij / Σ ω_j` when weights
/// (one per source, the scored source's own entry ignored) are given.
pub fn source_score(
    i: usize,
    matrix: &StanceMatrix,
    perm: &OffTaskPermutation,
    weights: Option<&[f64]>,
) -> Result<f64> {
    score_with_components(i, matrix, perm, weights).map(|(s, _)| s)
}

/// Score every source with its own permutation derived from `(seed, i)` and
/// apply the hard threshold.
pub fn score_all(
    matrix: &StanceMatrix,
    seed: u64,
    threshold: f64,
    weights: Option<&[f64]>,
) -> Result<ScoreReport> {
    if !threshold.is_finite() {
        return Err(Error::domain("threshold must be finite"));
    }
    let n = matrix.n_sources();
    if n < 2 {
        return Err(Error::NoPeers { source_index: 0 });
    }
    let k = matrix.n_claims();
    let per_source: Vec<_> = (0..n)
        .into_par_iter()
        .map(|i| {
            let perm = source_permutation(k, seed, i)?;
            let (score, comps) = score_with_components(i, matrix, &perm, weights)?;
            Ok((perm, score, comps))
        })
        .collect::<Result<_>>()?;

    let ids = matrix.source_ids();
    let mut report = ScoreReport {
        scores: IndexMap::new(),
        included: IndexMap::new(),
        threshold,
        peer_components: IndexMap::new(),
        permutations: IndexMap::new(),
        utility: None,
    };
    for (i, (perm, score, comps)) in per_source.into_iter().enumerate() {
        let id = ids[i].clone();
        report.included.insert(id.clone(), hard_threshold_include(score, threshold)?);
        report.scores.insert(id.clone(), score);
        report
            .peer_components
            .insert(id.clone(), comps.into_iter().map(|(j, s)| (ids[j].clone(), s)).collect());
        report.permutations.insert(id, perm.mapping);
    }
    Ok(report)
}

/// Scores only, for simulation loops.
pub(crate) fn scores_only(matrix: &StanceMatrix, seed: u64, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    (0..matrix.n_sources())
        .map(|i| {
            let perm = source_permutation(matrix.n_claims(), seed, i)?;
            source_score(i, matrix, &perm, weights)
        })
        .collect()
}

/// Majority baseline: fraction of claims where source `i` matches the mode of
/// its peers' polar stances. Tied or all-abstain peer columns count as misses.
pub fn majority_score(i: usize, matrix: &StanceMatrix) -> Result<f64> {
    let n = matrix.n_sources();
    if i >= n {
        return Err(Error::OutOfRange(format!("source index {i} >= {n}")));
    }
    if n < 2 {
        return Err(Error::NoPeers { source_index: i });
    }
    let k = matrix.n_claims();
    if k == 0 {
        return Err(Error::TooFewClaims(0));
    }
    let mut hits = 0usize;
    for c in 0..k {
        let (mut support, mut contradict) = (0usize, 0usize);
        for j in (0..n).filter(|&j| j != i) {
            match matrix.get(j, c) {
                Stance::Support => support += 1,
                Stance::Contradict => contradict += 1,
                Stance::Abstain => {}
            }
        }
        let mode = match support.cmp(&contradict) {
            std::cmp::Ordering::Greater => Some(Stance::Support),
            std::cmp::Ordering::Less => Some(Stance::Contradict),
            std::cmp::Ordering::Equal => None,
        };
        if mode == Some(matrix.get(i, c)) {
            hits += 1;
        }
    }
    Ok(hits as f64 / k as f64)
}

/// `ŵ ≥ t`.
pub fn hard_threshold_include(score: f64, threshold: f64) -> Result<bool> {
    if score.is_nan() {
        return Err(Error::NanScore);
    }
    if !threshold.is_finite() {
        return Err(Error::domain("threshold must be finite"));
    }
    Ok(score >= threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineInclusion {
    pub probability: f64,
    /// `a + b·ŵ` fell outside [0, 1] and was clamped.
    pub clamped: bool,
}

/// Inclusion probability `clamp(a + b·ŵ, 0, 1)`.
pub fn affine_inclusion_probability(score: f64, offset: f64, slope: f64) -> Result<AffineInclusion> {
    if !(offset >= 0.0) || !(slope >= 0.0) {
        return Err(Error::domain(format!(
            "affine inclusion needs a >= 0 and b >= 0, got a = {offset}, b = {slope}"
        )));
    }
    if score.is_nan() {
        return Err(Error::NanScore);
    }
    let raw = offset + slope * score;
    let probability = raw.clamp(0.0, 1.0);
    Ok(AffineInclusion {
        probability,
        clamped: probability != raw,
    })
}

/// Threshold halfway between the truthful and the best deviating mean score.
pub fn midpoint_threshold(truthful_mean: f64, worst_deviation_mean: f64) -> Result<f64> {
    if !(truthful_mean > worst_deviation_mean) {
        return Err(Error::NoSeparation {
            truthful: truthful_mean,
            deviation: worst_deviation_mean,
        });
    }
    Ok((truthful_mean + worst_deviation_mean) / 2.0)
}

/// `u = v·p − c·e`.
pub fn expected_utility(inclusion_probability: f64, value: f64, cost: f64, effort: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&inclusion_probability) {
        return Err(Error::domain(format!(
            "inclusion probability {inclusion_probability} outside [0, 1]"
        )));
    }
    if !(value > 0.0) || !(cost >= 0.0) {
        return Err(Error::domain("need v > 0 and c >= 0"));
    }
    Ok(value * inclusion_probability - if effort { cost } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Stance::{Abstain as A, Contradict as C, Support as S};

    fn matrix(rows: &[&[Stance]]) -> StanceMatrix {
        StanceMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn all_permutations(k: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for x in 0..used.len() {
                if !used[x] {
                    used[x] = true;
                    prefix.push(x);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; k], &mut out);
        out
    }

    #[test]
    fn k3_admits_only_identity() {
        let valid: Vec<_> = all_permutations(3)
            .into_iter()
            .filter(|p| OffTaskPermutation::new(p.clone()).is_ok())
            .collect();
        assert_eq!(valid, vec![vec![0, 1, 2]]);
        let mut rng = stream_rng(3, 0);
        for _ in 0..20 {
            assert_eq!(sample_offtask_permutation(3, &mut rng).unwrap().as_slice(), &[0, 1, 2]);
        }
    }

    #[test]
    fn k2_rejected() {
        let mut rng = stream_rng(0, 0);
        assert!(matches!(sample_offtask_permutation(2, &mut rng), Err(Error::TooFewClaims(2))));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = source_permutation(10, 99, 4).unwrap();
        let b = source_permutation(10, 99, 4).unwrap();
        assert_eq!(a, b);
        assert!(OffTaskPermutation::new(a.as_slice().to_vec()).is_ok());
    }

    #[test]
    fn sampling_is_uniform_over_valid_k5() {
        // Enumerate the valid set, then check empirical frequencies.
        let valid: Vec<_> = all_permutations(5)
            .into_iter()
            .filter(|p| OffTaskPermutation::new(p.clone()).is_ok())
            .collect();
        assert!(valid.len() > 1);
        let mut counts = std::collections::HashMap::new();
        let mut rng = stream_rng(11, 0);
        let draws = 200 * valid.len();
        for _ in 0..draws {
            *counts.entry(sample_offtask_permutation(5, &mut rng).unwrap().mapping).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), valid.len());
        for c in counts.values() {
            // expected 200, sd ~14
            assert!((*c as f64 - 200.0).abs() < 80.0, "count {c}");
        }
    }

    #[test]
    fn pair_score_truth_table() {
        assert_eq!(pair_task_score(S, S), 1);
        assert_eq!(pair_task_score(C, C), 1);
        assert_eq!(pair_task_score(S, C), 0);
        assert_eq!(pair_task_score(A, S), 0);
        assert_eq!(pair_task_score(A, A), 0);
    }

    #[test]
    fn pairwise_examples() {
        let id = OffTaskPermutation::identity(3).unwrap();
        let m = matrix(&[&[S, C, S], &[S, C, S]]);
        // k = 2 (1-based) -> index 1
        assert_eq!(pairwise_claim_score(0, 1, 1, &m, &id).unwrap(), 0);
        // on-task S vs C misses; off-task (r_i[1], r_j[2]) = (C, C) agrees
        let m = matrix(&[&[S, C, S], &[C, S, C]]);
        assert_eq!(pairwise_claim_score(0, 1, 0, &m, &id).unwrap(), -1);
        let m = matrix(&[&[S, S, S], &[S, S, S]]);
        for k in 0..3 {
            assert_eq!(pairwise_claim_score(0, 1, k, &m, &id).unwrap(), 0);
        }
        assert!(matches!(pairwise_claim_score(1, 1, 0, &m, &id), Err(Error::SelfScoring(1))));
    }

    #[test]
    fn peer_average_examples() {
        let id = OffTaskPermutation::identity(3).unwrap();
        let m = matrix(&[&[S, C, S], &[S, C, S]]);
        assert!((peer_average_score(0, 1, &m, &id).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let m = matrix(&[&[C, C, C], &[C, C, C]]);
        assert_eq!(peer_average_score(0, 1, &m, &id).unwrap(), 0.0);
        let m = matrix(&[&[S, C, S], &[A, A, A]]);
        assert_eq!(peer_average_score(0, 1, &m, &id).unwrap(), 0.0);
    }

    #[test]
    fn source_score_examples() {
        let id = OffTaskPermutation::identity(3).unwrap();
        let m = matrix(&[&[S, C, S], &[S, C, S]]);
        assert_eq!(source_score(0, &m, &id, None).unwrap(), peer_average_score(0, 1, &m, &id).unwrap());

        // peer 1 agrees (2/3), peer 2 is the mirror image
        let m = matrix(&[&[S, C, S], &[S, C, S], &[C, S, C]]);
        let s1 = peer_average_score(0, 1, &m, &id).unwrap();
        let s2 = peer_average_score(0, 2, &m, &id).unwrap();
        assert!((s1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((s2 + 2.0 / 3.0).abs() < 1e-15);
        assert!(source_score(0, &m, &id, None).unwrap().abs() < 1e-15);
        let w = [1.0, 1.0, 0.0];
        assert!((source_score(0, &m, &id, Some(&w)).unwrap() - s1).abs() < 1e-15);

        let single = matrix(&[&[S, C, S]]);
        assert!(matches!(source_score(0, &single, &id, None), Err(Error::NoPeers { .. })));
        assert!(matches!(
            source_score(0, &m, &id, Some(&[1.0, 0.0, 0.0])),
            Err(Error::ZeroWeights { .. })
        ));
        assert!(matches!(source_score(0, &m, &id, Some(&[1.0, 1.0])), Err(Error::Shape(_))));
    }

    #[test]
    fn score_all_examples() {
        let m = matrix(&[&[S, C, S], &[S, C, S]]);
        let report = score_all(&m, 5, DEFAULT_THRESHOLD, None).unwrap();
        for id in ["s0", "s1"] {
            assert!((report.scores[id] - 2.0 / 3.0).abs() < 1e-15);
            assert!(report.included[id]);
        }
        let m = matrix(&[&[A, A, A], &[A, A, A], &[A, A, A]]);
        let report = score_all(&m, 5, DEFAULT_THRESHOLD, None).unwrap();
        assert!(report.scores.values().all(|&s| s == 0.0));
        assert!(report.included.values().all(|&b| !b));

        let short = matrix(&[&[S, C], &[S, C]]);
        assert!(matches!(score_all(&short, 0, 0.06, None), Err(Error::TooFewClaims(2))));
    }

    #[test]
    fn score_all_json_shape() {
        let m = matrix(&[&[S, C, S, C], &[S, C, S, S], &[C, C, S, A]]);
        let report = score_all(&m, 1, 0.06, None).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        for key in ["scores", "included", "threshold", "peer_components", "permutations"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["peer_components"]["s0"].as_object().unwrap().len(), 2);
    }

    #[test]
    fn majority_examples() {
        let m = matrix(&[&[S, C, S], &[S, C, S], &[S, C, S]]);
        assert_eq!(majority_score(0, &m).unwrap(), 1.0);
        let m = matrix(&[&[S, C, S], &[A, A, A], &[A, A, A]]);
        assert_eq!(majority_score(0, &m).unwrap(), 0.0);
        // tie on every column
        let m = matrix(&[&[S, S, S], &[S, C, S], &[C, S, C]]);
        assert_eq!(majority_score(0, &m).unwrap(), 0.0);
    }

    #[test]
    fn colluding_bloc_fools_majority_not_ca() {
        let truthful: &[Stance] = &[S, C, S, S, C, C, S, C];
        let bloc: &[Stance] = &[C; 8];
        let m = matrix(&[truthful, truthful, bloc, bloc, bloc, bloc]);
        let report = score_all(&m, 3, 0.06, None).unwrap();
        for c in ["s2", "s3", "s4", "s5"] {
            assert_eq!(majority_score(m.source_ids().iter().position(|x| x == c).unwrap(), &m).unwrap(), 1.0);
            for (peer, v) in &report.peer_components[c] {
                if peer.as_str() >= "s2" {
                    assert_eq!(*v, 0.0);
                }
            }
        }
        assert!(majority_score(0, &m).unwrap() < 1.0);
        assert!(report.scores["s0"] > report.scores["s2"]);
    }

    #[test]
    fn inclusion_rules() {
        assert!(hard_threshold_include(0.08, 0.06).unwrap());
        assert!(hard_threshold_include(0.06, 0.06).unwrap());
        assert!(!hard_threshold_include(-0.1, 0.06).unwrap());
        assert!(matches!(hard_threshold_include(f64::NAN, 0.06), Err(Error::NanScore)));

        assert_eq!(affine_inclusion_probability(0.0, 0.1, 1.0).unwrap(), AffineInclusion { probability: 0.1, clamped: false });
        assert_eq!(affine_inclusion_probability(1.0, 0.5, 1.0).unwrap(), AffineInclusion { probability: 1.0, clamped: true });
        let p = affine_inclusion_probability(0.2, 0.0, 2.0).unwrap();
        assert!((p.probability - 0.4).abs() < 1e-15 && !p.clamped);
        assert!(affine_inclusion_probability(0.2, -0.1, 2.0).is_err());
        assert!(affine_inclusion_probability(-0.5, 0.1, 1.0).unwrap().clamped);
    }

    #[test]
    fn midpoint_and_utility() {
        assert!((midpoint_threshold(0.2, 0.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((midpoint_threshold(0.096, 0.0384).unwrap() - 0.0672).abs() < 1e-15);
        assert!(matches!(midpoint_threshold(0.1, 0.1), Err(Error::NoSeparation { .. })));

        assert!((expected_utility(1.0, 1.0, 0.3, true).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(expected_utility(0.0, 1.0, 0.0, false).unwrap(), 0.0);
        assert!((expected_utility(0.5, 2.0, 0.5, true).unwrap() - 0.5).abs() < 1e-15);
        assert!(expected_utility(1.5, 1.0, 0.0, true).is_err());
    }

    fn stance_strategy() -> impl Strategy<Value = Stance> {
        prop_oneof![Just(S), Just(C), Just(A)]
    }

    fn matrix_strategy() -> impl Strategy<Value = StanceMatrix> {
        (2usize..6, 3usize..10).prop_flat_map(|(n, k)| {
            proptest::collection::vec(proptest::collection::vec(stance_strategy(), k), n)
                .prop_map(|rows| StanceMatrix::from_rows(rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn scores_are_bounded(m in matrix_strategy(), seed in any::<u64>()) {
            let report = score_all(&m, seed, 0.06, None).unwrap();
            for (i, id) in m.source_ids().iter().enumerate() {
                let s = report.scores[id];
                prop_assert!((-1.0..=1.0).contains(&s));
                let comps = &report.peer_components[id];
                prop_assert!(comps.values().all(|c| (-1.0..=1.0).contains(c)));
                let mean = comps.values().sum::<f64>() / comps.len() as f64;
                prop_assert!((mean - s).abs() < 1e-12);
                let maj = majority_score(i, &m).unwrap();
                prop_assert!((0.0..=1.0).contains(&maj));
            }
        }

        #[test]
        fn uniform_weights_match_unweighted(m in matrix_strategy(), seed in any::<u64>(), w in 0.01..=1.0f64) {
            let k = m.n_claims();
            let weights = vec![w; m.n_sources()];
            for i in 0..m.n_sources() {
                let perm = source_permutation(k, seed, i).unwrap();
                let a = source_score(i, &m, &perm, None).unwrap();
                let b = source_score(i, &m, &perm, Some(&weights)).unwrap();
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn constant_rows_cancel(m in matrix_strategy(), seed in any::<u64>(), polar in any::<bool>(), other in any::<bool>()) {
            let mut m = m;
            let k = m.n_claims();
            for c in 0..k {
                m.set(0, c, Stance::from_report(polar));
                m.set(1, c, Stance::from_report(other));
            }
            let perm = source_permutation(k, seed, 0).unwrap();
            prop_assert_eq!(peer_average_score(0, 1, &m, &perm).unwrap(), 0.0);
            prop_assert_eq!(peer_average_score(1, 0, &m, &perm).unwrap(), 0.0);
            // against any peer, a constant row scores on-task rate minus off-task rate of the same column set
            for j in 2..m.n_sources() {
                let matches = m.row(j).iter().filter(|&&s| s == Stance::from_report(polar)).count() as f64;
                let on = matches / k as f64;
                let s = peer_average_score(0, j, &m, &perm).unwrap();
                prop_assert!((s - (on - on)).abs() < 1e-12);
            }
        }

        #[test]
        fn single_column_change_is_three_over_k(m in matrix_strategy(), seed in any::<u64>(), col in any::<prop::sample::Index>(), replacement in proptest::collection::vec(stance_strategy(), 6)) {
            let k = m.n_claims();
            let c = col.index(k);
            let mut changed = m.clone();
            for i in 0..m.n_sources() {
                changed.set(i, c, replacement[i]);
            }
            for i in 0..m.n_sources() {
                let perm = source_permutation(k, seed, i).unwrap();
                let before = source_score(i, &m, &perm, None).unwrap();
                let after = source_score(i, &changed, &perm, None).unwrap();
                prop_assert!((before - after).abs() <= 3.0 / k as f64 + 1e-12);
            }
        }
    }
}
