//! Closed-form calculators: expected scores, concentration tails, the
//! bounded-difference constant, finite-K sample sizes and the affine
//! dominance condition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::WorldConfig;

/// A scored-source parameter that is either constant or varies by claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ClaimProfile {
    Constant(f64),
    PerClaim(Vec<f64>),
}

impl ClaimProfile {
    fn at(&self, k: usize) -> f64 {
        match self {
            ClaimProfile::Constant(x) => *x,
            ClaimProfile::PerClaim(v) => v[k],
        }
    }

    fn check(&self, k: usize, lo: f64, name: &str) -> Result<()> {
        let values: &[f64] = match self {
            ClaimProfile::Constant(x) => std::slice::from_ref(x),
            ClaimProfile::PerClaim(v) => {
                if v.len() != k {
                    return Err(Error::shape(format!("{name} has {} entries, expected {k}", v.len())));
                }
                v
            }
        };
        if values.iter().any(|x| !(lo..=1.0).contains(x)) {
            return Err(Error::domain(format!("{name} entries must lie in [{lo}, 1]")));
        }
        Ok(())
    }
}

/// Inputs to the expected-score formula for one scored source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedScoreParams {
    pub prior: f64,
    pub coverage: ClaimProfile,
    pub informativeness: ClaimProfile,
    /// `α_jk`, one row per peer.
    pub peer_coverage: Vec<Vec<f64>>,
    /// `η_jk`, one row per peer.
    pub peer_informativeness: Vec<Vec<f64>>,
}

impl ExpectedScoreParams {
    /// Claim-invariant peers `(α_j, η_j)` over `k` claims.
    pub fn homogeneous(prior: f64, coverage: f64, informativeness: f64, peers: &[(f64, f64)], k: usize) -> Self {
        ExpectedScoreParams {
            prior,
            coverage: ClaimProfile::Constant(coverage),
            informativeness: ClaimProfile::Constant(informativeness),
            peer_coverage: peers.iter().map(|&(a, _)| vec![a; k]).collect(),
            peer_informativeness: peers.iter().map(|&(_, e)| vec![e; k]).collect(),
        }
    }

    /// Parameters for scoring `source` in a synthetic world; peers are every
    /// other source in order.
    pub fn from_world(config: &WorldConfig, source: usize) -> Self {
        let k = config.n_claims;
        let per_claim = |j: usize, f: &dyn Fn(usize, usize) -> f64| -> Vec<f64> { (0..k).map(|c| f(j, c)).collect() };
        let cov = |j, c| config.coverage(j, c);
        let eta = |j, c| config.report_informativeness(j, c);
        let peers: Vec<usize> = (0..config.n_sources()).filter(|&j| j != source).collect();
        let profile = |v: Vec<f64>| {
            if v.windows(2).all(|w| w[0] == w[1]) {
                ClaimProfile::Constant(v.first().copied().unwrap_or(0.0))
            } else {
                ClaimProfile::PerClaim(v)
            }
        };
        ExpectedScoreParams {
            prior: config.prior,
            coverage: profile(per_claim(source, &cov)),
            informativeness: profile(per_claim(source, &eta)),
            peer_coverage: peers.iter().map(|&j| per_claim(j, &cov)).collect(),
            peer_informativeness: peers.iter().map(|&j| per_claim(j, &eta)).collect(),
        }
    }

    pub fn n_claims(&self) -> usize {
        self.peer_coverage.first().map_or(0, Vec::len)
    }

    pub fn n_peers(&self) -> usize {
        self.peer_coverage.len()
    }

    fn validate(&self) -> Result<usize> {
        if !(self.prior > 0.0 && self.prior < 1.0) {
            return Err(Error::domain(format!("prior {} must lie in (0, 1)", self.prior)));
        }
        if self.peer_coverage.len() != self.peer_informativeness.len() {
            return Err(Error::shape("peer coverage and informativeness disagree on peer count"));
        }
        let k = self.n_claims();
        if k == 0 {
            return Err(Error::shape("no claims"));
        }
        for (a, e) in self.peer_coverage.iter().zip(&self.peer_informativeness) {
            if a.len() != k || e.len() != k {
                return Err(Error::shape(format!("every peer row must have {k} entries")));
            }
            if a.iter().any(|x| !(0.0..=1.0).contains(x)) || e.iter().any(|x| !(-1.0..=1.0).contains(x)) {
                return Err(Error::domain("peer coverage must lie in [0, 1], informativeness in [-1, 1]"));
            }
        }
        self.coverage.check(k, 0.0, "coverage")?;
        self.informativeness.check(k, -1.0, "informativeness")?;
        Ok(k)
    }
}

/// `E[σ̄_ij] = (1/K) Σ_k 2π(1−π) α_i(k) α_jk η_i(k) η_jk`.
pub fn expected_pair_score(params: &ExpectedScoreParams, peer: usize) -> Result<f64> {
    let k = params.validate()?;
    if peer >= params.n_peers() {
        return Err(Error::OutOfRange(format!("peer {peer} >= {}", params.n_peers())));
    }
    let scale = 2.0 * params.prior * (1.0 - params.prior);
    let a = &params.peer_coverage[peer];
    let e = &params.peer_informativeness[peer];
    let total: f64 = (0..k)
        .map(|c| scale * params.coverage.at(c) * a[c] * params.informativeness.at(c) * e[c])
        .sum();
    Ok(total / k as f64)
}

/// `E[ŵ_i]`: the (weighted) peer mean of `expected_pair_score`. Weights are
/// indexed by peer.
pub fn expected_source_score(params: &ExpectedScoreParams, weights: Option<&[f64]>) -> Result<f64> {
    params.validate()?;
    let n = params.n_peers();
    if n == 0 {
        return Err(Error::NoPeers { source_index: 0 });
    }
    let pairs = (0..n).map(|j| expected_pair_score(params, j)).collect::<Result<Vec<_>>>()?;
    match weights {
        None => Ok(pairs.iter().sum::<f64>() / n as f64),
        Some(w) => {
            if w.len() != n {
                return Err(Error::shape(format!("expected {n} peer weights, got {}", w.len())));
            }
            let total: f64 = w.iter().sum();
            if !(total > 0.0) {
                return Err(Error::ZeroWeights { source_index: 0 });
            }
            Ok(pairs.iter().zip(w).map(|(p, w)| p * w).sum::<f64>() / total)
        }
    }
}

/// Two-sided tail bound `min(1, 2 exp(−2 K t² / 9))`.
pub fn mcdiarmid_tail(k: usize, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("K must be at least 1"));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("deviation t must be positive, got {t}")));
    }
    Ok((2.0 * (-2.0 * k as f64 * t * t / 9.0).exp()).min(1.0))
}

/// Bounded-difference constant `3/K` of `ŵ_i` in one claim block.
pub fn lipschitz_delta(k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::TooFewClaims(k));
    }
    Ok(3.0 / k as f64)
}

/// Smallest K with
/// `K ≥ max{ 9/(2g²)·ln(2v/ε), 9/(2m²)·ln(2/(1 − c/v)) }`.
pub fn min_claims(gap: f64, margin: f64, value: f64, cost: f64, epsilon: f64) -> Result<u64> {
    if !(gap > 0.0) || !(margin > 0.0) {
        return Err(Error::domain("gap and margin must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < value) {
        return Err(Error::domain(format!("need 0 < epsilon < v, got epsilon = {epsilon}, v = {value}")));
    }
    if !(cost >= 0.0 && cost < value) {
        return Err(Error::domain(format!("need 0 <= c < v, got c = {cost}, v = {value}")));
    }
    let informed = 9.0 / (2.0 * gap * gap) * (2.0 * value / epsilon).ln();
    let uninformed = 9.0 / (2.0 * margin * margin) * (2.0 / (1.0 - cost / value)).ln();
    Ok(informed.max(uninformed).ceil() as u64)
}

/// Per-side buffer `φ_min · α_i · η_truth · γ`.
pub fn gap_lower_bound(phi_min: f64, coverage: f64, eta_truth: f64, margin: f64) -> Result<f64> {
    let inputs = [("phi_min", phi_min), ("coverage", coverage), ("eta_truth", eta_truth), ("gamma", margin)];
    if let Some((name, x)) = inputs.iter().find(|(_, x)| !(*x > 0.0)) {
        return Err(Error::domain(format!("{name} must be positive, got {x}")));
    }
    if phi_min > 0.5 || coverage > 1.0 || eta_truth > 1.0 {
        return Err(Error::domain("phi_min <= 0.5, coverage <= 1 and eta_truth <= 1 required"));
    }
    Ok(phi_min * coverage * eta_truth * margin)
}

/// Strict dominance of truthful reporting under affine inclusion:
/// `v·b·α_i·γ·η_truth > c`.
pub fn affine_dominance_check(value: f64, slope: f64, coverage: f64, margin: f64, eta_truth: f64, cost: f64) -> bool {
    value * slope * coverage * margin * eta_truth > cost
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SourceStrategy;
    use proptest::prelude::*;

    /// Joint-distribution enumeration for one on-task claim and an
    /// independent off-task pair, with per-source conditional support
    /// probabilities `(t, f)` and coverage.
    fn enumerate_pair(prior: f64, i: (f64, f64, f64), j: (f64, f64, f64)) -> f64 {
        let (ai, ti, fi) = i;
        let (aj, tj, fj) = j;
        let stance_dist = |a: f64, t: f64, f: f64, theta: bool| -> [f64; 3] {
            let p1 = if theta { t } else { f };
            [a * p1, a * (1.0 - p1), 1.0 - a] // support, contradict, abstain
        };
        let theta_p = |theta: bool| if theta { prior } else { 1.0 - prior };
        let mut on = 0.0;
        for theta in [true, false] {
            let di = stance_dist(ai, ti, fi, theta);
            let dj = stance_dist(aj, tj, fj, theta);
            on += theta_p(theta) * (di[0] * dj[0] + di[1] * dj[1]);
        }
        let mut off = 0.0;
        for th_l in [true, false] {
            for th_m in [true, false] {
                let di = stance_dist(ai, ti, fi, th_l);
                let dj = stance_dist(aj, tj, fj, th_m);
                off += theta_p(th_l) * theta_p(th_m) * (di[0] * dj[0] + di[1] * dj[1]);
            }
        }
        on - off
    }

    #[test]
    fn pair_examples() {
        let p = ExpectedScoreParams::homogeneous(0.5, 1.0, 1.0, &[(1.0, 1.0)], 7);
        assert!((expected_pair_score(&p, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((enumerate_pair(0.5, (1.0, 1.0, 0.0), (1.0, 1.0, 0.0)) - 0.5).abs() < 1e-15);

        let p = ExpectedScoreParams::homogeneous(0.5, 1.0, 0.0, &[(1.0, 1.0)], 7);
        assert_eq!(expected_pair_score(&p, 0).unwrap(), 0.0);

        let p = ExpectedScoreParams::homogeneous(0.5, 0.8, 0.6, &[(0.8, 0.5)], 10);
        assert!((expected_pair_score(&p, 0).unwrap() - 0.096).abs() < 1e-15);
        let oracle = enumerate_pair(0.5, (0.8, 0.8, 0.2), (0.8, 0.75, 0.25));
        assert!((oracle - 0.096).abs() < 1e-15);
    }

    #[test]
    fn pair_matches_monte_carlo() {
        use crate::rng::stream_rng;
        use rand::Rng;
        let mut rng = stream_rng(2024, 0);
        let n = 400_000;
        let draw = |rng: &mut rand_chacha::ChaCha8Rng, a: f64, t: f64, f: f64, theta: bool| -> u8 {
            if rng.gen::<f64>() >= a {
                2
            } else if rng.gen::<f64>() < if theta { t } else { f } {
                1
            } else {
                0
            }
        };
        let mut acc = 0.0;
        for _ in 0..n {
            let th = [rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_bool(0.5)];
            let ik = draw(&mut rng, 0.8, 0.8, 0.2, th[0]);
            let jk = draw(&mut rng, 0.8, 0.75, 0.25, th[0]);
            let il = draw(&mut rng, 0.8, 0.8, 0.2, th[1]);
            let jm = draw(&mut rng, 0.8, 0.75, 0.25, th[2]);
            acc += f64::from(u8::from(ik == jk && ik < 2)) - f64::from(u8::from(il == jm && il < 2));
        }
        let mean = acc / n as f64;
        // per-draw sd is below 1
        assert!((mean - 0.096).abs() < 4.0 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn source_examples() {
        let p = ExpectedScoreParams::homogeneous(0.3, 0.7, 0.5, &[(0.9, 0.4)], 5);
        assert_eq!(expected_source_score(&p, None).unwrap(), expected_pair_score(&p, 0).unwrap());
        let p = ExpectedScoreParams::homogeneous(0.5, 1.0, 1.0, &[(1.0, 0.5), (1.0, -0.5)], 5);
        assert!(expected_source_score(&p, None).unwrap().abs() < 1e-15);
        let p = ExpectedScoreParams::homogeneous(0.5, 1.0, 0.8, &[(1.0, 1.0); 3], 5);
        assert!((expected_source_score(&p, None).unwrap() - 0.4).abs() < 1e-15);
        assert!(expected_source_score(&p, Some(&[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn from_world_uses_strategy_informativeness() {
        let config = WorldConfig::new(0.5, 50, vec![SourceStrategy::truthful(0.9, 0.1, 1.0); 4], 0);
        let p = ExpectedScoreParams::from_world(&config, 0);
        assert_eq!(p.n_peers(), 3);
        assert!((expected_source_score(&p, None).unwrap() - 0.32).abs() < 1e-12);
    }

    #[test]
    fn tail_examples() {
        assert!((mcdiarmid_tail(100, 0.3).unwrap() - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((mcdiarmid_tail(100, 0.3).unwrap() - 0.27067).abs() < 1e-5);
        assert_eq!(mcdiarmid_tail(3, 0.01).unwrap(), 1.0);
        assert!(mcdiarmid_tail(10, 0.0).is_err());
        let (b1, b2) = (mcdiarmid_tail(400, 0.2).unwrap(), mcdiarmid_tail(800, 0.2).unwrap());
        assert!((b2 - b1 * b1 / 2.0).abs() < 1e-15);
        assert!((mcdiarmid_tail(50, 0.5).unwrap() - 0.124353).abs() < 1e-6);
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_delta(3).unwrap(), 1.0);
        assert!((lipschitz_delta(30).unwrap() - 0.1).abs() < 1e-15);
        assert!((lipschitz_delta(300).unwrap() - 0.01).abs() < 1e-15);
        assert!(lipschitz_delta(2).is_err());
    }

    #[test]
    fn min_claims_examples() {
        assert_eq!(min_claims(0.1, 0.1, 1.0, 0.5, 0.01).unwrap(), 2385);
        // ε → v⁻ with c = 0: first term tends to 9/(2g²)·ln 2
        let near = min_claims(0.1, 10.0, 1.0, 0.0, 1.0 - 1e-12).unwrap();
        assert_eq!(near, (450.0 * std::f64::consts::LN_2).ceil() as u64);
        assert!(min_claims(0.1, 0.1, 1.0, 0.0, 1.0).is_err());
        assert!(min_claims(0.0, 0.1, 1.0, 0.0, 0.5).is_err());
        assert!(min_claims(0.1, 0.1, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn min_claims_not_monotone_in_value_when_cost_term_dominates() {
        // The uninformed term shrinks as v grows; the max can decrease.
        let small_v = min_claims(1.0, 0.1, 1.0, 0.99, 0.5).unwrap();
        let large_v = min_claims(1.0, 0.1, 2.0, 0.99, 0.5).unwrap();
        assert!(large_v < small_v);
    }

    #[test]
    fn gap_and_dominance() {
        assert!((gap_lower_bound(0.5, 1.0, 1.0, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!(gap_lower_bound(0.0, 1.0, 1.0, 0.5).is_err());
        assert!((gap_lower_bound(0.1, 0.8, 0.6, 0.2).unwrap() - 0.0096).abs() < 1e-15);

        assert!(affine_dominance_check(1.0, 1.0, 1.0, 0.5, 1.0, 0.3));
        assert!(!affine_dominance_check(1.0, 0.0, 1.0, 0.5, 1.0, 0.1));
        assert!(!affine_dominance_check(1.0, 1.0, 1.0, 0.5, 1.0, 0.5));
    }

    proptest! {
        #[test]
        fn linear_in_informativeness(prior in 0.01..0.99f64, a in 0.0..=1.0f64, eta in -1.0..=1.0f64, lambda in 0.0..=1.0f64,
                                     peers in proptest::collection::vec((0.0..=1.0f64, -1.0..=1.0f64), 1..5)) {
            let base = expected_source_score(&ExpectedScoreParams::homogeneous(prior, a, eta, &peers, 9), None).unwrap();
            let scaled = expected_source_score(&ExpectedScoreParams::homogeneous(prior, a, lambda * eta, &peers, 9), None).unwrap();
            prop_assert!((scaled - lambda * base).abs() <= 1e-12);
        }

        #[test]
        fn flip_attenuates(prior in 0.01..0.99f64, s0 in 0.0..0.5f64, ds in 0.0..0.5f64, phi in 0.0..=0.5f64) {
            let s1 = s0 + ds;
            let peer = SourceStrategy::truthful(0.8, 0.3, 0.9);
            let truthful = WorldConfig::new(prior, 12, vec![SourceStrategy::truthful(s1, s0, 0.7), peer, peer], 0);
            let flipped = truthful.with_strategy(0, SourceStrategy::flipping(phi, s1, s0, 0.7));
            let t = expected_source_score(&ExpectedScoreParams::from_world(&truthful, 0), None).unwrap();
            let f = expected_source_score(&ExpectedScoreParams::from_world(&flipped, 0), None).unwrap();
            prop_assert!((f - (1.0 - 2.0 * phi) * t).abs() <= 1e-12);
        }

        #[test]
        fn constant_lists_reduce_to_scalar(prior in 0.01..0.99f64, a in 0.0..=1.0f64, eta in -1.0..=1.0f64,
                                           peers in proptest::collection::vec((0.0..=1.0f64, -1.0..=1.0f64), 1..4)) {
            let k = 11;
            let scalar = ExpectedScoreParams::homogeneous(prior, a, eta, &peers, k);
            let lists = ExpectedScoreParams {
                coverage: ClaimProfile::PerClaim(vec![a; k]),
                informativeness: ClaimProfile::PerClaim(vec![eta; k]),
                ..scalar.clone()
            };
            let x = expected_source_score(&scalar, None).unwrap();
            let y = expected_source_score(&lists, None).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300) + 1e-15);
        }

        #[test]
        fn min_claims_monotone(g in 0.01..0.5f64, m in 0.01..0.5f64, v in 0.5..2.0f64, cf in 0.0..0.9f64, ef in 0.01..0.9f64, bump in 1.0..1.5f64) {
            let c = cf * v;
            let e = ef * v;
            let base = min_claims(g, m, v, c, e).unwrap();
            prop_assert!(min_claims(g * bump, m, v, c, e).unwrap() <= base);
            prop_assert!(min_claims(g, m * bump, v, c, e).unwrap() <= base);
            if e * bump < v {
                prop_assert!(min_claims(g, m, v, c, e * bump).unwrap() <= base);
            }
            if c * bump < v {
                prop_assert!(min_claims(g, m, v, c * bump, e).unwrap() >= base);
            }
        }
    }
}
