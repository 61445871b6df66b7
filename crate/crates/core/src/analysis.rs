//! Inequality checks behind the equilibrium lemmas and the constructive
//! symmetric mixed-equilibrium family.
//!
//! Lemma numbering follows the report wire format: lemma 1 is the product
//! bound `p_near * p_far < p_mid^2` every admissible triple satisfies;
//! lemma 3 is the pair of strict inequalities certifying that a full-support
//! legitimate mixture against Eve fixed at the middle position is a mixed
//! equilibrium of the symmetric game.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelTriple;
use crate::game::{build_utility_matrix, EveStrategy, GameError, GameSpec};
use crate::scalar::{Scalar, ScalarError, FLOAT_MARGIN};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("the spec must be symmetric (equal triples) for this check")]
    NotSymmetric,
    #[error("profile weights must be strictly positive: {0}")]
    NonPositiveWeight(String),
    #[error("profile weights must sum to one, got {0}")]
    BadWeightSum(String),
    #[error("profile has {got} Alice/Bob weights, expected N/2 = {expected}")]
    BadWeightCount { got: usize, expected: usize },
    #[error("numerically ambiguous check: {0}")]
    NumericallyAmbiguous(#[from] ScalarError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Wire-format report for a lemma inequality: `holds` iff `lhs < rhs`
/// strictly; `margin = rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub holds: bool,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub margin: Scalar,
}

/// Lemma 1: `p_near * p_far < p_mid^2`, equivalently
/// `p_near^(N/2) * p_far^(N/2) < p_mid^N` for every even `N`. Holds for
/// every triple accepted by the validator.
pub fn check_lemma1(triple: &ChannelTriple) -> LemmaReport {
    let lhs = triple.p_near() * triple.p_far();
    let rhs = triple.p_mid().pow(2);
    LemmaReport {
        lemma: "1".to_string(),
        holds: lhs < rhs,
        margin: &rhs - &lhs,
        lhs,
        rhs,
    }
}

/// A full-support mixture for the legitimate users of a symmetric game:
/// weights for `AliceHeavy(n)`, the even split, and `BobHeavy(n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricMixedProfile {
    q_alice: Vec<Scalar>,
    q_split: Scalar,
    q_bob: Vec<Scalar>,
}

impl SymmetricMixedProfile {
    /// All weights must be strictly positive and sum to exactly one
    /// (within the float margin in float mode).
    pub fn new(
        q_alice: Vec<Scalar>,
        q_split: Scalar,
        q_bob: Vec<Scalar>,
    ) -> Result<Self, AnalysisError> {
        if q_alice.len() != q_bob.len() {
            return Err(AnalysisError::BadWeightCount {
                got: q_bob.len(),
                expected: q_alice.len(),
            });
        }
        let all = q_alice.iter().chain(std::iter::once(&q_split)).chain(q_bob.iter());
        let mut sum = Scalar::zero();
        let mut exact = true;
        for w in all {
            if w.is_negative() || w.is_zero() {
                return Err(AnalysisError::NonPositiveWeight(w.to_string()));
            }
            exact &= w.is_exact();
            sum = &sum + w;
        }
        let sums_to_one = if exact {
            sum.is_one()
        } else {
            (sum.to_f64() - 1.0).abs() <= FLOAT_MARGIN
        };
        if !sums_to_one {
            return Err(AnalysisError::BadWeightSum(sum.to_string()));
        }
        Ok(SymmetricMixedProfile { q_alice, q_split, q_bob })
    }

    pub fn q_alice(&self) -> &[Scalar] {
        &self.q_alice
    }

    pub fn q_split(&self) -> &Scalar {
        &self.q_split
    }

    pub fn q_bob(&self) -> &[Scalar] {
        &self.q_bob
    }

    /// The profile as a probability vector in matrix column order.
    pub fn to_q_vector(&self, n: u32) -> Result<Vec<Scalar>, AnalysisError> {
        let half = (n / 2) as usize;
        if self.q_alice.len() != half {
            return Err(AnalysisError::BadWeightCount {
                got: self.q_alice.len(),
                expected: half,
            });
        }
        let mut q = vec![Scalar::zero(); n as usize + 1];
        for (k, w) in self.q_alice.iter().enumerate() {
            q[k] = w.clone();
        }
        q[half] = self.q_split.clone();
        for (k, w) in self.q_bob.iter().enumerate() {
            // BobHeavy(k) sits at column N - k.
            q[n as usize - k] = w.clone();
        }
        Ok(q)
    }
}

fn require_symmetric(spec: &GameSpec) -> Result<(), AnalysisError> {
    if spec.is_symmetric() {
        Ok(())
    } else {
        Err(AnalysisError::NotSymmetric)
    }
}

/// Lemma 3 check: with Eve fixed at the middle, a full-support legitimate
/// mixture is an equilibrium iff Eve's expected capture at both side
/// positions stays strictly below `p_mid^N`.
///
/// The report's `lhs` is the larger of the two side expectations, so
/// `margin` is the worst-case slack.
pub fn check_symmetric_mixed(
    spec: &GameSpec,
    profile: &SymmetricMixedProfile,
) -> Result<LemmaReport, AnalysisError> {
    require_symmetric(spec)?;
    let (near_alice, middle, near_bob) = eve_row_payoffs(spec, profile)?;
    let gt = |a: &Scalar, b: &Scalar| a.decide_gt(b).map_err(AnalysisError::from);
    let holds = gt(&middle, &near_alice)? && gt(&middle, &near_bob)?;
    let lhs = if near_alice >= near_bob { near_alice } else { near_bob };
    Ok(LemmaReport {
        lemma: "3".to_string(),
        holds,
        margin: &middle - &lhs,
        lhs,
        rhs: middle,
    })
}

fn eve_row_payoffs(
    spec: &GameSpec,
    profile: &SymmetricMixedProfile,
) -> Result<(Scalar, Scalar, Scalar), AnalysisError> {
    let matrix = build_utility_matrix(spec)?;
    let q = profile.to_q_vector(spec.n())?;
    let rows = matrix.row_expectations(&q);
    Ok((
        rows[EveStrategy::NearAlice.index()].clone(),
        rows[EveStrategy::Middle.index()].clone(),
        rows[EveStrategy::NearBob.index()].clone(),
    ))
}

/// Eve's expected capture probability at each position under the profile.
/// When the lemma-3 inequalities hold, the middle entry is the unique best
/// response.
pub fn eve_middle_dominance(
    spec: &GameSpec,
    profile: &SymmetricMixedProfile,
) -> Result<(Scalar, Scalar, Scalar), AnalysisError> {
    require_symmetric(spec)?;
    eve_row_payoffs(spec, profile)
}

/// Constructively pick a full-support profile satisfying the lemma-3
/// inequalities.
///
/// Setting `q_alice = q_bob` collapses the two inequalities into one. Each
/// index `n` is classified by whether its paired capture term
/// `p_near^(N-n) p_far^n + p_near^n p_far^(N-n)` already fits under
/// `2 p_mid^N` (case 1) or not (case 2). Weights start uniform; case-2
/// weights are halved until the collapsed inequality holds, and the
/// remainder goes to the even split. Termination: as case-2 weights shrink,
/// the left side drops strictly below the bound because the split term
/// satisfies the lemma-1 inequality strictly.
pub fn construct_feasible_q(spec: &GameSpec) -> Result<SymmetricMixedProfile, AnalysisError> {
    require_symmetric(spec)?;
    let n = spec.n();
    let half = (n / 2) as usize;
    let triple = spec.triple_a();
    let p_near = triple.p_near();
    let p_far = triple.p_far();
    let bound = triple.p_mid().pow(n);
    let split_term = (p_near * p_far).pow(n / 2);

    let paired_terms: Vec<Scalar> = (0..half)
        .map(|k| {
            let k = k as u32;
            &(&p_near.pow(n - k) * &p_far.pow(k)) + &(&p_near.pow(k) * &p_far.pow(n - k))
        })
        .collect();
    let two_bound = &Scalar::from_int(2) * &bound;
    let case2: Vec<bool> = paired_terms.iter().map(|t| t > &two_bound).collect();

    let uniform = Scalar::from_ratio(1, i64::from(n) + 1);
    let mut weights: Vec<Scalar> = vec![uniform.clone(); half];
    let half_factor = Scalar::from_ratio(1, 2);
    loop {
        let weight_sum = weights.iter().fold(Scalar::zero(), |acc, w| &acc + w);
        let q_split = &Scalar::one() - &(&Scalar::from_int(2) * &weight_sum);
        let lhs = weights
            .iter()
            .zip(&paired_terms)
            .fold(&q_split * &split_term, |acc, (w, t)| &acc + &(w * t));
        if lhs < bound {
            let profile = SymmetricMixedProfile::new(weights.clone(), q_split, weights)?;
            debug_assert!(check_symmetric_mixed(spec, &profile)
                .map(|r| r.holds)
                .unwrap_or(false));
            return Ok(profile);
        }
        for (w, &is_case2) in weights.iter_mut().zip(&case2) {
            if is_case2 {
                *w = &*w * &half_factor;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelTriple;
    use crate::solver::{verify_equilibrium, Equilibrium, EquilibriumKind};

    fn s(text: &str) -> Scalar {
        Scalar::from_decimal_str(text).unwrap()
    }

    fn triple(near: &str, mid: &str, far: &str) -> ChannelTriple {
        ChannelTriple::from_strs(near, mid, far).unwrap()
    }

    fn symmetric_spec(n: u32, near: &str, mid: &str, far: &str) -> GameSpec {
        let t = triple(near, mid, far);
        GameSpec::new(n, t.clone(), t).unwrap()
    }

    #[test]
    fn lemma1_examples() {
        let report = check_lemma1(&triple("0.9", "0.8", "0.6"));
        assert!(report.holds);
        assert_eq!(report.lhs, s("0.54"));
        assert_eq!(report.rhs, s("0.64"));
        assert_eq!(report.margin, s("0.1"));

        let report = check_lemma1(&triple("0.99", "0.94", "0.80"));
        assert!(report.holds);
        assert_eq!(report.lhs, s("0.792"));
        assert_eq!(report.rhs, s("0.8836"));

        // A triple violating the midpoint assumption also violates the
        // product bound: raw construction only.
        let bad = ChannelTriple::raw(s("0.9"), s("0.7"), s("0.6")).unwrap();
        let report = check_lemma1(&bad);
        assert!(!report.holds);
        assert_eq!(report.lhs, s("0.54"));
        assert_eq!(report.rhs, s("0.49"));
    }

    #[test]
    fn symmetric_mixed_check_example() {
        let spec = symmetric_spec(2, "0.9", "0.8", "0.6");
        let profile =
            SymmetricMixedProfile::new(vec![s("0.45")], s("0.10"), vec![s("0.45")]).unwrap();
        let report = check_symmetric_mixed(&spec, &profile).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, s("0.5805"));
        assert_eq!(report.rhs, s("0.64"));
    }

    #[test]
    fn near_split_profile_passes() {
        let spec = symmetric_spec(2, "0.9", "0.8", "0.6");
        let eps = s("0.001");
        let split = &Scalar::one() - &(&Scalar::from_int(2) * &eps);
        let profile = SymmetricMixedProfile::new(vec![eps.clone()], split, vec![eps]).unwrap();
        assert!(check_symmetric_mixed(&spec, &profile).unwrap().holds);
    }

    #[test]
    fn zero_weight_is_rejected() {
        assert!(matches!(
            SymmetricMixedProfile::new(vec![s("0")], s("0.5"), vec![s("0.5")]),
            Err(AnalysisError::NonPositiveWeight(_))
        ));
        assert!(matches!(
            SymmetricMixedProfile::new(vec![s("0.3")], s("0.3"), vec![s("0.3")]),
            Err(AnalysisError::BadWeightSum(_))
        ));
    }

    #[test]
    fn asymmetric_spec_is_rejected() {
        let spec = GameSpec::new(
            2,
            triple("0.99", "0.94", "0.80"),
            triple("0.90", "0.84", "0.70"),
        )
        .unwrap();
        let profile =
            SymmetricMixedProfile::new(vec![s("0.45")], s("0.10"), vec![s("0.45")]).unwrap();
        assert!(matches!(
            check_symmetric_mixed(&spec, &profile),
            Err(AnalysisError::NotSymmetric)
        ));
    }

    #[test]
    fn middle_dominance_examples() {
        let spec = symmetric_spec(2, "0.9", "0.8", "0.6");
        let profile =
            SymmetricMixedProfile::new(vec![s("0.45")], s("0.10"), vec![s("0.45")]).unwrap();
        let (near_alice, middle, near_bob) = eve_middle_dominance(&spec, &profile).unwrap();
        assert_eq!(near_alice, s("0.5805"));
        assert_eq!(middle, s("0.64"));
        assert_eq!(near_bob, s("0.5805"));
        assert!(middle > near_alice && middle > near_bob);
    }

    #[test]
    fn construct_case1_instance() {
        // n = 0 is case 1: 0.81 + 0.36 = 1.17 <= 2 * 0.64 = 1.28.
        let spec = symmetric_spec(2, "0.9", "0.8", "0.6");
        let profile = construct_feasible_q(&spec).unwrap();
        assert!(check_symmetric_mixed(&spec, &profile).unwrap().holds);
        assert_eq!(profile.q_alice()[0], s("1/3"));
        assert_eq!(*profile.q_split(), s("1/3"));
    }

    #[test]
    fn construct_case1_instance_n4() {
        // 0.99^4 + 0.5^4 = 1.02309601 <= 2 * 0.9^4 = 1.3122 keeps n = 0 in
        // case 1.
        let spec = symmetric_spec(4, "0.99", "0.9", "0.5");
        let lhs = &s("0.99").pow(4) + &s("0.5").pow(4);
        assert_eq!(lhs, s("1.02309601"));
        assert!(lhs <= &Scalar::from_int(2) * &s("0.9").pow(4));
        let profile = construct_feasible_q(&spec).unwrap();
        assert!(check_symmetric_mixed(&spec, &profile).unwrap().holds);
    }

    #[test]
    fn construct_case2_instance_halves_weights() {
        // (0.9, 0.5, 0.05) is admissible (0.5 > 0.475) yet 0.81 + 0.0025 >
        // 2 * 0.25, so n = 0 is case 2 and the uniform start fails the
        // collapsed inequality until at least one halving.
        let spec = symmetric_spec(2, "0.9", "0.5", "0.05");
        let profile = construct_feasible_q(&spec).unwrap();
        assert!(check_symmetric_mixed(&spec, &profile).unwrap().holds);
        assert!(profile.q_alice()[0] < s("1/3"));
        assert!(*profile.q_split() > s("1/3"));
    }

    #[test]
    fn constructed_profile_with_middle_eve_is_an_equilibrium() {
        for (n, near, mid, far) in [(2, "0.9", "0.8", "0.6"), (4, "0.99", "0.9", "0.5"), (2, "0.9", "0.5", "0.05")] {
            let spec = symmetric_spec(n, near, mid, far);
            let profile = construct_feasible_q(&spec).unwrap();
            let matrix = build_utility_matrix(&spec).unwrap();
            let eq = Equilibrium {
                kind: EquilibriumKind::Mixed {
                    p: vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
                    q: profile.to_q_vector(n).unwrap(),
                },
                value: spec.triple_a().p_mid().pow(n),
                degenerate: true,
            };
            let report = verify_equilibrium(&matrix, &eq, &Scalar::zero()).unwrap();
            assert!(report.verified, "profile for N={n} must verify");
        }
    }

    #[test]
    fn lemma_report_wire_format() {
        let report = check_lemma1(&triple("0.9", "0.8", "0.6"));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "lemma": "1",
                "holds": true,
                "lhs": "0.54",
                "rhs": "0.64",
                "margin": "0.1",
            })
        );
    }

    #[test]
    fn split_column_values_match_example() {
        let spec = symmetric_spec(2, "0.9", "0.8", "0.6");
        let profile = SymmetricMixedProfile::new(
            vec![s("0.000001")],
            s("0.999998"),
            vec![s("0.000001")],
        )
        .unwrap();
        let (near_alice, middle, _) = eve_middle_dominance(&spec, &profile).unwrap();
        // Approaches the pure split column (0.54, 0.64, 0.54).
        assert!(near_alice > s("0.5399") && near_alice < s("0.5401"));
        assert_eq!(middle, s("0.64"));
    }
}
