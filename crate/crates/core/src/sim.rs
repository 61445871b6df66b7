//! Seeded Monte Carlo simulation of the packet-exchange protocol.
//!
//! Alice and Bob send their packets without retry; Eve captures the secret
//! iff she receives every packet (probability mode) or, in payload mode,
//! iff the XOR of the payloads she received equals the XOR of all `N`
//! payloads. Determinism is pinned down to the generator:
//!
//! * The PRNG is splitmix64: `state += 0x9E3779B97F4A7C15` per draw, output
//!   is the splitmix64 finalizer of the new state.
//! * Trial `t` of stream `s` (0 = strategy sampling and success indicators,
//!   1 = payloads) starts from
//!   `mix64(seed ^ mix64(t * 2 + s ^ 0xD1342543DE82EF95))`, so every trial
//!   is an independent substream and any partitioning of the trial range
//!   reproduces the sequential run exactly.
//! * Draw order inside a trial: legitimate strategy (only when mixed), then
//!   Eve's position (only when mixed), then Alice's packet indicators in
//!   send order, then Bob's.
//!
//! `f64` samples use the top 53 bits (`next_u64() >> 11` scaled by `2^-53`).

use serde::{Deserialize, Serialize};

use crate::game::{
    build_utility_matrix, legit_strategies, packet_counts, EveStrategy, GameError, GameSpec,
    LegitStrategy,
};
use crate::scalar::{validate_prob_vector, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("trial count must be at least 1")]
    ZeroTrials,
    #[error("payload size must be between 1 and 4096 bits, got {0}")]
    BadPayloadBits(u32),
    #[error("invalid strategy vector: {0}")]
    InvalidStrategyVector(String),
    #[error("strategy {0} is not valid for this spec")]
    UnknownStrategy(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;
const STREAM_SALT: u64 = 0xD1342543DE82EF95;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// One trial's substream of a seeded run.
#[derive(Debug, Clone)]
pub struct TrialRng {
    state: u64,
}

impl TrialRng {
    pub fn for_trial(seed: u64, trial: u64, stream: u64) -> Self {
        let tag = trial.wrapping_mul(2).wrapping_add(stream) ^ STREAM_SALT;
        TrialRng {
            state: mix64(seed ^ mix64(tag)),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` on the 53-bit grid.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }
}

/// A player's strategy in a simulation: fixed, or sampled per trial.
#[derive(Debug, Clone, PartialEq)]
pub enum LegitChoice {
    Pure(LegitStrategy),
    Mixed(Vec<Scalar>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EveChoice {
    Pure(EveStrategy),
    Mixed(Vec<Scalar>),
}

/// Capture criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Eve captures iff every per-packet success indicator fires.
    Probability,
    /// Random payloads are exchanged; Eve captures iff the XOR of her
    /// received payloads equals the XOR of all payloads. Indicator draws are
    /// shared with probability mode, so the two agree trial by trial.
    Payload,
}

pub const DEFAULT_PAYLOAD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    spec: GameSpec,
    legit: LegitChoice,
    eve: EveChoice,
    trials: u64,
    seed: u64,
    payload_bits: u32,
    mode: SimMode,
}

impl SimulationConfig {
    /// Validates the strategy vectors against the spec and collapses
    /// point-mass mixtures to pure strategies, so a degenerate mixture runs
    /// byte-identically to the pure configuration.
    pub fn new(
        spec: GameSpec,
        legit: LegitChoice,
        eve: EveChoice,
        trials: u64,
        seed: u64,
    ) -> Result<Self, SimError> {
        if trials == 0 {
            return Err(SimError::ZeroTrials);
        }
        let cols = legit_strategies(spec.n())?;
        let legit = match legit {
            LegitChoice::Pure(s) => {
                if !cols.contains(&s) {
                    return Err(SimError::UnknownStrategy(s.to_string()));
                }
                LegitChoice::Pure(s)
            }
            LegitChoice::Mixed(q) => {
                validate_prob_vector(&q, cols.len()).map_err(SimError::InvalidStrategyVector)?;
                match point_mass(&q) {
                    Some(i) => LegitChoice::Pure(cols[i]),
                    None => LegitChoice::Mixed(q),
                }
            }
        };
        let eve = match eve {
            EveChoice::Pure(s) => EveChoice::Pure(s),
            EveChoice::Mixed(p) => {
                validate_prob_vector(&p, 3).map_err(SimError::InvalidStrategyVector)?;
                match point_mass(&p) {
                    Some(i) => EveChoice::Pure(EveStrategy::ALL[i]),
                    None => EveChoice::Mixed(p),
                }
            }
        };
        Ok(SimulationConfig {
            spec,
            legit,
            eve,
            trials,
            seed,
            payload_bits: DEFAULT_PAYLOAD_BITS,
            mode: SimMode::Probability,
        })
    }

    pub fn with_mode(mut self, mode: SimMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_payload_bits(mut self, bits: u32) -> Result<Self, SimError> {
        if bits == 0 || bits > 4096 {
            return Err(SimError::BadPayloadBits(bits));
        }
        self.payload_bits = bits;
        Ok(self)
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The effective mixture over matrix rows (point mass for a pure Eve).
    pub fn eve_vector(&self) -> Vec<Scalar> {
        match &self.eve {
            EveChoice::Pure(s) => {
                let mut p = vec![Scalar::zero(); 3];
                p[s.index()] = Scalar::one();
                p
            }
            EveChoice::Mixed(p) => p.clone(),
        }
    }

    /// The effective mixture over matrix columns.
    pub fn legit_vector(&self) -> Result<Vec<Scalar>, SimError> {
        let cols = legit_strategies(self.spec.n())?;
        Ok(match &self.legit {
            LegitChoice::Pure(s) => {
                let mut q = vec![Scalar::zero(); cols.len()];
                let i = cols.iter().position(|c| c == s).expect("validated strategy");
                q[i] = Scalar::one();
                q
            }
            LegitChoice::Mixed(q) => q.clone(),
        })
    }

    pub fn legit_label(&self) -> String {
        match &self.legit {
            LegitChoice::Pure(s) => s.to_string(),
            LegitChoice::Mixed(q) => mixed_label(q),
        }
    }

    pub fn eve_label(&self) -> String {
        match &self.eve {
            EveChoice::Pure(s) => s.to_string(),
            EveChoice::Mixed(p) => mixed_label(p),
        }
    }
}

fn mixed_label(weights: &[Scalar]) -> String {
    let parts: Vec<String> = weights.iter().map(Scalar::to_string).collect();
    format!("mixed({})", parts.join("|"))
}

fn point_mass(weights: &[Scalar]) -> Option<usize> {
    let mut hit = None;
    for (i, w) in weights.iter().enumerate() {
        if w.is_one() {
            hit = Some(i);
        } else if !w.is_zero() {
            return None;
        }
    }
    hit
}

/// Capture counts from a (sub)range of trials. Addition is order-free, so
/// partitioned runs merge into exactly the sequential result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialTally {
    pub trials: u64,
    pub captures: u64,
}

pub fn merge_tallies<I: IntoIterator<Item = TrialTally>>(parts: I) -> TrialTally {
    parts.into_iter().fold(TrialTally::default(), |acc, t| TrialTally {
        trials: acc.trials + t.trials,
        captures: acc.captures + t.captures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub spec_hash: String,
    pub legit: String,
    pub eve: String,
    pub mode: SimMode,
    pub trials: u64,
    pub captures: u64,
    pub empirical_pe: f64,
    /// `sqrt(pe * (1 - pe) / trials)` with `pe` the empirical estimate.
    pub std_error: f64,
    pub analytic_pe: Scalar,
    /// `(empirical - analytic) / std_error`; omitted when not finite.
    pub z_score: Option<f64>,
    pub seed: u64,
}

impl SimulationReport {
    /// CSV header matching [`Self::to_csv_row`].
    pub fn csv_header() -> &'static str {
        "spec_hash,legit,eve,trials,empirical_pe,analytic_pe,z_score,seed"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.spec_hash,
            self.legit,
            self.eve,
            self.trials,
            self.empirical_pe,
            self.analytic_pe,
            self.z_score.map(|z| z.to_string()).unwrap_or_default(),
            self.seed
        )
    }
}

struct PairPlan {
    k_alice: u32,
    k_bob: u32,
    p_alice: f64,
    p_bob: f64,
}

struct TrialPlan {
    legit_fixed: Option<usize>,
    legit_cumulative: Vec<f64>,
    eve_fixed: Option<usize>,
    eve_cumulative: Vec<f64>,
    /// Indexed `[legit][eve]`.
    pairs: Vec<[PairPlan; 3]>,
    payload_bits: u32,
    mode: SimMode,
}

fn cumulative(weights: &[Scalar]) -> Vec<f64> {
    let mut acc = Scalar::zero();
    weights
        .iter()
        .map(|w| {
            acc = &acc + w;
            acc.to_f64()
        })
        .collect()
}

fn sample(cumulative: &[f64], u: f64) -> usize {
    cumulative
        .iter()
        .position(|&threshold| u < threshold)
        .unwrap_or(cumulative.len() - 1)
}

fn build_plan(cfg: &SimulationConfig) -> Result<TrialPlan, SimError> {
    let spec = &cfg.spec;
    let cols = legit_strategies(spec.n())?;
    let mut pairs = Vec::with_capacity(cols.len());
    for &legit in &cols {
        let (k_alice, k_bob) = packet_counts(legit, spec.n())?;
        let per_eve = EveStrategy::ALL.map(|eve| {
            let (p_alice, p_bob) = match eve {
                EveStrategy::NearAlice => (spec.triple_a().p_near(), spec.triple_b().p_far()),
                EveStrategy::Middle => (spec.triple_a().p_mid(), spec.triple_b().p_mid()),
                EveStrategy::NearBob => (spec.triple_a().p_far(), spec.triple_b().p_near()),
            };
            PairPlan {
                k_alice,
                k_bob,
                p_alice: p_alice.to_f64(),
                p_bob: p_bob.to_f64(),
            }
        });
        pairs.push(per_eve);
    }
    let (legit_fixed, legit_cumulative) = match &cfg.legit {
        LegitChoice::Pure(s) => (Some(cols.iter().position(|c| c == s).unwrap()), Vec::new()),
        LegitChoice::Mixed(q) => (None, cumulative(q)),
    };
    let (eve_fixed, eve_cumulative) = match &cfg.eve {
        EveChoice::Pure(s) => (Some(s.index()), Vec::new()),
        EveChoice::Mixed(p) => (None, cumulative(p)),
    };
    Ok(TrialPlan {
        legit_fixed,
        legit_cumulative,
        eve_fixed,
        eve_cumulative,
        pairs,
        payload_bits: cfg.payload_bits,
        mode: cfg.mode,
    })
}

fn simulate_trial(plan: &TrialPlan, seed: u64, trial: u64) -> bool {
    let mut rng = TrialRng::for_trial(seed, trial, 0);
    let legit = match plan.legit_fixed {
        Some(i) => i,
        None => sample(&plan.legit_cumulative, rng.next_f64()),
    };
    let eve = match plan.eve_fixed {
        Some(i) => i,
        None => sample(&plan.eve_cumulative, rng.next_f64()),
    };
    let pair = &plan.pairs[legit][eve];
    let n = (pair.k_alice + pair.k_bob) as usize;
    let mut received = Vec::with_capacity(n);
    for _ in 0..pair.k_alice {
        received.push(rng.next_f64() < pair.p_alice);
    }
    for _ in 0..pair.k_bob {
        received.push(rng.next_f64() < pair.p_bob);
    }
    match plan.mode {
        SimMode::Probability => received.iter().all(|&r| r),
        SimMode::Payload => {
            let words = plan.payload_bits.div_ceil(64) as usize;
            let top_mask = match plan.payload_bits % 64 {
                0 => u64::MAX,
                bits => (1u64 << bits) - 1,
            };
            let mut payload_rng = TrialRng::for_trial(seed, trial, 1);
            let mut secret = vec![0u64; words];
            let mut eavesdropped = vec![0u64; words];
            for &got in &received {
                for (w, slot) in secret.iter_mut().enumerate() {
                    let mut word = payload_rng.next_u64();
                    if w == words - 1 {
                        word &= top_mask;
                    }
                    *slot ^= word;
                    if got {
                        eavesdropped[w] ^= word;
                    }
                }
            }
            eavesdropped == secret
        }
    }
}

/// Run the half-open trial range `[start, end)`.
pub fn run_trials(cfg: &SimulationConfig, start: u64, end: u64) -> Result<TrialTally, SimError> {
    let plan = build_plan(cfg)?;
    let mut captures = 0u64;
    for trial in start..end {
        if simulate_trial(&plan, cfg.seed, trial) {
            captures += 1;
        }
    }
    Ok(TrialTally {
        trials: end - start,
        captures,
    })
}

/// Per-trial capture indicators, for mode-agreement checks and diagnostics.
pub fn trial_captures(cfg: &SimulationConfig, start: u64, end: u64) -> Result<Vec<bool>, SimError> {
    let plan = build_plan(cfg)?;
    Ok((start..end)
        .map(|trial| simulate_trial(&plan, cfg.seed, trial))
        .collect())
}

/// Expected capture probability of the configured profile: `p^T M q` over
/// the spec's utility matrix (the matrix entry itself for pure profiles).
pub fn analytic_capture_probability(cfg: &SimulationConfig) -> Result<Scalar, SimError> {
    let matrix = build_utility_matrix(&cfg.spec)?;
    let p = cfg.eve_vector();
    let q = cfg.legit_vector()?;
    Ok(matrix.expected_value(&p, &q))
}

pub fn finalize_report(
    cfg: &SimulationConfig,
    tally: TrialTally,
) -> Result<SimulationReport, SimError> {
    let analytic = analytic_capture_probability(cfg)?;
    let empirical = tally.captures as f64 / tally.trials as f64;
    let std_error = (empirical * (1.0 - empirical) / tally.trials as f64).sqrt();
    let z = (empirical - analytic.to_f64()) / std_error;
    Ok(SimulationReport {
        spec_hash: cfg.spec.hash(),
        legit: cfg.legit_label(),
        eve: cfg.eve_label(),
        mode: cfg.mode,
        trials: tally.trials,
        captures: tally.captures,
        empirical_pe: empirical,
        std_error,
        analytic_pe: analytic,
        z_score: z.is_finite().then_some(z),
        seed: cfg.seed,
    })
}

/// Simulate the configured profile over all trials.
pub fn simulate_exchange(cfg: &SimulationConfig) -> Result<SimulationReport, SimError> {
    let tally = run_trials(cfg, 0, cfg.trials)?;
    finalize_report(cfg, tally)
}

/// Empirical check of a mixed profile's expected value; the analytic
/// reference is the bilinear form over the utility matrix. Point-mass
/// vectors reduce exactly to [`simulate_exchange`] on the pure profile.
pub fn simulate_equilibrium_value(cfg: &SimulationConfig) -> Result<SimulationReport, SimError> {
    simulate_exchange(cfg)
}
