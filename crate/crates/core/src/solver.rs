//! Pure and mixed Nash equilibrium computation for the capture-probability
//! game.
//!
//! Three routes are implemented and cross-checked:
//!
//! * [`find_pure_equilibria`] scans every cell against the weak-inequality
//!   equilibrium definition.
//! * [`solve_proposition_verification`] mirrors the published two-step
//!   proposition/verification enumeration for the reduced 3x3 asymmetric
//!   game.
//! * [`solve_support_enumeration`] is the authoritative oracle: it
//!   enumerates support pairs, solves the indifference-plus-normalization
//!   systems exactly, and keeps solutions whose excluded strategies are
//!   weakly worse.
//!
//! [`game_value`] computes the zero-sum value independently (maximin over
//! basic points, checked against minimax), giving a second algebraic route
//! for the cross-validation tests.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelError;
use crate::game::{EveStrategy, GameSpec, LegitStrategy, UtilityMatrix};
use crate::linalg::{solve_linear_system, Solution};
use crate::scalar::{validate_prob_vector, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid strategy vector: {0}")]
    InvalidStrategyVector(String),
    #[error("matrix is {rows}x{cols}, expected {expected}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected: String,
    },
    #[error("no proposition verified; with exact arithmetic this cannot happen for mixed-only 3x3 games")]
    NoPropositionVerified,
    #[error("support enumeration exhausted without an equilibrium; this cannot happen for a valid matrix")]
    NoEquilibriumFound,
    #[error("numerically ambiguous decision: {0}")]
    NumericallyAmbiguous(#[from] ScalarError),
    #[error("internal value mismatch: maximin {maximin} != minimax {minimax}")]
    ValueMismatch { maximin: String, minimax: String },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// A pure profile or a pair of mixed strategy vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquilibriumKind {
    Pure {
        eve_row: EveStrategy,
        legit_col: LegitStrategy,
    },
    Mixed {
        /// Probabilities over Eve's rows (length 3).
        p: Vec<Scalar>,
        /// Probabilities over the legitimate users' columns (length N+1).
        q: Vec<Scalar>,
    },
}

/// An equilibrium with its expected capture probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    #[serde(flatten)]
    pub kind: EquilibriumKind,
    /// Expected `P_e` at the profile (the game value for any equilibrium).
    pub value: Scalar,
    /// Set when the profile sits on an equilibrium continuum (a strategy
    /// outside the support is exactly indifferent, or a supported strategy
    /// carries zero weight).
    pub degenerate: bool,
}

impl Equilibrium {
    /// The profile as a pair of probability vectors over (rows, cols).
    pub fn as_vectors(&self, matrix: &UtilityMatrix) -> (Vec<Scalar>, Vec<Scalar>) {
        match &self.kind {
            EquilibriumKind::Pure { eve_row, legit_col } => {
                let mut p = vec![Scalar::zero(); 3];
                p[eve_row.index()] = Scalar::one();
                let mut q = vec![Scalar::zero(); matrix.num_cols()];
                let c = matrix
                    .col_index(*legit_col)
                    .expect("pure equilibrium column must exist in the matrix");
                q[c] = Scalar::one();
                (p, q)
            }
            EquilibriumKind::Mixed { p, q } => (p.clone(), q.clone()),
        }
    }
}

/// Which analytic regime a spec falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameClass {
    /// Equal triples: the even split against the middle position is a pure
    /// equilibrium and symmetric mixed equilibria exist alongside it.
    Symmetric,
    /// Alice's channel dominates pointwise and `p_near(B) <= p_far(A)`:
    /// `(NearBob, BobHeavy(0))` is a pure equilibrium.
    AsymmetricPureAtBob,
    /// Alice's channel dominates pointwise and `p_near(B) > p_far(A)`: no
    /// pure equilibrium exists; the mixed one is found by enumeration.
    AsymmetricMixedOnly,
    /// Neither precondition matches (including Bob's channel dominating;
    /// callers may swap the sender labels and reclassify).
    Unclassified,
}

impl std::fmt::Display for GameClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            GameClass::Symmetric => "Symmetric",
            GameClass::AsymmetricPureAtBob => "AsymmetricPureAtBob",
            GameClass::AsymmetricMixedOnly => "AsymmetricMixedOnly",
            GameClass::Unclassified => "Unclassified",
        };
        f.write_str(name)
    }
}

/// Classify a spec by the two triples. Both triples must already be
/// validated.
pub fn classify(spec: &GameSpec) -> GameClass {
    let a = spec.triple_a();
    let b = spec.triple_b();
    if spec.is_symmetric() {
        return GameClass::Symmetric;
    }
    let dominates = a.p_near() > b.p_near() && a.p_mid() > b.p_mid() && a.p_far() > b.p_far();
    if !dominates {
        return GameClass::Unclassified;
    }
    if b.p_near() <= a.p_far() {
        GameClass::AsymmetricPureAtBob
    } else {
        GameClass::AsymmetricMixedOnly
    }
}

/// Every cell `(r, c)` where Eve cannot improve within the column and the
/// legitimate users cannot improve within the row, both by the weak
/// inequality of the equilibrium definition. Row-major order; empty when no
/// pure equilibrium exists.
pub fn find_pure_equilibria(matrix: &UtilityMatrix) -> Vec<Equilibrium> {
    let cols = matrix.num_cols();
    let mut out = Vec::new();
    for (r, eve) in EveStrategy::ALL.iter().enumerate() {
        for c in 0..cols {
            let value = matrix.entry(r, c);
            let eve_ok = (0..3).all(|other| matrix.entry(other, c) <= value);
            // Legitimate users minimize P_e, so the cell must be a row minimum.
            let legit_ok = (0..cols).all(|other| matrix.entry(r, other) >= value);
            if eve_ok && legit_ok {
                out.push(Equilibrium {
                    kind: EquilibriumKind::Pure {
                        eve_row: *eve,
                        legit_col: matrix.col_strategies()[c],
                    },
                    value: value.clone(),
                    degenerate: false,
                });
            }
        }
    }
    // Multiple pure equilibria only happen on ties, i.e. on a continuum.
    if out.len() > 1 {
        for eq in &mut out {
            eq.degenerate = true;
        }
    }
    out
}

/// Report produced by [`verify_equilibrium`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verified: bool,
    /// Expected `P_e` at the checked profile.
    pub value: Scalar,
    /// The most profitable unilateral deviation found, if any.
    pub best_deviation: Option<Deviation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub player: String,
    pub strategy: String,
    /// Gain in the deviator's own utility.
    pub improvement: Scalar,
}

/// Check that no unilateral pure deviation improves the deviator's utility
/// by more than `tol` (use zero in rational mode).
pub fn verify_equilibrium(
    matrix: &UtilityMatrix,
    equilibrium: &Equilibrium,
    tol: &Scalar,
) -> Result<VerificationReport, SolverError> {
    let (p, q) = equilibrium.as_vectors(matrix);
    validate_prob_vector(&p, 3).map_err(SolverError::InvalidStrategyVector)?;
    validate_prob_vector(&q, matrix.num_cols()).map_err(SolverError::InvalidStrategyVector)?;

    let value = matrix.expected_value(&p, &q);
    let mut best: Option<Deviation> = None;

    // Eve deviates to a pure row: improvement is (M q)_r - value.
    for (r, eve) in EveStrategy::ALL.iter().enumerate() {
        let row_value = &matrix.row_expectations(&q)[r];
        let improvement = row_value - &value;
        if better(&best, &improvement) {
            best = Some(Deviation {
                player: "eve".to_string(),
                strategy: eve.to_string(),
                improvement,
            });
        }
    }
    // The legitimate users deviate to a pure column: their utility is -P_e,
    // so the improvement is value - (p^T M)_c.
    let col_values = matrix.col_expectations(&p);
    for (c, strategy) in matrix.col_strategies().iter().enumerate() {
        let improvement = &value - &col_values[c];
        if better(&best, &improvement) {
            best = Some(Deviation {
                player: "legit".to_string(),
                strategy: strategy.to_string(),
                improvement,
            });
        }
    }

    let verified = match &best {
        Some(dev) => dev.improvement <= *tol,
        None => true,
    };
    Ok(VerificationReport {
        verified,
        value,
        best_deviation: best.filter(|d| !d.improvement.is_negative() && !d.improvement.is_zero()),
    })
}

fn better(best: &Option<Deviation>, improvement: &Scalar) -> bool {
    match best {
        Some(dev) => improvement > &dev.improvement,
        None => true,
    }
}

// ---------------------------------------------------------------------------
// Support enumeration (the authoritative oracle)
// ---------------------------------------------------------------------------

fn subsets_of_size(universe: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn recurse(start: usize, universe: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..universe {
            current.push(i);
            recurse(i + 1, universe, size, current, out);
            current.pop();
        }
    }
    recurse(0, universe, size, &mut current, &mut out);
    out
}

/// Solve the indifference + normalization system for one side.
///
/// Unknowns are the support weights plus the common payoff `v`; equations
/// force every payoff row in `payoff_support` equal to `v` plus the weights
/// summing to one. Returns `(weights over the full axis, v)`.
fn solve_indifference(
    payoffs: &dyn Fn(usize, usize) -> Scalar,
    payoff_support: &[usize],
    weight_support: &[usize],
    weight_len: usize,
) -> Option<(Vec<Scalar>, Scalar)> {
    let unknowns = weight_support.len() + 1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &row in payoff_support {
        let mut eq = Vec::with_capacity(unknowns);
        for &w in weight_support {
            eq.push(payoffs(row, w));
        }
        eq.push(Scalar::from_int(-1));
        a.push(eq);
        b.push(Scalar::zero());
    }
    let mut norm = vec![Scalar::one(); weight_support.len()];
    norm.push(Scalar::zero());
    a.push(norm);
    b.push(Scalar::one());

    match solve_linear_system(&a, &b) {
        Solution::Unique(solution) => {
            let mut weights = vec![Scalar::zero(); weight_len];
            for (slot, &w) in weight_support.iter().enumerate() {
                if solution[slot].is_negative() {
                    return None;
                }
                weights[w] = solution[slot].clone();
            }
            let v = solution[weight_support.len()].clone();
            Some((weights, v))
        }
        _ => None,
    }
}

/// First equilibrium in deterministic support order.
///
/// Pairs `(R, C)` of row/column supports are visited ordered by
/// `(max(|R|, |C|), |R| + |C|, R, C)` with lexicographic tie-breaks, so pure
/// cells come first and the square systems that must contain a solution are
/// reached early. Pairs whose indifference system is not uniquely solvable
/// are skipped: any equilibrium they contain is recovered at a smaller
/// support.
pub fn solve_support_enumeration(matrix: &UtilityMatrix) -> Result<Equilibrium, SolverError> {
    let cols = matrix.num_cols();
    let eve_payoff = |r: usize, c: usize| matrix.entry(r, c).clone();
    // The legitimate users' payoff is -P_e; indifference systems are
    // unchanged by the sign, so the raw entries are used transposed.
    let legit_payoff = |c: usize, r: usize| matrix.entry(r, c).clone();

    let mut sizes: Vec<(usize, usize)> = (1..=3usize)
        .flat_map(|r| (1..=cols).map(move |c| (r, c)))
        .collect();
    sizes.sort_by_key(|&(r, c)| (r.max(c), r + c, r));

    for (rows_len, cols_len) in sizes {
        // |R|+1 indifference equations cannot pin |C|+1 unknowns when
        // |C| > |R|: the system is underdetermined and any equilibrium in it
        // is recovered at a smaller column support.
        if cols_len > rows_len {
            continue;
        }
        for row_support in subsets_of_size(3, rows_len) {
            for col_support in subsets_of_size(cols, cols_len) {
                if let Some(eq) =
                    try_support_pair(matrix, &row_support, &col_support, &eve_payoff, &legit_payoff)
                {
                    return Ok(eq);
                }
            }
        }
    }
    Err(SolverError::NoEquilibriumFound)
}

fn try_support_pair(
    matrix: &UtilityMatrix,
    row_support: &[usize],
    col_support: &[usize],
    eve_payoff: &dyn Fn(usize, usize) -> Scalar,
    legit_payoff: &dyn Fn(usize, usize) -> Scalar,
) -> Option<Equilibrium> {
    let cols = matrix.num_cols();
    // Eve's supported rows must be indifferent under q ...
    let (q, v) = solve_indifference(eve_payoff, row_support, col_support, cols)?;
    // ... and the legitimate users' supported columns indifferent under p.
    let (p, _) = solve_indifference(legit_payoff, col_support, row_support, 3)?;

    let mut degenerate = row_support.iter().any(|&r| p[r].is_zero())
        || col_support.iter().any(|&c| q[c].is_zero());

    // Excluded rows may not beat v for Eve; excluded columns may not fall
    // below v for the legitimate users (who minimize P_e).
    for (r, row_value) in matrix.row_expectations(&q).iter().enumerate() {
        if row_support.contains(&r) {
            continue;
        }
        if row_value > &v {
            return None;
        }
        if row_value == &v {
            degenerate = true;
        }
    }
    for (c, col_value) in matrix.col_expectations(&p).iter().enumerate() {
        if col_support.contains(&c) {
            continue;
        }
        if col_value < &v {
            return None;
        }
        if col_value == &v {
            degenerate = true;
        }
    }

    let kind = if row_support.len() == 1 && col_support.len() == 1 {
        EquilibriumKind::Pure {
            eve_row: EveStrategy::ALL[row_support[0]],
            legit_col: matrix.col_strategies()[col_support[0]],
        }
    } else {
        EquilibriumKind::Mixed { p, q }
    };
    Some(Equilibrium {
        kind,
        value: v,
        degenerate,
    })
}

// ---------------------------------------------------------------------------
// Proposition/verification enumeration for the reduced 3x3 game
// ---------------------------------------------------------------------------

/// Eve-side support proposed during the enumeration, in the fixed order:
/// full support, the three 2-supports, then singletons with the middle
/// position first.
const PROPOSITION_ORDER: [&[usize]; 7] = [
    &[0, 1, 2],
    &[0, 1],
    &[0, 2],
    &[1, 2],
    &[1],
    &[0],
    &[2],
];

/// Outcome of one proposition attempt, for tracing and tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionTrace {
    /// Row indices of the proposed Eve support.
    pub support: Vec<usize>,
    pub outcome: PropositionOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PropositionOutcome {
    /// The q-system has no feasible solution (negative component or no
    /// simplex point satisfies the strict constraints).
    Infeasible { detail: String },
    /// Feasible q candidates existed but none passed the mirrored
    /// verification on the legitimate users' side.
    VerificationFailed { candidates: usize },
    Verified,
}

/// Mirror of the published two-step enumeration for 3x3 games with no pure
/// equilibrium: propose an Eve support, solve the indifference constraints
/// for `q`, then verify by solving the legitimate users' side for `p` and
/// requiring the solution to match the proposition. All strictness decisions
/// are exact in rational mode.
pub fn solve_proposition_verification(matrix: &UtilityMatrix) -> Result<Equilibrium, SolverError> {
    solve_proposition_verification_traced(matrix).map(|(eq, _)| eq)
}

/// [`solve_proposition_verification`] plus the per-proposition trace.
pub fn solve_proposition_verification_traced(
    matrix: &UtilityMatrix,
) -> Result<(Equilibrium, Vec<PropositionTrace>), SolverError> {
    if matrix.num_cols() != 3 {
        return Err(SolverError::DimensionMismatch {
            rows: 3,
            cols: matrix.num_cols(),
            expected: "a 3x3 matrix restricted to {AliceHeavy(0), Split, BobHeavy(0)}".to_string(),
        });
    }
    let mut trace = Vec::new();
    for support in PROPOSITION_ORDER {
        let (candidates, detail) = q_candidates(matrix, support)?;
        if candidates.is_empty() {
            trace.push(PropositionTrace {
                support: support.to_vec(),
                outcome: PropositionOutcome::Infeasible { detail },
            });
            continue;
        }
        let count = candidates.len();
        for q in candidates {
            if let Some(equilibrium) = verify_proposition(matrix, support, &q)? {
                trace.push(PropositionTrace {
                    support: support.to_vec(),
                    outcome: PropositionOutcome::Verified,
                });
                return Ok((equilibrium, trace));
            }
        }
        trace.push(PropositionTrace {
            support: support.to_vec(),
            outcome: PropositionOutcome::VerificationFailed { candidates: count },
        });
    }
    Err(SolverError::NoPropositionVerified)
}

/// Candidate `q` vectors for a proposed Eve support: solutions that make the
/// supported rows equal and strictly better than excluded rows.
fn q_candidates(
    matrix: &UtilityMatrix,
    support: &[usize],
) -> Result<(Vec<Vec<Scalar>>, String), SolverError> {
    let payoff = |r: usize, c: usize| matrix.entry(r, c).clone();
    feasible_candidates(&payoff, support)
}

/// Algebraic solutions making all payoff rows in `support` equal, before any
/// simplex filtering.
///
/// Full support pins a unique point; a 2-support pins a line, whose
/// intersections with the three simplex faces are returned (ordered by the
/// index of the zeroed coordinate); a singleton imposes no equality and
/// yields the three vertices.
fn equal_payoff_points(
    payoff: &dyn Fn(usize, usize) -> Scalar,
    support: &[usize],
) -> Vec<Vec<Scalar>> {
    let vertices = || {
        (0..3)
            .map(|k| {
                let mut v = vec![Scalar::zero(); 3];
                v[k] = Scalar::one();
                v
            })
            .collect::<Vec<_>>()
    };
    match support.len() {
        3 => {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for pair in support.windows(2) {
                let row: Vec<Scalar> = (0..3)
                    .map(|c| &payoff(pair[0], c) - &payoff(pair[1], c))
                    .collect();
                a.push(row);
                b.push(Scalar::zero());
            }
            a.push(vec![Scalar::one(), Scalar::one(), Scalar::one()]);
            b.push(Scalar::one());
            match solve_linear_system(&a, &b) {
                Solution::Unique(x) => vec![x],
                _ => Vec::new(),
            }
        }
        2 => {
            let diff: Vec<Scalar> = (0..3)
                .map(|c| &payoff(support[0], c) - &payoff(support[1], c))
                .collect();
            if diff.iter().all(Scalar::is_zero) {
                // Coinciding rows: the whole simplex qualifies; the vertices
                // are the deterministic representatives.
                return vertices();
            }
            let mut points = Vec::new();
            for zeroed in 0..3 {
                let mut a = vec![diff.clone(), vec![Scalar::one(), Scalar::one(), Scalar::one()]];
                let mut b = vec![Scalar::zero(), Scalar::one()];
                let mut face = vec![Scalar::zero(); 3];
                face[zeroed] = Scalar::one();
                a.push(face);
                b.push(Scalar::zero());
                if let Solution::Unique(x) = solve_linear_system(&a, &b) {
                    if !points.contains(&x) {
                        points.push(x);
                    }
                }
            }
            points
        }
        1 => vertices(),
        _ => Vec::new(),
    }
}

/// Keep only simplex members where the supported rows strictly beat every
/// excluded row; the returned string explains the last rejection.
fn feasible_candidates(
    payoff: &dyn Fn(usize, usize) -> Scalar,
    support: &[usize],
) -> Result<(Vec<Vec<Scalar>>, String), SolverError> {
    keep_strictly_best(payoff, support, equal_payoff_points(payoff, support))
}

fn keep_strictly_best(
    payoff: &dyn Fn(usize, usize) -> Scalar,
    support: &[usize],
    points: Vec<Vec<Scalar>>,
) -> Result<(Vec<Vec<Scalar>>, String), SolverError> {
    let mut kept = Vec::new();
    let mut detail = "no point satisfies the equal-payoff constraints".to_string();
    'point: for x in points {
        if let Some(bad) = x.iter().find(|w| w.is_negative()) {
            detail = format!("solution has a negative component ({bad})");
            continue;
        }
        let values: Vec<Scalar> = (0..3)
            .map(|row| (0..3).fold(Scalar::zero(), |acc, c| &acc + &(&payoff(row, c) * &x[c])))
            .collect();
        let supported = values[support[0]].clone();
        for (row, value) in values.iter().enumerate() {
            if support.contains(&row) {
                continue;
            }
            if !supported.decide_gt(value)? {
                detail = format!(
                    "excluded payoff row {row} is not strictly worse at ({}, {}, {})",
                    x[0], x[1], x[2]
                );
                continue 'point;
            }
        }
        kept.push(x);
    }
    Ok((kept, detail))
}

/// Verification step: given a feasible `q`, solve the legitimate users' side
/// for `p` and accept when the solution's support matches the proposition.
fn verify_proposition(
    matrix: &UtilityMatrix,
    proposed: &[usize],
    q: &[Scalar],
) -> Result<Option<Equilibrium>, SolverError> {
    // The legitimate users' payoff is -P_e; equalities are unaffected by the
    // sign and the strict comparisons are flipped accordingly inside
    // `filter_strict` by negating.
    let legit_payoff = |c: usize, r: usize| -matrix.entry(r, c);
    let q_support: Vec<usize> = (0..3).filter(|&c| !q[c].is_zero()).collect();

    let candidates = match q_support.len() {
        3 | 2 => feasible_candidates(&legit_payoff, &q_support)?.0,
        1 => {
            // Pure legitimate strategy: any p concentrated on the proposed
            // support that keeps the column a strict best response works.
            // Deterministic representatives: uniform over the support, then
            // each supported vertex.
            let mut reps = Vec::new();
            let share = Scalar::from_ratio(1, proposed.len() as i64);
            let mut uniform = vec![Scalar::zero(); 3];
            for &r in proposed {
                uniform[r] = share.clone();
            }
            reps.push(uniform);
            for &r in proposed {
                let mut v = vec![Scalar::zero(); 3];
                v[r] = Scalar::one();
                reps.push(v);
            }
            keep_strictly_best(&legit_payoff, &q_support, reps)?.0
        }
        _ => Vec::new(),
    };

    for p in candidates {
        let p_support: Vec<usize> = (0..3).filter(|&r| !p[r].is_zero()).collect();
        if p_support != proposed {
            continue;
        }
        let equilibrium = Equilibrium {
            kind: EquilibriumKind::Mixed {
                p: p.clone(),
                q: q.to_vec(),
            },
            value: matrix.expected_value(&p, q),
            degenerate: false,
        };
        // Every returned equilibrium must pass the definition check.
        let tol = if p.iter().chain(q).all(Scalar::is_exact) {
            Scalar::zero()
        } else {
            Scalar::from_f64(crate::scalar::FLOAT_MARGIN)
        };
        if verify_equilibrium(matrix, &equilibrium, &tol)?.verified {
            return Ok(Some(equilibrium));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Game value by direct maximin / minimax optimization
// ---------------------------------------------------------------------------

/// The zero-sum value: Eve's maximin over mixed row strategies, computed by
/// enumerating basic points of the maximin program and cross-checked against
/// the legitimate users' minimax in rational mode.
pub fn game_value(matrix: &UtilityMatrix) -> Result<Scalar, SolverError> {
    let maximin = eve_maximin(matrix).ok_or(SolverError::NoEquilibriumFound)?;
    let minimax = legit_minimax(matrix).ok_or(SolverError::NoEquilibriumFound)?;
    let exact = maximin.is_exact() && minimax.is_exact();
    if exact && maximin != minimax {
        return Err(SolverError::ValueMismatch {
            maximin: maximin.to_string(),
            minimax: minimax.to_string(),
        });
    }
    Ok(maximin)
}

/// max over p of min over columns of `(p^T M)_c`, by basic-point enumeration:
/// for every row support S and every |S|-subset of tight columns, solve the
/// square system and score the feasible points.
fn eve_maximin(matrix: &UtilityMatrix) -> Option<Scalar> {
    let cols = matrix.num_cols();
    let mut best: Option<Scalar> = None;
    for size in 1..=3usize {
        for row_support in subsets_of_size(3, size) {
            for tight_cols in subsets_of_size(cols, size) {
                let payoff = |c: usize, r: usize| matrix.entry(r, c).clone();
                let Some((p, _)) = solve_indifference(&payoff, &tight_cols, &row_support, 3) else {
                    continue;
                };
                let col_values = matrix.col_expectations(&p);
                let mut score = col_values[0].clone();
                for v in &col_values[1..] {
                    if v < &score {
                        score = v.clone();
                    }
                }
                if best.as_ref().is_none_or(|b| &score > b) {
                    best = Some(score);
                }
            }
        }
    }
    best
}

/// min over q of max over rows of `(M q)_r` (same enumeration, mirrored).
fn legit_minimax(matrix: &UtilityMatrix) -> Option<Scalar> {
    let cols = matrix.num_cols();
    let mut best: Option<Scalar> = None;
    for size in 1..=3.min(cols) {
        for col_support in subsets_of_size(cols, size) {
            for tight_rows in subsets_of_size(3, size) {
                let payoff = |r: usize, c: usize| matrix.entry(r, c).clone();
                let Some((q, _)) = solve_indifference(&payoff, &tight_rows, &col_support, cols)
                else {
                    continue;
                };
                let row_values = matrix.row_expectations(&q);
                let mut score = row_values[0].clone();
                for v in &row_values[1..] {
                    if v > &score {
                        score = v.clone();
                    }
                }
                if best.as_ref().is_none_or(|b| &score < b) {
                    best = Some(score);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelTriple;
    use crate::game::build_utility_matrix;

    fn s(text: &str) -> Scalar {
        Scalar::from_decimal_str(text).unwrap()
    }

    fn example_spec() -> GameSpec {
        GameSpec::new(
            2,
            ChannelTriple::from_strs("0.99", "0.94", "0.80").unwrap(),
            ChannelTriple::from_strs("0.90", "0.84", "0.70").unwrap(),
        )
        .unwrap()
    }

    fn symmetric_spec(n: u32) -> GameSpec {
        let t = ChannelTriple::from_strs("0.9", "0.8", "0.6").unwrap();
        GameSpec::new(n, t.clone(), t).unwrap()
    }

    fn strongly_asymmetric_spec() -> GameSpec {
        GameSpec::new(
            2,
            ChannelTriple::from_strs("0.99", "0.94", "0.80").unwrap(),
            ChannelTriple::from_strs("0.75", "0.65", "0.50").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&example_spec()), GameClass::AsymmetricMixedOnly);
        assert_eq!(classify(&strongly_asymmetric_spec()), GameClass::AsymmetricPureAtBob);
        assert_eq!(classify(&symmetric_spec(2)), GameClass::Symmetric);
        // Bob dominating is left unclassified for the caller to relabel.
        let swapped = GameSpec::new(
            2,
            ChannelTriple::from_strs("0.75", "0.65", "0.50").unwrap(),
            ChannelTriple::from_strs("0.99", "0.94", "0.80").unwrap(),
        )
        .unwrap();
        assert_eq!(classify(&swapped), GameClass::Unclassified);
    }

    #[test]
    fn symmetric_pure_equilibrium_is_split_middle() {
        let matrix = build_utility_matrix(&symmetric_spec(2)).unwrap();
        let pure = find_pure_equilibria(&matrix);
        assert_eq!(pure.len(), 1);
        assert_eq!(
            pure[0].kind,
            EquilibriumKind::Pure {
                eve_row: EveStrategy::Middle,
                legit_col: LegitStrategy::Split
            }
        );
        assert_eq!(pure[0].value, s("0.64"));
    }

    #[test]
    fn mixed_only_example_has_no_pure_equilibrium() {
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        assert!(find_pure_equilibria(&matrix).is_empty());
    }

    #[test]
    fn strongly_asymmetric_pure_equilibrium_at_bob() {
        let matrix = build_utility_matrix(&strongly_asymmetric_spec()).unwrap();
        let pure = find_pure_equilibria(&matrix);
        assert!(pure.iter().any(|eq| eq.kind
            == EquilibriumKind::Pure {
                eve_row: EveStrategy::NearBob,
                legit_col: LegitStrategy::BobHeavy(0)
            }));
    }

    #[test]
    fn proposition_verification_solves_the_numerical_example() {
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        let (eq, trace) = solve_proposition_verification_traced(&matrix).unwrap();
        let EquilibriumKind::Mixed { p, q } = &eq.kind else {
            panic!("expected a mixed equilibrium");
        };
        assert_eq!(q, &vec![s("0"), s("0.6"), s("0.4")]);
        assert_eq!(p, &vec![s("0"), s("15/29"), s("14/29")]);
        assert_eq!(eq.value, s("0.756"));

        // The full-support proposition is infeasible: the q solution has a
        // negative component.
        assert_eq!(trace[0].support, vec![0, 1, 2]);
        assert!(matches!(trace[0].outcome, PropositionOutcome::Infeasible { .. }));
        assert!(matches!(
            trace.last().unwrap().outcome,
            PropositionOutcome::Verified
        ));
    }

    #[test]
    fn support_enumeration_agrees_on_the_numerical_example() {
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        let eq = solve_support_enumeration(&matrix).unwrap();
        assert_eq!(eq.value, s("0.756"));
        let EquilibriumKind::Mixed { p, q } = &eq.kind else {
            panic!("expected a mixed equilibrium");
        };
        assert_eq!(q, &vec![s("0"), s("0.6"), s("0.4")]);
        assert_eq!(p, &vec![s("0"), s("15/29"), s("14/29")]);
        assert!(!eq.degenerate);
        assert!(verify_equilibrium(&matrix, &eq, &Scalar::zero())
            .unwrap()
            .verified);
    }

    #[test]
    fn support_enumeration_returns_pure_equilibria_first() {
        let matrix = build_utility_matrix(&strongly_asymmetric_spec()).unwrap();
        let eq = solve_support_enumeration(&matrix).unwrap();
        assert!(matches!(eq.kind, EquilibriumKind::Pure { .. }));
        assert!(verify_equilibrium(&matrix, &eq, &Scalar::zero())
            .unwrap()
            .verified);
    }

    #[test]
    fn symmetric_value_is_mid_probability_power() {
        let matrix = build_utility_matrix(&symmetric_spec(2)).unwrap();
        let eq = solve_support_enumeration(&matrix).unwrap();
        assert_eq!(eq.value, s("0.64"));
        assert_eq!(game_value(&matrix).unwrap(), s("0.64"));
    }

    #[test]
    fn game_value_of_the_numerical_example() {
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        assert_eq!(game_value(&matrix).unwrap(), s("0.756"));
    }

    #[test]
    fn constant_matrix_value_is_the_constant() {
        let v = s("0.37");
        let cols = vec![
            LegitStrategy::AliceHeavy(0),
            LegitStrategy::Split,
            LegitStrategy::BobHeavy(0),
        ];
        let matrix = UtilityMatrix::from_rows(
            2,
            cols,
            [
                vec![v.clone(), v.clone(), v.clone()],
                vec![v.clone(), v.clone(), v.clone()],
                vec![v.clone(), v.clone(), v.clone()],
            ],
        );
        assert_eq!(game_value(&matrix).unwrap(), v);
        let eq = solve_support_enumeration(&matrix).unwrap();
        assert_eq!(eq.value, v);
        assert!(eq.degenerate || matches!(eq.kind, EquilibriumKind::Pure { .. }));
    }

    #[test]
    fn published_p_candidate_fails_verification() {
        // The published mixed vector for Eve does not survive the recomputed
        // matrix: the legitimate users strictly prefer pure BobHeavy(0).
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        let eq = Equilibrium {
            kind: EquilibriumKind::Mixed {
                p: vec![s("0"), s("0.5814"), s("0.4186")],
                q: vec![s("0"), s("0.6"), s("0.4")],
            },
            value: s("0.756"),
            degenerate: false,
        };
        let report = verify_equilibrium(&matrix, &eq, &Scalar::zero()).unwrap();
        assert!(!report.verified);
        let deviation = report.best_deviation.unwrap();
        assert_eq!(deviation.player, "legit");
        assert_eq!(deviation.strategy, "BobHeavy(0)");
        assert_eq!(deviation.improvement, s("0.00669816"));
    }

    #[test]
    fn recomputed_p_candidate_verifies() {
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        let eq = Equilibrium {
            kind: EquilibriumKind::Mixed {
                p: vec![s("0"), s("15/29"), s("14/29")],
                q: vec![s("0"), s("0.6"), s("0.4")],
            },
            value: s("0.756"),
            degenerate: false,
        };
        assert!(verify_equilibrium(&matrix, &eq, &Scalar::zero())
            .unwrap()
            .verified);
    }

    #[test]
    fn split_middle_profile_verifies_in_symmetric_game() {
        let matrix = build_utility_matrix(&symmetric_spec(2)).unwrap();
        let eq = Equilibrium {
            kind: EquilibriumKind::Pure {
                eve_row: EveStrategy::Middle,
                legit_col: LegitStrategy::Split,
            },
            value: s("0.64"),
            degenerate: false,
        };
        assert!(verify_equilibrium(&matrix, &eq, &Scalar::zero())
            .unwrap()
            .verified);
    }

    #[test]
    fn malformed_vectors_are_rejected() {
        let matrix = build_utility_matrix(&example_spec()).unwrap();
        let eq = Equilibrium {
            kind: EquilibriumKind::Mixed {
                p: vec![s("0.5"), s("0.5"), s("0.5")],
                q: vec![s("0"), s("0.6"), s("0.4")],
            },
            value: s("0.756"),
            degenerate: false,
        };
        assert!(matches!(
            verify_equilibrium(&matrix, &eq, &Scalar::zero()),
            Err(SolverError::InvalidStrategyVector(_))
        ));
    }

    #[test]
    fn proposition_solver_rejects_wide_matrices() {
        let matrix = build_utility_matrix(&symmetric_spec(4)).unwrap();
        assert!(matches!(
            solve_proposition_verification(&matrix),
            Err(SolverError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn float_mode_solves_the_numerical_example_approximately() {
        let matrix = build_utility_matrix(&example_spec().to_float_mode()).unwrap();
        let eq = solve_support_enumeration(&matrix).unwrap();
        assert!((eq.value.to_f64() - 0.756).abs() < 1e-9);
    }
}
