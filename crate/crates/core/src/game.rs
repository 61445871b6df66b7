//! Strategy spaces and the zero-sum utility matrix of eavesdropper capture
//! probabilities.
//!
//! The matrix stores Eve's utility `P_e` only; the legitimate users' utility
//! is its negation and is derived where needed rather than stored.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelError, ChannelTriple};
use crate::scalar::Scalar;

/// Packet counts beyond this need an explicit cap override; capture
/// probabilities shrink geometrically and the game is numerically trivial
/// long before the rational bit-growth starts to hurt.
pub const DEFAULT_MAX_PACKETS: u32 = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameError {
    #[error("packet count N = {0} must be an even integer >= 2")]
    InvalidPacketCount(u32),
    #[error("packet count N = {n} exceeds the cap of {cap}")]
    PacketCountCapped { n: u32, cap: u32 },
    #[error("strategy parameter n = {n} must be < N/2 = {half}")]
    StrategyOutOfRange { n: u32, half: u32 },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// How the legitimate users split the `N` packets.
///
/// `AliceHeavy(n)` has Alice send `N - n` and Bob send `n` packets,
/// `n < N/2`; `BobHeavy(n)` is the mirror image; `Split` sends `N/2` each.
/// Serializes as its display label (`"AliceHeavy(0)"`, `"Split"`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegitStrategy {
    AliceHeavy(u32),
    Split,
    BobHeavy(u32),
}

impl std::fmt::Display for LegitStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LegitStrategy::AliceHeavy(n) => write!(f, "AliceHeavy({n})"),
            LegitStrategy::Split => f.write_str("Split"),
            LegitStrategy::BobHeavy(n) => write!(f, "BobHeavy({n})"),
        }
    }
}

impl std::str::FromStr for LegitStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "split" {
            return Ok(LegitStrategy::Split);
        }
        let parse_n = |text: &str| {
            text.trim_end_matches(')')
                .parse::<u32>()
                .map_err(|_| format!("cannot parse strategy parameter in {s:?}"))
        };
        for (prefixes, build) in [
            (
                ["aliceheavy(", "alice-heavy:", "alice:"].as_slice(),
                LegitStrategy::AliceHeavy as fn(u32) -> LegitStrategy,
            ),
            (
                ["bobheavy(", "bob-heavy:", "bob:"].as_slice(),
                LegitStrategy::BobHeavy as fn(u32) -> LegitStrategy,
            ),
        ] {
            for prefix in prefixes {
                if let Some(rest) = lower.strip_prefix(prefix) {
                    return Ok(build(parse_n(rest)?));
                }
            }
        }
        Err(format!(
            "unknown legitimate-user strategy {s:?} (expected Split, AliceHeavy(n), or BobHeavy(n))"
        ))
    }
}

impl Serialize for LegitStrategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LegitStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Where the eavesdropper stands: distances to (Alice, Bob) are
/// `(epsilon, D - epsilon)`, `(D/2, D/2)`, or `(D - epsilon, epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EveStrategy {
    NearAlice,
    Middle,
    NearBob,
}

impl Serialize for EveStrategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EveStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl EveStrategy {
    pub const ALL: [EveStrategy; 3] = [EveStrategy::NearAlice, EveStrategy::Middle, EveStrategy::NearBob];

    pub fn index(self) -> usize {
        match self {
            EveStrategy::NearAlice => 0,
            EveStrategy::Middle => 1,
            EveStrategy::NearBob => 2,
        }
    }
}

impl std::fmt::Display for EveStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EveStrategy::NearAlice => f.write_str("NearAlice"),
            EveStrategy::Middle => f.write_str("Middle"),
            EveStrategy::NearBob => f.write_str("NearBob"),
        }
    }
}

impl std::str::FromStr for EveStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "nearalice" => Ok(EveStrategy::NearAlice),
            "middle" | "mid" => Ok(EveStrategy::Middle),
            "nearbob" => Ok(EveStrategy::NearBob),
            _ => Err(format!(
                "unknown eavesdropper strategy {s:?} (expected NearAlice, Middle, or NearBob)"
            )),
        }
    }
}

/// Packet count plus both senders' channel triples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameSpec {
    n: u32,
    triple_a: ChannelTriple,
    triple_b: ChannelTriple,
}

impl GameSpec {
    /// `n` must be even, at least 2, and within [`DEFAULT_MAX_PACKETS`].
    /// Triples must already be validated (construct via [`ChannelTriple::new`]).
    pub fn new(n: u32, triple_a: ChannelTriple, triple_b: ChannelTriple) -> Result<Self, GameError> {
        Self::with_cap(n, triple_a, triple_b, DEFAULT_MAX_PACKETS)
    }

    pub fn with_cap(
        n: u32,
        triple_a: ChannelTriple,
        triple_b: ChannelTriple,
        cap: u32,
    ) -> Result<Self, GameError> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(GameError::InvalidPacketCount(n));
        }
        if n > cap {
            return Err(GameError::PacketCountCapped { n, cap });
        }
        Ok(GameSpec { n, triple_a, triple_b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn triple_a(&self) -> &ChannelTriple {
        &self.triple_a
    }

    pub fn triple_b(&self) -> &ChannelTriple {
        &self.triple_b
    }

    /// Equal triples make the game symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.triple_a == self.triple_b
    }

    pub fn to_float_mode(&self) -> GameSpec {
        GameSpec {
            n: self.n,
            triple_a: self.triple_a.to_float_mode(),
            triple_b: self.triple_b.to_float_mode(),
        }
    }

    /// FNV-1a hash of the canonical spec string, for sweep/report rows.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "n={};A={},{},{};B={},{},{}",
            self.n,
            self.triple_a.p_near(),
            self.triple_a.p_mid(),
            self.triple_a.p_far(),
            self.triple_b.p_near(),
            self.triple_b.p_mid(),
            self.triple_b.p_far(),
        );
        let mut hash = 0xcbf29ce484222325u64;
        for byte in canonical.bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x100000001b3);
        }
        format!("{hash:016x}")
    }
}

/// The deterministic strategy order: `AliceHeavy(0..N/2)`, `Split`,
/// `BobHeavy(N/2-1..=0)`. Packets sent by Alice decrease monotonically left
/// to right; length is `N + 1`.
pub fn legit_strategies(n: u32) -> Result<Vec<LegitStrategy>, GameError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(GameError::InvalidPacketCount(n));
    }
    let half = n / 2;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.extend((0..half).map(LegitStrategy::AliceHeavy));
    out.push(LegitStrategy::Split);
    out.extend((0..half).rev().map(LegitStrategy::BobHeavy));
    Ok(out)
}

/// `(packets sent by Alice, packets sent by Bob)`; the two always sum to `N`.
pub fn packet_counts(strategy: LegitStrategy, n: u32) -> Result<(u32, u32), GameError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(GameError::InvalidPacketCount(n));
    }
    let half = n / 2;
    match strategy {
        LegitStrategy::AliceHeavy(k) if k < half => Ok((n - k, k)),
        LegitStrategy::BobHeavy(k) if k < half => Ok((k, n - k)),
        LegitStrategy::Split => Ok((half, half)),
        LegitStrategy::AliceHeavy(k) | LegitStrategy::BobHeavy(k) => {
            Err(GameError::StrategyOutOfRange { n: k, half })
        }
    }
}

/// Per-packet success probabilities `(from Alice, from Bob)` for Eve's
/// position.
fn per_packet_probabilities(spec: &GameSpec, eve: EveStrategy) -> (Scalar, Scalar) {
    match eve {
        EveStrategy::NearAlice => (spec.triple_a.p_near().clone(), spec.triple_b.p_far().clone()),
        EveStrategy::Middle => (spec.triple_a.p_mid().clone(), spec.triple_b.p_mid().clone()),
        EveStrategy::NearBob => (spec.triple_a.p_far().clone(), spec.triple_b.p_near().clone()),
    }
}

/// Probability that Eve receives every packet of the profile:
/// `P_A(d_A)^k_Alice * P_B(d_B)^k_Bob`.
pub fn eve_capture_probability(
    spec: &GameSpec,
    legit: LegitStrategy,
    eve: EveStrategy,
) -> Result<Scalar, GameError> {
    let (k_alice, k_bob) = packet_counts(legit, spec.n)?;
    let (p_alice, p_bob) = per_packet_probabilities(spec, eve);
    Ok(&p_alice.pow(k_alice) * &p_bob.pow(k_bob))
}

/// Build the full 3 x (N+1) capture-probability matrix for a spec.
pub fn build_utility_matrix(spec: &GameSpec) -> Result<UtilityMatrix, GameError> {
    UtilityMatrix::build(spec)
}

/// The 3 x (N+1) matrix of Eve's capture probabilities.
///
/// Rows follow [`EveStrategy::ALL`]; columns follow [`legit_strategies`].
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityMatrix {
    n: u32,
    cols: Vec<LegitStrategy>,
    entries: Vec<Scalar>,
}

impl UtilityMatrix {
    /// Total on raw triples: admissibility is not re-checked here.
    pub fn build(spec: &GameSpec) -> Result<Self, GameError> {
        let cols = legit_strategies(spec.n)?;
        let mut entries = Vec::with_capacity(3 * cols.len());
        for eve in EveStrategy::ALL {
            for &legit in &cols {
                entries.push(eve_capture_probability(spec, legit, eve)?);
            }
        }
        Ok(UtilityMatrix { n: spec.n, cols, entries })
    }

    /// Assemble a matrix directly from rows (used by tests and the reduced
    /// view); `rows` are in [`EveStrategy::ALL`] order.
    pub fn from_rows(n: u32, cols: Vec<LegitStrategy>, rows: [Vec<Scalar>; 3]) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols.len()), "ragged rows");
        let entries = rows.into_iter().flatten().collect();
        UtilityMatrix { n, cols, entries }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn col_strategies(&self) -> &[LegitStrategy] {
        &self.cols
    }

    pub fn col_index(&self, strategy: LegitStrategy) -> Option<usize> {
        self.cols.iter().position(|&s| s == strategy)
    }

    /// Eve's utility `P_e` at the pure profile `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.cols.len() + col]
    }

    /// Expected `P_e` per Eve row under the column mixture `q` (`M q`).
    pub fn row_expectations(&self, q: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(q.len(), self.cols.len());
        (0..3)
            .map(|r| {
                q.iter()
                    .enumerate()
                    .fold(Scalar::zero(), |acc, (c, w)| &acc + &(w * self.entry(r, c)))
            })
            .collect()
    }

    /// Expected `P_e` per column under the row mixture `p` (`p^T M`).
    pub fn col_expectations(&self, p: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(p.len(), 3);
        (0..self.cols.len())
            .map(|c| {
                p.iter()
                    .enumerate()
                    .fold(Scalar::zero(), |acc, (r, w)| &acc + &(w * self.entry(r, c)))
            })
            .collect()
    }

    /// Bilinear form `p^T M q`: expected capture probability of a mixed
    /// profile.
    pub fn expected_value(&self, p: &[Scalar], q: &[Scalar]) -> Scalar {
        self.row_expectations(q)
            .iter()
            .zip(p)
            .fold(Scalar::zero(), |acc, (row_value, w)| &acc + &(w * row_value))
    }

    /// The 3x3 game restricted to `{AliceHeavy(0), Split, BobHeavy(0)}`.
    pub fn reduced_3x3(&self) -> UtilityMatrix {
        let picks = [
            LegitStrategy::AliceHeavy(0),
            LegitStrategy::Split,
            LegitStrategy::BobHeavy(0),
        ];
        let indices: Vec<usize> = picks
            .iter()
            .map(|&s| self.col_index(s).expect("reduced strategies always present"))
            .collect();
        let mut entries = Vec::with_capacity(9);
        for r in 0..3 {
            for &c in &indices {
                entries.push(self.entry(r, c).clone());
            }
        }
        UtilityMatrix {
            n: self.n,
            cols: picks.to_vec(),
            entries,
        }
    }

    pub fn to_float_mode(&self) -> UtilityMatrix {
        UtilityMatrix {
            n: self.n,
            cols: self.cols.clone(),
            entries: self.entries.iter().map(Scalar::to_float_mode).collect(),
        }
    }

    /// JSON export: row/column labels plus entries as exact decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..3)
            .map(|r| (0..self.cols.len()).map(|c| self.entry(r, c).to_string()).collect())
            .collect();
        serde_json::json!({
            "rows": 3,
            "cols": self.cols.len(),
            "row_labels": EveStrategy::ALL.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "col_labels": self.cols.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "entries": rows,
        })
    }

    /// CSV export with a header row of strategy labels.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eve_strategy");
        for col in &self.cols {
            out.push(',');
            out.push_str(&col.to_string());
        }
        out.push('\n');
        for (r, eve) in EveStrategy::ALL.iter().enumerate() {
            out.push_str(&eve.to_string());
            for c in 0..self.cols.len() {
                out.push(',');
                out.push_str(&self.entry(r, c).to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn strategy_order_for_small_n() {
        assert_eq!(
            legit_strategies(2).unwrap(),
            vec![
                LegitStrategy::AliceHeavy(0),
                LegitStrategy::Split,
                LegitStrategy::BobHeavy(0)
            ]
        );
        assert_eq!(
            legit_strategies(4).unwrap(),
            vec![
                LegitStrategy::AliceHeavy(0),
                LegitStrategy::AliceHeavy(1),
                LegitStrategy::Split,
                LegitStrategy::BobHeavy(1),
                LegitStrategy::BobHeavy(0)
            ]
        );
        assert!(matches!(legit_strategies(3), Err(GameError::InvalidPacketCount(3))));
        assert!(legit_strategies(0).is_err());
    }

    #[test]
    fn packet_count_examples() {
        assert_eq!(packet_counts(LegitStrategy::AliceHeavy(1), 4).unwrap(), (3, 1));
        assert_eq!(packet_counts(LegitStrategy::Split, 2).unwrap(), (1, 1));
        assert_eq!(packet_counts(LegitStrategy::BobHeavy(0), 2).unwrap(), (0, 2));
        assert!(packet_counts(LegitStrategy::AliceHeavy(1), 2).is_err());
        for strategy in legit_strategies(8).unwrap() {
            let (a, b) = packet_counts(strategy, 8).unwrap();
            assert_eq!(a + b, 8);
        }
    }

    #[test]
    fn capture_probability_examples() {
        let spec = example_spec();
        assert_eq!(
            eve_capture_probability(&spec, LegitStrategy::Split, EveStrategy::NearAlice).unwrap(),
            s("0.693")
        );
        assert_eq!(
            eve_capture_probability(&spec, LegitStrategy::BobHeavy(0), EveStrategy::NearBob).unwrap(),
            s("0.81")
        );
    }

    #[test]
    fn lossless_channel_capture_is_near_one() {
        let p = ChannelTriple::raw(s("0.9999999"), s("0.9999999"), s("0.9999999")).unwrap();
        let spec = GameSpec::new(4, p.clone(), p).unwrap();
        for eve in EveStrategy::ALL {
            let pe = eve_capture_probability(&spec, LegitStrategy::Split, eve).unwrap();
            assert!(pe > s("0.999999"));
        }
    }

    #[test]
    fn numerical_example_matrix_is_exact() {
        let matrix = UtilityMatrix::build(&example_spec()).unwrap();
        let expected = [
            ["0.9801", "0.693", "0.49"],
            ["0.8836", "0.7896", "0.7056"],
            ["0.64", "0.72", "0.81"],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                assert_eq!(matrix.entry(r, c), &s(text), "entry ({r}, {c})");
            }
        }
    }

    #[test]
    fn symmetric_middle_row_is_constant() {
        let matrix = UtilityMatrix::build(&symmetric_spec(2)).unwrap();
        for c in 0..matrix.num_cols() {
            assert_eq!(matrix.entry(EveStrategy::Middle.index(), c), &s("0.64"));
        }
    }

    #[test]
    fn uniform_raw_triples_square_everywhere() {
        let p = ChannelTriple::raw(s("0.5"), s("0.5"), s("0.5")).unwrap();
        let spec = GameSpec::new(2, p.clone(), p).unwrap();
        let matrix = UtilityMatrix::build(&spec).unwrap();
        for r in 0..3 {
            for c in 0..matrix.num_cols() {
                assert_eq!(matrix.entry(r, c), &s("0.25"));
            }
        }
    }

    #[test]
    fn mirror_symmetry_in_symmetric_games() {
        let matrix = UtilityMatrix::build(&symmetric_spec(8)).unwrap();
        let cols = matrix.num_cols();
        for c in 0..cols {
            assert_eq!(
                matrix.entry(EveStrategy::NearAlice.index(), c),
                matrix.entry(EveStrategy::NearBob.index(), cols - 1 - c)
            );
        }
    }

    #[test]
    fn reduced_matrix_picks_corner_strategies() {
        let matrix = UtilityMatrix::build(&symmetric_spec(8)).unwrap();
        let reduced = matrix.reduced_3x3();
        assert_eq!(reduced.num_cols(), 3);
        assert_eq!(reduced.entry(0, 0), matrix.entry(0, 0));
        assert_eq!(reduced.entry(1, 1), matrix.entry(1, 4));
        assert_eq!(reduced.entry(2, 2), matrix.entry(2, 8));
    }

    #[test]
    fn rebuild_is_bit_for_bit_reproducible() {
        let spec = example_spec();
        let a = UtilityMatrix::build(&spec).unwrap();
        let b = UtilityMatrix::build(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    }

    #[test]
    fn csv_export_has_labels() {
        let csv = UtilityMatrix::build(&example_spec()).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "eve_strategy,AliceHeavy(0),Split,BobHeavy(0)");
        assert_eq!(lines.next().unwrap(), "NearAlice,0.9801,0.693,0.49");
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("split".parse::<LegitStrategy>().unwrap(), LegitStrategy::Split);
        assert_eq!(
            "AliceHeavy(3)".parse::<LegitStrategy>().unwrap(),
            LegitStrategy::AliceHeavy(3)
        );
        assert_eq!("bob:0".parse::<LegitStrategy>().unwrap(), LegitStrategy::BobHeavy(0));
        assert_eq!("near-alice".parse::<EveStrategy>().unwrap(), EveStrategy::NearAlice);
        assert!("sideways".parse::<EveStrategy>().is_err());
    }

    #[test]
    fn packet_cap_is_enforced() {
        let t = ChannelTriple::from_strs("0.9", "0.8", "0.6").unwrap();
        assert!(matches!(
            GameSpec::new(66, t.clone(), t.clone()),
            Err(GameError::PacketCountCapped { .. })
        ));
        assert!(GameSpec::with_cap(66, t.clone(), t, 128).is_ok());
    }
}
