//! Seeded generators shared by the property and acceptance suites.
//!
//! Everything is driven by the crate's own counter-based PRNG so the suites
//! are reproducible bit for bit.
#![allow(dead_code)]

use wss_game::channel::ChannelTriple;
use wss_game::game::GameSpec;
use wss_game::scalar::Scalar;
use wss_game::sim::TrialRng;

pub struct SpecGen {
    rng: TrialRng,
}

impl SpecGen {
    pub fn new(seed: u64) -> Self {
        SpecGen {
            rng: TrialRng::for_trial(seed, 0, 0),
        }
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo < hi);
        lo + (self.rng.next_u64() % (hi - lo) as u64) as i64
    }

    pub fn pick<T: Copy>(&mut self, options: &[T]) -> T {
        options[(self.rng.next_u64() % options.len() as u64) as usize]
    }

    /// A validator-accepted triple with probabilities on the `1/10000` grid.
    ///
    /// `p_mid` lands in `[floor, 0.95)`; the gap down to `p_far` strictly
    /// exceeds the gap up to `p_near`, which is exactly the strict midpoint
    /// condition.
    pub fn triple(&mut self) -> ChannelTriple {
        self.triple_with_floor(300)
    }

    pub fn triple_with_floor(&mut self, far_floor: i64) -> ChannelTriple {
        loop {
            let mid = self.range(far_floor + 200, 9_500);
            let up = self.range(1, (9_900 - mid).clamp(2, 2_000));
            let down = self.range(up + 1, (mid - far_floor).max(up + 2));
            let near = mid + up;
            let far = mid - down;
            if far < far_floor {
                continue;
            }
            let make = |v: i64| Scalar::from_ratio(v, 10_000);
            if let Ok(t) = ChannelTriple::new(make(near), make(mid), make(far)) {
                return t;
            }
        }
    }

    /// A triple confined below `ceiling/10000`, for strongly asymmetric
    /// pairs.
    pub fn triple_below(&mut self, ceiling: i64) -> ChannelTriple {
        loop {
            let near = self.range(40, ceiling + 1);
            let mid = self.range(near * 2 / 3, near);
            let far = self.range(1, (2 * mid - near).max(2));
            let make = |v: i64| Scalar::from_ratio(v, 10_000);
            if let Ok(t) = ChannelTriple::new(make(near), make(mid), make(far)) {
                return t;
            }
        }
    }

    pub fn symmetric_spec(&mut self, n_choices: &[u32]) -> GameSpec {
        let n = self.pick(n_choices);
        let t = self.triple();
        GameSpec::new(n, t.clone(), t).expect("generated triples are valid")
    }

    /// An asymmetric spec where Alice's triple dominates Bob's pointwise.
    /// Roughly half the draws satisfy `p_near(B) <= p_far(A)` (the pure
    /// regime); the rest have `p_near(B) > p_far(A)`.
    pub fn dominant_asymmetric_spec(&mut self, n_choices: &[u32]) -> GameSpec {
        let n = self.pick(n_choices);
        let strongly = self.rng.next_u64().is_multiple_of(2);
        loop {
            let a = self.triple_with_floor(2_000);
            let b = if strongly {
                let far_a = scaled(a.p_far());
                self.triple_below(far_a)
            } else {
                self.triple()
            };
            let dominates = a.p_near() > b.p_near() && a.p_mid() > b.p_mid() && a.p_far() > b.p_far();
            if !dominates {
                continue;
            }
            return GameSpec::new(n, a, b).expect("generated triples are valid");
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// Numerator of a `1/10000`-grid probability.
fn scaled(p: &Scalar) -> i64 {
    let v = (p.to_f64() * 10_000.0).round() as i64;
    v.max(1)
}

/// The reference spec used throughout: N = 2 with the published example
/// probabilities.
pub fn example_spec() -> GameSpec {
    GameSpec::new(
        2,
        ChannelTriple::from_strs("0.99", "0.94", "0.80").unwrap(),
        ChannelTriple::from_strs("0.90", "0.84", "0.70").unwrap(),
    )
    .unwrap()
}

pub fn s(text: &str) -> Scalar {
    Scalar::from_decimal_str(text).unwrap()
}
