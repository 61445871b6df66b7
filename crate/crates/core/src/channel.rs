//! Distance-dependent packet-success probabilities and the admissibility
//! conditions the game analysis needs (Assumption 1).
//!
//! Only three distances ever matter to the game: the eavesdropper's near
//! offset `epsilon`, the midpoint `D/2`, and the far side `D - epsilon`. A
//! [`ChannelTriple`] holds the success probabilities at exactly those points;
//! parametric channel families are conveniences that must sample into a valid
//! triple.

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error("{what} = {value} is outside {bounds}")]
    OutOfRange {
        what: String,
        value: String,
        bounds: String,
    },
    #[error("distance {distance} is outside the model domain {domain}")]
    DistanceOutOfDomain { distance: String, domain: String },
    #[error("{part} violated{}: {detail}", sender.map(|s| format!(" for sender {s}")).unwrap_or_default())]
    AssumptionViolated {
        sender: Option<Sender>,
        part: AssumptionPart,
        detail: String,
    },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid channel model: {0}")]
    InvalidModel(String),
    #[error("numerically ambiguous check: {0}")]
    NumericallyAmbiguous(ScalarError),
}

/// Which legitimate user transmits over the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sender {
    Alice,
    Bob,
}

impl std::fmt::Display for Sender {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sender::Alice => f.write_str("Alice"),
            Sender::Bob => f.write_str("Bob"),
        }
    }
}

/// The runtime-checkable parts of Assumption 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssumptionPart {
    /// Part (iii): strict monotonicity `p_near > p_mid > p_far`.
    Monotonicity,
    /// Part (iv): strict midpoint condition `p_mid > (p_near + p_far) / 2`.
    Midpoint,
}

impl std::fmt::Display for AssumptionPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AssumptionPart::Monotonicity => f.write_str("Assumption 1(iii)"),
            AssumptionPart::Midpoint => f.write_str("Assumption 1(iv)"),
        }
    }
}

/// Placement of the two legitimate users and the eavesdropper's near offset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryParams {
    d: Scalar,
    epsilon: Scalar,
}

impl GeometryParams {
    /// Requires `d > 0` and `0 < epsilon < d/2`.
    pub fn new(d: Scalar, epsilon: Scalar) -> Result<Self, ChannelError> {
        if d <= Scalar::zero() {
            return Err(ChannelError::InvalidGeometry(format!("D = {d} must be positive")));
        }
        let half = &d / &Scalar::from_int(2);
        if epsilon <= Scalar::zero() || epsilon >= half {
            return Err(ChannelError::InvalidGeometry(format!(
                "epsilon = {epsilon} must lie strictly inside (0, D/2) = (0, {half})"
            )));
        }
        Ok(GeometryParams { d, epsilon })
    }

    pub fn d(&self) -> &Scalar {
        &self.d
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }

    /// Distance for an eavesdropper sitting next to the sender.
    pub fn near(&self) -> Scalar {
        self.epsilon.clone()
    }

    pub fn mid(&self) -> Scalar {
        &self.d / &Scalar::from_int(2)
    }

    /// Distance for an eavesdropper sitting next to the opposite user.
    pub fn far(&self) -> Scalar {
        &self.d - &self.epsilon
    }
}

/// One sender's success probabilities at the three game-relevant distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelTriple {
    p_near: Scalar,
    p_mid: Scalar,
    p_far: Scalar,
}

fn check_open_unit(what: &str, value: &Scalar) -> Result<(), ChannelError> {
    if *value <= Scalar::zero() || *value >= Scalar::one() {
        return Err(ChannelError::OutOfRange {
            what: what.to_string(),
            value: value.to_string(),
            bounds: "the open interval (0, 1)".to_string(),
        });
    }
    Ok(())
}

impl ChannelTriple {
    /// Validated constructor: probabilities in `(0, 1)` plus Assumption 1
    /// parts (iii) and (iv), strict inequalities.
    pub fn new(p_near: Scalar, p_mid: Scalar, p_far: Scalar) -> Result<Self, ChannelError> {
        let triple = Self::raw(p_near, p_mid, p_far)?;
        if let Some(violation) = triple.first_violation(None)? {
            return Err(violation);
        }
        Ok(triple)
    }

    /// Bounds-only constructor. The matrix builder is total on raw triples;
    /// everything else expects validated ones.
    pub fn raw(p_near: Scalar, p_mid: Scalar, p_far: Scalar) -> Result<Self, ChannelError> {
        check_open_unit("p_near", &p_near)?;
        check_open_unit("p_mid", &p_mid)?;
        check_open_unit("p_far", &p_far)?;
        Ok(ChannelTriple { p_near, p_mid, p_far })
    }

    pub fn from_strs(p_near: &str, p_mid: &str, p_far: &str) -> Result<Self, ChannelError> {
        let parse = |s: &str| {
            Scalar::from_decimal_str(s).map_err(|e| ChannelError::InvalidModel(e.to_string()))
        };
        Self::new(parse(p_near)?, parse(p_mid)?, parse(p_far)?)
    }

    pub fn p_near(&self) -> &Scalar {
        &self.p_near
    }

    pub fn p_mid(&self) -> &Scalar {
        &self.p_mid
    }

    pub fn p_far(&self) -> &Scalar {
        &self.p_far
    }

    pub fn to_float_mode(&self) -> ChannelTriple {
        ChannelTriple {
            p_near: self.p_near.to_float_mode(),
            p_mid: self.p_mid.to_float_mode(),
            p_far: self.p_far.to_float_mode(),
        }
    }

    fn first_violation(&self, sender: Option<Sender>) -> Result<Option<ChannelError>, ChannelError> {
        let (mono, midpoint) = self.check_parts()?;
        if let Some(detail) = mono {
            return Ok(Some(ChannelError::AssumptionViolated {
                sender,
                part: AssumptionPart::Monotonicity,
                detail,
            }));
        }
        if let Some(detail) = midpoint {
            return Ok(Some(ChannelError::AssumptionViolated {
                sender,
                part: AssumptionPart::Midpoint,
                detail,
            }));
        }
        Ok(None)
    }

    /// Returns failure details for parts (iii) and (iv), `None` when a part
    /// holds.
    fn check_parts(&self) -> Result<(Option<String>, Option<String>), ChannelError> {
        let gt = |a: &Scalar, b: &Scalar| {
            a.decide_gt(b).map_err(ChannelError::NumericallyAmbiguous)
        };
        let mono = if !gt(&self.p_near, &self.p_mid)? {
            Some(format!("p_near = {} is not > p_mid = {}", self.p_near, self.p_mid))
        } else if !gt(&self.p_mid, &self.p_far)? {
            Some(format!("p_mid = {} is not > p_far = {}", self.p_mid, self.p_far))
        } else {
            None
        };
        let chord = &(&self.p_near + &self.p_far) / &Scalar::from_int(2);
        let midpoint = if !gt(&self.p_mid, &chord)? {
            Some(format!(
                "p_mid = {} is not > (p_near + p_far)/2 = {}",
                self.p_mid, chord
            ))
        } else {
            None
        };
        Ok((mono, midpoint))
    }
}

/// A channel family evaluable at any distance in its domain.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    /// The canonical representation: only the three game distances matter.
    ExplicitTriple {
        triple: ChannelTriple,
        geom: GeometryParams,
    },
    /// `p(d) = a - b * d^2` on `(0, d_max]`.
    ConcaveQuadratic { a: Scalar, b: Scalar, d_max: Scalar },
    /// Piecewise-linear interpolation of `(distance, probability)` samples.
    TableInterpolated { points: Vec<(Scalar, Scalar)> },
}

impl ChannelModel {
    pub fn explicit(triple: ChannelTriple, geom: GeometryParams) -> Self {
        ChannelModel::ExplicitTriple { triple, geom }
    }

    /// Validates that the parabola stays strictly inside `(0, 1)` over the
    /// domain.
    pub fn concave_quadratic(a: Scalar, b: Scalar, d_max: Scalar) -> Result<Self, ChannelError> {
        if d_max <= Scalar::zero() {
            return Err(ChannelError::InvalidModel(format!(
                "domain end d_max = {d_max} must be positive"
            )));
        }
        if b.is_negative() {
            return Err(ChannelError::InvalidModel(format!(
                "b = {b} must be non-negative for a concave family"
            )));
        }
        if a <= Scalar::zero() || a > Scalar::one() || (b.is_zero() && a >= Scalar::one()) {
            return Err(ChannelError::InvalidModel(format!(
                "a = {a} must keep p(d) strictly inside (0, 1) over the domain"
            )));
        }
        let at_end = &a - &(&b * &d_max.pow(2));
        if at_end <= Scalar::zero() {
            return Err(ChannelError::InvalidModel(format!(
                "p(d_max) = {at_end} is not positive"
            )));
        }
        Ok(ChannelModel::ConcaveQuadratic { a, b, d_max })
    }

    /// Validates sample count, strictly increasing distances, and
    /// probabilities inside `(0, 1)`.
    pub fn table(points: Vec<(Scalar, Scalar)>) -> Result<Self, ChannelError> {
        if points.len() < 2 {
            return Err(ChannelError::InvalidModel(
                "an interpolation table needs at least two points".to_string(),
            ));
        }
        for window in points.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(ChannelError::InvalidModel(format!(
                    "table distances must be strictly increasing ({} then {})",
                    window[0].0, window[1].0
                )));
            }
        }
        for (d, p) in &points {
            if *d <= Scalar::zero() {
                return Err(ChannelError::InvalidModel(format!(
                    "table distance {d} must be positive"
                )));
            }
            check_open_unit("table probability", p)?;
        }
        Ok(ChannelModel::TableInterpolated { points })
    }
}

/// Evaluate the model's per-packet success probability at distance `d`.
pub fn success_probability(model: &ChannelModel, d: &Scalar) -> Result<Scalar, ChannelError> {
    match model {
        ChannelModel::ExplicitTriple { triple, geom } => {
            if *d == geom.near() {
                Ok(triple.p_near().clone())
            } else if *d == geom.mid() {
                Ok(triple.p_mid().clone())
            } else if *d == geom.far() {
                Ok(triple.p_far().clone())
            } else {
                Err(ChannelError::DistanceOutOfDomain {
                    distance: d.to_string(),
                    domain: format!(
                        "{{{}, {}, {}}}",
                        geom.near(),
                        geom.mid(),
                        geom.far()
                    ),
                })
            }
        }
        ChannelModel::ConcaveQuadratic { a, b, d_max } => {
            if *d <= Scalar::zero() || d > d_max {
                return Err(ChannelError::DistanceOutOfDomain {
                    distance: d.to_string(),
                    domain: format!("(0, {d_max}]"),
                });
            }
            Ok(a - &(b * &d.pow(2)))
        }
        ChannelModel::TableInterpolated { points } => {
            let first = &points[0];
            let last = &points[points.len() - 1];
            if d < &first.0 || d > &last.0 {
                return Err(ChannelError::DistanceOutOfDomain {
                    distance: d.to_string(),
                    domain: format!("[{}, {}]", first.0, last.0),
                });
            }
            for window in points.windows(2) {
                let (d0, p0) = &window[0];
                let (d1, p1) = &window[1];
                if d <= d1 {
                    let t = &(d - d0) / &(d1 - d0);
                    return Ok(p0 + &(&t * &(p1 - p0)));
                }
            }
            Ok(last.1.clone())
        }
    }
}

/// Sample the model at the three strategy-relevant distances and validate the
/// resulting triple.
pub fn triple_from_model(
    model: &ChannelModel,
    geom: &GeometryParams,
) -> Result<ChannelTriple, ChannelError> {
    let p_near = success_probability(model, &geom.near())?;
    let p_mid = success_probability(model, &geom.mid())?;
    let p_far = success_probability(model, &geom.far())?;
    ChannelTriple::new(p_near, p_mid, p_far)
}

/// Pass/fail outcome of a single admissibility check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

/// Checks of Assumption 1 parts (iii) and (iv) for one sender's triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenderChecks {
    pub sender: Sender,
    pub monotonicity: CheckOutcome,
    pub midpoint: CheckOutcome,
}

/// Admissibility report for both senders.
///
/// Parts (i) (independent transmissions) and (ii) (time invariance) are not
/// runtime-checkable on a triple; they are contracts the simulator inherits
/// and are recorded in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub sender_a: SenderChecks,
    pub sender_b: SenderChecks,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.sender_a.monotonicity.passed
            && self.sender_a.midpoint.passed
            && self.sender_b.monotonicity.passed
            && self.sender_b.midpoint.passed
    }
}

fn sender_checks(sender: Sender, triple: &ChannelTriple) -> Result<SenderChecks, ChannelError> {
    let (mono, midpoint) = triple.check_parts()?;
    let monotonicity = match mono {
        Some(detail) => CheckOutcome {
            passed: false,
            detail: format!("{} violated: {detail}", AssumptionPart::Monotonicity),
        },
        None => CheckOutcome {
            passed: true,
            detail: format!(
                "{} holds: {} > {} > {}",
                AssumptionPart::Monotonicity,
                triple.p_near(),
                triple.p_mid(),
                triple.p_far()
            ),
        },
    };
    let midpoint = match midpoint {
        Some(detail) => CheckOutcome {
            passed: false,
            detail: format!("{} violated: {detail}", AssumptionPart::Midpoint),
        },
        None => CheckOutcome {
            passed: true,
            detail: format!(
                "{} holds: {} > {}",
                AssumptionPart::Midpoint,
                triple.p_mid(),
                &(triple.p_near() + triple.p_far()) / &Scalar::from_int(2)
            ),
        },
    };
    Ok(SenderChecks {
        sender,
        monotonicity,
        midpoint,
    })
}

/// Check Assumption 1 parts (iii)/(iv) for both triples, reporting the
/// violating inequality when a part fails. Raw (unvalidated) triples are
/// accepted; the report carries failures instead of erroring.
pub fn validate_assumption(
    triple_a: &ChannelTriple,
    triple_b: &ChannelTriple,
) -> Result<ValidationReport, ChannelError> {
    Ok(ValidationReport {
        sender_a: sender_checks(Sender::Alice, triple_a)?,
        sender_b: sender_checks(Sender::Bob, triple_b)?,
        notes: vec![
            "Assumption 1(i) (independent packet transmissions) is a modeling contract; the simulator draws every packet independently".to_string(),
            "Assumption 1(ii) (time-invariant probabilities) is a modeling contract; probabilities are fixed for a whole run".to_string(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        Scalar::from_decimal_str(text).unwrap()
    }

    fn geom(d: &str, eps: &str) -> GeometryParams {
        GeometryParams::new(s(d), s(eps)).unwrap()
    }

    #[test]
    fn explicit_triple_answers_at_the_three_distances() {
        let triple = ChannelTriple::from_strs("0.99", "0.94", "0.80").unwrap();
        let g = geom("100", "1");
        let model = ChannelModel::explicit(triple, g.clone());
        assert_eq!(success_probability(&model, &g.near()).unwrap(), s("0.99"));
        assert_eq!(success_probability(&model, &g.mid()).unwrap(), s("0.94"));
        assert_eq!(success_probability(&model, &g.far()).unwrap(), s("0.80"));
        assert!(matches!(
            success_probability(&model, &s("7")),
            Err(ChannelError::DistanceOutOfDomain { .. })
        ));
    }

    #[test]
    fn quadratic_evaluates_exactly() {
        // Nearly flat channel: p(d) stays at a for b = 0.
        let flat = ChannelModel::concave_quadratic(s("0.999999999"), s("0"), s("100")).unwrap();
        assert_eq!(success_probability(&flat, &s("42")).unwrap(), s("0.999999999"));

        let model = ChannelModel::concave_quadratic(s("0.99"), s("0.0001"), s("60")).unwrap();
        assert_eq!(success_probability(&model, &s("20")).unwrap(), s("0.95"));
        assert!(success_probability(&model, &s("61")).is_err());
        assert!(success_probability(&model, &s("0")).is_err());
    }

    #[test]
    fn quadratic_rejects_parameters_leaving_unit_interval() {
        assert!(ChannelModel::concave_quadratic(s("1"), s("0"), s("10")).is_err());
        assert!(ChannelModel::concave_quadratic(s("0.5"), s("0.1"), s("10")).is_err());
        assert!(ChannelModel::concave_quadratic(s("1"), s("0.0001"), s("10")).is_ok());
    }

    #[test]
    fn triple_from_quadratic_model() {
        let model = ChannelModel::concave_quadratic(s("0.95"), s("0.00005"), s("60")).unwrap();
        let g = geom("60", "10");
        let triple = triple_from_model(&model, &g).unwrap();
        assert_eq!(*triple.p_near(), s("0.945"));
        assert_eq!(*triple.p_mid(), s("0.905"));
        assert_eq!(*triple.p_far(), s("0.825"));
    }

    #[test]
    fn constant_model_fails_monotonicity() {
        let model = ChannelModel::concave_quadratic(s("0.9"), s("0"), s("60")).unwrap();
        let err = triple_from_model(&model, &geom("60", "10")).unwrap_err();
        match err {
            ChannelError::AssumptionViolated { part, .. } => {
                assert_eq!(part, AssumptionPart::Monotonicity)
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn midpoint_boundary_equality_fails() {
        // 0.75 == (0.9 + 0.6) / 2 and the condition is strict.
        let err = ChannelTriple::from_strs("0.9", "0.75", "0.6").unwrap_err();
        match err {
            ChannelError::AssumptionViolated { part, .. } => {
                assert_eq!(part, AssumptionPart::Midpoint)
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn table_model_interpolates() {
        let model = ChannelModel::table(vec![
            (s("1"), s("0.9")),
            (s("3"), s("0.8")),
            (s("5"), s("0.4")),
        ])
        .unwrap();
        assert_eq!(success_probability(&model, &s("2")).unwrap(), s("0.85"));
        assert_eq!(success_probability(&model, &s("5")).unwrap(), s("0.4"));
        assert!(success_probability(&model, &s("6")).is_err());
    }

    #[test]
    fn validation_report_examples() {
        let a = ChannelTriple::from_strs("0.99", "0.94", "0.80").unwrap();
        let b = ChannelTriple::from_strs("0.90", "0.84", "0.70").unwrap();
        let report = validate_assumption(&a, &b).unwrap();
        assert!(report.all_passed());

        let sym = ChannelTriple::from_strs("0.9", "0.8", "0.6").unwrap();
        assert!(validate_assumption(&sym, &sym).unwrap().all_passed());

        let bad = ChannelTriple::raw(s("0.9"), s("0.7"), s("0.6")).unwrap();
        let report = validate_assumption(&bad, &b).unwrap();
        assert!(!report.all_passed());
        assert!(!report.sender_a.midpoint.passed);
        assert!(report.sender_a.midpoint.detail.contains("Assumption 1(iv)"));
        assert!(report.sender_a.monotonicity.passed);
    }

    #[test]
    fn geometry_bounds() {
        assert!(GeometryParams::new(s("100"), s("1")).is_ok());
        assert!(GeometryParams::new(s("100"), s("50")).is_err());
        assert!(GeometryParams::new(s("100"), s("0")).is_err());
        assert!(GeometryParams::new(s("0"), s("1")).is_err());
    }
}
