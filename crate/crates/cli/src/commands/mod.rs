pub mod repro;
pub mod simulate;
pub mod solve;
pub mod sweep;
pub mod validate;

use wss_game::game::UtilityMatrix;
use wss_game::scalar::{Scalar, FLOAT_MARGIN};
use wss_game::solver::{
    solve_proposition_verification, solve_support_enumeration, verify_equilibrium, Equilibrium,
    GameClass, SolverError,
};

use crate::{CliError, ModeArg};

/// Deviation tolerance for equilibrium verification: zero in rational mode,
/// the strictness margin in float mode.
pub fn verification_tolerance(mode: ModeArg) -> Scalar {
    match mode {
        ModeArg::Rational => Scalar::zero(),
        ModeArg::Float => Scalar::from_f64(FLOAT_MARGIN),
    }
}

/// One mixed equilibrium: the proposition/verification path for the 3x3
/// mixed-only game, support enumeration everywhere else.
pub fn solve_mixed(
    matrix: &UtilityMatrix,
    class: GameClass,
) -> Result<Equilibrium, SolverError> {
    if matrix.num_cols() == 3 && class == GameClass::AsymmetricMixedOnly {
        solve_proposition_verification(matrix)
    } else {
        solve_support_enumeration(matrix)
    }
}

/// Equilibrium JSON per the wire format, with the `verified` flag attached.
pub fn equilibrium_json(
    matrix: &UtilityMatrix,
    equilibrium: &Equilibrium,
    tol: &Scalar,
) -> Result<serde_json::Value, CliError> {
    let report =
        verify_equilibrium(matrix, equilibrium, tol).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut value = serde_json::to_value(equilibrium)
        .map_err(|e| CliError::Usage(format!("cannot serialize equilibrium: {e}")))?;
    value
        .as_object_mut()
        .expect("equilibrium serializes to an object")
        .insert("verified".to_string(), serde_json::Value::Bool(report.verified));
    Ok(value)
}
