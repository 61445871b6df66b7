use wss_game::channel::ChannelTriple;
use wss_game::game::{build_utility_matrix, GameSpec, UtilityMatrix};
use wss_game::scalar::Scalar;
use wss_game::solver::{
    classify, find_pure_equilibria, game_value, verify_equilibrium, Equilibrium, EquilibriumKind,
    GameClass,
};

use crate::commands::{solve_mixed, verification_tolerance};
use crate::output::{emit, to_pretty_json};
use crate::{CliError, FormatArg, SweepArgs};

pub const HEADER: &str =
    "param,class,valid,game_value,pure,mixed_p,mixed_q,degenerate,verified,boundary,spec_hash,error";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepField {
    Near,
    Mid,
    Far,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepTarget {
    TripleA(SweepField),
    TripleB(SweepField),
}

fn parse_param(param: &str) -> Result<SweepTarget, CliError> {
    let field = |name: &str| match name {
        "p_near" => Ok(SweepField::Near),
        "p_mid" => Ok(SweepField::Mid),
        "p_far" => Ok(SweepField::Far),
        other => Err(CliError::Usage(format!(
            "unknown sweep field {other:?} (expected p_near, p_mid, or p_far)"
        ))),
    };
    match param.split_once('.') {
        Some(("triple_a", rest)) => Ok(SweepTarget::TripleA(field(rest)?)),
        Some(("triple_b", rest)) => Ok(SweepTarget::TripleB(field(rest)?)),
        _ => Err(CliError::Usage(format!(
            "unknown sweep parameter {param:?} (expected triple_a.<field> or triple_b.<field>)"
        ))),
    }
}

fn substitute(triple: &ChannelTriple, field: SweepField, value: &Scalar) -> (Scalar, Scalar, Scalar) {
    let mut parts = (
        triple.p_near().clone(),
        triple.p_mid().clone(),
        triple.p_far().clone(),
    );
    match field {
        SweepField::Near => parts.0 = value.clone(),
        SweepField::Mid => parts.1 = value.clone(),
        SweepField::Far => parts.2 = value.clone(),
    }
    parts
}

/// Inclusive exact grid: `from + i * (to - from) / (steps - 1)`.
fn grid(from: &Scalar, to: &Scalar, steps: u32) -> Vec<Scalar> {
    if steps <= 1 {
        return vec![from.clone()];
    }
    let span = to - from;
    let denominator = Scalar::from_int(i64::from(steps) - 1);
    (0..steps)
        .map(|i| from + &(&(&span * &Scalar::from_int(i64::from(i))) / &denominator))
        .collect()
}

struct Row {
    param: String,
    class: String,
    valid: bool,
    game_value: String,
    pure: String,
    mixed_p: String,
    mixed_q: String,
    degenerate: String,
    verified: String,
    boundary: bool,
    spec_hash: String,
    error: String,
}

impl Row {
    fn invalid(param: String, error: String) -> Row {
        Row {
            param,
            class: String::new(),
            valid: false,
            game_value: String::new(),
            pure: String::new(),
            mixed_p: String::new(),
            mixed_q: String::new(),
            degenerate: String::new(),
            verified: String::new(),
            boundary: false,
            spec_hash: String::new(),
            error,
        }
    }

    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},\"{}\"",
            self.param,
            self.class,
            self.valid,
            self.game_value,
            self.pure,
            self.mixed_p,
            self.mixed_q,
            self.degenerate,
            self.verified,
            self.boundary,
            self.spec_hash,
            self.error
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "param": self.param,
            "class": self.class,
            "valid": self.valid,
            "game_value": self.game_value,
            "pure": self.pure,
            "mixed_p": self.mixed_p,
            "mixed_q": self.mixed_q,
            "degenerate": self.degenerate,
            "verified": self.verified,
            "boundary": self.boundary,
            "spec_hash": self.spec_hash,
            "error": self.error,
        })
    }
}

fn vector_label(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
    parts.join("|")
}

fn pure_label(pure: &[Equilibrium]) -> String {
    let cells: Vec<String> = pure
        .iter()
        .map(|eq| match &eq.kind {
            EquilibriumKind::Pure { eve_row, legit_col } => format!("({eve_row}|{legit_col})"),
            EquilibriumKind::Mixed { .. } => unreachable!("pure list carries pure equilibria"),
        })
        .collect();
    cells.join(";")
}

/// One solved sweep/solve row (shared with `solve --format csv`).
#[allow(clippy::too_many_arguments)]
pub fn solved_row(
    param: &str,
    spec: &GameSpec,
    class: GameClass,
    pure: &[Equilibrium],
    mixed: &Equilibrium,
    value: &Scalar,
    matrix: &UtilityMatrix,
    tol: &Scalar,
) -> Result<String, CliError> {
    let (p, q) = mixed.as_vectors(matrix);
    let verified = verify_equilibrium(matrix, mixed, tol)
        .map_err(|e| CliError::Domain(e.to_string()))?
        .verified;
    Ok(Row {
        param: param.to_string(),
        class: class.to_string(),
        valid: true,
        game_value: value.to_string(),
        pure: pure_label(pure),
        mixed_p: vector_label(&p),
        mixed_q: vector_label(&q),
        degenerate: mixed.degenerate.to_string(),
        verified: verified.to_string(),
        boundary: false,
        spec_hash: spec.hash(),
        error: String::new(),
    }
    .to_csv())
}

pub fn run(args: &SweepArgs) -> Result<u8, CliError> {
    let loaded = crate::config::load(&args.common.config, args.common.mode)?;
    let target = parse_param(&args.param)?;
    let from = parse_scalar(&args.from, args)?;
    let to = parse_scalar(&args.to, args)?;
    let tol = verification_tolerance(args.common.mode);

    let mut rows: Vec<Row> = Vec::new();
    let mut any_failure = false;
    let mut previous_class: Option<GameClass> = None;

    for value in grid(&from, &to, args.steps) {
        let param_label = value.to_string();
        let (a_parts, b_parts) = match target {
            SweepTarget::TripleA(field) => (
                substitute(&loaded.raw_a, field, &value),
                (
                    loaded.raw_b.p_near().clone(),
                    loaded.raw_b.p_mid().clone(),
                    loaded.raw_b.p_far().clone(),
                ),
            ),
            SweepTarget::TripleB(field) => (
                (
                    loaded.raw_a.p_near().clone(),
                    loaded.raw_a.p_mid().clone(),
                    loaded.raw_a.p_far().clone(),
                ),
                substitute(&loaded.raw_b, field, &value),
            ),
        };
        let spec = ChannelTriple::new(a_parts.0, a_parts.1, a_parts.2)
            .and_then(|a| {
                ChannelTriple::new(b_parts.0.clone(), b_parts.1.clone(), b_parts.2.clone())
                    .map(|b| (a, b))
            })
            .map_err(|e| e.to_string())
            .and_then(|(a, b)| {
                GameSpec::with_cap(loaded.n, a, b, loaded.cap).map_err(|e| e.to_string())
            });
        let spec = match spec {
            Ok(spec) => spec,
            Err(error) => {
                any_failure = true;
                rows.push(Row::invalid(param_label, error));
                previous_class = None;
                continue;
            }
        };

        let row = solve_point(&param_label, &spec, &tol);
        match row {
            Ok(mut row) => {
                let class = classify(&spec);
                let at_regime_boundary = spec.triple_b().p_near() == spec.triple_a().p_far();
                let class_flip = previous_class.is_some_and(|prev| prev != class);
                row.boundary = at_regime_boundary || class_flip;
                if class_flip {
                    eprintln!(
                        "sweep: class changes to {class} at {} = {param_label}",
                        args.param
                    );
                }
                previous_class = Some(class);
                rows.push(row);
            }
            Err(error) => {
                any_failure = true;
                rows.push(Row::invalid(param_label, error));
                previous_class = None;
            }
        }
    }

    let content = match args.common.format {
        FormatArg::Csv => {
            let mut csv = String::from(HEADER);
            csv.push('\n');
            for row in &rows {
                csv.push_str(&row.to_csv());
                csv.push('\n');
            }
            csv
        }
        FormatArg::Json => {
            let values: Vec<serde_json::Value> = rows.iter().map(Row::to_json).collect();
            to_pretty_json(&values)?
        }
    };
    emit(args.common.out.as_deref(), &content)?;
    Ok(u8::from(any_failure))
}

fn solve_point(param: &str, spec: &GameSpec, tol: &Scalar) -> Result<Row, String> {
    let matrix = build_utility_matrix(spec).map_err(|e| e.to_string())?;
    let class = classify(spec);
    let pure = find_pure_equilibria(&matrix);
    let mixed = solve_mixed(&matrix, class).map_err(|e| e.to_string())?;
    let value = game_value(&matrix).map_err(|e| e.to_string())?;
    let (p, q) = mixed.as_vectors(&matrix);
    let verified = verify_equilibrium(&matrix, &mixed, tol)
        .map_err(|e| e.to_string())?
        .verified;
    Ok(Row {
        param: param.to_string(),
        class: class.to_string(),
        valid: true,
        game_value: value.to_string(),
        pure: pure_label(&pure),
        mixed_p: vector_label(&p),
        mixed_q: vector_label(&q),
        degenerate: mixed.degenerate.to_string(),
        verified: verified.to_string(),
        boundary: false,
        spec_hash: spec.hash(),
        error: String::new(),
    })
}

fn parse_scalar(text: &str, args: &SweepArgs) -> Result<Scalar, CliError> {
    let value = Scalar::from_decimal_str(text)
        .map_err(|e| CliError::Usage(format!("cannot parse grid bound {text:?}: {e}")))?;
    Ok(match args.common.mode {
        crate::ModeArg::Rational => value,
        crate::ModeArg::Float => value.to_float_mode(),
    })
}
