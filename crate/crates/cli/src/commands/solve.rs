use wss_game::game::build_utility_matrix;
use wss_game::solver::{classify, find_pure_equilibria, game_value};

use crate::commands::{equilibrium_json, solve_mixed, sweep, verification_tolerance};
use crate::config;
use crate::output::{emit, to_pretty_json};
use crate::{CliError, CommonArgs, FormatArg};

pub fn run(args: &CommonArgs) -> Result<u8, CliError> {
    let loaded = config::load(&args.config, args.mode)?;
    let spec = loaded.validated_spec()?;
    let matrix = build_utility_matrix(&spec).map_err(|e| CliError::Domain(e.to_string()))?;
    let class = classify(&spec);
    let tol = verification_tolerance(args.mode);

    let pure = find_pure_equilibria(&matrix);
    let mixed = solve_mixed(&matrix, class).map_err(|e| CliError::Domain(e.to_string()))?;
    let value = game_value(&matrix).map_err(|e| CliError::Domain(e.to_string()))?;
    if value.is_exact() && mixed.value.is_exact() && value != mixed.value {
        return Err(CliError::Domain(format!(
            "internal value mismatch: equilibrium {} vs maximin {}",
            mixed.value, value
        )));
    }

    let content = match args.format {
        FormatArg::Json => {
            let pure_json = pure
                .iter()
                .map(|eq| equilibrium_json(&matrix, eq, &tol))
                .collect::<Result<Vec<_>, _>>()?;
            to_pretty_json(&serde_json::json!({
                "spec_hash": spec.hash(),
                "n": spec.n(),
                "class": class.to_string(),
                "pure": pure_json,
                "mixed": equilibrium_json(&matrix, &mixed, &tol)?,
                "value": value.to_string(),
                "matrix": matrix.to_json(),
            }))?
        }
        FormatArg::Csv => {
            let mut csv = String::from(sweep::HEADER);
            csv.push('\n');
            csv.push_str(&sweep::solved_row(
                "-", &spec, class, &pure, &mixed, &value, &matrix, &tol,
            )?);
            csv.push('\n');
            csv
        }
    };
    emit(args.out.as_deref(), &content)?;
    Ok(0)
}
