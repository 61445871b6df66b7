use wss_game::game::{EveStrategy, LegitStrategy};
use wss_game::scalar::Scalar;
use wss_game::sim::{
    simulate_equilibrium_value, simulate_exchange, EveChoice, LegitChoice, SimMode,
    SimulationConfig, SimulationReport,
};

use crate::config;
use crate::output::{emit, to_pretty_json};
use crate::{CliError, FormatArg, SimulateArgs};

fn parse_weights(text: &str) -> Result<Vec<Scalar>, CliError> {
    text.split(',')
        .map(|w| {
            Scalar::from_decimal_str(w)
                .map_err(|e| CliError::Domain(format!("bad mixed-strategy weight {w:?}: {e}")))
        })
        .collect()
}

fn parse_legit(text: &str) -> Result<LegitChoice, CliError> {
    if let Some(weights) = text.strip_prefix("mixed:") {
        return Ok(LegitChoice::Mixed(parse_weights(weights)?));
    }
    text.parse::<LegitStrategy>()
        .map(LegitChoice::Pure)
        .map_err(CliError::Domain)
}

fn parse_eve(text: &str) -> Result<EveChoice, CliError> {
    if let Some(weights) = text.strip_prefix("mixed:") {
        return Ok(EveChoice::Mixed(parse_weights(weights)?));
    }
    text.parse::<EveStrategy>()
        .map(EveChoice::Pure)
        .map_err(CliError::Domain)
}

pub fn run(args: &SimulateArgs) -> Result<u8, CliError> {
    let loaded = config::load(&args.common.config, args.common.mode)?;
    let spec = loaded.validated_spec()?;
    let legit = parse_legit(&args.legit)?;
    let eve = parse_eve(&args.eve)?;
    let both_mixed =
        matches!(legit, LegitChoice::Mixed(_)) && matches!(eve, EveChoice::Mixed(_));

    let mut cfg = SimulationConfig::new(spec, legit, eve, args.trials, args.seed)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    if args.payload_mode {
        cfg = cfg
            .with_mode(SimMode::Payload)
            .with_payload_bits(args.payload_bits)
            .map_err(|e| CliError::Domain(e.to_string()))?;
    }

    let report: SimulationReport = if both_mixed {
        simulate_equilibrium_value(&cfg)
    } else {
        simulate_exchange(&cfg)
    }
    .map_err(|e| CliError::Domain(e.to_string()))?;

    let content = match args.common.format {
        FormatArg::Json => to_pretty_json(&report)?,
        FormatArg::Csv => format!("{}\n{}\n", SimulationReport::csv_header(), report.to_csv_row()),
    };
    emit(args.common.out.as_deref(), &content)?;
    Ok(0)
}
