use wss_game::channel::validate_assumption;

use crate::config;
use crate::output::{emit, to_pretty_json};
use crate::{CliError, CommonArgs, FormatArg};

pub fn run(args: &CommonArgs) -> Result<u8, CliError> {
    let loaded = config::load(&args.config, args.mode)?;
    let report = validate_assumption(&loaded.raw_a, &loaded.raw_b)
        .map_err(|e| CliError::Domain(e.to_string()))?;

    let content = match args.format {
        FormatArg::Json => to_pretty_json(&report)?,
        FormatArg::Csv => {
            let mut csv = String::from("sender,check,passed,detail\n");
            for checks in [&report.sender_a, &report.sender_b] {
                for (name, outcome) in [
                    ("monotonicity", &checks.monotonicity),
                    ("midpoint", &checks.midpoint),
                ] {
                    csv.push_str(&format!(
                        "{},{},{},\"{}\"\n",
                        checks.sender, name, outcome.passed, outcome.detail
                    ));
                }
            }
            csv
        }
    };
    emit(args.out.as_deref(), &content)?;
    Ok(if report.all_passed() { 0 } else { 1 })
}
