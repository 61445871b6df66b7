use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Write to `--out` when given, stdout otherwise, normalized to exactly one
/// trailing newline. A closed stdout pipe is not an error.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    let content = content.trim_end_matches('\n');
    match out {
        Some(path) => std::fs::write(path, format!("{content}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{content}") {
                Ok(()) => Ok(()),
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Usage(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("cannot serialize output: {e}")))
}
