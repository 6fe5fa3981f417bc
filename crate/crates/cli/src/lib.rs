//! Library side of the `cvgauss` command-line tool.

pub mod error;
pub mod eval;
pub mod report;
pub mod sweep;
pub mod verify;

use std::io::{Read, Write};
use std::path::Path;

pub use error::{CliError, CliResult};
pub use eval::{Evaluator, Precision};

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> CliResult<String> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::io("<stdin>", e))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    }
    Ok(s)
}

/// Writes to a file, or standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, body: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
