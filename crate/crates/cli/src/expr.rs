//! Numeric flag values such as `7*pi/4` or `2*pi - 0.4`.

use crate::CliError;

pub fn parse_expr(s: &str) -> Result<f64, CliError> {
    let v = meval::eval_str(s.trim()).map_err(|e| CliError::Usage(format!("cannot evaluate '{s}': {e}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("'{s}' is not a finite number")))
    }
}

/// `value_parser` adapter for clap.
pub fn expr_arg(s: &str) -> Result<f64, String> {
    parse_expr(s).map_err(|e| e.to_string())
}
