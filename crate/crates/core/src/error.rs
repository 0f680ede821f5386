use std::fmt;

/// Malformed input: syntax errors, missing required fields, unknown keys or
/// values of the wrong kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// JSON path to the offending value, `.` for the document root.
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn from_json(err: serde_path_to_error::Error<serde_json::Error>) -> Self {
        let path = err.path().to_string();
        let inner = err.into_inner();
        // serde_json appends " at line L column C" to its message.
        let mut message = inner.to_string();
        if let Some(idx) = message.rfind(" at line ") {
            message.truncate(idx);
        }
        ParseError {
            path,
            line: inner.line(),
            column: inner.column(),
            message,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (at `{}`, line {} column {})",
            self.message, self.path, self.line, self.column
        )
    }
}

impl std::error::Error for ParseError {}

/// Deserialize `raw` into `T`, attaching path and position to any failure.
pub(crate) fn from_json_slice<'de, T: serde::Deserialize<'de>>(
    raw: &'de [u8],
) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_slice(raw);
    let value = serde_path_to_error::deserialize(&mut de).map_err(ParseError::from_json)?;
    de.end().map_err(|e| ParseError {
        path: ".".to_string(),
        line: e.line(),
        column: e.column(),
        message: "trailing characters after JSON document".to_string(),
    })?;
    Ok(value)
}
