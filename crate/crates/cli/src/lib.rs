//! `reqont` command-line frontend and read-only JSON-over-HTTP service.
//!
//! Endpoints (all `GET`, under `/api/v1`): `schema`, `factors`,
//! `factors/{key}`, `factors/{key}/resources`, `descriptions`, `datasets`,
//! `approaches`, `stats`, `gaps`, `authors`, `validation`, `health`.
//! List endpoints page with `limit` (default 100) and `offset` (default 0)
//! and report the unpaged size in `x-total-count`. Errors are
//! `{"code", "message"}` bodies: `invalid_parameter` and
//! `unknown_characteristic` with 400, `unknown_factor` with 404.

pub mod cli;
pub mod commands;
pub mod render;
pub mod service;

pub use cli::Cli;
pub use commands::run;
