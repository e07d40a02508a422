//! File formats, the query language and command drivers on top of
//! `mnesor-core`.

pub mod commands;
pub mod csvio;
pub mod query;
