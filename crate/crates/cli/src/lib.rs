//! Command-line front end of `mvfix`: config ingestion, the commands, and
//! report and trace serialization.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod demo;
pub mod error;
pub mod machine;
pub mod trace_csv;
