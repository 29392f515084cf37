//! `qcoin` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails (budget, pole,
//! dimension mismatch, or an oracle mismatch), 2 on a usage error.

pub mod args;
mod commands;
pub mod emit;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{Failure, Report};

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match commands::execute(&cli) {
        Ok(Report { output, ok }) => {
            let _ = out.write_all(emit::emit(&output, cli.format).as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
