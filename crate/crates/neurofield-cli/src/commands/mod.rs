//! Experiment subcommands. Each takes a validated [`RunConfig`] and an
//! output directory, writes its files there (creating it if needed), and
//! prints a short summary to stdout. Warnings go to stderr.

mod bench;
mod converge;
mod simulate;
mod turing;
mod wave_speed;

pub use bench::cmd_bench;
pub use converge::cmd_converge;
pub use simulate::cmd_simulate;
pub use turing::cmd_turing;
pub use wave_speed::cmd_wave_speed;

use neurofield::stepper::RunRecord;

pub(crate) fn print_warnings(record: &RunRecord) {
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
}
