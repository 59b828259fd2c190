//! Library side of the `polyzeta` command: job files and result documents.

pub mod job;
pub mod run;

pub use job::{IntegralSpec, JobSpec, Mode, SeriesSpec, ZSpec};
pub use run::{exit_code, render_text, run, Report};
