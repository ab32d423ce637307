//! System files (`.msys`) and witness archives (`.mwit`).

mod archive;
mod parse;

pub use archive::{read_archive, write_archive};
pub use parse::{parse_system, print_system};
