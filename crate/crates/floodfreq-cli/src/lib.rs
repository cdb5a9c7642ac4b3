//! Library half of the `floodfreq` binary: result serialization and the
//! command implementations, kept callable so integration tests can drive
//! them without spawning processes.

pub mod output;
pub mod quantile;
pub mod table1;
