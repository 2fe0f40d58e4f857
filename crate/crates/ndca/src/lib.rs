//! Communication-free allocation of coalition value calculations.
//!
//! The core pipeline enumerates two-colour necklaces (FKM), re-encodes each
//! as an increment array, detects its period, and runs a designation test so
//! every agent independently computes exactly its own share of the coalition
//! space.  A direct split of the size-s coalition lists (DCVC) serves as the
//! baseline, with exhaustive verification and benchmarking on top.

pub mod allocation;
pub mod bench;
pub mod cli;
pub mod dcvc;
pub mod error;
pub mod increment_array;
pub mod necklace;
pub mod verify;

pub use error::{Error, Result};
