pub mod arith;
pub mod cad;
pub mod cli;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod pencil;
pub mod pipeline;
pub mod poly;

pub use error::{Error, Result};
pub use exec::Exec;
