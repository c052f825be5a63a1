//! Command line and local HTTP session service for `ricci-rev`.

pub mod api;
pub mod cli;
pub mod error;
pub mod runfile;
pub mod session;

pub use api::{router, AppState};
pub use error::{Result, ServiceError};
