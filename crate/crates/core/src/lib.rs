pub mod error;
pub mod exact;
pub mod serde_rational;

pub use error::{Error, Result};
pub mod coloring;
pub mod coxeter;
pub mod gram;
pub mod hpq;
pub mod normalize;
pub mod verify;
pub mod vinberg;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Short identifier of this library build, embedded in reports.
pub fn version_hash() -> String {
    normalize::graph_hash(&format!("racg-core {VERSION}"))[..16].to_string()
}
