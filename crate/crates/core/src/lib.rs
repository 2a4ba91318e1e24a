//! Counting statistics on random clique complexes.
//!
//! The crate samples Erdős–Rényi graphs, counts cliques, link simplices and
//! critical simplices of the lexicographical discrete Morse matching, and
//! provides exact moments, Stein-method bounds on the distance to a
//! multivariate normal, exhaustive oracles for small graphs and a Monte Carlo
//! pipeline that checks the bounds against simulated data.

pub mod bounds;
mod error;
pub mod graph;
pub mod moments;
pub mod montecarlo;
pub mod morse;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};

/// Library version embedded in every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Which counting statistic a vector is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticKind {
    /// Critical simplices of sizes 2..=d+1 under the lexicographical matching.
    Critical,
    /// Simplices of sizes 1..=d in the link of a fixed vertex set `t`.
    Link,
    /// Cliques of sizes 2..=d+1.
    Clique,
}

impl std::fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StatisticKind::Critical => "critical",
            StatisticKind::Link => "link",
            StatisticKind::Clique => "clique",
        })
    }
}

impl std::str::FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "critical" => Ok(StatisticKind::Critical),
            "link" => Ok(StatisticKind::Link),
            "clique" => Ok(StatisticKind::Clique),
            other => Err(Error::InvalidParameter(format!(
                "unknown statistic kind `{other}`"
            ))),
        }
    }
}

impl StatisticKind {
    /// Simplex sizes counted by the components of a `d`-dimensional vector.
    pub fn sizes(self, d: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            StatisticKind::Link => 1..=d,
            StatisticKind::Critical | StatisticKind::Clique => 2..=d + 1,
        }
    }
}
