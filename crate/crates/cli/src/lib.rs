//! Library side of the `amply` command: exhaustive search, verification
//! reports and transport-bipartite dumps.

pub mod hgraph;
pub mod report;
pub mod search;

pub use hgraph::{hgraph_dump, HGraphDump};
pub use report::{verify, Check, Status, Verdict, VerificationReport};
pub use search::search_amply;
