//! SNP-SNP networks: the sparse symmetric graph type, its edge-list format,
//! and the sequence (GS), gene-membership (GM) and gene-interaction (GI)
//! constructions.

mod build;
mod network;

pub use build::{build_gi, build_gm, build_gs, build_network, BuildReport, NetworkKind};
pub use network::{Edge, SnpNetwork};

/// Default distance, in base pairs, within which a SNP counts as near a gene.
pub const DEFAULT_WINDOW: u64 = 20_000;
