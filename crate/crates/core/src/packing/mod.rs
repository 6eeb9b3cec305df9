//! The packing engine: connector embedding into the hub, bulk forests packed
//! batch by batch into the bulk slots, and the outer loop over matchings.

pub mod blowup;
pub mod collection;
pub mod config;
pub mod connectors;
pub mod forests;
pub mod prep;
pub mod state;
pub mod theorem;

pub use blowup::{blowup_pack, check_blowup_contract, BlowupBatch, ConflictGraph};
pub use collection::pack_collection;
pub use config::{PipelineConfig, Validated};
pub use connectors::{embed_connectors, ConnectorEmbedding, HubContext};
pub use forests::{batch_forests, pack_batch_regular, BatchPlan, Forest, RegularBatch};
pub use prep::{merge_small_trees, order_pieces, prepare_trees, PreparedTree};
pub use state::{FailureRecord, PackingExport, PackingState, TreeImage};
pub use theorem::{build_structure, pack_theorem, pack_with_structure, split_collections};
