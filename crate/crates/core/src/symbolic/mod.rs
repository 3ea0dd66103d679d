//! Words, subshift descriptors, languages and Markov-graph structure.

pub mod graph;
pub mod language;
pub mod sft;
pub mod shift;
pub mod word;

pub use graph::{
    connecting_words, is_irreducible, scc_decomposition, strongly_connected_components,
    ConnectorTable, SccDecomposition,
};
pub use language::{count_language, language, walk_language};
pub use shift::{
    beta_alphabet_size, beta_kind, beta_word_ok, guard_band_hits, Adjacency, BetaKind, ShiftSpec,
    GUARD_BAND,
};
pub use sft::SftGraph;
pub use word::{Letter, Word};
