//! Mixed graphs near the mixed Moore bound: exact bounds, certificates,
//! named constructions, canonical forms and exhaustive extremal search.

pub mod bounds;
pub mod canon;
pub mod certify;
pub mod constructions;
pub mod dot;
pub mod format;
pub mod graph;
pub mod search;
pub mod walks;

pub use bounds::{moore_bound, moore_bound_terms, order_11k, spectral_infeasibility_defect1};
pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use certify::{check_graph, CheckReport, Classification, Mode};
pub use format::{parse_graph, to_text};
pub use graph::{GraphError, MixedGraph};
pub use search::{search_extremal, SearchResult, SearchSpec};
