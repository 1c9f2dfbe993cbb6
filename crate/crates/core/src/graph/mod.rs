//! Edge indexing, static sampling and exact component bookkeeping for graphs on `{1, ..., n}`.

mod config;
mod edge_space;
mod union_find;
mod view;

pub use config::{sample_er, Configuration};
pub use edge_space::{edge_index, EdgeSlot, EdgeSpace, SkipSampler};
pub use union_find::{sample_static, DisjointSets, StaticSample};
pub use view::{apply_flip, components, ComponentView, FlipEffect};
