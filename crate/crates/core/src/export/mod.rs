//! Graph, map and heatmap renderers.

mod archmap;
mod dot;
mod heatmap;

pub use archmap::{emit_arch_map, palette, LayoutSpec};
pub use dot::{emit_file_dot, read_file_dot};
pub use heatmap::emit_heatmap_svg;
