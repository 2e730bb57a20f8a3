//! Network and surface documents, tessellation and mesh export.

mod document;
mod mesh;

pub use document::{
    parse_json, Attachment, ConditionSpec, ConfigOverrides, CstSpec, CurveShape, CurveSpec,
    NetworkDocument, PartSpec, Placement, SurfaceDocument,
};
pub use mesh::{export_mesh, format_sci, tessellate, MeshFormat, TessellationGrid};
