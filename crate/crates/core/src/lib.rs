//! Feature-aware quadric mesh simplification.
//!
//! The pipeline has two stages. [`simplify`] collapses edges in order of a
//! composite quadric cost that protects open boundaries, boundary
//! curvature, and surface normals, and records every collapse. The
//! [`transfer`] module then walks that history backwards to map points on
//! the simplified surface onto the original and bakes a new texture atlas
//! or per-vertex colors. [`metrics`] measures geometric and appearance
//! error between meshes.
//!
//! ```
//! use decimate::{fixtures, simplify, SimplifyConfig, Target};
//!
//! let sphere = fixtures::icosphere(2);
//! let out = simplify(&sphere, &SimplifyConfig::default().with_target(Target::Faces(32)));
//! assert!(out.mesh.face_count() <= 32);
//! assert_eq!(out.history.len(), sphere.vertex_count() - out.mesh.vertex_count());
//! ```

pub mod error;
pub mod fixtures;
pub mod history;
pub mod io;
pub mod mesh;
pub mod metrics;
pub mod quadric;
pub mod simplify;
pub mod spatial;
pub mod texture;
pub mod topology;
pub mod transfer;

pub use error::{Error, Result};
pub use history::{CollapseHistory, CollapseRecord};
pub use io::{load_mesh, save_mesh};
pub use mesh::{Mesh, Vec3};
pub use quadric::{Quadric, WeightSet};
pub use simplify::{simplify, Simplified, SimplifyConfig, Target};
pub use texture::TextureImage;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/intro.md")]
mod book_intro {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/quadrics.md")]
mod book_quadrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/boundary-curvature.md")]
mod book_boundary_curvature {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/area-preservation.md")]
mod book_area_preservation {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/collapse-loop.md")]
mod book_collapse_loop {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/successive-mapping.md")]
mod book_successive_mapping {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/metrics.md")]
mod book_metrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
