//! Exact coefficient arithmetic and finitely generated modules.

pub mod limits;
pub mod matrix;
pub mod module;
pub mod ring;
pub mod smith;

pub use limits::{finite_colimit, finite_limit, Colimit, Diagram, Limit};
pub use matrix::Matrix;
pub use module::{is_exact, Analysis, Module, Morphism, RingExtension};
pub use ring::{Elem, Factor, Ring, RingKind};
pub use smith::{normal_form, NormalForm, Track};
