//! Verification engine for the quantized Ptolemy groupoid.
//!
//! Flip words on labeled ideal triangulations carry an integer exponent of a
//! formal central unit `z`. Rewriting them with the involution, commutation,
//! pentagon and relabeling relations tracks that exponent, which is how the
//! central charges of Dehn twist relations (braid, lantern, chain, puncture)
//! are computed. Shear coordinates provide an independent classical check
//! that a word really represents the identity mapping class.

pub mod extension;
pub mod permutation;
pub mod reconstruct;
pub mod rewrite;
pub mod shear;
pub mod simplify;
pub mod triangulation;
pub mod twist;
pub mod word;

pub use permutation::LabelPermutation;
pub use shear::{IdealPoint, IdealQuadrilateral, ShearError, ShearVector};
pub use triangulation::{ArcLabel, Epsilon, Side, SurfaceType, Triangulation, TriangulationError, TriangulationFile};
pub use word::{FlipWord, Generator, WordError};
