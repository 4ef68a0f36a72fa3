//! Wang tilings from codings of toroidal Z²-rotations.
//!
//! Coordinates live in Q(√5) ([`goldenfield`]); partitions of 2-tori are
//! unions of exact convex polygons ([`torusgeom`]); orbits of a Z²-rotation
//! are coded into label patches ([`dynamics`]) and read as Wang tilings
//! ([`wang`]). Occurrence sets of patterns are model sets of 4-to-2
//! cut-and-project schemes ([`modelset`]). [`sturmian`] is the 1-D case.

pub mod datasets;
pub mod dynamics;
pub mod goldenfield;
pub mod modelset;
pub mod sturmian;
pub mod svg;
pub mod torusgeom;
pub mod wang;

pub use goldenfield::{GoldenNumber, Rational};
pub use torusgeom::{Atom, ConvexPolygon, Lattice, Partition, Vec2G};
