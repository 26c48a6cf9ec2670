//! Exact construction of smooth complete intersections carrying a free
//! semilinear action of a finite group extension, together with the
//! certificates that make each run checkable.

pub mod fields;
pub mod groups;
pub mod linalg;
pub mod poly;
pub mod text;
pub mod rep;
pub mod action;
pub mod ideals;
pub mod bertini;
pub mod construct;
pub mod verify;
