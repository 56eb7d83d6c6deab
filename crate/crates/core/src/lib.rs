//! Derivations and first Hochschild cohomology of finite-dimensional
//! quotients of path algebras.

pub mod algebra;
pub mod derivation;
pub mod field;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod planar;
pub mod quiver;
