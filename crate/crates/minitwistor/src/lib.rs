//! Numerical minitwistor correspondence for hyperelliptic curves.
//!
//! Starting from 2g+2 ordered real branch points this crate builds the curve
//! w^2 = -f(z), its period lattice and Abel map, the Seifert data of the
//! family of real minitwistor lines, the associated surface with its two
//! quadric covers, and the induced Lorentzian Einstein-Weyl structure on the
//! space of real lines: geodesics, null-surface foliations, the conformal
//! metric, and the Zoll property. An appendix-style bridge identifies the
//! underlying real structures with those of ALE spaces of type A.

pub mod tol;
pub mod error;
pub mod numerics;
pub mod curve;
pub mod jacobian;
pub mod seifert;
pub mod surface;
pub mod einstein_weyl;
pub mod ale;
pub mod json;
pub mod cli;
