//! Minimizing convex pentagons among planar point sets.
//!
//! The crate covers exact counting on rational point sets, the signotope
//! abstraction, SAT/MaxSAT formula generation, a clause-weighting local
//! search, a small exact branch-and-bound MaxSAT solver, realization of
//! signotopes by points, the pinwheel and parabolic constructions, and exact
//! bound arithmetic.

pub mod bounds;
pub mod cli;
pub mod combin;
pub mod constructions;
pub mod encoder;
pub mod geom;
pub mod maxsat_bb;
pub mod realizer;
pub mod signotope;
pub mod sls;
