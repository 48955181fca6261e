pub mod admissible;
pub mod construct;
pub mod crosscheck;
pub mod conway;
pub mod error;
pub mod families;
pub mod equivalence;
pub mod fpmat;
pub mod gf;
pub mod io;
pub mod semifield;
pub mod selftest;
pub mod semilinear;
pub mod spread;

pub use error::{Error, Result};
pub use fpmat::{FpMatrix, FpVec};
pub use gf::{Elem, FieldCtx, Fq, Frob};
pub use semifield::{verify_isotopism, IsotopismTriple, NucleiTriple, PreSemifield, Provenance};
pub use semilinear::{SemilinearMap, Vec2};
pub use spread::SpreadSet;
