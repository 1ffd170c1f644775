//! Exact arithmetic for Drinfeld modules over A = F_q[θ].

pub mod app;
pub mod cyclotomic;
pub mod detzeta;
pub mod drinfeld;
pub mod error;
pub mod field;
pub mod laurent;
pub mod logalg;
pub mod lseries;
pub mod mpoly;
pub mod ore;
pub mod ratfn;
pub mod residue;
pub mod ring;
pub mod shtuka;
pub mod upoly;

pub use cyclotomic::{CycElem, CycField, GroupRingElem};
pub use drinfeld::DrinfeldModule;
pub use error::{Error, Result};
pub use field::{Elem, Fq};
pub use laurent::LaurentApprox;
pub use mpoly::MPoly;
pub use ore::{OrePoly, TauSeries};
pub use ratfn::RatFn;
pub use ring::{KAlgebra, Ring};
pub use upoly::UPoly;
