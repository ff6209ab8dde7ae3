//! Classification of quasi-homogeneous plane curve germs.
//!
//! Exact arithmetic ([`algebra`]), text input ([`parser`]), normal forms
//! ([`quasihom`]), resolution chains ([`resolution`]), moduli and witnesses
//! ([`moduli`]) and the foliation index layer ([`foliation`]).

pub mod algebra;
pub mod foliation;
pub mod moduli;
pub mod parser;
pub mod quasihom;
pub mod resolution;
