//! Algebras of generalized trees: join-trees, ordered join-trees and
//! quasi-trees, presented by regular terms and description schemes.

pub mod bits;
pub mod order;
pub mod term;
pub mod arrangement;
pub mod structured;
pub mod value;
pub mod sbjt;
pub mod sjt_ojt;
pub mod scheme;
pub mod quasitree;
pub mod rankwidth;
