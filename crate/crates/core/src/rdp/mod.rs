//! Classified rational double point pairs and their local and configuration
//! invariants: type, order, defect, resolution size, deficiency and blowups.

mod config;
mod pair;
mod phi;
mod type_seq;

pub use config::{ConfigInvariants, Configuration};
pub use pair::{universe, RdpPair, ScalarInvariants};
pub use phi::phi;
pub use type_seq::TypeSequence;
