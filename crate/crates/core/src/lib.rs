pub mod charring;
pub mod cli;
pub mod error;
pub mod genchar;
pub mod ktheory;
pub mod lattice;
pub mod verify;
