//! Matrix I/O, generators, verification campaigns and the reproduction of
//! the worked examples, shared by the `abnorm` binary and the tests.

pub mod generators;
pub mod io;
pub mod verify;
pub mod reference;
pub mod campaign;
pub mod lemmas;
pub mod demos;
