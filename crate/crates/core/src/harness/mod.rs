//! Independent oracles and instance generators for tests.

pub mod gen;
pub mod oracle;
pub mod random;
