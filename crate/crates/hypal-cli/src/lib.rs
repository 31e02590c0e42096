//! Report documents shared by the `hypal` binary and its test suite.

pub mod reports;
