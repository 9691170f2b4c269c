//! Compiles the code listings of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/catalogue.md")]
pub mod catalogue {}
#[doc = include_str!("../../../book/src/impact_functions.md")]
pub mod impact_functions {}
#[doc = include_str!("../../../book/src/sectors.md")]
pub mod sectors {}
#[doc = include_str!("../../../book/src/growth.md")]
pub mod growth {}
#[doc = include_str!("../../../book/src/scc.md")]
pub mod scc {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
