//! Runs the code blocks of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/encoding.md")]
pub mod encoding {}

#[doc = include_str!("../../../book/src/interferometers.md")]
pub mod interferometers {}

#[doc = include_str!("../../../book/src/post_selection.md")]
pub mod post_selection {}

#[doc = include_str!("../../../book/src/compiling.md")]
pub mod compiling {}

#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
