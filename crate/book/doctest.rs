// mdbook cannot run listings against a local crate, so every chapter is
// pulled in as a module doc and `cargo test -p ctcsim-book` runs the code
// blocks as doc tests.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/states.md")]
pub mod states {}
#[doc = include_str!("src/fixed_points.md")]
pub mod fixed_points {}
#[doc = include_str!("src/pauli_words.md")]
pub mod pauli_words {}
#[doc = include_str!("src/backpropagation.md")]
pub mod backpropagation {}
#[doc = include_str!("src/scenarios.md")]
pub mod scenarios {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
