//! Compiles every Rust listing in the guide under `book/src` as a doc-test.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(exact, "exact.md");
chapter!(systems, "systems.md");
chapter!(decoupling, "decoupling.md");
chapter!(pairs, "pairs.md");
chapter!(triples, "triples.md");
chapter!(oracle, "oracle.md");
chapter!(cli, "cli.md");

#[doc = include_str!("../../../README.md")]
pub mod readme {}
