//! Runs every Rust listing of the guide in `book/src` as a doc-test.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(exact_linear_algebra, "exact-linear-algebra.md");
chapter!(algebras, "algebras.md");
chapter!(polynomials, "polynomials.md");
chapter!(codimensions, "codimensions.md");
chapter!(cocharacters, "cocharacters.md");
chapter!(grassmann, "grassmann.md");
chapter!(cli, "cli.md");

#[doc = include_str!("../../../README.md")]
pub mod readme {}
