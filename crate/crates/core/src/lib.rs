pub mod cli;
pub mod equivalence;
pub mod error;
pub mod indexed;
pub mod parametricity;
pub mod presheaf;
pub mod shapes;
pub mod stream;
pub mod word;
