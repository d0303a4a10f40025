pub mod cfpo;
pub mod cli;
pub mod poset;
pub mod terms;
pub mod tree;
