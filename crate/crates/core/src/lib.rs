pub mod algebra;
pub mod cli;
pub mod gen;
pub mod hecke;
pub mod higgs;
pub mod projective_line;
pub mod spectral;
