pub mod cover;
pub mod dirichlet;
pub mod gh;
pub mod model;
pub mod models;
pub mod smooth;
pub mod trace;
