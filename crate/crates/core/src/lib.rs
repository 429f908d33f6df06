pub mod budget;
pub mod carpet;
pub mod error;
pub mod ifs;
pub mod projection;
pub mod rational;
pub mod measures;
pub mod fourier;
pub mod cover;
pub mod boxcount;
pub mod io;
pub mod render;
pub mod cli;
