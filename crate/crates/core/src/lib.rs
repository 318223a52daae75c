pub mod companion;
pub mod dblcat;
pub mod dot;
pub mod fincat;
pub mod fixtures;
pub mod fractions;
pub mod bicat;
pub mod homotopy;
