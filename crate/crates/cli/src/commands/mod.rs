pub mod avn;
pub mod fgi;
pub mod mc;
