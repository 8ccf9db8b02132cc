pub mod analysis;
pub mod branches;
pub mod error;
pub mod exactalg;
pub mod modlab;
pub mod verify;

pub use error::{Error, Result};
