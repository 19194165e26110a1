pub mod cli;
pub mod cpoly;
pub mod error;
pub mod exactla;
pub mod forms;
pub mod lcs;
pub mod ncalg;
pub mod rational;
pub mod relmat;
pub mod series;

pub use error::{Error, Result};
