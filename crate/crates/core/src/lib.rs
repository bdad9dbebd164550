pub mod arrange;
pub mod cli;
pub mod error;
pub mod geom;
pub mod heis;
pub mod qconn;
pub mod ring;
pub mod rmat;
pub mod stab;

pub use error::{Error, Result};
