pub mod algebra;
pub mod closed_forms;
mod exhaust;
pub mod group;
pub mod image;
pub mod limits;
pub mod planner;
pub mod ring;
pub mod verify;
pub mod word;
mod parse;
mod serde_util;

pub use limits::Limits;
pub use parse::ParseError;
