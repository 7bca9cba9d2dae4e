pub mod corpus;
pub mod error;
pub mod gausscode;
pub mod moves;
pub mod notation;
pub mod par;
pub mod prime;
pub mod report;
pub mod ribbon;
pub mod surface;

pub use error::{Error, Result};
pub use gausscode::{GaussCode, Passage, Pos, Sign, Strand, SubcodeInterval};
