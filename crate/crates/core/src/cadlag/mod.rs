//! Càdlàg paths on `[0, 1]`, path functionals and the J1 distance.

mod j1;
mod path;

pub use j1::{j1_distance, j1_exceeds, j1_match, TimeChange};
pub use path::{CadlagPath, Continuity, Jump};

pub(crate) use path::{merge_grids, norm};
