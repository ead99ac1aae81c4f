//! The recurrence-system data model and its text and JSON front-ends.

mod parse;
mod render;
mod system;

pub use parse::parse_system;
pub use render::{parse_document, render_system, RenderFormat};
pub use system::{sum_profile, RecurrenceSystem, SumProfile, SystemDocument};
