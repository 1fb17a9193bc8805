pub mod base_cats;
pub mod bisim;
pub mod fixtures;
pub mod ipomset;
pub mod paths;
pub mod precubical;
pub mod semantics;
