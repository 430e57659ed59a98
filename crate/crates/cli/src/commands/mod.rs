pub mod datagen;
pub mod diagnose;
pub mod reference;
pub mod run;
