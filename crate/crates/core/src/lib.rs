pub mod analysis;
pub mod classify;
pub mod condition;
pub mod config;
pub mod error;
pub mod lm;
pub mod noise;
pub mod numeric;
pub mod pipeline;
pub mod posterior;
pub mod text;
