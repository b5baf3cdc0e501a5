pub mod engine_sweep;
pub mod jc_evolve;
pub mod micromaser;
pub mod verify;
