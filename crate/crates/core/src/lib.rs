pub mod cli;
pub mod cubic_io;
pub mod multipoly;
pub mod numerics;
pub mod pipeline;
pub mod quaternary_builder;
pub mod ternary_canon;
pub mod verifier;
