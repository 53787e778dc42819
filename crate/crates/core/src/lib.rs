pub mod ansatz;
pub mod cli;
pub mod dualization;
pub mod dvb;
pub mod equivalence;
pub mod exactla;
pub mod geom;
pub mod report;
pub mod sample;
pub mod seq;
