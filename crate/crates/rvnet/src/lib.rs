pub mod analysis;
pub mod arclist;
pub mod cases;
pub mod cli;
pub mod detect;
pub mod edit;
pub mod enewick;
pub mod error;
pub mod frame;
pub mod gen;
pub mod iso;
pub mod network;
pub mod oracle;
pub mod tree;
