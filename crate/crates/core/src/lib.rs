pub mod attacks;
pub mod benches;
pub mod bits;
pub mod ciphers;
pub mod locking;
pub mod netlist;
pub mod sat;
