//! Benchmarks for the solver crate live in `benches/`.
