//! Benchmarks for the steerlab kernels live in `benches/`.
