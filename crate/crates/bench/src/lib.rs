//! Benchmarks for the purcell1d kernels live in `benches/`.
