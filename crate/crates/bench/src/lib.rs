//! Benchmarks for the rendering pipeline live in `benches/`.
