//! Benchmark-only crate; see `benches/spectral.rs`.
