//! Verification suites (placeholder).

use alloc::vec::Vec;
pub struct Placeholder(pub Vec<f64>);
