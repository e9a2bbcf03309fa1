//! Deterministic text serialization (placeholder).

use alloc::string::String;
pub struct Placeholder(pub String);
