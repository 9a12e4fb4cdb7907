//! Touchstone network files, key-value design files and CSV reports.

pub mod csv;
pub mod design;
pub mod touchstone;
