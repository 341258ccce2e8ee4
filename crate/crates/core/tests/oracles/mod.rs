//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

pub mod diagrams;
pub mod generator;
pub mod normal_equations;
pub mod rotation;
