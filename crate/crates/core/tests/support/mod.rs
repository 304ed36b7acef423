#![allow(dead_code)]

pub mod annotated;
pub mod fol;
