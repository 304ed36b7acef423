#![allow(dead_code)]

pub mod goldens;
