//! Checks shared by the focused test targets and the acceptance run.
#![allow(dead_code)]

pub mod jacobian;
pub mod mms;
pub mod reduction;
