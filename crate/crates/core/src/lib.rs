//! Hansard sitting-day XML to tidy per-statement records.
//!
//! Everything here works on in-memory bytes and tables; file and network
//! access live in the companion `hansard` crate.

#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod error;
pub mod registry;
pub mod segment;
pub mod text;
pub mod xml;
pub mod attribution;
pub mod question_time;
pub mod divisions;
pub mod topics;
pub mod table;
pub mod pipeline;
pub mod validate;
pub mod fixture;
