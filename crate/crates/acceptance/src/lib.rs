//! End-to-end acceptance checks for `hessbound`. Everything lives in
//! `tests/acceptance.rs`, which prints one line per criterion:
//!
//! ```text
//! cargo test -p hessbound-acceptance --test acceptance
//! ```
