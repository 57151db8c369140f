//! Library side of the `sqz` command: the verification suites, their
//! reports, and output helpers shared by the binary and its tests.

pub mod report;
pub mod suites;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use sqz_core::error::Result;

/// Renders with `write` into a buffer, then writes the buffer to `path`
/// (or stdout when `None`). Nothing is written if rendering fails.
pub fn emit(path: Option<&Path>, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    match path {
        Some(p) => fs::write(p, &buf)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&buf)?;
            out.flush()?;
        }
    }
    Ok(())
}
