//! Shared plumbing for the command-line tools.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use schur_core::io::{render_json, render_text, Block};
use schur_core::Error;

pub const PASS: u8 = 0;
pub const PROPERTY_FAILURE: u8 = 1;
pub const INPUT_ERROR: u8 = 2;
pub const TIMEOUT: u8 = 3;

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Timeout => TIMEOUT,
        _ => INPUT_ERROR,
    }
}

/// Reports `e` on stderr and maps it to an exit code.
pub fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code_for(e))
}

pub fn read_input(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, message: format!("{}: {e}", path.display()) })
}

pub fn write_output(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Parse { line: 0, message: format!("{}: {e}", path.display()) })
}

pub fn emit(blocks: &[Block], json: bool) {
    if json {
        println!("{}", render_json(blocks));
    } else {
        print!("{}", render_text(blocks));
    }
}

pub fn status(ok: bool) -> ExitCode {
    ExitCode::from(if ok { PASS } else { PROPERTY_FAILURE })
}
