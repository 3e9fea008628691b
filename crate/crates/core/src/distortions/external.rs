//! Registration point for transforms that live outside this crate (learned
//! codecs, watermarking and so on). The program reads a PNG on stdin and
//! writes a PNG or JPEG to stdout. These are never sampled into plans.

use std::io::Write;
use std::process::{Command, Stdio};

use super::DistortionError;
use crate::image::{self, ImageBuffer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalTransform {
    pub name: String,
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalTransform {
    pub fn new(name: impl Into<String>, program: impl Into<String>, args: Vec<String>) -> Self {
        Self {
            name: name.into(),
            program: program.into(),
            args,
        }
    }

    pub fn apply(&self, img: &ImageBuffer) -> Result<ImageBuffer, DistortionError> {
        let fail = |reason: String| DistortionError::External {
            name: self.name.clone(),
            reason,
        };
        let input = image::io::encode_png(img)?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| fail(format!("spawn {}: {e}", self.program)))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = std::thread::spawn(move || stdin.write_all(&input));
        let output = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        writer
            .join()
            .map_err(|_| fail("stdin writer panicked".into()))?
            .map_err(|e| fail(format!("write stdin: {e}")))?;
        if !output.status.success() {
            return Err(fail(format!(
                "exited with {}: {}",
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        Ok(image::io::decode(&output.stdout)?)
    }
}
