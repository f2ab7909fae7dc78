//! Report output: stdout by default, or a file given with `--out`. Relative
//! `--out` paths resolve against `$SYMORD_OUT_DIR` when that variable is set.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::PathBuf;

pub struct OutputSink {
    buffer: String,
    target: Option<PathBuf>,
}

impl OutputSink {
    pub fn new(out: &Option<String>) -> Result<Self> {
        let target = match out {
            None => None,
            Some(path) => {
                let p = PathBuf::from(path);
                let resolved = if p.is_relative() {
                    match std::env::var_os("SYMORD_OUT_DIR") {
                        Some(dir) => PathBuf::from(dir).join(p),
                        None => p,
                    }
                } else {
                    p
                };
                Some(resolved)
            }
        };
        Ok(OutputSink {
            buffer: String::new(),
            target,
        })
    }

    pub fn line(&mut self, text: &str) {
        self.buffer.push_str(text);
        self.buffer.push('\n');
    }

    pub fn finish(self) -> Result<()> {
        match self.target {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(self.buffer.as_bytes())?;
                Ok(())
            }
            Some(path) => {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)
                            .with_context(|| format!("creating {}", parent.display()))?;
                    }
                }
                std::fs::write(&path, self.buffer)
                    .with_context(|| format!("writing {}", path.display()))
            }
        }
    }
}
