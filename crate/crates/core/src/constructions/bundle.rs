//! Experiment bundles: one directory per run holding the configuration,
//! the measured constants, traces and profile frontiers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::machine::MachineConfig;
use crate::models::{Profile, ProfileHeader};

#[derive(Debug)]
pub struct Bundle {
    dir: PathBuf,
    artifacts: Vec<PathBuf>,
}

impl Bundle {
    /// Creates `dir` and writes `config.txt`.
    pub fn create(dir: &Path, config: &MachineConfig) -> Result<Bundle> {
        fs::create_dir_all(dir)?;
        let mut b = Bundle {
            dir: dir.to_path_buf(),
            artifacts: Vec::new(),
        };
        b.write_text("config.txt", &format!("{}\n", config.describe()))?;
        Ok(b)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Every file written so far, in write order.
    pub fn artifacts(&self) -> &[PathBuf] {
        &self.artifacts
    }

    pub fn write_text(&mut self, name: &str, content: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, content)?;
        if !self.artifacts.contains(&path) {
            self.artifacts.push(path.clone());
        }
        Ok(path)
    }

    pub fn write_profile(
        &mut self,
        name: &str,
        profile: &Profile,
        header: &ProfileHeader,
    ) -> Result<PathBuf> {
        self.write_text(name, &profile.to_csv(header))
    }

    /// `constants.txt`: one `key=value` line per entry, in the given order.
    pub fn write_constants(&mut self, constants: &[(String, String)]) -> Result<PathBuf> {
        let mut s = String::new();
        for (k, v) in constants {
            let _ = writeln!(s, "{k}={v}");
        }
        self.write_text("constants.txt", &s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_and_lists_artifacts() {
        let dir = std::env::temp_dir().join(format!("algostat-bundle-{}", std::process::id()));
        let cfg = MachineConfig::default();
        let mut b = Bundle::create(&dir, &cfg).unwrap();
        b.write_constants(&[("eps".into(), "3".into())]).unwrap();
        b.write_text("constants.txt", "eps=4\n").unwrap();
        assert_eq!(b.artifacts().len(), 2);
        assert_eq!(
            fs::read_to_string(dir.join("constants.txt")).unwrap(),
            "eps=4\n"
        );
        fs::remove_dir_all(&dir).unwrap();
    }
}
