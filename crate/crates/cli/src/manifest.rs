use std::fmt::Write as _;
use std::path::PathBuf;

use algostat::MachineConfig;

/// What a run was asked to do and everything it wrote.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config: MachineConfig,
    pub command: Vec<String>,
    pub outputs: Vec<PathBuf>,
    pub calibration_version: u32,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "machine_id={}", self.config.machine_id);
        let _ = writeln!(s, "L={}", self.config.max_prog_len);
        let _ = writeln!(s, "T={}", self.config.step_budget);
        let _ = writeln!(s, "N={}", self.config.cond_universe);
        let _ = writeln!(s, "calibration_version={}", self.calibration_version);
        let _ = writeln!(s, "command={}", self.command.join(" "));
        for o in &self.outputs {
            let _ = writeln!(s, "output={}", o.display());
        }
        s
    }
}
