use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

/// Record of one command run, written as `key=value` lines.
///
/// Timings and memory vary between runs, so the manifest is kept apart from
/// the deterministic outputs.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub command: String,
    /// `(name, path)`; the path is `embedded` for built-in resources.
    pub resources: Vec<(String, String)>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Wall-clock time per stage, in run order.
    pub stages: Vec<(String, Duration)>,
    /// Extra counters such as `articles=6`.
    pub counters: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn resource(&mut self, name: &str, path: Option<&Path>) {
        let shown = path.map_or_else(|| "embedded".to_string(), |p| p.display().to_string());
        self.resources.push((name.to_string(), shown));
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.display().to_string());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn counter(&mut self, key: &str, value: impl ToString) {
        self.counters.push((key.to_string(), value.to_string()));
    }

    /// Runs `f` and records its duration under `name`.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages.push((name.to_string(), start.elapsed()));
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command={}\n", self.command);
        for (name, path) in &self.resources {
            let _ = writeln!(out, "resource.{name}={path}");
        }
        for (i, p) in self.inputs.iter().enumerate() {
            let _ = writeln!(out, "input.{i}={p}");
        }
        for (i, p) in self.outputs.iter().enumerate() {
            let _ = writeln!(out, "output.{i}={p}");
        }
        for (name, d) in &self.stages {
            let _ = writeln!(out, "time.{name}_ms={:.3}", d.as_secs_f64() * 1e3);
        }
        for (k, v) in &self.counters {
            let _ = writeln!(out, "{k}={v}");
        }
        match peak_memory_kb() {
            Some(kb) => {
                let _ = writeln!(out, "peak_memory_kb={kb}");
            }
            None => out.push_str("peak_memory_kb=unknown\n"),
        }
        out
    }
}

/// Peak resident set size of this process (`VmHWM`), where the platform
/// reports it.
pub fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}
