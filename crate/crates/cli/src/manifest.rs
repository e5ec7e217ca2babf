use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context as _;
use serde::Serialize;

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config_path: Option<PathBuf>,
    pub table_path: Option<PathBuf>,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
    pub started_at: String,
    pub wall_clock_s: f64,
    /// Every parameter the results depend on, after defaults are applied.
    pub parameters: serde_json::Value,
}

/// Output directory plus the manifest that will describe what was written.
pub struct Run {
    dir: PathBuf,
    manifest: RunManifest,
    clock: Instant,
}

impl Run {
    pub fn start(dir: &Path, subcommand: &str, config_path: Option<&Path>, seed: u64) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                tool: "fhaci",
                version: env!("CARGO_PKG_VERSION"),
                subcommand: subcommand.to_string(),
                config_path: config_path.map(Path::to_path_buf),
                table_path: None,
                seed,
                outputs: Vec::new(),
                started_at: chrono::Utc::now().to_rfc3339(),
                wall_clock_s: 0.0,
                parameters: serde_json::Value::Null,
            },
            clock: Instant::now(),
        })
    }

    pub fn manifest_name(&self) -> String {
        format!("{}.manifest.json", self.manifest.subcommand)
    }

    /// Lists a file written by other means among the outputs.
    pub fn record(&mut self, path: &Path) {
        self.manifest.outputs.push(path.to_path_buf());
    }

    pub fn set_table(&mut self, path: &Path) {
        self.manifest.table_path = Some(path.to_path_buf());
    }

    pub fn set_parameters(&mut self, params: impl Serialize) -> anyhow::Result<()> {
        self.manifest.parameters = serde_json::to_value(params)?;
        Ok(())
    }

    fn output(&mut self, name: &str) -> anyhow::Result<(PathBuf, File)> {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.manifest.outputs.push(path.clone());
        Ok((path, file))
    }

    /// CSV writer whose first line names the schema and the manifest.
    pub fn csv(&mut self, name: &str, schema: &str) -> anyhow::Result<csv::Writer<BufWriter<File>>> {
        let manifest = self.manifest_name();
        let (_, file) = self.output(name)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "# schema={schema} manifest={manifest}")?;
        Ok(csv::Writer::from_writer(w))
    }

    /// Writes `value` as pretty JSON with a `manifest` field added.
    pub fn json(&mut self, name: &str, value: impl Serialize) -> anyhow::Result<serde_json::Value> {
        let mut v = serde_json::to_value(value)?;
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("manifest".into(), self.manifest_name().into());
        }
        let (path, file) = self.output(name)?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, &v)?;
        writeln!(w).with_context(|| format!("writing {}", path.display()))?;
        Ok(v)
    }

    pub fn finish(mut self) -> anyhow::Result<RunManifest> {
        self.manifest.wall_clock_s = self.clock.elapsed().as_secs_f64();
        let path = self.dir.join(self.manifest_name());
        let text = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(self.manifest)
    }
}
