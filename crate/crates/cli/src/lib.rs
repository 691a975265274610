//! The `jamfield` command: run configs and recipes, list recipes,
//! validate configs. Artifacts are rendered in memory first and only
//! then written, each through a temp file and a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use jamfield::runner::{Artifact, Plan, RecipeId, RunConfig, RunError};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const THREADS_ENV: &str = "JAMFIELD_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "jamfield",
    version,
    about = "Ultrasonic jammer field and effectiveness simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a JSON config or a named recipe and write its artifacts.
    #[command(group(ArgGroup::new("input").required(true).args(["config", "recipe"])))]
    Run {
        /// Path to a JSON run config.
        config: Option<PathBuf>,
        /// Run a named recipe instead of a config file.
        #[arg(long)]
        recipe: Option<RecipeId>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory the artifact paths are relative to.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Worker threads (0 = all cores). Falls back to JAMFIELD_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the named recipes.
    Recipes {
        #[arg(long, conflicts_with = "show")]
        json: bool,
        /// Print the full config a recipe expands to.
        #[arg(long, value_name = "RECIPE")]
        show: Option<RecipeId>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Schema(m) => CliError::Config(m),
            RunError::Domain(e) => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtifactEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Written next to the artifacts of every successful run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub jamfield_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipe: Option<String>,
    pub seed: u64,
    /// SHA-256 of the fully expanded config, seed included.
    pub inputs_sha256: String,
    pub artifacts: Vec<ArtifactEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    Ok(RunConfig::from_json(&text)?)
}

/// The concrete config a plan came from, used for the inputs hash.
fn expanded_config(config: &RunConfig, plan: &Plan) -> Result<RunConfig, CliError> {
    let outputs = match plan.recipe {
        Some(id) => id.config()?.outputs,
        None => config.outputs.clone(),
    };
    Ok(RunConfig {
        scenario: Some(plan.scenario.clone()),
        outputs,
        recipe: plan.recipe,
        seed: Some(plan.seed),
    })
}

pub fn build_manifest(config: &RunConfig, plan: &Plan, artifacts: &[Artifact]) -> Result<Manifest, CliError> {
    let inputs = expanded_config(config, plan)?.to_json();
    Ok(Manifest {
        jamfield_version: jamfield::VERSION.to_string(),
        recipe: plan.recipe.map(|r| r.to_string()),
        seed: plan.seed,
        inputs_sha256: sha256_hex(inputs.as_bytes()),
        artifacts: artifacts
            .iter()
            .map(|a| ArtifactEntry {
                path: a.path.clone(),
                bytes: a.bytes.len(),
                sha256: sha256_hex(&a.bytes),
            })
            .collect(),
    })
}

fn temp_name(target: &Path) -> PathBuf {
    let name = target.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
    target.with_file_name(format!(".{name}.{}.tmp", std::process::id()))
}

/// Writes every file to a temp name, then renames them all into place.
/// On failure the temp files are removed and no target is touched.
pub fn write_atomically(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<(), CliError> {
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
    let result = (|| {
        for (rel, bytes) in files {
            let target = dir.join(rel);
            if let Some(parent) = target.parent() {
                fs::create_dir_all(parent).map_err(|e| CliError::io(format!("creating {}", parent.display()), e))?;
            }
            let tmp = temp_name(&target);
            let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(format!("writing {}", tmp.display()), e))?;
            staged.push((tmp.clone(), target));
            f.write_all(bytes)
                .and_then(|_| f.sync_all())
                .map_err(|e| CliError::io(format!("writing {}", tmp.display()), e))?;
        }
        Ok(())
    })();
    if let Err(e) = result {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
        return Err(e);
    }
    for (tmp, target) in &staged {
        fs::rename(tmp, target).map_err(|e| CliError::io(format!("renaming to {}", target.display()), e))?;
    }
    Ok(())
}

fn thread_count(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{THREADS_ENV}: `{v}` is not a thread count"))),
        _ => Ok(0),
    }
}

/// Plans, renders and writes a run. Returns the manifest.
pub fn run(config: RunConfig, seed: Option<u64>, out_dir: &Path, threads: Option<usize>) -> Result<Manifest, CliError> {
    let threads = thread_count(threads)?;
    let plan = Plan::from_config(config.clone(), seed)?;
    if plan.outputs.iter().any(|o| o.path == MANIFEST_NAME) {
        return Err(CliError::Config(format!(
            "outputs: `{MANIFEST_NAME}` is reserved for the run manifest"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
    let artifacts = pool.install(|| plan.execute())?;
    let manifest = build_manifest(&config, &plan, &artifacts)?;
    let mut files: Vec<(String, Vec<u8>)> = artifacts.into_iter().map(|a| (a.path, a.bytes)).collect();
    let mut m = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    m.push(b'\n');
    files.push((MANIFEST_NAME.to_string(), m));
    write_atomically(out_dir, &files)?;
    Ok(manifest)
}

pub fn recipes_text(json: bool) -> Result<String, CliError> {
    let infos = RecipeId::ALL
        .into_iter()
        .map(|r| r.info())
        .collect::<Result<Vec<_>, _>>()?;
    if json {
        return Ok(serde_json::to_string_pretty(&infos).expect("recipes serialize") + "\n");
    }
    let mut out = String::new();
    for i in infos {
        out.push_str(&format!(
            "{:<6}  {}\n        -> {}\n",
            i.id,
            i.description,
            i.artifacts.join(", ")
        ));
    }
    Ok(out)
}

/// Runs a parsed command, printing to stdout. Errors are left to the caller.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            recipe,
            seed,
            out_dir,
            threads,
        } => {
            let config = match (config, recipe) {
                (_, Some(id)) => RunConfig {
                    recipe: Some(id),
                    ..RunConfig::default()
                },
                (Some(path), None) => read_config(&path)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let manifest = run(config, seed, &out_dir, threads)?;
            for a in &manifest.artifacts {
                println!("{}  {}", a.sha256, out_dir.join(&a.path).display());
            }
            println!("wrote {}", out_dir.join(MANIFEST_NAME).display());
        }
        Command::Recipes { show: Some(id), .. } => println!("{}", id.config()?.to_json()),
        Command::Recipes { json, show: None } => print!("{}", recipes_text(json)?),
        Command::Validate { config } => {
            let plan = Plan::from_config(read_config(&config)?, None)?;
            println!("ok: {} outputs, seed {}", plan.outputs.len(), plan.seed);
        }
    }
    Ok(())
}
