use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sei_cli::{read_rows, render_table, score_rows};
use sei_gateway::{build_provider, draft_assessment_from_doi, GatewayError, ProviderConfig};
use sei_registry::{demo_registry, load_registry, LoadError, Registry};

/// Science Evidence Indicator tools.
#[derive(Parser)]
#[command(name = "sei", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a CSV batch of sources.
    Score {
        /// Registry CSV; the bundled demo registry when omitted.
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Input CSV with header `channel,method,h_indices,remarks`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Registry maintenance.
    Registry {
        #[command(subcommand)]
        command: RegistryCommand,
    },
    /// Draft an assessment from publication metadata.
    Draft {
        #[arg(long)]
        doi: String,
        #[arg(long, value_enum)]
        provider: ProviderArg,
        /// Directory with `publications/` and `authors/` documents.
        #[arg(long, env = "SEI_FIXTURE_ROOT")]
        fixture_root: Option<PathBuf>,
        /// Base URL of the metadata service.
        #[arg(long, env = "SEI_PROVIDER_BASE_URL")]
        base_url: Option<String>,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum RegistryCommand {
    /// Validate a registry file.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Fixture,
    Http,
}

enum Failure {
    /// Some input was processed and rejected.
    Rows,
    /// The command could not run at all.
    Environment(String),
}

fn open_registry(path: Option<&Path>) -> Result<Registry, Failure> {
    let Some(path) = path else {
        return Ok(demo_registry());
    };
    let file = File::open(path)
        .map_err(|e| Failure::Environment(format!("cannot read {}: {e}", path.display())))?;
    load_registry(file).map_err(|e| match e {
        LoadError::Io(e) => Failure::Environment(format!("cannot read {}: {e}", path.display())),
        invalid => Failure::Environment(format!("{}: {invalid}", path.display())),
    })
}

fn print(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Environment(format!("cannot write output: {e}")))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn score(registry: Option<&Path>, input: &Path, format: Format) -> Result<(), Failure> {
    let registry = open_registry(registry)?;
    let file = File::open(input)
        .map_err(|e| Failure::Environment(format!("cannot read {}: {e}", input.display())))?;
    let rows = read_rows(file).map_err(|e| Failure::Environment(format!("{}: {e}", input.display())))?;
    let report = score_rows(&rows, &registry);
    print(&match format {
        Format::Table => render_table(&report),
        Format::Json => to_json(&report),
    })?;
    if report.all_valid() {
        Ok(())
    } else {
        Err(Failure::Rows)
    }
}

fn registry_check(path: &Path) -> Result<(), Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::Environment(format!("cannot read {}: {e}", path.display())))?;
    match load_registry(file) {
        Ok(r) => print(&format!("OK, {} channels\n", r.len())),
        Err(LoadError::Io(e)) => Err(Failure::Environment(format!("cannot read {}: {e}", path.display()))),
        Err(LoadError::Invalid(diags)) => {
            let mut text = String::new();
            for d in &diags {
                text.push_str(&format!("{}:{d}\n", path.display()));
            }
            text.push_str(&format!("{} problem(s)\n", diags.len()));
            print(&text)?;
            Err(Failure::Rows)
        }
    }
}

async fn draft(
    doi: &str,
    provider: ProviderArg,
    fixture_root: Option<PathBuf>,
    base_url: Option<String>,
    registry: Option<&Path>,
    format: Format,
) -> Result<(), Failure> {
    let registry = open_registry(registry)?;
    let config = match provider {
        ProviderArg::Fixture => {
            let root = fixture_root
                .ok_or_else(|| Failure::Environment("--fixture-root is required for the fixture provider".into()))?;
            ProviderConfig::fixture(root)
        }
        ProviderArg::Http => {
            let url = base_url
                .ok_or_else(|| Failure::Environment("--base-url is required for the http provider".into()))?;
            ProviderConfig::http(url)
        }
    };
    let provider = build_provider(&config).map_err(|e| Failure::Environment(e.to_string()))?;
    let outcome = match draft_assessment_from_doi(provider.as_ref(), &registry, doi).await {
        Ok(o) => o,
        Err(e @ (GatewayError::InvalidDoi(_) | GatewayError::NotFound(_))) => {
            eprintln!("sei: {e}");
            return Err(Failure::Rows);
        }
        Err(e) => return Err(Failure::Environment(e.to_string())),
    };
    print(&match format {
        Format::Json => to_json(&outcome),
        Format::Table => {
            let d = &outcome.derived;
            let review: Vec<String> = outcome
                .needs_review
                .iter()
                .map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default())
                .collect();
            format!(
                "doi          {doi}\nchannel      {} (bfi {})\nmethod rank  {}\nteam max h   {}\nevidence     {}\nneeds review {}\n",
                outcome.channel.matched_name.as_deref().unwrap_or("-"),
                outcome.channel.bfi.value(),
                outcome.draft.method_rank.map_or("-".into(), |r| r.to_string()),
                d.team_max_h.map_or("-".into(), |h| h.to_string()),
                d.evidence.map_or("-", |e| e.as_str()),
                if review.is_empty() { "-".into() } else { review.join(", ") },
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Score { registry, input, format } => score(registry.as_deref(), &input, format),
        Command::Registry {
            command: RegistryCommand::Check { file },
        } => registry_check(&file),
        Command::Draft {
            doi,
            provider,
            fixture_root,
            base_url,
            registry,
            format,
        } => match tokio::runtime::Builder::new_current_thread().enable_all().build() {
            Ok(rt) => rt.block_on(draft(&doi, provider, fixture_root, base_url, registry.as_deref(), format)),
            Err(e) => Err(Failure::Environment(format!("cannot start runtime: {e}"))),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rows) => ExitCode::from(1),
        Err(Failure::Environment(message)) => {
            eprintln!("sei: {message}");
            ExitCode::from(2)
        }
    }
}
