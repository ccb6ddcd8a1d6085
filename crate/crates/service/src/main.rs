use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sei_service::{serve, AppState, ServiceConfig};
use tracing_subscriber::EnvFilter;

/// HTTP service for the Science Evidence Indicator.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// TOML config file. `SEI_*` environment variables override it.
    #[arg(long, env = "SEI_CONFIG")]
    config: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let args = Args::parse();

    let config = match ServiceConfig::load(args.config.as_deref(), std::env::vars()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sei-service: {e}");
            return ExitCode::from(2);
        }
    };
    let state = match AppState::from_config(&config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("sei-service: {e}");
            return ExitCode::from(2);
        }
    };
    let listener = match tokio::net::TcpListener::bind(config.listen).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("sei-service: cannot bind {}: {e}", config.listen);
            return ExitCode::from(2);
        }
    };
    match listener.local_addr() {
        Ok(addr) => tracing::info!(%addr, "listening"),
        Err(_) => tracing::info!("listening"),
    }
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = serve(listener, state, shutdown).await {
        eprintln!("sei-service: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
