//! Service configuration: one TOML file plus `SEI_*` environment overrides.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use sei_gateway::{ProviderConfig, ProviderKind};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid value for {var}: {message}")]
    Env { var: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    #[serde(default = "default_listen")]
    pub listen: SocketAddr,
    /// Registry CSV. The bundled demo registry is used when unset.
    #[serde(default)]
    pub registry_path: Option<PathBuf>,
    #[serde(default = "default_store_path")]
    pub store_path: PathBuf,
    /// Metadata provider for automated drafts. Drafting is disabled when unset.
    #[serde(default)]
    pub provider: Option<ProviderConfig>,
    #[serde(default = "default_locale")]
    pub locale: String,
    /// Replacement copy keyed by string id.
    #[serde(default)]
    pub strings: HashMap<String, String>,
    /// URLs for the expanded card's link slots, keyed by slot.
    #[serde(default)]
    pub links: BTreeMap<String, String>,
    /// fsync after every store append.
    #[serde(default = "default_true")]
    pub store_sync: bool,
}

fn default_listen() -> SocketAddr {
    "127.0.0.1:8080".parse().unwrap()
}

fn default_store_path() -> PathBuf {
    PathBuf::from("sei-store.jsonl")
}

fn default_locale() -> String {
    "en".into()
}

fn default_true() -> bool {
    true
}

impl Default for ServiceConfig {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

/// Link slots shown on the expanded card, in order.
pub const LINK_SLOTS: [&str; 2] = ["evidence", "indicator"];

impl ServiceConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` (if given), then applies overrides from `env`.
    pub fn load<I>(path: Option<&Path>, env: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                Self::from_toml(&text)?
            }
            None => Self::default(),
        };
        config.apply_env(env)?;
        config.check()?;
        Ok(config)
    }

    pub fn apply_env<I>(&mut self, env: I) -> Result<(), ConfigError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        fn parse<T: std::str::FromStr>(var: &str, v: &str) -> Result<T, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            v.parse().map_err(|e: T::Err| ConfigError::Env {
                var: var.into(),
                message: e.to_string(),
            })
        }

        for (var, value) in env {
            let Some(key) = var.strip_prefix("SEI_") else {
                continue;
            };
            match key {
                "LISTEN" => self.listen = parse(&var, &value)?,
                "REGISTRY_PATH" => self.registry_path = Some(value.into()),
                "STORE_PATH" => self.store_path = value.into(),
                "STORE_SYNC" => self.store_sync = parse(&var, &value)?,
                "LOCALE" => self.locale = value,
                "PROVIDER_KIND" => {
                    let kind = match value.as_str() {
                        "fixture" => ProviderKind::Fixture,
                        "http" => ProviderKind::Http,
                        other => {
                            return Err(ConfigError::Env {
                                var,
                                message: format!("expected fixture or http, got `{other}`"),
                            })
                        }
                    };
                    self.provider_mut().kind = kind;
                }
                "PROVIDER_BASE_URL" => self.provider_mut().base_url = Some(value),
                "PROVIDER_FIXTURE_ROOT" => self.provider_mut().fixture_root = Some(value.into()),
                "PROVIDER_TIMEOUT_MS" => self.provider_mut().timeout_ms = parse(&var, &value)?,
                "PROVIDER_MAX_RETRIES" => self.provider_mut().max_retries = parse(&var, &value)?,
                "PROVIDER_BACKOFF_BASE_MS" => {
                    self.provider_mut().backoff_base_ms = parse(&var, &value)?
                }
                "PROVIDER_CACHE_TTL_SECS" => {
                    self.provider_mut().cache_ttl_secs = parse(&var, &value)?
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn provider_mut(&mut self) -> &mut ProviderConfig {
        self.provider.get_or_insert_with(|| ProviderConfig {
            base_url: None,
            ..ProviderConfig::http("")
        })
    }

    fn check(&self) -> Result<(), ConfigError> {
        if let Some(p) = &self.provider {
            p.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(k) = self.links.keys().find(|k| !LINK_SLOTS.contains(&k.as_str())) {
            return Err(ConfigError::Invalid(format!(
                "unknown link slot `{k}`; expected one of {LINK_SLOTS:?}"
            )));
        }
        Ok(())
    }

    pub fn link_slots(&self) -> Vec<(String, Option<String>)> {
        LINK_SLOTS
            .iter()
            .map(|k| ((*k).to_owned(), self.links.get(*k).cloned()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| ((*k).into(), (*v).into())).collect()
    }

    #[test]
    fn file_then_env() {
        let dir = std::env::temp_dir().join(format!("sei-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sei.toml");
        std::fs::write(
            &path,
            r#"
listen = "127.0.0.1:9000"
store_path = "/var/lib/sei/store.jsonl"

[provider]
kind = "fixture"
fixture_root = "/srv/fixtures"

[links]
evidence = "https://example.org/evidence"
"#,
        )
        .unwrap();
        let c = ServiceConfig::load(
            Some(&path),
            env(&[("SEI_LISTEN", "0.0.0.0:7000"), ("SEI_PROVIDER_MAX_RETRIES", "5"), ("PATH", "/bin")]),
        )
        .unwrap();
        assert_eq!(c.listen, "0.0.0.0:7000".parse().unwrap());
        assert_eq!(c.store_path, PathBuf::from("/var/lib/sei/store.jsonl"));
        let p = c.provider.as_ref().unwrap();
        assert_eq!((p.kind, p.max_retries), (ProviderKind::Fixture, 5));
        assert_eq!(
            c.link_slots(),
            vec![
                ("evidence".into(), Some("https://example.org/evidence".into())),
                ("indicator".into(), None)
            ]
        );
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn env_alone_can_configure_a_provider() {
        let c = ServiceConfig::load(
            None,
            env(&[("SEI_PROVIDER_KIND", "http"), ("SEI_PROVIDER_BASE_URL", "http://localhost:1")]),
        )
        .unwrap();
        assert_eq!(c.provider.unwrap().base_url.as_deref(), Some("http://localhost:1"));
        assert!(ServiceConfig::load(None, env(&[("SEI_PROVIDER_KIND", "http")])).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ServiceConfig::from_toml("listen = 5").is_err());
        assert!(ServiceConfig::from_toml("colour = \"blue\"").is_err());
        assert!(ServiceConfig::load(None, env(&[("SEI_LISTEN", "nowhere")])).is_err());
        let mut c = ServiceConfig::default();
        c.links.insert("elsewhere".into(), "https://x".into());
        assert!(c.check().is_err());
    }

    #[test]
    fn defaults() {
        let c = ServiceConfig::default();
        assert_eq!(c.listen.port(), 8080);
        assert!(c.provider.is_none() && c.registry_path.is_none() && c.store_sync);
    }
}
