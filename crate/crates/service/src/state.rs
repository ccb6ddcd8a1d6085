use std::path::PathBuf;
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use sei_gateway::{build_provider, MetadataProvider};
use sei_registry::{demo_registry, load_registry, LoadError, Registry};
use sei_store::{Store, StoreError, StoreOptions};

use crate::config::ServiceConfig;
use crate::copy::StringTable;

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error("cannot load registry {path}: {source}")]
    Registry { path: PathBuf, source: LoadError },
    #[error("cannot open store {path}: {source}")]
    Store { path: PathBuf, source: StoreError },
    #[error("provider: {0}")]
    Provider(#[from] sei_gateway::GatewayError),
    #[error("strings: {0}")]
    Strings(String),
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Shared>,
}

struct Shared {
    registry: RwLock<Arc<Registry>>,
    registry_path: Option<PathBuf>,
    store: RwLock<Store>,
    provider: Option<Arc<dyn MetadataProvider>>,
    copy: StringTable,
    links: Vec<(String, Option<String>)>,
}

fn read_registry(path: &PathBuf) -> Result<Registry, StartupError> {
    let wrap = |source| StartupError::Registry {
        path: path.clone(),
        source,
    };
    let file = std::fs::File::open(path).map_err(|e| wrap(LoadError::Io(e)))?;
    load_registry(file).map_err(wrap)
}

impl AppState {
    pub fn from_config(config: &ServiceConfig) -> Result<Self, StartupError> {
        let registry = match &config.registry_path {
            Some(p) => read_registry(p)?,
            None => demo_registry(),
        };
        let (store, report) = Store::open_with(
            &config.store_path,
            StoreOptions {
                sync: config.store_sync,
            },
        )
        .map_err(|source| StartupError::Store {
            path: config.store_path.clone(),
            source,
        })?;
        tracing::info!(records = report.records, truncated = report.truncated_bytes, "store opened");
        let provider = config.provider.as_ref().map(build_provider).transpose()?;
        let copy = StringTable::for_locale(&config.locale, &config.strings)
            .map_err(StartupError::Strings)?;
        Ok(Self::new(
            registry,
            config.registry_path.clone(),
            store,
            provider,
            copy,
            config.link_slots(),
        ))
    }

    pub fn new(
        registry: Registry,
        registry_path: Option<PathBuf>,
        store: Store,
        provider: Option<Arc<dyn MetadataProvider>>,
        copy: StringTable,
        links: Vec<(String, Option<String>)>,
    ) -> Self {
        AppState {
            inner: Arc::new(Shared {
                registry: RwLock::new(Arc::new(registry)),
                registry_path,
                store: RwLock::new(store),
                provider,
                copy,
                links,
            }),
        }
    }

    /// The current registry snapshot.
    pub fn registry(&self) -> Arc<Registry> {
        self.inner
            .registry
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .clone()
    }

    /// Re-reads the registry file and swaps it in. In-flight requests keep
    /// the snapshot they started with.
    pub fn reload_registry(&self) -> Result<Arc<Registry>, StartupError> {
        let Some(path) = &self.inner.registry_path else {
            return Ok(self.registry());
        };
        let fresh = Arc::new(read_registry(path)?);
        *self.inner.registry.write().unwrap_or_else(|e| e.into_inner()) = fresh.clone();
        Ok(fresh)
    }

    pub fn has_registry_file(&self) -> bool {
        self.inner.registry_path.is_some()
    }

    pub fn store(&self) -> RwLockReadGuard<'_, Store> {
        self.inner.store.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn store_mut(&self) -> RwLockWriteGuard<'_, Store> {
        self.inner.store.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn provider(&self) -> Option<&Arc<dyn MetadataProvider>> {
        self.inner.provider.as_ref()
    }

    pub fn copy(&self) -> &StringTable {
        &self.inner.copy
    }

    pub fn links(&self) -> &[(String, Option<String>)] {
        &self.inner.links
    }
}
