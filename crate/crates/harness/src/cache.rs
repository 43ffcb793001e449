//! Zero cache: an in-memory set, optionally backed by a zero-table file,
//! grown by computation whenever a task needs more height.

use std::path::Path;

use log::info;
use zerolab_core::zeta::{find_zeros, load_zeros, store_zeros, ZeroSet, MAX_HEIGHT, MIN_HEIGHT};
use zerolab_core::Error as CoreError;

use crate::config::ZeroSourceConfig;
use crate::error::{HarnessError, Result};

/// Heights are rounded up to a multiple of this before computing.
const HEIGHT_STEP: f64 = 100.0;

#[derive(Debug)]
pub struct ZeroCache {
    source: ZeroSourceConfig,
    set: Option<ZeroSet>,
}

fn round_up(h: f64) -> f64 {
    ((h / HEIGHT_STEP).ceil() * HEIGHT_STEP).min(MAX_HEIGHT)
}

impl ZeroCache {
    pub fn new(source: ZeroSourceConfig) -> Self {
        ZeroCache { source, set: None }
    }

    /// A cache over an existing set that never touches the disk.
    pub fn from_set(set: ZeroSet) -> Self {
        ZeroCache {
            source: ZeroSourceConfig::Compute,
            set: Some(set),
        }
    }

    fn load(&mut self) -> Result<()> {
        if self.set.is_some() {
            return Ok(());
        }
        if let ZeroSourceConfig::File(path) = &self.source {
            if path.exists() {
                let set = load_zeros(path).map_err(|e| match e {
                    CoreError::Io(io) => HarnessError::io(path, io),
                    other => HarnessError::Core(other),
                })?;
                info!(
                    "loaded {} zeros complete to {} from {}",
                    set.len(),
                    set.complete_to(),
                    path.display()
                );
                self.set = Some(set);
            }
        }
        Ok(())
    }

    fn persist(&self) -> Result<()> {
        if let (ZeroSourceConfig::File(path), Some(set)) = (&self.source, &self.set) {
            write_table(set, path)?;
        }
        Ok(())
    }

    /// The cached set, extended so it is complete to at least `height`.
    pub fn ensure(&mut self, height: f64) -> Result<&ZeroSet> {
        self.load()?;
        let have = self.set.as_ref().map_or(f64::NEG_INFINITY, ZeroSet::complete_to);
        if have < height {
            if height > MAX_HEIGHT {
                return Err(CoreError::Coverage {
                    needed: height,
                    have: have.max(0.0),
                }
                .into());
            }
            let target = round_up(height.max(MIN_HEIGHT));
            let extended = match &self.set {
                None => find_zeros(MIN_HEIGHT, target)?,
                Some(set) => {
                    let from = set.complete_to().max(MIN_HEIGHT);
                    set.extended_with(&find_zeros(from, target)?)?
                }
            };
            info!("zero cache extended to {target} ({} zeros)", extended.len());
            self.set = Some(extended);
            self.persist()?;
        }
        Ok(self.set.as_ref().expect("set present after ensure"))
    }

    /// Runs `f`, growing the cache and retrying when it reports missing
    /// coverage above the current height.
    pub fn with_zeros<T>(&mut self, min_height: f64, f: impl Fn(&ZeroSet) -> zerolab_core::Result<T>) -> Result<T> {
        let mut height = min_height;
        for _ in 0..6 {
            let set = self.ensure(height)?;
            match f(set) {
                Err(CoreError::Coverage { needed, have }) if needed > have && needed <= MAX_HEIGHT => {
                    height = needed + 1.0;
                }
                other => return Ok(other?),
            }
        }
        let set = self.ensure(height)?;
        Ok(f(set)?)
    }
}

pub fn write_table(set: &ZeroSet, path: &Path) -> Result<()> {
    store_zeros(set, path).map_err(|e| match e {
        CoreError::Io(io) => HarnessError::io(path, io),
        other => HarnessError::Core(other),
    })
}
