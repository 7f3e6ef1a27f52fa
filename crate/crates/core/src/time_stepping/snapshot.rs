use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::spatial_fem::GridFunction;

use super::solver::{TimeGrid, Trajectory};

/// One stored time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: usize,
    pub t: f64,
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    grid: TimeGrid,
    every: usize,
    snapshots: Vec<Snapshot>,
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

impl Trajectory {
    /// Levels `0, k, 2k, …` plus the final level.
    pub fn snapshots(&self, every: usize) -> Result<Vec<Snapshot>> {
        if every == 0 {
            return Err(param("every", "snapshot stride must be positive"));
        }
        let last = self.len() - 1;
        Ok((0..=last)
            .filter(|n| n % every == 0 || *n == last)
            .map(|n| Snapshot {
                n,
                t: self.grid.time(n),
                values: self.states[n].values.clone(),
            })
            .collect())
    }

    /// Rebuilds a trajectory from a complete (stride 1) snapshot list.
    pub fn from_snapshots(grid: TimeGrid, snapshots: &[Snapshot]) -> Result<Self> {
        if snapshots.len() != grid.steps + 1 || snapshots.iter().enumerate().any(|(i, s)| s.n != i) {
            return Err(param("snapshots", "need every level 0..=N in order"));
        }
        Ok(Self {
            grid,
            states: snapshots.iter().map(|s| GridFunction::new(s.values.clone())).collect(),
        })
    }
}

pub fn write_snapshots(trajectory: &Trajectory, every: usize, path: &Path) -> Result<()> {
    let file = SnapshotFile {
        grid: trajectory.grid,
        every,
        snapshots: trajectory.snapshots(every)?,
    };
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?);
    serde_json::to_writer(&mut w, &file)?;
    w.flush().map_err(|e| io_error(path, e))
}

/// Returns the grid, the stride and the stored levels.
pub fn read_snapshots(path: &Path) -> Result<(TimeGrid, usize, Vec<Snapshot>)> {
    let r = BufReader::new(File::open(path).map_err(|e| io_error(path, e))?);
    let file: SnapshotFile = serde_json::from_reader(r)?;
    Ok((file.grid, file.every, file.snapshots))
}
