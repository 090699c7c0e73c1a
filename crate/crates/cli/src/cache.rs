//! Reference solutions shared across runs, in memory and optionally on disk.
//!
//! A reference depends on the equation and the grid (`N`) plus the
//! remaining problem parameters; all of them go into the key, which is
//! stored in the file and checked on load.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use sponge_core::diagnostics::metrics::Trajectory;
use sponge_core::diagnostics::reference::{reference_solution, PistonProblem, Reference};

use crate::config::{equation_name, reconstruction_name};
use crate::error::CliError;

const MAGIC: &[u8; 12] = b"SPONGEREF01\n";

pub fn cache_key(p: &PistonProblem) -> String {
    format!(
        "{}|n={}|gamma={:?}|amplitude={:?}|wavelength={:?}|x_start={:?}|t_final={:?}|cadence={:?}|courant={:?}|{}",
        equation_name(p.kind),
        p.cells_per_wavelength,
        p.gamma,
        p.amplitude,
        p.wavelength,
        p.x_start,
        p.t_final,
        p.cadence,
        p.courant,
        reconstruction_name(p.reconstruction),
    )
}

fn file_name(p: &PistonProblem, key: &str) -> String {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    format!(
        "reference-{}-n{}-{:016x}.bin",
        equation_name(p.kind),
        p.cells_per_wavelength,
        h.finish()
    )
}

#[derive(Default)]
pub struct ReferenceCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, Arc<Reference>>>,
    computed: Mutex<usize>,
}

impl ReferenceCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            ..Default::default()
        }
    }

    /// Number of references computed (not loaded) by this cache.
    pub fn computed(&self) -> usize {
        *self.computed.lock().unwrap()
    }

    pub fn get(&self, problem: &PistonProblem) -> Result<Arc<Reference>, CliError> {
        let key = cache_key(problem);
        if let Some(r) = self.memory.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let path = self.dir.as_ref().map(|d| d.join(file_name(problem, &key)));
        let loaded = path.as_deref().and_then(|p| load(p, &key).ok());
        let reference = match loaded {
            Some(r) => r,
            None => {
                let r = reference_solution(problem)?;
                *self.computed.lock().unwrap() += 1;
                if let Some(p) = &path {
                    store(p, &key, &r)?;
                }
                r
            }
        };
        let reference = Arc::new(reference);
        self.memory.lock().unwrap().insert(key, reference.clone());
        Ok(reference)
    }
}

fn put_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn put_f64(w: &mut impl Write, v: f64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn get_u64(r: &mut impl Read) -> std::io::Result<u64> {
    let mut b = [0; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_f64(r: &mut impl Read) -> std::io::Result<f64> {
    let mut b = [0; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn store(path: &Path, key: &str, r: &Reference) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // write next to the target and rename, so readers never see a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        w.write_all(MAGIC)?;
        put_u64(&mut w, key.len() as u64)?;
        w.write_all(key.as_bytes())?;
        let t = &r.trajectory;
        put_f64(&mut w, t.dx)?;
        put_u64(&mut w, r.total_cells as u64)?;
        put_f64(&mut w, r.max_speed)?;
        put_u64(&mut w, t.times.len() as u64)?;
        put_u64(&mut w, t.cells() as u64)?;
        for &time in &t.times {
            put_f64(&mut w, time)?;
        }
        for row in &t.velocity {
            for &v in row {
                put_f64(&mut w, v)?;
            }
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn load(path: &Path, key: &str) -> std::io::Result<Reference> {
    let bad = |m: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, m.to_string());
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut magic = [0; 12];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not a reference file"));
    }
    let len = get_u64(&mut r)? as usize;
    if len != key.len() {
        return Err(bad("key mismatch"));
    }
    let mut stored = vec![0; len];
    r.read_exact(&mut stored)?;
    if stored != key.as_bytes() {
        return Err(bad("key mismatch"));
    }
    let dx = get_f64(&mut r)?;
    let total_cells = get_u64(&mut r)? as usize;
    let max_speed = get_f64(&mut r)?;
    let frames = get_u64(&mut r)? as usize;
    let cells = get_u64(&mut r)? as usize;
    let mut trajectory = Trajectory::new(dx);
    let times = (0..frames)
        .map(|_| get_f64(&mut r))
        .collect::<std::io::Result<Vec<_>>>()?;
    for time in times {
        let row = (0..cells)
            .map(|_| get_f64(&mut r))
            .collect::<std::io::Result<Vec<_>>>()?;
        trajectory.push(time, row);
    }
    if r.read(&mut [0])? != 0 {
        return Err(bad("trailing bytes"));
    }
    Ok(Reference {
        trajectory,
        total_cells,
        max_speed,
    })
}
