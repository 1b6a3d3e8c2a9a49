//! Optional on-disk memo of boundary blocks.
//!
//! Set `WEILBUND_CACHE` to a directory; each block is stored as a triplet
//! list under the SHA-256 of a description of everything it depends on.
//! Unreadable or stale entries are rebuilt, and write failures are ignored.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Scalars, SignMode};
use crate::linalg::{SparseMatrix, Triplet};
use crate::poisson::PoissonStructure;
use crate::rational::format_rational;
use crate::ring::Rationals;

pub const CACHE_ENV: &str = "WEILBUND_CACHE";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub(crate) struct BlockKey {
    version: u32,
    n: usize,
    brackets: Vec<(usize, usize, String)>,
    scalars: Vec<(usize, usize, usize, String)>,
    scalar_dim: usize,
    mode: SignMode,
    p: usize,
    weight: u32,
}

impl BlockKey {
    pub(crate) fn new(
        pi: &PoissonStructure<Rationals>,
        scalars: &Scalars,
        mode: SignMode,
        p: usize,
        weight: u32,
    ) -> Self {
        let scalar_table = match scalars {
            Scalars::Real => Vec::new(),
            Scalars::Algebra(a) => a
                .table()
                .entries()
                .into_iter()
                .map(|(x, y, z, c)| (x, y, z, format_rational(&c)))
                .collect(),
        };
        BlockKey {
            version: FORMAT_VERSION,
            n: pi.n(),
            brackets: pi.entries().map(|((i, j), p)| (*i, *j, p.to_string())).collect(),
            scalars: scalar_table,
            scalar_dim: scalars.dim(),
            mode,
            p,
            weight,
        }
    }

    fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("key serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[derive(Serialize, Deserialize)]
struct Stored {
    rows: usize,
    cols: usize,
    triplets: Vec<Triplet>,
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub(crate) fn cached(key: &BlockKey, build: impl FnOnce() -> SparseMatrix) -> SparseMatrix {
    cached_in(cache_dir(), key, build)
}

fn cached_in(
    dir: Option<PathBuf>,
    key: &BlockKey,
    build: impl FnOnce() -> SparseMatrix,
) -> SparseMatrix {
    let Some(dir) = dir else {
        return build();
    };
    let path = dir.join(format!("{}.json", key.digest()));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(s) = serde_json::from_str::<Stored>(&text) {
            return SparseMatrix::from_triplets(s.rows, s.cols, &s.triplets);
        }
    }
    let m = build();
    let stored = Stored {
        rows: m.rows(),
        cols: m.cols(),
        triplets: m.triplets(),
    };
    if std::fs::create_dir_all(&dir).is_ok() {
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, serde_json::to_string(&stored).expect("block serializes")).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
    m
}
