//! On-disk sieve cache.
//!
//! Layout, all integers little-endian:
//!
//! | bytes | field                     |
//! |-------|---------------------------|
//! | 8     | magic `CFMLSIEV`          |
//! | 4     | format version (1)        |
//! | 8     | limit                     |
//! | 8     | number of 64-bit words    |
//! | 8·k   | odd-only primality bitset |

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::sieve::{sieve, PrimeTable};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "CFML_SIEVE_CACHE";
const MAGIC: &[u8; 8] = b"CFMLSIEV";
const VERSION: u32 = 1;

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("sieve-{limit}.bin"))
}

pub fn write_table(table: &PrimeTable, path: &Path) -> Result<()> {
    let words = table.words();
    let mut buf = Vec::with_capacity(28 + 8 * words.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&table.limit().to_le_bytes());
    buf.extend_from_slice(&(words.len() as u64).to_le_bytes());
    for w in words {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    // write-then-rename so concurrent readers never see a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&buf)?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<PrimeTable> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
    if bytes.len() < 28 || &bytes[..8] != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let limit = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let n = u64::from_le_bytes(bytes[20..28].try_into().unwrap()) as usize;
    if limit < 2 || n != (((limit - 1) / 2) / 64 + 1) as usize || bytes.len() != 28 + 8 * n {
        return Err(bad("inconsistent header"));
    }
    let words = bytes[28..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(PrimeTable::from_words(limit, words))
}

/// Loads `sieve-{limit}.bin` from `dir`, sieving and writing it on a miss or
/// an unreadable file.
pub fn load_or_sieve_in(dir: &Path, limit: u64) -> Result<PrimeTable> {
    let path = cache_path(dir, limit);
    if let Ok(t) = read_table(&path) {
        if t.limit() == limit {
            return Ok(t);
        }
    }
    let t = sieve(limit)?;
    fs::create_dir_all(dir)?;
    write_table(&t, &path)?;
    Ok(t)
}

/// Uses the directory named by `CFML_SIEVE_CACHE` when set, otherwise sieves.
pub fn load_or_sieve(limit: u64) -> Result<PrimeTable> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_sieve_in(Path::new(&dir), limit),
        _ => sieve(limit),
    }
}
