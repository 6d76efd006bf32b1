//! On-disk Legendre table cache.
//!
//! Layout (little-endian): `b"FKLT"`, `u32` version (= 1), `u64` p, then p
//! bytes where byte n is `0x00`, `0x01` or `0xFF` for a symbol of 0, +1, -1.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::LegendreTable;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 4] = b"FKLT";
pub const CACHE_VERSION: u32 = 1;

pub fn write_table<W: Write>(table: &LegendreTable, mut out: W) -> Result<()> {
    out.write_all(CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&table.p().to_le_bytes())?;
    let bytes: Vec<u8> = table.symbols().iter().map(|&s| s as u8).collect();
    out.write_all(&bytes)?;
    Ok(())
}

pub fn read_table<R: Read>(mut input: R) -> Result<LegendreTable> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != CACHE_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut dword = [0u8; 8];
    input.read_exact(&mut dword)?;
    let p = u64::from_le_bytes(dword);
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() as u64 != p {
        return Err(Error::Format(format!(
            "payload has {} bytes, header says {p}",
            bytes.len()
        )));
    }
    let symbols = bytes
        .into_iter()
        .map(|b| match b {
            0x00 => Ok(0),
            0x01 => Ok(1),
            0xFF => Ok(-1),
            other => Err(Error::Format(format!("invalid symbol byte {other:#04x}"))),
        })
        .collect::<Result<Vec<i8>>>()?;
    LegendreTable::from_symbols(p, symbols)
}

pub fn cache_path(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("legendre-{p}.fklt"))
}

/// Load the table for `p` from `dir`, building and storing it on a miss.
///
/// A corrupt cache file is rebuilt rather than trusted.
pub fn load_or_build(dir: &Path, p: u64) -> Result<LegendreTable> {
    let path = cache_path(dir, p);
    if let Ok(file) = fs::File::open(&path) {
        if let Ok(table) = read_table(std::io::BufReader::new(file)) {
            if table.p() == p {
                return Ok(table);
            }
        }
    }
    let table = LegendreTable::new(p)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    {
        let mut file = std::io::BufWriter::new(fs::File::create(&tmp)?);
        write_table(&table, &mut file)?;
        file.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(table)
}
