//! Möbius and Liouville tables from a linear (Euler) sieve, with an on-disk cache.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;

pub const MIN_SIEVE_LIMIT: u64 = 2;
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Cache file magic; the trailing digit is the format version.
pub const CACHE_MAGIC: &[u8; 4] = b"OSC1";

/// `𝛍(n)` and `𝛌(n)` for `1 ≤ n ≤ limit`. Index 0 is unused and stored as 0.
#[derive(Clone, PartialEq, Eq)]
pub struct SieveTable {
    limit: u64,
    mobius: Vec<i8>,
    liouville: Vec<i8>,
    checksum: u64,
}

impl std::fmt::Debug for SieveTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SieveTable")
            .field("limit", &self.limit)
            .field("checksum", &format_args!("{:#018x}", self.checksum))
            .finish()
    }
}

fn check_limit(n_max: u64) -> Result<()> {
    if !(MIN_SIEVE_LIMIT..=MAX_SIEVE_LIMIT).contains(&n_max) {
        return Err(Error::capacity(
            format!("sieve limit {n_max} outside supported range"),
            format!("{MIN_SIEVE_LIMIT}..={MAX_SIEVE_LIMIT}"),
        ));
    }
    Ok(())
}

/// Table of `𝛍(n)` for `n ≤ n_max`. The returned table also carries `𝛌`.
pub fn mobius_range(n_max: u64) -> Result<SieveTable> {
    SieveTable::build(n_max)
}

/// Table of `𝛌(n) = (−1)^Ω(n)` for `n ≤ n_max`. Same table as [`mobius_range`].
pub fn liouville_range(n_max: u64) -> Result<SieveTable> {
    SieveTable::build(n_max)
}

impl SieveTable {
    pub fn build(n_max: u64) -> Result<Self> {
        check_limit(n_max)?;
        let n = n_max as usize;
        let mut mobius = vec![0i8; n + 1];
        let mut liouville = vec![0i8; n + 1];
        let mut composite = vec![0u64; n / 64 + 1];
        let mut primes: Vec<u32> = Vec::new();
        mobius[1] = 1;
        liouville[1] = 1;
        for i in 2..=n {
            if composite[i / 64] >> (i % 64) & 1 == 0 {
                primes.push(i as u32);
                mobius[i] = -1;
                liouville[i] = -1;
            }
            for &p in &primes {
                let p = p as usize;
                let m = i * p;
                if m > n {
                    break;
                }
                composite[m / 64] |= 1 << (m % 64);
                liouville[m] = -liouville[i];
                if i % p == 0 {
                    mobius[m] = 0;
                    break;
                }
                mobius[m] = -mobius[i];
            }
        }
        let checksum = payload_checksum(&mobius[1..], &liouville[1..]);
        Ok(Self {
            limit: n_max,
            mobius,
            liouville,
            checksum,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    /// `𝛍(n)`; panics outside `1..=limit`.
    #[inline]
    pub fn mobius(&self, n: u64) -> i8 {
        assert!(n >= 1 && n <= self.limit, "n = {n} outside sieve range 1..={}", self.limit);
        self.mobius[n as usize]
    }

    #[inline]
    pub fn liouville(&self, n: u64) -> i8 {
        assert!(n >= 1 && n <= self.limit, "n = {n} outside sieve range 1..={}", self.limit);
        self.liouville[n as usize]
    }

    /// Raw slice indexed by `n` (entry 0 is a placeholder).
    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius
    }

    pub fn liouville_slice(&self) -> &[i8] {
        &self.liouville
    }

    /// `𝛍(1), …, 𝛍(n)` as a sequence with origin 1.
    pub fn mobius_sequence(&self, n: u64) -> Result<PhaseSequence> {
        self.sign_sequence(&self.mobius, n)
    }

    pub fn liouville_sequence(&self, n: u64) -> Result<PhaseSequence> {
        self.sign_sequence(&self.liouville, n)
    }

    fn sign_sequence(&self, table: &[i8], n: u64) -> Result<PhaseSequence> {
        if n == 0 || n > self.limit {
            return Err(Error::capacity(
                format!("requested {n} terms from a sieve of limit {}", self.limit),
                self.limit,
            ));
        }
        let values = table[1..=n as usize]
            .iter()
            .map(|&s| Complex64::new(s as f64, 0.0))
            .collect();
        PhaseSequence::new(values, 1.0, 1)
    }

    /// Mertens function `Σ_{n ≤ x} 𝛍(n)`.
    pub fn mertens(&self, x: u64) -> i64 {
        self.mobius[1..=x.min(self.limit) as usize]
            .iter()
            .map(|&m| m as i64)
            .sum()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&self.limit.to_le_bytes())?;
        out.write_all(bytes_of(&self.mobius[1..]))?;
        out.write_all(bytes_of(&self.liouville[1..]))?;
        out.write_all(&self.checksum.to_le_bytes())?;
        Ok(())
    }

    /// Parses a cache file image; `path` is only used in error messages.
    pub fn read_from<R: Read>(mut input: R, path: &Path) -> Result<Self> {
        let corrupt = |reason: &str| Error::CorruptCache {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        let mut magic = [0u8; 4];
        input
            .read_exact(&mut magic)
            .map_err(|_| corrupt("truncated header"))?;
        if &magic != CACHE_MAGIC {
            return Err(corrupt("bad magic bytes"));
        }
        let mut word = [0u8; 8];
        input
            .read_exact(&mut word)
            .map_err(|_| corrupt("truncated header"))?;
        let limit = u64::from_le_bytes(word);
        check_limit(limit).map_err(|_| corrupt("limit out of range"))?;
        let n = limit as usize;
        let mut mobius = vec![0u8; n + 1];
        let mut liouville = vec![0u8; n + 1];
        input
            .read_exact(&mut mobius[1..])
            .map_err(|_| corrupt("truncated Möbius block"))?;
        input
            .read_exact(&mut liouville[1..])
            .map_err(|_| corrupt("truncated Liouville block"))?;
        input
            .read_exact(&mut word)
            .map_err(|_| corrupt("missing checksum"))?;
        let stored = u64::from_le_bytes(word);
        let mut rest = [0u8; 1];
        if input.read(&mut rest)? != 0 {
            return Err(corrupt("trailing bytes"));
        }
        let mobius: Vec<i8> = mobius.into_iter().map(|b| b as i8).collect();
        let liouville: Vec<i8> = liouville.into_iter().map(|b| b as i8).collect();
        let checksum = payload_checksum(&mobius[1..], &liouville[1..]);
        if checksum != stored {
            return Err(corrupt("checksum mismatch"));
        }
        Ok(Self {
            limit,
            mobius,
            liouville,
            checksum,
        })
    }
}

fn bytes_of(v: &[i8]) -> &[u8] {
    // i8 and u8 share size and alignment
    unsafe { std::slice::from_raw_parts(v.as_ptr() as *const u8, v.len()) }
}

/// 64-bit FNV-1a over the Möbius block followed by the Liouville block.
fn payload_checksum(mobius: &[i8], liouville: &[i8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for &b in bytes_of(mobius).iter().chain(bytes_of(liouville)) {
        h ^= b as u64;
        h = h.wrapping_mul(PRIME);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    /// A valid file was already present.
    Hit,
    /// The table was computed and written.
    Built,
    /// Verification succeeded.
    Valid,
    Missing,
    Purged,
}

/// Directory of sieve tables keyed by limit.
#[derive(Debug, Clone)]
pub struct SieveCache {
    dir: PathBuf,
}

impl SieveCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n_max: u64) -> PathBuf {
        self.dir.join(format!("sieve-{n_max}.osc"))
    }

    /// Loads the cached table, rebuilding it when missing or corrupt.
    pub fn load_or_build(&self, n_max: u64) -> Result<(SieveTable, CacheStatus)> {
        check_limit(n_max)?;
        match self.load(n_max) {
            Ok(table) => return Ok((table, CacheStatus::Hit)),
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(Error::CorruptCache { .. }) => {}
            Err(e) => return Err(e),
        }
        let table = SieveTable::build(n_max)?;
        self.store(&table)?;
        Ok((table, CacheStatus::Built))
    }

    pub fn load(&self, n_max: u64) -> Result<SieveTable> {
        let path = self.path_for(n_max);
        let file = fs::File::open(&path)?;
        let table = SieveTable::read_from(std::io::BufReader::new(file), &path)?;
        if table.limit != n_max {
            return Err(Error::CorruptCache {
                path,
                reason: format!("file holds limit {} instead of {n_max}", table.limit),
            });
        }
        Ok(table)
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn store(&self, table: &SieveTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(table.limit);
        let tmp = self
            .dir
            .join(format!(".sieve-{}.{}.tmp", table.limit, std::process::id()));
        {
            let mut out = std::io::BufWriter::new(fs::File::create(&tmp)?);
            table.write_to(&mut out)?;
            out.flush()?;
            out.get_ref().sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Re-reads the file and recomputes its checksum.
    pub fn verify(&self, n_max: u64) -> Result<CacheStatus> {
        match self.load(n_max) {
            Ok(_) => Ok(CacheStatus::Valid),
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => Ok(CacheStatus::Missing),
            Err(e) => Err(e),
        }
    }

    pub fn purge(&self, n_max: u64) -> Result<CacheStatus> {
        match fs::remove_file(self.path_for(n_max)) {
            Ok(()) => Ok(CacheStatus::Purged),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(CacheStatus::Missing),
            Err(e) => Err(e.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorize(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn small_values() {
        let t = mobius_range(100).unwrap();
        assert_eq!(t.mobius(1), 1);
        assert_eq!(t.mobius(12), 0);
        assert_eq!(t.mobius(30), -1);
        assert_eq!(t.liouville(1), 1);
        assert_eq!(t.liouville(12), -1);
        assert_eq!(t.liouville(16), 1);
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = SieveTable::build(20_000).unwrap();
        for n in 1..=20_000u64 {
            let f = factorize(n);
            let omega: u32 = f.iter().map(|&(_, e)| e).sum();
            let lambda = if omega % 2 == 0 { 1 } else { -1 };
            let mu = if f.iter().any(|&(_, e)| e > 1) { 0 } else { lambda };
            assert_eq!(t.mobius(n), mu, "mu({n})");
            assert_eq!(t.liouville(n), lambda, "lambda({n})");
        }
    }

    #[test]
    fn limits_are_enforced() {
        assert!(matches!(SieveTable::build(1), Err(Error::Capacity { .. })));
        assert!(matches!(
            SieveTable::build(MAX_SIEVE_LIMIT + 1),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn mertens_known_values() {
        let t = SieveTable::build(10_000).unwrap();
        assert_eq!(t.mertens(10), -1);
        assert_eq!(t.mertens(100), 1);
        assert_eq!(t.mertens(1000), 2);
        assert_eq!(t.mertens(10_000), -23);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SieveCache::new(dir.path());
        assert_eq!(cache.verify(1000).unwrap(), CacheStatus::Missing);
        let (built, status) = cache.load_or_build(1000).unwrap();
        assert_eq!(status, CacheStatus::Built);
        let (hit, status) = cache.load_or_build(1000).unwrap();
        assert_eq!(status, CacheStatus::Hit);
        assert_eq!(built, hit);
        assert_eq!(cache.verify(1000).unwrap(), CacheStatus::Valid);

        let path = cache.path_for(1000);
        let mut bytes = fs::read(&path).unwrap();
        bytes[20] ^= 0x7f;
        fs::write(&path, &bytes).unwrap();
        match cache.verify(1000) {
            Err(Error::CorruptCache { path: p, .. }) => assert_eq!(p, path),
            other => panic!("expected corruption, got {other:?}"),
        }
        // a corrupt file is rebuilt on load
        let (_, status) = cache.load_or_build(1000).unwrap();
        assert_eq!(status, CacheStatus::Built);

        assert_eq!(cache.purge(1000).unwrap(), CacheStatus::Purged);
        assert_eq!(cache.verify(1000).unwrap(), CacheStatus::Missing);
    }

    #[test]
    fn file_layout() {
        let t = SieveTable::build(10).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"OSC1");
        assert_eq!(u64::from_le_bytes(buf[4..12].try_into().unwrap()), 10);
        assert_eq!(buf.len(), 4 + 8 + 20 + 8);
        // 𝛍(1..=10) = 1 −1 −1 0 −1 1 −1 0 0 1
        let mu: Vec<i8> = buf[12..22].iter().map(|&b| b as i8).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(
            u64::from_le_bytes(buf[32..40].try_into().unwrap()),
            t.checksum()
        );
    }
}
