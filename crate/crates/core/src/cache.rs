//! Persistent term cache: one file per (curve, base point) pair, guarded by
//! a directory lock file. The header binds the file to its inputs by hash,
//! so a stale or swapped file is rejected before any term is trusted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::curve::{Curve, Point};
use crate::eds::{Sequence, Term};
use crate::error::{Error, Result};

const HEADER_PREFIX: &str = "eds-terms v1 ";
const LOCK_NAME: &str = "eds-cache.lock";

/// Held for the lifetime of a run; the lock file disappears on drop.
#[derive(Debug)]
pub struct CacheLock {
    path: PathBuf,
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// One process owns the cache directory at a time. A leftover lock from a
/// crashed run must be removed by hand; guessing would invite corruption.
pub fn acquire_lock(dir: &Path) -> Result<CacheLock> {
    fs::create_dir_all(dir)?;
    let path = dir.join(LOCK_NAME);
    match fs::OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(&path)
    {
        Ok(mut f) => {
            let _ = writeln!(f, "{}", std::process::id());
            Ok(CacheLock { path })
        }
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::Config(format!(
            "cache directory {} is locked by another process (remove {} if none is running)",
            dir.display(),
            path.display()
        ))),
        Err(e) => Err(e.into()),
    }
}

/// Hash of the curve coefficients and the exact base point; doubles as the
/// cache file name, so distinct inputs can never collide on one file.
pub fn curve_key(curve: &Curve, base: &Point) -> String {
    let point = match base {
        Point::Infinity => "O".to_string(),
        Point::Affine(x, y) => format!("{x};{y}"),
    };
    let text = format!(
        "a={},{},{},{},{}|{point}",
        curve.a[0], curve.a[1], curve.a[2], curve.a[3], curve.a[4]
    );
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn data_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.terms"))
}

/// Writes the whole sequence; the rename at the end keeps a crashed write
/// from leaving a half-file behind under the real name.
pub fn store(dir: &Path, curve: &Curve, base: &Point, seq: &Sequence) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let key = curve_key(curve, base);
    let path = data_path(dir, &key);
    let tmp = dir.join(format!("{key}.tmp"));
    let mut out = String::new();
    out.push_str(HEADER_PREFIX);
    out.push_str(&key);
    out.push('\n');
    for t in &seq.terms {
        out.push_str(&format!("{} {} {} {}\n", t.n, t.a, t.b, t.c));
    }
    fs::write(&tmp, out)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Reads the cached terms back, or None when no file exists. Any header or
/// record damage is a hard CacheCorrupt error — a cache that cannot be
/// trusted completely is not used at all.
pub fn load(dir: &Path, curve: &Curve, base: &Point) -> Result<Option<Vec<Term>>> {
    let key = curve_key(curve, base);
    let path = data_path(dir, &key);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CacheCorrupt("empty cache file".into()))?;
    let expected = format!("{HEADER_PREFIX}{key}");
    if header != expected {
        return Err(Error::CacheCorrupt(format!(
            "header mismatch in {}: the file does not belong to this curve and point",
            path.display()
        )));
    }
    let mut terms = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::CacheCorrupt(format!(
                "record {} has {} fields, expected \"n A B C\"",
                i + 1,
                fields.len()
            )));
        }
        let n: u64 = fields[0]
            .parse()
            .map_err(|_| Error::CacheCorrupt(format!("bad index in record {}", i + 1)))?;
        let parse = |s: &str, what: &str| -> Result<BigInt> {
            s.parse()
                .map_err(|_| Error::CacheCorrupt(format!("bad {what} in record {}", i + 1)))
        };
        terms.push(Term {
            n,
            a: parse(fields[1], "numerator")?,
            b: parse(fields[2], "denominator root")?,
            c: parse(fields[3], "second coordinate")?,
        });
    }
    Ok(Some(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn scratch_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "eds-cache-test-{tag}-{}",
            std::process::id()
        ));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn sample() -> (Curve, Point, Sequence) {
        let curve = Curve::from_i64([0, 0, 1, -1, 0]).unwrap();
        let base = Point::Affine(
            BigRational::from_integer(BigInt::from(0)),
            BigRational::from_integer(BigInt::from(0)),
        );
        let seq = Sequence::compute(&curve, &base, 12).unwrap();
        (curve, base, seq)
    }

    #[test]
    fn roundtrip_and_extend_match_cold_run() {
        let dir = scratch_dir("roundtrip");
        let (curve, base, seq) = sample();
        store(&dir, &curve, &base, &seq).unwrap();
        let terms = load(&dir, &curve, &base).unwrap().unwrap();
        assert_eq!(terms.len(), 12);
        let warm = Sequence::extend(&curve, &base, terms, 20).unwrap();
        let cold = Sequence::compute(&curve, &base, 20).unwrap();
        for n in 1..=20 {
            assert_eq!(warm.term(n).a, cold.term(n).a);
            assert_eq!(warm.term(n).b, cold.term(n).b);
            assert_eq!(warm.term(n).c, cold.term(n).c);
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_file_is_none_and_damage_is_detected() {
        let dir = scratch_dir("damage");
        let (curve, base, seq) = sample();
        assert!(load(&dir, &curve, &base).unwrap().is_none());
        let path = store(&dir, &curve, &base, &seq).unwrap();
        // header tamper: swap in a different key
        let original = fs::read_to_string(&path).unwrap();
        let mut swapped = original.replace(&curve_key(&curve, &base), "0000");
        fs::write(&path, &swapped).unwrap();
        assert!(matches!(
            load(&dir, &curve, &base),
            Err(Error::CacheCorrupt(_))
        ));
        // record tamper: non-numeric field
        swapped = original.replace("\n3 ", "\n3 x");
        fs::write(&path, &swapped).unwrap();
        assert!(matches!(
            load(&dir, &curve, &base),
            Err(Error::CacheCorrupt(_))
        ));
        // a record edit that stays numeric is caught by the on-curve check
        // when the terms are handed back to the sequence engine
        let mut lines: Vec<String> = original.lines().map(str::to_string).collect();
        lines.last_mut().unwrap().push('7');
        fs::write(&path, lines.join("\n")).unwrap();
        let terms = load(&dir, &curve, &base).unwrap().unwrap();
        assert!(Sequence::extend(&curve, &base, terms, 12).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn lock_is_exclusive_and_released_on_drop() {
        let dir = scratch_dir("lock");
        let lock = acquire_lock(&dir).unwrap();
        assert!(matches!(acquire_lock(&dir), Err(Error::Config(_))));
        drop(lock);
        let again = acquire_lock(&dir).unwrap();
        drop(again);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn distinct_inputs_use_distinct_files() {
        let (curve, base, _) = sample();
        let other = Point::Affine(
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(0)),
        );
        assert_ne!(curve_key(&curve, &base), curve_key(&curve, &other));
    }
}
