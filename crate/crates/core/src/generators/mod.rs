//! Reference bit sources: SHA-1 counter stream, π, fixed patterns and RNG files.
//!
//! Every source is deterministic and prefix coherent: asking for fewer bits
//! yields a prefix of asking for more.

mod pi;
mod sha1;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitSequence;

pub use pi::pi_bits;
pub use sha1::{sha1_digest, sha1_stream, to_hex};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("unknown pattern kind {0:?}")]
    UnknownPattern(String),
    #[error("unknown file format {0:?} (expected raw, ascii01 or hex)")]
    UnknownFormat(String),
    #[error("malformed source {uri:?}: {reason}")]
    MalformedSource { uri: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid character {ch:?} at offset {offset} for {format} input")]
    InvalidChar {
        ch: char,
        offset: usize,
        format: FileFormat,
    },
    #[error("source provides {available} bits, {requested} requested")]
    InsufficientBits { requested: usize, available: usize },
}

/// Seed bytes for the SHA-1 stream; may be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Seed(pub Vec<u8>);

impl Seed {
    pub fn from_hex(hex: &str) -> Option<Seed> {
        if !hex.len().is_multiple_of(2) {
            return None;
        }
        (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(hex.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(Seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Const0,
    Const1,
    Alternating,
    Counter,
}

impl FromStr for PatternKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "const0" => Ok(PatternKind::Const0),
            "const1" => Ok(PatternKind::Const1),
            "alt" | "alternating" => Ok(PatternKind::Alternating),
            "counter" => Ok(PatternKind::Counter),
            other => Err(GeneratorError::UnknownPattern(other.to_string())),
        }
    }
}

pub fn pattern_bits(kind: PatternKind, count: usize) -> BitSequence {
    match kind {
        PatternKind::Const0 => BitSequence::repeat(false, count),
        PatternKind::Const1 => BitSequence::repeat(true, count),
        PatternKind::Alternating => (0..count).map(|i| i % 2 == 1).collect(),
        PatternKind::Counter => {
            let mut out = BitSequence::with_capacity(count + 64);
            let mut value = 0u64;
            while out.len() < count {
                let width = (64 - value.leading_zeros() as usize).max(1);
                out.extend_from(&BitSequence::from_uint(value, width));
                value += 1;
            }
            out.truncate(count);
            out
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Raw,
    Ascii01,
    Hex,
}

impl fmt::Display for FileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileFormat::Raw => "raw",
            FileFormat::Ascii01 => "ascii01",
            FileFormat::Hex => "hex",
        })
    }
}

impl FromStr for FileFormat {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(FileFormat::Raw),
            "ascii01" => Ok(FileFormat::Ascii01),
            "hex" => Ok(FileFormat::Hex),
            other => Err(GeneratorError::UnknownFormat(other.to_string())),
        }
    }
}

/// Decodes file contents. Whitespace is skipped in the text formats.
pub fn decode_bits(data: &[u8], format: FileFormat) -> Result<BitSequence, GeneratorError> {
    if format == FileFormat::Raw {
        return Ok(BitSequence::from_bytes(data));
    }
    let mut out = BitSequence::with_capacity(data.len() * 4);
    for (offset, &byte) in data.iter().enumerate() {
        let ch = byte as char;
        if ch.is_ascii_whitespace() {
            continue;
        }
        match (format, ch) {
            (FileFormat::Ascii01, '0') => out.push(false),
            (FileFormat::Ascii01, '1') => out.push(true),
            (FileFormat::Hex, _) if ch.is_ascii_hexdigit() => {
                let digit = ch.to_digit(16).expect("checked hex digit") as u64;
                out.extend_from(&BitSequence::from_uint(digit, 4));
            }
            _ => return Err(GeneratorError::InvalidChar { ch, offset, format }),
        }
    }
    Ok(out)
}

pub fn ingest_file(path: &Path, format: FileFormat) -> Result<BitSequence, GeneratorError> {
    let data = std::fs::read(path).map_err(|source| GeneratorError::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    decode_bits(&data, format)
}

/// A bit source addressed by URI: `sha1:<hex-seed>`, `pi:`, `const0:`,
/// `const1:`, `alt:`, `counter:` or `file:<path>?format=raw|ascii01|hex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceSpec {
    Sha1(Seed),
    Pi,
    Pattern(PatternKind),
    File { path: PathBuf, format: FileFormat },
}

impl SourceSpec {
    pub fn parse(uri: &str) -> Result<SourceSpec, GeneratorError> {
        let malformed = |reason: &str| GeneratorError::MalformedSource {
            uri: uri.to_string(),
            reason: reason.to_string(),
        };
        let (scheme, rest) = uri
            .split_once(':')
            .ok_or_else(|| malformed("missing ':' after the source kind"))?;
        match scheme {
            "sha1" => Seed::from_hex(rest)
                .map(SourceSpec::Sha1)
                .ok_or_else(|| malformed("seed must be an even-length hex string")),
            "pi" | "const0" | "const1" | "alt" | "counter" if !rest.is_empty() => {
                Err(malformed("this source takes no parameters"))
            }
            "pi" => Ok(SourceSpec::Pi),
            "const0" | "const1" | "alt" | "counter" => {
                Ok(SourceSpec::Pattern(scheme.parse().expect("kind listed above")))
            }
            "file" => {
                let (path, query) = match rest.split_once('?') {
                    Some((path, query)) => (path, Some(query)),
                    None => (rest, None),
                };
                if path.is_empty() {
                    return Err(malformed("empty path"));
                }
                let format = match query {
                    None => FileFormat::Raw,
                    Some(q) => match q.strip_prefix("format=") {
                        Some(f) => f.parse().map_err(|_| malformed("unknown format"))?,
                        None => return Err(malformed("expected ?format=raw|ascii01|hex")),
                    },
                };
                Ok(SourceSpec::File {
                    path: PathBuf::from(path),
                    format,
                })
            }
            _ => Err(malformed("unknown source kind")),
        }
    }

    /// Exactly `count` bits; a file that is too short is an error.
    pub fn generate(&self, count: usize) -> Result<BitSequence, GeneratorError> {
        match self {
            SourceSpec::Sha1(seed) => Ok(sha1_stream(&seed.0, count)),
            SourceSpec::Pi => Ok(pi_bits(count)),
            SourceSpec::Pattern(kind) => Ok(pattern_bits(*kind, count)),
            SourceSpec::File { path, format } => {
                let mut bits = ingest_file(path, *format)?;
                if bits.len() < count {
                    return Err(GeneratorError::InsufficientBits {
                        requested: count,
                        available: bits.len(),
                    });
                }
                bits.truncate(count);
                Ok(bits)
            }
        }
    }
}

impl FromStr for SourceSpec {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SourceSpec::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns() {
        assert_eq!(pattern_bits(PatternKind::Const0, 4).to_string(), "0000");
        assert_eq!(pattern_bits(PatternKind::Const1, 3).to_string(), "111");
        assert_eq!(pattern_bits(PatternKind::Alternating, 5).to_string(), "01010");
        assert_eq!(pattern_bits(PatternKind::Counter, 8).to_string(), "01101110");
        assert!("zigzag".parse::<PatternKind>().is_err());
    }

    #[test]
    fn decoding() {
        assert_eq!(decode_bits(&[0xA9], FileFormat::Raw).unwrap().to_string(), "10101001");
        assert_eq!(decode_bits(b"01 10\n", FileFormat::Ascii01).unwrap().to_string(), "0110");
        assert_eq!(
            decode_bits(b"2 4 3 F", FileFormat::Hex).unwrap().to_string(),
            "0010010000111111"
        );
        assert!(matches!(
            decode_bits(b"012", FileFormat::Ascii01),
            Err(GeneratorError::InvalidChar { ch: '2', offset: 2, .. })
        ));
        assert!(decode_bits(b"g", FileFormat::Hex).is_err());
    }

    #[test]
    fn uris() {
        assert_eq!(SourceSpec::parse("pi:").unwrap(), SourceSpec::Pi);
        assert_eq!(
            SourceSpec::parse("sha1:616263").unwrap(),
            SourceSpec::Sha1(Seed(b"abc".to_vec()))
        );
        assert_eq!(SourceSpec::parse("sha1:").unwrap(), SourceSpec::Sha1(Seed(vec![])));
        assert_eq!(
            SourceSpec::parse("file:x.bin?format=hex").unwrap(),
            SourceSpec::File {
                path: "x.bin".into(),
                format: FileFormat::Hex
            }
        );
        assert_eq!(
            SourceSpec::parse("alt:").unwrap(),
            SourceSpec::Pattern(PatternKind::Alternating)
        );
        for bad in ["pi", "sha1:abc", "sha1:zz", "file:", "file:a?fmt=raw", "noise:", "pi:3"] {
            assert!(SourceSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn file_source_refuses_short_reads() {
        let dir = std::env::temp_dir().join(format!("kolmo-gen-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("one.bin");
        std::fs::write(&path, [0xA9]).unwrap();
        let spec = SourceSpec::File {
            path: path.clone(),
            format: FileFormat::Raw,
        };
        assert_eq!(spec.generate(4).unwrap().to_string(), "1010");
        assert!(matches!(
            spec.generate(9),
            Err(GeneratorError::InsufficientBits {
                requested: 9,
                available: 8
            })
        ));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
