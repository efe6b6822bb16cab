//! Plain-text instance files.
//!
//! ```text
//! # comment
//! meta family er
//! meta seed 7
//! source
//! n 4
//! 0 1
//! target
//! n 4
//! 0 1
//! 0 2
//! flips
//! 2 3
//! ```
//!
//! The `flips` section is optional. Metadata values run to the end of the
//! line and are kept as strings.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::encoder::SynthesisInstance;
use crate::error::{Error, Result};
use crate::graph::{normalize, parse_pair, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub meta: BTreeMap<String, String>,
    pub instance: SynthesisInstance,
}

impl InstanceFile {
    pub fn new(instance: SynthesisInstance) -> Self {
        InstanceFile {
            meta: BTreeMap::new(),
            instance,
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn read(path: &Path) -> Result<Self> {
        fs::read_to_string(path)?.parse()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.meta {
            writeln!(f, "meta {k} {v}")?;
        }
        writeln!(f, "source")?;
        write!(f, "{}", self.instance.source())?;
        writeln!(f, "target")?;
        write!(f, "{}", self.instance.target())?;
        if !self.instance.flips().is_empty() {
            writeln!(f, "flips")?;
            for (u, v) in self.instance.flips() {
                writeln!(f, "{u} {v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Source,
    Target,
    Flips,
}

impl FromStr for InstanceFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut meta = BTreeMap::new();
        let mut section = Section::Preamble;
        let mut bodies: [Vec<(usize, &str)>; 3] = Default::default();
        let mut seen = [false; 3];

        for (i, raw) in s.lines().enumerate() {
            let lno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let next = match line {
                "source" => Some((Section::Source, 0)),
                "target" => Some((Section::Target, 1)),
                "flips" => Some((Section::Flips, 2)),
                _ => None,
            };
            if let Some((sec, slot)) = next {
                if seen[slot] {
                    return Err(Error::parse(lno, format!("section `{line}` repeated")));
                }
                seen[slot] = true;
                section = sec;
                continue;
            }
            match section {
                Section::Preamble => {
                    let rest = line
                        .strip_prefix("meta ")
                        .ok_or_else(|| Error::parse(lno, format!("unexpected line `{line}`")))?;
                    let (k, v) = rest
                        .trim()
                        .split_once(char::is_whitespace)
                        .unwrap_or((rest.trim(), ""));
                    meta.insert(k.to_string(), v.trim().to_string());
                }
                Section::Source => bodies[0].push((lno, line)),
                Section::Target => bodies[1].push((lno, line)),
                Section::Flips => bodies[2].push((lno, line)),
            }
        }

        if !seen[0] {
            return Err(Error::parse(s.lines().count().max(1), "missing `source` section"));
        }
        if !seen[1] {
            return Err(Error::parse(s.lines().count().max(1), "missing `target` section"));
        }
        let source = Graph::parse_lines(bodies[0].iter().copied())?;
        let target = Graph::parse_lines(bodies[1].iter().copied())?;
        let mut flips = Vec::with_capacity(bodies[2].len());
        for &(lno, line) in &bodies[2] {
            let (u, v) = parse_pair(lno, line)?;
            flips.push(normalize(u, v).map_err(|e| Error::parse(lno, e.to_string()))?);
        }
        Ok(InstanceFile {
            meta,
            instance: SynthesisInstance::new(source, target, flips)?,
        })
    }
}
