//! The three source families and their partition labelling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{enumerate_bipartitions, ModePartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Three modes, two processes sharing mode 0.
    Tri,
    /// Four modes, two processes in a chain.
    Lin4,
    /// Four modes, two pumps closing a square (symmetric couplings only).
    Sq4,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Tri, Family::Lin4, Family::Sq4];

    pub fn n_modes(self) -> usize {
        match self {
            Family::Tri => 3,
            Family::Lin4 | Family::Sq4 => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tri => "tri",
            Family::Lin4 => "lin4",
            Family::Sq4 => "sq4",
        }
    }

    /// Modes are printed 0-based for the tripartite state and 1-based for the
    /// four-mode states.
    pub fn label_base(self) -> usize {
        match self {
            Family::Tri => 0,
            Family::Lin4 | Family::Sq4 => 1,
        }
    }

    pub fn partition_label(self, p: &ModePartition) -> String {
        p.label(self.label_base())
    }

    pub fn partitions(self) -> Vec<ModePartition> {
        enumerate_bipartitions(self.n_modes()).expect("families have at least three modes")
    }

    /// Accepts `{1,3}`, `1,3`, `13` or `P13` (four-mode) and `{0}`, `0` (tripartite).
    pub fn parse_partition(self, label: &str) -> Result<ModePartition> {
        let s = label.trim();
        let s = s.strip_prefix(['P', 'p']).unwrap_or(s);
        let s = s.trim_start_matches('{').trim_end_matches('}').trim();
        if s.is_empty() {
            return invalid(format!("empty partition label {label:?}"));
        }
        let parts: Vec<&str> = if s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else {
            s.split("").filter(|c| !c.is_empty()).collect()
        };
        let base = self.label_base();
        let mut modes = Vec::with_capacity(parts.len());
        for p in parts {
            let k: usize = p
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad mode {p:?} in partition label {label:?}")))?;
            if k < base {
                return invalid(format!("mode {k} out of range in partition label {label:?}"));
            }
            modes.push(k - base);
        }
        ModePartition::new(self.n_modes(), modes)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tri" => Ok(Family::Tri),
            "lin4" => Ok(Family::Lin4),
            "sq4" => Ok(Family::Sq4),
            other => invalid(format!("unknown family {other:?} (expected tri, lin4 or sq4)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels() {
        let p13 = Family::Lin4.parse_partition("P13").unwrap();
        assert_eq!(p13.modes(), &[0, 2]);
        assert_eq!(Family::Lin4.parse_partition("{1,3}").unwrap(), p13);
        assert_eq!(Family::Sq4.parse_partition("24").unwrap(), p13);
        assert_eq!(Family::Tri.parse_partition("{0}").unwrap().modes(), &[0]);
        assert_eq!(Family::Lin4.partition_label(&p13), "{1,3}");
        assert!(Family::Tri.parse_partition("{3}").is_err());
        assert!(Family::Lin4.parse_partition("{0}").is_err());
        assert!(Family::Lin4.parse_partition("P1234").is_err());
        assert!(Family::Lin4.parse_partition("x").is_err());
    }

    #[test]
    fn family_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{f}\""));
        }
    }
}
