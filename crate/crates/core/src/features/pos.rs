use std::fmt;
use std::str::FromStr;

/// Language-specific rule for deriving coarse POS tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LanguageProfile {
    English,
    Chinese,
    Czech,
    /// Coarse tag equals the fine tag.
    Generic,
}

impl LanguageProfile {
    pub fn name(self) -> &'static str {
        match self {
            LanguageProfile::English => "english",
            LanguageProfile::Chinese => "chinese",
            LanguageProfile::Czech => "czech",
            LanguageProfile::Generic => "generic",
        }
    }
}

impl fmt::Display for LanguageProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LanguageProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "english" => Ok(LanguageProfile::English),
            "chinese" => Ok(LanguageProfile::Chinese),
            "czech" => Ok(LanguageProfile::Czech),
            "generic" => Ok(LanguageProfile::Generic),
            _ => Err(format!(
                "unknown language profile {s:?} (expected english|chinese|czech|generic)"
            )),
        }
    }
}

/// Coarsens a fine POS tag.
///
/// English keeps the first two characters (`PRP` and `PRP$` stay whole),
/// Czech keeps the first character, and Chinese drops the last character
/// (`PU` and `CD` stay whole).
pub fn coarsen_pos(pos: &str, profile: LanguageProfile) -> String {
    let prefix = |k: usize| pos.chars().take(k).collect::<String>();
    match profile {
        LanguageProfile::English => match pos {
            "PRP" | "PRP$" => pos.to_owned(),
            _ => prefix(2),
        },
        LanguageProfile::Czech => prefix(1),
        LanguageProfile::Chinese => match pos {
            "PU" | "CD" => pos.to_owned(),
            _ => {
                let count = pos.chars().count();
                if count <= 1 {
                    pos.to_owned()
                } else {
                    prefix(count - 1)
                }
            }
        },
        LanguageProfile::Generic => pos.to_owned(),
    }
}
