//! `--config` files and the `CENTREFALL_PRECISION` override.

use std::ffi::OsString;
use std::fs;

use centrefall::tdse::LEAKAGE_LIMIT;
use centrefall::{Error, Result};

pub const PRECISION_VAR: &str = "CENTREFALL_PRECISION";

const COMMANDS: [&str; 10] = [
    "evolve",
    "fate",
    "fall-time",
    "trial",
    "critical",
    "propagate",
    "wire",
    "scale",
    "figure1",
    "constants",
];

/// Tolerances shared by the commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    /// Relative size below which quadrature-derived ⟨H⟩ and ⟨rp+pr⟩ count as zero.
    pub zero: f64,
    /// Largest acceptable |r²_numeric − r²_analytic| / r²(0).
    pub deviation: f64,
    /// Probability allowed in the outer 5% of a propagation grid.
    pub leakage: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            zero: 1e-12,
            deviation: 1e-2,
            leakage: LEAKAGE_LIMIT,
        }
    }
}

impl Precision {
    /// Parses `zero=..,deviation=..,leakage=..` (any subset) or a bare number,
    /// which sets `zero`.
    pub fn parse(text: &str) -> Result<Precision> {
        let mut out = Precision::default();
        let text = text.trim();
        if text.is_empty() {
            return Ok(out);
        }
        if let Ok(v) = text.parse::<f64>() {
            out.zero = positive(v, "zero")?;
            return Ok(out);
        }
        for item in text.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("{PRECISION_VAR}: expected key=value, got {item:?}")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{PRECISION_VAR}: {:?} is not a number", value.trim())))?;
            match key.trim() {
                "zero" => out.zero = positive(v, "zero")?,
                "deviation" => out.deviation = positive(v, "deviation")?,
                "leakage" => out.leakage = positive(v, "leakage")?,
                other => {
                    return Err(Error::Parse(format!(
                        "{PRECISION_VAR}: unknown key {other:?} (expected zero, deviation or leakage)"
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn from_env() -> Result<Precision> {
        match std::env::var(PRECISION_VAR) {
            Ok(v) => Precision::parse(&v),
            Err(std::env::VarError::NotPresent) => Ok(Precision::default()),
            Err(e) => Err(Error::Parse(format!("{PRECISION_VAR}: {e}"))),
        }
    }
}

fn positive(v: f64, key: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Validation(format!("{PRECISION_VAR}: {key} must be > 0, got {v}")))
    }
}

/// Turns key=value lines into long flags. `true`/`false` toggle switches.
pub fn config_flags(text: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(Error::Parse(format!("config line {}: invalid key {key:?}", lineno + 1)));
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => out.push(format!("--{key}={value}").into()),
        }
    }
    Ok(out)
}

fn flag_name(arg: &str) -> Option<String> {
    let name = arg.strip_prefix("--")?;
    Some(name.split('=').next().unwrap_or(name).to_string())
}

/// Splices entries of any `--config FILE` into argv right after the
/// subcommand. Flags also given on the command line take precedence.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut it = argv.iter().enumerate().skip(1);
    while let Some((_, arg)) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            path = it.next().map(|(_, v)| v.clone());
        } else if let Some(v) = s.strip_prefix("--config=") {
            path = Some(v.into());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let flags = config_flags(&text)?;
    let at = argv
        .iter()
        .position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or_else(|| Error::Validation("--config needs a subcommand".into()))?;
    let explicit: Vec<String> = argv[at + 1..].iter().filter_map(|a| flag_name(&a.to_string_lossy())).collect();
    let mut merged = argv[..=at].to_vec();
    merged.extend(flags.into_iter().filter(|f| {
        flag_name(&f.to_string_lossy()).is_none_or(|name| !explicit.contains(&name))
    }));
    merged.extend_from_slice(&argv[at + 1..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_forms() {
        assert_eq!(Precision::parse("").unwrap(), Precision::default());
        assert_eq!(Precision::parse("1e-10").unwrap().zero, 1e-10);
        let p = Precision::parse("deviation=5e-3, leakage=1e-7").unwrap();
        assert_eq!((p.zero, p.deviation, p.leakage), (1e-12, 5e-3, 1e-7));
        assert!(Precision::parse("bogus=1").is_err());
        assert!(Precision::parse("zero=-1").is_err());
        assert!(Precision::parse("zero").is_err());
    }

    #[test]
    fn config_is_spliced_before_explicit_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# state\nr2-0 = 1\nenergy=-0.5\nnatural = true\nd0 = 0 # none\n").unwrap();
        let argv: Vec<OsString> = ["centrefall", "--config", path.to_str().unwrap(), "fate", "--energy", "-2"]
            .iter()
            .map(Into::into)
            .collect();
        let merged = merge_config(argv).unwrap();
        let merged: Vec<String> = merged.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        let fate = merged.iter().position(|s| s == "fate").unwrap();
        assert_eq!(
            &merged[fate..],
            ["fate", "--r2-0=1", "--natural", "--d0=0", "--energy", "-2"]
        );
    }

    #[test]
    fn bad_config_lines() {
        assert!(config_flags("novalue").is_err());
        assert!(config_flags("config=x").is_err());
        assert_eq!(config_flags("natural=false").unwrap().len(), 0);
    }
}
