//! Sweep definitions: `key = value` files, flag overrides and validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::materials::{load_material_table, lookup, Material, NamedMaterial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Dt,
    Dx1,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Dt => "dt",
            SweepVar::Dx1 => "dx1",
        }
    }
}

impl FromStr for SweepVar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dt" => Ok(SweepVar::Dt),
            "dx1" => Ok(SweepVar::Dx1),
            other => Err(Error::Parse(format!("sweep variable must be `dt` or `dx1`, got `{other}`"))),
        }
    }
}

/// Point distribution of a range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
    /// Equally spaced reciprocals, e.g. `1/50, 1/49, ..., 1/3`.
    Inverse,
}

impl FromStr for Spacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            "inverse" | "inv" => Ok(Spacing::Inverse),
            other => Err(Error::Parse(format!("unknown spacing `{other}` (linear, log, inverse)"))),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
            Spacing::Inverse => "inverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValueSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize, spacing: Spacing },
}

impl ValueSpec {
    pub fn expand(&self) -> Vec<f64> {
        match *self {
            ValueSpec::List(ref v) => v.clone(),
            ValueSpec::Range { start, stop, count, spacing } => {
                if count == 1 {
                    return vec![start];
                }
                let t = |i: usize| i as f64 / (count - 1) as f64;
                (0..count)
                    .map(|i| match spacing {
                        Spacing::Linear => start + (stop - start) * t(i),
                        Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * t(i)).exp(),
                        Spacing::Inverse => 1.0 / (1.0 / start + (1.0 / stop - 1.0 / start) * t(i)),
                    })
                    .collect()
            }
        }
    }
}

/// Columns a sweep can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Formula,
    SchurOracle,
    Observed1d,
    Observed2d,
    Beta,
    DeltaR,
}

impl Mode {
    pub const ALL: [Mode; 6] = [Mode::Formula, Mode::SchurOracle, Mode::Observed1d, Mode::Observed2d, Mode::Beta, Mode::DeltaR];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Formula => "formula",
            Mode::SchurOracle => "schur_oracle",
            Mode::Observed1d => "observed_1d",
            Mode::Observed2d => "observed_2d",
            Mode::Beta => "beta",
            Mode::DeltaR => "delta_r",
        }
    }

    pub fn is_observed(self) -> bool {
        matches!(self, Mode::Observed1d | Mode::Observed2d)
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown mode `{}`", s.trim())))
    }
}

/// Parses `1.5`, `1e-3`, `40/39` or products such as `2*40/39`.
pub fn parse_number(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("bad number `{}`", s.trim()));
    let mut value = 1.0;
    for factor in s.trim().split('*') {
        let mut parts = factor.trim().split('/');
        let mut v: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        for d in parts {
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            v /= d;
        }
        value *= v;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(f).collect()
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{key}` expects a non-negative integer, got `{}`", s.trim())))
}

/// Ordered `key = value` entries; later entries override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpecEntries {
    pub entries: Vec<(String, String)>,
    /// Directory that relative paths in the entries refer to.
    pub base_dir: Option<PathBuf>,
}

impl SpecEntries {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self { entries, base_dir: None })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut s = Self::parse(&text)?;
        s.base_dir = path.parent().map(Path::to_path_buf);
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub const SPEC_KEYS: [&str; 15] =
    ["var", "values", "range", "dt", "dx1", "r", "n2", "ny", "mat1", "mat2", "materials", "modes", "tol", "max_iters", "out"];

/// A validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub values: ValueSpec,
    pub dt: Option<f64>,
    pub dx1: Option<f64>,
    pub r: f64,
    /// Interior finite element nodes; when set, `dx2 = r dx1` is used as
    /// is and the finite element subdomain has length `(n2 + 1) dx2`.
    pub n2: Option<usize>,
    /// Tangential node count of the 2D model.
    pub ny: Option<usize>,
    pub mat1_name: String,
    pub mat2_name: String,
    pub mat1: Material,
    pub mat2: Material,
    pub materials_file: Option<String>,
    pub modes: Vec<Mode>,
    pub tol: f64,
    pub max_iters: usize,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    pub fn from_entries(e: &SpecEntries) -> Result<Self> {
        if let Some((k, _)) = e.entries.iter().find(|(k, _)| !SPEC_KEYS.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown key `{k}`")));
        }
        let num = |k: &str| e.get(k).map(parse_number).transpose();
        let resolve_path = |p: &str| match &e.base_dir {
            Some(dir) if Path::new(p).is_relative() => dir.join(p),
            _ => PathBuf::from(p),
        };

        let var: SweepVar = e.get("var").unwrap_or("dt").parse()?;
        let values = match (e.get("values"), e.get("range")) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either `values` or `range`, not both".into())),
            (Some(v), None) => ValueSpec::List(parse_list(v, parse_number)?),
            (None, Some(r)) => {
                let f: Vec<&str> = r.split_whitespace().collect();
                if !(3..=4).contains(&f.len()) {
                    return Err(Error::Parse("`range` expects `start stop count [linear|log|inverse]`".into()));
                }
                ValueSpec::Range {
                    start: parse_number(f[0])?,
                    stop: parse_number(f[1])?,
                    count: parse_usize("range", f[2])?,
                    spacing: f.get(3).map_or(Ok(Spacing::Linear), |s| s.parse())?,
                }
            }
            (None, None) => match var {
                SweepVar::Dt => ValueSpec::List(vec![num("dt")?.ok_or_else(|| Error::Parse("missing `dt`".into()))?]),
                SweepVar::Dx1 => ValueSpec::List(vec![num("dx1")?.ok_or_else(|| Error::Parse("missing `dx1`".into()))?]),
            },
        };

        let materials_file = e.get("materials").map(str::to_string);
        let table: Vec<NamedMaterial> = match &materials_file {
            Some(p) => load_material_table(resolve_path(p))?,
            None => Vec::new(),
        };
        let mat1_name = e.get("mat1").unwrap_or("air").to_string();
        let mat2_name = e.get("mat2").unwrap_or("steel").to_string();
        let modes = match e.get("modes") {
            Some(m) => parse_list(m, |s| s.parse::<Mode>())?,
            None => vec![Mode::Formula],
        };

        let spec = Self {
            var,
            values,
            dt: num("dt")?,
            dx1: num("dx1")?,
            r: num("r")?.unwrap_or(1.0),
            n2: e.get("n2").map(|v| parse_usize("n2", v)).transpose()?,
            ny: e.get("ny").map(|v| parse_usize("ny", v)).transpose()?,
            mat1: lookup(&mat1_name, &table)?,
            mat2: lookup(&mat2_name, &table)?,
            mat1_name,
            mat2_name,
            materials_file,
            modes,
            tol: num("tol")?.unwrap_or(1e-10),
            max_iters: e.get("max_iters").map(|v| parse_usize("max_iters", v)).transpose()?.unwrap_or(100),
            out: e.get("out").map(PathBuf::from),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.values.expand();
        if v.is_empty() {
            return Err(Error::Parse("sweep has no values".into()));
        }
        if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Parse("sweep values must be positive".into()));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parse("sweep values must be strictly increasing".into()));
        }
        match self.var {
            SweepVar::Dt if self.dx1.is_none() => return Err(Error::Parse("a `dt` sweep needs `dx1`".into())),
            SweepVar::Dx1 if self.dt.is_none() => return Err(Error::Parse("a `dx1` sweep needs `dt`".into())),
            _ => {}
        }
        for (k, x) in [("r", Some(self.r)), ("dt", self.dt), ("dx1", self.dx1), ("tol", Some(self.tol))] {
            if let Some(x) = x {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(Error::Parse(format!("`{k}` must be positive, got {x}")));
                }
            }
        }
        if self.modes.is_empty() {
            return Err(Error::Parse("no modes requested".into()));
        }
        if self.max_iters < 2 {
            return Err(Error::Parse("`max_iters` must be at least 2".into()));
        }
        if self.n2 == Some(0) || self.ny == Some(0) {
            return Err(Error::Parse("`n2` and `ny` must be at least 1".into()));
        }
        Ok(())
    }

    /// `(dt, dx1)` at one swept value.
    pub fn point(&self, x: f64) -> (f64, f64) {
        match self.var {
            SweepVar::Dt => (x, self.dx1.expect("validated")),
            SweepVar::Dx1 => (self.dt.expect("validated"), x),
        }
    }

    /// Canonical `key = value` lines describing this spec.
    pub fn describe(&self) -> Vec<String> {
        let mut out = vec![format!("var = {}", self.var.name())];
        match &self.values {
            ValueSpec::List(v) => out.push(format!("values = {}", v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(", "))),
            ValueSpec::Range { start, stop, count, spacing } => out.push(format!("range = {start:e} {stop:e} {count} {spacing}")),
        }
        if let Some(dt) = self.dt {
            out.push(format!("dt = {dt:e}"));
        }
        if let Some(dx1) = self.dx1 {
            out.push(format!("dx1 = {dx1:e}"));
        }
        out.push(format!("r = {:e}", self.r));
        if let Some(n2) = self.n2 {
            out.push(format!("n2 = {n2}"));
        }
        if let Some(ny) = self.ny {
            out.push(format!("ny = {ny}"));
        }
        if let Some(m) = &self.materials_file {
            out.push(format!("materials = {m}"));
        }
        out.push(format!("mat1 = {} ({})", self.mat1_name, self.mat1));
        out.push(format!("mat2 = {} ({})", self.mat2_name, self.mat2));
        out.push(format!("modes = {}", self.modes.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")));
        out.push(format!("tol = {:e}", self.tol));
        out.push(format!("max_iters = {}", self.max_iters));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("40/39").unwrap(), 40.0 / 39.0);
        assert_eq!(parse_number(" 2*40/39 ").unwrap(), 2.0 * 40.0 / 39.0);
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("abc").is_err());
    }

    #[test]
    fn ranges() {
        let r = ValueSpec::Range { start: 40.0 / 39.0, stop: 40.0, count: 39, spacing: Spacing::Linear }.expand();
        assert_eq!(r.len(), 39);
        assert!((r[1] - 80.0 / 39.0).abs() < 1e-13);
        let r = ValueSpec::Range { start: 1e-4, stop: 1e4, count: 9, spacing: Spacing::Log }.expand();
        assert!((r[4] - 1.0).abs() < 1e-12);
        let r = ValueSpec::Range { start: 1.0 / 50.0, stop: 1.0 / 3.0, count: 48, spacing: Spacing::Inverse }.expand();
        assert!((1.0 / r[1] - 49.0).abs() < 1e-10);
    }

    #[test]
    fn spec_file_and_overrides() {
        let text = "# air-steel\nvar = dt\nrange = 40/39 40 39\ndx1 = 1/1100\nr = 100\nmodes = formula, observed_1d\n";
        let mut e = SpecEntries::parse(text).unwrap();
        let s = SweepSpec::from_entries(&e).unwrap();
        assert_eq!(s.values.expand().len(), 39);
        assert_eq!(s.modes, vec![Mode::Formula, Mode::Observed1d]);
        assert_eq!(s.mat1_name, "air");
        e.set("r", "1");
        assert_eq!(SweepSpec::from_entries(&e).unwrap().r, 1.0);
    }

    #[test]
    fn invalid_specs() {
        for text in [
            "var = dt\nvalues = 2, 1\ndx1 = 0.1",
            "var = dt\nvalues = 1",
            "var = dx1\nvalues = 0.1",
            "var = dt\nvalues = 1\ndx1 = 0.1\nmodes = magic",
            "var = dt\nvalues = 1\ndx1 = 0.1\ncolour = red",
            "var = dt\nvalues = 1\ndx1 = 0.1\nmat1 = unobtainium",
            "var = time\nvalues = 1",
            "no equals sign",
        ] {
            let r = SpecEntries::parse(text).and_then(|e| SweepSpec::from_entries(&e));
            assert!(r.is_err(), "{text}");
        }
    }
}
