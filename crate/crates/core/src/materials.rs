//! Thermal material records and the temperature-dependent model for the
//! spring steel 51CrV4.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Constant thermal coefficients of one subdomain.
///
/// `alpha` is the volumetric heat capacity `rho * cp` and `d` the thermal
/// diffusivity `lambda / alpha`; both are computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Thermal conductivity, W/(m K).
    pub lambda: f64,
    /// Density, kg/m^3.
    pub rho: f64,
    /// Specific heat capacity, J/(kg K).
    pub cp: f64,
    /// Volumetric heat capacity, J/(K m^3).
    pub alpha: f64,
    /// Thermal diffusivity, m^2/s.
    pub d: f64,
}

impl Material {
    pub fn new(lambda: f64, rho: f64, cp: f64) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("rho", rho), ("cp", cp)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self::from_parts_unchecked(lambda, rho, cp))
    }

    /// Builds a record directly from conductivity and volumetric heat
    /// capacity. The density carries `alpha` and `cp` is set to one, so the
    /// `alpha == rho * cp` identity still holds exactly.
    pub fn from_lambda_alpha(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(lambda, alpha, 1.0)
    }

    /// No positivity check. Only used where a degenerate coefficient is the
    /// point of the exercise (e.g. vanishing conductivity).
    pub fn from_parts_unchecked(lambda: f64, rho: f64, cp: f64) -> Self {
        let alpha = rho * cp;
        Self { lambda, rho, cp, alpha, d: lambda / alpha }
    }

    pub fn preset(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(name.trim()))
            .map(|p| Self::from_parts_unchecked(p.lambda, p.rho, p.cp))
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lambda={} rho={} cp={} alpha={} D={:e}",
            self.lambda, self.rho, self.cp, self.alpha, self.d
        )
    }
}

/// One row of the built-in material table.
#[derive(Debug, Clone, Copy)]
pub struct PresetRow {
    pub name: &'static str,
    pub lambda: f64,
    pub rho: f64,
    pub cp: f64,
    /// Volumetric heat capacity as tabulated (rounded).
    pub alpha_tabulated: f64,
}

pub const PRESETS: [PresetRow; 3] = [
    PresetRow { name: "air", lambda: 0.0243, rho: 1.293, cp: 1005.0, alpha_tabulated: 1299.5 },
    PresetRow { name: "water", lambda: 0.58, rho: 999.7, cp: 4192.1, alpha_tabulated: 4.1908e6 },
    PresetRow { name: "steel", lambda: 48.9, rho: 7836.0, cp: 443.0, alpha_tabulated: 3_471_348.0 },
];

pub fn preset(name: &str) -> Result<Material> {
    Material::preset(name)
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.name)
}

/// Density of 51CrV4, kg/m^3.
pub const STEEL_51CRV4_RHO: f64 = 7836.0;

/// Heat conductivity of 51CrV4 as a cubic in the temperature.
pub fn steel_lambda(theta: f64) -> f64 {
    40.1 + 0.05 * theta - 0.0001 * theta * theta + 4.9e-8 * theta * theta * theta
}

pub fn steel_cp1(theta: f64) -> f64 {
    34.2 * (0.0026 * theta).exp() + 421.15
}

pub fn steel_cp2(theta: f64) -> f64 {
    956.5 * (-0.012 * (theta - 900.0)).exp() + 0.45 * theta
}

/// Specific heat capacity of 51CrV4: `-10 ln((exp(-c1/10) + exp(-c2/10)) / 2)`,
/// a smooth minimum of the two branches.
///
/// Evaluated with the smaller branch factored out so neither exponential
/// underflows.
pub fn steel_cp(theta: f64) -> f64 {
    soft_min_10(steel_cp1(theta), steel_cp2(theta))
}

fn soft_min_10(a: f64, b: f64) -> f64 {
    let lo = a.min(b);
    let hi = a.max(b);
    // -10 ln((e^{-lo/10} (1 + e^{-(hi-lo)/10})) / 2)
    lo - 10.0 * ((-(hi - lo) / 10.0).exp().ln_1p() - std::f64::consts::LN_2)
}

/// Steel record at temperature `theta` (Kelvin) with the fixed density.
pub fn steel_at(theta: f64) -> Result<Material> {
    Material::new(steel_lambda(theta), STEEL_51CRV4_RHO, steel_cp(theta))
}

/// A named material loaded from a plain-text table.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedMaterial {
    pub name: String,
    pub material: Material,
}

/// Parses `name lambda rho cp` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_material_table(text: &str) -> Result<Vec<NamedMaterial>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected `name lambda rho cp`, got {} fields",
                lineno + 1,
                fields.len()
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: bad number `{s}`", lineno + 1)))
        };
        let material = Material::new(num(fields[1])?, num(fields[2])?, num(fields[3])?)?;
        out.push(NamedMaterial { name: fields[0].to_string(), material });
    }
    Ok(out)
}

pub fn load_material_table(path: impl AsRef<Path>) -> Result<Vec<NamedMaterial>> {
    parse_material_table(&std::fs::read_to_string(path)?)
}

/// Resolves `name` against an optional user table first, then the presets.
pub fn lookup(name: &str, table: &[NamedMaterial]) -> Result<Material> {
    table
        .iter()
        .find(|m| m.name.eq_ignore_ascii_case(name.trim()))
        .map(|m| m.material)
        .map_or_else(|| Material::preset(name), Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn material_from_table_rows() {
        let air = Material::new(0.0243, 1.293, 1005.0).unwrap();
        assert_relative_eq!(air.alpha, 1299.5, max_relative = 1e-4);
        let steel = Material::new(48.9, 7836.0, 443.0).unwrap();
        assert_eq!(steel.alpha, 3_471_348.0);
        let unit = Material::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!((unit.alpha, unit.d), (1.0, 1.0));
    }

    #[test]
    fn derived_fields_are_exact() {
        let m = Material::new(0.58, 999.7, 4192.1).unwrap();
        assert_eq!(m.alpha, 999.7 * 4192.1);
        assert_eq!(m.d, 0.58 / (999.7 * 4192.1));
    }

    #[test]
    fn non_positive_inputs_rejected() {
        assert!(matches!(Material::new(0.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(Material::new(1.0, -1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(Material::new(1.0, 1.0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn presets() {
        assert_eq!(Material::preset("air").unwrap().lambda, 0.0243);
        let water = Material::preset("water").unwrap();
        assert_relative_eq!(water.alpha, 4.1908e6, max_relative = 1e-4);
        let steel = Material::preset("Steel").unwrap();
        assert_eq!(steel.d, 48.9 / 3_471_348.0);
        assert!(matches!(Material::preset("copper"), Err(Error::UnknownMaterial(_))));
    }

    #[test]
    fn presets_reproduce_tabulated_alpha() {
        for row in PRESETS {
            let m = Material::new(row.lambda, row.rho, row.cp).unwrap();
            assert_relative_eq!(m.alpha, row.alpha_tabulated, max_relative = 1e-3);
        }
    }

    #[test]
    fn steel_lambda_values() {
        assert_eq!(steel_lambda(0.0), 40.1);
        let l900 = steel_lambda(900.0);
        assert!((39.82..=39.83).contains(&l900), "{l900}");
        assert_relative_eq!(l900, 39.821, max_relative = 1e-12);
        let l1145 = steel_lambda(1145.0);
        assert!((39.79..=39.81).contains(&l1145), "{l1145}");
    }

    #[test]
    fn soft_min_equal_branch_identity() {
        // -10 ln((2 e^{-c/10}) / 2) == c
        for c in [0.0, 1.0, 443.0, 9000.0, 1e5] {
            assert_relative_eq!(soft_min_10(c, c), c, max_relative = 1e-14, epsilon = 1e-12);
        }
    }

    #[test]
    fn soft_min_matches_naive_form_where_representable() {
        for (a, b) in [(300.0, 310.0), (500.0, 700.0), (10.0, 12.0)] {
            let naive = -10.0 * (((-a / 10.0_f64).exp() + (-b / 10.0_f64).exp()) / 2.0).ln();
            assert_relative_eq!(soft_min_10(a, b), naive, max_relative = 1e-12);
        }
    }

    #[test]
    fn steel_cp_at_reported_temperatures() {
        // 1145 K: the lower branch (c2) is active, soft-min adds ~10 ln 2.
        assert_relative_eq!(steel_cp(1145.0), 572.75, max_relative = 5e-4);
        // 900 K: direct evaluation selects c1 (~776 + 10 ln 2). The reported
        // 1.3684e3 coincides with the upper branch c2(900) + 10 ln 2 instead.
        let cp900 = steel_cp(900.0);
        assert_relative_eq!(cp900, steel_cp1(900.0) + 10.0 * std::f64::consts::LN_2, max_relative = 1e-6);
        assert_relative_eq!(steel_cp2(900.0) + 10.0 * std::f64::consts::LN_2, 1368.4, max_relative = 1e-4);
        // Celsius reading (900 C = 1173.15 K) does not produce the reported value either.
        assert!((steel_cp(1173.15) - 1368.4).abs() > 100.0);
    }

    #[test]
    fn steel_cp_is_finite_and_continuous() {
        let mut prev = steel_cp(273.0);
        let mut t = 273.0;
        while t <= 1500.0 {
            let v = steel_cp(t);
            assert!(v.is_finite() && v > 0.0);
            assert!((v - prev).abs() < 5.0, "jump at {t}: {prev} -> {v}");
            prev = v;
            t += 0.5;
        }
        assert!(soft_min_10(1e4, 2e4).is_finite());
    }

    #[test]
    fn table_parsing() {
        let text = "# name lambda rho cp\nair 0.0243 1.293 1005\n\n  oil 0.15 900 1900 # comment\n";
        let t = parse_material_table(text).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].name, "oil");
        assert_eq!(t[1].material.alpha, 900.0 * 1900.0);
        assert_eq!(lookup("oil", &t).unwrap().lambda, 0.15);
        assert_eq!(lookup("steel", &t).unwrap().lambda, 48.9);
        assert!(parse_material_table("x 1 2").is_err());
        assert!(parse_material_table("x 1 two 3").is_err());
        assert!(parse_material_table("x 1 0 3").is_err());
    }
}
