//! Material listings, asymptotic limits and the estimator evaluation for
//! the two cooling applications.

use std::fmt;
use std::str::FromStr;

use super::format_number;
use crate::discretization_1d::{count_from_width, GridSpec1D};
use crate::error::{Error, Result};
use crate::materials::{lookup, steel_at, Material, NamedMaterial, PRESETS, STEEL_51CRV4_RHO};
use crate::rate_theory::{fem_fem_limits, rate_report, spatial_limit, temporal_limit, RateInputs, RateReport};

/// Presets, optional user materials and optionally steel at given
/// temperatures, as CSV.
pub fn materials_table(extra: &[NamedMaterial], steel_temperatures: &[f64]) -> Result<String> {
    let mut s = String::from("name,lambda,rho,cp,alpha,d\n");
    let mut row = |name: &str, m: &Material| {
        s.push_str(&format!(
            "{name},{},{},{},{},{}\n",
            format_number(m.lambda),
            format_number(m.rho),
            format_number(m.cp),
            format_number(m.alpha),
            format_number(m.d)
        ));
    };
    for p in PRESETS {
        row(p.name, &Material::preset(p.name)?);
    }
    for m in extra {
        row(&m.name, &m.material);
    }
    for &t in steel_temperatures {
        row(&format!("steel_51crv4@{t}K"), &steel_at(t)?);
    }
    Ok(s)
}

/// Material pairs listed when none are given.
pub const DEFAULT_PAIRS: [(&str, &str); 3] = [("air", "steel"), ("water", "steel"), ("air", "water")];

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsRow {
    pub mat1: String,
    pub mat2: String,
    pub temporal_limit: f64,
    /// `lambda_1 / lambda_2`, the spatial limit per unit aspect ratio.
    pub spatial_coefficient: f64,
    pub fem_fem_temporal: f64,
    pub fem_fem_spatial: f64,
}

pub fn asymptotics_table(pairs: &[(String, String)], table: &[NamedMaterial]) -> Result<Vec<AsymptoticsRow>> {
    pairs
        .iter()
        .map(|(a, b)| {
            let (m1, m2) = (lookup(a, table)?, lookup(b, table)?);
            let (ft, fs) = fem_fem_limits(&m1, &m2);
            Ok(AsymptoticsRow {
                mat1: a.clone(),
                mat2: b.clone(),
                temporal_limit: temporal_limit(),
                spatial_coefficient: spatial_limit(1.0, m1.lambda, m2.lambda),
                fem_fem_temporal: ft,
                fem_fem_spatial: fs,
            })
        })
        .collect()
}

pub fn asymptotics_csv(rows: &[AsymptoticsRow]) -> String {
    let mut s = String::from("# spatial limit = spatial_coefficient * r\n");
    s.push_str("mat1,mat2,temporal_limit,spatial_coefficient,fem_fem_temporal,fem_fem_spatial\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.mat1,
            r.mat2,
            format_number(r.temporal_limit),
            format_number(r.spatial_coefficient),
            format_number(r.fem_fem_temporal),
            format_number(r.fem_fem_spatial)
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsiCase {
    FlatPlate,
    FlangedShaft,
}

impl FsiCase {
    pub const ALL: [FsiCase; 2] = [FsiCase::FlatPlate, FsiCase::FlangedShaft];

    pub fn name(self) -> &'static str {
        match self {
            FsiCase::FlatPlate => "flat_plate",
            FsiCase::FlangedShaft => "flanged_shaft",
        }
    }

    /// Fluid cell width normal to the wall, structure cell width, and the
    /// aspect ratio quoted alongside them.
    pub fn widths(self) -> (f64, f64, f64) {
        match self {
            FsiCase::FlatPlate => (9.3736e-5, 1.6667, 1.7780e4),
            FsiCase::FlangedShaft => (1.6538e-4, 1.1364, 6.8713e3),
        }
    }

    /// Maximal aspect ratio stated for the mesh itself, where it differs.
    pub fn mesh_aspect_ratio(self) -> Option<f64> {
        match self {
            FsiCase::FlatPlate => Some(1.7780e5),
            FsiCase::FlangedShaft => None,
        }
    }

    /// Wall temperature of the structure in Kelvin.
    pub fn steel_temperature(self) -> f64 {
        match self {
            FsiCase::FlatPlate => 900.0,
            FsiCase::FlangedShaft => 1145.0,
        }
    }

    /// Steel coefficients as quoted for the estimate (`lambda`, `cp`).
    pub fn quoted_steel(self) -> (f64, f64) {
        match self {
            FsiCase::FlatPlate => (39.82, 1.3684e3),
            FsiCase::FlangedShaft => (39.8, 572.75),
        }
    }
}

impl FromStr for FsiCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FsiCase::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().replace('-', "_"))
            .ok_or_else(|| Error::Parse(format!("unknown case `{s}` (flat_plate, flanged_shaft)")))
    }
}

impl fmt::Display for FsiCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Structure-side interior nodes normal to the wall used for the estimate.
/// The plate's structured grid has ten nodes across its thickness.
pub const FSI_STRUCTURE_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct FsiReport {
    pub case: FsiCase,
    pub grid: GridSpec1D,
    pub air: Material,
    pub steel: Material,
    pub rows: Vec<(f64, RateReport)>,
}

/// Default time steps: four per decade over `[1e-3, 1e1]`.
pub fn default_fsi_time_steps() -> Vec<f64> {
    (0..=16).map(|i| 10f64.powf(-3.0 + i as f64 / 4.0)).collect()
}

/// Rate theory evaluated with the fluid and structure widths of an
/// application grid: air on the fluid side, steel at the wall temperature.
pub fn fsi_estimate(case: FsiCase, time_steps: &[f64]) -> Result<FsiReport> {
    let (dx1, dx2, _) = case.widths();
    let n1 = count_from_width(1.0 / (1.0 / dx1).round(), "dx1")?;
    let grid = GridSpec1D::with_spacing(n1, dx1, FSI_STRUCTURE_NODES, dx2)?;
    let air = Material::preset("air")?;
    let (lambda, cp) = case.quoted_steel();
    let steel = Material::new(lambda, STEEL_51CRV4_RHO, cp)?;
    let rows = time_steps
        .iter()
        .map(|&dt| Ok((dt, rate_report(&RateInputs::new(dt, grid, air, steel)?)?)))
        .collect::<Result<_>>()?;
    Ok(FsiReport { case, grid, air, steel, rows })
}

impl FsiReport {
    pub fn to_csv(&self) -> String {
        let (dx1, dx2, r_quoted) = self.case.widths();
        let mut s = format!("# case = {}\n", self.case);
        s.push_str(&format!("# dx1 = {dx1:e}\n# dx2 = {dx2:e}\n"));
        s.push_str(&format!("# r = dx2/dx1 = {}\n", format_number(dx2 / dx1)));
        s.push_str(&format!("# r quoted with the widths = {r_quoted:e}\n"));
        if let Some(rm) = self.case.mesh_aspect_ratio() {
            s.push_str(&format!("# r stated for the mesh = {rm:e} (differs from dx2/dx1)\n"));
        }
        s.push_str(&format!("# n1 = {}, n2 = {}\n", self.grid.n1, self.grid.n2));
        s.push_str(&format!("# air: {}\n", self.air));
        s.push_str(&format!("# steel at {} K: {}\n", self.case.steel_temperature(), self.steel));
        s.push_str("dt,formula,schur_oracle,beta,delta_r,temporal_limit\n");
        for (dt, r) in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_number(*dt),
                format_number(r.sigma_exact),
                format_number(r.sigma_schur),
                format_number(r.beta),
                format_number(r.delta_r),
                format_number(r.temporal_limit)
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotics_rows() {
        let pairs: Vec<(String, String)> = DEFAULT_PAIRS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let rows = asymptotics_table(&pairs, &[]).unwrap();
        assert!((rows[0].spatial_coefficient / 4.9693e-4 - 1.0).abs() < 1e-4);
        assert!((rows[1].spatial_coefficient / 0.0119 - 1.0).abs() < 5e-3);
        let same = asymptotics_table(&[("water".into(), "water".into())], &[]).unwrap();
        assert_eq!((same[0].temporal_limit, same[0].spatial_coefficient), (0.0, 1.0));
        assert!(asymptotics_table(&[("air".into(), "lava".into())], &[]).is_err());
        assert!(asymptotics_csv(&rows).lines().count() == 5);
    }

    #[test]
    fn fsi_parameters() {
        let (dx1, dx2, r) = FsiCase::FlatPlate.widths();
        assert!((dx2 / dx1 / r - 1.0).abs() < 1e-4);
        let (dx1, dx2, r) = FsiCase::FlangedShaft.widths();
        assert!((dx2 / dx1 / r - 1.0).abs() < 1e-4);
        let rep = fsi_estimate(FsiCase::FlatPlate, &[1e-3, 1.0]).unwrap();
        assert_eq!(rep.grid.n2, FSI_STRUCTURE_NODES);
        assert!(rep.rows.iter().all(|(_, r)| r.sigma_exact < 1.0));
        assert!(rep.to_csv().contains("1.778e5"));
        assert_eq!("flanged-shaft".parse::<FsiCase>().unwrap(), FsiCase::FlangedShaft);
    }

    #[test]
    fn material_listing() {
        let csv = materials_table(&[], &[900.0]).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.contains("steel_51crv4@900K"));
    }
}
