//! Sweep drivers, tables and plot scripts behind the command-line tool.

pub mod plots;
pub mod spec;
pub mod sweep;
pub mod tables;

pub use plots::{emit_plots, parse_csv, CsvTable};
pub use spec::{Mode, SpecEntries, SweepSpec, SweepVar};
pub use sweep::{run_sweep, PointStatus, SweepRow, SweepTable};

/// Fixed number formatting used in every CSV: 17 significant digits in
/// scientific notation, `nan` for missing values.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::format_number;

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 4.9693e-4, -2.5, f64::INFINITY] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_number(f64::NAN), "nan");
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
    }
}
