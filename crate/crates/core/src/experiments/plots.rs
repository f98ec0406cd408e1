//! Gnuplot scripts for sweep tables.

use crate::error::{Error, Result};

/// A parsed CSV file as written by the sweep and table drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Parses `#` comment lines, one header line and numeric rows.
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut comments = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match &header {
            None => {
                if cells.iter().any(|c| c.is_empty()) {
                    return Err(Error::Parse(format!("line {}: empty column name", lineno + 1)));
                }
                header = Some(cells.iter().map(|c| c.to_string()).collect());
            }
            Some(h) => {
                if cells.len() != h.len() {
                    return Err(Error::Parse(format!(
                        "line {}: expected {} columns, found {}",
                        lineno + 1,
                        h.len(),
                        cells.len()
                    )));
                }
                let row = cells
                    .iter()
                    .map(|c| c.parse::<f64>().map_err(|_| Error::Parse(format!("line {}: bad number `{c}`", lineno + 1))))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
        }
    }
    let header = header.ok_or_else(|| Error::Parse("missing header line".into()))?;
    Ok(CsvTable { comments, header, rows })
}

/// Builds a gnuplot script drawing every value column of `csv_text` against
/// the first column on log-log axes. `data_file` is the path the script
/// reads the data from.
pub fn emit_plots(csv_text: &str, data_file: &str) -> Result<String> {
    let t = parse_csv(csv_text)?;
    let xname = &t.header[0];
    let series: Vec<(usize, &String)> =
        t.header.iter().enumerate().skip(1).filter(|(_, h)| !h.ends_with("_status")).collect();

    let mut s = String::from("# gnuplot script generated by dncoupling\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile missing 'nan'\n");
    s.push_str("set logscale xy\n");
    s.push_str("set format y '%.1e'\n");
    s.push_str(&format!("set xlabel '{}'\n", xname));
    s.push_str("set ylabel 'convergence rate'\n");
    s.push_str("set key autotitle columnhead\n");
    if t.rows.is_empty() || series.is_empty() {
        s.push_str("# warning: no data rows to plot\n");
        s.push_str("plot NaN notitle\n");
        return Ok(s);
    }
    let quoted = data_file.replace('\'', "''");
    let parts: Vec<String> = series
        .iter()
        .enumerate()
        .map(|(k, (col, _))| {
            let src = if k == 0 { format!("'{quoted}'") } else { "''".to_string() };
            format!("{src} using 1:{} with linespoints", col + 1)
        })
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_series() {
        let csv = "# c\ndt,formula,observed_1d,observed_1d_status\n1,0.5,0.5,1\n2,0.4,0.4,1\n";
        let s = emit_plots(csv, "out.csv").unwrap();
        assert_eq!(s.matches("with linespoints").count(), 2);
        assert!(s.contains("using 1:2") && s.contains("using 1:3") && !s.contains("using 1:4"));
        assert!(s.contains("set logscale xy"));
    }

    #[test]
    fn empty_data_gives_empty_plot() {
        let s = emit_plots("dt,formula\n", "x.csv").unwrap();
        assert!(s.contains("# warning"));
        assert!(s.contains("plot NaN notitle"));
    }

    #[test]
    fn malformed_input() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("dt,formula\n1\n").is_err());
        assert!(parse_csv("dt,formula\n1,abc\n").is_err());
        assert!(parse_csv(",x\n").is_err());
    }

    #[test]
    fn nan_cells_parse() {
        let t = parse_csv("dt,formula\n1,nan\n").unwrap();
        assert!(t.rows[0][1].is_nan());
        assert_eq!(t.column("formula"), Some(1));
    }
}
