//! Files written by the commands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::fmt_num;
use crate::verify::Grid;

pub const MODEL_CSV: &str = "model.csv";
pub const VERIFY_CSV: &str = "verify.csv";
pub const EVOLUTION_CSV: &str = "evolution.csv";
pub const ANALYTIC_CSV: &str = "analytic.csv";
pub const ERRORS_CSV: &str = "errors.csv";
pub const PLOT_SCRIPT: &str = "plot.gp";

/// Writes through a temporary sibling and renames it into place, so readers
/// never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut file = fs::File::create(&tmp)?;
    file.write_all(contents.as_bytes())?;
    file.sync_all()?;
    drop(file);
    fs::rename(&tmp, path)?;
    Ok(())
}

/// CSV text with `header` and one row per grid node in t-major order.
pub fn grid_csv(header: &str, grid: &Grid, mut row: impl FnMut(usize, usize, f64, f64) -> Vec<f64>) -> String {
    let mut s = String::with_capacity(grid.nx * grid.nt * 64);
    s.push_str(header);
    s.push('\n');
    for (i, j, x, t) in grid.nodes() {
        let mut cols = vec![fmt_num(x), fmt_num(t)];
        cols.extend(row(i, j, x, t).into_iter().map(fmt_num));
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

/// `t` values found in the second column of a CSV with a header row.
fn time_column(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut ts: Vec<f64> = text
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(1)?.parse().ok())
        .collect();
    ts.dedup();
    Ok(ts)
}

/// Gnuplot script for whatever CSVs exist in `dir`. `None` when there is
/// nothing to plot.
pub fn plot_script(dir: &Path) -> Result<Option<String>> {
    let existing = |name: &str| -> Option<PathBuf> {
        let p = dir.join(name);
        p.is_file().then_some(p)
    };
    let mut s = String::from(
        "# gnuplot script; run from the output directory: gnuplot -persist plot.gp\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'x'\n",
    );
    let mut any = false;

    if let Some(model) = existing(MODEL_CSV) {
        let ts = time_column(&model)?;
        if !ts.is_empty() {
            let picks = [ts[0], ts[ts.len() / 2], ts[ts.len() - 1]];
            let tol = if ts.len() > 1 { 0.25 * (ts[1] - ts[0]).abs() } else { 1e-12 };
            s.push_str("\n# partner potential V1(x, t) on three time slices\n");
            s.push_str("set ylabel 'V1'\n");
            let curves: Vec<String> = picks
                .iter()
                .map(|t| {
                    format!(
                        "'{MODEL_CSV}' using 1:(abs($2 - {t}) < {tol} ? $3 : 1/0) with lines title 'V1, t = {t}'",
                        t = fmt_num(*t),
                        tol = fmt_num(tol)
                    )
                })
                .collect();
            s.push_str(&format!("plot {}\n", curves.join(", \\\n     ")));
            any = true;
        }
    }

    if let (Some(evolution), Some(_)) = (existing(EVOLUTION_CSV), existing(ANALYTIC_CSV)) {
        let ts = time_column(&evolution)?;
        if let Some(t) = ts.last() {
            let tol = if ts.len() > 1 { 0.25 * (ts[1] - ts[0]).abs() } else { 1e-12 };
            let (t, tol) = (fmt_num(*t), fmt_num(tol));
            s.push_str("\n# numerical evolution against the analytic solution at the final time\n");
            if any {
                s.push_str("pause -1 'next plot'\n");
            }
            s.push_str("set ylabel 'value'\n");
            s.push_str(&format!(
                "plot '{EVOLUTION_CSV}' using 1:(abs($2 - {t}) < {tol} ? $3 : 1/0) with points pt 7 ps 0.4 title 'numerical, t = {t}', \\\n     \
                 '{ANALYTIC_CSV}' using 1:(abs($2 - {t}) < {tol} ? $3 : 1/0) with lines title 'analytic, t = {t}'\n"
            ));
            any = true;
        }
    }

    if let Some(_) = existing(ERRORS_CSV) {
        s.push_str("\n# error history\n");
        if any {
            s.push_str("pause -1 'next plot'\n");
        }
        s.push_str("set xlabel 't'\nset ylabel 'error'\nset logscale y\n");
        s.push_str(&format!(
            "plot '{ERRORS_CSV}' using 1:2 with lines title 'Linf', '{ERRORS_CSV}' using 1:3 with lines title 'L2'\n"
        ));
        s.push_str("unset logscale y\n");
        any = true;
    }

    Ok(any.then_some(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_leaves_no_temporary() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.csv");
        write_atomic(&p, "x\n1\n").unwrap();
        write_atomic(&p, "x\n2\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "x\n2\n");
        let names: Vec<_> = fs::read_dir(p.parent().unwrap()).unwrap().collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn grid_csv_is_t_major() {
        let g = Grid::new(5, 5, 0.0, 1.0, 0.0, 1.0).unwrap();
        let csv = grid_csv("x,t,v", &g, |i, j, _, _| vec![(10 * j + i) as f64]);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 26);
        assert!(lines[2].starts_with("2.5000000000000000e-1,0.0000000000000000e0,"));
        assert!(lines[6].ends_with(",1.0000000000000000e1"));
    }

    #[test]
    fn plot_script_requires_inputs() {
        let dir = tempfile::tempdir().unwrap();
        assert!(plot_script(dir.path()).unwrap().is_none());
        let g = Grid::new(5, 5, 0.0, 1.0, 0.0, 1.0).unwrap();
        fs::write(dir.path().join(MODEL_CSV), grid_csv("x,t,V1", &g, |_, _, _, _| vec![0.0])).unwrap();
        let s = plot_script(dir.path()).unwrap().unwrap();
        assert_eq!(s.matches("title 'V1, t = ").count(), 3);
    }
}
