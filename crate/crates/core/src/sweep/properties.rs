//! Monotonicity and ordering properties each figure sweep must show.

use super::{CheckLine, Param, SweepSpec, Table};
use crate::error::{Error, Result};

const SLACK: f64 = 1e-12;

/// Table values as `value[curve][point]` for one column, with the axes.
struct Grid {
    axis1: Vec<f64>,
    axis2: Vec<f64>,
    param1: Param,
    param2: Option<Param>,
    table: Table,
}

impl Grid {
    fn new(spec: &SweepSpec, table: &Table) -> Self {
        Grid {
            axis1: spec.axis1.values(),
            axis2: spec.axis2.as_ref().map_or(vec![f64::NAN], |a| a.values()),
            param1: spec.axis1.param,
            param2: spec.axis2.as_ref().map(|a| a.param),
            table: table.clone(),
        }
    }

    fn column(&self, name: &str) -> Result<Vec<Vec<f64>>> {
        let flat = self.table.column(name).ok_or_else(|| Error::Domain(format!("no column `{name}`")))?;
        Ok(flat.chunks(self.axis1.len()).map(<[f64]>::to_vec).collect())
    }

    fn at(&self, i2: usize, i1: usize) -> String {
        match self.param2 {
            Some(p2) => format!("{}={} {}={}", self.param1, self.axis1[i1], p2, self.axis2[i2]),
            None => format!("{}={}", self.param1, self.axis1[i1]),
        }
    }
}

/// Collects violations of one named property.
struct Property {
    name: String,
    checked: usize,
    first: Option<String>,
    violations: usize,
}

impl Property {
    fn new(name: impl Into<String>) -> Self {
        Property { name: name.into(), checked: 0, first: None, violations: 0 }
    }

    fn expect(&mut self, ok: bool, at: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(at());
            }
        }
    }

    fn line(self) -> CheckLine {
        let detail = match self.first {
            None => format!("{} comparisons", self.checked),
            Some(at) => format!("{} of {} comparisons violated, first at {at}", self.violations, self.checked),
        };
        CheckLine { name: self.name, pass: self.violations == 0 && self.checked > 0, detail }
    }
}

fn not_below(next: f64, prev: f64) -> bool {
    next >= prev - SLACK * prev.abs().max(1.0) || next == prev
}

/// Along axis 1 on every curve, restricted to points where `keep(axis1)` holds.
fn along_axis(
    grid: &Grid,
    column: &str,
    increasing: bool,
    keep: impl Fn(f64) -> bool,
    name: &str,
) -> Result<CheckLine> {
    let v = grid.column(column)?;
    let mut p = Property::new(name);
    for (i2, curve) in v.iter().enumerate() {
        let idx: Vec<usize> = (0..curve.len()).filter(|&i| keep(grid.axis1[i])).collect();
        for w in idx.windows(2) {
            let (a, b) = (curve[w[0]], curve[w[1]]);
            let ok = if increasing { not_below(b, a) } else { not_below(a, b) };
            p.expect(ok, || format!("{} ({a} then {b})", grid.at(i2, w[1])));
        }
    }
    Ok(p.line())
}

/// Across the curves (axis 2, in list order) at every axis-1 point where `keep` holds.
fn across_curves(
    grid: &Grid,
    column: &str,
    increasing: bool,
    keep: impl Fn(f64) -> bool,
    name: &str,
) -> Result<CheckLine> {
    let v = grid.column(column)?;
    let mut p = Property::new(name);
    for i1 in (0..grid.axis1.len()).filter(|&i| keep(grid.axis1[i])) {
        for i2 in 1..v.len() {
            let (a, b) = (v[i2 - 1][i1], v[i2][i1]);
            let ok = if increasing { not_below(b, a) } else { not_below(a, b) };
            p.expect(ok, || format!("{} ({a} then {b})", grid.at(i2, i1)));
        }
    }
    Ok(p.line())
}

/// `lower ≤ upper` pointwise where `keep(axis1)` holds.
fn ordered(grid: &Grid, lower: &str, upper: &str, keep: impl Fn(f64) -> bool, name: &str) -> Result<CheckLine> {
    let (lo, up) = (grid.column(lower)?, grid.column(upper)?);
    let mut p = Property::new(name);
    for i2 in 0..lo.len() {
        for i1 in (0..grid.axis1.len()).filter(|&i| keep(grid.axis1[i])) {
            let (a, b) = (lo[i2][i1], up[i2][i1]);
            p.expect(not_below(b, a), || format!("{} ({a} vs {b})", grid.at(i2, i1)));
        }
    }
    Ok(p.line())
}

/// On every curve the smallest value of `column` sits at axis-1 value 0.
fn minimum_at_zero(grid: &Grid, column: &str, name: &str) -> Result<CheckLine> {
    let v = grid.column(column)?;
    let zero = grid.axis1.iter().position(|x| x.abs() < 1e-12).ok_or_else(|| Error::Domain("axis misses 0".into()))?;
    let mut p = Property::new(name);
    for (i2, curve) in v.iter().enumerate() {
        let ok = curve.iter().all(|&x| not_below(x, curve[zero]));
        p.expect(ok, || grid.at(i2, zero));
    }
    Ok(p.line())
}

fn all() -> impl Fn(f64) -> bool {
    |_| true
}

fn positive() -> impl Fn(f64) -> bool {
    |x| x > 0.0
}

/// Properties of the table produced by figure preset `id`.
pub fn figure_properties(id: &str, spec: &SweepSpec, table: &Table) -> Result<Vec<CheckLine>> {
    let g = Grid::new(spec, table);
    let id = id.trim().trim_start_matches("fig");
    let lines = match id {
        "2a" => vec![
            across_curves(&g, "log10_F", true, all(), "F non-decreasing in |γ|")?,
            along_axis(&g, "log10_F", true, all(), "F non-decreasing in g")?,
        ],
        "2b" => vec![
            along_axis(&g, "log10_F", true, all(), "F non-decreasing in |γ|")?,
            across_curves(&g, "log10_F", true, all(), "F non-decreasing in |β|")?,
        ],
        "2c" => vec![
            across_curves(&g, "log10_QCRB", false, all(), "QCRB non-increasing in |γ|")?,
            along_axis(&g, "log10_QCRB", false, all(), "QCRB non-increasing in g")?,
        ],
        "2d" => vec![
            along_axis(&g, "log10_QCRB", false, all(), "QCRB non-increasing in |γ|")?,
            across_curves(&g, "log10_QCRB", false, all(), "QCRB non-increasing in |β|")?,
        ],
        "3a" => vec![
            minimum_at_zero(&g, "log10_dphi", "sensitivity optimal at φ = 0")?,
            across_curves(&g, "log10_dphi", false, |x| x.abs() < 1e-12, "Δφ at φ = 0 non-increasing in |γ|")?,
        ],
        "3b" => {
            let v = g.column("signal")?;
            let zero = g.axis1.iter().position(|x| x.abs() < 1e-12).unwrap_or(0);
            let mut p = Property::new("signal vanishes at φ = 0");
            for (i2, curve) in v.iter().enumerate() {
                p.expect(curve[zero].abs() < 1e-12, || g.at(i2, zero));
            }
            vec![p.line()]
        }
        "4a" => vec![across_curves(&g, "log10_dphi", false, all(), "Δφ non-increasing in |γ|")?],
        "4b" => vec![
            across_curves(&g, "log10_dphi", false, all(), "Δφ non-increasing in |γ|")?,
            along_axis(&g, "log10_dphi", false, all(), "Δφ non-increasing in |β|")?,
        ],
        "4c" => {
            let v = g.column("log10_dphi")?;
            let first = &v[0];
            let ratio = 10f64.powf(first[first.len() - 1] - first[0]);
            vec![
                along_axis(&g, "log10_dphi", false, all(), "Δφ non-increasing in |γ|")?,
                across_curves(&g, "log10_dphi", false, all(), "Δφ non-increasing in |β|")?,
                CheckLine {
                    name: "Δφ(|γ|=5)/Δφ(|γ|=0) at |β|=1 in [0.42, 0.44]".into(),
                    pass: (0.42..=0.44).contains(&ratio),
                    detail: format!("ratio {ratio:.6}"),
                },
            ]
        }
        "4d" => vec![along_axis(&g, "log10_dphi", false, all(), "Δφ non-increasing in |γ|")?],
        "5a" => vec![
            ordered(&g, "HL", "SQL", all(), "HL ≤ SQL")?,
            ordered(&g, "dphi", "SQL", |x| x > 0.25, "Δφ ≤ SQL for g > 0.25")?,
            ordered(&g, "HL", "dphi", all(), "Δφ ≥ HL")?,
        ],
        "5b" => vec![
            ordered(&g, "HL", "SQL", all(), "HL ≤ SQL")?,
            along_axis(&g, "dphi", false, all(), "Δφ non-increasing in |γ|")?,
        ],
        "6a" => vec![
            along_axis(&g, "log10_F_L", true, all(), "F_L non-decreasing in η")?,
            across_curves(&g, "log10_F_L", true, all(), "F_L non-decreasing in |γ|")?,
        ],
        "6b" => vec![
            along_axis(&g, "log10_F_L", true, all(), "F_L non-decreasing in η")?,
            across_curves(&g, "log10_F_L", true, all(), "F_L non-decreasing in |γ|")?,
        ],
        "6c" | "6d" => vec![
            along_axis(&g, "log10_L-QCRB", false, all(), "L-QCRB non-increasing in η")?,
            across_curves(&g, "log10_L-QCRB", false, all(), "L-QCRB non-increasing in |γ|")?,
        ],
        "7a" => vec![along_axis(&g, "log10_F_L", true, all(), "F_L non-decreasing in |β|")?],
        "7b" => vec![along_axis(&g, "log10_L-QCRB", false, all(), "L-QCRB non-increasing in |β|")?],
        "8" => {
            let v = g.column("gap_delta")?;
            let n1 = g.axis1.len();
            let mut growth = Property::new("improved region Δ̃ < 0 grows with |γ|");
            let count = |c: &[f64]| c.iter().filter(|x| **x < 0.0).count();
            for i2 in 1..v.len() {
                let (a, b) = (count(&v[i2 - 1]), count(&v[i2]));
                growth.expect(b >= a, || format!("{} ({a} then {b} improved points)", g.at(i2, n1 - 1)));
            }
            let mut ideal = Property::new("Δ̃ < 0 at η = 1 for |γ| > 0");
            for (i2, curve) in v.iter().enumerate().filter(|(i2, _)| g.axis2[*i2] > 0.0) {
                ideal.expect(curve[n1 - 1] < 0.0, || g.at(i2, n1 - 1));
            }
            vec![
                growth.line(),
                ideal.line(),
                across_curves(&g, "gap_delta", false, all(), "Δ̃ non-increasing in |γ|")?,
            ]
        }
        "10a" => vec![
            minimum_at_zero(&g, "log10_dphi", "lossless sensitivity optimal at φ = 0")?,
            minimum_at_zero(&g, "log10_dphi_L", "lossy sensitivity optimal at φ = 0")?,
            ordered(&g, "log10_dphi", "log10_dphi_L", all(), "loss never helps")?,
        ],
        "10b" => {
            let (s, sl) = (g.column("signal")?, g.column("signal_L")?);
            let scale = spec.base.t.sqrt();
            let mut p = Property::new("lossy signal is √T times the lossless one");
            for i2 in 0..s.len() {
                for i1 in 0..g.axis1.len() {
                    let (a, b) = (sl[i2][i1], scale * s[i2][i1]);
                    p.expect((a - b).abs() <= 1e-12 * b.abs().max(1.0), || g.at(i2, i1));
                }
            }
            vec![p.line()]
        }
        "11a" => vec![
            along_axis(&g, "log10_dphi_L", false, all(), "Δφ_L non-increasing in T")?,
            across_curves(&g, "log10_dphi_L", false, all(), "Δφ_L non-increasing in |γ|")?,
        ],
        "11b" => {
            let (d, dl) = (g.column("log10_dphi")?, g.column("log10_dphi_L")?);
            let mut gap = Property::new("gap Δφ_L − Δφ non-increasing in |γ|");
            for i1 in 0..g.axis1.len() {
                for i2 in 1..d.len() {
                    let diff = |k: usize| 10f64.powf(dl[k][i1]) - 10f64.powf(d[k][i1]);
                    let (a, b) = (diff(i2 - 1), diff(i2));
                    gap.expect(not_below(a, b), || format!("{} ({a} then {b})", g.at(i2, i1)));
                }
            }
            vec![
                ordered(&g, "log10_dphi", "log10_dphi_L", positive(), "loss never helps")?,
                gap.line(),
            ]
        }
        other => return Err(Error::Domain(format!("unknown figure `{other}`"))),
    };
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{figure_preset, run_sweep, FIGURE_IDS};

    #[test]
    fn every_figure_has_properties() {
        for id in ["2a", "4c", "8", "10b", "11b"] {
            let spec = figure_preset(id).unwrap();
            let table = run_sweep(&spec).unwrap();
            let lines = figure_properties(id, &spec, &table).unwrap();
            assert!(!lines.is_empty());
            for l in lines {
                assert!(l.pass, "{id}: {l}");
            }
        }
        assert_eq!(FIGURE_IDS.len(), 23);
    }

    #[test]
    fn violations_are_reported() {
        let mut spec = figure_preset("5b").unwrap();
        spec.axis1 = crate::sweep::Axis::list(Param::Gamma, &[0.0, 1.0]);
        let mut table = run_sweep(&spec).unwrap();
        // make Δφ grow with |γ|
        table.rows[1][1] = table.rows[0][1] * 2.0;
        let lines = figure_properties("5b", &spec, &table).unwrap();
        assert!(!lines[1].pass, "{}", lines[1]);
        assert!(lines[1].detail.contains("gamma=1"));
    }
}
