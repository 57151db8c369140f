//! Grids and CSV tables of the entanglement curves.
//!
//! Numbers are written with 12 significant digits, in scientific form when
//! `0 < |x| < 1e-4` or `|x| ≥ 1e12`, with `.` as decimal separator. Output
//! depends only on the inputs.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::boson::chi_from_tau;
use crate::entanglement::{curve_chi, energy_closed_form, entropy_closed_form, psi_n_stats, EntanglementCurvePoint};
use crate::error::{Error, Result};

/// Library version written into table headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits of every written number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Fixed CSV rendering of a real number.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if x.abs() < 1e-4 || exp >= SIGNIFICANT_DIGITS as i32 {
        return sci;
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => Err(Error::InvalidGrid(format!("unknown spacing `{s}` (expected linear or log)"))),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        })
    }
}

/// `count` points from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    /// Requires `lower ≤ min < max < ∞` and `count ≥ 2`.
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing, lower: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min >= lower && min < max) {
            return Err(Error::InvalidGrid(format!("need {lower} ≤ min < max, got [{min}, {max}]")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {count}")));
        }
        if spacing == Spacing::Log && min <= 0.0 {
            return Err(Error::InvalidGrid("log spacing needs min > 0".into()));
        }
        Ok(Self { min, max, count, spacing })
    }

    /// Endpoints are exact; interior points strictly increase.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }

    fn describe(&self, name: &str) -> String {
        format!(
            "{name} in [{}, {}], {} points, {}",
            format_number(self.min),
            format_number(self.max),
            self.count,
            self.spacing
        )
    }
}

fn write_row(out: &mut impl Write, values: &[f64]) -> Result<()> {
    let row: Vec<String> = values.iter().map(|&x| format_number(x)).collect();
    writeln!(out, "{}", row.join(","))?;
    Ok(())
}

/// `ΔS(χ) = S(χ) − ln χ` sampled on a χ grid.
#[derive(Clone, Debug)]
pub struct CurveTable {
    pub grid: GridSpec,
    pub points: Vec<EntanglementCurvePoint<f64>>,
}

impl CurveTable {
    pub const HEADER: &'static str = "chi,tau,S,E,lnchi,deltaS";

    /// `χ ≥ 1`.
    pub fn from_grid(grid: GridSpec) -> Result<Self> {
        if grid.min < 1.0 {
            return Err(Error::InvalidGrid("chi grid must start at 1 or above".into()));
        }
        let points = grid.points().into_iter().map(curve_chi).collect::<Result<Vec<_>>>()?;
        if points.windows(2).any(|w| w[1].chi <= w[0].chi) {
            return Err(Error::InvalidGrid("grid too fine to keep chi strictly increasing".into()));
        }
        Ok(Self { grid, points })
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# sqz {VERSION} fig1: deltaS = S(chi) - ln(chi)")?;
        writeln!(out, "# grid: {}", self.grid.describe("chi"))?;
        writeln!(out, "{}", Self::HEADER)?;
        for p in &self.points {
            write_row(out, &[p.chi, p.tau, p.s, p.e, p.lnchi, p.delta_s])?;
        }
        Ok(())
    }
}

/// Which parameter a [`ParamCurveTable`] is sampled on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveParam {
    Tau,
    Chi,
}

/// Entropy and energy in both parametrizations on one grid.
#[derive(Clone, Debug)]
pub struct ParamCurveTable {
    pub param: CurveParam,
    pub grid: GridSpec,
    /// `[tau, chi, S_tau, E_tau, S_chi, E_chi]` per row.
    pub rows: Vec<[f64; 6]>,
}

impl ParamCurveTable {
    pub const HEADER: &'static str = "tau,chi,S_tau,E_tau,S_chi,E_chi";

    /// τ grids need `min > 0`, χ grids `min ≥ 1`.
    pub fn from_grid(param: CurveParam, grid: GridSpec) -> Result<Self> {
        let rows = grid
            .points()
            .into_iter()
            .map(|x| {
                let (tau, chi) = match param {
                    CurveParam::Tau => {
                        if x <= 0.0 {
                            return Err(Error::InvalidGrid("tau grid must be positive".into()));
                        }
                        (x, chi_from_tau(x))
                    }
                    CurveParam::Chi => {
                        let p = curve_chi(x)?;
                        (p.tau, x)
                    }
                };
                let (s_tau, e_tau) =
                    if tau.is_infinite() { (0.0, 0.0) } else { (entropy_closed_form(tau)?, energy_closed_form(tau)?) };
                let p = curve_chi(chi)?;
                Ok([tau, chi, s_tau, e_tau, p.s, p.e])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { param, grid, rows })
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let name = match self.param {
            CurveParam::Tau => "tau",
            CurveParam::Chi => "chi",
        };
        writeln!(out, "# sqz {VERSION} curves: S and E from tau and from chi")?;
        writeln!(out, "# grid: {}", self.grid.describe(name))?;
        writeln!(out, "{}", Self::HEADER)?;
        for row in &self.rows {
            write_row(out, row)?;
        }
        Ok(())
    }
}

/// Equal-weight twin-Fock states against the TMSS at equal energy.
#[derive(Clone, Debug)]
pub struct PsiCompareTable {
    /// `[N, E', S', S(chi = N), deltaS]` per row.
    pub rows: Vec<[f64; 5]>,
}

impl PsiCompareTable {
    pub const HEADER: &'static str = "N,E,S_psi,S_tmss,deltaS";

    /// Rows for `N = 2 ..= n_max`.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidGrid(format!("need N_max ≥ 2, got {n_max}")));
        }
        let rows = (2..=n_max)
            .map(|n| {
                let (e, s_psi) = psi_n_stats::<f64>(n)?;
                let p = curve_chi(n as f64)?;
                Ok([n as f64, e, s_psi, p.s, p.s - s_psi])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# sqz {VERSION} psi-compare: equal-weight twin-Fock state vs TMSS at equal energy")?;
        writeln!(out, "{}", Self::HEADER)?;
        for row in &self.rows {
            write_row(out, row)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1.00000000000");
        assert_eq!(format_number(-2.5), "-2.50000000000");
        assert_eq!(format_number(0.261624071882274), "0.261624071882");
        assert_eq!(format_number(1e-4), "0.000100000000000");
        assert_eq!(format_number(3.5e-5), "3.50000000000e-5");
        assert_eq!(format_number(9.9999999999999), "10.0000000000");
        assert_eq!(format_number(123456.0), "123456.000000");
        assert_eq!(format_number(1e12), "1.00000000000e12");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn grids() {
        let g = GridSpec::new(1.0, 10.0, 10, Spacing::Linear, 1.0).unwrap();
        assert_eq!(g.points(), (1..=10).map(f64::from).collect::<Vec<_>>());
        let g = GridSpec::new(1.0, 1e4, 5, Spacing::Log, 1.0).unwrap();
        let p = g.points();
        assert_eq!((p[0], p[4]), (1.0, 1e4));
        assert!((p[2] - 100.0).abs() < 1e-10);
        assert!(GridSpec::new(0.5, 10.0, 10, Spacing::Linear, 1.0).is_err());
        assert!(GridSpec::new(2.0, 2.0, 10, Spacing::Linear, 1.0).is_err());
        assert!(GridSpec::new(1.0, 2.0, 1, Spacing::Linear, 1.0).is_err());
        assert!("cubic".parse::<Spacing>().is_err());
    }

    #[test]
    fn fig1_rows() {
        let t = CurveTable::from_grid(GridSpec::new(1.0, 10.0, 10, Spacing::Linear, 1.0).unwrap()).unwrap();
        assert_eq!(t.points[0].delta_s, 0.0);
        assert!((t.points[1].delta_s - 0.26165).abs() < 1e-4);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with('#') && lines[1].starts_with('#'));
        assert_eq!(lines[2], CurveTable::HEADER);
        assert_eq!(lines[3], "1.00000000000,inf,0,0,0,0");
        assert_eq!(lines.len(), 13);
    }

    #[test]
    fn both_parametrizations_agree() {
        let t = ParamCurveTable::from_grid(
            CurveParam::Tau,
            GridSpec::new(2f64.ln(), 50.0, 4, Spacing::Linear, 0.0).unwrap(),
        )
        .unwrap();
        let first = t.rows[0];
        assert!((first[1] - 3.0).abs() < 1e-14);
        assert!((first[2] - 4f64.ln()).abs() < 1e-14 && (first[3] - 1.0).abs() < 1e-14);
        assert!((first[4] - first[2]).abs() < 1e-14 && (first[5] - first[3]).abs() < 1e-14);
        let last = t.rows[3];
        assert!(last[2] < 1e-19 && last[3] < 1e-21);
        let c = ParamCurveTable::from_grid(CurveParam::Chi, GridSpec::new(1.0, 3.0, 3, Spacing::Linear, 1.0).unwrap())
            .unwrap();
        assert!((c.rows[2][0] - 2f64.ln()).abs() < 1e-14);
        assert_eq!(c.rows[0][2..], [0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn psi_compare_rows() {
        let t = PsiCompareTable::new(100).unwrap();
        assert_eq!(t.rows.len(), 99);
        assert!((t.rows[0][4] - 0.26165).abs() < 1e-4);
        assert!(t.rows.windows(2).all(|w| w[1][4] > w[0][4]));
        assert!(t.rows.iter().all(|r| r[4] > 0.0 && r[4] < 1.0 - 2f64.ln()));
        assert!(PsiCompareTable::new(1).is_err());
    }
}
