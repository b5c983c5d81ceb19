//! Run configuration: defaults, `key = value` files and flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::heat_seed::HeatSolution;
use crate::solver::Boundary;
use crate::verify::Grid;

/// Every numeric threshold the commands compare against.
///
/// | name             | default | meaning                                                        |
/// |------------------|---------|----------------------------------------------------------------|
/// | `identity`       | 1e-10   | max residual of identities evaluated with exact derivatives     |
/// | `order_min`      | 1.9     | lowest accepted convergence order of finite-difference checks   |
/// | `order_max`      | 2.1     | highest accepted convergence order                              |
/// | `rounding_floor` | 1e-7    | finite-difference residuals below this count as exact           |
/// | `evolve_linf`    | 5e-3    | max final-time error of a reference evolution                   |
/// | `growth_limit`   | 1e6     | solver aborts when `max|u|` grows by more than this factor      |
/// | `edge`           | 1e-12   | initial data above this at the edges triggers a warning         |
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub identity: f64,
    pub order_min: f64,
    pub order_max: f64,
    pub rounding_floor: f64,
    pub evolve_linf: f64,
    pub growth_limit: f64,
    pub edge: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            identity: 1e-10,
            order_min: 1.9,
            order_max: 2.1,
            rounding_floor: 1e-7,
            evolve_linf: 5e-3,
            growth_limit: 1e6,
            edge: 1e-12,
        }
    }
}

impl Thresholds {
    pub const NAMES: [&'static str; 7] = [
        "identity",
        "order_min",
        "order_max",
        "rounding_floor",
        "evolve_linf",
        "growth_limit",
        "edge",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "identity" => &mut self.identity,
            "order_min" => &mut self.order_min,
            "order_max" => &mut self.order_max,
            "rounding_floor" => &mut self.rounding_floor,
            "evolve_linf" => &mut self.evolve_linf,
            "growth_limit" => &mut self.growth_limit,
            "edge" => &mut self.edge,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> std::result::Result<(), String> {
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("threshold `{name}` must be positive, got {value}"));
        }
        match self.slot(name) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(format!(
                "unknown threshold `{name}` (known: {})",
                Self::NAMES.join(", ")
            )),
        }
    }
}

/// What `evolve` integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    /// `F[U1] P1 = 0`
    FokkerPlanck,
    /// `D[V1] Ψ1 = 0`
    Diffusion,
    /// `F[0] K = 0` from a heat-kernel slice: solver control run.
    Heat,
}

impl std::str::FromStr for System {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fp" => Ok(System::FokkerPlanck),
            "diffusion" => Ok(System::Diffusion),
            "heat" => Ok(System::Heat),
            _ => Err(format!("expected fp, diffusion or heat, got `{s}`")),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::FokkerPlanck => "fp",
            System::Diffusion => "diffusion",
            System::Heat => "heat",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Heat seed `ω`; default `poly:B=1`.
    pub seed: HeatSolution,
    /// Default 2.
    pub c: f64,
    /// Default 1.
    pub a: f64,
    /// Default 0.
    pub b: f64,
    /// Default `321,191,-8,8,0.05,1`, which has nodes at `x = 1` and `t = 1`.
    pub grid: Grid,
    pub thresholds: Thresholds,
    /// Default `out`.
    pub out: PathBuf,
    /// Default `dirichlet_zero`.
    pub boundary: Boundary,
    /// Default `fp`.
    pub system: System,
    /// Shift added to `g2` (negative control); default 0.
    pub g2_shift: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: "poly:B=1".parse().expect("default seed parses"),
            c: 2.0,
            a: 1.0,
            b: 0.0,
            grid: Grid::new(321, 191, -8.0, 8.0, 0.05, 1.0).expect("default grid is valid"),
            thresholds: Thresholds::default(),
            out: PathBuf::from("out"),
            boundary: Boundary::DirichletZero,
            system: System::FokkerPlanck,
            g2_shift: 0.0,
        }
    }
}

/// Shift applied by `corrupt = g2`.
pub const G2_CORRUPTION: f64 = 0.1;

impl RunConfig {
    /// Applies one `key = value` setting; `location` names its source in
    /// error messages.
    pub fn set(&mut self, key: &str, value: &str, location: &str) -> Result<()> {
        let err = |message: String| Error::Config {
            location: location.to_string(),
            message,
        };
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("`{key}` expects a number, got `{v}`")))
        };
        match key {
            "seed" => self.seed = value.parse().map_err(|e: Error| err(e.to_string()))?,
            "c" => self.c = num(value)?,
            "a" => self.a = num(value)?,
            "b" => self.b = num(value)?,
            "B" => {
                self.seed = format!("poly:B={}", value.trim())
                    .parse()
                    .map_err(|e: Error| err(e.to_string()))?
            }
            "grid" => self.grid = parse_grid(value).map_err(err)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "boundary" => self.boundary = value.parse().map_err(|e: Error| err(e.to_string()))?,
            "system" => self.system = value.trim().parse().map_err(err)?,
            "corrupt" => match value.trim() {
                "g2" => self.g2_shift = G2_CORRUPTION,
                "none" => self.g2_shift = 0.0,
                other => return Err(err(format!("`corrupt` accepts g2 or none, got `{other}`"))),
            },
            "tol" => {
                let (name, v) = value
                    .split_once('=')
                    .ok_or_else(|| err(format!("`tol` expects name=value, got `{value}`")))?;
                let v = num(v)?;
                self.thresholds.set(name.trim(), v).map_err(err)?;
            }
            _ => match key.strip_prefix("tol.") {
                Some(name) => {
                    let v = num(value)?;
                    self.thresholds.set(name, v).map_err(err)?;
                }
                None => return Err(err(format!("unknown key `{key}`"))),
            },
        }
        Ok(())
    }

    /// Applies a flat `key = value` file. Blank lines and `#` comments are
    /// ignored; unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            location: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn apply_text(&mut self, text: &str, source: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let location = format!("{source}:{}", n + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                location: location.clone(),
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(key.trim(), value.trim(), &location)?;
        }
        Ok(())
    }
}

/// `nx,nt,xmin,xmax,tmin,tmax`
pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("grid expects nx,nt,xmin,xmax,tmin,tmax, got `{s}`"));
    }
    let count = |i: usize| {
        parts[i]
            .parse::<usize>()
            .map_err(|_| format!("grid field {} must be a node count, got `{}`", i + 1, parts[i]))
    };
    let real = |i: usize| {
        parts[i]
            .parse::<f64>()
            .map_err(|_| format!("grid field {} must be a number, got `{}`", i + 1, parts[i]))
    };
    Grid::new(count(0)?, count(1)?, real(2)?, real(3)?, real(4)?, real(5)?).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults_and_reports_lines() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nc = 0.5\n\ntol.identity = 1e-9\n", "run.cfg").unwrap();
        assert_eq!(cfg.c, 0.5);
        assert_eq!(cfg.thresholds.identity, 1e-9);

        let err = cfg.apply_text("c = 1\nsed = poly:B=1\n", "run.cfg").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("run.cfg:2") && msg.contains("sed"), "{msg}");
    }

    #[test]
    fn b_shorthand_selects_poly_seed() {
        let mut cfg = RunConfig::default();
        cfg.set("B", "5", "--B").unwrap();
        assert_eq!(cfg.seed.to_string(), "poly:B=5");
        assert!(cfg.set("B", "-1", "--B").is_err());
    }

    #[test]
    fn grid_and_tolerance_parsing() {
        let g = parse_grid("11, 21, -1, 1, 0.1, 1").unwrap();
        assert_eq!((g.nx, g.nt), (11, 21));
        assert!(parse_grid("11,21,-1,1").is_err());
        assert!(parse_grid("3,21,-1,1,0,1").is_err());

        let mut cfg = RunConfig::default();
        cfg.set("tol", "evolve_linf=1e-2", "--tol").unwrap();
        assert_eq!(cfg.thresholds.evolve_linf, 1e-2);
        assert!(cfg.set("tol", "bogus=1", "--tol").is_err());
        assert!(cfg.set("tol", "identity=-1", "--tol").is_err());
    }

    #[test]
    fn default_grid_hits_reference_point() {
        let g = RunConfig::default().grid;
        assert!((g.x(180) - 1.0).abs() < 1e-12);
        assert_eq!(g.t(g.nt as isize - 1), 1.0);
    }
}
