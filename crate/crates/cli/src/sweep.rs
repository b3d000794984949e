//! Parameter-grid sweeps over the built-in state families.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use qudit_entanglement::{em_eigenvalues, entanglement_pure, von_neumann_entropy, FamilyLabel};

use crate::error::{CliError, CliResult};
use crate::io::fmt_g;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Brs,
    Ghzls,
    ThreeQubit,
    Hybrid,
    QutritGhz,
}

/// Angle parameters, each in the units its name states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    PhiOver2Pi,
    ThetaOverPi,
    PhaseOverPi,
    GammaOverPi,
    TauOverPi,
    PhiOverPi,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::PhiOver2Pi,
        Param::ThetaOverPi,
        Param::PhaseOverPi,
        Param::GammaOverPi,
        Param::TauOverPi,
        Param::PhiOverPi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::PhiOver2Pi => "phi_over_2pi",
            Param::ThetaOverPi => "theta_over_pi",
            Param::PhaseOverPi => "phase_over_pi",
            Param::GammaOverPi => "gamma_over_pi",
            Param::TauOverPi => "tau_over_pi",
            Param::PhiOverPi => "phi_over_pi",
        }
    }

    fn radians(self, v: f64) -> f64 {
        match self {
            Param::PhiOver2Pi => 2.0 * PI * v,
            _ => PI * v,
        }
    }
}

impl FromStr for Param {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let key = s.replace('-', "_");
        Param::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| CliError::Parse(format!("unknown parameter '{s}'")))
    }
}

impl Family {
    pub fn params(self) -> &'static [Param] {
        match self {
            Family::Brs => &[Param::PhiOver2Pi],
            Family::Ghzls => &[Param::ThetaOverPi, Param::PhaseOverPi],
            Family::ThreeQubit => &[Param::GammaOverPi, Param::TauOverPi],
            Family::Hybrid => &[Param::ThetaOverPi],
            Family::QutritGhz => &[Param::ThetaOverPi, Param::PhiOverPi],
        }
    }

    fn takes_m(self) -> bool {
        matches!(self, Family::Brs | Family::Ghzls | Family::QutritGhz)
    }

    fn all_qubits(self) -> bool {
        !matches!(self, Family::Hybrid | Family::QutritGhz)
    }

    fn label(self, m: usize, value: impl Fn(Param) -> f64) -> FamilyLabel {
        let rad = |p: Param| p.radians(value(p));
        match self {
            Family::Brs => FamilyLabel::Brs { m, phi: rad(Param::PhiOver2Pi) },
            Family::Ghzls => FamilyLabel::Ghzls { m, theta: rad(Param::ThetaOverPi), phase: rad(Param::PhaseOverPi) },
            Family::ThreeQubit => FamilyLabel::ThreeQubit { gamma: rad(Param::GammaOverPi), tau: rad(Param::TauOverPi) },
            Family::Hybrid => FamilyLabel::Hybrid23 { theta: rad(Param::ThetaOverPi) },
            Family::QutritGhz => FamilyLabel::QutritGhz { m, theta: rad(Param::ThetaOverPi), phi: rad(Param::PhiOverPi) },
        }
    }
}

/// `name:start:stop:count`.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Parse(format!("axis '{s}' must look like name:start:stop:count"));
        let [name, start, stop, count] = parts.as_slice() else { return Err(bad()) };
        let start: f64 = start.parse().map_err(|_| bad())?;
        let stop: f64 = stop.parse().map_err(|_| bad())?;
        let count: usize = count.parse().map_err(|_| bad())?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        if count < 2 {
            return Err(CliError::Parse(format!("axis '{s}' needs at least 2 points")));
        }
        Ok(Axis { param: name.parse()?, start, stop, count })
    }
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Output {
    #[value(name = "E")]
    E,
    #[value(name = "E_per_M")]
    EPerM,
    #[value(name = "eigenvalues")]
    Eigenvalues,
    #[value(name = "entropy")]
    Entropy,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: Family,
    pub ms: Vec<usize>,
    pub fixed: Vec<(Param, f64)>,
    pub axes: Vec<Axis>,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        let allowed = self.family.params();
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(CliError::Parse("a sweep needs one or two --axis flags".into()));
        }
        let mut seen = Vec::new();
        for p in self.axes.iter().map(|a| a.param).chain(self.fixed.iter().map(|f| f.0)) {
            if !allowed.contains(&p) {
                return Err(CliError::Parse(format!("'{}' is not a parameter of this family", p.name())));
            }
            if seen.contains(&p) {
                return Err(CliError::Parse(format!("'{}' given more than once", p.name())));
            }
            seen.push(p);
        }
        if self.family.takes_m() {
            if self.ms.is_empty() {
                return Err(CliError::Parse("this family needs --m".into()));
            }
            if self.ms.iter().any(|&m| m < 2) {
                return Err(CliError::Parse("--m must be at least 2".into()));
            }
        } else if !self.ms.is_empty() {
            return Err(CliError::Parse("this family has a fixed size; drop --m".into()));
        }
        if self.outputs.is_empty() {
            return Err(CliError::Parse("no outputs requested".into()));
        }
        if self.outputs.contains(&Output::Eigenvalues) {
            if !self.family.all_qubits() {
                return Err(CliError::Unsupported("eigenvalues need an all-qubit family".into()));
            }
            if self.ms.len() > 1 {
                return Err(CliError::Parse("eigenvalue columns need a single --m".into()));
            }
        }
        Ok(())
    }

    fn sizes(&self) -> Vec<usize> {
        match self.family {
            Family::ThreeQubit => vec![3],
            Family::Hybrid => vec![2],
            _ => self.ms.clone(),
        }
    }

    fn header(&self) -> Vec<String> {
        let mut h = Vec::new();
        if self.family.takes_m() {
            h.push("M".to_string());
        }
        h.extend(self.axes.iter().map(|a| a.param.name().to_string()));
        for o in &self.outputs {
            match o {
                Output::E => h.push("E".into()),
                Output::EPerM => h.push("E_per_M".into()),
                Output::Entropy => h.push("entropy".into()),
                Output::Eigenvalues => {
                    let m = self.sizes()[0];
                    h.extend((1..=m).map(|i| format!("eig_{i}")));
                }
            }
        }
        h
    }

    fn row(&self, m: usize, point: &[f64]) -> CliResult<Vec<f64>> {
        let value = |p: Param| {
            self.axes
                .iter()
                .position(|a| a.param == p)
                .map(|i| point[i])
                .or_else(|| self.fixed.iter().find(|f| f.0 == p).map(|f| f.1))
                .unwrap_or(0.0)
        };
        let state = self.family.label(m, value).build::<f64>()?;
        let mut row = Vec::new();
        if self.family.takes_m() {
            row.push(m as f64);
        }
        row.extend_from_slice(point);
        let res = entanglement_pure(&state)?;
        for o in &self.outputs {
            match o {
                Output::E => row.push(res.e),
                Output::EPerM => row.push(res.e / state.dims().count() as f64),
                Output::Entropy => row.push(von_neumann_entropy(&state, &[0])?),
                Output::Eigenvalues => row.extend(em_eigenvalues(&state)?),
            }
        }
        Ok(row)
    }

    /// Rows in row-major order: `M`, then the first axis, then the second.
    pub fn rows(&self) -> CliResult<Vec<Vec<f64>>> {
        self.validate()?;
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    (0..axis.count).map(move |i| {
                        let mut q = p.clone();
                        q.push(axis.value(i));
                        q
                    })
                })
                .collect();
        }
        let mut rows = Vec::with_capacity(points.len() * self.sizes().len());
        for m in self.sizes() {
            for p in &points {
                rows.push(self.row(m, p)?);
            }
        }
        Ok(rows)
    }

    /// CSV text with LF line endings.
    pub fn csv(&self) -> CliResult<String> {
        let rows = self.rows()?;
        let mut out = self.header().join(",");
        out.push('\n');
        for row in rows {
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(CliError::Parse(format!("non-finite value {x} in sweep")));
            }
            let cells: Vec<String> = row.iter().map(|&x| fmt_g(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        Ok(out)
    }
}
