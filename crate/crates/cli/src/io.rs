//! State and density files, number formatting and atomic writes.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use qudit_entanglement::{DenseOperator, DensityMatrix, Dims, StateVector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Norm deviations up to this are accepted silently.
pub const ACCEPT_TOL: f64 = 1e-6;
/// Norm deviations up to this are repaired with a warning.
pub const REPAIR_TOL: f64 = 1e-3;
/// Eigenvalues down to this are clipped to zero; below it the input is rejected.
pub const PSD_TOL: f64 = 1e-6;

/// `{"dims": [..], "amplitudes": [[re, im], ..]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

/// `{"dims": [..], "rho": [[[re, im], ..], ..]}` with rows of `ρ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub dims: Vec<usize>,
    pub rho: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(s: &StateVector) -> Self {
        Self {
            dims: s.dims().local().to_vec(),
            amplitudes: s.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl DensityFile {
    pub fn from_matrix(dims: &Dims, rho: &DenseOperator) -> Self {
        let n = rho.dim();
        Self {
            dims: dims.local().to_vec(),
            rho: (0..n).map(|i| rho.row(i).iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("malformed {}: {e}", path.display())))
}

fn dims_of(local: &[usize]) -> CliResult<Dims> {
    Dims::new(local.to_vec()).map_err(|e| CliError::Parse(e.to_string()))
}

/// Outcome of the normalization policy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormCheck {
    Accepted,
    Repaired(f64),
}

/// Accept within `tol`, repair within [`REPAIR_TOL`], reject beyond.
pub fn norm_policy(deviation: f64, tol: f64) -> CliResult<NormCheck> {
    if !deviation.is_finite() {
        return Err(CliError::Parse("non-finite values".into()));
    }
    if deviation <= tol {
        Ok(NormCheck::Accepted)
    } else if deviation <= REPAIR_TOL.max(tol) {
        Ok(NormCheck::Repaired(deviation))
    } else {
        Err(CliError::Normalization(format!(
            "norm deviates from 1 by {deviation:e} (limit {REPAIR_TOL:e})"
        )))
    }
}

/// Loads and normalizes a state file. Warnings go to `warn`.
pub fn load_state(path: &Path, tol: f64, warn: &mut Vec<String>) -> CliResult<StateVector> {
    let file: StateFile = read_json(path)?;
    let dims = dims_of(&file.dims)?;
    if file.amplitudes.len() != dims.total() {
        return Err(CliError::Parse(format!(
            "expected {} amplitudes for dims {:?}, found {}",
            dims.total(),
            file.dims,
            file.amplitudes.len()
        )));
    }
    if file.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Parse("non-finite amplitude".into()));
    }
    let amps: Vec<Complex64> = file.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if let NormCheck::Repaired(dev) = norm_policy((norm - 1.0).abs(), tol)? {
        warn.push(format!("warning: state renormalized (norm deviation {dev:e})"));
    }
    Ok(StateVector::new(dims, amps)?)
}

/// Loads a density file, repairing small trace and positivity defects.
pub fn load_density(path: &Path, tol: f64, warn: &mut Vec<String>) -> CliResult<DensityMatrix> {
    let file: DensityFile = read_json(path)?;
    let dims = dims_of(&file.dims)?;
    let n = dims.total();
    if file.rho.len() != n || file.rho.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse(format!("expected a {n}×{n} matrix for dims {:?}", file.dims)));
    }
    if file.rho.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Parse("non-finite matrix entry".into()));
    }
    let raw = DenseOperator::from_fn(n, |i, j| Complex64::new(file.rho[i][j][0], file.rho[i][j][1]));
    let herm = raw.hermitian_deviation();
    if herm > PSD_TOL {
        return Err(CliError::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
    }
    let sym = raw.add(&raw.adjoint()).map_err(CliError::from)?.scale(Complex64::new(0.5, 0.0));

    let spectrum = qudit_entanglement::hermitian_eig(&sym)?;
    let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(CliError::InvalidDensity(format!("negative eigenvalue {min:e}")));
    }
    let trace = sym.trace().re;
    if let NormCheck::Repaired(dev) = norm_policy((trace - 1.0).abs(), tol)? {
        warn.push(format!("warning: trace renormalized (deviation {dev:e})"));
    }
    let mut rho = sym;
    if min < 0.0 {
        if min < -1e-12 {
            warn.push(format!("warning: clipped negative eigenvalue {min:e}"));
        }
        let clipped: Vec<f64> = spectrum.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let v = &spectrum.eigenvectors;
        rho = DenseOperator::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * clipped[k]).sum()
        });
    }
    let tr = rho.trace().re;
    if tr <= 0.0 {
        return Err(CliError::InvalidDensity("zero trace".into()));
    }
    let rho = rho.scale(Complex64::new(1.0 / tr, 0.0));
    Ok(DensityMatrix::new(dims, rho)?)
}

/// `%.12g`: 12 significant digits, trailing zeros trimmed.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Parse(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_format() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(-0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(3.0), "3");
        assert_eq!(fmt_g(7.0 / 3.0), "2.33333333333");
        assert_eq!(fmt_g(-0.5), "-0.5");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1.5e-7), "1.5e-07");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_g(0.999999999999999), "1");
        assert_eq!(fmt_g(2.0 * (0.3f64).sin().powi(2)), "0.17466438509");
    }

    #[test]
    fn policy_thresholds() {
        assert_eq!(norm_policy(1e-7, ACCEPT_TOL).unwrap(), NormCheck::Accepted);
        assert!(matches!(norm_policy(1e-4, ACCEPT_TOL).unwrap(), NormCheck::Repaired(_)));
        assert_eq!(norm_policy(1e-2, ACCEPT_TOL).unwrap_err().exit_code(), 3);
        assert_eq!(norm_policy(f64::NAN, ACCEPT_TOL).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
