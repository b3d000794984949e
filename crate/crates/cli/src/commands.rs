use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qudit_entanglement::generators::random_probes;
use qudit_entanglement::random::{random_local_unitaries, random_state};
use qudit_entanglement::{
    entanglement_metric, entanglement_metric_with, entanglement_pure, gellmann, minimize_roof,
    verify_identities, DirectionSet, Dims, RoofConfig, StateVector,
};

use crate::error::{CliError, CliResult};
use crate::io::{fmt_g, load_density, load_state, ACCEPT_TOL};
use crate::sweep::{Axis, Param, SweepSpec};
use crate::{Cli, Command, MixedArgs, Outcome, SweepArgs};

pub fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Parse(format!("--tol must be positive, got {t}")));
        }
    }
    match &cli.command {
        Command::Measure { file } => measure(cli, file),
        Command::Sweep(args) => sweep(args),
        Command::Em { file, directions } => em(cli, file, directions.as_deref()),
        Command::Mixed(args) => mixed(cli, args),
        Command::Check { inject_fault } => check(cli, *inject_fault),
    }
}

fn done(text: String, warnings: Vec<String>) -> CliResult<Outcome> {
    Ok(Outcome { text, warnings, code: 0 })
}

fn joined(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_g(x)).collect::<Vec<_>>().join("  ")
}

fn measure(cli: &Cli, file: &std::path::Path) -> CliResult<Outcome> {
    let mut warn = Vec::new();
    let s = load_state(file, cli.tol.unwrap_or(ACCEPT_TOL), &mut warn)?;
    let r = entanglement_pure(&s)?;
    let m = s.dims().count() as f64;
    let text = if cli.json {
        json!({
            "dims": s.dims().local(),
            "E": r.e,
            "E_max": r.e_max,
            "E_per_M": r.e / m,
            "E_max_per_M": r.e_max / m,
            "per_subsystem": r.per_subsystem,
        })
        .to_string()
            + "\n"
    } else {
        let mut t = String::new();
        let _ = writeln!(t, "dims           {:?}", s.dims().local());
        let _ = writeln!(t, "E              {}", fmt_g(r.e));
        let _ = writeln!(t, "E_max          {}", fmt_g(r.e_max));
        let _ = writeln!(t, "E/M            {}", fmt_g(r.e / m));
        let _ = writeln!(t, "E_max/M        {}", fmt_g(r.e_max / m));
        let _ = writeln!(t, "per-subsystem  {}", joined(&r.per_subsystem));
        t
    };
    done(text, warn)
}

fn sweep(args: &SweepArgs) -> CliResult<Outcome> {
    let axes = args.axes.iter().map(|a| a.parse::<Axis>()).collect::<CliResult<Vec<_>>>()?;
    let fixed: Vec<(Param, f64)> = [
        (Param::PhiOver2Pi, args.phi_over_2pi),
        (Param::ThetaOverPi, args.theta_over_pi),
        (Param::PhaseOverPi, args.phase_over_pi),
        (Param::GammaOverPi, args.gamma_over_pi),
        (Param::TauOverPi, args.tau_over_pi),
        (Param::PhiOverPi, args.phi_over_pi),
    ]
    .into_iter()
    .filter_map(|(p, v)| v.map(|v| (p, v)))
    .collect();
    if let Some((p, v)) = fixed.iter().find(|(_, v)| !v.is_finite()) {
        return Err(CliError::Parse(format!("{} must be finite, got {v}", p.name())));
    }
    let spec = SweepSpec {
        family: args.family,
        ms: args.m.clone(),
        fixed,
        axes,
        outputs: args.outputs.clone(),
    };
    done(spec.csv()?, Vec::new())
}

fn parse_directions(text: &str, m: usize) -> CliResult<DirectionSet> {
    let v: Vec<Vec<f64>> = text
        .split(';')
        .map(|vec| {
            vec.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("bad direction component '{x}'"))))
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<_>>()?;
    if v.len() != m || v.iter().any(|x| x.len() != 3) {
        return Err(CliError::Parse(format!("--directions needs {m} vectors of 3 components")));
    }
    Ok(DirectionSet::new(v)?)
}

fn em(cli: &Cli, file: &std::path::Path, directions: Option<&str>) -> CliResult<Outcome> {
    let mut warn = Vec::new();
    let s: StateVector = load_state(file, cli.tol.unwrap_or(ACCEPT_TOL), &mut warn)?;
    if let Some(&d) = s.dims().local().iter().find(|&&d| d != 2) {
        return Err(CliError::Unsupported(format!("the metric needs qubits, found local dimension {d}")));
    }
    let m = s.dims().count();
    let g = match directions {
        Some(text) => entanglement_metric_with(&s, &parse_directions(text, m)?)?,
        None => entanglement_metric(&s)?,
    };
    let eig = g.eigenvalues()?;
    let dirs: Vec<Vec<f64>> = g.directions.iter().map(|v| v.to_vec()).collect();
    let text = if cli.json {
        json!({
            "dims": s.dims().local(),
            "directions": dirs,
            "metric": g.rows(),
            "trace": g.trace(),
            "eigenvalues": eig,
        })
        .to_string()
            + "\n"
    } else {
        let mut t = String::from("directions\n");
        for (mu, v) in dirs.iter().enumerate() {
            let _ = writeln!(t, "  {mu}  {}", joined(v));
        }
        t.push_str("metric\n");
        for row in g.rows() {
            let _ = writeln!(t, "  {}", joined(&row));
        }
        let _ = writeln!(t, "trace        {}", fmt_g(g.trace()));
        let _ = writeln!(t, "eigenvalues  {}", joined(&eig));
        t
    };
    done(text, warn)
}

fn mixed(cli: &Cli, args: &MixedArgs) -> CliResult<Outcome> {
    let mut warn = Vec::new();
    let rho = load_density(&args.file, cli.tol.unwrap_or(ACCEPT_TOL), &mut warn)?;
    let cfg = RoofConfig {
        ensemble_len: args.ensemble_len,
        restarts: args.restarts,
        max_iters: args.max_iters,
        seed: cli.seed,
        ..RoofConfig::default()
    };
    let r = minimize_roof(&rho, &cfg)?;
    let mut sorted = r.restart_values.clone();
    sorted.sort_by(f64::total_cmp);
    let (lo, med, hi) = (sorted[0], sorted[sorted.len() / 2], sorted[sorted.len() - 1]);
    let iterations: usize = r.iterations.iter().sum();
    let text = if cli.json {
        json!({
            "kind": "heuristic upper bound",
            "value": r.value,
            "rank": r.rank,
            "ensemble_len": r.ensemble_len,
            "restarts": r.restart_values.len(),
            "best_restart": r.best_restart,
            "restart_min": lo,
            "restart_median": med,
            "restart_max": hi,
            "iterations": iterations,
            "decomposition_size": r.decomposition.len(),
            "seed": cli.seed,
        })
        .to_string()
            + "\n"
    } else {
        let mut t = String::new();
        let _ = writeln!(t, "heuristic upper bound  {}", fmt_g(r.value));
        let _ = writeln!(t, "rank                   {}", r.rank);
        let _ = writeln!(t, "ensemble length        {}", r.ensemble_len);
        let _ = writeln!(t, "restarts               {} (best #{})", r.restart_values.len(), r.best_restart);
        let _ = writeln!(t, "restart values         min {}  median {}  max {}", fmt_g(lo), fmt_g(med), fmt_g(hi));
        let _ = writeln!(t, "iterations             {iterations}");
        let _ = writeln!(t, "decomposition size     {}", r.decomposition.len());
        t
    };
    done(text, warn)
}

fn fraction(num: usize, den: usize) -> String {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let g = gcd(num, den);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

fn check(cli: &Cli, inject_fault: bool) -> CliResult<Outcome> {
    let limit = cli.tol.unwrap_or(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut lines = Vec::new();
    let mut failures = 0;
    let mut record = |lines: &mut Vec<(String, f64, bool)>, label: String, residual: f64| {
        let ok = residual < limit;
        if !ok {
            failures += 1;
        }
        lines.push((label, residual, ok));
    };

    for d in 2..=6 {
        let mut g = gellmann::<f64>(d)?;
        if inject_fault && d == 3 {
            let bent = g.get(1).scale(num_complex::Complex64::new(1.1, 0.0));
            g = g.with_replaced(1, bent);
        }
        let probes = random_probes(d, 100, &mut rng);
        let rep = verify_identities(&g, &probes, 20, &mut rng)?;
        let target = fraction(2 * (d * d - 1), d);
        record(&mut lines, format!("d={d} casimir (target {target})"), rep.casimir);
        record(&mut lines, format!("d={d} purity sum (target {})", fraction(2 * (d - 1), d)), rep.purity_sum);
        record(&mut lines, format!("d={d} frame invariance"), rep.frame_invariance);
        record(&mut lines, format!("d={d} max eigenvalue"), rep.max_eigenvalue_error);
    }

    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = rng.random_range(2..=3);
        let local: Vec<usize> = (0..m).map(|_| rng.random_range(2..=4)).collect();
        let dims = Dims::new(local)?;
        let s: StateVector = random_state(&dims, &mut rng)?;
        let turned = s.apply_local_all(&random_local_unitaries(&dims, &mut rng))?;
        let diff = (entanglement_pure(&s)?.e - entanglement_pure(&turned)?.e).abs();
        worst = worst.max(diff);
    }
    record(&mut lines, "local-unitary invariance (20 states)".into(), worst);

    let text = if cli.json {
        let items: Vec<_> = lines
            .iter()
            .map(|(l, r, ok)| json!({"check": l, "residual": r, "pass": ok}))
            .collect();
        json!({"threshold": limit, "checks": items, "failures": failures}).to_string() + "\n"
    } else {
        let mut t = String::new();
        for (label, residual, ok) in &lines {
            let _ = writeln!(t, "{label:<38} {:<12} {}", fmt_g(*residual), if *ok { "ok" } else { "FAIL" });
        }
        let _ = writeln!(t, "{} checks, {failures} failed (threshold {})", lines.len(), fmt_g(limit));
        t
    };
    Ok(Outcome { text, warnings: Vec::new(), code: if failures > 0 { 1 } else { 0 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_reduce() {
        assert_eq!(fraction(16, 3), "16/3");
        assert_eq!(fraction(6, 2), "3");
        assert_eq!(fraction(2, 4), "1/2");
    }

    #[test]
    fn direction_parsing() {
        let d = parse_directions("-1,0,0; 0,0,1;1,0,0", 3).unwrap();
        assert_eq!(d.get(0), &[-1.0, 0.0, 0.0]);
        assert!(parse_directions("1,0,0", 2).is_err());
        assert!(parse_directions("1,0;0,1", 2).is_err());
        assert_eq!(parse_directions("2,0,0;0,0,1", 2).unwrap_err().exit_code(), 2);
    }
}
