//! Command-line front end: configuration loading with strict schema checks,
//! dispatch to the library computations, and deterministic JSON/CSV artifact
//! emission.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::ale::{ale_map, ale_point, AleConfig};
use crate::curve::BranchConfig;
use crate::einstein_weyl::{
    conformal_metric, ew_chart, foliation_check, geodesic_spacelike, signature, zoll_suite,
    EwPoint, EwPosition,
};
use crate::error::{Error, Result};
use crate::jacobian::{period_lattice, PeriodLattice};
use crate::json::{fmt_f64, write_atomic, JsonWriter};
use crate::seifert::{
    enumerate_seifert, hyperplane_from_divisor, seifert_point, solve_seifert_angles, wrap_2pi,
    BoundaryData, Branch, SeifertKind, SeifertPoint,
};
use crate::surface::{build_line, LineKind};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Periods,
    Seifert,
    Line,
    Geodesic,
    Metric,
    Zoll,
    Foliation,
    Ale,
    Export,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Periods => "periods",
            Command::Seifert => "seifert",
            Command::Line => "line",
            Command::Geodesic => "geodesic",
            Command::Metric => "metric",
            Command::Zoll => "zoll",
            Command::Foliation => "foliation",
            Command::Ale => "ale",
            Command::Export => "export",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub branch_points: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AleSpec {
    pub l: usize,
    pub a: Vec<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

/// Run configuration: a single JSON document; unknown keys are rejected and
/// command-line flags override individual fields.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<String>,
    pub curve: Option<CurveSpec>,
    pub k: Option<usize>,
    pub theta: Option<f64>,
    pub trials: Option<usize>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub arcs: Option<usize>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub branch: Option<String>,
    pub anchor: Option<[f64; 2]>,
    pub coeffs: Option<Vec<f64>>,
    pub ale: Option<AleSpec>,
    pub out: Option<String>,
    pub csv: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// JSON run configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Component index k (1..=2^(g-1)).
    #[arg(long)]
    pub k: Option<usize>,
    /// Rotation angle in radians.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of random trials / samples.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Grid resolution.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path for the JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "mtw",
    version,
    about = "Hyperelliptic minitwistor spaces and their Lorentzian Einstein-Weyl geometry"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Period lattice of the curve with a reality report.
    Periods(Flags),
    /// Census of the Seifert surfaces with sampling statistics.
    Seifert(Flags),
    /// Structure of a single minitwistor line.
    Line(Flags),
    /// Trace one spacelike geodesic through a disk anchor.
    Geodesic(Flags),
    /// Conformal metric at a line, with signature.
    Metric(Flags),
    /// Random-anchor closed-geodesic suite.
    Zoll(Flags),
    /// Leaf families through a fixed boundary point.
    Foliation(Flags),
    /// ALE model bridge check.
    Ale(Flags),
    /// Bundle export: periods JSON plus a Seifert sample CSV.
    Export(Flags),
}

impl CliCommand {
    fn split(&self) -> (Command, &Flags) {
        match self {
            CliCommand::Periods(f) => (Command::Periods, f),
            CliCommand::Seifert(f) => (Command::Seifert, f),
            CliCommand::Line(f) => (Command::Line, f),
            CliCommand::Geodesic(f) => (Command::Geodesic, f),
            CliCommand::Metric(f) => (Command::Metric, f),
            CliCommand::Zoll(f) => (Command::Zoll, f),
            CliCommand::Foliation(f) => (Command::Foliation, f),
            CliCommand::Ale(f) => (Command::Ale, f),
            CliCommand::Export(f) => (Command::Export, f),
        }
    }
}

/// Fully resolved parameters after merging defaults, file, and flags.
#[derive(Debug)]
pub struct Resolved {
    pub cfg: BranchConfig,
    pub k: usize,
    pub theta: f64,
    pub trials: usize,
    pub grid: usize,
    pub seed: u64,
    pub steps: usize,
    pub arcs: usize,
    pub xi: f64,
    pub eta: f64,
    pub branch: Branch,
    pub anchor: Option<[f64; 2]>,
    pub coeffs: Option<Vec<f64>>,
    pub ale: AleConfig,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{e}")))
}

pub fn resolve(command: Command, file: &RunConfig, flags: &Flags) -> Result<Resolved> {
    if let Some(cmd) = &file.command {
        if cmd != command.name() {
            return Err(Error::Config(format!(
                "config file requests command '{cmd}' but '{}' was invoked",
                command.name()
            )));
        }
    }
    let cfg = match &file.curve {
        Some(c) => BranchConfig::new(c.branch_points.clone())?,
        None => crate::curve::g2_config(),
    };
    let branch = match file.branch.as_deref() {
        None | Some("plus") => Branch::Plus,
        Some("minus") => Branch::Minus,
        Some(other) => {
            return Err(Error::Config(format!(
                "branch must be 'plus' or 'minus', got '{other}'"
            )))
        }
    };
    let ale = match &file.ale {
        Some(s) => AleConfig::new(s.l, s.a.clone(), s.beta)?,
        None => AleConfig::new(3, vec![-5.0, -4.0, -2.0, -1.0, 1.0, 2.0], None)?,
    };
    let r = Resolved {
        cfg,
        k: flags.k.or(file.k).unwrap_or(1),
        theta: flags.theta.or(file.theta).unwrap_or(0.0),
        trials: flags.trials.or(file.trials).unwrap_or(20),
        grid: flags.grid.or(file.grid).unwrap_or(32),
        seed: flags.seed.or(file.seed).unwrap_or(0),
        steps: file.steps.unwrap_or(512),
        arcs: file.arcs.unwrap_or(1024),
        xi: file.xi.unwrap_or(0.9),
        eta: file.eta.unwrap_or(4.4),
        branch,
        anchor: file.anchor,
        coeffs: file.coeffs.clone(),
        ale,
        out: flags.out.clone().or_else(|| file.out.as_ref().map(PathBuf::from)),
        csv: file.csv.as_ref().map(PathBuf::from),
    };
    let count = BoundaryData::count(r.cfg.genus());
    if r.k < 1 || r.k > count {
        return Err(Error::Config(format!(
            "k must be in 1..={count} for this curve, got {}",
            r.k
        )));
    }
    Ok(r)
}

fn default_anchor(cfg: &BranchConfig) -> [f64; 2] {
    let g = cfg.genus();
    let (a, b) = cfg.k_interval(g + 1);
    let z0 = a + 0.55 * (b - a);
    [z0, 0.3 * (-cfg.f_real(z0)).max(0.0).sqrt()]
}

fn lattice(cfg: &BranchConfig) -> Result<PeriodLattice> {
    period_lattice(cfg)
}

fn write_csv(rows: &[Vec<String>]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for row in rows {
        wtr.write_record(row)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn emit_curve(w: &mut JsonWriter, cfg: &BranchConfig) {
    w.field_object("curve");
    w.field_int("genus", cfg.genus() as i64);
    w.field_nums("branch_points", cfg.branch_points());
    w.end_field();
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn run_periods(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let g = lat.genus();
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "periods");
    emit_curve(&mut w, &r.cfg);
    w.field_array("real_block");
    for i in 0..g {
        w.begin_array();
        for j in 0..g {
            w.num(lat.real_block()[(i, j)]);
        }
        w.end_array();
    }
    w.end_field_array();
    w.field_array("imag_block");
    for i in 0..g {
        w.begin_array();
        for j in 0..g {
            w.num(lat.imag_block()[(i, j)]);
        }
        w.end_array();
    }
    w.end_field_array();
    // reality report: circle periods must be real, A-periods imaginary
    let mut max_circle = 0.0f64;
    for i in 1..=(g + 1) {
        let p = lat.circle_period(i);
        let im: f64 = p.iter().map(|v| v.im * v.im).sum::<f64>().sqrt();
        let nn: f64 = p.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        max_circle = max_circle.max(im / nn.max(1e-300));
    }
    let mut max_a = 0.0f64;
    for i in 1..=g {
        let p = lat.a_period(i);
        let re: f64 = p.iter().map(|v| v.re * v.re).sum::<f64>().sqrt();
        let nn: f64 = p.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        max_a = max_a.max(re / nn.max(1e-300));
    }
    w.field_num("max_circle_imag_rel", max_circle);
    w.field_num("max_acycle_real_rel", max_a);
    w.end_object();
    Ok(w.finish())
}

fn seifert_csv(lat: &PeriodLattice, grid: usize) -> Result<String> {
    let g = lat.genus();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header: Vec<String> = vec!["k".into(), "branch".into(), "xi".into(), "eta".into()];
    for i in 1..=g {
        header.push(format!("p_angle_{i}"));
    }
    for j in 0..=(g + 2) {
        header.push(format!("c_{j}"));
    }
    header.push("residual".into());
    rows.push(header);
    for kk in 1..=BoundaryData::count(g) {
        let k = BoundaryData::new(g, kk)?;
        for branch in [Branch::Plus, Branch::Minus] {
            for a in 0..grid {
                let xi = 2.0 * PI * (a as f64 + 0.5) / grid as f64;
                let eta0 = wrap_2pi(2.0 * PI - xi);
                let mut angles: Vec<f64> = (1..=g)
                    .map(|i| match branch {
                        Branch::Plus => k.rho_angle(i),
                        Branch::Minus => k.rho_prime_angle(i),
                    })
                    .collect();
                for b in 1..grid {
                    let eta = eta0 - 2.0 * PI * b as f64 / grid as f64;
                    let Ok(sol) = solve_seifert_angles(lat, xi, eta, &angles) else {
                        continue;
                    };
                    angles = sol.clone();
                    let sp = SeifertPoint {
                        k: k.clone(),
                        branch,
                        angles: sol,
                        xi_angle: xi,
                        eta_angle: wrap_2pi(eta),
                        kind: SeifertKind::Interior,
                    };
                    let Ok(h) = hyperplane_from_divisor(lat, &sp) else {
                        continue;
                    };
                    let mut row: Vec<String> = vec![
                        kk.to_string(),
                        match branch {
                            Branch::Plus => "plus".into(),
                            Branch::Minus => "minus".into(),
                        },
                        fmt_f64(sp.xi_angle),
                        fmt_f64(sp.eta_angle),
                    ];
                    for &p in &sp.angles {
                        row.push(fmt_f64(p));
                    }
                    for &c in &h.coeffs {
                        row.push(fmt_f64(c));
                    }
                    row.push(fmt_f64(h.residual));
                    rows.push(row);
                }
            }
        }
    }
    write_csv(&rows)
}

fn run_seifert(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let reports = enumerate_seifert(&lat, r.grid)?;
    if let Some(csv) = &r.csv {
        let table = seifert_csv(&lat, r.grid.min(24))?;
        write_atomic(csv, table.as_bytes())?;
    }
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "seifert");
    emit_curve(&mut w, &r.cfg);
    w.field_int("grid", r.grid as i64);
    w.field_int("surfaces", reports.len() as i64);
    w.field_array("reports");
    for rep in &reports {
        w.begin_object();
        w.field_int("k", rep.k.k() as i64);
        w.field_int("solves", rep.solves as i64);
        w.field_int("successes", rep.successes as i64);
        w.field_num("success_rate", rep.successes as f64 / rep.solves.max(1) as f64);
        w.field_num("min_gap_ratio", rep.min_gap_ratio);
        w.field_num("max_residual", rep.max_residual);
        w.field_num("max_constraint", rep.max_constraint);
        w.end_object();
    }
    w.end_field_array();
    w.end_object();
    Ok(w.finish())
}

/// Line coefficients: either given directly or built from the Seifert point
/// (k, xi, eta, branch) rotated by theta.
fn resolve_coeffs(r: &Resolved, lat: &PeriodLattice) -> Result<Vec<f64>> {
    if let Some(c) = &r.coeffs {
        return Ok(c.clone());
    }
    let k = BoundaryData::new(r.cfg.genus(), r.k)?;
    let sp = seifert_point(lat, &k, r.xi, r.eta, r.branch)?;
    ew_chart(
        lat,
        &EwPoint {
            pos: EwPosition::Interior(sp),
            theta: r.theta,
        },
    )
}

fn emit_point(w: &mut JsonWriter, z: Complex64, wv: Complex64, y: Complex64) {
    w.begin_object();
    w.field_num("z_re", z.re);
    w.field_num("z_im", z.im);
    w.field_num("w_re", wv.re);
    w.field_num("w_im", wv.im);
    w.field_num("y_re", y.re);
    w.field_num("y_im", y.im);
    w.end_object();
}

fn run_line(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let coeffs = resolve_coeffs(r, &lat)?;
    let samples = r.grid.max(8);
    let line = build_line(&r.cfg, &coeffs, samples)?;
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "line");
    emit_curve(&mut w, &r.cfg);
    let kind = match &line.kind {
        LineKind::Regular => "regular",
        LineKind::Irregular { .. } => "irregular",
        LineKind::Boundary => "boundary",
    };
    w.field_str("kind", kind);
    if let LineKind::Irregular { lambda } = &line.kind {
        w.field_num("lambda", *lambda);
    }
    w.field_num("theta", line.theta);
    w.field_nums("coefficients", &line.coeffs);
    if let Some(fr) = &line.frame {
        w.field_object("frame");
        w.field_nums("p", &fr.p);
        w.field_num("r", fr.r);
        w.field_nums("nodes_z", &fr.nodes_z);
        w.field_nums("q", &fr.q);
        w.field_num("z_xi", fr.z_xi);
        w.field_num("z_eta", fr.z_eta);
        w.end_field();
    }
    w.field_array("nodes");
    for p in &line.nodes {
        emit_point(&mut w, p.z, p.w(), p.y());
    }
    w.end_field_array();
    w.field_array("real_circle");
    for p in &line.real_circle {
        emit_point(&mut w, p.z, p.w(), p.y());
    }
    w.end_field_array();
    w.end_object();
    Ok(w.finish())
}

fn run_geodesic(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let k = BoundaryData::new(r.cfg.genus(), r.k)?;
    let [z0, w0] = r.anchor.unwrap_or_else(|| default_anchor(&r.cfg));
    let geo = geodesic_spacelike(&lat, &k, z0, w0, r.steps)?;
    if let Some(csv) = &r.csv {
        let g = r.cfg.genus();
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header: Vec<String> = vec!["xi".into(), "eta".into(), "theta".into()];
        for j in 0..=(g + 3) {
            header.push(format!("c_{j}"));
        }
        rows.push(header);
        for s in &geo.samples {
            let mut row = vec![fmt_f64(s.xi), fmt_f64(s.eta), fmt_f64(s.theta)];
            for &c in &s.coeffs {
                row.push(fmt_f64(c));
            }
            rows.push(row);
        }
        write_atomic(csv, write_csv(&rows)?.as_bytes())?;
    }
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "geodesic");
    emit_curve(&mut w, &r.cfg);
    w.field_int("k", k.k() as i64);
    w.field_nums("anchor", &[z0, w0]);
    w.field_int("steps", r.steps as i64);
    w.field_num("closure_gap", geo.closure_gap);
    w.field_num("max_step", geo.max_step);
    w.field_num("min_separation", geo.min_separation);
    w.field_bool("simple", geo.simple);
    w.field_array("crossings");
    for (idx, prime) in &geo.crossings {
        w.begin_object();
        w.field_int("sample", *idx as i64);
        w.field_bool("prime", *prime);
        w.end_object();
    }
    w.end_field_array();
    w.field_int("samples", geo.samples.len() as i64);
    w.end_object();
    Ok(w.finish())
}

fn run_metric(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let coeffs = resolve_coeffs(r, &lat)?;
    let line = build_line(&r.cfg, &coeffs, 16)?;
    let met = conformal_metric(&r.cfg, &line)?;
    let (pos, neg) = signature(&met.matrix);
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "metric");
    emit_curve(&mut w, &r.cfg);
    w.field_nums("coefficients", &line.coeffs);
    w.field_num("theta", line.theta);
    w.field_array("matrix");
    for i in 0..3 {
        w.begin_array();
        for j in 0..3 {
            w.num(met.matrix[(i, j)]);
        }
        w.end_array();
    }
    w.end_field_array();
    w.field_int("signature_positive", pos as i64);
    w.field_int("signature_negative", neg as i64);
    w.field_num("theta_norm", met.theta_norm);
    w.field_array("basis");
    for b in &met.basis {
        w.begin_array();
        for &v in b {
            w.num(v);
        }
        w.end_array();
    }
    w.end_field_array();
    w.end_object();
    Ok(w.finish())
}

fn run_zoll(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let k = BoundaryData::new(r.cfg.genus(), r.k)?;
    let rep = zoll_suite(&lat, &k, r.trials, r.steps, r.seed)?;
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "zoll");
    emit_curve(&mut w, &r.cfg);
    w.field_int("k", k.k() as i64);
    w.field_int("trials", r.trials as i64);
    w.field_int("steps", r.steps as i64);
    w.field_int("seed", r.seed as i64);
    w.field_num("max_closure_gap", rep.max_gap);
    w.field_bool("all_simple", rep.all_simple);
    w.field_bool("all_crossings_ok", rep.all_crossings);
    w.field_num("min_transversality", rep.min_transversality);
    w.field_array("records");
    for rec in &rep.records {
        w.begin_object();
        w.field_nums("anchor", &[rec.anchor.0, rec.anchor.1]);
        w.field_num("closure_gap", rec.closure_gap);
        w.field_num("min_separation", rec.min_separation);
        w.field_bool("simple", rec.simple);
        w.field_bool("crossings_ok", rec.crossings_ok);
        w.end_object();
    }
    w.end_field_array();
    w.end_object();
    Ok(w.finish())
}

fn run_foliation(r: &Resolved) -> Result<String> {
    let lat = lattice(&r.cfg)?;
    let k = BoundaryData::new(r.cfg.genus(), r.k)?;
    let rep = foliation_check(&lat, &k, r.xi, r.arcs, r.grid.max(50))?;
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "foliation");
    emit_curve(&mut w, &r.cfg);
    w.field_int("k", k.k() as i64);
    w.field_num("xi", rep.xi_angle);
    w.field_int("grid", r.grid.max(50) as i64);
    w.field_int("leaves_first", rep.leaves[0] as i64);
    w.field_int("leaves_second", rep.leaves[1] as i64);
    w.field_num("min_separation_first", rep.min_separation[0]);
    w.field_num("min_separation_second", rep.min_separation[1]);
    w.field_num("coverage_first", rep.coverage[0]);
    w.field_num("coverage_second", rep.coverage[1]);
    w.field_int("interior_cells", rep.interior_cells as i64);
    w.end_object();
    Ok(w.finish())
}

fn run_ale(r: &Resolved) -> Result<String> {
    let acfg = &r.ale;
    let cfg = acfg.curve_config()?;
    let samples = r.trials.max(1) * 50;
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    let mut max_cone = 0.0f64;
    let mut max_twine = 0.0f64;
    for _ in 0..samples {
        let z = Complex64::new(4.0 * rng.gen::<f64>() - 2.0, 4.0 * rng.gen::<f64>() - 2.0);
        if (z.re - acfg.beta()).abs() < 0.05 && z.im.abs() < 0.05 {
            continue;
        }
        let x = Complex64::new(rng.gen::<f64>() + 0.2, rng.gen::<f64>() - 0.5);
        let p = ale_point(acfg, z, x)?;
        let q = ale_map(acfg, &cfg, &p)?;
        let scale = 1.0 + q.u.norm() * q.v.norm();
        max_cone = max_cone.max((q.u * q.v + cfg.f_complex(q.z)).norm() / scale);
        let lhs = ale_map(acfg, &cfg, &p.tau(acfg))?;
        let rhs = q.sigma();
        let d = (lhs.z - rhs.z).norm() + (lhs.u - rhs.u).norm() + (lhs.v - rhs.v).norm();
        max_twine = max_twine.max(d / (1.0 + lhs.u.norm() + lhs.v.norm()));
    }
    let c_closed = acfg.c_constant();
    let c_num = acfg.c_numeric()?;
    let tol = if acfg.l() % 2 == 1 { 1e-12 } else { 1e-10 };
    let pass = max_cone < tol && max_twine < 1e-10 && c_num > 0.0
        && (c_closed - c_num).abs() < 1e-10 * c_closed.max(1.0);
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "ale");
    w.field_int("l", acfg.l() as i64);
    w.field_nums("a", acfg.a());
    w.field_num("beta", acfg.beta());
    emit_curve(&mut w, &cfg);
    w.field_int("samples", samples as i64);
    w.field_num("c_closed_form", c_closed);
    w.field_num("c_numeric", c_num);
    w.field_num("max_cone_residual", max_cone);
    w.field_num("max_intertwining", max_twine);
    w.field_bool("pass", pass);
    w.end_object();
    Ok(w.finish())
}

fn run_export(r: &Resolved) -> Result<String> {
    let out = r
        .out
        .as_ref()
        .ok_or_else(|| Error::Config("export requires --out PATH (used as a prefix)".into()))?;
    let lat = lattice(&r.cfg)?;
    let periods = run_periods(r)?;
    let csv = seifert_csv(&lat, r.grid.min(24))?;
    let pjson = PathBuf::from(format!("{}.periods.json", out.display()));
    let pcsv = PathBuf::from(format!("{}.seifert.csv", out.display()));
    write_atomic(&pjson, periods.as_bytes())?;
    write_atomic(&pcsv, csv.as_bytes())?;
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("command", "export");
    emit_curve(&mut w, &r.cfg);
    w.field_str("periods_json", &pjson.display().to_string());
    w.field_str("seifert_csv", &pcsv.display().to_string());
    w.end_object();
    Ok(w.finish())
}

pub fn execute(command: Command, r: &Resolved) -> Result<String> {
    match command {
        Command::Periods => run_periods(r),
        Command::Seifert => run_seifert(r),
        Command::Line => run_line(r),
        Command::Geodesic => run_geodesic(r),
        Command::Metric => run_metric(r),
        Command::Zoll => run_zoll(r),
        Command::Foliation => run_foliation(r),
        Command::Ale => run_ale(r),
        Command::Export => run_export(r),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::Config(_) => 1,
        _ => 2,
    }
}

fn diagnostic(e: &Error) -> String {
    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("error", &e.to_string());
    w.field_int("exit_code", exit_code_for(e) as i64);
    w.end_object();
    w.finish()
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    let (command, flags) = cli.command.split();
    let file = match &flags.config {
        Some(path) => match load_config(path) {
            Ok(f) => f,
            Err(e) => {
                print!("{}", diagnostic(&e));
                return 1;
            }
        },
        None => RunConfig::default(),
    };
    let resolved = match resolve(command, &file, flags) {
        Ok(r) => r,
        Err(e) => {
            print!("{}", diagnostic(&e));
            return exit_code_for(&e);
        }
    };
    match execute(command, &resolved) {
        Ok(json) => {
            if let Some(out) = &resolved.out {
                if command != Command::Export {
                    if let Err(e) = write_atomic(out, json.as_bytes()) {
                        print!("{}", diagnostic(&e));
                        return exit_code_for(&e);
                    }
                }
            }
            print!("{json}");
            0
        }
        Err(e) => {
            print!("{}", diagnostic(&e));
            exit_code_for(&e)
        }
    }
}

pub fn run() -> i32 {
    run_with_args(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let r: std::result::Result<RunConfig, _> =
            serde_json::from_str(r#"{"curve": {"branch_points": [1.0, 2.0]}, "bogus": 1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn empty_branch_list_is_exit_1() {
        let file: RunConfig =
            serde_json::from_str(r#"{"curve": {"branch_points": []}}"#).unwrap();
        let err = resolve(Command::Periods, &file, &Flags::default()).unwrap_err();
        assert_eq!(exit_code_for(&err), 1);
    }

    #[test]
    fn command_mismatch_is_exit_1() {
        let file: RunConfig = serde_json::from_str(r#"{"command": "zoll"}"#).unwrap();
        let err = resolve(Command::Periods, &file, &Flags::default()).unwrap_err();
        assert_eq!(exit_code_for(&err), 1);
    }

    #[test]
    fn flags_override_file_fields() {
        let file: RunConfig = serde_json::from_str(r#"{"k": 1, "seed": 3}"#).unwrap();
        let flags = Flags {
            k: Some(2),
            ..Flags::default()
        };
        let r = resolve(Command::Zoll, &file, &flags).unwrap();
        assert_eq!(r.k, 2);
        assert_eq!(r.seed, 3);
    }

    #[test]
    fn periods_report_is_deterministic() {
        let file = RunConfig::default();
        let r = resolve(Command::Periods, &file, &Flags::default()).unwrap();
        let a = execute(Command::Periods, &r).unwrap();
        let b = execute(Command::Periods, &r).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"real_block\""));
        assert!(a.contains("\"max_circle_imag_rel\""));
    }
}
