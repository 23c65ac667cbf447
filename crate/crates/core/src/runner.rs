//! Configuration-driven runs behind the command-line tool.
//!
//! A [`RunConfig`] is a single JSON document (every field optional); the
//! command line overrides individual fields. [`run`] executes it and returns
//! the exit code together with what should go to stdout and stderr, so the
//! whole front end is testable without spawning a process.
//!
//! Exit codes: 0 success, 1 a tolerance was missed, 2 configuration error,
//! 3 numerical degeneracy.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::curve::{make_catalog_curve, AnyCurve, CurveSpec};
use crate::ellipse::{profile_table, EllipseParams};
use crate::error::{Error, Result};
use crate::output::{Format, Table};
use crate::plane::{distance_kinematics, local_limits};
use crate::reconstruct::{
    preset, PlaneReconstructionProblem, Preset, PresetOptions,
    SpaceReconstructionProblem, PRESETS,
};
use crate::space::{derivative_plane_limits, space_distance_kinematics};
use crate::suite::{run_suite, SuiteOptions};
use crate::surface::{
    surface_distance_kinematics, surface_local_first_derivative, surface_plane_rot_limits, ChartCurveSpec, SurfaceSpec,
};
use crate::vec::{Vec2, Vec3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

pub const DEFAULT_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kinematics,
    Reconstruct,
    Surface,
    Ellipse,
    Verify,
}

/// A catalog curve by name, or a full curve record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveRef {
    Name(String),
    Spec(CurveSpec),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub curve: Option<CurveRef>,
    pub surface: Option<SurfaceSpec>,
    pub chart: Option<ChartCurveSpec>,
    /// Reconstruction preset; `curve` may also name one.
    pub preset: Option<String>,
    /// `origin`, `focus`, `local`, or `point:ax,ay[,az]`.
    pub frame: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub radius: Option<f64>,
    pub pitch: Option<f64>,
    pub domain: Option<[f64; 2]>,
    pub samples: Option<usize>,
    pub step: Option<f64>,
    /// Reconstruct from second-order distance data.
    pub second_order: Option<bool>,
    pub out: Option<PathBuf>,
    /// `csv` or `json`.
    pub format: Option<String>,
    pub filter: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inject_fault: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidProblem(format!("config: {e}")))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overridden_by(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(command, curve, surface, chart, preset, frame, a, b, radius, pitch, domain, samples, step, second_order, out, format, filter);
        self.inject_fault |= other.inject_fault;
        self
    }

    fn format(&self) -> Result<Format> {
        self.format.as_deref().unwrap_or("csv").parse().map_err(Error::InvalidProblem)
    }

    fn samples(&self, default: usize) -> Result<usize> {
        match self.samples.unwrap_or(default) {
            n if n >= 2 => Ok(n),
            n => Err(Error::InvalidProblem(format!("samples must be at least 2, got {n}"))),
        }
    }

    /// Catalog parameters given as top-level fields.
    fn flag_params(&self) -> BTreeMap<String, f64> {
        [("a", self.a), ("b", self.b), ("radius", self.radius), ("pitch", self.pitch)]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }

    fn curve_spec(&self) -> Result<CurveSpec> {
        let mut spec = match &self.curve {
            Some(CurveRef::Name(name)) => CurveSpec::catalog(name, &[]),
            Some(CurveRef::Spec(spec)) => spec.clone(),
            None => return Err(Error::InvalidProblem("no curve given".into())),
        };
        spec.params.extend(self.flag_params());
        if let Some(d) = self.domain {
            spec.domain = Some(d);
        }
        Ok(spec)
    }

    fn build_curve(&self) -> Result<AnyCurve> {
        let spec = self.curve_spec()?;
        let curve = if spec.kind == "expr" { spec.build()? } else { make_catalog_curve(&spec.kind, &spec.params)? };
        match spec.domain {
            Some([t0, t1]) if spec.kind != "expr" => curve.with_domain((t0, t1)),
            _ => Ok(curve),
        }
    }
}

/// Exit code and captured output of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn error(e: &Error) -> Self {
        let code = if e.is_config_error() { EXIT_CONFIG } else { EXIT_DEGENERATE };
        Self { code, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum FrameChoice {
    Origin,
    Focus,
    Local,
    Point(Vec3),
}

fn parse_frame(s: &str) -> Result<FrameChoice> {
    match s {
        "origin" => Ok(FrameChoice::Origin),
        "focus" => Ok(FrameChoice::Focus),
        "local" => Ok(FrameChoice::Local),
        _ => {
            let coords = s
                .strip_prefix("point:")
                .ok_or_else(|| Error::InvalidProblem(format!("unknown frame {s:?}")))?;
            let v: Vec<f64> = coords
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidProblem(format!("bad point frame {s:?}")))?;
            match v[..] {
                [x, y] => Ok(FrameChoice::Point(Vec3::new(x, y, 0.0))),
                [x, y, z] => Ok(FrameChoice::Point(Vec3::new(x, y, z))),
                _ => Err(Error::InvalidProblem(format!("point frame needs 2 or 3 coordinates: {s:?}"))),
            }
        }
    }
}

fn sample_times(domain: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { domain.1 } else { domain.0 + (domain.1 - domain.0) * i as f64 / (n - 1) as f64 })
        .collect()
}

const PLANE_COLUMNS: [&str; 5] = ["t", "D", "dD", "d2D", "rot_speed"];
const SPEED_COLUMNS: [&str; 3] = ["speed_A", "speed_B", "speed_C"];
const LOCAL_COLUMNS: [&str; 2] = ["phi", "psi_speed"];

/// Focus of the configured ellipse, or a config error for other curves.
fn ellipse_focus(config: &RunConfig) -> Result<Vec2> {
    let spec = config.curve_spec()?;
    if spec.kind != "ellipse" {
        return Err(Error::InvalidProblem("the focus frame needs curve \"ellipse\"".into()));
    }
    let get = |k: &str| spec.params.get(k).copied();
    let (a, b) = (get("a").unwrap_or(f64::NAN), get("b").unwrap_or(f64::NAN));
    let p = EllipseParams::new(a, b)?;
    Ok(p.focus() + Vec2::new(get("cx").unwrap_or(0.0), get("cy").unwrap_or(0.0)))
}

/// Sample distance kinematics along a curve.
///
/// Columns: `t,D,dD,d2D,rot_speed`, then `speed_A,speed_B,speed_C` for space
/// curves, then `phi,psi_speed` in the local frame (where the first columns
/// are measured from the origin). In space `psi_speed` is the 1-2 plane
/// limit.
pub fn kinematics_table(config: &RunConfig) -> Result<Table> {
    let curve = config.build_curve()?;
    let frame = parse_frame(config.frame.as_deref().unwrap_or("origin"))?;
    let n = config.samples(DEFAULT_SAMPLES)?;
    let times = sample_times(curve.domain(), n);
    let local = frame == FrameChoice::Local;
    let mut header: Vec<&str> = PLANE_COLUMNS.to_vec();
    match curve {
        AnyCurve::Plane(c) => {
            let center = match frame {
                FrameChoice::Origin | FrameChoice::Local => Vec2::zero(),
                FrameChoice::Focus => ellipse_focus(config)?,
                FrameChoice::Point(p) if p.z == 0.0 => p.xy(),
                FrameChoice::Point(_) => return Err(Error::InvalidProblem("plane curves take a 2D point frame".into())),
            };
            if local {
                header.extend(LOCAL_COLUMNS);
            }
            let mut table = Table::new(&header);
            for t in times {
                let k = distance_kinematics(&c, center, t)?;
                let mut row = vec![t, k.d, k.dd, k.d2d, k.rot_speed];
                if local {
                    let l = local_limits(&c, t)?;
                    row.extend([l.phi, l.psi_speed]);
                }
                table.push(row);
            }
            Ok(table)
        }
        AnyCurve::Space(c) => {
            let center = match frame {
                FrameChoice::Origin | FrameChoice::Local => Vec3::zero(),
                FrameChoice::Focus => return Err(Error::InvalidProblem("the focus frame needs curve \"ellipse\"".into())),
                FrameChoice::Point(p) => p,
            };
            let shifted = c.affine(|v| v, -center);
            header.extend(SPEED_COLUMNS);
            if local {
                header.extend(LOCAL_COLUMNS);
            }
            let mut table = Table::new(&header);
            for t in times {
                let k = space_distance_kinematics(&shifted, t)?;
                let mut row = vec![t, k.d, k.dd, k.d2d, k.rot_speed];
                row.extend(k.speeds);
                if local {
                    let l = derivative_plane_limits(&shifted, t)?;
                    row.extend([l.phi, l.psi12.norm()]);
                }
                table.push(row);
            }
            Ok(table)
        }
    }
}

/// Default surface scenario: a unit sphere centered at (3, 3, 3).
fn default_surface() -> SurfaceSpec {
    let params = [("cx", 3.0), ("cy", 3.0), ("cz", 3.0)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
    SurfaceSpec { kind: "sphere".into(), params }
}

fn default_chart() -> ChartCurveSpec {
    ChartCurveSpec { u: "t".into(), v: "0.5*sin(t)".into(), domain: [0.0, TAU] }
}

/// Columns `t,D,dD,d2D,rot_speed,speed_A,speed_B,speed_C,phi,psi_A,psi_B,psi_C`
/// for a chart curve on a surface. `psi_B`/`psi_C` are not defined where
/// `u'`/`v'` vanishes and are written as `NaN` (`null` in JSON).
pub fn surface_table(config: &RunConfig) -> Result<Table> {
    let mut spec = config.surface.clone().unwrap_or_else(default_surface);
    if let Some(r) = config.radius {
        spec.params.insert("radius".into(), r);
    }
    let surface = spec.build()?;
    let mut chart = config.chart.clone().unwrap_or_else(default_chart);
    if let Some(d) = config.domain {
        chart.domain = d;
    }
    let curve = chart.build()?;
    let n = config.samples(DEFAULT_SAMPLES)?;
    let mut header: Vec<&str> = PLANE_COLUMNS.to_vec();
    header.extend(SPEED_COLUMNS);
    header.extend(["phi", "psi_A", "psi_B", "psi_C"]);
    let mut table = Table::new(&header);
    for t in sample_times(curve.domain(), n) {
        let k = surface_distance_kinematics(&surface, &curve, t)?;
        let l = surface_plane_rot_limits(&surface, &curve, t)?;
        let mut row = vec![t, k.d, k.dd, k.d2d, k.rot_speed];
        row.extend(k.speeds);
        row.extend([
            surface_local_first_derivative(&surface, &curve, t)?,
            l.psi_a,
            l.psi_b.unwrap_or(f64::NAN),
            l.psi_c.unwrap_or(f64::NAN),
        ]);
        table.push(row);
    }
    Ok(table)
}

pub fn ellipse_table(config: &RunConfig) -> Result<Table> {
    let p = EllipseParams::new(config.a.unwrap_or(2.0), config.b.unwrap_or(1.0))?;
    Ok(profile_table(&p, config.samples(361)?))
}

fn reconstruction(config: &RunConfig) -> Result<Preset> {
    let opts = PresetOptions {
        a: config.a,
        b: config.b,
        radius: config.radius,
        pitch: config.pitch,
        domain: config.domain.map(|[a, b]| (a, b)),
        step: config.step,
        second_order: config.second_order.unwrap_or(false),
    };
    let name = match (&config.preset, &config.curve) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(CurveRef::Name(n))) if PRESETS.contains(&n.as_str()) => Some(n.clone()),
        (None, None) => Some(PRESETS[0].to_string()),
        _ => None,
    };
    if let Some(name) = name {
        return preset(&name, &opts);
    }
    let curve = config.build_curve()?;
    let step = |d: (f64, f64)| config.step.unwrap_or((d.1 - d.0) * 1e-4);
    Ok(match curve {
        AnyCurve::Plane(c) => {
            let problem = PlaneReconstructionProblem::from_curve(&c, Vec2::zero(), opts.second_order, step(c.domain()))?;
            Preset::Plane { problem, reference: c, tolerance: 1e-6 }
        }
        AnyCurve::Space(c) => {
            let problem = SpaceReconstructionProblem::from_curve(&c, Vec3::zero(), opts.second_order, step(c.domain()))?;
            Preset::Space { problem, reference: c, tolerance: 1e-5 }
        }
    })
}

fn emit(config: &RunConfig, text: String) -> Result<String> {
    match &config.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| Error::InvalidProblem(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn table_command(config: &RunConfig, build: fn(&RunConfig) -> Result<Table>) -> Outcome {
    let result = config.format().and_then(|f| build(config).map(|t| t.render(f))).and_then(|s| emit(config, s));
    match result {
        Ok(s) => Outcome::ok(s),
        Err(e) => Outcome::error(&e),
    }
}

/// Run a reconstruction, write the trajectory and report `max_error=`.
///
/// The summary goes to stdout when the trajectory is written to a file and
/// to stderr otherwise, so stdout stays a clean table.
fn reconstruct_command(config: &RunConfig) -> Outcome {
    let result = (|| {
        let format = config.format()?;
        let run = reconstruction(config)?.run()?;
        let body = emit(config, run.table.render(format))?;
        Ok::<_, Error>((run, body))
    })();
    match result {
        Err(e) => Outcome::error(&e),
        Ok((run, body)) => {
            let ok = run.max_error < run.tolerance;
            let summary = format!("max_error={:.16e}\n", run.max_error);
            let verdict = if ok {
                String::new()
            } else {
                format!("max_error above tolerance {:e}\n", run.tolerance)
            };
            let code = if ok { EXIT_OK } else { EXIT_TOLERANCE };
            if config.out.is_some() {
                Outcome { code, stdout: summary, stderr: verdict }
            } else {
                Outcome { code, stdout: body, stderr: summary + &verdict }
            }
        }
    }
}

fn verify_command(config: &RunConfig) -> Outcome {
    let results = run_suite(&SuiteOptions { filter: config.filter.clone(), inject_fault: config.inject_fault });
    if results.is_empty() {
        let msg = format!("no checks match filter {:?}", config.filter.as_deref().unwrap_or(""));
        return Outcome::error(&Error::InvalidProblem(msg));
    }
    let stdout: String = results.iter().map(|r| r.line() + "\n").collect();
    let code = if results.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_TOLERANCE };
    Outcome { code, stdout, stderr: String::new() }
}

/// Execute a configuration.
pub fn run(config: &RunConfig) -> Outcome {
    match config.command {
        Some(Command::Kinematics) => table_command(config, kinematics_table),
        Some(Command::Surface) => table_command(config, surface_table),
        Some(Command::Ellipse) => table_command(config, ellipse_table),
        Some(Command::Reconstruct) => reconstruct_command(config),
        Some(Command::Verify) => verify_command(config),
        None => Outcome::error(&Error::InvalidProblem("no command given".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kin(extra: &str) -> RunConfig {
        RunConfig::from_json(&format!(r#"{{"command":"kinematics","curve":"ellipse","a":2,"b":1{extra}}}"#)).unwrap()
    }

    #[test]
    fn ellipse_rows() {
        let out = run(&kin(r#","samples":5"#));
        assert_eq!(out.code, 0, "{}", out.stderr);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "t,D,dD,d2D,rot_speed");
        assert!(lines[1].starts_with("0.0000000000000000e0,2.0000000000000000e0,"));
    }

    #[test]
    fn frames() {
        let focus = run(&kin(r#","samples":3,"frame":"focus""#));
        assert_eq!(focus.code, 0);
        let local = run(&kin(r#","samples":3,"frame":"local""#));
        assert!(local.stdout.starts_with("t,D,dD,d2D,rot_speed,phi,psi_speed\n"));
        let bad = run(&RunConfig::from_json(r#"{"command":"kinematics","curve":"circle","frame":"focus"}"#).unwrap());
        assert_eq!(bad.code, EXIT_CONFIG);
        let helix = run(&RunConfig::from_json(r#"{"command":"kinematics","curve":"helix","frame":"point:-3,-3,-1","samples":4}"#).unwrap());
        assert_eq!(helix.code, 0, "{}", helix.stderr);
        assert!(helix.stdout.starts_with("t,D,dD,d2D,rot_speed,speed_A,speed_B,speed_C\n"));
    }

    #[test]
    fn degeneracy_exit() {
        let c = RunConfig::from_json(r#"{"command":"kinematics","curve":"circle","frame":"point:1,0","samples":5}"#).unwrap();
        let out = run(&c);
        assert_eq!(out.code, EXIT_DEGENERATE);
        assert!(out.stderr.contains("CenterOnCurve at t="), "{}", out.stderr);
    }

    #[test]
    fn config_errors() {
        assert!(RunConfig::from_json(r#"{"command":"kinematics","bogus":1}"#).is_err());
        for json in [
            r#"{"command":"kinematics","curve":"nope"}"#,
            r#"{"command":"kinematics","curve":"ellipse","a":1,"b":2}"#,
            r#"{"command":"kinematics","curve":"circle","samples":1}"#,
            r#"{"command":"kinematics","curve":"circle","format":"xml"}"#,
            r#"{"command":"verify","filter":"no-such-tag"}"#,
            r#"{}"#,
        ] {
            assert_eq!(run(&RunConfig::from_json(json).unwrap()).code, EXIT_CONFIG, "{json}");
        }
    }

    #[test]
    fn json_parity() {
        let csv = run(&kin(r#","samples":4"#)).stdout;
        let json = run(&kin(r#","samples":4,"format":"json""#)).stdout;
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        for (row, obj) in lines.zip(v.as_array().unwrap()) {
            for (k, cell) in header.iter().zip(row.split(',')) {
                assert_eq!(obj[*k].as_f64().unwrap(), cell.parse::<f64>().unwrap());
            }
        }
    }

    #[test]
    fn reconstruct_exit_codes() {
        let ok = run(&RunConfig::from_json(r#"{"command":"reconstruct","curve":"ellipse-origin"}"#).unwrap());
        assert_eq!(ok.code, 0);
        assert!(ok.stderr.starts_with("max_error="));
        let coarse = run(&RunConfig::from_json(&format!(r#"{{"command":"reconstruct","preset":"ellipse-origin","step":{}}}"#, TAU / 100.0)).unwrap());
        assert_eq!(coarse.code, EXIT_TOLERANCE);
        let crossing = run(&RunConfig::from_json(r#"{"command":"reconstruct","preset":"helix","radius":3,"domain":[0,6]}"#).unwrap());
        assert_eq!(crossing.code, EXIT_DEGENERATE);
        assert!(crossing.stderr.contains("ProjectionCollapse"));
    }

    #[test]
    fn surface_and_ellipse_commands() {
        let s = run(&RunConfig::from_json(r#"{"command":"surface","samples":3}"#).unwrap());
        assert_eq!(s.code, 0, "{}", s.stderr);
        assert_eq!(s.stdout.lines().count(), 4);
        let e = run(&RunConfig::from_json(r#"{"command":"ellipse","samples":3}"#).unwrap());
        assert!(e.stdout.starts_with("theta,xi1,d1,d2,d3,rot_speed_origin,rot_speed_focus\n"));
    }

    #[test]
    fn overrides() {
        let base = RunConfig::from_json(r#"{"command":"kinematics","curve":"circle","samples":10}"#).unwrap();
        let merged = base.overridden_by(RunConfig { samples: Some(3), ..Default::default() });
        assert_eq!(merged.samples, Some(3));
        assert_eq!(merged.curve, Some(CurveRef::Name("circle".into())));
    }
}
