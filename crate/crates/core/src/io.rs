//! Scenario files and delimited-text exports.
//!
//! Scenario files are TOML:
//!
//! ```toml
//! element_pattern = "omni"        # or "short_dipole"
//! main_user = 0
//!
//! [[users]]
//! snr_db = 10.0
//! paths = [{ aoa_deg = 45.0, gain_re = 1.0, gain_im = 0.0 }]
//! ```
//!
//! Angles are in degrees and SNRs in dB at the file boundary. Exports are
//! comma-separated with a one-line header and no timestamps, so identical
//! inputs give byte-identical files.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{Angle, ArrayGeometry};
use crate::leakage::leakage_closed;
use crate::scenario::{ElementPattern, Path, SweepRow, User, UserScenario};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::Path as FsPath;

/// Floor applied to `20·log10|AF|`.
pub const DB_FLOOR: f64 = -120.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternName {
    #[default]
    Omni,
    ShortDipole,
}

impl From<PatternName> for ElementPattern {
    fn from(p: PatternName) -> Self {
        match p {
            PatternName::Omni => ElementPattern::Omni,
            PatternName::ShortDipole => ElementPattern::ShortDipole,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub aoa_deg: f64,
    #[serde(default = "one")]
    pub gain_re: f64,
    #[serde(default)]
    pub gain_im: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserEntry {
    pub snr_db: f64,
    pub paths: Vec<PathEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub element_pattern: PatternName,
    #[serde(default)]
    pub main_user: usize,
    pub users: Vec<UserEntry>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string() + &span_hint(&e)))
    }

    pub fn read(path: &FsPath) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Converts to the in-memory scenario, naming the offending field on
    /// failure.
    pub fn to_scenario(&self) -> Result<UserScenario> {
        if self.users.is_empty() {
            return Err(Error::Parse("users: at least one user is required".into()));
        }
        if self.main_user >= self.users.len() {
            return Err(Error::Parse(format!(
                "main_user: index {} out of range for {} users",
                self.main_user,
                self.users.len()
            )));
        }
        let mut users = Vec::with_capacity(self.users.len());
        for (i, u) in self.users.iter().enumerate() {
            if !u.snr_db.is_finite() {
                return Err(Error::Parse(format!("users[{i}].snr_db: must be finite")));
            }
            if u.paths.is_empty() {
                return Err(Error::Parse(format!("users[{i}].paths: must not be empty")));
            }
            let mut paths = Vec::with_capacity(u.paths.len());
            for (j, p) in u.paths.iter().enumerate() {
                let aoa = Angle::from_degrees(p.aoa_deg).map_err(|_| {
                    Error::Parse(format!(
                        "users[{i}].paths[{j}].aoa_deg: {} is outside [-90, 90]",
                        p.aoa_deg
                    ))
                })?;
                if !(p.gain_re.is_finite() && p.gain_im.is_finite()) {
                    return Err(Error::Parse(format!(
                        "users[{i}].paths[{j}].gain_re/gain_im: must be finite"
                    )));
                }
                paths.push(Path {
                    aoa,
                    gain: Complex64::new(p.gain_re, p.gain_im),
                });
            }
            if paths.iter().all(|p| p.gain == Complex64::new(0.0, 0.0)) {
                return Err(Error::Parse(format!(
                    "users[{i}].paths: total path gain is zero"
                )));
            }
            users.push(User {
                paths,
                snr: 10f64.powf(u.snr_db / 10.0),
            });
        }
        UserScenario::new(users, self.main_user, self.element_pattern.into())
    }

    /// Two line-of-sight users at 45° and on that steering's first grating
    /// lobe for `d = 0.6`, both at 10 dB.
    pub fn scaffold() -> Self {
        let gl = (45f64.to_radians().sin() - 1.0 / 0.6).asin().to_degrees();
        ScenarioFile {
            element_pattern: PatternName::Omni,
            main_user: 0,
            users: vec![
                UserEntry {
                    snr_db: 10.0,
                    paths: vec![PathEntry {
                        aoa_deg: 45.0,
                        gain_re: 1.0,
                        gain_im: 0.0,
                    }],
                },
                UserEntry {
                    snr_db: 10.0,
                    paths: vec![PathEntry {
                        aoa_deg: gl,
                        gain_re: 1.0,
                        gain_im: 0.0,
                    }],
                },
            ],
        }
    }
}

fn span_hint(e: &toml::de::Error) -> String {
    match e.span() {
        Some(span) => format!(" (at bytes {}..{})", span.start, span.end),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternRow {
    pub theta_deg: f64,
    pub af: f64,
    pub af_db: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PatternTable {
    pub rows: Vec<PatternRow>,
}

pub fn magnitude_db(af: f64) -> f64 {
    if af <= 0.0 {
        return DB_FLOOR;
    }
    (20.0 * af.log10()).max(DB_FLOOR)
}

/// Probe angles `-90°, -90° + step, …, 90°`.
pub fn angle_grid_deg(resolution_deg: f64) -> Result<Vec<f64>> {
    if !(resolution_deg.is_finite() && resolution_deg > 0.0 && resolution_deg <= 180.0) {
        return Err(Error::InvalidRequest(format!(
            "resolution must be in (0, 180] degrees, got {resolution_deg}"
        )));
    }
    let steps = (180.0 / resolution_deg - 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps)
        .map(|i| -90.0 + i as f64 * resolution_deg)
        .collect();
    if *grid.last().expect("nonempty") < 90.0 - 1e-9 {
        grid.push(90.0);
    } else {
        *grid.last_mut().expect("nonempty") = 90.0;
    }
    Ok(grid)
}

/// `|α(θ, θ₁)|` over `θ ∈ [-90°, 90°]`.
pub fn pattern_table(
    geom: &ArrayGeometry,
    theta1: Angle,
    resolution_deg: f64,
) -> Result<PatternTable> {
    pattern_table_with(geom, theta1, resolution_deg, Exec::default())
}

pub fn pattern_table_with(
    geom: &ArrayGeometry,
    theta1: Angle,
    resolution_deg: f64,
    exec: Exec,
) -> Result<PatternTable> {
    let grid = angle_grid_deg(resolution_deg)?;
    let rows = exec.map(&grid, |&t| {
        let theta = Angle::from_degrees(t).expect("grid in range");
        let af = leakage_closed(geom, theta1, theta).norm();
        PatternRow {
            theta_deg: t,
            af,
            af_db: magnitude_db(af),
        }
    });
    Ok(PatternTable { rows })
}

impl PatternTable {
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("theta_deg,af,af_db\n");
        for r in &self.rows {
            writeln!(out, "{},{:.15e},{:.6}", r.theta_deg, r.af, r.af_db).expect("string write");
        }
        out
    }

    pub fn parse_delimited(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some("theta_deg,af,af_db") {
            return Err(Error::Parse("pattern table header".into()));
        }
        let rows = lines
            .enumerate()
            .map(|(i, line)| {
                let f: Vec<f64> = line
                    .split(',')
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
                match f.as_slice() {
                    &[theta_deg, af, af_db] => Ok(PatternRow {
                        theta_deg,
                        af,
                        af_db,
                    }),
                    _ => Err(Error::Parse(format!("row {}: expected 3 columns", i + 1))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(PatternTable { rows })
    }
}

pub fn sweep_to_delimited(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,total_leakage,sinr\n");
    for r in rows {
        writeln!(out, "{},{:.15e},{:.15e}", r.n, r.total_leakage, r.sinr).expect("string write");
    }
    out
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &FsPath, contents: &str) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(std::io::Error::other("output path has no file name")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}
