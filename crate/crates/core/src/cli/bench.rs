//! Bundled desk-scale benchmarks and their acceptance checks.

use std::path::{Path, PathBuf};

use clap::ValueEnum;

use super::{execute, Check, CliError, RunArtifacts};
use crate::io::{parse_config_str, RunConfig};
use crate::mesh::Mesh;
use crate::solver::{RecordRow, State};

/// Nodal phase field above which a node counts as cracked.
pub const CRACKED: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Benchmark {
    ThreePointBending,
    NotchedPlateHole,
    SenbQualitative,
}

/// A finished benchmark with its checks.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub artifacts: RunArtifacts,
    pub checks: Vec<Check>,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [Benchmark::ThreePointBending, Benchmark::NotchedPlateHole, Benchmark::SenbQualitative];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::ThreePointBending => "three-point-bending",
            Benchmark::NotchedPlateHole => "notched-plate-hole",
            Benchmark::SenbQualitative => "senb-qualitative",
        }
    }

    /// Bundled configuration text.
    pub fn config_text(self) -> &'static str {
        match self {
            Benchmark::ThreePointBending => include_str!("../../resources/benchmarks/three_point_bending.toml"),
            Benchmark::NotchedPlateHole => include_str!("../../resources/benchmarks/notched_plate_hole.toml"),
            Benchmark::SenbQualitative => include_str!("../../resources/benchmarks/senb_qualitative.toml"),
        }
    }

    /// Directory that relative mesh paths in the bundled configurations
    /// resolve against.
    pub fn resource_dir() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("resources").join("benchmarks")
    }

    pub fn config(self) -> Result<RunConfig, CliError> {
        Ok(parse_config_str(self.config_text())?)
    }

    /// Runs `config` (normally [`Benchmark::config`] with overrides) and
    /// checks the result.
    pub fn run(self, config: &RunConfig) -> Result<BenchReport, CliError> {
        let base = Self::resource_dir();
        match self {
            Benchmark::ThreePointBending => {
                let artifacts = execute(config, &base, |_, _, _| {})?;
                let mesh = config.build_mesh(&base)?;
                let checks = bending_checks(&mesh, &artifacts);
                Ok(BenchReport { artifacts, checks })
            }
            Benchmark::NotchedPlateHole => {
                let mut tracker = PlateTracker::default();
                let artifacts = execute(config, &base, |mesh, row, state| tracker.observe(mesh, row, state))?;
                let checks = tracker.events().checks();
                Ok(BenchReport { artifacts, checks })
            }
            Benchmark::SenbQualitative => {
                let mut tracker = SenbTracker::default();
                let artifacts = execute(config, &base, |mesh, row, state| tracker.observe(mesh, row, state))?;
                let checks = tracker.checks();
                Ok(BenchReport { artifacts, checks })
            }
        }
    }
}

/// Number of peaks in `values`: a peak is a maximum followed by a drop of
/// more than `tol`, measured from the previous trough.
pub fn count_peaks(values: &[f64], tol: f64) -> usize {
    let Some(&first) = values.first() else { return 0 };
    let (mut peaks, mut rising, mut extreme) = (0, true, first);
    for &v in values {
        if rising {
            if v > extreme {
                extreme = v;
            } else if v < extreme - tol {
                peaks += 1;
                rising = false;
                extreme = v;
            }
        } else if v < extreme {
            extreme = v;
        } else if v > extreme + tol {
            rising = true;
            extreme = v;
        }
    }
    peaks
}

/// Midspan of the bending beam (mm).
pub const BEAM_MIDSPAN: f64 = 5.0;

fn bending_checks(mesh: &Mesh, artifacts: &RunArtifacts) -> Vec<Check> {
    let state = &artifacts.outcome.state;
    // mean phase field per vertical grid line
    let mut columns: Vec<(f64, f64, usize)> = Vec::new();
    for (p, &phi) in mesh.nodes().iter().zip(&state.phi) {
        match columns.iter_mut().find(|c| c.0 == p[0]) {
            Some(c) => {
                c.1 += phi;
                c.2 += 1;
            }
            None => columns.push((p[0], phi, 1)),
        }
    }
    columns.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = columns.iter().enumerate().fold(0, |b, (i, c)| if c.1 / c.2 as f64 > columns[b].1 / columns[b].2 as f64 { i } else { b });
    let x_best = columns[best].0;
    let centre = columns.iter().enumerate().fold(0, |b, (i, c)| {
        if (c.0 - BEAM_MIDSPAN).abs() < (columns[b].0 - BEAM_MIDSPAN).abs() {
            i
        } else {
            b
        }
    });
    let width = columns.get(centre + 1).map_or(f64::INFINITY, |c| c.0 - columns[centre].0);
    let band = mesh
        .nodes()
        .iter()
        .zip(&state.phi)
        .filter(|(_, &phi)| phi > CRACKED)
        .fold(0.0f64, |m, (p, _)| m.max((p[0] - BEAM_MIDSPAN).abs()));

    let force: Vec<f64> = artifacts.outcome.record.rows.iter().map(|r| r.reaction.abs()).collect();
    let peak = force.iter().fold(0.0f64, |m, &f| m.max(f));
    let last = force.last().copied().unwrap_or(f64::NAN);
    let peaks = count_peaks(&force, 0.01 * peak);
    vec![
        Check::flag(
            "crack column within one element of midspan",
            (x_best - BEAM_MIDSPAN).abs() <= width,
            format!("column x = {x_best:.4}, element width {width:.4}"),
        ),
        Check::flag("cracked nodes form one midspan band", band <= 0.5, format!("max |x - 5| of cracked nodes {band:.4}")),
        Check::flag("force curve has exactly one peak", peaks == 1, format!("{peaks} peaks, peak force {peak:.5}")),
        Check::flag("softening below 20 % of peak", last < 0.2 * peak, format!("final force {last:.5}")),
    ]
}

/// Notch tip and hole of the plate (mm).
pub const PLATE_NOTCH_TIP: [f64; 2] = [10.0, 65.0];
pub const PLATE_HOLE_CENTRE: [f64; 2] = [36.5, 51.0];
pub const PLATE_HOLE_RADIUS: f64 = 10.0;
pub const PLATE_WIDTH: f64 = 65.0;

/// Crack features of one plate increment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateSample {
    pub increment: usize,
    pub reaction: f64,
    pub cracked: usize,
    /// Cracked node within 2 mm of the notch tip.
    pub at_notch: bool,
    /// Cracked node on the left half of the hole boundary.
    pub at_hole: bool,
    /// Cracked node right of the hole.
    pub far_side: bool,
    /// Cracked node within 1 mm of the right edge.
    pub at_edge: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlateTracker {
    pub samples: Vec<PlateSample>,
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl PlateTracker {
    pub fn observe(&mut self, mesh: &Mesh, row: &RecordRow, state: &State) {
        let mut s = PlateSample {
            increment: row.increment,
            reaction: row.reaction,
            cracked: 0,
            at_notch: false,
            at_hole: false,
            far_side: false,
            at_edge: false,
        };
        let [cx, cy] = PLATE_HOLE_CENTRE;
        for (p, &phi) in mesh.nodes().iter().zip(&state.phi) {
            if phi <= CRACKED {
                continue;
            }
            s.cracked += 1;
            s.at_notch |= distance(*p, PLATE_NOTCH_TIP) <= 2.0;
            s.at_hole |= p[0] < cx && (distance(*p, PLATE_HOLE_CENTRE) - PLATE_HOLE_RADIUS) <= 1.5;
            let right = p[0] >= cx + PLATE_HOLE_RADIUS && (p[1] - cy).abs() <= PLATE_HOLE_RADIUS;
            s.far_side |= right;
            s.at_edge |= right && p[0] >= PLATE_WIDTH - 1.0;
        }
        self.samples.push(s);
    }

    pub fn events(&self) -> PlateEvents {
        let s = &self.samples;
        let first = |f: &dyn Fn(&PlateSample) -> bool| s.iter().position(f);
        let initiation = first(&|p| p.cracked > 0);
        let arrest = first(&|p| p.at_hole && !p.far_side);
        let nucleation = first(&|p| p.far_side);
        let force: Vec<f64> = s.iter().map(|p| p.reaction.abs()).collect();
        let peak = force.iter().fold(0.0f64, |m, &f| m.max(f));
        PlateEvents {
            samples: s.clone(),
            initiation,
            arrest,
            nucleation,
            drops: count_peaks(&force, 0.1 * peak),
        }
    }
}

/// Sample indices of the plate's cracking events.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateEvents {
    pub samples: Vec<PlateSample>,
    pub initiation: Option<usize>,
    pub arrest: Option<usize>,
    pub nucleation: Option<usize>,
    /// Peaks of the force curve separated by drops of 10 % of the maximum.
    pub drops: usize,
}

impl PlateEvents {
    pub fn checks(&self) -> Vec<Check> {
        let s = &self.samples;
        let inc = |i: Option<usize>| i.map_or("never".to_owned(), |i| format!("increment {}", s[i].increment));
        let from_notch = self.initiation.is_some_and(|i| s[i].at_notch && !s[i].far_side);
        let arrest_first = matches!((self.arrest, self.nucleation), (Some(a), Some(n)) if a < n);
        let plateau = match (self.arrest, self.nucleation) {
            (Some(a), Some(n)) if n >= a + 3 => {
                let f = |i: usize| s[i].reaction.abs();
                (a..n - 1).all(|i| f(i + 1) >= f(i) * (1.0 - 1e-3))
            }
            _ => false,
        };
        let last = s.last();
        let held = self.nucleation.map_or(0.0, |n| s[..n].iter().skip(self.arrest.unwrap_or(n)).fold(0.0f64, |m, p| m.max(p.reaction.abs())));
        let final_drop = last.is_some_and(|l| l.at_edge && l.reaction.abs() < 0.2 * held);
        vec![
            Check::flag("(a) crack starts at the notch tip", from_notch, inc(self.initiation)),
            Check::flag("(b) crack arrested at the hole", self.arrest.is_some() && arrest_first, inc(self.arrest)),
            Check::flag(
                "(c) load plateau while arrested",
                plateau,
                format!("{} to {}", inc(self.arrest), inc(self.nucleation)),
            ),
            Check::flag("(d) second crack on the far side of the hole", arrest_first, inc(self.nucleation)),
            Check::flag(
                "(e) final drop",
                final_drop,
                format!("final force {:.3} vs {held:.3} held", last.map_or(f64::NAN, |l| l.reaction.abs())),
            ),
            Check::flag("force curve has two distinct drops", self.drops == 2, format!("{} drops", self.drops)),
        ]
    }
}

/// Notch corners of the single-edge notched beam (mm).
pub const SENB_LEFT_CORNER: [f64; 2] = [217.5, 80.0];
pub const SENB_RIGHT_CORNER: [f64; 2] = [222.5, 80.0];

/// Cracked nodes within this distance of a notch corner seed the crack.
pub const SENB_NOTCH_REACH: f64 = 5.0;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenbTracker {
    /// Cracked node nearest a notch corner when the first crack appears.
    pub first: Option<[f64; 2]>,
    /// Lowest node of the crack grown from the notch at the last increment.
    pub tip: Option<[f64; 2]>,
}

fn notch_distance(p: [f64; 2]) -> f64 {
    distance(p, SENB_LEFT_CORNER).min(distance(p, SENB_RIGHT_CORNER))
}

/// Cracked nodes connected to the notch through cracked element edges or
/// diagonals; damage at the load pads stays out.
fn notch_crack(mesh: &Mesh, phi: &[f64]) -> Vec<usize> {
    let cracked: Vec<bool> = phi.iter().map(|&v| v > CRACKED).collect();
    let mut adjacent = vec![Vec::new(); mesh.node_count()];
    for e in mesh.elements() {
        for &a in &e.nodes {
            for &b in &e.nodes {
                if a != b && cracked[a] && cracked[b] {
                    adjacent[a].push(b);
                }
            }
        }
    }
    let mut seen = vec![false; mesh.node_count()];
    let mut stack: Vec<usize> =
        (0..mesh.node_count()).filter(|&i| cracked[i] && notch_distance(mesh.nodes()[i]) <= SENB_NOTCH_REACH).collect();
    stack.iter().for_each(|&i| seen[i] = true);
    let mut out = Vec::new();
    while let Some(i) = stack.pop() {
        out.push(i);
        for &j in &adjacent[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    out.sort_unstable();
    out
}

impl SenbTracker {
    pub fn observe(&mut self, mesh: &Mesh, _row: &RecordRow, state: &State) {
        let crack: Vec<[f64; 2]> = notch_crack(mesh, &state.phi).into_iter().map(|i| mesh.nodes()[i]).collect();
        if self.first.is_none() {
            self.first = crack.iter().copied().min_by(|a, b| notch_distance(*a).total_cmp(&notch_distance(*b)));
        }
        self.tip = crack.into_iter().min_by(|a, b| a[1].total_cmp(&b[1]));
    }

    pub fn checks(&self) -> Vec<Check> {
        let right_corner = self.first.is_some_and(|p| distance(p, SENB_RIGHT_CORNER) < distance(p, SENB_LEFT_CORNER));
        let curves = self.tip.is_some_and(|t| t[0] > SENB_RIGHT_CORNER[0] + 5.0 && t[1] < SENB_RIGHT_CORNER[1] - 20.0);
        let show = |p: Option<[f64; 2]>| p.map_or("none".to_owned(), |p| format!("({:.1}, {:.1})", p[0], p[1]));
        vec![
            Check::flag("crack starts at the right notch corner", right_corner, format!("first cracked node {}", show(self.first))),
            Check::flag("crack curves toward the support side", curves, format!("crack tip {}", show(self.tip))),
        ]
    }
}
