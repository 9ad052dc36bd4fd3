//! Run configuration files.
//!
//! ```toml
//! [material]
//! E = 100.0
//! nu = 0.0
//! Gc = 0.1
//! ft = 1.0
//! ell = 0.1
//!
//! [model]
//! model = "pfczm-exponential"
//! split = "pfczm-stress"
//! formulation = "hybrid"
//!
//! [solver]
//! scheme = "monolithic"
//! increments = 100
//!
//! [mesh]
//! generator = "rect"
//! width = 10.0
//! height = 2.0
//! nx = 50
//! ny = 10
//! regime = "plane-strain"
//!
//! [[bc]]
//! node_set = "left"
//! dof = "x"
//! value = 0.0
//! schedule = "fixed"
//!
//! [output]
//! directory = "out"
//! reaction_set = "right"
//! reaction_dof = "x"
//! ```

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use toml::de::{DeTable, DeValue};
use toml::Spanned;

use crate::assembly::PhasePath;
use crate::constitutive::{Formulation, MaterialParams, Model, ModelChoice, Split, DEFAULT_KAPPA};
use crate::mesh::{generate_graded, generate_rect, parse_gmsh, ElementKind, Mesh, MeshError, Regime};
use crate::solver::{BoundaryCondition, Dof, FailurePolicy, ReactionSpec, Schedule, Scheme, SolveConfig};

/// Where the mesh comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    /// Gmsh file, relative paths resolved against the config directory.
    File(PathBuf),
    Rect { width: f64, height: f64, nx: usize, ny: usize, kind: ElementKind },
    /// Tensor-product grid on explicit grid lines.
    Grid { x: Vec<f64>, y: Vec<f64>, kind: ElementKind },
}

/// Node set made of every node inside an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    pub name: String,
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub source: MeshSource,
    pub regime: Regime,
    pub node_sets: Vec<BoxSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: PathBuf,
    /// Write a snapshot every `n` increments; 0 writes only the last one.
    pub snapshot_stride: usize,
    pub reaction: Option<ReactionSpec>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { directory: PathBuf::from("output"), snapshot_stride: 0, reaction: None }
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialParams,
    pub choice: ModelChoice,
    pub solver: SolveConfig,
    pub mesh: MeshSpec,
    pub bcs: Vec<BoundaryCondition>,
    pub output: OutputSpec,
}

/// One configuration fault with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}:{}: {}", self.line, self.column, self.message)
        } else {
            write!(f, "{}:{}: `{}`: {}", self.line, self.column, self.key, self.message)
        }
    }
}

/// Every fault found in a configuration file, sorted by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors {
    pub path: Option<PathBuf>,
    pub errors: Vec<ConfigError>,
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = self.path.as_ref().map(|p| format!("{}:", p.display())).unwrap_or_default();
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{prefix}{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Reads and validates a configuration file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigErrors> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigErrors {
        path: Some(path.to_owned()),
        errors: vec![ConfigError { line: 0, column: 0, key: String::new(), message: format!("cannot read file: {e}") }],
    })?;
    parse_config_str(&text).map_err(|mut e| {
        e.path = Some(path.to_owned());
        e
    })
}

/// Validates configuration text, collecting every error.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigErrors> {
    let mut r = Reader { text, errors: Vec::new() };
    let (root, syntax) = DeTable::parse_recoverable(text);
    for e in &syntax {
        let span = e.span().unwrap_or(0..0);
        r.error(span, "", e.message().trim().to_owned());
    }
    let config = if syntax.is_empty() { r.document(&root) } else { None };
    if r.errors.is_empty() {
        if let Some(c) = config {
            return Ok(c);
        }
    }
    r.errors.sort_by_key(|e| (e.line, e.column));
    r.errors.dedup();
    Err(ConfigErrors { path: None, errors: r.errors })
}

struct Reader<'t> {
    text: &'t str,
    errors: Vec<ConfigError>,
}

type Table<'i> = Spanned<DeTable<'i>>;

const ROOT_KEYS: &[&str] = &["material", "model", "solver", "mesh", "bc", "output"];
const MATERIAL_KEYS: &[&str] = &["E", "nu", "Gc", "ft", "ell", "kappa"];
const MODEL_KEYS: &[&str] = &["model", "split", "formulation"];
const SOLVER_KEYS: &[&str] = &[
    "scheme",
    "increments",
    "max_iterations",
    "tol_u",
    "tol_phi",
    "allow_long_iteration",
    "on_failure",
    "max_bisections",
    "phase_path",
];
const MESH_KEYS: &[&str] = &["path", "generator", "width", "height", "nx", "ny", "x", "y", "element", "regime", "node_set"];
const BOX_KEYS: &[&str] = &["name", "min", "max"];
const BC_KEYS: &[&str] = &["node_set", "dof", "value", "schedule"];
const OUTPUT_KEYS: &[&str] = &["directory", "snapshot_stride", "reaction_set", "reaction_dof"];

impl<'t> Reader<'t> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
        (line, column)
    }

    fn error(&mut self, span: Range<usize>, key: &str, message: impl Into<String>) {
        let (line, column) = self.position(span.start);
        self.errors.push(ConfigError { line, column, key: key.to_owned(), message: message.into() });
    }

    fn check_keys(&mut self, table: &Table<'_>, allowed: &[&str], prefix: &str) {
        for (k, _) in table.get_ref().iter() {
            if !allowed.contains(&k.get_ref().as_ref()) {
                self.error(k.span(), &join(prefix, k.get_ref()), format!("unknown key (expected one of: {})", allowed.join(", ")));
            }
        }
    }

    fn value<'a, 'i>(&mut self, table: &'a Table<'i>, key: &str) -> Option<&'a Spanned<DeValue<'i>>> {
        table.get_ref().get(key)
    }

    fn section<'a, 'i>(&mut self, root: &'a Table<'i>, key: &str, required: bool) -> Option<Table<'i>> {
        match self.value(root, key) {
            None => {
                if required {
                    self.error(0..0, key, "missing required section");
                }
                None
            }
            Some(v) => match v.get_ref() {
                DeValue::Table(t) => Some(Spanned::new(v.span(), t.clone())),
                other => {
                    self.error(v.span(), key, format!("expected a table, found {}", other.type_str()));
                    None
                }
            },
        }
    }

    fn missing(&mut self, table: &Table<'_>, key: &str) {
        let span = table.span();
        self.error(span, key, "missing required key");
    }

    fn float(&mut self, table: &Table<'_>, prefix: &str, key: &str, required: bool) -> Option<f64> {
        let v = match self.value(table, key) {
            Some(v) => v,
            None => {
                if required {
                    self.missing(table, &join(prefix, key));
                }
                return None;
            }
        };
        let parsed = match v.get_ref() {
            DeValue::Float(f) => parse_float(f.as_str()),
            DeValue::Integer(i) => parse_int(i.as_str(), i.radix()).map(|i| i as f64),
            other => {
                let msg = format!("expected a number, found {}", other.type_str());
                self.error(v.span(), &join(prefix, key), msg);
                return None;
            }
        };
        match parsed {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.error(v.span(), &join(prefix, key), "expected a finite number");
                None
            }
        }
    }

    fn count(&mut self, table: &Table<'_>, prefix: &str, key: &str, required: bool) -> Option<usize> {
        let v = match self.value(table, key) {
            Some(v) => v,
            None => {
                if required {
                    self.missing(table, &join(prefix, key));
                }
                return None;
            }
        };
        match v.get_ref() {
            DeValue::Integer(i) => match parse_int(i.as_str(), i.radix()).and_then(|n| usize::try_from(n).ok()) {
                Some(n) => Some(n),
                None => {
                    self.error(v.span(), &join(prefix, key), "expected a non-negative integer");
                    None
                }
            },
            other => {
                let msg = format!("expected an integer, found {}", other.type_str());
                self.error(v.span(), &join(prefix, key), msg);
                None
            }
        }
    }

    fn boolean(&mut self, table: &Table<'_>, prefix: &str, key: &str) -> Option<bool> {
        let v = self.value(table, key)?;
        match v.get_ref() {
            DeValue::Boolean(b) => Some(*b),
            other => {
                let msg = format!("expected a boolean, found {}", other.type_str());
                self.error(v.span(), &join(prefix, key), msg);
                None
            }
        }
    }

    fn string(&mut self, table: &Table<'_>, prefix: &str, key: &str, required: bool) -> Option<(String, Range<usize>)> {
        let v = match self.value(table, key) {
            Some(v) => v,
            None => {
                if required {
                    self.missing(table, &join(prefix, key));
                }
                return None;
            }
        };
        match v.get_ref() {
            DeValue::String(s) => Some((s.to_string(), v.span())),
            other => {
                let msg = format!("expected a string, found {}", other.type_str());
                self.error(v.span(), &join(prefix, key), msg);
                None
            }
        }
    }

    fn named<T: FromStr>(&mut self, table: &Table<'_>, prefix: &str, key: &str, required: bool) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        let (s, span) = self.string(table, prefix, key, required)?;
        match s.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(span, &join(prefix, key), e.to_string());
                None
            }
        }
    }

    fn floats(&mut self, table: &Table<'_>, prefix: &str, key: &str, required: bool) -> Option<Vec<f64>> {
        let v = match self.value(table, key) {
            Some(v) => v,
            None => {
                if required {
                    self.missing(table, &join(prefix, key));
                }
                return None;
            }
        };
        let DeValue::Array(items) = v.get_ref() else {
            let msg = format!("expected an array of numbers, found {}", v.get_ref().type_str());
            self.error(v.span(), &join(prefix, key), msg);
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items.iter() {
            let x = match item.get_ref() {
                DeValue::Float(f) => parse_float(f.as_str()),
                DeValue::Integer(i) => parse_int(i.as_str(), i.radix()).map(|i| i as f64),
                _ => None,
            };
            match x {
                Some(x) if x.is_finite() => out.push(x),
                _ => {
                    self.error(item.span(), &join(prefix, key), "expected a finite number");
                    return None;
                }
            }
        }
        Some(out)
    }

    fn tables<'i>(&mut self, root: &Table<'i>, key: &str) -> Vec<Table<'i>> {
        let Some(v) = root.get_ref().get(key) else { return Vec::new() };
        match v.get_ref() {
            DeValue::Array(items) => items
                .iter()
                .filter_map(|item| match item.get_ref() {
                    DeValue::Table(t) => Some(Spanned::new(item.span(), t.clone())),
                    other => {
                        let msg = format!("expected a table, found {}", other.type_str());
                        self.error(item.span(), key, msg);
                        None
                    }
                })
                .collect(),
            other => {
                let msg = format!("expected an array of tables ([[{key}]]), found {}", other.type_str());
                self.error(v.span(), key, msg);
                Vec::new()
            }
        }
    }

    fn document(&mut self, root: &Table<'_>) -> Option<RunConfig> {
        self.check_keys(root, ROOT_KEYS, "");
        let model_table = self.section(root, "model", true);
        let choice = model_table.as_ref().and_then(|t| self.model(t));
        let material = self.section(root, "material", true).and_then(|t| self.material(&t, choice));
        let solver = match self.section(root, "solver", false) {
            Some(t) => self.solver(&t),
            None => Some(SolveConfig::default()),
        };
        let mesh = self.section(root, "mesh", true).and_then(|t| self.mesh(&t));
        let bcs = self.bcs(root);
        let output = match self.section(root, "output", false) {
            Some(t) => self.output(&t),
            None => Some(OutputSpec::default()),
        };
        Some(RunConfig { material: material?, choice: choice?, solver: solver?, mesh: mesh?, bcs: bcs?, output: output? })
    }

    fn model(&mut self, t: &Table<'_>) -> Option<ModelChoice> {
        self.check_keys(t, MODEL_KEYS, "model");
        let model: Option<Model> = self.named(t, "model", "model", true);
        let split: Option<Split> = self.named(t, "model", "split", false);
        let formulation: Option<Formulation> = self.named(t, "model", "formulation", false);
        let model = model?;
        let split = split.unwrap_or(if model.is_pfczm() { Split::PfczmStress } else { Split::Isotropic });
        let formulation = formulation.unwrap_or(Formulation::Hybrid);
        match ModelChoice::new(model, split, formulation) {
            Ok(c) => Some(c),
            Err(e) => {
                self.error(t.span(), "model", e.to_string());
                None
            }
        }
    }

    fn material(&mut self, t: &Table<'_>, choice: Option<ModelChoice>) -> Option<MaterialParams> {
        self.check_keys(t, MATERIAL_KEYS, "material");
        let youngs = self.float(t, "material", "E", true);
        let poisson = self.float(t, "material", "nu", true);
        let toughness = self.float(t, "material", "Gc", true);
        let length_scale = self.float(t, "material", "ell", true);
        let strength = self.float(t, "material", "ft", false);
        let kappa = self.float(t, "material", "kappa", false).unwrap_or(DEFAULT_KAPPA);
        if let Some(c) = choice {
            if c.model.is_pfczm() && t.get_ref().get("ft").is_none() {
                self.missing(t, "material.ft");
                return None;
            }
        }
        let params = MaterialParams {
            youngs: youngs?,
            poisson: poisson?,
            toughness: toughness?,
            strength,
            length_scale: length_scale?,
            residual_stiffness: kappa,
        };
        if let Some(c) = choice {
            if let Err(e) = params.validate(c.model) {
                self.error(t.span(), "material", e.to_string());
                return None;
            }
        }
        Some(params)
    }

    fn solver(&mut self, t: &Table<'_>) -> Option<SolveConfig> {
        self.check_keys(t, SOLVER_KEYS, "solver");
        let d = SolveConfig::default();
        let scheme = self.named::<Scheme>(t, "solver", "scheme", false);
        let increments = self.count(t, "solver", "increments", false);
        let max_iterations = self.count(t, "solver", "max_iterations", false);
        let tol_u = self.float(t, "solver", "tol_u", false);
        let tol_phi = self.float(t, "solver", "tol_phi", false);
        let allow_long = self.boolean(t, "solver", "allow_long_iteration");
        let policy = self.string(t, "solver", "on_failure", false);
        let bisections = self.count(t, "solver", "max_bisections", false);
        let path = self.string(t, "solver", "phase_path", false);
        let on_failure = match policy {
            None => FailurePolicy::Bisect(bisections.unwrap_or(4) as u32),
            Some((s, span)) => match s.as_str() {
                "bisect" => FailurePolicy::Bisect(bisections.unwrap_or(4) as u32),
                "abort" => FailurePolicy::Abort,
                _ => {
                    self.error(span, "solver.on_failure", format!("unknown policy `{s}` (expected bisect or abort)"));
                    return None;
                }
            },
        };
        let phase_path = match path {
            None => PhasePath::Direct,
            Some((s, span)) => match s.as_str() {
                "direct" => PhasePath::Direct,
                "heat-analogy" => PhasePath::HeatAnalogy,
                _ => {
                    self.error(span, "solver.phase_path", format!("unknown path `{s}` (expected direct or heat-analogy)"));
                    return None;
                }
            },
        };
        let config = SolveConfig {
            scheme: scheme.unwrap_or(d.scheme),
            increments: increments.unwrap_or(d.increments),
            max_iterations: max_iterations.unwrap_or(d.max_iterations),
            tol_u: tol_u.unwrap_or(d.tol_u),
            tol_phi: tol_phi.unwrap_or(d.tol_phi),
            allow_long_iteration: allow_long.unwrap_or(d.allow_long_iteration),
            on_failure,
            phase_path,
            threads: d.threads,
        };
        if let Err(e) = config.validate() {
            self.error(t.span(), "solver", e.to_string());
            return None;
        }
        Some(config)
    }

    fn mesh(&mut self, t: &Table<'_>) -> Option<MeshSpec> {
        self.check_keys(t, MESH_KEYS, "mesh");
        let regime = self.named::<RegimeName>(t, "mesh", "regime", false).map_or(Regime::PlaneStrain, |r| r.0);
        let kind = self.named::<KindName>(t, "mesh", "element", false).map_or(ElementKind::Quad4, |k| k.0);
        let path = self.string(t, "mesh", "path", false);
        let generator = self.string(t, "mesh", "generator", false);
        let source = match (path, generator) {
            (Some((p, _)), None) => Some(MeshSource::File(PathBuf::from(p))),
            (None, Some((g, span))) => match g.as_str() {
                "rect" => {
                    let width = self.float(t, "mesh", "width", true);
                    let height = self.float(t, "mesh", "height", true);
                    let nx = self.count(t, "mesh", "nx", true);
                    let ny = self.count(t, "mesh", "ny", true);
                    Some(MeshSource::Rect { width: width?, height: height?, nx: nx?, ny: ny?, kind })
                }
                "grid" => {
                    let x = self.floats(t, "mesh", "x", true);
                    let y = self.floats(t, "mesh", "y", true);
                    Some(MeshSource::Grid { x: x?, y: y?, kind })
                }
                _ => {
                    self.error(span, "mesh.generator", format!("unknown generator `{g}` (expected rect or grid)"));
                    None
                }
            },
            (Some(_), Some((_, span))) => {
                self.error(span, "mesh", "give either `path` or `generator`, not both");
                None
            }
            (None, None) => {
                self.missing(t, "mesh.path");
                None
            }
        };
        let mut node_sets = Vec::new();
        for b in self.tables(t, "node_set") {
            self.check_keys(&b, BOX_KEYS, "mesh.node_set");
            let name = self.string(&b, "mesh.node_set", "name", true);
            let min = self.floats(&b, "mesh.node_set", "min", true);
            let max = self.floats(&b, "mesh.node_set", "max", true);
            let (Some((name, _)), Some(min), Some(max)) = (name, min, max) else { continue };
            if min.len() != 2 || max.len() != 2 {
                self.error(b.span(), "mesh.node_set", "`min` and `max` need two coordinates");
                continue;
            }
            node_sets.push(BoxSet { name, min: [min[0], min[1]], max: [max[0], max[1]] });
        }
        Some(MeshSpec { source: source?, regime, node_sets })
    }

    fn bcs(&mut self, root: &Table<'_>) -> Option<Vec<BoundaryCondition>> {
        let mut out = Vec::new();
        let mut ok = true;
        for t in self.tables(root, "bc") {
            self.check_keys(&t, BC_KEYS, "bc");
            let node_set = self.string(&t, "bc", "node_set", true);
            let dof = self.named::<Dof>(&t, "bc", "dof", true);
            let value = self.float(&t, "bc", "value", true);
            let schedule = self.string(&t, "bc", "schedule", false);
            let (Some((node_set, _)), Some(dof), Some(value)) = (node_set, dof, value) else {
                ok = false;
                continue;
            };
            let schedule = match schedule.as_ref().map(|(s, span)| (s.as_str(), span.clone())) {
                None | Some(("ramp", _)) => Schedule::Ramp(value),
                Some(("fixed", _)) => Schedule::Fixed(value),
                Some((s, span)) => {
                    self.error(span, "bc.schedule", format!("unknown schedule `{s}` (expected ramp or fixed)"));
                    ok = false;
                    continue;
                }
            };
            out.push(BoundaryCondition { node_set, dof, schedule });
        }
        ok.then_some(out)
    }

    fn output(&mut self, t: &Table<'_>) -> Option<OutputSpec> {
        self.check_keys(t, OUTPUT_KEYS, "output");
        let d = OutputSpec::default();
        let directory = self.string(t, "output", "directory", false).map_or(d.directory, |(s, _)| PathBuf::from(s));
        let snapshot_stride = self.count(t, "output", "snapshot_stride", false).unwrap_or(0);
        let set = self.string(t, "output", "reaction_set", false);
        let dof = self.named::<Dof>(t, "output", "reaction_dof", false);
        let reaction = match (set, dof) {
            (Some((node_set, _)), Some(dof)) => {
                if dof == Dof::Phi {
                    self.error(t.span(), "output.reaction_dof", "reaction forces are only defined for x or y");
                    return None;
                }
                Some(ReactionSpec { node_set, dof })
            }
            (None, None) => None,
            (Some(_), None) if t.get_ref().get("reaction_dof").is_none() => {
                self.missing(t, "output.reaction_dof");
                return None;
            }
            (None, Some(_)) => {
                self.missing(t, "output.reaction_set");
                return None;
            }
            _ => return None,
        };
        Some(OutputSpec { directory, snapshot_stride, reaction })
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_owned()
    } else {
        format!("{prefix}.{key}")
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.replace('_', "").parse().ok()
}

fn parse_int(s: &str, radix: u32) -> Option<i64> {
    i64::from_str_radix(&s.replace('_', ""), radix).ok()
}

struct RegimeName(Regime);

impl FromStr for RegimeName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plane-strain" => Ok(Self(Regime::PlaneStrain)),
            "plane-stress" => Ok(Self(Regime::PlaneStress)),
            _ => Err(format!("unknown regime `{s}` (expected plane-strain or plane-stress)")),
        }
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::PlaneStrain => "plane-strain",
        Regime::PlaneStress => "plane-stress",
    }
}

struct KindName(ElementKind);

impl FromStr for KindName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quad4" => Ok(Self(ElementKind::Quad4)),
            "tri3" => Ok(Self(ElementKind::Tri3)),
            _ => Err(format!("unknown element `{s}` (expected quad4 or tri3)")),
        }
    }
}

fn kind_name(k: ElementKind) -> &'static str {
    match k {
        ElementKind::Quad4 => "quad4",
        ElementKind::Tri3 => "tri3",
    }
}

impl RunConfig {
    /// Builds the mesh and adds the configured box node sets. Relative file
    /// paths are resolved against `base`.
    pub fn build_mesh(&self, base: &Path) -> Result<Mesh, MeshError> {
        let spec = &self.mesh;
        let mut mesh = match &spec.source {
            MeshSource::File(p) => {
                let path = if p.is_absolute() { p.clone() } else { base.join(p) };
                parse_gmsh(&path)?.with_regime(spec.regime)
            }
            MeshSource::Rect { width, height, nx, ny, kind } => generate_rect(*width, *height, *nx, *ny, *kind, spec.regime)?,
            MeshSource::Grid { x, y, kind } => generate_graded(x, y, *kind, spec.regime)?,
        };
        for b in &spec.node_sets {
            let tol = 1e-9 * (b.max[0] - b.min[0]).abs().max((b.max[1] - b.min[1]).abs()).max(1.0);
            let nodes = mesh.select_nodes(|p| {
                p[0] >= b.min[0] - tol && p[0] <= b.max[0] + tol && p[1] >= b.min[1] - tol && p[1] <= b.max[1] + tol
            });
            if nodes.is_empty() {
                return Err(MeshError::InvalidDimensions(format!("node set `{}` selects no nodes", b.name)));
            }
            mesh.insert_node_set(&b.name, nodes)?;
        }
        Ok(mesh)
    }

    /// Canonical text form; parsing it gives back an equal configuration.
    pub fn to_toml(&self) -> String {
        use toml::{Table, Value};
        let f = Value::Float;
        let n = |v: usize| Value::Integer(v as i64);
        let s = |v: &str| Value::String(v.to_owned());
        let floats = |v: &[f64]| Value::Array(v.iter().map(|&x| Value::Float(x)).collect());

        let m = &self.material;
        let mut material = Table::new();
        material.insert("E".into(), f(m.youngs));
        material.insert("nu".into(), f(m.poisson));
        material.insert("Gc".into(), f(m.toughness));
        if let Some(ft) = m.strength {
            material.insert("ft".into(), f(ft));
        }
        material.insert("ell".into(), f(m.length_scale));
        material.insert("kappa".into(), f(m.residual_stiffness));

        let mut model = Table::new();
        model.insert("model".into(), s(self.choice.model.name()));
        model.insert("split".into(), s(self.choice.split.name()));
        model.insert("formulation".into(), s(self.choice.formulation.name()));

        let c = &self.solver;
        let mut solver = Table::new();
        solver.insert("scheme".into(), s(c.scheme.name()));
        solver.insert("increments".into(), n(c.increments));
        solver.insert("max_iterations".into(), n(c.max_iterations));
        solver.insert("tol_u".into(), f(c.tol_u));
        solver.insert("tol_phi".into(), f(c.tol_phi));
        solver.insert("allow_long_iteration".into(), Value::Boolean(c.allow_long_iteration));
        match c.on_failure {
            FailurePolicy::Abort => {
                solver.insert("on_failure".into(), s("abort"));
            }
            FailurePolicy::Bisect(k) => {
                solver.insert("on_failure".into(), s("bisect"));
                solver.insert("max_bisections".into(), n(k as usize));
            }
        }
        let path = match c.phase_path {
            PhasePath::Direct => "direct",
            PhasePath::HeatAnalogy => "heat-analogy",
        };
        solver.insert("phase_path".into(), s(path));

        let mut mesh = Table::new();
        match &self.mesh.source {
            MeshSource::File(p) => {
                mesh.insert("path".into(), s(&p.to_string_lossy()));
            }
            MeshSource::Rect { width, height, nx, ny, kind } => {
                mesh.insert("generator".into(), s("rect"));
                mesh.insert("width".into(), f(*width));
                mesh.insert("height".into(), f(*height));
                mesh.insert("nx".into(), n(*nx));
                mesh.insert("ny".into(), n(*ny));
                mesh.insert("element".into(), s(kind_name(*kind)));
            }
            MeshSource::Grid { x, y, kind } => {
                mesh.insert("generator".into(), s("grid"));
                mesh.insert("x".into(), floats(x));
                mesh.insert("y".into(), floats(y));
                mesh.insert("element".into(), s(kind_name(*kind)));
            }
        }
        mesh.insert("regime".into(), s(regime_name(self.mesh.regime)));
        if !self.mesh.node_sets.is_empty() {
            let sets = self
                .mesh
                .node_sets
                .iter()
                .map(|b| {
                    let mut t = Table::new();
                    t.insert("name".into(), s(&b.name));
                    t.insert("min".into(), floats(&b.min));
                    t.insert("max".into(), floats(&b.max));
                    Value::Table(t)
                })
                .collect();
            mesh.insert("node_set".into(), Value::Array(sets));
        }

        let bcs = self
            .bcs
            .iter()
            .map(|bc| {
                let mut t = Table::new();
                let (schedule, value) = match bc.schedule {
                    Schedule::Fixed(v) => ("fixed", v),
                    Schedule::Ramp(v) => ("ramp", v),
                };
                t.insert("node_set".into(), s(&bc.node_set));
                t.insert("dof".into(), s(bc.dof.name()));
                t.insert("value".into(), f(value));
                t.insert("schedule".into(), s(schedule));
                Value::Table(t)
            })
            .collect();

        let o = &self.output;
        let mut output = Table::new();
        output.insert("directory".into(), s(&o.directory.to_string_lossy()));
        output.insert("snapshot_stride".into(), n(o.snapshot_stride));
        if let Some(r) = &o.reaction {
            output.insert("reaction_set".into(), s(&r.node_set));
            output.insert("reaction_dof".into(), s(r.dof.name()));
        }

        let mut root = Table::new();
        root.insert("material".into(), Value::Table(material));
        root.insert("model".into(), Value::Table(model));
        root.insert("solver".into(), Value::Table(solver));
        root.insert("mesh".into(), Value::Table(mesh));
        root.insert("bc".into(), Value::Array(bcs));
        root.insert("output".into(), Value::Table(output));
        root.to_string()
    }
}
