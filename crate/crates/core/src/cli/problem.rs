//! Problem files: named definitions plus an ordered task list. Everything a
//! task refers to is resolved and validated up front so that input errors
//! surface before any computation runs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cartier::{Chart, PrismData};
use crate::completion::Filtration;
use crate::fpmod::{FpModule, ModuleMap};
use crate::kernel::{Matrix, Poly};
use crate::koszul::{koszul_tower, SequenceSpec};
use crate::regularity::colon_tower;
use crate::rings::{Ideal, RingPresentation};
use crate::towers::{InverseTower, StructuralTag, TowerSes};
use crate::{completion, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    #[serde(default)]
    pub rings: BTreeMap<String, RingDef>,
    #[serde(default)]
    pub ideals: BTreeMap<String, IdealDef>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDef>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDef>,
    #[serde(default)]
    pub sequences: BTreeMap<String, SequenceDef>,
    #[serde(default)]
    pub filtrations: BTreeMap<String, FiltrationDef>,
    #[serde(default)]
    pub towers: BTreeMap<String, TowerDef>,
    #[serde(default)]
    pub tower_maps: BTreeMap<String, TowerMapDef>,
    #[serde(default)]
    pub divisors: BTreeMap<String, DivisorDef>,
    #[serde(default)]
    pub prisms: BTreeMap<String, PrismDef>,
    pub tasks: Vec<TaskDef>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDef {
    pub domain: String,
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub degree_cap: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDef {
    pub ring: String,
    pub generators: Vec<String>,
}

/// `R^generators` modulo the given relation columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDef {
    pub ring: String,
    #[serde(default = "one")]
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<String>>,
}

fn one() -> usize {
    1
}

/// Matrix given row by row, columns indexed by source generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDef {
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDef {
    pub ring: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiltrationDef {
    IdealPowers { module: String, ideal: String },
    Zero { module: String },
    /// `levels[n-1]` lists generator columns of `M_n`.
    Explicit { module: String, levels: Vec<Vec<Vec<String>>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TowerDef {
    Koszul { sequence: String, module: String, degree: usize },
    Colon {
        module: String,
        #[serde(default)]
        prefix: Vec<String>,
        element: String,
    },
    Adic { module: String, sequence: String },
    Filtration { filtration: String },
    Constant { module: String },
    /// Named modules per level and named maps `M_{n+1} → M_n`.
    Explicit {
        levels: Vec<String>,
        transitions: Vec<String>,
        #[serde(default)]
        tags: Vec<String>,
    },
}

/// Levelwise maps `source_n → target_n`, each matrix given row by row.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerMapDef {
    pub source: String,
    pub target: String,
    pub matrices: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDef {
    pub ideal: String,
    pub charts: Vec<ChartDef>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDef {
    pub f: String,
    pub x: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrismDef {
    pub ideal: String,
    pub p: u64,
    pub frobenius: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    ProZero,
    MittagLeffler,
    Lim,
    SixTerm,
    BiProZero,
    Regular,
    BoundedTorsion,
    ProRegular,
    WeaklyProRegular,
    Audit,
    CechHomology,
    CompositeCompletion,
    VerifyCartier,
    ProRegularPair,
    ChartAudit,
    PrismCondition,
}

impl TaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::ProZero => "pro_zero",
            TaskKind::MittagLeffler => "mittag_leffler",
            TaskKind::Lim => "lim",
            TaskKind::SixTerm => "six_term",
            TaskKind::BiProZero => "bi_pro_zero",
            TaskKind::Regular => "regular",
            TaskKind::BoundedTorsion => "bounded_torsion",
            TaskKind::ProRegular => "pro_regular",
            TaskKind::WeaklyProRegular => "weakly_pro_regular",
            TaskKind::Audit => "audit",
            TaskKind::CechHomology => "cech_homology",
            TaskKind::CompositeCompletion => "composite_completion",
            TaskKind::VerifyCartier => "verify_cartier",
            TaskKind::ProRegularPair => "pro_regular_pair",
            TaskKind::ChartAudit => "chart_audit",
            TaskKind::PrismCondition => "prism_condition",
        }
    }

    /// Subject roles, each with the section its name must be defined in.
    fn roles(&self) -> &'static [(&'static str, Section)] {
        use Section::*;
        match self {
            TaskKind::ProZero | TaskKind::MittagLeffler | TaskKind::Lim => &[("tower", Towers)],
            TaskKind::SixTerm => &[("f", TowerMaps), ("g", TowerMaps)],
            TaskKind::BiProZero | TaskKind::CompositeCompletion => &[("filtration", Filtrations), ("sequence", Sequences)],
            TaskKind::Regular
            | TaskKind::ProRegular
            | TaskKind::WeaklyProRegular
            | TaskKind::Audit
            | TaskKind::CechHomology => &[("sequence", Sequences), ("module", Modules)],
            TaskKind::BoundedTorsion => &[("module", Modules)],
            TaskKind::VerifyCartier | TaskKind::ChartAudit => &[("divisor", Divisors)],
            TaskKind::ProRegularPair => &[("ideal", Ideals)],
            TaskKind::PrismCondition => &[("prism", Prisms)],
        }
    }

    fn needs_element(&self) -> bool {
        matches!(self, TaskKind::BoundedTorsion | TaskKind::ProRegularPair | TaskKind::ChartAudit)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDef {
    #[serde(default)]
    pub id: Option<String>,
    pub kind: TaskKind,
    #[serde(default)]
    pub subjects: BTreeMap<String, String>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub options: TaskOptions,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskOptions {
    /// Element for torsion, pro-regular-pair and chart-audit tasks.
    #[serde(default)]
    pub element: Option<String>,
    /// Homological degree for Čech reports.
    #[serde(default)]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Modules,
    Ideals,
    Sequences,
    Filtrations,
    Towers,
    TowerMaps,
    Divisors,
    Prisms,
}

impl Section {
    fn name(&self) -> &'static str {
        match self {
            Section::Modules => "modules",
            Section::Ideals => "ideals",
            Section::Sequences => "sequences",
            Section::Filtrations => "filtrations",
            Section::Towers => "towers",
            Section::TowerMaps => "tower_maps",
            Section::Divisors => "divisors",
            Section::Prisms => "prisms",
        }
    }
}

/// A problem file that could not be accepted; `location` is either a
/// `line:column` position or a path into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for InputError {}

fn input_error(location: impl Into<String>, message: impl fmt::Display) -> InputError {
    InputError { location: location.into(), message: message.to_string() }
}

/// Defaults applied where the problem file is silent.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub window: usize,
    pub degree_cap: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { window: crate::towers::DEFAULT_WINDOW, degree_cap: crate::kernel::DEFAULT_DEGREE_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct Task {
    pub index: usize,
    pub id: Option<String>,
    pub kind: TaskKind,
    pub subjects: BTreeMap<String, String>,
    pub window: usize,
    pub element: Option<Poly>,
    pub degree: Option<usize>,
}

impl Task {
    pub fn subject(&self, role: &str) -> &str {
        &self.subjects[role]
    }
}

/// A validated problem with every definition materialized except towers and
/// filtrations, whose size depends on each task's window.
#[derive(Debug, Clone)]
pub struct Problem {
    pub digest: String,
    pub file: ProblemFile,
    pub settings: Settings,
    pub rings: BTreeMap<String, Arc<RingPresentation>>,
    pub ideals: BTreeMap<String, Ideal>,
    pub modules: BTreeMap<String, Arc<FpModule>>,
    pub maps: BTreeMap<String, ModuleMap>,
    pub sequences: BTreeMap<String, SequenceSpec>,
    pub divisors: BTreeMap<String, (Ideal, Vec<Chart>)>,
    pub prisms: BTreeMap<String, PrismData>,
    pub tasks: Vec<Task>,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, what: &str, at: &str) -> std::result::Result<&'a T, InputError> {
    map.get(name).ok_or_else(|| input_error(at, format!("undefined {what} `{name}`")))
}

fn parse_poly(ring: &RingPresentation, s: &str, at: &str) -> std::result::Result<Poly, InputError> {
    ring.element(s).map_err(|e| input_error(at, e))
}

fn parse_columns(ring: &RingPresentation, rows: usize, cols: &[Vec<String>], at: &str) -> std::result::Result<Matrix, InputError> {
    let mut out = Vec::with_capacity(cols.len());
    for (j, c) in cols.iter().enumerate() {
        if c.len() != rows {
            return Err(input_error(format!("{at}[{j}]"), format!("column has {} entries, expected {rows}", c.len())));
        }
        out.push(c.iter().map(|s| parse_poly(ring, s, &format!("{at}[{j}]"))).collect::<std::result::Result<Vec<_>, _>>()?);
    }
    Ok(Matrix::from_columns(rows, out))
}

fn parse_rows(ring: &RingPresentation, rows: &[Vec<String>], ncols: usize, at: &str) -> std::result::Result<Matrix, InputError> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != ncols {
            return Err(input_error(format!("{at}[{i}]"), format!("row has {} entries, expected {ncols}", r.len())));
        }
    }
    Matrix::from_strings(ring.poly_ring(), rows, ncols).map_err(|e| input_error(at, e))
}

impl Problem {
    /// Parses and validates; any failure is an input error.
    pub fn parse(bytes: &[u8], settings: Settings) -> std::result::Result<Problem, InputError> {
        let file: ProblemFile = serde_json::from_slice(bytes)
            .map_err(|e| input_error(format!("line {}, column {}", e.line(), e.column()), e))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(input_error(
                "schema_version",
                format!("unsupported schema version {} (expected {SCHEMA_VERSION})", file.schema_version),
            ));
        }
        let mut p = Problem {
            digest: digest(bytes),
            settings,
            rings: BTreeMap::new(),
            ideals: BTreeMap::new(),
            modules: BTreeMap::new(),
            maps: BTreeMap::new(),
            sequences: BTreeMap::new(),
            divisors: BTreeMap::new(),
            prisms: BTreeMap::new(),
            tasks: Vec::new(),
            file: file.clone(),
        };
        for (name, d) in &file.rings {
            let at = format!("rings.{name}");
            let vars: Vec<&str> = d.variables.iter().map(String::as_str).collect();
            let rels: Vec<&str> = d.relations.iter().map(String::as_str).collect();
            let ring = RingPresentation::parse(&d.domain, &vars, &rels)
                .and_then(|r| r.with_degree_cap(d.degree_cap.unwrap_or(settings.degree_cap)))
                .map_err(|e| input_error(&at, e))?;
            p.rings.insert(name.clone(), Arc::new(ring));
        }
        for (name, d) in &file.ideals {
            let at = format!("ideals.{name}");
            let ring = lookup(&p.rings, &d.ring, "ring", &at)?.clone();
            let gens = d.generators.iter().map(|g| parse_poly(&ring, g, &at)).collect::<std::result::Result<Vec<_>, _>>()?;
            p.ideals.insert(name.clone(), Ideal::new(ring, gens).map_err(|e| input_error(&at, e))?);
        }
        for (name, d) in &file.modules {
            let at = format!("modules.{name}");
            let ring = lookup(&p.rings, &d.ring, "ring", &at)?.clone();
            let rel = parse_columns(&ring, d.generators, &d.relations, &format!("{at}.relations"))?;
            let m = FpModule::new(ring, d.generators, rel).map_err(|e| input_error(&at, e))?;
            p.modules.insert(name.clone(), Arc::new(m));
        }
        for (name, d) in &file.maps {
            let at = format!("maps.{name}");
            let src = lookup(&p.modules, &d.source, "module", &at)?.clone();
            let dst = lookup(&p.modules, &d.target, "module", &at)?.clone();
            if !src.same_ring(&dst) {
                return Err(input_error(&at, "source and target live over different rings"));
            }
            if d.matrix.len() != dst.ngens() {
                return Err(input_error(&at, format!("matrix has {} rows, target has {} generators", d.matrix.len(), dst.ngens())));
            }
            let m = parse_rows(src.ring(), &d.matrix, src.ngens(), &format!("{at}.matrix"))?;
            p.maps.insert(name.clone(), ModuleMap::new(src, dst, m).map_err(|e| input_error(&at, e))?);
        }
        for (name, d) in &file.sequences {
            let at = format!("sequences.{name}");
            let ring = lookup(&p.rings, &d.ring, "ring", &at)?.clone();
            let els = d.elements.iter().map(|g| parse_poly(&ring, g, &at)).collect::<std::result::Result<Vec<_>, _>>()?;
            p.sequences.insert(name.clone(), SequenceSpec::new(ring, els).map_err(|e| input_error(&at, e))?);
        }
        for (name, d) in &file.filtrations {
            let at = format!("filtrations.{name}");
            match d {
                FiltrationDef::IdealPowers { module, ideal } => {
                    let m = lookup(&p.modules, module, "module", &at)?;
                    let i = lookup(&p.ideals, ideal, "ideal", &at)?;
                    if !m.ring().same_as(i.ring()) {
                        return Err(input_error(&at, "module and ideal live over different rings"));
                    }
                }
                FiltrationDef::Zero { module } => {
                    lookup(&p.modules, module, "module", &at)?;
                }
                FiltrationDef::Explicit { module, levels } => {
                    let m = lookup(&p.modules, module, "module", &at)?.clone();
                    let mats = levels
                        .iter()
                        .enumerate()
                        .map(|(n, l)| parse_columns(m.ring(), m.ngens(), l, &format!("{at}.levels[{n}]")))
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    Filtration::new(m, mats).map_err(|e| input_error(&at, e))?;
                }
            }
        }
        for (name, d) in &file.towers {
            p.check_tower(name, d)?;
        }
        for (name, d) in &file.tower_maps {
            let at = format!("tower_maps.{name}");
            lookup(&file.towers, &d.source, "tower", &at)?;
            lookup(&file.towers, &d.target, "tower", &at)?;
        }
        for (name, d) in &file.divisors {
            let at = format!("divisors.{name}");
            let ideal = lookup(&p.ideals, &d.ideal, "ideal", &at)?.clone();
            let ring = ideal.ring().clone();
            let charts = d
                .charts
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let at = format!("{at}.charts[{i}]");
                    Ok(Chart { f: parse_poly(&ring, &c.f, &at)?, x: parse_poly(&ring, &c.x, &at)? })
                })
                .collect::<std::result::Result<Vec<_>, InputError>>()?;
            if charts.is_empty() {
                return Err(input_error(&at, "a divisor needs at least one chart"));
            }
            p.divisors.insert(name.clone(), (ideal, charts));
        }
        for (name, d) in &file.prisms {
            let at = format!("prisms.{name}");
            let ideal = lookup(&p.ideals, &d.ideal, "ideal", &at)?.clone();
            let ring = ideal.ring().clone();
            let pr = ring.poly_ring();
            for v in d.frobenius.keys() {
                if pr.var_index(v).is_none() {
                    return Err(input_error(&at, format!("`{v}` is not a variable of the ring")));
                }
            }
            let mut images = Vec::with_capacity(pr.nvars());
            for i in 0..pr.nvars() {
                let v = pr.format(&pr.var(i));
                let s = d.frobenius.get(&v).ok_or_else(|| input_error(&at, format!("no Frobenius image for `{v}`")))?;
                images.push(parse_poly(&ring, s, &at)?);
            }
            p.prisms.insert(name.clone(), PrismData::new(ideal, d.p, images).map_err(|e| input_error(&at, e))?);
        }
        for (index, t) in file.tasks.iter().enumerate() {
            let task = p.check_task(index, t)?;
            p.tasks.push(task);
        }
        Ok(p)
    }

    fn check_tower(&self, name: &str, d: &TowerDef) -> std::result::Result<(), InputError> {
        let at = format!("towers.{name}");
        let file = &self.file;
        match d {
            TowerDef::Koszul { sequence, module, .. } | TowerDef::Adic { module, sequence } => {
                let s = lookup(&self.sequences, sequence, "sequence", &at)?;
                let m = lookup(&self.modules, module, "module", &at)?;
                if !m.ring().same_as(s.ring()) {
                    return Err(input_error(&at, "sequence and module live over different rings"));
                }
            }
            TowerDef::Colon { module, prefix, element } => {
                let m = lookup(&self.modules, module, "module", &at)?;
                for e in prefix.iter().chain(std::iter::once(element)) {
                    parse_poly(m.ring(), e, &at)?;
                }
            }
            TowerDef::Filtration { filtration } => {
                lookup(&file.filtrations, filtration, "filtration", &at)?;
            }
            TowerDef::Constant { module } => {
                lookup(&self.modules, module, "module", &at)?;
            }
            TowerDef::Explicit { levels, transitions, tags } => {
                for l in levels {
                    lookup(&self.modules, l, "module", &at)?;
                }
                for t in transitions {
                    lookup(&self.maps, t, "map", &at)?;
                }
                for t in tags {
                    parse_tag(t).map_err(|e| input_error(&at, e))?;
                }
            }
        }
        Ok(())
    }

    fn check_task(&self, index: usize, t: &TaskDef) -> std::result::Result<Task, InputError> {
        let at = format!("tasks[{index}]");
        let window = t.window.unwrap_or(self.settings.window);
        if window < 2 {
            return Err(input_error(format!("{at}.window"), "window must be at least 2"));
        }
        let roles = t.kind.roles();
        for key in t.subjects.keys() {
            if !roles.iter().any(|(r, _)| r == key) {
                return Err(input_error(format!("{at}.subjects"), format!("`{key}` is not a subject of {}", t.kind.name())));
            }
        }
        for (role, section) in roles {
            let name = t.subjects.get(*role).ok_or_else(|| {
                input_error(format!("{at}.subjects"), format!("{} needs a `{role}` subject", t.kind.name()))
            })?;
            let defined = match section {
                Section::Modules => self.modules.contains_key(name),
                Section::Ideals => self.ideals.contains_key(name),
                Section::Sequences => self.sequences.contains_key(name),
                Section::Filtrations => self.file.filtrations.contains_key(name),
                Section::Towers => self.file.towers.contains_key(name),
                Section::TowerMaps => self.file.tower_maps.contains_key(name),
                Section::Divisors => self.divisors.contains_key(name),
                Section::Prisms => self.prisms.contains_key(name),
            };
            if !defined {
                return Err(input_error(
                    format!("{at}.subjects.{role}"),
                    format!("undefined {} entry `{name}`", section.name()),
                ));
            }
        }
        if let (Some(s), Some(m)) = (t.subjects.get("sequence"), t.subjects.get("module")) {
            if !self.sequences[s].ring().same_as(self.modules[m].ring()) {
                return Err(input_error(format!("{at}.subjects"), "sequence and module live over different rings"));
            }
        }
        let element = match (&t.options.element, t.kind.needs_element()) {
            (Some(e), true) => {
                let ring = self.task_ring(t);
                Some(parse_poly(&ring, e, &format!("{at}.options.element"))?)
            }
            (None, true) => return Err(input_error(format!("{at}.options"), format!("{} needs an `element`", t.kind.name()))),
            (Some(_), false) => {
                return Err(input_error(format!("{at}.options.element"), format!("{} takes no element", t.kind.name())))
            }
            (None, false) => None,
        };
        let degree = match (t.options.degree, t.kind) {
            (Some(d), TaskKind::CechHomology) => {
                let r = self.sequences[&t.subjects["sequence"]].len();
                if d > r {
                    return Err(input_error(format!("{at}.options.degree"), format!("degree {d} exceeds sequence length {r}")));
                }
                Some(d)
            }
            (None, TaskKind::CechHomology) => {
                return Err(input_error(format!("{at}.options"), "cech_homology needs a `degree`"))
            }
            (Some(_), _) => return Err(input_error(format!("{at}.options.degree"), format!("{} takes no degree", t.kind.name()))),
            (None, _) => None,
        };
        Ok(Task { index, id: t.id.clone(), kind: t.kind, subjects: t.subjects.clone(), window, element, degree })
    }

    fn task_ring(&self, t: &TaskDef) -> Arc<RingPresentation> {
        match t.kind {
            TaskKind::BoundedTorsion => self.modules[&t.subjects["module"]].ring().clone(),
            TaskKind::ProRegularPair => self.ideals[&t.subjects["ideal"]].ring().clone(),
            _ => self.divisors[&t.subjects["divisor"]].0.ring().clone(),
        }
    }

    pub fn filtration(&self, name: &str, window: usize) -> Result<Filtration> {
        match &self.file.filtrations[name] {
            FiltrationDef::IdealPowers { module, ideal } => {
                Filtration::ideal_powers(self.modules[module].clone(), &self.ideals[ideal], window)
            }
            FiltrationDef::Zero { module } => Filtration::zero(self.modules[module].clone(), window),
            FiltrationDef::Explicit { module, levels } => {
                let m = self.modules[module].clone();
                if levels.len() < window {
                    return Err(crate::Error::Invalid(format!(
                        "filtration `{name}` lists {} levels, window {window} needs more",
                        levels.len()
                    )));
                }
                let mats = levels[..window]
                    .iter()
                    .map(|l| {
                        let cols = l
                            .iter()
                            .map(|c| c.iter().map(|s| m.ring().element(s)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Matrix::from_columns(m.ngens(), cols))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Filtration::new(m, mats)
            }
        }
    }

    /// Materializes a named tower; generated towers use `window` levels and
    /// explicit towers are truncated to it.
    pub fn tower(&self, name: &str, window: usize) -> Result<InverseTower> {
        match &self.file.towers[name] {
            TowerDef::Koszul { sequence, module, degree } => {
                koszul_tower(*degree, &self.sequences[sequence], &self.modules[module], window)
            }
            TowerDef::Colon { module, prefix, element } => {
                let m = &self.modules[module];
                let prefix = prefix.iter().map(|s| m.ring().element(s)).collect::<Result<Vec<_>>>()?;
                colon_tower(m, &prefix, &m.ring().element(element)?, window)
            }
            TowerDef::Adic { module, sequence } => completion::adic_tower(&self.modules[module], &self.sequences[sequence], window),
            TowerDef::Filtration { filtration } => completion::filtration_tower(&self.filtration(filtration, window)?),
            TowerDef::Constant { module } => InverseTower::constant(name, self.modules[module].clone(), window),
            TowerDef::Explicit { levels, transitions, tags } => {
                let mods: Vec<Arc<FpModule>> = levels.iter().map(|l| self.modules[l].clone()).collect();
                let mut mats = Vec::with_capacity(transitions.len());
                for (n, t) in transitions.iter().enumerate() {
                    let map = &self.maps[t];
                    if n + 1 >= mods.len() || !Arc::ptr_eq(map.source(), &mods[n + 1]) || !Arc::ptr_eq(map.target(), &mods[n]) {
                        return Err(crate::Error::Invalid(format!(
                            "transition `{t}` of tower `{name}` does not map level {} to level {}",
                            n + 2,
                            n + 1
                        )));
                    }
                    mats.push(map.matrix().clone());
                }
                let tags = tags.iter().map(|t| parse_tag(t)).collect::<Result<Vec<_>>>()?;
                let tower = InverseTower::new(name, mods, mats, tags)?;
                if tower.window() > window {
                    tower.truncate(window)
                } else {
                    Ok(tower)
                }
            }
        }
    }

    /// `0 → A → B → C → 0` from two named tower maps.
    pub fn tower_ses(&self, f: &str, g: &str, window: usize) -> Result<TowerSes> {
        let fd = &self.file.tower_maps[f];
        let gd = &self.file.tower_maps[g];
        if fd.target != gd.source {
            return Err(crate::Error::Invalid(format!("`{f}` ends at `{}` but `{g}` starts at `{}`", fd.target, gd.source)));
        }
        let a = self.tower(&fd.source, window)?;
        let b = self.tower(&fd.target, window)?;
        let c = self.tower(&gd.target, window)?;
        let w = a.window().min(b.window()).min(c.window());
        let (a, b, c) = (a.truncate(w)?, b.truncate(w)?, c.truncate(w)?);
        let mats = |d: &TowerMapDef, src: &InverseTower| -> Result<Vec<Matrix>> {
            if d.matrices.len() < w {
                return Err(crate::Error::Invalid(format!("tower map lists {} levels, {w} needed", d.matrices.len())));
            }
            d.matrices[..w]
                .iter()
                .zip(src.levels())
                .map(|(rows, l)| Matrix::from_strings(src.ring().poly_ring(), rows, l.ngens()))
                .collect()
        };
        let fm = mats(fd, &a)?;
        let gm = mats(gd, &b)?;
        Ok(TowerSes { a, b, c, f: fm, g: gm })
    }
}

pub fn parse_tag(s: &str) -> Result<StructuralTag> {
    if let Some(rest) = s.strip_prefix("EVENTUALLY_CONSTANT_BY_CONSTRUCTION") {
        let from = match rest.strip_prefix(':') {
            Some(n) => n.parse().map_err(|_| crate::Error::Parse(format!("bad level in tag `{s}`")))?,
            None if rest.is_empty() => 1,
            None => return Err(crate::Error::Parse(format!("unknown tag `{s}`"))),
        };
        return Ok(StructuralTag::EventuallyConstant { from });
    }
    match s {
        "SURJECTIVE_BY_CONSTRUCTION" => Ok(StructuralTag::SurjectiveByConstruction),
        "FINITE_LENGTH_LEVELS" => Ok(StructuralTag::FiniteLengthLevels),
        _ => Err(crate::Error::Parse(format!("unknown tag `{s}`"))),
    }
}
