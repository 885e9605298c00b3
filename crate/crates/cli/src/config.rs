//! Run configuration read from TOML. Every physical parameter may be given as
//! a decimal string or as a TOML number; errors carry the field path.

use std::fmt;
use std::path::Path;

use qes_core::families::{Family, GaugeParams, PotentialSpec};
use qes_core::oscillator::SpaceConfig;
use qes_core::Error as CoreError;
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = Result<T, ConfigError>;

/// Parameters of one potential spec as written in the config.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecParams {
    pub family: u8,
    pub lambda: f64,
    pub d: u32,
    /// Angular momentum, or the parity exponent when `d = 1`.
    pub l: u32,
    pub a: f64,
    pub b: Vec<f64>,
    pub n: usize,
}

impl SpecParams {
    /// Builds the core spec, mapping core validation errors onto config
    /// paths under `prefix`.
    pub fn build(&self, prefix: &str) -> ConfigResult<PotentialSpec> {
        let at = |e: CoreError| {
            let field = match &e {
                CoreError::InvalidParameter { field, .. } => match *field {
                    "l" if self.d == 1 => "p",
                    f => f,
                },
                CoreError::UnsupportedCase { field, .. } => field,
                _ => "",
            };
            let path = if field.is_empty() { prefix.to_string() } else { format!("{prefix}.{field}") };
            ConfigError::new(path, e.to_string())
        };
        let family = Family::from_index(self.family).map_err(at)?;
        let space = SpaceConfig::new(self.lambda, self.d, self.l).map_err(at)?;
        let gauge = GaugeParams::new(family, self.a, self.b.clone()).map_err(at)?;
        PotentialSpec::new(space, gauge, self.n).map_err(at)
    }

    /// Ordering key for deterministic output.
    pub fn key(&self) -> Vec<f64> {
        let mut k = vec![self.family as f64, self.b.len() as f64, self.lambda, self.d as f64, self.l as f64, self.a];
        k.extend(&self.b);
        k.push(self.n as f64);
        k
    }
}

/// One sweep axis: either an explicit list or an evenly spaced range.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Potential,
    Wavefunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `max |ψ| = 1` on the plotted points.
    Max,
    /// `ψ(0) = 1`; only for even one-dimensional states.
    Origin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureConfig {
    pub kind: FigureKind,
    pub variants: Vec<SpecParams>,
    /// Adds the undeformed oscillator column with the same `A`.
    pub baseline: bool,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridConfig {
    pub points: Option<usize>,
    pub clustering: Option<f64>,
    pub extent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Option<String>,
    pub spec: Option<SpecParams>,
    pub grid: GridConfig,
    pub sweep: Vec<Axis>,
    pub figure: Option<FigureConfig>,
    pub out: Option<String>,
}

pub fn load(path: &Path) -> ConfigResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(path.display().to_string(), e.to_string()))?;
    parse(&text)
}

pub fn parse(text: &str) -> ConfigResult<RunConfig> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::new("<config>", e.message().to_string()))?;
    check_keys(&root, "", &["task", "spec", "grid", "sweep", "figure", "output"])?;
    let task = opt_string(&root, "", "task")?;
    let spec = match root.get("spec") {
        Some(v) => Some(spec_params(table(v, "spec")?, "spec")?),
        None => None,
    };
    let grid = match root.get("grid") {
        Some(v) => grid_config(table(v, "grid")?)?,
        None => GridConfig::default(),
    };
    let sweep = match root.get("sweep") {
        Some(v) => sweep_axes(table(v, "sweep")?)?,
        None => Vec::new(),
    };
    let figure = match root.get("figure") {
        Some(v) => Some(figure_config(table(v, "figure")?, spec.as_ref())?),
        None => None,
    };
    let out = match root.get("output") {
        Some(v) => {
            let t = table(v, "output")?;
            check_keys(t, "output", &["path"])?;
            opt_string(t, "output", "path")?
        }
        None => None,
    };
    Ok(RunConfig {
        task,
        spec,
        grid,
        sweep,
        figure,
        out,
    })
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn check_keys(t: &Table, prefix: &str, allowed: &[&str]) -> ConfigResult<()> {
    match t.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ConfigError::new(join(prefix, k), format!("unknown key (expected one of {})", allowed.join(", ")))),
        None => Ok(()),
    }
}

fn table<'a>(v: &'a Value, path: &str) -> ConfigResult<&'a Table> {
    v.as_table().ok_or_else(|| ConfigError::new(path, "expected a table"))
}

/// A double from a decimal string or a TOML number.
fn number(v: &Value, path: &str) -> ConfigResult<f64> {
    let x = match v {
        Value::String(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| ConfigError::new(path, format!("not a decimal number: {s:?}")))?,
        Value::Float(x) => *x,
        Value::Integer(i) => *i as f64,
        _ => return Err(ConfigError::new(path, "expected a number or a decimal string")),
    };
    if !x.is_finite() {
        return Err(ConfigError::new(path, "must be finite"));
    }
    Ok(x)
}

fn integer(v: &Value, path: &str) -> ConfigResult<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        Value::String(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| ConfigError::new(path, format!("not a non-negative integer: {s:?}"))),
        _ => Err(ConfigError::new(path, "expected a non-negative integer")),
    }
}

fn required<'a>(t: &'a Table, prefix: &str, key: &str) -> ConfigResult<&'a Value> {
    t.get(key).ok_or_else(|| ConfigError::new(join(prefix, key), "missing"))
}

fn opt_string(t: &Table, prefix: &str, key: &str) -> ConfigResult<Option<String>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(ConfigError::new(join(prefix, key), "expected a string")),
    }
}

fn number_list(v: &Value, path: &str) -> ConfigResult<Vec<f64>> {
    let items = v.as_array().ok_or_else(|| ConfigError::new(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

const SPEC_KEYS: [&str; 9] = ["family", "m", "lambda", "d", "l", "p", "a", "b", "n"];

fn spec_params(t: &Table, prefix: &str) -> ConfigResult<SpecParams> {
    check_keys(t, prefix, &SPEC_KEYS)?;
    spec_from(t, prefix, None)
}

/// Reads spec fields from `t`, falling back to `base` for absent keys.
fn spec_from(t: &Table, prefix: &str, base: Option<&SpecParams>) -> ConfigResult<SpecParams> {
    let get = |key: &str| -> ConfigResult<Option<&Value>> {
        match (t.get(key), base) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(_)) => Ok(None),
            (None, None) => required(t, prefix, key).map(Some),
        }
    };
    let family = match get("family")? {
        Some(v) => {
            let f = integer(v, &join(prefix, "family"))?;
            if f != 1 && f != 2 {
                return Err(ConfigError::new(join(prefix, "family"), format!("must be 1 or 2, got {f}")));
            }
            f as u8
        }
        None => base.unwrap().family,
    };
    let lambda = match get("lambda")? {
        Some(v) => number(v, &join(prefix, "lambda"))?,
        None => base.unwrap().lambda,
    };
    let d = match get("d")? {
        Some(v) => integer(v, &join(prefix, "d"))? as u32,
        None => base.unwrap().d,
    };
    // `p` names the parity exponent on the line, `l` the angular momentum
    let l = match (t.get("l"), t.get("p")) {
        (Some(_), Some(_)) => return Err(ConfigError::new(join(prefix, "p"), "give either l or p, not both")),
        (Some(v), None) => integer(v, &join(prefix, "l"))? as u32,
        (None, Some(v)) => {
            if d != 1 {
                return Err(ConfigError::new(join(prefix, "p"), "parity applies only for d = 1; use l"));
            }
            integer(v, &join(prefix, "p"))? as u32
        }
        (None, None) => base.map(|b| b.l).unwrap_or(0),
    };
    let a = match get("a")? {
        Some(v) => number(v, &join(prefix, "a"))?,
        None => base.unwrap().a,
    };
    let b = match get("b")? {
        Some(v) => number_list(v, &join(prefix, "b"))?,
        None => base.unwrap().b.clone(),
    };
    if let Some(v) = t.get("m") {
        let m = integer(v, &join(prefix, "m"))? as usize;
        if m != b.len() {
            return Err(ConfigError::new(join(prefix, "m"), format!("m = {m} but b has {} entries", b.len())));
        }
    }
    let n = match t.get("n") {
        Some(v) => integer(v, &join(prefix, "n"))? as usize,
        None => base.map(|b| b.n).unwrap_or(0),
    };
    Ok(SpecParams {
        family,
        lambda,
        d,
        l,
        a,
        b,
        n,
    })
}

fn grid_config(t: &Table) -> ConfigResult<GridConfig> {
    check_keys(t, "grid", &["points", "clustering", "extent"])?;
    Ok(GridConfig {
        points: t.get("points").map(|v| integer(v, "grid.points")).transpose()?.map(|p| p as usize),
        clustering: t.get("clustering").map(|v| number(v, "grid.clustering")).transpose()?,
        extent: t.get("extent").map(|v| number(v, "grid.extent")).transpose()?,
    })
}

const AXES: [&str; 8] = ["lambda", "a", "b1", "b2", "b3", "n", "l", "d"];

fn sweep_axes(t: &Table) -> ConfigResult<Vec<Axis>> {
    check_keys(t, "sweep", &AXES)?;
    let mut axes = Vec::new();
    for name in AXES {
        let Some(v) = t.get(name) else { continue };
        let path = join("sweep", name);
        let values = match v {
            Value::Array(_) => number_list(v, &path)?,
            Value::Table(r) => {
                check_keys(r, &path, &["from", "to", "steps"])?;
                let from = number(required(r, &path, "from")?, &join(&path, "from"))?;
                let to = number(required(r, &path, "to")?, &join(&path, "to"))?;
                let steps = integer(required(r, &path, "steps")?, &join(&path, "steps"))? as usize;
                if steps == 0 {
                    return Err(ConfigError::new(join(&path, "steps"), "must be at least 1"));
                }
                if steps == 1 {
                    vec![from]
                } else {
                    (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect()
                }
            }
            _ => return Err(ConfigError::new(path, "expected an array or a {from, to, steps} table")),
        };
        if values.is_empty() {
            return Err(ConfigError::new(path, "axis has no values"));
        }
        if matches!(name, "n" | "l" | "d") && values.iter().any(|x| x.fract() != 0.0 || *x < 0.0) {
            return Err(ConfigError::new(path, "values must be non-negative integers"));
        }
        axes.push(Axis {
            name: name.to_string(),
            values,
        });
    }
    Ok(axes)
}

fn figure_config(t: &Table, spec: Option<&SpecParams>) -> ConfigResult<FigureConfig> {
    check_keys(
        t,
        "figure",
        &["preset", "kind", "variant", "baseline", "x_min", "x_max", "points", "normalization"],
    )?;
    let mut fig = match t.get("preset") {
        Some(v) => {
            let k = integer(v, "figure.preset")?;
            crate::figure::preset(k as usize).ok_or_else(|| ConfigError::new("figure.preset", format!("no preset {k}; presets are 1 to 8")))?
        }
        None => {
            let base = spec.ok_or_else(|| ConfigError::new("spec", "a figure without a preset needs a [spec] table"))?;
            let variants = match t.get("variant") {
                Some(Value::Array(items)) => items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let path = format!("figure.variant[{i}]");
                        let vt = table(v, &path)?;
                        check_keys(vt, &path, &SPEC_KEYS)?;
                        spec_from(vt, &path, Some(base))
                    })
                    .collect::<ConfigResult<Vec<_>>>()?,
                Some(_) => return Err(ConfigError::new("figure.variant", "expected an array of tables")),
                None => vec![base.clone()],
            };
            let (x_min, x_max) = crate::figure::default_range(base.lambda);
            FigureConfig {
                kind: FigureKind::Potential,
                variants,
                baseline: false,
                x_min,
                x_max,
                points: crate::figure::DEFAULT_POINTS,
                normalization: Normalization::Max,
            }
        }
    };
    if let Some(v) = t.get("kind") {
        fig.kind = match v.as_str() {
            Some("potential") => FigureKind::Potential,
            Some("wavefunction") => FigureKind::Wavefunction,
            _ => return Err(ConfigError::new("figure.kind", "expected \"potential\" or \"wavefunction\"")),
        };
    }
    if let Some(v) = t.get("normalization") {
        fig.normalization = match v.as_str() {
            Some("max") => Normalization::Max,
            Some("origin") => Normalization::Origin,
            _ => return Err(ConfigError::new("figure.normalization", "expected \"max\" or \"origin\"")),
        };
    }
    if let Some(v) = t.get("baseline") {
        fig.baseline = v.as_bool().ok_or_else(|| ConfigError::new("figure.baseline", "expected true or false"))?;
    }
    if let Some(v) = t.get("x_min") {
        fig.x_min = number(v, "figure.x_min")?;
    }
    if let Some(v) = t.get("x_max") {
        fig.x_max = number(v, "figure.x_max")?;
    }
    if let Some(v) = t.get("points") {
        fig.points = integer(v, "figure.points")? as usize;
    }
    if !(fig.x_min < fig.x_max) {
        return Err(ConfigError::new("figure.x_max", "must exceed x_min"));
    }
    if fig.points < 2 {
        return Err(ConfigError::new("figure.points", "need at least 2 points"));
    }
    for (i, v) in fig.variants.iter().enumerate() {
        if v.d != 1 {
            return Err(ConfigError::new(format!("figure.variant[{i}].d"), "figure data is produced on the line (d = 1)"));
        }
    }
    Ok(fig)
}
