//! Text file formats.
//!
//! Every file opens with a `framecurve <kind> <version>` line, followed by
//! `key value` header lines. Curve and path files then give a `columns` line
//! and one row of numbers per sample. Blank lines and `#` comments are
//! ignored. Floats are written with 17 significant digits, which round-trips
//! `f64` exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use framecurve::{BaseCurve, Closure, ClosureClass, FramedCurve, GridSpec, Mode, Quat, QuaternionPath, Vec3};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Formats a float with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// A parsed file: kind, header and numeric rows with their line numbers.
struct Document {
    path: PathBuf,
    header: BTreeMap<String, String>,
    columns: Vec<String>,
    rows: Vec<(usize, Vec<f64>)>,
    /// Free-form lines after the header (matrix and cluster files).
    body: Vec<(usize, String)>,
}

impl Document {
    fn err(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.header
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| self.err(0, format!("missing header key `{key}`")))
    }

    fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| self.err(0, format!("bad value `{v}` for `{key}`")))
    }
}

fn parse(path: &Path, text: &str, kind: &str, tabular: bool) -> Result<Document> {
    let mut doc = Document {
        path: path.to_path_buf(),
        header: BTreeMap::new(),
        columns: Vec::new(),
        rows: Vec::new(),
        body: Vec::new(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, magic) = lines.next().ok_or_else(|| doc.err(1, "empty file"))?;
    let magic: Vec<&str> = magic.split_whitespace().collect();
    match magic.as_slice() {
        ["framecurve", k, v] if *k == kind => {
            if v.parse::<u32>().ok() != Some(FORMAT_VERSION) {
                return Err(doc.err(first, format!("unsupported format version `{v}`")));
            }
        }
        _ => return Err(doc.err(first, format!("expected `framecurve {kind} {FORMAT_VERSION}`"))),
    }
    let mut in_body = false;
    for (no, line) in lines {
        if in_body {
            if tabular {
                let row = line
                    .split_whitespace()
                    .map(|w| {
                        w.parse::<f64>()
                            .map_err(|_| doc.err(no, format!("sample {}: bad number `{w}`", doc.rows.len())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != doc.columns.len() {
                    return Err(doc.err(
                        no,
                        format!(
                            "sample {} has {} values, expected {}",
                            doc.rows.len(),
                            row.len(),
                            doc.columns.len()
                        ),
                    ));
                }
                if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                    return Err(doc.err(
                        no,
                        format!("sample {}: non-finite `{}`", doc.rows.len(), doc.columns[c]),
                    ));
                }
                doc.rows.push((no, row));
            } else {
                doc.body.push((no, line.to_string()));
            }
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        if key == "columns" && tabular {
            doc.columns = value.split_whitespace().map(str::to_string).collect();
            in_body = true;
        } else if key == "data" && !tabular {
            in_body = true;
        } else if doc.header.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(doc.err(no, format!("duplicate header key `{key}`")));
        }
    }
    if !in_body {
        return Err(doc.err(
            0,
            if tabular {
                "missing `columns` line"
            } else {
                "missing `data` line"
            },
        ));
    }
    Ok(doc)
}

/// Checks the `t` column against the grid.
fn check_rows(doc: &Document, grid: GridSpec, class: ClosureClass) -> Result<()> {
    let expected = grid.len(class);
    if doc.rows.len() != expected {
        let line = doc.rows.last().map_or(0, |r| r.0);
        return Err(doc.err(line, format!("{} samples, expected {expected}", doc.rows.len())));
    }
    for (i, (no, row)) in doc.rows.iter().enumerate() {
        if (row[0] - grid.t(i)).abs() > 1e-9 {
            return Err(doc.err(
                *no,
                format!("sample {i}: t = {} off the grid (expected {})", row[0], grid.t(i)),
            ));
        }
    }
    Ok(())
}

fn grid_of(doc: &Document) -> Result<GridSpec> {
    let n: usize = doc.get_parsed("n_samples")?;
    GridSpec::new(n).map_err(|e| doc.err(0, e.to_string()))
}

/// A curve with optional frame and free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFile {
    pub id: String,
    pub closure: Closure,
    pub grid: GridSpec,
    pub points: Vec<Vec3>,
    pub frame: Option<Vec<Vec3>>,
    /// Extra header entries such as `source` or `units`.
    pub meta: BTreeMap<String, String>,
}

fn closure_name(c: Closure) -> &'static str {
    match c {
        Closure::Open => "open",
        Closure::Closed => "closed",
    }
}

impl CurveFile {
    pub fn from_framed(id: &str, c: &FramedCurve) -> Self {
        Self {
            id: id.to_string(),
            closure: c.closure(),
            grid: c.grid(),
            points: c.gamma().to_vec(),
            frame: Some(c.frame().to_vec()),
            meta: BTreeMap::new(),
        }
    }

    pub fn from_base(id: &str, c: &BaseCurve) -> Self {
        Self {
            id: id.to_string(),
            closure: c.closure(),
            grid: c.grid(),
            points: c.gamma().to_vec(),
            frame: None,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn base(&self) -> framecurve::Result<BaseCurve> {
        BaseCurve::from_points(self.grid, self.closure, self.points.clone())
    }

    pub fn framed(&self) -> Option<framecurve::Result<FramedCurve>> {
        self.frame.as_ref().map(|f| {
            self.base()
                .and_then(|b| FramedCurve::with_projected_frame(b, f.clone()))
        })
    }

    pub fn render(&self) -> String {
        let mut s = format!("framecurve curve {FORMAT_VERSION}\n");
        let _ = writeln!(s, "id {}", self.id);
        let _ = writeln!(s, "closure {}", closure_name(self.closure));
        let _ = writeln!(s, "n_samples {}", self.grid.n_samples());
        for (k, v) in &self.meta {
            let _ = writeln!(s, "{k} {v}");
        }
        s.push_str(if self.frame.is_some() {
            "columns t x y z vx vy vz\n"
        } else {
            "columns t x y z\n"
        });
        for (i, p) in self.points.iter().enumerate() {
            let _ = write!(s, "{} {} {} {}", num(self.grid.t(i)), num(p.x), num(p.y), num(p.z));
            if let Some(f) = &self.frame {
                let _ = write!(s, " {} {} {}", num(f[i].x), num(f[i].y), num(f[i].z));
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let doc = parse(path, text, "curve", true)?;
        let closure = match doc.get("closure")? {
            "open" => Closure::Open,
            "closed" => Closure::Closed,
            other => return Err(doc.err(0, format!("closure must be `open` or `closed`, got `{other}`"))),
        };
        let grid = grid_of(&doc)?;
        let framed = match doc.columns.join(" ").as_str() {
            "t x y z" => false,
            "t x y z vx vy vz" => true,
            other => {
                return Err(doc.err(
                    0,
                    format!("columns must be `t x y z` with optional `vx vy vz`, got `{other}`"),
                ))
            }
        };
        check_rows(&doc, grid, closure.class())?;
        let points = doc.rows.iter().map(|(_, r)| Vec3::new(r[1], r[2], r[3])).collect();
        let frame = framed.then(|| doc.rows.iter().map(|(_, r)| Vec3::new(r[4], r[5], r[6])).collect());
        let id = doc.get("id")?.to_string();
        let meta = doc
            .header
            .iter()
            .filter(|(k, _)| !["id", "closure", "n_samples"].contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(Self {
            id,
            closure,
            grid,
            points,
            frame,
            meta,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.render())
    }
}

pub fn class_name(c: ClosureClass) -> &'static str {
    match c {
        ClosureClass::Open => "open",
        ClosureClass::Loop => "loop",
        ClosureClass::AntiLoop => "anti-loop",
    }
}

/// A quaternionic path `q = a + b i + c j + d k`.
pub fn render_path(id: &str, q: &QuaternionPath) -> String {
    let g = q.grid();
    let mut s = format!("framecurve path {FORMAT_VERSION}\n");
    let _ = writeln!(s, "id {id}");
    let _ = writeln!(s, "class {}", class_name(q.class()));
    let _ = writeln!(s, "n_samples {}", g.n_samples());
    s.push_str("columns t a b c d\n");
    for (i, p) in q.samples().iter().enumerate() {
        let _ = writeln!(s, "{} {} {} {} {}", num(g.t(i)), num(p.w), num(p.x), num(p.y), num(p.z));
    }
    s
}

pub fn parse_path(path: &Path, text: &str) -> Result<(String, QuaternionPath)> {
    let doc = parse(path, text, "path", true)?;
    let class = match doc.get("class")? {
        "open" => ClosureClass::Open,
        "loop" => ClosureClass::Loop,
        "anti-loop" => ClosureClass::AntiLoop,
        other => return Err(doc.err(0, format!("unknown class `{other}`"))),
    };
    if doc.columns.join(" ") != "t a b c d" {
        return Err(doc.err(0, "columns must be `t a b c d`"));
    }
    let grid = grid_of(&doc)?;
    check_rows(&doc, grid, class)?;
    let q = doc
        .rows
        .iter()
        .map(|(_, r)| Quat::new(r[1], r[2], r[3], r[4]))
        .collect();
    let q = QuaternionPath::new(grid, class, q).map_err(|e| doc.err(0, e.to_string()))?;
    Ok((doc.get("id")?.to_string(), q))
}

/// Labelled symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub mode: Mode,
    pub labels: Vec<String>,
    pub d: Vec<Vec<f64>>,
}

impl MatrixFile {
    /// One row per curve: its label followed by the distances (`nan` for
    /// failed pairs).
    pub fn render(&self) -> String {
        let mut s = format!("framecurve matrix {FORMAT_VERSION}\n");
        let _ = writeln!(s, "mode {}", self.mode);
        let _ = writeln!(s, "size {}", self.labels.len());
        s.push_str("data\n");
        for (label, row) in self.labels.iter().zip(&self.d) {
            s.push_str(label);
            for v in row {
                s.push(' ');
                s.push_str(&if v.is_nan() { "nan".to_string() } else { num(*v) });
            }
            s.push('\n');
        }
        s
    }

    #[allow(clippy::needless_range_loop)]
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let doc = parse(path, text, "matrix", false)?;
        let mode: Mode = doc.get_parsed("mode")?;
        let n: usize = doc.get_parsed("size")?;
        if doc.body.len() != n {
            return Err(doc.err(0, format!("{} rows, expected {n}", doc.body.len())));
        }
        let mut labels = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        for (i, (no, line)) in doc.body.iter().enumerate() {
            let mut words = line.split_whitespace();
            labels.push(words.next().unwrap_or_default().to_string());
            let row = words
                .map(|w| {
                    w.parse::<f64>()
                        .map_err(|_| doc.err(*no, format!("row {i}: bad number `{w}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(doc.err(*no, format!("row {i} has {} entries, expected {n}", row.len())));
            }
            d.push(row);
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(doc.err(doc.body[i].0, format!("row {i}: nonzero diagonal")));
            }
            for j in 0..i {
                if d[i][j].to_bits() != d[j][i].to_bits() {
                    return Err(doc.err(doc.body[i].0, format!("row {i}: entry {j} breaks symmetry")));
                }
            }
        }
        Ok(Self { mode, labels, d })
    }
}
