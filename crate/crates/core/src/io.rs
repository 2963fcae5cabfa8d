//! Profile CSV, JSON reports and SVG plots.
//!
//! Every number is written with 17 significant digits so files round-trip
//! exactly; nothing time- or host-dependent is written.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::bryant::RadialProfile;
use crate::error::{Error, Result};
use crate::geometry::GeometryFrame;
use crate::model::SolitonModel;

pub const PROFILE_HEADER: [&str; 10] = [
    "r", "w", "wp", "fp", "R", "Rp", "lapR", "ric_rad", "ric_tan", "rm_norm",
];

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row of the profile CSV. `w` and `wp` are absent for parametrizations
/// that are not warped products (the cigar in conformal form).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub r: f64,
    pub w: Option<f64>,
    pub wp: Option<f64>,
    pub fp: f64,
    pub scal: f64,
    pub scal_dr: f64,
    pub scal_lap: f64,
    pub ric_rad: f64,
    pub ric_tan: f64,
    pub rm_norm: f64,
}

impl ProfileRow {
    pub fn from_frame(f: &GeometryFrame, w: Option<f64>, wp: Option<f64>) -> Self {
        Self {
            r: f.r,
            w,
            wp,
            fp: f.fp,
            scal: f.scal,
            scal_dr: f.scal_dr,
            scal_lap: f.scal_lap,
            ric_rad: f.ric_rad,
            ric_tan: f.ric_tan,
            rm_norm: f.rm_norm,
        }
    }

    /// Rebuilds a frame of an `n`-dimensional rotationally symmetric soliton.
    ///
    /// `f''` is taken as `Ric(∂r, ∂r)`, the radial soliton equation.
    pub fn to_frame(&self, n: usize) -> Result<GeometryFrame> {
        let (Some(w), Some(wp)) = (self.w, self.wp) else {
            return Err(Error::Parse(format!(
                "row r = {}: the w and wp columns are required",
                self.r
            )));
        };
        if n < 3 {
            return Err(Error::Dimension { n, min: 3 });
        }
        let nm1 = (n - 1) as f64;
        let mean_curvature = if w > 0.0 { nm1 * wp / w } else { f64::INFINITY };
        let k_rad = self.ric_rad / nm1;
        Ok(GeometryFrame {
            r: self.r,
            n,
            flat_dims: 0,
            w,
            mean_curvature,
            fp: self.fp,
            scal: self.scal,
            scal_dr: self.scal_dr,
            scal_lap: self.scal_lap,
            ric_rad: self.ric_rad,
            ric_tan: self.ric_tan,
            ric_norm_sq: self.ric_rad * self.ric_rad + nm1 * self.ric_tan * self.ric_tan,
            rm_norm: self.rm_norm,
            grad_f_norm: self.fp.abs(),
            k_rad,
            k_tan: (self.ric_tan - k_rad) / (n - 2) as f64,
            hess_f_rad: self.ric_rad,
            hess_f_tan: if mean_curvature.is_finite() {
                self.fp * wp / w
            } else {
                self.ric_rad
            },
        })
    }
}

/// Rows at every grid radius of a computed profile.
pub fn profile_rows(profile: &RadialProfile) -> Result<Vec<ProfileRow>> {
    let (w, wp) = (profile.w(), profile.wp());
    profile
        .grid()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            Ok(ProfileRow::from_frame(
                &profile.frame_at(r)?,
                Some(w[i]),
                Some(wp[i]),
            ))
        })
        .collect()
}

/// Rows of a closed-form model at the given radii. `warped` supplies `(w, w')`
/// where the model is written as a warped product.
pub fn model_rows<M, F>(model: &M, radii: &[f64], warped: F) -> Result<Vec<ProfileRow>>
where
    M: SolitonModel + ?Sized,
    F: Fn(f64) -> Option<(f64, f64)>,
{
    radii
        .iter()
        .map(|&r| {
            let f = model.frame_at(r)?;
            let ww = warped(r);
            Ok(ProfileRow::from_frame(&f, ww.map(|p| p.0), ww.map(|p| p.1)))
        })
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Writes a table with LF line endings.
pub fn write_csv<W: Write>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    wtr.write_record(header).map_err(csv_err)?;
    for row in rows {
        wtr.write_record(&row).map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_profile_csv<W: Write>(out: W, rows: &[ProfileRow]) -> Result<()> {
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    write_csv(
        out,
        &PROFILE_HEADER,
        rows.iter().map(|r| {
            vec![
                fmt_num(r.r),
                opt(r.w),
                opt(r.wp),
                fmt_num(r.fp),
                fmt_num(r.scal),
                fmt_num(r.scal_dr),
                fmt_num(r.scal_lap),
                fmt_num(r.ric_rad),
                fmt_num(r.ric_tan),
                fmt_num(r.rm_norm),
            ]
        }),
    )
}

pub fn read_profile_csv<R: Read>(input: R) -> Result<Vec<ProfileRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(PROFILE_HEADER.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header {}, found {}",
            PROFILE_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| -> Result<Option<f64>> {
            let s = rec.get(i).unwrap_or("").trim();
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<f64>().map(Some).map_err(|_| {
                Error::Parse(format!(
                    "row {}: column {}: not a number: {s:?}",
                    line + 1,
                    PROFILE_HEADER[i]
                ))
            })
        };
        let need = |i: usize| -> Result<f64> {
            field(i)?.ok_or_else(|| {
                Error::Parse(format!(
                    "row {}: column {} is empty",
                    line + 1,
                    PROFILE_HEADER[i]
                ))
            })
        };
        rows.push(ProfileRow {
            r: need(0)?,
            w: field(1)?,
            wp: field(2)?,
            fp: need(3)?,
            scal: need(4)?,
            scal_dr: need(5)?,
            scal_lap: need(6)?,
            ric_rad: need(7)?,
            ric_tan: need(8)?,
            rm_norm: need(9)?,
        });
    }
    if rows.is_empty() {
        return Err(Error::Parse("profile has no rows".into()));
    }
    Ok(rows)
}

/// A JSON value rendered with fixed key order and 17-digit numbers.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    /// Non-finite values render as `null`.
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj<K: Into<String>>(pairs: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn nums(v: &[f64]) -> Json {
        Json::Arr(v.iter().map(|&x| Json::Num(x)).collect())
    }

    pub fn opt_num(v: Option<f64>) -> Json {
        v.map_or(Json::Null, Json::Num)
    }

    /// Two-space indented rendering with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = |n: usize| "  ".repeat(n);
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").expect("string write"),
            Json::Num(x) if x.is_finite() => out.push_str(&fmt_num(*x)),
            Json::Num(_) => out.push_str("null"),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
            Json::Arr(v) if v.is_empty() => out.push_str("[]"),
            Json::Arr(v) => {
                out.push_str("[\n");
                for (i, x) in v.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    x.write(out, indent + 1);
                    out.push_str(if i + 1 < v.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
            Json::Obj(v) if v.is_empty() => out.push_str("{}"),
            Json::Obj(v) => {
                out.push_str("{\n");
                for (i, (k, x)) in v.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    out.push_str(&serde_json::to_string(k).expect("string serializes"));
                    out.push_str(": ");
                    x.write(out, indent + 1);
                    out.push_str(if i + 1 < v.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push('}');
            }
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    // temporary files are created owner-only
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// One polyline of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
}

impl Axis {
    /// Logarithmic when every value is positive and they span more than two decades.
    fn new(values: impl Iterator<Item = f64> + Clone) -> Axis {
        let finite = values.filter(|v| v.is_finite());
        let lo = finite.clone().fold(f64::INFINITY, f64::min);
        let hi = finite.fold(f64::NEG_INFINITY, f64::max);
        let log = lo > 0.0 && hi / lo > 100.0;
        let (lo, hi) = if log {
            (lo.log10(), hi.log10())
        } else {
            (lo, hi)
        };
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        };
        Axis { log, lo, hi }
    }

    fn map(&self, v: f64) -> Option<f64> {
        let t = if self.log {
            if v > 0.0 {
                v.log10()
            } else {
                return None;
            }
        } else {
            v
        };
        t.is_finite().then(|| (t - self.lo) / (self.hi - self.lo))
    }

    fn label(&self, t: f64) -> String {
        let v = self.lo + t * (self.hi - self.lo);
        if self.log {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3e}")
        }
    }
}

/// A line plot of the given series.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let ax = Axis::new(xs);
    let ay = Axis::new(ys);
    let esc = |s: &str| {
        s.replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;")
    };
    let pw = SVG_W - 2.0 * MARGIN;
    let ph = SVG_H - 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        SVG_W / 2.0,
        esc(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let x = MARGIN + t * pw;
        let y = SVG_H - MARGIN - t * ph;
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
            SVG_H - MARGIN + 14.0,
            ax.label(t)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" font-size="10">{}</text>"#,
            MARGIN - 4.0,
            ay.label(t)
        );
    }
    let xl = if ax.log {
        format!("{x_label} (log)")
    } else {
        x_label.to_string()
    };
    let yl = if ay.log {
        format!("{y_label} (log)")
    } else {
        y_label.to_string()
    };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        SVG_W / 2.0,
        SVG_H - 16.0,
        esc(&xl)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        SVG_H / 2.0,
        SVG_H / 2.0,
        esc(&yl)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter_map(|&(x, y)| {
                let (tx, ty) = (ax.map(x)?, ay.map(y)?);
                Some(format!(
                    "{:.2},{:.2}",
                    MARGIN + tx * pw,
                    SVG_H - MARGIN - ty * ph
                ))
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11" fill="{color}">{}</text>"#,
            SVG_W - MARGIN - 6.0,
            MARGIN + 14.0 * (i as f64 + 1.0),
            esc(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}
