use std::path::Path;

use qtriterm::{BasePoint, Error, Precision, Result, Route, ShiftVector};
use serde::{Deserialize, Serialize};

pub const PRECISION_ENV: &str = "QTRITERM_PRECISION";

/// Explicit sample point as decimal strings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub a: String,
    pub b: String,
    pub c: String,
    pub x: String,
    pub q: String,
}

/// Settings read from `--config`; every field is optional and flags win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub precision_digits: Option<u32>,
    pub tol: Option<String>,
    pub max_terms: Option<usize>,
    pub seed: Option<u64>,
    pub shifts: Option<Vec<[i64; 4]>>,
    pub point: Option<PointConfig>,
    pub route: Option<Route>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Point flags as given on the command line.
#[derive(Clone, Debug, Default)]
pub struct PointFlags {
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub x: Option<String>,
    pub q: Option<String>,
}

impl PointFlags {
    fn any(&self) -> bool {
        self.a.is_some() || self.b.is_some() || self.c.is_some() || self.x.is_some() || self.q.is_some()
    }
}

/// Flags override the file, the environment only supplies a default precision.
pub fn resolve_precision(flag: Option<u32>, cfg: &RunConfig, env: Option<String>) -> Result<Precision> {
    if let Some(d) = flag.or(cfg.precision_digits) {
        return Precision::new(d);
    }
    match env {
        Some(v) => {
            let d: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{PRECISION_ENV} must be an integer, got '{v}'")))?;
            Precision::new(d)
        }
        None => Ok(Precision::DEFAULT),
    }
}

/// Merge point flags over the config point; `None` when neither supplies one.
pub fn resolve_point(flags: &PointFlags, cfg: &RunConfig, prec: Precision) -> Result<Option<BasePoint>> {
    match resolve_point_strings(flags, cfg)? {
        Some([a, b, c, x, q]) => BasePoint::parse(prec, &a, &b, &c, &x, &q).map(Some),
        None => Ok(None),
    }
}

/// Merged `(a, b, c, x, q)` strings without domain checks.
pub fn resolve_point_strings(flags: &PointFlags, cfg: &RunConfig) -> Result<Option<[String; 5]>> {
    if !flags.any() && cfg.point.is_none() {
        return Ok(None);
    }
    let base = cfg.point.clone().unwrap_or_default();
    let pick = |flag: &Option<String>, file: &str, name: &str| -> Result<String> {
        match flag {
            Some(v) => Ok(v.clone()),
            None if !file.is_empty() => Ok(file.to_string()),
            None => Err(Error::Config(format!("missing --{name}"))),
        }
    };
    let a = pick(&flags.a, &base.a, "a")?;
    let b = pick(&flags.b, &base.b, "b")?;
    let c = pick(&flags.c, &base.c, "c")?;
    let x = pick(&flags.x, &base.x, "x")?;
    let q = pick(&flags.q, &base.q, "q")?;
    Ok(Some([a, b, c, x, q]))
}

pub fn resolve_shifts(flag: Option<&[ShiftVector]>, cfg: &RunConfig) -> Vec<ShiftVector> {
    match (flag, &cfg.shifts) {
        (Some(s), _) => s.to_vec(),
        (None, Some(s)) => s.iter().map(|&a| ShiftVector::from(a)).collect(),
        (None, None) => ShiftVector::default_suite(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_order() {
        let cfg = RunConfig { precision_digits: Some(30), ..RunConfig::default() };
        assert_eq!(resolve_precision(Some(20), &cfg, Some("40".into())).unwrap().digits(), 20);
        assert_eq!(resolve_precision(None, &cfg, Some("40".into())).unwrap().digits(), 30);
        let empty = RunConfig::default();
        assert_eq!(resolve_precision(None, &empty, Some("40".into())).unwrap().digits(), 40);
        assert_eq!(resolve_precision(None, &empty, None).unwrap().digits(), 50);
        assert!(resolve_precision(None, &empty, Some("many".into())).is_err());
    }

    #[test]
    fn point_merge() {
        let cfg = RunConfig {
            point: Some(PointConfig { a: "0.6".into(), b: "0.7".into(), c: "0.55".into(), x: "0.4".into(), q: "0.3".into() }),
            ..RunConfig::default()
        };
        let flags = PointFlags { x: Some("0.1".into()), ..PointFlags::default() };
        let p = resolve_point(&flags, &cfg, Precision::DOUBLE).unwrap().unwrap();
        assert_eq!(p.to_f64s()[3], Precision::DOUBLE.parse("0.1").unwrap().to_f64());
        assert!(resolve_point(&PointFlags::default(), &RunConfig::default(), Precision::DOUBLE).unwrap().is_none());
        let partial = PointFlags { a: Some("0.5".into()), ..PointFlags::default() };
        assert!(resolve_point(&partial, &RunConfig::default(), Precision::DOUBLE).is_err());
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"precision": 20}"#).is_err());
        let cfg: RunConfig = serde_json::from_str(r#"{"shifts": [[1,1,1,0]], "route": "series"}"#).unwrap();
        assert_eq!(resolve_shifts(None, &cfg), vec![ShiftVector::UNIT]);
        assert_eq!(cfg.route, Some(Route::Series));
    }
}
