//! Flat `key = value` run settings shared by config files and CLI flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{Axis, AxisValues, Param, Point, Quantity, SweepSpec};
use crate::error::{Error, Result};

const EXTRA_KEYS: [&str; 12] = [
    "nu", "quantity", "axis", "start", "stop", "count", "values", "axis2", "start2", "stop2", "count2", "values2",
];

fn normalize_key(key: &str) -> Result<String> {
    let k = key.trim().trim_start_matches("--").replace('-', "_");
    let known = Param::ALL.iter().any(|p| p.name() == k) || EXTRA_KEYS.contains(&k.as_str());
    if known {
        Ok(k)
    } else {
        Err(Error::Domain(format!("unknown setting `{}`", key.trim())))
    }
}

/// Parses a real number; also accepts `pi`, `-pi`, `pi/2`, `3pi/4`, `2*pi`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Domain(format!("malformed number `{t}`"));
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let Some((coef, rest)) = body.split_once("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.trim_end_matches('*');
    let coef = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad())? };
    let den = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    let v = sign * coef * PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(parse_real).collect()
}

/// Ordered map of settings. Later assignments override earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// One `key = value` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("line {}: expected `key = value`", n + 1)))?;
            s.set(k, v.trim())?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let k = normalize_key(key)?;
        self.values.insert(k, value.trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Overrides `self` with every value present in `other`.
    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(parse_real).transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| v.parse::<usize>().map_err(|_| Error::Domain(format!("malformed count `{v}` for {key}"))))
            .transpose()
    }

    /// The evaluation point; unset parameters keep the balanced defaults.
    pub fn point(&self) -> Result<Point> {
        let mut p = Point::default();
        for param in Param::ALL {
            if let Some(v) = self.real(param.name())? {
                param.set(&mut p, v);
            }
        }
        // a plain `g` must not clobber an explicit g1/g2
        for param in [Param::G1, Param::G2] {
            if let Some(v) = self.real(param.name())? {
                param.set(&mut p, v);
            }
        }
        if let Some(nu) = self.get("nu") {
            p.cfg.nu = nu.parse().map_err(|_| Error::Domain(format!("malformed nu `{nu}`")))?;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn quantities(&self) -> Result<Vec<Quantity>> {
        let q = self.get("quantity").ok_or_else(|| Error::Domain("no quantity given".into()))?;
        let out: Vec<Quantity> = q.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
        if out.is_empty() {
            return Err(Error::Domain("no quantity given".into()));
        }
        Ok(out)
    }

    fn axis_with(&self, suffix: &str) -> Result<Option<Axis>> {
        let key = |base: &str| format!("{base}{suffix}");
        let Some(name) = self.get(&key("axis")) else {
            return Ok(None);
        };
        let param: Param = name.parse()?;
        let axis = if let Some(list) = self.get(&key("values")) {
            Axis { param, values: AxisValues::List(parse_list(list)?) }
        } else {
            let need = |k: &str| Error::Domain(format!("axis {param} needs {k}"));
            let start = self.real(&key("start"))?.ok_or_else(|| need("start"))?;
            let stop = self.real(&key("stop"))?.ok_or_else(|| need("stop"))?;
            let count = self.count(&key("count"))?.ok_or_else(|| need("count"))?;
            Axis::range(param, start, stop, count)
        };
        axis.validate()?;
        Ok(Some(axis))
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let axis1 = self.axis_with("")?.ok_or_else(|| Error::Domain("a sweep needs an axis".into()))?;
        let spec = SweepSpec {
            base: self.point()?,
            axis1,
            axis2: self.axis_with("2")?,
            quantities: self.quantities()?,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Settings that rebuild `spec` exactly.
    pub fn from_spec(spec: &SweepSpec) -> Self {
        let mut s = Settings::default();
        let mut put = |k: &str, v: String| {
            s.values.insert(k.to_string(), v);
        };
        for p in Param::ALL.into_iter().filter(|p| *p != Param::G) {
            put(p.name(), format!("{}", spec.base.get(p)));
        }
        put("nu", spec.base.cfg.nu.to_string());
        let qs: Vec<String> = spec.quantities.iter().map(|q| q.to_string()).collect();
        put("quantity", qs.join(","));
        for (axis, suffix) in [(Some(&spec.axis1), ""), (spec.axis2.as_ref(), "2")] {
            let Some(axis) = axis else { continue };
            put(&format!("axis{suffix}"), axis.param.to_string());
            match &axis.values {
                AxisValues::Range { start, stop, count } => {
                    put(&format!("start{suffix}"), format!("{start}"));
                    put(&format!("stop{suffix}"), format!("{stop}"));
                    put(&format!("count{suffix}"), count.to_string());
                }
                AxisValues::List(v) => {
                    let v: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
                    put(&format!("values{suffix}"), v.join(","));
                }
            }
        }
        s
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{figure_preset, FIGURE_IDS};

    #[test]
    fn reals() {
        assert_eq!(parse_real("1.5").unwrap(), 1.5);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_real("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_real("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert!(parse_real("abc").is_err());
        assert!(parse_real("pix").is_err());
        assert!(parse_real("pi/0").is_err());
    }

    #[test]
    fn file_parsing() {
        let s = Settings::parse("# comment\ng = 2\nr=1 # trailing\ntheta-beta = pi/2\nquantity = dphi,SQL\n").unwrap();
        let p = s.point().unwrap();
        assert_eq!((p.cfg.g1, p.cfg.g2, p.cfg.r), (2.0, 2.0, 1.0));
        assert_eq!(s.quantities().unwrap().len(), 2);
        assert!(Settings::parse("bogus = 1").is_err());
        assert!(Settings::parse("g 1").is_err());
        assert!(Settings::parse("g = -1").unwrap().point().is_err());
    }

    #[test]
    fn explicit_gains_win_over_g() {
        let s = Settings::parse("g = 1\ng2 = 0.5").unwrap();
        let p = s.point().unwrap();
        assert_eq!((p.cfg.g1, p.cfg.g2), (1.0, 0.5));
    }

    #[test]
    fn dump_round_trips() {
        for id in FIGURE_IDS {
            let spec = figure_preset(id).unwrap();
            let text = Settings::from_spec(&spec).to_config_string();
            let back = Settings::parse(&text).unwrap().sweep_spec().unwrap();
            assert_eq!(back, spec, "figure {id}");
        }
    }
}
