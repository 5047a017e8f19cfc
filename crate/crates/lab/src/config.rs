//! Flat `key = value` sweep configuration.
//!
//! ```text
//! # detuning scan
//! g = 1
//! kappa = 0.05
//! gamma = 0.05
//! eta = 0.01
//! axis1 = Delta -2 2 401
//! nmax = 4
//! outputs = g2_analytic, g2_numeric, coherence_analytic, coherence_numeric
//! ```
//!
//! `g`, `kappa`, `gamma` and `eta` are required. `Delta` sets both detunings;
//! `delta_a` and `delta` set them separately. Unset detunings are zero and
//! `outputs` defaults to every output.

use std::collections::HashMap;

use blockade_core::{HilbertConfig, SystemParams};

use crate::error::{LabError, Result};
use crate::sweep::{Axis, Output, OutputSet, SweepSpec};

const KEYS: [&str; 11] = [
    "g", "kappa", "gamma", "eta", "Delta", "delta_a", "delta", "axis1", "axis2", "nmax", "outputs",
];

fn number(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| LabError::config(format!("`{key}`: `{v}` is not a number")))
}

fn axis(key: &str, v: &str) -> Result<Axis> {
    let parts: Vec<&str> = v.split_whitespace().collect();
    let [name, min, max, count] = parts[..] else {
        return Err(LabError::config(format!(
            "`{key}` must read `name min max count`"
        )));
    };
    let count = count
        .parse()
        .map_err(|_| LabError::config(format!("`{key}`: bad count `{count}`")))?;
    Axis::new(name.parse()?, number(key, min)?, number(key, max)?, count)
}

pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut kv: HashMap<&str, &str> = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| LabError::config(format!("line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(LabError::config(format!(
                "line {}: unknown key `{k}`",
                n + 1
            )));
        }
        if kv.insert(k, v).is_some() {
            return Err(LabError::config(format!(
                "line {}: duplicate key `{k}`",
                n + 1
            )));
        }
    }

    let required = |k: &str| -> Result<f64> {
        let v = kv
            .get(k)
            .ok_or_else(|| LabError::config(format!("missing `{k}`")))?;
        number(k, v)
    };
    let optional = |k: &str| kv.get(k).map(|v| number(k, v)).transpose();

    let linked = optional("Delta")?;
    if linked.is_some() && (kv.contains_key("delta_a") || kv.contains_key("delta")) {
        return Err(LabError::config(
            "`Delta` cannot be combined with `delta_a` or `delta`",
        ));
    }
    let base = SystemParams {
        g: required("g")?,
        kappa: required("kappa")?,
        gamma: required("gamma")?,
        eta: required("eta")?,
        delta_a: linked.or(optional("delta_a")?).unwrap_or(0.0),
        delta: linked.or(optional("delta")?).unwrap_or(0.0),
    };

    let axis1 = axis(
        "axis1",
        kv.get("axis1")
            .ok_or_else(|| LabError::config("missing `axis1`"))?,
    )?;
    let axis2 = kv.get("axis2").map(|v| axis("axis2", v)).transpose()?;
    let n_max = match kv.get("nmax") {
        Some(v) => v
            .parse()
            .map_err(|_| LabError::config(format!("`nmax`: bad value `{v}`")))?,
        None => HilbertConfig::DEFAULT_N_MAX,
    };
    let outputs = match kv.get("outputs") {
        Some(v) => {
            let mut set = OutputSet::default();
            for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                set.insert(name.parse::<Output>()?);
            }
            set
        }
        None => OutputSet::all(),
    };
    let spec = SweepSpec {
        base,
        axis1,
        axis2,
        hilbert: HilbertConfig::new(n_max).map_err(|e| LabError::config(e.to_string()))?,
        outputs,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::SweepParam;

    #[test]
    fn minimal_config() {
        let s = parse_config("g=1\nkappa=0.1\ngamma=0.1\neta=0.01\naxis1 = Delta -1 1 5").unwrap();
        assert_eq!(s.axis1.param, SweepParam::Delta);
        assert_eq!(s.outputs, OutputSet::all());
        assert_eq!(s.hilbert.n_max(), 4);
        assert_eq!((s.base.delta_a, s.base.delta), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_lines() {
        let base = "g=1\nkappa=0.1\ngamma=0.1\neta=0.01\naxis1 = Delta -1 1 5\n";
        for extra in [
            "omega = 3",
            "g = 2",
            "nonsense",
            "Delta = 1\ndelta = 2",
            "axis2 = Delta 0 1 3",
            "axis2 = g 0 1",
            "outputs = photons",
            "nmax = 0",
        ] {
            assert!(parse_config(&format!("{base}{extra}")).is_err(), "{extra}");
        }
        assert!(parse_config("g=1\nkappa=0.1\ngamma=0.1\naxis1 = Delta -1 1 5").is_err());
        let negative = parse_config("g=1\nkappa=-1\ngamma=0.1\neta=0.01\naxis1 = Delta -1 1 5");
        assert!(matches!(negative, Err(LabError::Config(_))));
    }
}
