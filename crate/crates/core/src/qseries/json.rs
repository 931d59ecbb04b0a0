//! JSON serialization of series for report dumps: bit-exact decimal
//! string rationals, deterministic coefficient order.

use serde_json::{json, Map, Value};

use crate::coeff::Rat;
use crate::error::{CoreError, Result};

use super::{LogSeries, Prec, QSeries};

/// Schema: `{"p", "np", "meps", "klam", "lam_low", "meps_eff",
/// "klam_eff", "coeffs": [[i, j, "num/den"], ...]}` with coefficients
/// sorted by `(i, j)`.
pub fn qseries_to_json(s: &QSeries) -> Value {
    let prec = s.prec();
    let coeffs: Vec<Value> = s
        .iter()
        .map(|(i, j, r)| json!([i, j, r.to_decimal_string()]))
        .collect();
    let mut obj = Map::new();
    obj.insert("p".into(), json!(prec.p));
    obj.insert("np".into(), json!(prec.n_p));
    obj.insert("meps".into(), json!(prec.m_eps));
    obj.insert("klam".into(), json!(prec.k_lam));
    obj.insert("lam_low".into(), json!(prec.lam_low));
    obj.insert("meps_eff".into(), json!(s.eps_window()));
    obj.insert("klam_eff".into(), json!(s.lam_window()));
    obj.insert("coeffs".into(), Value::Array(coeffs));
    Value::Object(obj)
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    v.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| CoreError::InvalidParameter(format!("missing or bad field {key:?}")))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    v.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| CoreError::InvalidParameter(format!("missing or bad field {key:?}")))
}

pub fn qseries_from_json(v: &Value) -> Result<QSeries> {
    let p = get_u64(v, "p")? as u32;
    let n_p = get_u64(v, "np")? as u32;
    let m_eps = get_u64(v, "meps")? as u32;
    let k_lam = get_i64(v, "klam")?;
    let lam_low = v.get("lam_low").and_then(Value::as_i64).unwrap_or(-2);
    let prec = Prec::new(p, n_p, m_eps, k_lam)?.with_lam_low(lam_low);
    let meps_eff = v
        .get("meps_eff")
        .and_then(Value::as_u64)
        .unwrap_or(m_eps as u64) as u32;
    let klam_eff = v.get("klam_eff").and_then(Value::as_i64).unwrap_or(k_lam);

    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::InvalidParameter("missing coeffs array".into()))?;
    let mut out = QSeries::zero(prec);
    for entry in coeffs {
        let triple = entry
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| CoreError::InvalidParameter("coeff entry must be [i, j, r]".into()))?;
        let i = triple[0]
            .as_u64()
            .ok_or_else(|| CoreError::InvalidParameter("bad eps exponent".into()))?
            as u32;
        let j = triple[1]
            .as_i64()
            .ok_or_else(|| CoreError::InvalidParameter("bad lambda exponent".into()))?;
        let r = Rat::parse(
            triple[2]
                .as_str()
                .ok_or_else(|| CoreError::InvalidParameter("coefficient must be a string".into()))?,
        )?;
        out = out.add(&QSeries::monomial(prec, r, i, j)?);
    }
    out.restrict_window(meps_eff, klam_eff);
    Ok(out)
}

/// `{"log_parts": [qseries, ...]}`, index = degree in `log_q lambda`.
pub fn logseries_to_json(s: &LogSeries) -> Value {
    let parts: Vec<Value> = s.parts().iter().map(qseries_to_json).collect();
    json!({ "log_parts": parts })
}

pub fn logseries_from_json(v: &Value) -> Result<LogSeries> {
    let parts = v
        .get("log_parts")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::InvalidParameter("missing log_parts array".into()))?;
    let series = parts
        .iter()
        .map(qseries_from_json)
        .collect::<Result<Vec<_>>>()?;
    if series.is_empty() {
        return Err(CoreError::InvalidParameter("log_parts is empty".into()));
    }
    let prec = series[0].prec();
    LogSeries::from_parts(prec, series)
}

impl QSeries {
    /// Clamp the effective window (used when reloading dumps).
    pub(crate) fn restrict_window(&mut self, meps_eff: u32, klam_eff: i64) {
        self.meps_eff = self.meps_eff.min(meps_eff);
        self.klam_eff = self.klam_eff.min(klam_eff);
        self.truncate_to_window();
    }
}
