//! JSON reports, schema `germforge/1`.
//!
//! Numbers are strings: exact parts as `p/q`, float parts as the shortest
//! decimal that round-trips. A jet is `{"valid": v, "terms": [[i, j, {"re", "im"}], …]}`.

use germforge::germ::RationalFn;
use germforge::{Jet1, Jet2, Scalar, VectorFieldGerm, C64};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "germforge/1";

/// Longest value shown in the terminal summary.
const SUMMARY_WIDTH: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub degree: u32,
    pub mode: &'static str,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub config: Config,
    pub status: Status,
    pub result: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, args: Vec<String>, config: Config) -> Self {
        Report { command: command.into(), args, config, status: Status::Pass, result: Map::new(), diagnostics: Map::new() }
    }

    pub fn put(&mut self, key: &str, value: Value) -> &mut Self {
        self.result.insert(key.into(), value);
        self
    }

    pub fn note(&mut self, key: &str, value: Value) -> &mut Self {
        self.diagnostics.insert(key.into(), value);
        self
    }

    pub fn error(&mut self, message: impl Into<String>) {
        self.status = Status::Error;
        self.diagnostics.insert("error".into(), Value::String(message.into()));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "args": self.args,
            "config": {
                "degree": self.config.degree,
                "mode": self.config.mode,
                "tol": float(self.config.tol),
            },
            "status": self.status.as_str(),
            "result": self.result,
            "diagnostics": self.diagnostics,
        })
    }

    /// Short human summary for the terminal.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {}", self.command, self.status.as_str());
        for (k, v) in &self.result {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Object(o) if o.contains_key("text") => o["text"].as_str().unwrap_or_default().to_string(),
                other => other.to_string(),
            };
            let text = match text.char_indices().nth(SUMMARY_WIDTH) {
                Some((cut, _)) => format!("{}...", &text[..cut]),
                None => text,
            };
            out.push_str(&format!("\n  {k}: {text}"));
        }
        if let Some(Value::String(e)) = self.diagnostics.get("error") {
            out.push_str(&format!("\n  error: {e}"));
        }
        out
    }
}

pub fn float(x: f64) -> Value {
    Value::String(format!("{x:?}"))
}

pub fn scalar<S: Scalar>(c: &S) -> Value {
    let (re, im) = c.to_parts();
    json!({ "re": re, "im": im })
}

pub fn complex(z: C64) -> Value {
    json!({ "re": format!("{:?}", z.re), "im": format!("{:?}", z.im) })
}

pub fn jet2<S: Scalar>(j: &Jet2<S>) -> Value {
    let terms: Vec<Value> = j.terms().map(|(i, k, c)| json!([i, k, scalar(c)])).collect();
    json!({ "valid": j.valid(), "terms": terms, "text": germforge::catalog::format_jet2(j) })
}

pub fn jet1<S: Scalar>(j: &Jet1<S>) -> Value {
    let terms: Vec<Value> = j.terms().map(|(k, c)| json!([k, scalar(c)])).collect();
    json!({ "valid": j.valid(), "terms": terms, "text": germforge::catalog::format_jet1(j) })
}

pub fn field<S: Scalar>(x: &VectorFieldGerm<S>) -> Value {
    json!({
        "a": jet2(x.a()),
        "b": jet2(x.b()),
        "text": format!("[{}, {}]", germforge::catalog::format_jet2(x.a()), germforge::catalog::format_jet2(x.b())),
    })
}

pub fn rational<S: Scalar>(r: &RationalFn<S>) -> Value {
    let text = format!("({})/({})", germforge::catalog::format_jet2(&r.num), germforge::catalog::format_jet2(&r.den));
    json!({ "num": jet2(&r.num), "den": jet2(&r.den), "text": text })
}

pub fn scalar_from_json<S: Scalar>(v: &Value) -> Option<S> {
    S::from_parts(v.get("re")?.as_str()?, v.get("im")?.as_str()?)
}

pub fn jet2_from_json<S: Scalar>(v: &Value) -> Option<Jet2<S>> {
    let valid = u32::try_from(v.get("valid")?.as_u64()?).ok()?;
    let mut out = Jet2::zero(valid);
    for t in v.get("terms")?.as_array()? {
        let i = u32::try_from(t.get(0)?.as_u64()?).ok()?;
        let k = u32::try_from(t.get(1)?.as_u64()?).ok()?;
        out.set(i, k, scalar_from_json(t.get(2)?)?);
    }
    Some(out)
}

pub fn jet1_from_json<S: Scalar>(v: &Value) -> Option<Jet1<S>> {
    let valid = u32::try_from(v.get("valid")?.as_u64()?).ok()?;
    let mut out = Jet1::zero(valid);
    for t in v.get("terms")?.as_array()? {
        let k = u32::try_from(t.get(0)?.as_u64()?).ok()?;
        out.set(k, scalar_from_json(t.get(1)?)?);
    }
    Some(out)
}

pub fn field_from_json<S: Scalar>(v: &Value) -> Option<VectorFieldGerm<S>> {
    Some(VectorFieldGerm::new(jet2_from_json(v.get("a")?)?, jet2_from_json(v.get("b")?)?))
}

/// Structural check of the top-level keys and their types.
pub fn validate(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report is not an object")?;
    if obj.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(format!("schema must be {SCHEMA}"));
    }
    for key in ["command", "status"] {
        obj.get(key).and_then(Value::as_str).ok_or(format!("missing string '{key}'"))?;
    }
    if !matches!(obj["status"].as_str(), Some("pass" | "fail" | "error")) {
        return Err("status must be pass, fail or error".into());
    }
    obj.get("args").and_then(Value::as_array).ok_or("missing array 'args'")?;
    let cfg = obj.get("config").and_then(Value::as_object).ok_or("missing object 'config'")?;
    cfg.get("degree").and_then(Value::as_u64).ok_or("config.degree must be an integer")?;
    cfg.get("mode").and_then(Value::as_str).ok_or("config.mode must be a string")?;
    cfg.get("tol").and_then(Value::as_str).ok_or("config.tol must be a decimal string")?;
    for key in ["result", "diagnostics"] {
        obj.get(key).and_then(Value::as_object).ok_or(format!("missing object '{key}'"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use germforge::GaussRat as Q;

    #[test]
    fn exact_jets_round_trip() {
        let j = Jet2::<Q>::from_terms(5, [(1, 2, Q::from_ratio(-7, 3) + Q::imag_unit() * Q::from_ratio(1, 9)), (0, 0, Q::from_i64(4))]);
        let text = serde_json::to_string(&jet2(&j)).unwrap();
        let back: Jet2<Q> = jet2_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn float_jets_round_trip() {
        let j = Jet1::<C64>::from_coeffs(vec![C64::new(0.1, -1e-300), C64::new(std::f64::consts::PI, 0.0)], 3);
        let back: Jet1<C64> = jet1_from_json(&jet1(&j)).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn report_shape() {
        let mut r = Report::new("bracket", vec!["[x,0]".into()], Config { degree: 8, mode: "exact", tol: 1e-10 });
        r.put("zero", json!(true));
        validate(&r.to_json()).unwrap();
        r.error("boom");
        assert_eq!(r.to_json()["status"], "error");
        assert!(validate(&json!({"schema": "other"})).is_err());
    }
}
