use std::io::{self, Write};

use serde_json::{Map, Number, Value};

use qdeform::algebra::{CasimirReport, RelationResidual};
use qdeform::ladder::Window;

/// 17 significant digits; NaN and infinities spelled out.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => s,
        }
    }
}

/// JSON number carrying the same 17 digits as [`fmt_num`]; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt_num(x).parse::<Number>().expect("scientific notation is valid JSON"))
    } else {
        Value::Null
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

pub fn params(list: &[(&str, f64)]) -> Value {
    Value::Object(list.iter().map(|(k, v)| (k.to_string(), num(*v))).collect())
}

pub fn window(w: Window) -> Value {
    let mut m = Map::new();
    m.insert("n0".into(), w.n0.into());
    m.insert("dim".into(), w.dim.into());
    Value::Object(m)
}

pub fn relation(r: &RelationResidual) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), r.name.clone().into());
    m.insert("equation".into(), r.equation.clone().into());
    m.insert("max_residual".into(), num(r.max_residual));
    m.insert("scale".into(), num(r.scale));
    m.insert("pass".into(), r.pass.into());
    Value::Object(m)
}

pub fn casimir(c: &CasimirReport, tolerance: f64) -> Value {
    let mut m = Map::new();
    m.insert("eigenvalues".into(), nums(&c.eigenvalues));
    m.insert("centrality_residual".into(), num(c.centrality_residual));
    m.insert("centrality_scale".into(), num(c.centrality_scale));
    m.insert("spread".into(), num(c.spread));
    m.insert("eigenvalue_scale".into(), num(c.eigenvalue_scale));
    m.insert("pass".into(), c.pass(tolerance).into());
    Value::Object(m)
}

/// Builds a JSON object from key/value pairs, keeping their order.
pub fn object<const N: usize>(entries: [(&str, Value); N]) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn write_json(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

pub fn write_csv<R, S>(out: &mut dyn Write, header: &[&str], rows: R) -> io::Result<()>
where
    R: IntoIterator<Item = Vec<S>>,
    S: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}
