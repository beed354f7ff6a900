//! JSON model files for systems, maps and steps. Rationals are written as
//! `"p/q"` strings; plain integers and exact decimals are accepted too.
//!
//! ```json
//! {"states": ["A", "B"], "entropy": {"A": "1/2", "B": "1"}}
//! {"line": "reals", "entropy": "identity", "grid_n": 30}
//! {"elements": ["a", "b", "t"], "pairs": [["a", "t"], ["b", "t"]]}
//! {"map": {"A": "X", "B": "X"}}
//! {"expr": ["compose", ["affine", "3", "0"], ["ceil_div", 3]], "scaling_exponent": "1"}
//! {"steps": [["1", "6/5"], ["29/10", "31/10"]]}
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::entropy::{EntropySystem, LineEntropy, ScalingAction};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::galois::{MonotoneMap, Rule};
use crate::poset::{FiniteOrder, LineKind, DEFAULT_GRID_N};
use crate::rational::{self, Rational};
use crate::space::Space;
use crate::transfer::ProcessStep;

/// Overrides the probe-grid bound on lines whose file has no `grid_n`.
pub const GRID_ENV: &str = "ENTROPY_ADJOINT_GRID_N";

/// `grid_n` taken from the environment, or the default.
pub fn default_grid_n() -> Result<u32> {
    match std::env::var(GRID_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Invalid(format!("{GRID_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_GRID_N),
    }
}

fn field_error(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { location: path.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| field_error(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| field_error(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| field_error(path, "expected a string"))
}

fn rational_at(v: &Value, path: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(field_error(path, "expected a rational such as \"3/2\"")),
    };
    rational::parse(&text).map_err(|e| field_error(path, e.to_string()))
}

fn labels_at(v: &Value, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| string(s, &format!("{path}[{i}]")).map(str::to_string))
        .collect()
}

/// A system or plain order from its JSON value.
pub fn space_from_value(v: &Value) -> Result<Space> {
    let obj = object(v, "$")?;
    if let Some(kind) = obj.get("line") {
        let kind = match string(kind, "line")? {
            "reals" => LineKind::Reals,
            "naturals" => LineKind::Naturals,
            other => return Err(field_error("line", format!("unknown line `{other}`"))),
        };
        let entropy = match obj.get("entropy") {
            None => LineEntropy::Identity,
            Some(e) => LineEntropy::parse(string(e, "entropy")?).map_err(|e| field_error("entropy", e.to_string()))?,
        };
        let grid_n = match obj.get("grid_n") {
            None => default_grid_n()?,
            Some(n) => n
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| field_error("grid_n", "expected a positive integer"))?,
        };
        return Ok(EntropySystem::numeric_line(kind, entropy, grid_n).into());
    }
    if let Some(states) = obj.get("states") {
        let states = labels_at(states, "states")?;
        let entropy = object(obj.get("entropy").ok_or_else(|| field_error("entropy", "missing"))?, "entropy")?;
        let mut table = Vec::with_capacity(entropy.len());
        for (k, val) in entropy {
            table.push((k.clone(), rational_at(val, &format!("entropy.{k}"))?));
        }
        let table: Vec<(String, Rational)> = table;
        let sys = EntropySystem::from_table(&states, &table)?;
        let sys = match obj.get("scaling") {
            None => sys,
            Some(s) => {
                let action = scaling_from_value(&sys, &states, s)?;
                sys.with_scaling(action)?
            }
        };
        return Ok(sys.into());
    }
    if let Some(elements) = obj.get("elements") {
        let elements = labels_at(elements, "elements")?;
        let mut pairs = Vec::new();
        if let Some(p) = obj.get("pairs") {
            for (i, pair) in array(p, "pairs")?.iter().enumerate() {
                let path = format!("pairs[{i}]");
                let pair = array(pair, &path)?;
                if pair.len() != 2 {
                    return Err(field_error(&path, "expected [lower, upper]"));
                }
                pairs.push((
                    string(&pair[0], &path)?.to_string(),
                    string(&pair[1], &path)?.to_string(),
                ));
            }
        }
        return Ok(FiniteOrder::build(&elements, &pairs)?.into());
    }
    Err(field_error("$", "expected one of `line`, `states` or `elements`"))
}

fn scaling_from_value(sys: &EntropySystem, states: &[String], v: &Value) -> Result<ScalingAction> {
    match v {
        Value::String(s) if s == "trivial" => Ok(ScalingAction::Trivial),
        Value::Object(obj) if obj.contains_key("extensive") => {
            let lambdas = array(&obj["extensive"], "scaling.extensive")?
                .iter()
                .enumerate()
                .map(|(i, l)| rational_at(l, &format!("scaling.extensive[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            sys.extensive_table(&lambdas)
        }
        Value::Object(obj) => {
            let mut table = BTreeMap::new();
            for (lam, row) in obj {
                let path = format!("scaling.{lam}");
                let lambda = rational::parse(lam).map_err(|e| field_error(&path, e.to_string()))?;
                let row = object(row, &path)?;
                let mut out = vec![None; states.len()];
                for (from, to) in row {
                    let i = index_in(states, from, &path)?;
                    out[i] = match to {
                        Value::Null => None,
                        other => Some(index_in(states, string(other, &format!("{path}.{from}"))?, &path)?),
                    };
                }
                table.insert(lambda, out);
            }
            Ok(ScalingAction::Table(table))
        }
        _ => Err(field_error("scaling", "expected \"trivial\", {\"extensive\": [...]} or a table")),
    }
}

fn index_in(states: &[String], label: &str, path: &str) -> Result<usize> {
    states
        .iter()
        .position(|s| s == label)
        .ok_or_else(|| field_error(path, format!("unknown element `{label}`")))
}

pub fn load_space(path: &Path) -> Result<Arc<Space>> {
    Ok(Arc::new(space_from_value(&read_json(path)?)?))
}

pub fn expr_from_value(v: &Value, path: &str) -> Result<Expr> {
    let items = array(v, path)?;
    let head = items.first().ok_or_else(|| field_error(path, "empty expression"))?;
    let head = string(head, &format!("{path}[0]"))?;
    let arity = |n: usize| -> Result<()> {
        if items.len() == n + 1 {
            Ok(())
        } else {
            Err(field_error(path, format!("`{head}` takes {n} argument(s)")))
        }
    };
    let arg = |i: usize| rational_at(&items[i], &format!("{path}[{i}]"));
    let expr = match head {
        "identity" => {
            arity(0)?;
            Expr::identity()
        }
        "scale" => {
            arity(1)?;
            Expr::scale(arg(1)?)
        }
        "affine" => {
            arity(2)?;
            Expr::affine(arg(1)?, arg(2)?)
        }
        "floor_div" => {
            arity(1)?;
            Expr::FloorDiv(arg(1)?)
        }
        "ceil_div" => {
            arity(1)?;
            Expr::CeilDiv(arg(1)?)
        }
        "const" => {
            arity(1)?;
            Expr::Const(arg(1)?)
        }
        "compose" => {
            arity(2)?;
            Expr::compose(
                expr_from_value(&items[1], &format!("{path}[1]"))?,
                expr_from_value(&items[2], &format!("{path}[2]"))?,
            )
        }
        other => return Err(field_error(path, format!("unknown expression `{other}`"))),
    };
    expr.validate().map_err(|e| field_error(path, e.to_string()))?;
    Ok(expr)
}

pub fn expr_to_value(e: &Expr) -> Value {
    let r = |q: &Rational| Value::String(rational::format(q));
    match e {
        Expr::Affine { a, b } => json!(["affine", r(a), r(b)]),
        Expr::FloorDiv(k) => json!(["floor_div", r(k)]),
        Expr::CeilDiv(k) => json!(["ceil_div", r(k)]),
        Expr::Const(c) => json!(["const", r(c)]),
        Expr::Compose(o, i) => json!(["compose", expr_to_value(o), expr_to_value(i)]),
    }
}

pub fn map_from_value(v: &Value, source: Arc<Space>, target: Arc<Space>) -> Result<MonotoneMap> {
    let obj = object(v, "$")?;
    let map = if let Some(m) = obj.get("map") {
        let m = object(m, "map")?;
        let mut pairs = Vec::with_capacity(m.len());
        for (k, val) in m {
            pairs.push((k.clone(), string(val, &format!("map.{k}"))?.to_string()));
        }
        MonotoneMap::from_pairs(source, target, &pairs)?
    } else if let Some(e) = obj.get("expr") {
        MonotoneMap::expr(source, target, expr_from_value(e, "expr")?)?
    } else {
        return Err(field_error("$", "expected `map` or `expr`"));
    };
    Ok(match obj.get("scaling_exponent") {
        None => map,
        Some(a) => {
            let a = rational_at(a, "scaling_exponent")?;
            if a == Rational::from_integer(0.into()) {
                return Err(field_error("scaling_exponent", "must be nonzero"));
            }
            map.with_scaling_exponent(a)
        }
    })
}

pub fn load_map(path: &Path, source: Arc<Space>, target: Arc<Space>) -> Result<MonotoneMap> {
    map_from_value(&read_json(path)?, source, target)
}

/// The JSON form read by [`map_from_value`]; table entries follow source order.
pub fn map_to_value(map: &MonotoneMap) -> Value {
    let mut out = Map::new();
    match map.rule() {
        Rule::Expr(e) => {
            out.insert("expr".into(), expr_to_value(e));
        }
        Rule::Table(t) => {
            let (s, d) = (map.source().finite_order().unwrap(), map.target().finite_order().unwrap());
            let entries: Map<String, Value> = t
                .iter()
                .enumerate()
                .map(|(i, &j)| (s.label(i).to_string(), Value::String(d.label(j).to_string())))
                .collect();
            out.insert("map".into(), Value::Object(entries));
        }
    }
    if let Some(a) = map.scaling_exponent() {
        out.insert("scaling_exponent".into(), Value::String(rational::format(a)));
    }
    Value::Object(out)
}

pub fn steps_from_value(v: &Value, system: Arc<Space>) -> Result<Vec<ProcessStep>> {
    let obj = object(v, "$")?;
    let steps = array(obj.get("steps").ok_or_else(|| field_error("steps", "missing"))?, "steps")?;
    steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let path = format!("steps[{i}]");
            let pair = array(s, &path)?;
            if pair.len() != 2 {
                return Err(field_error(&path, "expected [pre, post]"));
            }
            let text = |v: &Value| -> Result<String> {
                match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(field_error(&path, "expected a state")),
                }
            };
            ProcessStep::parse(system.clone(), &text(&pair[0])?, &text(&pair[1])?)
                .map_err(|e| field_error(&path, e.to_string()))
        })
        .collect()
}

pub fn load_steps(path: &Path, system: Arc<Space>) -> Result<Vec<ProcessStep>> {
    steps_from_value(&read_json(path)?, system)
}
