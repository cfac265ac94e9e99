use std::collections::BTreeMap;
use std::fmt;

use isoflow_core::semigroups::grid_steps;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    /// Non-negative integer within `[min, max]`.
    Count { min: usize, max: usize },
    Bool,
    /// List of non-negative real times.
    Times,
    Choice(&'static [&'static str]),
}

/// One entry of a construction's parameter schema. `default` is a TOML
/// literal; `None` marks the parameter as required.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

pub const fn count(name: &'static str, min: usize, max: usize, default: Option<&'static str>, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Count { min, max },
        default,
        help,
    }
}

pub const fn times(name: &'static str, default: Option<&'static str>, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Times,
        default,
        help,
    }
}

pub const fn flag(name: &'static str, default: Option<&'static str>, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Bool,
        default,
        help,
    }
}

pub const fn choice(
    name: &'static str,
    options: &'static [&'static str],
    default: Option<&'static str>,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Choice(options),
        default,
        help,
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Count { min, max } => write!(f, "integer {min}..={max}"),
            Kind::Bool => write!(f, "bool"),
            Kind::Times => write!(f, "list of times (multiples of 1/m)"),
            Kind::Choice(opts) => write!(f, "one of {}", opts.join("|")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Count(usize),
    Bool(bool),
    Times(Vec<f64>),
    Choice(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Count(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Times(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| format!("{t}")).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Value::Choice(s) => write!(f, "{s}"),
        }
    }
}

/// Resolved parameters of one scenario, in schema order.
#[derive(Clone, Debug, Default)]
pub struct Params {
    values: Vec<(&'static str, Value)>,
}

fn parse_literal(lit: &str) -> toml::Value {
    let table: toml::Table = format!("v = {lit}").parse().expect("schema defaults are valid TOML");
    table["v"].clone()
}

fn convert(spec: &ParamSpec, raw: &toml::Value) -> Result<Value, String> {
    match spec.kind {
        Kind::Count { min, max } => {
            let v = raw.as_integer().ok_or("expected an integer")?;
            if v < min as i64 || v > max as i64 {
                return Err(format!("{v} is outside {min}..={max}"));
            }
            Ok(Value::Count(v as usize))
        }
        Kind::Bool => raw.as_bool().map(Value::Bool).ok_or_else(|| "expected true or false".into()),
        Kind::Times => {
            let arr = raw.as_array().ok_or("expected an array of times")?;
            let mut out = Vec::with_capacity(arr.len());
            for item in arr {
                let t = item
                    .as_float()
                    .or_else(|| item.as_integer().map(|i| i as f64))
                    .ok_or("times must be numbers")?;
                if !(t.is_finite() && t >= 0.0) {
                    return Err(format!("time {t} must be finite and non-negative"));
                }
                out.push(t);
            }
            Ok(Value::Times(out))
        }
        Kind::Choice(options) => {
            let s = raw.as_str().ok_or("expected a string")?;
            if !options.contains(&s) {
                return Err(format!("\"{s}\" is not one of {}", options.join("|")));
            }
            Ok(Value::Choice(s.to_string()))
        }
    }
}

impl Params {
    /// Validates `raw` against `schema`, filling defaults; unknown keys are
    /// rejected.
    pub fn resolve(scenario: &str, schema: &[ParamSpec], raw: &BTreeMap<String, toml::Value>) -> Result<Params, CliError> {
        for key in raw.keys() {
            if !schema.iter().any(|s| s.name == key) {
                return Err(CliError::Config(format!("[{scenario}]: unknown parameter `{key}`")));
            }
        }
        let mut values = Vec::with_capacity(schema.len());
        for spec in schema {
            let lit;
            let value = match (raw.get(spec.name), spec.default) {
                (Some(v), _) => v,
                (None, Some(d)) => {
                    lit = parse_literal(d);
                    &lit
                }
                (None, None) => {
                    return Err(CliError::Config(format!("[{scenario}]: missing parameter `{}`", spec.name)));
                }
            };
            let v = convert(spec, value)
                .map_err(|e| CliError::Config(format!("[{scenario}]: parameter `{}`: {e}", spec.name)))?;
            values.push((spec.name, v));
        }
        Ok(Params { values })
    }

    fn get(&self, name: &str) -> &Value {
        &self
            .values
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap_or_else(|| panic!("parameter `{name}` is not in the schema"))
            .1
    }

    pub fn count(&self, name: &str) -> usize {
        match self.get(name) {
            Value::Count(v) => *v,
            other => panic!("parameter `{name}` is {other:?}, not a count"),
        }
    }

    pub fn flag(&self, name: &str) -> bool {
        match self.get(name) {
            Value::Bool(v) => *v,
            other => panic!("parameter `{name}` is {other:?}, not a bool"),
        }
    }

    pub fn choice(&self, name: &str) -> &str {
        match self.get(name) {
            Value::Choice(v) => v,
            other => panic!("parameter `{name}` is {other:?}, not a choice"),
        }
    }

    /// Times converted to grid steps of width `1/m`.
    pub fn steps(&self, name: &str, m: usize) -> Result<Vec<usize>, CliError> {
        match self.get(name) {
            Value::Times(ts) => ts
                .iter()
                .map(|&t| grid_steps(t, m).map_err(|e| CliError::Config(format!("parameter `{name}`: {e}"))))
                .collect(),
            other => panic!("parameter `{name}` is {other:?}, not a time list"),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Value)> {
        self.values.iter().map(|(n, v)| (*n, v))
    }
}
