//! Jobs, the job-file grammar, dispatch to the engine and output rendering.
//!
//! A job file is either one JSON object or a list of `key = value` lines.
//! Values that look like JSON (`[`, `{`, `"`, numbers, `true`/`false`) are
//! decoded as JSON and may continue over several lines; anything else is
//! taken as raw text. `#` starts a comment outside quoted strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arrange::{crossing_path_from, enumerate_regions, groupoid_check, walls, Arrangement};
use crate::error::{Error, Result};
use crate::geom::{
    equivariant_roots, fixed_points, kahler_arrangement, kahler_roots, root_arrangement, tangent_weights, Geometry,
};
use crate::heis::{heisenberg_check, DynamicalWalls};
use crate::qconn::{connection_check, quantum_mult};
use crate::ring::qserde::{parse_q, q_to_string};
use crate::ring::{idx, parse_ratfunc, Matrix, RationalFunction, Q};
use crate::rmat::{r_between, two_site_r, unitarity_holds, wall_factorization_check, yang_baxter_check, TensorWalls};
use crate::stab::{jump_scan, stab_solve, Chamber, Mode, Polarization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FixedPoints,
    Roots,
    Arrangement,
    Alcoves,
    Path,
    Stab,
    JumpScan,
    Rmatrix,
    YbCheck,
    WallCheck,
    Qmult,
    ConnectionCheck,
    HeisenbergCheck,
    GroupoidCheck,
}

impl Command {
    pub const ALL: [Command; 14] = [
        Command::FixedPoints,
        Command::Roots,
        Command::Arrangement,
        Command::Alcoves,
        Command::Path,
        Command::Stab,
        Command::JumpScan,
        Command::Rmatrix,
        Command::YbCheck,
        Command::WallCheck,
        Command::Qmult,
        Command::ConnectionCheck,
        Command::HeisenbergCheck,
        Command::GroupoidCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::FixedPoints => "fixed-points",
            Command::Roots => "roots",
            Command::Arrangement => "arrangement",
            Command::Alcoves => "alcoves",
            Command::Path => "path",
            Command::Stab => "stab",
            Command::JumpScan => "jump-scan",
            Command::Rmatrix => "rmatrix",
            Command::YbCheck => "yb-check",
            Command::WallCheck => "wall-check",
            Command::Qmult => "qmult",
            Command::ConnectionCheck => "connection-check",
            Command::HeisenbergCheck => "heisenberg-check",
            Command::GroupoidCheck => "groupoid-check",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Accepted parameters and whether each is required.
    pub fn schema(self) -> &'static [(&'static str, Kind, bool)] {
        use Kind::*;
        const GEOM: [(&str, Kind, bool); 3] = [("family", Text, true), ("k", Int, false), ("n", Int, true)];
        match self {
            Command::FixedPoints | Command::Roots => &GEOM,
            Command::Arrangement | Command::Alcoves => {
                &[("family", Text, true), ("k", Int, false), ("n", Int, true), ("kind", Text, false), ("window", Rats, false)]
            }
            Command::Path => &[
                ("family", Text, false),
                ("k", Int, false),
                ("n", Int, false),
                ("kind", Text, false),
                ("window", Rats, false),
                ("arrangement", Text, false),
                ("from", Rats, true),
                ("shift", Rats, true),
            ],
            Command::Stab => &[
                ("family", Text, true),
                ("k", Int, false),
                ("n", Int, true),
                ("chamber", Text, false),
                ("mode", Text, false),
                ("slope", Rat, false),
                ("polarization", Text, false),
            ],
            Command::JumpScan => &[
                ("family", Text, true),
                ("k", Int, false),
                ("n", Int, true),
                ("chamber", Text, false),
                ("polarization", Text, false),
                ("interval", Rats, true),
                ("max-den", Int, false),
            ],
            Command::Rmatrix | Command::WallCheck => &[
                ("family", Text, true),
                ("k", Int, false),
                ("n", Int, true),
                ("chamber", Text, false),
                ("target", Text, false),
                ("polarization", Text, false),
            ],
            Command::YbCheck => &[
                ("family", Text, false),
                ("k", Int, false),
                ("n", Int, false),
                ("polarization", Text, false),
                ("r", Json, false),
            ],
            Command::Qmult => &[
                ("family", Text, true),
                ("k", Int, false),
                ("n", Int, true),
                ("lambda", Rat, false),
                ("kappa", Bool, false),
                ("z-symbolic", Bool, false),
                ("z", Rat, false),
            ],
            Command::ConnectionCheck => &[
                ("family", Text, true),
                ("k", Int, false),
                ("n", Int, true),
                ("lambdas", Rats, false),
                ("kappa", Bool, false),
            ],
            Command::HeisenbergCheck => &[("N", Int, true), ("identities", Text, false)],
            Command::GroupoidCheck => &[
                ("family", Text, false),
                ("k", Int, false),
                ("n", Int, false),
                ("N", Int, false),
                ("walls", Text, false),
                ("window", Rats, false),
                ("polarization", Text, false),
                ("arrangement", Text, false),
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Int,
    Text,
    Rat,
    Rats,
    Bool,
    Json,
}

/// A validated parameter value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Text(String),
    #[serde(serialize_with = "ser_q")]
    Rat(Q),
    #[serde(serialize_with = "ser_qs")]
    Rats(Vec<Q>),
    Bool(bool),
    Json(Value),
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q_to_string(x))
}

fn ser_qs<S: serde::Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::ring::qserde::vec::serialize(x, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Job {
    pub command: Command,
    pub params: BTreeMap<String, Param>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// A raw value before it is checked against the schema.
#[derive(Clone, Debug)]
pub enum Raw {
    Text(String),
    Json(Value),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub value: Raw,
    pub line: usize,
    pub column: usize,
}

fn looks_like_json(v: &str) -> bool {
    let c = v.chars().next().unwrap_or(' ');
    matches!(c, '[' | '{' | '"') || v == "true" || v == "false" || serde_json::from_str::<serde_json::Number>(v).is_ok()
}

/// Drop a trailing `#` comment that is not inside a quoted string.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn json_error(e: &serde_json::Error, line: usize, column: usize) -> Error {
    let (l, c) = (e.line(), e.column());
    let column = if l <= 1 { column + c.saturating_sub(1) } else { c };
    Error::parse((line + l.saturating_sub(1)).max(1), column.max(1), e.to_string())
}

fn lex_lines(text: &str) -> Result<Vec<Entry>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let body = strip_comment(lines[i]);
        i += 1;
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(Error::parse(lineno, col, "expected `key = value`"));
        };
        let key = body[..eq].trim();
        let key_col = body.len() - body.trim_start().len() + 1;
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::parse(lineno, key_col, format!("invalid key `{key}`")));
        }
        let rest = &body[eq + 1..];
        let value = rest.trim();
        let vcol = eq + 2 + (rest.len() - rest.trim_start().len());
        let raw = if looks_like_json(value) {
            let mut buf = value.to_string();
            loop {
                match serde_json::from_str::<Value>(&buf) {
                    Ok(v) => break Raw::Json(v),
                    Err(e) if e.is_eof() && i < lines.len() => {
                        buf.push('\n');
                        buf.push_str(strip_comment(lines[i]));
                        i += 1;
                    }
                    Err(e) => return Err(json_error(&e, lineno, vcol)),
                }
            }
        } else {
            Raw::Text(value.to_string())
        };
        out.push(Entry {
            key: key.to_string(),
            value: raw,
            line: lineno,
            column: key_col,
        });
    }
    Ok(out)
}

fn lex_json(text: &str) -> Result<Vec<Entry>> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_error(&e, 1, 1))?;
    let Value::Object(map) = v else {
        return Err(Error::parse(1, 1, "job must be a JSON object"));
    };
    let mut out = Vec::new();
    for (k, v) in map {
        match (k.as_str(), v) {
            ("params", Value::Object(inner)) => {
                for (k2, v2) in inner {
                    out.push(Entry { key: k2, value: Raw::Json(v2), line: 1, column: 1 });
                }
            }
            (_, v) => out.push(Entry { key: k, value: Raw::Json(v), line: 1, column: 1 }),
        }
    }
    Ok(out)
}

fn required_keys(cmd: Option<Command>) -> String {
    let mut keys = vec!["command".to_string()];
    if let Some(c) = cmd {
        keys.extend(c.schema().iter().filter(|s| s.2).map(|s| s.0.to_string()));
    }
    keys.join(", ")
}

/// Parse a job file.
pub fn parse_config(text: &str) -> Result<Job> {
    let trimmed = text.trim_start();
    let entries = if trimmed.starts_with('{') { lex_json(text)? } else { lex_lines(text)? };
    if entries.is_empty() {
        return Err(Error::Usage(format!("empty job; required keys: {}", required_keys(None))));
    }
    Job::from_entries(entries)
}

fn convert(kind: Kind, raw: &Raw) -> std::result::Result<Param, String> {
    let rat_of = |v: &Value| -> std::result::Result<Q, String> {
        match v {
            Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap_or(0).into())),
            Value::String(s) => parse_q(s).map_err(|e| e.to_string()),
            other => Err(format!("expected a rational, got {other}")),
        }
    };
    match (kind, raw) {
        (Kind::Int, Raw::Json(Value::Number(n))) => n.as_i64().map(Param::Int).ok_or_else(|| format!("expected an integer, got {n}")),
        (Kind::Int, Raw::Text(s)) => s.trim().parse().map(Param::Int).map_err(|_| format!("expected an integer, got `{s}`")),
        (Kind::Text, Raw::Json(Value::String(s))) | (Kind::Text, Raw::Text(s)) => Ok(Param::Text(s.clone())),
        (Kind::Text, Raw::Json(Value::Number(n))) => Ok(Param::Text(n.to_string())),
        (Kind::Rat, Raw::Json(v)) => rat_of(v).map(Param::Rat),
        (Kind::Rat, Raw::Text(s)) => parse_q(s.trim()).map(Param::Rat).map_err(|e| e.to_string()),
        (Kind::Rats, Raw::Json(Value::Array(a))) => a.iter().map(rat_of).collect::<std::result::Result<_, _>>().map(Param::Rats),
        (Kind::Rats, Raw::Json(v @ (Value::Number(_) | Value::String(_)))) => match v {
            Value::String(s) => convert(Kind::Rats, &Raw::Text(s.clone())),
            _ => rat_of(v).map(|x| Param::Rats(vec![x])),
        },
        (Kind::Rats, Raw::Text(s)) => {
            let body = s.trim().trim_start_matches('[').trim_end_matches(']');
            body.split(',').map(|x| parse_q(x.trim()).map_err(|e| e.to_string())).collect::<std::result::Result<_, _>>().map(Param::Rats)
        }
        (Kind::Bool, Raw::Json(Value::Bool(b))) => Ok(Param::Bool(*b)),
        (Kind::Bool, Raw::Text(s)) => match s.trim() {
            "" | "true" | "yes" | "1" => Ok(Param::Bool(true)),
            "false" | "no" | "0" => Ok(Param::Bool(false)),
            _ => Err(format!("expected a boolean, got `{s}`")),
        },
        (Kind::Json, Raw::Json(v)) => Ok(Param::Json(v.clone())),
        (Kind::Json, Raw::Text(s)) => serde_json::from_str(s).map(Param::Json).map_err(|e| e.to_string()),
        (_, Raw::Json(v)) => Err(format!("unexpected value {v}")),
    }
}

impl Job {
    pub fn from_entries(entries: Vec<Entry>) -> Result<Job> {
        let mut seen: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for e in &entries {
            if seen.insert(e.key.clone(), (e.line, e.column)).is_some() {
                return Err(Error::parse(e.line, e.column, format!("duplicate key `{}`", e.key)));
            }
        }
        let Some(cmd_entry) = entries.iter().find(|e| e.key == "command") else {
            return Err(Error::Usage(format!("missing key `command`; required keys: {}", required_keys(None))));
        };
        let name = match &cmd_entry.value {
            Raw::Text(s) | Raw::Json(Value::String(s)) => s.clone(),
            Raw::Json(v) => v.to_string(),
        };
        let command = Command::parse(name.trim()).ok_or_else(|| {
            let all: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
            Error::parse(cmd_entry.line, cmd_entry.column, format!("unknown command `{name}`; expected one of {}", all.join(", ")))
        })?;
        let schema = command.schema();
        let mut params = BTreeMap::new();
        let mut output = None;
        for e in &entries {
            match e.key.as_str() {
                "command" => {}
                "output" => match &e.value {
                    Raw::Text(s) | Raw::Json(Value::String(s)) => output = Some(s.clone()),
                    _ => return Err(Error::parse(e.line, e.column, "`output` must be a path")),
                },
                key => {
                    let Some(&(_, kind, _)) = schema.iter().find(|s| s.0 == key) else {
                        return Err(Error::parse(e.line, e.column, format!("unknown key `{key}` for command {}", command.name())));
                    };
                    let p = convert(kind, &e.value).map_err(|m| Error::parse(e.line, e.column, format!("key `{key}`: {m}")))?;
                    params.insert(key.to_string(), p);
                }
            }
        }
        let missing: Vec<&str> = schema.iter().filter(|s| s.2 && !params.contains_key(s.0)).map(|s| s.0).collect();
        if !missing.is_empty() {
            return Err(Error::Usage(format!(
                "{} is missing {}; required keys: {}",
                command.name(),
                missing.join(", "),
                required_keys(Some(command))
            )));
        }
        Ok(Job { command, params, output })
    }

    /// A job from command-line flags given as text.
    pub fn from_flags(command: Command, flags: Vec<(String, String)>) -> Result<Job> {
        let mut entries = vec![Entry {
            key: "command".into(),
            value: Raw::Text(command.name().into()),
            line: 0,
            column: 0,
        }];
        entries.extend(flags.into_iter().map(|(k, v)| Entry {
            key: k,
            value: Raw::Text(v),
            line: 0,
            column: 0,
        }));
        Job::from_entries(entries).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Usage(message),
            other => other,
        })
    }

    fn int(&self, key: &str) -> Option<i64> {
        match self.params.get(key) {
            Some(Param::Int(x)) => Some(*x),
            _ => None,
        }
    }

    fn size(&self, key: &str) -> Result<Option<usize>> {
        self.int(key)
            .map(|x| usize::try_from(x).map_err(|_| Error::Usage(format!("`{key}` must be non-negative"))))
            .transpose()
    }

    fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key) {
            Some(Param::Text(s)) => Some(s.as_str()),
            _ => None,
        }
    }

    fn rat(&self, key: &str) -> Option<&Q> {
        match self.params.get(key) {
            Some(Param::Rat(x)) => Some(x),
            _ => None,
        }
    }

    fn rats(&self, key: &str) -> Option<&[Q]> {
        match self.params.get(key) {
            Some(Param::Rats(x)) => Some(x),
            _ => None,
        }
    }

    fn flag(&self, key: &str) -> Option<bool> {
        match self.params.get(key) {
            Some(Param::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    fn geometry(&self) -> Result<Geometry> {
        let family = self.text("family").unwrap_or("tgr");
        let n = self.size("n")?.ok_or_else(|| Error::Usage("missing `n`".into()))?;
        let g = match family {
            "tgr" => Geometry::Tgr {
                k: self.size("k")?.ok_or_else(|| Error::Usage("family tgr needs `k`".into()))?,
                n,
            },
            "hilb" => Geometry::Hilb { n },
            "tgr-union" => Geometry::TgrUnion { n },
            other => return Err(Error::Usage(format!("unknown family `{other}`; expected tgr, hilb or tgr-union"))),
        };
        g.validate()?;
        Ok(g)
    }

    fn chamber(&self, key: &str, n: usize, default: &str) -> Result<Chamber> {
        Chamber::parse(self.text(key).unwrap_or(default), n)
    }

    fn polarization(&self) -> Result<Polarization> {
        match self.text("polarization").unwrap_or("base") {
            "base" => Ok(Polarization::Base),
            "dual" => Ok(Polarization::Dual),
            other => Err(Error::Usage(format!("unknown polarization `{other}`; expected base or dual"))),
        }
    }

    fn window(&self) -> Result<(Q, Q)> {
        match self.rats("window") {
            None => Ok((Q::from_integer(0.into()), Q::from_integer(1.into()))),
            Some([lo, hi]) => Ok((lo.clone(), hi.clone())),
            Some(_) => Err(Error::Usage("`window` takes two rationals lo,hi".into())),
        }
    }
}

fn framing(g: &Geometry) -> Result<usize> {
    g.framing().ok_or_else(|| Error::UnsupportedFamily("this command needs a Grassmannian family".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Report,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Report => 0,
            Status::Fail => 1,
        }
    }

    fn of(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Exit status for an error: 2 for bad input, 1 otherwise.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_)
        | Error::Parse { .. }
        | Error::InvalidLabel(_)
        | Error::InvalidChamber(_)
        | Error::InvalidArrangement(_)
        | Error::UnsupportedFamily(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub value: Value,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("engine types serialize")
}

fn conventions(pairs: &[(&str, String)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect())
}

fn data(mut v: Value, conv: Value) -> Outcome {
    if let Value::Object(m) = &mut v {
        m.insert("conventions".into(), conv);
    }
    Outcome { status: Status::Report, value: v }
}

fn certificate(claim: &str, status: Status, conv: Value, payload: Value) -> Outcome {
    Outcome {
        status,
        value: json!({ "claim": claim, "status": status, "conventions": conv, "payload": payload }),
    }
}

const ORDER: &str = "fixed points in enumeration order: subsets lexicographic, partitions reverse lexicographic";
const WEIGHTS: &str = "tangent weights a_i - a_j and hbar - (a_i - a_j) for i in S, j not in S";

fn chamber_text(c: &Chamber) -> String {
    c.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn family_params(job: &Job, g: &Geometry) -> Value {
    let family = job.text("family").unwrap_or("tgr");
    match *g {
        Geometry::Tgr { k, n } => json!({ "family": family, "params": { "k": k, "n": n } }),
        Geometry::Hilb { n } | Geometry::TgrUnion { n } => json!({ "family": family, "params": { "n": n } }),
    }
}

/// `I + u·E_{(1,2)}` on `ℂ² ⊗ ℂ²`: a synthetic wall matrix that breaks YB.
pub fn synthetic_hopping() -> Matrix {
    let u = RationalFunction::var(idx::U);
    Matrix::from_fn(4, 4, |i, j| {
        if i == j {
            RationalFunction::one()
        } else if (i, j) == (1, 2) {
            u.clone()
        } else {
            RationalFunction::zero()
        }
    })
}

fn matrix_from_json(v: &Value) -> Result<Matrix> {
    let bad = || Error::Usage("`r` must be a square array of rational-function strings".into());
    let rows = v.as_array().ok_or_else(bad)?;
    let parsed: Vec<Vec<RationalFunction>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_ratfunc(s),
                    Value::Number(n) => parse_ratfunc(&n.to_string()),
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = Matrix::from_rows(parsed)?;
    if !m.is_square() {
        return Err(bad());
    }
    Ok(m)
}

fn load_arrangement(path: &str) -> Result<Arrangement> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    Arrangement::from_json(&text)
}

fn arrangement_for(job: &Job, g: &Geometry) -> Result<Arrangement> {
    let default = if matches!(g, Geometry::Hilb { .. }) { "kahler" } else { "roots" };
    match job.text("kind").unwrap_or(default) {
        "roots" => root_arrangement(g),
        "kahler" => kahler_arrangement(g, job.window()?),
        other => Err(Error::Usage(format!("unknown arrangement kind `{other}`; expected roots or kahler"))),
    }
}

/// Execute a job.
pub fn run(job: &Job) -> Result<Outcome> {
    match job.command {
        Command::FixedPoints => {
            let g = job.geometry()?;
            let pts: Vec<Value> = fixed_points(&g)?
                .iter()
                .map(|p| Ok(json!({ "label": p.to_string(), "weights": to_value(&tangent_weights(&g, p)?.weights) })))
                .collect::<Result<_>>()?;
            let mut v = family_params(job, &g);
            v["fixed_points"] = Value::Array(pts);
            Ok(data(v, conventions(&[("order", ORDER.into()), ("weights", WEIGHTS.into())])))
        }
        Command::Roots => {
            let g = job.geometry()?;
            let eq: Value = match g {
                Geometry::Hilb { .. } => {
                    let mut ints: Vec<i64> = equivariant_roots(&g)?.iter().map(|w| w.coeff(idx::T1)).collect();
                    ints.sort();
                    to_value(&ints)
                }
                _ => to_value(&equivariant_roots(&g)?),
            };
            let mut v = family_params(job, &g);
            v["equivariant"] = eq;
            v["kahler"] = to_value(&kahler_roots(&g)?);
            let hilb = "Hilb roots restricted to t2 = -t1, as multiples of t1".to_string();
            Ok(data(v, conventions(&[("restriction", hilb), ("kahler", "multiples of the ample generator".into())])))
        }
        Command::Arrangement => {
            let g = job.geometry()?;
            let arr = arrangement_for(job, &g)?;
            Ok(data(json!({ "arrangement": arr }), conventions(&[("variables", "a1..an, or t1 for Hilb".into())])))
        }
        Command::Alcoves => {
            let g = job.geometry()?;
            let arr = kahler_arrangement(&g, job.window()?)?;
            let regions = enumerate_regions(&arr)?;
            let ws = walls(&arr, &regions)?;
            let (lo, hi) = job.window()?;
            let mut bounds: Vec<Q> = arr
                .expanded()
                .iter()
                .map(|h| &h.offset / &Q::from_integer(h.normal[0].into()))
                .filter(|x| x >= &lo && x <= &hi)
                .collect();
            bounds.sort();
            bounds.dedup();
            let bounds: Vec<String> = bounds.iter().map(q_to_string).collect();
            Ok(data(
                json!({ "boundaries": bounds, "regions": regions, "walls": ws }),
                conventions(&[("walls", "b x in Z for each positive Kahler root b".into())]),
            ))
        }
        Command::Path => {
            let arr = match job.text("arrangement") {
                Some(p) => load_arrangement(p)?,
                None => {
                    let g = job.geometry()?;
                    arrangement_for(job, &g)?
                }
            };
            let from = job.rats("from").unwrap_or_default();
            let shift = job.rats("shift").unwrap_or_default();
            let path = crossing_path_from(&arr, from, shift)?;
            Ok(data(
                json!({ "walls": path }),
                conventions(&[("order", "walls in the order crossed; start perturbed by (eps, eps^2, ...)".into())]),
            ))
        }
        Command::Stab => {
            let g = job.geometry()?;
            let n = framing(&g)?;
            let c = job.chamber("chamber", n, "+")?;
            let mode = match job.text("mode").unwrap_or("H") {
                "H" | "h" => Mode::H,
                "K" | "k" => Mode::K,
                other => return Err(Error::Usage(format!("unknown mode `{other}`; expected H or K"))),
            };
            if mode == Mode::K && job.rat("slope").is_none() {
                return Err(Error::Usage("K mode needs `slope`".into()));
            }
            let s = stab_solve(&g, &c, mode, job.rat("slope"), job.polarization()?)?;
            let conv = conventions(&[
                ("order", ORDER.into()),
                ("chamber", chamber_text(&c)),
                ("polarization", format!("{:?}", s.polarization).to_lowercase()),
                ("signs", "diagonal carries the polarization sign".into()),
            ]);
            Ok(data(to_value(&s), conv))
        }
        Command::JumpScan => {
            let g = job.geometry()?;
            let c = job.chamber("chamber", framing(&g)?, "+")?;
            let (lo, hi) = match job.rats("interval").unwrap_or_default() {
                [lo, hi] => (lo.clone(), hi.clone()),
                _ => return Err(Error::Usage("`interval` takes two rationals lo,hi".into())),
            };
            let max_den = job.size("max-den")?.unwrap_or(2) as u32;
            let r = jump_scan(&g, &c, job.polarization()?, (lo, hi), max_den)?;
            let status = if r.locally_constant { Status::Report } else { Status::Fail };
            let conv = conventions(&[("chamber", chamber_text(&c)), ("samples", "two slopes per alcove, at 1/3 and 2/3".into())]);
            Ok(certificate("jump-walls", status, conv, to_value(&r)))
        }
        Command::Rmatrix => {
            let g = job.geometry()?;
            let n = framing(&g)?;
            let c1 = job.chamber("chamber", n, "+")?;
            let c2 = job.chamber("target", n, "-")?;
            let r = r_between(&g, &c1, &c2, job.polarization()?)?;
            let conv = conventions(&[("order", ORDER.into()), ("definition", "R = Stab(target)^-1 Stab(chamber)".into())]);
            Ok(data(to_value(&r), conv))
        }
        Command::YbCheck => {
            if let Some(n) = job.size("n")? {
                if n != 3 {
                    return Err(Error::Usage("YB is checked on three tensor factors; use n = 3".into()));
                }
            }
            let (r, source) = match job.params.get("r") {
                Some(Param::Json(v)) => (matrix_from_json(v)?, "supplied".to_string()),
                _ => (two_site_r(job.polarization()?)?, "geometric, from T*Gr(k,2) over all k".to_string()),
            };
            let c = yang_baxter_check(&r)?;
            let conv = conventions(&[("source", source), ("spectral", "R_ij evaluated at u = a_i - a_j".into())]);
            Ok(certificate("YB", Status::of(c.passed()), conv, to_value(&c)))
        }
        Command::WallCheck => {
            let g = job.geometry()?;
            let n = framing(&g)?;
            let pol = job.polarization()?;
            let c1 = job.chamber("chamber", n, "+")?;
            let default_target = {
                let mut s = Chamber::standard(n).0;
                if n >= 2 {
                    s.swap(0, 1);
                }
                chamber_text(&Chamber(s))
            };
            let c2 = job.chamber("target", n, &default_target)?;
            let w = wall_factorization_check(&g, &c1, &c2, pol)?;
            let unitary = unitarity_holds(&g, &c1, &c2, pol)?;
            let status = Status::of(w.status == "pass" && unitary);
            let conv = conventions(&[("chamber", chamber_text(&c1)), ("target", chamber_text(&c2))]);
            Ok(certificate("wall-factorization", status, conv, json!({ "wall": w, "unitarity": unitary })))
        }
        Command::Qmult => {
            let g = job.geometry()?;
            let one = Q::from_integer(1.into());
            let lambda = job.rat("lambda").unwrap_or(&one);
            let mut p = quantum_mult(&g, lambda, job.flag("kappa").unwrap_or(false))?;
            if let Some(z) = job.rat("z") {
                if job.flag("z-symbolic") == Some(true) {
                    return Err(Error::Usage("`z` and `z-symbolic` are exclusive".into()));
                }
                let zv = RationalFunction::constant(z.clone());
                p.operator = p.operator.try_map(|x| x.substitute(idx::Z, &zv))?;
            }
            let conv = conventions(&[
                ("basis", "fixed-point idempotents".into()),
                ("casimir", "standard chamber, base polarization".into()),
                ("kappa", "z -> -z in the quantum part".into()),
            ]);
            Ok(data(to_value(&p), conv))
        }
        Command::ConnectionCheck => {
            let g = job.geometry()?;
            let default = [Q::from_integer(1.into())];
            let lambdas = job.rats("lambdas").unwrap_or(&default);
            let c = connection_check(&g, lambdas, job.flag("kappa").unwrap_or(false))?;
            let conv = conventions(&[
                ("basis", "fixed-point idempotents".into()),
                ("pairing", "diag(1 / e(T_p))".into()),
                ("connection", "eps z d/dz - M_lambda".into()),
            ]);
            Ok(certificate("quantum-connection", Status::of(c.status == "pass"), conv, to_value(&c)))
        }
        Command::HeisenbergCheck => {
            let n = job.size("N")?.unwrap_or(0);
            let ids = job.text("identities").unwrap_or("all");
            let groups: Vec<&str> = ids.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let r = heisenberg_check(n, &groups)?;
            let conv = to_value(&r.conventions);
            Ok(certificate("heisenberg", Status::of(r.status == "pass"), conv, to_value(&r)))
        }
        Command::GroupoidCheck => groupoid(job),
    }
}

fn groupoid(job: &Job) -> Result<Outcome> {
    let walls_kind = job.text("walls").unwrap_or("yang");
    let pol = job.polarization()?;
    let n = job.size("n")?.unwrap_or(3);
    let mut conv = vec![("walls", walls_kind.to_string()), ("base", "cycle compared from its first region".to_string())];
    let (cert, yb) = match walls_kind {
        "yang" | "hopping" => {
            let arr = match job.text("arrangement") {
                Some(p) => load_arrangement(p)?,
                None => root_arrangement(&Geometry::TgrUnion { n })?,
            };
            let r = if walls_kind == "yang" { two_site_r(pol)? } else { synthetic_hopping() };
            let yb = yang_baxter_check(&r)?;
            let cert = groupoid_check(&arr, &TensorWalls { r, d: 2, n: arr.dim })?;
            (cert, Some(yb))
        }
        "geometric" => {
            let g = Geometry::TgrUnion { n };
            let arr = root_arrangement(&g)?;
            (groupoid_check(&arr, &crate::rmat::GeometricWalls { geometry: g, polarization: pol })?, None)
        }
        "dynamical" => {
            let arr = match job.text("arrangement") {
                Some(p) => load_arrangement(p)?,
                None => kahler_arrangement(&Geometry::Hilb { n }, job.window()?)?,
            };
            let big_n = job.size("N")?.unwrap_or(4);
            conv.push(("truncation", big_n.to_string()));
            (groupoid_check(&arr, &DynamicalWalls { n: big_n })?, None)
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown wall assignment `{other}`; expected yang, hopping, geometric or dynamical"
            )))
        }
    };
    let consistent = yb.as_ref().map(|y| y.passed() == cert.passed());
    let status = Status::of(cert.passed());
    let payload = json!({ "groupoid": cert, "yb": yb, "consistent_with_yb": consistent });
    Ok(certificate("groupoid", status, conventions(&conv), payload))
}

/// Plain-text rendering of an output value.
pub fn render_human(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn table(rows: &[Value]) -> Option<Vec<Vec<String>>> {
    rows.iter()
        .map(|r| r.as_array().and_then(|cells| cells.iter().map(scalar).collect::<Option<Vec<_>>>()))
        .collect()
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if let Some(s) = scalar(x) {
                    let _ = writeln!(out, "{pad}{k}: {s}");
                } else if let Some(items) = x.as_array().and_then(|a| a.iter().map(scalar).collect::<Option<Vec<_>>>()) {
                    let _ = writeln!(out, "{pad}{k}: [{}]", items.join(", "));
                } else if let Some(t) = x.as_array().and_then(|a| table(a)).filter(|t| !t.is_empty()) {
                    let _ = writeln!(out, "{pad}{k}:");
                    let cols = t.iter().map(|r| r.len()).max().unwrap_or(0);
                    let widths: Vec<usize> = (0..cols)
                        .map(|c| t.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
                        .collect();
                    for r in &t {
                        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
                        let _ = writeln!(out, "{pad}  {}", cells.join("  "));
                    }
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render(x, indent + 2, out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(x, indent + 2, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_job() {
        let job = parse_config("# T*P1\ncommand = stab\nfamily = tgr\nk = 1\nn = 2  # two sites\nchamber = +\nmode = H\n").unwrap();
        assert_eq!(job.command, Command::Stab);
        assert_eq!(job.params["n"], Param::Int(2));
        assert_eq!(job.params["chamber"], Param::Text("+".into()));
    }

    #[test]
    fn json_job_and_multiline_values() {
        let a = parse_config(r#"{"command": "connection-check", "params": {"family": "tgr", "k": 1, "n": 2, "lambdas": [1, "1/2"]}}"#).unwrap();
        let b = parse_config("command = connection-check\nfamily = tgr\nk = 1\nn = 2\nlambdas = [1,\n  \"1/2\"]\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.params["lambdas"], Param::Rats(vec![crate::ring::q(1), crate::ring::qr(1, 2)]));
    }

    #[test]
    fn diagnostics() {
        assert!(matches!(parse_config(""), Err(Error::Usage(m)) if m.contains("command")));
        assert!(matches!(parse_config("  # only a comment\n"), Err(Error::Usage(_))));
        match parse_config("command = roots\nfamily = hilb\nn = 4\ncolour = red\n") {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (4, 1));
                assert!(message.contains("colour"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("command = roots\nn 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_config("command = roots\nfamily = hilb\n"), Err(Error::Usage(m)) if m.contains("n")));
        assert!(matches!(parse_config("command = fly\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("command = roots\nn = [1,\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_config("command = roots\nn = 1\nn = 2\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn hash_inside_strings_is_kept() {
        let job = parse_config("command = path\narrangement = \"a#b.json\"\nfrom = 0\nshift = 1\n").unwrap();
        assert_eq!(job.params["arrangement"], Param::Text("a#b.json".into()));
    }

    #[test]
    fn hilb_roots() {
        let job = Job::from_flags(Command::Roots, vec![("family".into(), "hilb".into()), ("n".into(), "4".into())]).unwrap();
        let out = run(&job).unwrap();
        let want: Vec<i64> = vec![-4, -3, -2, -1, 1, 2, 3, 4];
        assert_eq!(out.value["equivariant"], json!(want));
        assert_eq!(out.value["kahler"], json!(want));
        assert_eq!(out.status, Status::Report);
    }

    #[test]
    fn yb_check_command() {
        let job = Job::from_flags(Command::YbCheck, vec![("family".into(), "tgr".into()), ("n".into(), "3".into())]).unwrap();
        let out = run(&job).unwrap();
        assert_eq!(out.value["claim"], "YB");
        assert_eq!(out.value["status"], "pass");
        assert!(out.value["conventions"].is_object());
        let bad = Job::from_flags(
            Command::YbCheck,
            vec![("r".into(), r#"[["1","0","0","0"],["0","1","u","0"],["0","0","1","0"],["0","0","0","1"]]"#.into())],
        )
        .unwrap();
        let out = run(&bad).unwrap();
        assert_eq!(out.status, Status::Fail);
        assert!(out.value["payload"]["witness_entry"].is_object());
    }

    #[test]
    fn stab_command_matches_t_star_p1() {
        let flags = [("family", "tgr"), ("k", "1"), ("n", "2"), ("chamber", "+"), ("mode", "H")];
        let job = Job::from_flags(Command::Stab, flags.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()).unwrap();
        let out = run(&job).unwrap();
        assert_eq!(out.value["entries"][1][0], "hbar");
        assert_eq!(out.value["order"], json!(["{1}", "{2}"]));
    }

    #[test]
    fn flags_for_another_command_are_usage_errors() {
        let r = Job::from_flags(Command::Roots, vec![("n".into(), "2".into()), ("family".into(), "hilb".into()), ("N".into(), "6".into())]);
        assert!(matches!(r, Err(Error::Usage(m)) if m.contains("`N`")));
    }

    #[test]
    fn output_round_trips_and_is_deterministic() {
        let job = parse_config("command = alcoves\nfamily = hilb\nn = 3\n").unwrap();
        let a = serde_json::to_string(&run(&job).unwrap().value).unwrap();
        let b = serde_json::to_string(&run(&job).unwrap().value).unwrap();
        assert_eq!(a, b);
        let back: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(back, run(&job).unwrap().value);
        assert_eq!(back["boundaries"], json!(["0", "1/3", "1/2", "2/3", "1"]));
        assert!(!render_human(&back).is_empty());
    }

    #[test]
    fn groupoid_command_cross_validates() {
        let good = run(&parse_config("command = groupoid-check\nwalls = yang\n").unwrap()).unwrap();
        assert_eq!(good.status, Status::Pass);
        assert_eq!(good.value["payload"]["consistent_with_yb"], true);
        let bad = run(&parse_config("command = groupoid-check\nwalls = hopping\n").unwrap()).unwrap();
        assert_eq!(bad.status, Status::Fail);
        assert_eq!(bad.value["payload"]["consistent_with_yb"], true);
        let dynamical = run(&parse_config("command = groupoid-check\nwalls = dynamical\nn = 3\nN = 3\n").unwrap()).unwrap();
        assert_eq!(dynamical.status, Status::Pass);
    }
}
