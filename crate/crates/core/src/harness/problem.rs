//! Problem files: JSON documents describing either an abstract form with
//! constraints or a 1-D boundary problem.
//!
//! ```json
//! {"kind": "abstract", "dim": 2, "form": [[-1, 0], [0, 1]], "constraints": [[1, 0]]}
//! {"kind": "pde", "domain": {"a": 0, "b": 1, "n_elements": 64},
//!  "p": {"constant": 0}, "q_a": 1, "q_b": 1}
//! ```
//!
//! Matrix and vector entries are JSON numbers or strings such as `"-3/7"`
//! or `"1.25e-2"`. Every entry is read as an exact rational; the floating
//! backend rounds it afterwards.

use nalgebra::{DMatrix, DVector};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::bilinear::{InnerProductSpace, SymmetricForm};
use crate::constraint::Functional;
use crate::error::{Error, Result};
use crate::linalg::{parse_rational, Field, Rational, Tolerances};
use crate::pde::{CoefficientSpec, IntervalDomain, Potential, WeakConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected exact or float)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbstractProblem {
    pub dim: usize,
    pub gram: Option<Vec<Vec<Rational>>>,
    pub form: Vec<Vec<Rational>>,
    pub constraints: Vec<Vec<Rational>>,
    pub backend: Backend,
    pub tolerances: Tolerances,
}

impl AbstractProblem {
    /// Builds the form and constraints in the scalar type `T`.
    pub fn build<T: Field>(&self, convert: impl Fn(&Rational) -> T) -> Result<(SymmetricForm<T>, Vec<Functional<T>>)> {
        let n = self.dim;
        let to_matrix = |rows: &[Vec<Rational>]| DMatrix::from_fn(n, n, |i, j| convert(&rows[i][j]));
        let gram = match &self.gram {
            Some(g) => to_matrix(g),
            None => DMatrix::identity(n, n),
        };
        let space = InnerProductSpace::new(gram, &self.tolerances)?;
        let form = SymmetricForm::with_tolerances(space, to_matrix(&self.form), self.tolerances)?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| Functional::new(DVector::from_iterator(n, c.iter().map(&convert))))
            .collect();
        Ok((form, constraints))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeProblem {
    pub domain: IntervalDomain,
    pub coeffs: CoefficientSpec,
    pub constraints: Vec<WeakConstraint>,
    pub verify_decomposition: bool,
    /// Element counts for a refinement study; empty for none.
    pub refine: Vec<usize>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemFile {
    Abstract(AbstractProblem),
    Pde(PdeProblem),
}

impl ProblemFile {
    pub fn tolerances_mut(&mut self) -> &mut Tolerances {
        match self {
            ProblemFile::Abstract(p) => &mut p.tolerances,
            ProblemFile::Pde(p) => &mut p.tolerances,
        }
    }
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    problem_from_value(&value)
}

pub fn problem_from_value(value: &Value) -> Result<ProblemFile> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::validation("$", "document must be a JSON object"))?;
    match str_field(obj, "kind")? {
        "abstract" => parse_abstract(obj).map(ProblemFile::Abstract),
        "pde" => parse_pde(obj).map(ProblemFile::Pde),
        other => Err(Error::validation(
            "kind",
            format!("expected \"abstract\" or \"pde\", got \"{other}\""),
        )),
    }
}

const ABSTRACT_KEYS: &[&str] = &["kind", "dim", "gram", "form", "constraints", "backend", "tolerances"];
const PDE_KEYS: &[&str] = &[
    "kind",
    "domain",
    "p",
    "q_a",
    "q_b",
    "constraints",
    "verify_decomposition",
    "refine",
    "tolerances",
];

fn parse_abstract(obj: &Map<String, Value>) -> Result<AbstractProblem> {
    reject_unknown(obj, ABSTRACT_KEYS, "")?;
    let dim = usize_field(obj, "dim")?;
    let form = matrix(required(obj, "form")?, "form")?;
    if form.len() != dim || form.iter().any(|r| r.len() != dim) {
        return Err(Error::validation("form", "form must be square of size dim"));
    }
    let gram = match obj.get("gram") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let g = matrix(v, "gram")?;
            if g.len() != dim || g.iter().any(|r| r.len() != dim) {
                return Err(Error::validation("gram", "gram must be square of size dim"));
            }
            Some(g)
        }
    };
    let constraints = match obj.get("constraints") {
        None => Vec::new(),
        Some(v) => {
            let rows = array(v, "constraints")?;
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    let field = format!("constraints[{i}]");
                    if r.as_str() == Some("volume") {
                        return Err(Error::validation(
                            field,
                            "\"volume\" is only available for pde problems",
                        ));
                    }
                    let c = vector(r, &field)?;
                    if c.len() != dim {
                        return Err(Error::validation(
                            field,
                            format!("constraint must have length dim = {dim}"),
                        ));
                    }
                    Ok(c)
                })
                .collect::<Result<_>>()?
        }
    };
    let backend = match obj.get("backend") {
        None => Backend::Float,
        Some(v) => v
            .as_str()
            .ok_or_else(|| Error::validation("backend", "must be a string"))?
            .parse()
            .map_err(|e: String| Error::validation("backend", e))?,
    };
    Ok(AbstractProblem {
        dim,
        gram,
        form,
        constraints,
        backend,
        tolerances: tolerances(obj.get("tolerances"))?,
    })
}

fn parse_pde(obj: &Map<String, Value>) -> Result<PdeProblem> {
    reject_unknown(obj, PDE_KEYS, "")?;
    let d = required(obj, "domain")?
        .as_object()
        .ok_or_else(|| Error::validation("domain", "must be an object"))?;
    reject_unknown(d, &["a", "b", "n_elements"], "domain.")?;
    let domain = IntervalDomain {
        a: f64_field(d, "a", "domain.a")?,
        b: f64_field(d, "b", "domain.b")?,
        n: usize_field_named(d, "n_elements", "domain.n_elements")?,
    };
    domain
        .validate()
        .map_err(|e| Error::validation("domain", e.to_string()))?;

    let p = potential(required(obj, "p")?)?;
    let coeffs = CoefficientSpec {
        p,
        q_a: f64_field(obj, "q_a", "q_a")?,
        q_b: f64_field(obj, "q_b", "q_b")?,
    };
    coeffs.validate().map_err(|e| Error::validation("p/q", e.to_string()))?;

    let size = domain.n + 1;
    let constraints = match obj.get("constraints") {
        None => Vec::new(),
        Some(v) => array(v, "constraints")?
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let field = format!("constraints[{i}]");
                if let Some(s) = c.as_str() {
                    return if s == "volume" {
                        Ok(WeakConstraint::Volume)
                    } else {
                        Err(Error::validation(field, format!("unknown constraint token \"{s}\"")))
                    };
                }
                let coeffs = vector(c, &field)?;
                if coeffs.len() != size {
                    return Err(Error::validation(
                        field,
                        format!("constraint must have n_elements + 1 = {size} entries"),
                    ));
                }
                Ok(WeakConstraint::Custom(DVector::from_iterator(
                    size,
                    coeffs.iter().map(Field::to_f64),
                )))
            })
            .collect::<Result<_>>()?,
    };
    let verify_decomposition = match obj.get("verify_decomposition") {
        None => true,
        Some(v) => v
            .as_bool()
            .ok_or_else(|| Error::validation("verify_decomposition", "must be a boolean"))?,
    };
    let refine = match obj.get("refine") {
        None => Vec::new(),
        Some(v) => array(v, "refine")?
            .iter()
            .enumerate()
            .map(|(i, n)| match n.as_u64() {
                Some(n) if n > 0 => Ok(n as usize),
                _ => Err(Error::validation(format!("refine[{i}]"), "must be a positive integer")),
            })
            .collect::<Result<_>>()?,
    };
    Ok(PdeProblem {
        domain,
        coeffs,
        constraints,
        verify_decomposition,
        refine,
        tolerances: tolerances(obj.get("tolerances"))?,
    })
}

fn potential(v: &Value) -> Result<Potential> {
    let obj = v
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| Error::validation("p", "must be an object with exactly one of constant, polynomial, nodal"))?;
    let (key, inner) = obj.iter().next().expect("one entry");
    let floats =
        |v: &Value, field: &str| -> Result<Vec<f64>> { Ok(vector(v, field)?.iter().map(Field::to_f64).collect()) };
    let p = match key.as_str() {
        "constant" => Potential::Constant(entry(inner, "p.constant")?.to_f64()),
        "polynomial" => Potential::Polynomial(floats(inner, "p.polynomial")?),
        "nodal" => Potential::NodalSamples(floats(inner, "p.nodal")?),
        other => return Err(Error::validation("p", format!("unknown potential kind \"{other}\""))),
    };
    p.validate()
        .map_err(|e| Error::validation(format!("p.{key}"), e.to_string()))?;
    Ok(p)
}

fn tolerances(v: Option<&Value>) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    let Some(v) = v else { return Ok(tol) };
    let obj = v
        .as_object()
        .ok_or_else(|| Error::validation("tolerances", "must be an object"))?;
    for (key, value) in obj {
        let field = format!("tolerances.{key}");
        let slot = match key.as_str() {
            "null_rel" => &mut tol.null_rel,
            "residual" => &mut tol.residual,
            "symmetry" => &mut tol.symmetry,
            "rank" => &mut tol.rank,
            "jacobi_off" => &mut tol.jacobi_off,
            "jacobi_max_sweeps" => {
                tol.jacobi_max_sweeps = value
                    .as_u64()
                    .filter(|n| *n > 0)
                    .ok_or_else(|| Error::validation(field, "must be a positive integer"))?
                    as usize;
                continue;
            }
            _ => return Err(Error::validation(field, "unknown tolerance")),
        };
        *slot = value
            .as_f64()
            .filter(|x| x.is_finite() && *x > 0.0)
            .ok_or_else(|| Error::validation(field, "must be a positive number"))?;
    }
    Ok(tol)
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::validation(format!("{prefix}{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::validation(key, "missing required field"))
}

fn str_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    required(obj, key)?
        .as_str()
        .ok_or_else(|| Error::validation(key, "must be a string"))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    usize_field_named(obj, key, key)
}

fn usize_field_named(obj: &Map<String, Value>, key: &str, field: &str) -> Result<usize> {
    obj.get(key)
        .ok_or_else(|| Error::validation(field, "missing required field"))?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::validation(field, "must be a non-negative integer"))
}

fn f64_field(obj: &Map<String, Value>, key: &str, field: &str) -> Result<f64> {
    let v = obj
        .get(key)
        .ok_or_else(|| Error::validation(field, "missing required field"))?;
    Ok(entry(v, field)?.to_f64())
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::validation(field, "must be an array"))
}

fn entry(v: &Value, field: &str) -> Result<Rational> {
    let parsed = match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => None,
    };
    parsed.ok_or_else(|| Error::validation(field, format!("expected a number or \"n/d\" string, got {v}")))
}

fn vector(v: &Value, field: &str) -> Result<Vec<Rational>> {
    array(v, field)?
        .iter()
        .enumerate()
        .map(|(j, e)| entry(e, &format!("{field}[{j}]")))
        .collect()
}

fn matrix(v: &Value, field: &str) -> Result<Vec<Vec<Rational>>> {
    array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, row)| vector(row, &format!("{field}[{i}]")))
        .collect()
}

/// Canonical JSON echo of a parsed problem, with rationals as `"n/d"` strings.
impl Serialize for ProblemFile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rat = |r: &Rational| r.to_string();
        let rows =
            |m: &[Vec<Rational>]| -> Vec<Vec<String>> { m.iter().map(|r| r.iter().map(rat).collect()).collect() };
        let mut map = s.serialize_map(None)?;
        match self {
            ProblemFile::Abstract(p) => {
                map.serialize_entry("kind", "abstract")?;
                map.serialize_entry("dim", &p.dim)?;
                map.serialize_entry("backend", &p.backend)?;
                if let Some(g) = &p.gram {
                    map.serialize_entry("gram", &rows(g))?;
                }
                map.serialize_entry("form", &rows(&p.form))?;
                map.serialize_entry("constraints", &rows(&p.constraints))?;
                map.serialize_entry("tolerances", &p.tolerances)?;
            }
            ProblemFile::Pde(p) => {
                map.serialize_entry("kind", "pde")?;
                map.serialize_entry(
                    "domain",
                    &serde_json::json!({"a": p.domain.a, "b": p.domain.b, "n_elements": p.domain.n}),
                )?;
                map.serialize_entry("p", &p.coeffs.p)?;
                map.serialize_entry("q_a", &p.coeffs.q_a)?;
                map.serialize_entry("q_b", &p.coeffs.q_b)?;
                let constraints: Vec<Value> = p
                    .constraints
                    .iter()
                    .map(|c| match c {
                        WeakConstraint::Volume => Value::from("volume"),
                        WeakConstraint::Custom(v) => Value::from(v.iter().copied().collect::<Vec<f64>>()),
                    })
                    .collect();
                map.serialize_entry("constraints", &constraints)?;
                map.serialize_entry("verify_decomposition", &p.verify_decomposition)?;
                if !p.refine.is_empty() {
                    map.serialize_entry("refine", &p.refine)?;
                }
                map.serialize_entry("tolerances", &p.tolerances)?;
            }
        }
        map.end()
    }
}
