//! Canonical JSON encoding of every input payload and report.
//!
//! Canonical form: object keys sorted, no insignificant whitespace, UTF-8,
//! decimal-string coefficients. Serialization goes through
//! [`canonical_string`] so the bytes do not depend on map implementation
//! details, and parsing tracks a JSON path for diagnostics.
//!
//! Class schema:
//! `{"monomials":[[a,b,"c"],...],"precision":N|"exact","realization":"hodge"}`
//! or `{"monomials":[[k,"c"],...],"precision":...,"q":p,"realization":"count"}`
//! with monomials sorted lexicographically by exponents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::bundled::{ContactCase, SchemeExample};
use crate::counting::{AffineSchemeSpec, Polynomial};
use crate::geometry::{
    BlowupSpec, ComponentSet, KEquivalencePair, SncComponent, SncModel, Stratum,
    StratifiedVariety,
};
use crate::integrator::{IntegralResult, TransformCase, VerificationReport};
use crate::rational::RationalClass;
use crate::ring::{CompletedClass, Precision, Realization};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at {path}: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError {
        path: path.to_string(),
        message: message.into(),
    })
}

/// Render a value in canonical form: sorted keys, compact separators.
pub fn canonical_string(value: &Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out
}

fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&n.to_string()),
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                write_canonical(&map[*key], out);
            }
            out.push('}');
        }
    }
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object()
        .ok_or(())
        .or_else(|_| err(path, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    m.get(key)
        .ok_or(())
        .or_else(|_| err(path, format!("missing field `{key}`")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array()
        .ok_or(())
        .or_else(|_| err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, JsonError> {
    v.as_str()
        .ok_or(())
        .or_else(|_| err(path, "expected a string"))
}

fn as_i64(v: &Value, path: &str) -> Result<i64, JsonError> {
    v.as_i64()
        .ok_or(())
        .or_else(|_| err(path, "expected an integer"))
}

fn as_u32(v: &Value, path: &str) -> Result<u32, JsonError> {
    let n = as_i64(v, path)?;
    u32::try_from(n).or_else(|_| err(path, "expected a nonnegative 32-bit integer"))
}

fn as_bool(v: &Value, path: &str) -> Result<bool, JsonError> {
    v.as_bool()
        .ok_or(())
        .or_else(|_| err(path, "expected a boolean"))
}

fn coeff_value(v: &Value, path: &str) -> Result<BigInt, JsonError> {
    let s = as_str(v, path)?;
    s.parse::<BigInt>()
        .or_else(|_| err(path, format!("`{s}` is not a decimal integer")))
}

// ---- classes ----

pub fn class_to_value(c: &CompletedClass) -> Value {
    let counting = c.realization().is_counting();
    let monomials: Vec<Value> = c
        .terms()
        .map(|(&(a, b), coeff)| {
            if counting {
                json!([a, coeff.to_string()])
            } else {
                json!([a, b, coeff.to_string()])
            }
        })
        .collect();
    let precision = match c.precision() {
        Precision::Exact => json!("exact"),
        Precision::Finite(n) => json!(n),
    };
    match c.realization() {
        Realization::HodgeDeligne => json!({
            "monomials": monomials,
            "precision": precision,
            "realization": "hodge",
        }),
        Realization::Counting { q } => json!({
            "monomials": monomials,
            "precision": precision,
            "q": q,
            "realization": "count",
        }),
    }
}

pub fn class_from_value(v: &Value, path: &str) -> Result<CompletedClass, JsonError> {
    let m = obj(v, path)?;
    let realization = match as_str(field(m, "realization", path)?, &format!("{path}.realization"))? {
        "hodge" => Realization::HodgeDeligne,
        "count" => {
            let qpath = format!("{path}.q");
            let q = as_u32(field(m, "q", path)?, &qpath)?;
            Realization::counting(q).or_else(|e| err(&qpath, e.to_string()))?
        }
        other => return err(&format!("{path}.realization"), format!("unknown realization `{other}`")),
    };
    let ppath = format!("{path}.precision");
    let precision = match field(m, "precision", path)? {
        Value::String(s) if s == "exact" => Precision::Exact,
        v => {
            let n = as_u32(v, &ppath)?;
            if n == 0 {
                return err(&ppath, "precision must be at least 1");
            }
            Precision::Finite(n)
        }
    };
    let mpath = format!("{path}.monomials");
    let mut terms: Vec<((i64, i64), BigInt)> = Vec::new();
    for (i, item) in as_array(field(m, "monomials", path)?, &mpath)?.iter().enumerate() {
        let tpath = format!("{mpath}[{i}]");
        let triple = as_array(item, &tpath)?;
        match (realization, triple.len()) {
            (Realization::Counting { .. }, 2) => {
                let k = as_i64(&triple[0], &tpath)?;
                let c = coeff_value(&triple[1], &tpath)?;
                terms.push(((k, k), c));
            }
            (Realization::HodgeDeligne, 3) => {
                let a = as_i64(&triple[0], &tpath)?;
                let b = as_i64(&triple[1], &tpath)?;
                let c = coeff_value(&triple[2], &tpath)?;
                terms.push(((a, b), c));
            }
            (Realization::Counting { .. }, n) => {
                return err(&tpath, format!("counting monomials are [k, coeff] pairs, got {n} entries"));
            }
            (Realization::HodgeDeligne, n) => {
                return err(&tpath, format!("hodge monomials are [a, b, coeff] triples, got {n} entries"));
            }
        }
    }
    Ok(CompletedClass::from_terms(realization, terms, precision))
}

// ---- rational classes ----

pub fn rational_to_value(r: &RationalClass) -> Value {
    json!({
        "denominators": r.denominators(),
        "lshift": r.lshift(),
        "numerator": class_to_value(r.numerator()),
    })
}

pub fn rational_from_value(v: &Value, path: &str) -> Result<RationalClass, JsonError> {
    let m = obj(v, path)?;
    let numerator = class_from_value(field(m, "numerator", path)?, &format!("{path}.numerator"))?;
    let lshift = as_i64(field(m, "lshift", path)?, &format!("{path}.lshift"))?;
    let dpath = format!("{path}.denominators");
    let mut denominators = Vec::new();
    for (i, item) in as_array(field(m, "denominators", path)?, &dpath)?.iter().enumerate() {
        denominators.push(as_u32(item, &format!("{dpath}[{i}]"))?);
    }
    RationalClass::new(numerator, lshift, denominators)
        .or_else(|e| err(path, e.to_string()))
}

// ---- varieties ----

pub fn variety_to_value(x: &StratifiedVariety) -> Value {
    let strata: Vec<Value> = x
        .strata
        .iter()
        .map(|s| {
            json!({
                "class": class_to_value(&s.class),
                "dim": s.dim,
                "name": s.name,
            })
        })
        .collect();
    json!({
        "dim": x.dim,
        "name": x.name,
        "smooth": x.smooth,
        "strata": strata,
    })
}

pub fn variety_from_value(v: &Value, path: &str) -> Result<StratifiedVariety, JsonError> {
    let m = obj(v, path)?;
    let name = as_str(field(m, "name", path)?, &format!("{path}.name"))?.to_string();
    let dim = as_i64(field(m, "dim", path)?, &format!("{path}.dim"))?;
    let smooth = as_bool(field(m, "smooth", path)?, &format!("{path}.smooth"))?;
    let spath = format!("{path}.strata");
    let mut strata = Vec::new();
    for (i, item) in as_array(field(m, "strata", path)?, &spath)?.iter().enumerate() {
        let ipath = format!("{spath}[{i}]");
        let sm = obj(item, &ipath)?;
        strata.push(Stratum {
            name: as_str(field(sm, "name", &ipath)?, &format!("{ipath}.name"))?.to_string(),
            dim: as_i64(field(sm, "dim", &ipath)?, &format!("{ipath}.dim"))?,
            class: class_from_value(field(sm, "class", &ipath)?, &format!("{ipath}.class"))?,
        });
    }
    Ok(StratifiedVariety {
        name,
        dim,
        smooth,
        strata,
    })
}

// ---- SNC models ----

fn subset_key(set: ComponentSet) -> String {
    set.to_string()
}

fn subset_from_key(key: &str, path: &str) -> Result<ComponentSet, JsonError> {
    if key == "∅" {
        return Ok(ComponentSet::EMPTY);
    }
    let mut indices = Vec::new();
    for part in key.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .or_else(|_| err(path, format!("bad subset key `{key}`")))?;
        if i >= 32 {
            return err(path, format!("component index {i} out of range"));
        }
        indices.push(i);
    }
    Ok(ComponentSet::from_indices(indices))
}

pub fn snc_to_value(m: &SncModel) -> Value {
    let components: Vec<Value> = m
        .components
        .iter()
        .map(|c| json!({"mult": c.multiplicity, "name": c.name}))
        .collect();
    let mut strata = Map::new();
    for (&set, class) in &m.strata {
        strata.insert(subset_key(set), class_to_value(class));
    }
    json!({
        "ambient": variety_to_value(&m.ambient),
        "components": components,
        "strata": strata,
    })
}

pub fn snc_from_value(v: &Value, path: &str) -> Result<SncModel, JsonError> {
    let m = obj(v, path)?;
    let ambient = variety_from_value(field(m, "ambient", path)?, &format!("{path}.ambient"))?;
    let cpath = format!("{path}.components");
    let mut components = Vec::new();
    for (i, item) in as_array(field(m, "components", path)?, &cpath)?.iter().enumerate() {
        let ipath = format!("{cpath}[{i}]");
        let cm = obj(item, &ipath)?;
        components.push(SncComponent {
            name: as_str(field(cm, "name", &ipath)?, &format!("{ipath}.name"))?.to_string(),
            multiplicity: as_u32(field(cm, "mult", &ipath)?, &format!("{ipath}.mult"))?,
        });
    }
    let spath = format!("{path}.strata");
    let strata_obj = obj(field(m, "strata", path)?, &spath)?;
    let mut strata = BTreeMap::new();
    for (key, value) in strata_obj {
        let kpath = format!("{spath}.{key}");
        let set = subset_from_key(key, &kpath)?;
        strata.insert(set, class_from_value(value, &kpath)?);
    }
    Ok(SncModel {
        ambient,
        components,
        strata,
    })
}

// ---- blow-ups and transform cases ----

pub fn blowup_to_value(b: &BlowupSpec) -> Value {
    json!({
        "base": variety_to_value(&b.base),
        "center_class": class_to_value(&b.center_class),
        "center_dim": b.center_dim,
        "codim": b.codim,
        "discrepancy": b.discrepancy,
        "exceptional_class": class_to_value(&b.exceptional_class),
        "produced": variety_to_value(&b.produced),
    })
}

pub fn blowup_from_value(v: &Value, path: &str) -> Result<BlowupSpec, JsonError> {
    let m = obj(v, path)?;
    Ok(BlowupSpec {
        base: variety_from_value(field(m, "base", path)?, &format!("{path}.base"))?,
        center_dim: as_i64(field(m, "center_dim", path)?, &format!("{path}.center_dim"))?,
        center_class: class_from_value(
            field(m, "center_class", path)?,
            &format!("{path}.center_class"),
        )?,
        codim: as_i64(field(m, "codim", path)?, &format!("{path}.codim"))?,
        produced: variety_from_value(field(m, "produced", path)?, &format!("{path}.produced"))?,
        exceptional_class: class_from_value(
            field(m, "exceptional_class", path)?,
            &format!("{path}.exceptional_class"),
        )?,
        discrepancy: as_i64(field(m, "discrepancy", path)?, &format!("{path}.discrepancy"))?,
    })
}

pub fn transform_to_value(t: &TransformCase) -> Value {
    json!({
        "blowup": blowup_to_value(&t.blowup),
        "exceptional": t.exceptional,
        "lhs": snc_to_value(&t.lhs),
        "pullback_mult": t.pullback_mult,
        "rhs": snc_to_value(&t.rhs),
    })
}

pub fn transform_from_value(v: &Value, path: &str) -> Result<TransformCase, JsonError> {
    let m = obj(v, path)?;
    Ok(TransformCase {
        lhs: snc_from_value(field(m, "lhs", path)?, &format!("{path}.lhs"))?,
        blowup: blowup_from_value(field(m, "blowup", path)?, &format!("{path}.blowup"))?,
        rhs: snc_from_value(field(m, "rhs", path)?, &format!("{path}.rhs"))?,
        exceptional: as_str(
            field(m, "exceptional", path)?,
            &format!("{path}.exceptional"),
        )?
        .to_string(),
        pullback_mult: as_u32(
            field(m, "pullback_mult", path)?,
            &format!("{path}.pullback_mult"),
        )?,
    })
}

// ---- K-equivalence pairs ----

pub fn kequiv_to_value(p: &KEquivalencePair) -> Value {
    json!({
        "crepant_complete": p.crepant_complete,
        "k_left": snc_to_value(&p.k_left),
        "k_right": snc_to_value(&p.k_right),
        "left": variety_to_value(&p.left),
        "resolution": variety_to_value(&p.resolution),
        "right": variety_to_value(&p.right),
    })
}

pub fn kequiv_from_value(v: &Value, path: &str) -> Result<KEquivalencePair, JsonError> {
    let m = obj(v, path)?;
    Ok(KEquivalencePair {
        left: variety_from_value(field(m, "left", path)?, &format!("{path}.left"))?,
        right: variety_from_value(field(m, "right", path)?, &format!("{path}.right"))?,
        resolution: variety_from_value(
            field(m, "resolution", path)?,
            &format!("{path}.resolution"),
        )?,
        k_left: snc_from_value(field(m, "k_left", path)?, &format!("{path}.k_left"))?,
        k_right: snc_from_value(field(m, "k_right", path)?, &format!("{path}.k_right"))?,
        crepant_complete: as_bool(
            field(m, "crepant_complete", path)?,
            &format!("{path}.crepant_complete"),
        )?,
    })
}

// ---- polynomials and schemes ----

pub fn polynomial_to_value(p: &Polynomial) -> Value {
    let terms: Vec<Value> = p
        .terms
        .iter()
        .map(|(c, exps)| json!([c, exps]))
        .collect();
    json!({"terms": terms, "vars": p.n_vars})
}

pub fn polynomial_from_value(v: &Value, path: &str) -> Result<Polynomial, JsonError> {
    let m = obj(v, path)?;
    let vars = as_u32(field(m, "vars", path)?, &format!("{path}.vars"))? as usize;
    let tpath = format!("{path}.terms");
    let mut terms = Vec::new();
    for (i, item) in as_array(field(m, "terms", path)?, &tpath)?.iter().enumerate() {
        let ipath = format!("{tpath}[{i}]");
        let pair = as_array(item, &ipath)?;
        if pair.len() != 2 {
            return err(&ipath, "terms are [coeff, [exponents]] pairs");
        }
        let coeff = as_i64(&pair[0], &ipath)?;
        let epath = format!("{ipath}[1]");
        let mut exps = Vec::new();
        for (j, e) in as_array(&pair[1], &epath)?.iter().enumerate() {
            exps.push(as_u32(e, &format!("{epath}[{j}]"))?);
        }
        terms.push((coeff, exps));
    }
    Ok(Polynomial::new(vars, terms))
}

pub fn scheme_to_value(s: &SchemeExample) -> Value {
    let equations: Vec<Value> = s.spec.equations.iter().map(polynomial_to_value).collect();
    let inequations: Vec<Value> = s.spec.inequations.iter().map(polynomial_to_value).collect();
    let mut m = Map::new();
    m.insert("equations".to_string(), Value::Array(equations));
    m.insert("inequations".to_string(), Value::Array(inequations));
    m.insert("vars".to_string(), json!(s.spec.n_vars));
    if let Some(dim) = s.dim {
        m.insert("dim".to_string(), json!(dim));
    }
    if let Some(class) = &s.class {
        m.insert("class".to_string(), class_to_value(class));
    }
    Value::Object(m)
}

pub fn scheme_from_value(v: &Value, path: &str) -> Result<SchemeExample, JsonError> {
    let m = obj(v, path)?;
    let vars = as_u32(field(m, "vars", path)?, &format!("{path}.vars"))? as usize;
    let parse_polys = |key: &str| -> Result<Vec<Polynomial>, JsonError> {
        let ppath = format!("{path}.{key}");
        let mut out = Vec::new();
        for (i, item) in as_array(field(m, key, path)?, &ppath)?.iter().enumerate() {
            out.push(polynomial_from_value(item, &format!("{ppath}[{i}]"))?);
        }
        Ok(out)
    };
    let equations = parse_polys("equations")?;
    let inequations = parse_polys("inequations")?;
    let dim = match m.get("dim") {
        None => None,
        Some(v) => Some(as_u32(v, &format!("{path}.dim"))?),
    };
    let class = match m.get("class") {
        None => None,
        Some(v) => Some(class_from_value(v, &format!("{path}.class"))?),
    };
    Ok(SchemeExample {
        spec: AffineSchemeSpec::new(vars, equations, inequations),
        dim,
        class,
    })
}

// ---- contact cases ----

pub fn contact_case_to_value(c: &ContactCase) -> Value {
    let divisor: Vec<Value> = c
        .divisor
        .iter()
        .map(|(p, a)| json!({"mult": a, "poly": polynomial_to_value(p)}))
        .collect();
    json!({
        "divisor": divisor,
        "snc": snc_to_value(&c.snc),
    })
}

pub fn contact_case_from_value(v: &Value, path: &str) -> Result<ContactCase, JsonError> {
    let m = obj(v, path)?;
    let snc = snc_from_value(field(m, "snc", path)?, &format!("{path}.snc"))?;
    let dpath = format!("{path}.divisor");
    let mut divisor = Vec::new();
    for (i, item) in as_array(field(m, "divisor", path)?, &dpath)?.iter().enumerate() {
        let ipath = format!("{dpath}[{i}]");
        let dm = obj(item, &ipath)?;
        let poly = polynomial_from_value(field(dm, "poly", &ipath)?, &format!("{ipath}.poly"))?;
        let mult = as_u32(field(dm, "mult", &ipath)?, &format!("{ipath}.mult"))?;
        divisor.push((poly, mult));
    }
    Ok(ContactCase { snc, divisor })
}

// ---- reports (output only) ----

pub fn integral_to_value(r: &IntegralResult, precision: u32) -> Value {
    let mut levels = Map::new();
    for (s, class) in &r.level_measures {
        levels.insert(s.to_string(), class_to_value(class));
    }
    json!({
        "closed": rational_to_value(&r.closed),
        "closed_display": r.closed.to_string(),
        "level_measures": levels,
        "precision": precision,
        "series": class_to_value(&r.series),
        "series_display": r.series.to_string(),
    })
}

pub fn verification_to_value(report: &VerificationReport, precision: u32, command: &str) -> Value {
    json!({
        "command": command,
        "discrepancy": class_to_value(&report.discrepancy),
        "lhs": integral_to_value(&report.lhs, precision),
        "passed": report.passed,
        "precision": precision,
        "rhs": integral_to_value(&report.rhs, precision),
        "schema": "1",
    })
}

pub fn parse_document(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).or_else(|e| err("$", format!("invalid JSON: {e}")))
}
