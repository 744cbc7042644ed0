//! Shared helpers for the integration suites: random separable-state
//! generation and a small structural JSON-schema checker.

#![allow(dead_code)]

use entcert::{DensityMatrix, Ket};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::Value;

/// Haar-random pure state of dimension d (complex Gaussian, normalized).
pub fn random_ket(d: usize, rng: &mut ChaCha8Rng) -> Ket {
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        if let Ok(k) = Ket::normalized(amps) {
            return k;
        }
    }
}

/// Random separable state: a convex mixture of `terms` random product
/// states |ψ⟩⟨ψ| ⊗ |φ⟩⟨φ| with random simplex weights.
pub fn random_separable(d: usize, terms: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            g * g
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let total_dim = d * d;
    let mut m = DMatrix::from_element(total_dim, total_dim, Complex64::new(0.0, 0.0));
    for w in weights {
        let joint = random_ket(d, rng).tensor(&random_ket(d, rng));
        m += joint.projector() * Complex64::new(w, 0.0);
    }
    DensityMatrix::new(d, m).expect("mixture of product projectors is a valid state")
}

/// Structural validation for the subset of JSON Schema the shipped
/// schemas use: type, required, properties, items, enum and
/// additionalProperties. Returns the first violation found.
pub fn validate_against_schema(value: &Value, schema: &Value) -> Result<(), String> {
    validate_at(value, schema, "$")
}

fn type_matches(value: &Value, ty: &str) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn validate_at(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(value, t),
            Value::Array(ts) => ts
                .iter()
                .filter_map(|t| t.as_str())
                .any(|t| type_matches(value, t)),
            _ => return Err(format!("{path}: malformed schema 'type'")),
        };
        if !ok {
            return Err(format!("{path}: value {value} does not match type {ty}"));
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{path}: value {value} not in enum"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for name in required.iter().filter_map(Value::as_str) {
            if value.get(name).is_none() {
                return Err(format!("{path}: missing required field '{name}'"));
            }
        }
    }
    if let (Some(obj), Some(props)) = (value.as_object(), schema.get("properties")) {
        let props = props
            .as_object()
            .ok_or_else(|| format!("{path}: malformed 'properties'"))?;
        let additional = schema
            .get("additionalProperties")
            .and_then(Value::as_bool)
            .unwrap_or(true);
        for (key, sub) in obj {
            match props.get(key) {
                Some(sub_schema) => validate_at(sub, sub_schema, &format!("{path}.{key}"))?,
                None if !additional => {
                    return Err(format!("{path}: unexpected field '{key}'"));
                }
                None => {}
            }
        }
    }
    if let (Some(arr), Some(items)) = (value.as_array(), schema.get("items")) {
        for (i, item) in arr.iter().enumerate() {
            validate_at(item, items, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

/// Locate a file in the repository's schemas/ directory.
pub fn schema_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name)
}

pub fn load_schema(name: &str) -> Value {
    let path = schema_path(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read schema {}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema file must be valid JSON")
}
