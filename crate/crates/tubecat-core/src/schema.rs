//! Stable machine-readable JSON import/export.
//!
//! All emitters go through [`canonical_json`], which prints objects with
//! sorted keys and every float with 17 significant digits in scientific
//! notation, independent of locale. Re-running an export therefore produces
//! byte-identical output.

use crate::channel::{ChannelBasis, InfeasibilityCertificate, ProbabilityReport};
use crate::charges::GeneralisedCharge;
use crate::error::{Error, Result};
use crate::fusion::{
    FSymbolTable, FusionCategoryData, FusionRing, QuantumDimensionVector, SimpleLabel,
};
use crate::tube::{to_presentation, TubeCategory, TubePresentation};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Render a JSON value deterministically: keys sorted, floats as `{:.16e}`.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                out.push_str(&format!("{x:.16e}"));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*key], indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push(' ');
    }
}

fn complex_json(re: f64, im: f64) -> Value {
    json!({ "re": re, "im": im })
}

fn matrix_json(m: &crate::numerics::ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| {
            Value::Array(
                (0..m.cols)
                    .map(|j| complex_json(m[(i, j)].re, m[(i, j)].im))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

// ---------------------------------------------------------------------------
// Category-definition document
// ---------------------------------------------------------------------------

/// The on-disk category-definition schema. Either `f_symbols` (full fusion
/// data) or `tube_presentation` (explicit tube tables) must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub name: String,
    pub simples: Vec<String>,
    /// fusion[i][j][k] = N_{ij}^k
    pub fusion: Vec<Vec<Vec<u32>>>,
    pub duals: Vec<usize>,
    pub dims: Vec<f64>,
    pub unitary: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_symbols: Option<Vec<FEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tube_presentation: Option<TubePresentation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FEntryDoc {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
    pub f: usize,
    pub re: f64,
    pub im: f64,
}

/// Export a fusion category to the category-definition document.
pub fn category_to_doc(cat: &FusionCategoryData) -> CategoryDoc {
    let f_symbols = cat.f_symbols.as_ref().map(|table| {
        table
            .entries
            .iter()
            .map(|(&(a, b, c, d, e, f), z)| FEntryDoc { a, b, c, d, e, f, re: z.re, im: z.im })
            .collect()
    });
    CategoryDoc {
        name: cat.name.clone(),
        simples: cat.simples.iter().map(|s| s.display_name.clone()).collect(),
        fusion: cat.ring.coefficients.clone(),
        duals: cat.ring.duals.clone(),
        dims: cat.dims.d.clone(),
        unitary: cat.unitary_flag,
        basis_weights: if cat.basis_weights.iter().all(|&w| w == 1.0) {
            None
        } else {
            Some(cat.basis_weights.clone())
        },
        f_symbols,
        tube_presentation: None,
    }
}

/// Rebuild fusion-category data from a document carrying `f_symbols`.
pub fn doc_to_category(doc: &CategoryDoc) -> Result<FusionCategoryData> {
    let n = doc.simples.len();
    if doc.fusion.len() != n || doc.duals.len() != n || doc.dims.len() != n {
        return Err(Error::Schema(
            "fusion/duals/dims length must match simples".into(),
        ));
    }
    let entries = doc.f_symbols.as_ref().ok_or_else(|| {
        Error::Schema("category document carries no f_symbols table".into())
    })?;
    let mut table = FSymbolTable { entries: Default::default() };
    for e in entries {
        table
            .entries
            .insert((e.a, e.b, e.c, e.d, e.e, e.f), num_complex::Complex64::new(e.re, e.im));
    }
    let ring = FusionRing {
        n_simples: n,
        coefficients: doc.fusion.clone(),
        duals: doc.duals.clone(),
    };
    ring.validate()?;
    Ok(FusionCategoryData {
        name: doc.name.clone(),
        simples: doc
            .simples
            .iter()
            .enumerate()
            .map(|(id, name)| SimpleLabel { id, display_name: name.clone() })
            .collect(),
        ring,
        f_symbols: Some(table),
        dims: QuantumDimensionVector { d: doc.dims.clone() },
        unitary_flag: doc.unitary,
        basis_weights: doc
            .basis_weights
            .clone()
            .unwrap_or_else(|| vec![1.0; n]),
    })
}

/// Canonical JSON text of a category document.
pub fn category_json(cat: &FusionCategoryData) -> Result<String> {
    let doc = category_to_doc(cat);
    let v = serde_json::to_value(&doc).map_err(Error::from)?;
    Ok(canonical_json(&v))
}

/// Canonical JSON text of the presented tube tables of a tube category.
pub fn tube_json(t: &TubeCategory) -> Result<String> {
    let v = serde_json::to_value(to_presentation(t)).map_err(Error::from)?;
    Ok(canonical_json(&v))
}

// ---------------------------------------------------------------------------
// Charges, bases, probabilities, certificates
// ---------------------------------------------------------------------------

fn morphism_label(t: &TubeCategory, i: usize) -> Value {
    let b = &t.basis[i];
    json!({
        "index": i,
        "src": t.objects[b.source].display_name,
        "tgt": t.objects[b.target].display_name,
        "defect": b.defect,
        "channel": b.channel,
    })
}

/// JSON value for one generalised charge: name, per-sector dimensions, and
/// the action matrix of every tube basis morphism with a nonzero action.
pub fn charge_value(t: &TubeCategory, u: &GeneralisedCharge) -> Value {
    let mut action: Vec<Value> = Vec::new();
    let mut indices: Vec<usize> = u.action.keys().copied().collect();
    indices.sort_unstable();
    for i in indices {
        action.push(json!({
            "morphism": morphism_label(t, i),
            "matrix": matrix_json(&u.action[&i]),
        }));
    }
    json!({
        "name": u.name,
        "sector_dims": u.sector_dims,
        "dagger_compatible": u.dagger_compatible,
        "action": action,
    })
}

/// Canonical JSON text of a list of charges.
pub fn charges_json(t: &TubeCategory, charges: &[GeneralisedCharge]) -> String {
    let v = Value::Array(charges.iter().map(|u| charge_value(t, u)).collect());
    canonical_json(&v)
}

/// JSON value for a channel basis (targets and expansion coefficients).
pub fn basis_value(t: &TubeCategory, basis: &ChannelBasis) -> Value {
    let elements: Vec<Value> = basis
        .elements
        .iter()
        .map(|e| {
            let terms: Vec<Value> = e
                .morphism
                .terms
                .iter()
                .map(|(&i, z)| {
                    json!({ "morphism": morphism_label(t, i), "re": z.re, "im": z.im })
                })
                .collect();
            json!({ "target": t.objects[e.target].display_name, "terms": terms })
        })
        .collect();
    json!({
        "source": t.objects[basis.source].display_name,
        "defect": basis.defect,
        "elements": elements,
    })
}

/// JSON value for a probability report; `marginals` sums the entries per
/// target object.
pub fn probability_value(t: &TubeCategory, report: &ProbabilityReport) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "target": t.objects[e.target].display_name,
                "index_within_target": e.index_within_target,
                "probability": e.probability,
            })
        })
        .collect();
    let marginals = report.marginals(t.objects.len());
    let mut marg = serde_json::Map::new();
    for (obj, p) in t.objects.iter().zip(marginals.iter()) {
        if report.entries.iter().any(|e| e.target == obj.id) {
            marg.insert(obj.display_name.clone(), json!(p));
        }
    }
    json!({
        "charge": report.charge,
        "defect": report.defect,
        "source": t.objects[report.source].display_name,
        "entries": entries,
        "marginals": Value::Object(marg),
        "total": report.total,
    })
}

/// Compact probability output: `{ "target": marginal, ... }`.
pub fn marginals_value(t: &TubeCategory, report: &ProbabilityReport) -> Value {
    let marginals = report.marginals(t.objects.len());
    let mut map = serde_json::Map::new();
    for (obj, p) in t.objects.iter().zip(marginals.iter()) {
        if report.entries.iter().any(|e| e.target == obj.id) {
            map.insert(obj.display_name.clone(), json!(p));
        }
    }
    Value::Object(map)
}

/// JSON value for an infeasibility certificate.
pub fn certificate_value(t: &TubeCategory, cert: &InfeasibilityCertificate) -> Value {
    let blocks: Vec<Value> = cert
        .gram_blocks
        .iter()
        .map(|(target, tubes, gram)| {
            json!({
                "target": t.objects[*target].display_name,
                "tubes": tubes.iter().map(|&i| morphism_label(t, i)).collect::<Vec<_>>(),
                "gram": matrix_json(gram),
            })
        })
        .collect();
    let witness: Vec<Value> = cert
        .witness
        .iter()
        .map(|z| complex_json(z.re, z.im))
        .collect();
    json!({
        "defect": cert.defect,
        "source": t.objects[cert.source].display_name,
        "gram_blocks": blocks,
        "affine_residual": cert.affine_residual,
        "affine_solution_unique": cert.affine_solution_unique,
        "min_eigenvalue": cert.min_eigenvalue,
        "witness_target": t.objects[cert.witness_target].display_name,
        "witness": witness,
        "witness_quadratic_form": cert.witness_quadratic_form,
    })
}
