//! Loading homomorphisms, emitting certificates and re-verifying them from
//! their serialized form.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;
use symlen_core::construction::{parse, project, OccurrencePath, PrincipalTuple, Registry, Witness};
use symlen_core::fpgroup::FiniteGroup;
use symlen_core::homomorph::{factor_full, FactorStage, FactorizationCertificate, Hom};
use symlen_core::padic::AAutMatrix;
use symlen_core::word::{GenId, GenWordMap, Word};

use crate::error::CliError;
use crate::formats::{element_index, matrix_rows, registry_from_json, BlockJson, CertificateJson, GroupJson, HomFile, MatrixRows, StageJson, TupleJson};

pub const Z_IDENTIFICATION: &str = "identity";

fn images_to_hom(
    construction: &str,
    registry: &Registry,
    target: &Arc<FiniteGroup>,
    bar: bool,
    images: &BTreeMap<String, MatrixRows>,
) -> Result<Hom, CliError> {
    let c = parse(construction, registry)?;
    let mut map = BTreeMap::new();
    for (g, rows) in images {
        let id: GenId = g.parse().map_err(|e| CliError::Parse(format!("generator `{}`: {}", g, e)))?;
        map.insert(id, element_index(target, rows, bar)?);
    }
    Ok(Hom::new(c, target.clone(), map)?)
}

/// Build the homomorphism described by a hom file. Blocks embedded in the
/// file take precedence over `registry`.
pub fn load_hom(file: &HomFile, registry: &Registry, cap: usize) -> Result<Hom, CliError> {
    let own;
    let registry = match &file.blocks {
        Some(b) => {
            own = registry_from_json(b)?;
            &own
        }
        None => registry,
    };
    let target = file.target.build(cap)?;
    images_to_hom(&file.construction, registry, &target, file.target.is_bar(), &file.images)
}

pub fn images_json(h: &Hom) -> BTreeMap<String, MatrixRows> {
    h.images().iter().map(|(g, i)| (g.to_string(), matrix_rows(h.target().element(*i)))).collect()
}

pub fn hom_file(h: &Hom, target: &GroupJson) -> HomFile {
    HomFile { blocks: Some(blocks_json(h)), construction: h.domain().to_string(), target: target.clone(), images: images_json(h) }
}

fn blocks_json(h: &Hom) -> Vec<BlockJson> {
    let mut seen = BTreeMap::new();
    for b in h.domain().blocks() {
        seen.entry(b.id.clone()).or_insert_with(|| BlockJson::from_spec(&b));
    }
    seen.into_values().collect()
}

fn stage_json(s: &FactorStage) -> StageJson {
    StageJson {
        tuple: TupleJson { root: s.tuple.root.to_string(), z_nodes: s.tuple.z_nodes.iter().map(|z| z.to_string()).collect() },
        k: s.k,
        precision: s.alpha.precision(),
        alpha: s.alpha.to_columns(),
        gamma: s.gamma.render().into_iter().collect(),
        witness: s.witness.to_string(),
        construction: s.rho.domain().to_string(),
        images: images_json(&s.rho),
    }
}

pub fn certificate_json(rho: &Hom, target: &GroupJson, cert: &FactorizationCertificate) -> CertificateJson {
    CertificateJson {
        blocks: blocks_json(rho),
        construction: rho.domain().to_string(),
        target: target.clone(),
        images: images_json(rho),
        l: cert.l,
        z_identification: Z_IDENTIFICATION.to_string(),
        stages: cert.stages.iter().map(stage_json).collect(),
        final_construction: cert.final_construction().to_string(),
        final_extension_rank: cert.final_construction().extension_rank(),
    }
}

/// Factor `rho` and serialize the result.
pub fn factor_to_certificate(rho: &Hom, target: &GroupJson) -> Result<CertificateJson, CliError> {
    let cert = factor_full(rho, None)?;
    cert.check(rho).map_err(|e| CliError::Verify(e.to_string()))?;
    Ok(certificate_json(rho, target, &cert))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub stages: usize,
    pub l: u32,
    pub initial_extension_rank: usize,
    pub final_construction: String,
    pub final_extension_rank: usize,
}

fn fail(msg: impl Into<String>) -> CliError {
    CliError::Verify(msg.into())
}

fn parse_stage(s: &StageJson, current: &Hom, registry: &Registry, target: &Arc<FiniteGroup>, bar: bool) -> Result<FactorStage, CliError> {
    let c = current.domain();
    let root: OccurrencePath = s.tuple.root.parse().map_err(|e| fail(format!("tuple root: {}", e)))?;
    let z_nodes = s
        .tuple
        .z_nodes
        .iter()
        .map(|z| z.parse::<OccurrencePath>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(format!("tuple: {}", e)))?;
    let tuple = PrincipalTuple { root, z_nodes };
    let cols: Vec<Vec<i64>> = s.alpha.iter().map(|c| c.iter().map(|v| *v as i64).collect()).collect();
    let alpha = AAutMatrix::from_columns(&cols, c.prime(), s.precision).map_err(|e| fail(format!("alpha: {}", e)))?;
    let mut table = BTreeMap::new();
    for (g, w) in &s.gamma {
        let id: GenId = g.parse().map_err(|e| fail(format!("gamma key `{}`: {}", g, e)))?;
        let word: Word = w.parse().map_err(|e| fail(format!("gamma({}): {}", g, e)))?;
        table.insert(id, word);
    }
    let ids = c.generator_ids();
    if table.len() != ids.len() || ids.iter().any(|g| !table.contains_key(g)) {
        return Err(fail("gamma does not list exactly the generators of the domain"));
    }
    for w in table.values() {
        if let Some(g) = w.support().into_iter().find(|g| !c.has_generator(g)) {
            return Err(fail(format!("gamma uses {}, which is not a generator", g)));
        }
    }
    let gamma = GenWordMap { domain: c.clone(), codomain: c.clone(), table };
    let witness: Witness = s.witness.parse().map_err(|e| fail(format!("witness: {}", e)))?;
    let sub = project(c, &witness).map_err(|e| fail(format!("witness: {}", e)))?.sub;
    if sub.to_string() != s.construction {
        return Err(fail(format!("witness selects {}, certificate says {}", sub, s.construction)));
    }
    let rho = images_to_hom(&s.construction, registry, target, bar, &s.images).map_err(|e| fail(format!("factored homomorphism: {}", e)))?;
    if *rho.domain() != sub {
        return Err(fail("factored homomorphism is not defined on the selected subconstruction"));
    }
    Ok(FactorStage { tuple, k: s.k, alpha, gamma, witness, rho })
}

/// First path at which two JSON values differ.
fn first_difference(a: &Value, b: &Value, path: String) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                (Some(u), Some(v)) => first_difference(u, v, format!("{}.{}", path, k)),
                _ => Some(format!("{}.{}", path, k)),
            })
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Some(format!("{} (length {} vs {})", path, x.len(), y.len()));
            }
            x.iter().zip(y).enumerate().find_map(|(i, (u, v))| first_difference(u, v, format!("{}[{}]", path, i)))
        }
        _ => (a != b).then_some(path),
    }
}

/// Re-check a certificate using only its own contents: rebuild `rho`, replay
/// every stage identity, check the final rank, then recompute the canonical
/// factorization and compare field by field.
pub fn verify_certificate(c: &CertificateJson, cap: usize) -> Result<VerifyReport, CliError> {
    let registry = registry_from_json(&c.blocks).map_err(|e| fail(format!("blocks: {}", e)))?;
    let target = c.target.build(cap).map_err(|e| fail(format!("target: {}", e)))?;
    let bar = c.target.is_bar();
    let rho = images_to_hom(&c.construction, &registry, &target, bar, &c.images).map_err(|e| fail(format!("homomorphism: {}", e)))?;
    if c.z_identification != Z_IDENTIFICATION {
        return Err(fail(format!("unknown identification `{}`", c.z_identification)));
    }
    let mut current = rho.clone();
    for (i, s) in c.stages.iter().enumerate() {
        let stage = parse_stage(s, &current, &registry, &target, bar).map_err(|e| fail(format!("stage {}: {}", i, e)))?;
        stage.check(&current).map_err(|e| fail(format!("stage {}: {}", i, e)))?;
        current = stage.rho;
    }
    let e = current.domain().extension_rank();
    if current.domain().to_string() != c.final_construction || e != c.final_extension_rank {
        return Err(fail("final construction does not match the last stage"));
    }
    if e > c.l as usize {
        return Err(fail(format!("final extension rank {} exceeds l = {}", e, c.l)));
    }
    if c.stages.len() > rho.domain().extension_count() {
        return Err(fail("more stages than extension nodes"));
    }
    let canonical = factor_to_certificate(&rho, &c.target).map_err(|e| fail(format!("recomputation: {}", e)))?;
    let (a, b) = (serde_json::to_value(&canonical).expect("serializable"), serde_json::to_value(c).expect("serializable"));
    if let Some(path) = first_difference(&a, &b, "certificate".to_string()) {
        return Err(fail(format!("differs from the canonical factorization at {}", path)));
    }
    Ok(VerifyReport {
        ok: true,
        stages: c.stages.len(),
        l: c.l,
        initial_extension_rank: rho.domain().extension_rank(),
        final_construction: c.final_construction.clone(),
        final_extension_rank: e,
    })
}
