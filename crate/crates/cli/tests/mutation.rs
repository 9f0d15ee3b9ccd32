mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use symlen::certificate::factor_to_certificate;
use symlen::commands::cmd_verify;
use symlen::formats::CertificateJson;
use symlen::CliError;
use symlen_core::fpgroup::DEFAULT_CAP;

/// Every single-leaf edit of `v`: numbers incremented, strings extended,
/// arrays shortened.
fn mutations(v: &Value) -> Vec<Value> {
    let mut out = Vec::new();
    match v {
        Value::Number(n) => out.push(Value::from(n.as_u64().map(|x| x as i64).or(n.as_i64()).unwrap() + 1)),
        Value::String(s) => out.push(Value::String(format!("{}E", s))),
        Value::Bool(b) => out.push(Value::Bool(!b)),
        Value::Array(a) => {
            if !a.is_empty() {
                out.push(Value::Array(a[..a.len() - 1].to_vec()));
            }
            for (i, x) in a.iter().enumerate() {
                for m in mutations(x) {
                    let mut b = a.clone();
                    b[i] = m;
                    out.push(Value::Array(b));
                }
            }
        }
        Value::Object(o) => {
            for (k, x) in o {
                for m in mutations(x) {
                    let mut b = o.clone();
                    b.insert(k.clone(), m);
                    out.push(Value::Object(b));
                }
            }
        }
        Value::Null => {}
    }
    out
}

fn certificates(count: usize) -> Vec<CertificateJson> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();
    while out.len() < count {
        for p in [2u64, 3] {
            for t in common::targets(p) {
                let c = common::random_construction(&mut rng, p, 3, 5);
                let g = t.build(DEFAULT_CAP).unwrap();
                let rho = common::random_hom(&mut rng, &c, &g);
                let cert = factor_to_certificate(&rho, &t).unwrap();
                if !cert.stages.is_empty() && out.len() < count {
                    out.push(cert);
                }
            }
        }
    }
    out
}

#[test]
fn verify_rejects_single_field_mutations() {
    let mut checked = 0;
    for cert in certificates(6) {
        cmd_verify(&cert, DEFAULT_CAP).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        for m in mutations(&v) {
            let Ok(bad) = serde_json::from_value::<CertificateJson>(m) else { continue };
            match cmd_verify(&bad, DEFAULT_CAP) {
                Err(CliError::Verify(_)) => checked += 1,
                other => panic!("mutation accepted or misreported: {:?}\n{}", other, serde_json::to_string(&bad).unwrap()),
            }
        }
    }
    assert!(checked > 100, "only {} mutations checked", checked);
}

#[test]
fn gamma_edits_name_the_generator() {
    for cert in certificates(4) {
        for (i, stage) in cert.stages.iter().enumerate() {
            for key in stage.gamma.keys() {
                let mut bad = cert.clone();
                let w = bad.stages[i].gamma.get_mut(key).unwrap();
                *w = format!("{} {}", w, key);
                if let Err(CliError::Verify(msg)) = cmd_verify(&bad, DEFAULT_CAP) {
                    assert!(msg.contains(key.as_str()) && msg.contains("stage"), "{}", msg);
                } else {
                    panic!("edited gamma({}) accepted", key);
                }
            }
        }
    }
}
