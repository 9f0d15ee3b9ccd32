//! JSON file formats: block registries, group specs, homomorphisms,
//! factorization certificates.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use symlen_core::construction::{parse_local_word, BlockKind, BlockSpec, CupData, LocalWord, Registry};
use symlen_core::fpgroup::{FiniteGroup, FpMatrix, GroupSpec};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingData {
    pub d1: usize,
    pub d2: usize,
    pub cup: Vec<Vec<Vec<u64>>>,
}

/// One entry of a block registry file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub id: String,
    /// `trivial`, `free_pro_cyclic`, `demushkin`, `demushkin2`, `sign` or `custom`.
    pub kind: String,
    pub p: u64,
    #[serde(default)]
    pub theta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Presentation>,
    /// `bounds[m-1]` is `M_m`; `null` means infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<Option<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingData>,
}

fn render_local_word(w: &LocalWord, names: &[String]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter()
        .map(|(i, e)| if *e == 1 { names[*i].clone() } else { format!("{}^{}", names[*i], e) })
        .collect::<Vec<_>>()
        .join(" ")
}

impl BlockJson {
    pub fn from_spec(b: &BlockSpec) -> Self {
        let names = b.generator_names();
        let presentation = match &b.kind {
            BlockKind::Demushkin { .. } | BlockKind::Custom { .. } => Some(Presentation {
                generators: names.clone(),
                relations: b.relations().iter().map(|r| render_local_word(r, &names)).collect(),
            }),
            _ => None,
        };
        let (bounds, ring) = match &b.kind {
            BlockKind::Custom { bounds, ring, .. } => {
                (Some(bounds.clone()), ring.as_ref().map(|r| RingData { d1: r.d1, d2: r.d2, cup: r.cup.clone() }))
            }
            _ => (None, None),
        };
        let kind = match b.kind {
            BlockKind::Trivial => "trivial",
            BlockKind::FreeProCyclic { .. } => "free_pro_cyclic",
            BlockKind::Demushkin { .. } => "demushkin",
            BlockKind::SignOfOrderTwo => "sign",
            BlockKind::Custom { .. } => "custom",
        };
        let theta = match b.kind {
            BlockKind::SignOfOrderTwo => Vec::new(),
            _ => b.thetas(),
        };
        BlockJson { id: b.id.clone(), kind: kind.to_string(), p: b.prime, theta, presentation, bounds, ring }
    }

    pub fn to_spec(&self) -> Result<BlockSpec, CliError> {
        let bad = |msg: &str| CliError::Parse(format!("block `{}`: {}", self.id, msg));
        let theta_for = |n: usize| -> Result<Vec<i64>, CliError> {
            if self.theta.len() != n {
                return Err(bad(&format!("expected {} theta values, got {}", n, self.theta.len())));
            }
            Ok(self.theta.clone())
        };
        let presentation = || self.presentation.as_ref().ok_or_else(|| bad("missing presentation"));
        let relations = |pres: &Presentation| -> Result<Vec<LocalWord>, CliError> {
            pres.relations.iter().map(|r| parse_local_word(r, &pres.generators).map_err(CliError::from)).collect()
        };
        let kind = match self.kind.as_str() {
            "trivial" => BlockKind::Trivial,
            "free_pro_cyclic" => {
                let t = if self.theta.is_empty() { vec![1] } else { theta_for(1)? };
                BlockKind::FreeProCyclic { theta: t[0] }
            }
            "sign" => BlockKind::SignOfOrderTwo,
            "demushkin2" => return check(BlockSpec::demushkin2(&self.id, self.p)),
            "demushkin" => {
                let pres = presentation()?;
                let rels = relations(pres)?;
                if rels.len() != 1 {
                    return Err(bad("a demushkin block has exactly one relation"));
                }
                BlockKind::Demushkin { d: pres.generators.len(), relation: rels[0].clone(), theta: theta_for(pres.generators.len())? }
            }
            "custom" => {
                let pres = presentation()?;
                BlockKind::Custom {
                    generators: pres.generators.clone(),
                    relations: relations(pres)?,
                    theta: theta_for(pres.generators.len())?,
                    bounds: self.bounds.clone().unwrap_or_default(),
                    ring: self.ring.as_ref().map(|r| CupData { d1: r.d1, d2: r.d2, cup: r.cup.clone() }),
                }
            }
            other => return Err(bad(&format!("unknown kind `{}`", other))),
        };
        Ok(BlockSpec::new(self.id.clone(), self.p, kind)?)
    }
}

fn check(b: BlockSpec) -> Result<BlockSpec, CliError> {
    b.validate()?;
    Ok(b)
}

pub fn registry_from_json(blocks: &[BlockJson]) -> Result<Registry, CliError> {
    let mut r = Registry::new();
    for b in blocks {
        r.insert(b.to_spec()?)?;
    }
    Ok(r)
}

/// Blocks available when no registry file is given: `T` trivial, `A` and `B`
/// free pro-cyclic with theta `1` and `1+p`, `D` two-generator Demushkin,
/// and `S` the sign block when `p = 2`.
pub fn default_registry(p: u64) -> Result<Registry, CliError> {
    let mut r = Registry::new();
    r.insert(BlockSpec::trivial("T", p))?;
    r.insert(BlockSpec::free_pro_cyclic("A", p, 1)?)?;
    r.insert(BlockSpec::free_pro_cyclic("B", p, 1 + p as i64)?)?;
    r.insert(BlockSpec::demushkin2("D", p))?;
    if p == 2 {
        r.insert(BlockSpec::sign("S"))?;
    }
    Ok(r)
}

/// Target group description, as JSON or as `um:M,P`, `ubar:M,P`, `cyclic:P,K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupJson {
    Um { m: usize, p: u64 },
    Ubar { m: usize, p: u64 },
    Cyclic { p: u64, k: u32 },
    Custom {
        p: u64,
        generators: Vec<Vec<Vec<i64>>>,
        #[serde(default)]
        bar: bool,
    },
}

impl GroupJson {
    /// Parse `um:M,P` / `ubar:M,P` / `cyclic:P,K`; anything else is read as a file.
    pub fn from_arg(arg: &str) -> Result<Self, CliError> {
        if let Some((kind, rest)) = arg.split_once(':') {
            let nums: Vec<u64> = rest
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Parse(format!("bad group spec `{}`", arg))))
                .collect::<Result<_, _>>()?;
            if nums.len() != 2 {
                return Err(CliError::Parse(format!("bad group spec `{}`", arg)));
            }
            return match kind {
                "um" => Ok(GroupJson::Um { m: nums[0] as usize, p: nums[1] }),
                "ubar" => Ok(GroupJson::Ubar { m: nums[0] as usize, p: nums[1] }),
                "cyclic" => Ok(GroupJson::Cyclic { p: nums[0], k: nums[1] as u32 }),
                _ => Err(CliError::Parse(format!("unknown group kind `{}`", kind))),
            };
        }
        let text = std::fs::read_to_string(arg)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_core(&self) -> GroupSpec {
        match self.clone() {
            GroupJson::Um { m, p } => GroupSpec::Unitriangular { m, p },
            GroupJson::Ubar { m, p } => GroupSpec::BarUnitriangular { m, p },
            GroupJson::Cyclic { p, k } => GroupSpec::Cyclic { p, k },
            GroupJson::Custom { p, generators, bar } => GroupSpec::Custom { p, generators, bar },
        }
    }

    pub fn prime(&self) -> u64 {
        self.to_core().prime()
    }

    pub fn build(&self, cap: usize) -> Result<Arc<FiniteGroup>, CliError> {
        Ok(Arc::new(self.to_core().build(cap)?))
    }

    pub fn is_bar(&self) -> bool {
        match self {
            GroupJson::Ubar { .. } => true,
            GroupJson::Custom { bar, .. } => *bar,
            _ => false,
        }
    }
}

pub type MatrixRows = Vec<Vec<i64>>;

pub fn matrix_rows(m: &FpMatrix) -> MatrixRows {
    m.rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()
}

/// Index of the element given by `rows` in `g`.
pub fn element_index(g: &FiniteGroup, rows: &MatrixRows, bar: bool) -> Result<usize, CliError> {
    let m = FpMatrix::from_rows(rows, g.prime() as u8, bar)?;
    g.index_of(&m).ok_or_else(|| CliError::InvalidHom(vec![format!("matrix {:?} is not in the target group", rows)]))
}

/// Homomorphism file: construction text, target and generator images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockJson>>,
    pub construction: String,
    pub target: GroupJson,
    pub images: BTreeMap<String, MatrixRows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleJson {
    pub root: String,
    pub z_nodes: Vec<String>,
}

/// One factoring stage. `alpha` lists columns; `images` is `rho''` on the
/// smaller construction `construction`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageJson {
    pub tuple: TupleJson,
    pub k: usize,
    pub precision: u32,
    pub alpha: Vec<Vec<u64>>,
    pub gamma: BTreeMap<String, String>,
    pub witness: String,
    pub construction: String,
    pub images: BTreeMap<String, MatrixRows>,
}

/// Self-contained factorization certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub blocks: Vec<BlockJson>,
    pub construction: String,
    pub target: GroupJson,
    pub images: BTreeMap<String, MatrixRows>,
    pub l: u32,
    /// Identification of the quotient's distinguished generator with `Z`.
    pub z_identification: String,
    pub stages: Vec<StageJson>,
    pub final_construction: String,
    pub final_extension_rank: usize,
}
