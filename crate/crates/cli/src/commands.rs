//! The subcommands, as library functions returning serializable reports.

use std::sync::Arc;

use serde::Serialize;
use symlen_core::bounds::{
    bar_l_bound, construction_bound, f, massey_symbol_bound, uniform_bound, BoundTable, BoundValue, MasseyMode,
};
use symlen_core::cohomology::{ring_of, syml_exact, syml_table, Syml, DEFAULT_STATE_CAP};
use symlen_core::construction::{parse, principal_tuples, subconstructions, Construction, Registry};
use symlen_core::fpgroup::{max_abelian_log_order, reduce_results, subgroup_closure, AbelianSearch, FiniteGroup, GroupError, Subgroup};
use symlen_core::homomorph::Hom;

use crate::certificate::{factor_to_certificate, verify_certificate, VerifyReport};
use crate::error::CliError;
use crate::formats::{matrix_rows, CertificateJson, GroupJson, MatrixRows};

#[derive(Debug, Clone, Serialize)]
pub struct TupleReport {
    pub root: String,
    pub rank: usize,
    pub z_nodes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub construction: String,
    pub prime: u64,
    pub extension_rank: usize,
    pub extension_nodes: usize,
    pub generators: usize,
    pub relations: usize,
    pub subconstructions: usize,
    pub tuples: Vec<TupleReport>,
}

pub fn cmd_analyze(text: &str, registry: &Registry) -> Result<AnalyzeReport, CliError> {
    let c = parse(text, registry)?;
    let tuples = principal_tuples(&c)
        .into_iter()
        .map(|t| TupleReport {
            root: t.root.to_string(),
            rank: t.rank(),
            z_nodes: t.z_nodes.iter().map(|z| format!("z@{}", z)).collect(),
        })
        .collect();
    Ok(AnalyzeReport {
        construction: c.to_string(),
        prime: c.prime(),
        extension_rank: c.extension_rank(),
        extension_nodes: c.extension_count(),
        generators: c.generator_ids().len(),
        relations: c.relations(1)?.len(),
        subconstructions: subconstructions(&c).len(),
        tuples,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub order: usize,
    pub generators: Vec<MatrixRows>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LValueReport {
    pub group: GroupJson,
    pub bound_only: bool,
    pub order: Option<usize>,
    pub l: Option<u32>,
    pub witness: Option<WitnessReport>,
    /// `floor((m+1)^2/4)` for `U_m`, `floor(m^2/4)+m-1` for its corner quotient.
    pub analytic_bound: Option<u64>,
    pub matches_bound: Option<bool>,
}

/// Largest abelian subgroup, splitting the top-level branches over `threads`
/// workers. The answer does not depend on the thread count.
pub fn max_abelian_parallel(g: &FiniteGroup, threads: usize) -> Subgroup {
    let search = AbelianSearch::new(g);
    let floor = search.greedy();
    let roots = search.branches();
    let threads = threads.max(1).min(roots.len().max(1));
    let found: Vec<Subgroup> = if threads == 1 {
        roots.iter().filter_map(|r| search.search_branch(*r, floor.order())).collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let (search, roots, floor) = (&search, &roots, floor.order());
                    s.spawn(move || roots.iter().skip(t).step_by(threads).filter_map(|r| search.search_branch(*r, floor)).collect::<Vec<_>>())
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("search worker")).collect()
        })
    };
    reduce_results(found).unwrap_or(floor)
}

fn log_p(n: usize, p: u64) -> u32 {
    let (mut n, mut k) = (n, 0);
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

/// Generators of `s` picked greedily in element order, skipping anything
/// already generated.
fn generating_set(g: &FiniteGroup, s: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = subgroup_closure(g, &[]);
    for x in s.sorted_elements() {
        if !span.contains(x) {
            gens.push(x);
            span = subgroup_closure(g, &gens);
        }
    }
    gens
}

pub fn cmd_lvalue(group: &GroupJson, cap: usize, threads: usize) -> Result<LValueReport, CliError> {
    let analytic_bound = match group {
        GroupJson::Um { m, .. } => Some(max_abelian_log_order(*m) as u64),
        GroupJson::Ubar { m, .. } => Some(bar_l_bound(*m)),
        _ => None,
    };
    let g = match group.build(cap) {
        Ok(g) => g,
        Err(CliError::Failed(_)) if matches!(group.to_core().build(cap), Err(GroupError::CapExceeded { .. })) => {
            return Ok(LValueReport { group: group.clone(), bound_only: true, order: None, l: None, witness: None, analytic_bound, matches_bound: None });
        }
        Err(e) => return Err(e),
    };
    let best = max_abelian_parallel(&g, threads);
    let l = log_p(best.order(), g.prime());
    let gens = generating_set(&g, &best).iter().map(|i| matrix_rows(g.element(*i))).collect();
    Ok(LValueReport {
        group: group.clone(),
        bound_only: false,
        order: Some(best.order()),
        l: Some(l),
        witness: Some(WitnessReport { order: best.order(), generators: gens }),
        analytic_bound,
        matches_bound: analytic_bound.map(|b| b == l as u64),
    })
}

pub fn cmd_factor(rho: &Hom, target: &GroupJson) -> Result<CertificateJson, CliError> {
    factor_to_certificate(rho, target)
}

pub fn cmd_verify(cert: &CertificateJson, cap: usize) -> Result<VerifyReport, CliError> {
    verify_certificate(cert, cap)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub mode: String,
    pub n: usize,
    pub construction: Option<String>,
    pub group: Option<GroupJson>,
    pub table: Vec<String>,
    pub e: Option<usize>,
    pub l: Option<u32>,
    pub f_value: String,
}

fn table_row(t: &BoundTable, n: usize) -> Vec<String> {
    (1..=n.max(1)).map(|m| t.get(m).to_string()).collect()
}

/// `f(e(c), n)` for a construction, or `f(l(G), n)` for a finite target.
pub fn cmd_bounds(
    n: usize,
    construction: Option<&str>,
    group: Option<&GroupJson>,
    registry: &Registry,
    l_override: Option<u32>,
    cap: usize,
) -> Result<BoundReport, CliError> {
    let blocks: Vec<_> = registry.iter().cloned().collect();
    match (construction, group) {
        (Some(text), None) => {
            let c: Construction = parse(text, registry)?;
            let table = BoundTable::for_blocks(&c.blocks(), n)?;
            let v = construction_bound(&c, n, &table)?;
            if v.is_infinite() {
                return Err(CliError::Hypothesis(format!("infinite table entry below degree {}", n)));
            }
            Ok(BoundReport {
                mode: "construction".into(),
                n,
                construction: Some(c.to_string()),
                group: None,
                table: table_row(&table, n),
                e: Some(c.extension_rank()),
                l: None,
                f_value: v.to_string(),
            })
        }
        (None, Some(gj)) => {
            let table = BoundTable::for_blocks(&blocks, n)?;
            let g: Arc<FiniteGroup> = gj.build(cap)?;
            let u = uniform_bound(&g, n, &table, l_override)?;
            Ok(BoundReport {
                mode: "uniform".into(),
                n,
                construction: None,
                group: Some(gj.clone()),
                table: table_row(&table, n),
                e: None,
                l: Some(u.l),
                f_value: u.value.to_string(),
            })
        }
        _ => Err(CliError::Parse("give exactly one of a construction or a group".into())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MasseyReport {
    pub m: usize,
    pub p: u64,
    pub mode: String,
    pub bound: u64,
    pub analytic_bound: u64,
}

pub fn cmd_massey(m: usize, p: u64, exact_l: bool, cap: usize) -> Result<MasseyReport, CliError> {
    let analytic = massey_symbol_bound(m, p, MasseyMode::Analytic, None)?;
    let (mode, bound) = if exact_l {
        ("exact_l", massey_symbol_bound(m, p, MasseyMode::ExactL, Some(cap))?)
    } else {
        ("analytic_bound", analytic)
    };
    Ok(MasseyReport { m, p, mode: mode.into(), bound, analytic_bound: analytic })
}

#[derive(Debug, Clone, Serialize)]
pub struct RingDump {
    pub p: u64,
    pub d1: usize,
    pub d2: usize,
    /// `cup[i][j]` is the class of `a_i ∪ a_j`.
    pub cup: Vec<Vec<Vec<u64>>>,
    pub h1_labels: Vec<String>,
    pub h2_labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub construction: String,
    pub ring: RingDump,
    pub max_syml: Option<u32>,
    pub f_bound: String,
    pub pass: bool,
    pub omega: Option<Vec<u64>>,
    pub syml: Option<u32>,
}

fn syml_value(s: Syml) -> Option<u32> {
    match s {
        Syml::Finite(k) => Some(k),
        Syml::NotReachable => None,
    }
}

/// Exact symbol lengths over `H^2` next to the bound `f(e(c), 2)`.
pub fn cmd_oracle(text: &str, registry: &Registry, cap: Option<usize>, omega: Option<&[u64]>) -> Result<OracleReport, CliError> {
    let c = parse(text, registry)?;
    let cap = cap.unwrap_or(DEFAULT_STATE_CAP);
    let r = ring_of(&c)?;
    let table = syml_table(&r, cap)?;
    let max_syml = if table.iter().any(|d| d.is_none()) { None } else { table.iter().map(|d| d.unwrap_or(0)).max() };
    let bt = BoundTable::for_blocks(&c.blocks(), 2)?;
    let bound = f(c.extension_rank(), 2, &bt);
    let pass = match max_syml {
        Some(k) => BoundValue::Finite(k as u64) <= bound,
        None => bound.is_infinite(),
    };
    let syml = match omega {
        Some(w) => syml_value(syml_exact(&r, w, cap)?),
        None => None,
    };
    let cup = (0..r.d1).map(|i| (0..r.d1).map(|j| r.cup_basis(i, j).to_vec()).collect()).collect();
    Ok(OracleReport {
        construction: c.to_string(),
        ring: RingDump { p: r.p, d1: r.d1, d2: r.d2, cup, h1_labels: r.h1_labels.clone(), h2_labels: r.h2_labels.clone() },
        max_syml,
        f_bound: bound.to_string(),
        pass,
        omega: omega.map(|w| w.to_vec()),
        syml,
    })
}
