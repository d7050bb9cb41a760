//! Independent brute-force verification: the spectrum poset with its
//! locally-closedness oracle, strong-CSP subset search, the graded-ideal
//! primality invariant, finite-graph consistency checks, and the seeded
//! random-graph fuzz harness.
//!
//! Everything here deliberately avoids the fast paths it cross-checks:
//! local closedness is decided from poset intersections, strong CSP from a
//! subset search, and hereditary saturated families from the 2ⁿ filter.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{trichotomy_report, CycleError};
use crate::graph::{EdgeSpec, Graph, GraphError, Multiplicity, VertexId, VertexSet};
use crate::ideal::{
    breaking_vertices, enumerate_hs_sets, is_hereditary, is_saturated, pair_leq, pair_meet,
    AdmissiblePair, IdealError,
};
use crate::spectrum::{
    graded_part, is_completely_irreducible, is_locally_closed_fast, is_primitive,
    is_strongly_primitive, rationality, spectrum, strong_csp_finite, FieldDesc, IdealDesc,
    LaurentIrreducible, PolyPart, PrimeDesc, Rationality, RuleId, SpectrumError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("use fast path")]
    UseFastPath,
    #[error("graph too large for brute-force enumeration (limit {0})")]
    TooLarge(usize),
    #[error("prime descriptor not in the poset")]
    NotInPoset,
    #[error("degenerate fuzz parameters: {0}")]
    DegenerateParams(String),
}

/// The prime spectrum under containment, with non-graded families collapsed
/// to single family nodes.
#[derive(Debug, Clone)]
pub struct SpectrumPoset {
    primes: Vec<PrimeDesc>,
    leq: Vec<Vec<bool>>,
}

impl SpectrumPoset {
    pub fn primes(&self) -> &[PrimeDesc] {
        &self.primes
    }

    pub fn index_of(&self, p: &PrimeDesc) -> Option<usize> {
        let key = p.family_key();
        self.primes.iter().position(|q| *q == key)
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn leq(&self, p: &PrimeDesc, q: &PrimeDesc) -> Result<bool, OracleError> {
        let i = self.index_of(p).ok_or(OracleError::NotInPoset)?;
        let j = self.index_of(q).ok_or(OracleError::NotInPoset)?;
        Ok(self.leq[i][j])
    }

    /// Covering relations (transitive reduction), for Hasse diagrams.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.primes.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq[i][j] {
                    continue;
                }
                let covered = (0..n).any(|k| k != i && k != j && self.leq[i][k] && self.leq[k][j]);
                if !covered {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Containment of spectrum nodes, derived from generator membership.
///
/// Graded against graded is the pair order. A graded ideal lies in a
/// non-graded prime iff it lies in its graded part. A non-graded prime lies
/// in an ideal only if the ideal also swallows the cycle vertices
/// (`c⁰ ⊆ H₂`); within one family, distinct members are incomparable.
fn desc_leq(g: &Graph, p: &PrimeDesc, q: &PrimeDesc) -> Result<bool, OracleError> {
    let gr_p = graded_part(g, p)?;
    let gr_q_full = AdmissiblePair::full(g, q.h().clone())?;
    Ok(match (p, q) {
        (
            PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. },
            PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. },
        ) => pair_leq(&gr_p, &graded_part(g, q)?),
        (PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. }, _) => {
            pair_leq(&gr_p, &gr_q_full)
        }
        (
            PrimeDesc::NonGradedFamily { cycle, .. } | PrimeDesc::NonGradedMember { cycle, .. },
            _,
        ) => {
            if p.family_key() == q.family_key() {
                return Ok(true);
            }
            let on = cycle.vertices_on(g)?;
            match q {
                PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. } => {
                    pair_leq(&gr_p, &graded_part(g, q)?) && on.iter().all(|v| q.h().contains(v))
                }
                _ => pair_leq(&gr_p, &gr_q_full) && on.iter().all(|v| q.h().contains(v)),
            }
        }
    })
}

pub fn build_spectrum_poset(g: &Graph) -> Result<SpectrumPoset, OracleError> {
    let primes = spectrum(g)?;
    let n = primes.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for (j, q) in primes.iter().enumerate() {
            leq[i][j] = desc_leq(g, &primes[i], q)?;
        }
    }
    Ok(SpectrumPoset { primes, leq })
}

/// Local closedness from the poset: `P` is locally closed iff it is not the
/// intersection of the primes properly above it.
///
/// Each whole family above `P` contributes its graded part — the
/// intersection over the infinitely many members `I+⟨p(c)⟩` along distinct
/// irreducibles `p` collapses to `I`, since K[x,x⁻¹] is a PID with
/// infinitely many pairwise non-associate irreducibles over any field. An
/// empty set of primes above means locally closed (the empty intersection
/// is the improper ideal, which strictly contains `P`). A non-graded `P` is
/// always locally closed: every prime above it contains the cycle vertices
/// `c⁰`, which live outside `P ∩ E⁰ = H`.
pub fn locally_closed_oracle(
    g: &Graph,
    poset: &SpectrumPoset,
    p: &PrimeDesc,
) -> Result<bool, OracleError> {
    let i = poset.index_of(p).ok_or(OracleError::NotInPoset)?;
    let above: Vec<&PrimeDesc> = (0..poset.primes.len())
        .filter(|&j| j != i && poset.leq[i][j])
        .map(|j| &poset.primes[j])
        .collect();
    if above.is_empty() {
        return Ok(true);
    }
    match p {
        PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. } => {
            let contributions: Vec<AdmissiblePair> = above
                .iter()
                .map(|q| match q {
                    PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. } => {
                        graded_part(g, q).map_err(OracleError::from)
                    }
                    _ => AdmissiblePair::full(g, q.h().clone()).map_err(OracleError::from),
                })
                .collect::<Result<_, _>>()?;
            let meet = pair_meet(g, &contributions)?;
            Ok(meet != graded_part(g, p)?)
        }
        PrimeDesc::NonGradedFamily { cycle, .. } | PrimeDesc::NonGradedMember { cycle, .. } => {
            // every prime above contains c⁰, and c⁰ misses H
            let on = cycle.vertices_on(g)?;
            Ok(above.iter().all(|q| on.iter().all(|v| q.h().contains(v))))
        }
    }
}

/// Strong CSP by subset search: some `S ⊆ E⁰` reaches-covers every vertex
/// and lies inside every non-empty hereditary saturated subset. Candidates
/// are drawn from the intersection of the non-empty hereditary saturated
/// sets (computed via the full enumeration, not via singleton closures).
pub fn strong_csp_bruteforce(g: &Graph) -> Result<bool, OracleError> {
    strong_csp_bruteforce_bounded(g, 10)
}

pub fn strong_csp_bruteforce_bounded(g: &Graph, bound: usize) -> Result<bool, OracleError> {
    if g.vertices().len() > bound {
        return Err(OracleError::UseFastPath);
    }
    let nonempty: Vec<VertexSet> = enumerate_hs_sets(g)?
        .into_iter()
        .filter(|h| !h.is_empty())
        .collect();
    let mut pool: VertexSet = g.vertex_set();
    for h in &nonempty {
        pool = pool.intersection(h).cloned().collect();
    }
    let pool: Vec<VertexId> = pool.into_iter().collect();
    for mask in 1u64..(1 << pool.len()) {
        let s: Vec<&VertexId> = pool
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, v)| v)
            .collect();
        let covers = g
            .vertices()
            .iter()
            .all(|u| s.iter().any(|w| g.reaches(u, w).unwrap_or(false)));
        if covers {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The 2ⁿ filter over all subsets: the independent oracle for
/// [`enumerate_hs_sets`].
pub fn hs_sets_bruteforce(g: &Graph) -> Result<Vec<VertexSet>, OracleError> {
    let n = g.vertices().len();
    if n > 12 {
        return Err(OracleError::TooLarge(12));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        let h: VertexSet = g
            .vertices()
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, v)| v.clone())
            .collect();
        if is_hereditary(g, &h)? && is_saturated(g, &h)? {
            out.push(h);
        }
    }
    out.sort();
    Ok(out)
}

/// Outcome of the graded-ideal primality invariant: any graded ideal that
/// is not the meet of the primes properly above it must itself be prime.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeMeetReport {
    pub pairs_checked: u64,
    pub primality_demands: u64,
    pub violations: Vec<String>,
}

impl PrimeMeetReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn prime_meet_invariant_check(g: &Graph) -> Result<PrimeMeetReport, OracleError> {
    let all = g.vertex_set();
    let nodes = spectrum(g)?;
    let graded_pairs: Vec<AdmissiblePair> = nodes
        .iter()
        .filter(|p| p.is_graded())
        .map(|p| graded_part(g, p).map_err(OracleError::from))
        .collect::<Result<_, _>>()?;

    let mut report = PrimeMeetReport {
        pairs_checked: 0,
        primality_demands: 0,
        violations: Vec::new(),
    };
    for h in enumerate_hs_sets(g)? {
        if h == all {
            continue; // I(E⁰,∅) is the improper ideal
        }
        let b: Vec<VertexId> = breaking_vertices(g, &h)?.into_iter().collect();
        for mask in 0u64..(1 << b.len()) {
            let s: VertexSet = b
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, v)| v.clone())
                .collect();
            let ideal = AdmissiblePair::new(g, h.clone(), s)?;
            report.pairs_checked += 1;

            let mut contributions = Vec::new();
            for q in &nodes {
                let above = match q {
                    PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. } => {
                        let gq = graded_part(g, q)?;
                        pair_leq(&ideal, &gq) && gq != ideal
                    }
                    // a graded ideal lies in a non-graded prime iff it lies
                    // in its graded part; containment is then always proper
                    _ => pair_leq(&ideal, &AdmissiblePair::full(g, q.h().clone())?),
                };
                if above {
                    contributions.push(match q {
                        PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. } => {
                            graded_part(g, q)?
                        }
                        _ => AdmissiblePair::full(g, q.h().clone())?,
                    });
                }
            }
            let is_meet_of_above = if contributions.is_empty() {
                false // empty intersection is improper, never equals a proper ideal
            } else {
                pair_meet(g, &contributions)? == ideal
            };
            if !is_meet_of_above {
                report.primality_demands += 1;
                if !graded_pairs.contains(&ideal) {
                    report.violations.push(format!(
                        "non-prime graded ideal {ideal} is not the meet of the primes above it"
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// One spectrum node's classifier-vs-oracle row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DmRow {
    pub prime: String,
    pub graded: bool,
    pub primitive: bool,
    pub strongly_primitive: bool,
    pub locally_closed_fast: bool,
    pub locally_closed_oracle: bool,
    pub completely_irreducible: bool,
    pub rationality: Rationality,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DmReport {
    pub rows: Vec<DmRow>,
    pub violations: Vec<String>,
}

impl DmReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite-graph consistency: for every prime, primitive, strongly
/// primitive, locally closed (fast and oracle) and completely irreducible
/// must coincide, and the rationality verdict must agree with local
/// closedness.
pub fn verify_dm(g: &Graph, field: &FieldDesc) -> Result<DmReport, OracleError> {
    let poset = build_spectrum_poset(g)?;
    let mut report = DmReport {
        rows: Vec::new(),
        violations: Vec::new(),
    };
    for p in poset.primes() {
        let primitive = is_primitive(g, p)?;
        let strongly = is_strongly_primitive(g, p)?;
        let fast = is_locally_closed_fast(g, p)?;
        let oracle = locally_closed_oracle(g, &poset, p)?;
        let ci = match p {
            PrimeDesc::GradedFull { .. } | PrimeDesc::GradedMinus { .. } => {
                is_completely_irreducible(g, &IdealDesc::graded(graded_part(g, p)?))?
            }
            PrimeDesc::NonGradedFamily { h, cycle }
            | PrimeDesc::NonGradedMember { h, cycle, .. } => {
                // P itself is P^1
                let poly = LaurentIrreducible::new(field.clone(), vec![1, 1], true)?;
                is_completely_irreducible(
                    g,
                    &IdealDesc {
                        pair: AdmissiblePair::full(g, h.clone())?,
                        poly_parts: vec![PolyPart {
                            cycle: cycle.clone(),
                            factors: vec![(poly, 1)],
                        }],
                    },
                )?
            }
        };
        let rat = rationality(g, p, field, true)?;
        let row = DmRow {
            prime: p.to_string(),
            graded: p.is_graded(),
            primitive,
            strongly_primitive: strongly,
            locally_closed_fast: fast,
            locally_closed_oracle: oracle,
            completely_irreducible: ci,
            rationality: rat,
        };
        let flags = [primitive, strongly, fast, oracle, ci];
        if flags.iter().any(|f| *f != primitive) {
            report.violations.push(format!(
                "{p}: flags disagree (primitive={primitive} strongly={strongly} fast={fast} oracle={oracle} ci={ci})"
            ));
        }
        match rat {
            Rationality::Yes(RuleId::R1) if !fast => {
                report
                    .violations
                    .push(format!("{p}: R1 fired but not locally closed"));
            }
            Rationality::No(_) if fast => {
                report
                    .violations
                    .push(format!("{p}: rationality denied but locally closed"));
            }
            Rationality::Unknown => {
                report
                    .violations
                    .push(format!("{p}: unknown rationality on a finite graph"));
            }
            _ => {}
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Parameters for the seeded random-graph generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzParams {
    pub max_vertices: usize,
    pub max_edge_specs: usize,
    pub omega_edge_probability: f64,
    pub count: u64,
    pub seed: u64,
}

impl FuzzParams {
    fn validate(&self) -> Result<(), OracleError> {
        if self.max_vertices == 0 {
            return Err(OracleError::DegenerateParams(
                "max_vertices must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.omega_edge_probability) {
            return Err(OracleError::DegenerateParams(
                "omega_edge_probability must lie in [0,1]".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministic random graph from `params.seed`: vertex count in
/// `1..=max_vertices`, up to `max_edge_specs` edge specs, each ω with the
/// configured probability.
pub fn random_graph(params: &FuzzParams) -> Result<Graph, OracleError> {
    use rand::{Rng, SeedableRng};
    params.validate()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(params.seed);
    let n = rng.gen_range(1..=params.max_vertices);
    let m = if params.max_edge_specs == 0 {
        0
    } else {
        rng.gen_range(0..=params.max_edge_specs)
    };
    let vertices: Vec<VertexId> = (0..n).map(|i| VertexId::new(format!("v{i}"))).collect();
    let mut edges = Vec::with_capacity(m);
    for k in 0..m {
        let source = vertices[rng.gen_range(0..n)].clone();
        let target = vertices[rng.gen_range(0..n)].clone();
        let mult = if rng.gen_bool(params.omega_edge_probability) {
            Multiplicity::Omega
        } else {
            Multiplicity::Finite(rng.gen_range(1..=3))
        };
        edges.push(EdgeSpec {
            id: crate::graph::EdgeId::new(format!("e{k}")),
            source,
            target,
            mult,
        });
    }
    Ok(Graph::new(vertices, edges)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_failing_seed: Option<u64>,
    /// First few failures, with their messages.
    pub failures: Vec<(u64, Vec<String>)>,
}

impl FuzzSummary {
    pub fn clean(&self) -> bool {
        self.failed == 0
    }
}

/// The standard per-graph check battery: DM consistency, the graded-ideal
/// primality invariant, trichotomy totality, and fast-vs-brute strong CSP.
pub fn standard_checks(g: &Graph, field: &FieldDesc) -> Vec<String> {
    let mut msgs = Vec::new();
    match verify_dm(g, field) {
        Ok(report) => msgs.extend(report.violations),
        Err(e) => msgs.push(format!("verify_dm error: {e}")),
    }
    match prime_meet_invariant_check(g) {
        Ok(report) => msgs.extend(report.violations),
        Err(e) => msgs.push(format!("prime-meet invariant error: {e}")),
    }
    match trichotomy_report(g) {
        Ok(report) => {
            for v in &report.unclassified {
                msgs.push(format!("trichotomy: vertex {v} unclassified"));
            }
        }
        Err(e) => msgs.push(format!("trichotomy error: {e}")),
    }
    if g.vertices().len() <= 10 {
        match (strong_csp_finite(g), strong_csp_bruteforce(g)) {
            (Ok(fast), Ok(brute)) => {
                if fast != brute {
                    msgs.push(format!("strong CSP fast={fast} brute={brute}"));
                }
            }
            (Err(e), _) => msgs.push(format!("strong CSP fast-path error: {e}")),
            (_, Err(e)) => msgs.push(format!("strong CSP brute-force error: {e}")),
        }
    }
    msgs
}

/// Runs `check` over `count` seeded graphs (seeds `seed..seed+count`);
/// deterministic for fixed parameters.
pub fn fuzz_with<F>(
    params: &FuzzParams,
    field: &FieldDesc,
    check: F,
) -> Result<FuzzSummary, OracleError>
where
    F: Fn(&Graph, &FieldDesc) -> Vec<String>,
{
    params.validate()?;
    let mut summary = FuzzSummary {
        checked: 0,
        passed: 0,
        failed: 0,
        first_failing_seed: None,
        failures: Vec::new(),
    };
    for i in 0..params.count {
        let seed = params.seed.wrapping_add(i);
        let g = random_graph(&FuzzParams {
            seed,
            count: 1,
            ..params.clone()
        })?;
        let msgs = check(&g, field);
        summary.checked += 1;
        if msgs.is_empty() {
            summary.passed += 1;
        } else {
            summary.failed += 1;
            if summary.first_failing_seed.is_none() {
                summary.first_failing_seed = Some(seed);
            }
            if summary.failures.len() < 5 {
                summary.failures.push((seed, msgs));
            }
        }
    }
    Ok(summary)
}

pub fn fuzz(params: &FuzzParams, field: &FieldDesc) -> Result<FuzzSummary, OracleError> {
    fuzz_with(params, field, standard_checks)
}
