//! Verification sweeps over a prime range.
//!
//! A sweep runs a set of suites at each prime. Every scenario draws from its
//! own RNG derived from `(seed, suite, prime, index)`, and results are
//! collected in a fixed order, so a report depends only on the configuration
//! and never on the worker count.

mod generate;
mod report;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

pub use generate::{
    case2_admissible_degrees, enumerate_diagonal_subgroups, enumerate_upper_triangular_subgroups,
    random_borel_subgroup, random_nonzero_vector, random_subgroup_of, sample_case1, sample_case2,
    scenario_rng, EXHAUSTIVE_GUARD, EXHAUSTIVE_GUARD_LARGE,
};
pub use report::{FailureRecord, ScenarioRow, ScenarioStatus, SuiteOutcome, SweepReport, REPORT_VERSION};

use crate::divchain::{
    admissible_rho_orders, inert_bound_check, nonsplit_orbit_check, replay_certificate, verify_case1_chain,
    verify_case2_chain, DegreeParameter, DivisibilityCertificate,
};
use crate::error::{Error, Result};
use crate::gl2::{GroupSummary, MatrixGroup};
use crate::modarith::{primes_between, PrimeModulus};
use crate::orbits::{
    coset_orbit_refinement, is_partition_of, minimal_uniform_constant, orbit, orbit_decomposition,
    predict_diagonal_orbits, uniform_divisibility_transfer, TransferDirection,
};
use crate::semisimplify::{classify_lemma31, verify_witness, Lemma31Witness};

/// Default cap on `ell` for suites that materialize Borel-type groups.
pub const DEFAULT_MAX_ELL: u64 = 97;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma31,
    Lemma32,
    Lemma33,
    Case1,
    Case2,
    Inert,
    Nonsplit,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma31,
        Suite::Lemma32,
        Suite::Lemma33,
        Suite::Case1,
        Suite::Case2,
        Suite::Inert,
        Suite::Nonsplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma31 => "lemma31",
            Suite::Lemma32 => "lemma32",
            Suite::Lemma33 => "lemma33",
            Suite::Case1 => "case1",
            Suite::Case2 => "case2",
            Suite::Inert => "inert",
            Suite::Nonsplit => "nonsplit",
        }
    }

    /// Suites that build subgroups of the Borel and are bounded by `max_ell`.
    fn uses_borel(self) -> bool {
        matches!(self, Suite::Lemma31 | Suite::Lemma33 | Suite::Case1 | Suite::Case2)
    }

    fn needs_odd_prime(self) -> bool {
        matches!(self, Suite::Inert | Suite::Nonsplit)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// An inclusive prime interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    pub fn primes(&self) -> Vec<u64> {
        primes_between(self.lo, self.hi)
    }
}

impl FromStr for PrimeRange {
    type Err = Error;

    /// `lo..hi` (inclusive) or a single prime.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("bad prime bound `{x}`")))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let p = parse(s)?;
                (p, p)
            }
        };
        if lo > hi {
            return Err(Error::Config(format!("empty prime range `{s}`")));
        }
        Ok(PrimeRange { lo, hi })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub primes: PrimeRange,
    pub mode: Mode,
    /// Scenarios per suite and prime in sampled mode.
    pub samples: u64,
    pub degrees: Vec<u64>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub parallelism: usize,
    pub max_ell: u64,
    /// Raise the exhaustive lattice guard from 7 to 13.
    pub allow_large_exhaustive: bool,
    pub output_format: OutputFormat,
    /// Record wall-clock time in the report (breaks byte-identical output).
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: PrimeRange { lo: 3, hi: 31 },
            mode: Mode::Sampled,
            samples: 50,
            degrees: vec![1, 2, 6],
            suites: Suite::ALL.to_vec(),
            seed: 42,
            parallelism: 1,
            max_ell: DEFAULT_MAX_ELL,
            allow_large_exhaustive: false,
            output_format: OutputFormat::Json,
            timing: false,
        }
    }
}

/// The part of the configuration that determines report contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub primes: Vec<u64>,
    pub mode: Mode,
    pub samples: u64,
    pub degrees: Vec<u64>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub max_ell: u64,
    pub exhaustive_guard: u64,
}

impl SweepConfig {
    pub fn exhaustive_guard(&self) -> u64 {
        if self.allow_large_exhaustive {
            EXHAUSTIVE_GUARD_LARGE
        } else {
            EXHAUSTIVE_GUARD
        }
    }

    pub fn validate(&self) -> Result<()> {
        let primes = self.primes.primes();
        if primes.is_empty() {
            return Err(Error::Config("prime range contains no primes".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return Err(Error::Config("degrees must be a nonempty list of positive integers".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suites selected".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be positive".into()));
        }
        if self.max_ell > crate::modarith::MAX_MODULUS {
            return Err(Error::Config(format!("max-ell above {}", crate::modarith::MAX_MODULUS)));
        }
        let top = *primes.last().unwrap();
        if top > crate::modarith::MAX_MODULUS {
            return Err(Error::Config(format!("prime {top} above {}", crate::modarith::MAX_MODULUS)));
        }
        if self.suites.iter().any(|s| s.uses_borel()) && top > self.max_ell {
            return Err(Error::PrimeAboveBound { ell: top, bound: self.max_ell });
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        let mut suites = self.suites.clone();
        suites.sort_unstable();
        suites.dedup();
        ConfigEcho {
            primes: self.primes.primes(),
            mode: self.mode,
            samples: self.samples,
            degrees: self.degrees.clone(),
            suites,
            seed: self.seed,
            max_ell: self.max_ell,
            exhaustive_guard: self.exhaustive_guard(),
        }
    }
}

/// Outcome of one scenario before aggregation.
struct ScenarioResult {
    status: ScenarioStatus,
    detail: String,
    failure: Option<FailureRecord>,
}

impl ScenarioResult {
    fn pass(detail: impl Into<String>) -> Self {
        ScenarioResult {
            status: ScenarioStatus::Pass,
            detail: detail.into(),
            failure: None,
        }
    }

    fn invalid(detail: impl Into<String>) -> Self {
        ScenarioResult {
            status: ScenarioStatus::Invalid,
            detail: detail.into(),
            failure: None,
        }
    }

    fn fail(detail: impl Into<String>, scenario: serde_json::Value) -> Self {
        ScenarioResult {
            status: ScenarioStatus::Fail,
            detail: detail.into(),
            failure: Some(FailureRecord {
                scenario,
                vector: None,
                expected_divisor: None,
                value: None,
            }),
        }
    }

    fn from_bool(ok: bool, detail: impl Into<String>, scenario: impl FnOnce() -> serde_json::Value) -> Self {
        if ok {
            ScenarioResult::pass(detail)
        } else {
            ScenarioResult::fail(detail, scenario())
        }
    }

    fn from_error(e: Error, scenario: serde_json::Value) -> Self {
        match e {
            Error::InvalidScenario(r) => ScenarioResult::invalid(r.to_string()),
            other => ScenarioResult::fail(other.to_string(), scenario),
        }
    }
}

fn group_json(g: &MatrixGroup) -> serde_json::Value {
    serde_json::to_value(GroupSummary::from(g)).expect("group summary serializes")
}

/// Checks a subgroup of the Borel against the trichotomy.
fn lemma31_scenario(g: &MatrixGroup) -> ScenarioResult {
    let scenario = || json!({ "group": group_json(g) });
    let res = match classify_lemma31(g) {
        Ok(r) => r,
        Err(e) => return ScenarioResult::fail(e.to_string(), scenario()),
    };
    let mut ok = verify_witness(g, &res.witness);
    match &res.witness {
        Lemma31Witness::Diagonalizer { .. } => {
            // Abelian, and non-diagonal elements have distinct eigenvalues.
            ok &= g.is_abelian() && g.elements().iter().all(|x| x.is_diagonal() || x.a() != x.d());
        }
        _ => ok &= res.contained_in_g && res.gss.is_subgroup_of(g),
    }
    ok &= res.gss.is_diagonal();
    ScenarioResult::from_bool(ok, format!("{:?}", res.witness.case()), scenario)
}

fn lemma32_scenario(g: &MatrixGroup) -> ScenarioResult {
    let scenario = || json!({ "group": group_json(g) });
    match predict_diagonal_orbits(g) {
        Ok(pred) => {
            let decomp = orbit_decomposition(g);
            ScenarioResult::from_bool(
                pred.matches(&decomp),
                format!("I1={} I2={} X={} mixed={}", pred.i1, pred.i2, pred.mixed_count, pred.mixed_orbit_size),
                scenario,
            )
        }
        Err(e) => ScenarioResult::fail(e.to_string(), scenario()),
    }
}

fn lemma33_scenario<R: Rng>(rng: &mut R, m: PrimeModulus) -> Result<ScenarioResult> {
    let g = random_borel_subgroup(rng, m)?;
    let h = random_subgroup_of(rng, &g)?;
    let v = random_nonzero_vector(rng, m);
    let scenario = || json!({ "g": group_json(&g), "h": group_json(&h), "vector": v });

    let whole = orbit(&g, v)?;
    let parts = coset_orbit_refinement(&g, &h, v)?;
    let mut ok = is_partition_of(&parts, &whole);

    let target = m.ell() - 1;
    let c_up = minimal_uniform_constant(target, &orbit_decomposition(&h));
    let up = uniform_divisibility_transfer(target, c_up, &g, &h, TransferDirection::Up)?;
    let c_down = minimal_uniform_constant(target, &orbit_decomposition(&g));
    let down = uniform_divisibility_transfer(target, c_down, &g, &h, TransferDirection::Down)?;
    ok &= up.hypothesis_holds && up.conclusion_holds && down.hypothesis_holds && down.conclusion_holds;

    // An arbitrary divisor and constant: only a true hypothesis with a false
    // conclusion counts against the lemma.
    let divisor = rng.gen_range(1..=2 * m.ell() * m.ell());
    let constant = rng.gen_range(1..=12);
    for dir in [TransferDirection::Up, TransferDirection::Down] {
        ok &= !uniform_divisibility_transfer(divisor, constant, &g, &h, dir)?.falsifies();
    }
    Ok(ScenarioResult::from_bool(
        ok,
        format!("|G|={} |H|={} parts={}", g.order(), h.order(), parts.len()),
        scenario,
    ))
}

fn certificate_result(g: &MatrixGroup, cert: DivisibilityCertificate, scenario: serde_json::Value) -> ScenarioResult {
    let replayed = replay_certificate(g, &cert);
    let detail = format!(
        "|G|={} d={} verdict={:?} chain={} replay={}",
        cert.group_order, cert.d, cert.verdict, cert.chain_holds, replayed
    );
    if cert.passes() && replayed {
        return ScenarioResult::pass(detail);
    }
    let mut r = ScenarioResult::fail(detail, scenario);
    if let (Some(f), Some(c)) = (r.failure.as_mut(), cert.counterexample.as_ref()) {
        f.vector = Some([c.vector.x(), c.vector.y()]);
        f.expected_divisor = Some(c.expected_divisor);
        f.value = Some(c.value);
    }
    r
}

fn case1_scenario<R: Rng>(
    rng: &mut R,
    m: PrimeModulus,
    d: u64,
    diagonal: &[MatrixGroup],
) -> Result<ScenarioResult> {
    let s = sample_case1(rng, m, DegreeParameter::new(d)?, diagonal)?;
    let scenario = json!({ "g": group_json(&s.g), "gp": group_json(&s.gp), "d": d });
    Ok(match verify_case1_chain(&s) {
        Ok(cert) => certificate_result(&s.g, cert, scenario),
        Err(e) => ScenarioResult::from_error(e, scenario),
    })
}

fn case2_scenario<R: Rng>(rng: &mut R, m: PrimeModulus, d: u64) -> Result<ScenarioResult> {
    let s = sample_case2(rng, m, DegreeParameter::new(d)?)?;
    let scenario = json!({ "g": group_json(&s.g), "d": d });
    Ok(match verify_case2_chain(&s) {
        Ok(cert) => certificate_result(&s.g, cert, scenario),
        Err(e) => ScenarioResult::from_error(e, scenario),
    })
}

/// One `(w, f)` pair: unsatisfiable hypotheses count as invalid; otherwise
/// every admissible `rho` must give `ell + 1 | 12wf`.
fn inert_scenario(m: PrimeModulus, w: u64, f: u64) -> Result<ScenarioResult> {
    let l = m.ell();
    let rhos = admissible_rho_orders(m, w, f)?;
    let conclusion = (12 * w * f).is_multiple_of(l + 1);
    if rhos.is_empty() {
        // Unsatisfiable exactly when the conclusion fails: rho = 12(ell − 1) is
        // admissible whenever ell + 1 | 12wf.
        return Ok(if conclusion {
            ScenarioResult::fail("conclusion holds but no admissible rho", json!({ "w": w, "f": f }))
        } else {
            ScenarioResult::invalid(format!("w={w} f={f}: no admissible rho"))
        });
    }
    let mut ok = true;
    for &rho in &rhos {
        ok &= inert_bound_check(m, w, f, rho)?;
    }
    Ok(ScenarioResult::from_bool(ok, format!("w={w} f={f} rhos={}", rhos.len()), || {
        json!({ "w": w, "f": f, "rho_orders": rhos })
    }))
}

/// Runs the scenarios of one suite at one prime.
fn run_unit(cfg: &SweepConfig, suite: Suite, ell: u64) -> Result<SuiteOutcome> {
    let m = PrimeModulus::new(ell)?;
    let suite_id = suite as u64;
    let seed = cfg.seed;
    let samples = cfg.samples;
    let sampled_ids = || (0..samples).into_par_iter();

    let results: Vec<Result<ScenarioResult>> = match suite {
        Suite::Lemma31 => {
            let guard = cfg.exhaustive_guard();
            if cfg.mode == Mode::Exhaustive && ell <= guard {
                enumerate_upper_triangular_subgroups(m, guard)?
                    .par_iter()
                    .map(|g| Ok(lemma31_scenario(g)))
                    .collect()
            } else {
                sampled_ids()
                    .map(|i| {
                        let mut rng = scenario_rng(seed, suite_id, ell, i);
                        Ok(lemma31_scenario(&random_borel_subgroup(&mut rng, m)?))
                    })
                    .collect()
            }
        }
        Suite::Lemma32 => {
            let mut subs = enumerate_diagonal_subgroups(m)?;
            if cfg.mode == Mode::Sampled && subs.len() as u64 > samples {
                let mut rng = scenario_rng(seed, suite_id, ell, 0);
                let mut idx: Vec<usize> = (0..subs.len()).collect();
                idx.shuffle(&mut rng);
                idx.truncate(samples as usize);
                idx.sort_unstable();
                subs = idx.into_iter().map(|i| subs[i].clone()).collect();
            }
            subs.par_iter().map(|g| Ok(lemma32_scenario(g))).collect()
        }
        Suite::Lemma33 => sampled_ids()
            .map(|i| lemma33_scenario(&mut scenario_rng(seed, suite_id, ell, i), m))
            .collect(),
        Suite::Case1 => {
            let diagonal = enumerate_diagonal_subgroups(m)?;
            sampled_ids()
                .map(|i| {
                    let d = cfg.degrees[(i as usize) % cfg.degrees.len()];
                    case1_scenario(&mut scenario_rng(seed, suite_id, ell, i), m, d, &diagonal)
                })
                .collect()
        }
        Suite::Case2 => {
            let degrees = case2_admissible_degrees(m, &cfg.degrees)?;
            if degrees.is_empty() {
                Vec::new()
            } else {
                sampled_ids()
                    .map(|i| {
                        let d = degrees[(i as usize) % degrees.len()];
                        case2_scenario(&mut scenario_rng(seed, suite_id, ell, i), m, d)
                    })
                    .collect()
            }
        }
        Suite::Inert => [2u64, 4, 6]
            .into_iter()
            .flat_map(|w| (1..=10u64).map(move |f| (w, f)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(w, f)| inert_scenario(m, w, f))
            .collect(),
        Suite::Nonsplit => vec![nonsplit_orbit_check(m).map(|ok| {
            ScenarioResult::from_bool(ok, format!("transitive on {} points", ell * ell - 1), || {
                json!({ "ell": ell })
            })
        })],
    };

    let mut outcome = SuiteOutcome::new(suite.name(), ell);
    for (id, r) in results.into_iter().enumerate() {
        let r = r?;
        outcome.record(id as u64, r.status, r.detail, r.failure);
    }
    Ok(outcome)
}

/// Runs every selected suite at every prime in the range.
pub fn run(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut suites = cfg.suites.clone();
    suites.sort_unstable();
    suites.dedup();
    let units: Vec<(Suite, u64)> = suites
        .iter()
        .flat_map(|&s| {
            cfg.primes
                .primes()
                .into_iter()
                .filter(move |&p| !(s.needs_odd_prime() && p == 2))
                .map(move |p| (s, p))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let outcomes: Vec<Result<SuiteOutcome>> =
        pool.install(|| units.par_iter().map(|&(s, p)| run_unit(cfg, s, p)).collect());
    let suites = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    Ok(SweepReport {
        version: REPORT_VERSION.to_string(),
        config: cfg.echo(),
        suites,
        elapsed_ms: cfg.timing.then(|| start.elapsed().as_millis() as u64),
    })
}
