//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p gl2orbits --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use gl2orbits::divchain::{
    character_order_chain, inert_bound_check, nonsplit_orbit_check, replay_certificate, verify_case1_chain,
    verify_case2_chain, DegreeParameter, FINAL_CONSTANT,
};
use gl2orbits::gl2::split_cartan;
use gl2orbits::modarith::{primes_between, PrimeModulus};
use gl2orbits::orbits::{orbit_decomposition, orbit_sizes_by_enumeration, predict_diagonal_orbits, Vector2};
use gl2orbits::semisimplify::{classify_lemma31, verify_witness, Lemma31Witness};
use gl2orbits::sweep::{
    self, case2_admissible_degrees, enumerate_diagonal_subgroups, enumerate_upper_triangular_subgroups,
    sample_case1, sample_case2, scenario_rng, Mode, PrimeRange, Suite, SweepConfig, EXHAUSTIVE_GUARD,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn modulus(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

/// Every subgroup of the Borel at 3, 5, 7 gets a verified trichotomy witness.
fn trichotomy_exhaustive() -> Outcome {
    let mut total = 0;
    for p in [3, 5, 7] {
        let m = modulus(p);
        for g in enumerate_upper_triangular_subgroups(m, EXHAUSTIVE_GUARD).map_err(|e| e.to_string())? {
            total += 1;
            let res = classify_lemma31(&g).map_err(|e| e.to_string())?;
            ensure(verify_witness(&g, &res.witness), || format!("witness rejected at ell={p}: {g:?}"))?;
            let diagonalizer = matches!(res.witness, Lemma31Witness::Diagonalizer { .. });
            let contained = res.gss.is_subgroup_of(&g);
            ensure(contained || diagonalizer, || format!("neither branch at ell={p}: {g:?}"))?;
            ensure(!res.contained_in_g || contained, || format!("containment misreported at ell={p}"))?;
        }
    }
    Ok(format!("{total} subgroups"))
}

/// Predicted diagonal orbit structure matches enumeration for every diagonal subgroup.
fn diagonal_orbit_structure() -> Outcome {
    let mut total = 0;
    for p in primes_between(2, 31) {
        let m = modulus(p);
        let l = p;
        for g in enumerate_diagonal_subgroups(m).map_err(|e| e.to_string())? {
            total += 1;
            let pred = predict_diagonal_orbits(&g).map_err(|e| e.to_string())?;
            let decomp = orbit_decomposition(&g);
            ensure(pred.matches(&decomp), || format!("prediction mismatch at ell={p}: {g:?}"))?;
            ensure(pred.mixed_count * pred.mixed_orbit_size == (l - 1) * (l - 1), || {
                format!("mixed vectors miscounted at ell={p}")
            })?;
            // Brute-force sizes on each axis and off them.
            let sizes = orbit_sizes_by_enumeration(&g);
            for v in Vector2::nonzero(m) {
                let expect = match (v.x(), v.y()) {
                    (_, 0) => pred.axis1_size,
                    (0, _) => pred.axis2_size,
                    _ => pred.mixed_orbit_size,
                };
                ensure(sizes[v.code() as usize] == expect, || format!("size at {v:?}, ell={p}"))?;
            }
            let axis_orbits = (l - 1) / pred.axis1_size + (l - 1) / pred.axis2_size;
            ensure(decomp.orbits.len() as u64 == axis_orbits + pred.mixed_count, || {
                format!("orbit count at ell={p}")
            })?;
        }
    }
    Ok(format!("{total} diagonal subgroups"))
}

fn split_cartan_three_orbits() -> Outcome {
    let primes = primes_between(2, 97);
    for &p in &primes {
        let mut sizes = orbit_decomposition(&split_cartan(modulus(p))).sizes();
        sizes.sort_unstable();
        ensure(sizes == vec![p - 1, p - 1, (p - 1) * (p - 1)], || format!("ell={p}: {sizes:?}"))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn run_sweep(suite: Suite, lo: u64, hi: u64, samples: u64, degrees: Vec<u64>) -> Result<sweep::SweepReport, String> {
    let cfg = SweepConfig {
        primes: PrimeRange { lo, hi },
        mode: Mode::Sampled,
        samples,
        degrees,
        suites: vec![suite],
        seed: 20240611,
        ..SweepConfig::default()
    };
    sweep::run(&cfg).map_err(|e| e.to_string())
}

/// 1,000 seeded nested pairs: refinement partitions and both transfer directions.
fn transfer_pairs() -> Outcome {
    let report = run_sweep(Suite::Lemma33, 3, 31, 100, vec![1])?;
    let (total, pass, fail, invalid) = report.suite_totals("lemma33");
    ensure(total >= 1000 && fail == 0 && invalid == 0 && pass == total, || {
        format!("total={total} fail={fail} invalid={invalid}")
    })?;
    Ok(format!("{pass}/{total} pairs"))
}

/// Sampled case-1 and case-2 certificates across the primes up to 97.
fn constant_864() -> Outcome {
    let degrees = [1u64, 2, 3, 6, 12];
    let primes = primes_between(3, 97);
    let per_prime = 500usize.div_ceil(primes.len()) as u64;
    let (mut n1, mut n2) = (0u64, 0u64);
    for &p in &primes {
        let m = modulus(p);
        let diagonal = enumerate_diagonal_subgroups(m).map_err(|e| e.to_string())?;
        let case2_degrees = case2_admissible_degrees(m, &degrees).map_err(|e| e.to_string())?;
        for i in 0..per_prime {
            let d = degrees[i as usize % degrees.len()];
            let mut rng = scenario_rng(864, 1, p, i);
            let s = sample_case1(&mut rng, m, DegreeParameter::new(d).unwrap(), &diagonal)
                .map_err(|e| e.to_string())?;
            let cert = verify_case1_chain(&s).map_err(|e| e.to_string())?;
            ensure(cert.passes() && replay_certificate(&s.g, &cert), || {
                format!("case1 ell={p} d={d}: {:?}", cert.counterexample)
            })?;
            ensure(cert.factor("base_constant") == Some(1), || "C != 1".into())?;
            let power_index = cert.factor("twelfth_power_index").unwrap();
            ensure(144 % power_index == 0, || format!("[G':G'^12] = {power_index}"))?;
            ensure(cert.step("div_unknowns") == Some(true), || format!("div_unknowns at ell={p}"))?;
            // The assembled bound, checked from the raw orbit sizes.
            let cartan = cert.factor("cartan_index").unwrap();
            ensure(cert.orbits.iter().all(|o| (144 * cartan * o.size) % (p - 1) == 0), || {
                format!("144·[Cs:G']·#O fails at ell={p}")
            })?;
            ensure(cert.orbits.iter().all(|o| (FINAL_CONSTANT * d * o.size).is_multiple_of(p - 1)), || {
                format!("864·d·#O fails at ell={p}")
            })?;
            n1 += 1;

            if case2_degrees.is_empty() {
                continue;
            }
            let d2 = case2_degrees[i as usize % case2_degrees.len()];
            let mut rng = scenario_rng(864, 2, p, i);
            let s = sample_case2(&mut rng, m, DegreeParameter::new(d2).unwrap()).map_err(|e| e.to_string())?;
            let cert = verify_case2_chain(&s).map_err(|e| e.to_string())?;
            ensure(cert.passes() && replay_certificate(&s.g, &cert), || {
                format!("case2 ell={p} d={d2}: {:?}", cert.counterexample)
            })?;
            ensure(cert.orbits.iter().all(|o| (FINAL_CONSTANT * d2 * o.size).is_multiple_of(p - 1)), || {
                format!("864·d·#O fails at ell={p}")
            })?;
            n2 += 1;
        }
    }
    ensure(n1 >= 500 && n2 >= 500, || format!("too few scenarios: case1={n1} case2={n2}"))?;
    Ok(format!("case1={n1} case2={n2}"))
}

/// Size of the image of `x -> k·x` on `Z/n`, by enumeration.
fn multiple_image(n: u64, k: u64) -> u64 {
    let mut hit = vec![false; n as usize];
    for x in 0..n {
        hit[((k * x) % n) as usize] = true;
    }
    hit.iter().filter(|&&b| b).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn order_arithmetic() -> Outcome {
    let mut related = 0;
    for p in primes_between(3, 97) {
        let divs: Vec<u64> = (1..p).filter(|k| (p - 1) % k == 0).collect();
        for &n_r in &divs {
            for &n_chi in &divs {
                let oracle_related = multiple_image(n_r, 12) == multiple_image(n_chi, 6);
                let chain = character_order_chain(n_r, n_chi);
                ensure(chain.is_some() == oracle_related, || format!("relation at {n_r},{n_chi}"))?;
                let Some(c) = chain else { continue };
                related += 1;
                let r6 = multiple_image(n_r, 6);
                ensure(c.r6_order == r6, || format!("r6 order at {n_r}"))?;
                ensure((6 * n_r) % n_chi == 0, || format!("#chi ∤ 6#r at {n_r},{n_chi}"))?;
                ensure(n_r == r6 * gcd(6, n_r), || format!("#r factorization at {n_r}"))?;
                ensure((36 * r6).is_multiple_of(n_chi), || format!("#chi ∤ 36#r6 at {n_r},{n_chi}"))?;
                ensure(c.all_hold(), || format!("library chain at {n_r},{n_chi}"))?;
            }
        }
    }
    Ok(format!("{related} related pairs"))
}

fn inert_exclusion() -> Outcome {
    let primes = primes_between(3, 200);
    let mut satisfiable = 0;
    for &p in &primes {
        let m = modulus(p);
        for w in [2u64, 4, 6] {
            for f in 1..=10u64 {
                let rhos: Vec<u64> = (1..=12 * (p - 1))
                    .filter(|r| (12 * (p - 1)) % r == 0 && (w * f * r) % (p * p - 1) == 0)
                    .collect();
                let conclusion = (12 * w * f) % (p + 1) == 0;
                if rhos.is_empty() {
                    continue;
                }
                satisfiable += 1;
                ensure(conclusion, || format!("ell={p} w={w} f={f}"))?;
                for r in rhos {
                    ensure(inert_bound_check(m, w, f, r).map_err(|e| e.to_string())?, || {
                        format!("check rejects ell={p} w={w} f={f} rho={r}")
                    })?;
                }
            }
        }
        ensure(nonsplit_orbit_check(m).map_err(|e| e.to_string())?, || format!("non-split at ell={p}"))?;
        let ns = gl2orbits::gl2::nonsplit_cartan(m).map_err(|e| e.to_string())?;
        let sizes = orbit_decomposition(&ns).sizes();
        ensure(sizes == vec![p * p - 1], || format!("non-split orbit sizes at ell={p}: {sizes:?}"))?;
    }
    Ok(format!("{} primes, {satisfiable} satisfiable (w, f)", primes.len()))
}

fn determinism() -> Outcome {
    let cfg = SweepConfig {
        primes: PrimeRange { lo: 2, hi: 23 },
        mode: Mode::Sampled,
        samples: 8,
        degrees: vec![1, 2, 3, 6, 12],
        suites: Suite::ALL.to_vec(),
        seed: 7,
        ..SweepConfig::default()
    };
    let a = sweep::run(&cfg).map_err(|e| e.to_string())?;
    let b = sweep::run(&cfg).map_err(|e| e.to_string())?;
    let c = sweep::run(&SweepConfig { parallelism: 4, ..cfg.clone() }).map_err(|e| e.to_string())?;
    let ja = a.to_json().map_err(|e| e.to_string())?;
    let jb = b.to_json().map_err(|e| e.to_string())?;
    let jc = c.to_json().map_err(|e| e.to_string())?;
    ensure(ja == jb, || "json differs between identical runs".into())?;
    ensure(a.to_csv() == b.to_csv(), || "csv differs between identical runs".into())?;
    ensure(ja == jc, || "json depends on parallelism".into())?;
    ensure(a.passed(), || "sweep reported failures".into())?;
    Ok(format!("{} bytes, {} suite-prime units", ja.len(), a.suites.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("upper-triangular trichotomy, exhaustive for ell in {3,5,7}", trichotomy_exhaustive),
        ("diagonal orbit structure, ell <= 31", diagonal_orbit_structure),
        ("split Cartan has three orbits, ell <= 97", split_cartan_three_orbits),
        ("orbit transfer over 1000 nested pairs, ell <= 31", transfer_pairs),
        ("constant 864 for split-CM and scalar-sixth-power scenarios", constant_864),
        ("character order arithmetic, ell <= 97", order_arithmetic),
        ("inert exclusion and non-split transitivity, ell <= 200", inert_exclusion),
        ("byte-identical sweep reports", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}  ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  ({why}; {secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
