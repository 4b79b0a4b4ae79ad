//! Subgroup enumeration and seeded, constructive scenario sampling.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divchain::{validate_case1, validate_case2, Case1Scenario, Case2Scenario, DegreeParameter};
use crate::error::{Error, Result};
use crate::gl2::{borel, closure, split_cartan, subgroup_index, Mat2, MatrixGroup};
use crate::modarith::{divisors, gcd, least_primitive_root, unit_group_index, CyclicImage, PrimeModulus};
use crate::orbits::Vector2;

/// Largest prime for which the full Borel subgroup lattice may be enumerated.
pub const EXHAUSTIVE_GUARD: u64 = 7;
/// Upper limit reachable with the large-exhaustive flag.
pub const EXHAUSTIVE_GUARD_LARGE: u64 = 13;

/// Deterministic per-scenario RNG from the sweep seed and scenario coordinates.
pub fn scenario_rng(seed: u64, suite: u64, prime: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed;
    for word in [suite, prime, index] {
        state = splitmix64(state ^ splitmix64(word));
    }
    ChaCha8Rng::seed_from_u64(state)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Every subgroup of `borel(ell)` exactly once, ordered by `(order, element codes)`.
///
/// Starts from the cyclic subgroups and joins with cyclic subgroups until no
/// new subgroup appears; every finite group is a join of cyclic subgroups.
pub fn enumerate_upper_triangular_subgroups(m: PrimeModulus, guard: u64) -> Result<Vec<MatrixGroup>> {
    if m.ell() > guard {
        return Err(Error::PrimeAboveBound { ell: m.ell(), bound: guard });
    }
    let b = borel(m);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut cyclic = Vec::new();
    for x in b.elements() {
        let c = closure(m, &[*x])?;
        if seen.insert(c.element_codes()) {
            cyclic.push(c);
        }
    }
    let mut all = cyclic.clone();
    let mut frontier = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for c in &cyclic {
                if c.is_subgroup_of(a) {
                    continue;
                }
                let j = a.join(c)?;
                if seen.insert(j.element_codes()) {
                    next.push(j);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.sort_by_cached_key(|g| (g.order(), g.element_codes()));
    Ok(all)
}

/// Every subgroup of the split Cartan `C_s(ell) ≅ (Z/n)²`, `n = ell − 1`.
///
/// Subgroups correspond to lattices `L` with `nZ² ⊆ L ⊆ Z²`, each with a
/// unique Hermite basis `(a, b), (0, c)`: `a | n`, `c | n`, `0 ≤ b < c`,
/// `c | (n/a)·b`. The lattice point `(i, j)` maps to `diag(g^i, g^j)`.
pub fn enumerate_diagonal_subgroups(m: PrimeModulus) -> Result<Vec<MatrixGroup>> {
    let n = m.ell() - 1;
    let g = least_primitive_root(m).map(|u| u.value()).unwrap_or(1);
    let diag = |i: u64, j: u64| Mat2::raw(m.pow(g, i), 0, 0, m.pow(g, j), m);
    let mut out = Vec::new();
    for a in divisors(n) {
        for c in divisors(n) {
            for b in 0..c {
                if ((n / a) * b).is_multiple_of(c) {
                    out.push(closure(m, &[diag(a % n, b % n), diag(0, c % n)])?);
                }
            }
        }
    }
    out.sort_by_cached_key(|h| (h.order(), h.element_codes()));
    Ok(out)
}

pub fn random_unit<R: Rng>(rng: &mut R, m: PrimeModulus) -> u64 {
    rng.gen_range(1..m.ell())
}

pub fn random_borel_element<R: Rng>(rng: &mut R, m: PrimeModulus) -> Mat2 {
    let a = random_unit(rng, m);
    let d = random_unit(rng, m);
    let b = rng.gen_range(0..m.ell());
    Mat2::raw(a, b, 0, d, m)
}

/// Closure of 1–3 uniformly chosen upper-triangular matrices.
pub fn random_borel_subgroup<R: Rng>(rng: &mut R, m: PrimeModulus) -> Result<MatrixGroup> {
    let k = rng.gen_range(1..=3);
    let gens: Vec<Mat2> = (0..k).map(|_| random_borel_element(rng, m)).collect();
    closure(m, &gens)
}

/// Closure of 0–2 uniformly chosen elements of `g`.
pub fn random_subgroup_of<R: Rng>(rng: &mut R, g: &MatrixGroup) -> Result<MatrixGroup> {
    let k = rng.gen_range(0..=2);
    let gens: Vec<Mat2> = (0..k)
        .map(|_| *g.elements().choose(rng).expect("groups are nonempty"))
        .collect();
    closure(g.modulus(), &gens)
}

pub fn random_nonzero_vector<R: Rng>(rng: &mut R, m: PrimeModulus) -> Vector2 {
    let l = m.ell();
    Vector2::from_code(rng.gen_range(1..l * l), m)
}

/// `diag` group with the transvection `[[1, 1], [0, 1]]` adjoined when `with_unipotent`.
fn borel_image(s: &MatrixGroup, with_unipotent: bool) -> Result<MatrixGroup> {
    let m = s.modulus();
    if !with_unipotent {
        return Ok(s.clone());
    }
    let mut gens = s.generators().to_vec();
    gens.push(Mat2::transvection(1, m));
    closure(m, &gens)
}

/// Elements of `F_ell^×` of order dividing `k`.
fn roots_of_unity(m: PrimeModulus, k: u64) -> Vec<u64> {
    (1..m.ell()).filter(|&x| m.pow(x, k) == 1).collect()
}

/// A valid split-CM scenario, built forwards: pick `G'` with
/// `[C_s : G'] | 6d`, twist its generators by 12-torsion to get `G^ss` with
/// the same twelfth powers, then optionally adjoin the unipotent radical.
pub fn sample_case1<R: Rng>(
    rng: &mut R,
    m: PrimeModulus,
    d: DegreeParameter,
    diagonal_subgroups: &[MatrixGroup],
) -> Result<Case1Scenario> {
    let cs = split_cartan(m);
    let candidates: Vec<&MatrixGroup> = diagonal_subgroups
        .iter()
        .filter(|h| subgroup_index(&cs, h).is_ok_and(|i| (6 * d.get()).is_multiple_of(i)))
        .collect();
    let gp = (*candidates.choose(rng).expect("C_s itself always qualifies")).clone();

    let torsion = roots_of_unity(m, 12);
    let twist = |rng: &mut R| {
        let a = *torsion.choose(rng).unwrap();
        let b = *torsion.choose(rng).unwrap();
        Mat2::raw(a, 0, 0, b, m)
    };
    let mut gens: Vec<Mat2> = gp.generators().iter().map(|x| x.mul(&twist(rng))).collect();
    let extra = rng.gen_range(0..=2);
    gens.extend((0..extra).map(|_| twist(rng)));
    let gss = closure(m, &gens)?;
    let g = borel_image(&gss, rng.gen_bool(0.5))?;
    let s = Case1Scenario { g, gp, d };
    debug_assert!(validate_case1(&s).is_valid());
    Ok(s)
}

/// `{diag(a, a·ζ) : ζ^6 = 1}`, the largest diagonal group with equal sixth powers.
fn max_sixth_power_group(m: PrimeModulus) -> Result<MatrixGroup> {
    let g = least_primitive_root(m).map(|u| u.value()).unwrap_or(1);
    let k = gcd(6, m.ell() - 1);
    let zeta = m.pow(g, (m.ell() - 1) / k);
    closure(m, &[Mat2::raw(g, 0, 0, g, m), Mat2::raw(1, 0, 0, zeta, m)])
}

fn det_index(g: &MatrixGroup) -> u64 {
    let img = CyclicImage::generated_by(g.modulus(), g.generators().iter().map(Mat2::det));
    unit_group_index(&img)
}

/// Degrees among `degrees` for which a GRH-failure scenario exists at `ell`.
pub fn case2_admissible_degrees(m: PrimeModulus, degrees: &[u64]) -> Result<Vec<u64>> {
    let floor = det_index(&max_sixth_power_group(m)?);
    Ok(degrees.iter().copied().filter(|d| d % floor == 0).collect())
}

/// A valid GRH-failure scenario: `G^ss` generated by `diag(a, a·ζ)` with
/// `ζ^6 = 1`, enlarged until the determinant index divides `d`, then
/// optionally extended by the unipotent radical.
pub fn sample_case2<R: Rng>(rng: &mut R, m: PrimeModulus, d: DegreeParameter) -> Result<Case2Scenario> {
    let maximal = max_sixth_power_group(m)?;
    if !d.get().is_multiple_of(det_index(&maximal)) {
        return Err(Error::Config(format!(
            "no GRH-failure scenario at ell={} with d={}",
            m.ell(),
            d.get()
        )));
    }
    let roots = roots_of_unity(m, 6);
    let k = rng.gen_range(1..=3);
    let mut gens: Vec<Mat2> = (0..k)
        .map(|_| {
            let a = random_unit(rng, m);
            Mat2::raw(a, 0, 0, m.mul(a, *roots.choose(rng).unwrap()), m)
        })
        .collect();
    let mut gss = closure(m, &gens)?;
    let mut attempts = 0;
    while !d.get().is_multiple_of(det_index(&gss)) {
        attempts += 1;
        if attempts > 64 {
            gens.extend_from_slice(maximal.generators());
        } else {
            gens.push(*maximal.elements().choose(rng).unwrap());
        }
        gss = closure(m, &gens)?;
    }
    let g = borel_image(&gss, rng.gen_bool(0.5))?;
    let s = Case2Scenario { g, d };
    debug_assert!(validate_case2(&s).is_valid());
    Ok(s)
}
