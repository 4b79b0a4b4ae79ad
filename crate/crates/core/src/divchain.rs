//! Scenario models and certificate checkers for the three divisibility
//! arguments: the split CM case, the GRH-failure case, and the inert-prime
//! exclusion.
//!
//! Field-theoretic inputs never appear directly. A scenario carries the
//! finite image groups plus an abstract degree `d` standing in for `[F:Q]`,
//! and the constraints the arguments consume become validity gates.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gl2::{kth_power_subgroup, nonsplit_cartan, split_cartan, subgroup_index, MatrixGroup};
use crate::modarith::{divisors, gcd, power_image_order, CyclicImage, PrimeModulus};
use crate::orbits::{
    orbit_decomposition, orbit_sizes_by_enumeration, uniform_divisibility_transfer, Counterexample,
    OrbitDecomposition, TransferDirection, TransferVerdict, Vector2,
};
use crate::semisimplify::semisimplification;

/// The absolute constant of the final divisibility `ell − 1 | 864·d·#O_G(v)`.
pub const FINAL_CONSTANT: u64 = 864;
/// Bound on `[G' : G'^12]` for a diagonal group: `12²`.
pub const TWELFTH_POWER_INDEX_BOUND: u64 = 144;
/// `#O^×` divides 6 for every imaginary quadratic order.
pub const MAX_UNIT_COUNT: u64 = 6;
/// Constant of the GRH-failure reduction before passing to `G`.
pub const GRH_CASE_CONSTANT: u64 = 36;

/// Abstract field degree, `d ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreeParameter(u64);

impl DegreeParameter {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("degree parameter must be positive".into()));
        }
        Ok(DegreeParameter(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    SplitCm,
    GrhFailure,
}

/// Borel-type image `g`, CM image `gp`, degree `d`.
#[derive(Clone, Debug)]
pub struct Case1Scenario {
    pub g: MatrixGroup,
    pub gp: MatrixGroup,
    pub d: DegreeParameter,
}

/// Borel-type image `g` whose diagonal characters agree in sixth powers.
#[derive(Clone, Debug)]
pub struct Case2Scenario {
    pub g: MatrixGroup,
    pub d: DegreeParameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub kind: ScenarioKind,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} scenario fails [{}]", self.kind, self.failed().join(", "))
    }
}

fn check(name: &'static str, holds: bool) -> Check {
    Check { name, holds }
}

/// `G^ss` when `G` is upper triangular and contains it.
fn normalized_semisimplification(g: &MatrixGroup) -> (bool, bool, Option<MatrixGroup>) {
    let upper = g.is_upper_triangular();
    let gss = upper.then(|| semisimplification(g).ok()).flatten();
    let contains = gss.as_ref().is_some_and(|s| s.is_subgroup_of(g));
    (upper, contains, gss)
}

pub fn validate_case1(s: &Case1Scenario) -> ValidationReport {
    let m = s.g.modulus();
    let (upper, contains, gss) = normalized_semisimplification(&s.g);
    let gp_diagonal = s.gp.modulus() == m && s.gp.is_diagonal();
    let twelfth = match (&gss, gp_diagonal) {
        (Some(gss), true) => {
            let a = kth_power_subgroup(&s.gp, 12);
            let b = kth_power_subgroup(gss, 12);
            matches!((a, b), (Ok(a), Ok(b)) if a == b)
        }
        _ => false,
    };
    let index_ok = gp_diagonal
        && subgroup_index(&split_cartan(m), &s.gp)
            .is_ok_and(|i| (MAX_UNIT_COUNT * s.d.get()).is_multiple_of(i));
    ValidationReport {
        kind: ScenarioKind::SplitCm,
        checks: vec![
            check("upper_triangular", upper),
            check("contains_semisimplification", contains),
            check("cm_image_diagonal", gp_diagonal),
            check("twelfth_powers_agree", twelfth),
            check("cartan_index_divides_6d", index_ok),
        ],
    }
}

/// Order of the determinant image of a group of upper-triangular matrices.
fn determinant_image(g: &MatrixGroup) -> CyclicImage {
    CyclicImage::generated_by(g.modulus(), g.generators().iter().map(|x| x.det()))
}

pub fn validate_case2(s: &Case2Scenario) -> ValidationReport {
    let m = s.g.modulus();
    let (upper, contains, gss) = normalized_semisimplification(&s.g);
    let sixth = gss
        .as_ref()
        .is_some_and(|gss| gss.elements().iter().all(|x| m.pow(x.a(), 6) == m.pow(x.d(), 6)));
    let det_index = crate::modarith::unit_group_index(&determinant_image(&s.g));
    ValidationReport {
        kind: ScenarioKind::GrhFailure,
        checks: vec![
            check("upper_triangular", upper),
            check("contains_semisimplification", contains),
            check("sixth_powers_agree", sixth),
            check("determinant_index_divides_d", upper && s.d.get().is_multiple_of(det_index)),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub representative: Vector2,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub name: &'static str,
    pub value: u64,
}

/// A verified divisibility chain for one scenario.
///
/// `verdict` is `Pass` exactly when `ell − 1 | final_constant·d·#O_G(v)` for
/// every `v ∈ V•`. The intermediate steps of the argument are recorded in
/// `steps`; `chain_holds` is their conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityCertificate {
    pub kind: ScenarioKind,
    pub ell: u64,
    pub d: u64,
    pub group_order: u64,
    /// One entry per `G`-orbit; every vector has the size of its orbit.
    pub orbits: Vec<OrbitSummary>,
    pub factors: Vec<Factor>,
    pub steps: Vec<Check>,
    pub transfers: Vec<TransferVerdict>,
    pub final_constant: u64,
    pub chain_holds: bool,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
}

impl DivisibilityCertificate {
    pub fn passes(&self) -> bool {
        self.verdict == Verdict::Pass && self.chain_holds
    }

    pub fn factor(&self, name: &str) -> Option<u64> {
        self.factors.iter().find(|f| f.name == name).map(|f| f.value)
    }

    pub fn step(&self, name: &str) -> Option<bool> {
        self.steps.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

/// First `v` with `divisor ∤ multiplier·#O(v)`.
fn uniform_failure(
    m: PrimeModulus,
    divisor: u64,
    multiplier: u64,
    decomp: &OrbitDecomposition,
) -> Option<Counterexample> {
    decomp.orbits.iter().find_map(|o| {
        let value = multiplier * o.size;
        (!value.is_multiple_of(divisor)).then_some(Counterexample {
            vector: o.representative,
            expected_divisor: divisor,
            value,
        })
    })
    .inspect(|c| {
        debug_assert_eq!(c.vector.modulus(), m);
    })
}

fn summaries(decomp: &OrbitDecomposition) -> Vec<OrbitSummary> {
    decomp
        .orbits
        .iter()
        .map(|o| OrbitSummary {
            representative: o.representative,
            size: o.size,
        })
        .collect()
}

fn transfer_ok(t: &TransferVerdict) -> bool {
    t.hypothesis_holds && t.conclusion_holds
}

/// Runs the split-CM argument as a computation:
/// `C_s ⊇ G' ⊇ G'^12 ⊆ G^ss ⊆ G`, transferring uniform divisibility by
/// `ell − 1` down the first two inclusions and up into `G`.
pub fn verify_case1_chain(s: &Case1Scenario) -> Result<DivisibilityCertificate> {
    let report = validate_case1(s);
    if !report.is_valid() {
        return Err(Error::InvalidScenario(report));
    }
    let m = s.g.modulus();
    let l = m.ell();
    let target = l - 1;
    let d = s.d.get();
    let cs = split_cartan(m);
    let gss = semisimplification(&s.g)?;
    let gp12 = kth_power_subgroup(&s.gp, 12)?;

    let cs_decomp = orbit_decomposition(&cs);
    let mut cs_sizes = cs_decomp.sizes();
    cs_sizes.sort_unstable();
    let three_orbits = cs_sizes == vec![l - 1, l - 1, (l - 1) * (l - 1)];

    let base = 1u64;
    let base_ok = uniform_failure(m, target, base, &cs_decomp).is_none();
    let cartan_index = subgroup_index(&cs, &s.gp)?;
    let power_index = subgroup_index(&s.gp, &gp12)?;

    let t1 = uniform_divisibility_transfer(target, base, &cs, &s.gp, TransferDirection::Down)?;
    let t2 = uniform_divisibility_transfer(target, base * cartan_index, &s.gp, &gp12, TransferDirection::Down)?;
    let inclusions = gp12.is_subgroup_of(&gss) && gss.is_subgroup_of(&s.g);
    let t3 = uniform_divisibility_transfer(
        target,
        base * cartan_index * power_index,
        &s.g,
        &gp12,
        TransferDirection::Up,
    )?;

    let g_decomp = orbit_decomposition(&s.g);
    let div_unknowns = uniform_failure(m, target, TWELFTH_POWER_INDEX_BOUND * base * cartan_index, &g_decomp).is_none();
    let assembled = base * cartan_index * power_index;
    let direct = uniform_failure(m, target, FINAL_CONSTANT * d, &g_decomp);

    let steps = vec![
        check("split_cartan_three_orbits", three_orbits),
        check("base_divisibility_c1", base_ok),
        check("transfer_cartan_to_cm_image", transfer_ok(&t1)),
        check("transfer_cm_image_to_twelfth_powers", transfer_ok(&t2)),
        check("inclusions_twelfth_powers_in_gss_in_g", inclusions),
        check("transfer_twelfth_powers_to_g", transfer_ok(&t3)),
        check("power_index_divides_144", TWELFTH_POWER_INDEX_BOUND.is_multiple_of(power_index)),
        check("div_unknowns", div_unknowns),
        check("cartan_index_divides_6d", (MAX_UNIT_COUNT * d).is_multiple_of(cartan_index)),
        check("assembled_constant_divides_864d", (FINAL_CONSTANT * d).is_multiple_of(assembled)),
    ];
    let chain_holds = steps.iter().all(|c| c.holds);
    Ok(DivisibilityCertificate {
        kind: ScenarioKind::SplitCm,
        ell: l,
        d,
        group_order: s.g.order(),
        orbits: summaries(&g_decomp),
        factors: vec![
            Factor { name: "base_constant", value: base },
            Factor { name: "cartan_index", value: cartan_index },
            Factor { name: "twelfth_power_index", value: power_index },
            Factor { name: "assembled_constant", value: assembled },
            Factor { name: "twelfth_power_index_bound", value: TWELFTH_POWER_INDEX_BOUND },
            Factor { name: "cartan_index_bound", value: MAX_UNIT_COUNT * d },
        ],
        steps,
        transfers: vec![t1, t2, t3],
        final_constant: FINAL_CONSTANT,
        chain_holds,
        verdict: if direct.is_none() { Verdict::Pass } else { Verdict::Fail },
        counterexample: direct,
    })
}

/// Divisibilities between the orders of cyclic character images `r` and
/// `chi` that follow from `#r^12 = #chi^6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterOrders {
    pub r6_order: u64,
    pub chi_divides_6r: bool,
    pub r_factors_through_r6: bool,
    pub chi_divides_36r6: bool,
}

impl CharacterOrders {
    pub fn all_hold(&self) -> bool {
        self.chi_divides_6r && self.r_factors_through_r6 && self.chi_divides_36r6
    }
}

/// `None` when the twelfth power of `r` and the sixth power of `chi` have
/// images of different orders; otherwise the three derived divisibilities.
pub fn character_order_chain(n_r: u64, n_chi: u64) -> Option<CharacterOrders> {
    if power_image_order(n_r, 12) != power_image_order(n_chi, 6) {
        return None;
    }
    let r6 = power_image_order(n_r, 6);
    Some(CharacterOrders {
        r6_order: r6,
        chi_divides_6r: (6 * n_r).is_multiple_of(n_chi),
        r_factors_through_r6: n_r == r6 * gcd(6, n_r),
        chi_divides_36r6: (GRH_CASE_CONSTANT * r6).is_multiple_of(n_chi),
    })
}

/// Runs the GRH-failure argument: `(G^ss)^6` is scalar, its orbits all have
/// size `#r^6`, the cyclic order identities give `ell − 1 | 36·d·#r^6`, and
/// the transfer up through `(G^ss)^6 ⊆ G^ss ⊆ G` finishes with 864.
pub fn verify_case2_chain(s: &Case2Scenario) -> Result<DivisibilityCertificate> {
    let report = validate_case2(s);
    if !report.is_valid() {
        return Err(Error::InvalidScenario(report));
    }
    let m = s.g.modulus();
    let l = m.ell();
    let target = l - 1;
    let d = s.d.get();
    let gss = semisimplification(&s.g)?;
    let gss6 = kth_power_subgroup(&gss, 6)?;

    let n_r = CyclicImage::generated_by(m, gss.generators().iter().map(|x| x.a())).order();
    let n_chi = determinant_image(&s.g).order();
    let r6 = power_image_order(n_r, 6);
    let orders = character_order_chain(n_r, n_chi);
    let det_index = (l - 1) / n_chi;

    let sixth_decomp = orbit_decomposition(&gss6);
    let uniform_r6 = sixth_decomp.orbits.iter().all(|o| o.size == r6);
    let reduced_constant = GRH_CASE_CONSTANT * d;

    let transfer = uniform_divisibility_transfer(target, reduced_constant, &s.g, &gss6, TransferDirection::Up)?;
    let g_decomp = orbit_decomposition(&s.g);
    let direct = uniform_failure(m, target, FINAL_CONSTANT * d, &g_decomp);

    let steps = vec![
        check("sixth_power_scalar", gss6.is_scalar()),
        check("sixth_power_order_is_r6", gss6.order() == r6),
        check("twelfth_orders_agree", orders.is_some()),
        check("chi_divides_6r", orders.is_some_and(|o| o.chi_divides_6r)),
        check("r_factors_through_r6", orders.is_some_and(|o| o.r_factors_through_r6)),
        check("chi_divides_36r6", orders.is_some_and(|o| o.chi_divides_36r6)),
        check("sixth_power_orbits_have_size_r6", uniform_r6),
        check("determinant_index_divides_d", d.is_multiple_of(det_index)),
        check("divides_36d_r6", (reduced_constant * r6).is_multiple_of(target)),
        check("transfer_sixth_powers_to_g", transfer_ok(&transfer)),
        check("grh_constant_divides_final", FINAL_CONSTANT.is_multiple_of(GRH_CASE_CONSTANT)),
    ];
    let chain_holds = steps.iter().all(|c| c.holds);
    Ok(DivisibilityCertificate {
        kind: ScenarioKind::GrhFailure,
        ell: l,
        d,
        group_order: s.g.order(),
        orbits: summaries(&g_decomp),
        factors: vec![
            Factor { name: "r_order", value: n_r },
            Factor { name: "chi_order", value: n_chi },
            Factor { name: "r6_order", value: r6 },
            Factor { name: "determinant_index", value: det_index },
            Factor { name: "reduced_constant", value: GRH_CASE_CONSTANT },
        ],
        steps,
        transfers: vec![transfer],
        final_constant: FINAL_CONSTANT,
        chain_holds,
        verdict: if direct.is_none() { Verdict::Pass } else { Verdict::Fail },
        counterexample: direct,
    })
}

/// Replays a certificate against its image group with orbit sizes recomputed
/// by brute-force enumeration. True iff the recorded orbit summaries and
/// verdict are reproduced.
pub fn replay_certificate(g: &MatrixGroup, cert: &DivisibilityCertificate) -> bool {
    let m = g.modulus();
    if m.ell() != cert.ell || g.order() != cert.group_order {
        return false;
    }
    let sizes = orbit_sizes_by_enumeration(g);
    let summaries_ok = cert
        .orbits
        .iter()
        .all(|o| sizes[o.representative.code() as usize] == o.size)
        && cert.orbits.iter().map(|o| o.size).sum::<u64>() == m.ell() * m.ell() - 1;
    let target = m.ell() - 1;
    let all_divide = Vector2::nonzero(m).all(|v| (cert.final_constant * cert.d * sizes[v.code() as usize]).is_multiple_of(target));
    let verdict = if all_divide { Verdict::Pass } else { Verdict::Fail };
    summaries_ok && verdict == cert.verdict
}

fn require_unit_count(w: u64) -> Result<()> {
    if matches!(w, 2 | 4 | 6) {
        Ok(())
    } else {
        Err(Error::InvalidUnitCount(w))
    }
}

/// Orders `rho` of the CM image admissible for `(ell, w, f)`: divisors of
/// `12(ell − 1)` with `ell² − 1 | w·f·rho`.
pub fn admissible_rho_orders(ell: PrimeModulus, w: u64, f: u64) -> Result<Vec<u64>> {
    require_unit_count(w)?;
    let l = ell.ell();
    Ok(divisors(12 * (l - 1))
        .into_iter()
        .filter(|rho| (w * f * rho).is_multiple_of(l * l - 1))
        .collect())
}

/// Returns whether `ell + 1 | 12·w·f`.
///
/// When both hypotheses `rho_order | 12(ell − 1)` and
/// `ell² − 1 | w·f·rho_order` hold, the conclusion is forced; a violation of
/// that implication is reported as an error. The sharper `ell + 1 | 72·f`
/// follows only for `w ∈ {2, 6}`: at `ell = 47, w = 4, f = 1` the hypotheses
/// hold with `rho_order = 552` but `48 ∤ 72`.
pub fn inert_bound_check(ell: PrimeModulus, w: u64, f: u64, rho_order: u64) -> Result<bool> {
    require_unit_count(w)?;
    let l = ell.ell();
    let conclusion = (12 * w * f).is_multiple_of(l + 1);
    let hypotheses = rho_order > 0
        && (12 * (l - 1)).is_multiple_of(rho_order)
        && (w * f * rho_order).is_multiple_of(l * l - 1);
    if hypotheses && !conclusion {
        return Err(Error::Config(format!(
            "inert implication violated at ell={l}, w={w}, f={f}, rho={rho_order}"
        )));
    }
    Ok(conclusion)
}

/// Subgroup of the non-split Cartan of the given order (it is cyclic).
pub fn nonsplit_subgroup(ns: &MatrixGroup, order: u64) -> Result<MatrixGroup> {
    let n = ns.order();
    if order == 0 || !n.is_multiple_of(order) {
        return Err(Error::OrderDoesNotDivide { order, bound: n });
    }
    let gen = ns.generators()[0];
    crate::gl2::closure(ns.modulus(), &[gen.pow((n / order) as i64)])
}

/// `C_ns(ell)` acts simply transitively on `V•`, and each of its subgroups
/// acts freely (every orbit has the subgroup's order).
pub fn nonsplit_orbit_check(ell: PrimeModulus) -> Result<bool> {
    let ns = nonsplit_cartan(ell)?;
    let l = ell.ell();
    let whole = orbit_decomposition(&ns);
    if whole.orbits.len() != 1 || whole.orbits[0].size != l * l - 1 {
        return Ok(false);
    }
    for k in divisors(ns.order()) {
        let h = nonsplit_subgroup(&ns, k)?;
        if h.order() != k || !orbit_decomposition(&h).orbits.iter().all(|o| o.size == k) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::{borel, closure, scalars, trivial, Mat2};

    fn p(ell: u64) -> PrimeModulus {
        PrimeModulus::new(ell).unwrap()
    }

    fn deg(d: u64) -> DegreeParameter {
        DegreeParameter::new(d).unwrap()
    }

    #[test]
    fn case1_validation_examples() {
        let s = Case1Scenario { g: borel(p(13)), gp: split_cartan(p(13)), d: deg(1) };
        assert!(validate_case1(&s).is_valid());

        // Units mod 5 have order dividing 4, so both twelfth-power groups are
        // trivial; the index [C_s(5) : 1] = 16 does not divide 6.
        let s = Case1Scenario { g: borel(p(5)), gp: trivial(p(5)), d: deg(1) };
        let r = validate_case1(&s);
        assert_eq!(r.holds("twelfth_powers_agree"), Some(true));
        assert_eq!(r.failed(), vec!["cartan_index_divides_6d"]);

        let g = closure(p(5), &[Mat2::new(0, 1, 1, 0, p(5)).unwrap()]).unwrap();
        let s = Case1Scenario { g, gp: split_cartan(p(5)), d: deg(1) };
        let r = validate_case1(&s);
        assert_eq!(r.holds("upper_triangular"), Some(false));
        assert!(matches!(verify_case1_chain(&s), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn case1_chain_examples() {
        let s = Case1Scenario { g: borel(p(13)), gp: split_cartan(p(13)), d: deg(1) };
        let cert = verify_case1_chain(&s).unwrap();
        assert!(cert.passes());
        let mut sizes: Vec<u64> = cert.orbits.iter().map(|o| o.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![12, 156]);
        assert_eq!(cert.factor("cartan_index"), Some(1));
        assert!(replay_certificate(&s.g, &cert));

        let s = Case1Scenario { g: split_cartan(p(5)), gp: split_cartan(p(5)), d: deg(1) };
        let cert = verify_case1_chain(&s).unwrap();
        assert!(cert.passes());
        let mut sizes: Vec<u64> = cert.orbits.iter().map(|o| o.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 4, 16]);

        let s = Case1Scenario { g: borel(p(13)), gp: split_cartan(p(13)), d: deg(720) };
        assert!(verify_case1_chain(&s).unwrap().passes());
    }

    #[test]
    fn case2_chain_examples() {
        // Scalars mod 13: determinant image is the squares (index 2), so d must be even.
        let s = Case2Scenario { g: scalars(p(13)), d: deg(2) };
        let cert = verify_case2_chain(&s).unwrap();
        assert!(cert.passes());
        assert_eq!(cert.factor("r_order"), Some(12));
        assert_eq!(cert.factor("r6_order"), Some(2));
        assert!(replay_certificate(&s.g, &cert));
        let s = Case2Scenario { g: scalars(p(13)), d: deg(1) };
        assert_eq!(validate_case2(&s).failed(), vec!["determinant_index_divides_d"]);

        // Trivial image mod 7 needs 6 | d.
        let s = Case2Scenario { g: trivial(p(7)), d: deg(6) };
        let cert = verify_case2_chain(&s).unwrap();
        assert!(cert.passes());
        assert!(cert.orbits.iter().all(|o| o.size == 1));

        // diag(2, 1) mod 7: 2^6 = 1 = 1^6 holds; diag(3, 1): 3^6 = 1 as well,
        // so use mod 13 where 2^6 = 12 ≠ 1.
        let g = closure(p(13), &[Mat2::diag(2, 1, p(13)).unwrap()]).unwrap();
        let s = Case2Scenario { g, d: deg(12) };
        let r = validate_case2(&s);
        assert_eq!(r.holds("sixth_powers_agree"), Some(false));
        assert!(matches!(verify_case2_chain(&s), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn inert_examples() {
        let rhos = admissible_rho_orders(p(71), 6, 2).unwrap();
        assert_eq!(rhos, vec![420, 840]);
        for rho in rhos {
            assert!(inert_bound_check(p(71), 6, 2, rho).unwrap());
        }
        assert!(inert_bound_check(p(11), 2, 1, 1).unwrap());
        assert!(!inert_bound_check(p(97), 2, 1, 1).unwrap());
        assert!(admissible_rho_orders(p(97), 2, 1).unwrap().is_empty());
        assert!(matches!(inert_bound_check(p(11), 3, 1, 1), Err(Error::InvalidUnitCount(3))));
    }

    #[test]
    fn character_orders_at_thirteen() {
        let o = character_order_chain(12, 6).unwrap();
        assert_eq!(o.r6_order, 2);
        assert!(o.all_hold());
        // #r^12 = 1 but #chi^6 = 2.
        assert!(character_order_chain(12, 4).is_none());
    }

    #[test]
    fn four_units_escape_the_72f_bound() {
        let rhos = admissible_rho_orders(p(47), 4, 1).unwrap();
        assert_eq!(rhos, vec![552]);
        assert!(inert_bound_check(p(47), 4, 1, 552).unwrap());
        assert_ne!(72 % 48, 0);
    }

    #[test]
    fn nonsplit_examples() {
        assert!(nonsplit_orbit_check(p(5)).unwrap());
        assert!(nonsplit_orbit_check(p(3)).unwrap());
        assert!(matches!(nonsplit_orbit_check(p(2)), Err(Error::EvenPrime)));
        let ns7 = nonsplit_cartan(p(7)).unwrap();
        let s7 = scalars(p(7));
        assert!(s7.is_subgroup_of(&ns7));
        assert!(orbit_decomposition(&s7).orbits.iter().all(|o| o.size == 6));
        assert_eq!(nonsplit_subgroup(&ns7, 6).unwrap(), s7);
    }

    #[test]
    fn degree_must_be_positive() {
        assert!(DegreeParameter::new(0).is_err());
    }
}
