//! The left-multiplication action of matrix groups on `V• = F_ell² ∖ {0}`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gl2::{Mat2, MatrixGroup};
use crate::modarith::{gcd, PrimeModulus};

/// A column vector `(x, y)` over `F_ell`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vector2 {
    x: u32,
    y: u32,
    modulus: PrimeModulus,
}

impl Vector2 {
    pub fn new(x: i64, y: i64, modulus: PrimeModulus) -> Self {
        Vector2 {
            x: modulus.reduce(x) as u32,
            y: modulus.reduce(y) as u32,
            modulus,
        }
    }

    pub fn e1(modulus: PrimeModulus) -> Self {
        Vector2::new(1, 0, modulus)
    }

    pub fn e2(modulus: PrimeModulus) -> Self {
        Vector2::new(0, 1, modulus)
    }

    /// `y·ell + x`.
    #[inline]
    pub fn code(&self) -> u64 {
        self.y as u64 * self.modulus.ell() + self.x as u64
    }

    pub fn from_code(code: u64, modulus: PrimeModulus) -> Self {
        let l = modulus.ell();
        Vector2::new((code % l) as i64, (code / l) as i64, modulus)
    }

    #[inline]
    pub fn x(&self) -> u64 {
        self.x as u64
    }

    #[inline]
    pub fn y(&self) -> u64 {
        self.y as u64
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// All of `V•` in encoding order.
    pub fn nonzero(modulus: PrimeModulus) -> impl Iterator<Item = Vector2> {
        let l = modulus.ell();
        (1..l * l).map(move |c| Vector2::from_code(c, modulus))
    }
}

impl Mul<Vector2> for &Mat2 {
    type Output = Vector2;

    #[inline]
    fn mul(self, v: Vector2) -> Vector2 {
        let l = self.modulus().ell();
        let (x, y) = (v.x(), v.y());
        Vector2 {
            x: ((self.a() * x + self.b() * y) % l) as u32,
            y: ((self.c() * x + self.d() * y) % l) as u32,
            modulus: v.modulus,
        }
    }
}

impl fmt::Debug for Vector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) mod {}", self.x, self.y, self.modulus)
    }
}

impl Serialize for Vector2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x(), self.y()].serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Member with the smallest encoding.
    pub representative: Vector2,
    /// Sorted by encoding.
    pub members: Vec<Vector2>,
    pub size: u64,
}

impl Orbit {
    fn from_members(mut members: Vec<Vector2>) -> Orbit {
        members.sort_unstable_by_key(Vector2::code);
        Orbit {
            representative: members[0],
            size: members.len() as u64,
            members,
        }
    }

    pub fn contains(&self, v: &Vector2) -> bool {
        self.members.binary_search_by_key(&v.code(), Vector2::code).is_ok()
    }
}

fn require_nonzero(v: &Vector2) -> Result<()> {
    if v.is_zero() {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

fn require_same_modulus(g: &MatrixGroup, v: &Vector2) -> Result<()> {
    if g.modulus() != v.modulus() {
        Err(Error::MixedModuli(g.modulus().ell(), v.modulus().ell()))
    } else {
        Ok(())
    }
}

/// Breadth-first search over the generators, filling `visited` by code.
fn orbit_bfs(g: &MatrixGroup, v: Vector2, visited: &mut [bool]) -> Vec<Vector2> {
    let mut members = vec![v];
    visited[v.code() as usize] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(w) = queue.pop_front() {
        for gen in g.generators() {
            let u = gen * w;
            let c = u.code() as usize;
            if !visited[c] {
                visited[c] = true;
                members.push(u);
                queue.push_back(u);
            }
        }
    }
    members
}

pub fn orbit(g: &MatrixGroup, v: Vector2) -> Result<Orbit> {
    require_same_modulus(g, &v)?;
    require_nonzero(&v)?;
    let l = g.modulus().ell();
    let mut visited = vec![false; (l * l) as usize];
    Ok(Orbit::from_members(orbit_bfs(g, v, &mut visited)))
}

/// `#{g ∈ G : g·v = v}`, counted over the element set.
pub fn stabilizer_order(g: &MatrixGroup, v: Vector2) -> Result<u64> {
    require_same_modulus(g, &v)?;
    require_nonzero(&v)?;
    Ok(g.elements().iter().filter(|x| *x * v == v).count() as u64)
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub modulus: PrimeModulus,
    pub group_order: u64,
    /// Ordered by representative encoding.
    pub orbits: Vec<Orbit>,
    orbit_of: Vec<u32>,
}

impl OrbitDecomposition {
    /// The orbit containing `v`.
    pub fn orbit_of(&self, v: &Vector2) -> &Orbit {
        &self.orbits[self.orbit_of[v.code() as usize] as usize]
    }

    pub fn size_of(&self, v: &Vector2) -> u64 {
        self.orbit_of(v).size
    }

    /// Orbit sizes in representative order.
    pub fn sizes(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    pub fn total_size(&self) -> u64 {
        self.orbits.iter().map(|o| o.size).sum()
    }
}

pub fn orbit_decomposition(g: &MatrixGroup) -> OrbitDecomposition {
    let m = g.modulus();
    let l = m.ell();
    let mut visited = vec![false; (l * l) as usize];
    let mut orbit_of = vec![u32::MAX; (l * l) as usize];
    let mut orbits = Vec::new();
    for v in Vector2::nonzero(m) {
        if visited[v.code() as usize] {
            continue;
        }
        let orb = Orbit::from_members(orbit_bfs(g, v, &mut visited));
        for w in &orb.members {
            orbit_of[w.code() as usize] = orbits.len() as u32;
        }
        orbits.push(orb);
    }
    OrbitDecomposition {
        modulus: m,
        group_order: g.order(),
        orbits,
        orbit_of,
    }
}

/// Orbit sizes indexed by vector code, computed by applying every group
/// element to one point per orbit. Shares nothing with the generator search
/// and serves as the independent route for certificate replay.
pub fn orbit_sizes_by_enumeration(g: &MatrixGroup) -> Vec<u64> {
    let m = g.modulus();
    let l = m.ell();
    let mut sizes = vec![0u64; (l * l) as usize];
    for v in Vector2::nonzero(m) {
        if sizes[v.code() as usize] != 0 {
            continue;
        }
        let members: HashSet<u64> = g.elements().iter().map(|x| (x * v).code()).collect();
        let n = members.len() as u64;
        for c in members {
            sizes[c as usize] = n;
        }
    }
    sizes
}

/// Predicted orbit structure of a diagonal group from its two diagonal characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalOrbitPrediction {
    /// `[F_ell^× : im χ1]`, the number of orbits on the `e1` axis.
    pub i1: u64,
    /// `[F_ell^× : im χ2]`.
    pub i2: u64,
    pub axis1_size: u64,
    pub axis2_size: u64,
    /// `#O(e1 + e2)`.
    pub mixed_orbit_size: u64,
    /// Number of orbits off both axes, `(ell − 1)² / mixed_orbit_size`.
    pub mixed_count: u64,
}

impl DiagonalOrbitPrediction {
    /// Exact agreement with an enumerated decomposition: counts and sizes on
    /// each axis and off the axes.
    pub fn matches(&self, decomp: &OrbitDecomposition) -> bool {
        let l = decomp.modulus.ell();
        let (mut axis1, mut axis2, mut mixed) = (Vec::new(), Vec::new(), Vec::new());
        for o in &decomp.orbits {
            let r = o.representative;
            match (r.x() != 0, r.y() != 0) {
                (true, false) => axis1.push(o),
                (false, true) => axis2.push(o),
                _ => mixed.push(o),
            }
        }
        let shape_ok = |orbs: &[&Orbit], count: u64, size: u64, on: &dyn Fn(&Vector2) -> bool| {
            orbs.len() as u64 == count
                && orbs.iter().all(|o| o.size == size && o.members.iter().all(on))
        };
        self.i1 * self.axis1_size == l - 1
            && self.i2 * self.axis2_size == l - 1
            && self.mixed_count * self.mixed_orbit_size == (l - 1) * (l - 1)
            && shape_ok(&axis1, self.i1, self.axis1_size, &|v| v.y() == 0)
            && shape_ok(&axis2, self.i2, self.axis2_size, &|v| v.x() == 0)
            && shape_ok(&mixed, self.mixed_count, self.mixed_orbit_size, &|v| v.x() != 0 && v.y() != 0)
    }
}

pub fn predict_diagonal_orbits(gp: &MatrixGroup) -> Result<DiagonalOrbitPrediction> {
    if !gp.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let m = gp.modulus();
    let l = m.ell();
    let image_size = |f: fn(&Mat2) -> u64| {
        let mut seen = vec![false; l as usize];
        gp.elements().iter().for_each(|x| seen[f(x) as usize] = true);
        seen.iter().filter(|&&s| s).count() as u64
    };
    let axis1_size = image_size(Mat2::a);
    let axis2_size = image_size(Mat2::d);
    let mixed_orbit_size = orbit(gp, Vector2::new(1, 1, m))?.size;
    Ok(DiagonalOrbitPrediction {
        i1: (l - 1) / axis1_size,
        i2: (l - 1) / axis2_size,
        axis1_size,
        axis2_size,
        mixed_orbit_size,
        mixed_count: (l - 1) * (l - 1) / mixed_orbit_size,
    })
}

/// Representatives `g_i` of the right cosets `H g_i` partitioning `G`,
/// so that `O_G(v) = ⋃ O_H(g_i v)`.
pub fn right_coset_representatives(g: &MatrixGroup, h: &MatrixGroup) -> Result<Vec<Mat2>> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    let mut covered: HashSet<Mat2> = HashSet::with_capacity(g.elements().len());
    let mut reps = Vec::new();
    for x in g.elements() {
        if covered.contains(x) {
            continue;
        }
        reps.push(*x);
        covered.extend(h.elements().iter().map(|y| y.mul(x)));
    }
    debug_assert_eq!(reps.len() as u64 * h.order(), g.order());
    Ok(reps)
}

/// The distinct `H`-orbits `O_H(g_i v)` over right coset representatives
/// `g_i`; they partition `O_G(v)`. Distinct cosets can give the same
/// `H`-orbit, so the list can be shorter than `[G : H]`.
pub fn coset_orbit_refinement(g: &MatrixGroup, h: &MatrixGroup, v: Vector2) -> Result<Vec<Orbit>> {
    require_same_modulus(g, &v)?;
    require_nonzero(&v)?;
    let reps = right_coset_representatives(g, h)?;
    let mut parts: Vec<Orbit> = Vec::new();
    let mut seen_reps = HashSet::new();
    for gi in &reps {
        let o = orbit(h, gi * v)?;
        if seen_reps.insert(o.representative.code()) {
            parts.push(o);
        }
    }
    parts.sort_unstable_by_key(|o| o.representative.code());
    Ok(parts)
}

/// Whether `parts` are pairwise disjoint with union exactly `whole`.
pub fn is_partition_of(parts: &[Orbit], whole: &Orbit) -> bool {
    let mut seen = HashSet::new();
    for p in parts {
        for v in &p.members {
            if !seen.insert(v.code()) || !whole.contains(v) {
                return false;
            }
        }
    }
    seen.len() as u64 == whole.size && parts.iter().map(|p| p.size).sum::<u64>() == whole.size
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferDirection {
    /// `M | c·#O_H(v)` for all v implies `M | c·#O_G(v)` for all v.
    Up,
    /// `M | C·#O_G(v)` for all v implies `M | C·[G:H]·#O_H(v)` for all v.
    Down,
}

/// A failed divisibility `expected_divisor | value` at `vector`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub vector: Vector2,
    pub expected_divisor: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferVerdict {
    pub direction: TransferDirection,
    pub divisor: u64,
    pub hypothesis_constant: u64,
    pub conclusion_constant: u64,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// First failing vector: for the hypothesis if it fails, otherwise for the conclusion.
    pub counterexample: Option<Counterexample>,
}

impl TransferVerdict {
    /// A true hypothesis with a false conclusion.
    pub fn falsifies(&self) -> bool {
        self.hypothesis_holds && !self.conclusion_holds
    }
}

fn first_failure(
    m: PrimeModulus,
    divisor: u64,
    constant: u64,
    sizes: &OrbitDecomposition,
) -> Option<Counterexample> {
    Vector2::nonzero(m).find_map(|v| {
        let value = constant * sizes.size_of(&v);
        (!value.is_multiple_of(divisor)).then_some(Counterexample {
            vector: v,
            expected_divisor: divisor,
            value,
        })
    })
}

/// Checks one direction of the orbit-divisibility transfer between `H ⊆ G`
/// on every point of `V•`.
pub fn uniform_divisibility_transfer(
    divisor: u64,
    constant: u64,
    g: &MatrixGroup,
    h: &MatrixGroup,
    direction: TransferDirection,
) -> Result<TransferVerdict> {
    let index = crate::gl2::subgroup_index(g, h)?;
    let m = g.modulus();
    let dg = orbit_decomposition(g);
    let dh = orbit_decomposition(h);
    let (hyp_dec, concl_dec, concl_constant) = match direction {
        TransferDirection::Up => (&dh, &dg, constant),
        TransferDirection::Down => (&dg, &dh, constant * index),
    };
    let hyp_fail = first_failure(m, divisor, constant, hyp_dec);
    let concl_fail = first_failure(m, divisor, concl_constant, concl_dec);
    Ok(TransferVerdict {
        direction,
        divisor,
        hypothesis_constant: constant,
        conclusion_constant: concl_constant,
        hypothesis_holds: hyp_fail.is_none(),
        conclusion_holds: concl_fail.is_none(),
        counterexample: hyp_fail.or(concl_fail),
    })
}

/// Smallest constant `c` with `divisor | c·#O(v)` for every `v`.
pub fn minimal_uniform_constant(divisor: u64, decomp: &OrbitDecomposition) -> u64 {
    decomp
        .orbits
        .iter()
        .fold(1, |acc, o| crate::modarith::lcm(acc, divisor / gcd(divisor, o.size)))
}
