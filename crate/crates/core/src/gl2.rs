//! Invertible 2×2 matrices over `F_ell` and finite subgroups of `GL2(ell)`.
//!
//! A [`MatrixGroup`] stores its full element set, sorted by the canonical
//! encoding `a·ell³ + b·ell² + c·ell + d`, together with a generating list.
//! Group equality is equality of element sets.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{least_primitive_root, PrimeModulus};

/// `[[a, b], [c, d]]` with nonzero determinant mod `ell`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    entries: [u32; 4],
    modulus: PrimeModulus,
}

impl Mat2 {
    /// Entries are reduced mod `ell`; fails if the determinant vanishes.
    pub fn new(a: i64, b: i64, c: i64, d: i64, modulus: PrimeModulus) -> Result<Self> {
        let m = Mat2::raw(
            modulus.reduce(a),
            modulus.reduce(b),
            modulus.reduce(c),
            modulus.reduce(d),
            modulus,
        );
        if m.det() == 0 {
            return Err(Error::Singular(modulus.ell()));
        }
        Ok(m)
    }

    /// Caller guarantees reduced entries and nonzero determinant.
    #[inline]
    pub(crate) fn raw(a: u64, b: u64, c: u64, d: u64, modulus: PrimeModulus) -> Self {
        Mat2 {
            entries: [a as u32, b as u32, c as u32, d as u32],
            modulus,
        }
    }

    pub fn identity(modulus: PrimeModulus) -> Self {
        Mat2::raw(1, 0, 0, 1, modulus)
    }

    /// `diag(a, d)`; fails if either entry is zero.
    pub fn diag(a: i64, d: i64, modulus: PrimeModulus) -> Result<Self> {
        Mat2::new(a, 0, 0, d, modulus)
    }

    /// The transvection `[[1, n], [0, 1]]`.
    pub fn transvection(n: i64, modulus: PrimeModulus) -> Self {
        Mat2::raw(1, modulus.reduce(n), 0, 1, modulus)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn a(&self) -> u64 {
        self.entries[0] as u64
    }
    #[inline]
    pub fn b(&self) -> u64 {
        self.entries[1] as u64
    }
    #[inline]
    pub fn c(&self) -> u64 {
        self.entries[2] as u64
    }
    #[inline]
    pub fn d(&self) -> u64 {
        self.entries[3] as u64
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.a(), self.b(), self.c(), self.d()]
    }

    pub fn det(&self) -> u64 {
        let m = self.modulus;
        m.sub(m.mul(self.a(), self.d()), m.mul(self.b(), self.c()))
    }

    /// `a·ell³ + b·ell² + c·ell + d`.
    #[inline]
    pub fn code(&self) -> u64 {
        let l = self.modulus.ell();
        ((self.a() * l + self.b()) * l + self.c()) * l + self.d()
    }

    pub fn from_code(code: u64, modulus: PrimeModulus) -> Result<Self> {
        let l = modulus.ell();
        let d = code % l;
        let c = code / l % l;
        let b = code / (l * l) % l;
        let a = code / (l * l * l);
        Mat2::new(a as i64, b as i64, c as i64, d as i64, modulus)
    }

    #[inline]
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let l = self.modulus.ell();
        let [a, b, c, d] = self.entries();
        let [e, f, g, h] = rhs.entries();
        Mat2::raw(
            (a * e + b * g) % l,
            (a * f + b * h) % l,
            (c * e + d * g) % l,
            (c * f + d * h) % l,
            self.modulus,
        )
    }

    pub fn inverse(&self) -> Mat2 {
        let m = self.modulus;
        let inv_det = m.inv(self.det()).expect("Mat2 is invertible by construction");
        Mat2::raw(
            m.mul(self.d(), inv_det),
            m.mul(m.neg(self.b()), inv_det),
            m.mul(m.neg(self.c()), inv_det),
            m.mul(self.a(), inv_det),
            m,
        )
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Mat2 {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut exp = k.unsigned_abs();
        let mut acc = Mat2::identity(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Order of the element in `GL2(ell)`.
    pub fn order(&self) -> u64 {
        let id = Mat2::identity(self.modulus);
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// `self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c() == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.b() == 0 && self.c() == 0
    }

    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.a() == self.d()
    }

    /// Diagonal part of an upper-triangular matrix.
    pub fn diagonal_part(&self) -> Mat2 {
        Mat2::raw(self.a(), 0, 0, self.d(), self.modulus)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] mod {}",
            self.a(),
            self.b(),
            self.c(),
            self.d(),
            self.modulus
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a(), self.b(), self.c(), self.d())
    }
}

/// Serialized as `[[a, b], [c, d]]`; the modulus travels with the enclosing record.
impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.a(), self.b()], [self.c(), self.d()]].serialize(s)
    }
}

/// A finite subgroup of `GL2(ell)` with an explicit, sorted element set.
#[derive(Clone)]
pub struct MatrixGroup {
    modulus: PrimeModulus,
    elements: Vec<Mat2>,
    generators: Vec<Mat2>,
}

impl PartialEq for MatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.elements == other.elements
    }
}

impl Eq for MatrixGroup {}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("ell", &self.modulus.ell())
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

fn check_modulus(modulus: PrimeModulus, gens: &[Mat2]) -> Result<()> {
    match gens.iter().find(|g| g.modulus() != modulus) {
        Some(g) => Err(Error::MixedModuli(modulus.ell(), g.modulus().ell())),
        None => Ok(()),
    }
}

/// Breadth-first closure of a generating list.
///
/// Right multiplication by generators suffices: in a finite group every
/// inverse is a positive power.
pub fn closure(modulus: PrimeModulus, gens: &[Mat2]) -> Result<MatrixGroup> {
    check_modulus(modulus, gens)?;
    if let Some(g) = gens.iter().find(|g| g.det() == 0) {
        return Err(Error::Singular(g.modulus().ell()));
    }
    let id = Mat2::identity(modulus);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                elements.push(y);
                queue.push_back(y);
            }
        }
    }
    elements.sort_unstable();
    let mut generators: Vec<Mat2> = gens.iter().copied().filter(|g| *g != id).collect();
    generators.sort_unstable();
    generators.dedup();
    Ok(MatrixGroup {
        modulus,
        elements,
        generators,
    })
}

/// `1` for `ell = 2`, otherwise the least primitive root.
fn unit_generator(m: PrimeModulus) -> i64 {
    least_primitive_root(m).map(|g| g.value() as i64).unwrap_or(1)
}

/// Upper-triangular matrices; order `ell·(ell − 1)²`.
pub fn borel(m: PrimeModulus) -> MatrixGroup {
    let l = m.ell();
    let mut elements = Vec::with_capacity((l * (l - 1) * (l - 1)) as usize);
    for a in 1..l {
        for b in 0..l {
            for d in 1..l {
                elements.push(Mat2::raw(a, b, 0, d, m));
            }
        }
    }
    let g = unit_generator(m);
    let gens = [
        Mat2::diag(g, 1, m).unwrap(),
        Mat2::diag(1, g, m).unwrap(),
        Mat2::transvection(1, m),
    ];
    MatrixGroup::from_sorted(m, elements, &gens)
}

/// Diagonal matrices; order `(ell − 1)²`.
pub fn split_cartan(m: PrimeModulus) -> MatrixGroup {
    let l = m.ell();
    let elements = (1..l)
        .flat_map(|a| (1..l).map(move |d| Mat2::raw(a, 0, 0, d, m)))
        .collect();
    let g = unit_generator(m);
    let gens = [Mat2::diag(g, 1, m).unwrap(), Mat2::diag(1, g, m).unwrap()];
    MatrixGroup::from_sorted(m, elements, &gens)
}

/// `{[[a, b·eps], [b, a]] : (a, b) ≠ (0, 0)}` with `eps` the least primitive
/// root; cyclic of order `ell² − 1`.
pub fn nonsplit_cartan(m: PrimeModulus) -> Result<MatrixGroup> {
    let eps = least_primitive_root(m)?.value();
    let l = m.ell();
    let mut elements = Vec::with_capacity((l * l - 1) as usize);
    for a in 0..l {
        for b in 0..l {
            if a != 0 || b != 0 {
                elements.push(Mat2::raw(a, m.mul(b, eps), b, a, m));
            }
        }
    }
    elements.sort_unstable();
    let order = l * l - 1;
    let prime_factors: Vec<u64> = crate::modarith::divisors(order)
        .into_iter()
        .filter(|&p| p > 1 && crate::modarith::is_prime(p))
        .collect();
    let id = Mat2::identity(m);
    let generator = *elements
        .iter()
        .find(|x| prime_factors.iter().all(|&p| x.pow((order / p) as i64) != id))
        .expect("the multiplicative group of F_{ell^2} is cyclic");
    Ok(MatrixGroup::from_sorted(m, elements, &[generator]))
}

/// Scalar matrices `a·I`; order `ell − 1`.
pub fn scalars(m: PrimeModulus) -> MatrixGroup {
    let elements = (1..m.ell()).map(|a| Mat2::raw(a, 0, 0, a, m)).collect();
    let g = unit_generator(m);
    MatrixGroup::from_sorted(m, elements, &[Mat2::diag(g, g, m).unwrap()])
}

/// Upper unitriangular matrices `[[1, n], [0, 1]]`; order `ell`.
pub fn unipotent(m: PrimeModulus) -> MatrixGroup {
    let elements = (0..m.ell()).map(|n| Mat2::raw(1, n, 0, 1, m)).collect();
    MatrixGroup::from_sorted(m, elements, &[Mat2::transvection(1, m)])
}

pub fn trivial(m: PrimeModulus) -> MatrixGroup {
    MatrixGroup::from_sorted(m, vec![Mat2::identity(m)], &[])
}

/// `{g^k : g ∈ G}` for abelian `G`, generated by the `k`-th powers of the generators.
pub fn kth_power_subgroup(g: &MatrixGroup, k: u64) -> Result<MatrixGroup> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let mut elements: Vec<Mat2> = g.elements.iter().map(|x| x.pow(k as i64)).collect();
    elements.sort_unstable();
    elements.dedup();
    let gens: Vec<Mat2> = g.generators.iter().map(|x| x.pow(k as i64)).collect();
    Ok(MatrixGroup::from_sorted(g.modulus, elements, &gens))
}

/// `P⁻¹ G P`, elementwise.
pub fn conjugate(g: &MatrixGroup, p: &Mat2) -> Result<MatrixGroup> {
    check_modulus(g.modulus, std::slice::from_ref(p))?;
    if p.det() == 0 {
        return Err(Error::Singular(g.modulus.ell()));
    }
    let p_inv = p.inverse();
    let conj = |x: &Mat2| p_inv.mul(x).mul(p);
    let mut elements: Vec<Mat2> = g.elements.iter().map(conj).collect();
    elements.sort_unstable();
    let gens: Vec<Mat2> = g.generators.iter().map(conj).collect();
    Ok(MatrixGroup::from_sorted(g.modulus, elements, &gens))
}

/// `#G / #H`, after checking `H ⊆ G` elementwise.
pub fn subgroup_index(g: &MatrixGroup, h: &MatrixGroup) -> Result<u64> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    Ok(g.order() / h.order())
}

impl MatrixGroup {
    fn from_sorted(modulus: PrimeModulus, elements: Vec<Mat2>, gens: &[Mat2]) -> MatrixGroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let id = Mat2::identity(modulus);
        let mut generators: Vec<Mat2> = gens.iter().copied().filter(|g| *g != id).collect();
        generators.sort_unstable();
        generators.dedup();
        MatrixGroup {
            modulus,
            elements,
            generators,
        }
    }

    /// Builds a group from an element set that is already known to be closed,
    /// choosing a small generating list greedily in canonical order.
    pub fn from_elements(modulus: PrimeModulus, elements: impl IntoIterator<Item = Mat2>) -> Result<MatrixGroup> {
        let mut elements: Vec<Mat2> = elements.into_iter().collect();
        check_modulus(modulus, &elements)?;
        elements.sort_unstable();
        elements.dedup();
        let mut gens = Vec::new();
        let mut current = trivial(modulus);
        for x in &elements {
            if !current.contains(x) {
                gens.push(*x);
                current = closure(modulus, &gens)?;
            }
        }
        if current.elements != elements {
            return Err(Error::NotSubgroup);
        }
        Ok(current)
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn contains(&self, x: &Mat2) -> bool {
        x.modulus() == self.modulus && self.elements.binary_search(x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.modulus == other.modulus
            && self.order() <= other.order()
            && other.order().is_multiple_of(self.order())
            && self.elements.iter().all(|x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.elements.iter().all(Mat2::is_upper_triangular)
    }

    pub fn is_diagonal(&self) -> bool {
        self.elements.iter().all(Mat2::is_diagonal)
    }

    pub fn is_scalar(&self) -> bool {
        self.elements.iter().all(Mat2::is_scalar)
    }

    /// Pairwise commutation of the generators, which generate the group.
    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, x)| {
            self.generators[i + 1..]
                .iter()
                .all(|y| x.mul(y) == y.mul(x))
        })
    }

    /// Subgroup generated by `self` and `other`.
    pub fn join(&self, other: &MatrixGroup) -> Result<MatrixGroup> {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(&other.generators);
        closure(self.modulus, &gens)
    }

    pub fn intersection(&self, other: &MatrixGroup) -> Result<MatrixGroup> {
        check_modulus(self.modulus, other.elements())?;
        let common: Vec<Mat2> = self
            .elements
            .iter()
            .copied()
            .filter(|x| other.contains(x))
            .collect();
        MatrixGroup::from_elements(self.modulus, common)
    }

    /// Full check of the group invariants: identity, closure under products
    /// and inverses, generator membership, `closure(generators) = elements`,
    /// and Lagrange against `#GL2(ell)`. Quadratic in the order.
    pub fn check_invariants(&self) -> bool {
        let id = Mat2::identity(self.modulus);
        self.contains(&id)
            && self.modulus.gl2_order().is_multiple_of(self.order())
            && self.generators.iter().all(|g| self.contains(g))
            && self.elements.iter().all(|x| self.contains(&x.inverse()))
            && self
                .elements
                .iter()
                .all(|x| self.elements.iter().all(|y| self.contains(&x.mul(y))))
            && closure(self.modulus, &self.generators)
                .map(|c| c == *self)
                .unwrap_or(false)
    }

    /// Sorted element codes, usable as a hash key for deduplication.
    pub fn element_codes(&self) -> Vec<u64> {
        self.elements.iter().map(Mat2::code).collect()
    }
}

/// Serializable description of a group: modulus, order and generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub ell: u64,
    pub order: u64,
    pub generators: Vec<[[u64; 2]; 2]>,
}

impl From<&MatrixGroup> for GroupSummary {
    fn from(g: &MatrixGroup) -> Self {
        GroupSummary {
            ell: g.modulus.ell(),
            order: g.order(),
            generators: g
                .generators
                .iter()
                .map(|m| [[m.a(), m.b()], [m.c(), m.d()]])
                .collect(),
        }
    }
}
