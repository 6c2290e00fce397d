//! Polyhedral cones of rational cocharacters.
//!
//! A cone is kept in both descriptions at once — defining inequalities
//! (characters `β` with `⟨λ, β⟩ ≥ 0`) and generators — with each list in a
//! canonical form: primitive integer vectors, lexicographically sorted.
//! Conversion runs a double-description pass: generators come from inserting
//! the inequalities one at a time into the full space, and the inequality list
//! is recovered as the generator set of the dual cone.  Canonicalization makes
//! the stored lists independent of insertion order: extremal rays are reduced
//! modulo the lineality space by orthogonal projection, and the lineality
//! basis is the reduced row echelon form of any spanning set.
//!
//! Scale expectations are small (ambient dimension at most about eight, a few
//! dozen inequalities), so the implementation favours exactness and clarity:
//! candidate rays from all sign-split pairs, then an exact rank test for
//! extremality.

use num::{Signed, Zero};

use crate::matrix::{self, Mat};
use crate::rational::{self, Rat};
use crate::rootdatum::{Character, Cocharacter};
use crate::{Error, Result};

/// A polyhedral cone in `Y ⊗ Q = Q^dim`, canonical in both descriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub dim: usize,
    /// Canonical irredundant inequality list; empty for the full space.
    pub inequalities: Vec<Character>,
    /// Canonical generator list (lineality directions appear as `±` pairs);
    /// empty for the zero cone.
    pub generators: Vec<Cocharacter>,
}

impl Cone {
    /// The cone `{λ : ⟨λ, β⟩ ≥ 0 for all β}`.  An empty list defines the
    /// full space.
    pub fn from_inequalities(dim: usize, inequalities: &[Character]) -> Result<Self> {
        for (i, b) in inequalities.iter().enumerate() {
            if b.dim() != dim {
                return Err(Error::input(format!(
                    "inequalities[{i}]: expected {dim} coordinates, got {}",
                    b.dim()
                )));
            }
        }
        let raw: Vec<Vec<Rat>> = inequalities.iter().map(|b| b.coords.clone()).collect();
        let gens = double_description(dim, &raw);
        let ineqs = double_description(dim, &gens);
        Ok(Self {
            dim,
            inequalities: ineqs.into_iter().map(Character::new).collect(),
            generators: gens.into_iter().map(Cocharacter::new).collect(),
        })
    }

    /// The cone of nonnegative combinations of `generators`.  An empty list
    /// yields the zero cone.
    pub fn from_generators(dim: usize, generators: &[Cocharacter]) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::input(format!(
                    "generators[{i}]: expected {dim} coordinates, got {}",
                    g.dim()
                )));
            }
        }
        // Generators of the dual cone are exactly the defining inequalities.
        let raw: Vec<Vec<Rat>> = generators.iter().map(|g| g.coords.clone()).collect();
        let ineqs = double_description(dim, &raw);
        let gens = double_description(dim, &ineqs);
        Ok(Self {
            dim,
            inequalities: ineqs.into_iter().map(Character::new).collect(),
            generators: gens.into_iter().map(Cocharacter::new).collect(),
        })
    }

    pub fn contains(&self, v: &Cocharacter) -> Result<bool> {
        if v.dim() != self.dim {
            return Err(Error::dimension(self.dim, v.dim()));
        }
        Ok(self
            .inequalities
            .iter()
            .all(|b| !rational::dot(&v.coords, &b.coords).is_negative()))
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.dim != other.dim {
            return Err(Error::dimension(self.dim, other.dim));
        }
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        Cone::from_inequalities(self.dim, &ineqs)
    }

    /// The pointwise negation `−C`; still canonical after re-sorting.
    pub fn negate(&self) -> Cone {
        let mut inequalities: Vec<Character> = self
            .inequalities
            .iter()
            .map(|b| Character::new(rational::negate(&b.coords)))
            .collect();
        let mut generators: Vec<Cocharacter> = self
            .generators
            .iter()
            .map(|g| Cocharacter::new(rational::negate(&g.coords)))
            .collect();
        inequalities.sort();
        generators.sort();
        Cone { dim: self.dim, inequalities, generators }
    }

    /// True when `C = −C`, i.e. the cone is a linear subspace (possibly the
    /// zero space).  Checked on generators.
    pub fn is_linear_subspace(&self) -> bool {
        self.generators.iter().all(|g| {
            let neg = Cocharacter::new(rational::negate(&g.coords));
            self.contains(&neg).expect("generator has matching dimension")
        })
    }

    /// True when the cone is `{0}`.
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Verification helper: do the two cones agree as point sets on every
    /// integer vector with sup-norm at most `bound`?
    pub fn agrees_on_integer_box(&self, other: &Cone, bound: i64) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::dimension(self.dim, other.dim));
        }
        let mut point = vec![-bound; self.dim];
        loop {
            let v = Cocharacter::ints(&point);
            if self.contains(&v)? != other.contains(&v)? {
                return Ok(false);
            }
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return Ok(true);
                }
                k -= 1;
                if point[k] < bound {
                    point[k] += 1;
                    break;
                }
                point[k] = -bound;
            }
        }
    }
}

/// The unique primitive integral representative of the ray through `v`.
pub fn primitive_ray(v: &Cocharacter) -> Result<Cocharacter> {
    let ints = rational::primitive_integer(&v.coords, "ray")?;
    Ok(Cocharacter::new(rational::from_integers(&ints)))
}

/// Core double-description pass: generators of
/// `{x : ⟨x, a⟩ ≥ 0 for all a in constraints}`, canonicalized.
///
/// Also used in the dual direction (constraints = primal generators) to
/// produce inequality lists, which is why it works on raw coordinate vectors.
fn double_description(dim: usize, constraints: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut lineality: Mat = matrix::identity(dim);
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    let mut inserted: Vec<Vec<Rat>> = Vec::new();

    for a in constraints {
        if rational::is_zero_vec(a) {
            continue;
        }
        let on_line: Vec<Rat> = lineality.iter().map(|l| rational::dot(a, l)).collect();
        if let Some(k) = on_line.iter().position(|v| !v.is_zero()) {
            // The constraint cuts the lineality space: one lineality direction
            // becomes a ray, the rest are projected into the hyperplane.
            let pivot = rational::scale(&on_line[k].recip(), &lineality[k]);
            let mut next_line: Mat = Vec::new();
            for (i, l) in lineality.iter().enumerate() {
                if i != k {
                    let c = -rational::dot(a, l);
                    next_line.push(rational::add_scaled(l, &c, &pivot));
                }
            }
            lineality = next_line;
            let mut next_rays: Vec<Vec<Rat>> = rays
                .iter()
                .map(|r| {
                    let c = -rational::dot(a, r);
                    rational::add_scaled(r, &c, &pivot)
                })
                .collect();
            next_rays.push(pivot);
            rays = dedupe_reduced(
                next_rays.into_iter().map(|r| reduce_mod(&lineality, &r)).collect(),
            );
        } else {
            // The constraint is settled on the lineality space; split rays by
            // sign and combine opposite-sign pairs on the boundary.
            let vals: Vec<Rat> = rays.iter().map(|r| rational::dot(a, r)).collect();
            let mut kept: Vec<Vec<Rat>> = Vec::new();
            let mut pos: Vec<usize> = Vec::new();
            let mut neg: Vec<usize> = Vec::new();
            for (i, v) in vals.iter().enumerate() {
                if v.is_negative() {
                    neg.push(i);
                } else {
                    if v.is_positive() {
                        pos.push(i);
                    }
                    kept.push(rays[i].clone());
                }
            }
            let mut with_a = inserted.clone();
            with_a.push(a.clone());
            let needed_rank = dim - lineality.len() - 1;
            let mut candidates: Vec<Vec<Rat>> = Vec::new();
            for &p in &pos {
                for &n in &neg {
                    let combo = rational::add_scaled(
                        &rational::scale(&vals[p], &rays[n]),
                        &-vals[n].clone(),
                        &rays[p],
                    );
                    let combo = reduce_mod(&lineality, &combo);
                    if rational::is_zero_vec(&combo) {
                        continue;
                    }
                    if tight_rank(&with_a, &combo) == needed_rank {
                        candidates.push(combo);
                    }
                }
            }
            kept.extend(candidates);
            rays = dedupe_reduced(kept);
        }
        inserted.push(a.clone());
    }

    // Canonical output: RREF lineality basis as ± pairs, plus the reduced
    // extremal rays, all primitive and sorted.
    let mut out: Vec<Vec<Rat>> = Vec::new();
    if !lineality.is_empty() {
        let (basis, _) = matrix::rref(&lineality);
        for row in &basis {
            let p = primitive_coords(row);
            out.push(rational::negate(&p));
            out.push(p);
        }
    }
    for r in &rays {
        out.push(primitive_coords(r));
    }
    out.sort();
    out.dedup();
    out
}

/// Orthogonal projection of `v` onto the complement of the row space of
/// `basis` (standard inner product).  Canonical representative of `v` modulo
/// the lineality space.
fn reduce_mod(basis: &Mat, v: &[Rat]) -> Vec<Rat> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let gram: Mat = basis
        .iter()
        .map(|a| basis.iter().map(|b| rational::dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rat> = basis.iter().map(|a| rational::dot(a, v)).collect();
    let coeffs = matrix::solve(&gram, &rhs).expect("lineality basis is independent");
    let mut out = v.to_vec();
    for (c, row) in coeffs.iter().zip(basis) {
        out = rational::add_scaled(&out, &-c.clone(), row);
    }
    out
}

/// Rank of the constraints tight at `v` — the exact extremality test:
/// an extremal ray's tight set must cut space down to lineality plus one.
fn tight_rank(constraints: &[Vec<Rat>], v: &[Rat]) -> usize {
    let tight: Mat = constraints
        .iter()
        .filter(|a| rational::dot(a, v).is_zero())
        .cloned()
        .collect();
    matrix::rank(&tight)
}

fn primitive_coords(v: &[Rat]) -> Vec<Rat> {
    let ints = rational::primitive_integer(v, "ray").expect("nonzero ray");
    rational::from_integers(&ints)
}

fn dedupe_reduced(rays: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let mut canon: Vec<Vec<Rat>> = rays
        .into_iter()
        .filter(|r| !rational::is_zero_vec(r))
        .map(|r| primitive_coords(&r))
        .collect();
    canon.sort();
    canon.dedup();
    canon
}
