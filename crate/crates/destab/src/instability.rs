//! Instability for torus actions on weight spaces: support states, limits
//! along cocharacters, destabilizing cones, and optimal destabilization over
//! a finite set of frames.
//!
//! A representation is given by its torus weights; a vector is a sparse map
//! from weight labels to coordinates.  A cocharacter `λ` drives a vector to a
//! limit exactly when every supported weight pairs nonnegatively with `λ`,
//! and to zero exactly when every supported weight pairs strictly positively.
//! The optimal destabilization search runs a torus-frame optimization per
//! supplied transform and takes the best over the set — a certified lower
//! bound for the global optimum, exact only when the caller asserts the
//! optimizing frame is among the supplied ones.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::cones::Cone;
use crate::matrix::{self, Mat};
use crate::optimize::{self, FamilyPair, OptimalClass};
use crate::oracle;
use crate::rational::{self, Rat};
use crate::rootdatum::{Character, Cocharacter, RootDatum};
use crate::states::{QuasiStateFamily, StateComponent};
use crate::{Error, Result};

/// A torus module presented by its weights; repeated weights carry
/// multiplicity and get distinct labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub weights: Vec<Character>,
    pub labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Representation {
    pub fn new(weights: Vec<Character>, labels: Vec<String>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::input("weights: at least one weight required".into()));
        }
        if weights.len() != labels.len() {
            return Err(Error::input(format!(
                "labels: expected {} entries to match the weights, got {}",
                weights.len(),
                labels.len()
            )));
        }
        let dim = weights[0].dim();
        for w in &weights {
            if w.dim() != dim {
                return Err(Error::dimension(dim, w.dim()));
            }
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("labels: duplicate label {l:?}")));
            }
        }
        Ok(Representation { weights, labels, index })
    }

    /// Ambient coordinate dimension of the weights.
    pub fn weight_dim(&self) -> usize {
        self.weights[0].dim()
    }

    /// Module dimension (number of weight lines).
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::input(format!("vector: unknown coordinate label {label:?}")))
    }
}

/// Sparse vector in a representation; absent labels are zero and zero
/// entries are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightVector {
    pub coords: BTreeMap<String, Rat>,
}

impl WeightVector {
    pub fn new(coords: BTreeMap<String, Rat>) -> Self {
        WeightVector { coords: coords.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn zero() -> Self {
        WeightVector::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Dense coordinates in the representation's label order.
    pub fn dense(&self, rep: &Representation) -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); rep.dim()];
        for (l, v) in &self.coords {
            out[rep.label_index(l)?] = v.clone();
        }
        Ok(out)
    }

    fn from_dense(rep: &Representation, dense: Vec<Rat>) -> Self {
        let coords = rep
            .labels
            .iter()
            .zip(dense)
            .filter(|(_, v)| !v.is_zero())
            .map(|(l, v)| (l.clone(), v))
            .collect();
        WeightVector { coords }
    }
}

/// The set of weights supported by `x`; empty for the zero vector.
pub fn support_state(rep: &Representation, x: &WeightVector) -> Result<StateComponent> {
    let mut chars = BTreeSet::new();
    for label in x.coords.keys() {
        chars.insert(rep.weights[rep.label_index(label)?].clone());
    }
    StateComponent::new(rep.weight_dim(), chars)
}

/// Limit of `λ(t)·x` as `t → 0`: `None` when some supported weight pairs
/// negatively, otherwise the vector keeping exactly the pairing-zero
/// coordinates.
pub fn limit(rep: &Representation, x: &WeightVector, lambda: &Cocharacter) -> Result<Option<WeightVector>> {
    if !lambda.is_integral() {
        return Err(Error::input("lambda: limits require integral cocharacters".into()));
    }
    if lambda.dim() != rep.weight_dim() {
        return Err(Error::dimension(rep.weight_dim(), lambda.dim()));
    }
    let mut kept = BTreeMap::new();
    for (label, v) in &x.coords {
        let w = &rep.weights[rep.label_index(label)?];
        let p = rational::dot(&lambda.coords, &w.coords);
        if p.is_zero() {
            kept.insert(label.clone(), v.clone());
        } else if p < Rat::zero() {
            return Ok(None);
        }
    }
    Ok(Some(WeightVector { coords: kept }))
}

/// The cone of cocharacters along which every vector of `u` has a limit:
/// cut out by the union of the supports.
pub fn destab_cone(rep: &Representation, u: &[WeightVector]) -> Result<Cone> {
    if u.is_empty() {
        return Err(Error::input("vectors: at least one vector required".into()));
    }
    let mut union = BTreeSet::new();
    for x in u {
        union.extend(support_state(rep, x)?.chars);
    }
    let ineqs: Vec<Character> = union.into_iter().collect();
    Cone::from_inequalities(rep.weight_dim(), &ineqs)
}

/// One frame of the destabilization search: an invertible linear map on the
/// representation space, optionally paired with a component of the supplied
/// objective family.
#[derive(Clone, Debug)]
pub struct Transform {
    pub matrix: Mat,
    pub upsilon_index: Option<usize>,
}

impl Transform {
    pub fn identity(dim: usize) -> Self {
        Transform { matrix: matrix::identity(dim), upsilon_index: None }
    }
}

/// Objective mode of the search: drive the vectors to zero, or maximize a
/// supplied quasi-state family.
#[derive(Clone, Debug)]
pub enum UpsilonMode {
    NullCone,
    State(QuasiStateFamily),
}

/// Outcome of the truncated search, wrapping the family optimum with its
/// scope.
#[derive(Clone, Debug)]
pub struct InstabilityReport {
    pub class: OptimalClass,
    /// `"lower-bound"` normally; `"asserted-exact"` when the caller asserts
    /// the optimizing frame is among the supplied transforms.
    pub search_scope: &'static str,
    /// Number of frames searched, including the automatic identity.
    pub transform_count: usize,
    /// The per-frame constraint pairs actually optimized, for independent
    /// re-checking.
    pub pairs: Vec<FamilyPair>,
}

fn apply_matrix(rep: &Representation, m: &Mat, x: &WeightVector) -> Result<WeightVector> {
    let dense = x.dense(rep)?;
    Ok(WeightVector::from_dense(rep, matrix::mat_vec(m, &dense)))
}

/// Best destabilization over the supplied frames.  For each transform `g`
/// the constraint cone comes from the supports of `g⁻¹·U`; in null-cone mode
/// the objective is the same support set, otherwise it is the chosen
/// component of the supplied family.  The identity frame is always searched.
pub fn optimal_instability(
    datum: &RootDatum,
    rep: &Representation,
    u: &[WeightVector],
    transforms: &[Transform],
    mode: &UpsilonMode,
    assert_optimal_torus_reachable: bool,
) -> Result<InstabilityReport> {
    if u.is_empty() {
        return Err(Error::input("vectors: at least one vector required".into()));
    }
    if rep.weight_dim() != datum.rank {
        return Err(Error::dimension(datum.rank, rep.weight_dim()));
    }
    let n = rep.dim();
    let mut frames: Vec<Transform> = Vec::new();
    if !transforms.iter().any(|t| t.matrix == matrix::identity(n)) {
        frames.push(Transform::identity(n));
    }
    frames.extend_from_slice(transforms);

    let mut pairs = Vec::with_capacity(frames.len());
    for (i, t) in frames.iter().enumerate() {
        if t.matrix.len() != n || t.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::input(format!("transforms[{i}]: expected a {n}x{n} matrix")));
        }
        let inv = matrix::inverse(&t.matrix)
            .ok_or_else(|| Error::input(format!("transforms[{i}]: singular matrix")))?;
        let mut support = BTreeSet::new();
        for x in u {
            support.extend(support_state(rep, &apply_matrix(rep, &inv, x)?)?.chars);
        }
        let a: Vec<Character> = support.into_iter().collect();
        let b: Vec<Character> = match mode {
            UpsilonMode::NullCone => a.clone(),
            UpsilonMode::State(f) => {
                let idx = t.upsilon_index.unwrap_or(f.base);
                f.component(idx)?.chars.iter().cloned().collect()
            }
        };
        pairs.push(FamilyPair { index: i, a, b });
    }

    let identifications = vec![None; pairs.len()];
    let class = optimize::family_max(datum, &pairs, &identifications)?;
    Ok(InstabilityReport {
        class,
        search_scope: if assert_optimal_torus_reachable { "asserted-exact" } else { "lower-bound" },
        transform_count: frames.len(),
        pairs,
    })
}

/// Exhaustive scan for a cocharacter driving `x` to zero: returns the
/// lexicographically first integral `λ` of Gram norm at most `radius` whose
/// limit annihilates `x`, or `false` when the ball holds none.  The zero
/// vector is annihilated by every `λ`, so the first nonzero point wins.
pub fn hilbert_mumford_check(
    datum: &RootDatum,
    rep: &Representation,
    x: &WeightVector,
    radius: u64,
    budget: u64,
) -> Result<(bool, Option<Cocharacter>)> {
    if radius < 1 {
        return Err(Error::input("radius: must be at least 1".into()));
    }
    if rep.weight_dim() != datum.rank {
        return Err(Error::dimension(datum.rank, rep.weight_dim()));
    }
    let support = support_state(rep, x)?;
    let bounds = oracle::box_bounds(&datum.gram, radius, budget)?;
    let dim = datum.rank;
    let r2 = Rat::from_integer((radius * radius).into());

    let mut lambda: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        if lambda.iter().any(|&c| c != 0) {
            let cand = Cocharacter::ints(&lambda);
            if datum.norm_sq(&cand)? <= r2 {
                let annihilates = support
                    .chars
                    .iter()
                    .all(|w| rational::dot(&cand.coords, &w.coords) > Rat::zero());
                if annihilates {
                    return Ok((true, Some(cand)));
                }
            }
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok((false, None));
            }
            i -= 1;
            if lambda[i] < bounds[i] {
                lambda[i] += 1;
                break;
            }
            lambda[i] = -bounds[i];
        }
    }
}
