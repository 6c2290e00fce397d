//! Exact maximization of `μ(λ) / ‖λ‖` over polyhedral cones.
//!
//! The positive case reduces to a strictly convex quadratic program: minimize
//! `‖v‖²` subject to `⟨v, β⟩ ≥ 1` for the objective characters and
//! `⟨v, α⟩ ≥ 0` for the cone constraints.  The squared maximum is then
//! `1 / ‖v*‖²` and the optimal ray is the primitive vector on the unique
//! minimizing direction.  The solver enumerates candidate active sets of size
//! at most the ambient dimension in lexicographic order and accepts the first
//! exact KKT point — slow in the worst case, but the intended scales are a
//! few dozen constraints in dimension at most eight, and exactness and
//! determinism take priority here.
//!
//! When the program is infeasible the maximum is not positive; the solver
//! then classifies the sign exactly and produces a Farkas certificate — a
//! nonnegative combination of the constraints summing to zero with positive
//! total weight on the objective side — which refutes feasibility
//! independently of the search.

use std::collections::BTreeSet;

use num::{Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::cones::{primitive_ray, Cone};
use crate::matrix::{self, Mat};
use crate::rational::{self, Rat};
use crate::rootdatum::{Character, Cocharacter, ParabolicType, RootDatum, WeylElement};
use crate::{Error, Result};

/// Ceiling on active-set enumeration, comfortably above every desk-scale
/// instance; hitting it is a resource error, not silent truncation.
const SUBSET_BUDGET: u64 = 2_000_000;

/// Exact sign classification of the maximum `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimumSign {
    /// The admissible cone is `{0}`: the maximum is over an empty set.
    NegInf,
    Negative,
    Zero,
    Positive,
    /// No objective characters: the value is `+∞` on the whole cone.
    PosInf,
}

impl OptimumSign {
    pub fn as_str(self) -> &'static str {
        match self {
            OptimumSign::NegInf => "neg_inf",
            OptimumSign::Negative => "negative",
            OptimumSign::Zero => "zero",
            OptimumSign::Positive => "positive",
            OptimumSign::PosInf => "pos_inf",
        }
    }
}

/// Farkas refutation of `{⟨v,β⟩ ≥ 1, ⟨v,α⟩ ≥ 0}`: nonnegative weights with
/// `Σ b_i β_i + Σ a_j α_j = 0` and `Σ b_i > 0`.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub b_coeffs: Vec<Rat>,
    pub a_coeffs: Vec<Rat>,
}

impl FarkasCertificate {
    /// Replays the refutation against the constraint lists.
    pub fn verify(&self, a: &[Character], b: &[Character]) -> bool {
        if self.a_coeffs.len() != a.len() || self.b_coeffs.len() != b.len() {
            return false;
        }
        if self.a_coeffs.iter().chain(&self.b_coeffs).any(|c| c.is_negative()) {
            return false;
        }
        let total_b: Rat = self.b_coeffs.iter().cloned().sum();
        if !total_b.is_positive() {
            return false;
        }
        let dim = b.first().or(a.first()).map_or(0, Character::dim);
        let mut combo = vec![Rat::zero(); dim];
        for (c, chi) in self.b_coeffs.iter().zip(b).chain(self.a_coeffs.iter().zip(a)) {
            combo = rational::add_scaled(&combo, c, &chi.coords);
        }
        rational::is_zero_vec(&combo)
    }
}

/// Result of one torus-frame optimization.
#[derive(Clone, Debug)]
pub struct OptimumReport {
    pub sign: OptimumSign,
    /// `M²`, present exactly when the sign is positive.
    pub m_squared: Option<Rat>,
    /// Primitive integral optimal ray, present exactly when the sign is
    /// positive.
    pub ray: Option<Cocharacter>,
    /// Indices of objective constraints tight at the optimum.
    pub active_b: Vec<usize>,
    /// Indices of cone constraints tight at the optimum.
    pub active_a: Vec<usize>,
    /// Whether the underlying program is feasible (equivalent: `M > 0`).
    pub feasible: bool,
    pub certificate: Option<FarkasCertificate>,
}

/// Outcome of the norm-minimization QP.
#[derive(Clone, Debug)]
pub enum QpOutcome {
    Optimal {
        point: Vec<Rat>,
        /// Multipliers for the certifying active subset, parallel to
        /// `subset`.
        multipliers: Vec<Rat>,
        subset: Vec<usize>,
    },
    Infeasible(FarkasCertificate),
}

fn check_gram(gram: &Mat, dim: usize) -> Result<()> {
    if gram.len() != dim || gram.iter().any(|r| r.len() != dim) {
        return Err(Error::input(format!("gram: expected a {dim}x{dim} matrix")));
    }
    for i in 0..dim {
        for j in 0..dim {
            if gram[i][j] != gram[j][i] {
                return Err(Error::input("gram: not symmetric".into()));
            }
        }
    }
    matrix::check_positive_definite(gram)
}

fn check_chars(chars: &[Character], dim: usize, field: &str) -> Result<()> {
    for (i, c) in chars.iter().enumerate() {
        if c.dim() != dim {
            return Err(Error::input(format!(
                "{field}[{i}]: expected {dim} coordinates, got {}",
                c.dim()
            )));
        }
    }
    Ok(())
}

/// Minimizes `vᵀ G v` subject to `⟨v, β⟩ ≥ 1` for `β` in `b` and
/// `⟨v, α⟩ ≥ 0` for `α` in `a`.  Requires a nonempty objective list.
pub fn solve_qp(a: &[Character], b: &[Character], gram: &Mat) -> Result<QpOutcome> {
    let dim = gram.len();
    check_gram(gram, dim)?;
    check_chars(a, dim, "A")?;
    check_chars(b, dim, "B")?;
    if b.is_empty() {
        return Err(Error::input("B: empty objective list; the ratio is +inf, not a QP".into()));
    }

    // Exact feasibility: the program is feasible iff the cone cut out by all
    // constraints contains a point strictly positive on every objective
    // character; the sum of its generators is positive on an objective
    // character iff any generator is.
    let mut all: Vec<Character> = b.to_vec();
    all.extend_from_slice(a);
    let cone_ab = Cone::from_inequalities(dim, &all)?;
    let mut sum = vec![Rat::zero(); dim];
    for g in &cone_ab.generators {
        sum = rational::add_scaled(&sum, &Rat::from_integer(1.into()), &g.coords);
    }
    let feasible = !cone_ab.is_zero()
        && b.iter().all(|beta| rational::dot(&sum, &beta.coords).is_positive());
    if !feasible {
        return Ok(QpOutcome::Infeasible(farkas_certificate(a, b, dim)?));
    }

    // Active-set enumeration: constraints are indexed objectives-first; the
    // right-hand side is 1 on objectives and 0 on cone rows.
    let rows: Vec<&Character> = b.iter().chain(a.iter()).collect();
    let m = rows.len();
    let g2: Mat = gram
        .iter()
        .map(|r| r.iter().map(|x| x + x).collect())
        .collect();
    let mut budget = SUBSET_BUDGET;
    for size in 0..=dim.min(m) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if budget == 0 {
                return Err(Error::budget(
                    "active-set enumeration exceeded the desk-scale subset budget".into(),
                ));
            }
            budget -= 1;
            if let Some((point, multipliers)) = try_active_set(&g2, &rows, b.len(), &subset) {
                if multipliers.iter().all(|u| !u.is_negative())
                    && rows.iter().enumerate().all(|(i, c)| {
                        let v = rational::dot(&point, &c.coords);
                        if i < b.len() {
                            v >= Rat::from_integer(1.into())
                        } else {
                            !v.is_negative()
                        }
                    })
                {
                    return Ok(QpOutcome::Optimal { point, multipliers, subset });
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    // Unreachable for a feasible strictly convex program: some independent
    // active subset certifies the optimum.
    Err(Error::input("QP enumeration found no KKT point for a feasible program".into()))
}

/// Solves the equality-constrained KKT system for one candidate subset;
/// `None` when the subset rows are dependent.
fn try_active_set(
    g2: &Mat,
    rows: &[&Character],
    objective_count: usize,
    subset: &[usize],
) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let dim = g2.len();
    let k = subset.len();
    let n = dim + k;
    let mut kkt = vec![vec![Rat::zero(); n]; n];
    let mut rhs = vec![Rat::zero(); n];
    for i in 0..dim {
        for j in 0..dim {
            kkt[i][j] = g2[i][j].clone();
        }
    }
    for (s, &ci) in subset.iter().enumerate() {
        for j in 0..dim {
            kkt[j][dim + s] = -rows[ci].coords[j].clone();
            kkt[dim + s][j] = rows[ci].coords[j].clone();
        }
        if ci < objective_count {
            rhs[dim + s] = Rat::from_integer(1.into());
        }
    }
    let sol = matrix::solve(&kkt, &rhs)?;
    let point = sol[..dim].to_vec();
    let multipliers = sol[dim..].to_vec();
    Some((point, multipliers))
}

fn next_combination(subset: &mut [usize], m: usize) -> bool {
    let k = subset.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < m - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Farkas certificate via the dual cone: generators of
/// `{(y, z) ≥ 0 : Σ y β + Σ z α = 0}` computed by double description, then
/// any generator with positive objective weight refutes feasibility.
fn farkas_certificate(a: &[Character], b: &[Character], dim: usize) -> Result<FarkasCertificate> {
    let m = b.len() + a.len();
    let mut ineqs: Vec<Character> = Vec::new();
    for t in 0..dim {
        let row: Vec<Rat> = b.iter().chain(a.iter()).map(|c| c.coords[t].clone()).collect();
        ineqs.push(Character::new(row.clone()));
        ineqs.push(Character::new(rational::negate(&row)));
    }
    for i in 0..m {
        let mut e = vec![Rat::zero(); m];
        e[i] = Rat::from_integer(1.into());
        ineqs.push(Character::new(e));
    }
    let k = Cone::from_inequalities(m, &ineqs)?;
    for g in &k.generators {
        let weight_b: Rat = g.coords[..b.len()].iter().cloned().sum();
        if weight_b.is_positive() {
            let cert = FarkasCertificate {
                b_coeffs: g.coords[..b.len()].to_vec(),
                a_coeffs: g.coords[b.len()..].to_vec(),
            };
            debug_assert!(cert.verify(a, b));
            return Ok(cert);
        }
    }
    Err(Error::input("farkas: no certificate found for a program believed infeasible".into()))
}

/// Maximum of `min_β ⟨λ, β⟩ / ‖λ‖` over the cone `{⟨λ, α⟩ ≥ 0}`, with exact
/// sign classification and, in the positive case, the squared value and the
/// unique primitive optimal ray.
pub fn torus_max(a: &[Character], b: &[Character], gram: &Mat) -> Result<OptimumReport> {
    let dim = gram.len();
    check_gram(gram, dim)?;
    check_chars(a, dim, "A")?;
    check_chars(b, dim, "B")?;

    let cone_a = Cone::from_inequalities(dim, a)?;
    if cone_a.is_zero() {
        return Ok(OptimumReport {
            sign: OptimumSign::NegInf,
            m_squared: None,
            ray: None,
            active_b: Vec::new(),
            active_a: Vec::new(),
            feasible: false,
            certificate: None,
        });
    }
    if b.is_empty() {
        return Ok(OptimumReport {
            sign: OptimumSign::PosInf,
            m_squared: None,
            ray: None,
            active_b: Vec::new(),
            active_a: Vec::new(),
            feasible: false,
            certificate: None,
        });
    }

    match solve_qp(a, b, gram)? {
        QpOutcome::Optimal { point, .. } => {
            let norm = rational::dot(&point, &matrix::mat_vec(gram, &point));
            let m_squared = norm.recip();
            let ray = primitive_ray(&Cocharacter::new(point.clone()))?;
            let one = Rat::from_integer(1.into());
            let active_b = b
                .iter()
                .enumerate()
                .filter(|(_, c)| rational::dot(&point, &c.coords) == one)
                .map(|(i, _)| i)
                .collect();
            let active_a = a
                .iter()
                .enumerate()
                .filter(|(_, c)| rational::dot(&point, &c.coords).is_zero())
                .map(|(i, _)| i)
                .collect();
            Ok(OptimumReport {
                sign: OptimumSign::Positive,
                m_squared: Some(m_squared),
                ray: Some(ray),
                active_b,
                active_a,
                feasible: true,
                certificate: None,
            })
        }
        QpOutcome::Infeasible(cert) => {
            // Not positive; zero iff some nonzero cone point is nonnegative
            // on every objective character.
            let mut all: Vec<Character> = b.to_vec();
            all.extend_from_slice(a);
            let cone_ab = Cone::from_inequalities(dim, &all)?;
            let sign =
                if cone_ab.is_zero() { OptimumSign::Negative } else { OptimumSign::Zero };
            Ok(OptimumReport {
                sign,
                m_squared: None,
                ray: None,
                active_b: Vec::new(),
                active_a: Vec::new(),
                feasible: false,
                certificate: Some(cert),
            })
        }
    }
}

/// One indexed constraint pair of a family problem.
#[derive(Clone, Debug)]
pub struct FamilyPair {
    pub index: usize,
    pub a: Vec<Character>,
    pub b: Vec<Character>,
}

/// A maximizing index with its optimal ray (in that index's frame).
#[derive(Clone, Debug)]
pub struct Witness {
    pub index: usize,
    pub ray: Cocharacter,
}

/// The optimal class over a finite family: the exact maximum, every
/// maximizing witness, and the common parabolic type after pulling each
/// witness back through its frame identification.
#[derive(Clone, Debug)]
pub struct OptimalClass {
    pub sign: OptimumSign,
    pub m_squared: Option<Rat>,
    pub witnesses: Vec<Witness>,
    pub parabolic: Option<ParabolicType>,
    pub consistent: bool,
    pub diagnostics: Vec<String>,
    pub per_index: Vec<(usize, OptimumReport)>,
}

/// Maximizes over every index of the family.  Indices with no objective
/// characters carry the value `+∞` and are excluded from the maximum (they
/// impose no bound); this is reported in the diagnostics.  `identifications`
/// gives, per pair, the Weyl element carrying the base frame to that index
/// (`None` means the identity).
pub fn family_max(
    datum: &RootDatum,
    pairs: &[FamilyPair],
    identifications: &[Option<WeylElement>],
) -> Result<OptimalClass> {
    family_max_with_gram(datum, &datum.gram, pairs, identifications)
}

/// [`family_max`] under an explicit norm, for problems that override the
/// datum's form; parabolic types still come from the datum's roots.
pub fn family_max_with_gram(
    datum: &RootDatum,
    gram: &Mat,
    pairs: &[FamilyPair],
    identifications: &[Option<WeylElement>],
) -> Result<OptimalClass> {
    if pairs.is_empty() {
        return Err(Error::input("pairs: at least one index required".into()));
    }
    if identifications.len() != pairs.len() {
        return Err(Error::input(format!(
            "identifications: expected {} entries, got {}",
            pairs.len(),
            identifications.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for p in pairs {
        if !seen.insert(p.index) {
            return Err(Error::input(format!("pairs: duplicate index {}", p.index)));
        }
    }

    let solve = |p: &FamilyPair| -> Result<(usize, OptimumReport)> {
        Ok((p.index, torus_max(&p.a, &p.b, gram)?))
    };
    #[cfg(feature = "parallel")]
    let per_index: Vec<(usize, OptimumReport)> =
        pairs.par_iter().map(solve).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let per_index: Vec<(usize, OptimumReport)> =
        pairs.iter().map(solve).collect::<Result<_>>()?;

    let mut diagnostics = Vec::new();
    let mut best: Option<Rat> = None;
    for (idx, r) in &per_index {
        match r.sign {
            OptimumSign::PosInf => diagnostics.push(format!(
                "index {idx}: no objective characters (value +inf), excluded from the maximum"
            )),
            OptimumSign::Positive => {
                let m2 = r.m_squared.clone().expect("positive sign carries a value");
                if best.as_ref().is_none_or(|b| *b < m2) {
                    best = Some(m2);
                }
            }
            _ => {}
        }
    }

    let sign = if best.is_some() {
        OptimumSign::Positive
    } else if per_index.iter().any(|(_, r)| r.sign == OptimumSign::Zero) {
        OptimumSign::Zero
    } else if per_index.iter().any(|(_, r)| r.sign == OptimumSign::Negative) {
        OptimumSign::Negative
    } else if per_index.iter().any(|(_, r)| r.sign == OptimumSign::PosInf) {
        diagnostics.push("every index is unbounded; no finite maximum exists".into());
        OptimumSign::PosInf
    } else {
        OptimumSign::NegInf
    };

    let mut witnesses = Vec::new();
    let mut parabolic: Option<ParabolicType> = None;
    let mut consistent = true;
    if let Some(m2) = &best {
        for ((idx, r), ident) in per_index.iter().zip(identifications) {
            if r.sign == OptimumSign::Positive && r.m_squared.as_ref() == Some(m2) {
                let ray = r.ray.clone().expect("positive sign carries a ray");
                let back = match ident {
                    Some(w) => w.inverse().act(&ray),
                    None => ray.clone(),
                };
                let p = datum.parabolic_type(&back)?;
                match &parabolic {
                    None => parabolic = Some(p),
                    Some(q) if *q != p => {
                        consistent = false;
                        diagnostics.push(format!(
                            "index {idx}: witness parabolic {} differs from {}",
                            p, q
                        ));
                    }
                    _ => {}
                }
                witnesses.push(Witness { index: *idx, ray });
            }
        }
    }

    Ok(OptimalClass {
        sign,
        m_squared: best,
        witnesses,
        parabolic,
        consistent,
        diagnostics,
        per_index,
    })
}
