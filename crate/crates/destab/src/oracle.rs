//! Brute-force lattice oracle for the cone maximization.
//!
//! The oracle scans every integral vector inside a Gram-norm ball, keeps the
//! admissible ones, and maximizes `min_β ⟨λ, β⟩ / ‖λ‖` by exact fraction
//! comparison — no square roots, no floats.  It shares no code path with the
//! quadratic-program solver, which makes it a meaningful cross-check: within
//! the scanned ball the two must agree exactly, and outside it the scan still
//! provides a sound lower bound.
//!
//! Ties are broken by lexicographic order on the coordinate vector, so the
//! result is independent of chunking and thread count.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::cones::primitive_ray;
use crate::matrix::{self, Mat};
use crate::optimize::{OptimumReport, OptimumSign};
use crate::rational::{self, Rat};
use crate::rootdatum::{Character, Cocharacter};
use crate::{Error, Result};

/// Result of one lattice scan.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Sign class of the best admissible lattice point: `NegInf` when the
    /// ball contains no admissible nonzero point at all, `PosInf` when there
    /// are no objective characters.
    pub sign: OptimumSign,
    /// Best squared ratio, present exactly when the sign is positive.
    pub m_squared: Option<Rat>,
    /// Lexicographically first maximizing lattice point (first admissible
    /// point in the unbounded case).
    pub ray: Option<Cocharacter>,
    pub radius: u64,
    /// Lattice points visited (the full bounding box).
    pub scanned: u64,
    /// Nonzero points inside the ball satisfying the cone constraints.
    pub admissible: u64,
}

/// Scaled-integer form of the instance plus the box bounds.
struct Scan {
    dim: usize,
    gram_int: Vec<Vec<BigInt>>,
    /// `‖λ‖² ≤ radius²` in scaled units: `λᵀ Gᵢ λ ≤ norm_cap`.
    norm_cap: BigInt,
    a_rows: Vec<Vec<BigInt>>,
    b_rows: Vec<Vec<BigInt>>,
    bounds: Vec<i64>,
    /// Gram scaling `s_g` and common objective scaling `s_b`, for converting
    /// the winning fraction back to original units.
    gram_scale: BigInt,
    b_scale: BigInt,
}

/// One candidate: sign class, scaled `μ` and `‖λ‖²`, and the point itself.
#[derive(Clone, Debug)]
struct Candidate {
    class: i8,
    mu: BigInt,
    norm: BigInt,
    lambda: Vec<i64>,
}

/// `true` when `new` beats `old`: larger value, or equal value and
/// lexicographically smaller point.
fn better(new: &Candidate, old: &Candidate) -> bool {
    if new.class != old.class {
        return new.class > old.class;
    }
    // Same sign class: compare μ²/‖λ‖² as fractions; for negative values a
    // smaller magnitude is the larger value.
    if new.class == 1 || new.class == -1 {
        let lhs = &new.mu * &new.mu * &old.norm;
        let rhs = &old.mu * &old.mu * &new.norm;
        if lhs != rhs {
            return (lhs > rhs) == (new.class == 1);
        }
    }
    new.lambda < old.lambda
}

fn floor_sqrt(x: &Rat) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    // Seed from the integer part, then correct by at most a step each way.
    let mut s = x.to_integer().sqrt();
    while (&s + 1u32) * (&s + 1u32) * x.denom() <= x.numer().clone() {
        s += 1u32;
    }
    while &s * &s * x.denom() > x.numer().clone() {
        s -= 1u32;
    }
    s
}

fn lcm_of_denoms<'a>(vals: impl Iterator<Item = &'a Rat>) -> BigInt {
    let mut l = BigInt::one();
    for v in vals {
        l = num::integer::lcm(l, v.denom().clone());
    }
    l
}

fn scale_rows(rows: &[Character], scale: &BigInt) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|c| {
            c.coords
                .iter()
                .map(|x| x.numer() * scale / x.denom())
                .collect()
        })
        .collect()
}

/// Per-coordinate box bounds `|λ_i| ≤ radius · √((G⁻¹)_ii)` for the Gram
/// ball, with the budget enforced on the full box before any scanning.
pub(crate) fn box_bounds(gram: &Mat, radius: u64, budget: u64) -> Result<Vec<i64>> {
    matrix::check_positive_definite(gram)?;
    let inv = matrix::inverse(gram)
        .ok_or_else(|| Error::input("gram: singular matrix".into()))?;
    let r2 = BigInt::from(radius) * BigInt::from(radius);
    let mut bounds_big = Vec::with_capacity(gram.len());
    for i in 0..gram.len() {
        bounds_big.push(floor_sqrt(&(Rat::from_integer(r2.clone()) * &inv[i][i])));
    }
    let mut box_size = BigInt::one();
    for bd in &bounds_big {
        box_size *= bd * 2 + 1;
    }
    if box_size > BigInt::from(budget) {
        return Err(Error::budget(format!(
            "lattice scan needs {box_size} points but the budget is {budget}; \
             lower the radius or raise the budget"
        )));
    }
    Ok(bounds_big
        .iter()
        .map(|bd| i64::try_from(bd.clone()).expect("bound fits after budget check"))
        .collect())
}

fn prepare(a: &[Character], b: &[Character], gram: &Mat, radius: u64, budget: u64) -> Result<Scan> {
    let dim = gram.len();
    for (field, chars) in [("A", a), ("B", b)] {
        for (i, c) in chars.iter().enumerate() {
            if c.dim() != dim {
                return Err(Error::input(format!(
                    "{field}[{i}]: expected {dim} coordinates, got {}",
                    c.dim()
                )));
            }
        }
    }

    let bounds = box_bounds(gram, radius, budget)?;
    let gram_scale = lcm_of_denoms(gram.iter().flatten());
    let gram_int: Vec<Vec<BigInt>> = gram
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * &gram_scale / x.denom()).collect())
        .collect();
    let a_scale = lcm_of_denoms(a.iter().flat_map(|c| c.coords.iter()));
    let b_scale = lcm_of_denoms(b.iter().flat_map(|c| c.coords.iter()));
    let r2 = BigInt::from(radius) * BigInt::from(radius);
    let norm_cap = &r2 * &gram_scale;

    Ok(Scan {
        dim,
        gram_int,
        norm_cap,
        a_rows: scale_rows(a, &a_scale),
        b_rows: scale_rows(b, &b_scale),
        bounds,
        gram_scale,
        b_scale,
    })
}

/// Scans the sub-box with a fixed first coordinate.  Returns the chunk's
/// best candidate and its admissible count.
fn scan_chunk(scan: &Scan, first: i64) -> (Option<Candidate>, u64) {
    let dim = scan.dim;
    let mut lambda = vec![0i64; dim];
    lambda[0] = first;
    for (i, bd) in scan.bounds.iter().enumerate().skip(1) {
        lambda[i] = -bd;
    }
    let mut best: Option<Candidate> = None;
    let mut admissible = 0u64;
    loop {
        consider(scan, &lambda, &mut best, &mut admissible);
        // Odometer over coordinates 1.. (coordinate 0 is pinned).
        let mut i = dim;
        loop {
            if i <= 1 {
                return (best, admissible);
            }
            i -= 1;
            if lambda[i] < scan.bounds[i] {
                lambda[i] += 1;
                break;
            }
            lambda[i] = -scan.bounds[i];
        }
    }
}

fn consider(scan: &Scan, lambda: &[i64], best: &mut Option<Candidate>, admissible: &mut u64) {
    if lambda.iter().all(|&x| x == 0) {
        return;
    }
    let lam: Vec<BigInt> = lambda.iter().map(|&x| BigInt::from(x)).collect();
    let mut norm = BigInt::zero();
    for (i, row) in scan.gram_int.iter().enumerate() {
        let mut acc = BigInt::zero();
        for (j, g) in row.iter().enumerate() {
            acc += g * &lam[j];
        }
        norm += acc * &lam[i];
    }
    if norm > scan.norm_cap {
        return;
    }
    for row in &scan.a_rows {
        let mut acc = BigInt::zero();
        for (j, v) in row.iter().enumerate() {
            acc += v * &lam[j];
        }
        if acc.is_negative() {
            return;
        }
    }
    *admissible += 1;
    let cand = if scan.b_rows.is_empty() {
        Candidate { class: 2, mu: BigInt::zero(), norm, lambda: lambda.to_vec() }
    } else {
        let mut mu: Option<BigInt> = None;
        for row in &scan.b_rows {
            let mut acc = BigInt::zero();
            for (j, v) in row.iter().enumerate() {
                acc += v * &lam[j];
            }
            if mu.as_ref().is_none_or(|m| &acc < m) {
                mu = Some(acc);
            }
        }
        let mu = mu.expect("objective list checked nonempty");
        let class = match mu.sign() {
            num::bigint::Sign::Plus => 1,
            num::bigint::Sign::NoSign => 0,
            num::bigint::Sign::Minus => -1,
        };
        Candidate { class, mu, norm, lambda: lambda.to_vec() }
    };
    if best.as_ref().is_none_or(|b| better(&cand, b)) {
        *best = Some(cand);
    }
}

/// Exhaustive scan of the integral points of Gram norm at most `radius`
/// inside the cone `{⟨λ, α⟩ ≥ 0}`, maximizing `min_β ⟨λ, β⟩ / ‖λ‖`.
pub fn lattice_max(
    a: &[Character],
    b: &[Character],
    gram: &Mat,
    radius: u64,
    budget: u64,
) -> Result<OracleReport> {
    let scan = prepare(a, b, gram, radius, budget)?;
    let mut scanned = 1u64;
    for bd in &scan.bounds {
        scanned *= (*bd as u64) * 2 + 1;
    }

    let firsts: Vec<i64> = if scan.dim == 0 {
        Vec::new()
    } else {
        (-scan.bounds[0]..=scan.bounds[0]).collect()
    };
    #[cfg(feature = "parallel")]
    let chunks: Vec<(Option<Candidate>, u64)> =
        firsts.par_iter().map(|&f| scan_chunk(&scan, f)).collect();
    #[cfg(not(feature = "parallel"))]
    let chunks: Vec<(Option<Candidate>, u64)> =
        firsts.iter().map(|&f| scan_chunk(&scan, f)).collect();

    let mut best: Option<Candidate> = None;
    let mut admissible = 0u64;
    for (cand, count) in chunks {
        admissible += count;
        if let Some(c) = cand {
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c);
            }
        }
    }

    let report = match best {
        None => OracleReport {
            sign: OptimumSign::NegInf,
            m_squared: None,
            ray: None,
            radius,
            scanned,
            admissible,
        },
        Some(c) => {
            let ray = Some(Cocharacter::new(
                c.lambda.iter().map(|&x| Rat::from_integer(x.into())).collect(),
            ));
            let (sign, m_squared) = match c.class {
                2 => (OptimumSign::PosInf, None),
                1 => {
                    // value² = (μ/s_b)² / (‖λ‖²_int / s_g).
                    let num = &c.mu * &c.mu * &scan.gram_scale;
                    let den = &c.norm * &scan.b_scale * &scan.b_scale;
                    (OptimumSign::Positive, Some(Rat::new(num, den)))
                }
                0 => (OptimumSign::Zero, None),
                _ => (OptimumSign::Negative, None),
            };
            OracleReport { sign, m_squared, ray, radius, scanned, admissible }
        }
    };
    Ok(report)
}

/// Outcome of comparing the exact solver against the lattice oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    /// The oracle confirms the solver exactly within the scanned ball.
    Agree,
    /// The optimum lies outside the scanned ball; the oracle result is a
    /// consistent lower bound only.
    BoundOnly { reason: String },
    /// Hard contradiction between the two computations.
    Disagree { detail: String },
}

impl CrossCheck {
    pub fn is_disagreement(&self) -> bool {
        matches!(self, CrossCheck::Disagree { .. })
    }
}

/// Compares a solver report with an oracle report for the same instance.
pub fn cross_check(solver: &OptimumReport, oracle: &OracleReport, gram: &Mat) -> CrossCheck {
    let bound_only = |reason: &str| CrossCheck::BoundOnly { reason: reason.to_string() };
    match solver.sign {
        OptimumSign::PosInf => match oracle.sign {
            OptimumSign::PosInf => CrossCheck::Agree,
            OptimumSign::NegInf => {
                bound_only("no admissible lattice point inside the scanned ball")
            }
            s => CrossCheck::Disagree {
                detail: format!(
                    "solver reports an unbounded value but the oracle classified a point as {}",
                    s.as_str()
                ),
            },
        },
        OptimumSign::NegInf => match oracle.sign {
            OptimumSign::NegInf => CrossCheck::Agree,
            _ => CrossCheck::Disagree {
                detail: "solver reports an empty cone but the oracle found an admissible point"
                    .into(),
            },
        },
        OptimumSign::Positive => {
            let ray = solver.ray.as_ref().expect("positive report carries a ray");
            let m2 = solver.m_squared.as_ref().expect("positive report carries a value");
            let norm = rational::dot(&ray.coords, &matrix::mat_vec(gram, &ray.coords));
            let r2 = Rat::from_integer((oracle.radius * oracle.radius).into());
            if norm <= r2 {
                // The solver's own ray is an admissible lattice point inside
                // the ball, so the oracle must match the value exactly.
                if oracle.sign != OptimumSign::Positive {
                    return CrossCheck::Disagree {
                        detail: format!(
                            "optimal ray lies inside the ball but the oracle reported {}",
                            oracle.sign.as_str()
                        ),
                    };
                }
                let om2 = oracle.m_squared.as_ref().expect("positive oracle carries a value");
                let oray = oracle.ray.as_ref().expect("positive oracle carries a ray");
                let same_dir = primitive_ray(oray).ok().as_ref() == Some(ray);
                if om2 == m2 && same_dir {
                    CrossCheck::Agree
                } else {
                    CrossCheck::Disagree {
                        detail: format!(
                            "inside the ball: solver value {m2} on ray {:?}, oracle value {om2} \
                             on ray {:?}",
                            ray.coords, oray.coords
                        ),
                    }
                }
            } else {
                match (&oracle.sign, &oracle.m_squared) {
                    (OptimumSign::Positive, Some(om2)) if om2 > m2 => CrossCheck::Disagree {
                        detail: format!(
                            "oracle lower bound {om2} exceeds the claimed maximum {m2}"
                        ),
                    },
                    _ => bound_only("optimal ray lies outside the scanned ball"),
                }
            }
        }
        OptimumSign::Zero => match oracle.sign {
            OptimumSign::Zero => CrossCheck::Agree,
            OptimumSign::Positive => CrossCheck::Disagree {
                detail: "solver reports a zero maximum but the oracle found a positive value"
                    .into(),
            },
            _ => bound_only("no zero-value lattice point inside the scanned ball"),
        },
        OptimumSign::Negative => match oracle.sign {
            OptimumSign::Negative => CrossCheck::Agree,
            OptimumSign::Positive | OptimumSign::Zero => CrossCheck::Disagree {
                detail: "solver reports a negative maximum but the oracle found a nonnegative \
                         value"
                    .into(),
            },
            _ => bound_only("no admissible lattice point inside the scanned ball"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::identity;
    use crate::optimize::torus_max;
    use crate::presets;
    use crate::rational::{rat, ratio};

    fn chars(rows: &[&[i64]]) -> Vec<Character> {
        rows.iter().map(|r| Character::ints(r)).collect()
    }

    #[test]
    fn adjoint_line() {
        let d = presets::a1_adjoint();
        let r = lattice_max(&[], &chars(&[&[2]]), &d.gram, 10, 1_000_000).unwrap();
        assert_eq!(r.sign, OptimumSign::Positive);
        assert_eq!(r.m_squared, Some(rat(4)));
        // All positive multiples tie; the lexicographically first is -10 for
        // negative μ... no: μ(λ) = 2λ < 0 there.  First positive point is 1.
        assert_eq!(r.ray, Some(Cocharacter::ints(&[1])));
        assert_eq!(r.scanned, 21);
        assert_eq!(r.admissible, 20);
    }

    #[test]
    fn plane_diagonal() {
        let b = chars(&[&[1, 0], &[0, 1]]);
        let r = lattice_max(&[], &b, &identity(2), 4, 1_000_000).unwrap();
        assert_eq!(r.m_squared, Some(ratio(1, 2)));
        assert_eq!(r.ray, Some(Cocharacter::ints(&[1, 1])));
    }

    #[test]
    fn respects_cone_constraints() {
        // Objective favors the negative axis, cone forbids it.
        let a = chars(&[&[1]]);
        let b = chars(&[&[-1]]);
        let r = lattice_max(&a, &b, &identity(1), 5, 1_000_000).unwrap();
        assert_eq!(r.sign, OptimumSign::Negative);
        assert_eq!(r.ray, Some(Cocharacter::ints(&[1])));
    }

    #[test]
    fn zero_class() {
        let r = lattice_max(&[], &chars(&[&[0, 1], &[0, -1]]), &identity(2), 3, 1_000_000)
            .unwrap();
        assert_eq!(r.sign, OptimumSign::Zero);
        // Best points have μ = 0: the x-axis; lex-first is (-3, 0).
        assert_eq!(r.ray, Some(Cocharacter::ints(&[-3, 0])));
    }

    #[test]
    fn empty_objective_reports_unbounded() {
        let r = lattice_max(&chars(&[&[1, 0]]), &[], &identity(2), 2, 1_000_000).unwrap();
        assert_eq!(r.sign, OptimumSign::PosInf);
        // Lex-first admissible point: x = 0 allows y = -2.
        assert_eq!(r.ray, Some(Cocharacter::ints(&[0, -2])));
    }

    #[test]
    fn zero_radius_sees_nothing() {
        let r = lattice_max(&[], &chars(&[&[1]]), &identity(1), 0, 1_000_000).unwrap();
        assert_eq!(r.sign, OptimumSign::NegInf);
        assert_eq!(r.scanned, 1);
    }

    #[test]
    fn budget_is_enforced_before_scanning() {
        let err = lattice_max(&[], &chars(&[&[1, 0, 0]]), &identity(3), 10, 50).unwrap_err();
        assert!(matches!(err, crate::Error::Budget(_)), "{err}");
    }

    #[test]
    fn nonstandard_gram_units() {
        // gram = 2·I: ‖(1,0)‖² = 2; value² for β = (1,0) at (1,0) is 1/2.
        let g = vec![vec![rat(2), rat(0)], vec![rat(0), rat(2)]];
        let r = lattice_max(&[], &chars(&[&[1, 0]]), &g, 3, 1_000_000).unwrap();
        assert_eq!(r.m_squared, Some(ratio(1, 2)));
        assert_eq!(r.ray, Some(Cocharacter::ints(&[1, 0])));
    }

    #[test]
    fn agrees_with_solver_on_small_instances() {
        let d = presets::sl3_rank2();
        let a = chars(&[&[1, 0]]);
        let b = chars(&[&[2, -1], &[-1, 2]]);
        let s = torus_max(&a, &b, &d.gram).unwrap();
        let o = lattice_max(&a, &b, &d.gram, 8, 10_000_000).unwrap();
        assert_eq!(cross_check(&s, &o, &d.gram), CrossCheck::Agree);
    }

    #[test]
    fn bound_only_when_ray_escapes_ball() {
        // Optimal ray (2, 1, -3) has norm² 14 > 1.
        let b = chars(&[&[2, 1, -3]]);
        let s = torus_max(&[], &b, &identity(3)).unwrap();
        assert_eq!(s.m_squared, Some(rat(14)));
        let o = lattice_max(&[], &b, &identity(3), 1, 1_000_000).unwrap();
        let c = cross_check(&s, &o, &identity(3));
        assert!(matches!(c, CrossCheck::BoundOnly { .. }), "{c:?}");
        assert!(o.m_squared.unwrap() <= rat(14));
    }

    #[test]
    fn detects_fabricated_disagreement() {
        let b = chars(&[&[1, 0]]);
        let mut s = torus_max(&[], &b, &identity(2)).unwrap();
        s.m_squared = Some(rat(5));
        let o = lattice_max(&[], &b, &identity(2), 4, 1_000_000).unwrap();
        assert!(cross_check(&s, &o, &identity(2)).is_disagreement());
    }
}
