//! Apartment-level model of the spherical building at infinity: points as
//! primitive rays, opposition, simplex cones of parabolic types, complete
//! reducibility of convex subsets, and the centre pipeline.
//!
//! Everything lives in one apartment — the cocharacter space of the fixed
//! split torus — and symmetry beyond it enters only through supplied Weyl
//! elements.  A convex subset is a polyhedral cone plus its declared
//! stabilizer; it is completely reducible at this level exactly when the
//! cone is a linear subspace (every ray has its antipode).  When it is not,
//! the centre pipeline combines the cone's averaged inequality state with an
//! averaged strict functional and solves the resulting optimization; the
//! unique optimal ray is the centre, fixed by every declared symmetry.

use num::{Signed, Zero};

use crate::cones::{primitive_ray, Cone};
use crate::optimize::{self, OptimumReport, OptimumSign};
use crate::rational::{self, Rat};
use crate::rootdatum::{Character, Cocharacter, ParabolicType, RootDatum, WeylElement, WeylGroup};
use crate::states::{self, ExtendedValue};
use crate::{Error, Result};

/// A point of the building inside the base apartment: a primitive integral
/// ray direction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BuildingPoint {
    pub ray: Cocharacter,
}

/// The building image of a nonzero cocharacter; positive scalings collapse
/// to the same point.
pub fn zeta(lambda: &Cocharacter) -> Result<BuildingPoint> {
    if rational::is_zero_vec(&lambda.coords) {
        return Err(Error::input("lambda: 0 has no building image".into()));
    }
    Ok(BuildingPoint { ray: primitive_ray(lambda)? })
}

/// Whether two points are antipodal.
pub fn opposite(p: &BuildingPoint, q: &BuildingPoint) -> bool {
    q.ray.coords == rational::negate(&p.ray.coords)
}

/// The closed cone of directions whose parabolic is at least as large as
/// `p`: equalities on the levi simple roots, inequalities on the rest.
/// Requires `p` standard (every simple root nonnegative); an improper `p`
/// yields the central lineality alone.
pub fn simplex_cone(datum: &RootDatum, p: &ParabolicType) -> Result<Cone> {
    let mut ineqs: Vec<Character> = Vec::new();
    for &si in &datum.simple {
        if p.levi.contains(&si) {
            let alpha = &datum.roots[si];
            ineqs.push(alpha.clone());
            ineqs.push(Character::new(rational::negate(&alpha.coords)));
        } else if p.ru.contains(&si) {
            ineqs.push(datum.roots[si].clone());
        } else {
            return Err(Error::input(format!(
                "parabolic: not standard (simple root {si} is not nonnegative); \
                 conjugate to the base chamber first"
            )));
        }
    }
    Cone::from_inequalities(datum.rank, &ineqs)
}

/// A polyhedral convex subset of the apartment together with its declared
/// symmetry.
#[derive(Clone, Debug)]
pub struct ConvexSubset {
    pub cone: Cone,
    pub stabilizer: Vec<WeylElement>,
    pub saturated: bool,
    pub finite_type: bool,
}

impl ConvexSubset {
    /// Validates that every stabilizer element preserves the cone.
    pub fn new(
        cone: Cone,
        stabilizer: Vec<WeylElement>,
        saturated: bool,
        finite_type: bool,
    ) -> Result<Self> {
        for (i, w) in stabilizer.iter().enumerate() {
            for g in &cone.generators {
                if !cone.contains(&w.act(g))? {
                    return Err(Error::input(format!(
                        "stabilizer[{i}]: does not preserve the cone (moves generator \
                         {:?} outside)",
                        g.coords
                    )));
                }
            }
        }
        Ok(ConvexSubset { cone, stabilizer, saturated, finite_type })
    }
}

/// Complete reducibility at apartment level: every point of the subset has
/// its opposite in the subset, i.e. the cone is a linear subspace.
pub fn is_cr_in_apartment(s: &ConvexSubset) -> bool {
    s.cone.is_linear_subspace()
}

/// A witness generator whose antipode is missing, when one exists.
pub fn non_cr_witness(s: &ConvexSubset) -> Option<Cocharacter> {
    s.cone
        .generators
        .iter()
        .find(|g| {
            let neg = Cocharacter::new(rational::negate(&g.coords));
            !s.cone.contains(&neg).unwrap_or(false)
        })
        .cloned()
}

/// A functional nonnegative on the cone and strictly positive somewhere on
/// it: the sum of the defining inequalities that are strictly positive on at
/// least one generator.  `None` exactly when the subset is completely
/// reducible (every inequality vanishes identically on a linear subspace's
/// generators).
pub fn strict_functional(s: &ConvexSubset) -> Option<Character> {
    if is_cr_in_apartment(s) {
        return None;
    }
    let dim = s.cone.dim;
    let mut sum = vec![Rat::zero(); dim];
    let mut any = false;
    for ineq in &s.cone.inequalities {
        let positive_somewhere = s
            .cone
            .generators
            .iter()
            .any(|g| rational::dot(&ineq.coords, &g.coords).is_positive());
        if positive_somewhere {
            any = true;
            sum = rational::add_scaled(&sum, &Rat::from_integer(1.into()), &ineq.coords);
        }
    }
    debug_assert!(any, "a non-linear cone has a strictly positive inequality");
    any.then(|| Character::new(sum))
}

/// Centre computation output: the centre point plus the optimization
/// evidence behind it.
#[derive(Clone, Debug)]
pub struct CentreReport {
    pub centre: BuildingPoint,
    pub m_squared: Rat,
    pub parabolic: ParabolicType,
    pub fixed_by_stabilizer: bool,
    pub optimum: OptimumReport,
}

/// Computes the centre of a non-cr subset: the unique optimal ray of the
/// pairing built from the cone's averaged inequality state and the
/// stabilizer orbit of the strict functional.  The result lies in the cone
/// and is fixed, as a ray, by every stabilizer element.
pub fn centre_in_apartment(datum: &RootDatum, s: &ConvexSubset) -> Result<CentreReport> {
    if is_cr_in_apartment(s) {
        return Err(Error::input(
            "no centre guaranteed: subset is completely reducible at apartment level".into(),
        ));
    }
    if s.cone.dim != datum.rank {
        return Err(Error::dimension(datum.rank, s.cone.dim));
    }
    let xi = states::state_from_cone(&s.cone, &s.stabilizer)?;
    let a: Vec<Character> = xi.component(xi.base)?.chars.iter().cloned().collect();

    let beta = strict_functional(s).expect("non-cr subset has a strict functional");
    let mut orbit = std::collections::BTreeSet::new();
    orbit.insert(beta.clone());
    for w in &s.stabilizer {
        orbit.insert(w.act_char(&beta));
    }
    // Close the orbit under the stabilizer (it is finite and the stabilizer
    // preserves it once all products are applied).
    loop {
        let mut grew = false;
        for w in &s.stabilizer {
            for c in orbit.clone() {
                grew |= orbit.insert(w.act_char(&c));
            }
        }
        if !grew {
            break;
        }
        if orbit.len() > 10_000 {
            return Err(Error::budget("stabilizer orbit of the functional exceeds 10000".into()));
        }
    }
    let b: Vec<Character> = orbit.into_iter().collect();

    let optimum = optimize::torus_max(&a, &b, &datum.gram)?;
    if optimum.sign != OptimumSign::Positive {
        return Err(Error::disagreement(format!(
            "centre pipeline: expected a positive optimum, got {}",
            optimum.sign.as_str()
        )));
    }
    let ray = optimum.ray.clone().expect("positive optimum carries a ray");
    if !s.cone.contains(&ray)? {
        return Err(Error::disagreement(
            "centre pipeline: optimal ray escaped the subset".into(),
        ));
    }
    let mut fixed = true;
    for w in &s.stabilizer {
        if primitive_ray(&w.act(&ray))? != ray {
            fixed = false;
        }
    }
    if !fixed {
        return Err(Error::disagreement(
            "centre pipeline: computed centre is not stabilizer-fixed".into(),
        ));
    }
    Ok(CentreReport {
        centre: BuildingPoint { ray: ray.clone() },
        m_squared: optimum.m_squared.clone().expect("positive optimum carries a value"),
        parabolic: datum.parabolic_type(&ray)?,
        fixed_by_stabilizer: fixed,
        optimum,
    })
}

/// One named condition of a centre verification.
#[derive(Clone, Debug)]
pub struct CentreCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`verify_centre`].
#[derive(Clone, Debug)]
pub struct CentreVerification {
    pub passed: bool,
    pub checks: Vec<CentreCheck>,
    /// `μ` of the parabolic state at the candidate, when defined.
    pub mu: Option<Rat>,
}

/// Independently verifies a candidate centre: membership in the subset, a
/// proper parabolic with strictly positive state value on the candidate ray,
/// and stabilizer-fixedness of that parabolic state.
pub fn verify_centre(
    datum: &RootDatum,
    group: &WeylGroup,
    s: &ConvexSubset,
    c: &BuildingPoint,
) -> Result<CentreVerification> {
    let mut checks = Vec::new();
    let mut mu_value = None;

    let member = s.cone.contains(&c.ray)?;
    checks.push(CentreCheck {
        name: "membership",
        passed: member,
        detail: if member { "candidate ray lies in the subset".into() } else { "not in subset".into() },
    });

    let p = datum.parabolic_type(&c.ray)?;
    let proper = p.is_proper();
    checks.push(CentreCheck {
        name: "proper parabolic",
        passed: proper,
        detail: if proper {
            format!("candidate defines {p}")
        } else {
            "candidate ray is central: no proper parabolic".into()
        },
    });

    if proper {
        let upsilon = states::state_from_parabolic(datum, group, &p)?;
        let mu = upsilon.mu(upsilon.base, &c.ray)?;
        let mu_ok = match &mu {
            ExtendedValue::Finite(v) => {
                mu_value = Some(v.clone());
                v.is_positive()
            }
            _ => false,
        };
        checks.push(CentreCheck {
            name: "state value",
            passed: mu_ok,
            detail: format!("mu at the candidate is {mu}"),
        });

        let mut fixed = true;
        let mut moved_by = None;
        for w in &s.stabilizer {
            let pushed = upsilon.pushforward(w)?;
            if pushed.component(pushed.base)?.chars != upsilon.component(upsilon.base)?.chars {
                fixed = false;
                moved_by = Some(w.word.clone());
                break;
            }
        }
        checks.push(CentreCheck {
            name: "stabilizer fixes state",
            passed: fixed,
            detail: match moved_by {
                None => "every stabilizer element fixes the parabolic state".into(),
                Some(word) => {
                    format!("state not stabilizer-fixed (moved by word {word:?})")
                }
            },
        });
    }

    Ok(CentreVerification {
        passed: checks.iter().all(|c| c.passed),
        checks,
        mu: mu_value,
    })
}
