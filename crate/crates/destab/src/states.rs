//! Finite character-set states over indexed torus frames.
//!
//! A state family holds one finite set of characters per index, all written in
//! the coordinates of a fixed base frame; an action of the Weyl group on the
//! index set records how symmetry moves permute the frames.  The numerical
//! value of a component at a cocharacter is the minimum pairing over its
//! characters, `+∞` for the empty set, and the zero set of a component is the
//! polyhedral cone where that value is nonnegative (with `∞` counting as
//! positive).

use std::collections::BTreeSet;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed};

use crate::cones::Cone;
use crate::rational::Rat;
use crate::rootdatum::{pairing, Character, Cocharacter, ParabolicType, RootDatum, WeylElement, WeylGroup};
use crate::{Error, Result};

/// A rational value extended by the two infinities.  `PosInf` compares above
/// every finite value and counts as positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedValue {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl ExtendedValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    /// Nonnegative with the `∞ > 0` convention.
    pub fn is_nonneg(&self) -> bool {
        match self {
            ExtendedValue::NegInf => false,
            ExtendedValue::Finite(r) => !r.is_negative(),
            ExtendedValue::PosInf => true,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtendedValue::NegInf => false,
            ExtendedValue::Finite(r) => r.is_positive(),
            ExtendedValue::PosInf => true,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::NegInf => write!(f, "-inf"),
            ExtendedValue::Finite(r) => write!(f, "{}", crate::rational::format_rat(r)),
            ExtendedValue::PosInf => write!(f, "inf"),
        }
    }
}

/// One component: a finite set of characters in a fixed ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateComponent {
    pub dim: usize,
    pub chars: BTreeSet<Character>,
}

impl StateComponent {
    pub fn new(dim: usize, chars: impl IntoIterator<Item = Character>) -> Result<Self> {
        let chars: BTreeSet<Character> = chars.into_iter().collect();
        for c in &chars {
            if c.dim() != dim {
                return Err(Error::dimension(dim, c.dim()));
            }
        }
        Ok(Self { dim, chars })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, chars: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// `μ(λ)`: the minimum pairing against the character set, `+∞` when the
    /// set is empty.
    pub fn mu(&self, lambda: &Cocharacter) -> Result<ExtendedValue> {
        let mut best: Option<Rat> = None;
        for c in &self.chars {
            let v = pairing(lambda, c)?;
            best = Some(match best {
                Some(b) if b <= v => b,
                _ => v,
            });
        }
        Ok(best.map_or(ExtendedValue::PosInf, ExtendedValue::Finite))
    }

    /// The image set under the character action of `w`.
    pub fn transform(&self, w: &WeylElement) -> Self {
        Self { dim: self.dim, chars: self.chars.iter().map(|c| w.act_char(c)).collect() }
    }

    /// The cone where `μ ≥ 0`: characters reread as inequalities.
    pub fn zero_set(&self) -> Result<Cone> {
        let ineqs: Vec<Character> = self.chars.iter().cloned().collect();
        Cone::from_inequalities(self.dim, &ineqs)
    }
}

/// A finite family of components with a Weyl action on the index set.
///
/// The action is stored as one index permutation per simple reflection;
/// arbitrary elements act by composing along their word.  An empty permutation
/// list means the trivial action on any number of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiStateFamily {
    pub dim: usize,
    pub components: Vec<StateComponent>,
    pub simple_perms: Vec<Vec<usize>>,
    pub base: usize,
}

impl QuasiStateFamily {
    pub fn new(
        dim: usize,
        components: Vec<StateComponent>,
        simple_perms: Vec<Vec<usize>>,
        base: usize,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::input("components: at least one component required".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.dim != dim {
                return Err(Error::input(format!(
                    "components[{i}]: expected dimension {dim}, got {}",
                    c.dim
                )));
            }
        }
        if base >= components.len() {
            return Err(Error::input(format!("base: index {base} out of range")));
        }
        for (s, p) in simple_perms.iter().enumerate() {
            if !is_permutation(p, components.len()) {
                return Err(Error::input(format!(
                    "index_action[{s}]: not a permutation of 0..{}",
                    components.len()
                )));
            }
        }
        Ok(Self { dim, components, simple_perms, base })
    }

    /// A one-component family with the trivial index action.
    pub fn single(component: StateComponent) -> Self {
        Self { dim: component.dim, components: vec![component], simple_perms: Vec::new(), base: 0 }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, i: usize) -> Result<&StateComponent> {
        self.components.get(i).ok_or_else(|| Error::input(format!("index {i} out of range")))
    }

    pub fn base_component(&self) -> &StateComponent {
        &self.components[self.base]
    }

    /// The index permutation of the element named by `word`.
    pub fn perm_of_word(&self, word: &[usize]) -> Result<Vec<usize>> {
        let n = self.components.len();
        let mut perm: Vec<usize> = (0..n).collect();
        if self.simple_perms.is_empty() {
            return Ok(perm);
        }
        // Rightmost letter acts first: compose left-to-right over the word.
        for &i in word.iter().rev() {
            let p = self.simple_perms.get(i).ok_or_else(|| {
                Error::input(format!("index_action: no permutation for simple reflection {i}"))
            })?;
            perm = perm.iter().map(|&j| p[j]).collect();
        }
        Ok(perm)
    }

    pub fn perm_of(&self, w: &WeylElement) -> Result<Vec<usize>> {
        self.perm_of_word(&w.word)
    }

    /// `μ` of the component at `index`.
    pub fn mu(&self, index: usize, lambda: &Cocharacter) -> Result<ExtendedValue> {
        self.component(index)?.mu(lambda)
    }

    /// The pushforward along `w`: component `i` of the result is the
    /// `w`-transform of the component at the `w⁻¹`-moved index, so that
    /// `μ(push(w, F), w·i, w·λ) = μ(F, i, λ)`.
    pub fn pushforward(&self, w: &WeylElement) -> Result<QuasiStateFamily> {
        let perm = self.perm_of(w)?;
        let inv = invert_permutation(&perm);
        let components =
            inv.iter().map(|&j| self.components[j].transform(w)).collect();
        Ok(QuasiStateFamily {
            dim: self.dim,
            components,
            simple_perms: self.simple_perms.clone(),
            base: self.base,
        })
    }

    /// Componentwise union of families sharing one index structure.
    pub fn union(families: &[QuasiStateFamily]) -> Result<QuasiStateFamily> {
        let first = families
            .first()
            .ok_or_else(|| Error::input("union: at least one family required".into()))?;
        let mut out = first.clone();
        for f in &families[1..] {
            if f.dim != out.dim
                || f.components.len() != out.components.len()
                || f.simple_perms != out.simple_perms
                || f.base != out.base
            {
                return Err(Error::input(
                    "union: families have mismatched index structure".into(),
                ));
            }
            for (acc, c) in out.components.iter_mut().zip(&f.components) {
                acc.chars.extend(c.chars.iter().cloned());
            }
        }
        Ok(out)
    }

    /// The union of pushforwards over a composition-closed set of Weyl
    /// elements.  The result is fixed by pushforward along every member.
    pub fn average_over_group(
        group_elements: &[WeylElement],
        family: &QuasiStateFamily,
    ) -> Result<QuasiStateFamily> {
        let closed = close_check(group_elements)?;
        let pushed: Vec<QuasiStateFamily> =
            closed.iter().map(|w| family.pushforward(w)).collect::<Result<_>>()?;
        QuasiStateFamily::union(&pushed)
    }

    /// Zero set of the component at `index`.
    pub fn zero_set(&self, index: usize) -> Result<Cone> {
        self.component(index)?.zero_set()
    }

    /// Size of the full character support under every group pushforward —
    /// the finiteness witness for boundedness.
    pub fn support_size(&self, group: &WeylGroup) -> Result<usize> {
        let mut all: BTreeSet<Character> = BTreeSet::new();
        for w in group.iter() {
            for c in &self.components {
                all.extend(c.transform(w).chars);
            }
        }
        Ok(all.len())
    }

    /// Scales every character by the least common positive integer multiple
    /// clearing all denominators; returns the factor.  Zero sets and value
    /// signs are unchanged.
    pub fn scale_to_integral(&self) -> (QuasiStateFamily, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.components {
            for ch in &c.chars {
                for x in &ch.coords {
                    lcm = num::integer::lcm(lcm, x.denom().clone());
                }
            }
        }
        let factor = Rat::from_integer(lcm.clone());
        let mut out = self.clone();
        for c in out.components.iter_mut() {
            c.chars = c
                .chars
                .iter()
                .map(|ch| Character::new(crate::rational::scale(&factor, &ch.coords)))
                .collect();
        }
        (out, lcm)
    }

    /// Checks that the stored permutations define a group action of the
    /// enumerated Weyl group on the index set.
    pub fn validate_action(&self, group: &WeylGroup) -> Result<()> {
        if self.simple_perms.is_empty() {
            return Ok(());
        }
        let perms: Vec<Vec<usize>> =
            group.iter().map(|w| self.perm_of(w)).collect::<Result<_>>()?;
        for (a, wa) in group.iter().enumerate() {
            for (b, wb) in group.iter().enumerate() {
                let ab = group
                    .index_of(&wa.compose(wb))
                    .ok_or_else(|| Error::input("index_action: group lookup failed".into()))?;
                let composed: Vec<usize> = perms[b].iter().map(|&j| perms[a][j]).collect();
                if composed != perms[ab] {
                    return Err(Error::input(format!(
                        "index_action: not a group action (words {:?} and {:?})",
                        wa.word, wb.word
                    )));
                }
            }
        }
        Ok(())
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in p {
        if j >= n || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Dedupes by matrix and checks closure under composition; a finite subset of
/// a group closed under composition is a subgroup, so the identity and
/// inverses come for free.
fn close_check(elements: &[WeylElement]) -> Result<Vec<WeylElement>> {
    let mut unique: Vec<WeylElement> = Vec::new();
    for w in elements {
        if !unique.iter().any(|u| u.y_matrix == w.y_matrix) {
            unique.push(w.clone());
        }
    }
    if unique.is_empty() {
        return Err(Error::input("group elements: empty set".into()));
    }
    for a in &unique {
        for b in &unique {
            let ab = a.compose(b);
            if !unique.iter().any(|u| u.y_matrix == ab.y_matrix) {
                return Err(Error::input(format!(
                    "group elements: not closed under composition (words {:?}, {:?})",
                    a.word, b.word
                )));
            }
        }
    }
    Ok(unique)
}

/// The averaged state of a stabilizer-invariant cone: a single component
/// carrying the union over `stab` of the transformed inequality lists.  Its
/// zero set is the cone again, and the family is fixed by pushforward along
/// every stabilizer element.
pub fn state_from_cone(cone: &Cone, stab: &[WeylElement]) -> Result<QuasiStateFamily> {
    let stab = if stab.is_empty() {
        vec![WeylElement::identity(cone.dim)]
    } else {
        close_check(stab)?
    };
    for w in &stab {
        for g in &cone.generators {
            if !cone.contains(&w.act(g))? {
                return Err(Error::input(format!(
                    "stabilizer: element with word {:?} does not preserve the cone",
                    w.word
                )));
            }
        }
    }
    let mut chars: BTreeSet<Character> = BTreeSet::new();
    for w in &stab {
        for b in &cone.inequalities {
            chars.insert(w.act_char(b));
        }
    }
    Ok(QuasiStateFamily::single(StateComponent { dim: cone.dim, chars }))
}

/// The state of a proper parabolic type: indexed by the enumerated Weyl
/// group, with the radical-root characters at every index whose element
/// preserves the type's root partition and the empty set elsewhere.
pub fn state_from_parabolic(
    datum: &RootDatum,
    group: &WeylGroup,
    p: &ParabolicType,
) -> Result<QuasiStateFamily> {
    if !p.is_proper() {
        return Err(Error::input(
            "parabolic: improper type (empty radical) has no state".into(),
        ));
    }
    let radical: BTreeSet<Character> = p.ru.iter().map(|&i| datum.roots[i].clone()).collect();
    let mut components = Vec::with_capacity(group.len());
    for w in group.iter() {
        let perm = datum.root_permutation(w)?;
        let preserves = p.levi.iter().all(|&i| p.levi.contains(&perm[i]))
            && p.ru.iter().all(|&i| p.ru.contains(&perm[i]));
        components.push(if preserves {
            StateComponent { dim: datum.rank, chars: radical.clone() }
        } else {
            StateComponent::empty(datum.rank)
        });
    }
    let simple_count = datum.simple.len();
    let mut simple_perms = Vec::with_capacity(simple_count);
    for i in 0..simple_count {
        let s = datum.simple_reflection(i)?;
        let mut perm = Vec::with_capacity(group.len());
        for w in group.iter() {
            let moved = s.compose(w);
            let j = group
                .index_of(&moved)
                .ok_or_else(|| Error::input("weyl group: closure lookup failed".into()))?;
            perm.push(j);
        }
        simple_perms.push(perm);
    }
    QuasiStateFamily::new(datum.rank, components, simple_perms, group.identity_index())
}

/// One failed comparison in an admissibility check.
#[derive(Clone, Debug)]
pub struct AdmissibilityFailure {
    pub lambda: Cocharacter,
    pub word: Vec<usize>,
    pub from_index: usize,
    pub to_index: usize,
    pub mu_from: ExtendedValue,
    pub mu_to: ExtendedValue,
}

/// Outcome of a sampled admissibility check.  A passing report does not
/// certify the defining condition — only the sampled points and the Weyl
/// moves were compared.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub exact: bool,
    pub sample_count: usize,
    pub comparisons: usize,
    pub failures: Vec<AdmissibilityFailure>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn caveat(&self) -> &'static str {
        "sampled check: a pass covers only the sampled points and apartment moves, \
         not the full defining condition"
    }
}

/// Compares `μ` across index-action-related components at one point, for
/// every Weyl element fixing the point.  `exact` demands equal values;
/// otherwise only the sign classes (negative vs nonnegative) must match.
pub fn check_admissible_at(
    group: &WeylGroup,
    family: &QuasiStateFamily,
    lambda: &Cocharacter,
    exact: bool,
) -> Result<AdmissibilityReport> {
    let mut report = AdmissibilityReport {
        exact,
        sample_count: 1,
        comparisons: 0,
        failures: Vec::new(),
    };
    for w in group.iter() {
        if &w.act(lambda) != lambda {
            continue;
        }
        let perm = family.perm_of(w)?;
        for i in 0..family.len() {
            let j = perm[i];
            let mu_from = family.mu(i, lambda)?;
            let mu_to = family.mu(j, lambda)?;
            report.comparisons += 1;
            let ok = if exact { mu_from == mu_to } else { mu_from.is_nonneg() == mu_to.is_nonneg() };
            if !ok {
                report.failures.push(AdmissibilityFailure {
                    lambda: lambda.clone(),
                    word: w.word.clone(),
                    from_index: i,
                    to_index: j,
                    mu_from,
                    mu_to,
                });
            }
        }
    }
    Ok(report)
}

/// Sampled quasi-admissibility check over the zero-set generators of every
/// component, the Weyl orbit of the chamber barycenter, and any caller
/// samples.
pub fn check_quasi_admissible(
    datum: &RootDatum,
    group: &WeylGroup,
    family: &QuasiStateFamily,
    extra: &[Cocharacter],
) -> Result<AdmissibilityReport> {
    let mut samples: BTreeSet<Cocharacter> = extra.iter().cloned().collect();
    for i in 0..family.len() {
        samples.extend(family.zero_set(i)?.generators.iter().cloned());
    }
    if let Ok(bary) = datum.chamber_barycenter() {
        for w in group.iter() {
            samples.insert(w.act(&bary));
        }
    }
    let mut out = AdmissibilityReport {
        exact: false,
        sample_count: 0,
        comparisons: 0,
        failures: Vec::new(),
    };
    for lambda in &samples {
        let r = check_admissible_at(group, family, lambda, false)?;
        out.sample_count += 1;
        out.comparisons += r.comparisons;
        out.failures.extend(r.failures);
    }
    Ok(out)
}
