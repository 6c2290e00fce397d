//! Root data on an ambient lattice, Weyl elements, and parabolic types.
//!
//! Cocharacters live in `Y = Z^rank`, characters in its dual `X = Z^rank`, and
//! the pairing is the standard dot product in these coordinates.  A root datum
//! bundles the roots and coroots (as vectors in `X` resp. `Y`) together with an
//! integer Gram matrix defining a Weyl-invariant norm on cocharacter space.
//! Semisimple groups can be presented either inside a larger ambient lattice
//! (GL-style, e.g. type A2 inside Z^3) or on their own coroot lattice.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num::{One, Signed, Zero};

use crate::matrix::{self, Mat};
use crate::rational::{dot, rat_vec, Rat};
use crate::{Error, Result};

/// Default ceiling on Weyl group enumeration.
pub const DEFAULT_WEYL_BOUND: usize = 1_000_000;

/// A rational cocharacter: a coordinate vector in `Y ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cocharacter {
    pub coords: Vec<Rat>,
}

/// A rational character: a coordinate vector in `X ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub coords: Vec<Rat>,
}

impl Cocharacter {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self { coords }
    }

    pub fn ints(v: &[i64]) -> Self {
        Self { coords: rat_vec(v) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        crate::rational::is_zero_vec(&self.coords)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }
}

impl Character {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self { coords }
    }

    pub fn ints(v: &[i64]) -> Self {
        Self { coords: rat_vec(v) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        crate::rational::is_zero_vec(&self.coords)
    }
}

/// The perfect pairing `⟨λ, β⟩ = Σ λ_i β_i`.
pub fn pairing(lambda: &Cocharacter, chi: &Character) -> Result<Rat> {
    if lambda.dim() != chi.dim() {
        return Err(Error::dimension(lambda.dim(), chi.dim()));
    }
    Ok(dot(&lambda.coords, &chi.coords))
}

/// One Weyl group element, acting on `Y` by `y_matrix` and on `X` by
/// `x_matrix`; the two actions are adjoint for the pairing, i.e.
/// `x_matrixᵀ · y_matrix = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub y_matrix: Mat,
    pub x_matrix: Mat,
    /// A word in simple-reflection indices composing to this element
    /// (left-to-right; the rightmost letter acts first).
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        Self { y_matrix: matrix::identity(dim), x_matrix: matrix::identity(dim), word: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.y_matrix == matrix::identity(self.y_matrix.len())
    }

    pub fn act(&self, lambda: &Cocharacter) -> Cocharacter {
        Cocharacter::new(matrix::mat_vec(&self.y_matrix, &lambda.coords))
    }

    pub fn act_char(&self, chi: &Character) -> Character {
        Character::new(matrix::mat_vec(&self.x_matrix, &chi.coords))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Self {
            y_matrix: matrix::mat_mul(&self.y_matrix, &other.y_matrix),
            x_matrix: matrix::mat_mul(&self.x_matrix, &other.x_matrix),
            word,
        }
    }

    /// The inverse element.  Because the actions are pairing-adjoint, the
    /// inverse matrices are plain transposes of the partner action.
    pub fn inverse(&self) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Self {
            y_matrix: matrix::transpose(&self.x_matrix),
            x_matrix: matrix::transpose(&self.y_matrix),
            word,
        }
    }
}

/// A parabolic type: the partition of root indices by the sign of the pairing
/// against a defining cocharacter.  `nonneg` is the disjoint union of `levi`
/// (pairing zero) and `ru` (pairing strictly positive).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParabolicType {
    pub nonneg: BTreeSet<usize>,
    pub levi: BTreeSet<usize>,
    pub ru: BTreeSet<usize>,
}

impl ParabolicType {
    /// A proper parabolic has a nonempty unipotent radical; the type computed
    /// from `λ = 0` is the full group and is not proper.
    pub fn is_proper(&self) -> bool {
        !self.ru.is_empty()
    }
}

impl fmt::Display for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "levi={:?} ru={:?}", self.levi, self.ru)
    }
}

/// Structured result of `RootDatum::validate`.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Order of the Weyl group when enumeration completed within the bound.
    pub weyl_order: Option<usize>,
    /// True when invariance was only spot-checked by seeded sampling because
    /// the closure exceeded the enumeration bound.
    pub sampled: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub rank: usize,
    pub roots: Vec<Character>,
    /// Indices into `roots` selecting the simple roots.
    pub simple: Vec<usize>,
    /// Coroot for each root, in parallel order.
    pub coroots: Vec<Cocharacter>,
    /// Symmetric positive definite integer Gram matrix on `Y`.
    pub gram: Mat,
}

impl RootDatum {
    pub fn new(
        rank: usize,
        roots: Vec<Character>,
        simple: Vec<usize>,
        coroots: Vec<Cocharacter>,
        gram: Mat,
    ) -> Result<Self> {
        let d = Self { rank, roots, simple, coroots, gram };
        d.check_shape()?;
        Ok(d)
    }

    fn check_shape(&self) -> Result<()> {
        if self.roots.len() != self.coroots.len() {
            return Err(Error::input(format!(
                "coroots: expected {} entries to match roots, got {}",
                self.roots.len(),
                self.coroots.len()
            )));
        }
        for (i, r) in self.roots.iter().enumerate() {
            if r.dim() != self.rank {
                return Err(Error::input(format!("roots[{i}]: expected {} coordinates", self.rank)));
            }
            if r.is_zero() {
                return Err(Error::input(format!("roots[{i}]: zero vector is not a root")));
            }
        }
        for (i, c) in self.coroots.iter().enumerate() {
            if c.dim() != self.rank {
                return Err(Error::input(format!("coroots[{i}]: expected {} coordinates", self.rank)));
            }
        }
        let mut seen = BTreeSet::new();
        for &s in &self.simple {
            if s >= self.roots.len() {
                return Err(Error::input(format!("simple: index {s} out of range")));
            }
            if !seen.insert(s) {
                return Err(Error::input(format!("simple: duplicate index {s}")));
            }
        }
        if self.gram.len() != self.rank || self.gram.iter().any(|r| r.len() != self.rank) {
            return Err(Error::input(format!("gram: expected a {0}x{0} matrix", self.rank)));
        }
        Ok(())
    }

    /// Gram-norm square `(λ, λ) = λᵀ G λ`.
    pub fn norm_sq(&self, lambda: &Cocharacter) -> Result<Rat> {
        if lambda.dim() != self.rank {
            return Err(Error::dimension(self.rank, lambda.dim()));
        }
        Ok(dot(&lambda.coords, &matrix::mat_vec(&self.gram, &lambda.coords)))
    }

    /// The simple reflection at `simple[i]`, acting on `Y` by
    /// `λ ↦ λ − ⟨λ, α⟩ α∨` and on `X` by `β ↦ β − ⟨α∨, β⟩ α`.
    pub fn simple_reflection(&self, i: usize) -> Result<WeylElement> {
        let &ri = self.simple.get(i).ok_or_else(|| {
            Error::input(format!("simple reflection index {i} out of range"))
        })?;
        let alpha = &self.roots[ri];
        let covec = &self.coroots[ri];
        let n = self.rank;
        let mut y = matrix::identity(n);
        let mut x = matrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                y[r][c] -= &covec.coords[r] * &alpha.coords[c];
                x[r][c] -= &alpha.coords[r] * &covec.coords[c];
            }
        }
        Ok(WeylElement { y_matrix: y, x_matrix: x, word: vec![i] })
    }

    /// Composes the element named by a word in simple-reflection indices.
    pub fn element_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = WeylElement::identity(self.rank);
        for &i in word {
            w = w.compose(&self.simple_reflection(i)?);
        }
        Ok(w)
    }

    /// Sign partition of the root indices against `λ`.
    pub fn parabolic_type(&self, lambda: &Cocharacter) -> Result<ParabolicType> {
        let mut p = ParabolicType {
            nonneg: BTreeSet::new(),
            levi: BTreeSet::new(),
            ru: BTreeSet::new(),
        };
        for (i, alpha) in self.roots.iter().enumerate() {
            let v = pairing(lambda, alpha)?;
            if v.is_zero() {
                p.nonneg.insert(i);
                p.levi.insert(i);
            } else if v.is_positive() {
                p.nonneg.insert(i);
                p.ru.insert(i);
            }
        }
        Ok(p)
    }

    /// How `w` permutes the root list (through its `X`-action).  Errors when
    /// some image is not a root, which means `w` does not stabilize the datum.
    pub fn root_permutation(&self, w: &WeylElement) -> Result<Vec<usize>> {
        let index: BTreeMap<&Character, usize> =
            self.roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        self.roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let img = w.act_char(r);
                index.get(&img).copied().ok_or_else(|| {
                    Error::input(format!("roots[{i}]: Weyl image is not a root"))
                })
            })
            .collect()
    }

    /// Applies the root permutation of `w` to a parabolic type:
    /// the type of `act(w, λ)` is the permuted type of `λ`.
    pub fn permute_parabolic(&self, w: &WeylElement, p: &ParabolicType) -> Result<ParabolicType> {
        let perm = self.root_permutation(w)?;
        let map = |s: &BTreeSet<usize>| s.iter().map(|&i| perm[i]).collect::<BTreeSet<_>>();
        Ok(ParabolicType { nonneg: map(&p.nonneg), levi: map(&p.levi), ru: map(&p.ru) })
    }

    /// Enumerates the Weyl group generated by the simple reflections, erroring
    /// with a resource failure when the closure exceeds `bound` elements.
    pub fn weyl_group(&self, bound: usize) -> Result<WeylGroup> {
        let gens: Vec<WeylElement> =
            (0..self.simple.len()).map(|i| self.simple_reflection(i)).collect::<Result<_>>()?;
        let mut lookup: BTreeMap<Mat, usize> = BTreeMap::new();
        let mut elements = vec![WeylElement::identity(self.rank)];
        lookup.insert(elements[0].y_matrix.clone(), 0);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(at) = queue.pop_front() {
            for (i, g) in gens.iter().enumerate() {
                let mut next = elements[at].compose(g);
                next.word = elements[at].word.iter().copied().chain([i]).collect();
                if !lookup.contains_key(&next.y_matrix) {
                    if elements.len() >= bound {
                        return Err(Error::budget(format!(
                            "weyl group closure exceeded bound {bound}"
                        )));
                    }
                    lookup.insert(next.y_matrix.clone(), elements.len());
                    elements.push(next);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        elements.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
        let lookup =
            elements.iter().enumerate().map(|(i, e)| (e.y_matrix.clone(), i)).collect();
        Ok(WeylGroup { elements, lookup })
    }

    /// Full invariant check; collects violations instead of stopping at the
    /// first.  `seed` drives the sampled invariance fallback used when the
    /// Weyl closure exceeds `bound`.
    pub fn validate(&self, bound: usize, seed: u64) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut violations = Vec::new();

        if let Err(e) = self.check_shape() {
            violations.push(Violation { field: "shape".into(), message: e.to_string() });
            report.violations = violations;
            return report;
        }

        let mut gram_ok = true;
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.gram[i][j] != self.gram[j][i] {
                    violations
                        .push(Violation { field: "gram".into(), message: "not symmetric".into() });
                    gram_ok = false;
                    break;
                }
                if !self.gram[i][j].denom().is_one() {
                    violations
                        .push(Violation { field: "gram".into(), message: "not integral".into() });
                    gram_ok = false;
                    break;
                }
            }
            if !gram_ok {
                break;
            }
        }
        if gram_ok && matrix::check_positive_definite(&self.gram).is_err() {
            violations
                .push(Violation { field: "gram".into(), message: "not positive definite".into() });
            gram_ok = false;
        }

        for (i, (alpha, covec)) in self.roots.iter().zip(&self.coroots).enumerate() {
            let v = dot(&covec.coords, &alpha.coords);
            if v != crate::rational::rat(2) {
                violations.push(Violation {
                    field: format!("coroots[{i}]"),
                    message: format!("pairing with its root is {}, expected 2", v),
                });
            }
        }

        let root_set: BTreeSet<&Character> = self.roots.iter().collect();
        for (i, alpha) in self.roots.iter().enumerate() {
            let neg = Character::new(crate::rational::negate(&alpha.coords));
            if !root_set.contains(&neg) {
                violations.push(Violation {
                    field: format!("roots[{i}]"),
                    message: "negative is not a root".into(),
                });
            }
        }

        let simple_rows: Mat = self.simple.iter().map(|&s| self.roots[s].coords.clone()).collect();
        if matrix::rank(&simple_rows) != self.simple.len() {
            violations.push(Violation {
                field: "simple".into(),
                message: "simple roots are linearly dependent".into(),
            });
        }

        for i in 0..self.simple.len() {
            match self.simple_reflection(i) {
                Ok(s) => {
                    if self.root_permutation(&s).is_err() {
                        violations.push(Violation {
                            field: format!("simple[{i}]"),
                            message: "reflection does not permute the root set".into(),
                        });
                    }
                }
                Err(e) => violations
                    .push(Violation { field: format!("simple[{i}]"), message: e.to_string() }),
            }
        }

        // Weyl-invariance of the Gram form, over the full group when the
        // closure fits in the bound, otherwise over seeded random words.
        if gram_ok && violations.is_empty() {
            match self.weyl_group(bound) {
                Ok(group) => {
                    report.weyl_order = Some(group.len());
                    for w in group.iter() {
                        if !self.gram_invariant_under(w) {
                            violations.push(Violation {
                                field: "gram".into(),
                                message: format!("not Weyl-invariant (word {:?})", w.word),
                            });
                            break;
                        }
                    }
                }
                Err(_) => {
                    report.sampled = true;
                    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                    let mut next = || {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        (state >> 33) as usize
                    };
                    for _ in 0..64 {
                        let len = next() % 24;
                        let word: Vec<usize> =
                            (0..len).map(|_| next() % self.simple.len().max(1)).collect();
                        if let Ok(w) = self.element_from_word(&word) {
                            if !self.gram_invariant_under(&w) {
                                violations.push(Violation {
                                    field: "gram".into(),
                                    message: format!("not Weyl-invariant (word {:?})", w.word),
                                });
                                break;
                            }
                        }
                    }
                }
            }
        }

        report.violations = violations;
        report
    }

    fn gram_invariant_under(&self, w: &WeylElement) -> bool {
        let wt = matrix::transpose(&w.y_matrix);
        matrix::mat_mul(&wt, &matrix::mat_mul(&self.gram, &w.y_matrix)) == self.gram
    }

    /// Symmetrizes an arbitrary form by summing `wᵀ F w` over the Weyl group.
    /// The sum (rather than the mean) keeps integer entries integer; a
    /// positive scalar multiple defines the same geometry everywhere here.
    pub fn weyl_symmetrized_gram(&self, form: &Mat, bound: usize) -> Result<Mat> {
        let group = self.weyl_group(bound)?;
        let mut acc = vec![vec![Rat::zero(); self.rank]; self.rank];
        for w in group.iter() {
            let wt = matrix::transpose(&w.y_matrix);
            let term = matrix::mat_mul(&wt, &matrix::mat_mul(form, &w.y_matrix));
            for i in 0..self.rank {
                for j in 0..self.rank {
                    acc[i][j] += &term[i][j];
                }
            }
        }
        Ok(acc)
    }

    /// A canonical regular dominant point: the Gram-least solution of
    /// `⟨x, α_i⟩ = 1` over the simple roots.  Used as a chamber barycenter
    /// when sampling admissibility checks.
    pub fn chamber_barycenter(&self) -> Result<Cocharacter> {
        if self.simple.is_empty() {
            return Err(Error::input("simple: empty; no chamber barycenter".into()));
        }
        let a: Mat = self.simple.iter().map(|&s| self.roots[s].coords.clone()).collect();
        let ginv = matrix::inverse(&self.gram)
            .ok_or_else(|| Error::input("gram: singular".into()))?;
        let at = matrix::transpose(&a);
        let m = matrix::mat_mul(&a, &matrix::mat_mul(&ginv, &at));
        let ones = vec![Rat::one(); self.simple.len()];
        let y = matrix::solve(&m, &ones)
            .ok_or_else(|| Error::input("simple: dependent roots, no barycenter".into()))?;
        Ok(Cocharacter::new(matrix::mat_vec(&ginv, &matrix::mat_vec(&at, &y))))
    }
}

/// The enumerated Weyl group, sorted by word length then lexicographic word;
/// the identity is element 0.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    lookup: BTreeMap<Mat, usize>,
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeylElement> {
        self.elements.iter()
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.lookup.get(&w.y_matrix).copied()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn compose_indices(&self, a: usize, b: usize) -> Option<usize> {
        self.index_of(&self.elements[a].compose(&self.elements[b]))
    }

    pub fn inverse_index(&self, a: usize) -> Option<usize> {
        self.index_of(&self.elements[a].inverse())
    }
}
