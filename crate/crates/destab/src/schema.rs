//! JSON interchange: input schemas for root data, cones, quasi-states,
//! optimization problems, instability problems, and convex subsets; output
//! shapes for every report the command line emits.
//!
//! Rationals cross the interface as decimal-free strings (`"3"`, `"-1/2"`);
//! bare JSON integers are accepted on input for convenience.  No floating
//! point is ever read or written.  All emitted collections are in canonical
//! order, so identical inputs produce byte-identical output.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cones::Cone;
use crate::instability::{Representation, Transform, UpsilonMode, WeightVector};
use crate::matrix::Mat;
use crate::optimize::{FamilyPair, FarkasCertificate, OptimalClass, OptimumReport};
use crate::oracle::{CrossCheck, OracleReport};
use crate::rational::{self, Rat};
use crate::rootdatum::{
    Character, Cocharacter, ParabolicType, RootDatum, ValidationReport, WeylElement,
};
use crate::states::{QuasiStateFamily, StateComponent};
use crate::{building, Error, Result};

/// A rational in transit: an integer or a `"p/q"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RatInput {
    Int(i64),
    Str(String),
}

impl RatInput {
    pub fn to_rat(&self, field: &str) -> Result<Rat> {
        match self {
            RatInput::Int(n) => Ok(rational::rat(*n)),
            RatInput::Str(s) => rational::parse_rat(s, field),
        }
    }
}

fn vec_to_rats(v: &[RatInput], field: &str) -> Result<Vec<Rat>> {
    v.iter().map(|x| x.to_rat(field)).collect()
}

fn rats_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rational::format_rat).collect()
}

/// Parses JSON with field-path diagnostics; failures name the offending
/// field.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Error::input(format!("{what}: {} ({})", e.path(), e.inner())))
}

/// Reads and parses a JSON file.
pub fn load_json<T: DeserializeOwned>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{path}: {e}")))?;
    parse_json(&text, path)
}

/// Serializes a report for output: pretty JSON with a trailing newline.
pub fn to_output<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Root datum
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumDto {
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub simple: Vec<usize>,
    pub coroots: Vec<Vec<i64>>,
    pub gram: Vec<Vec<i64>>,
}

impl RootDatumDto {
    pub fn to_datum(&self) -> Result<RootDatum> {
        let roots = self.roots.iter().map(|r| Character::ints(r)).collect();
        let coroots = self.coroots.iter().map(|r| Cocharacter::ints(r)).collect();
        let gram: Mat = self.gram.iter().map(|r| rational::rat_vec(r)).collect();
        RootDatum::new(self.rank, roots, self.simple.clone(), coroots, gram)
    }
}

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDto {
    pub dim: usize,
    #[serde(default)]
    pub inequalities: Option<Vec<Vec<RatInput>>>,
    #[serde(default)]
    pub generators: Option<Vec<Vec<RatInput>>>,
}

impl ConeDto {
    pub fn to_cone(&self) -> Result<Cone> {
        let ineqs = self
            .inequalities
            .as_ref()
            .map(|rows| {
                rows.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        Ok(Character::new(vec_to_rats(r, &format!("inequalities[{i}]"))?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let gens = self
            .generators
            .as_ref()
            .map(|rows| {
                rows.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        Ok(Cocharacter::new(vec_to_rats(r, &format!("generators[{i}]"))?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        match (ineqs, gens) {
            (Some(i), None) => Cone::from_inequalities(self.dim, &i),
            (None, Some(g)) => Cone::from_generators(self.dim, &g),
            (Some(i), Some(g)) => {
                let a = Cone::from_inequalities(self.dim, &i)?;
                let b = Cone::from_generators(self.dim, &g)?;
                if a != b {
                    return Err(Error::input(
                        "cone: inequalities and generators describe different cones".into(),
                    ));
                }
                Ok(a)
            }
            (None, None) => {
                Err(Error::input("cone: provide inequalities or generators".into()))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeOut {
    pub dim: usize,
    pub inequalities: Vec<Vec<String>>,
    pub generators: Vec<Vec<String>>,
}

impl ConeOut {
    pub fn from_cone(c: &Cone) -> Self {
        ConeOut {
            dim: c.dim,
            inequalities: c.inequalities.iter().map(|q| rats_to_strings(&q.coords)).collect(),
            generators: c.generators.iter().map(|g| rats_to_strings(&g.coords)).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Quasi-states
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDto {
    pub index: usize,
    pub chars: Vec<Vec<RatInput>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDto {
    pub weyl_word: Vec<usize>,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiStateDto {
    pub components: Vec<ComponentDto>,
    #[serde(default)]
    pub index_action: Vec<ActionDto>,
    #[serde(default)]
    pub base: usize,
}

impl QuasiStateDto {
    /// Builds the family over the datum; single-letter action entries define
    /// the generator permutations, longer words are validated against their
    /// composition.
    pub fn to_family(&self, datum: &RootDatum) -> Result<QuasiStateFamily> {
        let n = self.components.len();
        let mut slots: Vec<Option<StateComponent>> = vec![None; n];
        for (i, c) in self.components.iter().enumerate() {
            if c.index >= n {
                return Err(Error::input(format!(
                    "components[{i}].index: {} out of range 0..{n}",
                    c.index
                )));
            }
            let chars = c
                .chars
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    Ok(Character::new(vec_to_rats(
                        r,
                        &format!("components[{i}].chars[{j}]"),
                    )?))
                })
                .collect::<Result<Vec<_>>>()?;
            let comp = StateComponent::new(datum.rank, chars)?;
            if slots[c.index].replace(comp).is_some() {
                return Err(Error::input(format!(
                    "components[{i}].index: duplicate index {}",
                    c.index
                )));
            }
        }
        let components: Vec<StateComponent> = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::input(format!("components: index {i} missing"))))
            .collect::<Result<_>>()?;

        let identity: Vec<usize> = (0..n).collect();
        let mut simple_perms = vec![identity.clone(); datum.simple.len()];
        let mut longer: Vec<&ActionDto> = Vec::new();
        for (i, a) in self.index_action.iter().enumerate() {
            if a.perm.len() != n {
                return Err(Error::input(format!(
                    "index_action[{i}].perm: expected {n} entries, got {}",
                    a.perm.len()
                )));
            }
            match a.weyl_word.as_slice() {
                [s] => {
                    if *s >= simple_perms.len() {
                        return Err(Error::input(format!(
                            "index_action[{i}].weyl_word: no simple reflection {s}"
                        )));
                    }
                    simple_perms[*s] = a.perm.clone();
                }
                [] => {
                    if a.perm != identity {
                        return Err(Error::input(format!(
                            "index_action[{i}]: the empty word must act as the identity"
                        )));
                    }
                }
                _ => longer.push(a),
            }
        }
        let family =
            QuasiStateFamily::new(datum.rank, components, simple_perms, self.base)?;
        for a in longer {
            if family.perm_of_word(&a.weyl_word)? != a.perm {
                return Err(Error::input(format!(
                    "index_action: permutation for word {:?} does not match the composition \
                     of its letters",
                    a.weyl_word
                )));
            }
        }
        Ok(family)
    }
}

// ---------------------------------------------------------------------------
// Optimization problems
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDto {
    pub index: usize,
    #[serde(rename = "A", default)]
    pub a: Vec<Vec<RatInput>>,
    #[serde(rename = "B", default)]
    pub b: Vec<Vec<RatInput>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentificationDto {
    pub index: usize,
    pub weyl_word: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDto {
    #[serde(default)]
    pub gram: Option<Vec<Vec<i64>>>,
    pub pairs: Vec<PairDto>,
    #[serde(default)]
    pub identifications: Vec<IdentificationDto>,
}

impl ProblemDto {
    /// Resolves into (norm, constraint pairs, per-pair identifications).
    pub fn to_parts(
        &self,
        datum: &RootDatum,
    ) -> Result<(Mat, Vec<FamilyPair>, Vec<Option<WeylElement>>)> {
        let gram: Mat = match &self.gram {
            Some(rows) => rows.iter().map(|r| rational::rat_vec(r)).collect(),
            None => datum.gram.clone(),
        };
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (i, p) in self.pairs.iter().enumerate() {
            let a = p
                .a
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    Ok(Character::new(vec_to_rats(r, &format!("pairs[{i}].A[{j}]"))?))
                })
                .collect::<Result<Vec<_>>>()?;
            let b = p
                .b
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    Ok(Character::new(vec_to_rats(r, &format!("pairs[{i}].B[{j}]"))?))
                })
                .collect::<Result<Vec<_>>>()?;
            pairs.push(FamilyPair { index: p.index, a, b });
        }
        let mut idents: Vec<Option<WeylElement>> = vec![None; pairs.len()];
        for (k, ident) in self.identifications.iter().enumerate() {
            let pos = pairs.iter().position(|p| p.index == ident.index).ok_or_else(|| {
                Error::input(format!(
                    "identifications[{k}].index: no pair with index {}",
                    ident.index
                ))
            })?;
            idents[pos] = Some(datum.element_from_word(&ident.weyl_word)?);
        }
        Ok((gram, pairs, idents))
    }
}

// ---------------------------------------------------------------------------
// Instability problems
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationDto {
    pub weights: Vec<Vec<RatInput>>,
    pub labels: Vec<String>,
}

impl RepresentationDto {
    pub fn to_representation(&self) -> Result<Representation> {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, r)| Ok(Character::new(vec_to_rats(r, &format!("weights[{i}]"))?)))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(weights, self.labels.clone())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum TransformDto {
    Matrix(Vec<Vec<RatInput>>),
    Tagged {
        matrix: Vec<Vec<RatInput>>,
        #[serde(default)]
        upsilon_index: Option<usize>,
    },
}

impl TransformDto {
    fn to_transform(&self, field: &str) -> Result<Transform> {
        let (rows, upsilon_index) = match self {
            TransformDto::Matrix(rows) => (rows, None),
            TransformDto::Tagged { matrix, upsilon_index } => (matrix, *upsilon_index),
        };
        let matrix = rows
            .iter()
            .map(|r| vec_to_rats(r, field))
            .collect::<Result<Mat>>()?;
        Ok(Transform { matrix, upsilon_index })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstabilityDto {
    pub representation: RepresentationDto,
    pub vectors: Vec<BTreeMap<String, RatInput>>,
    #[serde(default)]
    pub transforms: Vec<TransformDto>,
    pub mode: String,
    #[serde(default)]
    pub upsilon: Option<QuasiStateDto>,
    #[serde(default)]
    pub assert_optimal_torus_reachable: bool,
}

impl InstabilityDto {
    #[allow(clippy::type_complexity)]
    pub fn to_parts(
        &self,
        datum: &RootDatum,
    ) -> Result<(Representation, Vec<WeightVector>, Vec<Transform>, UpsilonMode, bool)> {
        let rep = self.representation.to_representation()?;
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let coords = m
                    .iter()
                    .map(|(l, r)| {
                        Ok((l.clone(), r.to_rat(&format!("vectors[{i}].{l}"))?))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(WeightVector::new(coords))
            })
            .collect::<Result<Vec<_>>>()?;
        let transforms = self
            .transforms
            .iter()
            .enumerate()
            .map(|(i, t)| t.to_transform(&format!("transforms[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mode = match self.mode.as_str() {
            "null-cone" => {
                if self.upsilon.is_some() {
                    return Err(Error::input(
                        "upsilon: only allowed in state mode".into(),
                    ));
                }
                UpsilonMode::NullCone
            }
            "state" => {
                let dto = self.upsilon.as_ref().ok_or_else(|| {
                    Error::input("upsilon: required in state mode".into())
                })?;
                UpsilonMode::State(dto.to_family(datum)?)
            }
            other => {
                return Err(Error::input(format!(
                    "mode: expected \"null-cone\" or \"state\", got {other:?}"
                )))
            }
        };
        Ok((rep, vectors, transforms, mode, self.assert_optimal_torus_reachable))
    }
}

// ---------------------------------------------------------------------------
// Convex subsets and centre tasks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordDto {
    pub weyl_word: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetDto {
    pub cone: ConeDto,
    #[serde(default)]
    pub stabilizer: Vec<WordDto>,
    #[serde(default)]
    pub saturated: bool,
    #[serde(default)]
    pub finite_type: bool,
}

impl SubsetDto {
    pub fn to_subset(&self, datum: &RootDatum) -> Result<building::ConvexSubset> {
        let cone = self.cone.to_cone()?;
        let stabilizer = self
            .stabilizer
            .iter()
            .map(|w| datum.element_from_word(&w.weyl_word))
            .collect::<Result<Vec<_>>>()?;
        building::ConvexSubset::new(cone, stabilizer, self.saturated, self.finite_type)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyCentreDto {
    pub subset: SubsetDto,
    pub centre: Vec<RatInput>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicTaskDto {
    pub lambda: Vec<RatInput>,
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ViolationOut {
    pub field: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateOut {
    pub valid: bool,
    pub violations: Vec<ViolationOut>,
    pub weyl_order: Option<usize>,
    pub sampled: bool,
}

impl ValidateOut {
    pub fn from_report(r: &ValidationReport) -> Self {
        ValidateOut {
            valid: r.violations.is_empty(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationOut { field: v.field.clone(), message: v.message.clone() })
                .collect(),
            weyl_order: r.weyl_order,
            sampled: r.sampled,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicOut {
    pub nonneg: Vec<usize>,
    pub levi: Vec<usize>,
    pub ru: Vec<usize>,
    pub proper: bool,
}

impl ParabolicOut {
    pub fn from_type(p: &ParabolicType) -> Self {
        ParabolicOut {
            nonneg: p.nonneg.iter().copied().collect(),
            levi: p.levi.iter().copied().collect(),
            ru: p.ru.iter().copied().collect(),
            proper: p.is_proper(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateOut {
    pub b_coeffs: Vec<String>,
    pub a_coeffs: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimumOut {
    pub sign: String,
    pub m_squared: Option<String>,
    pub ray: Option<Vec<String>>,
    pub active_b: Vec<usize>,
    pub active_a: Vec<usize>,
    pub feasible: bool,
    pub certificate: Option<CertificateOut>,
}

impl OptimumOut {
    pub fn from_report(r: &OptimumReport) -> Self {
        OptimumOut {
            sign: r.sign.as_str().to_string(),
            m_squared: r.m_squared.as_ref().map(rational::format_rat),
            ray: r.ray.as_ref().map(|c| rats_to_strings(&c.coords)),
            active_b: r.active_b.clone(),
            active_a: r.active_a.clone(),
            feasible: r.feasible,
            certificate: r.certificate.as_ref().map(|c: &FarkasCertificate| CertificateOut {
                b_coeffs: rats_to_strings(&c.b_coeffs),
                a_coeffs: rats_to_strings(&c.a_coeffs),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessOut {
    pub index: usize,
    pub ray: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexedOptimumOut {
    pub index: usize,
    pub report: OptimumOut,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassOut {
    pub sign: String,
    pub m_squared: Option<String>,
    pub witnesses: Vec<WitnessOut>,
    pub parabolic: Option<ParabolicOut>,
    pub consistent: bool,
    pub diagnostics: Vec<String>,
    pub per_index: Vec<IndexedOptimumOut>,
}

impl ClassOut {
    pub fn from_class(c: &OptimalClass) -> Self {
        ClassOut {
            sign: c.sign.as_str().to_string(),
            m_squared: c.m_squared.as_ref().map(rational::format_rat),
            witnesses: c
                .witnesses
                .iter()
                .map(|w| WitnessOut { index: w.index, ray: rats_to_strings(&w.ray.coords) })
                .collect(),
            parabolic: c.parabolic.as_ref().map(ParabolicOut::from_type),
            consistent: c.consistent,
            diagnostics: c.diagnostics.clone(),
            per_index: c
                .per_index
                .iter()
                .map(|(i, r)| IndexedOptimumOut { index: *i, report: OptimumOut::from_report(r) })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleOut {
    pub sign: String,
    pub ratio_squared: Option<String>,
    pub best: Option<Vec<String>>,
    pub radius: u64,
    pub scanned: u64,
    pub admissible: u64,
}

impl OracleOut {
    pub fn from_report(r: &OracleReport) -> Self {
        OracleOut {
            sign: r.sign.as_str().to_string(),
            ratio_squared: r.m_squared.as_ref().map(rational::format_rat),
            best: r.ray.as_ref().map(|c| rats_to_strings(&c.coords)),
            radius: r.radius,
            scanned: r.scanned,
            admissible: r.admissible,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckOut {
    pub status: String,
    pub detail: Option<String>,
}

impl CrossCheckOut {
    pub fn from_check(c: &CrossCheck) -> Self {
        match c {
            CrossCheck::Agree => CrossCheckOut { status: "AGREE".into(), detail: None },
            CrossCheck::BoundOnly { reason } => CrossCheckOut {
                status: "oracle bound only".into(),
                detail: Some(reason.clone()),
            },
            CrossCheck::Disagree { detail } => {
                CrossCheckOut { status: "DISAGREE".into(), detail: Some(detail.clone()) }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstabilityOut {
    pub class: ClassOut,
    pub search_scope: String,
    pub transform_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreOut {
    pub centre: Vec<i64>,
    pub m_squared: String,
    pub parabolic: ParabolicOut,
    pub fixed_by_stabilizer: bool,
}

impl CentreOut {
    pub fn from_report(r: &building::CentreReport) -> Self {
        CentreOut {
            centre: r
                .centre
                .ray
                .coords
                .iter()
                .map(|x| {
                    i64::try_from(x.to_integer()).expect("primitive centre coordinates fit i64")
                })
                .collect(),
            m_squared: rational::format_rat(&r.m_squared),
            parabolic: ParabolicOut::from_type(&r.parabolic),
            fixed_by_stabilizer: r.fixed_by_stabilizer,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOut {
    pub passed: bool,
    pub checks: Vec<CheckOut>,
    pub mu: Option<String>,
}

impl VerifyOut {
    pub fn from_verification(v: &building::CentreVerification) -> Self {
        VerifyOut {
            passed: v.passed,
            checks: v
                .checks
                .iter()
                .map(|c| CheckOut {
                    name: c.name.to_string(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
            mu: v.mu.as_ref().map(rational::format_rat),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicTaskOut {
    pub lambda: Vec<String>,
    pub parabolic: ParabolicOut,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::rat;

    #[test]
    fn datum_round_trip() {
        let text = r#"{
            "rank": 1,
            "roots": [[2], [-2]],
            "simple": [0],
            "coroots": [[1], [-1]],
            "gram": [[1]]
        }"#;
        let dto: RootDatumDto = parse_json(text, "datum").unwrap();
        let d = dto.to_datum().unwrap();
        assert_eq!(d.rank, 1);
        assert_eq!(d.roots.len(), 2);
    }

    #[test]
    fn unknown_field_is_named() {
        let text = r#"{"rank": 1, "roots": [], "simple": [], "coroots": [], "gram": [], "extra": 1}"#;
        let err = parse_json::<RootDatumDto>(text, "datum").unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn bad_rational_is_named() {
        let text = r#"{"dim": 1, "generators": [["x"]]}"#;
        let dto: ConeDto = parse_json(text, "cone").unwrap();
        let err = dto.to_cone().unwrap_err();
        assert!(err.to_string().contains("generators[0]"), "{err}");
    }

    #[test]
    fn cone_accepts_either_description() {
        let by_gens: ConeDto =
            parse_json(r#"{"dim": 2, "generators": [[1, 0]]}"#, "cone").unwrap();
        let by_ineqs: ConeDto = parse_json(
            r#"{"dim": 2, "inequalities": [["1", "0"], ["-1", "0"], ["0", "1"]]}"#,
            "cone",
        )
        .unwrap();
        let g = by_gens.to_cone().unwrap();
        let i = by_ineqs.to_cone().unwrap();
        assert_eq!(g.generators, vec![Cocharacter::ints(&[1, 0])]);
        assert_eq!(i.generators, vec![Cocharacter::ints(&[0, 1])]);
        let both: ConeDto = parse_json(
            r#"{"dim": 1, "inequalities": [[1]], "generators": [[-1]]}"#,
            "cone",
        )
        .unwrap();
        let err = both.to_cone().unwrap_err();
        assert!(err.to_string().contains("different cones"), "{err}");
    }

    #[test]
    fn cone_output_reparses() {
        let c = Cone::from_generators(
            3,
            &[Cocharacter::ints(&[1, 0, -1]), Cocharacter::ints(&[0, 1, -1])],
        )
        .unwrap();
        let out = to_output(&ConeOut::from_cone(&c));
        let dto: ConeDto = parse_json(&out, "cone").unwrap();
        assert_eq!(dto.to_cone().unwrap(), c);
    }

    #[test]
    fn quasi_state_with_action() {
        let d = presets::a2_gl3();
        let text = r#"{
            "components": [
                {"index": 0, "chars": [[1, 0, 0]]},
                {"index": 1, "chars": [[0, 1, 0]]}
            ],
            "index_action": [
                {"weyl_word": [0], "perm": [1, 0]},
                {"weyl_word": [1], "perm": [0, 1]},
                {"weyl_word": [0, 0], "perm": [0, 1]}
            ],
            "base": 0
        }"#;
        let dto: QuasiStateDto = parse_json(text, "upsilon").unwrap();
        let f = dto.to_family(&d).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.perm_of_word(&[0]).unwrap(), vec![1, 0]);

        let bad = r#"{
            "components": [{"index": 0, "chars": []}, {"index": 1, "chars": []}],
            "index_action": [
                {"weyl_word": [0], "perm": [1, 0]},
                {"weyl_word": [0, 0], "perm": [1, 0]}
            ],
            "base": 0
        }"#;
        let dto: QuasiStateDto = parse_json(bad, "upsilon").unwrap();
        let err = dto.to_family(&d).unwrap_err();
        assert!(err.to_string().contains("composition"), "{err}");
    }

    #[test]
    fn problem_parts() {
        let d = presets::a2_gl3();
        let text = r#"{
            "pairs": [
                {"index": 0, "A": [[1, 0, 0]], "B": [["2", 1, -3]]},
                {"index": 1, "B": [[0, 1, 0]]}
            ],
            "identifications": [{"index": 1, "weyl_word": [0]}]
        }"#;
        let dto: ProblemDto = parse_json(text, "problem").unwrap();
        let (gram, pairs, idents) = dto.to_parts(&d).unwrap();
        assert_eq!(gram, d.gram);
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].b[0], Character::ints(&[2, 1, -3]));
        assert!(pairs[1].a.is_empty());
        assert!(idents[0].is_none());
        assert_eq!(idents[1].as_ref().unwrap().word, vec![0]);
    }

    #[test]
    fn instability_modes() {
        let d = presets::a1_adjoint();
        let text = r#"{
            "representation": {"weights": [[2], [0], [-2]], "labels": ["e", "h", "f"]},
            "vectors": [{"e": 1}],
            "mode": "null-cone"
        }"#;
        let dto: InstabilityDto = parse_json(text, "problem").unwrap();
        let (rep, vectors, transforms, mode, exact) = dto.to_parts(&d).unwrap();
        assert_eq!(rep.dim(), 3);
        assert_eq!(vectors.len(), 1);
        assert!(transforms.is_empty());
        assert!(matches!(mode, UpsilonMode::NullCone));
        assert!(!exact);

        let bad = r#"{
            "representation": {"weights": [[2]], "labels": ["e"]},
            "vectors": [],
            "mode": "state"
        }"#;
        let dto: InstabilityDto = parse_json(bad, "problem").unwrap();
        let err = dto.to_parts(&d).unwrap_err();
        assert!(err.to_string().contains("upsilon"), "{err}");
    }

    #[test]
    fn subset_and_reports() {
        let d = presets::a2_gl3();
        let text = r#"{
            "cone": {"dim": 3, "generators": [[1, 0, -1], [0, 1, -1]]},
            "stabilizer": [{"weyl_word": []}, {"weyl_word": [0]}],
            "saturated": true,
            "finite_type": true
        }"#;
        let dto: SubsetDto = parse_json(text, "subset").unwrap();
        let s = dto.to_subset(&d).unwrap();
        assert_eq!(s.stabilizer.len(), 2);
        let report = building::centre_in_apartment(&d, &s).unwrap();
        let out = CentreOut::from_report(&report);
        assert_eq!(out.centre, vec![1, 1, -2]);
        assert_eq!(out.m_squared, "6");
        let text = to_output(&out);
        assert!(text.contains("\"m_squared\": \"6\""), "{text}");
    }

    #[test]
    fn optimum_serialization_shapes() {
        let r = crate::optimize::torus_max(
            &[],
            &[Character::ints(&[2])],
            &vec![vec![rat(1)]],
        )
        .unwrap();
        let out = OptimumOut::from_report(&r);
        assert_eq!(out.sign, "positive");
        assert_eq!(out.m_squared.as_deref(), Some("4"));
        assert_eq!(out.ray, Some(vec!["1".to_string()]));
    }
}
