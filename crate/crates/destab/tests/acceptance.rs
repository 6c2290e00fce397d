//! Acceptance suite: nine gate checks covering the null-cone membership
//! example, solver/oracle equivalence on seeded instances, optimum
//! uniqueness, Weyl-invariance identities, cone and state round-trips,
//! group-averaging fixedness, the centre pipeline, the classical null-cone
//! optima, and family consistency.
//!
//! Every check prints exactly one `PASS`/`FAIL` line (visible under
//! `--nocapture`) and enforces its wall-clock budget.  All comparisons are
//! exact; there are no tolerances anywhere in this file.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use destab::cones::primitive_ray;
use destab::instability::{self, Representation, UpsilonMode, WeightVector};
use destab::matrix::identity;
use destab::optimize::{self, FamilyPair, OptimumSign};
use destab::oracle;
use destab::rational::{rat, Rat};
use destab::rootdatum::pairing;
use destab::states::{state_from_cone, state_from_parabolic};
use destab::{
    building, presets, Character, Cocharacter, Cone, ExtendedValue, QuasiStateFamily, RootDatum,
    StateComponent, WeylElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Runs a check body, prints its single verdict line, and enforces the
/// budget.  The body returns a short success detail or a failure reason.
fn gate(name: &str, budget: Duration, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) if elapsed <= budget => {
            println!("acceptance {name}: PASS ({detail}; {}ms)", elapsed.as_millis());
        }
        Ok(detail) => {
            println!(
                "acceptance {name}: FAIL (over budget: {}ms > {}ms; {detail})",
                elapsed.as_millis(),
                budget.as_millis()
            );
            panic!("{name}: exceeded {budget:?} (took {elapsed:?})");
        }
        Err(why) => {
            println!("acceptance {name}: FAIL ({why})");
            panic!("{name}: {why}");
        }
    }
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xDE57A8 ^ seed)
}

fn random_char(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Character {
    Character::ints(&(0..dim).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

fn random_cochar(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Cocharacter {
    Cocharacter::ints(&(0..dim).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

/// Closure of `gens` (plus the identity) under composition, deduplicated by
/// the action matrix.
fn subgroup_closure(gens: &[WeylElement], dim: usize) -> Vec<WeylElement> {
    let mut elems = vec![WeylElement::identity(dim)];
    for g in gens {
        if !elems.iter().any(|u| u.y_matrix == g.y_matrix) {
            elems.push(g.clone());
        }
    }
    loop {
        let snapshot = elems.clone();
        let before = elems.len();
        for a in &snapshot {
            for b in &snapshot {
                let ab = a.compose(b);
                if !elems.iter().any(|u| u.y_matrix == ab.y_matrix) {
                    elems.push(ab);
                }
            }
        }
        if elems.len() == before {
            return elems;
        }
    }
}

fn random_subgroup(rng: &mut ChaCha8Rng, datum: &RootDatum) -> Vec<WeylElement> {
    let gens: Vec<WeylElement> = (0..rng.gen_range(1..=2))
        .map(|_| {
            let len = rng.gen_range(0..=3);
            let word: Vec<usize> =
                (0..len).map(|_| rng.gen_range(0..datum.simple.len())).collect();
            datum.element_from_word(&word).expect("valid word")
        })
        .collect();
    subgroup_closure(&gens, datum.rank)
}

fn gram_norm_sq(gram: &[Vec<Rat>], v: &Cocharacter) -> Rat {
    let mut total = rat(0);
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            total += &v.coords[i] * g * &v.coords[j];
        }
    }
    total
}

// ---------------------------------------------------------------------------
// 1. Membership and limits for the rank-two example vector.
// ---------------------------------------------------------------------------

#[test]
fn check_1_membership_and_limits() {
    gate("1 membership-and-limits", Duration::from_secs(1), || {
        let rep = presets::a2_gl3_natural();
        let v = WeightVector::new(BTreeMap::from([
            ("e1".to_string(), rat(1)),
            ("e2".to_string(), rat(1)),
        ]));
        let cone = instability::destab_cone(&rep, &[v.clone()]).map_err(|e| e.to_string())?;
        let lam = Cocharacter::ints(&[2, 1, -3]);
        let mu = Cocharacter::ints(&[3, -1, -2]);
        if !cone.contains(&lam).map_err(|e| e.to_string())? {
            return Err("destabilizing direction (2,1,-3) not in the cone".into());
        }
        if cone.contains(&mu).map_err(|e| e.to_string())? {
            return Err("(3,-1,-2) wrongly admitted to the cone".into());
        }
        let lim_lam = instability::limit(&rep, &v, &lam).map_err(|e| e.to_string())?;
        if lim_lam != Some(WeightVector::zero()) {
            return Err(format!("limit along (2,1,-3) is {lim_lam:?}, expected zero"));
        }
        let lim_mu = instability::limit(&rep, &v, &mu).map_err(|e| e.to_string())?;
        if lim_mu.is_some() {
            return Err(format!("limit along (3,-1,-2) is {lim_mu:?}, expected none"));
        }
        Ok("one direction destabilizes e1+e2, the other does not".into())
    });
}

// ---------------------------------------------------------------------------
// 2 & 3. Seeded solver-versus-oracle instances, shared generator.
// ---------------------------------------------------------------------------

const INSTANCES: u64 = 200;
const ORACLE_RADIUS: u64 = 8;
const ORACLE_BUDGET: u64 = 1_000_000;

fn random_instance(seed: u64) -> (usize, Vec<Character>, Vec<Character>) {
    let mut rng = seeded(seed);
    let dim = 1 + (seed as usize % 4);
    let na = rng.gen_range(0..=6);
    let nb = rng.gen_range(0..=6);
    let a = (0..na).map(|_| random_char(&mut rng, dim, -3, 3)).collect();
    // Half the stream draws nonzero objectives from the nonnegative part of
    // the entry range so feasible positive optima appear often enough to
    // exercise the exact-agreement branch.
    let b = if seed % 2 == 0 {
        (0..nb).map(|_| random_char(&mut rng, dim, -3, 3)).collect()
    } else {
        (0..nb.max(1))
            .map(|_| loop {
                let c = random_char(&mut rng, dim, 0, 3);
                if !c.is_zero() {
                    break c;
                }
            })
            .collect()
    };
    (dim, a, b)
}

#[test]
fn check_2_solver_matches_oracle() {
    gate("2 solver-vs-oracle", Duration::from_secs(60), || {
        let mut exact = 0u64;
        for seed in 0..INSTANCES {
            let (dim, a, b) = random_instance(seed);
            let gram = identity(dim);
            let solver = optimize::torus_max(&a, &b, &gram).map_err(|e| e.to_string())?;
            let lattice = oracle::lattice_max(&a, &b, &gram, ORACLE_RADIUS, ORACLE_BUDGET)
                .map_err(|e| e.to_string())?;
            let check = oracle::cross_check(&solver, &lattice, &gram);
            if check.is_disagreement() {
                return Err(format!("seed {seed}: solver and oracle disagree: {check:?}"));
            }
            if solver.sign == OptimumSign::Positive {
                let ray = solver.ray.as_ref().expect("positive optimum carries a ray");
                if gram_norm_sq(&gram, ray) <= rat((ORACLE_RADIUS * ORACLE_RADIUS) as i64) {
                    if lattice.sign != OptimumSign::Positive
                        || lattice.m_squared != solver.m_squared
                    {
                        return Err(format!(
                            "seed {seed}: in-ball optimum not reproduced: solver {:?}, oracle {:?}",
                            solver.m_squared, lattice.m_squared
                        ));
                    }
                    exact += 1;
                }
            }
        }
        if exact < 40 {
            return Err(format!(
                "only {exact} of {INSTANCES} instances exercised the exact-agreement branch"
            ));
        }
        Ok(format!("{INSTANCES} instances, {exact} exact in-ball agreements, 0 disagreements"))
    });
}

#[test]
fn check_3_optimum_unique_and_scale_invariant() {
    gate("3 uniqueness-and-scaling", Duration::from_secs(60), || {
        let mut positives = 0u64;
        for seed in 0..INSTANCES {
            let (dim, a, b) = random_instance(seed);
            let gram = identity(dim);
            let solver = optimize::torus_max(&a, &b, &gram).map_err(|e| e.to_string())?;
            if solver.sign != OptimumSign::Positive {
                continue;
            }
            positives += 1;
            let ray = solver.ray.clone().expect("positive optimum carries a ray");
            if primitive_ray(&ray).map_err(|e| e.to_string())? != ray {
                return Err(format!("seed {seed}: returned ray {ray:?} is not primitive"));
            }
            // Identical primitive ray under reversed constraint order.
            let ar: Vec<Character> = a.iter().rev().cloned().collect();
            let br: Vec<Character> = b.iter().rev().cloned().collect();
            let reversed = optimize::torus_max(&ar, &br, &gram).map_err(|e| e.to_string())?;
            if reversed.ray.as_ref() != Some(&ray) || reversed.m_squared != solver.m_squared {
                return Err(format!(
                    "seed {seed}: reversed order changed the optimum: {:?} vs {:?}",
                    reversed.ray, ray
                ));
            }
            // Doubling the ray leaves the value ratio unchanged.
            let doubled =
                Cocharacter::new(ray.coords.iter().map(|c| c * rat(2)).collect::<Vec<_>>());
            let comp = StateComponent::new(dim, b.clone()).map_err(|e| e.to_string())?;
            let mu2 = match comp.mu(&doubled).map_err(|e| e.to_string())? {
                ExtendedValue::Finite(v) => v,
                other => return Err(format!("seed {seed}: unexpected value {other:?}")),
            };
            let m2 = solver.m_squared.clone().expect("positive optimum carries a value");
            if &mu2 * &mu2 != m2 * gram_norm_sq(&gram, &doubled) {
                return Err(format!("seed {seed}: scaling broke the value ratio"));
            }
        }
        if positives < 40 {
            return Err(format!("only {positives} positive instances; sample too thin"));
        }
        Ok(format!("{positives} positive optima unique, primitive, scale-invariant"))
    });
}

// ---------------------------------------------------------------------------
// 4. Weyl-invariance identities.
// ---------------------------------------------------------------------------

#[test]
fn check_4_weyl_invariance() {
    gate("4 weyl-invariance", Duration::from_secs(10), || {
        let data = [presets::a2_gl3(), presets::a1xa1()];
        for seed in 0..500u64 {
            let mut rng = seeded(1_000_000 + seed);
            let d = &data[(seed % 2) as usize];
            let len = rng.gen_range(0..=4);
            let word: Vec<usize> =
                (0..len).map(|_| rng.gen_range(0..d.simple.len())).collect();
            let w = d.element_from_word(&word).map_err(|e| e.to_string())?;
            let lam = random_cochar(&mut rng, d.rank, -4, 4);
            let beta = random_char(&mut rng, d.rank, -4, 4);
            let p0 = pairing(&lam, &beta).map_err(|e| e.to_string())?;
            let p1 = pairing(&w.act(&lam), &w.act_char(&beta)).map_err(|e| e.to_string())?;
            if p0 != p1 {
                return Err(format!("seed {seed}: pairing moved under the Weyl action"));
            }
            let n0 = d.norm_sq(&lam).map_err(|e| e.to_string())?;
            let n1 = d.norm_sq(&w.act(&lam)).map_err(|e| e.to_string())?;
            if n0 != n1 {
                return Err(format!("seed {seed}: norm moved under the Weyl action"));
            }
            let chars: Vec<Character> =
                (0..rng.gen_range(1..=3)).map(|_| random_char(&mut rng, d.rank, -4, 4)).collect();
            let comp = StateComponent::new(d.rank, chars).map_err(|e| e.to_string())?;
            let m0 = comp.mu(&lam).map_err(|e| e.to_string())?;
            let m1 = comp.transform(&w).mu(&w.act(&lam)).map_err(|e| e.to_string())?;
            if m0 != m1 {
                return Err(format!("seed {seed}: state value moved under the transform"));
            }
        }
        Ok("500 seeded triples: pairing, norm, and state values invariant".into())
    });
}

// ---------------------------------------------------------------------------
// 5. Cone and state round-trips.
// ---------------------------------------------------------------------------

#[test]
fn check_5_cone_round_trips() {
    gate("5 cone-round-trips", Duration::from_secs(60), || {
        for seed in 0..50u64 {
            let mut rng = seeded(2_000_000 + seed);
            let dim = 1 + (seed as usize % 4);
            let rows = rng.gen_range(1..=5);
            let cone = if seed % 2 == 0 {
                let gens: Vec<Cocharacter> =
                    (0..rows).map(|_| random_cochar(&mut rng, dim, -3, 3)).collect();
                Cone::from_generators(dim, &gens)
            } else {
                let ineqs: Vec<Character> =
                    (0..rows).map(|_| random_char(&mut rng, dim, -3, 3)).collect();
                Cone::from_inequalities(dim, &ineqs)
            }
            .map_err(|e| e.to_string())?;

            let via_gens =
                Cone::from_generators(dim, &cone.generators).map_err(|e| e.to_string())?;
            let via_ineqs =
                Cone::from_inequalities(dim, &cone.inequalities).map_err(|e| e.to_string())?;
            if via_gens != cone || via_ineqs != cone {
                return Err(format!("seed {seed}: double-description round trip changed the cone"));
            }
            if !cone.agrees_on_integer_box(&via_gens, 4).map_err(|e| e.to_string())?
                || !cone.agrees_on_integer_box(&via_ineqs, 4).map_err(|e| e.to_string())?
            {
                return Err(format!("seed {seed}: membership differs on the integer box"));
            }
            let state = state_from_cone(&cone, &[]).map_err(|e| e.to_string())?;
            if state.zero_set(0).map_err(|e| e.to_string())? != cone {
                return Err(format!("seed {seed}: state zero set is not the cone"));
            }
        }
        Ok("50 seeded cones: descriptions, box membership, and zero sets agree".into())
    });
}

// ---------------------------------------------------------------------------
// 6. Group-averaging fixedness.
// ---------------------------------------------------------------------------

#[test]
fn check_6_averaging_fixedness() {
    gate("6 averaging-fixedness", Duration::from_secs(10), || {
        let d = presets::a2_gl3();
        let g = d.weyl_group(100).map_err(|e| e.to_string())?;
        for seed in 0..60u64 {
            let mut rng = seeded(3_000_000 + seed);
            let h = random_subgroup(&mut rng, &d);
            let family = if seed % 2 == 0 {
                let chars: Vec<Character> =
                    (0..rng.gen_range(1..=3)).map(|_| random_char(&mut rng, d.rank, -3, 3)).collect();
                QuasiStateFamily::single(
                    StateComponent::new(d.rank, chars).map_err(|e| e.to_string())?,
                )
            } else {
                let p = loop {
                    let lam = random_cochar(&mut rng, d.rank, -2, 2);
                    let p = d.parabolic_type(&lam).map_err(|e| e.to_string())?;
                    if p.is_proper() {
                        break p;
                    }
                };
                state_from_parabolic(&d, &g, &p).map_err(|e| e.to_string())?
            };
            let avg =
                QuasiStateFamily::average_over_group(&h, &family).map_err(|e| e.to_string())?;
            for w in &h {
                if avg.pushforward(w).map_err(|e| e.to_string())? != avg {
                    return Err(format!(
                        "seed {seed}: averaged family moved by element with word {:?}",
                        w.word
                    ));
                }
            }
        }
        Ok("60 seeded subgroup/family pairs: averages fixed by every element".into())
    });
}

// ---------------------------------------------------------------------------
// 7. Centre pipeline on the invariant wedge.
// ---------------------------------------------------------------------------

#[test]
fn check_7_centre_pipeline() {
    gate("7 centre-pipeline", Duration::from_secs(1), || {
        let d = presets::a2_gl3();
        let cone = Cone::from_generators(
            3,
            &[Cocharacter::ints(&[1, 0, -1]), Cocharacter::ints(&[0, 1, -1])],
        )
        .map_err(|e| e.to_string())?;
        let swap = d.simple_reflection(0).map_err(|e| e.to_string())?;
        let subset = building::ConvexSubset::new(
            cone,
            vec![WeylElement::identity(3), swap],
            true,
            true,
        )
        .map_err(|e| e.to_string())?;
        let report = building::centre_in_apartment(&d, &subset).map_err(|e| e.to_string())?;
        let expected =
            building::zeta(&Cocharacter::ints(&[1, 1, -2])).map_err(|e| e.to_string())?;
        if report.centre != expected {
            return Err(format!("centre is {:?}, expected the ray (1,1,-2)", report.centre));
        }
        if !report.fixed_by_stabilizer {
            return Err("centre is not fixed by the stabilizer".into());
        }
        let group = d.weyl_group(100).map_err(|e| e.to_string())?;
        let v = building::verify_centre(&d, &group, &subset, &report.centre)
            .map_err(|e| e.to_string())?;
        if !v.passed {
            return Err(format!("verification failed: {:?}", v.checks));
        }
        Ok("centre ray (1,1,-2), stabilizer-fixed, verification passes".into())
    });
}

// ---------------------------------------------------------------------------
// 8. Classical null-cone optima, oracle-confirmed.
// ---------------------------------------------------------------------------

fn null_cone_class(
    datum: &RootDatum,
    rep: &Representation,
    label: &str,
) -> Result<instability::InstabilityReport, String> {
    let x = WeightVector::new(BTreeMap::from([(label.to_string(), rat(1))]));
    instability::optimal_instability(datum, rep, &[x], &[], &UpsilonMode::NullCone, false)
        .map_err(|e| e.to_string())
}

#[test]
fn check_8_classical_null_cone_optima() {
    gate("8 null-cone-optima", Duration::from_secs(5), || {
        let d = presets::a1_adjoint();
        let cases = [
            (presets::a1_adjoint_rep(), "e", Some(rat(4))),
            (presets::a1_sym4(), "x4", Some(rat(16))),
            (presets::a1_sym4(), "x2y2", None),
        ];
        for (rep, label, expected) in cases {
            let report = null_cone_class(&d, &rep, label)?;
            if report.class.m_squared != expected {
                return Err(format!(
                    "{label}: value {:?}, expected {expected:?}",
                    report.class.m_squared
                ));
            }
            if expected.is_some() {
                let p = report.class.parabolic.as_ref().ok_or("missing parabolic")?;
                if !p.is_proper() || !p.levi.is_empty() {
                    return Err(format!("{label}: optimal parabolic {p} is not the Borel"));
                }
            } else if report.class.sign != OptimumSign::Zero {
                return Err(format!("{label}: expected a zero optimum, got {:?}", report.class.sign));
            }
            // Independent confirmation at oracle radius 10.
            for (pair, (_, solved)) in report.pairs.iter().zip(&report.class.per_index) {
                let o = oracle::lattice_max(&pair.a, &pair.b, &d.gram, 10, 10_000)
                    .map_err(|e| e.to_string())?;
                let check = oracle::cross_check(solved, &o, &d.gram);
                if !matches!(check, oracle::CrossCheck::Agree) {
                    return Err(format!("{label}: oracle does not confirm: {check:?}"));
                }
            }
        }
        Ok("nilpotent 4, quartic 16, balanced quartic zero; oracle agrees".into())
    });
}

// ---------------------------------------------------------------------------
// 9. Family consistency for averaged constructions.
// ---------------------------------------------------------------------------

#[test]
fn check_9_family_consistency() {
    gate("9 family-consistency", Duration::from_secs(60), || {
        let d = presets::a2_gl3();
        let mut positives = 0u64;
        for seed in 0..60u64 {
            let mut rng = seeded(4_000_000 + seed);
            let h = random_subgroup(&mut rng, &d);
            let base_chars: Vec<Character> =
                (0..rng.gen_range(1..=2)).map(|_| random_char(&mut rng, d.rank, -3, 3)).collect();
            let base = QuasiStateFamily::single(
                StateComponent::new(d.rank, base_chars).map_err(|e| e.to_string())?,
            );
            let averaged =
                QuasiStateFamily::average_over_group(&h, &base).map_err(|e| e.to_string())?;
            let objective: Vec<Character> =
                averaged.base_component().chars.iter().cloned().collect();
            let constraints: Vec<Character> =
                (0..rng.gen_range(0..=3)).map(|_| random_char(&mut rng, d.rank, -3, 3)).collect();

            let mut pairs = Vec::new();
            let mut idents = Vec::new();
            for (i, w) in h.iter().enumerate() {
                pairs.push(FamilyPair {
                    index: i,
                    a: constraints.iter().map(|c| w.act_char(c)).collect(),
                    b: objective.iter().map(|c| w.act_char(c)).collect(),
                });
                idents.push(Some(w.clone()));
            }
            let class = optimize::family_max(&d, &pairs, &idents).map_err(|e| e.to_string())?;
            if !class.consistent {
                return Err(format!(
                    "seed {seed}: inconsistent parabolics: {:?}",
                    class.diagnostics
                ));
            }
            let signs: Vec<OptimumSign> =
                class.per_index.iter().map(|(_, r)| r.sign).collect();
            if signs.iter().any(|s| *s != signs[0]) {
                return Err(format!("seed {seed}: per-index signs differ: {signs:?}"));
            }
            if class.sign == OptimumSign::Positive {
                positives += 1;
                if class.parabolic.is_none() || class.witnesses.len() != h.len() {
                    return Err(format!(
                        "seed {seed}: expected one witness per frame with a common parabolic"
                    ));
                }
                let m2 = class.m_squared.clone().expect("positive class carries a value");
                for (_, r) in &class.per_index {
                    if r.m_squared.as_ref() != Some(&m2) {
                        return Err(format!("seed {seed}: per-index optima differ"));
                    }
                }
            }
        }
        if positives < 25 {
            return Err(format!("only {positives} positive instances; sample too thin"));
        }
        Ok(format!(
            "60 averaged families consistent; {positives} positive with a single parabolic"
        ))
    });
}
