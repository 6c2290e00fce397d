//! Ready-made root data and representations used in docs, tests, and benches.

use crate::instability::Representation;
use crate::matrix::identity;
use crate::rational::rat_vec;
use crate::rootdatum::{Character, Cocharacter, RootDatum};

/// Type A2 presented GL3-style on the ambient lattice `Z^3`: the roots are the
/// coordinate differences `ε_i − ε_j`, the Gram form is the identity.  The
/// centre direction `(1,1,1)` pairs to zero with every root.
pub fn a2_gl3() -> RootDatum {
    let roots = vec![
        Character::ints(&[1, -1, 0]),
        Character::ints(&[0, 1, -1]),
        Character::ints(&[1, 0, -1]),
        Character::ints(&[-1, 1, 0]),
        Character::ints(&[0, -1, 1]),
        Character::ints(&[-1, 0, 1]),
    ];
    let coroots = roots.iter().map(|r| Cocharacter::new(r.coords.clone())).collect();
    RootDatum::new(3, roots, vec![0, 1], coroots, identity(3)).expect("valid preset")
}

/// The adjoint rank-one datum: one positive root of weight two on `Z`.
pub fn a1_adjoint() -> RootDatum {
    RootDatum::new(
        1,
        vec![Character::ints(&[2]), Character::ints(&[-2])],
        vec![0],
        vec![Cocharacter::ints(&[1]), Cocharacter::ints(&[-1])],
        identity(1),
    )
    .expect("valid preset")
}

/// Two commuting copies of the rank-one datum on `Z^2`.
pub fn a1xa1() -> RootDatum {
    RootDatum::new(
        2,
        vec![
            Character::ints(&[2, 0]),
            Character::ints(&[0, 2]),
            Character::ints(&[-2, 0]),
            Character::ints(&[0, -2]),
        ],
        vec![0, 1],
        vec![
            Cocharacter::ints(&[1, 0]),
            Cocharacter::ints(&[0, 1]),
            Cocharacter::ints(&[-1, 0]),
            Cocharacter::ints(&[0, -1]),
        ],
        identity(2),
    )
    .expect("valid preset")
}

/// Type A2 on its own coroot lattice `Z^2` (semisimple presentation): the
/// cocharacter lattice is spanned by the simple coroots, characters are
/// written in fundamental-weight coordinates, and the Gram form is the
/// symmetrized Cartan matrix.  Sum-zero constraints of the GL3 picture are
/// built into the lattice here.
pub fn sl3_rank2() -> RootDatum {
    let roots = vec![
        Character::ints(&[2, -1]),
        Character::ints(&[-1, 2]),
        Character::ints(&[1, 1]),
        Character::ints(&[-2, 1]),
        Character::ints(&[1, -2]),
        Character::ints(&[-1, -1]),
    ];
    let coroots = vec![
        Cocharacter::ints(&[1, 0]),
        Cocharacter::ints(&[0, 1]),
        Cocharacter::ints(&[1, 1]),
        Cocharacter::ints(&[-1, 0]),
        Cocharacter::ints(&[0, -1]),
        Cocharacter::ints(&[-1, -1]),
    ];
    let gram = vec![rat_vec(&[2, -1]), rat_vec(&[-1, 2])];
    RootDatum::new(2, roots, vec![0, 1], coroots, gram).expect("valid preset")
}

/// The natural three-dimensional representation of [`a2_gl3`]: weights
/// `ε_1, ε_2, ε_3` with labels `e1, e2, e3`.
pub fn a2_gl3_natural() -> Representation {
    Representation::new(
        vec![Character::ints(&[1, 0, 0]), Character::ints(&[0, 1, 0]), Character::ints(&[0, 0, 1])],
        vec!["e1".into(), "e2".into(), "e3".into()],
    )
    .expect("valid preset")
}

/// The natural representation of [`sl3_rank2`] in fundamental-weight
/// coordinates; the three weights sum to zero.
pub fn sl3_rank2_natural() -> Representation {
    Representation::new(
        vec![Character::ints(&[1, 0]), Character::ints(&[-1, 1]), Character::ints(&[0, -1])],
        vec!["e1".into(), "e2".into(), "e3".into()],
    )
    .expect("valid preset")
}

/// The adjoint representation of [`a1_adjoint`]: weights `2, 0, −2`.
pub fn a1_adjoint_rep() -> Representation {
    Representation::new(
        vec![Character::ints(&[2]), Character::ints(&[0]), Character::ints(&[-2])],
        vec!["e".into(), "h".into(), "f".into()],
    )
    .expect("valid preset")
}

/// Binary quartics under [`a1_adjoint`]: weights `4, 2, 0, −2, −4`.
pub fn a1_sym4() -> Representation {
    Representation::new(
        vec![
            Character::ints(&[4]),
            Character::ints(&[2]),
            Character::ints(&[0]),
            Character::ints(&[-2]),
            Character::ints(&[-4]),
        ],
        vec!["x4".into(), "x3y".into(), "x2y2".into(), "xy3".into(), "y4".into()],
    )
    .expect("valid preset")
}
