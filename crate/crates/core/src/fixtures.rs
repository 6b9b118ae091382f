//! Built-in example families. The JSON files under `fixtures/` at the
//! workspace root are generated from these constructors.

use std::f64::consts::FRAC_PI_4;

use crate::family::{FamilyMember, OneParamFamily};
use crate::linalg::{Matrix, Vector};

fn v(xs: &[f64]) -> Vector {
    Vector::from_slice(xs)
}

fn m2(rows: [[f64; 2]; 2]) -> Matrix {
    Matrix::from_rows(&rows).unwrap()
}

fn r90() -> Matrix {
    m2([[0.0, -1.0], [1.0, 0.0]])
}

/// Member `t·ratio·R (x − p) + p`: a similarity fixing `p` for every t.
fn similarity_about(l: Matrix, p: Vector) -> FamilyMember {
    FamilyMember::new(l, -l.mul_vec(&p), p)
}

fn family(name: &str, members: Vec<FamilyMember>) -> OneParamFamily {
    OneParamFamily::new(name, members).expect("fixture is valid")
}

/// `{tQx, t(0.4Qx − 0.4/√2 (1,1)) + (1,0)}`, Q the rotation by π/4.
pub fn example_1_1() -> OneParamFamily {
    rotation_pair("example-1.1", FRAC_PI_4, 0.4)
}

/// `{t R_φ x, t(ratio·R_φ x − ratio·R_φ(1,0)) + (1,0)}`; [`example_1_1`] is φ = π/4, ratio 0.4.
pub fn rotation_pair(name: &str, phi: f64, ratio: f64) -> OneParamFamily {
    family(
        name,
        vec![
            FamilyMember::new(Matrix::rotation_scaling(1.0, phi), v(&[0.0, 0.0]), v(&[0.0, 0.0])),
            similarity_about(Matrix::rotation_scaling(ratio, phi), v(&[1.0, 0.0])),
        ],
    )
}

/// `{−tx + t + 1, −tx − t − 1}` on the line.
pub fn example_4_6() -> OneParamFamily {
    family(
        "example-4.6",
        vec![
            FamilyMember::new(Matrix::scalar(1, -1.0), v(&[1.0]), v(&[1.0])),
            FamilyMember::new(Matrix::scalar(1, -1.0), v(&[-1.0]), v(&[-1.0])),
        ],
    )
}

/// `{t(x, y+1) + (1,0), t(y+1, −x+2y+2) + (1,0)}`.
pub fn example_5_8() -> OneParamFamily {
    family(
        "example-5.8",
        vec![
            FamilyMember::new(Matrix::identity(2), v(&[0.0, 1.0]), v(&[1.0, 0.0])),
            FamilyMember::new(m2([[0.0, 1.0], [-1.0, 2.0]]), v(&[1.0, 2.0]), v(&[1.0, 0.0])),
        ],
    )
}

/// `{t·diag(1, 1/10)x, t/10·x + (1 − t/10)(1,1)}`.
pub fn example_6_3() -> OneParamFamily {
    family(
        "example-6.3",
        vec![
            FamilyMember::new(Matrix::diag(&[1.0, 0.1]), v(&[0.0, 0.0]), v(&[0.0, 0.0])),
            FamilyMember::new(Matrix::scalar(2, 0.1), v(&[-0.1, -0.1]), v(&[1.0, 1.0])),
        ],
    )
}

/// `{τz, τz + 1}` with τ = t·e^{iφ}, as a real planar family.
pub fn eq4(phi: f64) -> OneParamFamily {
    let l = Matrix::rotation_scaling(1.0, phi);
    family(
        "eq4",
        vec![
            FamilyMember::new(l, v(&[0.0, 0.0]), v(&[0.0, 0.0])),
            FamilyMember::new(l, v(&[0.0, 0.0]), v(&[1.0, 0.0])),
        ],
    )
}

/// Real slice of `{τz, τz + 1}` on the line: `{tx, tx + 1}`.
pub fn eq4_real_line() -> OneParamFamily {
    family(
        "eq4-real-line",
        vec![
            FamilyMember::new(Matrix::scalar(1, 1.0), v(&[0.0]), v(&[0.0])),
            FamilyMember::new(Matrix::scalar(1, 1.0), v(&[0.0]), v(&[1.0])),
        ],
    )
}

/// `{tx, t(x − 1) + 1}`: the semi-linear conjugate of the real slice of `{τz, τz+1}`.
pub fn eq4_real_semilinear() -> OneParamFamily {
    family(
        "eq4-real-semilinear",
        vec![
            FamilyMember::new(Matrix::scalar(1, 1.0), v(&[0.0]), v(&[0.0])),
            FamilyMember::new(Matrix::scalar(1, 1.0), v(&[-1.0]), v(&[1.0])),
        ],
    )
}

/// `{t R₉₀ x, t(αx − α(1,0)) + (1,0)}`. For α < 1/3 the attractors have empty interior.
pub fn eq6(alpha: f64) -> OneParamFamily {
    let mut f = example_8_9(alpha);
    f.name = "eq6".into();
    f
}

/// Same maps as [`eq6`], studied near t₀ = 1 (hull is the square |x| + |y| ≤ 1).
pub fn example_8_9(alpha: f64) -> OneParamFamily {
    family(
        "example-8.9",
        vec![
            FamilyMember::new(r90(), v(&[0.0, 0.0]), v(&[0.0, 0.0])),
            similarity_about(Matrix::scalar(2, alpha), v(&[1.0, 0.0])),
        ],
    )
}

/// `{t x, t·αR₉₀(x − (1,0)) + (1,0)}`.
pub fn example_8_10(alpha: f64) -> OneParamFamily {
    family(
        "example-8.10",
        vec![
            FamilyMember::new(Matrix::identity(2), v(&[0.0, 0.0]), v(&[0.0, 0.0])),
            similarity_about(r90().scale(alpha), v(&[1.0, 0.0])),
        ],
    )
}

/// `{tQx, t·αQᵀ(x − (1,0)) + (1,0)}`, Q the rotation by π/4.
pub fn example_8_11(alpha: f64) -> OneParamFamily {
    family(
        "example-8.11",
        vec![
            FamilyMember::new(Matrix::rotation_scaling(1.0, FRAC_PI_4), v(&[0.0, 0.0]), v(&[0.0, 0.0])),
            similarity_about(Matrix::rotation_scaling(alpha, -FRAC_PI_4), v(&[1.0, 0.0])),
        ],
    )
}

/// `{(t/4)x, t(x − 1) + 1}` on the line.
pub fn bounded_line() -> OneParamFamily {
    family(
        "bounded-line",
        vec![
            FamilyMember::new(Matrix::scalar(1, 0.25), v(&[0.0]), v(&[0.0])),
            FamilyMember::new(Matrix::scalar(1, 1.0), v(&[-1.0]), v(&[1.0])),
        ],
    )
}

/// Every bundled fixture, with the parameter values used by the file set.
pub fn all() -> Vec<OneParamFamily> {
    vec![
        example_1_1(),
        example_4_6(),
        example_5_8(),
        example_6_3(),
        {
            let mut f = eq4(FRAC_PI_4);
            f.name = "eq4-pi4".into();
            f
        },
        {
            let mut f = eq4(0.0);
            f.name = "eq4-real".into();
            f
        },
        eq4_real_line(),
        eq4_real_semilinear(),
        eq6(0.3),
        example_8_9(0.4),
        example_8_10(0.4),
        example_8_11(0.4),
        bounded_line(),
    ]
}
