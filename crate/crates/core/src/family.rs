//! One-parameter affine families `F_t = { t·(L_i x + a_i) + q_i }` and their
//! JSON file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// Determinants at or below this magnitude are treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// `x ↦ L x + a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub l: Matrix,
    pub a: Vector,
}

impl AffineMap {
    pub fn new(l: Matrix, a: Vector) -> Self {
        assert_eq!(l.dim(), a.dim(), "linear part and translation disagree on dimension");
        Self { l, a }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim), Vector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.l.mul_vec(x) + self.a
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap { l: self.l * inner.l, a: self.l.mul_vec(&inner.a) + self.a }
    }

    /// Unique fixed point, if `I − L` is invertible.
    pub fn fixed_point(&self) -> Option<Vector> {
        (Matrix::identity(self.dim()) - self.l).solve(&self.a)
    }
}

/// One member `t·f_i(x) + q_i` of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyMember {
    pub f: AffineMap,
    pub q: Vector,
}

impl FamilyMember {
    pub fn new(l: Matrix, a: Vector, q: Vector) -> Self {
        assert_eq!(a.dim(), q.dim(), "offset has the wrong dimension");
        Self { f: AffineMap::new(l, a), q }
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// The map `x ↦ t·(L x + a) + q`.
    pub fn at(&self, t: f64) -> AffineMap {
        AffineMap { l: self.f.l.scale(t), a: self.f.a.scale(t) + self.q }
    }

    /// Solves `(I − tL) x = t a + q`.
    pub fn fixed_point(&self, t: f64) -> Result<Vector> {
        if t == 0.0 {
            return Ok(self.q);
        }
        let m = Matrix::identity(self.dim()) - self.f.l.scale(t);
        m.solve(&(self.f.a.scale(t) + self.q)).ok_or(Error::SingularSystem)
    }
}

/// Free-function form of [`FamilyMember::fixed_point`].
pub fn fixed_point(member: &FamilyMember, t: f64) -> Result<Vector> {
    member.fixed_point(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneParamFamily {
    pub name: String,
    pub dim: usize,
    pub members: Vec<FamilyMember>,
}

impl OneParamFamily {
    /// Validates dimensions, member count and non-singularity.
    pub fn new(name: impl Into<String>, members: Vec<FamilyMember>) -> Result<Self> {
        let dim = members.first().map(|m| m.dim()).ok_or_else(|| Error::Schema("no members".into()))?;
        if members.len() < 2 {
            return Err(Error::Schema(format!("need at least 2 members, got {}", members.len())));
        }
        for (i, m) in members.iter().enumerate() {
            if m.dim() != dim || m.f.dim() != dim {
                return Err(Error::Schema(format!("member {i}: dimension mismatch with dim {dim}")));
            }
            if m.f.l.det().abs() <= SINGULAR_DET {
                return Err(Error::SingularLinearPart(i));
            }
        }
        Ok(Self { name: name.into(), dim, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn linear_parts(&self) -> Vec<Matrix> {
        self.members.iter().map(|m| m.f.l).collect()
    }

    pub fn instantiate(&self, t: f64) -> Vec<AffineMap> {
        instantiate(self, t)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| {
            Error::Schema(format!("line {}, column {}: {}", e.line(), e.column(), e))
        })?;
        file.into_family()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FamilyFile::from(self)).expect("family serializes")
    }
}

/// `x ↦ t·(L_i x + a_i) + q_i` for every member. At t = 0 these are constant maps.
pub fn instantiate(family: &OneParamFamily, t: f64) -> Vec<AffineMap> {
    assert!(t >= 0.0, "t must be nonnegative");
    family.members.iter().map(|m| m.at(t)).collect()
}

/// On-disk representation: `{"name", "dim", "members": [{"L", "a", "q"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub name: String,
    pub dim: usize,
    pub members: Vec<MemberFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberFile {
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
    pub a: Vec<f64>,
    pub q: Vec<f64>,
}

impl FamilyFile {
    pub fn into_family(self) -> Result<OneParamFamily> {
        let d = self.dim;
        if !(1..=3).contains(&d) {
            return Err(Error::Schema(format!("dim: expected 1..=3, got {d}")));
        }
        let mut members = Vec::with_capacity(self.members.len());
        for (i, m) in self.members.into_iter().enumerate() {
            if m.l.len() != d || m.l.iter().any(|r| r.len() != d) {
                return Err(Error::Schema(format!("members[{i}].L: expected a {d}x{d} matrix")));
            }
            if m.a.len() != d {
                return Err(Error::Schema(format!("members[{i}].a: expected length {d}, got {}", m.a.len())));
            }
            if m.q.len() != d {
                return Err(Error::Schema(format!("members[{i}].q: expected length {d}, got {}", m.q.len())));
            }
            let l = Matrix::from_rows(&m.l).expect("shape checked");
            members.push(FamilyMember::new(l, Vector::from_slice(&m.a), Vector::from_slice(&m.q)));
        }
        OneParamFamily::new(self.name, members)
    }
}

impl From<&OneParamFamily> for FamilyFile {
    fn from(f: &OneParamFamily) -> Self {
        FamilyFile {
            name: f.name.clone(),
            dim: f.dim,
            members: f
                .members
                .iter()
                .map(|m| MemberFile { l: m.f.l.rows(), a: m.f.a.to_vec(), q: m.q.to_vec() })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn instantiate_example_4_6() {
        let maps = instantiate(&fixtures::example_4_6(), 0.5);
        let x = Vector::from_slice(&[2.0]);
        assert_eq!(maps[0].apply(&x)[0], -0.5 * 2.0 + 1.5);
        assert_eq!(maps[1].apply(&x)[0], -0.5 * 2.0 - 1.5);
    }

    #[test]
    fn instantiate_at_zero_is_constant() {
        let fam = fixtures::example_1_1();
        for (m, member) in instantiate(&fam, 0.0).iter().zip(&fam.members) {
            assert_eq!(m.l.max_abs(), 0.0);
            assert_eq!(m.apply(&Vector::from_slice(&[5.0, -3.0])), member.q);
        }
    }

    #[test]
    fn instantiate_example_1_1_rotation() {
        let maps = instantiate(&fixtures::example_1_1(), 0.8);
        let q = Matrix::rotation_scaling(1.0, std::f64::consts::FRAC_PI_4);
        assert!(maps[0].l.approx_eq(&q.scale(0.8), 1e-15));
    }

    #[test]
    fn fixed_point_matches_iteration() {
        let member = FamilyMember::new(Matrix::scalar(1, 0.4), Vector::zeros(1), Vector::from_slice(&[1.0]));
        let fp = member.fixed_point(0.5).unwrap();
        let map = member.at(0.5);
        let mut x = Vector::zeros(1);
        for _ in 0..200 {
            x = map.apply(&x);
        }
        assert!((fp[0] - x[0]).abs() < 1e-15);
        assert!((fp[0] - 1.25).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_at_zero_is_offset() {
        for m in &fixtures::example_5_8().members {
            assert_eq!(m.fixed_point(0.0).unwrap(), m.q);
        }
    }

    #[test]
    fn singular_system_detected() {
        // 1/t = 1 is an eigenvalue of L = I
        let m = FamilyMember::new(Matrix::identity(2), Vector::zeros(2), Vector::zeros(2));
        assert_eq!(m.fixed_point(1.0), Err(Error::SingularSystem));
    }

    #[test]
    fn json_round_trip_is_exact() {
        for fam in fixtures::all() {
            let back = OneParamFamily::from_json(&fam.to_json()).unwrap();
            assert_eq!(back, fam);
        }
    }

    #[test]
    fn schema_errors() {
        let bad_q = r#"{"name":"x","dim":2,"members":[
            {"L":[[1,0],[0,1]],"a":[0,0],"q":[0]},
            {"L":[[1,0],[0,1]],"a":[0,0],"q":[0,0]}]}"#;
        assert!(matches!(OneParamFamily::from_json(bad_q), Err(Error::Schema(msg)) if msg.contains("members[0].q")));
        let singular = r#"{"name":"x","dim":1,"members":[
            {"L":[[0]],"a":[0],"q":[0]},{"L":[[1]],"a":[0],"q":[1]}]}"#;
        assert_eq!(OneParamFamily::from_json(singular), Err(Error::SingularLinearPart(0)));
        let syntax = "{\"name\": \"x\",\n \"dim\": }";
        assert!(matches!(OneParamFamily::from_json(syntax), Err(Error::Schema(msg)) if msg.starts_with("line 2")));
    }
}
