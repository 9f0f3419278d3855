//! The two standard rank-16 definite frames.
//!
//! Both Gram matrices are built from explicit Euclidean generator models and
//! validated at startup (symmetric, even diagonal, |det| = 1, definite):
//!
//! * E8 + E8: each factor is the glue extension of D8 by the all-halves
//!   vector, doubled as an orthogonal block sum.
//! * The Barnes-Wall lattice D16+: D16 (integer vectors with even coordinate
//!   sum) glued by the all-halves vector.
//!
//! Generators carry half-integer coordinates, so construction works with
//! doubled coordinates: Hermite reduction of the doubled generator stack
//! yields a basis `B/2`, and the (integral) Gram is `B B^t / 4`. The crate
//! convention is negative definite, so the Euclidean Gram is negated.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::linalg::IMat;

/// Isometry class of the rank-16 negative definite factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LambdaKind {
    #[serde(rename = "e8e8")]
    E8E8,
    #[serde(rename = "d16plus")]
    D16Plus,
}

impl std::fmt::Display for LambdaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaKind::E8E8 => write!(f, "e8e8"),
            LambdaKind::D16Plus => write!(f, "d16plus"),
        }
    }
}

impl std::str::FromStr for LambdaKind {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e8e8" => Ok(LambdaKind::E8E8),
            "d16plus" => Ok(LambdaKind::D16Plus),
            other => Err(crate::error::Error::InvalidInput {
                detail: format!("unknown frame `{other}` (expected e8e8 or d16plus)"),
            }),
        }
    }
}

/// A choice of rank-16 factor: its isometry class and its 16x16 integral Gram
/// (negative definite, even, unimodular).
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    kind: LambdaKind,
    gram: Vec<Vec<i64>>,
    gram_inv: Vec<Vec<i64>>,
    doubled_basis: Vec<Vec<i64>>,
}

struct FrameData {
    gram: Vec<Vec<i64>>,
    gram_inv: Vec<Vec<i64>>,
    doubled_basis: Vec<Vec<i64>>,
}

/// Doubled Euclidean generators of E8 in the D8-plus-glue model.
fn e8_doubled_generators() -> Vec<Vec<i64>> {
    let mut gens = Vec::new();
    for i in 0..7 {
        let mut v = vec![0i64; 8];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = vec![0i64; 8];
    v[6] = 2;
    v[7] = 2;
    gens.push(v);
    gens.push(vec![1; 8]); // the glue vector (1/2, ..., 1/2), doubled
    gens
}

fn e8e8_doubled_generators() -> Vec<Vec<i64>> {
    let mut gens = Vec::new();
    for block in 0..2 {
        for g in e8_doubled_generators() {
            let mut v = vec![0i64; 16];
            v[block * 8..block * 8 + 8].copy_from_slice(&g);
            gens.push(v);
        }
    }
    gens
}

fn d16plus_doubled_generators() -> Vec<Vec<i64>> {
    let mut gens = Vec::new();
    for i in 0..15 {
        let mut v = vec![0i64; 16];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = vec![0i64; 16];
    v[14] = 2;
    v[15] = 2;
    gens.push(v);
    gens.push(vec![1; 16]);
    gens
}

fn build(kind: LambdaKind) -> FrameData {
    let gens = match kind {
        LambdaKind::E8E8 => e8e8_doubled_generators(),
        LambdaKind::D16Plus => d16plus_doubled_generators(),
    };
    let doubled = IMat::from_i64_rows(&gens).hnf();
    assert_eq!(doubled.rows(), 16, "frame generators must span rank 16");
    // Gram of B = doubled/2 is (doubled * doubled^t) / 4.
    let g4 = doubled.mul(&doubled.transpose());
    let four = BigInt::from(4);
    let mut gram = vec![vec![0i64; 16]; 16];
    for i in 0..16 {
        for j in 0..16 {
            let (q, r) = g4[(i, j)].div_rem(&four);
            assert!(r == BigInt::from(0), "non-integral frame Gram");
            // Negate: the crate convention is negative definite.
            gram[i][j] = i64::try_from(-q).expect("frame Gram entry fits i64");
        }
    }
    for (i, row) in gram.iter().enumerate() {
        assert!(
            row[i] % 2 == 0 && row[i] < 0,
            "frame Gram must be even negative"
        );
        for j in 0..16 {
            assert_eq!(row[j], gram[j][i], "frame Gram must be symmetric");
        }
    }
    let gmat = IMat::from_i64_rows(&gram);
    assert!(
        gmat.det().magnitude().is_one(),
        "frame Gram must be unimodular"
    );
    let gram_inv = gmat
        .inverse_unimodular()
        .expect("unimodular Gram is invertible over the integers")
        .to_i64_rows()
        .expect("Gram inverse fits i64");
    FrameData {
        gram,
        gram_inv,
        doubled_basis: doubled.to_i64_rows().expect("doubled basis fits i64"),
    }
}

static E8E8_DATA: Lazy<FrameData> = Lazy::new(|| build(LambdaKind::E8E8));
static D16PLUS_DATA: Lazy<FrameData> = Lazy::new(|| build(LambdaKind::D16Plus));

impl Frame {
    pub fn new(kind: LambdaKind) -> Frame {
        let data = match kind {
            LambdaKind::E8E8 => &*E8E8_DATA,
            LambdaKind::D16Plus => &*D16PLUS_DATA,
        };
        Frame {
            kind,
            gram: data.gram.clone(),
            gram_inv: data.gram_inv.clone(),
            doubled_basis: data.doubled_basis.clone(),
        }
    }

    pub fn e8e8() -> Frame {
        Frame::new(LambdaKind::E8E8)
    }

    pub fn d16plus() -> Frame {
        Frame::new(LambdaKind::D16Plus)
    }

    pub fn kind(&self) -> LambdaKind {
        self.kind
    }

    /// The negative definite 16x16 Gram of the definite factor.
    pub fn gram(&self) -> &Vec<Vec<i64>> {
        &self.gram
    }

    /// The negated (positive definite) Gram, as used by enumeration.
    pub fn pos_gram(&self) -> Vec<Vec<i64>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|&x| -x).collect())
            .collect()
    }

    /// The integral inverse of the Gram (the factor is unimodular).
    pub fn gram_inv(&self) -> &Vec<Vec<i64>> {
        &self.gram_inv
    }

    /// Rows are twice the Euclidean coordinates of the basis vectors in the
    /// construction model; exposed so callers can translate explicit
    /// Euclidean vectors into basis coordinates.
    pub fn doubled_basis(&self) -> &Vec<Vec<i64>> {
        &self.doubled_basis
    }

    /// Basis coordinates of the vector with the given doubled Euclidean
    /// coordinates, if it lies in the lattice.
    pub fn coords_from_doubled_euclidean(&self, doubled: &[i64]) -> Option<Vec<i64>> {
        if doubled.len() != 16 {
            return None;
        }
        let b = IMat::from_i64_rows(&self.doubled_basis);
        let target: Vec<BigInt> = doubled.iter().map(|&x| BigInt::from(x)).collect();
        let lambda = b.solve_row(&target)?;
        lambda.into_iter().map(|x| i64::try_from(x).ok()).collect()
    }
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Frame({})", self.kind)
    }
}

impl Serialize for Frame {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.kind.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Frame::new(LambdaKind::deserialize(d)?))
    }
}
