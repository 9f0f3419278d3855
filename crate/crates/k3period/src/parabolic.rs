//! The stabilizer of the distinguished isotropic plane.
//!
//! In the frame-adapted splitting, an isometry stabilizing the plane
//! `span(y1, y2)` is block lower-triangular:
//!
//! ```text
//!     | m        0      0  |
//!     | R        m~    -Qf |        m~ = (m^t)^{-1}
//!     | Q^t m    0      f  |
//! ```
//!
//! with `m` unimodular, `f` an isometry of the definite factor,
//! `Q: Lambda -> Z^2` realized by a pair `c1, c2` through
//! `Q(c) = ((c, c1), (c, c2))`, its adjoint `Q^t(n1, n2) = n1 c1 + n2 c2`,
//! and the shear block `R` constrained by
//! `R^t m + m^t R + m^t Q Q^t m = 0`. Component-preserving elements are
//! exactly those with `det m = +1`; `det m = -1` elements are constructible
//! behind an explicit constructor but rejected by the coordinate APIs.
//!
//! The group law, inverses, and the three-factor decomposition
//! `g = shear . rotation . factor-isometry` are all derived from (and tested
//! against) plain 20x20 matrix arithmetic. The closed-form action in Narain
//! coordinates is:
//!
//! * rotation `(m, 0, 0, I)`:
//!   `tau' = (a tau + b)/(c tau + d)`, `u~' = u~`, `z' = z/(c tau + d)`;
//! * factor isometry `(I, 0, 0, f)`: `z' = f(z)`, rest fixed;
//! * shear `(I, Q, R, I)`:
//!   `u~' = u~ + r12 + (c1,c2)/2 - (z,c1)/2 + (tau c1 + c2, z2)/(2 tau2)`,
//!   `z' = z + tau c1 + c2`;
//!
//! so `Im(u~)` is invariant under the whole component-preserving stabilizer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ambient_gram, lambda_pair, lambda_roots, Frame, LambdaKind};
use crate::linalg::IMat;
use crate::period::{NarainCoords, PeriodVector};
use crate::scalar::{GaussianRational, Rational};

/// Checked i64 matrix product with i128 accumulation.
fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let (ra, ca) = (a.len(), a.first().map_or(0, Vec::len));
    let (rb, cb) = (b.len(), b.first().map_or(0, Vec::len));
    assert_eq!(ca, rb, "dimension mismatch");
    let mut out = vec![vec![0i64; cb]; ra];
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cb {
                let acc = out[i][j] as i128 + a[i][k] as i128 * b[k][j] as i128;
                out[i][j] = i64::try_from(acc).map_err(|_| Error::Overflow {
                    context: "isometry matrix entry",
                })?;
            }
        }
    }
    Ok(out)
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect()
}

fn mat_add(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut out = a.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = x.checked_add(b[i][j]).ok_or(Error::Overflow {
                context: "isometry matrix entry",
            })?;
        }
    }
    Ok(out)
}

fn mat_neg(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| row.iter().map(|&x| -x).collect())
        .collect()
}

fn id16() -> Vec<Vec<i64>> {
    (0..16)
        .map(|i| (0..16).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn det2(m: &[[i64; 2]; 2]) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// `(m^t)^{-1}` for unimodular `m`.
fn m_tilde(m: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let d = det2(m);
    debug_assert!(d == 1 || d == -1);
    [[d * m[1][1], -d * m[1][0]], [-d * m[0][1], d * m[0][0]]]
}

fn m_inv(m: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let d = det2(m);
    debug_assert!(d == 1 || d == -1);
    [[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]]
}

fn rows2(m: &[[i64; 2]; 2]) -> Vec<Vec<i64>> {
    vec![m[0].to_vec(), m[1].to_vec()]
}

fn to2x2(rows: &[Vec<i64>]) -> [[i64; 2]; 2] {
    [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]]
}

/// An element of the plane stabilizer, stored as the quadruple
/// `(m, Q, R, f)` plus the derived pair `c1, c2` realizing `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicIsometry {
    m: [[i64; 2]; 2],
    #[serde(rename = "Q")]
    q: Vec<Vec<i64>>,
    #[serde(rename = "R")]
    r: [[i64; 2]; 2],
    f: Vec<Vec<i64>>,
    #[serde(skip)]
    c1: Vec<i64>,
    #[serde(skip)]
    c2: Vec<i64>,
    #[serde(skip)]
    frame: Frame,
}

impl ParabolicIsometry {
    /// Validates and builds a component-preserving element (`det m = +1`).
    pub fn new(
        m: [[i64; 2]; 2],
        q: Vec<Vec<i64>>,
        r: [[i64; 2]; 2],
        f: Vec<Vec<i64>>,
        frame: Frame,
    ) -> Result<Self> {
        let g = Self::build(m, q, r, f, frame)?;
        if det2(&g.m) != 1 {
            return Err(Error::OrientationReversing);
        }
        Ok(g)
    }

    /// Validates a stabilizer element allowing `det m = -1`
    /// (orientation-reversing). Such elements act on periods but are
    /// rejected by the component-preserving coordinate APIs.
    pub fn new_allowing_reversal(
        m: [[i64; 2]; 2],
        q: Vec<Vec<i64>>,
        r: [[i64; 2]; 2],
        f: Vec<Vec<i64>>,
        frame: Frame,
    ) -> Result<Self> {
        Self::build(m, q, r, f, frame)
    }

    fn build(
        m: [[i64; 2]; 2],
        q: Vec<Vec<i64>>,
        r: [[i64; 2]; 2],
        f: Vec<Vec<i64>>,
        frame: Frame,
    ) -> Result<Self> {
        let d = det2(&m);
        if d != 1 && d != -1 {
            return Err(Error::NotUnimodular {
                detail: format!("det m = {d}"),
            });
        }
        if q.len() != 2 || q.iter().any(|row| row.len() != 16) {
            return Err(Error::InvalidInput {
                detail: "Q must be 2x16".into(),
            });
        }
        if f.len() != 16 || f.iter().any(|row| row.len() != 16) {
            return Err(Error::InvalidInput {
                detail: "f must be 16x16".into(),
            });
        }
        // f in O(Lambda): f^t G f = G.
        let gram: Vec<Vec<i64>> = frame.gram().clone();
        let ftgf = mat_mul(&mat_mul(&transpose(&f), &gram)?, &f)?;
        if ftgf != gram {
            return Err(Error::NotLambdaIsometry {
                detail: "f^t G f != G".into(),
            });
        }
        // Realize Q by c1, c2 via the adjoint Q^t = G^{-1} Q^t (16x2).
        let qt = mat_mul(frame.gram_inv(), &transpose(&q))?;
        let c1: Vec<i64> = (0..16).map(|i| qt[i][0]).collect();
        let c2: Vec<i64> = (0..16).map(|i| qt[i][1]).collect();
        // Shear constraint R^t m + m^t R + m^t (Q Q^t) m = 0.
        let qqt = mat_mul(&q, &qt)?;
        let rm = rows2(&m);
        let rtm = mat_mul(&transpose(&rows2(&r)), &rm)?;
        let mtr = mat_mul(&transpose(&rm), &rows2(&r))?;
        let mtqqtm = mat_mul(&mat_mul(&transpose(&rm), &qqt)?, &rm)?;
        let total = mat_add(&mat_add(&rtm, &mtr)?, &mtqqtm)?;
        if total.iter().any(|row| row.iter().any(|&x| x != 0)) {
            return Err(Error::ShearConstraint {
                detail: format!("residual {total:?}"),
            });
        }
        let g = ParabolicIsometry {
            m,
            q,
            r,
            f,
            c1,
            c2,
            frame,
        };
        // Definitive gate: the assembled matrix preserves the ambient Gram.
        let mat = g.matrix_big();
        let j = ambient_gram(&g.frame);
        if mat.transpose().mul(&j).mul(&mat) != j {
            return Err(Error::GramPreservation {
                detail: "assembled 20x20 matrix does not preserve the Gram".into(),
            });
        }
        Ok(g)
    }

    pub fn identity(frame: Frame) -> Self {
        ParabolicIsometry::new(
            [[1, 0], [0, 1]],
            vec![vec![0; 16]; 2],
            [[0, 0], [0, 0]],
            id16(),
            frame,
        )
        .expect("identity is valid")
    }

    pub fn m(&self) -> &[[i64; 2]; 2] {
        &self.m
    }

    pub fn q(&self) -> &Vec<Vec<i64>> {
        &self.q
    }

    pub fn r(&self) -> &[[i64; 2]; 2] {
        &self.r
    }

    pub fn f(&self) -> &Vec<Vec<i64>> {
        &self.f
    }

    /// The pair realizing `Q(c) = ((c, c1), (c, c2))`.
    pub fn c_pair(&self) -> (&[i64], &[i64]) {
        (&self.c1, &self.c2)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn is_component_preserving(&self) -> bool {
        det2(&self.m) == 1
    }

    /// The 20x20 matrix over the frame basis (coordinates ordered
    /// `a1 a2 b1 b2 c`).
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; 20]; 20];
        let mt = m_tilde(&self.m);
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.m[i][j];
                out[2 + i][j] = self.r[i][j];
                out[2 + i][2 + j] = mt[i][j];
            }
        }
        let qf = mat_mul(&self.q, &self.f).expect("validated sizes");
        for i in 0..2 {
            for j in 0..16 {
                out[2 + i][4 + j] = -qf[i][j];
            }
        }
        for i in 0..16 {
            for j in 0..2 {
                out[4 + i][j] = self.c1[i] * self.m[0][j] + self.c2[i] * self.m[1][j];
            }
        }
        for i in 0..16 {
            for j in 0..16 {
                out[4 + i][4 + j] = self.f[i][j];
            }
        }
        out
    }

    fn matrix_big(&self) -> IMat {
        IMat::from_i64_rows(&self.matrix())
    }

    /// Group law in closed form (equal to the 20x20 matrix product):
    /// `(m1 m2, Q1 + m~1 Q2 f1^{-1}, R1 m2 + m~1 R2 - Q1 f1 Q2^t m2, f1 f2)`.
    pub fn compose(&self, other: &ParabolicIsometry) -> Result<ParabolicIsometry> {
        assert_eq!(
            self.frame.kind(),
            other.frame.kind(),
            "cannot compose elements over different frames"
        );
        let m3 = to2x2(&mat_mul(&rows2(&self.m), &rows2(&other.m))?);
        let f3 = mat_mul(&self.f, &other.f)?;
        // f1^{-1} = G^{-1} f1^t G.
        let f1_inv = mat_mul(
            &mat_mul(self.frame.gram_inv(), &transpose(&self.f))?,
            self.frame.gram(),
        )?;
        let mt1 = rows2(&m_tilde(&self.m));
        let q3 = mat_add(&self.q, &mat_mul(&mat_mul(&mt1, &other.q)?, &f1_inv)?)?;
        let q2t = mat_mul(self.frame.gram_inv(), &transpose(&other.q))?;
        let r3 = mat_add(
            &mat_add(
                &mat_mul(&rows2(&self.r), &rows2(&other.m))?,
                &mat_mul(&mt1, &rows2(&other.r))?,
            )?,
            &mat_neg(&mat_mul(
                &mat_mul(&mat_mul(&self.q, &self.f)?, &q2t)?,
                &rows2(&other.m),
            )?),
        )?;
        Self::build(m3, q3, to2x2(&r3), f3, self.frame.clone())
    }

    /// Inverse, read off from `M^{-1} = J^{-1} M^t J`.
    pub fn inverse(&self) -> Result<ParabolicIsometry> {
        let mat = self.matrix_big();
        let j = ambient_gram(&self.frame);
        let j_inv = {
            let mut out = IMat::zeros(20, 20);
            out[(0, 2)] = 1.into();
            out[(1, 3)] = 1.into();
            out[(2, 0)] = 1.into();
            out[(3, 1)] = 1.into();
            let ginv = self.frame.gram_inv();
            for i in 0..16 {
                for k in 0..16 {
                    out[(4 + i, 4 + k)] = ginv[i][k].into();
                }
            }
            out
        };
        let inv = j_inv.mul(&mat.transpose()).mul(&j);
        let rows = inv.to_i64_rows().ok_or(Error::Overflow {
            context: "inverse matrix entry",
        })?;
        Self::from_matrix(&rows, self.frame.clone())
    }

    /// Reconstructs the quadruple from a block lower-triangular stabilizer
    /// matrix.
    pub fn from_matrix(rows: &[Vec<i64>], frame: Frame) -> Result<ParabolicIsometry> {
        if rows.len() != 20 || rows.iter().any(|r| r.len() != 20) {
            return Err(Error::InvalidInput {
                detail: "stabilizer matrix must be 20x20".into(),
            });
        }
        for i in 0..2 {
            for j in 0..18 {
                if rows[i][2 + j] != 0 {
                    return Err(Error::InvalidInput {
                        detail: "matrix does not stabilize the plane".into(),
                    });
                }
            }
        }
        for i in 0..16 {
            for j in 0..2 {
                if rows[4 + i][2 + j] != 0 {
                    return Err(Error::InvalidInput {
                        detail: "matrix does not stabilize the plane".into(),
                    });
                }
            }
        }
        let m = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]];
        let r = [[rows[2][0], rows[2][1]], [rows[3][0], rows[3][1]]];
        let f: Vec<Vec<i64>> = (0..16)
            .map(|i| (0..16).map(|j| rows[4 + i][4 + j]).collect())
            .collect();
        // The b-row factor block is -Qf, so Q = -(block) f^{-1}.
        let block: Vec<Vec<i64>> = (0..2)
            .map(|i| (0..16).map(|j| -rows[2 + i][4 + j]).collect())
            .collect();
        let f_inv = mat_mul(&mat_mul(frame.gram_inv(), &transpose(&f))?, frame.gram())?;
        let q = mat_mul(&block, &f_inv)?;
        Self::build(m, q, r, f, frame)
    }

    /// The three-factor decomposition
    /// `g = (I, Q, R m^{-1}, I) . (m, 0, 0, I) . (I, 0, 0, f)`,
    /// returned as `(shear, rotation, factor-isometry)`.
    pub fn decompose(&self) -> Result<(ParabolicIsometry, ParabolicIsometry, ParabolicIsometry)> {
        let rm_inv = to2x2(&mat_mul(&rows2(&self.r), &rows2(&m_inv(&self.m)))?);
        let shear = Self::build(
            [[1, 0], [0, 1]],
            self.q.clone(),
            rm_inv,
            id16(),
            self.frame.clone(),
        )?;
        let rotation = Self::build(
            self.m,
            vec![vec![0; 16]; 2],
            [[0, 0], [0, 0]],
            id16(),
            self.frame.clone(),
        )?;
        let factor = Self::build(
            [[1, 0], [0, 1]],
            vec![vec![0; 16]; 2],
            [[0, 0], [0, 0]],
            self.f.clone(),
            self.frame.clone(),
        )?;
        Ok((shear, rotation, factor))
    }

    /// Applies the 20x20 matrix to a period vector and revalidates.
    pub fn act_on_period(&self, p: &PeriodVector) -> Result<PeriodVector> {
        apply_matrix(&self.matrix(), p)
    }

    /// Closed-form action in Narain coordinates, factor by factor. Agrees
    /// exactly with `act_on_period` followed by chart extraction; requires a
    /// component-preserving element.
    pub fn narain_transform(&self, n: &NarainCoords) -> Result<NarainCoords> {
        if !self.is_component_preserving() {
            return Err(Error::OrientationReversing);
        }
        assert_eq!(self.frame.kind(), n.frame().kind(), "frame mismatch");
        let frame = n.frame().clone();

        // Factor isometry: z -> f(z).
        let mut z: Vec<GaussianRational> = (0..16)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for j in 0..16 {
                    if self.f[i][j] != 0 {
                        acc = &acc + &n.z()[j].scale(&Rational::from_int(self.f[i][j]));
                    }
                }
                acc
            })
            .collect();
        let mut tau = n.tau().clone();
        let u_tilde = n.u_tilde().clone();

        // Rotation: tau by the Moebius action, z by the reciprocal factor.
        let [[a, b], [c, d]] = self.m;
        let den = &(&GaussianRational::from_int(c) * &tau) + &GaussianRational::from_int(d);
        let num = &(&GaussianRational::from_int(a) * &tau) + &GaussianRational::from_int(b);
        tau = &num / &den;
        let den_inv = den.recip();
        for zi in &mut z {
            *zi = &*zi * &den_inv;
        }

        // Shear with parameters (c1, c2) and r12 of R m^{-1}.
        let rm_inv = to2x2(&mat_mul(&rows2(&self.r), &rows2(&m_inv(&self.m)))?);
        let r12 = Rational::from_int(rm_inv[0][1]);
        let c1c2 = Rational::from_int(lambda_pair(&self.c1, &self.c2, &frame));
        let z_c1 = lambda_dot_int(&z, &self.c1, &frame);
        let z2: Vec<Rational> = z.iter().map(|g| g.im.clone()).collect();
        let c1_z2 = lambda_dot_real(&self.c1, &z2, &frame);
        let c2_z2 = lambda_dot_real(&self.c2, &z2, &frame);
        let two_tau2 = &Rational::from_int(2) * &tau.im;
        let cross =
            (&tau.scale(&c1_z2) + &GaussianRational::from_rational(c2_z2)).scale(&two_tau2.recip());
        let shift_const = &r12 + &(&c1c2 * &Rational::new(1, 2));
        let u_new = &(&(&u_tilde + &GaussianRational::from_rational(shift_const))
            - &z_c1.scale(&Rational::new(1, 2)))
            + &cross;
        for (i, zi) in z.iter_mut().enumerate() {
            let shift = &tau.scale(&Rational::from_int(self.c1[i]))
                + &GaussianRational::from_int(self.c2[i]);
            *zi = &*zi + &shift;
        }
        NarainCoords::new(tau, u_new, z, frame)
    }
}

/// `(z, c)` for complex `z` and integral `c`.
fn lambda_dot_int(z: &[GaussianRational], c: &[i64], frame: &Frame) -> GaussianRational {
    let g = frame.gram();
    let mut acc = GaussianRational::zero();
    for i in 0..16 {
        if z[i].is_zero() {
            continue;
        }
        let mut w: i64 = 0;
        for j in 0..16 {
            w += g[i][j] * c[j];
        }
        if w != 0 {
            acc = &acc + &z[i].scale(&Rational::from_int(w));
        }
    }
    acc
}

/// `(c, w)` for integral `c` and rational `w`.
fn lambda_dot_real(c: &[i64], w: &[Rational], frame: &Frame) -> Rational {
    let g = frame.gram();
    let mut acc = Rational::zero();
    for i in 0..16 {
        if c[i] == 0 {
            continue;
        }
        for j in 0..16 {
            if g[i][j] != 0 && !w[j].is_zero() {
                acc = &acc + &(&Rational::from_int(c[i] * g[i][j]) * &w[j]);
            }
        }
    }
    acc
}

/// Applies an integral 20x20 matrix to a period vector.
fn apply_matrix(rows: &[Vec<i64>], p: &PeriodVector) -> Result<PeriodVector> {
    let entries = p.entries();
    let mut out = vec![GaussianRational::zero(); 20];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, e) in entries.iter().enumerate() {
            if rows[i][j] != 0 {
                *o = &*o + &e.scale(&Rational::from_int(rows[i][j]));
            }
        }
    }
    PeriodVector::from_entries(out, p.frame().clone())
}

/// A general integral isometry of the ambient lattice, as a 20x20 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralIsometry {
    matrix: Vec<Vec<i64>>,
    #[serde(skip)]
    frame: Frame,
}

impl GeneralIsometry {
    pub fn new(matrix: Vec<Vec<i64>>, frame: Frame) -> Result<Self> {
        if matrix.len() != 20 || matrix.iter().any(|r| r.len() != 20) {
            return Err(Error::InvalidInput {
                detail: "isometry matrix must be 20x20".into(),
            });
        }
        let m = IMat::from_i64_rows(&matrix);
        let j = ambient_gram(&frame);
        if m.transpose().mul(&j).mul(&m) != j {
            return Err(Error::GramPreservation {
                detail: "matrix does not preserve the Gram form".into(),
            });
        }
        Ok(GeneralIsometry { matrix, frame })
    }

    pub fn from_parabolic(g: &ParabolicIsometry) -> Self {
        GeneralIsometry {
            matrix: g.matrix(),
            frame: g.frame().clone(),
        }
    }

    /// The isometry exchanging the two hyperbolic pairs (`x_i <-> y_i`),
    /// hence mapping the distinguished plane to `span(x1, x2)`. It preserves
    /// the positive component but does not stabilize the plane.
    pub fn block_swap(frame: Frame) -> Self {
        let mut m = vec![vec![0i64; 20]; 20];
        m[0][2] = 1;
        m[1][3] = 1;
        m[2][0] = 1;
        m[3][1] = 1;
        for i in 0..16 {
            m[4 + i][4 + i] = 1;
        }
        GeneralIsometry::new(m, frame).expect("block swap preserves the Gram")
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.matrix
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn act_on_period(&self, p: &PeriodVector) -> Result<PeriodVector> {
        apply_matrix(&self.matrix, p)
    }
}

/// Size bounds for the deterministic element sampler.
#[derive(Clone, Debug)]
pub struct SampleBounds {
    /// Number of generator factors composed (0 gives the identity).
    pub max_factors: usize,
    /// Length of the random word defining the unimodular part.
    pub sl2_word_len: usize,
    /// Number of root reflections composed into the factor isometry.
    pub reflections: usize,
    /// Range of the integer shear parameter r12.
    pub shift_bound: i64,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds {
            max_factors: 3,
            sl2_word_len: 4,
            reflections: 2,
            shift_bound: 2,
        }
    }
}

/// Which generator class to sample from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorClass {
    /// `(m, 0, 0, I)`: the unimodular group acting on tau.
    Rotation,
    /// `(I, 0, 0, f)`: isometries of the definite factor.
    FactorIsometry,
    /// `(I, Q, R, I)`: the Heisenberg part.
    Shear,
}

fn sample_sl2(rng: &mut ChaCha8Rng, word_len: usize) -> [[i64; 2]; 2] {
    let t: [[i64; 2]; 2] = [[1, 1], [0, 1]];
    let t_inv: [[i64; 2]; 2] = [[1, -1], [0, 1]];
    let s: [[i64; 2]; 2] = [[0, -1], [1, 0]];
    let mut m = [[1i64, 0], [0, 1]];
    let len = rng.gen_range(0..=word_len);
    for _ in 0..len {
        let g = match rng.gen_range(0..3) {
            0 => t,
            1 => t_inv,
            _ => s,
        };
        let prod = mat_mul(&rows2(&m), &rows2(&g)).expect("small entries");
        m = to2x2(&prod);
    }
    m
}

/// `sigma_r(x) = x + <x, r> r` for a norm minus-two root, as a matrix in the
/// column-vector convention.
fn reflection_matrix(root: &[i64], frame: &Frame) -> Vec<Vec<i64>> {
    let g = frame.gram();
    let gr: Vec<i64> = (0..16)
        .map(|j| (0..16).map(|k| g[j][k] * root[k]).sum())
        .collect();
    (0..16)
        .map(|i| {
            (0..16)
                .map(|j| i64::from(i == j) + root[i] * gr[j])
                .collect()
        })
        .collect()
}

fn sample_factor_isometry(
    rng: &mut ChaCha8Rng,
    bounds: &SampleBounds,
    frame: &Frame,
) -> Vec<Vec<i64>> {
    let roots = lambda_roots(frame);
    let mut f = id16();
    let count = rng.gen_range(0..=bounds.reflections);
    for _ in 0..count {
        let r = &roots[rng.gen_range(0..roots.len())];
        f = mat_mul(&f, &reflection_matrix(r, frame)).expect("reflection entries are small");
    }
    if frame.kind() == LambdaKind::E8E8 && rng.gen_bool(0.25) {
        f = mat_mul(&f, &factor_swap()).expect("swap entries are small");
    }
    f
}

/// For the orthogonal block frame, the isometry exchanging the two rank-8
/// blocks of the construction basis.
fn factor_swap() -> Vec<Vec<i64>> {
    let mut swap = vec![vec![0i64; 16]; 16];
    for i in 0..8 {
        swap[i][8 + i] = 1;
        swap[8 + i][i] = 1;
    }
    swap
}

fn sample_shear(rng: &mut ChaCha8Rng, bounds: &SampleBounds, frame: &Frame) -> ParabolicIsometry {
    let mut c1 = vec![0i64; 16];
    let mut c2 = vec![0i64; 16];
    for c in [&mut c1, &mut c2] {
        let support = rng.gen_range(0..=2);
        for _ in 0..support {
            c[rng.gen_range(0..16)] = rng.gen_range(-1..=1);
        }
    }
    let r12 = rng.gen_range(-bounds.shift_bound..=bounds.shift_bound);
    shear_from_pair(&c1, &c2, r12, frame).expect("sampled shear parameters are valid")
}

/// Builds the shear element `(I, Q, R, I)` from its free parameters: the
/// realizing pair and the integer `r12`. The remaining entries of `R` are
/// forced by the shear constraint:
/// `r11 = -(c1,c1)/2`, `r22 = -(c2,c2)/2`, `r21 = -r12 - (c1,c2)`.
pub fn shear_from_pair(
    c1: &[i64],
    c2: &[i64],
    r12: i64,
    frame: &Frame,
) -> Result<ParabolicIsometry> {
    let g = frame.gram();
    let q: Vec<Vec<i64>> = [c1, c2]
        .iter()
        .map(|c| {
            (0..16)
                .map(|j| (0..16).map(|k| c[k] * g[k][j]).sum())
                .collect()
        })
        .collect();
    let n11 = lambda_pair(c1, c1, frame);
    let n22 = lambda_pair(c2, c2, frame);
    let n12 = lambda_pair(c1, c2, frame);
    let r = [[-n11 / 2, r12], [-r12 - n12, -n22 / 2]];
    ParabolicIsometry::new([[1, 0], [0, 1]], q, r, id16(), frame.clone())
}

/// Deterministic sampler over bounded products of the three generator
/// classes. A given `(seed, bounds)` always yields the same element; a zero
/// factor count gives the identity.
pub fn sample_parabolic(seed: u64, bounds: &SampleBounds, frame: &Frame) -> ParabolicIsometry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ParabolicIsometry::identity(frame.clone());
    let factors = rng.gen_range(0..=bounds.max_factors);
    for _ in 0..factors {
        let class = match rng.gen_range(0..3) {
            0 => GeneratorClass::Rotation,
            1 => GeneratorClass::FactorIsometry,
            _ => GeneratorClass::Shear,
        };
        let h = sample_class_element(&mut rng, class, bounds, frame);
        g = g.compose(&h).expect("sampled elements compose");
    }
    g
}

/// Deterministic sampler restricted to one generator class.
pub fn sample_in_class(
    seed: u64,
    class: GeneratorClass,
    bounds: &SampleBounds,
    frame: &Frame,
) -> ParabolicIsometry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_class_element(&mut rng, class, bounds, frame)
}

fn sample_class_element(
    rng: &mut ChaCha8Rng,
    class: GeneratorClass,
    bounds: &SampleBounds,
    frame: &Frame,
) -> ParabolicIsometry {
    match class {
        GeneratorClass::Rotation => {
            let m = sample_sl2(rng, bounds.sl2_word_len);
            ParabolicIsometry::new(
                m,
                vec![vec![0; 16]; 2],
                [[0, 0], [0, 0]],
                id16(),
                frame.clone(),
            )
            .expect("rotation elements are valid")
        }
        GeneratorClass::FactorIsometry => {
            let f = sample_factor_isometry(rng, bounds, frame);
            ParabolicIsometry::new(
                [[1, 0], [0, 1]],
                vec![vec![0; 16]; 2],
                [[0, 0], [0, 0]],
                f,
                frame.clone(),
            )
            .expect("factor isometries are valid")
        }
        GeneratorClass::Shear => sample_shear(rng, bounds, frame),
    }
}

/// Deserialization accepts the `{"m", "Q", "R", "f"}` quadruple and
/// revalidates it against the given frame at construction time, so the raw
/// form is split out.
#[derive(Deserialize)]
pub struct ParabolicParts {
    pub m: [[i64; 2]; 2],
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    #[serde(rename = "R")]
    pub r: [[i64; 2]; 2],
    pub f: Vec<Vec<i64>>,
}

impl ParabolicParts {
    pub fn into_isometry(self, frame: Frame) -> Result<ParabolicIsometry> {
        ParabolicIsometry::new(self.m, self.q, self.r, self.f, frame)
    }
}
