//! Period vectors and the coordinate charts of the positive period component.
//!
//! A period vector is a complex vector `(a1, a2)(b1, b2)(c)` with Gaussian
//! rational entries satisfying the two defining conditions `<w, w> = 0` and
//! `<w, conj w> > 0`. Normalizing `<w, y2> = 1` identifies the positive
//! component with the tube domain
//! `{(tau, u, z) : Im tau > 0, 2 tau2 u2 + (z2, z2) > 0}` via
//! `w = (tau, 1)(u, -tau u - (z,z)/2)(z)`, and the Narain chart perturbs the
//! second coordinate to `u~ = u + (z, z2)/(2 tau2)`, whose imaginary part is
//! invariant under the parabolic stabilizer of the distinguished plane.
//!
//! The module also provides exact reduction to the modular fundamental
//! domain, the large-complex-structure predicate
//! `u~2 > max(rho(tau), 2/sqrt(3))`, the basis-dependent diagnostics `tau`
//! and `u~2`, and the certified pairing lower bound used to control vectors
//! outside the orthogonal complement of the plane.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, Frame, LatticeElement, SublatticeBasis};
use crate::scalar::{cmp_sq_threshold, GaussianRational, Rational};

/// A representative of a period line: 20 Gaussian rational coordinates in
/// `(a, b, c)` blocks, together with the frame fixing the pairing. The two
/// defining conditions are checked at construction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PeriodVector {
    a: [GaussianRational; 2],
    b: [GaussianRational; 2],
    c: Vec<GaussianRational>,
    #[serde(skip)]
    frame: Frame,
}

/// C-bilinear extension of the definite-factor pairing.
fn lambda_pair_c(
    z: &[GaussianRational],
    w: &[GaussianRational],
    frame: &Frame,
) -> GaussianRational {
    let g = frame.gram();
    let mut acc = GaussianRational::zero();
    for i in 0..16 {
        if z[i].is_zero() {
            continue;
        }
        let mut row = GaussianRational::zero();
        for j in 0..16 {
            if g[i][j] != 0 && !w[j].is_zero() {
                row = &row + &w[j].scale(&Rational::from_int(g[i][j]));
            }
        }
        acc = &acc + &(&z[i] * &row);
    }
    acc
}

/// Pairing of a complex vector against the rational vector of imaginary
/// parts, `(z, w)` with `w` real.
fn lambda_pair_real(z: &[GaussianRational], w: &[Rational], frame: &Frame) -> GaussianRational {
    let g = frame.gram();
    let mut acc = GaussianRational::zero();
    for i in 0..16 {
        if z[i].is_zero() {
            continue;
        }
        let mut row = Rational::zero();
        for j in 0..16 {
            if g[i][j] != 0 && !w[j].is_zero() {
                row = &row + &(&w[j] * &Rational::from_int(g[i][j]));
            }
        }
        acc = &acc + &z[i].scale(&row);
    }
    acc
}

/// C-bilinear extension of the full pairing to complex vectors.
fn pair_c(p: &PeriodVector, q: &PeriodVector) -> GaussianRational {
    let mut acc = &(&p.a[0] * &q.b[0]) + &(&p.a[1] * &q.b[1]);
    acc = &acc + &(&p.b[0] * &q.a[0]);
    acc = &acc + &(&p.b[1] * &q.a[1]);
    &acc + &lambda_pair_c(&p.c, &q.c, &p.frame)
}

impl PeriodVector {
    /// Builds and validates a period vector: `<w, w> = 0` exactly and
    /// `<w, conj w> > 0`.
    pub fn new(
        a: [GaussianRational; 2],
        b: [GaussianRational; 2],
        c: Vec<GaussianRational>,
        frame: Frame,
    ) -> Result<Self> {
        if c.len() != 16 {
            return Err(Error::InvalidInput {
                detail: format!("period c-block has {} entries, expected 16", c.len()),
            });
        }
        let p = PeriodVector { a, b, c, frame };
        let sq = pair_c(&p, &p);
        if !sq.is_zero() {
            return Err(Error::NotInDomain {
                detail: format!("<w, w> = {sq} != 0"),
            });
        }
        let h = p.pair_with_conjugate();
        if !h.is_positive() {
            return Err(Error::NotInDomain {
                detail: format!("<w, conj w> = {h} <= 0"),
            });
        }
        Ok(p)
    }

    pub fn a(&self) -> &[GaussianRational; 2] {
        &self.a
    }

    pub fn b(&self) -> &[GaussianRational; 2] {
        &self.b
    }

    pub fn c(&self) -> &[GaussianRational] {
        &self.c
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn conjugate(&self) -> PeriodVector {
        PeriodVector {
            a: [self.a[0].conj(), self.a[1].conj()],
            b: [self.b[0].conj(), self.b[1].conj()],
            c: self.c.iter().map(GaussianRational::conj).collect(),
            frame: self.frame.clone(),
        }
    }

    /// `<w, conj w>`, an exact positive rational for a valid period.
    pub fn pair_with_conjugate(&self) -> Rational {
        let h = pair_c(self, &self.conjugate());
        debug_assert!(h.im.is_zero());
        h.re
    }

    /// Pairing against an integral lattice element.
    pub fn pair_with_element(&self, e: &LatticeElement) -> GaussianRational {
        let ec: Vec<GaussianRational> =
            e.c.iter().map(|&x| GaussianRational::from_int(x)).collect();
        let q = PeriodVector {
            a: [
                GaussianRational::from_int(e.a[0]),
                GaussianRational::from_int(e.a[1]),
            ],
            b: [
                GaussianRational::from_int(e.b[0]),
                GaussianRational::from_int(e.b[1]),
            ],
            c: ec,
            frame: self.frame.clone(),
        };
        pair_c(self, &q)
    }

    /// The component marker `i <N w, conj w> = 2 Im(a1 conj(a2))`: positive
    /// exactly on the distinguished component, and conjugation flips its
    /// sign.
    pub fn component_marker(&self) -> Rational {
        let prod = &self.a[0] * &self.a[1].conj();
        &prod.im * &Rational::from_int(2)
    }

    /// Raw coordinates in `a, b, c` order.
    pub fn entries(&self) -> Vec<GaussianRational> {
        let mut v = Vec::with_capacity(20);
        v.extend_from_slice(&self.a);
        v.extend_from_slice(&self.b);
        v.extend_from_slice(&self.c);
        v
    }

    pub fn from_entries(entries: Vec<GaussianRational>, frame: Frame) -> Result<Self> {
        if entries.len() != 20 {
            return Err(Error::InvalidInput {
                detail: format!("period vector has {} entries, expected 20", entries.len()),
            });
        }
        let mut it = entries.into_iter();
        let a = [it.next().unwrap(), it.next().unwrap()];
        let b = [it.next().unwrap(), it.next().unwrap()];
        let c: Vec<GaussianRational> = it.collect();
        PeriodVector::new(a, b, c, frame)
    }
}

/// Tube-domain coordinates `(tau, u, z)` with `Im tau > 0` and
/// `2 tau2 u2 + (z2, z2) > 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TubeCoords {
    tau: GaussianRational,
    u: GaussianRational,
    z: Vec<GaussianRational>,
    #[serde(skip)]
    frame: Frame,
}

fn im_parts(z: &[GaussianRational]) -> Vec<Rational> {
    z.iter().map(|g| g.im.clone()).collect()
}

/// `2 tau2 u2 + (z2, z2)` for imaginary parts `tau2, u2, z2`.
fn positivity_form(
    tau: &GaussianRational,
    u: &GaussianRational,
    z: &[GaussianRational],
    frame: &Frame,
) -> Rational {
    let z2 = im_parts(z);
    let z2c: Vec<GaussianRational> = z2
        .iter()
        .cloned()
        .map(GaussianRational::from_rational)
        .collect();
    let zz = lambda_pair_real(&z2c, &z2, frame);
    debug_assert!(zz.im.is_zero());
    &(&Rational::from_int(2) * &(&tau.im * &u.im)) + &zz.re
}

impl TubeCoords {
    pub fn new(
        tau: GaussianRational,
        u: GaussianRational,
        z: Vec<GaussianRational>,
        frame: Frame,
    ) -> Result<Self> {
        if z.len() != 16 {
            return Err(Error::InvalidInput {
                detail: format!("z has {} entries, expected 16", z.len()),
            });
        }
        if !tau.im.is_positive() {
            return Err(Error::NotInDomain {
                detail: format!("Im tau = {} <= 0", tau.im),
            });
        }
        let pf = positivity_form(&tau, &u, &z, &frame);
        if !pf.is_positive() {
            return Err(Error::NotInDomain {
                detail: format!("2 tau2 u2 + (z2, z2) = {pf} <= 0"),
            });
        }
        Ok(TubeCoords { tau, u, z, frame })
    }

    pub fn tau(&self) -> &GaussianRational {
        &self.tau
    }

    pub fn u(&self) -> &GaussianRational {
        &self.u
    }

    pub fn z(&self) -> &[GaussianRational] {
        &self.z
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }
}

/// Narain coordinates `(tau, u~, z)` with both `tau` and `u~` in the upper
/// half-plane. The imaginary part of `u~` is the quantity tested by the
/// large-complex-structure predicate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NarainCoords {
    tau: GaussianRational,
    u_tilde: GaussianRational,
    z: Vec<GaussianRational>,
    #[serde(skip)]
    frame: Frame,
}

impl NarainCoords {
    pub fn new(
        tau: GaussianRational,
        u_tilde: GaussianRational,
        z: Vec<GaussianRational>,
        frame: Frame,
    ) -> Result<Self> {
        if z.len() != 16 {
            return Err(Error::InvalidInput {
                detail: format!("z has {} entries, expected 16", z.len()),
            });
        }
        if !tau.im.is_positive() {
            return Err(Error::NotInDomain {
                detail: format!("Im tau = {} <= 0", tau.im),
            });
        }
        if !u_tilde.im.is_positive() {
            return Err(Error::NotInDomain {
                detail: format!("Im u~ = {} <= 0", u_tilde.im),
            });
        }
        Ok(NarainCoords {
            tau,
            u_tilde,
            z,
            frame,
        })
    }

    pub fn tau(&self) -> &GaussianRational {
        &self.tau
    }

    pub fn u_tilde(&self) -> &GaussianRational {
        &self.u_tilde
    }

    pub fn z(&self) -> &[GaussianRational] {
        &self.z
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }
}

/// `w = (tau, 1)(u, -tau u - (z,z)/2)(z)`.
pub fn omega_from_tube(t: &TubeCoords) -> PeriodVector {
    let zz = lambda_pair_c(&t.z, &t.z, &t.frame);
    let half = Rational::new(1, 2);
    let w = &(-&(&t.tau * &t.u)) - &zz.scale(&half);
    PeriodVector::new(
        [t.tau.clone(), GaussianRational::one()],
        [t.u.clone(), w],
        t.z.clone(),
        t.frame.clone(),
    )
    .expect("tube coordinates define a valid period")
}

/// Normalizes `<w, y2> = 1` and reads off `(tau, u, z)`. Fails on periods
/// pairing to zero with `y2`, and on points of the conjugate component.
pub fn tube_from_omega(p: &PeriodVector) -> Result<TubeCoords> {
    let alpha = p.a[1].clone();
    if alpha.is_zero() {
        return Err(Error::DegeneratePeriod);
    }
    let inv = alpha.recip();
    let tau = &p.a[0] * &inv;
    if tau.im.is_negative() {
        return Err(Error::WrongComponent);
    }
    if tau.im.is_zero() {
        return Err(Error::NotInDomain {
            detail: "Im(<w,y1>/<w,y2>) = 0".into(),
        });
    }
    let u = &p.b[0] * &inv;
    let z: Vec<GaussianRational> = p.c.iter().map(|zi| zi * &inv).collect();
    TubeCoords::new(tau, u, z, p.frame.clone())
}

/// `u~ = u + (z, z2)/(2 tau2)`.
pub fn narain_from_tube(t: &TubeCoords) -> NarainCoords {
    let z2 = im_parts(&t.z);
    let zz2 = lambda_pair_real(&t.z, &z2, &t.frame);
    let scale = (&Rational::from_int(2) * &t.tau.im).recip();
    let u_tilde = &t.u + &zz2.scale(&scale);
    NarainCoords::new(t.tau.clone(), u_tilde, t.z.clone(), t.frame.clone())
        .expect("tube coordinates induce valid Narain coordinates")
}

/// Inverse of [`narain_from_tube`].
pub fn tube_from_narain(n: &NarainCoords) -> TubeCoords {
    let z2 = im_parts(&n.z);
    let zz2 = lambda_pair_real(&n.z, &z2, &n.frame);
    let scale = (&Rational::from_int(2) * &n.tau.im).recip();
    let u = &n.u_tilde - &zz2.scale(&scale);
    TubeCoords::new(n.tau.clone(), u, n.z.clone(), n.frame.clone())
        .expect("Narain coordinates induce valid tube coordinates")
}

pub fn narain_from_omega(p: &PeriodVector) -> Result<NarainCoords> {
    Ok(narain_from_tube(&tube_from_omega(p)?))
}

pub fn omega_from_narain(n: &NarainCoords) -> PeriodVector {
    omega_from_tube(&tube_from_narain(n))
}

/// `exp(w N) p = p + w N(p)` where `N(g) = <g, y2> y1 - <g, y1> y2`; in tube
/// coordinates this translates the second coordinate by `w`. `N^2 = 0`, so
/// the exponential is exactly linear. Translations can leave the positive
/// domain; the result is re-validated.
pub fn apply_nilpotent(p: &PeriodVector, w: &GaussianRational) -> Result<PeriodVector> {
    let b = [&p.b[0] + &(w * &p.a[1]), &p.b[1] - &(w * &p.a[0])];
    PeriodVector::new(p.a.clone(), b, p.c.clone(), p.frame.clone())
}

/// Result of reducing `tau` into the closed fundamental domain
/// `|Re| <= 1/2, |tau| >= 1` of the modular group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    /// The unimodular matrix with `tau_reduced = m tau` (Moebius action).
    pub m: [[i64; 2]; 2],
    pub tau_reduced: GaussianRational,
    /// `Im(tau_reduced)`: the maximum of `Im` over the modular orbit.
    pub rho: Rational,
}

fn mat_mul2(l: &[[BigInt; 2]; 2], r: &[[BigInt; 2]; 2]) -> [[BigInt; 2]; 2] {
    [
        [
            &l[0][0] * &r[0][0] + &l[0][1] * &r[1][0],
            &l[0][0] * &r[0][1] + &l[0][1] * &r[1][1],
        ],
        [
            &l[1][0] * &r[0][0] + &l[1][1] * &r[1][0],
            &l[1][0] * &r[0][1] + &l[1][1] * &r[1][1],
        ],
    ]
}

/// Moebius action of an integral matrix on the upper half-plane.
pub fn moebius(m: &[[i64; 2]; 2], tau: &GaussianRational) -> GaussianRational {
    let conv = |x: i64| GaussianRational::from_int(x);
    let num = &(&conv(m[0][0]) * tau) + &conv(m[0][1]);
    let den = &(&conv(m[1][0]) * tau) + &conv(m[1][1]);
    &num / &den
}

/// Reduces `tau` to the closed fundamental domain by alternating integer
/// translations and inversions, all in exact arithmetic. Ties on the
/// boundary are accepted as-is: only the imaginary part feeds the predicate,
/// and it is already maximal there.
pub fn reduce_sl2(tau: &GaussianRational) -> Result<ReductionResult> {
    if !tau.im.is_positive() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let one = || BigInt::from(1);
    let zero = || BigInt::from(0);
    let mut m = [[one(), zero()], [zero(), one()]];
    let mut t = tau.clone();
    loop {
        let n = t.re.round_nearest();
        if n != BigInt::from(0) {
            t = GaussianRational::new(&t.re - &Rational::from_bigint(n.clone()), t.im.clone());
            let shift = [[one(), -n], [zero(), one()]];
            m = mat_mul2(&shift, &m);
        }
        if t.abs_sq() < Rational::one() {
            t = -&t.recip();
            let s = [[zero(), -one()], [one(), zero()]];
            m = mat_mul2(&s, &m);
        } else {
            break;
        }
    }
    let mut mi = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            mi[i][j] = i64::try_from(&m[i][j]).map_err(|_| Error::Overflow {
                context: "reduction matrix entry",
            })?;
        }
    }
    debug_assert_eq!(moebius(&mi, tau), t);
    let rho = t.im.clone();
    Ok(ReductionResult {
        m: mi,
        tau_reduced: t,
        rho,
    })
}

/// `rho(tau)`: the maximum of `Im` over the modular orbit of `tau`.
pub fn rho(tau: &GaussianRational) -> Result<Rational> {
    Ok(reduce_sl2(tau)?.rho)
}

/// Which of the two lower bounds `rho(tau)` and `2/sqrt(3)` is the larger
/// one (ties resolved to `RHO`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Binding {
    #[serde(rename = "RHO")]
    Rho,
    #[serde(rename = "TWO_OVER_SQRT3")]
    TwoOverSqrt3,
    /// Reserved; the maximum of the two bounds is always attained, so this
    /// variant is never produced.
    #[serde(rename = "NONE")]
    None,
}

/// Outcome of the large-complex-structure test at a Narain point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcsReport {
    pub is_lcs: bool,
    pub rho: Rational,
    pub u_tilde_2: Rational,
    pub binding: Binding,
}

/// Exact evaluation of `u~2 > max(rho(tau), 2/sqrt(3))`: equivalently
/// `u~2 > rho` and `3 u~2^2 > 4`.
pub fn lcs_test(n: &NarainCoords) -> LcsReport {
    let rho = reduce_sl2(&n.tau)
        .expect("Narain coordinates have Im tau > 0")
        .rho;
    let u2 = n.u_tilde.im.clone();
    let above_rho = u2 > rho;
    let above_const = cmp_sq_threshold(&u2, 4, 3).expect("fixed threshold") == Ordering::Greater;
    let binding = match cmp_sq_threshold(&rho, 4, 3).expect("fixed threshold") {
        Ordering::Less => Binding::TwoOverSqrt3,
        _ => Binding::Rho,
    };
    LcsReport {
        is_lcs: above_rho && above_const,
        rho,
        u_tilde_2: u2,
        binding,
    }
}

/// The exact exponent bound of the punctured-disc fiber at `tau`, plus a
/// floating convenience radius `exp(-2 pi max(rho, 2/sqrt(3)))`. The float
/// never feeds a predicate.
#[derive(Clone, Debug, Serialize)]
pub struct DiscRadius {
    pub binding: Binding,
    pub rho: Rational,
    pub radius_approx: f64,
}

pub fn disc_radius(tau: &GaussianRational) -> Result<DiscRadius> {
    let rho = reduce_sl2(tau)?.rho;
    let binding = match cmp_sq_threshold(&rho, 4, 3).expect("fixed threshold") {
        Ordering::Less => Binding::TwoOverSqrt3,
        _ => Binding::Rho,
    };
    let bound = match binding {
        Binding::Rho => rho.to_f64(),
        _ => 2.0 / 3.0_f64.sqrt(),
    };
    Ok(DiscRadius {
        binding,
        rho,
        radius_approx: (-2.0 * std::f64::consts::PI * bound).exp(),
    })
}

/// The basis-dependent quantities attached to a period and an oriented basis
/// of a primitive isotropic plane: `tau` (Moebius-equivariant) and the
/// literal normalized pairing ratio
/// `<w, conj w> / (|<w, y2'>|^2 Im tau)`. The latter is exposed as a
/// diagnostic; the authoritative quantity for the large-complex-structure
/// predicate is the Narain `u~2`, reported alongside for the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisDiagnostics {
    pub tau: GaussianRational,
    /// Literal value of the normalized ratio; `4 u~2` for the standard basis
    /// under the bilinear-extension convention used here.
    pub ratio_literal: Rational,
    /// The Narain `u~2`, present when the basis is the standard `y1, y2`.
    pub narain_u2: Option<Rational>,
}

pub fn tau_u2_from_basis(
    p: &PeriodVector,
    y1p: &LatticeElement,
    y2p: &LatticeElement,
) -> Result<BasisDiagnostics> {
    let plane =
        SublatticeBasis::new(vec![y1p.clone(), y2p.clone()], p.frame().clone()).map_err(|e| {
            Error::InvalidBasis {
                detail: format!("{e}"),
            }
        })?;
    if !lattice::is_primitive_isotropic_rank2(&plane) {
        return Err(Error::InvalidBasis {
            detail: "basis does not span a primitive isotropic plane".into(),
        });
    }
    let den = p.pair_with_element(y2p);
    if den.is_zero() {
        return Err(Error::DegeneratePeriod);
    }
    let num = p.pair_with_element(y1p);
    let mut tau = &num / &den;
    if tau.im.is_zero() {
        return Err(Error::InvalidBasis {
            detail: "pairing ratio is real; basis is degenerate for this period".into(),
        });
    }
    // Orientation rule: negate the first basis vector if needed so that
    // Im tau > 0.
    if tau.im.is_negative() {
        tau = -&tau;
    }
    let ratio_literal = &p.pair_with_conjugate() / &(&den.abs_sq() * &tau.im);
    let standard = *y1p == LatticeElement::y1() && *y2p == LatticeElement::y2();
    let narain_u2 = if standard {
        Some(narain_from_omega(p)?.u_tilde.im)
    } else {
        None
    };
    Ok(BasisDiagnostics {
        tau,
        ratio_literal,
        narain_u2,
    })
}

/// A real number of the form `(sqrt(radicand) - offset) / sqrt(scale_sq)`
/// with rational data, `radicand >= 0`, `scale_sq > 0`. Its sign is decided
/// exactly: a single radical always compares against a rational by squaring
/// with sign guards.
#[derive(Clone, Debug, Serialize)]
pub struct RadicalGap {
    pub radicand: Rational,
    pub offset: Rational,
    pub scale_sq: Rational,
}

impl RadicalGap {
    /// Exact sign of the value.
    pub fn sign(&self) -> Ordering {
        match self.offset.sign() {
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => self.radicand.sign(),
            Ordering::Greater => self.radicand.cmp(&self.offset.square()),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sign() != Ordering::Less
    }

    /// Floating approximation (convenience only).
    pub fn approx(&self) -> f64 {
        (self.radicand.to_f64().sqrt() - self.offset.to_f64()) / self.scale_sq.to_f64().sqrt()
    }
}

/// The two certified gaps of the pairing lower bound at a normalized period:
/// for `r` with `(a1, a2) = (<r,y1>, <r,y2>) != (0,0)` and `d = a2 tau - a1`,
///
/// * `bound_gap  = |<w,r>| - <r,r> tau2 / (2|d|) - |d| u~2  >= 0`,
/// * `refined_gap = |Im(<w,r>/d)| - <r,r> tau2 / (2|d|^2) - u~2 >= 0`,
///
/// the second being the strengthened form. The first involves one square
/// root and is certified through [`RadicalGap`]; the second is an exact
/// rational.
#[derive(Clone, Debug, Serialize)]
pub struct PairingBoundGap {
    pub bound_gap: RadicalGap,
    pub refined_gap: Rational,
}

pub fn pairing_lower_bound_gap(p: &PeriodVector, r: &LatticeElement) -> Result<PairingBoundGap> {
    let (a1, a2) = (r.a[0], r.a[1]);
    if a1 == 0 && a2 == 0 {
        return Err(Error::VectorInVperp);
    }
    let tube = tube_from_omega(p)?;
    let omega = omega_from_tube(&tube);
    let narain = narain_from_tube(&tube);
    let u2 = narain.u_tilde.im.clone();
    let tau2 = tube.tau.im.clone();
    let s = Rational::from_int(lattice::pair(r, r, p.frame()));

    let pairing = omega.pair_with_element(r);
    let d = &tube.tau.scale(&Rational::from_int(a2)) - &GaussianRational::from_int(a1);
    let d_sq = d.abs_sq();
    debug_assert!(d_sq.is_positive());

    // Multiply the bound inequality by |d| > 0: the sign of the gap equals
    // the sign of sqrt(|<w,r>|^2 |d|^2) - (s tau2 / 2 + |d|^2 u~2).
    let radicand = &pairing.abs_sq() * &d_sq;
    let offset = &(&s * &tau2) * &Rational::new(1, 2) + &(&d_sq * &u2);
    let bound_gap = RadicalGap {
        radicand,
        offset,
        scale_sq: d_sq.clone(),
    };

    let im_ratio = (&pairing / &d).im.abs();
    let refined_gap = &(&im_ratio - &(&(&s * &tau2) / &(&Rational::from_int(2) * &d_sq))) - &u2;

    Ok(PairingBoundGap {
        bound_gap,
        refined_gap,
    })
}
