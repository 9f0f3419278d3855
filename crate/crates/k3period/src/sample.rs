//! Deterministic random generators for property suites and the self-test
//! command. Everything is driven by a caller-supplied RNG, so a fixed seed
//! reproduces a run exactly.

use rand::Rng;

use crate::lattice::{Frame, LatticeElement};
use crate::period::{reduce_sl2, NarainCoords, TubeCoords};
use crate::scalar::{GaussianRational, Rational};

pub fn rational(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> Rational {
    Rational::new(
        rng.gen_range(-num_bound..=num_bound),
        rng.gen_range(1..=den_bound),
    )
}

pub fn gaussian(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> GaussianRational {
    GaussianRational::new(
        rational(rng, num_bound, den_bound),
        rational(rng, num_bound, den_bound),
    )
}

/// A point of the upper half-plane with bounded rational coordinates.
pub fn upper_half(rng: &mut impl Rng) -> GaussianRational {
    GaussianRational::new(
        rational(rng, 4, 4),
        Rational::new(rng.gen_range(1..=12), rng.gen_range(1..=4)),
    )
}

/// A sparse vector of the complexified definite factor.
pub fn sparse_z(rng: &mut impl Rng, support: usize) -> Vec<GaussianRational> {
    let mut z = vec![GaussianRational::zero(); 16];
    for _ in 0..rng.gen_range(0..=support) {
        let idx = rng.gen_range(0..16);
        z[idx] = gaussian(rng, 2, 3);
    }
    z
}

/// A random point in the tube chart.
pub fn tube_point(rng: &mut impl Rng, frame: &Frame) -> TubeCoords {
    let tau = upper_half(rng);
    let z = sparse_z(rng, 2);
    // u2 must exceed -(z2, z2)/(2 tau2) >= 0.
    let z2: Vec<Rational> = z.iter().map(|g| g.im.clone()).collect();
    let zz: Rational = {
        let g = frame.gram();
        let mut acc = Rational::zero();
        for i in 0..16 {
            for j in 0..16 {
                if g[i][j] != 0 {
                    acc = &acc + &(&(&z2[i] * &z2[j]) * &Rational::from_int(g[i][j]));
                }
            }
        }
        acc
    };
    let floor = -&zz / (&Rational::from_int(2) * &tau.im);
    let u2 = &floor + &Rational::new(rng.gen_range(1..=8), rng.gen_range(1..=3));
    let u = GaussianRational::new(rational(rng, 4, 4), u2);
    TubeCoords::new(tau, u, z, frame.clone()).expect("sampled point satisfies the tube bound")
}

/// A random point in the Narain chart.
pub fn narain_point(rng: &mut impl Rng, frame: &Frame) -> NarainCoords {
    let tau = upper_half(rng);
    let u_tilde = GaussianRational::new(
        rational(rng, 4, 4),
        Rational::new(rng.gen_range(1..=12), rng.gen_range(1..=4)),
    );
    NarainCoords::new(tau, u_tilde, sparse_z(rng, 2), frame.clone())
        .expect("any pair of upper half-plane points is a Narain point")
}

/// A random Narain point satisfying the large-complex-structure test.
pub fn lcs_point(rng: &mut impl Rng, frame: &Frame) -> NarainCoords {
    let tau = upper_half(rng);
    let z = sparse_z(rng, 2);
    let rho = reduce_sl2(&tau).expect("upper half-plane").rho;
    // u~2 > max(rho, 2/sqrt(3)) certainly holds from rho + 2 upward.
    let u2 = &rho + &Rational::new(rng.gen_range(2..=6), 1);
    let u_tilde = GaussianRational::new(rational(rng, 4, 4), u2);
    NarainCoords::new(tau, u_tilde, z, frame.clone()).expect("constructed above the bound")
}

/// A random lattice element with sparse factor part.
pub fn lattice_element(rng: &mut impl Rng, bound: i64) -> LatticeElement {
    let mut c = [0i64; 16];
    for _ in 0..rng.gen_range(0..=3) {
        c[rng.gen_range(0..16)] = rng.gen_range(-bound..=bound);
    }
    LatticeElement::new(
        [rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)],
        [rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)],
        c,
    )
}

/// A random word in the standard generators of the unimodular group.
pub fn random_sl2(rng: &mut impl Rng, word_len: usize) -> [[i64; 2]; 2] {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(0..=word_len) {
        let g: [[i64; 2]; 2] = match rng.gen_range(0..3) {
            0 => [[1, 1], [0, 1]],
            1 => [[1, -1], [0, 1]],
            _ => [[0, -1], [1, 0]],
        };
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = m[i][0] * g[0][j] + m[i][1] * g[1][j];
            }
        }
        m = out;
    }
    m
}
