//! Integral lattices: the rank-20 ambient lattice in a frame-adapted basis,
//! pairing evaluation, primitive isotropic planes and their quotients, and
//! classification of the rank-16 definite factor.
//!
//! Elements are written `(a1, a2)(b1, b2)(c)` over the fixed splitting into
//! two hyperbolic pairs `x1, x2, y1, y2` and a definite factor: `x_i` carry
//! the `a` coordinates, `y_i` the `b` coordinates, and `<x_i, y_j> = delta_ij`
//! while `x` and `y` vectors are isotropic and orthogonal to the factor.

mod enumerate;
mod frames;

pub use enumerate::{enumerate_short_vectors, form_norm};
pub use frames::{Frame, LambdaKind};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IMat;

/// An element `(a1, a2)(b1, b2)(c)` of the rank-20 lattice.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeElement {
    pub a: [i64; 2],
    pub b: [i64; 2],
    pub c: [i64; 16],
}

impl LatticeElement {
    pub fn new(a: [i64; 2], b: [i64; 2], c: [i64; 16]) -> Self {
        LatticeElement { a, b, c }
    }

    pub fn zero() -> Self {
        LatticeElement::new([0, 0], [0, 0], [0; 16])
    }

    pub fn x1() -> Self {
        LatticeElement::new([1, 0], [0, 0], [0; 16])
    }

    pub fn x2() -> Self {
        LatticeElement::new([0, 1], [0, 0], [0; 16])
    }

    pub fn y1() -> Self {
        LatticeElement::new([0, 0], [1, 0], [0; 16])
    }

    pub fn y2() -> Self {
        LatticeElement::new([0, 0], [0, 1], [0; 16])
    }

    /// Embeds a vector of the definite factor as `(0,0)(0,0)(c)`.
    pub fn from_lambda(c: &[i64]) -> Self {
        let mut cc = [0i64; 16];
        cc.copy_from_slice(c);
        LatticeElement::new([0, 0], [0, 0], cc)
    }

    /// Coordinates in the order `a1, a2, b1, b2, c0..c15`.
    pub fn coords(&self) -> [i64; 20] {
        let mut v = [0i64; 20];
        v[0] = self.a[0];
        v[1] = self.a[1];
        v[2] = self.b[0];
        v[3] = self.b[1];
        v[4..].copy_from_slice(&self.c);
        v
    }

    pub fn from_coords(v: &[i64]) -> Self {
        assert_eq!(v.len(), 20);
        let mut c = [0i64; 16];
        c.copy_from_slice(&v[4..]);
        LatticeElement::new([v[0], v[1]], [v[2], v[3]], c)
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut v = self.coords();
        for x in &mut v {
            *x *= k;
        }
        LatticeElement::from_coords(&v)
    }
}

impl std::ops::Add for &LatticeElement {
    type Output = LatticeElement;
    fn add(self, rhs: &LatticeElement) -> LatticeElement {
        let a = self.coords();
        let b = rhs.coords();
        let mut v = [0i64; 20];
        for i in 0..20 {
            v[i] = a[i] + b[i];
        }
        LatticeElement::from_coords(&v)
    }
}

impl std::ops::Sub for &LatticeElement {
    type Output = LatticeElement;
    fn sub(self, rhs: &LatticeElement) -> LatticeElement {
        let a = self.coords();
        let b = rhs.coords();
        let mut v = [0i64; 20];
        for i in 0..20 {
            v[i] = a[i] - b[i];
        }
        LatticeElement::from_coords(&v)
    }
}

impl std::ops::Neg for &LatticeElement {
    type Output = LatticeElement;
    fn neg(self) -> LatticeElement {
        self.scaled(-1)
    }
}

impl std::fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{})({},{}){:?}",
            self.a[0], self.a[1], self.b[0], self.b[1], self.c
        )
    }
}

/// The symmetric bilinear pairing
/// `a1 b1' + a2 b2' + b1 a1' + b2 a2' + (c, c')`.
pub fn pair(e1: &LatticeElement, e2: &LatticeElement, frame: &Frame) -> i64 {
    let mut acc: i128 = 0;
    acc += e1.a[0] as i128 * e2.b[0] as i128;
    acc += e1.a[1] as i128 * e2.b[1] as i128;
    acc += e1.b[0] as i128 * e2.a[0] as i128;
    acc += e1.b[1] as i128 * e2.a[1] as i128;
    let g = frame.gram();
    for i in 0..16 {
        if e1.c[i] == 0 {
            continue;
        }
        for j in 0..16 {
            acc += e1.c[i] as i128 * e2.c[j] as i128 * g[i][j] as i128;
        }
    }
    i64::try_from(acc).expect("pairing fits i64")
}

/// Pairing on the definite factor only.
pub fn lambda_pair(c1: &[i64], c2: &[i64], frame: &Frame) -> i64 {
    let g = frame.gram();
    let mut acc: i128 = 0;
    for i in 0..16 {
        if c1[i] == 0 {
            continue;
        }
        for j in 0..16 {
            acc += c1[i] as i128 * c2[j] as i128 * g[i][j] as i128;
        }
    }
    i64::try_from(acc).expect("pairing fits i64")
}

/// The 20x20 Gram of the ambient lattice in the frame-adapted basis.
pub fn ambient_gram(frame: &Frame) -> IMat {
    IMat::from_fn(20, 20, |i, j| {
        let v = match (i, j) {
            (0, 2) | (2, 0) | (1, 3) | (3, 1) => 1,
            _ if i >= 4 && j >= 4 => frame.gram()[i - 4][j - 4],
            _ => 0,
        };
        BigInt::from(v)
    })
}

/// Short vectors of the (negated) frame Gram up to `bound`, canonically
/// ordered and cached per `(frame kind, bound)`: the standard shells are hit
/// in inner loops all over the crate.
pub fn lambda_short_vectors(frame: &Frame, bound: i64) -> std::sync::Arc<Vec<Vec<i64>>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex};
    static CACHE: once_cell::sync::Lazy<Mutex<HashMap<(LambdaKind, i64), Arc<Vec<Vec<i64>>>>>> =
        once_cell::sync::Lazy::new(|| Mutex::new(HashMap::new()));
    let mut cache = CACHE.lock().expect("shell cache lock");
    cache
        .entry((frame.kind(), bound))
        .or_insert_with(|| {
            Arc::new(
                enumerate_short_vectors(&frame.pos_gram(), bound).expect("frame Gram is definite"),
            )
        })
        .clone()
}

/// The 480 norm minus-two vectors of the definite factor, canonically ordered.
pub fn lambda_roots(frame: &Frame) -> std::sync::Arc<Vec<Vec<i64>>> {
    lambda_short_vectors(frame, 2)
}

/// A finite set of generators of a sublattice, with its frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeBasis {
    pub generators: Vec<LatticeElement>,
    pub frame: Frame,
}

impl SublatticeBasis {
    /// Validates linear independence of the generators.
    pub fn new(generators: Vec<LatticeElement>, frame: Frame) -> Result<Self> {
        let m = IMat::from_i64_rows(
            &generators
                .iter()
                .map(|g| g.coords().to_vec())
                .collect::<Vec<_>>(),
        );
        if m.rank() != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(SublatticeBasis { generators, frame })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    fn coord_matrix(&self) -> IMat {
        IMat::from_i64_rows(
            &self
                .generators
                .iter()
                .map(|g| g.coords().to_vec())
                .collect::<Vec<_>>(),
        )
    }
}

/// Saturated orthogonal complement `{x : <x, v> = 0 for all v}` of the span
/// of the generators, computed through the Smith normal form of the pairing
/// conditions. The result is primitive by construction.
pub fn orthogonal_complement(v: &SublatticeBasis) -> SublatticeBasis {
    let conditions = v.coord_matrix().mul(&ambient_gram(&v.frame));
    let kernel = conditions.kernel_rows();
    let generators = (0..kernel.rows())
        .map(|i| {
            let row: Vec<i64> = kernel
                .row(i)
                .iter()
                .map(|x| i64::try_from(x).expect("complement coordinate fits i64"))
                .collect();
            LatticeElement::from_coords(&row)
        })
        .collect();
    SublatticeBasis {
        generators,
        frame: v.frame.clone(),
    }
}

/// True iff the generators span a rank-two sublattice on which the pairing
/// vanishes identically and whose coordinate matrix has all elementary
/// divisors equal to one.
pub fn is_primitive_isotropic_rank2(v: &SublatticeBasis) -> bool {
    if v.generators.len() != 2 {
        return false;
    }
    let m = v.coord_matrix();
    if m.rank() != 2 {
        return false;
    }
    for g in &v.generators {
        if pair(g, g, &v.frame) != 0 {
            return false;
        }
    }
    if pair(&v.generators[0], &v.generators[1], &v.frame) != 0 {
        return false;
    }
    m.elementary_divisors().iter().all(|d| d.is_one())
}

/// The 16x16 Gram of the quotient `V-perp / V` for a primitive isotropic
/// plane `V`, over a basis completed through the Smith normal form.
pub fn quotient_gram(v: &SublatticeBasis) -> Result<Vec<Vec<i64>>> {
    if !is_primitive_isotropic_rank2(v) {
        return Err(Error::InvalidPlane {
            detail: "expected a rank-2 primitive isotropic sublattice".into(),
        });
    }
    let perp = orthogonal_complement(v);
    let b_perp = perp.coord_matrix();
    debug_assert_eq!(b_perp.rows(), 18);

    // Express the plane inside the complement and adapt the basis so its
    // first two vectors span the plane.
    let mut rows = Vec::with_capacity(2);
    for g in &v.generators {
        let coords: Vec<BigInt> = g.coords().iter().map(|&x| BigInt::from(x)).collect();
        let lambda = b_perp
            .solve_row(&coords)
            .ok_or_else(|| Error::InvalidPlane {
                detail: "plane is not contained in its complement".into(),
            })?;
        rows.push(lambda);
    }
    let m = IMat::from_fn(2, 18, |i, j| rows[i][j].clone());
    let snf = m.snf();
    if !(snf.d[(0, 0)].is_one() && snf.d[(1, 1)].is_one()) {
        return Err(Error::InvalidPlane {
            detail: "plane is not primitive inside its complement".into(),
        });
    }
    let v_inv = snf
        .v
        .inverse_unimodular()
        .expect("Smith transform is unimodular");
    let adapted = v_inv.mul(&b_perp);
    // Rows 2..18 descend to a basis of the quotient; the induced pairing is
    // well defined because the plane is the radical of the restricted form.
    let full = adapted
        .mul(&ambient_gram(&v.frame))
        .mul(&adapted.transpose());
    let mut out = vec![vec![0i64; 16]; 16];
    for i in 0..16 {
        for j in 0..16 {
            out[i][j] = i64::try_from(&full[(i + 2, j + 2)]).map_err(|_| Error::Overflow {
                context: "quotient Gram entry",
            })?;
        }
    }
    Ok(out)
}

/// Splits indices `0..n` into connected components of the graph whose edges
/// join non-orthogonal pairs.
pub(crate) fn pairing_components(
    n: usize,
    mut pairs: impl FnMut(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if pairs(i, j) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut buckets: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        buckets.entry(r).or_default().push(i);
    }
    buckets.into_values().collect()
}

/// Classifies a negative definite even unimodular 16x16 Gram by the component
/// structure of its root graph: two components of rank 8 with 240 roots each,
/// or a single component of rank 16 with 480 roots. Counts alone cannot
/// decide (both classes have 480 roots), so the component signature is used.
pub fn classify_rank16(gram: &[Vec<i64>]) -> Result<LambdaKind> {
    if gram.len() != 16 || gram.iter().any(|r| r.len() != 16) {
        return Err(Error::NotRecognizedRank16 {
            detail: "expected a 16x16 matrix".into(),
        });
    }
    let neg: Vec<Vec<i64>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| -x).collect())
        .collect();
    let roots = enumerate_short_vectors(&neg, 2).map_err(|e| Error::NotRecognizedRank16 {
        detail: format!("negated form is not positive definite: {e}"),
    })?;
    let roots: Vec<Vec<i64>> = roots
        .into_iter()
        .filter(|v| form_norm(&neg, v) == 2)
        .collect();
    let comps = pairing_components(roots.len(), |i, j| {
        form_norm_mixed(&neg, &roots[i], &roots[j]) != 0
    });
    let mut signature: Vec<(usize, usize)> = comps
        .iter()
        .map(|idx| {
            let rows: Vec<Vec<i64>> = idx.iter().map(|&i| roots[i].clone()).collect();
            (IMat::from_i64_rows(&rows).rank(), idx.len())
        })
        .collect();
    signature.sort();
    match signature.as_slice() {
        [(8, 240), (8, 240)] => Ok(LambdaKind::E8E8),
        [(16, 480)] => Ok(LambdaKind::D16Plus),
        other => Err(Error::NotRecognizedRank16 {
            detail: format!("root component signature {other:?}"),
        }),
    }
}

fn form_norm_mixed(gram: &[Vec<i64>], v: &[i64], w: &[i64]) -> i64 {
    let mut acc: i128 = 0;
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, &wj) in w.iter().enumerate() {
            acc += vi as i128 * wj as i128 * gram[i][j] as i128;
        }
    }
    i64::try_from(acc).expect("pairing fits i64")
}

/// Classifies a primitive isotropic plane by the isometry class of its
/// quotient.
pub fn classify_isotropic_plane(v: &SublatticeBasis) -> Result<LambdaKind> {
    let grm = quotient_gram(v)?;
    classify_rank16(&grm)
}

/// Searches (deterministically in `seed`) for a primitive isotropic plane
/// whose quotient has the requested class, over the family
/// `span(y1, (0, 2)(0, -(c,c)/4)(c))` with `(c, c) = 0 mod 8` and `c` not in
/// `2 Lambda`. Candidates `c` are sums of four pairwise-orthogonal roots
/// (norm -8); both quotient classes occur in this family. Returns `None` if
/// `max_tries` samples miss the target.
pub fn find_plane_with_quotient(
    frame: &Frame,
    target: LambdaKind,
    seed: u64,
    max_tries: u32,
) -> Option<SublatticeBasis> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots = lambda_roots(frame);
    for _ in 0..max_tries {
        let mut picked: Vec<&Vec<i64>> = Vec::new();
        let mut guard = 0;
        while picked.len() < 4 && guard < 400 {
            guard += 1;
            let cand = &roots[rng.gen_range(0..roots.len())];
            if picked.iter().all(|p| lambda_pair(p, cand, frame) == 0) {
                picked.push(cand);
            }
        }
        if picked.len() < 4 {
            continue;
        }
        let mut c = [0i64; 16];
        for p in picked {
            for (ci, pi) in c.iter_mut().zip(p) {
                *ci += pi;
            }
        }
        let norm = lambda_pair(&c, &c, frame);
        debug_assert_eq!(norm, -8);
        if c.iter().all(|x| x % 2 == 0) {
            continue;
        }
        let v2 = LatticeElement::new([0, 2], [0, -norm / 4], c);
        let plane = SublatticeBasis {
            generators: vec![LatticeElement::y1(), v2],
            frame: frame.clone(),
        };
        if !is_primitive_isotropic_rank2(&plane) {
            continue;
        }
        if classify_isotropic_plane(&plane) == Ok(target) {
            return Some(plane);
        }
    }
    None
}
