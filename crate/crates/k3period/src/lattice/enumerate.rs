//! Exact short-vector enumeration in positive definite integral forms.
//!
//! Branch-and-bound over a rational Cholesky (LDL) decomposition in the
//! Fincke-Pohst style. All pruning bounds are exact rationals; the integer
//! ranges at each level are derived from floor/ceil of shifted square roots,
//! each candidate endpoint re-checked by an exact predicate. Output is
//! canonically ordered: representatives (first nonzero coordinate positive)
//! sorted lexicographically, each followed by its negative.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// LDL data: `weights[i]` is the coefficient of the completed square at level
/// `i`, `mu[i][j]` (j > i) the shift multipliers.
struct Ldl {
    weights: Vec<Rational>,
    mu: Vec<Vec<Rational>>,
}

fn ldl(gram: &[Vec<i64>]) -> Result<Ldl> {
    let n = gram.len();
    for (i, row) in gram.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput {
                detail: "Gram matrix is not square".into(),
            });
        }
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::NotPositiveDefinite {
                    detail: format!("not symmetric at ({i}, {j})"),
                });
            }
        }
    }
    let mut q: Vec<Vec<Rational>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| Rational::from_int(x)).collect())
        .collect();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::NotPositiveDefinite {
                detail: format!("pivot {i} is {} <= 0", q[i][i]),
            });
        }
        for j in i + 1..n {
            let original = q[i][j].clone();
            q[j][i] = original.clone();
            q[i][j] = &original / &q[i][i];
        }
        for k in i + 1..n {
            let factor = q[k][i].clone();
            if factor.is_zero() {
                continue;
            }
            for l in k..n {
                let t = &factor * &q[i][l];
                q[k][l] = &q[k][l] - &t;
            }
        }
    }
    let weights = (0..n).map(|i| q[i][i].clone()).collect();
    let mu = (0..n)
        .map(|i| (i + 1..n).map(|j| q[i][j].clone()).collect())
        .collect();
    Ok(Ldl { weights, mu })
}

/// Largest integer `<= sqrt(t)` for rational `t >= 0`.
fn floor_sqrt(t: &Rational) -> BigInt {
    debug_assert!(!t.is_negative());
    // floor(sqrt(p/q)) = isqrt(floor(p/q)) for nonnegative rationals.
    t.floor().max(BigInt::zero()).sqrt()
}

/// Largest integer `x` with `x + s <= sqrt(t)`.
fn upper_bound(s: &Rational, t: &Rational) -> BigInt {
    let base = (-s).floor();
    let r = floor_sqrt(t);
    let holds = |x: &BigInt| {
        let v = Rational::from_bigint(x.clone()) + s;
        !v.is_positive() || v.square() <= *t
    };
    let mut x = &base + &r + BigInt::from(1);
    while !holds(&x) {
        x -= 1;
    }
    x
}

/// Smallest integer `x` with `x + s >= -sqrt(t)`.
fn lower_bound(s: &Rational, t: &Rational) -> BigInt {
    let base = (-s).floor();
    let r = floor_sqrt(t);
    let holds = |x: &BigInt| {
        let v = Rational::from_bigint(x.clone()) + s;
        !v.is_negative() || v.square() <= *t
    };
    let mut x = &base - &r - BigInt::from(1);
    while !holds(&x) {
        x += 1;
    }
    x
}

/// All nonzero integer vectors `v` with `v^t G v <= bound` for a symmetric
/// positive definite integral `G`, in canonical order (each +- pair adjacent,
/// positive representative first, representatives sorted lexicographically).
pub fn enumerate_short_vectors(gram: &[Vec<i64>], bound: i64) -> Result<Vec<Vec<i64>>> {
    let n = gram.len();
    let ldl = ldl(gram)?;
    if bound <= 0 || n == 0 {
        return Ok(Vec::new());
    }

    let mut reps: Vec<Vec<i64>> = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    // shifts[i] = sum_{j>i} mu[i][j] x_j, used[i] = weight of levels > i.
    let mut shifts = vec![Rational::zero(); n];
    let mut used = vec![Rational::zero(); n];
    let budget = Rational::from_int(bound);

    // Depth-first over levels n-1 down to 0; level state holds the current
    // integer and its upper end.
    struct Level {
        hi: BigInt,
    }
    let mut stack: Vec<Level> = Vec::with_capacity(n);

    let enter = |level: usize,
                 x: &mut [BigInt],
                 shifts: &mut [Rational],
                 used: &mut [Rational],
                 ldl: &Ldl,
                 budget: &Rational|
     -> Option<Level> {
        let remaining = budget - &used[level];
        if remaining.is_negative() {
            return None;
        }
        let s = {
            let mut s = Rational::zero();
            for j in level + 1..x.len() {
                let m = &ldl.mu[level][j - level - 1];
                if !m.is_zero() {
                    s = s + m * &Rational::from_bigint(x[j].clone());
                }
            }
            s
        };
        let t = &remaining / &ldl.weights[level];
        let lo = lower_bound(&s, &t);
        let hi = upper_bound(&s, &t);
        if lo > hi {
            return None;
        }
        shifts[level] = s;
        x[level] = lo;
        Some(Level { hi })
    };

    let mut level = n - 1;
    used[n - 1] = Rational::zero();
    match enter(level, &mut x, &mut shifts, &mut used, &ldl, &budget) {
        Some(l) => stack.push(l),
        None => return Ok(Vec::new()),
    }

    'outer: loop {
        // stack.len() == n - level; x[level] is the candidate at this level.
        if x[level] > stack.last().unwrap().hi {
            // Exhausted this level; pop.
            stack.pop();
            if level == n - 1 {
                break 'outer;
            }
            level += 1;
            x[level] += 1;
            continue;
        }
        if level == 0 {
            // Leaf: full vector chosen.
            let v = Rational::from_bigint(x[0].clone()) + &shifts[0];
            let norm = &used[0] + &(&ldl.weights[0] * &v.square());
            debug_assert!(norm <= budget);
            if x.iter().any(|c| !c.is_zero()) {
                let vec_i64: Option<Vec<i64>> = x.iter().map(|c| i64::try_from(c).ok()).collect();
                let mut v = vec_i64.ok_or(Error::Overflow {
                    context: "short-vector coordinate",
                })?;
                if let Some(first) = v.iter().find(|&&c| c != 0) {
                    if *first < 0 {
                        for c in &mut v {
                            *c = -*c;
                        }
                    }
                }
                reps.push(v);
            }
            x[0] += 1;
            continue;
        }
        // Descend.
        let v = Rational::from_bigint(x[level].clone()) + &shifts[level];
        used[level - 1] = &used[level] + &(&ldl.weights[level] * &v.square());
        level -= 1;
        match enter(level, &mut x, &mut shifts, &mut used, &ldl, &budget) {
            Some(l) => stack.push(l),
            None => {
                level += 1;
                x[level] += 1;
            }
        }
    }

    reps.sort();
    reps.dedup();
    let mut out = Vec::with_capacity(reps.len() * 2);
    for r in reps {
        let neg: Vec<i64> = r.iter().map(|&c| -c).collect();
        out.push(r);
        out.push(neg);
    }
    Ok(out)
}

/// Exact norm `v^t G v` (i128 accumulation).
pub fn form_norm(gram: &[Vec<i64>], v: &[i64]) -> i64 {
    let mut acc: i128 = 0;
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, &vj) in v.iter().enumerate() {
            acc += vi as i128 * vj as i128 * gram[i][j] as i128;
        }
    }
    i64::try_from(acc).expect("form norm fits i64")
}
