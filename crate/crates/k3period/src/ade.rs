//! Root systems orthogonal to a period point and their fiber-type meaning.
//!
//! A root here is a lattice vector `r` with `<r, r> = -2` and `<w, r> = 0`
//! for the period `w` under consideration. Inside the orthogonal complement
//! of the distinguished plane these are the vectors `(0,0)(b1,b2)(c)` with
//! `(c, c) = -2` and `b1 tau + b2 + (c, z) = 0`; that set depends only on
//! `(tau, z)`, not on the second chart coordinate. At points satisfying the
//! large-complex-structure test every root lies in the complement, so the
//! root system is constant along the chart fibers and the general search
//! reduces to the complement search.
//!
//! The set of roots decomposes uniquely into irreducible simply-laced
//! components, recognized by their (rank, root-count) fingerprint, which is
//! injective on A/D/E types in rank at most 16. Each component determines
//! its singular-fiber candidates; the correspondence cannot distinguish
//! `I2` from `III`, `I3` from `IV`, and never sees `I1` or `II`.

use std::collections::{BTreeSet, HashMap};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{self, form_norm, pairing_components, Frame, LatticeElement};
use crate::linalg::IMat;
use crate::period::{
    lcs_test, narain_from_tube, omega_from_tube, tube_from_omega, NarainCoords, PeriodVector,
};
use crate::scalar::{GaussianRational, Rational};

/// Label of an irreducible simply-laced root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdeLabel {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl std::fmt::Display for AdeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeLabel::A(n) => write!(f, "A{n}"),
            AdeLabel::D(n) => write!(f, "D{n}"),
            AdeLabel::E6 => write!(f, "E6"),
            AdeLabel::E7 => write!(f, "E7"),
            AdeLabel::E8 => write!(f, "E8"),
        }
    }
}

impl Serialize for AdeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Recognizes an irreducible component from its rank and root count.
/// A(n) has n^2 + n roots, D(n >= 4) has 2n^2 - 2n, E6/E7/E8 have
/// 72/126/240.
fn label_for(rank: usize, count: usize) -> Option<AdeLabel> {
    match (rank, count) {
        (6, 72) => Some(AdeLabel::E6),
        (7, 126) => Some(AdeLabel::E7),
        (8, 240) => Some(AdeLabel::E8),
        (n, c) if c == n * n + n => Some(AdeLabel::A(n as u32)),
        (n, c) if n >= 4 && c == 2 * n * n - 2 * n => Some(AdeLabel::D(n as u32)),
        _ => None,
    }
}

/// Singular-fiber candidates determined by a component label. `A1` and `A2`
/// are genuinely ambiguous; everything else pins a single type.
pub fn kodaira_candidates(label: AdeLabel) -> Vec<String> {
    match label {
        AdeLabel::A(1) => vec!["I2".into(), "III".into()],
        AdeLabel::A(2) => vec!["I3".into(), "IV".into()],
        AdeLabel::A(n) => vec![format!("I{}", n + 1)],
        AdeLabel::D(n) => vec![format!("I*_{}", n - 4)],
        AdeLabel::E6 => vec!["IV*".into()],
        AdeLabel::E7 => vec!["III*".into()],
        AdeLabel::E8 => vec!["II*".into()],
    }
}

/// Fiber types invisible to the lattice method: they contribute no roots.
pub fn undetectable_fibers() -> [&'static str; 2] {
    ["I1", "II"]
}

/// One irreducible component of a root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootComponent {
    pub roots: Vec<LatticeElement>,
    pub rank: usize,
    pub count: usize,
    pub label: AdeLabel,
}

impl Serialize for RootComponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RootComponent", 4)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("count", &self.count)?;
        st.serialize_field("kodaira", &kodaira_candidates(self.label))?;
        st.end()
    }
}

/// The decomposed root system of a period point. `complete` is true only
/// when the point passed the large-complex-structure test, which guarantees
/// the complement search saw every root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemReport {
    pub complete: bool,
    pub components: Vec<RootComponent>,
    pub roots: Vec<LatticeElement>,
}

impl Serialize for RootSystemReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RootSystemReport", 4)?;
        st.serialize_field("complete", &self.complete)?;
        st.serialize_field("components", &self.components)?;
        st.serialize_field("undetectable", &undetectable_fibers())?;
        st.serialize_field("roots", &self.roots)?;
        st.end()
    }
}

/// The roots `(0,0)(b1,b2)(c)` orthogonal to every period over `(tau, z)`:
/// for each factor root `c`, the unique real solution of
/// `b1 tau + b2 = -(c, z)` is kept when it is integral. Independent of the
/// second chart coordinate by construction.
pub fn roots_in_vperp(
    tau: &GaussianRational,
    z: &[GaussianRational],
    frame: &Frame,
) -> Result<Vec<LatticeElement>> {
    if !tau.im.is_positive() {
        return Err(Error::NotInUpperHalfPlane);
    }
    if z.len() != 16 {
        return Err(Error::InvalidInput {
            detail: format!("z has {} entries, expected 16", z.len()),
        });
    }
    let mut out = Vec::new();
    for c in lattice::lambda_roots(frame).iter() {
        let zeta = lambda_dot(c, z, frame);
        // b1 = -Im(c,z)/tau2, b2 = -Re(c,z) + Im(c,z) tau1/tau2.
        let b1 = -&zeta.im / &tau.im;
        let b2 = &(-&zeta.re) + &(&zeta.im * &(&tau.re / &tau.im));
        let (Some(b1), Some(b2)) = (b1.to_integer(), b2.to_integer()) else {
            continue;
        };
        let (Ok(b1), Ok(b2)) = (i64::try_from(&b1), i64::try_from(&b2)) else {
            return Err(Error::Overflow {
                context: "root b-coordinate",
            });
        };
        let mut cc = [0i64; 16];
        cc.copy_from_slice(&c);
        let r = LatticeElement::new([0, 0], [b1, b2], cc);
        // Re-verify both defining conditions exactly.
        debug_assert_eq!(lattice::pair(&r, &r, frame), -2);
        let check =
            &(&tau.scale(&Rational::from_int(b1)) + &GaussianRational::from_int(b2)) + &zeta;
        if !check.is_zero() {
            return Err(Error::InvalidInput {
                detail: "internal: reconstructed root fails its defining equation".into(),
            });
        }
        out.push(r);
    }
    out.sort_by_key(|r| r.coords());
    Ok(out)
}

fn lambda_dot(c: &[i64], z: &[GaussianRational], frame: &Frame) -> GaussianRational {
    let g = frame.gram();
    let mut acc = GaussianRational::zero();
    for i in 0..16 {
        if c[i] == 0 {
            continue;
        }
        for j in 0..16 {
            if g[i][j] != 0 && !z[j].is_zero() {
                acc = &acc + &z[j].scale(&Rational::from_int(c[i] * g[i][j]));
            }
        }
    }
    acc
}

/// Box-bounded search for all roots of a period: `r = (a1,a2)(b1,b2)(c)`
/// with `|a_i|, |b_i| <= box_bound`, `(c, c) >= -c_norm_bound`,
/// `<r, r> = -2` and `<w, r> = 0`. At points passing the
/// large-complex-structure test every root lies in the complement of the
/// plane, where the linear solve of [`roots_in_vperp`] is exhaustive without
/// any box; that set is merged in and the result is the full root system
/// (`complete = true`). Elsewhere the outcome is best effort within the box
/// and flagged accordingly.
pub fn find_roots_general(
    p: &PeriodVector,
    box_bound: i64,
    c_norm_bound: i64,
) -> Result<(Vec<LatticeElement>, bool)> {
    let tube = tube_from_omega(p)?;
    let omega = omega_from_tube(&tube);
    let complete = lcs_test(&narain_from_tube(&tube)).is_lcs;
    let frame = p.frame();

    // Group candidate factor vectors by exact norm, keyed by their pairing
    // with z for O(1) lookups inside the box loops.
    let mut by_norm: HashMap<i64, HashMap<GaussianRational, Vec<Vec<i64>>>> = HashMap::new();
    if c_norm_bound >= 2 {
        let pos = frame.pos_gram();
        for v in lattice::lambda_short_vectors(frame, c_norm_bound).iter() {
            let n = form_norm(&pos, v);
            let key = lambda_dot(v, tube.z(), frame);
            by_norm
                .entry(n)
                .or_default()
                .entry(key)
                .or_default()
                .push(v.clone());
        }
    }

    let tau = tube.tau().clone();
    let u = tube.u().clone();
    let w = omega.b()[1].clone();

    let mut out = Vec::new();
    let bb = box_bound;
    for a1 in -bb..=bb {
        for a2 in -bb..=bb {
            for b1 in -bb..=bb {
                for b2 in -bb..=bb {
                    let needed = -2 - 2 * (a1 * b1 + a2 * b2);
                    if needed > 0 || -needed > c_norm_bound {
                        continue;
                    }
                    // <w, r> = b1 tau + b2 + a1 u + a2 w + (c, z).
                    let val = &(&(&tau.scale(&Rational::from_int(b1))
                        + &GaussianRational::from_int(b2))
                        + &u.scale(&Rational::from_int(a1)))
                        + &w.scale(&Rational::from_int(a2));
                    if needed == 0 {
                        if val.is_zero() && (a1, a2, b1, b2) != (0, 0, 0, 0) {
                            out.push(LatticeElement::new([a1, a2], [b1, b2], [0; 16]));
                        }
                        continue;
                    }
                    let Some(bucket) = by_norm.get(&-needed) else {
                        continue;
                    };
                    let Some(cands) = bucket.get(&(-&val)) else {
                        continue;
                    };
                    for c in cands {
                        let mut cc = [0i64; 16];
                        cc.copy_from_slice(c);
                        let r = LatticeElement::new([a1, a2], [b1, b2], cc);
                        // Exact post-verification of both conditions.
                        if lattice::pair(&r, &r, frame) == -2
                            && omega.pair_with_element(&r).is_zero()
                        {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    if complete {
        // The complement part needs no box; merging it makes the returned
        // set the full root system whenever the flag promises completeness.
        out.extend(roots_in_vperp(tube.tau(), tube.z(), frame)?);
    }
    let mut seen = BTreeSet::new();
    out.retain(|r| seen.insert(r.coords()));
    out.sort_by_key(|r| r.coords());
    Ok((out, complete))
}

/// Unique decomposition of a root set into irreducible components: connected
/// components of the non-orthogonality graph, labeled by their
/// (rank, count) fingerprint.
pub fn decompose_root_system(
    roots: &[LatticeElement],
    frame: &Frame,
) -> Result<Vec<RootComponent>> {
    for r in roots {
        if lattice::pair(r, r, frame) != -2 {
            return Err(Error::NotARootSystem {
                detail: format!(
                    "element {r:?} has self-pairing {}",
                    lattice::pair(r, r, frame)
                ),
            });
        }
    }
    {
        let mut seen = std::collections::BTreeSet::new();
        for r in roots {
            if !seen.insert(r.coords()) {
                return Err(Error::NotARootSystem {
                    detail: "duplicate root in input".into(),
                });
            }
        }
    }
    let comps = pairing_components(roots.len(), |i, j| {
        lattice::pair(&roots[i], &roots[j], frame) != 0
    });
    let mut out = Vec::new();
    for idx in comps {
        let mut members: Vec<LatticeElement> = idx.iter().map(|&i| roots[i].clone()).collect();
        members.sort_by_key(|r| r.coords());
        let rows: Vec<Vec<i64>> = members.iter().map(|r| r.coords().to_vec()).collect();
        let rank = IMat::from_i64_rows(&rows).rank();
        let count = members.len();
        let label = label_for(rank, count).ok_or_else(|| Error::NotARootSystem {
            detail: format!("component signature (rank {rank}, count {count}) is not simply laced"),
        })?;
        out.push(RootComponent {
            roots: members,
            rank,
            count,
            label,
        });
    }
    out.sort_by(|a, b| {
        (a.rank, a.count, a.roots.first().map(LatticeElement::coords)).cmp(&(
            b.rank,
            b.count,
            b.roots.first().map(LatticeElement::coords),
        ))
    });
    Ok(out)
}

/// Assembles the full report for a root set.
pub fn report(
    roots: Vec<LatticeElement>,
    frame: &Frame,
    complete: bool,
) -> Result<RootSystemReport> {
    let components = decompose_root_system(&roots, frame)?;
    Ok(RootSystemReport {
        complete,
        components,
        roots,
    })
}

/// Recomputes the root system at several chart heights over a fixed
/// `(tau, z)` and checks the sets are identical. Every sample must pass the
/// large-complex-structure test; a mismatch across samples contradicts
/// fiber constancy and is reported as an error rather than patched over.
pub fn fiber_constancy_scan(
    tau: &GaussianRational,
    z: &[GaussianRational],
    u_tilde_samples: &[GaussianRational],
    frame: &Frame,
    box_bound: i64,
    c_norm_bound: i64,
) -> Result<RootSystemReport> {
    if u_tilde_samples.is_empty() {
        return Err(Error::InvalidInput {
            detail: "no chart samples given".into(),
        });
    }
    let mut common: Option<Vec<LatticeElement>> = None;
    for (k, u) in u_tilde_samples.iter().enumerate() {
        let n = NarainCoords::new(tau.clone(), u.clone(), z.to_vec(), frame.clone())?;
        let rep = lcs_test(&n);
        if !rep.is_lcs {
            return Err(Error::NotLcsSample {
                detail: format!("sample {k} (u~ = {u}) fails the test"),
            });
        }
        let p = crate::period::omega_from_narain(&n);
        let (roots, _) = find_roots_general(&p, box_bound, c_norm_bound)?;
        match &common {
            None => common = Some(roots),
            Some(prev) => {
                if prev != &roots {
                    return Err(Error::FiberMismatch {
                        detail: format!(
                            "sample {k} found {} roots, previous samples found {}",
                            roots.len(),
                            prev.len()
                        ),
                    });
                }
            }
        }
    }
    report(common.expect("at least one sample"), frame, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LambdaKind;

    fn gr(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(Rational::from_int(re), Rational::from_int(im))
    }

    fn zero_z() -> Vec<GaussianRational> {
        vec![GaussianRational::zero(); 16]
    }

    #[test]
    fn all_roots_at_origin() {
        let frame = Frame::e8e8();
        let roots = roots_in_vperp(&gr(0, 1), &zero_z(), &frame).unwrap();
        assert_eq!(roots.len(), 480);
        assert!(roots.iter().all(|r| r.b == [0, 0]));
        let comps = decompose_root_system(&roots, &frame).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!((c.rank, c.count), (8, 240));
            assert_eq!(c.label, AdeLabel::E8);
            assert_eq!(kodaira_candidates(c.label), vec!["II*".to_string()]);
        }
    }

    #[test]
    fn d16_frame_has_single_component() {
        let frame = Frame::d16plus();
        let roots = roots_in_vperp(&gr(0, 1), &zero_z(), &frame).unwrap();
        assert_eq!(roots.len(), 480);
        let comps = decompose_root_system(&roots, &frame).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].label, AdeLabel::D(16));
        assert_eq!(
            kodaira_candidates(comps[0].label),
            vec!["I*_12".to_string()]
        );
    }

    #[test]
    fn generic_z_kills_all_roots() {
        let frame = Frame::e8e8();
        // A z with (c, z) never in Z + Zi over all 480 roots; verified below.
        let mut z = zero_z();
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = GaussianRational::from_rational(Rational::new(1, 3 + i as i64));
        }
        let mut premise_holds = true;
        for c in lattice::lambda_roots(&frame).iter() {
            let zeta = lambda_dot(c, &z, &frame);
            if zeta.re.is_integer() && zeta.im.is_integer() {
                premise_holds = false;
            }
        }
        assert!(premise_holds, "test vector z is not generic enough");
        assert!(roots_in_vperp(&gr(0, 1), &z, &frame).unwrap().is_empty());
    }

    #[test]
    fn second_factor_twist_keeps_first_factor() {
        let frame = Frame::e8e8();
        // Put a generic twist on the second rank-8 block of the factor.
        let mut z = zero_z();
        for i in 8..16 {
            z[i] = GaussianRational::from_rational(Rational::new(1, 5 + i as i64));
        }
        let roots = roots_in_vperp(&gr(0, 1), &z, &frame).unwrap();
        assert_eq!(roots.len(), 240);
        let comps = decompose_root_system(&roots, &frame).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].label, AdeLabel::E8);
    }

    #[test]
    fn decomposition_is_permutation_invariant() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let frame = Frame::e8e8();
        // One block's roots decompose as a single rank-8 component.
        let mut roots: Vec<LatticeElement> = lattice::lambda_roots(&frame)
            .iter()
            .filter(|c| c[8..].iter().all(|&x| x == 0))
            .map(|c| LatticeElement::from_lambda(c))
            .collect();
        assert_eq!(roots.len(), 240);
        let base = decompose_root_system(&roots, &frame).unwrap();
        assert_eq!(base.len(), 1);
        assert_eq!(base[0].label, AdeLabel::E8);
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..5 {
            roots.shuffle(&mut rng);
            assert_eq!(decompose_root_system(&roots, &frame).unwrap(), base);
        }
    }

    #[test]
    fn single_pair_is_a1() {
        let frame = Frame::e8e8();
        let roots = lattice::lambda_roots(&frame);
        let r = LatticeElement::from_lambda(&roots[0]);
        let comps = decompose_root_system(&[r.clone(), -&r], &frame).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!((comps[0].rank, comps[0].count), (1, 2));
        assert_eq!(comps[0].label, AdeLabel::A(1));
        assert_eq!(
            kodaira_candidates(comps[0].label),
            vec!["I2".to_string(), "III".to_string()]
        );
    }

    #[test]
    fn kodaira_table_rows() {
        assert_eq!(kodaira_candidates(AdeLabel::A(3)), vec!["I4"]);
        assert_eq!(kodaira_candidates(AdeLabel::D(5)), vec!["I*_1"]);
        assert_eq!(kodaira_candidates(AdeLabel::D(4)), vec!["I*_0"]);
        assert_eq!(kodaira_candidates(AdeLabel::E6), vec!["IV*"]);
        assert_eq!(kodaira_candidates(AdeLabel::E7), vec!["III*"]);
        assert_eq!(undetectable_fibers(), ["I1", "II"]);
    }

    #[test]
    fn general_search_at_lcs_point_matches_complement_search() {
        let frame = Frame::e8e8();
        let n = NarainCoords::new(gr(0, 1), gr(0, 2), zero_z(), frame.clone()).unwrap();
        let p = crate::period::omega_from_narain(&n);
        let (found, complete) = find_roots_general(&p, 2, 2).unwrap();
        assert!(complete);
        let vperp = roots_in_vperp(&gr(0, 1), &zero_z(), &frame).unwrap();
        assert_eq!(found, vperp);
    }

    #[test]
    fn planted_root_outside_complement_is_found() {
        let frame = Frame::e8e8();
        // At u = tau the vector r = x1 - y1 satisfies <w, r> = u - tau = 0
        // and <r, r> = -2: a planted root with nonzero a-part.
        let tau = gr(0, 1);
        let t = crate::period::TubeCoords::new(tau.clone(), tau.clone(), zero_z(), frame.clone())
            .unwrap();
        let p = omega_from_tube(&t);
        let r = &LatticeElement::x1() - &LatticeElement::y1();
        assert_eq!(lattice::pair(&r, &r, &frame), -2);
        assert!(p.pair_with_element(&r).is_zero());
        let (found, complete) = find_roots_general(&p, 1, 2).unwrap();
        assert!(!complete, "u~2 = 1 fails the large-structure test");
        assert!(found.contains(&r));
        // The box restriction to a = b = 0 reduces to the complement search.
        let (found0, _) = find_roots_general(&p, 0, 2).unwrap();
        assert!(found0.iter().all(|x| x.a == [0, 0] && x.b == [0, 0]));
    }

    #[test]
    fn fiber_scan_constant_sets() {
        let frame = Frame::e8e8();
        let samples = vec![
            gr(0, 2),
            gr(0, 3),
            GaussianRational::new(Rational::zero(), Rational::new(5, 2)),
        ];
        let rep = fiber_constancy_scan(&gr(0, 1), &zero_z(), &samples, &frame, 1, 2).unwrap();
        assert!(rep.complete);
        assert_eq!(rep.roots.len(), 480);
        assert_eq!(rep.components.len(), 2);

        // A non-LCS sample is rejected up front.
        let bad = vec![gr(0, 2), gr(0, 1)];
        assert!(matches!(
            fiber_constancy_scan(&gr(0, 1), &zero_z(), &bad, &frame, 1, 2),
            Err(Error::NotLcsSample { .. })
        ));
    }

    #[test]
    fn fiber_scan_with_no_roots_is_constantly_empty() {
        let frame = Frame::e8e8();
        let mut z = zero_z();
        for (k, zk) in z.iter_mut().enumerate() {
            *zk = GaussianRational::from_rational(Rational::new(1, 3 + k as i64));
        }
        let samples = vec![gr(0, 2), gr(0, 3), gr(1, 4)];
        let rep = fiber_constancy_scan(&gr(0, 1), &z, &samples, &frame, 1, 2).unwrap();
        assert!(rep.complete);
        assert!(rep.roots.is_empty());
        assert!(rep.components.is_empty());
    }

    #[test]
    fn factor_isometries_move_roots_equivariantly() {
        use crate::parabolic::{sample_in_class, GeneratorClass, SampleBounds};
        let frame = Frame::e8e8();
        // A twist supported in the second block leaves one component.
        let mut z = zero_z();
        for k in 8..16 {
            z[k] = GaussianRational::from_rational(Rational::new(1, 5 + k as i64));
        }
        let base = roots_in_vperp(&gr(0, 1), &z, &frame).unwrap();
        assert_eq!(base.len(), 240);
        for seed in 0..10 {
            let g = sample_in_class(
                seed,
                GeneratorClass::FactorIsometry,
                &SampleBounds::default(),
                &frame,
            );
            let f = g.f();
            let map_c = |c: &[i64; 16]| -> [i64; 16] {
                let mut out = [0i64; 16];
                for (i, o) in out.iter_mut().enumerate() {
                    for (j, cj) in c.iter().enumerate() {
                        *o += f[i][j] * cj;
                    }
                }
                out
            };
            let moved_z: Vec<GaussianRational> = (0..16)
                .map(|i| {
                    let mut acc = GaussianRational::zero();
                    for (j, zj) in z.iter().enumerate() {
                        if f[i][j] != 0 {
                            acc = &acc + &zj.scale(&Rational::from_int(f[i][j]));
                        }
                    }
                    acc
                })
                .collect();
            let moved = roots_in_vperp(&gr(0, 1), &moved_z, &frame).unwrap();
            // The root set maps by f (b-parts fixed, c-parts rotated)...
            let mut expected: Vec<LatticeElement> = base
                .iter()
                .map(|r| LatticeElement::new(r.a, r.b, map_c(&r.c)))
                .collect();
            expected.sort_by_key(|r| r.coords());
            assert_eq!(moved, expected);
            // ... so the component labels are unchanged.
            let labels: Vec<AdeLabel> = decompose_root_system(&moved, &frame)
                .unwrap()
                .iter()
                .map(|c| c.label)
                .collect();
            assert_eq!(labels, vec![AdeLabel::E8]);
        }
    }

    #[test]
    fn report_serialization_shape() {
        let frame = Frame::d16plus();
        let roots = roots_in_vperp(&gr(0, 1), &zero_z(), &frame).unwrap();
        let rep = report(roots, &frame, true).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["complete"], serde_json::json!(true));
        assert_eq!(json["components"][0]["label"], serde_json::json!("D16"));
        assert_eq!(json["components"][0]["rank"], serde_json::json!(16));
        assert_eq!(json["components"][0]["count"], serde_json::json!(480));
        assert_eq!(
            json["components"][0]["kodaira"][0],
            serde_json::json!("I*_12")
        );
        assert_eq!(json["undetectable"][0], serde_json::json!("I1"));
        let _ = LambdaKind::D16Plus;
    }
}
