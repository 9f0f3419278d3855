//! Built-in invariant suites. Each suite prints one `ok`/`FAIL` line; the
//! command exits nonzero iff any suite fails. Deterministic for a given
//! seed.

use std::cmp::Ordering;

use rand::rngs::StdRng;
use rand::SeedableRng;

use k3period::ade;
use k3period::lattice::{
    classify_isotropic_plane, classify_rank16, enumerate_short_vectors, form_norm,
    is_primitive_isotropic_rank2, Frame, LatticeElement, SublatticeBasis,
};
use k3period::parabolic::{
    sample_in_class, sample_parabolic, GeneralIsometry, GeneratorClass, SampleBounds,
};
use k3period::period::{
    lcs_test, moebius, narain_from_omega, narain_from_tube, omega_from_narain, omega_from_tube,
    pairing_lower_bound_gap, reduce_sl2, tube_from_narain, tube_from_omega,
};
use k3period::sample;
use k3period::scalar::{GaussianRational, Rational};

use crate::Ctx;

type SuiteResult = Result<String, String>;

fn suite_scalars(seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..200 {
        let x = sample::gaussian(&mut rng, 30, 10);
        let y = sample::gaussian(&mut rng, 30, 10);
        let z = sample::gaussian(&mut rng, 30, 10);
        if &(&x * &y) * &z != &x * &(&y * &z) {
            return Err("associativity failed".into());
        }
        if &x * &(&y + &z) != &(&x * &y) + &(&x * &z) {
            return Err("distributivity failed".into());
        }
        if (&x * &y).abs_sq() != &x.abs_sq() * &y.abs_sq() {
            return Err("abs_sq multiplicativity failed".into());
        }
        if !x.is_zero() && &x * &x.recip() != GaussianRational::one() {
            return Err("inverse failed".into());
        }
    }
    Ok("200 random triples".into())
}

fn suite_root_counts(_seed: u64) -> SuiteResult {
    for (frame, label) in [(Frame::e8e8(), "e8e8"), (Frame::d16plus(), "d16plus")] {
        let pos = frame.pos_gram();
        let roots = enumerate_short_vectors(&pos, 2).map_err(|e| e.to_string())?;
        if roots.len() != 480 {
            return Err(format!("{label}: {} roots, expected 480", roots.len()));
        }
        let shell4 = enumerate_short_vectors(&pos, 4).map_err(|e| e.to_string())?;
        let n4 = shell4.iter().filter(|v| form_norm(&pos, v) == 4).count();
        if n4 != 61920 {
            return Err(format!("{label}: norm-4 count {n4}, expected 61920"));
        }
    }
    Ok("480 roots and 61920 norm-4 vectors in both frames".into())
}

fn suite_classification(_seed: u64) -> SuiteResult {
    for frame in [Frame::e8e8(), Frame::d16plus()] {
        if classify_rank16(frame.gram()).map_err(|e| e.to_string())? != frame.kind() {
            return Err(format!("standard Gram of {:?} misclassified", frame.kind()));
        }
        let v = SublatticeBasis::new(
            vec![LatticeElement::y1(), LatticeElement::y2()],
            frame.clone(),
        )
        .map_err(|e| e.to_string())?;
        if !is_primitive_isotropic_rank2(&v) {
            return Err("standard plane not primitive isotropic".into());
        }
        if classify_isotropic_plane(&v).map_err(|e| e.to_string())? != frame.kind() {
            return Err("standard plane misclassified".into());
        }
    }
    Ok("standard Grams and planes".into())
}

fn suite_charts(seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x11);
    for frame in [Frame::e8e8(), Frame::d16plus()] {
        for _ in 0..50 {
            let t = sample::tube_point(&mut rng, &frame);
            let p = omega_from_tube(&t);
            if tube_from_omega(&p).map_err(|e| e.to_string())? != t {
                return Err("tube roundtrip failed".into());
            }
            let n = narain_from_tube(&t);
            if tube_from_narain(&n) != t {
                return Err("Narain roundtrip failed".into());
            }
            let expect = &(&Rational::from_int(4) * &t.tau().im) * &n.u_tilde().im;
            if p.pair_with_conjugate() != expect {
                return Err("pairing identity failed".into());
            }
            if !p.component_marker().is_positive() {
                return Err("component marker not positive".into());
            }
        }
    }
    Ok("100 random points, both frames".into())
}

fn suite_reduction(seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x22);
    for _ in 0..100 {
        let tau = sample::upper_half(&mut rng);
        let r = reduce_sl2(&tau).map_err(|e| e.to_string())?;
        let m = sample::random_sl2(&mut rng, 5);
        let moved = moebius(&m, &tau);
        if reduce_sl2(&moved).map_err(|e| e.to_string())?.rho != r.rho {
            return Err("rho not orbit-invariant".into());
        }
        if r.rho.cmp_sqrt(&Rational::new(3, 4)) == Ordering::Less {
            return Err("rho below sqrt(3)/2".into());
        }
    }
    let half_i = GaussianRational::new(Rational::zero(), Rational::new(1, 2));
    let r = reduce_sl2(&half_i).map_err(|e| e.to_string())?;
    if r.rho != Rational::from_int(2) || r.m != [[0, -1], [1, 0]] {
        return Err("worked reduction of i/2 failed".into());
    }
    Ok("100 orbit checks plus worked cases".into())
}

fn suite_parabolic(seed: u64, frame: &Frame) -> SuiteResult {
    let bounds = SampleBounds::default();
    for k in 0..100 {
        let g1 = sample_parabolic(seed.wrapping_add(k), &bounds, frame);
        let g2 = sample_parabolic(seed.wrapping_add(k + 7919), &bounds, frame);
        let composed = g1.compose(&g2).map_err(|e| e.to_string())?;
        // Matrix-product oracle.
        let mut prod = vec![vec![0i64; 20]; 20];
        let (a, b) = (g1.matrix(), g2.matrix());
        for i in 0..20 {
            for l in 0..20 {
                if a[i][l] == 0 {
                    continue;
                }
                for j in 0..20 {
                    prod[i][j] += a[i][l] * b[l][j];
                }
            }
        }
        if composed.matrix() != prod {
            return Err(format!("composition law mismatch at sample {k}"));
        }
        let (shear, rotation, factor) = g1.decompose().map_err(|e| e.to_string())?;
        let back = shear
            .compose(&rotation)
            .and_then(|h| h.compose(&factor))
            .map_err(|e| e.to_string())?;
        if back != g1 {
            return Err(format!("three-factor decomposition mismatch at sample {k}"));
        }
        if g1
            .compose(&g1.inverse().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            != k3period::parabolic::ParabolicIsometry::identity(frame.clone())
        {
            return Err(format!("inverse mismatch at sample {k}"));
        }
    }
    Ok("100 sampled elements".into())
}

fn suite_closed_forms(seed: u64, frame: &Frame) -> SuiteResult {
    let bounds = SampleBounds::default();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x33);
    for k in 0..20 {
        for class in [
            GeneratorClass::Rotation,
            GeneratorClass::FactorIsometry,
            GeneratorClass::Shear,
        ] {
            let g = sample_in_class(seed.wrapping_add(k), class, &bounds, frame);
            let n = sample::narain_point(&mut rng, frame);
            let fast = g.narain_transform(&n).map_err(|e| e.to_string())?;
            let p = omega_from_narain(&n);
            let slow = narain_from_omega(&g.act_on_period(&p).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if fast != slow {
                return Err(format!("closed form disagreed for {class:?} sample {k}"));
            }
            if fast.u_tilde().im != n.u_tilde().im {
                return Err("Im(u~) not invariant".into());
            }
        }
    }
    Ok("60 per-class agreements".into())
}

fn suite_lcs_action(seed: u64, frame: &Frame) -> SuiteResult {
    let bounds = SampleBounds::default();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x44);
    for k in 0..60 {
        let n = sample::lcs_point(&mut rng, frame);
        let g = sample_parabolic(seed.wrapping_add(k), &bounds, frame);
        let moved = g.narain_transform(&n).map_err(|e| e.to_string())?;
        let before = lcs_test(&n);
        let after = lcs_test(&moved);
        if before.is_lcs != after.is_lcs || before.rho != after.rho {
            return Err(format!("stabilizer changed the test at sample {k}"));
        }
    }
    let swap = GeneralIsometry::block_swap(frame.clone());
    for _ in 0..30 {
        let n = sample::lcs_point(&mut rng, frame);
        let p = omega_from_narain(&n);
        let image = swap.act_on_period(&p).map_err(|e| e.to_string())?;
        match narain_from_omega(&image) {
            Err(_) => {}
            Ok(moved) => {
                if lcs_test(&moved).is_lcs {
                    return Err("block swap kept a point in the domain".into());
                }
            }
        }
    }
    Ok("60 stabilizer orbits, 30 swap exclusions".into())
}

fn suite_pairing_bounds(seed: u64, frame: &Frame) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x55);
    let mut checked = 0;
    while checked < 200 {
        let t = sample::tube_point(&mut rng, frame);
        let p = omega_from_tube(&t);
        let r = sample::lattice_element(&mut rng, 3);
        if r.a == [0, 0] {
            continue;
        }
        let gap = pairing_lower_bound_gap(&p, &r).map_err(|e| e.to_string())?;
        if !gap.bound_gap.is_nonnegative() {
            return Err(format!("bound gap negative for {r:?}"));
        }
        if gap.refined_gap.is_negative() {
            return Err(format!("refined gap negative for {r:?}"));
        }
        checked += 1;
    }
    Ok("200 certified gaps".into())
}

fn suite_ade(_seed: u64) -> SuiteResult {
    let i = GaussianRational::i();
    let zero = vec![GaussianRational::zero(); 16];
    let frame = Frame::e8e8();
    let roots = ade::roots_in_vperp(&i, &zero, &frame).map_err(|e| e.to_string())?;
    let comps = ade::decompose_root_system(&roots, &frame).map_err(|e| e.to_string())?;
    if comps.len() != 2 || comps.iter().any(|c| c.label != ade::AdeLabel::E8) {
        return Err("orthogonal-blocks fixture not [E8, E8]".into());
    }
    let frame = Frame::d16plus();
    let roots = ade::roots_in_vperp(&i, &zero, &frame).map_err(|e| e.to_string())?;
    let comps = ade::decompose_root_system(&roots, &frame).map_err(|e| e.to_string())?;
    if comps.len() != 1 || comps[0].label != ade::AdeLabel::D(16) {
        return Err("Barnes-Wall fixture not [D16]".into());
    }
    let frame = Frame::e8e8();
    let samples = vec![
        GaussianRational::new(Rational::zero(), Rational::from_int(2)),
        GaussianRational::new(Rational::zero(), Rational::from_int(3)),
        GaussianRational::new(Rational::zero(), Rational::new(5, 2)),
    ];
    let rep =
        ade::fiber_constancy_scan(&i, &zero, &samples, &frame, 1, 2).map_err(|e| e.to_string())?;
    if !rep.complete || rep.roots.len() != 480 {
        return Err("fiber scan fixture failed".into());
    }
    Ok("fixtures and fiber scan".into())
}

pub fn run(ctx: &Ctx, seed: u64) -> bool {
    let frame = &ctx.frame;
    let suites: Vec<(&str, Box<dyn Fn() -> SuiteResult>)> = vec![
        ("scalar-field-axioms", Box::new(move || suite_scalars(seed))),
        (
            "lattice-root-counts",
            Box::new(move || suite_root_counts(seed)),
        ),
        (
            "plane-classification",
            Box::new(move || suite_classification(seed)),
        ),
        ("chart-roundtrips", Box::new(move || suite_charts(seed))),
        ("modular-reduction", Box::new(move || suite_reduction(seed))),
        ("stabilizer-validation", {
            let f = frame.clone();
            Box::new(move || suite_parabolic(seed, &f))
        }),
        ("narain-closed-forms", {
            let f = frame.clone();
            Box::new(move || suite_closed_forms(seed, &f))
        }),
        ("lcs-domain-action", {
            let f = frame.clone();
            Box::new(move || suite_lcs_action(seed, &f))
        }),
        ("pairing-bounds", {
            let f = frame.clone();
            Box::new(move || suite_pairing_bounds(seed, &f))
        }),
        ("ade-fixtures", Box::new(move || suite_ade(seed))),
    ];
    let mut all_ok = true;
    for (name, suite) in suites {
        match suite() {
            Ok(info) => println!("ok {name} ({info})"),
            Err(msg) => {
                all_ok = false;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    all_ok
}
