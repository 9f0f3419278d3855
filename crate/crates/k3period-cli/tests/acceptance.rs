//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (run with `--nocapture` to see them). Samples are seeded, so the
//! suite is deterministic; every tolerance is exact.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Write as _;
use std::process::{Command, Stdio};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use k3period::ade;
use k3period::lattice::{classify_rank16, enumerate_short_vectors, form_norm, lambda_roots, Frame};
use k3period::linalg::IMat;
use k3period::parabolic::{
    sample_in_class, sample_parabolic, GeneralIsometry, GeneratorClass, ParabolicIsometry,
    SampleBounds,
};
use k3period::period::{
    lcs_test, moebius, narain_from_omega, narain_from_tube, omega_from_narain, omega_from_tube,
    pairing_lower_bound_gap, reduce_sl2, tube_from_narain, tube_from_omega,
};
use k3period::sample;
use k3period::scalar::{GaussianRational, Rational};
use k3period::{Error, LatticeElement};

fn pass(n: u32, msg: &str) {
    println!("criterion {n:2} PASS: {msg}");
}

/// Criterion 1: Lattice constants: 240 roots per rank-8 block, 480 in both rank-16
/// frames, norm-4 shells of size 61920 in both (isospectral), and root-span
/// index 2 in the Barnes-Wall frame. All counts exact via enumeration.
#[test]
fn criterion_01_lattice_constants() {
    let e8e8 = Frame::e8e8();
    // The construction basis is block-diagonal; check, then enumerate one
    // rank-8 block alone.
    let g = e8e8.gram();
    for i in 0..8 {
        for j in 8..16 {
            assert_eq!(g[i][j], 0, "frame basis must be block diagonal");
        }
    }
    let block: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| -g[i][j]).collect()).collect();
    let e8_roots = enumerate_short_vectors(&block, 2).unwrap();
    assert_eq!(e8_roots.len(), 240);

    let mut norm4 = Vec::new();
    for frame in [Frame::e8e8(), Frame::d16plus()] {
        let pos = frame.pos_gram();
        let shell = enumerate_short_vectors(&pos, 4).unwrap();
        let n2 = shell.iter().filter(|v| form_norm(&pos, v) == 2).count();
        let n4 = shell.iter().filter(|v| form_norm(&pos, v) == 4).count();
        assert_eq!(n2, 480, "{:?} has 480 roots", frame.kind());
        norm4.push(n4);
    }
    assert_eq!(norm4[0], norm4[1], "norm-4 shells must agree");
    assert_eq!(norm4[0], 61920);

    let d16 = Frame::d16plus();
    let span = IMat::from_i64_rows(&lambda_roots(&d16)).hnf();
    assert_eq!(span.rows(), 16);
    let gram = IMat::from_i64_rows(d16.gram());
    let span_gram = span.mul(&gram).mul(&span.transpose());
    assert_eq!(span_gram.det().abs(), BigInt::from(4));

    pass(
        1,
        "root counts 240/480/480, norm-4 shells 61920 = 61920, root-span determinant 4",
    );
}

fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                for k in 0..n {
                    u[i][k] += s * u[j][k];
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                u.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for k in 0..n {
                    u[i][k] = -u[i][k];
                }
            }
        }
    }
    u
}

/// Criterion 2: Rank-16 classification by component structure, on the standard Grams
/// and 20 random unimodular basis changes: 100% agreement.
#[test]
fn criterion_02_classification_invariance() {
    let mut rng = StdRng::seed_from_u64(0xC2);
    let mut agreements = 0;
    for frame in [Frame::e8e8(), Frame::d16plus()] {
        assert_eq!(classify_rank16(frame.gram()).unwrap(), frame.kind());
        for _ in 0..10 {
            let u = random_unimodular(&mut rng, 16, 10);
            let ub = IMat::from_i64_rows(&u);
            let g = IMat::from_i64_rows(frame.gram());
            let conj = ub.transpose().mul(&g).mul(&ub).to_i64_rows().unwrap();
            assert_eq!(classify_rank16(&conj).unwrap(), frame.kind());
            agreements += 1;
        }
    }
    assert_eq!(agreements, 20);
    pass(
        2,
        "standard Grams plus 20 conjugated Grams all classified correctly",
    );
}

/// Criterion 3: Chart roundtrips on 1000 random exact points, with revalidation and
/// the exact pairing identity <w, conj w> = 2 (2 tau2 u2 + (z2, z2)).
#[test]
fn criterion_03_chart_roundtrips() {
    let mut rng = StdRng::seed_from_u64(0xC3);
    for frame in [Frame::e8e8(), Frame::d16plus()] {
        for _ in 0..500 {
            let t = sample::tube_point(&mut rng, &frame);
            let p = omega_from_tube(&t);
            assert_eq!(tube_from_omega(&p).unwrap(), t);
            let n = narain_from_tube(&t);
            assert_eq!(tube_from_narain(&n), t);
            assert_eq!(omega_from_narain(&n), p);
            // 2 tau2 u~2 = 2 tau2 u2 + (z2, z2), so the identity reads
            // <w, conj w> = 4 tau2 u~2.
            let expect = &(&Rational::from_int(4) * &t.tau().im) * &n.u_tilde().im;
            assert_eq!(p.pair_with_conjugate(), expect);
        }
    }
    pass(
        3,
        "1000 tube/Narain/omega roundtrips with exact pairing identity",
    );
}

fn rho_by_word_search(tau: &GaussianRational) -> Rational {
    let gens: [[[i64; 2]; 2]; 3] = [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[0, -1], [1, 0]]];
    let mut frontier = vec![[[1i64, 0], [0, 1]]];
    let mut seen = BTreeSet::new();
    seen.insert(frontier[0]);
    let mut best = tau.im.clone();
    for _ in 0..6 {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let mut prod = [[0i64; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        prod[i][j] = m[i][0] * g[0][j] + m[i][1] * g[1][j];
                    }
                }
                if seen.insert(prod) {
                    let im = moebius(&prod, tau).im;
                    if im > best {
                        best = im.clone();
                    }
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    best
}

/// Criterion 4: Orbit invariance of the reduced imaginary part on 500 random pairs,
/// the exact lower bound rho^2 >= 3/4, and the three worked reductions
/// checked against a word-search oracle of depth 6.
#[test]
fn criterion_04_reduction_properties() {
    let mut rng = StdRng::seed_from_u64(0xC4);
    for _ in 0..500 {
        let tau = sample::upper_half(&mut rng);
        let rho = reduce_sl2(&tau).unwrap().rho;
        let m = sample::random_sl2(&mut rng, 5);
        assert_eq!(reduce_sl2(&moebius(&m, &tau)).unwrap().rho, rho);
        assert!(rho.cmp_sqrt(&Rational::new(3, 4)) != Ordering::Less);
    }
    let cases = [
        (GaussianRational::i(), Rational::one()),
        (
            GaussianRational::new(Rational::zero(), Rational::new(1, 2)),
            Rational::from_int(2),
        ),
        (
            GaussianRational::new(Rational::new(1, 2), Rational::new(1, 2)),
            Rational::one(),
        ),
    ];
    for (tau, expected) in cases {
        assert_eq!(reduce_sl2(&tau).unwrap().rho, expected);
        assert_eq!(rho_by_word_search(&tau), expected);
    }
    pass(
        4,
        "500 orbit invariances, rho >= sqrt(3)/2, worked reductions match the word oracle",
    );
}

/// Criterion 5: Stabilizer suite on 500 sampled elements: Gram preservation, the
/// closed-form group law against the 20x20 product, the three-factor
/// decomposition, and rejection of shear-constraint violations.
#[test]
fn criterion_05_stabilizer_suite() {
    let frame = Frame::e8e8();
    let bounds = SampleBounds::default();
    let j = k3period::lattice::ambient_gram(&frame);
    let mut elements = Vec::new();
    for seed in 0..500u64 {
        elements.push(sample_parabolic(seed, &bounds, &frame));
    }
    for g in &elements {
        let m = IMat::from_i64_rows(&g.matrix());
        assert_eq!(m.transpose().mul(&j).mul(&m), j, "Gram preservation");
        let (shear, rotation, factor) = g.decompose().unwrap();
        let back = shear.compose(&rotation).unwrap().compose(&factor).unwrap();
        assert_eq!(&back, g, "three-factor decomposition");
    }
    for pair in elements.chunks_exact(2) {
        let composed = pair[0].compose(&pair[1]).unwrap();
        let prod =
            IMat::from_i64_rows(&pair[0].matrix()).mul(&IMat::from_i64_rows(&pair[1].matrix()));
        assert_eq!(IMat::from_i64_rows(&composed.matrix()), prod, "group law");
    }
    // Shear-constraint necessity: perturbing r11 by one always breaks the
    // constraint (the first row of a unimodular m is nonzero), and the
    // constructor must say so.
    let mut rejected = 0;
    for seed in 0..100u64 {
        let g = sample_parabolic(seed, &bounds, &frame);
        let mut r = *g.r();
        r[0][0] += 1;
        match ParabolicIsometry::new(*g.m(), g.q().clone(), r, g.f().clone(), frame.clone()) {
            Err(Error::ShearConstraint { .. }) => rejected += 1,
            other => panic!("perturbed element accepted or misreported: {other:?}"),
        }
    }
    assert_eq!(rejected, 100);
    pass(
        5,
        "500 elements: Gram, group law, decomposition; 100 violations rejected",
    );
}

/// Criterion 6: Closed-form coordinate transformations agree exactly with the matrix
/// action for 300 samples of each generator class (plus mixed products), and
/// Im(u~) is invariant every time.
#[test]
fn criterion_06_closed_forms() {
    let frame = Frame::e8e8();
    let bounds = SampleBounds::default();
    let mut rng = StdRng::seed_from_u64(0xC6);
    let mut checked = 0;
    for class in [
        GeneratorClass::Rotation,
        GeneratorClass::FactorIsometry,
        GeneratorClass::Shear,
    ] {
        for seed in 0..300u64 {
            let g = sample_in_class(seed, class, &bounds, &frame);
            let n = sample::narain_point(&mut rng, &frame);
            let fast = g.narain_transform(&n).unwrap();
            let p = omega_from_narain(&n);
            let slow = narain_from_omega(&g.act_on_period(&p).unwrap()).unwrap();
            assert_eq!(fast, slow, "{class:?} sample {seed}");
            assert_eq!(fast.u_tilde().im, n.u_tilde().im, "Im(u~) invariance");
            checked += 1;
        }
    }
    for seed in 0..100u64 {
        let g = sample_parabolic(seed.wrapping_mul(31).wrapping_add(7), &bounds, &frame);
        let n = sample::narain_point(&mut rng, &frame);
        let fast = g.narain_transform(&n).unwrap();
        let p = omega_from_narain(&n);
        let slow = narain_from_omega(&g.act_on_period(&p).unwrap()).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast.u_tilde().im, n.u_tilde().im);
        checked += 1;
    }
    assert_eq!(checked, 1000);
    pass(
        6,
        "900 per-class plus 100 mixed closed-form agreements, Im(u~) invariant",
    );
}

/// Criterion 7: The pairing lower bound holds with certified sign on 1000 random
/// samples, and the two worked equality cases give gap = 0 exactly.
#[test]
fn criterion_07_pairing_bounds() {
    let mut rng = StdRng::seed_from_u64(0xC7);
    let frame = Frame::e8e8();
    let mut checked = 0;
    while checked < 1000 {
        let t = sample::tube_point(&mut rng, &frame);
        let p = omega_from_tube(&t);
        let r = sample::lattice_element(&mut rng, 3);
        if r.a == [0, 0] {
            continue;
        }
        let gap = pairing_lower_bound_gap(&p, &r).unwrap();
        assert!(gap.bound_gap.is_nonnegative(), "bound gap for {r:?}");
        assert!(!gap.refined_gap.is_negative(), "refined gap for {r:?}");
        checked += 1;
    }
    let t = k3period::period::TubeCoords::new(
        GaussianRational::i(),
        GaussianRational::i(),
        vec![GaussianRational::zero(); 16],
        frame,
    )
    .unwrap();
    let p = omega_from_tube(&t);
    for r in [LatticeElement::x1(), LatticeElement::x2()] {
        let gap = pairing_lower_bound_gap(&p, &r).unwrap();
        assert_eq!(gap.bound_gap.sign(), Ordering::Equal);
        assert_eq!(gap.refined_gap, Rational::zero());
    }
    pass(
        7,
        "1000 certified nonnegative gaps; two worked equality cases exact",
    );
}

/// Criterion 8: Domain behavior: the test is invariant under 300 random stabilizer
/// elements, and the hyperbolic block swap moves every one of 100 sampled
/// in-domain points out of the domain (with respect to the same plane).
#[test]
fn criterion_08_domain_action() {
    let frame = Frame::e8e8();
    let bounds = SampleBounds::default();
    let mut rng = StdRng::seed_from_u64(0xC8);
    for seed in 0..300u64 {
        let n = sample::lcs_point(&mut rng, &frame);
        let g = sample_parabolic(seed, &bounds, &frame);
        let moved = g.narain_transform(&n).unwrap();
        let before = lcs_test(&n);
        let after = lcs_test(&moved);
        assert!(before.is_lcs);
        assert_eq!(before.is_lcs, after.is_lcs);
        assert_eq!(before.rho, after.rho);
        assert_eq!(before.u_tilde_2, after.u_tilde_2);
    }
    let swap = GeneralIsometry::block_swap(frame.clone());
    let mut excluded = 0;
    for _ in 0..100 {
        let n = sample::lcs_point(&mut rng, &frame);
        assert!(lcs_test(&n).is_lcs);
        let p = omega_from_narain(&n);
        let image = swap.act_on_period(&p).unwrap();
        match narain_from_omega(&image) {
            // Both outcomes mean the image is not in the domain with
            // respect to the original plane.
            Err(Error::WrongComponent) => excluded += 1,
            Ok(moved) => {
                assert!(!lcs_test(&moved).is_lcs, "swap image stayed in the domain");
                excluded += 1;
            }
            Err(e) => panic!("unexpected failure: {e}"),
        }
    }
    assert_eq!(excluded, 100);
    pass(
        8,
        "300 stabilizer invariances; block swap excluded 100 of 100 points",
    );
}

/// Criterion 9: Fiber typing: the fixtures at (tau = i, z = 0), the generic and
/// half-generic twists, constancy across five chart heights, and equality of
/// the general search with the complement search at 100 random in-domain
/// points with small rational z.
#[test]
fn criterion_09_fiber_typing() {
    let i = GaussianRational::i();
    let zero = vec![GaussianRational::zero(); 16];

    let frame = Frame::e8e8();
    let roots = ade::roots_in_vperp(&i, &zero, &frame).unwrap();
    let comps = ade::decompose_root_system(&roots, &frame).unwrap();
    assert_eq!(comps.len(), 2);
    assert!(comps.iter().all(|c| c.label == ade::AdeLabel::E8));
    assert!(comps
        .iter()
        .all(|c| ade::kodaira_candidates(c.label) == vec!["II*".to_string()]));

    let d16 = Frame::d16plus();
    let comps =
        ade::decompose_root_system(&ade::roots_in_vperp(&i, &zero, &d16).unwrap(), &d16).unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].label, ade::AdeLabel::D(16));

    // Generic twist: no roots survive (premise checked inside the sweep).
    let mut z = zero.clone();
    for (k, zk) in z.iter_mut().enumerate() {
        *zk = GaussianRational::from_rational(Rational::new(1, 3 + k as i64));
    }
    assert!(ade::roots_in_vperp(&i, &z, &frame).unwrap().is_empty());

    // Twist supported in the second block only: the first block survives.
    let mut z = zero.clone();
    for k in 8..16 {
        z[k] = GaussianRational::from_rational(Rational::new(1, 5 + k as i64));
    }
    let comps =
        ade::decompose_root_system(&ade::roots_in_vperp(&i, &z, &frame).unwrap(), &frame).unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].label, ade::AdeLabel::E8);

    // Constancy across five chart heights.
    let samples: Vec<GaussianRational> = [(2, 1), (3, 1), (5, 2), (7, 2), (4, 1)]
        .iter()
        .map(|&(p, q)| GaussianRational::new(Rational::zero(), Rational::new(p, q)))
        .collect();
    let rep = ade::fiber_constancy_scan(&i, &zero, &samples, &frame, 1, 2).unwrap();
    assert!(rep.complete);
    assert_eq!(rep.roots.len(), 480);

    // General search equals complement search at 100 random in-domain
    // points with small rational z.
    let mut rng = StdRng::seed_from_u64(0xC9);
    for k in 0..100 {
        let n = sample::lcs_point(&mut rng, &frame);
        let vperp = ade::roots_in_vperp(n.tau(), n.z(), &frame).unwrap();
        let max_b = vperp
            .iter()
            .flat_map(|r| r.b.iter().map(|&b| b.abs()))
            .max()
            .unwrap_or(0);
        let p = omega_from_narain(&n);
        let (found, complete) = ade::find_roots_general(&p, max_b.max(1), 4).unwrap();
        assert!(complete, "sampled point {k} must pass the test");
        assert_eq!(found, vperp, "general search differs at point {k}");
    }
    pass(
        9,
        "fixtures, twists, five-height constancy, 100 search agreements",
    );
}

/// Criterion 10: CLI determinism on a 1000-record dataset (byte-identical across two
/// runs) and a green selftest.
#[test]
fn criterion_10_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dataset.jsonl");
    let mut rng = StdRng::seed_from_u64(0xCA);
    let mut data = String::new();
    for _ in 0..1000 {
        let tau_re = Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=4));
        let tau_im = Rational::new(rng.gen_range(1..=12), rng.gen_range(1..=4));
        let u_re = Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=4));
        let u_im = Rational::new(rng.gen_range(1..=12), rng.gen_range(1..=4));
        data.push_str(&format!(
            r#"{{"tau":{{"re":"{tau_re}","im":"{tau_im}"}},"u_tilde":{{"re":"{u_re}","im":"{u_im}"}}}}"#
        ));
        data.push('\n');
    }
    std::fs::write(&path, &data).unwrap();

    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_k3period"))
            .args(["lcs-test", "--input", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "outputs must be byte-identical");
    assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 1000);

    let mut child = Command::new(env!("CARGO_BIN_EXE_k3period"))
        .arg("selftest")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(b"").unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "selftest must be green:\n{text}");
    assert!(text.lines().all(|l| l.starts_with("ok ")));
    pass(10, "byte-identical 1000-record runs; selftest green");
}
