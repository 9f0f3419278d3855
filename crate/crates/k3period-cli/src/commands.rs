//! Per-record handlers. Each takes one parsed JSON line and returns either
//! an output document or a structured diagnostic naming the violated
//! invariant.

use serde::Deserialize;
use serde_json::{json, Value};

use k3period::ade;
use k3period::error::Error;
use k3period::lattice::{classify_isotropic_plane, LatticeElement, SublatticeBasis};
use k3period::parabolic::{GeneralIsometry, ParabolicParts};
use k3period::period::{
    disc_radius, lcs_test, narain_from_omega, narain_from_tube, omega_from_narain, omega_from_tube,
    reduce_sl2, tube_from_narain, tube_from_omega, NarainCoords, PeriodVector, TubeCoords,
};
use k3period::scalar::GaussianRational;

use crate::{Command, Ctx};

pub struct Diag {
    pub kind: &'static str,
    pub detail: String,
}

/// Stable kebab-case identifiers for the violated invariant.
fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidThreshold { .. } => "invalid-threshold",
        Error::NotPositiveDefinite { .. } => "not-positive-definite",
        Error::NotRecognizedRank16 { .. } => "not-a-recognized-lattice",
        Error::InvalidPlane { .. } => "invalid-plane",
        Error::DependentGenerators => "dependent-generators",
        Error::DegeneratePeriod => "degenerate-period",
        Error::WrongComponent => "wrong-component",
        Error::NotInDomain { .. } => "not-in-positive-domain",
        Error::NotInUpperHalfPlane => "not-in-upper-half-plane",
        Error::InvalidBasis { .. } => "invalid-basis",
        Error::VectorInVperp => "vector-in-complement",
        Error::ShearConstraint { .. } => "shear-constraint",
        Error::NotLambdaIsometry { .. } => "f-not-an-isometry",
        Error::GramPreservation { .. } => "gram-preservation",
        Error::OrientationReversing => "orientation-reversing",
        Error::NotUnimodular { .. } => "not-unimodular",
        Error::NotARootSystem { .. } => "not-a-root-system",
        Error::NotLcsSample { .. } => "not-a-lcs-sample",
        Error::FiberMismatch { .. } => "fiber-mismatch",
        Error::Overflow { .. } => "overflow",
        Error::InvalidInput { .. } => "invalid-input",
    }
}

fn diag(e: Error) -> Diag {
    Diag {
        kind: error_kind(&e),
        detail: e.to_string(),
    }
}

fn parse_diag(e: serde_json::Error) -> Diag {
    Diag {
        kind: "parse-error",
        detail: format!("{e}"),
    }
}

fn parse<'a, T: Deserialize<'a>>(line: &'a str) -> Result<T, Diag> {
    serde_json::from_str(line).map_err(parse_diag)
}

fn default_z() -> Vec<GaussianRational> {
    vec![GaussianRational::zero(); 16]
}

#[derive(Deserialize)]
struct TauRecord {
    tau: GaussianRational,
}

#[derive(Deserialize)]
struct NarainRecord {
    tau: GaussianRational,
    u_tilde: GaussianRational,
    #[serde(default)]
    z: Option<Vec<GaussianRational>>,
}

impl NarainRecord {
    fn build(self, ctx: &Ctx) -> Result<NarainCoords, Diag> {
        NarainCoords::new(
            self.tau,
            self.u_tilde,
            self.z.unwrap_or_else(default_z),
            ctx.frame.clone(),
        )
        .map_err(diag)
    }
}

#[derive(Deserialize)]
struct TubeRecord {
    tau: GaussianRational,
    u: GaussianRational,
    #[serde(default)]
    z: Option<Vec<GaussianRational>>,
}

#[derive(Deserialize)]
struct OmegaRecord {
    a: [GaussianRational; 2],
    b: [GaussianRational; 2],
    c: Vec<GaussianRational>,
}

#[derive(Deserialize)]
struct CoordsRecord {
    #[serde(default)]
    tube: Option<TubeRecord>,
    #[serde(default)]
    narain: Option<NarainRecord>,
    #[serde(default)]
    omega: Option<OmegaRecord>,
}

#[derive(Deserialize)]
struct ActRecord {
    #[serde(default)]
    g: Option<ParabolicParts>,
    #[serde(default)]
    matrix: Option<Vec<Vec<i64>>>,
    narain: NarainRecord,
}

#[derive(Deserialize)]
struct AdeRecord {
    tau: GaussianRational,
    #[serde(default)]
    z: Option<Vec<GaussianRational>>,
    #[serde(default)]
    u_tilde: Option<GaussianRational>,
}

#[derive(Deserialize)]
struct ClassifyRecord {
    v: Vec<LatticeElement>,
}

#[derive(Deserialize)]
struct FiberRecord {
    tau: GaussianRational,
    #[serde(default)]
    z: Option<Vec<GaussianRational>>,
    u_tilde_samples: Vec<GaussianRational>,
}

pub fn handle(command: &Command, ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    match command {
        Command::ReduceTau => reduce_tau(ctx, line),
        Command::Coords => coords(ctx, line),
        Command::LcsTest => lcs(ctx, line),
        Command::Act => act(ctx, line),
        Command::AdeType => ade_type(ctx, line),
        Command::ClassifyV => classify_v(ctx, line),
        Command::FiberScan => fiber_scan(ctx, line),
        Command::Selftest => unreachable!("selftest handled in main"),
    }
}

fn reduce_tau(_ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: TauRecord = parse(line)?;
    let r = reduce_sl2(&rec.tau).map_err(diag)?;
    Ok(json!({
        "m": r.m,
        "tau": r.tau_reduced,
        "rho": r.rho,
    }))
}

fn coords(ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: CoordsRecord = parse(line)?;
    let given = usize::from(rec.tube.is_some())
        + usize::from(rec.narain.is_some())
        + usize::from(rec.omega.is_some());
    if given != 1 {
        return Err(Diag {
            kind: "invalid-input",
            detail: format!("expected exactly one of tube/narain/omega, got {given}"),
        });
    }
    let (tube, narain, omega) = if let Some(t) = rec.tube {
        let t = TubeCoords::new(t.tau, t.u, t.z.unwrap_or_else(default_z), ctx.frame.clone())
            .map_err(diag)?;
        let n = narain_from_tube(&t);
        let p = omega_from_tube(&t);
        (t, n, p)
    } else if let Some(n) = rec.narain {
        let n = n.build(ctx)?;
        let t = tube_from_narain(&n);
        let p = omega_from_narain(&n);
        (t, n, p)
    } else {
        let o = rec.omega.expect("checked above");
        let p = PeriodVector::new(o.a, o.b, o.c, ctx.frame.clone()).map_err(diag)?;
        let t = tube_from_omega(&p).map_err(diag)?;
        let n = narain_from_tube(&t);
        (t, n, p)
    };
    Ok(json!({
        "tube": tube,
        "narain": narain,
        "omega": omega,
    }))
}

fn lcs(ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: NarainRecord = parse(line)?;
    let n = rec.build(ctx)?;
    let report = lcs_test(&n);
    let radius = disc_radius(n.tau()).map_err(diag)?;
    let mut doc = serde_json::to_value(&report).expect("report serializes");
    doc["disc_radius_approx"] = json!(radius.radius_approx);
    Ok(doc)
}

fn act(ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: ActRecord = parse(line)?;
    let n = rec.narain.build(ctx)?;
    match (rec.g, rec.matrix) {
        (Some(parts), None) => {
            let g = parts.into_isometry(ctx.frame.clone()).map_err(diag)?;
            let fast = g.narain_transform(&n).map_err(diag)?;
            // Cross-check through the matrix route; disagreement would be an
            // internal bug, reported rather than ignored.
            let p = omega_from_narain(&n);
            let slow = narain_from_omega(&g.act_on_period(&p).map_err(diag)?).map_err(diag)?;
            if fast != slow {
                return Err(Diag {
                    kind: "internal-mismatch",
                    detail: "closed-form and matrix actions disagree".into(),
                });
            }
            Ok(json!({ "narain": fast }))
        }
        (None, Some(matrix)) => {
            let g = GeneralIsometry::new(matrix, ctx.frame.clone()).map_err(diag)?;
            let p = omega_from_narain(&n);
            let image = g.act_on_period(&p).map_err(diag)?;
            let moved = narain_from_omega(&image).map_err(diag)?;
            Ok(json!({ "narain": moved }))
        }
        _ => Err(Diag {
            kind: "invalid-input",
            detail: "provide exactly one of `g` (quadruple) or `matrix` (20x20)".into(),
        }),
    }
}

fn ade_type(ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: AdeRecord = parse(line)?;
    let z = rec.z.unwrap_or_else(default_z);
    let report = match rec.u_tilde {
        None => {
            // Fiber-generic system over (tau, z): the complement search.
            let roots = ade::roots_in_vperp(&rec.tau, &z, &ctx.frame).map_err(diag)?;
            ade::report(roots, &ctx.frame, false).map_err(diag)?
        }
        Some(u_tilde) => {
            let n = NarainCoords::new(rec.tau, u_tilde, z, ctx.frame.clone()).map_err(diag)?;
            let p = omega_from_narain(&n);
            let (roots, complete) =
                ade::find_roots_general(&p, ctx.box_bound, ctx.c_norm_bound).map_err(diag)?;
            ade::report(roots, &ctx.frame, complete).map_err(diag)?
        }
    };
    Ok(serde_json::to_value(&report).expect("report serializes"))
}

fn classify_v(ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: ClassifyRecord = parse(line)?;
    let basis = SublatticeBasis::new(rec.v, ctx.frame.clone()).map_err(diag)?;
    let kind = classify_isotropic_plane(&basis).map_err(diag)?;
    Ok(json!({ "class": kind }))
}

fn fiber_scan(ctx: &Ctx, line: &str) -> Result<Value, Diag> {
    let rec: FiberRecord = parse(line)?;
    let z = rec.z.unwrap_or_else(default_z);
    let report = ade::fiber_constancy_scan(
        &rec.tau,
        &z,
        &rec.u_tilde_samples,
        &ctx.frame,
        ctx.box_bound,
        ctx.c_norm_bound,
    )
    .map_err(diag)?;
    let mut doc = serde_json::to_value(&report).expect("report serializes");
    doc["samples_checked"] = json!(rec.u_tilde_samples.len());
    Ok(doc)
}

/// Compact single-line rendering for `--format text`.
pub fn render_text(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, parts: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, inner) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, inner, parts);
                }
            }
            Value::Array(items) if items.len() > 8 => {
                parts.push(format!("{prefix}=[{} items]", items.len()));
            }
            other => parts.push(format!("{prefix}={other}")),
        }
    }
    let mut parts = Vec::new();
    walk("", value, &mut parts);
    parts.join(" ")
}
