//! Request parsing and dispatch for the `trop` binary.

pub mod render;

use std::fs;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use trop_core::cpl::{as_codim0_cycle, product, support_function};
use trop_core::exactalg::{format_rational, int, RatVec};
use trop_core::json::{ConeJson, ConewisePolyJson, WeightedFanJson};
use trop_core::polytope::{mixed_volume_facet_recursion, mixed_volume_polarization, PolytopeJson};
use trop_core::tropical::{corner_locus, is_balanced, mixed_volume_from_product, stable_intersection, Subspace};
use trop_core::verify::{
    tropical_plane_self_intersection, verify_bernstein, verify_differential_identities, verify_gusev,
    verify_union_identity,
};
use trop_core::{ConewisePoly, Error, Polytope, VerificationReport, WeightedFan};

pub use render::{render_svg, Window};

pub const DEFAULT_SEED: u64 = 20_240_517;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

/// A parsed command line.
#[derive(Debug, Parser)]
#[command(name = "trop", version, about = "Exact tropical fans, corner loci and mixed volumes")]
pub struct CommandRequest {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; svg applies to planar weighted fan results.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Seed for generic displacements.
    #[arg(long, env = "TROP_SEED", global = true)]
    pub seed: Option<u64>,
    /// Required ambient dimension of every input.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Drawing window `x0,y0,x1,y1` for svg output.
    #[arg(long, global = true)]
    pub window: Option<String>,
}

/// Inputs are file paths, `-` for stdin, or inline JSON.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mixed volume of n polytopes by polarization, facet recursion and corner loci.
    MixedVolume { polytopes: String },
    /// Product of the support functions of the given polytopes.
    SupportProduct { polytopes: String },
    /// Corner locus of a weighted fan or of a conewise polynomial.
    CornerLocus {
        input: String,
        #[arg(long, default_value_t = 1)]
        times: u32,
    },
    /// Balancing check of a weighted fan.
    BalanceCheck { fan: String },
    /// Stable intersection of two weighted fans.
    Intersect { a: String, b: String },
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// SVG drawing of a planar weighted fan.
    Render { fan: String },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    Gusev { polytopes: String },
    Union { polytopes: String },
    Bernstein { polytopes: String },
    Differential {
        f: String,
        g: String,
        /// Spanning vectors of the subspace, as a JSON matrix.
        subspace: String,
    },
    PlaneExample,
}

/// Exit status and output document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub output: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GenericityFailure { .. } => Failure::Compute(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_source(src: &str) -> Result<(String, String), Failure> {
    let t = src.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(("<inline>".into(), src.to_string()));
    }
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(("<stdin>".into(), s));
    }
    let s = fs::read_to_string(src).map_err(|e| Failure::Input(format!("{src}: {e}")))?;
    Ok((src.to_string(), s))
}

fn parse<T: DeserializeOwned>(src: &str) -> Result<T, Failure> {
    let (name, text) = read_source(src)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{name}: {e}")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolytopeList {
    Bare(Vec<PolytopeJson>),
    Wrapped { polytopes: Vec<PolytopeJson> },
}

struct Context {
    dim: Option<usize>,
    rng: ChaCha8Rng,
}

impl Context {
    fn check_dim(&self, found: usize) -> Result<(), Failure> {
        match self.dim {
            Some(d) if d != found => Err(Failure::Input(format!("expected dimension {d}, input has {found}"))),
            _ => Ok(()),
        }
    }

    fn polytopes(&self, src: &str) -> Result<Vec<Polytope>, Failure> {
        let list = match parse::<PolytopeList>(src)? {
            PolytopeList::Bare(v) | PolytopeList::Wrapped { polytopes: v } => v,
        };
        let ps = list.into_iter().map(Polytope::try_from).collect::<Result<Vec<_>, _>>()?;
        for p in &ps {
            self.check_dim(p.dim())?;
        }
        Ok(ps)
    }

    fn weighted_fan(&self, src: &str) -> Result<WeightedFan, Failure> {
        let w = WeightedFan::try_from(&parse::<WeightedFanJson>(src)?)?;
        self.check_dim(w.ambient())?;
        Ok(w)
    }
}

fn fan_output(w: &WeightedFan, req: &CommandRequest) -> Result<String, Failure> {
    match req.format {
        Format::Json => Ok(to_json(&WeightedFanJson::from(&w.normalize()))),
        Format::Svg => {
            let window = match &req.window {
                Some(s) => Window::parse(s)?,
                None => Window::default(),
            };
            Ok(render_svg(&w.normalize(), &window)?)
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn report_outcome(r: &VerificationReport) -> Outcome {
    Outcome { status: if r.pass { 0 } else { 1 }, output: to_json(r) }
}

fn dispatch(req: &CommandRequest) -> Result<Outcome, Failure> {
    let mut ctx = Context {
        dim: req.dim,
        rng: ChaCha8Rng::seed_from_u64(req.seed.unwrap_or(DEFAULT_SEED)),
    };
    let ok = |output: String| Ok(Outcome { status: 0, output });
    match &req.command {
        Command::MixedVolume { polytopes } => {
            let ps = ctx.polytopes(polytopes)?;
            let f = product(&ps.iter().map(support_function).collect::<Vec<_>>())?;
            let out = json!({
                "polarization": format_rational(&mixed_volume_polarization(&ps)?),
                "facet": format_rational(&mixed_volume_facet_recursion(&ps)?),
                "delta": format_rational(&mixed_volume_from_product(&f)?),
            });
            ok(to_json(&out))
        }
        Command::SupportProduct { polytopes } => {
            let ps = ctx.polytopes(polytopes)?;
            let f = product(&ps.iter().map(support_function).collect::<Vec<_>>())?;
            ok(to_json(&ConewisePolyJson::from(&f)))
        }
        Command::CornerLocus { input, times } => {
            let v: Value = parse(input)?;
            let mut w = if v.get("codim").is_some() {
                ctx.weighted_fan(input)?
            } else {
                let f = ConewisePoly::try_from(&parse::<ConewisePolyJson>(input)?)?;
                ctx.check_dim(f.ambient())?;
                as_codim0_cycle(&f)?
            };
            for _ in 0..*times {
                w = corner_locus(&w)?;
            }
            fan_output(&w, req).and_then(ok)
        }
        Command::BalanceCheck { fan } => {
            let w = ctx.weighted_fan(fan)?;
            let r = is_balanced(&w);
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| json!({"face": ConeJson::from(&v.face), "residual": v.residual.to_string()}))
                .collect();
            let out = json!({"pass": r.pass, "violations": violations});
            Ok(Outcome { status: if r.pass { 0 } else { 1 }, output: to_json(&out) })
        }
        Command::Intersect { a, b } => {
            let (a, b) = (ctx.weighted_fan(a)?, ctx.weighted_fan(b)?);
            let s = stable_intersection(&a, &b, &mut ctx.rng)?;
            fan_output(&s, req).and_then(ok)
        }
        Command::Render { fan } => {
            let w = ctx.weighted_fan(fan)?;
            let window = match &req.window {
                Some(s) => Window::parse(s)?,
                None => Window::default(),
            };
            ok(render_svg(&w.normalize(), &window)?)
        }
        Command::Verify(v) => match v {
            VerifyCommand::Gusev { polytopes } => {
                let ps = ctx.polytopes(polytopes)?;
                if ps.len() != 2 {
                    return Err(Failure::Input(format!("gusev needs two polytopes, got {}", ps.len())));
                }
                Ok(report_outcome(&verify_gusev(&ps[0], &ps[1])?))
            }
            VerifyCommand::Union { polytopes } => Ok(report_outcome(&verify_union_identity(&ctx.polytopes(polytopes)?)?)),
            VerifyCommand::Bernstein { polytopes } => {
                let ps = ctx.polytopes(polytopes)?;
                Ok(report_outcome(&verify_bernstein(&ps, &mut ctx.rng)?))
            }
            VerifyCommand::Differential { f, g, subspace } => {
                let (f, g) = (ctx.weighted_fan(f)?, ctx.weighted_fan(g)?);
                let span: Vec<RatVec> = parse::<Vec<Vec<Value>>>(subspace)?
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|x| {
                                serde_json::from_value::<Exact>(x).map(|r| r.0).map_err(|e| Failure::Input(format!("subspace: {e}")))
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let l = Subspace::from_spanning(f.ambient(), &span)?;
                Ok(report_outcome(&verify_differential_identities(&f, &g, &l, &mut ctx.rng)?))
            }
            VerifyCommand::PlaneExample => {
                let value = tropical_plane_self_intersection()?;
                let pass = value == int(-1);
                let out = json!({"value": format_rational(&value), "pass": pass});
                Ok(Outcome { status: if pass { 0 } else { 1 }, output: to_json(&out) })
            }
        },
    }
}

#[derive(Deserialize)]
#[serde(transparent)]
struct Exact(#[serde(with = "trop_core::exactalg::serde_rat")] trop_core::Rational);

/// Runs a parsed request: status 0 on success or pass, 1 on a failed check
/// or a non-generic displacement, 2 on bad input.
pub fn run_command(req: &CommandRequest) -> Outcome {
    match dispatch(req) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => Outcome { status: 2, output: to_json(&json!({"error": msg})) },
        Err(Failure::Compute(msg)) => Outcome { status: 1, output: to_json(&json!({"error": msg})) },
    }
}

/// Parses `args` (including the program name) and runs the request.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CommandRequest::try_parse_from(args) {
        Ok(req) => run_command(&req),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            Outcome { status, output: e.to_string() }
        }
    }
}
