//! Command-line front end for the K_n diffeomorphism engine.
//!
//! Exit codes: 0 on success, 1 on domain errors (invalid input), 2 when
//! a resource cap was hit (Exceeded / Unknown results).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use cantordiff::dynamics::{self, FixedSet, InfiniteWitness, OrderResult};
use cantordiff::sampler::{sample_element, SamplerConfig};
use cantordiff::subgroup::{
    self, ClosureResult, CrossedWitness, GeneratingSet, OrbitResult,
};
use cantordiff::text::{
    format_address, format_clopen, format_element, parse_address, parse_clopen, parse_element,
};
use cantordiff::{Arity, Element};

#[derive(Parser)]
#[command(name = "cantordiff", version, about = "Symbolic dynamics in diff(K_n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Emit the machine-readable result as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Element/point cap for enumerations and orbits.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: usize,
    /// Search depth (crossed) or stabilization rounds (periodic-points,
    /// order).
    #[arg(long, global = true, default_value_t = 6)]
    depth: u32,
    /// Bound on cell depth during composition; guards pathological
    /// blowup.
    #[arg(long, global = true, default_value_t = 64)]
    max_cell_depth: usize,
    /// Also render rationals as decimals with this many digits (display
    /// only).
    #[arg(long, value_name = "K", global = true)]
    decimal: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two elements: G after F.
    Compose { g: String, f: String },
    /// Invert an element.
    Inverse { g: String },
    /// Canonical reduced form of an element.
    Reduce { g: String },
    /// Apply an element to an address.
    Apply { g: String, x: String },
    /// Exact derivative of an element at an address.
    Derivative { g: String, x: String },
    /// Fixed-point set with exact derivatives.
    FixedPoints { g: String },
    /// Periodic points as a verified stabilized fixed set of a power.
    PeriodicPoints { g: String },
    /// Order of an element: finite, infinite with witness, or unknown.
    Order { g: String },
    /// Image of a clopen set under an element.
    Image { g: String, set: String },
    /// BFS closure of a generating set, up to the cap.
    Enumerate { generators: Vec<String> },
    /// Commutator g h g^-1 h^-1.
    Commutator { g: String, h: String },
    /// Orbit of an address under a generating set.
    Orbit { x: String, generators: Vec<String> },
    /// Search for a crossed pair and build a free-subsemigroup witness.
    Crossed { generators: Vec<String> },
    /// Verify a positive ping-pong certificate.
    Pingpong { h1: String, h2: String, a: String, b: String },
    /// Check that positive words up to a length are pairwise distinct.
    WordsDistinct { f1: String, f2: String, length: u32 },
    /// Sample a random element.
    Sample {
        #[arg(long, default_value_t = 2)]
        arity: u32,
        #[arg(long, default_value_t = 4)]
        size: usize,
        /// Flip probability as `p/q` or `0`/`1`.
        #[arg(long, default_value = "1/2")]
        flip_prob: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Load element text inline or from `@file`.
fn read_arg(text: &str) -> Result<String, String> {
    if let Some(path) = text.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    } else {
        Ok(text.to_string())
    }
}

fn element(text: &str) -> Result<Element, String> {
    parse_element(read_arg(text)?.trim()).map_err(|e| e.to_string())
}

fn gens(texts: &[String]) -> Result<(Arity, GeneratingSet), String> {
    if texts.is_empty() {
        return Err("at least one generator is required".into());
    }
    let parsed: Vec<Element> = texts
        .iter()
        .map(|t| element(t))
        .collect::<Result<_, _>>()?;
    let arity = parsed[0].arity();
    let set = GeneratingSet::new(arity, parsed).map_err(|e| e.to_string())?;
    Ok((arity, set))
}

struct Output {
    common: Common,
}

impl Output {
    fn rational(&self, r: &BigRational) -> Value {
        match self.common.decimal {
            None => json!(r.to_string()),
            Some(k) => json!({
                "exact": r.to_string(),
                "decimal": decimal_string(r, k),
            }),
        }
    }

    fn fixed_set(&self, fs: &FixedSet) -> Value {
        json!({
            "clopen": format_clopen(&fs.clopen_part),
            "isolated": fs
                .isolated
                .iter()
                .map(|(p, d)| json!([format_address(p), self.rational(d)]))
                .collect::<Vec<_>>(),
        })
    }

    fn witness(&self, w: &CrossedWitness) -> Value {
        json!({
            "g": format_element(&w.g),
            "h": format_element(&w.h),
            "p1": format_address(&w.p1),
            "p2": format_address(&w.p2),
            "n": w.power,
            "f1": format_element(&w.f1),
            "f2": format_element(&w.f2),
            "A": format_clopen(&w.a),
            "B": format_clopen(&w.b),
            "verified": true,
        })
    }

    /// Print the result and choose the exit code; `capped` marks
    /// Exceeded/Unknown outcomes.
    fn emit(&self, human: String, payload: Value, capped: bool) -> ExitCode {
        if self.common.json {
            let mut obj = json!({"schema": 1});
            obj.as_object_mut()
                .unwrap()
                .extend(payload.as_object().cloned().unwrap_or_default());
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        } else {
            println!("{human}");
        }
        if capped {
            ExitCode::from(2)
        } else {
            ExitCode::SUCCESS
        }
    }
}

fn decimal_string(r: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow::pow(BigInt::from(10), digits as usize);
    let scaled = (r * BigRational::from(scale.clone())).round().to_integer();
    let negative = scaled.is_negative();
    let abs = scaled.abs();
    let (int_part, frac_part) = (abs.clone() / &scale, abs % &scale);
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let out = Output { common: cli.common.clone() };
    let max_depth = cli.common.max_cell_depth;
    let code = match cli.command {
        Command::Compose { g, f } => {
            let result = element(&g)?
                .compose_with_depth(&element(&f)?, max_depth)
                .map_err(|e| e.to_string())?;
            out.emit(
                format_element(&result),
                json!({"element": format_element(&result)}),
                false,
            )
        }
        Command::Inverse { g } => {
            let result = element(&g)?.inverse();
            out.emit(
                format_element(&result),
                json!({"element": format_element(&result)}),
                false,
            )
        }
        Command::Reduce { g } => {
            // Parsing already reduces.
            let result = element(&g)?;
            out.emit(
                format_element(&result),
                json!({"element": format_element(&result)}),
                false,
            )
        }
        Command::Apply { g, x } => {
            let g = element(&g)?;
            let x = parse_address(read_arg(&x)?.trim(), g.arity()).map_err(|e| e.to_string())?;
            let y = g.apply(&x).map_err(|e| e.to_string())?;
            let coord = y.coordinate();
            out.emit(
                format!("{}  (coordinate {})", format_address(&y), coord),
                json!({
                    "address": format_address(&y),
                    "coordinate": out.rational(&coord),
                }),
                false,
            )
        }
        Command::Derivative { g, x } => {
            let g = element(&g)?;
            let x = parse_address(read_arg(&x)?.trim(), g.arity()).map_err(|e| e.to_string())?;
            let d = dynamics::derivative_at(&g, &x).map_err(|e| e.to_string())?;
            out.emit(d.to_string(), json!({"derivative": out.rational(&d)}), false)
        }
        Command::FixedPoints { g } => {
            let fs = dynamics::fixed_points(&element(&g)?);
            let human = format!(
                "clopen: {}\nisolated: {}",
                format_clopen(&fs.clopen_part),
                fs.isolated
                    .iter()
                    .map(|(p, d)| format!("({}, {})", format_address(p), d))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            out.emit(human, json!({"fixed_set": out.fixed_set(&fs)}), false)
        }
        Command::PeriodicPoints { g } => {
            let p = dynamics::periodic_points_with_depth(
                &element(&g)?,
                cli.common.depth.max(1),
                max_depth,
            )
            .map_err(|e| e.to_string())?;
            let human = format!(
                "N = {}, stabilized = {}\nclopen: {}\nisolated: {}",
                p.stabilizing_power,
                p.stabilized,
                format_clopen(&p.set.clopen_part),
                p.set
                    .isolated
                    .iter()
                    .map(|(q, d)| format!("({}, {})", format_address(q), d))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let capped = !p.stabilized;
            out.emit(
                human,
                json!({
                    "stabilizing_power": p.stabilizing_power,
                    "stabilized": p.stabilized,
                    "set": out.fixed_set(&p.set),
                }),
                capped,
            )
        }
        Command::Order { g } => {
            let result = dynamics::order_with_depth(
                &element(&g)?,
                cli.common.depth.max(1),
                max_depth,
            );
            match result {
                OrderResult::Finite(k) => out.emit(
                    format!("finite, order {k}"),
                    json!({"order": {"kind": "finite", "value": k}}),
                    false,
                ),
                OrderResult::Infinite(w) => {
                    let (human, wjson) = match w {
                        InfiniteWitness::Hyperbolic { power, point, derivative } => (
                            format!(
                                "infinite: g^{power} has hyperbolic fixed point {} with derivative {derivative}",
                                format_address(&point)
                            ),
                            json!({
                                "kind": "hyperbolic",
                                "power": power,
                                "point": format_address(&point),
                                "derivative": out.rational(&derivative),
                            }),
                        ),
                        InfiniteWitness::NonPeriodic { power, point } => (
                            format!(
                                "infinite: {} is moved by g^{power} although the periodic set stabilized",
                                format_address(&point)
                            ),
                            json!({
                                "kind": "non_periodic",
                                "power": power,
                                "point": format_address(&point),
                            }),
                        ),
                    };
                    out.emit(human, json!({"order": {"kind": "infinite", "witness": wjson}}), false)
                }
                OrderResult::Unknown { reason } => out.emit(
                    format!("unknown: {reason}"),
                    json!({"order": {"kind": "unknown", "reason": reason}}),
                    true,
                ),
            }
        }
        Command::Image { g, set } => {
            let g = element(&g)?;
            let s = parse_clopen(read_arg(&set)?.trim(), g.arity()).map_err(|e| e.to_string())?;
            let img = g.image(&s).map_err(|e| e.to_string())?;
            out.emit(format_clopen(&img), json!({"set": format_clopen(&img)}), false)
        }
        Command::Enumerate { generators } => {
            let (_, set) = gens(&generators)?;
            match subgroup::enumerate_group_with_depth(&set, cli.common.cap, max_depth)
                .map_err(|e| e.to_string())?
            {
                ClosureResult::Finite { elements, multiplication_closed } => out.emit(
                    format!("finite group of order {}", elements.len()),
                    json!({
                        "kind": "finite",
                        "order": elements.len(),
                        "multiplication_closed": multiplication_closed,
                        "elements": elements.iter().map(|e| format_element(e)).collect::<Vec<_>>(),
                    }),
                    false,
                ),
                ClosureResult::Exceeded { cap, count_reached } => out.emit(
                    format!("exceeded cap {cap} after {count_reached} elements"),
                    json!({"kind": "exceeded", "cap": cap, "count_reached": count_reached}),
                    true,
                ),
            }
        }
        Command::Commutator { g, h } => {
            let c = subgroup::commutator(&element(&g)?, &element(&h)?)
                .map_err(|e| e.to_string())?;
            out.emit(format_element(&c), json!({"element": format_element(&c)}), false)
        }
        Command::Orbit { x, generators } => {
            let (arity, set) = gens(&generators)?;
            let x = parse_address(read_arg(&x)?.trim(), arity).map_err(|e| e.to_string())?;
            match subgroup::orbit(&x, &set, cli.common.cap).map_err(|e| e.to_string())? {
                OrbitResult::Finite(points) => out.emit(
                    format!(
                        "finite orbit of size {}: {}",
                        points.len(),
                        points.iter().map(format_address).collect::<Vec<_>>().join(", ")
                    ),
                    json!({
                        "kind": "finite",
                        "points": points.iter().map(format_address).collect::<Vec<_>>(),
                    }),
                    false,
                ),
                OrbitResult::Exceeded { cap, count_reached } => out.emit(
                    format!("exceeded cap {cap} after {count_reached} points"),
                    json!({"kind": "exceeded", "cap": cap, "count_reached": count_reached}),
                    true,
                ),
            }
        }
        Command::Crossed { generators } => {
            let (_, set) = gens(&generators)?;
            match subgroup::find_crossed_with_depth(&set, cli.common.depth, max_depth)
                .map_err(|e| e.to_string())?
            {
                Some(w) => out.emit(
                    format!(
                        "crossed pair found: p1 = {}, p2 = {}, n = {}\nf1 = {}\nf2 = {}\nA = {}, B = {}",
                        format_address(&w.p1),
                        format_address(&w.p2),
                        w.power,
                        format_element(&w.f1),
                        format_element(&w.f2),
                        format_clopen(&w.a),
                        format_clopen(&w.b),
                    ),
                    json!({"kind": "witness", "witness": out.witness(&w)}),
                    false,
                ),
                None => out.emit("not found".into(), json!({"kind": "not_found"}), false),
            }
        }
        Command::Pingpong { h1, h2, a, b } => {
            let h1 = element(&h1)?;
            let h2 = element(&h2)?;
            let a = parse_clopen(read_arg(&a)?.trim(), h1.arity()).map_err(|e| e.to_string())?;
            let b = parse_clopen(read_arg(&b)?.trim(), h1.arity()).map_err(|e| e.to_string())?;
            let ok = subgroup::pingpong_verify(&h1, &h2, &a, &b).map_err(|e| e.to_string())?;
            out.emit(
                if ok { "verified: free subsemigroup".into() } else { "not verified".to_string() },
                json!({"verified": ok}),
                false,
            )
        }
        Command::WordsDistinct { f1, f2, length } => {
            let ok = subgroup::distinct_words_check_with_depth(
                &element(&f1)?,
                &element(&f2)?,
                length,
                max_depth,
            )
            .map_err(|e| e.to_string())?;
            out.emit(
                if ok {
                    format!("all positive words of length <= {length} are distinct")
                } else {
                    "collision found".to_string()
                },
                json!({"distinct": ok, "length": length}),
                false,
            )
        }
        Command::Sample { arity, size, flip_prob, seed } => {
            let arity = Arity::new(arity).map_err(|e| e.to_string())?;
            let flip_probability = parse_ratio(&flip_prob)?;
            let cfg = SamplerConfig { arity, partition_size: size, flip_probability, seed };
            let e = sample_element(&cfg).map_err(|e| e.to_string())?;
            out.emit(format_element(&e), json!({"element": format_element(&e)}), false)
        }
    };
    Ok(code)
}

fn parse_ratio(text: &str) -> Result<num_rational::Ratio<u32>, String> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: u32 = num.trim().parse().map_err(|_| format!("bad ratio `{text}`"))?;
    let d: u32 = den.trim().parse().map_err(|_| format!("bad ratio `{text}`"))?;
    if d == 0 || n > d {
        return Err(format!("flip probability `{text}` not in [0, 1]"));
    }
    Ok(num_rational::Ratio::new(n, d))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
