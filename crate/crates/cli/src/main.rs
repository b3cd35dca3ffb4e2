use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use toric_bundle::io::FanFile;
use toric_bundle::parse::parse_polynomial;
use toric_bundle::reducer::{random_polynomial, random_specialization, AdditiveOracle, MultiplicativeOracle};
use toric_bundle::ringops::{self, SpecializationTarget};
use toric_bundle::shelling::{self, SearchOptions};
use toric_bundle::{catalog, Error, Fan, Mode, Presentation, Reducer, ShellingData};

#[derive(Parser)]
#[command(name = "toric-bundle", version, about = "Cohomology and K-theory rings of toric bundles from fans")]
struct Cli {
    /// Worker threads for table computations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for order search and random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a fan is simplicial, smooth and complete.
    Validate {
        fan: String,
        #[arg(long)]
        json: bool,
    },
    /// Find an ordering of the maximal cones satisfying (*).
    Order {
        fan: String,
        #[arg(long)]
        require_star_prime: bool,
        /// Enumerate every valid ordering instead of finding one.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1_000_000)]
        node_limit: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print the generating relations.
    Present {
        fan: String,
        #[arg(long, default_value = "additive")]
        mode: Mode,
    },
    /// Reduce a polynomial to the basis x(tau_i).
    Reduce {
        fan: String,
        #[arg(long, default_value = "additive")]
        mode: Mode,
        #[arg(long)]
        poly: String,
    },
    /// Multiplication table of the basis.
    Table {
        fan: String,
        #[arg(long, default_value = "additive")]
        mode: Mode,
        /// Parameter values, e.g. `r=0` or `r1=2*t1,r2=0 mod t1^2`.
        #[arg(long)]
        specialize: Option<String>,
        #[arg(long)]
        text: bool,
    },
    /// Even Betti numbers b_0, b_2, .., b_2n.
    Betti {
        fan: String,
        #[arg(long)]
        json: bool,
    },
    /// Oracle agreement, duality and associativity checks.
    Check {
        fan: String,
        /// Only this mode (both by default).
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// List the built-in fans, or print one.
    Catalog { name: Option<String> },
}

enum Failure {
    /// A mathematical finding: invalid fan, failed check.
    Finding(String),
    /// Bad arguments or unreadable input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Input { .. }
            | Error::Dimension { .. }
            | Error::ModeMismatch { .. }
            | Error::ModeViolation(_)
            | Error::Specialization(_) => Failure::Usage(e.to_string()),
            _ => Failure::Finding(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(arg: &str) -> Result<FanFile, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        return FanFile::parse(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")));
    }
    catalog::file(arg).map_err(|_| Failure::Usage(format!("{arg}: no such file or catalog fan")))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn require_complete(fan: &Fan) -> Outcome {
    let report = fan.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Finding(format!("ordering requires complete fan: {}", report.diagnostics.join("; "))))
    }
}

/// The file's ordering if it has one, otherwise a searched one (preferring
/// orders that also satisfy (*')).
fn shell(file: &FanFile, fan: &Fan, seed: u64) -> Result<ShellingData, Failure> {
    require_complete(fan)?;
    if let Some(order) = file.order()? {
        let sd = ShellingData::new(fan, &order)?;
        sd.require_star()?;
        return Ok(sd);
    }
    let opts = SearchOptions { seed, ..Default::default() };
    match shelling::find_shelling(fan, &opts) {
        Ok((sd, _)) => Ok(sd),
        Err(Error::OrderNotFound(_) | Error::SearchInconclusive { .. }) => {
            let opts = SearchOptions { require_star_prime: false, ..opts };
            Ok(shelling::find_shelling(fan, &opts)?.0)
        }
        Err(e) => Err(e.into()),
    }
}

fn validate(arg: &str, as_json: bool) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    let report = fan.validate();
    if as_json {
        print_json(&serde_json::to_value(&report).expect("json"));
    } else if report.is_valid() {
        println!("smooth complete fan, d={}, m={}", fan.num_rays(), fan.num_max_cones());
    } else {
        println!("invalid fan");
        for d in &report.diagnostics {
            println!("  {d}");
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Finding(String::new()))
    }
}

fn ok_flag(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fails"
    }
}

fn order(arg: &str, seed: u64, require_star_prime: bool, exhaustive: bool, node_limit: u64, as_json: bool) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    require_complete(&fan)?;
    let what = if require_star_prime { "(*) and (*')" } else { "(*)" };
    if exhaustive {
        let orders = shelling::enumerate_orders(&fan, require_star_prime, node_limit)
            .ok_or_else(|| Failure::Finding(format!("search inconclusive after {node_limit} nodes")))?;
        let m = fan.num_max_cones();
        let total: u128 = (1..=m as u128).product();
        if as_json {
            let listed: Vec<Vec<usize>> = orders.iter().map(|o| o.iter().map(|c| c + 1).collect()).collect();
            print_json(&json!({ "checked": total.to_string(), "valid": orders.len(), "orders": listed }));
        } else {
            println!("{total} orders checked, {} satisfy {what}", orders.len());
        }
        return if orders.is_empty() { Err(Failure::Finding(format!("no ordering satisfies {what}"))) } else { Ok(()) };
    }
    let opts = SearchOptions { require_star_prime, seed, node_limit, ..Default::default() };
    let (sd, method) = shelling::find_shelling(&fan, &opts)?;
    if as_json {
        print_json(&json!({
            "order": sd.order_one_based(),
            "star": sd.star_ok,
            "star_prime": sd.star_prime_ok,
            "method": serde_json::to_value(method).expect("json"),
            "tau": sd.tau.iter().map(|t| t.one_based()).collect::<Vec<_>>(),
        }));
    } else {
        let shown: Vec<String> = sd.order_one_based().iter().map(usize::to_string).collect();
        println!("order: {}", shown.join(" "));
        println!("(*) {}, (*') {}", ok_flag(sd.star_ok), ok_flag(sd.star_prime_ok));
        println!("method: {}", serde_json::to_value(method).expect("json").as_str().unwrap_or("?"));
    }
    Ok(())
}

fn present(arg: &str, seed: u64, mode: Mode) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    let sd = shell(&file, &fan, seed)?;
    let mut v = Presentation::build(&fan, &sd, mode)?.to_json();
    v["order"] = json!(sd.order_one_based());
    print_json(&v);
    Ok(())
}

fn reduce(arg: &str, seed: u64, mode: Mode, poly: &str) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    let p = parse_polynomial(poly, mode, fan.num_rays(), fan.dim())?;
    let sd = shell(&file, &fan, seed)?;
    let nf = Reducer::new(&fan, &sd, mode)?.reduce(&p)?;
    let mut v = nf.to_json();
    v["order"] = json!(sd.order_one_based());
    print_json(&v);
    Ok(())
}

fn table(arg: &str, seed: u64, mode: Mode, spec: Option<&str>, text: bool) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    let target = spec.map(|s| SpecializationTarget::parse(s, fan.dim())).transpose()?;
    let sd = shell(&file, &fan, seed)?;
    let t = ringops::mult_table(&Reducer::new(&fan, &sd, mode)?)?;
    match target {
        Some(target) => {
            let st = t.specialize(&target)?;
            if text {
                print!("{}", st.render_text());
            } else {
                print_json(&st.to_json());
            }
        }
        None if text => print!("{}", t.render_text()),
        None => print_json(&t.to_json()),
    }
    Ok(())
}

fn betti(arg: &str, seed: u64, as_json: bool) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    let sd = shell(&file, &fan, seed)?;
    let b = ringops::betti(&sd, fan.dim())?;
    if as_json {
        print_json(&json!({ "even_betti": b, "order": sd.order_one_based() }));
    } else {
        let shown: Vec<String> = b.iter().map(u64::to_string).collect();
        println!("{}", shown.join(" "));
    }
    Ok(())
}

fn check(arg: &str, seed: u64, only: Option<Mode>, samples: usize) -> Outcome {
    let file = load(arg)?;
    let fan = file.to_fan()?;
    let sd = shell(&file, &fan, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<Mode> = only.map_or(vec![Mode::Additive, Mode::Multiplicative], |m| vec![m]);
    let mut failures = 0;
    let mut report = |name: String, result: Result<String, String>| match result {
        Ok(detail) => println!("ok    {name}: {detail}"),
        Err(why) => {
            failures += 1;
            println!("FAIL  {name}: {why}");
        }
    };
    for &mode in &modes {
        let red = Reducer::new(&fan, &sd, mode)?;
        let agreement = (|| -> Result<String, String> {
            match mode {
                Mode::Additive => {
                    let oracle = AdditiveOracle::new(&fan, &sd).map_err(|e| e.to_string())?;
                    for _ in 0..samples {
                        let p = random_polynomial(&mut rng, &fan, mode, 4, 2, 3);
                        if red.reduce(&p).map_err(|e| e.to_string())? != oracle.normal_form(&p).map_err(|e| e.to_string())? {
                            return Err(format!("disagreement on {p}"));
                        }
                    }
                }
                Mode::Multiplicative => {
                    let values = random_specialization(&mut rng, fan.dim());
                    let oracle = MultiplicativeOracle::new(&fan, &sd, &values, 4).map_err(|e| e.to_string())?;
                    for _ in 0..samples {
                        let p = random_polynomial(&mut rng, &fan, mode, 4, 2, 3);
                        let ours = red.reduce(&p).and_then(|nf| nf.evaluate(oracle.values())).map_err(|e| e.to_string())?;
                        if ours != oracle.normal_form(&p).map_err(|e| e.to_string())? {
                            return Err(format!("disagreement on {p}"));
                        }
                    }
                }
            }
            Ok(format!("{samples} random polynomials"))
        })();
        report(format!("oracle agreement ({})", mode.name()), agreement);
        let laws = ringops::mult_table(&red).map_err(|e| e.to_string()).and_then(|t| {
            use rand::Rng;
            if !t.is_symmetric() || !t.has_identity() {
                return Err("table is not symmetric with identity".to_string());
            }
            let m = t.len();
            for _ in 0..samples {
                let (i, j, k) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if !t.is_associative_on(i, j, k) {
                    return Err(format!("not associative on ({}, {}, {})", i + 1, j + 1, k + 1));
                }
            }
            Ok(format!("symmetric, {samples} associative triples"))
        });
        report(format!("algebra laws ({})", mode.name()), laws);
        if mode == Mode::Additive {
            let duality = if sd.star_prime_ok {
                ringops::duality_check(&red).map_err(|e| e.to_string()).and_then(|r| {
                    let signs: Vec<String> = r.diagonal_signs.iter().map(|s| format!("{s:+}")).collect();
                    if r.ok() {
                        Ok(format!("triangular, diagonal signs {}", signs.join(" ")))
                    } else {
                        Err(format!("triangular {}, unit diagonal {}", r.triangular, r.unit_diagonal))
                    }
                })
            } else {
                Ok("skipped: ordering does not satisfy (*')".into())
            };
            report("duality".into(), duality);
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Finding(format!("{failures} check(s) failed")))
    }
}

fn list_catalog(name: Option<&str>) -> Outcome {
    match name {
        None => {
            for n in catalog::names() {
                let tag = if catalog::is_projective(n) { "" } else { " (non-projective)" };
                println!("{n}{tag}");
            }
        }
        Some(n) => {
            let file = catalog::file(n).map_err(|_| Failure::Usage(format!("unknown catalog fan '{n}'")))?;
            print_json(&serde_json::to_value(&file).expect("json"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = cli.seed;
    let outcome = match &cli.command {
        Command::Validate { fan, json } => validate(fan, *json),
        Command::Order { fan, require_star_prime, exhaustive, node_limit, json } => {
            order(fan, seed, *require_star_prime, *exhaustive, *node_limit, *json)
        }
        Command::Present { fan, mode } => present(fan, seed, *mode),
        Command::Reduce { fan, mode, poly } => reduce(fan, seed, *mode, poly),
        Command::Table { fan, mode, specialize, text } => table(fan, seed, *mode, specialize.as_deref(), *text),
        Command::Betti { fan, json } => betti(fan, seed, *json),
        Command::Check { fan, mode, samples } => check(fan, seed, *mode, *samples),
        Command::Catalog { name } => list_catalog(name.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Finding(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
