use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relchar_cli::report::RunReport;
use relchar_cli::suites::{self, Options, Suite};
use relchar_core::lattice::Weight;
use relchar_core::models::{load_catalog, Catalog, Model, CATALOG_VERSION};
use relchar_core::ratfun::{rat_string, Rat};
use relchar_core::weylsum::{self, root_rat, SatakePoint};
use relchar_core::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "relchar", version, about = "Unramified relative characters of strongly tempered spherical varieties")]
struct Cli {
    /// Worker threads for the Weyl group folds.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the model catalog.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Evaluate the relative character at a point.
    Relchar(RelcharArgs),
}

#[derive(Subcommand)]
enum ModelsAction {
    /// List the models, or export the catalog with --json.
    List,
    /// Show one model.
    Show { name: String },
}

#[derive(Args)]
struct VerifyArgs {
    /// thetaplus, weylsum, symbolic, antisym, cosets, bratio, padic, matrix, delta, relchar or all.
    suite: String,
    /// Restrict to one model ("all" for every model).
    #[arg(long, default_value = "all")]
    model: String,
    /// Random points per check.
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Omit timings so that equal seeds give identical output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct RelcharArgs {
    model: String,
    /// Residue field size; must make q^{-1/2} rational.
    #[arg(long)]
    q: Option<String>,
    /// Comma-separated values of the chart variables.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["random", "delta_half"])]
    theta: Option<String>,
    /// Draw a random point.
    #[arg(long)]
    random: bool,
    /// Use the point θ = δ^{1/2} (requires --q).
    #[arg(long, conflicts_with = "random")]
    delta_half: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Dominant coweight in doubled coordinates, comma-separated; adds the normalized WS value.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let catalog = load_catalog()?;
    match &cli.command {
        Command::Models { action } => models(&catalog, action, cli.json),
        Command::Verify(args) => verify(&catalog, args, cli.json),
        Command::Relchar(args) => relchar(&catalog, args, cli.json),
    }
}

fn models(catalog: &Catalog, action: &ModelsAction, json: bool) -> Result<bool, CliError> {
    match action {
        ModelsAction::List => {
            if json {
                println!("{}", catalog.to_json()?);
            } else {
                for spec in &catalog.models {
                    let row = spec.table_row.map(|r| format!("row {r:>2}")).unwrap_or_else(|| "base  ".into());
                    println!("{row}  {:<10} {:<14} ρ_X = {}", spec.name, spec.label, spec.rho_x);
                }
            }
        }
        ModelsAction::Show { name } => {
            let m = catalog.model(name)?;
            let plus = m.theta_plus()?;
            let roots: Vec<_> = m
                .datum
                .simple
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    json!({
                        "name": s.name,
                        "root": s.root.to_string(),
                        "coroot": s.coroot.to_string(),
                        "type": format!("{:?}", s.kind),
                        "colors": m.colors[j].iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let show = json!({
                "name": m.name(),
                "label": m.spec.label,
                "rho_x": m.spec.rho_x,
                "table_row": m.spec.table_row,
                "coords": m.spec.coords,
                "dim_rho_x": m.theta_dimension(),
                "weyl_order": m.weyl_order_formula(),
                "roots": roots,
                "theta": m.theta().iter().map(|w| format!("{w}^{}", w.degree)).collect::<Vec<_>>(),
                "theta_plus": plus.elements.iter().map(|w| format!("{w}^{}", w.degree)).collect::<Vec<_>>(),
                "delta": m.render_delta()?,
            });
            if json {
                println!("{}", serde_json::to_string_pretty(&show).map_err(Error::from)?);
            } else {
                println!("{} ({}), ρ_X = {}, {} weights", m.name(), m.spec.label, m.spec.rho_x, m.theta_dimension());
                println!("coordinates: {}", m.spec.coords.join(", "));
                println!("|W| = {}", m.weyl_order_formula());
                for (j, s) in m.datum.simple.iter().enumerate() {
                    let cs: Vec<String> = m.colors[j].iter().map(|w| w.to_string()).collect();
                    println!("  {:<4} {:?}  {}  colors {}", s.name, s.kind, s.root, cs.join(" "));
                }
                let tp: Vec<String> = plus.elements.iter().map(|w| w.to_string()).collect();
                println!("Θ⁺ ({}): {}", plus.len(), tp.join(" "));
                println!("Δ = {}", m.render_delta()?);
            }
        }
    }
    Ok(true)
}

fn select(catalog: &Catalog, name: &str) -> Result<Vec<Model>, CliError> {
    if name == "all" {
        catalog.models.iter().map(|s| Model::new(s.clone())).collect::<Result<_, _>>().map_err(CliError::from)
    } else {
        Ok(vec![catalog.model(name)?])
    }
}

fn verify(catalog: &Catalog, args: &VerifyArgs, json: bool) -> Result<bool, CliError> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_str(&args.suite).map_err(CliError::Usage)?]
    };
    let models = select(catalog, &args.model)?;
    let opts = Options { points: args.points, seed: args.seed };
    let t = Instant::now();
    let checks = suites.iter().flat_map(|&s| suites::run(s, &models, &opts)).collect();
    let command = std::env::args().skip(1).collect();
    let mut report = RunReport::new(command, CATALOG_VERSION, catalog.hash()?, args.seed, checks);
    report.millis = Some(t.elapsed().as_millis() as u64);
    if args.no_timing {
        report.strip_timing();
    }
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_table());
    }
    Ok(report.ok())
}

fn parse_rats(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|x| Rat::from_str(x.trim()).map_err(|_| CliError::Usage(format!("`{x}` is not a rational number"))))
        .collect()
}

fn u_from_q(q: &Rat) -> Result<Rat, CliError> {
    root_rat(&q.recip(), 2).ok_or_else(|| CliError::Usage(format!("q^(-1/2) is irrational for q = {}", rat_string(q))))
}

fn relchar(catalog: &Catalog, args: &RelcharArgs, json: bool) -> Result<bool, CliError> {
    let m = catalog.model(&args.model)?;
    let q = args.q.as_deref().map(|s| parse_rats(s).map(|v| v[0].clone())).transpose()?;
    let point = if args.delta_half {
        let q = q.ok_or_else(|| CliError::Usage("--delta-half needs --q".into()))?;
        SatakePoint::delta_half(&m, &q)?
    } else if let Some(t) = &args.theta {
        let q = q.ok_or_else(|| CliError::Usage("--theta needs --q".into()))?;
        SatakePoint::new(&m, parse_rats(t)?, u_from_q(&q)?)?
    } else if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let u = q.as_ref().map(u_from_q).transpose()?;
        let (p, _) = weylsum::with_resampling(&m, &mut rng, 1, |p| {
            let p = match &u {
                Some(u) => SatakePoint::new(&m, p.tau.clone(), u.clone())?,
                None => p.clone(),
            };
            weylsum::relchar_factors(&m, &p).map(|_| p)
        })?;
        p
    } else {
        return Err(CliError::Usage("give --theta, --random or --delta-half".into()));
    };
    let f = match weylsum::relchar_factors(&m, &point) {
        Ok(f) => f,
        Err(Error::Pole(msg)) => {
            if json {
                println!("{}", json!({"model": m.name(), "pole": msg, "tau": point.tau_strings()}));
            } else {
                println!("pole at the point: {msg}");
            }
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let ws = match &args.t {
        Some(t) => {
            let coords: Vec<i32> = t
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("`{x}` is not an integer"))))
                .collect::<Result<_, _>>()?;
            Some(rat_string(&weylsum::ws_value(&m, &Weight::doubled(&coords), &point)?))
        }
        None => None,
    };
    let agree = f.from_beta == f.from_l_values;
    if json {
        let out = json!({
            "model": m.name(),
            "tau": point.tau_strings(),
            "u": rat_string(&point.u),
            "q": rat_string(&point.q()),
            "factors": f,
            "value": f.from_beta,
            "assemblies_agree": agree,
            "ws_value": ws,
        });
        println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
    } else {
        println!("{} at τ = ({}), q = {}", m.name(), point.tau_strings().join(", "), rat_string(&point.q()));
        println!("  Δ part        {}", f.delta);
        println!("  L(1/2) part   {}", f.l_half);
        println!("  L(1,Ad) part  {}", f.l_ad);
        println!("  I(φ)          {}", f.from_beta);
        println!("  L-assembly    {} ({})", f.from_l_values, if agree { "agrees" } else { "DIFFERS" });
        if let Some(v) = ws {
            println!("  WS value      {v}");
        }
    }
    Ok(agree)
}
