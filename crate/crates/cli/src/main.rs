use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use conformal_detour::harness::{self, CacheOutcome, Format, OperatorCache, ReportDocument, RunConfig, CACHE_DIR_ENV};
use conformal_detour::operators::{Family, OperatorSpec};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact verification of conformally invariant operators on forms.
#[derive(Parser)]
#[command(name = "detour", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and print a report.
    Verify(RunArgs),
    /// Build one operator, cache it and print its normal form.
    Build(RunArgs),
    /// Re-render a saved JSON report.
    Report {
        path: PathBuf,
        #[arg(long)]
        format: Option<String>,
    },
    /// Inspect or clear the operator cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
        #[arg(long = "cache-dir", global = true)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum CacheAction {
    List,
    Clear,
}

#[derive(Args, Default)]
struct RunArgs {
    /// Config file of `key = value` lines under `[section]` headers.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Even dimension: `4`, a list `4,6` or a range `4..12`.
    #[arg(long)]
    n: Option<String>,
    /// Signature as `p,q`.
    #[arg(long)]
    signature: Option<String>,
    /// Form degree (or list).
    #[arg(long)]
    k: Option<String>,
    /// Order parameter ℓ (or list); may be negative.
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<String>,
    /// Scale id: flat or round.
    #[arg(long)]
    scale: Option<String>,
    /// Operator family for `build`: L, G, Q, M, order-n, star-L.
    #[arg(long)]
    family: Option<String>,
    /// Seed for trial forms.
    #[arg(long)]
    seed: Option<String>,
    /// Trial forms per check.
    #[arg(long)]
    trials: Option<String>,
    /// superalgebra, tangential, detour-identities, q-operators, order-n, star, symbols, sphere-audit or all.
    #[arg(long)]
    suite: Option<String>,
    /// text or json.
    #[arg(long)]
    format: Option<String>,
    /// Operator cache directory (default `.detour-cache`).
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A configuration or environment problem (exit code 2).
#[derive(Debug)]
struct Setup(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Setup {
    fn from(e: E) -> Self {
        Setup(e.into())
    }
}

fn resolve(args: &RunArgs) -> Result<RunConfig, Setup> {
    let mut cfg = RunConfig::default();
    if let Ok(dir) = std::env::var(CACHE_DIR_ENV) {
        cfg.cache_dir = PathBuf::from(dir);
    }
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_file(&text).with_context(|| format!("in {}", path.display()))?;
    }
    let flags = [
        ("n", &args.n),
        ("signature", &args.signature),
        ("k", &args.k),
        ("ell", &args.ell),
        ("scale", &args.scale),
        ("family", &args.family),
        ("seed", &args.seed),
        ("trials", &args.trials),
        ("suite", &args.suite),
        ("format", &args.format),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(dir) = &args.cache_dir {
        cfg.cache_dir = dir.clone();
    }
    Ok(cfg)
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Setup> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
    }
}

fn verify(args: &RunArgs) -> Result<bool, Setup> {
    let cfg = resolve(args)?;
    let doc = harness::verify(&cfg)?;
    emit(&render(&doc, cfg.format), &args.output)?;
    Ok(doc.all_ok())
}

fn single<T: Copy>(v: Option<&Vec<T>>, name: &str) -> Result<T> {
    match v.map(Vec::as_slice) {
        Some([x]) => Ok(*x),
        _ => Err(anyhow!("build needs a single --{name}")),
    }
}

fn build(args: &RunArgs) -> Result<bool, Setup> {
    let cfg = resolve(args)?;
    let family: Family = cfg.family.parse().map_err(|e: String| anyhow!(e))?;
    let sig = match cfg.signatures()?.as_slice() {
        [s] => s.clone(),
        _ => return Err(anyhow!("build needs a single n").into()),
    };
    let k: usize = single(cfg.k.as_ref(), "k")?;
    let ell: i64 = match family {
        Family::L | Family::StarL => single(cfg.ell.as_ref(), "ell")?,
        _ => sig.n() as i64 / 2 - k as i64,
    };
    let spec = OperatorSpec::new(family, &sig, k, ell, &cfg.scale);
    let cache = OperatorCache::new(&cfg.cache_dir);
    let (entry, outcome) = cache.get_or_build(&spec)?;
    let text = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&entry).expect("entry serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let status = match outcome {
                CacheOutcome::Hit => "cached",
                CacheOutcome::Built => "built",
                CacheOutcome::Rebuilt => "rebuilt (hash mismatch)",
            };
            let order = entry.order.map_or("zero operator".to_string(), |o| format!("order {o}"));
            format!(
                "{}\n{}, self-adjoint: {}, {status}: {}\n{}",
                entry.key,
                order,
                entry.self_adjoint,
                cache.path_for(&spec).display(),
                entry.rendering
            )
        }
    };
    emit(&text, &args.output)?;
    Ok(true)
}

fn report(path: &PathBuf, format: &Option<String>) -> Result<bool, Setup> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: ReportDocument = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let format: Format = format.as_deref().unwrap_or("text").parse().map_err(|e: String| anyhow!(e))?;
    print!("{}", render(&doc, format));
    Ok(doc.all_ok())
}

fn cache(action: CacheAction, dir: &Option<PathBuf>) -> Result<bool, Setup> {
    let args = RunArgs { cache_dir: dir.clone(), ..RunArgs::default() };
    let cache = OperatorCache::new(resolve(&args)?.cache_dir);
    match action {
        CacheAction::List => {
            for (name, entry) in cache.list()? {
                match entry {
                    Ok(e) => println!("{name}  {}", e.key),
                    Err(why) => println!("{name}  corrupt: {why}"),
                }
            }
        }
        CacheAction::Clear => println!("removed {} entries from {}", cache.clear()?, cache.dir().display()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Build(a) => build(a),
        Cmd::Report { path, format } => report(path, format),
        Cmd::Cache { action, cache_dir } => cache(*action, cache_dir),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Setup(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
