use carlitz_lab::app::{run, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "carlitz-lab", version, about = "Exact Drinfeld-module verification over F_q[T]")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Size of the constant field, a prime power.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Characteristic of the constant field.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Degree of the constant field over F_p.
    #[arg(long, global = true)]
    d: Option<u32>,
    /// Comma-separated monic irreducibles P_j; the extension is generated by the λ_{P_j}.
    #[arg(long, global = true, value_delimiter = ',')]
    ext: Vec<String>,
    /// Worker threads; reports do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Seed for randomized property sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// φ_a, exponential and logarithm coefficients, torsion polynomials.
    Drinfeld {
        /// Comma-separated τ-coefficients of φ_T after the constant term; Carlitz when absent.
        #[arg(long, value_delimiter = ',')]
        module: Vec<String>,
        /// Order of the exp/log checks.
        #[arg(long, default_value_t = 8)]
        max_deg: usize,
        /// Comma-separated polynomials a for φ_a and the functional equation.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
    },
    /// Strata of the equivariant L-series applied to a payload.
    Lseries {
        #[arg(long, default_value_t = 1)]
        n: i64,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
        #[arg(long, default_value = "1")]
        payload: String,
        #[arg(long, default_value_t = 0)]
        vars: usize,
    },
    /// Special polynomials, integrality, stabilization and Stark units.
    Logalg {
        #[arg(long, default_value = "1")]
        payload: String,
        #[arg(long, default_value_t = 0)]
        vars: usize,
        #[arg(long)]
        max_z: Option<usize>,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long, default_value_t = 30)]
        prec: i64,
        /// Comma-separated primes for the torsion specialization check (one-variable payloads).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
    },
    /// Zeta values: polynomials at n ≤ 0, Euler against Dirichlet at n ≥ 1.
    Zeta {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
        #[arg(long)]
        eval_z1: bool,
        #[arg(long, default_value_t = 20)]
        prec: i64,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Euler-factor determinants and the determinant of the equivariant series.
    Det {
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
    /// L-factor products against zeta; rank-r principal-unit table with --module.
    Classformula {
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
        #[arg(long, default_value_t = 20)]
        prec: i64,
        #[arg(long, value_delimiter = ',')]
        module: Vec<String>,
    },
    /// Exponential of the Pellarin series in the shtuka basis.
    Shtuka {
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 8)]
        max_deg: usize,
        /// Comma-separated samples in t1, …, ts.
        #[arg(long, value_delimiter = ',')]
        samples: Vec<String>,
    },
}

fn field_of(g: &Global) -> Result<(u64, u32), String> {
    let from_q = g.q.map(|q| {
        let p = (2..=q).find(|k| q % k == 0).ok_or_else(|| format!("--q {q} is not a prime power"))?;
        let mut r = q;
        let mut d = 0;
        while r % p == 0 {
            r /= p;
            d += 1;
        }
        if r != 1 {
            return Err(format!("--q {q} is not a prime power"));
        }
        Ok((p, d))
    });
    match (from_q.transpose()?, g.p) {
        (Some((p, d)), None) if g.d.is_none_or(|x| x == d) => Ok((p, d)),
        (Some((p, d)), Some(pp)) if pp == p && g.d.is_none_or(|x| x == d) => Ok((p, d)),
        (Some(_), _) => Err("--q disagrees with --p/--d".into()),
        (None, Some(p)) => Ok((p, g.d.unwrap_or(1))),
        (None, None) => Err("one of --q or --p is required".into()),
    }
}

fn config_of(cli: &Cli) -> Result<RunConfig, String> {
    let (p, d) = field_of(&cli.global)?;
    let name = match &cli.cmd {
        Cmd::Drinfeld { .. } => "drinfeld",
        Cmd::Lseries { .. } => "lseries",
        Cmd::Logalg { .. } => "logalg",
        Cmd::Zeta { .. } => "zeta",
        Cmd::Det { .. } => "det",
        Cmd::Classformula { .. } => "classformula",
        Cmd::Shtuka { .. } => "shtuka",
    };
    let mut c = RunConfig::new(name, p, d);
    c.ext = cli.global.ext.clone();
    c.seed = cli.global.seed;
    match &cli.cmd {
        Cmd::Drinfeld { module, max_deg, primes } => {
            c.module = module.clone();
            c.max_deg = *max_deg;
            c.primes = primes.clone();
        }
        Cmd::Lseries { n, max_deg, payload, vars } => {
            c.n = *n;
            c.max_deg = *max_deg;
            c.payload = Some(payload.clone());
            c.vars = *vars;
        }
        Cmd::Logalg { payload, vars, max_z, window, prec, primes } => {
            if payload.trim().is_empty() {
                return Err("empty payload".into());
            }
            c.payload = Some(payload.clone());
            c.vars = *vars;
            c.max_z = *max_z;
            c.window = *window;
            c.prec = *prec;
            c.primes = primes.clone();
        }
        Cmd::Zeta { n, max_deg, eval_z1, prec, window } => {
            c.n = *n;
            c.max_deg = *max_deg;
            c.eval_z1 = *eval_z1;
            c.prec = *prec;
            c.window = *window;
        }
        Cmd::Det { primes, max_deg } => {
            c.primes = primes.clone();
            c.max_deg = *max_deg;
        }
        Cmd::Classformula { max_deg, prec, module } => {
            c.max_deg = *max_deg;
            c.prec = *prec;
            c.module = module.clone();
        }
        Cmd::Shtuka { s, max_deg, samples } => {
            c.s = *s;
            c.max_deg = *max_deg;
            c.samples = samples.clone();
        }
    }
    if c.window == 0 {
        return Err("--window must be positive".into());
    }
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match config_of(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let report = match pool.install(|| run(&config)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    eprintln!("{} finished in {:.3} s", config.command, start.elapsed().as_secs_f64());
    let text = match cli.global.emit {
        Emit::Json => report.to_json(),
        Emit::Csv => match report.to_csv() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.proven_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
