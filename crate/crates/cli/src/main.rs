use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bfc::fermionic::{normal_order, star_action_oracle, RawWord};
use bfc::harness::{b24_report, verify, SweepConfig};
use bfc::{extract_action, main_series, Bounds, Coeff, Conventions, Params, Partition, SchurCombo};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

/// Clifford-algebra actions on Grassmannian cohomology rings.
#[derive(Parser)]
#[command(name = "bfc", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Act with a Clifford word on a Schur class, directly and through the series.
    Act(ActArgs),
    /// Print the truncated generating series.
    Series(SeriesArgs),
    /// Compare the series with the direct action over a parameter sweep.
    Verify(VerifyArgs),
    /// The r = 2, n = 4, h = k = 1 table, checked and diffed against its printed form.
    B24(OutArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DegArgs {
    /// Truncation degree of each z variable.
    #[arg(long)]
    zdeg: Option<u32>,
    /// Truncation degree of each w^-1 variable.
    #[arg(long)]
    wdeg: Option<u32>,
    /// Truncation degree of each t variable.
    #[arg(long)]
    tdeg: Option<u32>,
}

impl DegArgs {
    fn any(&self) -> bool {
        self.zdeg.is_some() || self.wdeg.is_some() || self.tdeg.is_some()
    }

    fn over(&self, base: Bounds) -> Bounds {
        Bounds::new(
            self.zdeg.unwrap_or(base.z),
            self.wdeg.unwrap_or(base.w),
            self.tdeg.unwrap_or(base.t),
        )
    }
}

/// `n`, with `None` for `inf`.
#[derive(Clone, Copy)]
struct Dim(Option<u32>);

fn parse_n(s: &str) -> Result<Dim, String> {
    if s.eq_ignore_ascii_case("inf") {
        Ok(Dim(None))
    } else {
        s.parse::<u32>().map(|n| Dim(Some(n))).map_err(|e| format!("`{s}`: {e}"))
    }
}

#[derive(Args)]
struct ActArgs {
    #[arg(long)]
    r: u32,
    /// Dimension of V, or `inf`.
    #[arg(long, value_parser = parse_n)]
    n: Dim,
    /// Letters `X:i` and `D:j`, space separated; any order.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    /// Partition such as `[2,1]`.
    #[arg(long)]
    schur: String,
    #[command(flatten)]
    deg: DegArgs,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    h: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Dimension of V, or `inf`.
    #[arg(long, value_parser = parse_n)]
    n: Dim,
    #[command(flatten)]
    deg: DegArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Flip the overall sign (negative control).
    #[arg(long, hide = true)]
    flip_sign: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    min_n: u32,
    #[arg(long, default_value_t = 6)]
    max_n: u32,
    #[arg(long, default_value_t = 3)]
    max_r: u32,
    #[arg(long, default_value_t = 2)]
    max_h: u32,
    #[arg(long, default_value_t = 2)]
    max_k: u32,
    #[command(flatten)]
    deg: DegArgs,
    /// Worker threads (0: one per core).
    #[arg(long, env = "BFC_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Skip the identity suites.
    #[arg(long)]
    no_suites: bool,
    /// Flip the overall sign of the series; the sweep must then fail.
    #[arg(long)]
    flip_sign: bool,
    #[command(flatten)]
    out: OutArgs,
}

/// Default box for `n = inf` when no degrees are given.
const INF_BOUNDS: Bounds = Bounds { z: 4, w: 4, t: 4 };

fn emit(out: &OutArgs, text: String, json: serde_json::Value) -> Result<(), String> {
    let body = match out.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&json).map_err(|e| e.to_string())?,
    };
    match &out.out {
        Some(path) => fs::write(path, body + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut so = std::io::stdout().lock();
            match writeln!(so, "{body}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                _ => Ok(()),
            }
        }
    }
}

enum Failure {
    Mismatch,
    Usage(String),
}

fn act(a: &ActArgs) -> Result<(), Failure> {
    let usage = |e: String| Failure::Usage(e);
    let raw: RawWord = a.word.parse().map_err(|e: bfc::fermionic::FermionicError| usage(e.to_string()))?;
    let la: Partition = a.schur.parse().map_err(|e: bfc::partitions::PartitionError| usage(e.to_string()))?;
    if a.n.0.is_some_and(|n| a.r > n) {
        return Err(usage(format!("r = {} exceeds n", a.r)));
    }
    if la.len() > a.r as usize {
        return Err(usage(format!("{la} has more than r = {} parts", a.r)));
    }
    let mut oracle = SchurCombo::zero();
    let mut series = SchurCombo::zero();
    for (c, w) in normal_order(&raw) {
        let p = Params::new(a.r, w.h(), w.k(), a.n.0);
        oracle = oracle + star_action_oracle(&w, &la, a.r, a.n.0).scale(&c);
        let top = |v: &[u32]| v.iter().copied().max().unwrap_or(0);
        let need = Bounds::new(top(&w.creations), top(&w.annihilations), la.first() + a.r.saturating_sub(1));
        let bounds = match a.n.0 {
            Some(_) if !a.deg.any() => None,
            _ => Some(a.deg.over(need)),
        };
        let gs = main_series(&p, bounds, &Conventions::RESOLVED).map_err(|e| usage(e.to_string()))?;
        let v = extract_action(&gs, &w.creations, &w.annihilations, &la).map_err(|e| usage(e.to_string()))?;
        series = series + v.scale(&c);
    }
    let show = |x: &SchurCombo| if x.is_zero() { "0".to_string() } else { x.to_string() };
    println!("word:      {raw}");
    println!("oracle:    {}", show(&oracle));
    println!("series:    {}", show(&series));
    if oracle == series {
        println!("agree");
        Ok(())
    } else {
        println!("MISMATCH");
        Err(Failure::Mismatch)
    }
}

fn series(a: &SeriesArgs) -> Result<(), Failure> {
    let p = Params::new(a.r, a.h, a.k, a.n.0);
    if a.n.0.is_some_and(|n| a.r > n) {
        return Err(Failure::Usage(format!("r = {} exceeds n", a.r)));
    }
    let bounds = match (a.n.0, a.deg.any()) {
        (Some(_), false) => None,
        (Some(_), true) => Some(a.deg.over(Bounds::exact(&p).expect("finite n"))),
        (None, _) => Some(a.deg.over(INF_BOUNDS)),
    };
    let conv = if a.flip_sign {
        Conventions::RESOLVED.negated()
    } else {
        Conventions::RESOLVED
    };
    let gs = main_series(&p, bounds, &conv).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut text = gs.to_string();
    if text.is_empty() {
        text = "0".into();
    }
    if p.m() < 0 {
        text = format!("# r + h - k < 0: the series is zero\n{text}");
    }
    emit(&a.out, text.trim_end().to_string(), gs.to_json()).map_err(Failure::Usage)
}

fn run_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let bounds = a.deg.any().then(|| a.deg.over(Bounds::new(u32::MAX, u32::MAX, u32::MAX)));
    let cfg = SweepConfig {
        min_n: a.min_n,
        max_n: a.max_n,
        max_r: a.max_r,
        max_h: a.max_h,
        max_k: a.max_k,
        bounds,
        jobs: a.jobs,
        conventions: if a.flip_sign {
            Conventions::RESOLVED.negated()
        } else {
            Conventions::RESOLVED
        },
        suites: !a.no_suites,
        out: a.out.out.clone(),
        ..Default::default()
    };
    let report = verify(&cfg).map_err(Failure::Usage)?;
    emit(&a.out, report.to_string(), report.to_json()).map_err(Failure::Usage)?;
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn b24(a: &OutArgs) -> Result<(), Failure> {
    let report = b24_report().map_err(Failure::Usage)?;
    emit(a, report.to_string(), report.to_json()).map_err(Failure::Usage)?;
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Act(a) => act(a),
        Cmd::Series(a) => series(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::B24(a) => b24(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
