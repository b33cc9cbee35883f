//! Command-line frontend: analyze a CSV series, reproduce the simulation
//! study, or export a w-correlation matrix.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ssa_autogroup::csv_io::{
    load_csv, save, write_reconstruction_csv, write_study_csv, write_wcorr_csv, ColumnSelector,
    CsvSpec,
};
use ssa_autogroup::{
    decompose, embed, hc_grouping, run_inference_on, wcorr_matrix, AuxSequence, BlockSize,
    BootstrapConfig, Correction, Error, Result, Scenario, SignalKind, SsaDecomposition,
    TaperWindow, TimeSeries,
};

#[derive(Parser)]
#[command(
    name = "ssa-autogroup",
    version,
    about = "Singular spectrum analysis with automatic grouping-index selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a series, test every grouping index, and export reports.
    Analyze(AnalyzeArgs),
    /// Run the Monte-Carlo study over signal/SNR scenarios.
    Simulate(SimulateArgs),
    /// Export the absolute w-correlation matrix of a series.
    Wcorr(WcorrArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV file.
    #[arg(long)]
    input: PathBuf,

    /// Value column: a name from the header or a 0-based index.
    #[arg(long = "value-col", default_value = "0")]
    value_col: ColumnSelector,

    /// Optional label column carried through to reports.
    #[arg(long = "label-col")]
    label_col: Option<ColumnSelector>,

    /// Read the file without a header row (columns by index only).
    #[arg(long = "no-header")]
    no_header: bool,

    /// Window length L; defaults to floor(N/2).
    #[arg(long)]
    window: Option<usize>,
}

impl InputArgs {
    fn load(&self) -> Result<(TimeSeries, SsaDecomposition)> {
        let spec = CsvSpec {
            path: self.input.clone(),
            value_column: self.value_col.clone(),
            label_column: self.label_col.clone(),
            delimiter: b',',
            header: !self.no_header,
        };
        let series = load_csv(&spec)?;
        let l = self.window.unwrap_or(series.len() / 2);
        let dec = decompose(&embed(&series, l)?)?;
        Ok((series, dec))
    }
}

#[derive(Args)]
struct BootstrapArgs {
    /// Bootstrap replications (at least 99).
    #[arg(long = "B", default_value_t = 1000, value_parser = parse_replications)]
    replications: usize,

    /// Master seed for all random streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Auxiliary draw distribution (gaussian, or a registered preset).
    #[arg(long, default_value = "gaussian")]
    aux: AuxSequence,

    /// Taper window shape (triangle or trapezoid043).
    #[arg(long, default_value = "triangle")]
    taper: TaperWindow,

    /// Block size: an integer >= 2, or `auto` for max(2, round(N^(1/5))).
    #[arg(long, default_value = "auto", value_parser = parse_block)]
    ell: BlockSize,
}

impl BootstrapArgs {
    fn config(&self) -> BootstrapConfig {
        BootstrapConfig {
            block_size: self.ell,
            window: self.taper.clone(),
            aux: self.aux,
            replications: self.replications,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Significance level for the separability tests.
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,

    /// Multiplicity correction (holm or sidak).
    #[arg(long, default_value = "holm")]
    correction: Correction,

    #[command(flatten)]
    bootstrap: BootstrapArgs,

    /// Directory the report files are written into (created if missing).
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Signals to simulate, comma-separated (f1, f2, f3).
    #[arg(long, value_delimiter = ',', default_value = "f1,f2,f3")]
    signals: Vec<SignalKind>,

    /// Signal-to-noise ratios, comma-separated; scenarios are the cross
    /// product with --signals.
    #[arg(long, value_delimiter = ',', default_value = "5,2,0.75")]
    snr: Vec<f64>,

    /// Monte-Carlo replicates per scenario.
    #[arg(long, default_value_t = 100)]
    reps: usize,

    /// Master seed; every scenario/replicate stream derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Bootstrap replications inside each replicate.
    #[arg(long = "B", default_value_t = 1000, value_parser = parse_replications)]
    replications: usize,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WcorrArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_replications(s: &str) -> std::result::Result<usize, String> {
    let b: usize = s
        .parse()
        .map_err(|_| format!("`{s}` is not a valid replication count"))?;
    if b < 99 {
        return Err("bootstrap replication count must be at least 99".into());
    }
    Ok(b)
}

fn parse_block(s: &str) -> std::result::Result<BlockSize, String> {
    let block: BlockSize = s.parse().map_err(|e: Error| e.to_string())?;
    if matches!(block, BlockSize::Fixed(e) if e < 2) {
        return Err("block size must be at least 2, or `auto`".into());
    }
    Ok(block)
}

fn main() {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("SSA_AUTOGROUP_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let code = match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Wcorr(args) => cmd_wcorr(args),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let (series, dec) = args.input.load()?;
    let cfg = args.bootstrap.config();
    let result = run_inference_on(&dec, &cfg, args.correction, args.alpha)?;
    let hc = hc_grouping(&dec)?;
    if hc.trivial {
        eprintln!("warning: only one component above the rank tolerance; nothing to cluster");
    }
    let split = dec.split(result.g_hat)?;
    let wmat = wcorr_matrix(&dec)?;
    for (i, j) in wmat.degenerate_entries() {
        eprintln!("warning: components {i} and {j} are numerically null; w-correlation set to 0");
    }

    fs::create_dir_all(&args.out_dir)?;
    save(&args.out_dir.join("grouping.txt"), |w| {
        w.write_all(result.render_table().as_bytes())?;
        writeln!(w, "hc baseline (complete linkage): g_hc = {}", hc.g_hc)?;
        Ok(())
    })?;
    save(&args.out_dir.join("grouping.kv"), |w| {
        writeln!(w, "input={}", args.input.input.display())?;
        w.write_all(result.render_kv().as_bytes())?;
        writeln!(w, "g_hc={}", hc.g_hc)?;
        Ok(())
    })?;
    save(&args.out_dir.join("reconstruction.csv"), |w| {
        write_reconstruction_csv(w, &series, &split)
    })?;
    save(&args.out_dir.join("wcorr.csv"), |w| write_wcorr_csv(w, &wmat))?;

    println!(
        "n = {}, L = {}, d = {}",
        result.n, result.window, result.rank
    );
    println!("g_hat = {}", result.g_hat);
    println!("g_hc = {}", hc.g_hc);
    println!("reports written to {}", args.out_dir.display());
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    if args.reps == 0 {
        return Err(Error::InvalidConfig(
            "replication count must be at least 1".into(),
        ));
    }
    let mut scenarios = Vec::new();
    for &signal in &args.signals {
        for &snr in &args.snr {
            let mut scen = Scenario::new(signal, snr);
            scen.reps = args.reps;
            scen.cfg.replications = args.replications;
            scenarios.push(scen);
        }
    }
    let rows = ssa_autogroup::run_study(&scenarios, args.seed)?;
    save(&args.out, |w| write_study_csv(w, &rows))?;

    println!(
        "{:<7} {:>7} {:>5} {:>11} {:>9} {:>6} {:>10} {:>8} {:>7} {:>9}",
        "signal",
        "snr",
        "reps",
        "mean_g_hat",
        "sd_g_hat",
        "fwer",
        "mean_g_hc",
        "sd_g_hc",
        "g_star",
        "failures"
    );
    for r in &rows {
        println!(
            "{:<7} {:>7} {:>5} {:>11.3} {:>9.3} {:>6.3} {:>10.3} {:>8.3} {:>7} {:>9}",
            r.signal.name(),
            r.snr,
            r.reps,
            r.mean_g_hat,
            r.sd_g_hat,
            r.fwer_hat,
            r.mean_g_hc,
            r.sd_g_hc,
            r.g_star,
            r.failures
        );
    }
    println!("study written to {}", args.out.display());
    Ok(())
}

fn cmd_wcorr(args: WcorrArgs) -> Result<()> {
    let (_, dec) = args.input.load()?;
    let wmat = wcorr_matrix(&dec)?;
    for (i, j) in wmat.degenerate_entries() {
        eprintln!("warning: components {i} and {j} are numerically null; w-correlation set to 0");
    }
    save(&args.out, |w| write_wcorr_csv(w, &wmat))?;
    println!(
        "{}x{} w-correlation matrix written to {}",
        wmat.dim(),
        wmat.dim(),
        args.out.display()
    );
    Ok(())
}
