//! `aeswsn`: encrypt/decrypt files with AES-CBC, benchmark the cipher against
//! the ATmega644p model, and simulate hop-by-hop relay delay.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on domain errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aeswsn_core::bench::{self, BenchConfig};
use aeswsn_core::hopnet::{self, DelayParams, HopChain, Interpretation};
use aeswsn_core::mcu::{self, CalibrationTable, McuClockConfig, Operation, UnitInterpretation};
use aeswsn_core::{report, CbcContext, Error, Format, Message, PaddingPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "aeswsn", version, about, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encrypt a file with AES-CBC.
    Encrypt(CryptArgs),
    /// Decrypt a file with AES-CBC.
    Decrypt(CryptArgs),
    /// Time CBC on this host next to the modeled ATmega644p figures.
    Bench(BenchArgs),
    /// Relay a message through a chain of nodes and report the delay.
    Simulate(SimulateArgs),
    /// Clock, prescaler and CTC compare-value arithmetic, and calibrated predictions.
    Timing(TimingArgs),
}

#[derive(Debug, Args)]
struct CryptArgs {
    /// Key as hex (16, 24 or 32 octets).
    #[arg(long)]
    key: String,
    /// Initialization vector as hex (16 octets).
    #[arg(long)]
    iv: String,
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long = "out", value_name = "FILE")]
    output: PathBuf,
    /// Padding; without it the input must be a multiple of 16 octets.
    #[arg(long, value_enum)]
    pad: Option<PadArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PadArg {
    Pkcs7,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitsArg {
    AsPrinted,
    Physical,
}

impl From<UnitsArg> for UnitInterpretation {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::AsPrinted => UnitInterpretation::AsPrinted,
            UnitsArg::Physical => UnitInterpretation::Physical,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InterpretationArg {
    Linear,
    Summation,
}

impl From<InterpretationArg> for Interpretation {
    fn from(i: InterpretationArg) -> Self {
        match i {
            InterpretationArg::Linear => Interpretation::Linear,
            InterpretationArg::Summation => Interpretation::Summation,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Enc,
    Dec,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write to FILE instead of standard output.
    #[arg(long = "out", value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CalibrationArgs {
    /// Calibration CSV (size,enc_ms,enc_cycles,dec_ms,dec_cycles); built-in table if omitted.
    #[arg(long, value_name = "FILE")]
    calibration: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "as-printed")]
    units: UnitsArg,
    /// Clock frequency the calibration was measured at.
    #[arg(long = "freq", default_value_t = mcu::DEFAULT_FREQUENCY_HZ)]
    frequency_hz: u64,
}

impl CalibrationArgs {
    fn load(&self) -> Result<CalibrationTable, Error> {
        let table = match &self.calibration {
            Some(path) => CalibrationTable::read_csv(fs::File::open(path)?, self.frequency_hz)?,
            None => CalibrationTable::atmega644p(),
        };
        Ok(table.with_units(self.units.into()))
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES)]
    sizes: Vec<usize>,
    /// Repetitions per cell; chosen automatically when omitted.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value = bench::DEFAULT_KEY)]
    key: String,
    #[arg(long, default_value = bench::DEFAULT_IV)]
    iv: String,
    #[arg(long, default_value_t = bench::DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    calibration: CalibrationArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Hop count of the relay chain.
    #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
    hops: Option<u64>,
    /// Emit total delay for every hop count 1..=N_MAX instead of relaying.
    #[arg(long, value_name = "N_MAX")]
    sweep: Option<u64>,
    #[arg(long, default_value_t = 449.0)]
    t_enc: f64,
    #[arg(long, default_value_t = 456.0)]
    t_dec: f64,
    #[arg(long, default_value_t = 10.0)]
    t_tx: f64,
    #[arg(long, default_value_t = 0.0)]
    dt: f64,
    #[arg(long, value_enum, default_value = "linear")]
    interpretation: InterpretationArg,
    #[arg(long, default_value_t = 16)]
    payload_size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TimingArgs {
    #[arg(long, default_value_t = 8)]
    prescaler: u32,
    /// Compute the CTC compare value for this interval, in microseconds.
    #[arg(long, value_name = "US")]
    interval_us: Option<f64>,
    /// Predict on-device time and cycles for this payload size.
    #[arg(long, value_name = "SIZE")]
    predict: Option<usize>,
    #[arg(long, value_enum, default_value = "enc")]
    direction: DirectionArg,
    /// Print the calibration table as CSV.
    #[arg(long)]
    dump_calibration: bool,
    #[command(flatten)]
    calibration: CalibrationArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Encrypt(args) => crypt(args, true),
        Command::Decrypt(args) => crypt(args, false),
        Command::Bench(args) => bench(args),
        Command::Simulate(args) => simulate(args),
        Command::Timing(args) => timing(args),
    }
}

fn crypt(args: CryptArgs, encrypt: bool) -> Result<(), Error> {
    let ctx = CbcContext::from_hex(&args.key, &args.iv)?;
    let padding = match args.pad {
        Some(PadArg::Pkcs7) => PaddingPolicy::Pkcs7,
        None => PaddingPolicy::NoneRequired,
    };
    let data = fs::read(&args.input)?;
    let out = if encrypt {
        ctx.encrypt(&Message::with_padding(data, padding))?
    } else {
        ctx.decrypt(&data, padding)?.octets
    };
    fs::write(&args.output, out)?;
    Ok(())
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Error> {
    let table = args.calibration.load()?;
    let cfg = BenchConfig {
        data_sizes: args.sizes,
        repetitions: args.reps,
        key: args.key,
        iv: args.iv,
        seed: args.seed,
    };
    let rep = bench::run_bench(&cfg, &table)?;
    let text = match args
        .output
        .format
        .map(Format::from)
        .unwrap_or(Format::Table)
    {
        Format::Csv => report::bench_csv(&rep)?,
        Format::Json => report::to_json(&rep)?,
        Format::Table => report::bench_table(&rep),
    };
    emit(&text, args.output.output.as_deref())
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let params = DelayParams::new(args.t_enc, args.t_dec, args.t_tx, args.dt)?;
    let interpretation: Interpretation = args.interpretation.into();
    let out = args.output.output.as_deref();

    if let Some(max_hops) = args.sweep {
        let rows = hopnet::sweep(&params, max_hops, interpretation);
        let text = match args.output.format.map(Format::from).unwrap_or(Format::Csv) {
            Format::Csv => report::sweep_csv(&rows)?,
            Format::Json => report::to_json(&rows)?,
            Format::Table => report::sweep_table(&rows),
        };
        return emit(&text, out);
    }

    let hops = args.hops.expect("clap enforces --hops without --sweep");
    if hops == 0 {
        return Err(Error::HopCount);
    }
    let chain = HopChain::generate(hops as usize, args.seed)?;
    let payload = hopnet::seeded_payload(args.payload_size, args.seed);
    let sim = hopnet::relay_message(&chain, &Message::new(payload), &params)?;
    let text = match args
        .output
        .format
        .map(Format::from)
        .unwrap_or(Format::Table)
    {
        Format::Csv => report::sim_csv(&sim)?,
        Format::Json => report::to_json(&sim)?,
        Format::Table => report::sim_table(&sim, interpretation),
    };
    emit(&text, out)
}

fn timing(args: TimingArgs) -> Result<(), Error> {
    let cfg = McuClockConfig::new(args.calibration.frequency_hz, args.prescaler)?;
    let table = args.calibration.load()?;
    if args.dump_calibration {
        let mut buf = Vec::new();
        table.write_csv(&mut buf)?;
        return emit(&String::from_utf8_lossy(&buf), None);
    }

    let mut text = format!(
        "clock period: {} ns\nprescaled period: {} ns\n",
        aeswsn_core::hexfmt::number(mcu::clock_period(&cfg) * 1e9),
        aeswsn_core::hexfmt::number(mcu::prescaled_period(&cfg) * 1e9),
    );
    if let Some(us) = args.interval_us {
        let ocr = mcu::ocr_for_interval(&cfg, us * 1e-6)?;
        text.push_str(&format!("ocr: {ocr}\n"));
    }
    if let Some(size) = args.predict {
        let op = match args.direction {
            DirectionArg::Enc => Operation::Enc,
            DirectionArg::Dec => Operation::Dec,
        };
        let p = table.predict(size, op)?;
        text.push_str(&format!(
            "predicted {op} {size} octets: {} ms, {} cycles\n",
            aeswsn_core::hexfmt::grouped(p.time_ms),
            aeswsn_core::hexfmt::grouped(p.cycles)
        ));
    }
    emit(&text, None)
}
