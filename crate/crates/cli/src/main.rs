//! `fdszt`: embed, extract, capacity, metrics and verify over PGM/PNG files.
//!
//! Exit codes: 0 success, 1 I/O or format error, 2 insufficient capacity,
//! 3 embedding failed, 4 no valid payload, 5 verify mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdszt_core::{
    capacity_bits, embed_image, extract_image, metrics, read_image, required_bits, write_image,
    CodecError, GrayImage, ImageError, MetricsError, PeakMode, HEADER_BITS,
};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(
    name = "fdszt",
    version,
    about = "Z-transform domain grayscale steganography"
)]
struct Cli {
    /// Worker threads for mask-parallel embedding and extraction.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hide a secret image inside a cover image.
    Embed {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        secret: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the secret image from a stego image.
    Extract {
        #[arg(long)]
        stego: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report how many bits a cover can carry.
    Capacity {
        #[arg(long)]
        cover: PathBuf,
    },
    /// Compare two images (MSE, PSNR, IF).
    Metrics {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// PSNR peak: 255 or the reference image's max intensity.
        #[arg(long, default_value = "255", value_parser = ["255", "max"])]
        peak: String,
    },
    /// Embed in memory, extract, and check the round trip is bit-exact.
    Verify {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        secret: PathBuf,
        #[arg(long, default_value = "255", value_parser = ["255", "max"])]
        peak: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: ImageError },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{0}")]
    Codec(#[from] CodecError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("round trip mismatch: {0}")]
    VerifyMismatch(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Image { .. } | CliError::Metrics(_) | CliError::ThreadPool(_) => 1,
            CliError::Codec(e) => match e {
                CodecError::InsufficientCapacity { .. } => 2,
                CodecError::EmbedFailed { .. } => 3,
                CodecError::ZeroDimension
                | CodecError::PayloadExceedsCapacity { .. }
                | CodecError::ShortHeader(_) => 4,
                CodecError::HeaderOutOfRange { .. } => 1,
            },
            CliError::VerifyMismatch(_) => 5,
        }
    }
}

fn serialize_psnr<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
    if value.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*value)
    }
}

#[derive(Serialize)]
struct MetricsJson {
    mse: f64,
    #[serde(serialize_with = "serialize_psnr")]
    psnr_db: f64,
    #[serde(rename = "if")]
    image_fidelity: f64,
    peak_mode: String,
}

impl From<fdszt_core::MetricsReport> for MetricsJson {
    fn from(r: fdszt_core::MetricsReport) -> Self {
        Self {
            mse: r.mse,
            psnr_db: r.psnr_db,
            image_fidelity: r.image_fidelity,
            peak_mode: r.peak_mode.to_string(),
        }
    }
}

#[derive(Serialize)]
struct EmbedJson {
    bits_used: usize,
    bits_available: usize,
    #[serde(flatten)]
    metrics: MetricsJson,
}

#[derive(Serialize)]
struct DimsJson {
    width: usize,
    height: usize,
}

fn load(path: &Path) -> Result<GrayImage, CliError> {
    read_image(path).map_err(|source| CliError::Image {
        path: path.to_owned(),
        source,
    })
}

fn save(path: &Path, image: &GrayImage) -> Result<(), CliError> {
    write_image(path, image).map_err(|source| CliError::Image {
        path: path.to_owned(),
        source,
    })
}

fn peak_mode(s: &str) -> PeakMode {
    s.parse().unwrap_or_default()
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("report types always serialize")
    );
}

fn run_embed(cover: &Path, secret: &Path, out: &Path) -> Result<(), CliError> {
    let cover = load(cover)?;
    let secret = load(secret)?;
    let stego = embed_image(&cover, &secret)?;
    save(out, &stego)?;
    let report = metrics::report(&cover, &stego, PeakMode::Fixed255)?;
    print_json(&EmbedJson {
        bits_used: required_bits(&secret),
        bits_available: capacity_bits(&cover),
        metrics: report.into(),
    });
    Ok(())
}

fn run_extract(stego: &Path, out: &Path) -> Result<(), CliError> {
    let secret = extract_image(&load(stego)?)?;
    save(out, &secret)?;
    print_json(&DimsJson {
        width: secret.width(),
        height: secret.height(),
    });
    Ok(())
}

fn run_capacity(cover: &Path) -> Result<(), CliError> {
    let bits = capacity_bits(&load(cover)?);
    println!(
        "bits={bits} max_secret_pixels={}",
        bits.saturating_sub(HEADER_BITS) / 8
    );
    Ok(())
}

fn run_metrics(reference: &Path, test: &Path, peak: &str) -> Result<(), CliError> {
    let report = metrics::report(&load(reference)?, &load(test)?, peak_mode(peak))?;
    print_json(&MetricsJson::from(report));
    Ok(())
}

fn run_verify(cover: &Path, secret: &Path, peak: &str) -> Result<(), CliError> {
    let cover = load(cover)?;
    let secret = load(secret)?;
    let stego = embed_image(&cover, &secret)?;
    let recovered = extract_image(&stego);
    print_json(&MetricsJson::from(metrics::report(
        &cover,
        &stego,
        peak_mode(peak),
    )?));
    match recovered {
        Ok(r) if r == secret => {
            println!("PASS");
            Ok(())
        }
        Ok(r) => {
            println!("FAIL");
            let differing = r
                .pixels()
                .iter()
                .zip(secret.pixels())
                .filter(|(a, b)| a != b)
                .count();
            Err(CliError::VerifyMismatch(format!(
                "{differing} of {} pixels differ",
                secret.pixels().len()
            )))
        }
        Err(e) => {
            println!("FAIL");
            Err(CliError::VerifyMismatch(e.to_string()))
        }
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Embed { cover, secret, out } => run_embed(cover, secret, out),
        Command::Extract { stego, out } => run_extract(stego, out),
        Command::Capacity { cover } => run_capacity(cover),
        Command::Metrics {
            reference,
            test,
            peak,
        } => run_metrics(reference, test, peak),
        Command::Verify {
            cover,
            secret,
            peak,
        } => run_verify(cover, secret, peak),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::ThreadPool(e.to_string()))?
            .install(|| dispatch(&cli.command)),
        None => dispatch(&cli.command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fdszt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
