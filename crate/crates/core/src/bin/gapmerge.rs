use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gapmerge::bench::{format_table, run_bench, BenchConfig};
use gapmerge::collection::{merge_parts, Algorithm, CollectionJob, Part};
use gapmerge::format::{bwt_path, lcp_path, load_bwt, load_lcp, save_bwt, save_lcp};
use gapmerge::hm::MergeStats;
use gapmerge::text::{bwt_and_lcp, pair_bwt_and_lcp, Text};
use gapmerge::{Error, SkipMode};

const EXIT_USAGE: u8 = 1;
const EXIT_FORMAT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gapmerge",
    version,
    about = "Merge BWTs and LCP arrays of string collections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build PREFIX.bwt and PREFIX.lcp from a raw text file
    Build { text: PathBuf, out_prefix: PathBuf },
    /// Merge two BWT/LCP pairs
    Merge {
        a_prefix: PathBuf,
        b_prefix: PathBuf,
        out_prefix: PathBuf,
        #[arg(long, default_value = "gap")]
        algo: Algorithm,
        #[arg(long, default_value = "wavelet")]
        skip: SkipMode,
    },
    /// Merge the raw text files listed one per line in LIST_FILE
    MergeCollection {
        list_file: PathBuf,
        out_prefix: PathBuf,
        #[arg(long, default_value = "gap")]
        algo: Algorithm,
        #[arg(long, default_value = "wavelet")]
        skip: SkipMode,
    },
    /// Check merged files against a reference built from the original texts
    Verify {
        text0: PathBuf,
        text1: PathBuf,
        merged_prefix: PathBuf,
    },
    /// Merge random pairs and print phases and work per algorithm
    Bench {
        #[arg(long, default_value_t = 1000)]
        len: usize,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..=254))]
        sigma: u16,
        #[arg(long, default_value_t = 10)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated algorithms
        #[arg(long, value_delimiter = ',', default_value = "hm,hm-lcp,gap")]
        algo_set: Vec<Algorithm>,
        #[arg(long, default_value = "wavelet")]
        skip: SkipMode,
        /// Add wall-clock columns (output is then no longer reproducible)
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("gapmerge: verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("gapmerge: {e}");
            match e {
                Error::NonConvergence { .. } | Error::NotConverged => ExitCode::from(EXIT_VERIFY),
                _ => ExitCode::from(EXIT_FORMAT),
            }
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build { text, out_prefix } => build(&text, &out_prefix),
        Command::Merge {
            a_prefix,
            b_prefix,
            out_prefix,
            algo,
            skip,
        } => merge(&a_prefix, &b_prefix, &out_prefix, algo, skip),
        Command::MergeCollection {
            list_file,
            out_prefix,
            algo,
            skip,
        } => merge_collection(&list_file, &out_prefix, algo, skip),
        Command::Verify {
            text0,
            text1,
            merged_prefix,
        } => verify(&text0, &text1, &merged_prefix),
        Command::Bench {
            len,
            sigma,
            pairs,
            seed,
            algo_set,
            skip,
            timings,
        } => {
            let cfg = BenchConfig {
                len,
                sigma: sigma as usize,
                pairs,
                seed,
                algorithms: algo_set,
                skip_mode: skip,
                timings,
            };
            let rows = run_bench(&cfg)?;
            print!("{}", format_table(&cfg, &rows));
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn build(text: &Path, out_prefix: &Path) -> Result<(), Failure> {
    let t = Text::from_raw(&read_file(text)?, 0)?;
    let (bwt, lcp) = bwt_and_lcp(&t);
    save_bwt(&bwt_path(out_prefix), &bwt)?;
    save_lcp(&lcp_path(out_prefix), &lcp)?;
    Ok(())
}

fn load_part(prefix: &Path, with_lcp: bool) -> Result<Part, Error> {
    let bwt = load_bwt(&bwt_path(prefix))?;
    let lcp = if with_lcp {
        let lcp = load_lcp(&lcp_path(prefix))?;
        if lcp.rows() != bwt.len() {
            return Err(Error::LengthMismatch {
                expected: bwt.len(),
                found: lcp.rows(),
            });
        }
        Some(lcp)
    } else {
        None
    };
    Ok(Part { bwt, lcp })
}

fn save_part(prefix: &Path, part: &Part) -> Result<(), Error> {
    save_bwt(&bwt_path(prefix), &part.bwt)?;
    if let Some(lcp) = &part.lcp {
        save_lcp(&lcp_path(prefix), lcp)?;
    }
    Ok(())
}

fn stats_line(algo: Algorithm, stats: &MergeStats) -> String {
    format!(
        "algo={algo} phases={} work={} skips={} syncs={}",
        stats.phases,
        stats.total_work(),
        stats.skips,
        stats.syncs
    )
}

fn merge(a: &Path, b: &Path, out: &Path, algo: Algorithm, skip: SkipMode) -> Result<(), Failure> {
    let needs_lcp = algo == Algorithm::Gap;
    let pa = load_part(a, needs_lcp)?;
    let pb = load_part(b, needs_lcp)?;
    let (merged, stats) = merge_parts(&pa, &pb, algo, skip)?;
    save_part(out, &merged)?;
    println!("n={} {}", merged.bwt.len(), stats_line(algo, &stats));
    Ok(())
}

fn merge_collection(
    list: &Path,
    out: &Path,
    algo: Algorithm,
    skip: SkipMode,
) -> Result<(), Failure> {
    let listing = String::from_utf8(read_file(list)?)
        .map_err(|_| Error::Format(format!("{}: list file is not UTF-8", list.display())))?;
    let inputs = listing
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| read_file(Path::new(l)))
        .collect::<Result<Vec<_>, _>>()?;
    let job = CollectionJob {
        algorithm: algo,
        skip_mode: skip,
        parallel: true,
    };
    let output = job.run(&inputs)?;
    save_part(out, &output.merged)?;
    for (r, round) in output.rounds.iter().enumerate() {
        for stats in round {
            println!("round={r} {}", stats_line(algo, stats));
        }
    }
    Ok(())
}

fn first_difference<T: PartialEq>(a: &[T], b: &[T]) -> Option<usize> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .or((a.len() != b.len()).then(|| a.len().min(b.len())))
}

fn verify(text0: &Path, text1: &Path, merged: &Path) -> Result<(), Failure> {
    let t0 = Text::from_raw(&read_file(text0)?, 0)?;
    let t1 = Text::from_raw(&read_file(text1)?, 1)?;
    let (want_bwt, want_lcp) = pair_bwt_and_lcp(&t0, &t1);

    let got = load_bwt(&bwt_path(merged))?;
    if let Some(i) = first_difference(got.symbols(), &want_bwt.to_external()) {
        return Err(Failure::Mismatch(format!("BWT differs at index {i}")));
    }
    let lcp_file = lcp_path(merged);
    if lcp_file.exists() {
        let got = load_lcp(&lcp_file)?;
        if let Some(i) = first_difference(
            &got.values()[..got.rows()],
            &want_lcp.values()[..want_lcp.rows()],
        ) {
            return Err(Failure::Mismatch(format!("LCP differs at index {i}")));
        }
        eprintln!("bwt and lcp match ({} rows)", want_bwt.len());
    } else {
        eprintln!("bwt matches ({} rows, no .lcp file)", want_bwt.len());
    }
    Ok(())
}
