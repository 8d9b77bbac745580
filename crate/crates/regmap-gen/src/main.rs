use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use regmap_gen::{run, RunConfig};

/// Pre-compile register-map automation for Verilog designs: scans source
/// files for register attributes, allocates a flat address map, and
/// generates connection macros, an address-map header, a bus decoder, a
/// JSON map, and documentation.
#[derive(Parser, Debug)]
#[command(name = "regmap-gen", version)]
struct Cli {
    /// Top-level Verilog file
    #[arg(short = 't', long = "top")]
    top: PathBuf,

    /// Module search directory (repeatable, searched in order)
    #[arg(short = 'd', long = "dir")]
    dirs: Vec<PathBuf>,

    /// Output directory for the generated files
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,

    /// MSB index of the address bus (space = 2^(LB_HI+1) addresses)
    #[arg(long = "lb-hi", default_value_t = 14)]
    lb_hi: u32,

    /// First address available to the allocator
    #[arg(long = "base", default_value_t = 0)]
    base: u64,

    /// Skip the AUTOMATIC_decode macro in the auto header
    #[arg(long = "no-decoder")]
    no_decoder: bool,

    /// Skip map verification before writing
    #[arg(long = "no-verify")]
    no_verify: bool,

    /// Print the register table to standard output
    #[arg(long = "print")]
    print: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.out.is_none() && !cli.print {
        eprintln!("usage error: nothing to do; pass -o DIR and/or --print");
        return ExitCode::from(2);
    }
    let config = RunConfig {
        top: cli.top,
        search_dirs: cli.dirs,
        out_dir: cli.out,
        lb_hi: cli.lb_hi,
        base_offset: cli.base,
        gen_decoder: !cli.no_decoder,
        verify: !cli.no_verify,
        print: cli.print,
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
