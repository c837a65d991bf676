use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sepstab::group::{cyclic_class, enumerate_separable_classes, Presentation, Shape};
use sepstab::hyperbolic::{Representation, DEFAULT_PARABOLIC_TOL};
use sepstab::scan::{run_scan, ScanConfig};
use sepstab::stability::{certify, NestingParams, VerdictKind};
use sepstab::whitehead::{
    classify_graph, has_strong_cutpoint, is_separable_free, is_strongly_connected, labeled_whitehead_graph,
    whitehead_graph,
};
use sepstab::Error;

#[derive(Parser)]
#[command(name = "sepstab", version, about = "Finite-depth separable-stability certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a trace slice and write CSV, PPM and metadata files.
    Scan { config: PathBuf },
    /// Certify one representation and print the verdict as JSON.
    Certify {
        presentation: PathBuf,
        rep: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        stride: usize,
        #[arg(long, default_value_t = 0.01)]
        spacing: f64,
        #[arg(long, default_value_t = 6)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_PARABOLIC_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        enlargement: usize,
    },
    /// Print the (labeled) Whitehead graph of a word and its classification.
    Whitehead {
        presentation: PathBuf,
        word: String,
        #[arg(long)]
        dot: bool,
    },
    /// List separable classes up to a length, one per line.
    Separable {
        presentation: PathBuf,
        #[arg(long)]
        max_length: usize,
        #[arg(long, default_value_t = 0)]
        enlargement: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Input(_) | Error::UnsupportedShape(_) => 2,
        Error::Undetermined(_) => 3,
        Error::Io(_) => 4,
        Error::Numerical(_) => 1,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, Error> {
    Presentation::from_json(&read(path)?)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Scan { config } => {
            let cfg = ScanConfig::load(&config)?;
            let out = run_scan(&cfg)?;
            let c = out.counts;
            eprintln!(
                "{} cells: {} certified, {} parabolic, {} elliptic, {} undetermined ({:.1} s)",
                out.records.len(),
                c.certified_at_depth,
                c.rejected_parabolic,
                c.rejected_elliptic,
                c.undetermined,
                out.runtime_seconds
            );
            if let Some(check) = &out.self_check {
                eprintln!("self-check: {} cells, {} mismatches", check.cells.len(), check.mismatches.len());
                if !check.mismatches.is_empty() {
                    return Ok(1);
                }
            }
            Ok(if out.all_undetermined() { 3 } else { 0 })
        }
        Command::Certify {
            presentation,
            rep,
            depth,
            stride,
            spacing,
            reps,
            tol,
            enlargement,
        } => {
            let p = load_presentation(&presentation)?;
            let rep = Representation::from_json(&p, &read(&rep)?)?;
            let params = NestingParams { stride, spacing, reps };
            let v = certify(&rep, &p, depth, enlargement, &params, tol)?;
            println!("{}", v.to_json());
            Ok(if v.kind == VerdictKind::Undetermined { 3 } else { 0 })
        }
        Command::Whitehead { presentation, word, dot } => {
            let p = load_presentation(&presentation)?;
            let class = cyclic_class(&p, &p.parse_word(&word)?)?;
            if p.shape() == Shape::Handlebody {
                let g = whitehead_graph(&p, &class)?;
                if dot {
                    print!("{}", g.to_dot(&p));
                    return Ok(0);
                }
                print!("{}", g.to_text(&p));
                let cert = is_separable_free(&p, &class)?;
                println!("minimal length: {}", cert.minimal_length);
                if let Some(w) = &cert.witness {
                    println!("witness: {}", w.display(&p));
                }
                println!("separable: {}", cert.separable);
            } else {
                let g = labeled_whitehead_graph(&p, &class)?;
                if dot {
                    print!("{}", g.to_dot(&p));
                    return Ok(0);
                }
                print!("{}", g.to_text(&p));
                let strong = is_strongly_connected(&g, &p)?;
                let flags: Vec<&str> = strong.iter().map(|&s| if s { "yes" } else { "no" }).collect();
                println!("strongly connected components: {}", flags.join(" "));
                match has_strong_cutpoint(&g, &p)? {
                    Some(v) => println!("strong cutpoint: {}", g.vertex_name(&p, v)),
                    None => println!("strong cutpoint: none"),
                }
                let verdict = classify_graph(&g, &p)?;
                println!("classification: {}", serde_json::to_value(verdict).expect("serializable").as_str().unwrap_or(""));
            }
            Ok(0)
        }
        Command::Separable {
            presentation,
            max_length,
            enlargement,
        } => {
            let p = load_presentation(&presentation)?;
            for c in enumerate_separable_classes(&p, max_length, enlargement)? {
                println!("{}", c.display(&p));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
