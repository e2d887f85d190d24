// SPDX-License-Identifier: Apache-2.0

//! `stratlab` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 4 internal error.
//! Errors are reported as a single `error[kind]: message` line on stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use stratlab::classifier::{classify, explain, ClassifyOptions, FactsLedger, Status};
use stratlab::eo_seq::enumerate_elementary;
use stratlab::final_type::{es_decompose, es_sum, final_type_of, minimal_sequence};
use stratlab::newton::{enumerate_symmetric_np, np_sum};
use stratlab::rational::fmt_ratio;
use stratlab::report::{emit_goldens, factor_string};
use stratlab::slope::{first_newton_slope, slope_trace};
use stratlab::weyl_closure::{closure_poset, weyl_element, ClosureOptions, Convention, Predicate};
use stratlab::{ElementarySeq, Error, NewtonPolygon, SCHEMA};

#[derive(Parser)]
#[command(name = "stratlab", version, about = "EO and Newton polygon strata of A_g in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Dot,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    RightFirst,
    LeftFirst,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredicateArg {
    Tableau,
    PrefixMax,
}

#[derive(Subcommand)]
enum Command {
    /// Elementary sequences and their invariants
    Eo {
        #[arg(long)]
        g: Option<usize>,
        #[arg(long = "p-rank")]
        p_rank: Option<usize>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Symmetric Newton polygons
    Np {
        #[arg(long)]
        g: Option<usize>,
        #[arg(long = "p-rank")]
        p_rank: Option<usize>,
        #[arg(long)]
        np: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Closure relations between EO strata (Hasse diagram)
    Closure {
        #[arg(long)]
        g: usize,
        #[arg(long = "p-rank")]
        p_rank: Option<usize>,
        #[arg(long, value_enum, default_value = "right-first")]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value = "tableau")]
        predicate: PredicateArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// First Newton slope of an EO stratum
    Slope {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Direct sum of elementary sequences (repeat --phi) or of polygons (repeat --np)
    Sum {
        #[arg(long)]
        phi: Vec<String>,
        #[arg(long)]
        np: Vec<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Split an elementary sequence into indecomposable summands
    Decompose {
        #[arg(long)]
        phi: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Minimal elementary sequence of a Newton polygon
    Minseq {
        #[arg(long)]
        np: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Classify all EO x NP intersections in dimension g
    Classify {
        #[arg(long)]
        g: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long, conflicts_with = "no_ledger")]
        ledger: Option<PathBuf>,
        #[arg(long = "no-ledger")]
        no_ledger: bool,
        /// Explain a single cell (needs --np as well)
        #[arg(long, requires = "np")]
        phi: Option<String>,
        #[arg(long, requires = "phi")]
        np: Option<String>,
    },
    /// Write the table, figure and summary files into a directory
    Goldens {
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<String, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn allow(format: Format, allowed: &[Format], cmd: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        usage(format!("format not supported by {}", cmd))
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialises");
    s.push('\n');
    s
}

fn phi_row(phi: &ElementarySeq) -> serde_json::Value {
    json!({
        "phi": phi.to_string(),
        "p_rank": phi.p_rank(),
        "a_number": phi.a_number(),
        "dimension": phi.dimension(),
        "first_slope": fmt_ratio(&first_newton_slope(phi)),
        "final_sequence": phi.stretch().values(),
        "final_type": final_type_of(phi).delta(),
        "weyl_element": weyl_element(phi).images(),
    })
}

fn cmd_eo(g: Option<usize>, p_rank: Option<usize>, phi: Option<String>, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json, Format::Csv], "eo")?;
    let seqs = match (phi, g) {
        (Some(p), None) => vec![ElementarySeq::parse(&p)?],
        (None, Some(g)) => enumerate_elementary(g, p_rank)?,
        _ => return usage("eo needs exactly one of --g or --phi"),
    };
    Ok(match format {
        Format::Json => {
            let rows: Vec<_> = seqs.iter().map(phi_row).collect();
            pretty(&json!({ "schema": SCHEMA, "sequences": rows }))
        }
        Format::Csv => {
            let mut s = String::from("phi,p_rank,a_number,dimension,first_slope\n");
            for x in &seqs {
                s.push_str(&format!(
                    "\"{}\",{},{},{},{}\n",
                    x,
                    x.p_rank(),
                    x.a_number(),
                    x.dimension(),
                    fmt_ratio(&first_newton_slope(x))
                ));
            }
            s
        }
        _ => {
            let mut s = String::from("phi\tp-rank\ta-number\tdim\tslope\n");
            for x in &seqs {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    x.paren(),
                    x.p_rank(),
                    x.a_number(),
                    x.dimension(),
                    fmt_ratio(&first_newton_slope(x))
                ));
            }
            s
        }
    })
}

fn cmd_np(g: Option<usize>, p_rank: Option<usize>, np: Option<String>, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json, Format::Csv], "np")?;
    let polys = match (np, g) {
        (Some(t), None) => vec![NewtonPolygon::parse(&t)?],
        (None, Some(g)) => enumerate_symmetric_np(g, p_rank)?,
        _ => return usage("np needs exactly one of --g or --np"),
    };
    Ok(match format {
        Format::Json => {
            let rows: Vec<_> = polys.iter().map(|x| x.to_json()).collect();
            pretty(&json!({ "schema": SCHEMA, "polygons": rows }))
        }
        Format::Csv => {
            let mut s = String::from("polygon,dimension,p_rank,first_slope\n");
            for x in &polys {
                s.push_str(&format!(
                    "\"{}\",{},{},{}\n",
                    x,
                    x.dimension(),
                    x.p_rank(),
                    fmt_ratio(&x.first_slope())
                ));
            }
            s
        }
        _ => {
            let mut s = String::from("polygon\tdim\tp-rank\tfirst slope\n");
            for x in &polys {
                s.push_str(&format!("{}\t{}\t{}\t{}\n", x, x.dimension(), x.p_rank(), fmt_ratio(&x.first_slope())));
            }
            s
        }
    })
}

fn cmd_closure(g: usize, p_rank: Option<usize>, conv: ConventionArg, pred: PredicateArg, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json, Format::Dot], "closure")?;
    let opts = ClosureOptions {
        convention: match conv {
            ConventionArg::RightFirst => Convention::RightFirst,
            ConventionArg::LeftFirst => Convention::LeftFirst,
        },
        predicate: match pred {
            PredicateArg::Tableau => Predicate::Tableau,
            PredicateArg::PrefixMax => Predicate::PrefixMax,
        },
    };
    let poset = closure_poset(g, p_rank, opts)?;
    Ok(match format {
        Format::Dot => poset.to_dot(),
        Format::Json => {
            let edges: Vec<_> =
                poset.edge_labels().iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect();
            pretty(&json!({
                "schema": SCHEMA,
                "g": g,
                "p_rank": p_rank,
                "nodes": poset.nodes.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "hasse_edges": edges,
                "antisymmetric": poset.is_antisymmetric(),
                "raw_transitive": poset.raw_transitive,
            }))
        }
        _ => {
            let mut s = format!("{} nodes, {} edges\n", poset.nodes.len(), poset.hasse_edges.len());
            for (a, b) in poset.edge_labels() {
                s.push_str(&format!("{} < {}\n", a.paren(), b.paren()));
            }
            s
        }
    })
}

fn cmd_slope(phi: String, trace: bool, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json], "slope")?;
    let phi = ElementarySeq::parse(&phi)?;
    let t = slope_trace(&phi);
    Ok(match (format, trace) {
        (Format::Json, _) => pretty(&json!({ "schema": SCHEMA, "phi": phi.to_string(), "trace": t.to_json() })),
        (_, false) => format!("{}\n", fmt_ratio(&t.lambda)),
        (_, true) => {
            let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            format!(
                "{}\npsi: {}\nPhi: {}\nD: {{{}}}\nC: {{{}}}\n",
                fmt_ratio(&t.lambda),
                join(&mut t.psi.values().iter().map(|&x| x as usize)),
                join(&mut t.phi_map.iter().copied()),
                join(&mut t.d.iter().copied()),
                join(&mut t.c.iter().copied()),
            )
        }
    })
}

fn cmd_sum(phis: Vec<String>, nps: Vec<String>, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json], "sum")?;
    match (phis.len(), nps.len()) {
        (n, 0) if n >= 2 => {
            let seqs: Vec<ElementarySeq> = phis.iter().map(|p| ElementarySeq::parse(p)).collect::<Result<_, _>>()?;
            let mut acc = seqs[0].clone();
            for x in &seqs[1..] {
                acc = es_sum(&acc, x)?;
            }
            let lhs: Vec<String> = seqs.iter().map(|x| x.paren()).collect();
            Ok(match format {
                Format::Json => pretty(&json!({ "schema": SCHEMA, "summands": phis, "sum": acc.to_string() })),
                _ => format!("{} = {}\n", lhs.join(" ⊕ "), acc.paren()),
            })
        }
        (0, n) if n >= 2 => {
            let polys: Vec<NewtonPolygon> = nps.iter().map(|p| NewtonPolygon::parse(p)).collect::<Result<_, _>>()?;
            let acc = polys[1..].iter().fold(polys[0].clone(), |a, b| np_sum(&a, b));
            Ok(match format {
                Format::Json => pretty(&json!({ "schema": SCHEMA, "summands": nps, "sum": acc.to_json() })),
                _ => format!("{}\n", acc),
            })
        }
        _ => usage("sum needs at least two --phi or at least two --np, not both"),
    }
}

fn cmd_decompose(phi: String, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json], "decompose")?;
    let d = es_decompose(&ElementarySeq::parse(&phi)?)?;
    Ok(match format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "phi": d.target.to_string(),
            "factors": d.factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "indecomposable": d.is_indecomposable(),
            "ambiguous": d.ambiguous,
        })),
        _ => {
            let mut s = if d.is_indecomposable() {
                format!("{} indecomposable\n", d.target.paren())
            } else {
                format!("{} = {}\n", d.target.paren(), factor_string(&d.factors))
            };
            if d.ambiguous {
                s.push_str("note: more than one factorisation exists; the least is shown\n");
            }
            s
        }
    })
}

fn cmd_minseq(np: String, format: Format) -> Out {
    allow(format, &[Format::Table, Format::Json], "minseq")?;
    let xi = NewtonPolygon::parse(&np)?;
    let phi = minimal_sequence(&xi)?;
    Ok(match format {
        Format::Json => pretty(&json!({ "schema": SCHEMA, "np": xi.to_string(), "phi": phi.to_string() })),
        _ => format!("{}\n", phi.paren()),
    })
}

fn cmd_classify(
    g: usize,
    format: Format,
    ledger: Option<PathBuf>,
    no_ledger: bool,
    phi: Option<String>,
    np: Option<String>,
) -> Out {
    allow(format, &[Format::Table, Format::Json, Format::Csv, Format::Markdown], "classify")?;
    let mut opts = ClassifyOptions::default();
    if no_ledger {
        opts.ledger = FactsLedger::default();
    } else if let Some(path) = ledger {
        opts.ledger = FactsLedger::load(&path)?;
    }
    let cls = classify(g, &opts)?;
    if let (Some(phi), Some(np)) = (phi, np) {
        let e = explain(&cls, &ElementarySeq::parse(&phi)?, &NewtonPolygon::parse(&np)?)?;
        return Ok(match format {
            Format::Json => pretty(&json!({ "schema": SCHEMA, "explanation": e })),
            _ => e.to_string(),
        });
    }
    Ok(match format {
        Format::Json => pretty(&cls.to_json()),
        Format::Csv => cls.to_csv(),
        Format::Markdown => cls.to_markdown(),
        _ => {
            let m = cls.top();
            let mut s = String::new();
            for f in m.p_ranks() {
                let (rows, cols) = m.block(f);
                s.push_str(&format!("p-rank {}\n", f));
                for &c in &cols {
                    s.push_str(&format!("  [{}] N({})\n", c, m.cols[c]));
                }
                for &r in &rows {
                    let marks: Vec<&str> = cols
                        .iter()
                        .map(|&c| match m.cells[r][c].status {
                            Status::Contained => "C",
                            Status::NonEmptyDense => "D",
                            Status::NonEmpty => "N",
                            Status::Empty => ".",
                            Status::Unknown => "?",
                        })
                        .collect();
                    s.push_str(&format!("  {:<14} {}\n", m.rows[r].paren(), marks.join(" ")));
                }
            }
            s.push_str("C contained, D dense, N non-empty, . empty, ? undecided\n");
            s
        }
    })
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Eo { g, p_rank, phi, format } => cmd_eo(g, p_rank, phi, format),
        Command::Np { g, p_rank, np, format } => cmd_np(g, p_rank, np, format),
        Command::Closure { g, p_rank, convention, predicate, format } => {
            cmd_closure(g, p_rank, convention, predicate, format)
        }
        Command::Slope { phi, trace, format } => cmd_slope(phi, trace, format),
        Command::Sum { phi, np, format } => cmd_sum(phi, np, format),
        Command::Decompose { phi, format } => cmd_decompose(phi, format),
        Command::Minseq { np, format } => cmd_minseq(np, format),
        Command::Classify { g, format, ledger, no_ledger, phi, np } => {
            cmd_classify(g, format, ledger, no_ledger, phi, np)
        }
        Command::Goldens { out } => {
            let files = emit_goldens(&out)?;
            Ok(files.iter().map(|p| format!("{}\n", p.display())).collect())
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            // clap's message, up to the usage block, folded onto one line
            let text = e.render().to_string();
            let msg: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .collect();
            let msg = msg.join(" ");
            let msg = msg.trim().strip_prefix("error: ").unwrap_or(msg.trim());
            eprintln!("error[usage]: {}", one_line(msg));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error[usage]: {}", one_line(&msg));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) if e.is_internal() => {
            eprintln!("error[internal]: {}", one_line(&e.to_string()));
            ExitCode::from(4)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error[domain]: {}", one_line(&e.to_string()));
            ExitCode::from(3)
        }
    }
}
