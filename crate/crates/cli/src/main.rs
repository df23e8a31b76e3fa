use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symdesign::blocks::minimal_block_systems;
use symdesign::catalog::{self, Kind};
use symdesign::coset::{induced_orbits, CosetAction};
use symdesign::design::construct_design;
use symdesign::io::{
    format_point_list, parse_design_file, parse_group_file, parse_point_list, write_design_file, write_group_file,
};
use symdesign::params::{check_basic, classify_type, derive_cdl, param_searches, Triple};
use symdesign::pipeline::{default_stages, run, yes_no, Catalog};
use symdesign::showcase::reproduce_m12_design;
use symdesign::{Design, Error, PermGroup};

/// Permutation groups, symmetric designs and flag-transitive design search.
///
/// File arguments also accept the id of an embedded dataset, such as
/// `m12-144/G` or `fixtures/fano` (see `symdesign datasets`).
#[derive(Parser)]
#[command(name = "symdesign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the group order.
    Order { group: String },
    /// Print orbits, of the group or of a subgroup, optionally on cosets.
    Orbits {
        group: String,
        /// Subgroup whose orbits are wanted.
        #[arg(long)]
        under: Option<String>,
        /// Act on the right cosets of this subgroup instead of on points.
        #[arg(long)]
        cosets: Option<String>,
    },
    /// Print the subdegrees at a point (1-based).
    Subdegrees {
        group: String,
        #[arg(long, default_value_t = 1)]
        point: usize,
    },
    /// List the minimal block systems.
    Blocks { group: String },
    /// Write the action on the right cosets of a subgroup.
    CosetAction {
        group: String,
        subgroup: String,
        #[arg(long)]
        out: String,
    },
    /// List admissible (v,k,lambda) for a point count and maximal-subgroup order.
    SearchParams {
        #[arg(long)]
        v: String,
        #[arg(long = "m-order")]
        m_order: String,
        /// Enumeration strategy.
        #[arg(long, default_value = "divisor")]
        method: String,
    },
    /// Classify a parameter set against the imprimitivity clauses a-d.
    ClassifyType {
        #[arg(long)]
        v: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        lambda: String,
    },
    /// List (c,d,l,s) solutions of v=cd, k=ls, lambda(c-1)=k(l-1).
    DeriveCdl {
        #[arg(long)]
        v: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        lambda: String,
    },
    /// Build the design generated by a base block.
    ConstructDesign {
        group: String,
        /// Comma-separated 1-based points, a file containing them, or a dataset id.
        #[arg(long)]
        block: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check the symmetric design axioms.
    VerifyDesign { design: String },
    /// Decide flag-transitivity (or anti-flag-transitivity).
    FlagTransitive {
        design: String,
        group: String,
        #[arg(long)]
        anti: bool,
        /// Allow trivial designs.
        #[arg(long)]
        force: bool,
    },
    /// Run the candidate pipeline over a catalog.
    Pipeline {
        catalog: String,
        #[arg(long)]
        json: bool,
        /// Comma-separated stage names, in order.
        #[arg(long, value_delimiter = ',')]
        stages: Option<Vec<String>>,
    },
    /// Rebuild the (144,66,30) design from the embedded data and check its properties.
    ReproduceD1 {
        #[arg(long)]
        json: bool,
    },
    /// List embedded datasets.
    Datasets,
}

/// Exit status 1: the computation ran and the answer is negative.
const NEGATIVE: u8 = 1;
/// Exit status 2: bad input.
const USAGE: u8 = 2;

fn read_source(arg: &str) -> Result<String, Error> {
    if Path::new(arg).is_file() {
        return fs::read_to_string(arg).map_err(|e| Error::Parse {
            token: arg.to_string(),
            reason: e.to_string(),
        });
    }
    match catalog::find(arg) {
        Ok(d) => {
            d.verify()?;
            Ok(d.payload.to_string())
        }
        Err(_) => Err(Error::Parse {
            token: arg.to_string(),
            reason: "no such file or dataset".into(),
        }),
    }
}

fn load_group(arg: &str) -> Result<PermGroup, Error> {
    Ok(parse_group_file(&read_source(arg)?)?.group)
}

fn load_design(arg: &str) -> Result<Design, Error> {
    parse_design_file(&read_source(arg)?)
}

fn load_block(arg: &str, degree: usize) -> Result<Vec<usize>, Error> {
    let text = if Path::new(arg).is_file() || catalog::find(arg).map(|d| d.kind == Kind::PointSet).unwrap_or(false) {
        read_source(arg)?
    } else {
        arg.to_string()
    };
    parse_point_list(&text, Some(degree))
}

fn big(arg: &str) -> Result<num_bigint::BigUint, Error> {
    arg.trim().parse().map_err(|_| Error::Parse {
        token: arg.to_string(),
        reason: "expected a positive integer".into(),
    })
}

fn triple(v: &str, k: &str, lambda: &str) -> Result<Triple, Error> {
    Ok(Triple {
        v: big(v)?,
        k: big(k)?,
        lambda: big(lambda)?,
    })
}

fn write_out(path: &str, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Parse {
        token: path.to_string(),
        reason: e.to_string(),
    })
}

fn print_orbits(orbits: &[Vec<usize>]) {
    for o in orbits {
        println!("{}: {}", o.len(), format_point_list(o));
    }
    let lengths: Vec<String> = orbits.iter().map(|o| o.len().to_string()).collect();
    println!("lengths: {}", lengths.join(","));
}

fn dispatch(command: Command) -> Result<u8, Error> {
    match command {
        Command::Order { group } => {
            println!("{}", load_group(&group)?.order());
        }
        Command::Orbits { group, under, cosets } => {
            let g = load_group(&group)?;
            let k = match &under {
                Some(u) => {
                    let k = load_group(u)?;
                    g.check_subgroup(&k)?;
                    k
                }
                None => g.clone(),
            };
            match cosets {
                Some(h) => print_orbits(&induced_orbits(&g, &load_group(&h)?, &k)?),
                None => print_orbits(&k.orbits()),
            }
        }
        Command::Subdegrees { group, point } => {
            let g = load_group(&group)?;
            if point == 0 {
                return Err(Error::PointOutOfRange {
                    point,
                    degree: g.degree(),
                });
            }
            let sub = g.subdegrees(point - 1)?;
            let text: Vec<String> = sub.iter().map(ToString::to_string).collect();
            println!("{}", text.join(" "));
            println!("rank {}", sub.len());
        }
        Command::Blocks { group } => {
            let systems = minimal_block_systems(&load_group(&group)?)?;
            if systems.is_empty() {
                println!("primitive");
            }
            for s in systems {
                println!(
                    "{} classes of {}; class containing 1: {}",
                    s.num_classes(),
                    s.class_size(),
                    format_point_list(&s.classes()[s.class_of(0)])
                );
            }
        }
        Command::CosetAction { group, subgroup, out } => {
            let action = CosetAction::new(&load_group(&group)?, &load_group(&subgroup)?)?;
            write_out(&out, &write_group_file(action.image(), None))?;
            println!("degree {}", action.degree());
        }
        Command::SearchParams { v, m_order, method } => {
            let searches = param_searches();
            for t in searches.get(&method)?.search(&big(&v)?, &big(&m_order)?)? {
                println!("{} {} {}", t.v, t.k, t.lambda);
            }
        }
        Command::ClassifyType { v, k, lambda } => {
            let t = triple(&v, &k, &lambda)?;
            let basic = check_basic(&t);
            if !basic.ok() {
                for f in &basic.failures {
                    println!("inadmissible: {f}");
                }
                return Ok(NEGATIVE);
            }
            let ty = classify_type(&t);
            let matches: Vec<String> = ty.matches.iter().map(ToString::to_string).collect();
            println!("type {}", ty.tag);
            if !matches.is_empty() {
                println!("matching clauses: {}", matches.join(","));
            }
            for w in &ty.witnesses {
                println!("clause {} (c,d,l)=({},{},{})", w.tag, w.c, w.d, w.l);
            }
        }
        Command::DeriveCdl { v, k, lambda } => {
            for x in derive_cdl(&triple(&v, &k, &lambda)?)? {
                println!("{} {} {} {}", x.c, x.d, x.l, x.s);
            }
        }
        Command::ConstructDesign { group, block, out } => {
            let g = load_group(&group)?;
            let b = load_block(&block, g.degree())?;
            let orbit = construct_design(&g, &b)?;
            if let Some(path) = out {
                write_out(&path, &write_design_file(&orbit.design))?;
            }
            println!("{} blocks on {} points", orbit.orbit_len, g.degree());
            match orbit.design.verify_symmetric() {
                Ok(p) => println!("symmetric {p}"),
                Err(r) => {
                    println!("not symmetric: {r}");
                    return Ok(NEGATIVE);
                }
            }
        }
        Command::VerifyDesign { design } => match load_design(&design)?.verify_symmetric() {
            Ok(p) => println!(
                "symmetric {p}, {}",
                if p.is_nontrivial() { "nontrivial" } else { "trivial" }
            ),
            Err(r) => {
                println!("not symmetric: {r}");
                return Ok(NEGATIVE);
            }
        },
        Command::FlagTransitive {
            design,
            group,
            anti,
            force,
        } => {
            let d = load_design(&design)?;
            let g = load_group(&group)?;
            let (label, yes) = if anti {
                ("anti-flag-transitive", d.is_anti_flag_transitive(&g, force)?)
            } else {
                ("flag-transitive", d.is_flag_transitive(&g, force)?)
            };
            println!("{label}: {}", yes_no(yes));
            if !yes {
                return Ok(NEGATIVE);
            }
        }
        Command::Pipeline { catalog, json, stages } => {
            let cat = Catalog::from_json(&read_source(&catalog)?)?;
            let names: Vec<String> = stages.unwrap_or_else(|| default_stages().iter().map(|s| s.to_string()).collect());
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let report = run(&cat, &names)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::ReproduceD1 { json } => {
            let summary = reproduce_m12_design()?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&summary).expect("summary serializes")
                );
            } else {
                println!("{}", summary.line());
            }
            if !summary.design_found() || !summary.flag_transitive {
                return Ok(NEGATIVE);
            }
        }
        Command::Datasets => {
            for d in catalog::datasets() {
                println!("{:<22} {}", d.id, d.description);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
