//! `dd`: density comonads, coalgebras and homomorphism-counting
//! equivalences on finite graphs, from the command line.
//!
//! Exit codes: 0 success, 1 negative verdict (no coalgebra, not equivalent,
//! law failure, not a member, contradiction), 2 usage or parse error,
//! 3 resource cap exceeded. Verdict lines are prefixed `RESULT:`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ddc::classes::{self, ClassSpec};
use ddc::density::{coalgebra_by_search, decomposition_witnesses, DensityComonad, SizeCaps};
use ddc::equivalence::{
    char_poly, cospectral, double_cover_iso, fractional_iso, hom_vector, lovasz_equiv,
    relation_report,
};
use ddc::error::Error;
use ddc::homsearch::{count_homs, enumerate_homs, HomMode, HomQuery};
use ddc::laws::{check_density_comonad, Law};
use ddc::params::{coalgebra_number, graded_family, ExtReal, Parameter};
use ddc::structures::{canonical_graph, parse, serialize, FinStructure};

#[derive(Parser)]
#[command(
    name = "dd",
    version,
    about = "discrete density comonads on finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count (or list) homomorphisms between two structures.
    Hom {
        source: PathBuf,
        target: PathBuf,
        /// hom, mono, or iso
        #[arg(long, default_value = "hom")]
        mode: String,
        /// print every map instead of the count alone
        #[arg(long)]
        list: bool,
        /// fail if more than this many maps would be listed
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Build the density structure of a base for a class-generated family.
    Apply {
        base: PathBuf,
        #[arg(long)]
        class: String,
        /// generator size bound
        #[arg(long)]
        max: usize,
        /// write the carrier structure to this file
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cap_carrier: Option<usize>,
        #[arg(long)]
        cap_square: Option<usize>,
    },
    /// Decide whether a structure admits a coalgebra for a class family.
    Coalgebra {
        file: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long)]
        max: usize,
        /// use the direct search oracle instead of component classification
        #[arg(long)]
        search: bool,
        #[arg(long)]
        cap_carrier: Option<usize>,
        #[arg(long)]
        cap_square: Option<usize>,
        /// universe cap for the search oracle
        #[arg(long)]
        cap_search: Option<usize>,
    },
    /// Check the comonad laws of a class family pointwise on a corpus.
    Laws {
        /// structure files; a directory means all `.g` files in it
        files: Vec<PathBuf>,
        /// directory of `.g` files to add to the corpus
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        class: String,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        cap_carrier: Option<usize>,
        #[arg(long)]
        cap_square: Option<usize>,
    },
    /// Class membership of a structure, or closure checks of a snapshot.
    Classify {
        /// structure file (membership mode)
        file: Option<PathBuf>,
        #[arg(long)]
        class: Option<String>,
        /// directory of files forming a finite class snapshot
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Evaluate a graph parameter.
    Param { name: String, file: PathBuf },
    /// The coalgebra number over a parameter's graded families.
    Kappa {
        name: String,
        /// generator size bound for the grades
        max_size: usize,
        file: PathBuf,
        #[arg(long)]
        k_min: Option<i64>,
        #[arg(long)]
        k_max: Option<i64>,
    },
    /// Decide an equivalence relation between two structures.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// cospectral | fractional | doublecover | `homvec:<class>:<n>`
        #[arg(long)]
        relation: String,
    },
    /// Side-by-side hom-vector vs oracle table for the standard relations.
    Report {
        a: PathBuf,
        b: PathBuf,
        /// generator size bound for the hom-vector side
        #[arg(long, default_value_t = 5)]
        max: usize,
    },
    /// Write one file per isomorphism class of graphs up to a size.
    Generate {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the p-th subdivision of the n-clique.
    Subdivide {
        n: usize,
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Positive or negative outcome of a command that renders a verdict.
enum Verdict {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Positive) => ExitCode::from(0),
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::CapExceeded { .. } | Error::LimitExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_structure(path: &Path) -> Result<FinStructure, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse(&text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })
}

/// The equivalence oracles and graph parameters are defined on graphs only.
fn read_graph(path: &Path) -> Result<FinStructure, Error> {
    let g = read_structure(path)?;
    if !g.sig().is_graph() {
        return Err(Error::UnsupportedConfiguration(format!(
            "{}: this command needs a graph-mode structure",
            path.display()
        )));
    }
    Ok(g)
}

fn class_spec(name: &str) -> Result<ClassSpec, Error> {
    ClassSpec::builtin(name).ok_or_else(|| Error::Parse {
        line: 0,
        message: format!(
            "unknown class {name:?}; valid names: {}",
            ClassSpec::builtin_names().join(", ")
        ),
    })
}

fn caps_from(carrier: Option<usize>, square: Option<usize>, search: Option<usize>) -> SizeCaps {
    let mut caps = SizeCaps::default();
    if let Some(c) = carrier {
        caps.carrier = c;
    }
    if let Some(s) = square {
        caps.square = s;
    }
    if let Some(s) = search {
        caps.search_universe = s;
    }
    caps
}

/// A short human label for a generator: recognizes the standard shapes and
/// falls back to size/edge-count plus a canonical hash.
fn describe(g: &FinStructure) -> String {
    let n = g.size();
    let e = g.edge_count();
    let degrees = {
        let mut d: Vec<usize> = g.gaifman_adjacency().iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    };
    if n == 1 {
        return "K1".into();
    }
    if n >= 3 && degrees.iter().all(|&d| d == 2) && g.is_connected() {
        return format!("C{n}");
    }
    if e == n * (n - 1) / 2 {
        return format!("K{n}");
    }
    if e + 1 == n && degrees.iter().all(|&d| d <= 2) && g.is_connected() {
        return format!("P{n}");
    }
    if e + 1 == n && g.is_connected() && degrees[n - 1] == n - 1 {
        return format!("K1,{}", n - 1);
    }
    format!(
        "g{n}v{e}e-{:04x}",
        fnv64(serialize(&canonical_graph(g).0).as_bytes()) & 0xffff
    )
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn corpus_files(args: &[PathBuf]) -> Result<Vec<PathBuf>, Error> {
    let mut files = Vec::new();
    for arg in args {
        if arg.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(arg)
                .map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{}: {e}", arg.display()),
                })?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "g"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(arg.clone());
        }
    }
    Ok(files)
}

fn run(command: Command) -> Result<Verdict, Error> {
    match command {
        Command::Hom {
            source,
            target,
            mode,
            list,
            limit,
        } => {
            let source = read_structure(&source)?;
            let target = read_structure(&target)?;
            let mode = match mode.as_str() {
                "hom" => HomMode::Hom,
                "mono" => HomMode::Mono,
                "iso" => HomMode::Iso,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unknown mode {other:?}; use hom, mono, or iso"),
                    })
                }
            };
            if list || mode != HomMode::Hom || limit.is_some() {
                let homs = enumerate_homs(&HomQuery {
                    source,
                    target,
                    mode,
                    limit,
                })?;
                if list {
                    for h in &homs {
                        let rendered: Vec<String> = h.map().iter().map(usize::to_string).collect();
                        println!("RESULT: map={}", rendered.join(","));
                    }
                }
                println!("RESULT: hom_count={}", homs.len());
            } else {
                println!("RESULT: hom_count={}", count_homs(&source, &target)?);
            }
            Ok(Verdict::Positive)
        }

        Command::Apply {
            base,
            class,
            max,
            out,
            cap_carrier,
            cap_square,
        } => {
            let base = read_structure(&base)?;
            let family = classes::generators(&class_spec(&class)?, max)?;
            let dc = DensityComonad::with_caps(family, caps_from(cap_carrier, cap_square, None));
            let d = dc.build(&base)?;
            println!(
                "RESULT: generators={} blocks={} carrier={}",
                dc.family().len(),
                d.block_count(),
                d.carrier().size()
            );
            if let Some(path) = out {
                std::fs::write(&path, serialize(d.carrier())).map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{}: {e}", path.display()),
                })?;
            }
            Ok(Verdict::Positive)
        }

        Command::Coalgebra {
            file,
            class,
            max,
            search,
            cap_carrier,
            cap_square,
            cap_search,
        } => {
            let x = read_structure(&file)?;
            let family = classes::generators(&class_spec(&class)?, max)?;
            let dc =
                DensityComonad::with_caps(family, caps_from(cap_carrier, cap_square, cap_search));
            if search {
                match coalgebra_by_search(&dc, &x)? {
                    Some(_) => {
                        println!("RESULT: coalgebra=yes oracle=search");
                        Ok(Verdict::Positive)
                    }
                    None => {
                        println!("RESULT: coalgebra=no oracle=search");
                        Ok(Verdict::Negative)
                    }
                }
            } else {
                match decomposition_witnesses(&dc, &x)? {
                    Some(witnesses) => {
                        let labels: Vec<String> = witnesses
                            .iter()
                            .map(|(gi, _)| describe(&dc.family().generators()[*gi]))
                            .collect();
                        println!("RESULT: coalgebra=yes grade_witnesses={}", labels.join(","));
                        Ok(Verdict::Positive)
                    }
                    None => {
                        println!("RESULT: coalgebra=no");
                        Ok(Verdict::Negative)
                    }
                }
            }
        }

        Command::Laws {
            files,
            corpus,
            class,
            max,
            cap_carrier,
            cap_square,
        } => {
            let mut args = files;
            args.extend(corpus);
            let files = corpus_files(&args)?;
            if files.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    message: "no corpus files given".into(),
                });
            }
            let structures: Vec<FinStructure> = files
                .iter()
                .map(|p| read_structure(p))
                .collect::<Result<_, _>>()?;
            let family = classes::generators(&class_spec(&class)?, max)?;
            let dc = DensityComonad::with_caps(family, caps_from(cap_carrier, cap_square, None));
            let report = check_density_comonad(&dc, &structures);
            for line in report.summary_lines(&Law::ALL) {
                println!("RESULT: {line}");
            }
            for failure in report.failures() {
                println!(
                    "RESULT: failure law={} subject={:?}",
                    failure.law.name(),
                    failure.subject
                );
            }
            if report.all_passed() {
                Ok(Verdict::Positive)
            } else {
                Ok(Verdict::Negative)
            }
        }

        Command::Classify {
            file,
            class,
            snapshot,
        } => match (file, class, snapshot) {
            (Some(file), Some(class), None) => {
                let g = read_structure(&file)?;
                let spec = class_spec(&class)?;
                if classes::membership(&spec, &g)? {
                    println!("RESULT: member=yes class={}", spec.name());
                    Ok(Verdict::Positive)
                } else {
                    println!("RESULT: member=no class={}", spec.name());
                    Ok(Verdict::Negative)
                }
            }
            (None, None, Some(dir)) => {
                let files = corpus_files(&[dir])?;
                let structures: Vec<FinStructure> = files
                    .iter()
                    .map(|p| read_structure(p))
                    .collect::<Result<_, _>>()?;
                let report = classes::component_based_snapshot_check(&structures)?;
                for violation in &report.violations {
                    println!("RESULT: violation={violation:?}");
                }
                if report.passed() {
                    println!("RESULT: component_based=yes");
                    Ok(Verdict::Positive)
                } else {
                    println!("RESULT: component_based=no");
                    Ok(Verdict::Negative)
                }
            }
            _ => Err(Error::Parse {
                line: 0,
                message: "use either `classify --class NAME FILE` or `classify --snapshot DIR`"
                    .into(),
            }),
        },

        Command::Param { name, file } => {
            let param = Parameter::by_name(&name).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unknown parameter {name:?}"),
            })?;
            let g = read_structure(&file)?;
            println!("RESULT: {}={}", param.name(), param.eval(&g)?);
            Ok(Verdict::Positive)
        }

        Command::Kappa {
            name,
            max_size,
            file,
            k_min,
            k_max,
        } => {
            if name == "girth" {
                return Err(Error::UnsupportedConfiguration(
                    "girth is not a standard (max-combining) parameter; it has no nested grading"
                        .into(),
                ));
            }
            let param = Parameter::by_name(&name).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unknown parameter {name:?}"),
            })?;
            let g = read_structure(&file)?;
            let lo = k_min.unwrap_or(0);
            let hi = k_max.unwrap_or(max_size as i64 + 1);
            let gf = graded_family(&param, max_size, lo..=hi)?;
            let kappa = coalgebra_number(&gf, &g)?;
            let witness = match kappa {
                ExtReal::Fin(k) => format!(" witness_grade={k}"),
                _ => String::new(),
            };
            println!(
                "RESULT: kappa={kappa} parameter={} max_size={max_size}{witness}",
                param.name()
            );
            Ok(Verdict::Positive)
        }

        Command::Equiv { a, b, relation } => {
            let ga = read_graph(&a)?;
            let gb = read_graph(&b)?;
            let equivalent = match relation.as_str() {
                "cospectral" => cospectral(&ga, &gb),
                "fractional" => fractional_iso(&ga, &gb),
                "doublecover" => double_cover_iso(&ga, &gb)?,
                other => {
                    let mut parts = other.split(':');
                    match (parts.next(), parts.next(), parts.next(), parts.next()) {
                        (Some("homvec"), Some(class), Some(n), None) => {
                            let max: usize = n.parse().map_err(|_| Error::Parse {
                                line: 0,
                                message: format!("bad size bound {n:?}"),
                            })?;
                            let family = classes::generators(&class_spec(class)?, max)?;
                            let render = |v: &ddc::equivalence::HomVector| {
                                v.counts
                                    .iter()
                                    .map(|c| c.to_string())
                                    .collect::<Vec<_>>()
                                    .join(",")
                            };
                            println!("RESULT: counts_a={}", render(&hom_vector(&family, &ga)?));
                            println!("RESULT: counts_b={}", render(&hom_vector(&family, &gb)?));
                            lovasz_equiv(&family, &ga, &gb)?
                        }
                        _ => {
                            return Err(Error::Parse {
                                line: 0,
                                message: format!(
                                    "unknown relation {other:?}; use cospectral, fractional, \
                                     doublecover, or homvec:<class>:<n>"
                                ),
                            })
                        }
                    }
                }
            };
            println!(
                "RESULT: relation={relation} equivalent={}",
                if equivalent { "yes" } else { "no" }
            );
            if equivalent {
                Ok(Verdict::Positive)
            } else {
                Ok(Verdict::Negative)
            }
        }

        Command::Report { a, b, max } => {
            let ga = read_graph(&a)?;
            let gb = read_graph(&b)?;
            let report = relation_report(&ga, &gb, max)?;
            println!("relation report at generator bound {max}");
            println!(
                "{:<12} {:<18} {:<10} {:<12} verdict",
                "class", "oracle", "hom-side", "oracle-side"
            );
            for row in &report.rows {
                let render = |v: Option<bool>| match v {
                    Some(true) => "equal",
                    Some(false) => "differ",
                    None => "-",
                };
                println!(
                    "{:<12} {:<18} {:<10} {:<10} {}",
                    row.name,
                    row.oracle_name,
                    render(row.hom_equal),
                    render(row.oracle_equal),
                    row.verdict.label()
                );
            }
            for row in &report.rows {
                println!(
                    "RESULT: row={} oracle={} verdict={}",
                    row.name,
                    row.oracle_name,
                    row.verdict.label()
                );
            }
            if report.has_contradiction() {
                Ok(Verdict::Negative)
            } else {
                Ok(Verdict::Positive)
            }
        }

        Command::Generate { max, out } => {
            std::fs::create_dir_all(&out).map_err(|e| Error::Parse {
                line: 0,
                message: format!("{}: {e}", out.display()),
            })?;
            let graphs = classes::all_graphs(max)?;
            for g in &graphs {
                let text = serialize(g);
                let name = format!("{:016x}.g", fnv64(text.as_bytes()));
                let path = out.join(name);
                std::fs::write(&path, text).map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{}: {e}", path.display()),
                })?;
            }
            println!("RESULT: generated={} dir={}", graphs.len(), out.display());
            Ok(Verdict::Positive)
        }

        Command::Subdivide { n, p, out } => {
            if n < 1 {
                return Err(Error::Parse {
                    line: 0,
                    message: "the clique needs at least one vertex".into(),
                });
            }
            let g = classes::subdivided_clique(n, p);
            println!(
                "RESULT: vertices={} edges={} char_poly={:?}",
                g.size(),
                g.edge_count(),
                char_poly(&g).to_string()
            );
            match out {
                Some(path) => std::fs::write(&path, serialize(&g)).map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{}: {e}", path.display()),
                })?,
                None => print!("{}", serialize(&g)),
            }
            Ok(Verdict::Positive)
        }
    }
}
