//! Command line front-end. Every subcommand wraps exactly one library
//! operation; result documents are line-oriented `key: value` text with
//! optional embedded JSON documents. Exit codes: 0 for true/satisfiable,
//! 1 for false/unsatisfiable, 2 for input errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use ppml_core::canonical::{canonical_model, nu_formula};
use ppml_core::comonad::{check_comonad_laws, unravel};
use ppml_core::decision::{bml_sat, decide_k_bisim, model_check, ppml_sat, BisimMethod, McMethod};
use ppml_core::enumerate::{random_structure, SplitMix64};
use ppml_core::games::{decide_bisim_game, build_bisim_span, GameMode};
use ppml_core::parse::{parse_datagl, parse_ppml};
use ppml_core::pptree::validate_pp_tree;
use ppml_core::semantics::eval_ppml;
use ppml_core::signature::{Signature, EDGE, R_EQ};
use ppml_core::syntax::{modal_debt, modal_depth, CdxpPath, CdxpPolarity, PpmlFormula};
use ppml_core::translate::{phi_k, sigma_dgl, standard_translation, tr1, tr1_cdxp, tr2};

use crate::dot::tree_to_dot;
use crate::io::{load_model, load_structure, save_strategy, save_structure, save_unravelling};

#[derive(Parser)]
#[command(
    name = "ppml",
    about = "Path-predicate modal logic: games, unravellings, translations and decision procedures",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dialect {
    Ppml,
    Datagl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McChoice {
    Direct,
    Reduction,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BisimChoice {
    Game,
    Reduction,
    Graded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ToLang {
    Fol,
    Bml,
    Datagl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FromLang {
    Datagl,
    Cdxp,
}

fn parse_arity(s: &str) -> Result<(String, usize), String> {
    let (name, arity) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=ARITY, got `{s}`"))?;
    let arity: usize = arity
        .parse()
        .map_err(|_| format!("arity in `{s}` must be a number"))?;
    if name.is_empty() || arity == 0 {
        return Err(format!("`{s}` must declare a named symbol of positive arity"));
    }
    Ok((name.to_string(), arity))
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form, depth and debt
    Parse {
        /// Formula text, or @FILE to read it from a file
        formula: String,
        #[arg(long, value_enum, default_value = "ppml")]
        dialect: Dialect,
        /// Declare a symbol arity as NAME=ARITY (repeatable; default 1)
        #[arg(long = "arity", value_parser = parse_arity)]
        arities: Vec<(String, usize)>,
    },
    /// Evaluate a formula at the basepoint of a structure (or, in the data
    /// dialect, at world 0 of a data model document)
    Eval {
        /// Structure file (data model file in the data dialect)
        #[arg(short = 'm', long = "model")]
        model: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value = "ppml")]
        dialect: Dialect,
        /// World to evaluate at (data dialect only)
        #[arg(long, default_value = "0")]
        world: usize,
    },
    /// Model checking, directly or through the unimodal reduction
    Mc {
        #[arg(short = 'm', long = "model")]
        model: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value = "direct")]
        method: McChoice,
    },
    /// Unravel a structure to the given depth
    Unravel {
        #[arg(short = 'k')]
        k: usize,
        structure: PathBuf,
        /// Also write a Graphviz rendering of the tree
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Canonical code of a pp-tree (rejects structures that are not one)
    Canon { structure: PathBuf },
    /// k-round two-way equivalence between two structures
    Bisim {
        #[arg(short = 'k')]
        k: usize,
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "game")]
        mode: BisimChoice,
        /// Write the extracted Duplicator strategy (game mode only)
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// k-round one-way simulation from the first structure to the second
    Sim {
        #[arg(short = 'k')]
        k: usize,
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// Span of bounded morphisms witnessing k-bisimilarity
    Span {
        #[arg(short = 'k')]
        k: usize,
        left: PathBuf,
        right: PathBuf,
    },
    /// Satisfiability with arbitrary arities (reduction to the unimodal case)
    Sat {
        formula: String,
        #[arg(long = "arity", value_parser = parse_arity)]
        arities: Vec<(String, usize)>,
    },
    /// Satisfiability over a unimodal signature (witness tableau)
    BmlSat { formula: String },
    /// Translate between the supported logics
    Translate {
        formula: String,
        #[arg(long, value_enum)]
        to: Option<ToLang>,
        #[arg(long, value_enum)]
        from: Option<FromLang>,
        #[arg(long = "arity", value_parser = parse_arity)]
        arities: Vec<(String, usize)>,
    },
    /// The positive formula described by a pp-tree
    Nu { structure: PathBuf },
    /// The canonical model of a well-nested positive formula
    Model {
        formula: String,
        #[arg(long = "arity", value_parser = parse_arity)]
        arities: Vec<(String, usize)>,
    },
    /// Check the unravelling laws on a structure (or on random ones)
    Laws {
        #[arg(short = 'k')]
        k: usize,
        structure: Option<PathBuf>,
        /// Check this many random structures instead of a file
        #[arg(long)]
        random: Option<usize>,
        /// Seed for the randomized helper
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Universe bound for random structures
        #[arg(long, default_value = "4")]
        size: usize,
    },
}

/// Runs the command line and returns `(exit code, output text)`.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok((code, output)) => (code, output),
        Err(message) => (2, format!("error: {message}\n")),
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn formula_text(arg: &str) -> Result<String, String> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

fn load_structure_file(path: &Path) -> Result<ppml_core::PointedStructure, String> {
    load_structure(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_ppml_arg(arg: &str) -> Result<PpmlFormula, String> {
    parse_ppml(&formula_text(arg)?).map_err(|e| e.to_string())
}

/// Signature from the formula's atoms (default arity 1) and explicit
/// declarations.
fn signature_for(f: &PpmlFormula, arities: &[(String, usize)]) -> Result<Signature, String> {
    let mut symbols: BTreeMap<String, usize> =
        f.atoms().into_iter().map(|a| (a.to_string(), 1)).collect();
    for (name, arity) in arities {
        symbols.insert(name.clone(), *arity);
    }
    symbols.insert(EDGE.to_string(), 2);
    Signature::new(symbols).map_err(|e| e.to_string())
}

fn verdict(key: &str, value: bool) -> (i32, String) {
    (if value { 0 } else { 1 }, format!("{key}: {value}\n"))
}

fn signature_json(sig: &Signature) -> String {
    let map: serde_json::Map<String, serde_json::Value> = sig
        .symbols()
        .map(|(n, a)| (n.to_string(), serde_json::json!(a)))
        .collect();
    serde_json::to_string(&map).expect("valid json")
}

fn dispatch(command: Command) -> Result<(i32, String), String> {
    match command {
        Command::Parse {
            formula,
            dialect,
            arities,
        } => {
            let text = formula_text(&formula)?;
            match dialect {
                Dialect::Ppml => {
                    let f = parse_ppml(&text).map_err(|e| e.to_string())?;
                    let sig = signature_for(&f, &arities)?;
                    let debt = modal_debt(&f, &sig).map_err(|e| e.to_string())?;
                    let mut out = String::new();
                    writeln!(out, "formula: {f}").unwrap();
                    writeln!(out, "depth: {}", modal_depth(&f)).unwrap();
                    writeln!(out, "debt: {debt}").unwrap();
                    Ok((0, out))
                }
                Dialect::Datagl => {
                    let f = parse_datagl(&text).map_err(|e| e.to_string())?;
                    let mut out = String::new();
                    writeln!(out, "formula: {f}").unwrap();
                    writeln!(out, "depth: {}", f.modal_depth()).unwrap();
                    Ok((0, out))
                }
            }
        }
        Command::Eval {
            model,
            formula,
            dialect,
            world,
        } => {
            let value = match dialect {
                Dialect::Ppml => {
                    let a = load_structure_file(&model)?;
                    let f = parse_ppml_arg(&formula)?;
                    eval_ppml(&a, &[a.basepoint()], &f).map_err(|e| e.to_string())?
                }
                Dialect::Datagl => {
                    let m = load_model(&read_file(&model)?).map_err(|e| e.to_string())?;
                    let f = parse_datagl(&formula_text(&formula)?).map_err(|e| e.to_string())?;
                    ppml_core::semantics::eval_datagl(&m, world, &f).map_err(|e| e.to_string())?
                }
            };
            Ok(verdict("result", value))
        }
        Command::Mc {
            model,
            formula,
            method,
        } => {
            let a = load_structure_file(&model)?;
            let f = parse_ppml_arg(&formula)?;
            let method = match method {
                McChoice::Direct => McMethod::Direct,
                McChoice::Reduction => McMethod::Reduction,
            };
            let value = model_check(&a, &f, method).map_err(|e| e.to_string())?;
            Ok(verdict("result", value))
        }
        Command::Unravel { k, structure, dot } => {
            let a = load_structure_file(&structure)?;
            let u = unravel(&a, k);
            if let Some(path) = dot {
                std::fs::write(&path, tree_to_dot(u.tree()))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let mut out = String::new();
            writeln!(out, "nodes: {}", u.node_count()).unwrap();
            writeln!(out, "height: {}", u.tree().tree_height()).unwrap();
            out.push_str(&save_unravelling(&u));
            Ok((0, out))
        }
        Command::Canon { structure } => {
            let a = load_structure_file(&structure)?;
            let t = validate_pp_tree(&a).map_err(|e| e.to_string())?;
            let code = t.canonical_code();
            let hex: String = code.iter().map(|b| format!("{b:02x}")).collect();
            Ok((0, format!("code: {hex}\n")))
        }
        Command::Bisim {
            k,
            left,
            right,
            mode,
            strategy,
        } => {
            let a = load_structure_file(&left)?;
            let b = load_structure_file(&right)?;
            let value = match mode {
                BisimChoice::Game => {
                    let (wins, extracted) =
                        decide_bisim_game(&a, &b, k, GameMode::Bisim).map_err(|e| e.to_string())?;
                    if let (Some(path), Some(s)) = (&strategy, &extracted) {
                        std::fs::write(path, save_strategy(s))
                            .map_err(|e| format!("{}: {e}", path.display()))?;
                    }
                    wins
                }
                BisimChoice::Reduction => {
                    decide_k_bisim(&a, &b, k, BisimMethod::Reduction).map_err(|e| e.to_string())?
                }
                BisimChoice::Graded => {
                    decide_k_bisim(&a, &b, k, BisimMethod::GradedIso).map_err(|e| e.to_string())?
                }
            };
            Ok(verdict("bisimilar", value))
        }
        Command::Sim {
            k,
            left,
            right,
            strategy,
        } => {
            let a = load_structure_file(&left)?;
            let b = load_structure_file(&right)?;
            let (wins, extracted) =
                decide_bisim_game(&a, &b, k, GameMode::Sim).map_err(|e| e.to_string())?;
            if let (Some(path), Some(s)) = (&strategy, &extracted) {
                std::fs::write(path, save_strategy(s))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(verdict("similar", wins))
        }
        Command::Span { k, left, right } => {
            let a = load_structure_file(&left)?;
            let b = load_structure_file(&right)?;
            match build_bisim_span(&a, &b, k).map_err(|e| e.to_string())? {
                None => Ok((1, String::from("span: none\n"))),
                Some((apex, left_leg, right_leg)) => {
                    let mut out = String::new();
                    writeln!(out, "span: found").unwrap();
                    writeln!(out, "apex_nodes: {}", apex.node_count()).unwrap();
                    writeln!(out, "left_leg: {:?}", left_leg.map()).unwrap();
                    writeln!(out, "right_leg: {:?}", right_leg.map()).unwrap();
                    out.push_str(&save_structure(apex.structure()));
                    Ok((0, out))
                }
            }
        }
        Command::Sat { formula, arities } => {
            let f = parse_ppml_arg(&formula)?;
            let sig = signature_for(&f, &arities)?;
            let result = ppml_sat(&f, &sig).map_err(|e| e.to_string())?;
            let mut out = format!("satisfiable: {}\n", result.satisfiable);
            if let Some(model) = result.model {
                out.push_str(&save_structure(model.structure()));
            }
            Ok((if result.satisfiable { 0 } else { 1 }, out))
        }
        Command::BmlSat { formula } => {
            let f = parse_ppml_arg(&formula)?;
            let sig = signature_for(&f, &[])?; // atoms default to arity 1
            let result = bml_sat(&f, &sig).map_err(|e| e.to_string())?;
            let mut out = format!("satisfiable: {}\n", result.satisfiable);
            if let Some(model) = result.model {
                out.push_str(&save_structure(model.structure()));
            }
            Ok((if result.satisfiable { 0 } else { 1 }, out))
        }
        Command::Translate {
            formula,
            to,
            from,
            arities,
        } => {
            let text = formula_text(&formula)?;
            let mut out = String::new();
            match (to, from) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err("pass exactly one of --to and --from".into());
                }
                (Some(ToLang::Fol), None) => {
                    let f = parse_ppml(&text).map_err(|e| e.to_string())?;
                    let sig = signature_for(&f, &arities)?;
                    let fol = standard_translation(&f, &sig).map_err(|e| e.to_string())?;
                    writeln!(out, "formula: {fol}").unwrap();
                }
                (Some(ToLang::Bml), None) => {
                    let f = parse_ppml(&text).map_err(|e| e.to_string())?;
                    let sig = signature_for(&f, &arities)?;
                    let reduced = PpmlFormula::and(f, phi_k(&sig));
                    writeln!(out, "formula: {reduced}").unwrap();
                    writeln!(out, "signature: {}", signature_json(&sig.flattened())).unwrap();
                }
                (Some(ToLang::Datagl), None) => {
                    let f = parse_ppml(&text).map_err(|e| e.to_string())?;
                    let props: Vec<String> = f
                        .atoms()
                        .into_iter()
                        .filter(|a| *a != R_EQ)
                        .map(String::from)
                        .collect();
                    let sig = sigma_dgl(props);
                    let g = tr2(&f, &sig).map_err(|e| e.to_string())?;
                    writeln!(out, "formula: {g}").unwrap();
                }
                (None, Some(FromLang::Datagl)) => {
                    let f = parse_datagl(&text).map_err(|e| e.to_string())?;
                    writeln!(out, "formula: {}", tr1(&f)).unwrap();
                }
                (None, Some(FromLang::Cdxp)) => {
                    let path = parse_cdxp(&text)?;
                    let mut props: Vec<(String, usize)> = Vec::new();
                    for test in path.tests() {
                        collect_props(test, &mut props);
                    }
                    let comparison_arity = path.tests().len() + 1;
                    if comparison_arity > 2 {
                        props.push((format!("R_{comparison_arity}"), comparison_arity));
                    }
                    props.push((R_EQ.to_string(), 2));
                    let sig = Signature::with_symbols(props).map_err(|e| e.to_string())?;
                    let f = tr1_cdxp(&path, &sig).map_err(|e| e.to_string())?;
                    writeln!(out, "formula: {f}").unwrap();
                }
            }
            Ok((0, out))
        }
        Command::Nu { structure } => {
            let a = load_structure_file(&structure)?;
            let t = validate_pp_tree(&a).map_err(|e| e.to_string())?;
            Ok((0, format!("formula: {}\n", nu_formula(&t))))
        }
        Command::Model { formula, arities } => {
            let f = parse_ppml_arg(&formula)?;
            let sig = signature_for(&f, &arities)?;
            let t = canonical_model(&f, &sig).map_err(|e| e.to_string())?;
            let mut out = format!("nodes: {}\n", t.node_count());
            out.push_str(&save_structure(t.structure()));
            Ok((0, out))
        }
        Command::Laws {
            k,
            structure,
            random,
            seed,
            size,
        } => {
            let mut out = String::new();
            let mut all_ok = true;
            let mut check = |a: &ppml_core::PointedStructure, name: &str| {
                let report = check_comonad_laws(a, k);
                if report.all_hold() {
                    writeln!(out, "{name}: ok").unwrap();
                } else {
                    all_ok = false;
                    for failure in &report.failures {
                        writeln!(out, "{name}: failed {} at node {}", failure.law, failure.node)
                            .unwrap();
                    }
                }
            };
            match (structure, random) {
                (Some(path), None) => {
                    let a = load_structure_file(&path)?;
                    check(&a, "laws");
                }
                (None, Some(count)) => {
                    let sig =
                        Signature::with_symbols([("p", 1), ("S", 2)]).expect("valid signature");
                    let mut rng = SplitMix64::new(seed);
                    for i in 0..count {
                        let a = random_structure(&sig, size, &mut rng);
                        check(&a, &format!("laws[{i}]"));
                    }
                }
                _ => return Err("pass a structure file or --random N".into()),
            }
            writeln!(out, "all: {}", if all_ok { "ok" } else { "failed" }).unwrap();
            Ok((if all_ok { 0 } else { 1 }, out))
        }
    }
}

fn collect_props(f: &ppml_core::DataGlFormula, out: &mut Vec<(String, usize)>) {
    use ppml_core::DataGlFormula as D;
    match f {
        D::Prop(p) => {
            if !out.iter().any(|(n, _)| n == p) {
                out.push((p.clone(), 1));
            }
        }
        D::Not(g) | D::DiamondEq(g) | D::DiamondNeq(g) => collect_props(g, out),
        D::And(l, r) => {
            collect_props(l, out);
            collect_props(r, out);
        }
        D::Top | D::Bot => {}
    }
}

/// Data-comparison path syntax: `e=` or `e!=` followed by one or more
/// bracketed data formulas, e.g. `e=[p][q & !r]`.
fn parse_cdxp(text: &str) -> Result<CdxpPath, String> {
    let trimmed = text.trim();
    let (polarity, rest) = if let Some(rest) = trimmed.strip_prefix("e!=") {
        (CdxpPolarity::NotEqual, rest)
    } else if let Some(rest) = trimmed.strip_prefix("e=") {
        (CdxpPolarity::Equal, rest)
    } else {
        return Err("a path starts with `e=` or `e!=`".into());
    };
    let mut tests = Vec::new();
    let mut rest = rest.trim_start();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('[')
            .ok_or_else(|| format!("expected `[test]`, found `{rest}`"))?;
        let close = inner
            .find(']')
            .ok_or_else(|| String::from("unclosed `[` in path"))?;
        tests.push(parse_datagl(&inner[..close]).map_err(|e| e.to_string())?);
        rest = inner[close + 1..].trim_start();
    }
    CdxpPath::new(polarity, tests).ok_or_else(|| String::from("a path needs at least one test"))
}
