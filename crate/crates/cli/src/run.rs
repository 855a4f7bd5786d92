//! Subcommand dispatch. Exit codes: 0 = YES/ok, 1 = NO/invalid
//! coloring, 2 = usage or guard error (returned by `main` on any Err).

use crate::formats;
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cliquecolor::branch_decomp::{best_bd_small, linear_bd, module_width, validate_bd};
use cliquecolor::coloring::{brute_force_solve_capped, is_clique_coloring};
use cliquecolor::cw::solve_cw_capped;
use cliquecolor::gadgets::{
    color_selection_gadget, listcol_gadget, mycielski, mycielski_minus, naesat_gadget,
    standard_graph, LabeledGadgetGraph, ListColoringInstance, StandardFamily,
};
use cliquecolor::tree_decomp::{exact_td_small_capped, make_nice, validate_td};
use cliquecolor::tw::solve_tw;
use cliquecolor::{Coloring, Graph};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "cliquecolor",
    about = "Exact clique-coloring solvers over tree and branch decompositions",
    version
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Tw,
    Cw,
    Brute,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the graph has a clique coloring with the given
    /// number of colors. Prints YES or NO; with --certificate, one
    /// `<vertex> <color>` line per vertex follows a YES.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "tw")]
        algo: Algo,
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        certificate: bool,
        /// Tree decomposition file (tw); computed exactly when omitted
        /// and the graph is small enough.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Rooted branch decomposition file (cw); computed when omitted
        /// and the graph is small enough.
        #[arg(long)]
        bd: Option<PathBuf>,
        /// Vertex cap for the brute-force solver.
        #[arg(long, default_value_t = 12)]
        brute_cap: usize,
        /// Vertex cap for exact treewidth computation.
        #[arg(long, default_value_t = 15)]
        td_cap: usize,
        /// Attained-signature cap per node of the cw solver.
        #[arg(long, default_value_t = 1_000_000)]
        cw_cap: usize,
    },
    /// Check a coloring file against a graph (exit 0 iff it is a clique
    /// coloring).
    Verify { graph: PathBuf, coloring: PathBuf },
    /// Emit a generated graph (and optionally a label sidecar).
    Gen {
        family: GenKind,
        /// Mycielski index p.
        #[arg(long)]
        p: Option<usize>,
        /// Number of colors q (hq, listcol).
        #[arg(long)]
        q: Option<u32>,
        /// Vertex count (cycle, path, complete, random).
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability (random).
        #[arg(long)]
        prob: Option<f64>,
        /// PRNG seed (random).
        #[arg(long)]
        seed: Option<u64>,
        /// DIMACS CNF input (naesat).
        #[arg(long)]
        cnf: Option<PathBuf>,
        /// Input graph (listcol).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Per-vertex color lists (listcol).
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Write the graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write `label <vertex> <role>` lines here.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Emit decompositions or the module-width of a given one.
    Decomp {
        what: DecompKind,
        graph: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        bd: Option<PathBuf>,
        /// Leaf order for bd-linear, comma-separated 1-based vertices.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, default_value_t = 15)]
        td_cap: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Mycielski,
    MycielskiMinus,
    Hq,
    Naesat,
    Listcol,
    Cycle,
    Path,
    Complete,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecompKind {
    TwExact,
    Nice,
    BdLinear,
    BdExact,
    Mw,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    formats::parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(colorable: bool, coloring: Option<&Coloring>) -> i32 {
    if colorable {
        println!("YES");
        if let Some(c) = coloring {
            print!("{}", formats::emit_coloring(c));
        }
        0
    } else {
        println!("NO");
        1
    }
}

pub fn run(config: RunConfig) -> Result<i32> {
    match config.command {
        Command::Solve {
            graph,
            algo,
            colors,
            certificate,
            td,
            bd,
            brute_cap,
            td_cap,
            cw_cap,
        } => {
            let g = load_graph(&graph)?;
            match algo {
                Algo::Brute => {
                    let found = brute_force_solve_capped(&g, colors, brute_cap)?;
                    Ok(report(found.is_some(), found.filter(|_| certificate).as_ref()))
                }
                Algo::Tw => {
                    let td = match td {
                        Some(path) => {
                            let td = formats::parse_td(&read(&path)?, &g)?;
                            validate_td(&g, &td)
                                .map_err(|v| anyhow!("invalid tree decomposition: {v}"))?;
                            td
                        }
                        None => exact_td_small_capped(&g, td_cap).map_err(|e| {
                            anyhow!("{e}; supply --td for graphs over the cap")
                        })?,
                    };
                    let ntd = make_nice(&g, &td)?;
                    let out = solve_tw(&g, &ntd, colors, certificate)?;
                    Ok(report(out.colorable, out.coloring.as_ref()))
                }
                Algo::Cw => {
                    if colors == 0 {
                        bail!("--colors must be at least 1");
                    }
                    if g.n() == 0 {
                        return Ok(report(
                            true,
                            certificate
                                .then(|| Coloring::new(Vec::new(), colors).unwrap())
                                .as_ref(),
                        ));
                    }
                    let bd = match bd {
                        Some(path) => {
                            let bd = formats::parse_bd(&read(&path)?, &g)?;
                            validate_bd(&g, &bd)
                                .map_err(|v| anyhow!("invalid branch decomposition: {v}"))?;
                            bd
                        }
                        None => best_bd_small(&g)
                            .map_err(|e| anyhow!("{e}; supply --bd for graphs over the cap"))?
                            .bd,
                    };
                    let out = solve_cw_capped(&g, &bd, colors, certificate, cw_cap)?;
                    Ok(report(out.colorable, out.coloring.as_ref()))
                }
            }
        }
        Command::Verify { graph, coloring } => {
            let g = load_graph(&graph)?;
            let c = formats::parse_coloring(&read(&coloring)?, &g)?;
            if is_clique_coloring(&g, &c)? {
                println!("OK");
                Ok(0)
            } else {
                println!("INVALID");
                Ok(1)
            }
        }
        Command::Gen {
            family,
            p,
            q,
            n,
            prob,
            seed,
            cnf,
            graph,
            lists,
            out,
            labels,
        } => {
            let need = |opt: Option<usize>, what: &str| {
                opt.ok_or_else(|| anyhow!("gen {family:?} needs --{what}"))
            };
            let (text, labeled): (String, Option<LabeledGadgetGraph>) = match family {
                GenKind::Mycielski => {
                    (formats::emit_graph(&mycielski(need(p, "p")?)?), None)
                }
                GenKind::MycielskiMinus => {
                    let (g, (x, y)) = mycielski_minus(need(p, "p")?)?;
                    let text =
                        format!("c deleted-edge {} {}\n{}", x + 1, y + 1, formats::emit_graph(&g));
                    (text, None)
                }
                GenKind::Hq => {
                    let q = q.ok_or_else(|| anyhow!("gen hq needs --q"))?;
                    let gadget = color_selection_gadget(q as usize)?;
                    (formats::emit_graph(&gadget.graph), Some(gadget))
                }
                GenKind::Naesat => {
                    let path = cnf.ok_or_else(|| anyhow!("gen naesat needs --cnf"))?;
                    let phi = formats::parse_cnf(&read(&path)?)?;
                    let gadget = naesat_gadget(&phi)?;
                    (formats::emit_graph(&gadget.graph), Some(gadget))
                }
                GenKind::Listcol => {
                    let q = q.ok_or_else(|| anyhow!("gen listcol needs --q"))?;
                    let gpath = graph.ok_or_else(|| anyhow!("gen listcol needs --graph"))?;
                    let lpath = lists.ok_or_else(|| anyhow!("gen listcol needs --lists"))?;
                    let g = load_graph(&gpath)?;
                    let ls = formats::parse_lists(&read(&lpath)?, g.n())?;
                    let inst = ListColoringInstance::new(g, ls, q)?;
                    let gadget = listcol_gadget(&inst)?;
                    for w in &gadget.warnings {
                        eprintln!("warning: {w}");
                    }
                    (formats::emit_graph(&gadget.graph), Some(gadget))
                }
                GenKind::Cycle => (
                    formats::emit_graph(&standard_graph(&StandardFamily::Cycle(need(n, "n")?))?),
                    None,
                ),
                GenKind::Path => (
                    formats::emit_graph(&standard_graph(&StandardFamily::Path(need(n, "n")?))?),
                    None,
                ),
                GenKind::Complete => (
                    formats::emit_graph(&standard_graph(&StandardFamily::Complete(need(
                        n, "n",
                    )?))?),
                    None,
                ),
                GenKind::Random => {
                    let n = need(n, "n")?;
                    let p = prob.ok_or_else(|| anyhow!("gen random needs --prob"))?;
                    let seed = seed.ok_or_else(|| anyhow!("gen random needs --seed"))?;
                    (
                        formats::emit_graph(&standard_graph(&StandardFamily::Random {
                            n,
                            p,
                            seed,
                        })?),
                        None,
                    )
                }
            };
            write_out(&text, out.as_ref())?;
            if let Some(path) = labels {
                let Some(gadget) = labeled else {
                    bail!("--labels is only available for labeled gadget families");
                };
                fs::write(&path, formats::emit_labels(&gadget))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(0)
        }
        Command::Decomp {
            what,
            graph,
            td,
            bd,
            order,
            td_cap,
        } => {
            let g = load_graph(&graph)?;
            let text = match what {
                DecompKind::TwExact => {
                    let td = exact_td_small_capped(&g, td_cap)?;
                    formats::emit_td(&td, g.n())
                }
                DecompKind::Nice => {
                    let td = match td {
                        Some(path) => {
                            let td = formats::parse_td(&read(&path)?, &g)?;
                            validate_td(&g, &td)
                                .map_err(|v| anyhow!("invalid tree decomposition: {v}"))?;
                            td
                        }
                        None => exact_td_small_capped(&g, td_cap)?,
                    };
                    formats::emit_td(&make_nice(&g, &td)?.as_td(), g.n())
                }
                DecompKind::BdLinear => {
                    let order = match order {
                        Some(text) => text
                            .split(',')
                            .map(|tok| {
                                let v: usize = tok
                                    .trim()
                                    .parse()
                                    .map_err(|_| anyhow!("bad order entry {tok:?}"))?;
                                if v == 0 || v > g.n() {
                                    bail!("order vertex {v} out of range 1..={}", g.n());
                                }
                                Ok(v - 1)
                            })
                            .collect::<Result<Vec<_>>>()?,
                        None => (0..g.n()).collect(),
                    };
                    formats::emit_bd(&linear_bd(&g, &order)?)
                }
                DecompKind::BdExact => {
                    let found = best_bd_small(&g)?;
                    format!(
                        "c mw {}\nc search linear-orders\n{}",
                        found.width,
                        formats::emit_bd(&found.bd)
                    )
                }
                DecompKind::Mw => {
                    let bd = match bd {
                        Some(path) => {
                            let bd = formats::parse_bd(&read(&path)?, &g)?;
                            validate_bd(&g, &bd)
                                .map_err(|v| anyhow!("invalid branch decomposition: {v}"))?;
                            bd
                        }
                        None => best_bd_small(&g)?.bd,
                    };
                    format!("{}\n", module_width(&g, &bd))
                }
            };
            print!("{text}");
            Ok(0)
        }
    }
}
