use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cliquetile::format::{join_ids, parse_ids, read_graph_file, write_graph_file, write_tiling};
use cliquetile::scan::{
    bisect_constant, cell_rate, parse_c_grid, parse_list, run_scan, summarize, write_csv, write_jsonl, write_summary,
    BaseKind, BisectParams, ScanConfig,
};
use cliquetile_core::absorption::{
    absorb, assemble_absorbing_structure, gadget_for, generate_shaped, StructureParams, TemplateShape, Verification,
    VerifyMode,
};
use cliquetile_core::constructions::{case_tag, h0, h0_prime, h1, h1_prime, h_det, h_vectors, lower_bound_graph, Case};
use cliquetile_core::harness::{gnp, random_min_degree};
use cliquetile_core::phi::phi_anchored;
use cliquetile_core::tiling::{max_tiling, perfect_tiling, Deadline, NoDeadline, NoTiling, TileOutcome};
use cliquetile_core::{DecoratedGraph, Graph};

#[derive(Parser)]
#[command(name = "cliquetile", version, about = "Clique tilings of randomly perturbed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hdet,
    H0,
    H0p,
    H1,
    H1p,
    LowerBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Exhaustive,
    Sampled,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Random,
    Sparse,
}

impl From<ShapeArg> for TemplateShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Random => TemplateShape::Random,
            ShapeArg::Sparse => TemplateShape::Sparse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(clap::Args)]
struct ScanArgs {
    /// JSON file with the whole configuration; other flags are then ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// lower-bound or random
    #[arg(long)]
    base: Option<BaseKind>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated vertex counts.
    #[arg(long)]
    n: Option<String>,
    /// `LO:HI:geom:STEPS`, `LO:HI:lin:STEPS` or a comma-separated list.
    #[arg(long)]
    c: Option<String>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial solver timeout in milliseconds (0: none).
    #[arg(long, default_value_t = 0)]
    timeout_ms: u64,
    #[arg(long)]
    pipeline: bool,
    /// Record zero timings so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl ScanArgs {
    fn config(&self, need_c: bool) -> Result<ScanConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
        }
        Ok(ScanConfig {
            r: self.r.context("--r is required without --config")?,
            k: self.k.context("--k is required without --config")?,
            base: self.base.context("--base is required without --config")?,
            alpha: self.alpha,
            gamma: self.gamma,
            n: parse_list(self.n.as_deref().context("--n is required without --config")?)?,
            c: match (&self.c, need_c) {
                (Some(c), _) => parse_c_grid(c)?,
                (None, false) => vec![1.0],
                (None, true) => bail!("--c is required without --config"),
            },
            trials: self.trials,
            seed: self.seed,
            timeout_ms: self.timeout_ms,
            pipeline: self.pipeline,
            no_timing: self.no_timing,
            threads: self.threads,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write one of the catalogue graphs.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the threshold functional of a graph.
    Phi {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated independent anchor vertices.
        #[arg(long, default_value = "")]
        anchors: String,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        p: f64,
    },
    /// Decide whether a graph has a perfect K_r-tiling, or find a largest one.
    Tile {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        max: bool,
        #[arg(long)]
        timeout_ms: Option<u64>,
    },
    /// Generate and verify a bipartite template.
    Template {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "auto")]
        verify: VerifyArg,
        /// Trials for sampled verification.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random")]
        shape: ShapeArg,
    },
    /// Build an absorbing gadget; writes the graph and a JSON sidecar.
    Gadget {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value = "auto")]
        case: CaseArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble an absorbing structure in a perturbed graph and absorb a random choice.
    AbsorbDemo {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum-degree fraction of the deterministic graph (default: 90% of the way up the admissible interval).
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value = "sparse")]
        shape: ShapeArg,
    },
    /// Monte Carlo threshold scan over an (n, c) grid.
    Scan {
        #[command(flatten)]
        args: ScanArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jsonl: Option<PathBuf>,
    },
    /// Locate the constant c where the tiling rate crosses a target, per n.
    Bisect {
        #[command(flatten)]
        args: ScanArgs,
        #[arg(long, default_value_t = 0.1)]
        lo: f64,
        #[arg(long, default_value_t = 10.0)]
        hi: f64,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
        /// Stop when hi / lo <= 1 + tolerance.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
        #[arg(long, default_value_t = 4)]
        max_widen: usize,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Construct {
            family,
            r,
            k,
            n,
            gamma,
            out,
        } => construct(family, r, k, n, gamma, &out),
        Command::Phi { graph, anchors, n, p } => {
            let f = read_graph_file(&graph)?;
            let res = phi_anchored(&f.graph, &parse_ids(&anchors)?, n, p)?;
            println!("log_value {:.12}", res.log_value);
            println!("value {:.6e}", res.value());
            println!("argmin_vertices {}", join_ids(&res.argmin_vertices));
            println!("argmin_edges {}", res.argmin_edges);
            Ok(())
        }
        Command::Tile {
            graph,
            r,
            max,
            timeout_ms,
        } => tile(&graph, r, max, timeout_ms),
        Command::Template {
            m,
            verify,
            trials,
            seed,
            shape,
        } => {
            let mode = match verify {
                VerifyArg::Exhaustive => VerifyMode::Exhaustive,
                VerifyArg::Sampled => VerifyMode::Sampled(trials),
                VerifyArg::Auto => VerifyMode::Auto,
            };
            let t = generate_shaped(m, seed, shape.into(), mode)?;
            match t.verification() {
                Verification::Exhaustive => println!("flexible: exhaustive"),
                Verification::Sampled { trials } => println!("flexible: sampled ({trials} trials)"),
            }
            println!(
                "m {} left {} right {} edges {} max_degree {}",
                t.m(),
                t.left(),
                t.right(),
                t.edge_count(),
                t.max_degree()
            );
            for i in 0..t.left() {
                println!("{i}: {}", join_ids(t.neighbours(i)));
            }
            Ok(())
        }
        Command::Gadget { r, k, s, case, out } => gadget(r, k, s, case, &out),
        Command::AbsorbDemo {
            r,
            k,
            m,
            n,
            p,
            seed,
            alpha,
            shape,
        } => absorb_demo(r, k, m, n, p, seed, alpha, shape),
        Command::Scan { args, out, jsonl } => {
            let cfg = args.config(true)?;
            for w in cfg.validate()? {
                eprintln!("warning: {w}");
            }
            let rows = run_scan(&cfg)?;
            write_csv(
                BufWriter::new(File::create(&out).with_context(|| format!("creating {}", out.display()))?),
                &rows,
            )?;
            if let Some(j) = jsonl {
                write_jsonl(
                    BufWriter::new(File::create(&j).with_context(|| format!("creating {}", j.display()))?),
                    &rows,
                )?;
            }
            write_summary(io::stdout().lock(), &summarize(&cfg, &rows))
        }
        Command::Bisect {
            args,
            lo,
            hi,
            target,
            tolerance,
            max_widen,
        } => {
            let cfg = args.config(false)?;
            for w in cfg.validate()? {
                eprintln!("warning: {w}");
            }
            let params = BisectParams {
                lo,
                hi,
                target,
                tolerance,
                max_widen,
                ..BisectParams::default()
            };
            let mut stdout = io::stdout().lock();
            for &n in &cfg.n {
                let res = bisect_constant(|c| cell_rate(&cfg, n, c), &params)?;
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string(&serde_json::json!({ "n": n, "result": res }))?
                )?;
            }
            Ok(())
        }
    }
}

fn decorated_meta(d: &DecoratedGraph) -> Vec<(String, String)> {
    vec![("distinguished".into(), join_ids(&[d.w1, d.w2]))]
}

fn construct(family: Family, r: usize, k: usize, n: Option<usize>, gamma: Option<f64>, out: &Path) -> Result<()> {
    let (g, meta) = match family {
        Family::Hdet => {
            let tag = case_tag(r, k)?;
            let parts: Vec<usize> = tag.det_parts();
            (h_det(r, k)?, vec![("parts".into(), join_ids(&parts))])
        }
        Family::H0 => {
            let d = h0(r, k)?;
            (d.graph.clone(), decorated_meta(&d))
        }
        Family::H0p => {
            let d = h0_prime(r, k)?;
            (d.graph.clone(), decorated_meta(&d))
        }
        Family::H1 => {
            let d = h1(r, k)?;
            (d.graph.clone(), decorated_meta(&d))
        }
        Family::H1p => {
            let d = h1_prime(r, k)?;
            (d.graph.clone(), decorated_meta(&d))
        }
        Family::LowerBound => {
            let n = n.context("lower-bound needs --n")?;
            let lb = lower_bound_graph(n, r, k, gamma.context("lower-bound needs --gamma")?)?;
            let meta = vec![
                ("parts".to_string(), join_ids(&[lb.b.len(), lb.a.len()])),
                ("complete_part".to_string(), join_ids(&lb.b)),
            ];
            (lb.graph, meta)
        }
    };
    write_graph_file(out, &g, &meta)?;
    println!(
        "wrote {} vertices, {} edges to {}",
        g.n(),
        g.edge_count(),
        out.display()
    );
    Ok(())
}

struct Until(Instant);

impl Deadline for Until {
    fn expired(&self) -> bool {
        Instant::now() >= self.0
    }
}

fn tile(path: &Path, r: usize, max: bool, timeout_ms: Option<u64>) -> Result<()> {
    let g = read_graph_file(path)?.graph;
    let until = timeout_ms.map(|ms| Until(Instant::now() + Duration::from_millis(ms)));
    let deadline: &dyn Deadline = match &until {
        Some(u) => u,
        None => &NoDeadline,
    };
    if max {
        let res = max_tiling(&g, r, deadline)?;
        res.tiling.validate(&g, None)?;
        println!("status {}", if res.optimal { "optimal" } else { "best-found" });
        println!("size {}", res.tiling.len());
        print!("{}", write_tiling(&res.tiling));
        return Ok(());
    }
    match perfect_tiling(&g, r, deadline)? {
        TileOutcome::Found(t) => {
            t.validate_perfect(&g)?;
            println!("status tiled");
            print!("{}", write_tiling(&t));
        }
        TileOutcome::None(NoTiling::Divisibility) => println!("status none (divisibility)"),
        TileOutcome::None(NoTiling::Exhausted) => println!("status none"),
        TileOutcome::Timeout => println!("status timeout"),
    }
    Ok(())
}

fn gadget(r: usize, k: usize, s: usize, case: CaseArg, out: &Path) -> Result<()> {
    let tag = case_tag(r, k)?;
    let want = match case {
        CaseArg::Auto => None,
        CaseArg::One => Some(Case::One),
        CaseArg::Two => Some(Case::Two),
        CaseArg::Three => Some(Case::Three),
    };
    if let Some(c) = want.filter(|&c| c != tag.case) {
        bail!("(r, k) = ({r}, {k}) falls in {:?}, not {c:?}", tag.case);
    }
    let vector = h_vectors(r, k)?.shortest();
    let g = gadget_for(r, k, s, &vector)?;
    write_graph_file(out, g.assembled(), &[("base".into(), join_ids(g.base()))])?;
    let sidecar = out.with_extension("json");
    let json = serde_json::json!({
        "r": r,
        "k": k,
        "s": s,
        "case": format!("{:?}", tag.case),
        "vertices": g.n(),
        "base": g.base(),
        "hubs": g.hubs(),
        "layers": g.layers(),
    });
    std::fs::write(&sidecar, serde_json::to_string_pretty(&json)? + "\n")
        .with_context(|| format!("writing {}", sidecar.display()))?;
    println!(
        "gadget with {} vertices written to {} and {}",
        g.n(),
        out.display(),
        sidecar.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn absorb_demo(
    r: usize,
    k: usize,
    m: usize,
    n: usize,
    p: f64,
    seed: u64,
    alpha: Option<f64>,
    shape: ShapeArg,
) -> Result<()> {
    let alpha = alpha.unwrap_or(1.0 - (k as f64 - 0.9) / r as f64);
    let g_det: Graph = random_min_degree(n, alpha, seed)?;
    let g_rand = gnp(n, p, seed.wrapping_add(1))?;
    let template = generate_shaped(m, seed, shape.into(), VerifyMode::Auto)?;
    if n < 4 * m {
        bail!("n must be at least 4m");
    }
    let z1: Vec<usize> = (0..2 * m).collect();
    let z2: Vec<usize> = (2 * m..4 * m).collect();
    let a = assemble_absorbing_structure(
        &g_det,
        &g_rand,
        &template,
        &z1,
        &z2,
        r,
        k,
        seed,
        &StructureParams::default(),
    )
    .map_err(|e| anyhow::anyhow!("assembly failed: {e}"))?;
    println!(
        "structure: {} gadgets, {} vertices (bound {})",
        a.embeddings().len(),
        a.vertices().len(),
        a.size_bound()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zbar: Vec<usize> = sample(&mut rng, 2 * m, m).into_iter().map(|i| z1[i]).collect();
    let t = absorb(&a, &zbar)?;
    println!("removed {}", join_ids(&zbar));
    println!("absorbed into {} cliques covering {} vertices", t.len(), t.len() * r);
    Ok(())
}
