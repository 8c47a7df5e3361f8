//! `dindex`: difference-index analysis of difference polynomial systems.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dindex_core::error::Error;
use dindex_core::index::{
    affine_str, check_i_invariance, difference_index, lemma_lab, membership_bounds, AnalyzeOptions,
    BoundPart, FamilyKind, IndexReport, RankEngine,
};
use dindex_core::jacobi::{build_jk, build_jki, SymbolicMatrix};
use dindex_core::oracle::{
    eliminate, membership_test, stabilization_scan, to_oracle_poly, trdeg_oracle, truncated_ideal,
    OracleLimits,
};
use dindex_core::parse::parse_equation;
use dindex_core::rank::{rank_exact, rank_probabilistic, Evaluator, Specialization};
use dindex_core::sigma::SystemSpec;
use dindex_core::sysfile::{SystemFile, EXAMPLE_SYSTEM_JSON};

#[derive(Parser)]
#[command(name = "dindex", version, about = "difference index analyzer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct EngineFlags {
    /// Use the probabilistic rank engine (random rational points).
    #[arg(long)]
    probabilistic: bool,
    /// Trials per rank in probabilistic mode.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Seed for all randomized paths.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl EngineFlags {
    fn engine(&self) -> RankEngine {
        if self.probabilistic {
            RankEngine::Probabilistic {
                seed: self.seed,
                trials: self.trials,
            }
        } else {
            RankEngine::Exact
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: psi and mu profiles, difference index, bounds.
    Analyze {
        file: String,
        /// Raise the number of profile points beyond the guaranteed bounds.
        #[arg(long)]
        kmax: Option<usize>,
        /// Pseudo-Jacobian shift index (default e-1).
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Comma-separated list of i values whose mu tables must agree.
        #[arg(long, value_delimiter = ',')]
        check_i_invariance: Option<Vec<usize>>,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// Rank tables of the Jacobian families; optionally dump one matrix.
    Ranks {
        file: String,
        #[arg(long, value_enum, default_value_t = Family::Jk)]
        family: Family,
        /// Pseudo-Jacobian shift index (default e-1).
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        /// Dump the matrix at this k as an aligned grid (or JSON).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// Effective ideal-membership bounds for a member of given order.
    Membership {
        file: String,
        /// Order of the difference polynomial whose representation is bounded.
        #[arg(long)]
        ord_f: usize,
        /// Degree cap D (default: max total degree of the system).
        #[arg(long)]
        degree: Option<u64>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// Randomized onset checks for the twisted block families.
    LemmaLab {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force Groebner checks over Q.
    Oracle {
        file: String,
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Write the bundled worked example system file.
    Example {
        /// Output path.
        #[arg(long, default_value = "example7.json")]
        out: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Jk,
    Jki,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    M,
    N,
}

#[derive(Subcommand)]
enum OracleOp {
    /// Reduced basis of the elimination ideal of truncation level h.
    Elim {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Scan for the level at which the elimination ideal stabilizes.
    Scan {
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 8)]
        hmax: usize,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Test membership of a polynomial in a truncation ideal.
    Member {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Transcendence degree of the residue field of a truncation.
    Trdeg {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn load(path: &str) -> Result<(SystemSpec, Specialization), Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    SystemFile::from_json(&text)?.load()
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze {
            file,
            kmax,
            i,
            json,
            check_i_invariance: check_list,
            engine,
        } => {
            let (sys, sp) = load(&file)?;
            let opts = AnalyzeOptions {
                kmax,
                i,
                engine: Some(engine.engine()),
            };
            let report = difference_index(&sys, &sp, opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print_report(&sys, &report);
            }
            if let Some(i_values) = check_list {
                let kmax_inv = report.rho + sys.e;
                let inv = check_i_invariance(&sys, &sp, kmax_inv, &i_values, engine.engine())?;
                if json {
                    println!("{}", serde_json::to_string_pretty(&inv).unwrap());
                } else if inv.consistent() {
                    println!(
                        "i-invariance: mu tables agree for i in {:?}, k <= {kmax_inv}",
                        inv.i_values
                    );
                } else {
                    println!("i-invariance MISMATCH (standing hypothesis falsified):");
                    for m in &inv.mismatches {
                        println!("  {m}");
                    }
                }
            }
            Ok(())
        }
        Command::Ranks {
            file,
            family,
            i,
            kmax,
            k,
            json,
            engine,
        } => {
            let (sys, sp) = load(&file)?;
            cmd_ranks(&sys, &sp, family, i, kmax, k, json, engine.engine())
        }
        Command::Membership {
            file,
            ord_f,
            degree,
            json,
            engine,
        } => {
            let (sys, sp) = load(&file)?;
            let opts = AnalyzeOptions {
                kmax: None,
                i: None,
                engine: Some(engine.engine()),
            };
            let report = difference_index(&sys, &sp, opts)?;
            let mb = membership_bounds(&sys, &report, ord_f, degree, None);
            if json {
                println!("{}", serde_json::to_string_pretty(&mb).unwrap());
            } else {
                println!(
                    "analysis: omega = {}, rho = {}, e = {}, n = {}",
                    report.omega, report.rho, report.e, report.n
                );
                println!("degree cap D = {}", mb.degree_cap);
                match &mb.primary {
                    Some(part) => {
                        println!("hypothesis omega + max(0, ord_f - e + 1) >= rho: met");
                        print_bound("index bound", part);
                    }
                    None => println!(
                        "hypothesis omega + max(0, ord_f - e + 1) >= rho UNMET; only the \
                         fallback applies"
                    ),
                }
                print_bound("fallback bound", &mb.fallback);
            }
            Ok(())
        }
        Command::LemmaLab {
            kind,
            t,
            p,
            q,
            trials,
            seed,
            json,
        } => {
            let kind = match kind {
                Kind::M => FamilyKind::M,
                Kind::N => FamilyKind::N,
            };
            let report = lemma_lab(kind, t, p, q, trials, seed, None)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!(
                    "family {:?}: t = {t}, p = {p}, q = {q}; onset bound = {}, kmax = {}",
                    report.kind, report.bound, report.kmax
                );
                println!("trials = {trials}, seed = {seed}");
                let hist = report
                    .onset_histogram
                    .iter()
                    .map(|(o, c)| format!("{o}:{c}"))
                    .collect::<Vec<_>>()
                    .join("  ");
                println!("onset histogram: {hist}");
                println!("all onsets within the bound");
            }
            Ok(())
        }
        Command::Oracle { file, op } => {
            let (sys, _sp) = load(&file)?;
            cmd_oracle(&sys, op)
        }
        Command::Example { out } => {
            fs::write(&out, EXAMPLE_SYSTEM_JSON).map_err(|e| Error::Io(format!("{out}: {e}")))?;
            println!("wrote {out}");
            Ok(())
        }
    }
}

fn seq(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_report(sys: &SystemSpec, rep: &IndexReport) {
    let field = if sys.field.nvars() == 0 {
        "Q".to_string()
    } else {
        format!("Q({})", sys.field.generators().join(", "))
    };
    println!(
        "system: n = {}, r = {}, e = {}, coefficients in {field}",
        rep.n, rep.r, rep.e
    );
    println!("engine: {}", rep.engine);
    println!();
    println!(
        "rank(J_k), k = 1..{}:      {}",
        rep.settings.kmax_psi,
        seq(&rep.ranks_jk)
    );
    println!(
        "psi(k),    k = 0..{}:      {}",
        rep.settings.kmax_psi,
        seq(&rep.psi)
    );
    println!(
        "dimension polynomial: psi(k) = {} for k >= rho = {}   (d = {}, s = {})",
        affine_str(rep.d as i64, rep.s),
        rep.rho,
        rep.d,
        rep.s
    );
    println!(
        "rank growth:          rank(J_k) = {} for k >= rho",
        affine_str(rep.n as i64 - rep.d as i64, (rep.e * rep.n) as i64 - rep.s)
    );
    println!();
    println!(
        "rank(J_(k,{})), k = 1..{}: {}",
        rep.settings.i,
        rep.settings.kmax_mu,
        seq(&rep.ranks_jki)
    );
    println!(
        "mu(k),     k = 0..{}:      {}",
        rep.settings.kmax_mu,
        seq(&rep.mu)
    );
    println!(
        "mu law: mu(k) = {} for k >= omega = {}   (slope d+r-n = {}, a = {})",
        affine_str(rep.d as i64 + rep.r as i64 - rep.n as i64, rep.a),
        rep.omega,
        rep.d as i64 + rep.r as i64 - rep.n as i64,
        rep.a
    );
    println!();
    println!("difference index omega = {}", rep.omega);
    println!("sigma-dimension        = {}", rep.sigma_dim);
    println!("order                  = {}", rep.ord_p);
    println!("regularity bound      <= {}", rep.regularity_bound);
    println!();
    println!("warnings:");
    for w in &rep.warnings {
        println!("  - {w}");
    }
}

fn print_bound(label: &str, part: &BoundPart) {
    let exact = match &part.degree_bound_exact {
        Some(s) if s.len() <= 80 => format!(" = {s}"),
        Some(s) => format!(" = {}... ({} digits)", &s[..20], s.len()),
        None => String::new(),
    };
    println!(
        "{label}: N = {}, degree exponent m = {}, degree bound {}{exact}",
        part.n_order, part.degree_exponent, part.degree_bound_symbolic
    );
}

#[allow(clippy::too_many_arguments)]
fn cmd_ranks(
    sys: &SystemSpec,
    sp: &Specialization,
    family: Family,
    i: Option<usize>,
    kmax: Option<usize>,
    dump_k: Option<usize>,
    json: bool,
    engine: RankEngine,
) -> Result<(), Error> {
    let (n, r, e) = (sys.n(), sys.r(), sys.e);
    let i = i.unwrap_or(e - 1);
    let kmax = kmax.unwrap_or_else(|| match family {
        Family::Jk => e * (r.min(n) + 1) + 2,
        Family::Jki => e * (r.min(n) + 2) + 2,
    });
    let build = |k: usize| -> Result<SymbolicMatrix, Error> {
        match family {
            Family::Jk if k == 0 => Err(Error::InvalidSystem(
                "the Jacobian chain starts at k = 1".into(),
            )),
            Family::Jk => Ok(build_jk(sys, k)),
            Family::Jki => build_jki(sys, k, i),
        }
    };
    let name = match family {
        Family::Jk => "J_k".to_string(),
        Family::Jki => format!("J_(k,{i})"),
    };
    let mut ev = Evaluator::new(sys, sp)?;
    let mut ranks = Vec::new();
    for k in 1..=kmax {
        let m = ev.eval_matrix(&build(k)?);
        let rank = match engine {
            RankEngine::Exact => rank_exact(&m),
            RankEngine::Probabilistic { seed, trials } => {
                rank_probabilistic(&m, &sp.target, seed ^ k as u64, trials)?
            }
        };
        ranks.push(rank);
    }
    if let Some(k) = dump_k {
        let m = build(k)?;
        let evaluated = ev.eval_matrix(&m);
        let rank = rank_exact(&evaluated);
        if json {
            let entries: Vec<Vec<String>> = (0..m.rows)
                .map(|row| {
                    (0..m.cols)
                        .map(|col| {
                            m.at(row, col)
                                .display(&sys.var_names, sys.field.generators())
                        })
                        .collect()
                })
                .collect();
            let doc = serde_json::json!({
                "family": name,
                "k": k,
                "i": match family { Family::Jk => None, Family::Jki => Some(i) },
                "rows": m.rows,
                "cols": m.cols,
                "entries": entries,
                "rank": rank,
                "ranks": ranks,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        } else {
            println!("{name} at k = {k}: {} x {}", m.rows, m.cols);
            println!("{}", m.display_grid(&sys.var_names, sys.field.generators()));
            println!("rank through the specialization: {rank}");
        }
        return Ok(());
    }
    if json {
        let doc = serde_json::json!({
            "family": name,
            "i": match family { Family::Jk => None, Family::Jki => Some(i) },
            "kmax": kmax,
            "ranks": ranks,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("rank({name}) for k = 1..{kmax}: {}", seq(&ranks));
    }
    Ok(())
}

fn cmd_oracle(sys: &SystemSpec, op: OracleOp) -> Result<(), Error> {
    let limits_with = |force: bool| {
        let mut limits = OracleLimits::from_env();
        limits.force = force;
        limits
    };
    match op {
        OracleOp::Elim { i, h, force, json } => {
            let t = truncated_ideal(sys, h)?;
            let basis = eliminate(&t, i, &limits_with(force))?;
            let names: Vec<String> = (0..=i)
                .flat_map(|l| {
                    sys.var_names.iter().map(move |v| {
                        if l == 0 {
                            v.clone()
                        } else {
                            format!("{v}@{l}")
                        }
                    })
                })
                .collect();
            let shown: Vec<String> = basis.iter().map(|p| p.display(&names)).collect();
            if json {
                let doc = serde_json::json!({ "h": h, "i": i, "basis": shown });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!(
                    "reduced basis of the order-<={i} part of truncation level {h} \
                     ({} elements):",
                    shown.len()
                );
                for s in &shown {
                    println!("  {s}");
                }
            }
            Ok(())
        }
        OracleOp::Scan {
            i,
            hmax,
            force,
            json,
        } => {
            let h = stabilization_scan(sys, i, hmax, &limits_with(force))?;
            if json {
                let doc = serde_json::json!({ "i": i, "h": h });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("elimination ideal at retain level {i} stabilizes at h = {h}");
            }
            Ok(())
        }
        OracleOp::Member {
            poly,
            h,
            force,
            json,
        } => {
            let f = parse_equation(&poly, &sys.var_names, sys.field.generators())?;
            let t = truncated_ideal(sys, h)?;
            let max_order = t.nvars / t.n - 1;
            if f.max_order() > max_order {
                return Err(Error::InvalidSystem(format!(
                    "polynomial has order {}, above the truncation ring's maximum {max_order}",
                    f.max_order()
                )));
            }
            let fo = to_oracle_poly(&f, sys.n(), max_order)?;
            let member = membership_test(&fo, &t, &limits_with(force))?;
            if json {
                let doc = serde_json::json!({ "h": h, "poly": poly, "member": member });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!(
                    "{poly} is {}a member of truncation level {h}",
                    if member { "" } else { "NOT " }
                );
            }
            Ok(())
        }
        OracleOp::Trdeg { k, force, json } => {
            let t = truncated_ideal(sys, k)?;
            let trdeg = trdeg_oracle(&t, &limits_with(force))?;
            if json {
                let doc = serde_json::json!({ "k": k, "trdeg": trdeg });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("trdeg of the residue field of truncation level {k} = {trdeg}");
            }
            Ok(())
        }
    }
}
