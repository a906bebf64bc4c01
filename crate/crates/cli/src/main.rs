//! `lzb`: exact computation and verification on the command line.
//!
//! Subcommands mirror the library layers: `sym` for symmetric functions,
//! `char` for graded characters of level-zero Demazure submodules,
//! `verify` for identity checking, and `qrep` for the truncated module
//! models. Verification commands exit 0 when every case passes, 1 on any
//! mismatch, and 2 on usage errors. All output is deterministic: no
//! timestamps, stable term and case ordering.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lzb_core::afflattice::LevelZeroDominant;
use lzb_core::demchar::{
    compare_characters, gch_demazure_e, gch_demazure_txi, gch_mp, mp_sum, theta_char,
    verify_branching, verify_sum_decomposition, GradedCharacter,
};
use lzb_core::exactring::{LaurentQ, TPoint};
use lzb_core::qrep::{
    measure_constants, verify_embedding_structure, verify_lemma_expansions, verify_relations,
};
use lzb_core::report::Report;
use lzb_core::shapes::{is_horizontal_strip, Partition};
use lzb_core::suite::{full_matrix, run_matrix, SuiteCase};
use lzb_core::symfun::{
    lr_coefficient, macdonald_gl, macdonald_t0, psi_coefficient, schur, ExpMap, GLPolyQ,
};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "lzb",
    version,
    about = "Exact workbench for symmetric-function branching, graded characters \
             of level-zero Demazure submodules, and truncated quantum affine models"
)]
struct Cli {
    #[command(flatten)]
    flags: ConfigFlags,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Global knobs. Every value resolves as: command-line flag, else the
/// JSON file named by `LZB_CONFIG`, else the built-in default.
#[derive(Args, Debug)]
struct ConfigFlags {
    /// Truncation order for graded-character series (default 8)
    #[arg(long, global = true)]
    trunc: Option<i64>,
    /// Half-width of the energy window in the module models (default 3)
    #[arg(long, global = true)]
    kmax: Option<i32>,
    /// Upper bound on ranks included by bulk verification (default 3)
    #[arg(long, global = true)]
    rank_max: Option<usize>,
    /// Output format (default text)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for verification matrices; 1 means serial (default 1)
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    trunc: Option<i64>,
    kmax: Option<i32>,
    rank_max: Option<usize>,
    format: Option<String>,
    parallel: Option<usize>,
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct RunConfig {
    trunc: i64,
    kmax: i32,
    rank_max: usize,
    format: Format,
    parallel: usize,
    out: Option<PathBuf>,
}

fn resolve_config(flags: &ConfigFlags) -> Result<RunConfig, String> {
    let file = match std::env::var_os("LZB_CONFIG") {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| format!("cannot read LZB_CONFIG file {:?}: {}", path, e))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| format!("bad LZB_CONFIG file {:?}: {}", path, e))?
        }
        None => FileConfig::default(),
    };
    let format = match (flags.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("json")) => Format::Json,
        (None, Some("csv")) => Format::Csv,
        (None, Some("text")) => Format::Text,
        (None, Some(other)) => {
            return Err(format!(
                "bad format {:?} in LZB_CONFIG (want json, csv, or text)",
                other
            ))
        }
        (None, None) => Format::Text,
    };
    let cfg = RunConfig {
        trunc: flags.trunc.or(file.trunc).unwrap_or(8),
        kmax: flags.kmax.or(file.kmax).unwrap_or(3),
        rank_max: flags.rank_max.or(file.rank_max).unwrap_or(3),
        format,
        parallel: flags.parallel.or(file.parallel).unwrap_or(1),
        out: flags.out.clone().or(file.out),
    };
    if cfg.trunc < 1 {
        return Err("trunc must be at least 1".into());
    }
    if cfg.kmax < 1 {
        return Err("kmax must be at least 1".into());
    }
    if cfg.rank_max < 1 {
        return Err("rank-max must be at least 1".into());
    }
    if cfg.parallel < 1 {
        return Err("parallel must be at least 1".into());
    }
    Ok(cfg)
}

#[derive(Subcommand)]
enum Cmd {
    /// Symmetric function computations
    Sym {
        #[command(subcommand)]
        cmd: SymCmd,
    },
    /// Graded characters of level-zero Demazure submodules
    Char {
        #[command(subcommand)]
        cmd: CharCmd,
    },
    /// Identity verification: exit 0 on pass, 1 on any mismatch
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Checks on the truncated quantum affine module models
    Qrep {
        #[command(subcommand)]
        cmd: QrepCmd,
    },
}

#[derive(Subcommand)]
enum SymCmd {
    /// Schur polynomial of a shape
    Schur {
        /// Partition, for example 2,1
        #[arg(long)]
        shape: String,
        /// Number of variables
        #[arg(long)]
        vars: usize,
    },
    /// Macdonald polynomial expansion
    Macdonald {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        vars: usize,
        /// Specialize t = 0
        #[arg(long, conflicts_with_all = ["tq", "generic"])]
        t0: bool,
        /// Specialize t = q
        #[arg(long, conflicts_with = "generic")]
        tq: bool,
        /// Keep rational-function coefficients in (q, t); this is the default
        #[arg(long)]
        generic: bool,
    },
    /// Branching coefficient of a horizontal strip, as a rational
    /// function of (q, t)
    Psi {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
    },
    /// Littlewood-Richardson coefficient
    Lr {
        #[arg(long)]
        lam: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
}

#[derive(Subcommand)]
enum CharCmd {
    /// Graded character of the Demazure submodule at the identity, or at
    /// a translation when --xi is given
    Demazure {
        /// Finite rank
        #[arg(long)]
        n: usize,
        /// Dominant weight as a partition, for example 1,1
        #[arg(long)]
        lam: String,
        /// Coroot coordinates of a translation, for example 1,0,0
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
    /// One direct-sum piece of the identity Demazure submodule
    Mp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lam: String,
        /// Piece index
        #[arg(long)]
        p: i64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Strip pieces sum to the projected Demazure character
    Sum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lam: String,
        #[arg(long, hide = true)]
        perturb: bool,
    },
    /// Branching of m copies of one fundamental weight
    Branching {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        m: u64,
    },
    /// Macdonald expansions collapse to Schur polynomials at t = q
    MacdonaldSchur {
        /// Largest shape size
        #[arg(long, default_value_t = 5)]
        size: u64,
        /// Largest variable count
        #[arg(long, default_value_t = 3)]
        vars: usize,
    },
    /// The whole verification matrix
    All,
}

#[derive(Subcommand)]
enum QrepCmd {
    /// Defining relations on one tensor model
    Relations {
        /// Letters per column, that is n+1 for quantum affine sl(n+1)
        #[arg(long)]
        n1: usize,
        /// Fundamental indices of the tensor factors, for example 1,2
        #[arg(long)]
        factors: String,
    },
    /// Structural checks of the rank-raising embedding
    Structure {
        #[arg(long)]
        n: usize,
        /// Sign convention, +1 or -1
        #[arg(long, allow_hyphen_values = true)]
        eps: i8,
    },
    /// Closed-form divided-power expansions on fundamental tensors
    LemmaT {
        #[arg(long)]
        n: usize,
        /// Largest multiplicity
        #[arg(long, default_value_t = 3)]
        mmax: usize,
    },
    /// Transport-ratio constants of the embedding
    Constants {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        eps: i8,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve_config(&cli.flags) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {}", msg);
            return ExitCode::from(2);
        }
    };
    let mut sink: Box<dyn Write> = match &cfg.out {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {:?}: {}", path, e);
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::BufWriter::new(io::stdout())),
    };
    let outcome = run(&cfg, &cli.cmd, &mut sink);
    if let Err(e) = sink.flush() {
        eprintln!("error: {}", e);
        return ExitCode::from(2);
    }
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn run(cfg: &RunConfig, cmd: &Cmd, w: &mut dyn Write) -> Result<bool, String> {
    match cmd {
        Cmd::Sym { cmd } => run_sym(cfg, cmd, w),
        Cmd::Char { cmd } => run_char(cfg, cmd, w),
        Cmd::Verify { cmd } => run_verify(cfg, cmd, w),
        Cmd::Qrep { cmd } => run_qrep(cfg, cmd, w),
    }
}

// ---------------------------------------------------------------------------
// sym
// ---------------------------------------------------------------------------

fn run_sym(cfg: &RunConfig, cmd: &SymCmd, w: &mut dyn Write) -> Result<bool, String> {
    match cmd {
        SymCmd::Schur { shape, vars } => {
            let p = schur(&parse_partition(shape)?, *vars);
            emit_gl_poly(cfg, w, "schur", &json!({"shape": shape, "vars": vars}), &p)?;
        }
        SymCmd::Macdonald { shape, vars, t0, tq, generic: _ } => {
            let sh = parse_partition(shape)?;
            let head = json!({"shape": shape, "vars": vars});
            if *t0 {
                emit_gl_poly(cfg, w, "macdonald-t0", &head, &macdonald_t0(&sh, *vars))?;
            } else if *tq {
                let g = macdonald_gl(&sh, *vars);
                let mut p: GLPolyQ = ExpMap::zero(*vars);
                for (e, c) in g.terms() {
                    let v = c
                        .eval_t(TPoint::Q)
                        .map_err(|err| format!("t=q specialization failed: {}", err))?;
                    p.add_term(e.clone(), v);
                }
                emit_gl_poly(cfg, w, "macdonald-tq", &head, &p)?;
            } else {
                let g = macdonald_gl(&sh, *vars);
                match cfg.format {
                    Format::Text => {
                        write_line(w, &g.to_string())?;
                    }
                    Format::Json => {
                        let v = json!({
                            "op": "macdonald",
                            "input": head,
                            "poly": g.to_json(|f| f.to_json()),
                        });
                        write_line(w, &v.to_string())?;
                    }
                    Format::Csv => {
                        write_line(w, "monomial,coefficient")?;
                        for (e, c) in descending(&g) {
                            write_line(
                                w,
                                &format!(
                                    "{},{}",
                                    csv_escape(&monomial_string(e)),
                                    csv_escape(&c.to_string())
                                ),
                            )?;
                        }
                    }
                }
            }
        }
        SymCmd::Psi { outer, inner } => {
            let big = parse_partition(outer)?;
            let small = parse_partition(inner)?;
            if !is_horizontal_strip(&big, &small) {
                return Err(format!("{}/{} is not a horizontal strip", big, small));
            }
            let f = psi_coefficient(&big, &small);
            match cfg.format {
                Format::Text => write_line(w, &f.to_string())?,
                Format::Json => {
                    let v = json!({
                        "op": "psi",
                        "input": {"outer": outer, "inner": inner},
                        "num": f.num().to_json(),
                        "den": f.den().to_json(),
                    });
                    write_line(w, &v.to_string())?;
                }
                Format::Csv => {
                    write_line(w, "num,den")?;
                    write_line(
                        w,
                        &format!(
                            "{},{}",
                            csv_escape(&f.num().to_string()),
                            csv_escape(&f.den().to_string())
                        ),
                    )?;
                }
            }
        }
        SymCmd::Lr { lam, mu, nu } => {
            let c = lr_coefficient(
                &parse_partition(lam)?,
                &parse_partition(mu)?,
                &parse_partition(nu)?,
            );
            match cfg.format {
                Format::Text => write_line(w, &c.to_string())?,
                Format::Json => {
                    let v = json!({
                        "op": "lr",
                        "input": {"lam": lam, "mu": mu, "nu": nu},
                        "coefficient": c,
                    });
                    write_line(w, &v.to_string())?;
                }
                Format::Csv => {
                    write_line(w, "lam,mu,nu,coefficient")?;
                    write_line(
                        w,
                        &format!(
                            "{},{},{},{}",
                            csv_escape(lam),
                            csv_escape(mu),
                            csv_escape(nu),
                            c
                        ),
                    )?;
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// char
// ---------------------------------------------------------------------------

fn run_char(cfg: &RunConfig, cmd: &CharCmd, w: &mut dyn Write) -> Result<bool, String> {
    match cmd {
        CharCmd::Demazure { n, lam, xi } => {
            let lz = parse_dominant(*n, lam)?;
            let (op, ch) = match xi {
                Some(raw) => {
                    let coords = parse_ints(raw)?;
                    if coords.len() != *n {
                        return Err(format!(
                            "xi needs {} coroot coordinates, got {}",
                            n,
                            coords.len()
                        ));
                    }
                    ("demazure-txi", gch_demazure_txi(&lz, &coords, cfg.trunc))
                }
                None => ("demazure-e", gch_demazure_e(&lz, cfg.trunc)),
            };
            emit_character(cfg, w, op, &json!({"n": n, "lam": lam, "xi": xi}), &ch, true)?;
        }
        CharCmd::Mp { n, lam, p } => {
            let lz = parse_dominant(*n, lam)?;
            let (ch, out_of_range) = gch_mp(&lz, *p, cfg.trunc);
            emit_character(
                cfg,
                w,
                "mp",
                &json!({"n": n, "lam": lam, "p": p}),
                &ch,
                !out_of_range,
            )?;
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(cfg: &RunConfig, cmd: &VerifyCmd, w: &mut dyn Write) -> Result<bool, String> {
    match cmd {
        VerifyCmd::Sum { n, lam, perturb } => {
            let lz = parse_dominant(*n, lam)?;
            let report = if *perturb {
                let case = json!({
                    "op": "sum-decomposition",
                    "rank": n,
                    "multiplicities": lz.multiplicities(),
                    "trunc": cfg.trunc,
                    "perturbed": true,
                });
                let lhs = mp_sum(&lz, cfg.trunc).perturb();
                let rhs = theta_char(&gch_demazure_e(&lz, cfg.trunc));
                compare_characters(case, &lhs, &rhs)
            } else {
                verify_sum_decomposition(&lz, cfg.trunc)
            };
            let key = format!(
                "sum/rank{}/m{}/order{}",
                n,
                join_u64(lz.multiplicities()),
                cfg.trunc
            );
            emit_reports(cfg, w, &[(key, report)])
        }
        VerifyCmd::Branching { n, i, m } => {
            if !(1..=*n).contains(i) {
                return Err(format!("i must lie in 1..={}, got {}", n, i));
            }
            let report = verify_branching(*n, *i, *m, cfg.trunc);
            let key = format!("branching/n{}/i{}/m{}/order{}", n, i, m, cfg.trunc);
            emit_reports(cfg, w, &[(key, report)])
        }
        VerifyCmd::MacdonaldSchur { size, vars } => {
            let cases: Vec<SuiteCase> = (1..=*vars)
                .map(|nvars| SuiteCase::MacdonaldSchurCollapse { size: *size, nvars })
                .collect();
            let rows = run_cases(cfg, &cases)?;
            emit_reports(cfg, w, &rows)
        }
        VerifyCmd::All => {
            let mut cases = full_matrix(cfg.trunc, cfg.kmax);
            cases.retain(|c| within_rank(c, cfg.rank_max));
            let rows = run_cases(cfg, &cases)?;
            emit_reports(cfg, w, &rows)
        }
    }
}

/// Rank filter for the bulk matrix; the bound caps the finite rank every
/// case touches.
fn within_rank(case: &SuiteCase, bound: usize) -> bool {
    match case {
        SuiteCase::SumDecomposition { rank, .. } | SuiteCase::EdgePieces { rank, .. } => {
            *rank <= bound
        }
        SuiteCase::Branching { n, .. }
        | SuiteCase::DividedExpansions { n, .. }
        | SuiteCase::EmbeddingStructure { n, .. }
        | SuiteCase::ConstantsCoherence { n } => *n <= bound,
        SuiteCase::Relations { n1, .. } => n1.saturating_sub(1) <= bound,
        _ => true,
    }
}

fn run_cases(cfg: &RunConfig, cases: &[SuiteCase]) -> Result<Vec<(String, Report)>, String> {
    if cfg.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallel)
            .build()
            .map_err(|e| format!("cannot build worker pool: {}", e))?;
        Ok(pool.install(|| run_matrix(cases, true)))
    } else {
        Ok(run_matrix(cases, false))
    }
}

// ---------------------------------------------------------------------------
// qrep
// ---------------------------------------------------------------------------

fn run_qrep(cfg: &RunConfig, cmd: &QrepCmd, w: &mut dyn Write) -> Result<bool, String> {
    match cmd {
        QrepCmd::Relations { n1, factors } => {
            let f: Vec<usize> = parse_ints(factors)?
                .into_iter()
                .map(|x| {
                    usize::try_from(x).map_err(|_| format!("bad factor index {}", x))
                })
                .collect::<Result<_, _>>()?;
            if *n1 < 2 {
                return Err("n1 must be at least 2".into());
            }
            if f.iter().any(|&i| i == 0 || i >= *n1) {
                return Err(format!("factor indices must lie in 1..={}", n1 - 1));
            }
            let report = verify_relations(*n1, &f, cfg.kmax);
            let key = format!("relations/n1_{}/f{}/K{}", n1, join_usize(&f), cfg.kmax);
            emit_reports(cfg, w, &[(key, report)])
        }
        QrepCmd::Structure { n, eps } => {
            check_eps(*eps)?;
            let report = verify_embedding_structure(*n, *eps, cfg.kmax);
            let key = format!("structure/n{}/eps{:+}/K{}", n, eps, cfg.kmax);
            emit_reports(cfg, w, &[(key, report)])
        }
        QrepCmd::LemmaT { n, mmax } => {
            let report = verify_lemma_expansions(*n, *mmax, cfg.kmax);
            let key = format!("expansions/n{}/m{}/K{}", n, mmax, cfg.kmax);
            emit_reports(cfg, w, &[(key, report)])
        }
        QrepCmd::Constants { n, eps } => {
            check_eps(*eps)?;
            match measure_constants(*n, *eps, cfg.kmax) {
                Ok(c) => {
                    match cfg.format {
                        Format::Csv => {
                            write_line(w, "constant,index,value")?;
                            for (i, v) in &c.a {
                                write_line(w, &format!("a,{},{}", i, v))?;
                            }
                            for (i, v) in &c.b {
                                write_line(w, &format!("b,{},{}", i, v))?;
                            }
                        }
                        Format::Text | Format::Json => {
                            write_line(w, &json!({"a": c.a, "b": c.b}).to_string())?;
                        }
                    }
                    Ok(true)
                }
                Err(e) => {
                    write_line(w, &json!({"error": e.to_string()}).to_string())?;
                    Ok(false)
                }
            }
        }
    }
}

fn check_eps(eps: i8) -> Result<(), String> {
    if eps == 1 || eps == -1 {
        Ok(())
    } else {
        Err(format!("eps must be +1 or -1, got {}", eps))
    }
}

// ---------------------------------------------------------------------------
// parsing and emission helpers
// ---------------------------------------------------------------------------

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>()
}

fn parse_dominant(n: usize, lam: &str) -> Result<LevelZeroDominant, String> {
    let p = parse_partition(lam)?;
    if p.len() > n {
        return Err(format!("partition {} has more than {} parts", p, n));
    }
    Ok(LevelZeroDominant::from_partition(n, &p))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    let inner = s.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad integer {:?}", tok))
        })
        .collect()
}

fn join_u64(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn write_line(w: &mut dyn Write, s: &str) -> Result<(), String> {
    writeln!(w, "{}", s).map_err(|e| format!("write failed: {}", e))
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Terms of a polynomial in descending lexicographic exponent order, the
/// order the text rendering uses.
fn descending<C: lzb_core::symfun::CoeffRing>(p: &ExpMap<C>) -> Vec<(&Vec<i64>, &C)> {
    let mut rows: Vec<(&Vec<i64>, &C)> = p.terms().collect();
    rows.sort_by(|a, b| b.0.cmp(a.0));
    rows
}

fn monomial_string(exps: &[i64]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn emit_gl_poly(
    cfg: &RunConfig,
    w: &mut dyn Write,
    op: &str,
    input: &serde_json::Value,
    p: &GLPolyQ,
) -> Result<(), String> {
    match cfg.format {
        Format::Text => write_line(w, &p.to_string()),
        Format::Json => {
            let v = json!({
                "op": op,
                "input": input,
                "poly": p.to_json(|c: &LaurentQ| c.to_json()),
            });
            write_line(w, &v.to_string())
        }
        Format::Csv => {
            write_line(w, "monomial,coefficient")?;
            for (e, c) in descending(p) {
                write_line(
                    w,
                    &format!(
                        "{},{}",
                        csv_escape(&monomial_string(e)),
                        csv_escape(&c.to_string())
                    ),
                )?;
            }
            Ok(())
        }
    }
}

fn emit_character(
    cfg: &RunConfig,
    w: &mut dyn Write,
    op: &str,
    input: &serde_json::Value,
    ch: &GradedCharacter,
    in_range: bool,
) -> Result<(), String> {
    match cfg.format {
        Format::Text => {
            if !in_range {
                write_line(w, "0 (piece index outside the decomposition)")?;
                return Ok(());
            }
            write_line(w, &ch.to_string())
        }
        Format::Json => {
            let v = json!({
                "op": op,
                "input": input,
                "in_range": in_range,
                "character": ch.to_json(),
            });
            write_line(w, &v.to_string())
        }
        Format::Csv => {
            write_line(w, "class,series")?;
            for (e, s) in ch.body().terms() {
                let class = e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                write_line(
                    w,
                    &format!("{},{}", csv_escape(&class), csv_escape(&s.to_string())),
                )?;
            }
            Ok(())
        }
    }
}

/// Write verification reports in the configured format and say whether
/// every case passed. JSON is one object per line; CSV is case keys then
/// status; text is one labeled line per case plus a summary.
fn emit_reports(
    cfg: &RunConfig,
    w: &mut dyn Write,
    rows: &[(String, Report)],
) -> Result<bool, String> {
    match cfg.format {
        Format::Json => {
            for (key, report) in rows {
                let line = json!({"key": key, "report": report.to_json()});
                write_line(w, &line.to_string())?;
            }
        }
        Format::Csv => {
            write_line(w, "case,status")?;
            for (key, report) in rows {
                write_line(w, &format!("{},{}", csv_escape(key), report.status))?;
            }
        }
        Format::Text => {
            let mut passed = 0usize;
            for (key, report) in rows {
                if report.is_pass() {
                    passed += 1;
                    let detail = if report.details.is_empty() {
                        String::new()
                    } else {
                        format!("  ({})", report.details.join("; "))
                    };
                    write_line(w, &format!("PASS  {}{}", key, detail))?;
                } else {
                    let mismatch = report
                        .first_mismatch
                        .as_ref()
                        .map(|m| m.to_string())
                        .unwrap_or_default();
                    write_line(w, &format!("FAIL  {}  {}", key, mismatch))?;
                }
            }
            write_line(w, &format!("{} of {} cases passed", passed, rows.len()))?;
        }
    }
    Ok(rows.iter().all(|(_, r)| r.is_pass()))
}
