//! `hecke` command-line surface. Exit codes: 0 pass, 1 check failure,
//! 2 usage error, 3 internal cap exceeded.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hecke_core::bisets::label_orbits;
use hecke_core::cosets::{decompose, DEFAULT_CAP};
use hecke_core::hecke_ring::{shimura_product_with_cap, DoubleCoset};
use hecke_core::modsym::{eigen_data, ModularSymbols};
use hecke_core::oracle::{ap_oracle, Curve};
use hecke_core::report::Report;
use hecke_core::suites::{self, SuiteConfig};
use hecke_core::{CongruenceSubgroup, Error, GroupElement};
use serde::Serialize;
use serde_json::json;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Exact Hecke rings, coset decompositions and modular symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct GroupArgs {
    /// Γ₀(N)
    #[arg(long, value_name = "N")]
    gamma0: Option<u64>,
    /// SL₂(Z)
    #[arg(long)]
    sl2z: bool,
}

impl GroupArgs {
    fn group(&self) -> hecke_core::Result<CongruenceSubgroup> {
        match self.gamma0 {
            Some(n) if n >= 1 => CongruenceSubgroup::gamma0(n),
            Some(_) => Err(Error::Unsupported("level must be positive".into())),
            None => Ok(CongruenceSubgroup::sl2z()),
        }
    }

    fn level(&self) -> hecke_core::Result<u64> {
        Ok(self.group()?.level())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Right-coset decomposition ΓaΓ = ⊔ a_i·Γ
    Decompose {
        #[command(flatten)]
        group: GroupArgs,
        /// Integral matrix "a,b;c,d"
        #[arg(long, allow_hyphen_values = true)]
        matrix: GroupElement,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Shimura product [ΓaΓ]·[ΓbΓ] with its witness
    Product {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: GroupElement,
        #[arg(long, allow_hyphen_values = true)]
        b: GroupElement,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        no_witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Hecke operator on weight-2 modular symbols
    HeckeMatrix {
        #[command(flatten)]
        group: GroupArgs,
        /// T_p = [Γ·diag(1, p)·Γ]
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        p: Option<i64>,
        /// Any integral representative
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<GroupElement>,
        #[arg(long)]
        cuspidal: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Cuspidal characteristic polynomials and integer eigenvalues of T_p
    Eigs {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,13")]
        p_list: Vec<i64>,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Seeded verification suites
    Verify {
        /// all, or one of: bieq, cocycle, commute, eigs, heckemod, ring-hom, shimura-witness, unitary
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<GroupElement>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<GroupElement>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Failure of a command, carrying its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Inconsistent(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let started = Instant::now();
    let code = match command {
        Command::Decompose { group, matrix, cap, json } => {
            let g = group.group()?;
            let dec = decompose(&g, &matrix, cap)?;
            if json {
                let mut v = serde_json::to_value(&dec).map_err(|e| usage(e.to_string()))?;
                v["schema"] = json!(1);
                v["group"] = json!(g.spec());
                write_json(out, &v)?;
            } else {
                writeln!(out, "{g}: Γ·{matrix}·Γ has degree {}", dec.degree())?;
                for (i, (r, d)) in dec.reps().iter().zip(dec.deltas()).enumerate() {
                    writeln!(out, "  a_{i} = {r}    delta_{i} = {d}")?;
                }
            }
            EXIT_PASS
        }
        Command::Product {
            group,
            a,
            b,
            cap,
            no_witness,
            json,
        } => {
            let g = group.group()?;
            let (ca, cb) = (DoubleCoset::with_cap(&g, &a, cap)?, DoubleCoset::with_cap(&g, &b, cap)?);
            let (prod, w) = shimura_product_with_cap(&ca, &cb, cap)?;
            if json {
                let mut v = json!({"schema": 1, "group": g.spec(), "terms": prod});
                if !no_witness {
                    v["witness"] = serde_json::to_value(&w).map_err(|e| usage(e.to_string()))?;
                }
                write_json(out, &v)?;
            } else {
                writeln!(out, "{g}: [{a}] * [{b}] = {prod}")?;
                if !no_witness {
                    writeln!(out, "  |I| = {}, |J| = {}", w.left.degree(), w.right.degree())?;
                    for o in &w.orbits {
                        writeln!(out, "  {}: z = {}, m = {}, d = {}, pairs {:?}", o.coset.label(), o.z, o.m, o.d(), o.pairs)?;
                    }
                    let sizes: Vec<usize> = label_orbits(&w)?.iter().map(|o| o.len()).collect();
                    writeln!(out, "  orbit sizes of Γ on I×J: {sizes:?}")?;
                }
            }
            EXIT_PASS
        }
        Command::HeckeMatrix {
            group,
            p,
            matrix,
            cuspidal,
            json,
            csv,
        } => {
            let space = ModularSymbols::new(group.level()?)?;
            let a = match (p, matrix) {
                (Some(p), _) if p >= 1 => GroupElement::diag(1, p)?,
                (Some(p), _) => return Err(usage(format!("--p must be positive, got {p}"))),
                (None, Some(m)) => m,
                (None, None) => return Err(usage("one of --p or --matrix is required")),
            };
            let coset = DoubleCoset::new(&space.group, &a)?;
            let mut t = space.hecke_matrix(coset.decomposition())?;
            if cuspidal {
                t = space.restrict_cuspidal(&t)?;
            }
            let data = eigen_data(&t);
            if json {
                write_json(
                    out,
                    &json!({
                        "schema": 1,
                        "level": space.level(),
                        "operator": t.label,
                        "cuspidal": t.cuspidal,
                        "dim": t.matrix.len(),
                        "matrix": t.matrix.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "charpoly": data.charpoly.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "eigenvalues": data.eigenvalues,
                    }),
                )?;
            } else if csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &t.matrix {
                    w.write_record(row.iter().map(ToString::to_string))?;
                }
                out.write_all(&w.into_inner().map_err(|e| usage(e.to_string()))?)?;
            } else {
                let space_name = if cuspidal { "cuspidal subspace" } else { "full space" };
                writeln!(out, "T = [Γ·{a}·Γ] on the {space_name} of Γ0({}), dim {}", space.level(), t.matrix.len())?;
                for row in &t.matrix {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
                    writeln!(out, "  [{}]", cells.join(" "))?;
                }
                writeln!(out, "charpoly (c0..cn): {:?}", data.charpoly.iter().map(ToString::to_string).collect::<Vec<_>>())?;
            }
            EXIT_PASS
        }
        Command::Eigs { group, p_list, json, csv } => {
            let space = ModularSymbols::new(group.level()?)?;
            let n = space.level();
            let mut rows = Vec::new();
            for &p in &p_list {
                if p < 2 || n % p as u64 == 0 {
                    return Err(usage(format!("p = {p} must be at least 2 and prime to the level {n}")));
                }
                let t = space.restrict_cuspidal(&space.t_p(p)?)?;
                let data = eigen_data(&t);
                // Point counts on the conductor-11 curve are the only oracle we carry.
                let oracle = if n == 11 { ap_oracle(&Curve::C11A1, p as u64).ok() } else { None };
                rows.push((p, data, oracle));
            }
            if json {
                let ops: Vec<_> = rows
                    .iter()
                    .map(|(p, d, o)| json!({"p": p, "charpoly": d.charpoly.iter().map(ToString::to_string).collect::<Vec<_>>(), "eigenvalues": d.eigenvalues, "oracle": o}))
                    .collect();
                write_json(
                    out,
                    &json!({"schema": 1, "level": n, "dim": space.dim(), "cuspidal_dim": space.cuspidal_dim(), "operators": ops}),
                )?;
            } else if csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["p", "charpoly", "eigenvalues", "oracle"])?;
                for (p, d, o) in &rows {
                    let cp: Vec<String> = d.charpoly.iter().map(ToString::to_string).collect();
                    let ev: Vec<String> = d.eigenvalues.iter().map(|(r, k)| format!("{r}^{k}")).collect();
                    w.write_record([p.to_string(), cp.join(" "), ev.join(" "), o.map(|x| x.to_string()).unwrap_or_default()])?;
                }
                out.write_all(&w.into_inner().map_err(|e| usage(e.to_string()))?)?;
            } else {
                writeln!(out, "Γ0({n}): dim {}, cuspidal dim {}", space.dim(), space.cuspidal_dim())?;
                writeln!(out, "{:>4}  {:<24} {:<16} {}", "p", "charpoly (c0..cn)", "eigenvalues", "p+1-#E(F_p)")?;
                for (p, d, o) in &rows {
                    let cp: Vec<String> = d.charpoly.iter().map(ToString::to_string).collect();
                    let ev: Vec<String> = d.eigenvalues.iter().map(|(r, k)| if *k == 1 { r.clone() } else { format!("{r} (x{k})") }).collect();
                    let o = o.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
                    writeln!(out, "{p:>4}  {:<24} {:<16} {o}", cp.join(" "), ev.join(", "))?;
                }
            }
            EXIT_PASS
        }
        Command::Verify {
            suite,
            group,
            a,
            b,
            seed,
            trials,
            json,
        } => {
            if suite != "all" && !suites::SUITES.contains(&suite.as_str()) {
                return Err(usage(format!("unknown suite {suite}; expected all or one of {}", suites::SUITES.join(", "))));
            }
            let mut cfg = SuiteConfig::new(group.group()?);
            if let Some(a) = a {
                cfg.a = a;
            }
            if let Some(b) = b {
                cfg.b = b;
            }
            cfg.seed = seed;
            cfg.trials = trials;
            let checks = suites::run(&suite, &cfg)?;
            let report = Report::new(suite, checks);
            if json {
                write_json(out, &report)?;
            } else {
                writeln!(out, "suite {} on {} (seed {seed}, {trials} trials)", report.suite, cfg.group)?;
                for c in &report.checks {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    writeln!(out, "  {status} {:<48} {:>5} trials, {} failed", c.check, c.trials, c.failed)?;
                    for f in &c.failures {
                        writeln!(out, "       {f}")?;
                    }
                }
                writeln!(out, "{}", if report.passed { "all checks passed" } else { "some checks FAILED" })?;
            }
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
    };
    let _ = writeln!(err, "elapsed: {} ms", started.elapsed().as_millis());
    Ok(code)
}
