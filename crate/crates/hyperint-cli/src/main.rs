use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperint::congruence::{
    criterion_full, formal_congruence_check, g_weight, twisted_expansion_verify, CertReport, CongruenceGrid, CriterionVerdict,
    MemoSequence, ResidueFrame, TwistedExpansionReport,
};
use hyperint::constants::{c_prime, constant_sheet, numerator_condition};
use hyperint::exact::{fmt_rational, parse_rational, ser_rational};
use hyperint::series::{
    dieudonne_dwork_check, exp_s_root, f_series, g_series, mirror_map, pochhammer_ratio, q_coordinate, s_series,
};
use hyperint::{Error, ParamPair, Rational, TruncatedSeries};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_NOT_APPLICABLE: u8 = 2;
const EXIT_USAGE: u8 = 64;

const MAX_ORDER: usize = 2000;
const MAX_GRID_POINTS: usize = 200_000;
const MAX_WINDOW: u64 = 4096;
const MAX_K: u64 = 500;
const MAX_M: u64 = 100;
const MAX_R: u32 = 8;
const MAX_DEPTH: u32 = 12;

/// Integrality certification for generalized hypergeometric series and their
/// canonical coordinates, in exact arithmetic.
///
/// Set HYPERINT_THREADS to bound the worker pool.
#[derive(Parser)]
#[command(name = "hyperint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Top parameters, e.g. 1/5,2/5,3/5,4/5.
    #[arg(short = 'a', long = "alpha", allow_hyphen_values = true)]
    alpha: String,
    /// Bottom parameters, e.g. 1,1,1,1.
    #[arg(short = 'b', long = "beta", allow_hyphen_values = true)]
    beta: String,
}

impl PairArgs {
    /// Any rejected parameter is an input error, whatever the library calls it.
    fn pair(&self) -> Result<ParamPair, Error> {
        ParamPair::parse(&self.alpha, &self.beta).map_err(|e| match e {
            Error::Domain(msg) => Error::Parameter(msg),
            other => other,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
    /// q(Cz)/(Cz)
    #[value(name = "q")]
    Q,
    /// z(Cq)/(Cq), the inverse of the canonical coordinate
    #[value(name = "z")]
    Z,
    #[value(name = "S")]
    S,
    /// exp(S(Cz)/root)
    #[value(name = "expS")]
    ExpS,
}

#[derive(Clone, Copy, ValueEnum)]
enum Congruence {
    /// Frobenius-twisted expansion on the residue frame Ω_b
    #[value(alias = "theorem2")]
    Twisted,
    /// Formal congruences of the windowed sums S_r
    #[value(alias = "dwork51")]
    Windowed,
    /// Dieudonné–Dwork: F(z^p)/F(z)^p ∈ 1 + pzZ_p[[z]]
    Dd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    /// g_r(m) = A_r(m)
    Sequence,
    /// g_r(m) = p^{μ_r(m)} from the Dwork-map thresholds
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full criterion (exit 0 holds, 1 fails, 2 not applicable).
    Check {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 60)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print exact coefficients of a series.
    Series {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "F")]
        what: What,
        /// `auto` (= C') or an exact rational.
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        scale: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Take the v-th root (series with constant term 1 only).
        #[arg(long)]
        root: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Check a congruence family (exit 0 iff every assertion holds).
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        congruence: Congruence,
        #[arg(short = 'p', long)]
        prime: u64,
        /// Residue b of Ω_b (twisted, windowed).
        #[arg(long, default_value_t = 1)]
        residue: u64,
        /// Element t of Ω_b defining the sequences (windowed); default: least.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, default_value_t = 60)]
        order: usize,
        /// Congruence depth in t (twisted).
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, default_value_t = 30)]
        k_max: u64,
        #[arg(long, default_value_t = 2)]
        s_max: u32,
        #[arg(long, default_value_t = 8)]
        m_max: u64,
        #[arg(long, default_value_t = 0)]
        r_max: u32,
        #[arg(long, value_enum, default_value = "sequence")]
        weight: Weight,
        /// Add 1 to A_r(N) for every r (windowed sensitivity check).
        #[arg(long)]
        perturb: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Print d, λ_p, C₀, C', 𝔪, 𝔫, 𝔫' and the numerator condition.
    Constants {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct SeriesOutput {
    alpha: Vec<String>,
    beta: Vec<String>,
    what: &'static str,
    #[serde(serialize_with = "ser_rational")]
    scale: Rational,
    root: Option<u64>,
    order: usize,
    coefficients: Vec<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum VerifyOutput {
    Twisted(Box<TwistedExpansionReport>),
    Windowed(hyperint::congruence::CongruenceReport),
    Dd(hyperint::series::DieudonneDworkVerdict),
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Domain(_) => EXIT_NOT_APPLICABLE,
        _ => EXIT_USAGE,
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(pair: &ParamPair, order: usize, json: bool) -> Result<u8, Error> {
    if order > MAX_ORDER {
        return Err(usage(format!("--order is capped at {MAX_ORDER}")));
    }
    let report = criterion_full(pair, order)?;
    let code = match report.verdicts.criterion {
        CriterionVerdict::Holds => EXIT_OK,
        CriterionVerdict::Fails => EXIT_FAIL,
        CriterionVerdict::NotApplicable => EXIT_NOT_APPLICABLE,
    };
    if json {
        print_json(&report);
    } else {
        print_report(pair, &report);
    }
    Ok(code)
}

fn print_report(pair: &ParamPair, report: &CertReport) {
    let v = &report.verdicts;
    println!("pair        {}", pair.describe());
    println!("N-integral  {}", yes(v.n_integral));
    if let Some(w) = &report.ni_witness {
        println!("  witness   {:?}", w.witness);
    }
    println!("r = s       {}", yes(v.r_equals_s));
    println!("H           {}", yes(v.h_holds));
    if let Some(w) = &report.h_witness {
        println!("  witness   {:?}", w.witness);
    }
    if v.q_identity_failures.is_empty() {
        println!("q = q_a     all a (crosscheck {})", yes(v.q_identity_crosscheck));
    } else {
        println!("q = q_a     fails for a in {:?}", v.q_identity_failures);
    }
    let verdict = match v.criterion {
        CriterionVerdict::Holds => "holds",
        CriterionVerdict::Fails => "fails",
        CriterionVerdict::NotApplicable => "not applicable (F is not N-integral)",
    };
    println!("criterion   {verdict}");
    if let Some(c) = &report.constants {
        println!("C'          {}", fmt_rational(&c.c_prime));
    }
    if let Some(q) = &v.q_integral {
        println!("q(C'z)      integral to order {}: {}", q.order, yes(q.integral));
    }
    if let Some(s) = &v.exp_s_root_integral {
        println!("exp(S/𝔫)    integral to order {}: {}", s.order, yes(s.integral));
    }
    if let Some(pos) = v.q_positive {
        println!("q positive  to order {}: {}", v.positivity_order, yes(pos));
    }
    if let Some(il) = v.interlacing {
        println!("interlacing {}", yes(il));
    }
    if v.criterion == CriterionVerdict::Holds {
        if pair.r() == 1 && !v.two_ones_in_beta {
            println!("structure   special case α = (1/2), β = (1)");
        } else {
            println!("structure   s ≥ 2 with two 1's in ⟨β⟩: {}", yes(v.structure_ok));
        }
    }
    if !report.q_prefix.is_empty() {
        println!("q prefix    {}", report.q_prefix.join(", "));
    }
    println!("elapsed     {} ms", report.elapsed_ms);
}

fn resolve_scale(pair: &ParamPair, scale: &str) -> Result<Rational, Error> {
    if scale == "auto" {
        c_prime(pair)
    } else {
        parse_rational(scale)
    }
}

fn series(
    pair: &ParamPair,
    what: What,
    scale: &str,
    order: usize,
    root: Option<u64>,
    json: bool,
) -> Result<u8, Error> {
    if order > MAX_ORDER {
        return Err(usage(format!("--order is capped at {MAX_ORDER}")));
    }
    let c = resolve_scale(pair, scale)?;
    let (name, s): (&'static str, TruncatedSeries) = match what {
        What::F => ("F", f_series(pair, &c, order)),
        What::G => ("G", g_series(pair, &c, order)),
        What::Q => ("q", q_coordinate(pair, &c, order)),
        What::Z => ("z", mirror_map(pair, &c, order)),
        What::S => ("S", s_series(pair, &c, order)?),
        What::ExpS => ("expS", exp_s_root(pair, &c, order, root.unwrap_or(1))?),
    };
    let s = match (what, root) {
        (What::ExpS, _) | (_, None) => s,
        (_, Some(v)) => s.root(v)?,
    };
    let out = SeriesOutput {
        alpha: pair.alpha().iter().map(fmt_rational).collect(),
        beta: pair.beta().iter().map(fmt_rational).collect(),
        what: name,
        scale: c,
        root,
        order,
        coefficients: s.to_strings(),
    };
    if json {
        print_json(&out);
    } else {
        for c in &out.coefficients {
            println!("{c}");
        }
    }
    Ok(EXIT_OK)
}

struct DworkOptions {
    residue: u64,
    t: Option<u64>,
    weight: Weight,
    perturb: Option<u64>,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    pair: &ParamPair,
    congruence: Congruence,
    p: u64,
    order: usize,
    depth: u32,
    grid: CongruenceGrid,
    dwork: DworkOptions,
    json: bool,
) -> Result<u8, Error> {
    if order > MAX_ORDER {
        return Err(usage(format!("--order is capped at {MAX_ORDER}")));
    }
    let (holds, out) = match congruence {
        Congruence::Twisted => {
            if depth > MAX_DEPTH {
                return Err(usage(format!("--depth is capped at {MAX_DEPTH}")));
            }
            let report = twisted_expansion_verify(pair, p, dwork.residue, None, order, depth)?;
            (report.holds, VerifyOutput::Twisted(Box::new(report)))
        }
        Congruence::Windowed => {
            let report = windowed_sums(pair, p, grid, &dwork)?;
            (report.holds, VerifyOutput::Windowed(report))
        }
        Congruence::Dd => {
            let verdict = dieudonne_dwork_check(pair, &c_prime(pair)?, p, order)?;
            (verdict.holds, VerifyOutput::Dd(verdict))
        }
    };
    if json {
        print_json(&out);
    } else {
        match &out {
            VerifyOutput::Twisted(r) => {
                println!("frame       Ω_{}({}^{}, {}) = {:?}", r.frame.b, p, r.frame.nu, r.frame.big_d, r.frame.omega_b);
                println!("case        {:?}", r.case);
                println!("valuation   min {:?}, required ≥ {}", r.min_valuation, r.required_valuation);
                for d in &r.depths {
                    println!(
                        "depth {}     pairs {}, min {:?}, mod p^m {}, mod p^(m-1) {}",
                        d.m,
                        d.pairs,
                        d.min_valuation,
                        yes(d.strict_holds),
                        yes(d.relaxed_holds)
                    );
                }
                if let Some(w) = &r.witness {
                    println!("witness     {w:?}");
                }
            }
            VerifyOutput::Windowed(r) => {
                println!("points      {}", r.points);
                println!("failures    {}", r.failure_count);
                for f in r.failures.iter().take(5) {
                    println!(
                        "  a={} K={} s={} m={} r={}: v_p = {:?} < {}",
                        f.a, f.k, f.s, f.m, f.r, f.valuation, f.required
                    );
                }
                for n in &r.notes {
                    println!("note        {n}");
                }
            }
            VerifyOutput::Dd(v) => {
                println!("order       {}", v.order);
                if let Some(k) = v.witness_index {
                    println!("witness     index {k}: {}", v.witness_coefficient.as_deref().unwrap_or(""));
                }
            }
        }
        println!("result      {}", if holds { "pass" } else { "fail" });
    }
    Ok(if holds { EXIT_OK } else { EXIT_FAIL })
}

fn windowed_sums(
    pair: &ParamPair,
    p: u64,
    grid: CongruenceGrid,
    opts: &DworkOptions,
) -> Result<hyperint::congruence::CongruenceReport, Error> {
    let residue = opts.residue;
    let window = p.checked_pow(grid.s_max).filter(|&w| w <= MAX_WINDOW);
    let points = (grid.k_max + 1) as usize * (grid.s_max + 1) as usize * (grid.m_max + 1) as usize
        * (grid.r_max + 1) as usize
        * p as usize;
    if window.is_none()
        || grid.k_max > MAX_K
        || grid.m_max > MAX_M
        || grid.r_max > MAX_R
        || points > MAX_GRID_POINTS
    {
        return Err(usage(format!(
            "grid too large: need p^s_max ≤ {MAX_WINDOW}, k_max ≤ {MAX_K}, m_max ≤ {MAX_M}, r_max ≤ {MAX_R} \
             and at most {MAX_GRID_POINTS} points; shrink the grid or split the run"
        )));
    }
    let frame = ResidueFrame::for_pair(pair, p, residue)?;
    let t = opts.t.unwrap_or(frame.omega_b[0]);
    if !frame.omega_b.contains(&t) {
        return Err(usage(format!("t = {t} is not in Ω_{residue}: {:?}", frame.omega_b)));
    }
    let scale = c_prime(pair)?;
    let seq = MemoSequence::new(|r, n| {
        let twisted = pair.scaled_reduced(frame.twist(t, r));
        let term = pochhammer_ratio(&twisted, n) * power(&scale, n);
        if opts.perturb == Some(n) {
            term + Rational::from_integer(1.into())
        } else {
            term
        }
    });
    let report = match opts.weight {
        Weight::Sequence => {
            use hyperint::congruence::SequenceProvider;
            formal_congruence_check(&seq, &|r, m| seq.term(r, m), &grid)?
        }
        Weight::Tau => formal_congruence_check(&seq, &|r, m| g_weight(pair, &frame, r, m), &grid)?,
    };
    Ok(report)
}

fn power(x: &Rational, n: u64) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// Exit 0 when the sheet exists and the numerator condition holds, 1 when the
/// numerator condition fails, 2 when `F` is not N-integral but no numerator
/// test detects it.
fn constants(pair: &ParamPair, json: bool) -> Result<u8, Error> {
    let numerators = numerator_condition(pair)?;
    let passes = numerators.iter().all(|c| c.holds);
    let sheet = match constant_sheet(pair) {
        Ok(sheet) => Some(sheet),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    if json {
        print_json(&serde_json::json!({ "constants": sheet, "numerator_condition": numerators }));
    } else {
        match &sheet {
            Some(sheet) => {
                println!("d           {}", sheet.d);
                for (p, l) in &sheet.lambda {
                    println!("λ_{p:<9} {l}");
                }
                let core = if sheet.c0.exact { "" } else { " (formula core)" };
                println!("C₀          {}{core}", fmt_rational(&sheet.c0.value));
                println!("C'          {}", fmt_rational(&sheet.c_prime));
                println!("𝔪           {}", sheet.m_count);
                println!("d*          {}", sheet.d_star);
                println!("d'          {}", sheet.d_prime);
                let opt = |x: Option<u64>| x.map_or("n/a".to_string(), |v| v.to_string());
                println!("𝔫           {}", opt(sheet.frak_n));
                println!("𝔫'          {}", opt(sheet.frak_n_prime));
            }
            None => println!("F is not N-integral: no constants"),
        }
        for c in numerators.iter().filter(|c| !c.holds) {
            println!("numerator condition fails at p = {}", c.p);
        }
    }
    Ok(match (passes, sheet.is_some()) {
        (false, _) => EXIT_FAIL,
        (true, true) => EXIT_OK,
        (true, false) => EXIT_NOT_APPLICABLE,
    })
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Check { pair, order, json } => check(&pair.pair()?, order, json),
        Command::Series { pair, what, scale, order, root, json } => {
            series(&pair.pair()?, what, &scale, order, root, json)
        }
        Command::Verify {
            pair,
            congruence,
            prime,
            residue,
            t,
            order,
            depth,
            k_max,
            s_max,
            m_max,
            r_max,
            weight,
            perturb,
            json,
        } => {
            let grid = CongruenceGrid { p: prime, k_max, s_max, m_max, r_max };
            let dwork = DworkOptions { residue, t, weight, perturb };
            verify(&pair.pair()?, congruence, prime, order, depth, grid, dwork, json)
        }
        Command::Constants { pair, json } => constants(&pair.pair()?, json),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("HYPERINT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second initialisation can only fail if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
