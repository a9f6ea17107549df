//! Command-line front end over the exact Virasoro engine and the numeric
//! quadrature reproductions.
//!
//! Every invocation prints one UTF-8 JSON document on stdout with the inputs
//! echoed, the active convention named, and sorted object keys, so outputs
//! are byte-stable across runs. Exact values serialize as integer or "p/q"
//! strings; floating-point numbers appear only inside quadrature objects that
//! carry an "error" estimate alongside the value.
//!
//! Exit codes: 0 on success, 2 on validation errors (bad flags, malformed
//! rationals, invalid tables), 3 on computation errors (non-convergent
//! quadrature). Error paths print a message to stderr and no JSON.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use virasoro::correlators::{self, Convention, CorrelatorSum};
use virasoro::exact::cpoly::CPoly;
use virasoro::exact::laurent::{Trunc, TruncLaurent, Var};
use virasoro::exact::rat::Rat;
use virasoro::homology::{build_ce, genus_table, LieTable};
use virasoro::pbw::{straighten, vir_bracket, UElem, VirElement};
use virasoro::schwarzian::{mobius_series, schwarzian, FormalMap};
use virasoro::vacuum::{act, graded_dimension, Ket, State};
use virasoro::vertex::FieldArena;
use virasoro::witt::{central_coeff, gelfand_fuks, LaurentVF};

use virasoro_cli::annulus::{annulus_moment, central_term_quadrature, AnnulusError};
use virasoro_cli::anomaly::{
    anomaly_defect_bound, anomaly_integral_exact, anomaly_integral_quadrature,
    anomaly_limit_defect, beta_gamma_central_charge,
};
use virasoro_cli::bump::{BumpFamily, BumpSpec};
use virasoro_cli::quad::QuadratureResult;

/// Environment variable overriding the default quadrature tolerance when no
/// --tol flag is given.
const TOL_ENV: &str = "VIRASORO_TOL";

#[derive(Parser)]
#[command(
    name = "virasoro-cli",
    about = "Exact Virasoro mode algebra, vacuum vertex algebra, correlators, \
             Lie algebra homology, and quadrature audits with JSON output",
    version
)]
struct Cli {
    /// Central-term and correlator-recursion convention.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::WardForm)]
    convention: ConventionArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    /// Central coefficient (n^3-n)/12 on the first index; Ward-form
    /// recursion. Validated against the closed 2- and 3-point forms.
    WardForm,
    /// Printed variant: central coefficient indexed by the second mode and
    /// the alternating-sign recursion. Kept as a regression surface; its
    /// 3-point function disagrees with the closed form.
    PaperPrinted,
}

impl ConventionArg {
    fn name(self) -> &'static str {
        match self {
            ConventionArg::WardForm => "ward-form",
            ConventionArg::PaperPrinted => "paper-printed",
        }
    }

    fn recursion(self) -> Convention {
        match self {
            ConventionArg::WardForm => Convention::WardForm,
            ConventionArg::PaperPrinted => Convention::Printed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Smooth compactly supported profile exp(-1/(1-s^2)).
    Exp,
    /// Polynomial profile (1-s^2)^6, C^5 at the support endpoints.
    Poly,
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::Exp => "exp",
            FamilyArg::Poly => "poly",
        }
    }

    fn family(self) -> BumpFamily {
        match self {
            FamilyArg::Exp => BumpFamily::Exp,
            FamilyArg::Poly => BumpFamily::Poly,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bracket [L_n, L_m] in the mode algebra with central term.
    Bracket {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Straighten a product of modes into the normal-ordered PBW basis.
    Straighten {
        /// Comma-separated mode indices, e.g. "2,-3,1".
        #[arg(long, allow_hyphen_values = true)]
        modes: String,
    },
    /// Apply a single mode L_n to a basis ket of the vacuum module.
    Act {
        #[arg(long, allow_negative_numbers = true)]
        mode: i64,
        /// Partition into parts >= 2, comma-separated; omit for the vacuum.
        #[arg(long)]
        ket: Option<String>,
    },
    /// Graded dimensions of the vacuum module through the given level.
    Character {
        #[arg(long)]
        order: i64,
    },
    /// Singular part of the operator product of two basis-ket states.
    Ope {
        /// Left state as a partition; defaults to the conformal vector.
        #[arg(long)]
        left: Option<String>,
        /// Right state as a partition; defaults to the conformal vector.
        #[arg(long)]
        right: Option<String>,
    },
    /// Bounded locality check: (z-w)^power [Y(v,z), Y(w,w')] = 0.
    Locality {
        #[arg(long)]
        power: u32,
        #[arg(long, default_value_t = 4)]
        level_cap: i64,
        #[arg(long, default_value_t = 4)]
        mode_cap: i64,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
    },
    /// Translation axiom defect through the given truncation order.
    Translation {
        #[arg(long, default_value_t = 6)]
        order: i64,
        #[arg(long, default_value_t = 4)]
        level_cap: i64,
        #[arg(long)]
        ket: Option<String>,
    },
    /// Exact n-point stress-tensor correlator as a term list.
    Correlator {
        #[arg(long)]
        n: usize,
        /// Optional comma-separated rational points for exact evaluation.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// Central charge used when evaluating at points.
        #[arg(long, allow_hyphen_values = true, default_value = "1", value_parser = parse_rat)]
        c: Rat,
    },
    /// Exact Ward-identity verification of the n-point correlator.
    Ward {
        /// Number of insertion points, 2 through 5.
        #[arg(long)]
        n: usize,
    },
    /// Chevalley-Eilenberg Betti numbers of a finite table read from JSON.
    CeBetti {
        /// Path to {"dim": d, "brackets": [{"i", "j", "coeffs"}]} with
        /// zero-based i < j and coefficient strings of length dim.
        #[arg(long)]
        table: PathBuf,
    },
    /// Polynomial generators of the genus-g conformal block algebra.
    GenusTable {
        #[arg(long, allow_negative_numbers = true)]
        genus: i64,
    },
    /// Residue cocycle on a pair of Witt modes.
    GfCocycle {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Schwarzian derivative of a formal coordinate change.
    Schwarzian {
        /// Mobius map as "a,b,c,d" for z -> (az+b)/(cz+d).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "series")]
        mobius: Option<String>,
        /// Series coefficients "c1,c2,..." of f = c1 z + c2 z^2 + ...
        #[arg(long, allow_hyphen_values = true)]
        series: Option<String>,
        /// Truncation order for the Mobius expansion.
        #[arg(long, default_value_t = 8)]
        order: i64,
    },
    /// Regularized anomaly integral with exact value and quadrature audit.
    Anomaly {
        #[arg(long, value_parser = parse_rat)]
        eps: Rat,
        #[arg(long = "L", value_parser = parse_rat)]
        l: Rat,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Moment of a normalized annulus bump against z^k.
    Annulus {
        #[arg(long, allow_negative_numbers = true)]
        k: i32,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long = "R", default_value_t = 2.0)]
        big_r: f64,
        #[arg(long, value_enum, default_value_t = FamilyArg::Exp)]
        family: FamilyArg,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Central term of the (m, n) mode pair by three-annulus quadrature.
    CentralTerm {
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        #[arg(long, allow_negative_numbers = true)]
        n: i32,
        #[arg(long, value_enum, default_value_t = FamilyArg::Exp)]
        family: FamilyArg,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Central charge of n weight-system components with constant audit.
    Charge {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let convention = cli.convention;
    let doc = run(cli.command, convention);
    let text = serde_json::to_string_pretty(&doc).expect("serializable document");
    // A closed downstream pipe is not an error; anything else is.
    use std::io::Write;
    if let Err(e) = writeln!(std::io::stdout(), "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: stdout: {e}");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}

/// Validation failure: message on stderr, no JSON, exit 2.
fn fail_validation(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

/// Computation failure: message on stderr, no JSON, exit 3.
fn fail_computation(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(3);
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s).map_err(|e| e.to_string())
}

fn parse_rat_or_exit(s: &str, what: &str) -> Rat {
    match Rat::from_str(s) {
        Ok(r) => r,
        Err(e) => fail_validation(&format!("{what}: {e}")),
    }
}

fn parse_int_list(s: &str, what: &str) -> Vec<i64> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .unwrap_or_else(|_| fail_validation(&format!("{what}: bad integer {t:?}")))
        })
        .collect()
}

fn parse_rat_list(s: &str, what: &str) -> Vec<Rat> {
    s.split(',').map(|t| parse_rat_or_exit(t.trim(), what)).collect()
}

/// Partition argument: comma-separated parts >= 2 in any order; None or an
/// empty string is the vacuum.
fn parse_ket(s: Option<&str>) -> Ket {
    let Some(s) = s else { return Ket::vacuum() };
    if s.trim().is_empty() {
        return Ket::vacuum();
    }
    let mut parts = parse_int_list(s, "ket");
    if parts.iter().any(|&p| p < 2) {
        fail_validation("ket: every part must be >= 2");
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ket::new(parts)
}

fn rat_value(r: &Rat) -> Value {
    Value::String(r.to_string())
}

/// Polynomial in the central charge as {"k": "p/q"} keyed by c-degree.
fn cpoly_value(p: &CPoly) -> Value {
    let mut map = Map::new();
    for (k, r) in p.iter() {
        map.insert(k.to_string(), rat_value(r));
    }
    Value::Object(map)
}

fn state_value(v: &State) -> Value {
    let terms: Vec<Value> = v
        .terms()
        .map(|(k, p)| json!({ "ket": k.parts(), "coeff": cpoly_value(p) }))
        .collect();
    Value::Array(terms)
}

fn uelem_value(u: &UElem) -> Value {
    let terms: Vec<Value> = u
        .terms()
        .map(|(w, p)| json!({ "word": w.0, "coeff": cpoly_value(p) }))
        .collect();
    Value::Array(terms)
}

fn correlator_value(f: &CorrelatorSum) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(m, p)| {
            let pairs: Vec<Value> = m
                .pairs()
                .map(|((i, j), e)| json!({ "i": i, "j": j, "exp": e }))
                .collect();
            let singles: Vec<Value> =
                m.singles().map(|(v, e)| json!({ "i": v, "exp": e })).collect();
            json!({ "pairs": pairs, "singles": singles, "coeff": cpoly_value(p) })
        })
        .collect();
    Value::Array(terms)
}

fn series_value(s: &TruncLaurent) -> Value {
    let terms: Vec<Value> =
        s.terms().map(|(e, r)| json!({ "power": e, "coeff": rat_value(r) })).collect();
    let trunc = match s.trunc() {
        Trunc::Exact => Value::String("exact".into()),
        Trunc::Order(k) => json!(k),
    };
    json!({ "terms": terms, "known_below": trunc })
}

fn quadrature_value(q: &QuadratureResult) -> Value {
    json!({ "value": q.value, "error": q.error, "evals": q.evals })
}

/// Assemble the output document; serde_json objects order keys canonically.
fn doc(command: &str, convention: ConventionArg, inputs: Value, fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), Value::String(command.into()));
    map.insert("convention".into(), Value::String(convention.name().into()));
    map.insert("inputs".into(), inputs);
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    Value::Object(map)
}

/// Tolerance precedence: explicit flag, then the VIRASORO_TOL environment
/// variable, then the built-in default.
fn resolve_tol(flag: Option<f64>, default: f64) -> f64 {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .parse::<f64>()
                .unwrap_or_else(|_| fail_validation(&format!("{TOL_ENV}: bad float {s:?}"))),
            Err(_) => default,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        fail_validation("tolerance must be a positive finite number");
    }
    tol
}

fn run(command: Command, conv: ConventionArg) -> Value {
    match command {
        Command::Bracket { n, m } => cmd_bracket(n, m, conv),
        Command::Straighten { modes } => cmd_straighten(&modes, conv),
        Command::Act { mode, ket } => cmd_act(mode, ket.as_deref(), conv),
        Command::Character { order } => cmd_character(order, conv),
        Command::Ope { left, right } => cmd_ope(left.as_deref(), right.as_deref(), conv),
        Command::Locality { power, level_cap, mode_cap, left, right } => {
            cmd_locality(power, level_cap, mode_cap, left.as_deref(), right.as_deref(), conv)
        }
        Command::Translation { order, level_cap, ket } => {
            cmd_translation(order, level_cap, ket.as_deref(), conv)
        }
        Command::Correlator { n, points, c } => cmd_correlator(n, points.as_deref(), &c, conv),
        Command::Ward { n } => cmd_ward(n, conv),
        Command::CeBetti { table } => cmd_ce_betti(&table, conv),
        Command::GenusTable { genus } => cmd_genus_table(genus, conv),
        Command::GfCocycle { n, m } => cmd_gf_cocycle(n, m, conv),
        Command::Schwarzian { mobius, series, order } => {
            cmd_schwarzian(mobius.as_deref(), series.as_deref(), order, conv)
        }
        Command::Anomaly { eps, l, tol } => cmd_anomaly(&eps, &l, tol, conv),
        Command::Annulus { k, r, big_r, family, tol } => {
            cmd_annulus(k, r, big_r, family, tol, conv)
        }
        Command::CentralTerm { m, n, family, tol } => cmd_central_term(m, n, family, tol, conv),
        Command::Charge { n } => cmd_charge(n, conv),
    }
}

fn cmd_bracket(n: i64, m: i64, conv: ConventionArg) -> Value {
    let b = vir_bracket(&VirElement::mode(n), &VirElement::mode(m));
    let mut result = Map::new();
    for (k, coeff) in b.modes() {
        // Mode coefficients of a bracket of pure modes are constant in c.
        result.insert(format!("L{k}"), rat_value(&coeff.coeff(0)));
    }
    // The conventions disagree on which index carries the central cubic;
    // on the diagonal n + m = 0 this flips the sign.
    let central = match conv {
        ConventionArg::WardForm => b.central_coeff().coeff(0),
        ConventionArg::PaperPrinted => {
            if n + m == 0 {
                central_coeff(m)
            } else {
                Rat::zero()
            }
        }
    };
    if !central.is_zero() {
        result.insert("C".into(), rat_value(&central));
    }
    doc(
        "bracket",
        conv,
        json!({ "n": n, "m": m }),
        vec![("result", Value::Object(result))],
    )
}

fn cmd_straighten(modes: &str, conv: ConventionArg) -> Value {
    let word = parse_int_list(modes, "modes");
    let u = straighten(&word);
    doc(
        "straighten",
        conv,
        json!({ "modes": word }),
        vec![("terms", uelem_value(&u))],
    )
}

fn cmd_act(mode: i64, ket: Option<&str>, conv: ConventionArg) -> Value {
    let k = parse_ket(ket);
    let result = act(mode, &State::from_ket(k.clone()));
    doc(
        "act",
        conv,
        json!({ "mode": mode, "ket": k.parts() }),
        vec![("result", state_value(&result))],
    )
}

fn cmd_character(order: i64, conv: ConventionArg) -> Value {
    if order < 0 {
        fail_validation("order must be nonnegative");
    }
    let dims: Vec<u64> = (0..=order).map(graded_dimension).collect();
    doc(
        "character",
        conv,
        json!({ "order": order }),
        vec![("dimensions", json!(dims))],
    )
}

fn cmd_ope(left: Option<&str>, right: Option<&str>, conv: ConventionArg) -> Value {
    let lk = left.map_or_else(|| Ket::new(vec![2]), |s| parse_ket(Some(s)));
    let rk = right.map_or_else(|| Ket::new(vec![2]), |s| parse_ket(Some(s)));
    let mut arena = FieldArena::new();
    let singular =
        arena.ope_singular(&State::from_ket(lk.clone()), &State::from_ket(rk.clone()));
    let terms: Vec<Value> = singular
        .iter()
        .map(|(pole, state)| json!({ "pole": pole, "state": state_value(state) }))
        .collect();
    doc(
        "ope",
        conv,
        json!({ "left": lk.parts(), "right": rk.parts() }),
        vec![("singular", Value::Array(terms))],
    )
}

fn cmd_locality(
    power: u32,
    level_cap: i64,
    mode_cap: i64,
    left: Option<&str>,
    right: Option<&str>,
    conv: ConventionArg,
) -> Value {
    if level_cap < 0 || mode_cap < 0 {
        fail_validation("level-cap and mode-cap must be nonnegative");
    }
    let lk = left.map_or_else(|| Ket::new(vec![2]), |s| parse_ket(Some(s)));
    let rk = right.map_or_else(|| Ket::new(vec![2]), |s| parse_ket(Some(s)));
    let mut arena = FieldArena::new();
    let holds = arena.check_locality(
        &State::from_ket(lk.clone()),
        &State::from_ket(rk.clone()),
        power,
        level_cap,
        mode_cap,
    );
    doc(
        "locality",
        conv,
        json!({
            "power": power,
            "level_cap": level_cap,
            "mode_cap": mode_cap,
            "left": lk.parts(),
            "right": rk.parts(),
        }),
        vec![("holds", json!(holds))],
    )
}

fn cmd_translation(order: i64, level_cap: i64, ket: Option<&str>, conv: ConventionArg) -> Value {
    if order < 0 || level_cap < 0 {
        fail_validation("order and level-cap must be nonnegative");
    }
    let k = ket.map_or_else(|| Ket::new(vec![2]), |s| parse_ket(Some(s)));
    let mut arena = FieldArena::new();
    let defect = arena.check_translation(&State::from_ket(k.clone()), level_cap, (-order, order));
    doc(
        "translation",
        conv,
        json!({ "order": order, "level_cap": level_cap, "ket": k.parts() }),
        vec![("defect_zero", json!(defect.is_zero()))],
    )
}

fn cmd_correlator(n: usize, points: Option<&str>, c: &Rat, conv: ConventionArg) -> Value {
    if n > 6 {
        fail_validation("n must be at most 6 for the exact term expansion");
    }
    let f = correlators::npoint_with(n, conv.recursion());
    let mut inputs = Map::new();
    inputs.insert("n".into(), json!(n));
    inputs.insert("c".into(), rat_value(c));
    let mut fields = vec![("terms", correlator_value(&f))];
    if let Some(pts) = points {
        let xs = parse_rat_list(pts, "points");
        inputs.insert(
            "points".into(),
            Value::Array(xs.iter().map(rat_value).collect()),
        );
        match f.evaluate(&xs, c) {
            Ok(v) => fields.push(("value", rat_value(&v))),
            Err(e) => fail_validation(&format!("points: {e}")),
        }
    }
    doc("correlator", conv, Value::Object(inputs), fields)
}

fn cmd_ward(n: usize, conv: ConventionArg) -> Value {
    if !(2..=5).contains(&n) {
        fail_validation("n must be between 2 and 5 for exact Ward verification");
    }
    let f = correlators::npoint_with(n, conv.recursion());
    let Some(numerator) = f.packed_numerator(4) else {
        fail_computation("correlator does not reduce to the uniform quartic-pole form");
    };
    let translation = numerator.ward_translation();
    let scaling = numerator.ward_scaling();
    let special = numerator.ward_special();
    doc(
        "ward",
        conv,
        json!({ "n": n }),
        vec![
            ("translation", json!(translation)),
            ("scaling", json!(scaling)),
            ("special", json!(special)),
            ("all_hold", json!(translation && scaling && special)),
        ],
    )
}

#[derive(Deserialize)]
struct TableFile {
    dim: usize,
    #[serde(default)]
    brackets: Vec<TableEntry>,
}

#[derive(Deserialize)]
struct TableEntry {
    i: usize,
    j: usize,
    coeffs: Vec<String>,
}

fn cmd_ce_betti(path: &std::path::Path, conv: ConventionArg) -> Value {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| fail_validation(&format!("table {}: {e}", path.display())));
    let file: TableFile = serde_json::from_str(&text)
        .unwrap_or_else(|e| fail_validation(&format!("table {}: {e}", path.display())));
    let entries: Vec<((usize, usize), Vec<Rat>)> = file
        .brackets
        .iter()
        .map(|entry| {
            let coeffs = entry
                .coeffs
                .iter()
                .map(|s| parse_rat_or_exit(s, "table coefficient"))
                .collect();
            ((entry.i, entry.j), coeffs)
        })
        .collect();
    let table = LieTable::new(file.dim, entries)
        .unwrap_or_else(|e| fail_validation(&format!("table: {e}")));
    let complex = build_ce(&table);
    doc(
        "ce-betti",
        conv,
        json!({ "table": path.display().to_string(), "dim": table.dim() }),
        vec![
            ("betti", json!(complex.betti())),
            ("boundary_squared_zero", json!(complex.boundary_squared_is_zero())),
        ],
    )
}

fn cmd_genus_table(genus: i64, conv: ConventionArg) -> Value {
    let generators = genus_table(genus).unwrap_or_else(|e| fail_validation(&e.to_string()));
    let list: Vec<Value> = generators
        .iter()
        .map(|g| json!({ "name": g.name, "degree": g.degree }))
        .collect();
    doc(
        "genus-table",
        conv,
        json!({ "genus": genus }),
        vec![("generators", Value::Array(list))],
    )
}

fn cmd_gf_cocycle(n: i64, m: i64, conv: ConventionArg) -> Value {
    let z = Var('z');
    let value = gelfand_fuks(&LaurentVF::mode(z, n), &LaurentVF::mode(z, m))
        .unwrap_or_else(|e| fail_computation(&format!("residue pairing: {e}")));
    doc(
        "gf-cocycle",
        conv,
        json!({ "n": n, "m": m }),
        vec![("value", rat_value(&value))],
    )
}

fn cmd_schwarzian(
    mobius: Option<&str>,
    series: Option<&str>,
    order: i64,
    conv: ConventionArg,
) -> Value {
    let z = Var('z');
    let (map, inputs) = match (mobius, series) {
        (Some(spec), None) => {
            if order < 1 {
                fail_validation("order must be at least 1");
            }
            let abcd = parse_rat_list(spec, "mobius");
            let [a, b, c, d] = abcd.as_slice() else {
                fail_validation("mobius: expected exactly four rationals a,b,c,d");
            };
            let map = mobius_series(a, b, c, d, order)
                .unwrap_or_else(|e| fail_validation(&format!("mobius: {e}")));
            let echoed: Vec<Value> = abcd.iter().map(rat_value).collect();
            (map, json!({ "mobius": echoed, "order": order }))
        }
        (None, Some(spec)) => {
            let coeffs = parse_rat_list(spec, "series");
            let series_poly = TruncLaurent::from_terms(
                z,
                coeffs.iter().cloned().enumerate().map(|(k, r)| (k as i64 + 1, r)),
                Trunc::Order(coeffs.len() as i64 + 1),
            );
            let map = FormalMap::new(series_poly)
                .unwrap_or_else(|e| fail_validation(&format!("series: {e}")));
            let echoed: Vec<Value> = coeffs.iter().map(rat_value).collect();
            (map, json!({ "series": echoed }))
        }
        _ => fail_validation("exactly one of --mobius or --series is required"),
    };
    let s = schwarzian(&map)
        .unwrap_or_else(|e| fail_computation(&format!("schwarzian: {e}")));
    // Truncated series carry a finite window; vanishing is asserted there.
    let vanishes = s.terms().next().is_none();
    doc(
        "schwarzian",
        conv,
        inputs,
        vec![("schwarzian", series_value(&s)), ("vanishes_in_window", json!(vanishes))],
    )
}

fn cmd_anomaly(eps: &Rat, l: &Rat, tol: Option<f64>, conv: ConventionArg) -> Value {
    let tol = resolve_tol(tol, 1e-10);
    let value =
        anomaly_integral_exact(eps, l).unwrap_or_else(|e| fail_validation(&e.to_string()));
    let defect = anomaly_limit_defect(eps, l).expect("range already validated");
    let bound = anomaly_defect_bound(eps, l);
    let quad = anomaly_integral_quadrature(eps, l, tol).expect("range already validated");
    if !quad.error.is_finite() {
        fail_computation("quadrature did not converge");
    }
    let consistent = (quad.value - value.to_f64()).abs() <= quad.error.max(1e-12);
    doc(
        "anomaly",
        conv,
        json!({ "eps": eps.to_string(), "L": l.to_string(), "tol": tol }),
        vec![
            ("value", rat_value(&value)),
            ("defect", rat_value(&defect)),
            ("defect_bound", rat_value(&bound)),
            ("defect_bound_ok", json!(defect <= bound)),
            ("quadrature", quadrature_value(&quad)),
            ("quadrature_consistent", json!(consistent)),
        ],
    )
}

fn cmd_annulus(
    k: i32,
    r: f64,
    big_r: f64,
    family: FamilyArg,
    tol: Option<f64>,
    conv: ConventionArg,
) -> Value {
    let tol = resolve_tol(tol, 1e-8);
    let bump = BumpSpec::new(r, big_r, family.family())
        .unwrap_or_else(|e| fail_validation(&e.to_string()));
    let moment = match annulus_moment(&bump, k, tol) {
        Ok(q) => q,
        Err(AnnulusError::NoConvergence { error }) => {
            fail_computation(&format!("quadrature error {error:.3e} above tolerance"))
        }
        Err(e) => fail_validation(&e.to_string()),
    };
    doc(
        "annulus",
        conv,
        json!({
            "k": k,
            "r": r,
            "R": big_r,
            "family": family.name(),
            "tol": tol,
        }),
        vec![("moment", quadrature_value(&moment))],
    )
}

fn cmd_central_term(
    m: i32,
    n: i32,
    family: FamilyArg,
    tol: Option<f64>,
    conv: ConventionArg,
) -> Value {
    if m.abs() > 8 || n.abs() > 8 {
        fail_validation("|m| and |n| must be at most 8");
    }
    let tol = resolve_tol(tol, 1e-5);
    let spec =
        |r, big_r| BumpSpec::new(r, big_r, family.family()).expect("fixed radii are valid");
    let bumps = [spec(0.5, 0.9), spec(1.0, 1.6), spec(1.7, 2.2)];
    let result = match central_term_quadrature(m, n, &bumps, tol) {
        Ok(r) => r,
        Err(AnnulusError::NoConvergence { error }) => {
            fail_computation(&format!("quadrature error {error:.3e} above tolerance"))
        }
        Err(e) => fail_validation(&e.to_string()),
    };
    let target = if m + n == 0 {
        Rat::new(m as i64 * m as i64 * m as i64 - m as i64, 12)
    } else {
        Rat::zero()
    };
    let scale = target.to_f64().abs().max(1.0);
    let matches = (result.value - target.to_f64()).abs() <= tol.max(result.error) * scale;
    doc(
        "central-term",
        conv,
        json!({ "m": m, "n": n, "family": family.name(), "tol": tol }),
        vec![
            (
                "quadrature",
                json!({
                    "value": result.value,
                    "error": result.error,
                    "evals": result.evals,
                    "raw": result.raw,
                    "measured_constant": result.measured_constant,
                    "displayed_constant": result.displayed_constant,
                    "constant_ratio": result.constant_ratio,
                }),
            ),
            ("target", rat_value(&target)),
            ("matches_target", json!(matches)),
        ],
    )
}

fn cmd_charge(n: i64, conv: ConventionArg) -> Value {
    let audit = beta_gamma_central_charge(n).unwrap_or_else(|e| fail_validation(&e.to_string()));
    let factors: Vec<Value> = audit
        .factors
        .iter()
        .map(|f| {
            json!({
                "label": f.label,
                "coeff": f.coeff.to_string(),
                "pi_power": f.pi_power,
            })
        })
        .collect();
    let mut product = Rat::one();
    let mut pi_total = 0i32;
    for f in &audit.factors {
        product *= f.coeff.clone();
        pi_total += f.pi_power;
    }
    doc(
        "charge",
        conv,
        json!({ "n": n }),
        vec![
            ("components", json!(audit.components)),
            ("charge", json!(audit.charge)),
            ("cocycle_coefficient", rat_value(&audit.cocycle_coefficient)),
            ("factors", Value::Array(factors)),
            ("constant_product", rat_value(&product)),
            ("pi_power_total", json!(pi_total)),
        ],
    )
}
