use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use vosperkit::codes::{self, QFCode, SearchOutcome};
use vosperkit::fields::{parse_tower, FieldSpec, Tower};
use vosperkit::isoperimetry::{self, connectivity_and_atoms, is_sidon};
use vosperkit::qforms::{self, parse_qform, parse_sbform, FormSpace, FormType};
use vosperkit::scheme;
use vosperkit::sidon_bridge::sidon_via_kernel;
use vosperkit::{Elem, Error, Result, Subspace};

#[derive(Parser)]
#[command(name = "vosperkit", version, about = "Products of subspaces in field extensions and codes of quadratic forms")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a field "p^k[/c_k,...,c_0]" or a tower "q^m over p^k / c_m,...,c_0".
    Field { spec: String },
    /// Subspace operations on spans of tower elements.
    Subspace(SubspaceArgs),
    /// k-th connectivity and k-atoms of a subspace.
    Atoms(AtomsArgs),
    #[command(subcommand)]
    Sidon(SidonCmd),
    #[command(subcommand)]
    Qform(QformCmd),
    #[command(subcommand)]
    Scheme(SchemeCmd),
    #[command(subcommand)]
    Codes(CodesCmd),
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Args)]
struct SpaceArgs {
    /// Tower, e.g. "2^7 over 2".
    #[arg(long)]
    tower: String,
    /// Spanning elements separated by ';', e.g. "1; a; a^3+a".
    #[arg(long)]
    basis: String,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SubspaceOp {
    Span,
    Sum,
    Intersect,
    Product,
    Power,
    Perp,
    Stabilizer,
}

#[derive(Args)]
struct SubspaceArgs {
    #[arg(value_enum)]
    op: SubspaceOp,
    #[command(flatten)]
    space: SpaceArgs,
    /// Second operand for sum, intersect and product.
    #[arg(long)]
    other: Option<String>,
    /// Exponent for power.
    #[arg(long, default_value_t = 2)]
    t: u32,
}

#[derive(Args)]
struct AtomsArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    cap: Option<u64>,
    /// Only search subspaces containing 1.
    #[arg(long)]
    normalize_one: bool,
}

#[derive(Subcommand)]
enum SidonCmd {
    /// Sidon test via the kernel of Φ, cross-checked directly.
    Check(SpaceArgs),
}

#[derive(Subcommand)]
enum QformCmd {
    /// Type (r,e) of a quadratic form, or of a symmetric form with --symmetric.
    Classify {
        form: String,
        #[arg(long)]
        symmetric: bool,
    },
    /// Weight of a quadratic form.
    Weight {
        form: String,
        /// Also compute the weight by exhaustive search.
        #[arg(long)]
        brute: bool,
    },
    /// Number of zeros of a quadratic form in F_q^n.
    Zeros {
        form: String,
        #[arg(long)]
        brute: bool,
    },
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Normalized P-numbers χ_s(t)/|O_s| for t = (1,0), (2,1), (2,−1).
    Pnumbers {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Build and solve the four-row dual system.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum CodesCmd {
    /// Search for a code with minimum weight ≥ 3.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Linear dimension (defaults to (n−1)(n−2)/2).
        #[arg(long)]
        dim: Option<usize>,
        /// Search arbitrary codes of q^dim elements instead.
        #[arg(long)]
        nonlinear: bool,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// X_t, Y_s and the dual profile of a code file.
    Profile {
        file: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
}

#[derive(Subcommand)]
enum ReproCmd {
    /// Rebuild the GF(2^19) Sidon space example.
    #[command(name = "counterexample-2-19")]
    Counterexample219,
    /// Sweep the dual system over n ≤ nmax, q ∈ {2,3,4,5}.
    Nosol {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Exhaustive linear search at n = 4, q = 2.
    #[command(name = "search-n4-q2")]
    SearchN4Q2 {
        #[arg(long)]
        cap: Option<u64>,
    },
}

fn env_cap(default: u64) -> Result<u64> {
    match std::env::var("VOSPERKIT_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("VOSPERKIT_CAP must be an integer, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn cap_or(explicit: Option<u64>, default: u64) -> Result<u64> {
    match explicit {
        Some(c) => Ok(c),
        None => env_cap(default),
    }
}

fn rational(x: &BigRational) -> Value {
    json!({"num": x.numer().to_string(), "den": x.denom().to_string()})
}

fn big(x: u128) -> Value {
    Value::String(x.to_string())
}

fn parse_space(a: &SpaceArgs) -> Result<(Tower, Vec<Elem>)> {
    let t = parse_tower(&a.tower)?;
    let gens = parse_elems(&t, &a.basis)?;
    Ok((t, gens))
}

fn parse_elems(t: &Tower, s: &str) -> Result<Vec<Elem>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|x| t.parse_elem(x))
        .collect()
}

fn subspace_json(s: &Subspace) -> Value {
    let t = s.tower();
    json!({
        "tower": t.to_string(),
        "dim": s.dim(),
        "basis": s.basis().iter().map(|&x| t.coords(x)).collect::<Vec<_>>(),
        "basis_text": s.basis().iter().map(|&x| t.format_elem(x)).collect::<Vec<_>>(),
    })
}

fn field(spec: &str) -> Result<Value> {
    if spec.contains("over") {
        let t = parse_tower(spec)?;
        Ok(json!({
            "tower": t.to_string(),
            "base": t.base().to_string(),
            "degree": t.degree(),
            "order": big(t.order() as u128),
            "modulus": t.modulus(),
            "subfield_degrees": t.subfields().iter().map(|(d, _)| *d).collect::<Vec<_>>(),
        }))
    } else {
        let f: FieldSpec = spec.parse()?;
        Ok(json!({
            "field": f.to_string(),
            "characteristic": f.characteristic(),
            "degree": f.degree(),
            "size": f.size(),
            "modulus": f.modulus(),
        }))
    }
}

fn subspace(a: &SubspaceArgs) -> Result<Value> {
    let (t, gens) = parse_space(&a.space)?;
    let s = Subspace::span(&t, &gens)?;
    let other = || -> Result<Subspace> {
        let o = a
            .other
            .as_deref()
            .ok_or_else(|| Error::Parse("--other is required for this operation".into()))?;
        Subspace::span(&t, &parse_elems(&t, o)?)
    };
    let r = match a.op {
        SubspaceOp::Span => s,
        SubspaceOp::Sum => s.sum(&other()?)?,
        SubspaceOp::Intersect => s.intersect(&other()?)?,
        SubspaceOp::Product => s.product(&other()?)?,
        SubspaceOp::Power => {
            if a.t == 0 {
                return Err(Error::Parse("--t must be positive".into()));
            }
            if s.is_zero() {
                return Err(Error::ZeroSpace);
            }
            s.power(a.t)
        }
        SubspaceOp::Perp => s.perp(),
        SubspaceOp::Stabilizer => s.stabilizer()?,
    };
    Ok(subspace_json(&r))
}

fn atoms(a: &AtomsArgs) -> Result<Value> {
    if a.k == 0 {
        return Err(Error::Parse("--k must be positive".into()));
    }
    let (t, gens) = parse_space(&a.space)?;
    let s = Subspace::span(&t, &gens)?;
    let cap = cap_or(a.cap, isoperimetry::DEFAULT_ATOM_CAP)?;
    let r = connectivity_and_atoms(&s, a.k, cap, a.normalize_one)?;
    let mut v = serde_json::to_value(r.to_json()).map_err(|e| Error::Inconsistent(e.to_string()))?;
    v["atom_dims"] = json!(r.atoms.iter().map(Subspace::dim).collect::<Vec<_>>());
    Ok(v)
}

fn sidon_report(t: &Tower, gens: &[Elem]) -> Result<Value> {
    let r = sidon_via_kernel(t, gens, env_cap(qforms::DEFAULT_CAP)?)?;
    let direct = is_sidon(&Subspace::span(t, gens)?);
    if direct != r.is_sidon {
        return Err(Error::Inconsistent("kernel criterion and direct test disagree".into()));
    }
    let mut v = serde_json::to_value(&r).map_err(|e| Error::Inconsistent(e.to_string()))?;
    v["dim_A"] = v["dim_a"].take();
    v.as_object_mut().unwrap().remove("dim_a");
    v["basis"] = json!(gens.iter().map(|&x| t.format_elem(x)).collect::<Vec<_>>());
    Ok(v)
}

fn type_str(t: FormType) -> String {
    t.to_string()
}

fn qform(c: &QformCmd) -> Result<Value> {
    match c {
        QformCmd::Classify { form, symmetric: true } => {
            let (sp, b) = parse_sbform(form)?;
            Ok(json!({"n": sp.n(), "q": sp.q(), "type": type_str(sp.sbform_type(&b)?)}))
        }
        QformCmd::Classify { form, symmetric: false } => {
            let (sp, f) = parse_qform(form)?;
            let ty = sp.qform_type_with_cap(&f, env_cap(qforms::DEFAULT_CAP)?)?;
            Ok(json!({"n": sp.n(), "q": sp.q(), "form": sp.format_qform(&f), "type": type_str(ty)}))
        }
        QformCmd::Weight { form, brute } => {
            let (sp, f) = parse_qform(form)?;
            let mut v = json!({"n": sp.n(), "q": sp.q(), "type": type_str(sp.qform_type(&f)?), "weight": sp.weight(&f)?});
            if *brute {
                v["weight_brute"] = json!(sp.weight_brute(&f)?);
            }
            Ok(v)
        }
        QformCmd::Zeros { form, brute } => {
            let (sp, f) = parse_qform(form)?;
            let ty = sp.qform_type(&f)?;
            let mut v = json!({"n": sp.n(), "q": sp.q(), "type": type_str(ty), "zeros": big(sp.zero_count(ty)?)});
            if *brute {
                v["zeros_brute"] = big(sp.zero_count_brute(&f)?);
            }
            Ok(v)
        }
    }
}

fn dual_solution_json(n: usize, q: u64) -> Result<Value> {
    let sys = scheme::build_dual_system(n, q)?;
    let sol = scheme::solve_dual_system(&sys)?;
    Ok(json!({
        "n": n,
        "q": q,
        "labels": sys.labels.iter().map(|&t| type_str(t)).collect::<Vec<_>>(),
        "matrix": sys.matrix.iter().map(|r| r.iter().map(rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "rhs": sys.rhs.iter().map(rational).collect::<Vec<_>>(),
        "y_star": sol.y_star.iter().map(rational).collect::<Vec<_>>(),
        "residual": rational(&sol.residual),
        "feasible": sol.feasible,
    }))
}

fn scheme_cmd(c: &SchemeCmd) -> Result<Value> {
    match c {
        SchemeCmd::Pnumbers { n, q, brute, cap } => {
            let table = scheme::p_number_table(*n, *q, *brute, cap_or(*cap, qforms::DEFAULT_CAP)?)?;
            let entries: Vec<Value> = table
                .entries
                .iter()
                .map(|((s, t), v)| json!({"s": type_str(*s), "t": type_str(*t), "value": rational(v)}))
                .collect();
            let orbit_sizes = table.orbit_sizes.as_ref().map(|m| {
                m.iter()
                    .map(|(t, c)| (type_str(*t), big(*c)))
                    .collect::<Map<String, Value>>()
            });
            Ok(json!({"n": n, "q": q, "brute": brute, "entries": entries, "orbit_sizes": orbit_sizes}))
        }
        SchemeCmd::Solve { n, q } => dual_solution_json(*n, *q),
    }
}

fn forms_json(sp: &FormSpace, forms: &[qforms::QuadraticForm]) -> Value {
    json!(forms.iter().map(|f| json!({"coeffs": f.coeffs, "text": sp.format_qform(f)})).collect::<Vec<_>>())
}

fn search_json(sp: &FormSpace, out: &SearchOutcome, cap: u64) -> Result<Value> {
    Ok(match out {
        SearchOutcome::NoneExists { nodes } => json!({"outcome": "NoneExists", "nodes": nodes}),
        SearchOutcome::Witness { code, nodes, .. } => {
            let mut v = json!({
                "outcome": "Witness",
                "nodes": nodes,
                "size": big(code.size()),
                "min_weight": code.min_weight(cap)?,
            });
            match code.basis() {
                Some(b) => {
                    v["linear"] = json!(true);
                    v["forms"] = forms_json(sp, &b);
                }
                None => {
                    v["linear"] = json!(false);
                    v["forms"] = forms_json(sp, &code.elements(cap)?);
                }
            }
            v
        }
    })
}

/// Code files: {"n": 3, "q": 2, "linear": true, "forms": [[coeffs], …]};
/// for linear codes the forms are generators, otherwise the codewords.
fn read_code(path: &PathBuf) -> Result<QFCode> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let get_u64 = |k: &str| {
        v.get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse(format!("missing integer field {k:?}")))
    };
    let sp = FormSpace::new(get_u64("n")? as usize, get_u64("q")?)?;
    let linear = v.get("linear").and_then(Value::as_bool).unwrap_or(false);
    let forms = v
        .get("forms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"forms\"".into()))?;
    let mut parsed = Vec::with_capacity(forms.len());
    for f in forms {
        let coeffs: Vec<u32> = serde_json::from_value(f.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if coeffs.len() != sp.num_coeffs() {
            return Err(Error::DimensionMismatch(format!(
                "form with {} coefficients, expected {}",
                coeffs.len(),
                sp.num_coeffs()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c as u64 >= sp.q()) {
            return Err(Error::CoefficientOutOfRange {
                value: c as u64,
                size: sp.q(),
            });
        }
        parsed.push(sp.form_from_coeffs(coeffs));
    }
    if linear {
        QFCode::linear(&sp, &parsed)
    } else {
        QFCode::from_elements(&sp, &parsed)
    }
}

fn codes_cmd(c: &CodesCmd) -> Result<Value> {
    match c {
        CodesCmd::Search {
            n,
            q,
            dim,
            nonlinear,
            cap,
        } => {
            let cap = cap_or(*cap, codes::DEFAULT_SEARCH_CAP)?;
            let sp = FormSpace::new(*n, *q)?;
            let dim = dim.unwrap_or((n.max(&2) - 1) * (n.max(&2) - 2) / 2);
            let out = if *nonlinear {
                let size = (*q as usize)
                    .checked_pow(dim as u32)
                    .ok_or_else(|| Error::TooLarge("code size".into()))?;
                codes::search_optimal_nonlinear(*n, *q, size, cap)?
            } else if dim == (n - 1) * (n - 2) / 2 && *n >= 3 {
                codes::search_optimal_linear(*n, *q, cap)?
            } else {
                codes::search_linear(*n, *q, dim, cap)?
            };
            let mut v = search_json(&sp, &out, qforms::DEFAULT_CAP)?;
            v["n"] = json!(n);
            v["q"] = json!(q);
            v["dim"] = json!(dim);
            v["nonlinear"] = json!(nonlinear);
            v["bound"] = big(codes::anticode_bound(*n, *q));
            Ok(v)
        }
        CodesCmd::Profile { file, cap } => {
            let cap = cap_or(*cap, qforms::DEFAULT_CAP)?;
            let code = read_code(file)?;
            let p = codes::orbit_profile(&code, cap)?;
            let counts = |m: &std::collections::BTreeMap<FormType, u128>| {
                m.iter().map(|(t, c)| (type_str(*t), big(*c))).collect::<Map<String, Value>>()
            };
            let y: Map<String, Value> = p.y.iter().map(|(t, v)| (type_str(*t), rational(v))).collect();
            let mut v = json!({
                "n": code.space().n(),
                "q": code.space().q(),
                "size": big(code.size()),
                "linear": code.is_linear(),
                "x": counts(&p.x),
                "y": y,
                "dual_counts": p.dual_counts.as_ref().map(counts),
                "poisson_holds": p.poisson_holds,
            });
            if code.size() >= 2 {
                let chk = codes::check_anticode(&code, cap)?;
                v["min_weight"] = json!(chk.min_weight);
                v["anticode"] = json!({
                    "bound": big(chk.bound),
                    "within_bound": chk.within_bound,
                    "strict": chk.strict,
                });
            }
            if let Some(d) = code.dim() {
                v["dim"] = json!(d);
                let dual = code.dual(cap)?;
                v["dual_dim"] = json!(dual.dim);
                v["dual_min_rank"] = json!(dual.min_rank);
            }
            Ok(v)
        }
    }
}

fn repro(c: &ReproCmd) -> Result<Value> {
    match c {
        ReproCmd::Counterexample219 => {
            let t = parse_tower("2^19 over 2 / 1,0,0,0,0,1,0,0,0,1,0,0,1,0,0,0,0,1,1,1")?;
            let stated = parse_elems(&t, "1; a; a^7; a^12+a^2+1")?;
            let variant = parse_elems(&t, "1; a; a^7; a^12+a^3+1")?;
            let mut v = sidon_report(&t, &stated)?;
            v["tower"] = json!(t.to_string());
            v["variant"] = sidon_report(&t, &variant)?;
            Ok(v)
        }
        ReproCmd::Nosol { nmax } => {
            let mut rows = Vec::new();
            for n in 2..=*nmax {
                for q in [2, 3, 4, 5] {
                    let mut r = dual_solution_json(n, q)?;
                    let obj = r.as_object_mut().unwrap();
                    obj.remove("matrix");
                    obj.remove("rhs");
                    rows.push(r);
                }
            }
            let all = rows
                .iter()
                .all(|r| r["feasible"].as_bool() == Some(r["n"].as_u64() == Some(2)));
            Ok(json!({"nmax": nmax, "feasible_only_at_n2": all, "systems": rows}))
        }
        ReproCmd::SearchN4Q2 { cap } => {
            let cap = cap_or(*cap, codes::DEFAULT_SEARCH_CAP)?;
            let out = codes::search_optimal_linear(4, 2, cap)?;
            let sp = FormSpace::new(4, 2)?;
            let mut v = search_json(&sp, &out, qforms::DEFAULT_CAP)?;
            v["n"] = json!(4);
            v["q"] = json!(2);
            v["dim"] = json!(3);
            v["bound"] = big(codes::anticode_bound(4, 2));
            Ok(v)
        }
    }
}

fn run(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Field { spec } => field(spec),
        Command::Subspace(a) => subspace(a),
        Command::Atoms(a) => atoms(a),
        Command::Sidon(SidonCmd::Check(a)) => {
            let (t, gens) = parse_space(a)?;
            sidon_report(&t, &gens)
        }
        Command::Qform(c) => qform(c),
        Command::Scheme(c) => scheme_cmd(c),
        Command::Codes(c) => codes_cmd(c),
        Command::Repro(c) => repro(c),
    }
}

fn emit(cli: &Cli, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    text.push('\n');
    match &cli.output {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let (value, code) = match run(&cli) {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(e) => (
            json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
            ExitCode::from(1),
        ),
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(1);
    }
    code
}
