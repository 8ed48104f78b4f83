//! Subcommand implementations. Each returns an [`Outcome`] holding both renderings.

use std::io::Read;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gal_core::arith::{newton_polygon, BaseField, KPoly, Scalar, UPoly};
use gal_core::ideal::{radical_membership, MultiPoly};
use gal_core::lattice::{
    cohomology_lattice, generic_fiber_cohomology, invariance_suite, morphism_action, quasi_unipotence_check, InvarianceConfig,
    LatticeReport, ProjModel, Window,
};
use gal_core::models::{ga_membership, normalize, place_witness_search, Chart, LaurentElement, WitnessSearch};
use gal_core::rigid::{pn_cech_homotopy, pn_window_cohomology, random_cochain, rigid_cech_disc, Cocycles};
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::modelfile::{parse_model_file, Item, ModelFile};

/// Model files shipped with the tool; `--model` falls back to these.
pub const BUNDLED: &[(&str, &str)] = &[
    ("pn.gal", include_str!("../models/pn.gal")),
    ("p1xp1.gal", include_str!("../models/p1xp1.gal")),
    ("blowup.gal", include_str!("../models/blowup.gal")),
    ("e5.gal", include_str!("../models/e5.gal")),
    ("e7.gal", include_str!("../models/e7.gal")),
    ("conics.gal", include_str!("../models/conics.gal")),
];

#[derive(Parser, Debug)]
#[command(name = "gal", version, about = "Integral lattices in coherent cohomology over k((t))")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Model file (`-` for stdin, or a bundled file name such as e7.gal)
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Model, chart or morphism to use
    #[arg(long, global = true)]
    pub name: Option<String>,
    /// Cohomological degree
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Twist r (rational where allowed)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub twist: Option<String>,
    /// Degree bound of the first window
    #[arg(long = "D", global = true)]
    pub d: Option<u32>,
    /// t-adic precision
    #[arg(long = "N", global = true)]
    pub n: Option<u32>,
    /// Number of window doublings
    #[arg(long, global = true)]
    pub rounds: Option<usize>,
    /// Ramification bound for witness search
    #[arg(long = "e-max", global = true)]
    pub e_max: Option<u32>,
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Exit with status 4 when the result is not certified
    #[arg(long = "require-certified", global = true)]
    pub require_certified: bool,
    /// Seed for randomized suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Lattice H^i(X, G_a(r)) of a projective model
    Lattice,
    /// Cohomology of the generic fiber
    Generic,
    /// Characteristic polynomial of an endomorphism on a lattice
    Charpoly,
    /// Blowup, P1-product, shift and sandwich checks
    Invariance,
    /// Normalization of a chart
    Normalize,
    /// Decide ELEMENT ∈ √I for the chart ideal I
    RadicalMember { element: String },
    /// Decide ELEMENT ∈ G_a(r) on a chart; ELEMENT may be `f / t^k`
    GaMember { element: String },
    /// Newton polygon of a polynomial in VAR with coefficients in k[t]
    Newton {
        poly: String,
        #[arg(long, default_value = "z")]
        var: String,
    },
    /// Split random cocycles on the two-piece cover of the unit disc
    RigidCech {
        /// Circle v(z) = q separating the disc and the annulus
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Check the Čech contraction on random cochains of P^n and compute windowed cohomology
    PnHomotopy {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Run a fixed battery of small checks
    Selftest,
}

/// Rendered result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// `Some(false)` triggers exit status 4 under `--require-certified`.
    pub certified: Option<bool>,
    /// A verification inside the command failed.
    pub failed: bool,
}

impl Outcome {
    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.json).expect("json values serialize")
        } else {
            self.text.clone()
        }
    }
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io { path: "stdin".into(), source: e })?;
        return Ok(s);
    }
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => {
            let base = path.trim_end_matches(".gal");
            match BUNDLED.iter().find(|(n, _)| n.trim_end_matches(".gal") == base) {
                Some((_, text)) => Ok(text.to_string()),
                None => Err(CliError::Io { path: path.into(), source: e }),
            }
        }
    }
}

/// The model file named by `--model`, or the bundled file declaring `--name`.
pub fn load(opts: &Opts) -> Result<ModelFile, CliError> {
    if let Some(path) = &opts.model {
        return parse_model_file(&read_source(path)?);
    }
    let Some(name) = &opts.name else {
        return Err(CliError::Usage("give --model FILE or the --name of a bundled model".into()));
    };
    for (_, text) in BUNDLED {
        let f = parse_model_file(text)?;
        if f.get(name).is_some() {
            return Ok(f);
        }
    }
    Err(CliError::Usage(format!("no bundled model, chart or morphism named '{name}'")))
}

/// `--name`, or the only item of the wanted kind.
fn pick(file: &ModelFile, opts: &Opts, kind: fn(&Item) -> bool, what: &str) -> Result<String, CliError> {
    if let Some(n) = &opts.name {
        return Ok(n.clone());
    }
    let found: Vec<&str> = file.items.iter().filter(|i| kind(i)).map(|i| i.name()).collect();
    match found.as_slice() {
        [one] => Ok(one.to_string()),
        [] => Err(CliError::Usage(format!("the model file declares no {what}"))),
        many => Err(CliError::Usage(format!("several {what}s ({}); choose one with --name", many.join(", ")))),
    }
}

fn is_model(i: &Item) -> bool {
    matches!(i, Item::Model(_))
}

fn is_chart(i: &Item) -> bool {
    matches!(i, Item::Chart(_))
}

fn is_morphism(i: &Item) -> bool {
    matches!(i, Item::Morphism(_))
}

fn rational(s: &str, what: &str) -> Result<Rational64, CliError> {
    s.trim().parse::<Rational64>().map_err(|_| CliError::Usage(format!("{what}: '{s}' is not a rational number")))
}

fn twist(opts: &Opts) -> Result<Rational64, CliError> {
    opts.twist.as_deref().map_or(Ok(Rational64::from_integer(0)), |s| rational(s, "--twist"))
}

fn integer_twist(opts: &Opts) -> Result<i64, CliError> {
    let r = twist(opts)?;
    if !r.is_integer() {
        return Err(CliError::Usage("lattices need an integer twist".into()));
    }
    Ok(r.to_integer())
}

fn window(opts: &Opts) -> Result<(Window, usize), CliError> {
    let def = Window::default();
    let w = Window::new(opts.d.unwrap_or(def.d), opts.n.unwrap_or(def.n))?;
    Ok((w, opts.rounds.unwrap_or(1)))
}

fn window_json(w: Window, rounds: usize) -> Value {
    json!({"D": w.d, "N": w.n, "rounds": rounds})
}

fn degrees(opts: &Opts, model: &ProjModel) -> Vec<usize> {
    match opts.degree {
        Some(d) => vec![d],
        None => (0..=model.dimension().max(0) as usize).collect(),
    }
}

fn lattice_json(r: &LatticeReport) -> Value {
    json!({
        "degree": r.degree,
        "twist": r.twist,
        "rank": r.rank,
        "torsion": r.torsion,
        "basis": r.basis,
        "certified": r.certified,
        "generic_dimension": r.generic_dimension,
        "windows": r.windows.iter().map(|w| w.d).collect::<Vec<_>>(),
    })
}

/// Merge per-degree objects into one report: flat for a single degree, else a `degrees` list.
fn per_degree(command: &str, model: &str, win: Value, items: Vec<Value>) -> Value {
    let certified = items.iter().all(|v| v["certified"] == json!(true));
    if items.len() == 1 {
        let mut obj = items.into_iter().next().unwrap();
        obj["command"] = json!(command);
        obj["model"] = json!(model);
        obj["window"] = win;
        obj
    } else {
        json!({"command": command, "model": model, "window": win, "certified": certified, "degrees": items})
    }
}

fn cmd_lattice(opts: &Opts) -> Result<Outcome, CliError> {
    let file = load(opts)?;
    let name = pick(&file, opts, is_model, "model")?;
    let model = file.model(&name)?;
    let r = integer_twist(opts)?;
    let (w, rounds) = window(opts)?;
    let mut text = Vec::new();
    let mut items = Vec::new();
    let mut certified = true;
    for i in degrees(opts, &model) {
        let rep = cohomology_lattice(&model, i, r, w, rounds)?;
        certified &= rep.certified;
        text.push(rep.to_string());
        items.push(lattice_json(&rep));
    }
    Ok(Outcome { text: text.join("\n"), json: per_degree("lattice", &name, window_json(w, rounds), items), certified: Some(certified), failed: false })
}

fn cmd_generic(opts: &Opts) -> Result<Outcome, CliError> {
    let file = load(opts)?;
    let name = pick(&file, opts, is_model, "model")?;
    let model = file.model(&name)?;
    let (w, rounds) = window(opts)?;
    let mut text = Vec::new();
    let mut items = Vec::new();
    let mut certified = true;
    for i in degrees(opts, &model) {
        let rep = generic_fiber_cohomology(&model, i, w, rounds)?;
        certified &= rep.certified;
        text.push(rep.to_string());
        items.push(json!({"degree": i, "dimension": rep.dimension, "basis": rep.basis, "certified": rep.certified}));
    }
    Ok(Outcome { text: text.join("\n"), json: per_degree("generic", &name, window_json(w, rounds), items), certified: Some(certified), failed: false })
}

fn strings(m: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn cmd_charpoly(opts: &Opts) -> Result<Outcome, CliError> {
    let file = load(opts)?;
    let name = pick(&file, opts, is_morphism, "morphism")?;
    let f = file.morphism(&name)?;
    let r = integer_twist(opts)?;
    let (w, rounds) = window(opts)?;
    let degree = opts.degree.unwrap_or(f.source().dimension().max(0) as usize);
    let rep = morphism_action(&f, degree, r, w, rounds)?;
    let mut text = rep.to_string();
    let mut qu = Value::Null;
    let mut order = Value::Null;
    if rep.charpoly.integral && f.source().field().is_finite() && !rep.charpoly.coeffs.is_empty() {
        let q = quasi_unipotence_check(&rep.charpoly.coeffs)?;
        text.push_str(&format!("\n  {q}"));
        qu = json!(q.quasi_unipotent);
        order = json!(q.order);
    }
    text.push_str(&format!("\n  {}", if rep.certified { "certified" } else { "not certified" }));
    let json = json!({
        "command": "charpoly",
        "model": f.source().name(),
        "morphism": name,
        "degree": degree,
        "twist": r,
        "rank": rep.lattice.len(),
        "matrix": strings(&rep.lattice),
        "charpoly": rep.charpoly.to_string(),
        "integral": rep.charpoly.integral,
        "quasi_unipotent": qu,
        "order": order,
        "preserves": rep.preserves,
        "commutes": rep.commutes,
        "certified": rep.certified,
        "window": window_json(w, rounds),
    });
    Ok(Outcome { text, json, certified: Some(rep.certified), failed: !(rep.preserves && rep.commutes) })
}

fn cmd_invariance(opts: &Opts) -> Result<Outcome, CliError> {
    let file = load(opts)?;
    let name = pick(&file, opts, is_model, "model")?;
    let model = file.model(&name)?;
    let (w, rounds) = window(opts)?;
    let cfg = InvarianceConfig { window: w, rounds, twist: integer_twist(opts)?, center: None };
    let rep = invariance_suite(&model, &cfg)?;
    let checks: Vec<Value> = rep.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed})).collect();
    let json = json!({"command": "invariance", "model": name, "twist": cfg.twist, "window": window_json(w, rounds), "checks": checks});
    Ok(Outcome { text: rep.to_string().trim_end().to_string(), json, certified: None, failed: !rep.all_passed() })
}

fn chart_for(opts: &Opts) -> Result<(String, Chart), CliError> {
    let file = load(opts)?;
    let name = pick(&file, opts, is_chart, "chart")?;
    let chart = file.chart(&name)?;
    Ok((name, chart))
}

fn cmd_normalize(opts: &Opts) -> Result<Outcome, CliError> {
    let (name, chart) = chart_for(opts)?;
    let data = normalize(&chart)?;
    let ring = chart.ring();
    let gens: Vec<String> = data
        .generators(ring)
        .iter()
        .map(|g| if g.den.as_constant().is_some_and(|c| c.is_one()) { ring.fmt(&g.num) } else { format!("({})/({})", ring.fmt(&g.num), ring.fmt(&g.den)) })
        .collect();
    let eqs: Vec<String> = data.integral_equations.iter().map(|e| data.ring.fmt(e)).collect();
    let verified = data.verify();
    let mut text = format!("normalization of {name}: generators {{{}}}", gens.join(", "));
    for (i, e) in eqs.iter().enumerate() {
        text.push_str(&format!("\n  {} satisfies {} = 0", data.ring.vars[data.base_vars + i], e));
    }
    text.push_str(&format!("\n  presentation {}\n  rounds {}, re-verified: {}", data.ideal, data.rounds, if verified { "yes" } else { "NO" }));
    let json = json!({"command": "normalize", "model": name, "generators": gens, "equations": eqs, "rounds": data.rounds, "verified": verified});
    Ok(Outcome { text, json, certified: None, failed: !verified })
}

fn cmd_radical_member(opts: &Opts, element: &str) -> Result<Outcome, CliError> {
    let (name, chart) = chart_for(opts)?;
    let f = chart.parse(element)?;
    let member = radical_membership(&f, chart.ideal())?;
    let text = format!("{} {} the radical of {}", chart.ring().fmt(&f), if member { "lies in" } else { "does not lie in" }, chart.ideal());
    let json = json!({"command": "radical-member", "model": name, "element": chart.ring().fmt(&f), "member": member});
    Ok(Outcome { text, json, certified: None, failed: false })
}

/// `f` or `f / t^k`.
fn laurent(chart: &Chart, element: &str) -> Result<LaurentElement, CliError> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in element.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => split = Some(i),
            _ => {}
        }
    }
    if let Some(i) = split {
        let den = element[i + 1..].trim().replace(' ', "");
        let k = if den == "t" {
            Some(1)
        } else {
            den.strip_prefix("t^").and_then(|e| e.parse::<i64>().ok())
        };
        if let Some(k) = k {
            return Ok(LaurentElement::new(chart.parse(&element[..i])?, k));
        }
    }
    Ok(LaurentElement::poly(chart.parse(element)?))
}

fn cmd_ga_member(opts: &Opts, element: &str) -> Result<Outcome, CliError> {
    let (name, chart) = chart_for(opts)?;
    let a = laurent(&chart, element)?;
    let r = twist(opts)?;
    let m = ga_membership(&a, &chart, r)?;
    let shown = a.fmt_in(chart.ring());
    let mut text = format!("{shown} {} G_a({r}) on {name}: {}", if m.member { "is in" } else { "is not in" }, m.certificate);
    let e_max = opts.e_max.unwrap_or(6);
    let mut witness = Value::Null;
    let mut consistent = true;
    if chart.chart_vars() <= 2 {
        match place_witness_search(&a, &chart, r, e_max) {
            Ok(WitnessSearch::Found(w)) => {
                text.push_str(&format!("\n  witness {w}"));
                witness = json!(w.to_string());
                consistent = !m.member;
            }
            Ok(WitnessSearch::NotFound { points_tried, .. }) => {
                text.push_str(&format!("\n  no witness with e <= {e_max} ({points_tried} points tried)"));
            }
            Err(e) => text.push_str(&format!("\n  witness search skipped: {e}")),
        }
    }
    let json = json!({
        "command": "ga-member",
        "model": name,
        "element": shown,
        "twist": r.to_string(),
        "member": m.member,
        "certificate": m.certificate.to_string(),
        "witness": witness,
        "e_max": e_max,
    });
    Ok(Outcome { text, json, certified: None, failed: !consistent })
}

fn cmd_newton(opts: &Opts, poly: &str, var: &str) -> Result<Outcome, CliError> {
    let field = field_option(opts)?;
    if var == "t" {
        return Err(CliError::Usage("the polynomial variable cannot be t".into()));
    }
    let ring = gal_core::ideal::PolyRing::new(field, &["t", var]);
    let f = ring.parse(poly)?;
    let coeffs: Vec<Scalar> = f
        .coefficients_in(1)
        .iter()
        .map(|c: &MultiPoly| {
            let mut v = vec![field.zero(); c.degree_in(0) as usize + 1];
            for (m, x) in c.terms() {
                v[m.degree() as usize] = x.clone();
            }
            Scalar::from_upoly(UPoly::from_coeffs(field, v))
        })
        .collect();
    let np = newton_polygon(&KPoly::new(field, coeffs))?;
    let roots: Vec<Value> = np.root_valuations().iter().map(|(v, m)| json!({"valuation": v.to_string(), "multiplicity": m})).collect();
    let text = format!("Newton polygon of {} over {field}((t)): root valuations (with multiplicity) {np}", ring.fmt(&f));
    let json = json!({"command": "newton", "polynomial": ring.fmt(&f), "field": field.to_string(), "roots": roots});
    Ok(Outcome { text, json, certified: None, failed: false })
}

fn field_option(opts: &Opts) -> Result<BaseField, CliError> {
    match &opts.model {
        Some(path) => Ok(parse_model_file(&read_source(path)?)?.field),
        None => crate::modelfile::default_field(),
    }
}

fn cmd_rigid_cech(opts: &Opts, radius: &str, count: usize) -> Result<Outcome, CliError> {
    let field = field_option(opts)?;
    let q = rational(radius, "--radius")?;
    let tw = twist(opts)?;
    let prec = opts.n.unwrap_or(12) as usize;
    let seed = opts.seed.unwrap_or(0);
    let rep = rigid_cech_disc(field, q, tw, Cocycles::Random { count, prec, seed })?;
    let json = json!({
        "command": "rigid-cech",
        "radius": q.to_string(),
        "twist": tw.to_string(),
        "N": prec,
        "seed": seed,
        "count": rep.records.len(),
        "rejected": rep.rejected(),
        "failures": rep.failures(),
    });
    Ok(Outcome { text: rep.to_string(), json, certified: None, failed: rep.failures() > 0 })
}

fn cmd_pn_homotopy(opts: &Opts, n: usize, count: usize) -> Result<Outcome, CliError> {
    let field = field_option(opts)?;
    if n == 0 {
        return Err(CliError::Usage("--dim must be positive".into()));
    }
    let q = twist(opts)?;
    let w = Window::new(opts.d.unwrap_or(2), opts.n.unwrap_or(6))?;
    let seed = opts.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut sample = None;
    for k in 0..count {
        let x = random_cochain(&mut rng, field, n, k % (n + 1), q, w)?;
        let c = pn_cech_homotopy(n, q, w, &x)?;
        if !c.identity_holds {
            failures += 1;
        }
        if sample.is_none() && c.h.as_ref().is_some_and(|h| !h.is_zero()) {
            sample = Some(c);
        }
    }
    let coh = pn_window_cohomology(field, n, q, w)?;
    let mut text = format!("P^{n}, O(c^{q}), window |a| <= {}, N = {}, seed {seed}\n", w.d, w.n);
    text.push_str(&format!("dh + hd = Id on {count} random cochains: {failures} failures\n"));
    if let Some(c) = &sample {
        text.push_str(&format!("example:\n{c}\n"));
    }
    text.push_str(coh.to_string().trim_end());
    let json = json!({
        "command": "pn-homotopy",
        "dim": n,
        "twist": q.to_string(),
        "window": {"D": w.d, "N": w.n},
        "seed": seed,
        "count": count,
        "failures": failures,
        "cohomology": coh.dims,
        "h0": coh.h0.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome { text, json, certified: None, failed: failures > 0 })
}

fn bundled(name: &str) -> ModelFile {
    let text = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled file").1;
    parse_model_file(text).expect("bundled files parse")
}

fn selftest_checks() -> Vec<(&'static str, Box<dyn Fn() -> Result<bool, CliError>>)> {
    let w = Window::default();
    vec![
        (
            "P1 and P2 lattices are t*R in degree 0 and vanish above",
            Box::new(move || {
                let f = bundled("pn.gal");
                let mut ok = true;
                for name in ["P1", "P2"] {
                    let m = f.model(name)?;
                    for i in 0..=m.dimension() as usize {
                        let r = cohomology_lattice(&m, i, 0, w, 1)?;
                        ok &= r.certified && r.torsion.is_empty();
                        ok &= if i == 0 { r.rank == 1 && r.image[0][0].val() == Some(1) } else { r.rank == 0 };
                    }
                }
                Ok(ok)
            }),
        ),
        (
            "G_a(0) membership on x^2 - t",
            Box::new(|| {
                let c = bundled("conics.gal").chart("ramified")?;
                let zero = Rational64::from_integer(0);
                let x = LaurentElement::poly(c.parse("x")?);
                let one = LaurentElement::poly(c.parse("1")?);
                let ok = ga_membership(&x, &c, zero)?.member
                    && place_witness_search(&x, &c, zero, 6)?.witness().is_none()
                    && !ga_membership(&one, &c, zero)?.member
                    && place_witness_search(&one, &c, zero, 6)?.witness().is_some_and(|w| w.value == zero);
                Ok(ok)
            }),
        ),
        (
            "inversion on E over F5 acts by T + 1, M = 2",
            Box::new(move || {
                let f = bundled("e5.gal").morphism("inv")?;
                let rep = morphism_action(&f, 1, 0, w, 1)?;
                let q = quasi_unipotence_check(&rep.charpoly.coeffs)?;
                Ok(rep.charpoly.to_string() == "T + 1" && rep.charpoly.integral && q.order == Some(2))
            }),
        ),
        (
            "zeta twist on E over F7 acts by T - w, M = 3",
            Box::new(move || {
                let f = bundled("e7.gal").morphism("zeta")?;
                let rep = morphism_action(&f, 1, 0, w, 1)?;
                let q = quasi_unipotence_check(&rep.charpoly.coeffs)?;
                let s = rep.charpoly.to_string();
                Ok(["T - 2", "T - 4", "T + 3", "T + 5"].contains(&s.as_str()) && rep.charpoly.integral && q.order == Some(3))
            }),
        ),
        (
            "Cousin splitting of 50 random cocycles at N = 12",
            Box::new(|| {
                let one = Rational64::from_integer(1);
                let rep = rigid_cech_disc(BaseField::Rationals, one, Rational64::from_integer(0), Cocycles::Random { count: 50, prec: 12, seed: 1 })?;
                Ok(rep.failures() == 0)
            }),
        ),
        (
            "dh + hd = Id on P1 and P2",
            Box::new(|| {
                let w = Window::new(2, 6)?;
                let mut rng = ChaCha8Rng::seed_from_u64(1);
                let q = Rational64::from_integer(0);
                for n in [1, 2] {
                    for k in 0..100 {
                        let x = random_cochain(&mut rng, BaseField::Rationals, n, k % (n + 1), q, w)?;
                        if !pn_cech_homotopy(n, q, w, &x)?.identity_holds {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }),
        ),
        (
            "bundled files round-trip",
            Box::new(|| {
                for (_, text) in BUNDLED {
                    let f = parse_model_file(text)?;
                    if parse_model_file(&f.to_string())? != f {
                        return Ok(false);
                    }
                }
                Ok(true)
            }),
        ),
    ]
}

fn cmd_selftest() -> Result<Outcome, CliError> {
    let mut lines = Vec::new();
    let mut checks = Vec::new();
    let mut all = true;
    for (name, check) in selftest_checks() {
        let start = Instant::now();
        let (passed, note) = match check() {
            Ok(p) => (p, String::new()),
            Err(e) => (false, format!(" ({e})")),
        };
        all &= passed;
        lines.push(format!("{} {name}{note} [{:.2}s]", if passed { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64()));
        checks.push(json!({"name": name, "passed": passed}));
    }
    Ok(Outcome { text: lines.join("\n"), json: json!({"command": "selftest", "checks": checks}), certified: None, failed: !all })
}

/// Run one parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let o = &cli.opts;
    match &cli.command {
        Command::Lattice => cmd_lattice(o),
        Command::Generic => cmd_generic(o),
        Command::Charpoly => cmd_charpoly(o),
        Command::Invariance => cmd_invariance(o),
        Command::Normalize => cmd_normalize(o),
        Command::RadicalMember { element } => cmd_radical_member(o, element),
        Command::GaMember { element } => cmd_ga_member(o, element),
        Command::Newton { poly, var } => cmd_newton(o, poly, var),
        Command::RigidCech { radius, count } => cmd_rigid_cech(o, radius, *count),
        Command::PnHomotopy { dim, count } => cmd_pn_homotopy(o, *dim, *count),
        Command::Selftest => cmd_selftest(),
    }
}
