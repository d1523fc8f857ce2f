use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use cremona_kit::constructions::{
    c5_big_link, c6_big_link, conjugate_to_p2, dejonquieres_decompose, refined_target_report, BigLink,
    ConstructionError, DeJonquieresMap, Decomposition, RefinedTargetReport,
};
use cremona_kit::exactfield::{
    factor, factor_over_prime_field, irreducible_check, parse_poly, FieldError, FieldSpec, PolynomialOverField,
};
use cremona_kit::freeprod::{homo_eval, homo_refined_eval, HomoError, DEFAULT_DEPTH_THRESHOLD};
use cremona_kit::galois_orbits::{
    enumerate_point_orbits, large_orbit, match_transform, orbit_from_poly, pgl3_classify, transitive_sym4_audit,
    ClassFilter, OrbitError, PointOrbit, TemplateKind,
};
use cremona_kit::linsys::{push_oracle, push_type2, LinearSystemClass, LinsysError};
use cremona_kit::mfs_catalog::{
    link_validate, mfs_invariants, CatalogError, LinkType, MoriFiberSpaceModel, SarkisovLink,
};
use cremona_kit::rewriting::{
    fuzz_relator, reduce_relation, reorder_by_depth, word_validate, FuzzConfig, GroupoidWord, RewriteError,
};

const THREADS_VAR: &str = "CREMONA_KIT_THREADS";

#[derive(Parser)]
#[command(name = "cremona-kit", version, about = "Galois orbits, Sarkisov links and relation words for the plane Cremona group")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Galois orbits of points in P².
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Polynomials over Q and finite fields.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Linear systems on conic bundles.
    #[command(subcommand)]
    Linsys(LinsysCmd),
    /// Words in the groupoid of Sarkisov links.
    #[command(subcommand)]
    Word(WordCmd),
    /// The homomorphism onto free products.
    #[command(subcommand)]
    Homo(HomoCmd),
    /// de Jonquières maps of P¹×P¹.
    #[command(subcommand)]
    Dejonquieres(DejonquieresCmd),
    /// Conic bundle links of large odd depth on del Pezzo surfaces of degree 5 and 6.
    #[command(subcommand)]
    Biglink(BiglinkCmd),
    /// Mori fiber spaces and Sarkisov links.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Refined target reports.
    #[command(subcommand)]
    Report(ReportCmd),
    /// Structural audits.
    #[command(subcommand)]
    Audit(AuditCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum TemplateArg {
    Conic,
    Split,
    Line,
}

impl From<TemplateArg> for TemplateKind {
    fn from(t: TemplateArg) -> Self {
        match t {
            TemplateArg::Conic => TemplateKind::Conic,
            TemplateArg::Split => TemplateKind::Split,
            TemplateArg::Line => TemplateKind::Line,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    All,
    Gp,
    Both,
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Orbit of the roots of an irreducible polynomial placed on a template.
    Make {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum)]
        template: TemplateArg,
        /// Second quadratic of a split pair.
        #[arg(long)]
        poly2: Option<String>,
        /// Accept polynomials over Q whose irreducibility is not certified.
        #[arg(long)]
        allow_unverified: bool,
    },
    /// TSV of closed points of degree n and their PGL₃ classes.
    Census {
        #[arg(long)]
        field: String,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value = "both")]
        filter: FilterArg,
    },
    /// PGL₃ classes of a JSON list of orbits.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
    },
    /// A projective transformation sending one list of orbits to another.
    Match {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Factorization over a finite field.
    Factor {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
    },
    /// Irreducibility certificate of --poly, or the first irreducible of --degree.
    Irreducible {
        #[arg(long)]
        field: String,
        #[arg(long, conflicts_with = "degree", required_unless_present = "degree")]
        poly: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Subcommand)]
enum LinsysCmd {
    /// Push λ(−K) + νf through a type II link; all values doubled.
    Push {
        #[arg(long)]
        two_lambda: u64,
        #[arg(long, allow_hyphen_values = true)]
        two_nu: i64,
        /// Size of the blown-up orbit of the default link on F₁.
        #[arg(long, required_unless_present = "link")]
        orbit_size: Option<usize>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        two_mult: i64,
        /// Link JSON to push through instead of the default link.
        #[arg(long, conflicts_with = "orbit_size")]
        link: Option<PathBuf>,
        /// Use the lattice computation instead of the closed formulas.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Subcommand)]
enum WordCmd {
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Reduce a relator to its residual.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the applied moves here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Move links of depth ≥ delta ahead of shallower links over other fibers.
    Reorder {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH_THRESHOLD)]
        delta: usize,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// A random relator; the seed fixes the output.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum HomoCmd {
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// Route letters to the refined target; needs --field.
        #[arg(long, requires = "field")]
        refined: bool,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH_THRESHOLD)]
        delta: usize,
    },
}

#[derive(Subcommand)]
enum DejonquieresCmd {
    /// Word of links for [x₀:x₁; y₀:y₁] ↦ [x₀y₁ᵈ : x₁p; y₀:y₁].
    Decompose {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
        /// Also emit the word conjugated to a word on P².
        #[arg(long)]
        conjugate: bool,
    },
}

#[derive(Args)]
struct RPoly {
    #[arg(long)]
    field: String,
    /// Irreducible polynomial of odd degree fixing the link's orbit.
    #[arg(long)]
    rpoly: String,
}

#[derive(Subcommand)]
enum BiglinkCmd {
    /// Link on a degree 5 del Pezzo surface from an orbit of four points [1:a:a²].
    C5 {
        #[command(flatten)]
        r: RPoly,
        #[arg(long)]
        orbit4: String,
    },
    /// Link on a degree 6 del Pezzo surface from a pair [1:a:0], [1:0:b].
    C6 {
        #[command(flatten)]
        r: RPoly,
        #[arg(long)]
        g: String,
        /// Defaults to --g.
        #[arg(long)]
        h: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Check a link or a Mori fiber space model given as JSON.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReportCmd {
    Refined {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 25)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Transitive subgroups of Sym₄ with exchange witnesses.
    Sym4,
}

#[derive(Debug)]
struct Failure {
    kind: String,
    detail: String,
}

macro_rules! domain_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { kind: e.kind().to_string(), detail: e.to_string() }
            }
        }
    )*};
}

domain_error!(FieldError, OrbitError, CatalogError, LinsysError, RewriteError, HomoError, ConstructionError);

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { kind: "InvalidJson".into(), detail: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { kind: "Io".into(), detail: e.to_string() }
    }
}

type Res<T> = Result<T, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure {
            kind: "Io".into(),
            detail: format!("{}: {e}", path.display()),
        })?
    };
    Ok(serde_json::from_str(&text)?)
}

fn to_json<T: Serialize>(v: &T) -> Res<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Res<()> {
    std::fs::write(path, to_json(v)?)?;
    Ok(())
}

fn field(label: &str) -> Res<FieldSpec> {
    let f = FieldSpec::parse(label)?;
    f.validate()?;
    Ok(f)
}

fn poly(f: &FieldSpec, text: &str) -> Res<PolynomialOverField> {
    Ok(parse_poly(f, text)?)
}

fn field_order(f: &FieldSpec) -> Res<u64> {
    f.order()
        .and_then(|q| u64::try_from(q).ok())
        .ok_or_else(|| FieldError::UnsupportedField(f.to_string()).into())
}

fn filters(f: FilterArg) -> Vec<ClassFilter> {
    match f {
        FilterArg::All => vec![ClassFilter::All],
        FilterArg::Gp => vec![ClassFilter::GeneralPositionOnly],
        FilterArg::Both => vec![ClassFilter::All, ClassFilter::GeneralPositionOnly],
    }
}

fn filter_name(f: ClassFilter) -> &'static str {
    match f {
        ClassFilter::All => "all",
        ClassFilter::GeneralPositionOnly => "general_position",
    }
}

fn run(cmd: Cmd) -> Res<String> {
    match cmd {
        Cmd::Orbit(c) => orbit(c),
        Cmd::Field(c) => field_cmd(c),
        Cmd::Linsys(LinsysCmd::Push { two_lambda, two_nu, orbit_size, two_mult, link, oracle }) => {
            let link = match link {
                Some(p) => read_json::<SarkisovLink>(&p)?,
                None => default_link(orbit_size.unwrap_or(1))?,
            };
            let key = link
                .orbit_src
                .as_ref()
                .map(|o| o.key())
                .ok_or_else(|| LinsysError::InvalidLink("link has no source orbit".into()))?;
            let h = LinearSystemClass::new(two_lambda, two_nu).with_mult(&key, two_mult);
            let out = if oracle { push_oracle(&h, &link)? } else { push_type2(&h, &link)? };
            to_json(&out)
        }
        Cmd::Word(c) => word(c),
        Cmd::Homo(HomoCmd::Eval { input, refined, field: f, delta }) => {
            let w: GroupoidWord = read_json(&input)?;
            if refined {
                let f = field(f.as_deref().unwrap_or_default())?;
                to_json(&homo_refined_eval(&w, &f)?)
            } else {
                to_json(&homo_eval(&w, delta)?)
            }
        }
        Cmd::Dejonquieres(DejonquieresCmd::Decompose { field: f, poly: p, conjugate }) => {
            let f = field(&f)?;
            let d = dejonquieres_decompose(&DeJonquieresMap::new(poly(&f, &p)?))?;
            eprint!("{}", dejonquieres_summary(&d));
            if conjugate {
                let mut v = serde_json::to_value(&d)?;
                v["conjugated"] = serde_json::to_value(conjugate_to_p2(&d.word)?)?;
                to_json(&v)
            } else {
                to_json(&d)
            }
        }
        Cmd::Biglink(c) => biglink(c),
        Cmd::Catalog(CatalogCmd::Validate { input }) => catalog_validate(&input),
        Cmd::Report(ReportCmd::Refined { field: f, bound }) => {
            let r = refined_target_report(&field(&f)?, bound)?;
            eprint!("{}", report_summary(&r));
            to_json(&r)
        }
        Cmd::Audit(AuditCmd::Sym4) => to_json(&transitive_sym4_audit()),
    }
}

fn orbit(c: OrbitCmd) -> Res<String> {
    match c {
        OrbitCmd::Make { field: f, poly: p, template, poly2, allow_unverified } => {
            let f = field(&f)?;
            let p = poly(&f, &p)?;
            let p2 = poly2.map(|t| poly(&f, &t)).transpose()?;
            to_json(&orbit_from_poly(&f, &p, template.into(), p2.as_ref(), allow_unverified)?)
        }
        OrbitCmd::Census { field: f, size, filter } => {
            let q = field_order(&field(&f)?)?;
            let orbits = enumerate_point_orbits(q, size)?;
            let mut out = String::from("q\tn\tfilter\torbit_count\tclass_count\n");
            for flt in filters(filter) {
                let classes = if orbits.is_empty() { Vec::new() } else { pgl3_classify(&orbits, q, flt)? };
                let counted = match flt {
                    ClassFilter::All => orbits.len(),
                    ClassFilter::GeneralPositionOnly => classes.iter().map(|c| c.members).sum(),
                };
                writeln!(out, "{q}\t{size}\t{}\t{counted}\t{}", filter_name(flt), classes.len()).unwrap();
            }
            Ok(out)
        }
        OrbitCmd::Classify { input, filter } => {
            let orbits: Vec<PointOrbit> = read_json(&input)?;
            let first = orbits
                .first()
                .ok_or_else(|| OrbitError::PointCount { expected: 1, got: 0 })?;
            let q = field_order(&first.field)?;
            let flt = match filter {
                FilterArg::Gp => ClassFilter::GeneralPositionOnly,
                _ => ClassFilter::All,
            };
            to_json(&pgl3_classify(&orbits, q, flt)?)
        }
        OrbitCmd::Match { from, to } => {
            let p: Vec<PointOrbit> = read_json(&from)?;
            let q: Vec<PointOrbit> = read_json(&to)?;
            to_json(&match_transform(&p, &q)?)
        }
    }
}

fn field_cmd(c: FieldCmd) -> Res<String> {
    match c {
        FieldCmd::Factor { field: f, poly: p } => {
            let f = field(&f)?;
            let factors: Vec<Value> = factor_over_prime_field(&poly(&f, &p)?)?
                .into_iter()
                .map(|(g, m)| json!({ "factor": g, "multiplicity": m }))
                .collect();
            to_json(&factors)
        }
        FieldCmd::Irreducible { field: f, poly: Some(p), .. } => {
            let f = field(&f)?;
            to_json(&irreducible_check(&poly(&f, &p)?)?)
        }
        FieldCmd::Irreducible { field: f, degree, .. } => {
            let f = field(&f)?;
            let d = degree.unwrap_or(1);
            if d == 0 {
                return Err(FieldError::ConstantPolynomial.into());
            }
            first_irreducible(&f, d)
        }
    }
}

fn first_irreducible(f: &FieldSpec, d: usize) -> Res<String> {
    let p = cremona_kit::with_finite_field!(
        f,
        return Err(FieldError::UnsupportedField(f.to_string()).into()),
        |k| PolynomialOverField::from_typed(&k, factor::first_irreducible(&k, d))
    );
    to_json(&p)
}

fn default_link(size: usize) -> Res<SarkisovLink> {
    let o = large_orbit(&FieldSpec::Rationals, size, false)?;
    let x = MoriFiberSpaceModel::hirzebruch(1);
    Ok(SarkisovLink::new(
        LinkType::II,
        x.clone(),
        x.labeled("target"),
        Some(o.clone().with_tag("src")),
        Some(o.with_tag("tgt")),
        None,
    ))
}

fn word(c: WordCmd) -> Res<String> {
    match c {
        WordCmd::Validate { input } => to_json(&word_validate(&read_json(&input)?)),
        WordCmd::Reduce { input, log } => {
            let r = reduce_relation(&read_json(&input)?)?;
            if let Some(p) = log {
                write_json(&p, &r.moves)?;
            }
            to_json(&r)
        }
        WordCmd::Reorder { input, delta, log } => {
            let (w, moves) = reorder_by_depth(&read_json(&input)?, delta)?;
            if let Some(p) = log {
                write_json(&p, &moves)?;
            }
            to_json(&w)
        }
        WordCmd::Fuzz { seed, max_len } => {
            let cfg = FuzzConfig { max_len, ..FuzzConfig::default() };
            to_json(&fuzz_relator(seed, &cfg))
        }
    }
}

fn biglink(c: BiglinkCmd) -> Res<String> {
    let (r, built) = match c {
        BiglinkCmd::C5 { r, orbit4 } => {
            let f = field(&r.field)?;
            let g = poly(&f, &orbit4)?;
            let o = orbit_from_poly(&f, &g, TemplateKind::Conic, None, false)?;
            let rp = poly(&f, &r.rpoly)?;
            (r, c5_big_link(&o, &rp)?)
        }
        BiglinkCmd::C6 { r, g, h } => {
            let f = field(&r.field)?;
            let g = poly(&f, &g)?;
            let h = h.map(|t| poly(&f, &t)).transpose()?.unwrap_or_else(|| g.clone());
            let o = orbit_from_poly(&f, &g, TemplateKind::Split, Some(&h), false)?;
            let rp = poly(&f, &r.rpoly)?;
            (r, c6_big_link(&o, &rp)?)
        }
    };
    eprint!("{}", biglink_summary(&r.field, &built));
    to_json(&built)
}

fn catalog_validate(input: &Path) -> Res<String> {
    let v: Value = read_json(input)?;
    if v.get("type").is_some() {
        let l: SarkisovLink = serde_json::from_value(v)?;
        return to_json(&link_validate(&l));
    }
    let x: MoriFiberSpaceModel = serde_json::from_value(v)?;
    x.validate()?;
    to_json(&json!({ "verdict": "Ok", "invariants": mfs_invariants(&x) }))
}

fn dejonquieres_summary(d: &Decomposition) -> String {
    let mut s = String::from("letter\tsource\ttarget\tdepth\tbase points\n");
    for (i, l) in d.word.letters.iter().enumerate() {
        let loc = d
            .audit
            .base_points
            .iter()
            .find(|b| b.letter == i)
            .map_or(String::new(), |b| b.location.clone());
        writeln!(s, "{i}\t{}\t{}\t{}\t{loc}", l.source().key(), l.target().key(), l.depth()).unwrap();
    }
    writeln!(
        s,
        "bidegree (1,{})\tself-intersection {}\tbase points {}",
        d.audit.bidegree[1], d.audit.self_intersection, d.audit.total_base_points
    )
    .unwrap();
    s
}

fn biglink_summary(field: &str, b: &BigLink) -> String {
    let family = match b.link.source.kind {
        cremona_kit::mfs_catalog::MfsKind::CB5 { .. } => "dp5",
        _ => "dp6",
    };
    let mut s = String::from("field\tfamily\tdepth\tconics\tcertification\tcenter\n");
    writeln!(
        s,
        "{field}\t{family}\t{}\t{}\t{}\t{}",
        b.link.depth,
        b.audit.conics,
        serde_json::to_value(b.audit.mode).map(|v| v.as_str().unwrap_or("").to_string()).unwrap_or_default(),
        b.audit.center.to_string_in("t")
    )
    .unwrap();
    s
}

fn report_summary(r: &RefinedTargetReport) -> String {
    let mut s = String::from("witness\tlength\tfactors\n");
    for w in &r.witnesses {
        writeln!(s, "{}\t{}\t{}", w.family, w.word.len(), w.image.factors().len()).unwrap();
    }
    let ns: Vec<String> = r.i_indices.iter().map(|i| i.n.to_string()).collect();
    writeln!(s, "I indices n = {}\tdistinct factors {}", ns.join(","), r.distinct_factors).unwrap();
    s
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": { "kind": f.kind, "detail": f.detail } }));
            ExitCode::from(1)
        }
    }
}
