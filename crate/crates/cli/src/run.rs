use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use wreathdim::ballstore::BallStore;
use wreathdim::cayley::CayleyGraph;
use wreathdim::config::{Config, Format, LatticeMode, LengthTarget};
use wreathdim::covers::{
    combine_covers, component_diameters, interval_cover, kernel_control_bound, lebesgue_ok, Cover,
    GroupWindow,
};
use wreathdim::cubes::{
    growth_lower_bound_certificate, lattice_exhaustive, lattice_random, Lattice,
};
use wreathdim::rational::int;
use wreathdim::suite::{check_ids, run_suite};
use wreathdim::{Error, Explorer, GroupElement, Rational, WreathContext};

use crate::report::Report;
use crate::{Command, Opts};

const DEFAULT_BUDGET: usize = 10_000_000;

struct Settings {
    format: Format,
    seed: u64,
    ex: Explorer,
}

fn settings(opts: &Opts, cfg: &Config) -> Result<Settings> {
    let run = &cfg.run;
    let budget = opts.budget.or(run.budget).unwrap_or(DEFAULT_BUDGET);
    let workers = opts.workers.or(run.workers).unwrap_or(1);
    let mut ex = Explorer::new().with_budget(budget).with_workers(workers)?;
    if let Some(dir) = opts.cache_dir.as_ref().or(run.cache_dir.as_ref()) {
        ex = ex.with_store(BallStore::open(dir)?);
    }
    Ok(Settings {
        format: opts.format.or(run.format).unwrap_or_default(),
        seed: opts.seed.or(run.seed).unwrap_or(0),
        ex,
    })
}

/// Runs one subcommand; `Ok(false)` when a check failed.
pub fn run(command: &Command, opts: &Opts, default_config: &str) -> Result<bool> {
    if let Command::Verify { list: true, .. } = command {
        for id in check_ids() {
            println!("{id}");
        }
        return Ok(true);
    }
    let cfg = match &opts.config {
        Some(path) => Config::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => Config::from_toml(default_config)?,
    };
    let s = settings(opts, &cfg)?;
    let report = match command {
        Command::Growth => growth(&cfg, &s)?,
        Command::Length => length(&cfg, &s)?,
        Command::Components => components(&cfg, &s)?,
        Command::Control => control(&cfg, &s)?,
        Command::Cube => cube(&cfg, &s)?,
        Command::Lattice => lattice(&cfg, &s)?,
        Command::Verify { checks, .. } => verify(&s, checks)?,
    };
    match opts.out.as_ref().or(cfg.run.out.as_ref()) {
        Some(path) => {
            let mut f = BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            report.write(s.format, &mut f)?;
            f.flush()?;
        }
        None => report.write(s.format, &mut io::stdout().lock())?,
    }
    Ok(report.passed)
}

fn r(v: &Rational) -> Value {
    Value::String(v.to_string())
}

fn growth(cfg: &Config, s: &Settings) -> Result<Report> {
    let sec = cfg.section(&cfg.growth, "growth")?;
    let mut rep = Report::new("growth", &["target", "spec_hash", "r", "gamma"]);
    for name in &sec.targets {
        let (hash, values): (_, Vec<usize>) = if let Some(g) = cfg.groups.get(name) {
            (
                g.spec_hash(),
                sec.radii
                    .iter()
                    .map(|x| s.ex.growth(g, x))
                    .collect::<wreathdim::Result<_>>()?,
            )
        } else {
            let w = cfg.wreath(name)?;
            (
                w.spec_hash(),
                sec.radii
                    .iter()
                    .map(|x| s.ex.growth(w, x))
                    .collect::<wreathdim::Result<_>>()?,
            )
        };
        rep.hash(hash);
        for (x, gamma) in sec.radii.iter().zip(values) {
            rep.row(vec![json!(name), json!(hash), r(x), json!(gamma)]);
        }
    }
    Ok(rep)
}

fn length(cfg: &Config, s: &Settings) -> Result<Report> {
    let targets = cfg.section(&cfg.length, "length")?;
    let mut rep = Report::new(
        "length",
        &["target", "spec_hash", "element", "length", "word"],
    );
    for t in targets {
        let (name, hash, element, len, word) = match t {
            LengthTarget::Group { name, element } => {
                let g = &cfg.groups[name];
                let word = s.ex.shortest_word(g, element)?;
                let letters: Vec<String> =
                    word.iter().map(|&l| g.letters()[l].to_string()).collect();
                (
                    name,
                    g.spec_hash(),
                    element.to_string(),
                    word.len(),
                    letters.join(" "),
                )
            }
            LengthTarget::Wreath { name, element } => {
                let w = cfg.wreath(name)?;
                let word = s.ex.shortest_word(w, element)?;
                (
                    name,
                    w.spec_hash(),
                    element.to_string(),
                    word.len(),
                    w.format_word(&word),
                )
            }
        };
        rep.hash(hash);
        rep.row(vec![
            json!(name),
            json!(hash),
            json!(element),
            json!(len),
            json!(word),
        ]);
    }
    Ok(rep)
}

fn window<'a>(
    ctx: &'a WreathContext,
    ex: &'a Explorer,
    radius: &Rational,
    kernel: bool,
) -> wreathdim::Result<GroupWindow<'a, WreathContext>> {
    GroupWindow::ball(ctx, ex, radius, |e| !kernel || ctx.is_kernel(e))
}

fn components(cfg: &Config, s: &Settings) -> Result<Report> {
    let sec = cfg.section(&cfg.components, "components")?;
    let ctx = cfg.wreath(&sec.wreath)?;
    let w = window(ctx, &s.ex, &sec.window, sec.kernel)?;
    let whole = Cover::new(w.points().len(), vec![(0..w.points().len()).collect()])?;
    let mut rep = Report::new(
        "components",
        &[
            "wreath",
            "spec_hash",
            "window",
            "kernel",
            "points",
            "r",
            "components_max_diameter",
            "kernel_bound",
            "within_bound",
        ],
    );
    rep.hash(ctx.spec_hash());
    for x in &sec.radii {
        let measured = component_diameters(&w, &whole, x)?[0];
        let (bound, ok) = if sec.kernel {
            let b = kernel_control_bound(&s.ex, ctx, x)?;
            (r(&b), json!(measured <= b))
        } else {
            (Value::Null, Value::Null)
        };
        rep.passed &= ok != json!(false);
        rep.row(vec![
            json!(sec.wreath),
            json!(ctx.spec_hash()),
            r(&sec.window),
            json!(sec.kernel),
            json!(w.points().len()),
            r(x),
            r(&measured),
            bound,
            ok,
        ]);
    }
    Ok(rep)
}

fn control(cfg: &Config, s: &Settings) -> Result<Report> {
    let sec = cfg.section(&cfg.control, "control")?;
    let ctx = cfg.wreath(&sec.wreath)?;
    let base = ctx.base();
    let mut rep = Report::new(
        "control",
        &[
            "stage",
            "spec_hash",
            "window",
            "points",
            "r",
            "measured",
            "predicted",
            "within_bound",
        ],
    );
    rep.hash(ctx.spec_hash());
    rep.hash(base.spec_hash());

    let kw = window(ctx, &s.ex, &sec.window, true)?;
    let whole = Cover::new(kw.points().len(), vec![(0..kw.points().len()).collect()])?;
    for x in &sec.radii {
        let measured = component_diameters(&kw, &whole, x)?[0];
        let bound = kernel_control_bound(&s.ex, ctx, x)?;
        rep.passed &= measured <= bound;
        rep.row(vec![
            json!("kernel"),
            json!(ctx.spec_hash()),
            r(&sec.window),
            json!(kw.points().len()),
            r(x),
            r(&measured),
            r(&bound),
            json!(measured <= bound),
        ]);
    }

    let (lo, hi) = sec.interval;
    if base.validate(&GroupElement::Int(lo)).is_err() {
        return Err(Error::Unsupported(format!(
            "interval covers need an integer base; `{}` has another base",
            sec.wreath
        ))
        .into());
    }
    let rr = &sec.combine_radius;
    let (iv, ic) = interval_cover(lo, hi, sec.block, sec.pad)?;
    let lebesgue = lebesgue_ok(&iv, &ic, rr)?;
    if !lebesgue.ok {
        return Err(Error::Precondition(format!(
            "the interval cover of [{lo}, {hi}] with block {} and pad {} has Lebesgue number below {rr}",
            sec.block, sec.pad
        ))
        .into());
    }
    let d = component_diameters(&iv, &ic, rr)?
        .into_iter()
        .max()
        .unwrap_or_default();
    rep.row(vec![
        json!("interval"),
        json!(base.spec_hash()),
        json!(format!("[{lo}, {hi}]")),
        json!(iv.points.len()),
        r(rr),
        r(&d),
        Value::Null,
        Value::Null,
    ]);
    let cw = window(ctx, &s.ex, &sec.combine_window, false)?;
    let i_points: Vec<_> = (lo..=hi)
        .map(|x| ctx.embed_base(&GroupElement::Int(x)))
        .collect();
    let d0k = |t: &Rational| Ok((int(2) * t + int(1)) * int(s.ex.growth(base, t)? as i64));
    let out = combine_covers(&cw, |x| ctx.project(x), &i_points, &ic, &d, d0k, rr)?;
    let measured = component_diameters(&cw, &out.cover, rr)?;
    let max = measured.iter().copied().max().unwrap_or_default();
    rep.passed &= max <= out.predicted;
    rep.row(vec![
        json!("combined"),
        json!(ctx.spec_hash()),
        r(&sec.combine_window),
        json!(cw.points().len()),
        r(rr),
        r(&max),
        r(&out.predicted),
        json!(max <= out.predicted),
    ]);
    rep.detail = json!({
        "interval_parts": ic.part_sizes(),
        "combined_part_diameters": measured.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    });
    Ok(rep)
}

fn cube(cfg: &Config, s: &Settings) -> Result<Report> {
    let sec = cfg.section(&cfg.cube, "cube")?;
    let ctx = cfg.wreath(&sec.wreath)?;
    let mut rep = Report::new(
        "cube",
        &[
            "wreath",
            "spec_hash",
            "n",
            "r",
            "gamma",
            "k",
            "edges",
            "max_edge_upper",
            "pairs",
            "pairs_exhaustive",
            "lip_inverse_at_most_one",
            "passed",
        ],
    );
    rep.hash(ctx.spec_hash());
    let mut certs = Vec::new();
    for x in &sec.radii {
        let (k, cube, cert) = growth_lower_bound_certificate(ctx, &s.ex, sec.n, x, s.seed)?;
        rep.passed &= cert.passed();
        rep.row(vec![
            json!(sec.wreath),
            json!(ctx.spec_hash()),
            json!(sec.n),
            r(x),
            json!(cert.gamma),
            json!(k),
            json!(cube.edges.len()),
            json!(cube.max_edge_upper()),
            json!(cube.pairs.len()),
            json!(cube.pairs_exhaustive),
            json!(cert.lip_inverse_at_most_one),
            json!(cert.passed()),
        ]);
        certs.push(serde_json::to_value(&cert)?);
    }
    rep.detail = json!({ "certificates": certs });
    Ok(rep)
}

fn lattice(cfg: &Config, s: &Settings) -> Result<Report> {
    let sec = cfg.section(&cfg.lattice, "lattice")?;
    let lat = Lattice::new(sec.n, sec.k)?;
    let summary = match sec.mode {
        LatticeMode::Exhaustive => lattice_exhaustive(&s.ex, lat)?,
        LatticeMode::Random => lattice_random(&s.ex, lat, sec.samples, s.seed),
    };
    let mut rep = Report::new(
        "lattice",
        &[
            "n",
            "k",
            "mode",
            "seed",
            "covers",
            "hypothesis_holds",
            "witnesses",
            "counterexamples",
            "passed",
        ],
    );
    rep.passed = summary.passed();
    rep.row(vec![
        json!(sec.n),
        json!(sec.k),
        json!(summary.mode),
        if sec.mode == LatticeMode::Random {
            json!(s.seed)
        } else {
            Value::Null
        },
        json!(summary.covers),
        json!(summary.hypothesis_holds),
        json!(summary.witnesses),
        json!(summary.counterexamples.len()),
        json!(summary.passed()),
    ]);
    rep.detail = serde_json::to_value(&summary)?;
    Ok(rep)
}

fn verify(s: &Settings, only: &[String]) -> Result<Report> {
    let known = check_ids();
    if let Some(bad) = only.iter().find(|c| !known.contains(&c.as_str())) {
        return Err(Error::Config {
            key: "check".into(),
            message: format!("unknown check `{bad}`; known checks: {}", known.join(", ")),
        }
        .into());
    }
    let suite = run_suite(&s.ex, s.seed, only);
    let mut rep = Report::new("verify", &["id", "title", "passed", "spec_hashes"]);
    let mut details = serde_json::Map::new();
    for c in &suite.checks {
        c.spec_hashes.iter().for_each(|h| rep.hash(*h));
        let hashes: Vec<String> = c.spec_hashes.iter().map(|h| h.to_hex()).collect();
        rep.row(vec![
            json!(c.id),
            json!(c.title),
            json!(c.passed),
            json!(hashes.join(";")),
        ]);
        details.insert(c.id.to_string(), c.detail.clone());
    }
    rep.passed = suite.passed;
    rep.detail = json!({ "workers": suite.workers, "budget": suite.budget, "checks": details });
    Ok(rep)
}
