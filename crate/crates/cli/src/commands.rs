use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use latgen::bounds::{Enclosure, ZetaContext};
use latgen::experiments::{
    bounds_table_csv, coprime_table_csv, desk_lemma_instances, desk_tv_instances, fullrank_threshold, parse_n_list,
    run_bounds_table, run_coprime_table, run_fullrank_check, run_lemma_verification, run_tv_check,
    run_unimodular_experiment, write_reports_csv, ExperimentConfig, MPolicy, FULLRANK_STREAM,
};
use latgen::lattice::{LatticeBasis, Window};
use latgen::numeric::{parse_rational, parse_scaled_integer, rat, to_f64};
use latgen::sampling::RngStream;

use crate::{BoundsArgs, Command, Common, CoprimeArgs, FullrankArgs, LemmaArgs, Outcome, TvArgs, UnimodularArgs};

/// Largest gap between maximal and minimal frequency seen at full scale.
const MAX_SPREAD: f64 = 0.0366;

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Unimodular(a) => unimodular(a),
        Command::Coprime(a) => coprime(a),
        Command::BoundsTable(a) => bounds(a),
        Command::LemmaVerify(a) => lemma(a),
        Command::TvCheck(a) => tv(a),
        Command::FullrankCheck(a) => fullrank(a),
    }
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::AssertionFailed
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn load_lattice(path: &Path) -> Result<LatticeBasis> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    LatticeBasis::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn config_from(a: &UnimodularArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None if a.paper_scale => ExperimentConfig::paper_scale(),
        None => ExperimentConfig {
            workers: default_workers(),
            ..Default::default()
        },
    };
    let Common { out, seed, workers } = &a.common;
    if let Some(n) = &a.n {
        cfg.n = parse_n_list(n).map_err(anyhow::Error::msg)?;
    }
    if let Some(m) = a.m {
        cfg.m = MPolicy::Fixed(m);
    }
    if let Some(v) = a.reps {
        cfg.reps = v;
    }
    if let Some(v) = a.samples {
        cfg.samples = v;
    }
    if let Some(s) = &a.sampler {
        cfg.sampler = s.parse().map_err(anyhow::Error::msg)?;
    }
    if let Some(v) = a.max_rejects {
        cfg.max_rejects = v;
    }
    if let Some(v) = seed {
        cfg.seed = *v;
    }
    if let Some(v) = workers {
        cfg.workers = *v;
    }
    if out.is_some() {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

/// `runs.csv` becomes `runs-C10000.csv` when several values of C are given.
fn out_for(base: &Path, c: i128) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-C{c}.{ext}"),
        None => format!("{stem}-C{c}"),
    };
    base.with_file_name(name)
}

fn unimodular(a: UnimodularArgs) -> Result<Outcome> {
    let base = config_from(&a)?;
    let cs: Vec<i128> = if a.c.is_empty() {
        vec![base.c]
    } else {
        a.c.iter().map(|s| parse_scaled_integer(s).map_err(anyhow::Error::msg)).collect::<Result<_>>()?
    };
    let mut ok = true;
    for &c in &cs {
        let mut cfg = ExperimentConfig { c, ..base.clone() };
        if cs.len() > 1 {
            cfg.out = cfg.out.as_deref().map(|p| out_for(p, c));
        }
        let reports = run_unimodular_experiment(&cfg)?;
        write_reports_csv(sink(cfg.out.as_deref())?, &reports)?;
        eprintln!("C = {c}");
        eprintln!("{:>3} {:>3} {:>10} {:>10} {:>10} {:>10} {:>9} {:>9}  ok", "n", "m", "average", "minimum", "maximum", "ideal", "dev", "3*wilson");
        for r in &reports {
            let mut pass = r.within(3.0);
            if a.paper_scale {
                pass &= r.spread() <= MAX_SPREAD;
            }
            ok &= pass;
            eprintln!(
                "{:>3} {:>3} {:>9.4}% {:>9.4}% {:>9.4}% {:>9.4}% {:>9.5} {:>9.5}  {}",
                r.n,
                r.m,
                100.0 * r.average,
                100.0 * r.minimum,
                100.0 * r.maximum,
                100.0 * r.ideal.midpoint(),
                r.deviation(),
                3.0 * r.wilson_radius,
                if pass { "yes" } else { "NO" }
            );
        }
    }
    Ok(outcome(ok))
}

fn coprime(a: CoprimeArgs) -> Result<Outcome> {
    let table = run_coprime_table(a.n_max)?;
    coprime_table_csv(sink(a.out.as_deref())?, &table)?;
    eprintln!("minimum p_N = {} ({:.6}) at N = {:?}", table.minimum, to_f64(&table.minimum), table.argmin);
    if let Some(row) = table.row(10) {
        eprintln!("p_10 = {}", row.p);
    }
    match table.claim_holds {
        Some(true) => eprintln!("p_N >= 13/22 on [1, {}] with equality only at N = 10: holds", a.n_max),
        Some(false) => eprintln!("p_N >= 13/22 on [1, {}] with equality only at N = 10: FAILS", a.n_max),
        None => eprintln!("minimum claim needs N_max >= 1000; not checked"),
    }
    Ok(outcome(table.claim_holds != Some(false)))
}

fn bounds(a: BoundsArgs) -> Result<Outcome> {
    if a.precision == 0 {
        bail!("precision must be at least 1");
    }
    let ctx = ZetaContext::new(a.precision);
    let rows = run_bounds_table(a.n_max, &ctx)?;
    bounds_table_csv(sink(a.out.as_deref())?, &rows)?;
    let floor = rat(92, 1000);
    let bad: Vec<u32> = rows
        .iter()
        .filter(|r| r.alpha.as_ref().is_some_and(|al: &Enclosure| !al.certainly_gt(&floor)))
        .map(|r| r.n)
        .collect();
    if bad.is_empty() {
        eprintln!("alpha_n > 0.092 for every n in 2..={}", a.n_max);
    } else {
        eprintln!("alpha_n not certified above 0.092 for n = {bad:?}");
    }
    Ok(outcome(bad.is_empty()))
}

fn lemma(a: LemmaArgs) -> Result<Outcome> {
    let instances = match &a.lattice {
        Some(p) => {
            let l = load_lattice(p)?;
            if a.b.is_empty() {
                bail!("--lattice needs at least one --b");
            }
            a.b.iter()
                .map(|s| {
                    let b = parse_rational(s).map_err(anyhow::Error::msg)?;
                    Ok((l.clone(), Window::new(b, l.dim())?))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => desk_lemma_instances(),
    };
    let report = run_lemma_verification(&instances)?;
    let mut w = csv_writer(a.out.as_deref())?;
    w.write_record(["instance", "n", "b", "det", "count", "nu_est", "nu_upper", "lower", "upper", "hyperplanes", "holds", "slack"])?;
    for (i, c) in report.checks.iter().enumerate() {
        w.write_record([
            i.to_string(),
            c.n.to_string(),
            c.b.to_string(),
            c.det.to_string(),
            c.count.to_string(),
            format!("{:.6}", to_f64(&c.nu_est)),
            format!("{:.6}", to_f64(&c.nu_upper)),
            c.lower.as_ref().map(|q| format!("{:.6}", to_f64(q))).unwrap_or_default(),
            format!("{:.6}", to_f64(&c.upper)),
            c.hyperplanes.len().to_string(),
            c.holds().to_string(),
            format!("{:.6}", c.slack()),
        ])?;
    }
    w.flush()?;
    let failed = report.checks.iter().filter(|c| !c.holds()).count();
    eprintln!("{} instances, {failed} violations", report.checks.len());
    Ok(outcome(failed == 0))
}

fn tv(a: TvArgs) -> Result<Outcome> {
    let instances: Vec<(LatticeBasis, Vec<Vec<_>>, _)> = match (&a.lattice, &a.sub, &a.b1) {
        (Some(l), Some(s), Some(b1)) => {
            let l = load_lattice(l)?;
            let sub = load_lattice(s)?.basis().columns();
            vec![(l, sub, parse_rational(b1).map_err(anyhow::Error::msg)?)]
        }
        _ => desk_tv_instances().into_iter().map(|i| (i.lattice, i.sub, i.b1)).collect(),
    };
    let mut w = csv_writer(a.out.as_deref())?;
    w.write_record(["instance", "n", "quotient", "b1", "points", "tv", "tv_decimal", "bound", "holds"])?;
    let mut ok = true;
    for (i, (l, sub, b1)) in instances.iter().enumerate() {
        let r = run_tv_check(l, sub, b1)?;
        ok &= r.holds;
        let quotient: Vec<String> = r.quotient.iter().map(|d| format!("Z/{d}")).collect();
        w.write_record([
            i.to_string(),
            r.n.to_string(),
            if quotient.is_empty() { "0".into() } else { quotient.join(" x ") },
            b1.to_string(),
            r.points.to_string(),
            r.tv.to_string(),
            format!("{:.8}", to_f64(&r.tv)),
            format!("{:.8}", to_f64(&r.bound)),
            r.holds.to_string(),
        ])?;
    }
    w.flush()?;
    eprintln!("{} instances, tv <= bound: {}", instances.len(), if ok { "all" } else { "NOT all" });
    Ok(outcome(ok))
}

fn fullrank(a: FullrankArgs) -> Result<Outcome> {
    let l = match &a.lattice {
        Some(p) => load_lattice(p)?,
        None => {
            if a.n == 0 {
                bail!("--n must be at least 1");
            }
            LatticeBasis::integer(a.n)
        }
    };
    let b = match &a.b {
        Some(s) => parse_rational(s).map_err(anyhow::Error::msg)?,
        None => fullrank_threshold(&l)?,
    };
    let mut rng = RngStream::new(a.common.seed.unwrap_or(0), FULLRANK_STREAM);
    let r = run_fullrank_check(&l, &b, a.trials, &mut rng, a.allow_below_threshold)?;
    let mut w = csv_writer(a.common.out.as_deref())?;
    w.write_record(["n", "b", "b_min", "in_hypothesis", "trials", "full_rank", "frequency", "wilson_radius", "holds"])?;
    w.write_record([
        r.n.to_string(),
        r.b.to_string(),
        format!("{:.6}", to_f64(&r.b_min)),
        r.in_hypothesis.to_string(),
        r.trials.to_string(),
        r.full_rank.to_string(),
        format!("{:.6}", r.frequency),
        format!("{:.6}", r.wilson_radius),
        r.holds.map(|h| h.to_string()).unwrap_or_default(),
    ])?;
    w.flush()?;
    eprintln!(
        "full rank in {}/{} trials ({:.4}); B = {}, threshold {:.4}{}",
        r.full_rank,
        r.trials,
        r.frequency,
        r.b,
        to_f64(&r.b_min),
        if r.in_hypothesis { "" } else { " (below threshold, not asserted)" }
    );
    Ok(outcome(r.holds != Some(false)))
}

fn csv_writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    Ok(csv::Writer::from_writer(sink(out)?))
}
