use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{parse_list, Format, RunConfig};
use super::output::{write_json, write_table};
use super::Command;
use crate::gibbs::{
    convergence_study, elementary_measure, mixing_ratio_direct, CylinderMeasure, Estimate,
    GibbsModel, ProofConstants, StudyOptions,
};
use crate::io::{load_potential, load_subshift, Input};
use crate::potential::Potential;
use crate::symbolic::{build_sft, find_magic_word, specification_length, SoficPresentation};
use crate::{Budget, Error, Result};

/// Result of one command: written files, a summary line, and whether every
/// reported bracket is well formed.
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
    pub well_formed: bool,
}

/// Fully resolved inputs of a run.
struct Run {
    command: Command,
    cfg: RunConfig,
    presentation: SoficPresentation,
    subshift: Input,
    phi: Potential,
    potential: Option<Input>,
    budget: Budget,
    tol: f64,
    format: Format,
    out: PathBuf,
}

const DEFAULT_M: usize = 3;

impl Run {
    fn load(command: Command, cfg: RunConfig) -> Result<Self> {
        let path = cfg
            .subshift
            .clone()
            .ok_or_else(|| Error::Config("--subshift is required".into()))?;
        let (presentation, subshift) = load_subshift(&path)?;
        let (phi, potential) = match &cfg.potential {
            Some(p) => {
                let (phi, input) = load_potential(p, presentation.alphabet())?;
                (phi, Some(input))
            }
            None => (Potential::zero(presentation.alphabet().clone()), None),
        };
        Ok(Self {
            command,
            budget: cfg.budget()?,
            tol: cfg.tolerance()?,
            format: cfg.format.unwrap_or(Format::Csv),
            out: cfg.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            cfg,
            presentation,
            subshift,
            phi,
            potential,
        })
    }

    fn provenance(&self, extra: Value) -> Value {
        let file = |path: &Option<PathBuf>, input: Option<&Input>| match (path, input) {
            (Some(p), Some(i)) => json!({ "path": p.display().to_string(), "sha256": i.sha256 }),
            _ => Value::Null,
        };
        let mut v = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command.name(),
            "inputs": {
                "subshift": file(&self.cfg.subshift, Some(&self.subshift)),
                "potential": file(&self.cfg.potential, self.potential.as_ref()),
                "potential_id": self.phi.id(),
            },
            "budget": self.budget,
            "tolerance": self.tol,
        });
        if let (Value::Object(d), Value::Object(e)) = (&mut v, extra) {
            d.extend(e);
        }
        v
    }

    fn model(&self, m: usize) -> Result<GibbsModel> {
        GibbsModel::build_with(
            &self.presentation,
            &self.phi,
            m,
            self.cfg.n,
            &self.budget,
            self.tol,
        )
    }

    fn word(&self, text: &Option<String>, flag: &str) -> Result<Vec<u8>> {
        let t = text
            .as_ref()
            .ok_or_else(|| Error::Config(format!("--{flag} is required")))?;
        Ok(self.presentation.alphabet().parse_word(t)?.0)
    }
}

pub fn dispatch(command: Command, cfg: RunConfig) -> Result<Outcome> {
    let run = Run::load(command, cfg)?;
    match command {
        Command::Info => info(&run),
        Command::Pressure => pressure(&run),
        Command::Measure => measure(&run),
        Command::Entropy => entropy(&run),
        Command::Mixing => mixing(&run),
        Command::Converge => converge(&run),
    }
}

fn info(run: &Run) -> Result<Outcome> {
    let p = &run.presentation;
    let b = &run.budget;
    let magic = find_magic_word(p, b)?;
    let ell = specification_length(p, b)?;
    let constants = ProofConstants::compute(p, &run.phi, b)?;
    let report = json!({
        "alphabet": p.alphabet().names(),
        "alphabet_size": p.alphabet().len(),
        "vertices": p.num_vertices(),
        "edges": p.num_edges(),
        "magic_word": p.alphabet().render(&magic),
        "specification_length": ell,
        "potential": run.phi.derived_constants(),
        "potential_range": run.phi.range(),
        "proof_constants": constants,
    });
    let path = run.out.join("info.json");
    std::fs::create_dir_all(&run.out)?;
    write_json(
        &path,
        &json!({ "provenance": run.provenance(json!({})), "info": report }),
    )?;
    let summary = format!(
        "info: |A|={} vertices={} edges={} magic={} ell={} K0={:.6e} K1={:.6e} theta_FT={}",
        p.alphabet().len(),
        p.num_vertices(),
        p.num_edges(),
        p.alphabet().render(&magic),
        ell,
        constants.k0,
        constants.k1,
        constants
            .theta_ft
            .map_or("n/a".to_string(), |t| format!("{t:.6}")),
    );
    Ok(Outcome {
        files: vec![path],
        summary,
        well_formed: true,
    })
}

#[derive(Serialize)]
struct PressureRow {
    m: usize,
    n: usize,
    value: f64,
    lo: f64,
    hi: f64,
    radius: f64,
    rho: f64,
    tau: f64,
    dim: usize,
    iterations: usize,
}

fn pressure(run: &Run) -> Result<Outcome> {
    let ms = run.cfg.orders(&[DEFAULT_M])?;
    let models: Vec<GibbsModel> = ms
        .par_iter()
        .map(|&m| run.model(m))
        .collect::<Result<_>>()?;
    let mut files = Vec::new();
    let rows: Vec<PressureRow> = models
        .iter()
        .map(|md| {
            let p = md.pressure();
            PressureRow {
                m: md.m(),
                n: md.n(),
                value: p.value,
                lo: p.lo(),
                hi: p.hi(),
                radius: p.radius,
                rho: md.perron().rho,
                tau: md.perron().tau,
                dim: md.transfer().dim(),
                iterations: md.perron().iterations,
            }
        })
        .collect();
    if run.cfg.dump_matrix.unwrap_or(false) {
        std::fs::create_dir_all(&run.out)?;
        for md in &models {
            let path = run.out.join(format!("matrix_m{}_n{}.coo", md.m(), md.n()));
            let mut w = BufWriter::new(File::create(&path)?);
            md.transfer().dump_coo(run.presentation.alphabet(), &mut w)?;
            files.push(path);
        }
    }
    let prov = run.provenance(json!({ "m": ms, "n": run.cfg.n }));
    files.insert(
        0,
        write_table(&run.out, "pressure", run.format, &rows, &prov, json!({}))?,
    );
    let well_formed = rows.iter().all(|r| r.lo <= r.value && r.value <= r.hi);
    let summary = rows
        .iter()
        .map(|r| format!("P(m={}) = {:.12} ± {:.3e}", r.m, r.value, r.radius))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Outcome {
        files,
        summary: format!("pressure: {summary}"),
        well_formed,
    })
}

#[derive(Serialize)]
struct MeasureRow {
    word: String,
    length: usize,
    value: f64,
    radius: f64,
    lo: f64,
    hi: f64,
}

fn measure_rows(run: &Run, mu: &CylinderMeasure) -> Vec<MeasureRow> {
    let a = run.presentation.alphabet();
    (1..=mu.depth())
        .flat_map(|len| {
            mu.level(len)
                .into_iter()
                .flat_map(|l| l.iter())
                .map(move |(w, c)| {
                    let e = Estimate::multiplicative(c.value, c.log_radius);
                    MeasureRow {
                        word: a.render(w),
                        length: len,
                        value: c.value,
                        radius: c.log_radius,
                        lo: e.lo,
                        hi: e.hi,
                    }
                })
        })
        .collect()
}

fn measure(run: &Run) -> Result<Outcome> {
    let m = run.cfg.m.unwrap_or(DEFAULT_M);
    let (mu, n) = match run.cfg.p {
        Some(p) => {
            let sft = build_sft(&run.presentation, m, &run.budget)?;
            let mu = elementary_measure(&sft, p, &run.phi, &run.budget)?;
            let mu = match run.cfg.depth {
                Some(d) => mu.truncated(d)?,
                None => mu,
            };
            (mu, None)
        }
        None => {
            let model = run.model(m)?;
            let depth = run.cfg.depth.unwrap_or(model.n() + 1);
            (model.measure(depth, &run.budget)?, Some(model.n()))
        }
    };
    let rows = measure_rows(run, &mu);
    let prov = run.provenance(json!({
        "m": m,
        "n": n,
        "p": run.cfg.p,
        "depth": mu.depth(),
        "method": mu.provenance().method,
    }));
    let path = write_table(&run.out, "measures", run.format, &rows, &prov, json!({}))?;
    let well_formed = rows.iter().all(|r| r.lo <= r.value && r.value <= r.hi);
    let total = mu.total(mu.depth()).expect("top level");
    Ok(Outcome {
        files: vec![path],
        summary: format!(
            "measure: m={} depth={} method={} words={} max radius={:.3e} total={:.15} [{:.15}, {:.15}]",
            m,
            mu.depth(),
            mu.provenance().method,
            rows.len(),
            mu.max_radius(mu.depth()),
            total.value,
            total.lo,
            total.hi
        ),
        well_formed,
    })
}

#[derive(Serialize)]
struct EntropyRow {
    m: usize,
    n: usize,
    value: f64,
    lo: f64,
    hi: f64,
    radius: f64,
    block_depth: usize,
    block_average: f64,
    conditional: f64,
}

fn entropy(run: &Run) -> Result<Outcome> {
    let ms = run.cfg.orders(&[DEFAULT_M])?;
    let depth = run.cfg.depth.unwrap_or(12);
    let rows: Vec<EntropyRow> = ms
        .par_iter()
        .map(|&m| {
            let model = run.model(m)?;
            let r = model.entropy(depth, &run.budget)?;
            Ok(EntropyRow {
                m,
                n: model.n(),
                value: r.variational.value,
                lo: r.variational.lo,
                hi: r.variational.hi,
                radius: r.variational.radius(),
                block_depth: r.depth,
                block_average: r.block_average,
                conditional: r.conditional,
            })
        })
        .collect::<Result<_>>()?;
    let prov = run.provenance(json!({ "m": ms, "n": run.cfg.n, "depth": depth }));
    let path = write_table(&run.out, "entropy", run.format, &rows, &prov, json!({}))?;
    let well_formed = rows.iter().all(|r| r.lo <= r.value && r.value <= r.hi);
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "h(m={}) = {:.12} ± {:.3e} (block {:.12})",
                r.m, r.value, r.radius, r.conditional
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Outcome {
        files: vec![path],
        summary: format!("entropy: {summary}"),
        well_formed,
    })
}

#[derive(Serialize)]
struct MixingRow {
    a: String,
    b: String,
    s: usize,
    ratio_minus_1: f64,
    lo: f64,
    /// Certified upper end of `|ratio - 1|`.
    bound: f64,
    radius: f64,
    /// A-priori bound `Q_μ(√s) θ_μ^{√s}` when available.
    apriori: Option<f64>,
    method: &'static str,
}

fn mixing(run: &Run) -> Result<Outcome> {
    let m = run.cfg.m.unwrap_or(DEFAULT_M);
    let a = run.word(&run.cfg.a, "a")?;
    let b = run.word(&run.cfg.b, "b")?;
    let gaps = match &run.cfg.s {
        Some(s) => parse_list(s, "s")?,
        None => vec![a.len()],
    };
    let model = run.model(m)?;
    let constants = ProofConstants::compute(&run.presentation, &run.phi, &run.budget).ok();
    let alphabet = run.presentation.alphabet();
    let rows: Vec<MixingRow> = gaps
        .par_iter()
        .map(|&s| {
            let (est, method) = if s < a.len() {
                let e = mixing_ratio_direct(
                    model.transfer(),
                    &run.phi,
                    model.perron(),
                    &a,
                    &b,
                    s,
                    &run.budget,
                )?;
                (e, "direct")
            } else {
                (model.mixing_ratio(&a, &b, s)?, "markov")
            };
            Ok(MixingRow {
                a: alphabet.render(&a),
                b: alphabet.render(&b),
                s,
                ratio_minus_1: est.value,
                lo: est.lo,
                bound: est.hi,
                radius: est.radius(),
                apriori: constants.as_ref().and_then(|k| k.mixing_bound(s)),
                method,
            })
        })
        .collect::<Result<_>>()?;
    let mut methods: Vec<&str> = rows.iter().map(|r| r.method).collect();
    methods.sort_unstable();
    methods.dedup();
    let prov = run.provenance(json!({
        "m": m,
        "n": model.n(),
        "methods": methods,
    }));
    let path = write_table(&run.out, "mixing", run.format, &rows, &prov, json!({}))?;
    let well_formed = rows
        .iter()
        .all(|r| r.lo <= r.ratio_minus_1 && r.ratio_minus_1 <= r.bound);
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "s={}: |ratio-1| = {:.12} in [{:.12}, {:.12}] ({})",
                r.s, r.ratio_minus_1, r.lo, r.bound, r.method
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Outcome {
        files: vec![path],
        summary: format!("mixing a={} b={}: {summary}", alphabet.render(&a), alphabet.render(&b)),
        well_formed,
    })
}

#[derive(Serialize)]
struct ConvergenceRow {
    m: usize,
    n: usize,
    #[serde(rename = "D_lo")]
    d_lo: f64,
    #[serde(rename = "D_hi")]
    d_hi: f64,
    pressure_gap: f64,
    pressure_gap_lo: f64,
    pressure_gap_hi: f64,
    entropy_gap: f64,
    entropy_gap_lo: f64,
    entropy_gap_hi: f64,
    block_entropy_gap: f64,
    pressure: f64,
    pressure_radius: f64,
    fitted_rate: Option<f64>,
}

fn converge(run: &Run) -> Result<Outcome> {
    let ms = run.cfg.orders(&(1..=8).collect::<Vec<_>>())?;
    if run.cfg.n.is_some() {
        return Err(Error::Config(
            "converge uses the default transfer depth for every m; drop --n".into(),
        ));
    }
    let opts = StudyOptions {
        depth: run.cfg.depth.unwrap_or(8),
        block_depth: run.cfg.block_depth.unwrap_or(12),
        tol: run.tol,
    };
    let study = convergence_study(&run.presentation, &run.phi, &ms, &opts, &run.budget)?;
    let rate = study.pressure_fit.map(|f| f.rate);
    let rows: Vec<ConvergenceRow> = study
        .rows
        .iter()
        .map(|r| ConvergenceRow {
            m: r.m,
            n: r.n,
            d_lo: r.distance.lo,
            d_hi: r.distance.hi,
            pressure_gap: r.pressure_gap.value,
            pressure_gap_lo: r.pressure_gap.lo,
            pressure_gap_hi: r.pressure_gap.hi,
            entropy_gap: r.entropy_gap.value,
            entropy_gap_lo: r.entropy_gap.lo,
            entropy_gap_hi: r.entropy_gap.hi,
            block_entropy_gap: r.block_entropy_gap,
            pressure: r.pressure.value,
            pressure_radius: r.pressure.radius,
            fitted_rate: rate,
        })
        .collect();
    let prov = run.provenance(json!({ "m": ms, "options": opts }));
    let extra = json!({
        "pressure_fit": study.pressure_fit,
        "distance_fit": study.distance_fit,
        "theta_ft": study.theta_ft,
        "final_pressure": study.final_pressure,
        "limit": study.limit,
    });
    let path = write_table(&run.out, "convergence", run.format, &rows, &prov, extra)?;
    let well_formed = study.rows.iter().all(|r| {
        r.distance.is_well_formed()
            && r.pressure_gap.is_well_formed()
            && r.entropy_gap.is_well_formed()
    }) && study.limit.is_none_or(|l| l.is_well_formed());
    let fit = study.pressure_fit.map_or("fit: n/a".to_string(), |f| {
        format!("slope {:.6} rate {:.6} R² {:.4}", f.slope, f.rate, f.r_squared)
    });
    let limit = study.limit.map_or("n/a".to_string(), |l| {
        format!("[{:.12}, {:.12}]", l.lo, l.hi)
    });
    Ok(Outcome {
        files: vec![path],
        summary: format!(
            "converge: {} rows; pressure gaps {fit}; P(X) in {limit}",
            rows.len()
        ),
        well_formed,
    })
}
