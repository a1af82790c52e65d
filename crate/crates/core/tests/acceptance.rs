//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout;
//! the process exits nonzero if any criterion fails.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use psakit::cli::{cmd_classify, cmd_sample};
use psakit::corpus::{corpus, schmidt_variant};
use psakit::linalg::DensityMatrix;
use psakit::powers::{bases, generate_graph_from_bases, maximal_contexts, Basis};
use psakit::psa::{density_from_psa, psa_from_density, search_binary_valuation, ValuationSearch};
use psakit::relations::{classify, Classification};
use psakit::sampler::{empirical_verdict, run_experiment};
use psakit::scenario::presets::{random_density, random_unitary};
use psakit::scenario::StateSpec;
use psakit::{Error, Tolerances};

type Check = Result<String, String>;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: Error) -> String {
    format!("error[{}]: {err}", err.code())
}

fn criterion_1() -> Check {
    let c = corpus();
    let find = |name: &str| c.iter().find(|x| x.name == name).unwrap().spec.clone();
    let fair = classify(&find("fair_dice").build_joint(&tol()).map_err(e)?, &tol()).map_err(e)?;
    let glued = classify(&find("glued_dice").build_joint(&tol()).map_err(e)?, &tol()).map_err(e)?;
    ensure(fair.intensive.is_related(), "fair dice not intensively related")?;
    ensure(!fair.effective.is_related(), "fair dice effectively related")?;
    ensure(glued.effective.is_related(), "glued dice not effectively related")?;
    // every potentia is exactly 1/6 within 1e-9
    for psa in [&fair.psa_a, &fair.psa_b, &glued.psa_a, &glued.psa_b] {
        ensure(
            psa.potentia().iter().all(|p| (p - 1.0 / 6.0).abs() <= 1e-9),
            "die potentia differs from 1/6",
        )?;
    }
    Ok(format!(
        "fair: intensive={} effective={}; glued: effective={} ({})",
        fair.intensive.is_related(),
        fair.effective.is_related(),
        glued.effective.is_related(),
        glued.classification.as_str()
    ))
}

fn criterion_2() -> Check {
    let c = corpus();
    ensure(c.len() >= 20, format!("corpus has {} entries", c.len()))?;
    let mut counts = std::collections::BTreeMap::new();
    for entry in &c {
        let s = entry.spec.build_joint(&tol()).map_err(e)?;
        let v = classify(&s, &tol()).map_err(e)?;
        if v.effective.is_related() && !v.intensive.is_related() {
            return Err(format!("{}: effective without intensive", entry.name));
        }
        *counts.entry(v.classification.as_str()).or_insert(0usize) += 1;
    }
    ensure(
        counts.get("IntensiveOnly").copied().unwrap_or(0) >= 1,
        "no IntensiveOnly verdict",
    )?;
    ensure(!counts.contains_key("EffectiveOnlyAnomaly"), "anomaly verdict present")?;
    Ok(format!("{} scenarios, verdicts {counts:?}", c.len()))
}

fn tomographic_graph(d: usize) -> Vec<Basis> {
    bases::mutually_unbiased(d).expect("MUBs in d = 2, 3")
}

fn criterion_3() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..100u64 {
        let d = if k % 2 == 0 { 2 } else { 3 };
        let rho = random_density(d, 1000 + k, &tol()).map_err(e)?;
        let g = Arc::new(generate_graph_from_bases(&tomographic_graph(d), &tol()).map_err(e)?);
        let psa = psa_from_density(&rho, g, &tol()).map_err(e)?;
        let back = density_from_psa(&psa, d, &tol()).map_err(e)?;
        worst = worst.max(back.matrix().distance(rho.matrix()).map_err(e)?);
    }
    ensure(worst <= 1e-8, format!("max Frobenius error {worst:e}"))?;
    let zx = Arc::new(
        generate_graph_from_bases(&[bases::computational("z", 2), bases::qubit_x()], &tol()).map_err(e)?,
    );
    let psa = psa_from_density(&DensityMatrix::maximally_mixed(2), zx, &tol()).map_err(e)?;
    match density_from_psa(&psa, 2, &tol()) {
        Err(Error::NotTomographicallyComplete { .. }) => {}
        other => return Err(format!("rank-deficient graph gave {other:?}")),
    }
    Ok(format!("100 states, max Frobenius error {worst:.3e}; Z/X graph rejected"))
}

fn criterion_4() -> Check {
    let cab = generate_graph_from_bases(&bases::cabello_bases(), &tol()).map_err(e)?;
    let branches = match search_binary_valuation(&cab, &tol()).map_err(e)? {
        ValuationSearch::Nonexistent(c) => c.branches_explored,
        ValuationSearch::Found(_) => return Err("Cabello set admits a valuation".into()),
    };
    ensure(!common::brute_valuation_exists(&cab, &tol()), "exhaustive oracle finds a Cabello valuation")?;

    let mut single: Vec<Basis> = Vec::new();
    for d in 2..=6 {
        single.push(bases::computational("z", d));
        single.push(bases::fourier("f", d));
        single.push(
            bases::computational("u", d)
                .transformed(&random_unitary(d, 40 + d as u64))
                .map_err(e)?,
        );
    }
    single.push(bases::qubit_x());
    single.push(bases::qubit_y());
    for b in &single {
        let g = generate_graph_from_bases(std::slice::from_ref(b), &tol()).map_err(e)?;
        let found = search_binary_valuation(&g, &tol()).map_err(e)?;
        let ValuationSearch::Found(v) = &found else {
            return Err(format!("no valuation on single basis {} (d={})", b.name, b.dim()));
        };
        ensure(v.is_valid(), format!("invalid valuation on {}", b.name))?;
        ensure(common::brute_valuation_exists(&g, &tol()), "oracle disagrees")?;
    }
    // multi-basis graphs within 16 nodes, cross-checked against the oracle
    let multi: Vec<Vec<Basis>> = vec![
        vec![bases::computational("z", 2), bases::qubit_x(), bases::qubit_y()],
        bases::mutually_unbiased(3).unwrap(),
        bases::cabello_bases()[..4].to_vec(),
    ];
    for bs in &multi {
        let g = generate_graph_from_bases(bs, &tol()).map_err(e)?;
        let exists = search_binary_valuation(&g, &tol()).map_err(e)?.exists();
        ensure(
            exists == common::brute_valuation_exists(&g, &tol()),
            format!("search and oracle disagree on a {}-node graph", g.len()),
        )?;
    }
    Ok(format!(
        "Cabello: no valuation ({branches} branches); {} single-basis graphs valid; oracle agrees",
        single.len()
    ))
}

fn criterion_5() -> Check {
    let (mut checked, mut entangled_count) = (0, 0);
    for entry in corpus() {
        let Some(spec) = schmidt_variant(&entry.spec, &tol()).map_err(e)? else {
            continue;
        };
        let s = spec.build_joint(&tol()).map_err(e)?;
        let v = classify(&s, &tol()).map_err(e)?;
        let rank = v.baselines.schmidt_rank.ok_or(format!("{}: no Schmidt rank", entry.name))?;
        let ppt = v.baselines.ppt.ok_or(format!("{}: no PPT result", entry.name))?;
        let entangled = v.classification == Classification::Entangled;
        ensure(
            entangled == (rank >= 2 && !ppt.separable),
            format!(
                "{}: {} with schmidt_rank={rank}, ppt_separable={}",
                entry.name,
                v.classification.as_str(),
                ppt.separable
            ),
        )?;
        let is_product = matches!(entry.spec.state, Some(StateSpec::Product { .. } | StateSpec::Copies { .. }));
        ensure(!(is_product && entangled), format!("{}: product classified Entangled", entry.name))?;
        checked += 1;
        entangled_count += usize::from(entangled);
    }
    ensure(entangled_count >= 1 && entangled_count < checked, "cross-check is one-sided")?;
    ensure(checked >= 10, format!("only {checked} pure entries"))?;
    Ok(format!("{checked} pure-state entries ({entangled_count} Entangled) agree with Schmidt rank and PPT"))
}

fn criterion_6() -> Check {
    const SHOTS: u64 = 100_000;
    const SEED: u64 = 20_240_601;
    let mut n = 0;
    for entry in corpus() {
        let s = entry.spec.build_joint(&tol()).map_err(e)?;
        let exact = classify(&s, &tol()).map_err(e)?.effective.is_related();
        let run = run_experiment(&s, SHOTS, SEED, &tol()).map_err(e)?;
        let conv = empirical_verdict(&run, 0.01).map_err(e)?;
        ensure(
            conv.empirical_effective == exact,
            format!("{}: empirical {} vs exact {exact}", entry.name, conv.empirical_effective),
        )?;
        if entry.name == "bell_phi_plus" {
            let zz = &run.tallies[0];
            ensure(zz[0][1] == 0 && zz[1][0] == 0, format!("Φ+ ZZ off-diagonal tallies {zz:?}"))?;
            let sigma = (SHOTS as f64 * 0.25).sqrt();
            for count in [zz[0][0], zz[1][1]] {
                let dev = (count as f64 - SHOTS as f64 / 2.0).abs();
                ensure(dev <= 5.0 * sigma, format!("Φ+ ZZ diagonal count {count} outside 5σ"))?;
            }
        }
        n += 1;
    }
    Ok(format!("{n} scenarios at {SHOTS} shots agree; Φ+ ZZ off-diagonals zero"))
}

fn criterion_7() -> Check {
    for seed in 0..50u64 {
        let n = 4 + (seed as usize % 13);
        let p = [0.3, 0.5, 0.8][seed as usize % 3];
        let g = common::random_graph(n, p, seed);
        let fast: Vec<Vec<usize>> = maximal_contexts(&g, &tol())
            .map_err(e)?
            .into_iter()
            .map(|c| c.node_ids)
            .collect();
        let slow = common::brute_maximal_cliques(n, |i, j| g.adjacent(i, j));
        ensure(fast == slow, format!("clique mismatch on random graph seed {seed} (n = {n})"))?;
    }
    let cab = generate_graph_from_bases(&bases::cabello_bases(), &tol()).map_err(e)?;
    let ctx = maximal_contexts(&cab, &tol()).map_err(e)?;
    let size4 = ctx.iter().filter(|c| c.len() == 4).count();
    ensure(size4 == 9, format!("Cabello has {size4} maximal contexts of size 4"))?;
    ensure(
        ctx.iter().filter(|c| c.len() == 4).all(|c| c.resolves_identity),
        "a size-4 Cabello context fails to resolve the identity",
    )?;
    Ok(format!(
        "50 random graphs match; Cabello: 9 maximal contexts of size 4 ({} maximal cliques in total)",
        ctx.len()
    ))
}

fn criterion_8() -> Check {
    let c = corpus();
    let spec = &c.iter().find(|x| x.name == "werner_0.5").unwrap().spec;
    let a = cmd_sample(spec, &tol(), Some(50_000), Some(9), None, None).map_err(e)?.to_json();
    let b = cmd_sample(spec, &tol(), Some(50_000), Some(9), None, None).map_err(e)?.to_json();
    ensure(a == b, "in-process sample reports differ")?;
    let ca = cmd_classify(spec, &tol(), None).map_err(e)?.to_json();
    ensure(ca == cmd_classify(spec, &tol(), None).map_err(e)?.to_json(), "classify reports differ")?;

    // two consecutive runs of the binary
    let dir = tempfile::tempdir().map_err(|x| x.to_string())?;
    let file = dir.path().join("werner.json");
    std::fs::write(&file, serde_json::to_string(spec).unwrap()).map_err(|x| x.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_psakit"))
            .args(["sample", file.to_str().unwrap(), "--shots", "100000", "--seed", "42"])
            .output()
            .map_err(|x| x.to_string())
    };
    let (r1, r2) = (run()?, run()?);
    ensure(r1.status.success(), String::from_utf8_lossy(&r1.stderr).to_string())?;
    ensure(r1.stdout == r2.stdout, "binary reports differ between runs")?;
    Ok(format!("reports byte-identical ({} bytes)", r1.stdout.len()))
}

fn main() {
    type Criterion = (usize, fn() -> Check, Duration);
    let criteria: [Criterion; 8] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_secs(30)),
        (3, criterion_3, Duration::from_secs(10)),
        (4, criterion_4, Duration::from_secs(60)),
        (5, criterion_5, Duration::from_secs(10)),
        (6, criterion_6, Duration::from_secs(60)),
        (7, criterion_7, Duration::from_secs(30)),
        (8, criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (n, f, limit) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let line = match result {
            Ok(detail) if elapsed <= limit => format!("PASS criterion {n}: {detail} [{elapsed:.2?}]"),
            Ok(detail) => format!("FAIL criterion {n}: {detail}, but took {elapsed:.2?} (limit {limit:?})"),
            Err(msg) => format!("FAIL criterion {n}: {msg} [{elapsed:.2?}]"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
