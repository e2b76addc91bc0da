// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Run with `cargo test -p qea --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use qea::doe::{assemble_pva, main_effects, ExperimentResponse, OrthogonalArray, ResponseStat};
use qea::engine::{run, StopCriteria};
use qea::harness::evaluate_params;
use qea::params::{ParamPreset, ParamSpace, ParamVector, SpacePreset};
use qea::problems::{countsat_value, CountSat, KnapsackClass, KnapsackInstance, Mmdp, PPeaksInstance, Problem, CAPACITY_PRESETS};
use qea::qbit::Qbit;
use qea::seed::rng_from_seed;
use qea::tuner::{
    exploit_levels_initial, exploit_levels_next, explore_levels_around_pivot, explore_levels_initial, tune,
    Evaluator, PivotSource, QeaEvaluator, Stage, TunerConfig,
};
use qea::Sense;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(limit: Option<Duration>, t: Duration) -> bool {
    limit.map_or(true, |l| t < l)
}

fn unitarity() -> Outcome {
    let mut rng = rng_from_seed(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1_000_000 {
        let q = Qbit::from_angle(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        let r = q.rotate(rng.gen_range(-1.0..1.0));
        worst = worst.max((r.alpha * r.alpha + r.beta * r.beta - 1.0).abs());
    }
    let mut q = Qbit::EQUAL;
    for _ in 0..1_000_000 {
        q = q.rotate(rng.gen_range(-0.1..0.1));
    }
    let drift = (q.norm_sqr() - 1.0).abs();
    check(worst < 1e-12 && drift < 1e-9, format!("max single error {worst:.2e}, chained drift {drift:.2e}"))
}

fn measurement_law() -> Outcome {
    let mut rng = rng_from_seed(102);
    let mut details = Vec::new();
    let mut pass = true;
    for p0 in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let q = Qbit { alpha: f64::sqrt(p0), beta: f64::sqrt(1.0 - p0) };
        let zeros = (0..1_000_000).filter(|_| !q.observe(&mut rng)).count();
        let f = zeros as f64 / 1e6;
        let ok = if p0 == 0.0 || p0 == 1.0 { f == p0 } else { (f - p0).abs() <= 0.005 };
        pass &= ok;
        details.push(format!("{p0}->{f:.4}"));
    }
    check(pass, details.join(" "))
}

// Independent recomputation: s + n(n-1)(n-2) - 2(n-2)C(s,2) + 6C(s,3).
fn countsat_oracle(n: i128, s: i128) -> i128 {
    let c2 = s * (s - 1) / 2;
    let c3 = s * (s - 1) * (s - 2) / 6;
    s + n * (n - 1) * (n - 2) - 2 * (n - 2) * c2 + 6 * c3
}

fn countsat_closed_form() -> Outcome {
    let exact = countsat_value(20, 20) == 6860 && countsat_value(1000, 1000) == 997_003_000;
    let sizes: Vec<u64> = [20, 50].into_iter().chain((100..=1000).step_by(50)).collect();
    let mut unique = true;
    for &n in &sizes {
        let values: Vec<i128> = (0..=n).map(|s| countsat_value(n, s)).collect();
        let agree = (0..=n).all(|s| values[s as usize] == countsat_oracle(n as i128, s as i128));
        let top = values[n as usize];
        unique &= agree && values[..n as usize].iter().all(|v| *v < top);
    }
    check(exact && unique, format!("f(20,20)=6860, f(1000,1000)=997003000, unique maximizer at s=n for {} sizes", sizes.len()))
}

fn pair_counts_exact(oa: &OrthogonalArray) -> bool {
    let l = oa.levels();
    for j in 0..oa.columns() {
        for k in j + 1..oa.columns() {
            for a in 0..l[j] {
                for b in 0..l[k] {
                    let c = (0..oa.rows()).filter(|&r| oa.level(r, j) == a && oa.level(r, k) == b).count();
                    if c * l[j] * l[k] != oa.rows() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn oa_integrity() -> Outcome {
    let l27 = OrthogonalArray::l27();
    let l50 = OrthogonalArray::l50();
    let pass = l27.validate_strength2().is_valid()
        && l50.validate_strength2().is_valid()
        && pair_counts_exact(&l27)
        && pair_counts_exact(&l50);
    check(pass, "L27 (3 per level pair) and L50 (50/(Lj*Lk) per level pair) balanced")
}

fn taguchi_oracle() -> Outcome {
    let oa = OrthogonalArray::l27();
    let mut rng = rng_from_seed(105);
    let mut matched = 0;
    for _ in 0..20 {
        let coef: Vec<f64> = (0..11).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let values: Vec<Vec<f64>> = (0..11)
            .map(|_| {
                let mut v: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..10.0)).collect();
                v.sort_by(f64::total_cmp);
                v
            })
            .collect();
        let responses: Vec<ExperimentResponse> = (0..27)
            .map(|r| {
                let y = (0..11).map(|j| coef[j] * values[j][oa.level(r, j)]).sum();
                ExperimentResponse { row: r, response: y, per_run: vec![y] }
            })
            .collect();
        let fx = main_effects(&oa, &responses, Sense::Maximize).unwrap();
        let mut columns: Vec<Option<Vec<f64>>> = values.iter().cloned().map(Some).collect();
        columns.extend([None, None]);
        let pva = assemble_pva(&fx, &columns).unwrap();

        let mut best = (f64::NEG_INFINITY, Vec::new());
        for code in 0..177_147usize {
            let mut c = code;
            let mut pick = Vec::with_capacity(11);
            let mut score = 0.0;
            for j in 0..11 {
                let v = values[j][c % 3];
                c /= 3;
                score += coef[j] * v;
                pick.push(v);
            }
            if score > best.0 {
                best = (score, pick);
            }
        }
        matched += usize::from(pva == best.1);
    }
    check(matched == 20, format!("{matched}/20 coefficient draws match the 3^11 enumeration"))
}

fn mmdp_reproduction() -> Outcome {
    let p = Mmdp::new(20).unwrap();
    let (s, _) = evaluate_params(&p, &ParamPreset::MmdpTuned.vector(), StopCriteria::evaluations(50_000), 30, 6000).unwrap();
    check(
        s.success_pct >= 90.0,
        format!("K=20: success {:.1}% (need >= 90), mean {:.4}, avg NFE {:.0}", s.success_pct, s.mean, s.avg_evaluations),
    )
}

fn countsat_dominance() -> Outcome {
    // Desk-scale campaign on a small MMDP instance; the tuned vector is then
    // applied to COUNTSAT.
    let train = Mmdp::new(10).unwrap();
    let stop = StopCriteria::evaluations(10_000).with_optimum(train.known_optimum());
    let config = TunerConfig { runs: 10, stat: ResponseStat::Mean, ..Default::default() };
    let out = tune(&QeaEvaluator::new(&train, stop), &ParamSpace::preset(SpacePreset::Mmdp), &config, 7000).unwrap();
    let p = CountSat::new(150).unwrap();
    let cap = StopCriteria::evaluations(25_000);
    let (tuned, _) = evaluate_params(&p, &out.pivot, cap, 30, 7100).unwrap();
    let (untuned, _) = evaluate_params(&p, &ParamPreset::Untuned.vector(), cap, 30, 7100).unwrap();
    check(
        tuned.success_pct >= untuned.success_pct,
        format!(
            "n=150: tuned {:.1}% vs untuned {:.1}% success, mean {:.0} vs {:.0}{}",
            tuned.success_pct,
            untuned.success_pct,
            tuned.mean,
            untuned.mean,
            if tuned.success_pct == untuned.success_pct { " (tie)" } else { "" }
        ),
    )
}

fn knapsack_optimum(k: &KnapsackInstance) -> f64 {
    let (p, w, c) = (k.profits(), k.weights(), k.capacity());
    let n = k.len();
    let mut best: f64 = 0.0;
    for mask in 0u32..1 << n {
        let (mut pp, mut ww) = (0.0, 0.0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                pp += p[i];
                ww += w[i];
            }
        }
        if ww < c {
            best = best.max(pp);
        }
    }
    best
}

fn knapsack_equivalence() -> Outcome {
    let n = 18;
    let mut weak = Vec::new();
    let mut instances = 0;
    for (ci, class) in KnapsackClass::ALL.into_iter().enumerate() {
        for i in 0..10u64 {
            let frac = CAPACITY_PRESETS[i as usize % CAPACITY_PRESETS.len()];
            let k = KnapsackInstance::generate_seeded(class, n, frac, 8000 + 100 * ci as u64 + i).unwrap();
            let opt = knapsack_optimum(&k);
            let stop = StopCriteria::evaluations(100_000).with_optimum(Some(opt));
            let config = ParamPreset::KnapsackTuned.vector().engine_config(Sense::Maximize, stop).unwrap();
            let hits = (0..10).filter(|r| run(&k, &config, 9000 + r).unwrap().best.objective == opt).count();
            instances += 1;
            if hits < 8 {
                weak.push(format!("{}#{i}:{hits}/10", class.as_str()));
            }
        }
    }

    let k = KnapsackInstance::generate_seeded(KnapsackClass::StronglyCorrelated, n, 0.5, 8999).unwrap();
    let mut repair_ok = true;
    for mask in 0u32..1 << n {
        let mut bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        k.knapsack_repair(&mut bits);
        let once = bits.clone();
        k.knapsack_repair(&mut bits);
        let weight: f64 = (0..n).filter(|&i| once[i]).map(|i| k.weights()[i]).sum();
        repair_ok &= weight < k.capacity() && bits == once;
    }
    let detail = format!(
        "{}/{} instances at >= 8/10 optimum hits; repair feasible+idempotent on 2^18 patterns: {}{}",
        instances - weak.len(),
        instances,
        repair_ok,
        if weak.is_empty() { String::new() } else { format!("; below: {}", weak.join(" ")) }
    );
    check(weak.is_empty() && repair_ok, detail)
}

fn ppeaks_desk() -> Outcome {
    let inst = PPeaksInstance::generate_seeded(1, 64, 9100).unwrap();
    let (s, _) = evaluate_params(&inst, &ParamPreset::PPeaksTuned.vector(), StopCriteria::evaluations(20_000), 30, 9200).unwrap();
    check(
        s.success_pct >= 90.0,
        format!("P=1 N=64: success {:.1}% (need >= 90), avg NFE {:.0}", s.success_pct, s.avg_evaluations),
    )
}

fn cli(args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_qea"))
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    let mut ok = true;
    for out in ["a", "b"] {
        ok &= cli(&[
            "tune", "--problem", "mmdp:4", "--space", "mmdp", "--seed", "11", "--runs", "2", "--max-evals", "1500",
            "--n1", "2", "--n2", "1", "--out", &path(&format!("tune-{out}")),
        ]);
        ok &= cli(&[
            "compare", "--problem", "countsat:20", "--problem", "mmdp:5", "--set", "ucqea=untuned", "--set",
            "tcqea=mmdp-tuned", "--seed", "12", "--runs", "5", "--max-evals", "4000", "--out", &path(&format!("cmp-{out}")),
        ]);
    }
    let same = |f: &str| {
        let a = std::fs::read(path(&f.replace('@', "a")));
        let b = std::fs::read(path(&f.replace('@', "b")));
        matches!((a, b), (Ok(a), Ok(b)) if a == b && !a.is_empty())
    };
    let files = ["tune-@/history.csv", "tune-@/history.jsonl", "tune-@/params.toml", "cmp-@/summary.csv"];
    let identical = files.iter().all(|f| same(f));
    check(ok && identical, format!("commands succeeded: {ok}; {} output files byte-identical: {identical}", files.len()))
}

struct Noisy;

impl Evaluator for Noisy {
    fn sense(&self) -> Sense {
        Sense::Maximize
    }
    fn evaluate(&self, pv: &ParamVector, seed: u64) -> qea::Result<f64> {
        let mut rng = rng_from_seed(seed);
        Ok(pv.values[2] - pv.values[0] + rng.gen_range(0.0..0.2))
    }
}

struct Flat;

impl Evaluator for Flat {
    fn sense(&self) -> Sense {
        Sense::Maximize
    }
    fn evaluate(&self, _: &ParamVector, _: u64) -> qea::Result<f64> {
        Ok(0.0)
    }
}

fn tuner_contract() -> Outcome {
    let mut failures = Vec::new();
    let space = ParamSpace::preset(SpacePreset::Mmdp);

    let config = TunerConfig { runs: 2, ..Default::default() };
    let out = tune(&Noisy, &space, &config, 1100).unwrap();
    if !out.history.windows(2).all(|w| w[1].ofv_pivot >= w[0].ofv_pivot) {
        failures.push("OFV_PIVOT not monotone".to_string());
    }
    let count = |h: &[qea::tuner::HistoryRecord], s: Stage| h.iter().filter(|r| r.stage == s).count();
    let explore = count(&out.history, Stage::Exploration);
    let exploit = count(&out.history, Stage::Exploitation);
    // each stage stops at N or when stagnation reaches NWI
    for (stage, n, nwi, len) in [(Stage::Exploration, 3, 2, explore), (Stage::Exploitation, 3, 2, exploit)] {
        let recs: Vec<_> = out.history.iter().filter(|r| r.stage == stage).collect();
        let last = recs.last().unwrap();
        let stopped_right = len == n || last.stagnation == nwi;
        let not_early = recs[..len - 1].iter().all(|r| r.stagnation < nwi);
        if !(stopped_right && not_early && len <= n) {
            failures.push(format!("{} ran {len} iterations", stage.as_str()));
        }
    }
    let flat = tune(&Flat, &space, &TunerConfig { n1: 9, n2: 9, runs: 1, ..Default::default() }, 1101).unwrap();
    let sources: Vec<PivotSource> = flat.history.iter().map(|h| h.source).collect();
    if (count(&flat.history, Stage::Exploration), count(&flat.history, Stage::Exploitation)) != (3, 2)
        || sources[1..].iter().any(|s| *s != PivotSource::Kept)
    {
        failures.push(format!("flat response stage lengths {:?}", sources));
    }

    let mut rng = rng_from_seed(1102);
    let pivot = space.normalize(&ParamPreset::MmdpTuned.vector());
    let sets = [
        explore_levels_initial(&space, 5, &mut rng).unwrap(),
        explore_levels_around_pivot(&pivot, &space, 5, &mut rng).unwrap(),
        exploit_levels_initial(&pivot, &space, 3, &mut rng).unwrap(),
        exploit_levels_next(&pivot, &space.normalize(&ParamPreset::Untuned.vector()), true, 2, &space, 3, &mut rng).unwrap(),
    ];
    let in_bounds = sets.iter().flatten().zip(space.specs.iter().cycle()).all(|(levels, s)| levels.iter().all(|v| s.contains(*v)));
    if !in_bounds {
        failures.push("level outside bounds".into());
    }

    // Range [0, 1], pivot 0.5: iteration i draws lie in 0.5 ± 0.05/i.
    let mut unit = space.clone();
    for s in unit.specs.iter_mut().take(8) {
        s.upper = 1.0;
    }
    let half = unit.normalize(&ParamVector::new([0.5; 8], 50.0, 10.0, 100.0));
    for i in 1..=5usize {
        let (lo, hi) = (0.5 - 0.05 / i as f64, 0.5 + 0.05 / i as f64);
        let (mut seen_lo, mut seen_hi) = (0.5f64, 0.5f64);
        for seed in 0..400 {
            let l = if i == 1 {
                exploit_levels_initial(&half, &unit, 3, &mut rng_from_seed(seed)).unwrap()
            } else {
                exploit_levels_next(&half, &half, false, i, &unit, 3, &mut rng_from_seed(seed)).unwrap()
            };
            for v in l.iter().take(8).flatten() {
                seen_lo = seen_lo.min(*v);
                seen_hi = seen_hi.max(*v);
            }
        }
        // bounds respected and nearly filled
        let width = 0.05 / i as f64;
        if seen_lo < lo - 1e-15 || seen_hi > hi + 1e-15 || seen_lo > lo + 0.02 * width || seen_hi < hi - 0.02 * width {
            failures.push(format!("i={i}: observed [{seen_lo}, {seen_hi}] vs [{lo}, {hi}]"));
        }
    }
    let detail = if failures.is_empty() {
        format!("monotone; stages {explore}+{exploit} iterations; levels bounded; radius 0.1/i for i=1..5")
    } else {
        failures.join("; ")
    };
    check(failures.is_empty(), detail)
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 11] = [
        ("unitarity", Some(5), unitarity),
        ("measurement law", Some(5), measurement_law),
        ("countsat closed form", None, countsat_closed_form),
        ("orthogonal array integrity", None, oa_integrity),
        ("taguchi enumeration oracle", Some(10), taguchi_oracle),
        ("tuned mmdp reproduction", Some(120), mmdp_reproduction),
        ("tuned vs untuned countsat", Some(600), countsat_dominance),
        ("knapsack oracle equivalence", Some(1800), knapsack_equivalence),
        ("p-peaks desk scale", Some(60), ppeaks_desk),
        ("end-to-end determinism", None, determinism),
        ("tuner contract", None, tuner_contract),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = f();
        let t = start.elapsed();
        let limit = limit.map(Duration::from_secs);
        let pass = out.pass && within(limit, t);
        failed += usize::from(!pass);
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!(
            "{} criterion {:2} {}: {} [{:.2}s{}]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            name,
            out.detail,
            t.as_secs_f64(),
            budget
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
