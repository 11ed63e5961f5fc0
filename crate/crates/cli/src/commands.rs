use anyhow::{bail, Result};
use serde::Serialize;

use qrdecomp_core::bounds::{theorem1_lower, theorem1_upper};
use qrdecomp_core::charsum::{wan_holds, weil_holds};
use qrdecomp_core::parallel::with_workers;
use qrdecomp_core::search::write_range_csv;
use qrdecomp_core::sumset::ProfileDump;
use qrdecomp_core::{
    admissible_size_range, build_profile, certify, char_sum, check_holder, check_kappa_one,
    check_kappa_two, check_subset_residues, check_tau_bound, ck_empirical, horizontal_sweep,
    proposition_delta_bounds, random_pair_panel, residue_instance_panel, residue_set, search,
    shift_reduced_sum, theorem2_lower_bound, theorem3_bounds, verify_conjecture_range,
    verify_theorem2_step, BoundsCertificate, CharSumRecord, CkEstimate, DeltaBounds, FpSet, KTuple,
    LegendreTable, Mode, Prime, RangeRow, SearchConfig, SizeRange, Theorem2StepReport,
    Theorem3Bounds, Verdict,
};

use crate::output::{json, sink};
use crate::{Cli, Command, Common, Format};

const THETAS: [f64; 3] = [0.5, 1.0, 2.0];

/// Runs the command; `Ok(false)` means a check failed or a decomposition was found.
pub fn run(cli: &Cli) -> Result<bool> {
    let format = resolve_format(&cli.command, cli.common.format)?;
    let common = cli.common.clone();
    with_workers(common.workers, || dispatch(&cli.command, &common, format))
}

fn resolve_format(cmd: &Command, asked: Option<Format>) -> Result<Format> {
    let csv_ok = matches!(cmd, Command::Hist { .. } | Command::VerifyRange { .. });
    let default = if matches!(cmd, Command::VerifyRange { .. }) {
        Format::Csv
    } else {
        Format::Json
    };
    match asked.unwrap_or(default) {
        Format::Csv if !csv_ok => bail!("csv output is only available for hist and verify-range"),
        f => Ok(f),
    }
}

fn prime(n: u64) -> Result<Prime> {
    Ok(Prime::new(n)?)
}

fn set(p: Prime, xs: &[i64]) -> FpSet {
    FpSet::from_elems(p, xs.iter().copied())
}

fn mode(samples: Option<u64>, seed: u64) -> Mode {
    match samples {
        Some(n) => Mode::Sampled { n, seed },
        None => Mode::Exhaustive,
    }
}

#[derive(Serialize)]
struct CharsumOut {
    #[serde(flatten)]
    record: CharSumRecord,
    /// `sum_x chi(prod_{i >= 2} (1 + (a_i - a_1) x))`, distinct shifts only.
    shift_reduced: Option<i64>,
}

#[derive(Serialize)]
struct CkOut {
    #[serde(flatten)]
    estimate: CkEstimate,
    weil_ok: bool,
    wan_ok: Option<bool>,
}

#[derive(Serialize)]
struct NamedCheck {
    name: String,
    passed: bool,
}

#[derive(Serialize)]
struct SumsetOut {
    profile: ProfileDump,
    tau: f64,
    checks: Vec<NamedCheck>,
    residue_hypothesis: bool,
    conditional: Option<BoundsCertificate>,
    decomposes_residues: bool,
}

#[derive(Serialize)]
struct BoundsOut {
    p: u32,
    theorem1_lower: u32,
    theorem1_upper: u32,
    admissible: SizeRange,
    theorem2_lower_bound: f64,
    eta: f64,
    theorem3: Theorem3Bounds,
    delta: f64,
    delta_bounds: DeltaBounds,
}

#[derive(Serialize, Default)]
struct UnconditionalRow {
    p: u32,
    pairs: usize,
    failures: std::collections::BTreeMap<String, u64>,
}

#[derive(Serialize)]
struct ConditionalRow {
    p: u32,
    instances: usize,
    lemma_ab_bound_failures: u64,
    lemma_p_ab_failures: u64,
}

#[derive(Serialize)]
struct LemmasOut {
    seed: u64,
    unconditional: Vec<UnconditionalRow>,
    conditional: Vec<ConditionalRow>,
    theorem2_step: Option<Theorem2StepReport>,
    all_passed: bool,
}

fn dispatch(cmd: &Command, common: &Common, format: Format) -> Result<bool> {
    let out = common.output.as_deref();
    match cmd {
        Command::Charsum { p, tuple } => {
            let p = prime(*p)?;
            let table = LegendreTable::new(p);
            let t = KTuple::new(p, tuple)?;
            let record = char_sum(&t, &table);
            let shift_reduced = if t.is_distinct() {
                Some(shift_reduced_sum(&t, &table)?)
            } else {
                None
            };
            let ok = record.weil_ok != Some(false) && record.wan_ok != Some(false);
            json(
                &CharsumOut {
                    record,
                    shift_reduced,
                },
                out,
            )?;
            Ok(ok)
        }
        Command::Ck {
            p,
            k,
            samples,
            budget,
        } => {
            let p = prime(*p)?;
            let table = LegendreTable::new(p);
            let estimate = ck_empirical(*k, &table, mode(*samples, common.seed), *budget)?;
            let weil_ok = weil_holds(estimate.max_value, *k, p);
            let wan_ok = (k % 2 == 0).then(|| wan_holds(estimate.max_value, *k, p));
            let ok = weil_ok && wan_ok != Some(false);
            json(
                &CkOut {
                    estimate,
                    weil_ok,
                    wan_ok,
                },
                out,
            )?;
            Ok(ok)
        }
        Command::Hist {
            p,
            k,
            bins,
            samples,
            budget,
        } => {
            let p = prime(*p)?;
            let table = LegendreTable::new(p);
            let h = qrdecomp_core::vertical_histogram(
                *k,
                &table,
                *bins,
                mode(*samples, common.seed),
                *budget,
            )?;
            match format {
                Format::Csv => {
                    let mut w = sink(out)?;
                    h.write_csv(&mut w)?;
                    w.flush()?;
                }
                Format::Json => json(&h, out)?,
            }
            Ok(true)
        }
        Command::Sweep {
            tuple,
            from,
            to,
            bins,
        } => {
            json(&horizontal_sweep(tuple, *from, *to, *bins)?, out)?;
            Ok(true)
        }
        Command::Sumset { p, a, b } => {
            let p = prime(*p)?;
            let (a, b) = (set(p, a), set(p, b));
            let prof = build_profile(&a, &b)?;
            let mut checks = Vec::new();
            for t in THETAS {
                checks.push(NamedCheck {
                    name: format!("holder[{t}]"),
                    passed: check_holder(&prof, t),
                });
                checks.push(NamedCheck {
                    name: format!("kappa_one[{t}]"),
                    passed: check_kappa_one(&prof, t),
                });
            }
            checks.push(NamedCheck {
                name: "kappa_two".into(),
                passed: check_kappa_two(&prof),
            });
            checks.push(NamedCheck {
                name: "tau_bound".into(),
                passed: check_tau_bound(&prof),
            });
            checks.push(NamedCheck {
                name: "chain".into(),
                passed: prof.chain_holds(),
            });
            let hyp = check_subset_residues(&a, &b)?;
            let conditional = if hyp { Some(certify(&a, &b)?) } else { None };
            let decomposes = prof.support == residue_set(p);
            let ok = checks.iter().all(|c| c.passed)
                && conditional.as_ref().is_none_or(|c| c.all_passed)
                && !(decomposes && a.len() >= 2 && b.len() >= 2);
            let body = SumsetOut {
                profile: prof.dump(),
                tau: prof.tau(),
                checks,
                residue_hypothesis: hyp,
                conditional,
                decomposes_residues: decomposes,
            };
            json(&body, out)?;
            Ok(ok)
        }
        Command::Bounds { p, eta, delta } => {
            let p = prime(*p)?;
            let body = BoundsOut {
                p: p.get(),
                theorem1_lower: theorem1_lower(p),
                theorem1_upper: theorem1_upper(p),
                admissible: admissible_size_range(p),
                theorem2_lower_bound: theorem2_lower_bound(p),
                eta: *eta,
                theorem3: theorem3_bounds(*eta, p)?,
                delta: *delta,
                delta_bounds: proposition_delta_bounds(*delta, p)?,
            };
            json(&body, out)?;
            Ok(true)
        }
        Command::Search {
            p,
            min_a,
            min_b,
            no_theorem1,
            no_lemma5,
            symmetric,
            dilation,
            node_limit,
        } => {
            let cfg = SearchConfig {
                symmetric_only: *symmetric,
                use_multiplicative_symmetry: *dilation,
                node_limit: *node_limit,
                worker_count: common.workers,
                ..SearchConfig::new(prime(*p)?)
                    .with_min_sizes(*min_a, *min_b)
                    .with_pruning(!no_theorem1, !no_lemma5)
            };
            let report = search(&cfg)?;
            let surprise = report.found() && *min_a >= 2 && *min_b >= 2;
            if surprise {
                for d in &report.decompositions_found {
                    eprintln!("FOUND p={} A={:?} B={:?}", p, d.a, d.b);
                }
            }
            json(&report, out)?;
            Ok(!surprise)
        }
        Command::VerifyRange {
            from,
            to,
            no_theorem1,
            no_lemma5,
            dilation,
            node_limit,
            timing,
        } => {
            let template = SearchConfig {
                use_multiplicative_symmetry: *dilation,
                node_limit: *node_limit,
                worker_count: common.workers,
                ..SearchConfig::new(prime(3)?).with_pruning(!no_theorem1, !no_lemma5)
            };
            let rows = verify_conjecture_range(*from, *to, &template)?;
            for r in rows.iter().filter(|r| r.verdict == Verdict::Found) {
                let w = r.witness.as_ref().expect("FOUND rows carry a witness");
                eprintln!("FOUND p={} A={:?} B={:?}", r.p, w.a, w.b);
            }
            match format {
                Format::Csv => {
                    let mut w = sink(out)?;
                    write_range_csv(&rows, *timing, &mut w)?;
                    w.flush()?;
                }
                Format::Json => json(&range_json(&rows, *timing), out)?,
            }
            Ok(rows.iter().all(|r| r.verdict != Verdict::Found))
        }
        Command::VerifyLemmas {
            primes,
            pairs,
            residue_primes,
            instances,
            step_max,
        } => {
            let mut unconditional = Vec::new();
            for &n in primes {
                let p = prime(n)?;
                let mut row = UnconditionalRow {
                    p: p.get(),
                    pairs: *pairs,
                    ..Default::default()
                };
                let mut fail = |name: String, ok: bool| {
                    *row.failures.entry(name).or_insert(0) += u64::from(!ok);
                };
                for (a, b) in random_pair_panel(p, *pairs, common.seed) {
                    let prof = build_profile(&a, &b)?;
                    for t in THETAS {
                        fail(format!("holder[{t}]"), check_holder(&prof, t));
                        fail(format!("kappa_one[{t}]"), check_kappa_one(&prof, t));
                    }
                    fail("kappa_two".into(), check_kappa_two(&prof));
                    fail("tau_bound".into(), check_tau_bound(&prof));
                }
                unconditional.push(row);
            }
            let mut conditional = Vec::new();
            for &n in residue_primes {
                let p = prime(n)?;
                let mut row = ConditionalRow {
                    p: p.get(),
                    instances: *instances,
                    lemma_ab_bound_failures: 0,
                    lemma_p_ab_failures: 0,
                };
                for (a, b) in residue_instance_panel(p, *instances, common.seed)? {
                    let cert = certify(&a, &b)?;
                    row.lemma_ab_bound_failures += u64::from(!cert.checks[0].passed);
                    row.lemma_p_ab_failures += u64::from(!cert.checks[1].passed);
                }
                conditional.push(row);
            }
            let theorem2_step = if *step_max >= 37 {
                Some(verify_theorem2_step(*step_max)?)
            } else {
                None
            };
            let all_passed = unconditional
                .iter()
                .all(|r| r.failures.values().all(|&v| v == 0))
                && conditional
                    .iter()
                    .all(|r| r.lemma_ab_bound_failures == 0 && r.lemma_p_ab_failures == 0)
                && theorem2_step.as_ref().is_none_or(|s| s.verdict);
            json(
                &LemmasOut {
                    seed: common.seed,
                    unconditional,
                    conditional,
                    theorem2_step,
                    all_passed,
                },
                out,
            )?;
            Ok(all_passed)
        }
    }
}

#[derive(Serialize)]
struct RangeJsonRow<'a> {
    p: u32,
    verdict: Verdict,
    nodes: u64,
    seconds: Option<f64>,
    witness: Option<&'a qrdecomp_core::Decomposition>,
    report: &'a qrdecomp_core::SearchReport,
}

fn range_json(rows: &[RangeRow], timing: bool) -> Vec<RangeJsonRow<'_>> {
    rows.iter()
        .map(|r| RangeJsonRow {
            p: r.p,
            verdict: r.verdict,
            nodes: r.nodes,
            seconds: timing.then_some(r.seconds),
            witness: r.witness.as_ref(),
            report: &r.report,
        })
        .collect()
}
