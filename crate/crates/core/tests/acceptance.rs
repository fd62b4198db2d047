//! Acceptance criteria: one line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use fks_core::catalog::{example, examples};
use fks_core::cxstruct::FieldMat;
use fks_core::exactla::{cokernel_invariants, smith_normal_form, IntMatrix};
use fks_core::extension::{abelian_subgroup, class_torsion, AbelianOutcome, ConditionStatus};
use fks_core::field::{Mat, QSqrt3};
use fks_core::manifold::fixed_points;
use fks_core::matgroup::DEFAULT_CLOSURE_CAP;
use fks_core::{build, BuildOptions, BuildOutcome, Condition, SolvmanifoldModel};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 20_241_014;
const CORPUS_SIZE: usize = 600;
const LOG_TOL: f64 = 1e-9;
const J_TOL: f64 = 1e-12;

type Verdict = Result<String, String>;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Verdict,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn accepted_catalog() -> Vec<(&'static str, SolvmanifoldModel)> {
    examples()
        .into_iter()
        .filter_map(
            |ex| match build(&ex.data, &BuildOptions::default()).unwrap() {
                BuildOutcome::Accepted(m) => Some((ex.name, *m)),
                BuildOutcome::Rejected(_) => None,
            },
        )
        .collect()
}

fn accepted_corpus() -> Vec<(String, SolvmanifoldModel)> {
    corpus(CORPUS_SEED, CORPUS_SIZE)
        .into_iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let out = build(&s.data(), &BuildOptions::default()).expect("corpus builds");
            out.model()
                .cloned()
                .map(|m| (format!("corpus #{i} {s:?}"), m))
        })
        .collect()
}

fn all_accepted() -> &'static [(String, SolvmanifoldModel)] {
    static MODELS: OnceLock<Vec<(String, SolvmanifoldModel)>> = OnceLock::new();
    MODELS.get_or_init(|| {
        accepted_catalog()
            .into_iter()
            .map(|(n, m)| (n.to_string(), m))
            .chain(accepted_corpus())
            .collect()
    })
}

fn catalog() -> Verdict {
    for ex in examples() {
        let out =
            build(&ex.data, &BuildOptions::default()).map_err(|e| format!("{}: {e}", ex.name))?;
        ensure(out.classification() == ex.expected, || {
            format!(
                "{}: got {:?}, expected {:?}",
                ex.name,
                out.classification(),
                ex.expected
            )
        })?;
        if let Some(m) = out.model() {
            ensure(m.checks.iter().all(|c| c.passed), || {
                format!("{}: internal checks", ex.name)
            })?;
        }
    }
    for name in ["KODAIRA", "HEIS"] {
        let out = build(&example(name).unwrap().data, &BuildOptions::default()).unwrap();
        let c = out.diagnostic().map(|d| d.condition);
        ensure(c == Some(Condition::D), || format!("{name}: reason {c:?}"))?;
    }
    let out = build(
        &example("DIAG-FAIL").unwrap().data,
        &BuildOptions::default(),
    )
    .unwrap();
    let d = out.diagnostic().ok_or("DIAG-FAIL accepted")?;
    ensure(d.condition == Condition::C, || {
        format!("DIAG-FAIL reason {}", d.condition)
    })?;
    ensure(d.conditions.b.status == ConditionStatus::Fail, || {
        "DIAG-FAIL (b) not failing".into()
    })?;
    Ok("5 accepted, KODAIRA/HEIS (d), DIAG-FAIL (c) with (b) failing".into())
}

/// `t ∈ Δ′` by the Hermite oracle on the returned base lattice.
fn base_membership(lattice: &IntMatrix) -> Hermite {
    let cols: Vec<Vec<i128>> = (0..lattice.cols())
        .map(|j| {
            lattice
                .column(j)
                .iter()
                .map(|x| x.to_i128().unwrap())
                .collect()
        })
        .collect();
    Hermite::new(2, &cols)
}

fn abelian_iff() -> Verdict {
    let samples = corpus(CORPUS_SEED, CORPUS_SIZE);
    let (mut found, mut absent_a, mut absent_d) = (0, 0, 0);
    for (i, s) in samples.iter().enumerate() {
        let data = s.data();
        let a_holds = order2(&s.a1).is_some() && order2(&s.a2).is_some();
        let d_holds = torsion_oracle(&s.a1, &s.a2, s.c, 24).is_some();
        let outcome =
            abelian_subgroup(&data, DEFAULT_CLOSURE_CAP).map_err(|e| format!("#{i}: {e}"))?;
        match &outcome {
            AbelianOutcome::Found(cert) => {
                found += 1;
                ensure(a_holds && d_holds, || {
                    format!("#{i} {s:?}: found but oracle says a={a_holds} d={d_holds}")
                })?;
                let order = image_order(&s.a1, &s.a2, 100).unwrap();
                ensure(cert.index == order, || {
                    format!("#{i}: index {} vs image order {order}", cert.index)
                })?;
                ensure(cert.verify(&data.group().unwrap()), || {
                    format!("#{i}: verify")
                })?;
                // exhaustive checks in the closed-form group law
                let g = s.group();
                let to_elem = |h: &fks_core::GroupElement| -> Elem {
                    (
                        [h.v[0].to_i64().unwrap(), h.v[1].to_i64().unwrap()],
                        [h.t[0], h.t[1]],
                    )
                };
                let mut gens: Vec<Elem> = vec![([1, 0], [0, 0]), ([0, 1], [0, 0])];
                gens.extend(cert.lifts.iter().map(to_elem));
                for (p, x) in gens.iter().enumerate() {
                    for y in &gens[p + 1..] {
                        let c = g.commutator(x, y);
                        ensure(c == ([0, 0], [0, 0]), || {
                            format!("#{i}: {x:?} and {y:?} do not commute")
                        })?;
                    }
                }
                let member = base_membership(&cert.base_lattice);
                let outer: Vec<Elem> = vec![
                    ([1, 0], [0, 0]),
                    ([0, 1], [0, 0]),
                    ([0, 0], [1, 0]),
                    ([0, 0], [0, 1]),
                ];
                for x in &outer {
                    for y in [*x, g.inv(x)] {
                        for h in &gens {
                            let conj = g.mul(&g.mul(&y, h), &g.inv(&y));
                            let t = [conj.1[0] as i128, conj.1[1] as i128];
                            ensure(member.contains(&t), || {
                                format!("#{i}: conjugate {conj:?} leaves Delta")
                            })?;
                        }
                    }
                }
            }
            AbelianOutcome::Absent { condition, .. } => {
                ensure(!(a_holds && d_holds), || {
                    format!("#{i} {s:?}: absent ({condition}) but (a) and (d) hold")
                })?;
                match condition {
                    Condition::A => {
                        absent_a += 1;
                        ensure(!a_holds, || {
                            format!("#{i}: reported (a) but action is finite")
                        })?;
                    }
                    Condition::D => {
                        absent_d += 1;
                        ensure(a_holds && !d_holds, || {
                            format!("#{i}: reported (d) wrongly")
                        })?;
                    }
                    other => return Err(format!("#{i}: unexpected condition {other}")),
                }
            }
        }
    }
    Ok(format!(
        "{} datasets: {found} with Delta, {absent_a} fail (a), {absent_d} fail (d)",
        samples.len()
    ))
}

fn torsion() -> Verdict {
    let mut checked = 0;
    for (i, s) in corpus(CORPUS_SEED, CORPUS_SIZE).iter().enumerate() {
        if order2(&s.a1).is_none() || order2(&s.a2).is_none() {
            continue;
        }
        checked += 1;
        let cert = class_torsion(&s.data()).map_err(|e| e.to_string())?;
        let oracle = torsion_oracle(&s.a1, &s.a2, s.c, 24);
        ensure(cert.torsion == oracle.is_some(), || {
            format!(
                "#{i} {s:?}: class_torsion {} vs oracle {oracle:?}",
                cert.torsion
            )
        })?;
        if let (Some(k), Some(bound)) = (oracle, cert.order_bound()) {
            ensure((&bound % BigInt::from(k)).is_zero(), || {
                format!("#{i}: minimal order {k} does not divide splitting denominator {bound}")
            })?;
        }
    }
    Ok(format!("{checked} finite-image datasets, 100% agreement"))
}

fn snf() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 4);
    let mut coset_checks = 0;
    for trial in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-9..=9)).collect();
        let sparse: Vec<i64> = entries
            .iter()
            .map(|&x| if rng.gen_bool(0.4) { 0 } else { x })
            .collect();
        let pick = if trial % 2 == 0 { entries } else { sparse };
        let a = IntMatrix::new(r, c, pick.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
        let res = smith_normal_form(&a);
        ensure(res.u.mul(&a).mul(&res.v) == res.d, || {
            format!("trial {trial}: UAV != D")
        })?;
        let unit = |m: &IntMatrix| m.det().magnitude() == &1u32.into();
        ensure(unit(&res.u) && unit(&res.v), || {
            format!("trial {trial}: U or V not unimodular")
        })?;
        let diag = res.diagonal();
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            ensure(ok, || {
                format!("trial {trial}: divisibility fails on {diag:?}")
            })?;
        }
        let m: IMat = (0..r)
            .map(|i| a.row(i).iter().map(|x| x.to_i128().unwrap()).collect())
            .collect();
        let oracle = invariant_factors(&m);
        let ours: Vec<i128> = diag
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| x.to_i128().unwrap())
            .collect();
        ensure(ours == oracle, || {
            format!("trial {trial}: {ours:?} vs determinantal {oracle:?}")
        })?;
        let coker = cokernel_invariants(&a);
        if coker.free_rank == 0 && coker.torsion_order() <= BigInt::from(1000) {
            coset_checks += 1;
            let count = coset_count(&m, 1000)
                .ok_or_else(|| format!("trial {trial}: brute force gave up"))?;
            ensure(BigInt::from(count) == coker.torsion_order(), || {
                format!(
                    "trial {trial}: {count} cosets vs order {}",
                    coker.torsion_order()
                )
            })?;
        }
    }
    Ok(format!(
        "1000 matrices, {coset_checks} cokernels matched by coset enumeration"
    ))
}

fn exact_of(m: &FieldMat) -> Option<&Mat<QSqrt3>> {
    match m {
        FieldMat::Exact(m) => Some(m),
        FieldMat::Approx(_) => None,
    }
}

fn geometry() -> Verdict {
    let models = accepted_catalog();
    for (name, m) in &models {
        let needed = [
            "embedding relations",
            "deck group acts freely",
            "metric positive definite",
        ];
        for n in needed {
            let c = m
                .checks
                .iter()
                .find(|c| c.name == n)
                .ok_or_else(|| format!("{name}: no check {n}"))?;
            ensure(c.passed, || format!("{name}: {n} failed"))?;
        }
        let lattice = &m.torus_quotient.lattice;
        for g in m
            .torus_quotient
            .deck_group
            .iter()
            .filter(|g| !g.is_identity())
        {
            let fp = fixed_points(g, lattice).map_err(|e| e.to_string())?;
            ensure(fp.is_empty(), || {
                format!("{name}: deck element {g:?} has fixed points")
            })?;
        }
        let (h, j) = (m.geometry.metric(), m.geometry.j());
        let (h, j) = match (exact_of(&h), exact_of(&j)) {
            (Some(h), Some(j)) => (h.clone(), j.clone()),
            _ => return Err(format!("{name}: geometry is not exact")),
        };
        let (f, b) = (m.data.fiber_rank(), m.data.base_rank());
        for (i, a) in m.data.actions().iter().enumerate() {
            let mut g: Mat<QSqrt3> = Mat::identity(f + b);
            g.set_block(0, 0, &a.to_field());
            ensure(g.transpose().mul(&h).mul(&g) == h, || {
                format!("{name}: metric not invariant under x{}", i + 1)
            })?;
        }
        ensure(j.transpose().mul(&h).mul(&j) == h, || {
            format!("{name}: J^T h J != h")
        })?;
        let minus = Mat::<QSqrt3>::identity(f + b).neg();
        let jj = j.mul(&j);
        ensure(jj == minus, || format!("{name}: J^2 != -I exactly"))?;
        ensure(jj.residual(&minus) <= J_TOL, || {
            format!("{name}: J^2 residual")
        })?;
    }
    Ok(format!(
        "{} accepted catalog models, all identities exact",
        models.len()
    ))
}

fn invariants() -> Verdict {
    let b1 = |name: &str| -> (usize, Vec<BigInt>) {
        let a = fks_core::extension::abelianization(&example(name).unwrap().data);
        (a.b1, a.torsion)
    };
    ensure(b1("TORUS").0 == 4, || {
        format!("b1(TORUS) = {}", b1("TORUS").0)
    })?;
    ensure(b1("HYPER2") == (2, vec![2.into()]), || {
        format!("HYPER2: {:?}", b1("HYPER2"))
    })?;
    ensure(b1("HYPER4") == (2, vec![]), || {
        format!("HYPER4: {:?}", b1("HYPER4"))
    })?;
    ensure(b1("KODAIRA").0 == 3, || {
        format!("b1(KODAIRA) = {}", b1("KODAIRA").0)
    })?;
    let models = all_accepted();
    for (name, m) in models {
        ensure(m.b1() % 2 == 0, || format!("{name}: odd b1 {}", m.b1()))?;
        ensure(m.b1() == m.canonical_fibration().base_rank, || {
            format!(
                "{name}: b1 {} vs base rank {}",
                m.b1(),
                m.canonical_fibration().base_rank
            )
        })?;
    }
    Ok(format!(
        "catalog values hold; {} accepted models with even b1 = base rank",
        models.len()
    ))
}

fn solvable_are_tori() -> Verdict {
    let models = all_accepted();
    let mut solvable = 0;
    for (name, m) in models {
        if m.completely_solvable() {
            solvable += 1;
            ensure(m.is_torus(), || {
                format!("{name}: completely solvable but not a torus")
            })?;
        }
    }
    Ok(format!(
        "{} accepted models, {solvable} completely solvable, all tori",
        models.len()
    ))
}

fn exp_log() -> Verdict {
    let models = all_accepted();
    let mut worst = (0.0f64, 0.0f64);
    for (name, m) in models {
        let logs = &m.real_extension.logs;
        for (i, a) in m.data.actions().iter().enumerate() {
            let e = expm_taylor(&logs[i]);
            let r = e.residual(&a.to_field::<f64>());
            worst.0 = worst.0.max(r);
            ensure(r <= LOG_TOL, || {
                format!("{name}: |exp(X{}) - A{}| = {r:e}", i + 1, i + 1)
            })?;
        }
        for i in 0..logs.len() {
            for j in i + 1..logs.len() {
                let r = logs[i].mul(&logs[j]).residual(&logs[j].mul(&logs[i]));
                worst.1 = worst.1.max(r);
                ensure(r <= LOG_TOL, || {
                    format!("{name}: [X{}, X{}] = {r:e}", i + 1, j + 1)
                })?;
            }
        }
    }
    Ok(format!(
        "{} models, max exp residual {:.1e}, max commutator {:.1e}",
        models.len(),
        worst.0,
        worst.1
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "catalog acceptance",
            budget: Some(Duration::from_secs(1)),
            run: catalog,
        },
        Criterion {
            id: 2,
            title: "abelian subgroup iff (a) and (d)",
            budget: Some(Duration::from_secs(30)),
            run: abelian_iff,
        },
        Criterion {
            id: 3,
            title: "torsion oracle",
            budget: None,
            run: torsion,
        },
        Criterion {
            id: 4,
            title: "Smith normal form",
            budget: None,
            run: snf,
        },
        Criterion {
            id: 5,
            title: "geometry",
            budget: None,
            run: geometry,
        },
        Criterion {
            id: 6,
            title: "invariant identities",
            budget: None,
            run: invariants,
        },
        Criterion {
            id: 7,
            title: "completely solvable implies torus",
            budget: None,
            run: solvable_are_tori,
        },
        Criterion {
            id: 8,
            title: "exp/log certificate",
            budget: None,
            run: exp_log,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let verdict = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match (verdict, c.budget) {
            (Ok(msg), Some(b)) if elapsed > b => {
                Err(format!("{msg}; over budget {:.1} s", b.as_secs_f64()))
            }
            (v, _) => v,
        };
        let (tag, msg) = match &verdict {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failures += 1;
                ("FAIL", m)
            }
        };
        println!(
            "criterion {} [{tag}] {}: {msg} ({:.2} s)",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
